//! Kamada–Kawai stress minimization.
//!
//! Minimizes `E = Σ_{i<j} k_ij (|p_i − p_j| − l_ij)² / 2` one node at a time:
//! the node with the largest gradient norm is moved by 2-D Newton–Raphson
//! until its own gradient drops below `epsilon`, then the next worst node is
//! picked. A move is only accepted if it does not raise the energy, so the
//! energy sequence is non-increasing.

use crate::error::Result;
use crate::layout::LayoutGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutParams {
    /// Unit edge length `L`. `None` maps the graph diameter to 1.
    pub unit_length: Option<f64>,
    /// Spring constant `K`.
    pub strength: f64,
    /// Stop once every node's gradient norm is below this.
    pub epsilon: f64,
    /// Budget of node moves. `None` means `100 · |nodes|`.
    pub max_moves: Option<usize>,
    /// Newton sub-iterations per node move.
    pub newton_iters: usize,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            unit_length: None,
            strength: 1.0,
            epsilon: 1e-4,
            max_moves: None,
            newton_iters: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutReport {
    pub energy: f64,
    pub max_gradient: f64,
    pub moves: usize,
    pub converged: bool,
    /// Set when the worst node could not lower the energy at all.
    pub stalled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    /// Node `node` moved; energy went from `before` to `after`.
    Moved { node: usize, before: f64, after: f64 },
    Converged,
    Stalled { node: usize },
}

/// Total stress energy of `positions` for the given length and strength
/// matrices.
pub fn stress_energy(positions: &[[f64; 2]], lengths: &[Vec<f64>], strengths: &[Vec<f64>]) -> f64 {
    let mut e = 0.0;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let d = (positions[i][0] - positions[j][0]).hypot(positions[i][1] - positions[j][1]);
            let r = d - lengths[i][j];
            e += strengths[i][j] * r * r / 2.0;
        }
    }
    e
}

/// Separation below which two nodes count as coincident.
const MIN_DIST: f64 = 1e-9;

/// Solver state for one layout. Exposed so callers can observe each move.
#[derive(Debug, Clone)]
pub struct KamadaKawai {
    pos: Vec<[f64; 2]>,
    len: Vec<Vec<f64>>,
    k: Vec<Vec<f64>>,
    epsilon: f64,
    newton_iters: usize,
    moves: usize,
    max_moves: usize,
}

impl KamadaKawai {
    pub fn new(graph: &LayoutGraph, params: &LayoutParams) -> Result<Self> {
        let n = graph.nodes.len();
        let hops = graph.hop_distances()?;
        let diameter = hops.iter().flatten().copied().max().unwrap_or(0);
        let unit = params
            .unit_length
            .unwrap_or(if diameter == 0 { 1.0 } else { 1.0 / f64::from(diameter) });
        let len = LayoutGraph::desired_lengths(&hops, unit);
        let k = LayoutGraph::spring_strengths(&hops, params.strength);

        let pos = if graph.has_positions() {
            let mut p: Vec<[f64; 2]> = graph.nodes.iter().map(|n| n.position.unwrap()).collect();
            separate_coincident(&mut p, unit);
            p
        } else {
            // Circle in id order, sized so the diameter spans L · max d.
            let radius = unit * f64::from(diameter.max(1)) / 2.0;
            (0..n)
                .map(|i| {
                    if n == 1 {
                        return [0.0, 0.0];
                    }
                    let t = std::f64::consts::TAU * i as f64 / n as f64;
                    [radius * t.cos(), radius * t.sin()]
                })
                .collect()
        };

        Ok(KamadaKawai {
            pos,
            len,
            k,
            epsilon: params.epsilon,
            newton_iters: params.newton_iters.max(1),
            moves: 0,
            max_moves: params.max_moves.unwrap_or(100 * n),
        })
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.pos
    }

    pub fn lengths(&self) -> &[Vec<f64>] {
        &self.len
    }

    pub fn strengths(&self) -> &[Vec<f64>] {
        &self.k
    }

    pub fn energy(&self) -> f64 {
        stress_energy(&self.pos, &self.len, &self.k)
    }

    pub fn moves(&self) -> usize {
        self.moves
    }

    fn delta(&self, m: usize, p: [f64; 2], i: usize) -> (f64, f64, f64) {
        let mut dx = p[0] - self.pos[i][0];
        let mut dy = p[1] - self.pos[i][1];
        let mut d = dx.hypot(dy);
        if d < MIN_DIST {
            // Deterministic direction per pair so coincident nodes separate.
            let t = (m * 31 + i * 17) as f64;
            dx = MIN_DIST * t.cos();
            dy = MIN_DIST * t.sin();
            d = MIN_DIST;
        }
        (dx, dy, d)
    }

    /// Energy terms involving node `m` placed at `p`.
    fn local_energy(&self, m: usize, p: [f64; 2]) -> f64 {
        let mut e = 0.0;
        for i in 0..self.pos.len() {
            if i != m {
                let d = (p[0] - self.pos[i][0]).hypot(p[1] - self.pos[i][1]);
                let r = d - self.len[m][i];
                e += self.k[m][i] * r * r / 2.0;
            }
        }
        e
    }

    /// Gradient and Hessian of the energy with respect to node `m` at `p`.
    fn derivatives(&self, m: usize, p: [f64; 2]) -> ([f64; 2], [f64; 3]) {
        let (mut gx, mut gy, mut hxx, mut hxy, mut hyy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..self.pos.len() {
            if i == m {
                continue;
            }
            let (dx, dy, d) = self.delta(m, p, i);
            let k = self.k[m][i];
            let l = self.len[m][i];
            gx += k * (dx - l * dx / d);
            gy += k * (dy - l * dy / d);
            let d3 = d * d * d;
            hxx += k * (1.0 - l * dy * dy / d3);
            hxy += k * l * dx * dy / d3;
            hyy += k * (1.0 - l * dx * dx / d3);
        }
        ([gx, gy], [hxx, hxy, hyy])
    }

    pub fn gradient_norm(&self, m: usize) -> f64 {
        let (g, _) = self.derivatives(m, self.pos[m]);
        g[0].hypot(g[1])
    }

    /// Node with the largest gradient norm (lowest index on ties).
    pub fn worst_node(&self) -> Option<(usize, f64)> {
        (0..self.pos.len())
            .map(|m| (m, self.gradient_norm(m)))
            .fold(None, |best, cur| match best {
                Some((_, g)) if g >= cur.1 => best,
                _ => Some(cur),
            })
    }

    /// One Newton sub-iteration for node `m`. Returns whether it moved.
    fn newton_substep(&mut self, m: usize) -> bool {
        let p = self.pos[m];
        let (g, [hxx, hxy, hyy]) = self.derivatives(m, p);
        let before = self.local_energy(m, p);

        let det = hxx * hyy - hxy * hxy;
        let mut candidates: Vec<[f64; 2]> = Vec::with_capacity(2);
        if det.abs() > f64::EPSILON * (hxx.abs() + hyy.abs()).powi(2) && det.is_finite() {
            candidates.push([(-g[0] * hyy + g[1] * hxy) / det, (g[0] * hxy - g[1] * hxx) / det]);
        }
        // Gradient descent scaled by the diagonal curvature bound Σ k_mi.
        let scale: f64 = self.k[m].iter().sum::<f64>().max(f64::MIN_POSITIVE);
        candidates.push([-g[0] / scale, -g[1] / scale]);

        for step in candidates {
            let mut s = step;
            for _ in 0..40 {
                let trial = [p[0] + s[0], p[1] + s[1]];
                if trial[0].is_finite() && trial[1].is_finite() {
                    let after = self.local_energy(m, trial);
                    if after < before {
                        self.pos[m] = trial;
                        return true;
                    }
                }
                s = [s[0] / 2.0, s[1] / 2.0];
            }
        }
        false
    }

    /// Picks the worst node and moves it until its gradient is below
    /// epsilon or the sub-iteration cap is hit.
    pub fn step(&mut self) -> StepOutcome {
        let Some((m, g)) = self.worst_node() else {
            return StepOutcome::Converged;
        };
        if g < self.epsilon {
            return StepOutcome::Converged;
        }
        let before = self.energy();
        let mut moved = false;
        for _ in 0..self.newton_iters {
            if !self.newton_substep(m) {
                break;
            }
            moved = true;
            if self.gradient_norm(m) < self.epsilon {
                break;
            }
        }
        if !moved {
            return StepOutcome::Stalled { node: m };
        }
        self.moves += 1;
        StepOutcome::Moved {
            node: m,
            before,
            after: self.energy(),
        }
    }

    /// Runs until convergence, stall, or the move budget is spent.
    pub fn run(&mut self) -> LayoutReport {
        let mut stalled = false;
        let mut converged = false;
        while self.moves < self.max_moves {
            match self.step() {
                StepOutcome::Moved { .. } => {}
                StepOutcome::Converged => {
                    converged = true;
                    break;
                }
                StepOutcome::Stalled { .. } => {
                    stalled = true;
                    break;
                }
            }
        }
        let max_gradient = self.worst_node().map_or(0.0, |(_, g)| g);
        LayoutReport {
            energy: self.energy(),
            max_gradient,
            moves: self.moves,
            converged: converged || max_gradient < self.epsilon,
            stalled,
        }
    }
}

/// Nudges nodes sharing a position apart along deterministic directions.
fn separate_coincident(pos: &mut [[f64; 2]], unit: f64) {
    let nudge = unit.abs().max(1e-6) * 1e-3;
    for i in 1..pos.len() {
        for j in 0..i {
            if (pos[i][0] - pos[j][0]).hypot(pos[i][1] - pos[j][1]) < MIN_DIST {
                let t = i as f64 * 2.399_963_229_728_653; // golden angle
                pos[i] = [pos[i][0] + nudge * t.cos(), pos[i][1] + nudge * t.sin()];
            }
        }
    }
}

/// Lays out `graph`, returning a copy with every node position set.
pub fn kamada_kawai_layout(graph: &LayoutGraph, params: &LayoutParams) -> Result<(LayoutGraph, LayoutReport)> {
    let mut solver = KamadaKawai::new(graph, params)?;
    let report = solver.run();
    let mut out = graph.clone();
    for (node, p) in out.nodes.iter_mut().zip(solver.positions()) {
        node.position = Some(*p);
    }
    Ok((out, report))
}
