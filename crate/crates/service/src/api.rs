//! Read-only HTTP API over a swappable snapshot. Handlers are thin wrappers
//! around the pure query functions, which tests call directly.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::NaiveDate;

use relmap::layout::{kamada_kawai_layout, neighborhood_graph, LayoutParams};
use relmap::linker::{ranked, top_titles, vip_list, RankMode};
use relmap::{EntityId, Snapshot};

use crate::views::{
    latest_clusters, name_of, EntitySummary, GraphView, LayoutInfo, PartnerList, PersonPageView, SearchHit,
    VipEntry, VipView,
};

pub const DEFAULT_N: usize = 10;
pub const MAX_N: usize = 1000;
const PAGE_CLUSTERS: usize = 20;
const PAGE_TITLES: usize = 10;
const SEARCH_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiError {
    NotFound(String),
    BadRequest(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
        };
        (status, Json(serde_json::json!({ "error": message }))).into_response()
    }
}

pub type ApiResult<T> = Result<T, ApiError>;

/// Shared handle to the current snapshot. Each request clones the `Arc`
/// once, so a swap never mixes two snapshots within one response.
#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Snapshot>>>,
}

impl AppState {
    pub fn new(snapshot: Snapshot) -> Self {
        AppState {
            current: Arc::new(RwLock::new(Arc::new(snapshot))),
        }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn swap(&self, next: Snapshot) {
        *self.current.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(next);
    }
}

pub fn parse_id(raw: &str) -> ApiResult<EntityId> {
    raw.parse()
        .map_err(|_| ApiError::BadRequest(format!("entity id must be a non-negative integer, got {raw:?}")))
}

fn known(snap: &Snapshot, id: EntityId) -> ApiResult<()> {
    if snap.catalog.get(id).is_some() && snap.index.contains(id) {
        Ok(())
    } else {
        Err(ApiError::NotFound(format!("no entity {id}")))
    }
}

/// Parses an optional count parameter in `1..=MAX_N`.
pub fn parse_count(params: &HashMap<String, String>, key: &str, default: usize) -> ApiResult<usize> {
    let Some(raw) = params.get(key) else {
        return Ok(default);
    };
    match raw.parse::<usize>() {
        Ok(n) if (1..=MAX_N).contains(&n) => Ok(n),
        _ => Err(ApiError::BadRequest(format!("{key} must be an integer in 1..={MAX_N}, got {raw:?}"))),
    }
}

pub fn person_page(snap: &Snapshot, id: EntityId) -> ApiResult<PersonPageView> {
    known(snap, id)?;
    let entity = snap.catalog.get(id).expect("checked above");
    let list = |mode| {
        ranked(&snap.index, id, DEFAULT_N, mode)
            .map(|l| PartnerList::of(l, &snap.catalog))
            .map_err(|e| ApiError::NotFound(e.to_string()))
    };
    Ok(PersonPageView {
        entity: EntitySummary::of(entity),
        latest_clusters: latest_clusters(&snap.index, id, PAGE_CLUSTERS),
        titles: top_titles(&snap.titles, id, PAGE_TITLES).map_err(|e| ApiError::BadRequest(e.to_string()))?,
        related: list(RankMode::Related)?,
        associated: list(RankMode::Associated)?,
    })
}

pub fn search(snap: &Snapshot, query: &str) -> ApiResult<Vec<SearchHit>> {
    let q = query.trim();
    if q.is_empty() {
        return Err(ApiError::BadRequest("q must not be empty".into()));
    }
    Ok(snap
        .catalog
        .search(q)
        .into_iter()
        .take(SEARCH_LIMIT)
        .map(|e| SearchHit {
            id: e.id,
            canonical_name: e.canonical_name.clone(),
            kind: e.kind.as_str(),
        })
        .collect())
}

pub fn partners(snap: &Snapshot, id: EntityId, n: usize, mode: RankMode) -> ApiResult<PartnerList> {
    known(snap, id)?;
    ranked(&snap.index, id, n, mode)
        .map(|l| PartnerList::of(l, &snap.catalog))
        .map_err(|e| ApiError::BadRequest(e.to_string()))
}

pub fn parse_layout_flag(raw: Option<&String>) -> ApiResult<bool> {
    match raw.map(String::as_str) {
        None | Some("" | "0" | "false" | "none") => Ok(false),
        Some("1" | "true" | "kk" | "kamada-kawai") => Ok(true),
        Some(other) => Err(ApiError::BadRequest(format!("unknown layout {other:?}; use true or false"))),
    }
}

pub fn graph(snap: &Snapshot, id: EntityId, n: usize, layout: bool) -> ApiResult<GraphView> {
    known(snap, id)?;
    let g = neighborhood_graph(&snap.index, &snap.catalog, id, n).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    if !layout {
        return Ok(GraphView::of(id, &g, &snap.catalog, None));
    }
    let (laid, report) =
        kamada_kawai_layout(&g, &LayoutParams::default()).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let info = LayoutInfo {
        energy: report.energy,
        max_gradient: report.max_gradient,
        moves: report.moves,
        converged: report.converged,
    };
    Ok(GraphView::of(id, &laid, &snap.catalog, Some(info)))
}

pub fn vip(snap: &Snapshot, date: Option<NaiveDate>, k: usize) -> ApiResult<VipView> {
    let Some(day) = date.or(snap.index.snapshot_date()) else {
        return Ok(VipView { date: None, entries: Vec::new() });
    };
    let entries = vip_list(&snap.index, day, k)
        .map_err(|e| ApiError::BadRequest(e.to_string()))?
        .into_iter()
        .map(|(entity, clusters)| VipEntry {
            entity,
            name: name_of(&snap.catalog, entity),
            clusters,
        })
        .collect();
    Ok(VipView { date: Some(day), entries })
}

type Params = Query<HashMap<String, String>>;

async fn get_entity(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<PersonPageView>> {
    person_page(&s.snapshot(), parse_id(&id)?).map(Json)
}

async fn get_search(State(s): State<AppState>, Query(p): Params) -> ApiResult<Json<Vec<SearchHit>>> {
    let q = p.get("q").ok_or_else(|| ApiError::BadRequest("missing q".into()))?;
    search(&s.snapshot(), q).map(Json)
}

async fn get_related(State(s): State<AppState>, Path(id): Path<String>, Query(p): Params) -> ApiResult<Json<PartnerList>> {
    let n = parse_count(&p, "n", DEFAULT_N)?;
    partners(&s.snapshot(), parse_id(&id)?, n, RankMode::Related).map(Json)
}

async fn get_associated(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(p): Params,
) -> ApiResult<Json<PartnerList>> {
    let n = parse_count(&p, "n", DEFAULT_N)?;
    partners(&s.snapshot(), parse_id(&id)?, n, RankMode::Associated).map(Json)
}

async fn get_graph(State(s): State<AppState>, Path(id): Path<String>, Query(p): Params) -> ApiResult<Json<GraphView>> {
    let n = parse_count(&p, "n", DEFAULT_N)?;
    let layout = parse_layout_flag(p.get("layout"))?;
    let id = parse_id(&id)?;
    let snap = s.snapshot();
    // Layout is CPU-bound; keep it off the async workers.
    tokio::task::spawn_blocking(move || graph(&snap, id, n, layout))
        .await
        .map_err(|e| ApiError::BadRequest(format!("layout failed: {e}")))?
        .map(Json)
}

async fn get_vip(State(s): State<AppState>, Query(p): Params) -> ApiResult<Json<VipView>> {
    let k = parse_count(&p, "k", DEFAULT_N)?;
    let date = match p.get("date") {
        None => None,
        Some(raw) => Some(
            NaiveDate::parse_from_str(raw, "%Y-%m-%d")
                .map_err(|_| ApiError::BadRequest(format!("date must be YYYY-MM-DD, got {raw:?}")))?,
        ),
    };
    vip(&s.snapshot(), date, k).map(Json)
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/entities/{id}", get(get_entity))
        .route("/entities/{id}/related", get(get_related))
        .route("/entities/{id}/associated", get(get_associated))
        .route("/entities/{id}/graph", get(get_graph))
        .route("/search", get(get_search))
        .route("/vip", get(get_vip))
        .with_state(state)
}

/// Serves until the process is stopped. SIGHUP reloads the snapshot file;
/// a failed reload keeps the current snapshot.
pub async fn serve(state: AppState, bind: &str, snapshot_path: std::path::PathBuf) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind)
        .await
        .map_err(|e| anyhow::anyhow!("cannot bind {bind}: {e}"))?;
    eprintln!("listening on {}", listener.local_addr()?);

    #[cfg(unix)]
    {
        let state = state.clone();
        let mut hup = tokio::signal::unix::signal(tokio::signal::unix::SignalKind::hangup())?;
        tokio::spawn(async move {
            while hup.recv().await.is_some() {
                let path = snapshot_path.clone();
                match tokio::task::spawn_blocking(move || Snapshot::load(&path)).await {
                    Ok(Ok(next)) => {
                        state.swap(next);
                        eprintln!("reloaded {}", snapshot_path.display());
                    }
                    Ok(Err(e)) => eprintln!("reload of {} failed: {e}", snapshot_path.display()),
                    Err(e) => eprintln!("reload task failed: {e}"),
                }
            }
        });
    }
    #[cfg(not(unix))]
    let _ = snapshot_path;

    axum::serve(listener, router(state)).await?;
    Ok(())
}
