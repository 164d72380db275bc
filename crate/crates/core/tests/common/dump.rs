//! A synthetic five-language encyclopedia dump with hand-enumerated answers.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use relmap::baseline::BaselineRelation;
use relmap::model::{EntityCatalog, EntityKind, Lang};
use relmap::EntityId;

pub const LANGS: [&str; 5] = ["de", "en", "es", "fr", "it"];

/// Mutual pairs and the languages where both pages link each other.
pub const MUTUAL: [(u32, u32, &[&str]); 5] = [
    (1, 2, &["de", "en", "es", "fr", "it"]),
    (1, 3, &["de", "en", "es", "fr"]),
    (2, 3, &["de", "en", "fr"]),
    (4, 5, &["en", "it"]),
    (5, 6, &["de"]),
];

/// Links that are never returned: (language, from, to).
pub const ONE_WAY: [(&str, u32, u32); 4] = [("en", 1, 4), ("fr", 6, 7), ("en", 3, 4), ("fr", 4, 3)];

pub const ORG: u32 = 9;

pub fn catalog() -> EntityCatalog {
    let mut c = EntityCatalog::new();
    for e in 1..=8 {
        c.insert_with_id(EntityId(e), &format!("Person {e}"), EntityKind::Person, []).unwrap();
    }
    c.insert_with_id(EntityId(ORG), "United Nations", EntityKind::Organization, ["UN"]).unwrap();
    c
}

pub fn expected() -> Vec<BaselineRelation> {
    MUTUAL
        .iter()
        .map(|&(a, b, langs)| BaselineRelation {
            a: EntityId(a),
            b: EntityId(b),
            languages: langs.iter().map(|l| Lang::new(l).unwrap()).collect(),
        })
        .collect()
}

/// Every directed link (language, from, to) the dump contains between persons.
pub fn directed_links() -> BTreeSet<(String, u32, u32)> {
    let mut out = BTreeSet::new();
    for &(a, b, langs) in &MUTUAL {
        for l in langs {
            out.insert((l.to_string(), a, b));
            out.insert((l.to_string(), b, a));
        }
    }
    for &(l, a, b) in &ONE_WAY {
        out.insert((l.to_string(), a, b));
    }
    out
}

fn href(lang: &str, to: u32, style: usize) -> (String, String) {
    let name = format!("Person {to}");
    match style % 3 {
        0 => (format!("/wiki/Person_{to}"), name),
        1 => (format!("http://{lang}.wikipedia.org/wiki/Person%20{to}#Life"), format!("<i>{name}</i>")),
        // Target unknown, anchor names the person.
        _ => (format!("/wiki/Redirect_{to}"), name),
    }
}

/// Writes `<lang>/<id>.html` pages. Besides person links, pages carry
/// noise links and one unreadable and one non-person page.
pub fn write(dir: &Path) {
    let links = directed_links();
    for lang in LANGS {
        std::fs::create_dir_all(dir.join(lang)).unwrap();
        for from in 1..=8u32 {
            let mut html = format!("<html><head><title>Person {from}</title></head><body>\n<p>");
            let mut style = from as usize;
            for (_, _, to) in links.iter().filter(|(l, f, _)| l == lang && *f == from) {
                let (h, a) = href(lang, *to, style);
                style += 1;
                writeln!(html, "Met <a href=\"{h}\" title=\"x\">{a}</a>.").unwrap();
            }
            html.push_str(
                "Born <a href=\"/wiki/1975\">1975</a> in <a href='/wiki/Beirut'>Beirut</a>.\
                 <a href=\"/wiki/File:Flag.png\"><img src=\"x.png\"></a>\
                 <a href=\"/wiki/United_Nations\">UN</a>\
                 <a href=\"/wiki/Person_",
            );
            write!(html, "{from}\">self</a> <a href=\"#top\">top</a> <a name=x>").unwrap();
            html.push_str("</p></body></html>\n");
            std::fs::write(dir.join(lang).join(format!("{from}.html")), html).unwrap();
        }
        std::fs::write(dir.join(lang).join(format!("{ORG}.html")), "<a href=\"/wiki/Person_1\">Person 1</a>").unwrap();
    }
    std::fs::write(dir.join("it").join("8.html"), b"\xff\xfe<a href=\"/wiki/Person_1\">").unwrap();
    std::fs::write(dir.join("README.txt"), "not a language directory").unwrap();
}

/// The ten-relation statistics fixture: (relations, persons, total
/// endpoints, min, max, busiest).
pub fn ten_relations() -> (Vec<BaselineRelation>, usize, usize, usize, usize, u32) {
    let pairs = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 6), (3, 7), (4, 8), (9, 10), (9, 11)];
    let en: BTreeSet<Lang> = [Lang::new("en").unwrap()].into();
    let rel = pairs
        .iter()
        .map(|&(a, b)| BaselineRelation { a: EntityId(a), b: EntityId(b), languages: en.clone() })
        .collect();
    // Per person: 1→4, 2→3, 3→3, 4→2, 9→2, the other six → 1.
    (rel, 11, 20, 1, 4, 1)
}
