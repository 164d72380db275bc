//! Tolerant hyperlink scanner for saved encyclopedia pages.

use percent_encoding::percent_decode_str;

use crate::model::normalize_whitespace;

/// One `<a href=...>anchor</a>` element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperlink {
    /// Page title the href points at, decoded (`/wiki/George_W._Bush` gives
    /// `George W. Bush`). Empty for same-page fragments and external schemes.
    pub target: String,
    /// Visible text with nested tags removed and entities decoded.
    pub anchor: String,
}

fn find_ci(hay: &[u8], needle: &[u8], from: usize) -> Option<usize> {
    if needle.is_empty() || from >= hay.len() {
        return None;
    }
    hay[from..]
        .windows(needle.len())
        .position(|w| w.eq_ignore_ascii_case(needle))
        .map(|p| p + from)
}

/// Parses the attribute list of a start tag beginning at `from` (just past
/// the tag name). Returns the href value, if any, and the index after `>`.
fn parse_attrs(html: &str, from: usize) -> Option<(Option<String>, usize)> {
    let b = html.as_bytes();
    let mut i = from;
    let mut href = None;
    loop {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        match b.get(i)? {
            b'>' => return Some((href, i + 1)),
            b'/' => {
                i += 1;
                continue;
            }
            _ => {}
        }
        let name_start = i;
        while i < b.len() && !b[i].is_ascii_whitespace() && !matches!(b[i], b'=' | b'>' | b'/') {
            i += 1;
        }
        let name = &html[name_start..i];
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = None;
        if b.get(i) == Some(&b'=') {
            i += 1;
            while i < b.len() && b[i].is_ascii_whitespace() {
                i += 1;
            }
            match *b.get(i)? {
                q @ (b'"' | b'\'') => {
                    let end = i + 1 + b[i + 1..].iter().position(|&c| c == q)?;
                    value = Some(&html[i + 1..end]);
                    i = end + 1;
                }
                _ => {
                    let s = i;
                    while i < b.len() && !b[i].is_ascii_whitespace() && b[i] != b'>' {
                        i += 1;
                    }
                    value = Some(&html[s..i]);
                }
            }
        }
        if name.eq_ignore_ascii_case("href") && href.is_none() {
            href = value.map(|v| html_escape::decode_html_entities(v).into_owned());
        }
    }
}

/// Removes tags from an HTML fragment and decodes entities.
fn strip_tags(fragment: &str) -> String {
    let mut out = String::with_capacity(fragment.len());
    let mut in_tag = false;
    for c in fragment.chars() {
        match c {
            '<' => in_tag = true,
            '>' if in_tag => {
                in_tag = false;
                out.push(' ');
            }
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    normalize_whitespace(&html_escape::decode_html_entities(&out))
}

/// Maps an href onto the page title it names.
pub fn href_title(href: &str) -> String {
    let href = href.trim();
    if href.starts_with('#') {
        return String::new();
    }
    let (path, query) = match href.split_once('?') {
        Some((p, q)) => (p, Some(q)),
        None => (href, None),
    };
    let path = path.split('#').next().unwrap_or("");
    let raw = if let Some(title) = query.and_then(|q| {
        q.split('&')
            .find_map(|kv| kv.strip_prefix("title="))
            .map(|t| t.split('#').next().unwrap_or(""))
    }) {
        title
    } else if let Some(i) = path.find("/wiki/") {
        &path[i + "/wiki/".len()..]
    } else if path.contains("://") || path.starts_with("mailto:") || path.starts_with("javascript:") {
        return String::new();
    } else {
        let p = path.trim_start_matches("./");
        p.rsplit('/').next().unwrap_or(p)
    };
    let raw = raw.strip_suffix(".html").or_else(|| raw.strip_suffix(".htm")).unwrap_or(raw);
    let decoded = percent_decode_str(raw).decode_utf8_lossy();
    normalize_whitespace(&decoded.replace('_', " "))
}

/// Every hyperlink in the page, in document order. Malformed fragments are
/// skipped rather than failing the page.
pub fn extract_hyperlinks(html: &str) -> Vec<Hyperlink> {
    let b = html.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while let Some(open) = find_ci(b, b"<a", i) {
        let after = open + 2;
        // Only a bare `a` tag, not `<abbr>` or `<area>`.
        if !b.get(after).is_some_and(|c| c.is_ascii_whitespace() || *c == b'>' || *c == b'/') {
            i = after;
            continue;
        }
        let Some((href, body_start)) = parse_attrs(html, after) else {
            // Unterminated tag: nothing more to find.
            break;
        };
        let body_end = find_ci(b, b"</a", body_start).unwrap_or(b.len());
        // Never let an unclosed anchor swallow the following links.
        let body_end = find_ci(b, b"<a", body_start)
            .filter(|&next| next < body_end)
            .unwrap_or(body_end);
        if let Some(href) = href {
            out.push(Hyperlink {
                target: href_title(&href),
                anchor: strip_tags(&html[body_start..body_end]),
            });
        }
        i = body_end.max(body_start);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wiki_hrefs_decode_to_titles() {
        assert_eq!(href_title("/wiki/George_W._Bush"), "George W. Bush");
        assert_eq!(href_title("http://en.wikipedia.org/wiki/Terje_R%C3%B8ed-Larsen#Career"), "Terje Røed-Larsen");
        assert_eq!(href_title("/w/index.php?title=Kofi_Annan&action=edit"), "Kofi Annan");
        assert_eq!(href_title("#cite_note-1"), "");
        assert_eq!(href_title("http://example.org/page"), "");
        assert_eq!(href_title("../en/Saad_Hariri.html"), "Saad Hariri");
    }

    #[test]
    fn extracts_links_with_nested_markup() {
        let html = r#"<p>Met <A HREF="/wiki/Kofi_Annan" title="x">Kofi <b>Annan</b></a> and
            <a class=int href='/wiki/1975'>1975</a>, <abbr>UN</abbr> <a name="top">anchor</a>
            <a href="/wiki/Emile_Lahoud">Lahoud &amp; co</a></p>"#;
        let links = extract_hyperlinks(html);
        assert_eq!(
            links,
            vec![
                Hyperlink { target: "Kofi Annan".into(), anchor: "Kofi Annan".into() },
                Hyperlink { target: "1975".into(), anchor: "1975".into() },
                Hyperlink { target: "Emile Lahoud".into(), anchor: "Lahoud & co".into() },
            ]
        );
    }

    #[test]
    fn malformed_fragments_are_skipped() {
        assert!(extract_hyperlinks("").is_empty());
        assert!(extract_hyperlinks("<a href=\"/wiki/X").is_empty());
        let links = extract_hyperlinks("<a href=/wiki/A>A <a href=/wiki/B>B</a>");
        assert_eq!(links.len(), 2);
        assert_eq!(links[0].anchor, "A");
        assert!(extract_hyperlinks("<a href='x>").is_empty());
    }
}
