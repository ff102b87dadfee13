//! Text and SVG views of a mountain range, plus a plain-text dump for the
//! other payloads.

use std::fmt::Write;
use std::io::IsTerminal;

use contact_atlas::classify::{MountainRange, PairComponent};
use contact_atlas::Side;
use serde_json::Value;

pub struct View {
    /// Highest `tw` drawn; rays are cut here.
    pub clip: i64,
    pub tw_min: i64,
}

pub fn color_enabled() -> bool {
    std::env::var_os("ATLAS_NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

fn rows(view: &View) -> impl Iterator<Item = i64> {
    let lo = view.tw_min.min(0);
    (lo..=view.clip.max(0)).rev()
}

fn extent(c: &PairComponent<i64>, side: Side, view: &View) -> (i64, i64) {
    let xs: Vec<i64> = rows(view).flat_map(|y| c.row(side, y)).collect();
    (
        *xs.iter().min().unwrap_or(&0),
        *xs.iter().max().unwrap_or(&0),
    )
}

fn header(c: &PairComponent<i64>) -> String {
    let mut h = format!(
        "pair {}: e = ∓{}, wing level {}, depth {}",
        c.index, c.euler, c.wing_level, c.depth
    );
    if c.torsion_tower {
        h.push_str(", torsion tower");
    }
    h
}

pub fn ascii(m: &MountainRange<i64>, view: &View, color: bool) -> String {
    let (peak, reset) = if color {
        ("\x1b[1;33m", "\x1b[0m")
    } else {
        ("", "")
    };
    let mut out = String::new();
    for c in &m.pair_components {
        let _ = writeln!(out, "{}", header(c));
        let plus = extent(c, Side::Plus, view);
        let minus = extent(c, Side::Minus, view);
        for y in rows(view) {
            let mut line = format!("{y:>4} ");
            for (side, (lo, hi)) in [(Side::Plus, plus), (Side::Minus, minus)] {
                for x in lo..=hi {
                    let cell = if !c.contains(side, x, y) {
                        " ."
                    } else if y == 0 {
                        "^"
                    } else {
                        " *"
                    };
                    if cell == "^" {
                        let _ = write!(line, " {peak}^{reset}");
                    } else {
                        line.push_str(cell);
                    }
                }
                line.push_str("   ");
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let _ = writeln!(out, "      L_(+,{0}) left, L_(-,{0}) right", c.index);
        out.push('\n');
    }
    let _ = write!(out, "depth histogram:");
    for (k, d, n) in &m.depth_histogram {
        let _ = write!(out, " level {k} depth {d} x{n};");
    }
    out.push('\n');
    out
}

const CELL: i64 = 14;

pub fn svg(m: &MountainRange<i64>, view: &View) -> String {
    let heights: Vec<i64> = rows(view).collect();
    let panel_h = (heights.len() as i64 + 2) * CELL + 20;
    let mut widths = Vec::new();
    for c in &m.pair_components {
        let (a, b) = extent(c, Side::Plus, view);
        let (d, e) = extent(c, Side::Minus, view);
        widths.push(((b - a + 1) + (e - d + 1) + 4) * CELL);
    }
    let width = widths.iter().copied().max().unwrap_or(200).max(320);
    let height = panel_h * m.pair_components.len().max(1) as i64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">"#
    );
    for (i, c) in m.pair_components.iter().enumerate() {
        let top = i as i64 * panel_h;
        let _ = writeln!(s, r#"<g id="pair-{}">"#, c.index);
        let _ = writeln!(s, r#"<text x="4" y="{}">{}</text>"#, top + 12, header(c));
        let mut left = CELL;
        for side in [Side::Plus, Side::Minus] {
            let (lo, hi) = extent(c, side, view);
            let px = |x: i64| left + (x - lo) * CELL + CELL / 2;
            let py = |y: i64| top + 20 + (view.clip.max(0) - y) * CELL + CELL / 2;
            for y in rows(view) {
                for x in c.row(side, y) {
                    for dx in [1, -1] {
                        if y > view.tw_min.min(0) && c.contains(side, x + dx, y - 1) {
                            let _ = writeln!(
                                s,
                                r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#555"/>"##,
                                px(x),
                                py(y),
                                px(x + dx),
                                py(y - 1)
                            );
                        }
                    }
                    let (r, fill) = if y == 0 { (4, "#c60") } else { (2, "#000") };
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{}" cy="{}" r="{r}" fill="{fill}"/>"#,
                        px(x),
                        py(y)
                    );
                }
            }
            if c.torsion_tower {
                // tower glyph above the ray
                let tx = px(if side == Side::Plus {
                    -view.clip.max(1)
                } else {
                    view.clip.max(1)
                });
                for k in 0..3 {
                    let _ = writeln!(
                        s,
                        r##"<rect x="{}" y="{}" width="8" height="3" fill="#36c"/>"##,
                        tx - 4,
                        top + 16 - 4 * k
                    );
                }
            }
            left += (hi - lo + 3) * CELL;
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Indented plain-text dump of a JSON payload.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    dump(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn dump(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        dump(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        dump(x, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
