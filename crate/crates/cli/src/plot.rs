//! Return-time rasters as SVG.

use std::fmt::Write;

use serde_json::Value;

const WIDTH: f64 = 800.0;
const LEFT: f64 = 180.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const ROW: f64 = 36.0;
const BAR: f64 = 18.0;

struct Row {
    label: String,
    horizon: usize,
    members: Vec<usize>,
    ap: Option<(usize, usize, usize)>,
}

fn rows(report: &str) -> Result<Vec<Row>, String> {
    let mut out = Vec::new();
    for (i, raw) in report.lines().enumerate() {
        let line: Value =
            serde_json::from_str(raw).map_err(|e| format!("report line {}: {e}", i + 1))?;
        if line["type"] != "analysis" {
            continue;
        }
        let Some(w) = line["result"].get("window") else {
            continue;
        };
        let horizon = w["horizon"].as_u64().ok_or("window without horizon")? as usize;
        let members = w["members"]
            .as_array()
            .ok_or("window without members")?
            .iter()
            .filter_map(Value::as_u64)
            .map(|n| n as usize)
            .collect();
        let ap = match (line["result"]["ap"].as_array(), line["result"]["max_ap"].as_u64()) {
            (Some(ad), Some(len)) if ad.len() == 2 => Some((
                ad[0].as_u64().unwrap_or(0) as usize,
                ad[1].as_u64().unwrap_or(1) as usize,
                len as usize,
            )),
            _ => None,
        };
        out.push(Row {
            label: line["name"].as_str().unwrap_or("?").to_string(),
            horizon,
            members,
            ap,
        });
    }
    Ok(out)
}

/// Maximal runs of consecutive members as `(start, length)`.
fn runs(members: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &n in members {
        match out.last_mut() {
            Some((s, l)) if *s + *l == n => *l += 1,
            _ => out.push((n, 1)),
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One raster row per window in the report: a mark for every member, solid
/// where members are consecutive, and circles on the longest progression.
pub fn render_svg(report: &str) -> Result<String, String> {
    let rows = rows(report)?;
    let n_rows = rows.len().max(1);
    let height = TOP + ROW * n_rows as f64 + 50.0;
    let plot_w = WIDTH - LEFT - RIGHT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let axis_y = TOP + ROW * n_rows as f64;
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{axis_y}" x2="{:.2}" y2="{axis_y}" stroke="black"/>"#,
        LEFT + plot_w
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#, LEFT + plot_w / 2.0, axis_y + 28.0);
    for (k, r) in rows.iter().enumerate() {
        let y = TOP + ROW * k as f64;
        let scale = plot_w / (r.horizon + 1) as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{} (H = {})</text>"#,
            LEFT - 8.0,
            y + BAR * 0.75,
            escape(&r.label),
            r.horizon
        );
        for (start, len) in runs(&r.members) {
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{BAR}" fill="steelblue"/>"#,
                LEFT + start as f64 * scale,
                (len as f64 * scale).max(1.0)
            );
        }
        if let Some((a, d, len)) = r.ap {
            for j in 0..len {
                let n = a + j * d;
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="crimson"/>"#,
                    LEFT + (n as f64 + 0.5) * scale,
                    y + BAR + 6.0
                );
            }
        }
    }
    let _ = writeln!(s, r#"<text x="{LEFT}" y="{axis_y:.2}" dy="28">0</text>"#);
    let ly = height - 10.0;
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{:.2}" width="10" height="10" fill="steelblue"/>"#, ly - 9.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">member of window</text>"#, LEFT + 14.0);
    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="crimson"/>"#, LEFT + 150.0, ly - 4.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">arithmetic progression</text>"#, LEFT + 158.0);
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(members: &[usize], h: usize) -> String {
        let line = serde_json::json!({
            "type": "analysis",
            "name": "w",
            "result": { "window": { "horizon": h, "members": members } },
        });
        format!("{{\"type\":\"header\"}}\n{line}\n")
    }

    #[test]
    fn full_window_is_one_bar() {
        let m: Vec<usize> = (0..=50).collect();
        let svg = render_svg(&report(&m, 50)).unwrap();
        assert_eq!(svg.matches("fill=\"steelblue\"").count(), 2);
    }

    #[test]
    fn multiples_of_three_are_evenly_spaced() {
        let m: Vec<usize> = (0..=30).step_by(3).collect();
        let svg = render_svg(&report(&m, 30)).unwrap();
        assert_eq!(svg.matches("<rect").count(), m.len() + 1);
    }

    #[test]
    fn empty_window_keeps_axes_and_legend() {
        let svg = render_svg(&report(&[], 10)).unwrap();
        assert!(svg.contains("<line"));
        assert!(svg.contains("member of window"));
        assert_eq!(svg.matches("<rect").count(), 1);
        let none = render_svg("{\"type\":\"header\"}\n").unwrap();
        assert!(none.contains("member of window"));
    }
}
