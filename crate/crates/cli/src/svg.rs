//! Minimal line-chart SVG for a curve table.

use std::fmt::Write;

use corrgraph::curves::{CurveKind, CurveTable};

const W: f64 = 800.0;
const H: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

fn color(k: CurveKind) -> &'static str {
    match k {
        CurveKind::Ns => "#1f77b4",
        CurveKind::Loc => "#2ca02c",
        CurveKind::Vect => "#d62728",
        CurveKind::QUpper => "#9467bd",
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

pub fn render(table: &CurveTable) -> String {
    let series: Vec<(CurveKind, Vec<(f64, f64)>)> = CurveKind::ALL
        .iter()
        .map(|&k| {
            let pts = table.t.iter().zip(table.column(k)).filter_map(|(&t, v)| v.map(|v| (t, v))).collect();
            (k, pts)
        })
        .filter(|(_, pts): &(CurveKind, Vec<(f64, f64)>)| !pts.is_empty())
        .collect();

    let (t0, t1) = (
        table.t.iter().copied().fold(f64::INFINITY, f64::min).min(0.0),
        table.t.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(1.0),
    );
    let ymax = series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)).fold(table.edges as f64 / 2.0, f64::max);
    let ymax = if ymax > 0.0 { ymax } else { 1.0 };
    let x = |t: f64| LEFT + (t - t0) / (t1 - t0) * (W - LEFT - RIGHT);
    let y = |v: f64| H - BOTTOM - v / ymax * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);

    // K_5: the band where a single 2-projection frame is optimal
    if table.graph == "complete:5" {
        let (a, b) = ((5.0 - 5f64.sqrt()) / 10.0, (5.0 + 5f64.sqrt()) / 10.0);
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{TOP}" width="{:.2}" height="{:.2}" fill="#fde9b6" opacity="0.6"><title>t in [{a:.5}, {b:.5}]</title></rect>"##,
            x(a),
            x(b) - x(a),
            H - TOP - BOTTOM
        );
    }

    let vect = series.iter().find(|(k, _)| *k == CurveKind::Vect);
    let upper = series.iter().find(|(k, _)| *k == CurveKind::QUpper);
    if let (Some((_, v)), Some((_, q))) = (vect, upper) {
        // gap polygon over the gridpoints where both are known
        let both: Vec<(f64, f64, f64)> =
            q.iter().filter_map(|&(t, qu)| v.iter().find(|p| p.0 == t).map(|&(_, vv)| (t, vv, qu))).collect();
        if both.len() >= 2 {
            let mut pts: Vec<String> = both.iter().map(|&(t, _, qu)| format!("{:.2},{:.2}", x(t), y(qu))).collect();
            pts.extend(both.iter().rev().map(|&(t, vv, _)| format!("{:.2},{:.2}", x(t), y(vv))));
            let _ = writeln!(s, r##"<polygon points="{}" fill="#c5b0d5" opacity="0.5"/>"##, pts.join(" "));
        }
    }

    // axes and ticks
    let (xa, ya) = (x(t0), y(0.0));
    let _ = writeln!(s, r#"<line x1="{xa:.2}" y1="{ya:.2}" x2="{:.2}" y2="{ya:.2}" stroke="black"/>"#, x(t1));
    let _ = writeln!(s, r#"<line x1="{xa:.2}" y1="{ya:.2}" x2="{xa:.2}" y2="{TOP}" stroke="black"/>"#);
    for i in 0..=10 {
        let t = t0 + (t1 - t0) * i as f64 / 10.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{ya:.2}" x2="{0:.2}" y2="{1:.2}" stroke="black"/><text x="{0:.2}" y="{2:.2}" text-anchor="middle">{t:.1}</text>"#,
            x(t),
            ya + 5.0,
            ya + 20.0
        );
    }
    let step = nice_step(ymax);
    let mut v = 0.0;
    while v <= ymax + 1e-9 {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{xa:.2}" y2="{1:.2}" stroke="black"/><text x="{2:.2}" y="{3:.2}" text-anchor="end">{v}</text>"#,
            xa - 5.0,
            y(v),
            xa - 8.0,
            y(v) + 4.0
        );
        v += step;
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#, (x(t0) + x(t1)) / 2.0, H - 15.0);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="18">{} (|E| = {})</text>"#, escape(&table.graph), table.edges);

    for (i, (k, pts)) in series.iter().enumerate() {
        let path: Vec<String> = pts.iter().map(|&(t, v)| format!("{:.2},{:.2}", x(t), y(v))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#, path.join(" "), color(*k));
        let ly = TOP + 20.0 + 20.0 * i as f64;
        let lx = W - RIGHT + 20.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">f_{}</text>"#,
            lx + 25.0,
            color(*k),
            lx + 30.0,
            ly + 4.0,
            k.id()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_are_round() {
        assert_eq!(nice_step(20.0), 5.0);
        assert_eq!(nice_step(1.0), 0.2);
    }
}
