//! Minimal self-contained SVG plots.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 440.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

/// Line plot of labelled `(x, y)` series.
pub fn line_plot(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let pts = series.iter().flat_map(|s| s.1.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut out = header(title);
    axes(&mut out, (x0, x1), (y0, y1));
    for (i, (label, points)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.0}" y="{ly:.0}" font-size="12" fill="{color}">{}</text>"#,
            W - PAD - 150.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Grey-scale heat map of `values` on `xs × ys`, `ys` fastest.
pub fn heat_map(title: &str, xs: &[f64], ys: &[f64], values: &[f64]) -> String {
    let mut out = header(title);
    let (x0, x1) = (xs[0], xs[xs.len() - 1]);
    let (y0, y1) = (ys[0], ys[ys.len() - 1]);
    axes(&mut out, (x0, x1), (y0, y1));
    let cw = (W - 2.0 * PAD) / xs.len() as f64;
    let ch = (H - 2.0 * PAD) / ys.len() as f64;
    for (i, _) in xs.iter().enumerate() {
        for (j, _) in ys.iter().enumerate() {
            let v = values[i * ys.len() + j].clamp(0.0, 1.0);
            let g = (255.0 * v).round() as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({g},{g},{g})"/>"#,
                PAD + cw * i as f64,
                H - PAD - ch * (j + 1) as f64,
                cw,
                ch
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn header(title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.0}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    out
}

fn axes(out: &mut String, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) {
    let _ = writeln!(
        out,
        r#"<path d="M{PAD} {PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    for (x, anchor, v) in [(PAD, "start", x0), (W - PAD, "end", x1)] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{:.0}" font-size="11" text-anchor="{anchor}">{v:.3}</text>"#,
            H - PAD + 16.0
        );
    }
    for (y, v) in [(H - PAD, y0), (PAD, y1)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.0}" y="{y}" font-size="11" text-anchor="end">{v:.3}</text>"#,
            PAD - 4.0
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_are_well_formed() {
        let s = line_plot("a < b", &[("y=x".into(), vec![(0.0, 0.0), (1.0, 1.0)])]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert!(s.contains("<polyline"));
        let h = heat_map("h", &[0.0, 1.0], &[0.0, 1.0, 2.0], &[0.0, 0.1, 0.2, 0.3, 0.4, 1.0]);
        assert_eq!(h.matches("<rect").count(), 7);
    }
}
