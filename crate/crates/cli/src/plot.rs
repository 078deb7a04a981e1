//! Minimal SVG line plot of `log10|Δ log_ratio|` against `m`, one polyline
//! per index. Presentational only.

use std::fmt::Write as _;

use hitchin_core::asymptotic::RatioSeries;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub fn series_svg(series: &RatioSeries) -> String {
    // points (m, log10|Δ|) per index, zero differences dropped
    let lines: Vec<Vec<(f64, f64)>> = (0..series.n)
        .map(|i| {
            (2..=series.m_max)
                .filter(|&m| series.is_valid(m) && series.is_valid(m - 1))
                .filter_map(|m| {
                    let d = (series.log_ratio[i][m - 1] - series.log_ratio[i][m - 2]).abs();
                    (d > 0.0).then(|| (m as f64, d.log10()))
                })
                .collect()
        })
        .collect();
    let ys = lines.iter().flatten().map(|p| p.1);
    let (mut y_lo, mut y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (-16.0, 0.0);
    }
    y_lo = y_lo.floor();
    y_hi = y_hi.ceil().max(y_lo + 1.0);
    let x_hi = series.m_max as f64;
    let px = |m: f64| MARGIN + (m - 1.0) / (x_hi - 1.0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<path d=\"M{l} {t} V{b} H{r}\" stroke=\"black\" fill=\"none\"/>",
        l = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let mut y = y_lo;
    while y <= y_hi {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"end\">1e{y}</text>",
            MARGIN - 4.0,
            py(y) + 3.0
        );
        y += ((y_hi - y_lo) / 8.0).ceil().max(1.0);
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">m</text>",
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"20\" font-size=\"12\" text-anchor=\"middle\">|successive difference|, alpha = {}, beta = {}</text>",
        WIDTH / 2.0,
        series.alpha,
        series.beta
    );
    for (i, pts) in lines.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let coords: Vec<String> = pts.iter().map(|&(m, y)| format!("{:.2},{:.2}", px(m), py(y))).collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"><title>i = {}</title></polyline>",
            COLOURS[i % COLOURS.len()],
            coords.join(" "),
            i + 1
        );
    }
    svg.push_str("</svg>\n");
    svg
}
