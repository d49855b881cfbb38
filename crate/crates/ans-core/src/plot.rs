//! Minimal SVG emitters. No plotting process is spawned; each function
//! returns the complete document as a string so outputs are reproducible
//! byte for byte.

use crate::saliency::{ActivationHistogram, WeightProfile};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 44.0;

const CLASS0_COLOR: &str = "#4878a8";
const CLASS1_COLOR: &str = "#d95f02";
const PALETTE: [&str; 8] = [
    "#4878a8", "#d95f02", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
];

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{x}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">{title}</text>\n",
        x = WIDTH / 2.0,
        title = escape(title),
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axes(y_max: f64, x_label: &str, y_label: &str) -> String {
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    let plot_right = WIDTH - MARGIN_RIGHT;
    let mut out = format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{plot_bottom}\" x2=\"{plot_right}\" y2=\"{plot_bottom}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{plot_bottom}\" stroke=\"black\"/>\n\
         <text x=\"{xc}\" y=\"{yb}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{xl}</text>\n\
         <text x=\"14\" y=\"{ym}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 {ym})\">{yl}</text>\n",
        xc = (MARGIN_LEFT + plot_right) / 2.0,
        yb = HEIGHT - 8.0,
        ym = (MARGIN_TOP + plot_bottom) / 2.0,
        xl = escape(x_label),
        yl = escape(y_label),
    );
    // y ticks at 0, half, max
    for frac in [0.0, 0.5, 1.0] {
        let value = y_max * frac;
        let y = plot_bottom - (plot_bottom - MARGIN_TOP) * frac;
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{y:.1}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"end\">{value:.0}</text>\n",
            x = MARGIN_LEFT - 6.0,
        ));
    }
    out
}

/// Grouped two-series bar chart of a class-labeled activation histogram.
pub fn histogram_svg(hist: &ActivationHistogram, title: &str) -> String {
    let k = hist.k();
    let c0 = hist.class_counts(0);
    let c1 = hist.class_counts(1);
    let y_max = c0
        .iter()
        .chain(c1.iter())
        .copied()
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    let slot = plot_w / k as f64;
    let bar = slot * 0.4;

    let mut out = header(title);
    out.push_str(&axes(y_max, "activation", "count"));
    for r in 0..k {
        let x0 = MARGIN_LEFT + r as f64 * slot;
        for (series, (count, color)) in [(c0[r], CLASS0_COLOR), (c1[r], CLASS1_COLOR)]
            .into_iter()
            .enumerate()
        {
            let h = plot_h * count as f64 / y_max;
            let x = x0 + slot * 0.1 + series as f64 * bar;
            out.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{bar:.2}\" height=\"{h:.2}\" fill=\"{color}\"/>\n",
                y = plot_bottom - h,
            ));
        }
        let (lo, _) = hist.bin_bounds(r);
        out.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"9\" \
             text-anchor=\"middle\">{lo:.1}</text>\n",
            x = x0 + slot / 2.0,
            y = plot_bottom + 14.0,
        ));
    }
    out.push_str(&legend(&[
        ("class 0", CLASS0_COLOR),
        ("class 1", CLASS1_COLOR),
    ]));
    out.push_str("</svg>\n");
    out
}

/// Single-series bar chart of a node's weight-value histogram.
pub fn weight_histogram_svg(profile: &WeightProfile, title: &str) -> String {
    let bins = profile.hist_counts.len();
    let y_max = profile
        .hist_counts
        .iter()
        .copied()
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    let slot = plot_w / bins as f64;

    let mut out = header(title);
    out.push_str(&axes(y_max, "weight", "transcript count"));
    for (r, &count) in profile.hist_counts.iter().enumerate() {
        let h = plot_h * count as f64 / y_max;
        let x = MARGIN_LEFT + r as f64 * slot + slot * 0.1;
        out.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{CLASS0_COLOR}\"/>\n",
            y = plot_bottom - h,
            w = slot * 0.8,
        ));
    }
    for (frac, value) in [(0.0, profile.hist_lo), (1.0, profile.hist_hi)] {
        out.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"9\" \
             text-anchor=\"middle\">{value:.3}</text>\n",
            x = MARGIN_LEFT + plot_w * frac,
            y = plot_bottom + 14.0,
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter plot of 2-D points, colored by series tag. Series keep their
/// first-appearance order; the palette cycles past eight series.
pub fn scatter_svg(points: &[(f64, f64)], tags: &[String], title: &str) -> String {
    assert_eq!(points.len(), tags.len(), "one tag per point");
    let mut series: Vec<&str> = Vec::new();
    for tag in tags {
        if !series.iter().any(|s| s == tag) {
            series.push(tag);
        }
    }
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if x_hi <= x_lo {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi <= y_lo {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad_x = (x_hi - x_lo) * 0.05;
    let pad_y = (y_hi - y_lo) * 0.05;
    x_lo -= pad_x;
    x_hi += pad_x;
    y_lo -= pad_y;
    y_hi += pad_y;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    let mut out = header(title);
    out.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{plot_bottom}\" x2=\"{r}\" y2=\"{plot_bottom}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{plot_bottom}\" stroke=\"black\"/>\n\
         <text x=\"{xc}\" y=\"{yb}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">pc1</text>\n\
         <text x=\"14\" y=\"{ym}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 {ym})\">pc2</text>\n",
        r = WIDTH - MARGIN_RIGHT,
        xc = (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        yb = HEIGHT - 8.0,
        ym = (MARGIN_TOP + plot_bottom) / 2.0,
    ));
    for (&(x, y), tag) in points.iter().zip(tags) {
        let series_idx = series.iter().position(|s| s == tag).unwrap();
        let color = PALETTE[series_idx % PALETTE.len()];
        let px = MARGIN_LEFT + plot_w * (x - x_lo) / (x_hi - x_lo);
        let py = plot_bottom - plot_h * (y - y_lo) / (y_hi - y_lo);
        out.push_str(&format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{color}\" fill-opacity=\"0.75\"/>\n"
        ));
    }
    let entries: Vec<(&str, &str)> = series
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, PALETTE[i % PALETTE.len()]))
        .collect();
    out.push_str(&legend(&entries));
    out.push_str("</svg>\n");
    out
}

fn legend(entries: &[(&str, &str)]) -> String {
    let mut out = String::new();
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = MARGIN_TOP + 4.0 + i as f64 * 16.0;
        out.push_str(&format!(
            "<rect x=\"{x}\" y=\"{y:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n\
             <text x=\"{tx}\" y=\"{ty:.1}\" font-family=\"sans-serif\" font-size=\"10\">{label}</text>\n",
            x = WIDTH - MARGIN_RIGHT - 110.0,
            tx = WIDTH - MARGIN_RIGHT - 96.0,
            ty = y + 9.0,
            label = escape(label),
        ));
    }
    out
}
