//! Schematic SVG figures with byte-stable output.

use std::collections::BTreeMap;
use std::fmt::Write;

use wavelab::stability::{ResonancePoint, StabilityRecord, Verdict};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub enum PlotData<'a> {
    /// Stability verdicts in the `(k, ω)` plane.
    OmegaK(&'a [StabilityRecord]),
    /// Resonance curves in the `(k√T, k)` plane.
    Capillary(&'a [ResonancePoint]),
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo > 0.0 {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let range = |v: &mut dyn Iterator<Item = f64>| {
            v.filter(|x| x.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let (x0, x1) = range(&mut xs.clone());
        let (y0, y1) = range(&mut ys.clone());
        Self {
            x: padded(x0, x1),
            y: padded(y0, y1),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn header(svg: &mut String, title: &str, frame: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{title}</text>"#,
        WIDTH / 2.0
    );
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.1}" y1="{y1:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#,
            y1 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{xv:.3}</text>"#,
            y1 + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.3}</text>"#,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xlabel}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{ylabel}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn polyline(svg: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.1},{:.1}", frame.px(x), frame.py(y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        coords.join(" ")
    );
}

fn verdict_color(r: &StabilityRecord) -> &'static str {
    match (r.error.is_some(), r.verdict) {
        (true, _) => "#bbbbbb",
        (_, Verdict::Stable) => "#1f77b4",
        (_, Verdict::Unstable) => "#d62728",
        (_, Verdict::Indeterminate) => "#999999",
    }
}

/// First stable/unstable transition in `k` on every `ω` row.
fn boundary(records: &[StabilityRecord]) -> Vec<(f64, f64)> {
    let mut rows: BTreeMap<u64, Vec<&StabilityRecord>> = BTreeMap::new();
    for r in records
        .iter()
        .filter(|r| r.error.is_none() && r.verdict != Verdict::Indeterminate)
    {
        rows.entry(ordered_bits(r.omega)).or_default().push(r);
    }
    let mut curve = Vec::new();
    for row in rows.values_mut() {
        row.sort_by(|a, b| a.k.total_cmp(&b.k));
        if let Some(w) = row.windows(2).find(|w| w[0].verdict != w[1].verdict) {
            curve.push((0.5 * (w[0].k + w[1].k), w[0].omega));
        }
    }
    curve
}

/// Key that sorts like the float it encodes.
fn ordered_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

fn omega_k(records: &[StabilityRecord]) -> String {
    let frame = Frame::new(records.iter().map(|r| r.k), records.iter().map(|r| r.omega));
    let mut svg = String::new();
    header(&mut svg, "Modulational stability in the (k, ω) plane", &frame, "k", "ω");
    for r in records {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{}"/>"#,
            frame.px(r.k),
            frame.py(r.omega),
            verdict_color(r)
        );
    }
    polyline(&mut svg, &frame, &boundary(records), "black");
    let legend_y = TOP + 15.0;
    for (i, (label, color)) in [("S", "#1f77b4"), ("U", "#d62728")].iter().enumerate() {
        let x = WIDTH - RIGHT - 60.0 + 30.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.1}" cy="{:.1}" r="4" fill="{color}"/>"#,
            legend_y - 4.0
        );
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{legend_y:.1}">{label}</text>"#, x + 7.0);
    }
    svg.push_str("</svg>\n");
    svg
}

fn curve_color(label: &str) -> &'static str {
    match label {
        "R1" => "#1f77b4",
        "R2" => "#2ca02c",
        "R3" => "#ff7f0e",
        _ => "#d62728",
    }
}

fn capillary(points: &[ResonancePoint]) -> String {
    let frame = Frame::new(points.iter().map(|p| p.k_sqrt_t), points.iter().map(|p| p.k));
    let mut svg = String::new();
    header(&mut svg, "Resonance curves in the (k√T, k) plane", &frame, "k√T", "k");
    // Branches: the j-th root of a curve at each tension.
    let mut branches: BTreeMap<(&str, usize), Vec<(f64, f64)>> = BTreeMap::new();
    let mut by_tension: BTreeMap<(&str, u64), Vec<&ResonancePoint>> = BTreeMap::new();
    for p in points {
        by_tension
            .entry((p.curve.label(), ordered_bits(p.tension)))
            .or_default()
            .push(p);
    }
    for ((label, _), mut pts) in by_tension {
        pts.sort_by(|a, b| a.k.total_cmp(&b.k));
        for (j, p) in pts.iter().enumerate() {
            branches.entry((label, j)).or_default().push((p.k_sqrt_t, p.k));
        }
    }
    for ((label, _), pts) in &branches {
        let color = curve_color(label);
        polyline(&mut svg, &frame, pts, color);
        for &(x, y) in pts {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.1}" cy="{:.1}" r="1.5" fill="{color}"/>"#,
                frame.px(x),
                frame.py(y)
            );
        }
        let &(x, y) = pts.last().expect("branches are non-empty");
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{label}</text>"#,
            frame.px(x) + 4.0,
            frame.py(y) - 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// SVG text for the figure, or `None` when there is nothing to draw.
pub fn emit_plot(data: PlotData) -> Option<String> {
    match data {
        PlotData::OmegaK(r) if !r.is_empty() => Some(omega_k(r)),
        PlotData::Capillary(p) if !p.is_empty() => Some(capillary(p)),
        _ => None,
    }
}
