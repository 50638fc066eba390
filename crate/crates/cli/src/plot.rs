//! Minimal standalone SVG plots: line/scatter charts and heatmaps.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Solid,
    Dashed,
    Markers,
}

#[derive(Debug, Clone)]
struct Series {
    label: String,
    xs: Vec<f64>,
    ys: Vec<f64>,
    color: String,
    style: Style,
}

#[derive(Debug, Clone)]
struct Band {
    xs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    color: String,
}

#[derive(Debug, Clone)]
pub struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    log_x: bool,
    series: Vec<Series>,
    bands: Vec<Band>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    out
}

/// Axis range padded by 5%; degenerate spans are widened to ±0.5.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x: false,
            series: Vec::new(),
            bands: Vec::new(),
        }
    }

    pub fn log_x(mut self) -> Self {
        self.log_x = true;
        self
    }

    pub fn series(mut self, label: &str, xs: &[f64], ys: &[f64], color: &str, style: Style) -> Self {
        self.series.push(Series { label: label.into(), xs: xs.to_vec(), ys: ys.to_vec(), color: color.into(), style });
        self
    }

    /// Shaded region between `lower` and `upper`.
    pub fn band(mut self, xs: &[f64], lower: &[f64], upper: &[f64], color: &str) -> Self {
        self.bands.push(Band { xs: xs.to_vec(), lower: lower.to_vec(), upper: upper.to_vec(), color: color.into() });
        self
    }

    fn tx(&self, x: f64) -> f64 {
        if self.log_x {
            x.log10()
        } else {
            x
        }
    }

    pub fn render(&self) -> String {
        let keep = |x: f64| !self.log_x || x > 0.0;
        let xs = self
            .series
            .iter()
            .flat_map(|s| s.xs.iter())
            .chain(self.bands.iter().flat_map(|b| b.xs.iter()))
            .copied()
            .filter(|&x| keep(x))
            .map(|x| self.tx(x));
        let (x0, x1) = range(xs);
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.ys.iter())
            .chain(self.bands.iter().flat_map(|b| b.lower.iter().chain(&b.upper)))
            .copied();
        let (y0, y1) = range(ys);

        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (self.tx(x) - x0) / (x1 - x0) * pw;
        let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        let mut svg = header(&self.title);
        frame(&mut svg, &self.x_label, &self.y_label);

        for t in nice_ticks(y0, y1) {
            let y = py(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e5e5e5"/>"##,
                LEFT + pw
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let x_ticks: Vec<(f64, String)> = if self.log_x {
            (x0.ceil() as i32..=x1.floor() as i32).map(|e| (10f64.powi(e), tick_label(10f64.powi(e)))).collect()
        } else {
            nice_ticks(x0, x1).into_iter().map(|t| (t, tick_label(t))).collect()
        };
        for (t, label) in x_ticks {
            let x = px(t);
            let _ =
                writeln!(svg, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#e5e5e5"/>"##, TOP + ph);
            let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 18.0);
        }

        let _ = writeln!(svg, r#"<g clip-path="url(#plot-area)">"#);
        for b in &self.bands {
            let upper = b.xs.iter().zip(&b.upper).filter(|(x, _)| keep(**x));
            let lower = b.xs.iter().zip(&b.lower).filter(|(x, _)| keep(**x)).rev();
            let pts: Vec<String> = upper.chain(lower).map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polygon points="{}" fill="{}" fill-opacity="0.2" stroke="none"/>"#,
                pts.join(" "),
                b.color
            );
        }
        for s in &self.series {
            let pts: Vec<(f64, f64)> =
                s.xs.iter()
                    .zip(&s.ys)
                    .filter(|(x, y)| keep(**x) && y.is_finite())
                    .map(|(&x, &y)| (px(x), py(y)))
                    .collect();
            match s.style {
                Style::Markers => {
                    for (x, y) in pts {
                        let _ = writeln!(
                            svg,
                            r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{}" fill-opacity="0.7"/>"#,
                            s.color
                        );
                    }
                }
                Style::Solid | Style::Dashed => {
                    let dash = if s.style == Style::Dashed { r#" stroke-dasharray="6,4""# } else { "" };
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                        path.join(" "),
                        s.color
                    );
                }
            }
        }
        let _ = writeln!(svg, "</g>");

        for (k, s) in self.series.iter().enumerate() {
            let y = TOP + 12.0 + 18.0 * k as f64;
            let x = WIDTH - RIGHT + 12.0;
            match s.style {
                Style::Markers => {
                    let _ =
                        writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#, x + 10.0, y - 4.0, s.color);
                }
                _ => {
                    let dash = if s.style == Style::Dashed { r#" stroke-dasharray="6,4""# } else { "" };
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="1.5"{dash}/>"#,
                        y - 4.0,
                        x + 20.0,
                        y - 4.0,
                        s.color
                    );
                }
            }
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, x + 26.0, escape(&s.label));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn header(title: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{}" height="{}"/></clipPath></defs>"#,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );
    svg
}

fn frame(svg: &mut String, x_label: &str, y_label: &str) {
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let _ = writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + ph / 2.0,
        escape(y_label)
    );
}

/// Sequential blue→yellow colour map on [0, 1].
fn colormap(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (STOPS.len() - 1) as f64;
    let k = (pos.floor() as usize).min(STOPS.len() - 2);
    let f = pos - k as f64;
    let (a, b) = (STOPS[k], STOPS[k + 1]);
    let mix = |u: f64, v: f64| (u + f * (v - u)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Heatmap with one cell per (x, y) grid point; `values[iy][ix]`.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let (lo, hi) = values
        .iter()
        .flatten()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let span = if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let cw = pw / xs.len().max(1) as f64;
    let ch = ph / ys.len().max(1) as f64;

    let mut svg = header(title);
    for (iy, row) in values.iter().enumerate() {
        for (ix, v) in row.iter().enumerate() {
            // y increases upward
            let x = LEFT + ix as f64 * cw;
            let y = TOP + ph - (iy + 1) as f64 * ch;
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{}</title></rect>"#,
                cw + 0.3,
                ch + 0.3,
                colormap((v - lo) / span),
                tick_label(*v)
            );
        }
    }
    frame(&mut svg, x_label, y_label);
    let every = |n: usize| n.div_ceil(8).max(1);
    for (ix, x) in xs.iter().enumerate().step_by(every(xs.len())) {
        let cx = LEFT + (ix as f64 + 0.5) * cw;
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            tick_label(*x)
        );
    }
    for (iy, y) in ys.iter().enumerate().step_by(every(ys.len())) {
        let cy = TOP + ph - (iy as f64 + 0.5) * ch;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            cy + 4.0,
            tick_label(*y)
        );
    }
    // colour bar
    let bx = WIDTH - RIGHT + 24.0;
    let steps = 32;
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let y = TOP + ph - (k + 1) as f64 * ph / steps as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{bx:.2}" y="{y:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            ph / steps as f64 + 0.3,
            colormap(t)
        );
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + 22.0, TOP + 8.0, tick_label(hi));
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + 22.0, TOP + ph, tick_label(lo));
    svg.push_str("</svg>\n");
    svg
}
