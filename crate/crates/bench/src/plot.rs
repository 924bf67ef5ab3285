//! Log-log SVG plots rendered straight from the CSV outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bounds::BoundsRow;
use crate::sweep::SweepRow;
use crate::{write_file, LabError, LabResult};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Bounds,
    Sweep,
}

pub struct Series {
    pub name: String,
    /// Drawn as a polyline.
    pub line: Vec<(f64, f64)>,
    /// Drawn as faint dots.
    pub scatter: Vec<(f64, f64)>,
}

struct LogAxes {
    x: (f64, f64),
    y: (f64, f64),
}

impl LogAxes {
    fn fit(series: &[Series]) -> Option<LogAxes> {
        let pts = series.iter().flat_map(|s| s.line.iter().chain(&s.scatter));
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for &(px, py) in pts.filter(|(a, b)| *a > 0.0 && *b > 0.0) {
            x = (x.0.min(px.log10()), x.1.max(px.log10()));
            y = (y.0.min(py.log10()), y.1.max(py.log10()));
        }
        if !x.0.is_finite() {
            return None;
        }
        let pad = |(lo, hi): (f64, f64)| {
            (
                lo.floor(),
                if hi.ceil() > lo.floor() {
                    hi.ceil()
                } else {
                    lo.floor() + 1.0
                },
            )
        };
        Some(LogAxes { x: pad(x), y: pad(y) })
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x.log10() - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y.log10() - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a log-log chart. Points with a non-positive coordinate are skipped.
pub fn render(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> LabResult<String> {
    let axes = LogAxes::fit(series).ok_or_else(|| LabError::Usage("nothing to plot".into()))?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, x1) = (MARGIN_L, WIDTH - MARGIN_R);
    let (y0, y1) = (HEIGHT - MARGIN_B, MARGIN_T);
    for e in axes.x.0 as i32..=axes.x.1 as i32 {
        let x = axes.px(10f64.powi(e));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{y0}" x2="{x:.1}" y2="{y1}" stroke="#ddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{e}</text>"#,
            y0 + 18.0
        );
    }
    for e in axes.y.0 as i32..=axes.y.1 as i32 {
        let y = axes.py(10f64.powi(e));
        let _ = writeln!(
            s,
            r##"<line x1="{x0}" y1="{y:.1}" x2="{x1}" y2="{y:.1}" stroke="#ddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(20 {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        for &(x, y) in ser.scatter.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0) {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{:.1}" r="2" fill="{colour}" fill-opacity="0.35"/>"#,
                axes.px(x),
                axes.py(y)
            );
        }
        let pts: Vec<String> = ser
            .line
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .map(|&(x, y)| format!("{:.1},{:.1}", axes.px(x), axes.py(y)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
                pts.join(" ")
            );
        }
        let ly = MARGIN_T + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_R + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn bounds_series(rows: &[BoundsRow]) -> Vec<Series> {
    let curve = |name: &str, f: fn(&BoundsRow) -> f64| Series {
        name: name.to_string(),
        line: rows.iter().map(|r| (r.epsilon, f(r))).collect(),
        scatter: Vec::new(),
    };
    vec![
        curve("FAE upper", |r| r.fae_upper),
        curve("IQAE upper", |r| r.iqae_upper),
        curve("IQAE (CP)", |r| r.cp_upper),
        curve("MLAE lower", |r| r.mlae_lower),
        curve("CMC (s=1)", |r| r.cmc),
    ]
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Per-algorithm series for one distribution: repetitions as dots, medians per
/// budget point as the line. Error rows are skipped.
pub fn sweep_series(rows: &[SweepRow], distribution: &str) -> Vec<Series> {
    let mut names: Vec<&str> = Vec::new();
    for r in rows.iter().filter(|r| r.distribution == distribution) {
        if !names.contains(&r.algorithm.as_str()) {
            names.push(&r.algorithm);
        }
    }
    names
        .into_iter()
        .map(|name| {
            let mine: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.distribution == distribution && r.algorithm == name && !r.is_error())
                .collect();
            let mut budgets: Vec<f64> = Vec::new();
            for r in &mine {
                if !budgets.contains(&r.budget_value) {
                    budgets.push(r.budget_value);
                }
            }
            let line = budgets
                .iter()
                .map(|&b| {
                    let at: Vec<&&SweepRow> = mine.iter().filter(|r| r.budget_value == b).collect();
                    let x = median(at.iter().map(|r| r.grover_applications.unwrap_or(0) as f64).collect());
                    let y = median(at.iter().map(|r| r.relative_error_pct.unwrap_or(0.0)).collect());
                    (x, y)
                })
                .collect();
            let scatter = mine
                .iter()
                .map(|r| {
                    (
                        r.grover_applications.unwrap_or(0) as f64,
                        r.relative_error_pct.unwrap_or(0.0),
                    )
                })
                .collect();
            Series {
                name: name.to_string(),
                line,
                scatter,
            }
        })
        .collect()
}

pub fn detect_kind(path: &Path) -> LabResult<PlotKind> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    match headers.get(0) {
        Some("epsilon") => Ok(PlotKind::Bounds),
        Some("row_id") => Ok(PlotKind::Sweep),
        other => Err(LabError::Schema {
            path: path.to_path_buf(),
            reason: format!("unrecognised first column {other:?}"),
        }),
    }
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}

/// Renders every chart for the CSV at `csv_path` into `out_dir` and returns the
/// written paths. An empty CSV is an error and writes nothing.
pub fn plot_csv(csv_path: &Path, out_dir: &Path) -> LabResult<Vec<PathBuf>> {
    let kind = detect_kind(csv_path)?;
    let empty = || LabError::Schema {
        path: csv_path.to_path_buf(),
        reason: "no data rows".into(),
    };
    let mut charts: Vec<(PathBuf, String)> = Vec::new();
    match kind {
        PlotKind::Bounds => {
            let mut r = csv::Reader::from_path(csv_path)?;
            let rows = r
                .deserialize()
                .collect::<Result<Vec<BoundsRow>, _>>()
                .map_err(|e| LabError::Schema {
                    path: csv_path.to_path_buf(),
                    reason: e.to_string(),
                })?;
            if rows.is_empty() {
                return Err(empty());
            }
            let svg = render(
                &format!("Sample-complexity bounds (alpha = {})", rows[0].alpha),
                "target error epsilon",
                "oracle queries",
                &bounds_series(&rows),
            )?;
            charts.push((out_dir.join("bounds.svg"), svg));
        }
        PlotKind::Sweep => {
            let rows = crate::sweep::read_csv(csv_path)?;
            if rows.is_empty() {
                return Err(empty());
            }
            let mut dists: Vec<&str> = Vec::new();
            for r in &rows {
                if !dists.contains(&r.distribution.as_str()) {
                    dists.push(&r.distribution);
                }
            }
            for d in dists {
                let svg = render(
                    &format!("{} {}: relative error vs Grover applications", d, rows[0].statistic),
                    "Grover applications (samples for CMC)",
                    "relative error (%)",
                    &sweep_series(&rows, d),
                )?;
                charts.push((out_dir.join(format!("sweep_{}.svg", slug(d))), svg));
            }
        }
    }
    let mut written = Vec::new();
    for (path, svg) in charts {
        write_file(&path, svg.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
