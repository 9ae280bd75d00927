//! Static SVG plots of coefficient trajectories.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array1;
use sparsepath::SolutionPath64;

use crate::args::XAxis;
use crate::error::{CliError, CliResult};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Horizontal coordinates for each snapshot: `t` or `‖θ(t)‖₁`.
pub fn axis_values(times: &[f64], theta: &[Array1<f64>], x_axis: XAxis) -> Vec<f64> {
    match x_axis {
        XAxis::T => times.to_vec(),
        XAxis::L1 => theta.iter().map(|th| th.iter().map(|v| v.abs()).sum()).collect(),
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * f64::from(i) / 4.0).collect()
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Renders one polyline per coefficient against `x`.
pub fn render_svg(x: &[f64], theta: &[Array1<f64>], x_label: &str) -> CliResult<String> {
    if x.is_empty() || theta.is_empty() {
        return Err(CliError::Data("cannot plot an empty path".into()));
    }
    let p = theta[0].len();
    let (x_lo, x_hi) = padded(
        x.iter().copied().fold(f64::INFINITY, f64::min),
        x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let all = theta.iter().flat_map(|th| th.iter().copied());
    let (y_lo, y_hi) = all.fold((0.0f64, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let (y_lo, y_hi) = padded(y_lo, y_hi);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |v: f64| MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for v in ticks(x_lo, x_hi) {
        let px = sx(v);
        let bottom = MARGIN_TOP + plot_h;
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            bottom + 20.0,
            tick_label(v)
        );
    }
    for v in ticks(y_lo, y_hi) {
        let py = sy(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_LEFT}" y2="{py:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            py + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{x_label}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 15 {:.2})">coefficient</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    for j in 0..p {
        let mut pts = String::new();
        for (xi, th) in x.iter().zip(theta.iter()) {
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", sx(*xi), sy(th[j]));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{pts}"/>"#,
            PALETTE[j % PALETTE.len()]
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn tick_label(v: f64) -> String {
    let r = if v.abs() < 1e-12 { 0.0 } else { v };
    format!("{r:.3}")
}

/// Writes the coefficient trajectories of `path` to `out_file`.
pub fn emit_plot(path: &SolutionPath64, x_axis: XAxis, out_file: &Path) -> CliResult<()> {
    let svg = render_path(&path.times, &path.theta, x_axis)?;
    std::fs::write(out_file, svg)?;
    Ok(())
}

pub(crate) fn render_path(times: &[f64], theta: &[Array1<f64>], x_axis: XAxis) -> CliResult<String> {
    let x = axis_values(times, theta, x_axis);
    let label = match x_axis {
        XAxis::T => "t",
        XAxis::L1 => "‖θ‖₁",
    };
    render_svg(&x, theta, label)
}
