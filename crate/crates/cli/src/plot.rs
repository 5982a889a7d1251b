//! The `plot` command: render the aggregate regret curves as a standalone
//! SVG (no scripts, no external assets, deterministic bytes).
//!
//! One `<polyline>` element per policy carries the mean curve; the shaded
//! `±2·stderr` band is a `<polygon>` underneath it. The x axis is `t` on a
//! log scale, the y axis mean regret, linear from zero.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Aggregate curve of one policy as read back from `aggregate.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyCurve {
    pub name: String,
    /// `(t, mean, stderr)` per checkpoint, in file order.
    pub points: Vec<(u64, f64, f64)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 58.0;

/// Read `<out_dir>/aggregate.csv` and write `<out_dir>/regret.svg`.
pub fn plot(out_dir: &Path) -> Result<PathBuf> {
    let csv_path = out_dir.join("aggregate.csv");
    let text = std::fs::read_to_string(&csv_path)
        .with_context(|| format!("reading {}", csv_path.display()))?;
    let curves = parse_aggregate_csv(&text)?;
    let svg = render_svg(&curves)?;
    let svg_path = out_dir.join("regret.svg");
    std::fs::write(&svg_path, svg).with_context(|| format!("writing {}", svg_path.display()))?;
    Ok(svg_path)
}

/// Parse the `policy,t,mean_regret,stderr,reps` table.
pub fn parse_aggregate_csv(text: &str) -> Result<Vec<PolicyCurve>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != "policy,t,mean_regret,stderr,reps" {
        bail!("unexpected aggregate CSV header: {header:?}");
    }
    let mut curves: Vec<PolicyCurve> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = || parts.next().with_context(|| format!("short row {}", lineno + 2));
        let name = next()?.to_string();
        let t: u64 = next()?.parse()?;
        let mean: f64 = next()?.parse()?;
        let stderr: f64 = next()?.parse()?;
        match curves.iter_mut().find(|c| c.name == name) {
            Some(c) => c.points.push((t, mean, stderr)),
            None => curves.push(PolicyCurve { name, points: vec![(t, mean, stderr)] }),
        }
    }
    Ok(curves)
}

/// Render the curves; errors on an empty curve set rather than producing an
/// empty chart.
pub fn render_svg(curves: &[PolicyCurve]) -> Result<String> {
    if curves.is_empty() || curves.iter().all(|c| c.points.is_empty()) {
        bail!("no curves to plot");
    }

    let t_min = curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)).min().unwrap();
    let t_max = curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)).max().unwrap();
    let y_max = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.1 + 2.0 * p.2))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(1e-9);

    let lx0 = (t_min as f64).log10();
    let lx1 = (t_max as f64).log10().max(lx0 + 1e-9);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |t: u64| MARGIN_LEFT + ((t as f64).log10() - lx0) / (lx1 - lx0) * plot_w;
    let y = |v: f64| MARGIN_TOP + plot_h - (v / (y_max * 1.05)) * plot_h;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    s.push_str(&format!(
        "<path d=\"M {x0:.2} {y1:.2} L {x0:.2} {y0:.2} L {x1:.2} {y0:.2}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));

    // Decade ticks on x.
    let mut decade = (t_min as f64).log10().ceil() as i32;
    while (10f64.powi(decade)) <= t_max as f64 {
        let t = 10f64.powi(decade) as u64;
        let xx = x(t);
        s.push_str(&format!(
            "<line x1=\"{xx:.2}\" y1=\"{y0:.2}\" x2=\"{xx:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            y1
        ));
        s.push_str(&format!(
            "<text x=\"{xx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">1e{decade}</text>\n",
            y0 + 20.0
        ));
        decade += 1;
    }
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">t (log scale)</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 14.0
    ));

    // Five even y ticks.
    for i in 0..=5 {
        let v = y_max * 1.05 * i as f64 / 5.0;
        let yy = y(v);
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{yy:.2}\" x2=\"{x0:.2}\" y2=\"{yy:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            x0 - 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.1}</text>\n",
            x0 - 9.0,
            yy + 4.0,
            v
        ));
    }
    s.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" transform=\"rotate(-90 18 {:.2})\" text-anchor=\"middle\">mean pseudo-regret</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));

    // Bands first so every curve draws on top.
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if curve.points.len() >= 2 {
            let mut pts = String::new();
            for &(t, m, se) in &curve.points {
                pts.push_str(&format!("{:.2},{:.2} ", x(t), y((m + 2.0 * se).min(y_max * 1.05))));
            }
            for &(t, m, se) in curve.points.iter().rev() {
                pts.push_str(&format!("{:.2},{:.2} ", x(t), y((m - 2.0 * se).max(0.0))));
            }
            s.push_str(&format!(
                "<polygon class=\"band\" points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
                pts.trim_end()
            ));
        }
    }
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> =
            curve.points.iter().map(|&(t, m, _)| format!("{:.2},{:.2}", x(t), y(m))).collect();
        s.push_str(&format!(
            "<polyline class=\"curve\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            pts.join(" ")
        ));
    }

    // Legend.
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let ly = MARGIN_TOP + 14.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 16.0;
        s.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            lx + 24.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            lx + 30.0,
            ly + 4.0,
            xml_escape(&curve.name)
        ));
    }

    s.push_str("</svg>\n");
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
