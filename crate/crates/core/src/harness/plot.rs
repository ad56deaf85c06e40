//! Self-contained SVG training plots: rewards with their moving average on
//! top, the ε trace below.

use std::fmt::Write as _;
use std::path::Path;

use super::metrics::{moving_average, EpisodeRecord};
use crate::{Error, Result};

const WIDTH: f64 = 960.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const REWARD_TOP: f64 = 30.0;
const REWARD_HEIGHT: f64 = 320.0;
const EPS_TOP: f64 = 400.0;
const EPS_HEIGHT: f64 = 160.0;
const HEIGHT: f64 = 600.0;

struct Panel {
    top: f64,
    height: f64,
    y_min: f64,
    y_max: f64,
}

impl Panel {
    fn y(&self, value: f64) -> f64 {
        let span = self.y_max - self.y_min;
        let frac = if span > 0.0 {
            (value - self.y_min) / span
        } else {
            0.5
        };
        self.top + self.height * (1.0 - frac)
    }
}

fn x_at(i: usize, n: usize) -> f64 {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    if n <= 1 {
        MARGIN_LEFT + plot_w / 2.0
    } else {
        MARGIN_LEFT + plot_w * i as f64 / (n - 1) as f64
    }
}

fn polyline(svg: &mut String, values: &[f64], panel: &Panel, stroke: &str, width: f64) {
    let n = values.len();
    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{:.2},{:.2}", x_at(i, n), panel.y(v)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#,
        points.join(" ")
    );
}

fn frame(svg: &mut String, panel: &Panel, label: &str) {
    let right = WIDTH - MARGIN_RIGHT;
    let bottom = panel.top + panel.height;
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        panel.top,
        right - MARGIN_LEFT,
        panel.height
    );
    for (value, y) in [(panel.y_max, panel.top), (panel.y_min, bottom)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            trim(value)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN_LEFT}" y="{}" font-size="13">{label}</text>"#,
        panel.top - 8.0
    );
}

fn trim(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Renders the plot for `records` using a trailing moving-average `window`.
pub fn render_reward_plot(records: &[EpisodeRecord], window: usize) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidInput("cannot plot an empty run".into()));
    }
    let rewards: Vec<f64> = records.iter().map(|r| r.total_reward).collect();
    let smooth = moving_average(&rewards, window);
    let eps: Vec<f64> = records.iter().map(|r| r.epsilon_at_end).collect();
    let lo = rewards.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let reward_panel = Panel {
        top: REWARD_TOP,
        height: REWARD_HEIGHT,
        y_min: lo,
        y_max: hi,
    };
    let eps_panel = Panel {
        top: EPS_TOP,
        height: EPS_HEIGHT,
        y_min: 0.0,
        y_max: 1.0,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    frame(
        &mut svg,
        &reward_panel,
        &format!("total reward per episode (moving average over {window})"),
    );
    polyline(&mut svg, &rewards, &reward_panel, "#bbbbbb", 1.0);
    polyline(&mut svg, &smooth, &reward_panel, "#1f4e99", 2.0);
    frame(&mut svg, &eps_panel, "epsilon at episode end");
    polyline(&mut svg, &eps, &eps_panel, "#b03a2e", 1.5);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">episode 1 … {}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        records.len()
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_reward_plot(records: &[EpisodeRecord], window: usize, path: &Path) -> Result<()> {
    let svg = render_reward_plot(records, window)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
