//! Per-episode records and the metrics CSV.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "episode,steps,total_reward,epsilon,stuck,reannealed,mean_loss,wall_time_ms";

/// Summary of one training episode. `episode` counts from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub steps: usize,
    pub total_reward: f64,
    pub epsilon_at_end: f64,
    pub stuck_count: u32,
    pub reannealed_this_episode: bool,
    /// Mean loss over the episode's train steps; `None` when none ran.
    pub mean_loss: Option<f64>,
    pub timed_out: bool,
    pub wall_time_ms: u64,
}

/// Trailing mean with a window that grows from 1 at the start of the series.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    let mut out = Vec::with_capacity(values.len());
    let mut sum = 0.0;
    for (i, &v) in values.iter().enumerate() {
        sum += v;
        if i >= window {
            sum -= values[i - window];
        }
        let n = (i + 1).min(window);
        out.push(sum / n as f64);
    }
    out
}

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn csv_row(r: &EpisodeRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.episode,
        r.steps,
        format_sig6(r.total_reward),
        format_sig6(r.epsilon_at_end),
        r.stuck_count,
        u8::from(r.reannealed_this_episode),
        r.mean_loss.map(format_sig6).unwrap_or_default(),
        r.wall_time_ms
    )
}

/// Incremental CSV writer; every row is flushed as it is written.
pub struct MetricsWriter {
    out: BufWriter<File>,
    path: std::path::PathBuf,
}

impl MetricsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = Self {
            out: BufWriter::new(file),
            path: path.to_path_buf(),
        };
        writer.line(CSV_HEADER)?;
        Ok(writer)
    }

    pub fn write(&mut self, record: &EpisodeRecord) -> Result<()> {
        self.line(&csv_row(record))
    }

    fn line(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}")
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}

pub fn write_metrics_csv(records: &[EpisodeRecord], path: &Path) -> Result<()> {
    let mut writer = MetricsWriter::create(path)?;
    for r in records {
        writer.write(r)?;
    }
    Ok(())
}

/// Parses a metrics CSV. `timed_out` is not stored and reads back as `false`.
pub fn read_metrics_csv(path: &Path) -> Result<Vec<EpisodeRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |line: usize, message: String| Error::Config { line, message };
    match lines.next() {
        Some(Ok(h)) if h.trim() == CSV_HEADER => {}
        Some(Ok(h)) => return Err(bad(1, format!("unexpected header `{h}`"))),
        Some(Err(e)) => return Err(Error::io(path, e)),
        None => return Err(bad(1, "empty metrics file".into())),
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(bad(
                line_no,
                format!("expected 8 fields, got {}", fields.len()),
            ));
        }
        let num = |i: usize| -> Result<f64> {
            fields[i]
                .parse()
                .map_err(|_| bad(line_no, format!("bad number `{}`", fields[i])))
        };
        let int = |i: usize| -> Result<u64> {
            fields[i]
                .parse()
                .map_err(|_| bad(line_no, format!("bad integer `{}`", fields[i])))
        };
        records.push(EpisodeRecord {
            episode: int(0)? as usize,
            steps: int(1)? as usize,
            total_reward: num(2)?,
            epsilon_at_end: num(3)?,
            stuck_count: int(4)? as u32,
            reannealed_this_episode: int(5)? != 0,
            mean_loss: if fields[6].is_empty() {
                None
            } else {
                Some(num(6)?)
            },
            timed_out: false,
            wall_time_ms: int(7)?,
        });
    }
    Ok(records)
}
