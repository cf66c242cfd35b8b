use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

/// At most 12 significant digits in shortest form; exponent form for very
/// small or large magnitudes; no `-0`.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else if rounded.abs() < 1e-5 || rounded.abs() >= 1e15 {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

/// `x` rounded to 12 significant digits as a JSON number.
pub fn num12(x: f64) -> Value {
    if x.is_finite() {
        json!(fmt12(x).parse::<f64>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

/// Named columns of numbers.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt12(x)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(|&x| num12(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

pub enum Artifact {
    Table(Table),
    Json(Value),
}

impl Artifact {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Self::Table(t), Format::Csv) => t.to_csv(),
            (Self::Table(t), Format::Json) => pretty(&t.to_json()),
            (Self::Json(v), _) => pretty(v),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// FNV-1a; stable across builds and platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn output_path(config: &RunConfig) -> PathBuf {
    config.out.clone().unwrap_or_else(|| {
        let hash = fnv1a(format!("{config:?}").as_bytes());
        PathBuf::from("out").join(format!("{}-{hash:016x}.{}", config.command.name(), config.format.ext()))
    })
}

pub fn write(config: &RunConfig, artifact: &Artifact) -> Result<PathBuf> {
    let path = output_path(config);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(&path, artifact.render(config.format)).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
