//! CSV and JSON report formats.
//!
//! Numbers in CSV are written with 17 significant digits; JSON uses the
//! shortest round-trip representation. Non-finite values become `inf`,
//! `-inf` or `NaN` in CSV and `null` in JSON.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use fracperiod_core::fodesolve::SolveResult;
use fracperiod_core::periodicity::DefectReport;
use fracperiod_core::GridFunction;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rows under a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, c)| ((*k).to_owned(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => json_string(&self.to_json_value()),
        }
    }
}

pub fn json_string<T: Serialize + ?Sized>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// `t,value` rows, one per node.
pub fn grid_function_table(g: &GridFunction) -> Table {
    let mut t = Table::new(&["t", "value"]);
    for (x, v) in g.iter() {
        t.push(vec![x.into(), v.into()]);
    }
    t
}

/// Reads a `t,value` CSV on a uniform grid starting at 0.
pub fn read_grid_function(path: &Path) -> anyhow::Result<GridFunction> {
    #[derive(serde::Deserialize)]
    struct Row {
        t: f64,
        value: f64,
    }
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = r.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "value" {
        bail!("{}: expected header `t,value`", path.display());
    }
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (i, row) in r.deserialize::<Row>().enumerate() {
        let row = row.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        ts.push(row.t);
        vs.push(row.value);
    }
    if ts.first() != Some(&0.0) {
        bail!("{}: the first sample must be at t = 0", path.display());
    }
    GridFunction::from_samples(&ts, vs).with_context(|| format!("{}: not a uniform grid function", path.display()))
}

/// `T_tilde,sup_defect,l2_defect,window_lo,window_hi`.
pub fn defect_table(reports: &[DefectReport]) -> Table {
    let mut t = Table::new(&["T_tilde", "sup_defect", "l2_defect", "window_lo", "window_hi"]);
    for r in reports {
        t.push(vec![
            r.candidate_period.into(),
            r.sup_defect.into(),
            r.l2_defect.into(),
            r.window.0.into(),
            r.window.1.into(),
        ]);
    }
    t
}

/// `t,u` rows of a trajectory.
pub fn trajectory_table(r: &SolveResult) -> Table {
    let mut t = Table::new(&["t", "u"]);
    for (x, u) in r.trajectory.iter() {
        t.push(vec![x.into(), u.into()]);
    }
    t
}

/// Solver metadata written next to the trajectory.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SolveSidecar {
    pub alpha: f64,
    pub scheme: String,
    pub h: f64,
    pub corrector_iterations: u32,
    pub max_residual: f64,
}

impl From<&SolveResult> for SolveSidecar {
    fn from(r: &SolveResult) -> Self {
        SolveSidecar {
            alpha: r.alpha.get(),
            scheme: r.scheme.to_string(),
            h: r.trajectory.grid().step(),
            corrector_iterations: r.corrector_iterations,
            max_residual: r.max_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracperiod_core::UniformGrid;

    #[test]
    fn grid_function_round_trips_through_csv() {
        let g = UniformGrid::new(3.0, 30)
            .unwrap()
            .sample(|t| (1.0 + t).ln() / 7.0)
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.csv");
        std::fs::write(&p, grid_function_table(&g).to_csv().unwrap()).unwrap();
        let back = read_grid_function(&p).unwrap();
        assert_eq!(back.values(), g.values());
        assert_eq!(back.grid().step(), g.grid().step());
    }

    #[test]
    fn non_finite_cells() {
        let mut t = Table::new(&["x"]);
        t.push(vec![f64::INFINITY.into()]);
        t.push(vec![Cell::Empty]);
        assert_eq!(t.to_csv().unwrap(), "x\ninf\n\"\"\n");
        assert_eq!(t.to_json_value(), serde_json::json!([{"x": null}, {"x": null}]));
    }

    #[test]
    fn reader_rejects_wrong_header_and_spacing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.csv");
        std::fs::write(&p, "time,value\n0,1\n1,2\n2,3\n").unwrap();
        assert!(read_grid_function(&p).is_err());
        std::fs::write(&p, "t,value\n0,1\n1,2\n2.5,3\n").unwrap();
        assert!(read_grid_function(&p).is_err());
    }
}
