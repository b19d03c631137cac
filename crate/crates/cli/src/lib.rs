//! Figure tables, CSV output and scalar queries on top of `entcost`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use entcost::formulas::{
    dephasing_cost, dephasing_distillable, epolarizing_cost, pure_amp_cost, pure_amp_distillable,
    pure_loss_cost, pure_loss_distillable, wh_bounds,
};
use entcost::measures::epolarizing_coherent_info_max;
use entcost::rains::{epolarizing_choi, solve_rains, RainsProblem, DEFAULT_MAX_ITER, DEFAULT_TOL_BITS};

pub mod query;

pub const DEFAULT_GRID: usize = 101;
pub const DEFAULT_GRID_FIG4: usize = 51;
pub const DEFAULT_SEED: u64 = 42;
/// Significant digits written to CSV files.
pub const CSV_DIGITS: usize = 9;
/// Grid resolution for the coherent-information maximization in figure 4.
pub const COHERENT_INFO_GRID: usize = 101;
pub const WH_MAX_D: usize = 30;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] entcost::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 2 usage, 3 solver non-convergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Lib(e) => match e.root() {
                entcost::Error::NoConvergence { .. } => 3,
                entcost::Error::Json(_) => 4,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Recorded for reproducibility; the current figures are deterministic.
    pub seed: u64,
    /// Recognized keys: `rains_tol_bits`, `rains_max_iter`.
    pub tolerances: BTreeMap<String, f64>,
    /// Grid size; `None` selects the per-figure default.
    pub grid_points: Option<usize>,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tolerances: BTreeMap::new(),
            grid_points: None,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if let Some(n) = self.grid_points {
            if n < 2 {
                return Err(CliError::Usage(format!("grid needs at least 2 points, got {n}")));
            }
        }
        for (k, v) in &self.tolerances {
            let ok = match k.as_str() {
                "rains_tol_bits" => *v > 0.0,
                "rains_max_iter" => *v >= 1.0 && v.fract() == 0.0,
                _ => return Err(CliError::Usage(format!("unknown tolerance key {k:?}"))),
            };
            if !ok {
                return Err(CliError::Usage(format!("bad value {v} for {k}")));
            }
        }
        Ok(())
    }

    fn points(&self, id: u8) -> usize {
        self.grid_points
            .unwrap_or(if id == 4 { DEFAULT_GRID_FIG4 } else { DEFAULT_GRID })
    }
}

/// Named columns of equal length; the first column is the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub figure_id: u8,
    columns: Vec<(String, Vec<f64>)>,
}

impl FigureTable {
    pub fn new(figure_id: u8, columns: Vec<(String, Vec<f64>)>) -> CliResult<Self> {
        let Some((_, grid)) = columns.first() else {
            return Err(CliError::Usage("table has no columns".into()));
        };
        if grid.is_empty() {
            return Err(CliError::Usage("empty grid".into()));
        }
        if let Some((name, _)) = columns.iter().find(|(_, c)| c.len() != grid.len()) {
            return Err(CliError::Usage(format!("column {name} length differs from the grid")));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("grid is not strictly increasing".into()));
        }
        Ok(Self { figure_id, columns })
    }

    pub fn grid(&self) -> &[f64] {
        &self.columns[0].1
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.grid().len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.names().collect::<Vec<_>>().join(",");
        out.push('\n');
        for i in 0..self.rows() {
            for (k, (_, col)) in self.columns.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&format_sig(col[i], CSV_DIGITS));
            }
            out.push('\n');
        }
        out
    }
}

pub fn emit_csv(t: &FigureTable, path: &Path) -> CliResult<()> {
    std::fs::write(path, t.to_csv()).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Decimal rendering with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), v);
    let exp: i64 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    let mut s = String::new();
    write!(s, "{v:.decimals$}").expect("writing to a String");
    s
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 })
        .collect()
}

fn map_grid(grid: &[f64], f: impl Fn(f64) -> entcost::Result<f64>) -> CliResult<Vec<f64>> {
    Ok(grid.iter().map(|&x| f(x)).collect::<entcost::Result<_>>()?)
}

/// Data behind figures 2 through 6.
pub fn figure(id: u8, cfg: &RunConfig) -> CliResult<FigureTable> {
    cfg.validate()?;
    let n = cfg.points(id);
    let col = |name: &str, v: Vec<f64>| (name.to_string(), v);
    let columns = match id {
        2 => {
            let rows = (2..=WH_MAX_D).map(wh_bounds).collect::<entcost::Result<Vec<_>>>()?;
            vec![
                col("d", rows.iter().map(|r| r.d as f64).collect()),
                col("cost_lower", rows.iter().map(|r| r.cost_lower).collect()),
                col("cost_upper", rows.iter().map(|r| r.cost_upper).collect()),
                col("cost_exact", rows.iter().map(|r| r.cost_exact.unwrap_or(f64::NAN)).collect()),
                col("distillable_upper", rows.iter().map(|r| r.distillable_upper).collect()),
            ]
        }
        3 => {
            let q = linspace(0.0, 1.0, n);
            vec![
                col("cost", map_grid(&q, dephasing_cost)?),
                col("distillable", map_grid(&q, dephasing_distillable)?),
                col("q", q),
            ]
        }
        4 => {
            let q = linspace(0.0, 1.0, n);
            let tol = cfg.tolerances.get("rains_tol_bits").copied().unwrap_or(DEFAULT_TOL_BITS);
            let max_iter = cfg
                .tolerances
                .get("rains_max_iter")
                .map_or(DEFAULT_MAX_ITER, |v| *v as usize);
            let rains = map_grid(&q, |x| {
                let at = |e| entcost::Error::AtParameter { q: x, source: Box::new(e) };
                let mut p = RainsProblem::new(epolarizing_choi(2, x).map_err(at)?);
                p.tol_bits = tol;
                p.max_iter = max_iter;
                Ok(solve_rains(&p).map_err(at)?.value_bits)
            })?;
            vec![
                col("cost", map_grid(&q, |x| epolarizing_cost(2, x))?),
                col("rains", rains),
                col(
                    "coherent_info",
                    map_grid(&q, |x| Ok(epolarizing_coherent_info_max(2, x, COHERENT_INFO_GRID)?.1))?,
                ),
                col("q", q),
            ]
        }
        5 => {
            let eta = linspace(0.01, 0.99, n);
            vec![
                col("cost", map_grid(&eta, pure_loss_cost)?),
                col("distillable", map_grid(&eta, pure_loss_distillable)?),
                col("eta", eta),
            ]
        }
        6 => {
            let g: Vec<f64> = (1..=n).map(|k| 1.0 + 9.0 * k as f64 / n as f64).collect();
            vec![
                col("cost", map_grid(&g, pure_amp_cost)?),
                col("distillable", map_grid(&g, pure_amp_distillable)?),
                col("G", g),
            ]
        }
        _ => return Err(CliError::Usage(format!("no figure {id}; expected 2 to 6"))),
    };
    let mut columns = columns;
    if id != 2 {
        columns.rotate_right(1);
    }
    FigureTable::new(id, columns)
}
