//! One-parameter sweeps over a family.

use photon_npt_core::FamilySpec;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::input::InputSource;
use crate::report::{analyze, AnalysisReport};

/// Upper bound on grid size; larger requests are almost certainly typos.
pub const MAX_GRID_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    decimals: Option<i32>,
}

/// Digits after the point in a plain decimal literal, `None` for exponent notation.
fn decimals(s: &str) -> Option<i32> {
    if s.contains(['e', 'E']) {
        return None;
    }
    Some(s.split_once('.').map_or(0, |(_, frac)| frac.len() as i32))
}

impl Grid {
    /// Parses `param=start:stop:step`. The stop value is included when the grid
    /// lands on it (up to rounding).
    pub fn parse(raw: &str) -> Result<Self> {
        let bad = |why: &str| CliError::BadFlag(format!("--sweep `{raw}`: {why}"));
        let (param, range) = raw.split_once('=').ok_or_else(|| bad("expected param=start:stop:step"))?;
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let [start, stop, step] = parts[..] else { return Err(bad("expected start:stop:step")) };
        let number =
            |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad("not a finite number"));
        let param = param.trim().to_string();
        if param.is_empty() {
            return Err(bad("empty parameter name"));
        }
        let (a, b, h) = (number(start)?, number(stop)?, number(step)?);
        if h <= 0.0 {
            return Err(bad("step must be positive"));
        }
        let decimals = [start, stop, step].iter().map(|s| decimals(s)).try_fold(0, |acc, d| d.map(|d| acc.max(d)));
        Ok(Self { param, start: a, stop: b, step: h, decimals })
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let span = (self.stop - self.start) / self.step;
        if span < -1e-9 {
            return Err(CliError::EmptyGrid {
                param: self.param.clone(),
                start: self.start,
                stop: self.stop,
                step: self.step,
            });
        }
        let count = (span + 1e-9).floor() as usize + 1;
        if count > MAX_GRID_POINTS {
            return Err(CliError::BadFlag(format!("--sweep has {count} points, limit {MAX_GRID_POINTS}")));
        }
        // snap to the literal's precision so 0.05 * 3 prints as 0.15
        let snap = |x: f64| match self.decimals {
            Some(d) if d <= 15 => {
                let scale = 10f64.powi(d);
                (x * scale).round() / scale
            }
            _ => x,
        };
        Ok((0..count).map(|i| snap(self.start + i as f64 * self.step)).collect())
    }
}

/// Analyses every grid point, in parallel on `jobs` threads (all cores when `None`).
/// Results keep grid order. The first failing point, by grid order, aborts the sweep.
pub fn run_sweep(
    base: &FamilySpec,
    grid: &Grid,
    max_order: Option<usize>,
    tol: f64,
    jobs: Option<usize>,
) -> Result<Vec<(f64, AnalysisReport)>> {
    if base.params.contains_key(&grid.param) {
        return Err(CliError::BadFlag(format!("`{}` is both swept and fixed by --param", grid.param)));
    }
    let values = grid.values()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::BadFlag(format!("--jobs: {e}")))?;
    let results: Vec<Result<AnalysisReport>> = pool.install(|| {
        values
            .par_iter()
            .map(|&v| analyze(&InputSource::Family(base.clone().with_param(&grid.param, v)), max_order, tol))
            .collect()
    });
    values
        .into_iter()
        .zip(results)
        .map(|(value, r)| {
            r.map(|report| (value, report)).map_err(|source| CliError::SweepPoint {
                param: grid.param.clone(),
                value,
                source: Box::new(source),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid::parse("lambda=0.05:0.5:0.05").unwrap();
        let v = g.values().unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v[2], 0.15);
        assert_eq!(v[9], 0.5);
        assert_eq!(Grid::parse("m=1:5:1").unwrap().values().unwrap(), [1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(Grid::parse("x=1:1:1").unwrap().values().unwrap(), [1.0]);
        assert_eq!(Grid::parse("x=1e-3:3e-3:1e-3").unwrap().values().unwrap().len(), 3);
    }

    #[test]
    fn grid_errors() {
        assert!(matches!(Grid::parse("x=2:1:0.5").unwrap().values(), Err(CliError::EmptyGrid { .. })));
        for bad in ["x", "x=1:2", "x=1:2:0", "x=1:2:-1", "=1:2:1", "x=a:2:1", "x=0:1e9:1e-9"] {
            let r = Grid::parse(bad).and_then(|g| g.values());
            assert!(matches!(r, Err(CliError::BadFlag(_))), "{bad}");
        }
    }
}
