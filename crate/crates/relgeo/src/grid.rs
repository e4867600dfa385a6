//! Parameter grids and the data-parallel sweep primitive.
//!
//! Grid samples sit at cell centers, so a grid never touches the (open)
//! domain boundary. Per-point work across all suites is pure; the sweep maps
//! it over the points with rayon when the `parallel` feature is enabled (the
//! default) and falls back to a plain iterator otherwise. [`ExecMode`] lets
//! benches and tests force the sequential path for comparison.

use std::str::FromStr;

use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Rows sample the u1 interval, columns the u2 interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> GridSpec {
        GridSpec { rows, cols }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell-center sample points in row-major order.
    pub fn points(&self, domain: [(f64, f64); 2]) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.len());
        for i in 0..self.rows {
            let t1 = (i as f64 + 0.5) / self.rows as f64;
            let u1 = domain[0].0 + t1 * (domain[0].1 - domain[0].0);
            for j in 0..self.cols {
                let t2 = (j as f64 + 0.5) / self.cols as f64;
                let u2 = domain[1].0 + t2 * (domain[1].1 - domain[1].0);
                pts.push((u1, u2));
            }
        }
        pts
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parse `"16x16"`.
    fn from_str(s: &str) -> Result<GridSpec> {
        let (r, c) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::Parse(format!("bad grid `{s}`, expected RxC")))?;
        let rows = r
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad grid rows `{r}`")))?;
        let cols = c
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad grid cols `{c}`")))?;
        if rows == 0 || cols == 0 {
            return Err(Error::Parse("grid must be at least 1x1".into()));
        }
        Ok(GridSpec { rows, cols })
    }
}

/// Execution strategy for grid sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

/// Map pure per-point work over sample points. Output order matches input
/// order regardless of the execution mode.
pub fn map_points<T, F>(mode: ExecMode, points: &[(f64, f64)], f: F) -> Vec<T>
where
    T: Send,
    F: Fn((f64, f64)) -> T + Sync,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => points.par_iter().map(|&u| f(u)).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => points.iter().map(|&u| f(u)).collect(),
        ExecMode::Sequential => points.iter().map(|&u| f(u)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_dims() {
        let g: GridSpec = "3x5".parse().unwrap();
        assert_eq!(g, GridSpec::new(3, 5));
        assert_eq!(g.len(), 15);
        assert!("x".parse::<GridSpec>().is_err());
        assert!("0x4".parse::<GridSpec>().is_err());
        assert!("4".parse::<GridSpec>().is_err());
    }

    #[test]
    fn points_stay_interior() {
        let g = GridSpec::new(4, 4);
        let dom = [(0.0, 1.0), (-2.0, 2.0)];
        let pts = g.points(dom);
        assert_eq!(pts.len(), 16);
        for (u1, u2) in pts {
            assert!(u1 > 0.0 && u1 < 1.0);
            assert!(u2 > -2.0 && u2 < 2.0);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = GridSpec::new(8, 8);
        let pts = g.points([(0.0, 1.0), (0.0, 1.0)]);
        let f = |(a, b): (f64, f64)| (a * b * 1e6).round() as i64;
        assert_eq!(
            map_points(ExecMode::Parallel, &pts, f),
            map_points(ExecMode::Sequential, &pts, f)
        );
    }
}
