//! Suite reports: per-point deviations, census of skipped points, and the
//! pass rule.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::{tol, Error, Result};

/// Why a grid point was skipped instead of asserted on.
pub mod census {
    pub const DEGENERATE_PARALLEL: &str = "A = 0";
    pub const ZERO_REL_CURVATURE: &str = "K = 0";
    pub const MEAN_EQUALS_GAUSS: &str = "H^2 = K";
    pub const ZERO_MEAN: &str = "H = 0";
    pub const ZERO_BRANCH: &str = "kappa_i = 0";
    pub const UMBILIC: &str = "umbilic";
    pub const ZERO_MU: &str = "mu = 0";
}

/// Outcome of the per-point work of a sweep.
#[derive(Debug, Clone)]
pub enum PointOutcome {
    /// Worst deviation at this point plus any quantities worth reporting.
    Ok {
        deviation: f64,
        quantities: BTreeMap<String, f64>,
    },
    /// Skipped, with the census reason.
    Censused(String),
}

impl PointOutcome {
    pub fn ok(deviation: f64) -> PointOutcome {
        PointOutcome::Ok {
            deviation,
            quantities: BTreeMap::new(),
        }
    }

    /// Geometric errors at one grid point are recorded, not fatal.
    pub fn from_result(r: Result<PointOutcome>) -> PointOutcome {
        match r {
            Ok(o) => o,
            Err(Error::DegenerateParallel { .. }) => {
                PointOutcome::Censused(census::DEGENERATE_PARALLEL.to_string())
            }
            Err(e) => PointOutcome::Censused(e.kind_name().to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub u1: f64,
    pub u2: f64,
    pub deviation: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub quantities: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub censused: Option<String>,
}

/// Associatively mergeable accumulator for sweeps.
#[derive(Debug, Clone, Default)]
pub struct Accumulator {
    pub max_deviation: f64,
    pub dev_sum: f64,
    pub used: usize,
    pub censused: BTreeMap<String, usize>,
    pub points: Vec<PointRecord>,
    pub values: BTreeMap<String, Vec<f64>>,
}

impl Accumulator {
    pub fn push(&mut self, u: (f64, f64), outcome: PointOutcome) {
        match outcome {
            PointOutcome::Ok {
                deviation,
                quantities,
            } => {
                self.max_deviation = self.max_deviation.max(deviation);
                self.dev_sum += deviation;
                self.used += 1;
                for (k, v) in &quantities {
                    self.values.entry(k.clone()).or_default().push(*v);
                }
                self.points.push(PointRecord {
                    u1: u.0,
                    u2: u.1,
                    deviation,
                    quantities,
                    censused: None,
                });
            }
            PointOutcome::Censused(reason) => {
                *self.censused.entry(reason.clone()).or_default() += 1;
                self.points.push(PointRecord {
                    u1: u.0,
                    u2: u.1,
                    deviation: 0.0,
                    quantities: BTreeMap::new(),
                    censused: Some(reason),
                });
            }
        }
    }

    pub fn merge(mut self, other: Accumulator) -> Accumulator {
        self.max_deviation = self.max_deviation.max(other.max_deviation);
        self.dev_sum += other.dev_sum;
        self.used += other.used;
        for (k, v) in other.censused {
            *self.censused.entry(k).or_default() += v;
        }
        self.points.extend(other.points);
        for (k, mut v) in other.values {
            self.values.entry(k).or_default().append(&mut v);
        }
        self
    }

    pub fn collect(points: &[(f64, f64)], outcomes: Vec<PointOutcome>) -> Accumulator {
        points
            .iter()
            .zip(outcomes)
            .fold(Accumulator::default(), |mut acc, (&u, o)| {
                acc.push(u, o);
                acc
            })
    }

    pub fn censused_total(&self) -> usize {
        self.censused.values().sum()
    }

    pub fn mean_deviation(&self) -> f64 {
        if self.used == 0 {
            0.0
        } else {
            self.dev_sum / self.used as f64
        }
    }
}

/// Mean and maximum absolute departure from the mean over usable samples.
pub fn constancy(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 4 {
        return Err(Error::InsufficientSamples {
            have: values.len(),
            need: 4,
        });
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_dev = values.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    Ok((mean, max_dev))
}

/// One admissibility branch of a theorem suite (for example one of the two
/// Bonnet distances). A fully censused branch is reported, not failed.
#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub label: String,
    /// Relative distance of the branch; absent for pointwise branches whose
    /// distance varies with the point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_mean: Option<f64>,
    pub max_deviation: f64,
    pub points_used: usize,
    pub points_censused: usize,
    pub census: BTreeMap<String, usize>,
    pub fully_censused: bool,
    pub pass: bool,
}

impl BranchReport {
    pub fn from_accumulator(
        label: impl Into<String>,
        mu: Option<f64>,
        expected: Option<f64>,
        observed_mean: Option<f64>,
        acc: &Accumulator,
        total: usize,
        tolerance: f64,
    ) -> BranchReport {
        let censused = acc.censused_total();
        let fully = acc.used == 0;
        let pass = fully
            || (acc.max_deviation <= tolerance
                && (censused as f64) <= tol::CENSUS_FRACTION * total as f64);
        BranchReport {
            label: label.into(),
            mu,
            expected,
            observed_mean,
            max_deviation: acc.max_deviation,
            points_used: acc.used,
            points_censused: censused,
            census: acc.censused.clone(),
            fully_censused: fully,
            pass,
        }
    }
}

/// Grid-level result of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub surface: String,
    pub normalization: String,
    pub grid: [usize; 2],
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub points_total: usize,
    pub points_censused: usize,
    pub census: BTreeMap<String, usize>,
    /// Constants the suite identified (grid means, proportionality factors).
    pub constants: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchReport>,
    pub points: Vec<PointRecord>,
    pub pass: bool,
}

impl VerificationReport {
    /// The standard pass rule: deviations within tolerance and no more than
    /// the allowed fraction of censused points. Branch-structured suites
    /// additionally require every branch to pass (or be fully censused).
    pub fn finish(mut self) -> VerificationReport {
        let census_ok =
            (self.points_censused as f64) <= tol::CENSUS_FRACTION * self.points_total as f64;
        let branches_ok = self.branches.iter().all(|b| b.pass);
        self.pass = self.max_deviation <= self.tolerance && census_ok && branches_ok;
        self
    }
}
