//! Numerical verification suites.
//!
//! Every suite returns [`CheckRecord`]s; ordinary records must pass and
//! negative controls must fail.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub mod checks;
pub mod family;
pub mod lipschitz;
pub mod record;
pub mod rough;

use checks::*;
use family::{FamilyKind, PathFamily};
use lipschitz::LipschitzConfig;
pub use record::CheckRecord;
use rough::PairFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Embeddings,
    Characterization,
    Distances,
    Lipschitz,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Algebra, Suite::Embeddings, Suite::Characterization, Suite::Distances, Suite::Lipschitz, Suite::All];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Embeddings => "embeddings",
            Suite::Characterization => "characterization",
            Suite::Distances => "distances",
            Suite::Lipschitz => "lipschitz",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown suite '{s}', expected one of algebra, embeddings, characterization, distances, lipschitz, all")))
    }
}

/// Family sizes and grid sizes of a suite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteScale {
    pub algebra_trials: usize,
    pub oracle_trials: usize,
    pub family_count: usize,
    pub family_intervals: usize,
    pub quadrature_intervals: usize,
    pub sobolev_count: usize,
    pub sobolev_intervals: usize,
    pub pair_count: usize,
    pub pair_intervals: usize,
    pub lipschitz_pairs: usize,
    pub lipschitz_intervals: usize,
}

impl SuiteScale {
    pub fn full() -> Self {
        Self {
            algebra_trials: 500,
            oracle_trials: 200,
            family_count: 100,
            family_intervals: 64,
            quadrature_intervals: 1024,
            sobolev_count: 50,
            sobolev_intervals: 512,
            pair_count: 100,
            pair_intervals: 32,
            lipschitz_pairs: 50,
            lipschitz_intervals: 64,
        }
    }

    /// Small sizes for smoke tests.
    pub fn quick() -> Self {
        Self {
            algebra_trials: 40,
            oracle_trials: 20,
            family_count: 6,
            family_intervals: 24,
            quadrature_intervals: 256,
            sobolev_count: 4,
            sobolev_intervals: 128,
            pair_count: 6,
            pair_intervals: 16,
            lipschitz_pairs: 8,
            lipschitz_intervals: 16,
        }
    }
}

pub const DELTAS: [f64; 2] = [0.4, 0.6];
pub const PS: [f64; 3] = [3.0, 5.0, 8.0];

/// Families checked by the embedding and characterization suites.
fn test_families(scale: &SuiteScale, seed: u64) -> Vec<PathFamily> {
    let half = scale.family_count / 2;
    vec![
        PathFamily::new(FamilyKind::RandomWalk, half, scale.family_intervals, 2, seed),
        PathFamily::new(FamilyKind::FractionalLike(0.6), scale.family_count - half, scale.family_intervals, 2, seed + 1),
    ]
}

pub fn run_algebra(seed: u64, scale: &SuiteScale) -> Result<Vec<CheckRecord>> {
    let mut out = check_algebra(seed, scale.algebra_trials);
    out.extend(check_superadditivity_controls(40));
    out.extend(check_oracle_equivalence(seed, scale.oracle_trials));
    out.extend(check_cc_calibration(seed));
    Ok(out)
}

pub fn run_embeddings(seed: u64, scale: &SuiteScale) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for fam in test_families(scale, seed) {
        for delta in DELTAS {
            for p in PS {
                out.extend(check_embedding_chain(&fam, delta, p)?);
            }
        }
    }
    let fourier = PathFamily::new(FamilyKind::SmoothFourier, 8, scale.quadrature_intervals, 2, seed + 2);
    for p in [2.0, 4.0] {
        out.extend(check_bounded_variation_identity(&fourier, p, 0.01)?);
    }
    let sob = PathFamily::new(FamilyKind::RandomWalk, scale.sobolev_count, scale.sobolev_intervals, 2, seed + 3);
    out.push(check_sobolev_nikolskii(&sob, 0.3, 0.45, 4.0, 0.05)?);
    for kind in [FamilyKind::Zigzag, FamilyKind::SmoothFourier] {
        let fam = PathFamily::new(kind, 10, 256, 2, seed + 4);
        out.extend(check_riesz_limit(&fam, 0.5, &[8.0, 16.0, 32.0, 64.0], 0.05)?);
    }
    out.push(check_reversed_variation_control(&PathFamily::new(FamilyKind::Zigzag, 5, 64, 1, seed + 5))?);
    Ok(out)
}

pub fn run_characterization(seed: u64, scale: &SuiteScale) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for fam in test_families(scale, seed) {
        for delta in DELTAS {
            for p in PS {
                out.extend(check_riesz_characterization(&fam, delta, p)?);
            }
        }
    }
    Ok(out)
}

pub fn run_distances(seed: u64, scale: &SuiteScale) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let pairs = PairFamily::new(FamilyKind::RandomWalk, scale.pair_count, scale.pair_intervals, 2, seed);
    for delta in DELTAS {
        let depth = (1.0 / delta).floor() as usize;
        for p in PS {
            out.extend(rough::check_distance_equivalences(&pairs, delta, p, depth)?);
        }
    }
    let control = PairFamily::new(FamilyKind::RandomWalk, scale.pair_count.min(20), scale.pair_intervals, 2, seed + 1);
    out.extend(rough::check_control_function(&control, 0.45, 4.0, 2)?);
    Ok(out)
}

pub fn run_lipschitz(seed: u64, scale: &SuiteScale) -> Result<Vec<CheckRecord>> {
    let mut out = vec![lipschitz::check_exp_closed_form()?];
    out.extend(lipschitz::check_convergence_orders()?);
    out.push(lipschitz::check_trivial_ratio()?);
    out.push(lipschitz::check_linear_closed_form_ratio()?);
    out.extend(lipschitz::run_lipschitz_suite(&LipschitzConfig::rough(scale.lipschitz_pairs, scale.lipschitz_intervals, seed))?);
    out.extend(lipschitz::run_lipschitz_suite(&LipschitzConfig::bounded_variation(
        scale.lipschitz_pairs,
        scale.lipschitz_intervals,
        seed,
    ))?);
    Ok(out)
}

pub fn run_suite_scaled(suite: Suite, seed: u64, scale: &SuiteScale) -> Result<Vec<CheckRecord>> {
    match suite {
        Suite::Algebra => run_algebra(seed, scale),
        Suite::Embeddings => run_embeddings(seed, scale),
        Suite::Characterization => run_characterization(seed, scale),
        Suite::Distances => run_distances(seed, scale),
        Suite::Lipschitz => run_lipschitz(seed, scale),
        Suite::All => {
            let mut out = Vec::new();
            for s in &Suite::ALL[..5] {
                log::info!("running suite {s}");
                out.extend(run_suite_scaled(*s, seed, scale)?);
            }
            Ok(out)
        }
    }
}

/// Runs a suite at full scale.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckRecord>> {
    run_suite_scaled(suite, seed, &SuiteScale::full())
}

/// Ids of records that did not behave as intended.
pub fn failures(records: &[CheckRecord]) -> Vec<&str> {
    records.iter().filter(|r| !r.ok()).map(|r| r.id.as_str()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass() {
        let scale = SuiteScale::quick();
        let recs = run_suite_scaled(Suite::All, 7, &scale).unwrap();
        assert!(failures(&recs).is_empty(), "{:#?}", recs.iter().filter(|r| !r.ok()).collect::<Vec<_>>());
        assert!(recs.iter().filter(|r| r.expect_fail).count() >= 2);
    }
}
