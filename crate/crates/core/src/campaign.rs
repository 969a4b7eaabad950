//! Randomised falsification campaign for the one-sided inequalities and the
//! weighted `|g|²` bounds.
//!
//! Trial `t` draws a weighted system from stream `(seed, t)` and checks, for
//! both a symmetrised real sum built from it and its pair spectrum:
//! the quadratic and linear Fejér averages, the positive-part average, both
//! bounds on `max g⁺`, the refined bound for the observed positive mass, and
//! `α + β ≤ 1`. The system itself is checked against both `|g|²` bounds.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bounds::theorem3_bounds;
use crate::fejer::{
    alpha_beta_from_values, alpha_refined_bound, lemma1_from_values, lemma2_from_values,
    max_positive_part, partial_sum_from_values, theorem1_bound, theorem2_bound,
    theorem2_rescaled_bound, InequalityCheck,
};
use crate::rng::{self, range_inclusive, unit_interval, ChaCha8Rng};
use crate::spectrum::{pair_spectrum, RealExponentialSum};
use crate::system::{EvaluationRange, WeightedSystem};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct CampaignConfig {
    pub trials: u64,
    pub n_max: u64,
    pub m_max: u64,
    pub seed: u64,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            Err(Error::InvalidConfig("trials must be at least 1"))
        } else if self.n_max == 0 {
            Err(Error::InvalidConfig("n-max must be at least 1"))
        } else if self.m_max == 0 {
            Err(Error::InvalidConfig("m-max must be at least 1"))
        } else {
            Ok(())
        }
    }
}

/// A failed check with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct Counterexample {
    pub trial: u64,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub m: u64,
    pub weights: Vec<f64>,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct CampaignSummary {
    pub config: CampaignConfig,
    pub passed: u64,
    pub failed: u64,
    pub checks: u64,
    pub first_failure: Option<Counterexample>,
}

impl CampaignSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Angles are uniform, except that one draw in four is a rational `k/q` with
/// `q ≤ 12` to exercise coincident and antipodal frequencies.
fn draw_angle(r: &mut ChaCha8Rng) -> f64 {
    if unit_interval(r) < 0.25 {
        let q = range_inclusive(r, 1, 12);
        range_inclusive(r, 0, q - 1) as f64 / q as f64
    } else {
        unit_interval(r)
    }
}

/// The weighted system and range for trial `t`.
pub fn trial_input(config: &CampaignConfig, trial: u64) -> (WeightedSystem, u64) {
    let mut r = rng::stream(config.seed, trial);
    let n = range_inclusive(&mut r, 1, config.n_max);
    let m = range_inclusive(&mut r, 1, config.m_max);
    let weights = (0..n)
        .map(|_| 0.05 + 1.95 * unit_interval(&mut r))
        .collect();
    let angles = (0..n).map(|_| draw_angle(&mut r)).collect();
    let system = WeightedSystem::new(weights, angles).expect("positive weights, finite angles");
    (system, m)
}

/// Real sum with `n` terms: the first weight as the constant when `n` is odd,
/// the rest as conjugate pairs.
pub fn symmetrised(system: &WeightedSystem) -> RealExponentialSum {
    let entries: Vec<(f64, f64)> = system.entries().collect();
    let (constant, rest) = if entries.len() % 2 == 1 {
        (entries[0].0, &entries[1..])
    } else {
        (0.0, &entries[..])
    };
    let half: Vec<(f64, f64)> = rest.iter().step_by(2).copied().collect();
    RealExponentialSum::symmetric(constant, &half)
}

struct Checker<'a> {
    trial: u64,
    m: u64,
    system: &'a WeightedSystem,
    checks: u64,
}

impl Checker<'_> {
    fn expect(
        &mut self,
        name: &str,
        check: InequalityCheck,
    ) -> core::result::Result<(), Counterexample> {
        self.checks += 1;
        if check.holds {
            Ok(())
        } else {
            Err(Counterexample {
                trial: self.trial,
                check: name.into(),
                lhs: check.lhs,
                rhs: check.rhs,
                m: self.m,
                weights: self.system.weights().to_vec(),
                angles: self.system.angles().to_vec(),
            })
        }
    }

    fn real_sum(
        &mut self,
        label: &str,
        g: &RealExponentialSum,
    ) -> core::result::Result<(), Counterexample> {
        let name = |what: &str| {
            let mut s = String::from(label);
            s.push(':');
            s.push_str(what);
            s
        };
        let values = match g.values(EvaluationRange::new(self.m).expect("m >= 1")) {
            Ok(v) => v,
            Err(_) => return self.expect(&name("realness"), InequalityCheck::new(-1.0, 0.0)),
        };
        let a = g.coefficient_sum();
        let b = g.coefficient_square_sum();
        let scale = g.abs_coefficient_sum();

        self.expect(&name("lemma1"), lemma1_from_values(&values, a, b))?;
        self.expect(&name("partial_sum"), partial_sum_from_values(&values, a))?;

        let ab = alpha_beta_from_values(&values, scale);
        self.expect(
            &name("alpha_beta"),
            InequalityCheck::new(1.0, ab.alpha + ab.beta),
        )?;

        let ceiling = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if ceiling <= 1e-12 * scale {
            return Ok(());
        }
        let lemma2 =
            lemma2_from_values(&values, a, b, ceiling).expect("ceiling is the observed max");
        self.expect(&name("lemma2"), lemma2)?;

        let top = max_positive_part(&values);
        let t1 = theorem1_bound(a, b, ceiling, self.m).expect("positive ceiling");
        self.expect(&name("theorem1"), InequalityCheck::new(top, t1))?;

        let t2 = theorem2_bound(a, b, ceiling, self.m);
        if t2.applicable {
            let label = if t2.formula == crate::FormulaId::T2a {
                "theorem2a"
            } else {
                "theorem2b"
            };
            self.expect(&name(label), InequalityCheck::new(top, t2.value))?;
        }
        if let Some(rescaled) = theorem2_rescaled_bound(a, b, ceiling, self.m) {
            self.expect(
                &name("theorem2b_rescaled"),
                InequalityCheck::new(top, rescaled),
            )?;
        }
        if ab.alpha > 0.0 {
            let refined = alpha_refined_bound(a, b, ceiling, self.m, ab.alpha);
            self.expect(&name("alpha_refined"), InequalityCheck::new(top, refined))?;
        }
        Ok(())
    }
}

/// Runs one trial, returning the number of checks performed.
pub fn run_trial(config: &CampaignConfig, trial: u64) -> core::result::Result<u64, Counterexample> {
    let (system, m) = trial_input(config, trial);
    let mut checker = Checker {
        trial,
        m,
        system: &system,
        checks: 0,
    };
    checker.real_sum("symmetric", &symmetrised(&system))?;
    if system.len() >= 2 {
        checker.real_sum("pair_spectrum", &pair_spectrum(&system))?;
    }

    let squares: Vec<f64> = system
        .sweep(1, m as i64)
        .map(|(_, v)| v.norm_sqr())
        .collect();
    let top = squares.iter().fold(0.0f64, |a, &b| a.max(b));
    let (i0, i1) = theorem3_bounds(&system.moments(), m);
    for bound in [i0, i1] {
        if bound.applicable {
            let name = if bound.formula == crate::FormulaId::T3i0 {
                "theorem3:i0"
            } else {
                "theorem3:i1"
            };
            checker.expect(name, InequalityCheck::new(top, bound.value))?;
        }
    }
    Ok(checker.checks)
}

/// Reduces per-trial outcomes (in any order) to a summary; the reported
/// counterexample is the one from the lowest trial index.
pub fn summarize(
    config: CampaignConfig,
    outcomes: impl IntoIterator<Item = (u64, core::result::Result<u64, Counterexample>)>,
) -> CampaignSummary {
    let mut summary = CampaignSummary {
        config,
        passed: 0,
        failed: 0,
        checks: 0,
        first_failure: None,
    };
    for (_, outcome) in outcomes {
        match outcome {
            Ok(checks) => {
                summary.passed += 1;
                summary.checks += checks;
            }
            Err(cx) => {
                summary.failed += 1;
                summary.checks += 1;
                if summary
                    .first_failure
                    .as_ref()
                    .is_none_or(|f| cx.trial < f.trial)
                {
                    summary.first_failure = Some(cx);
                }
            }
        }
    }
    summary
}

pub fn run_campaign(config: CampaignConfig) -> Result<CampaignSummary> {
    config.validate()?;
    Ok(summarize(
        config,
        (0..config.trials).map(|t| (t, run_trial(&config, t))),
    ))
}
