//! The five subcommands as plain functions from arguments to an [`Outcome`].

use std::fmt;
use std::time::Instant;

use powersum_core::bounds::{
    best_lower_bound, ceil_envelope, ceil_envelope_bound, classical_bounds, corollary1, corollary2,
    corollary3, phi, phi_bound, theorem4,
};
use powersum_core::campaign::CampaignConfig;
use powersum_core::optimizer::InitKind;
use powersum_core::primes::is_prime;
use powersum_core::{BoundKind, BoundResult, Error, OptimizerConfig};
use serde_json::{json, Value};

use crate::parallel;
use crate::report::{Execution, RunReport};
use crate::table::{format_number, Table};

/// Largest prime accepted by `construct`; the sweep costs `O(p³)`.
pub const MAX_CERTIFIED_PRIME: u64 = 100_000;
/// Largest number of rows `phi` will emit.
pub const MAX_PHI_ROWS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A checked mathematical claim failed.
    Violation,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
        }
    }
}

/// Invalid arguments; exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub report: RunReport,
    pub table: Table,
    /// Human-readable lines for the terminal.
    pub summary: Vec<String>,
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: u64,
    pub workers: usize,
}

impl Context {
    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        command: &str,
        started: Instant,
        inputs: Value,
        outputs: Value,
        status: Status,
        table: Table,
        summary: Vec<String>,
    ) -> Outcome {
        let execution = Execution {
            workers: if self.workers == 0 {
                rayon::current_num_threads()
            } else {
                self.workers
            },
            wall_time_seconds: started.elapsed().as_secs_f64(),
        };
        Outcome {
            status,
            report: RunReport::new(command, Some(self.seed), inputs, outputs, execution),
            table,
            summary,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundsArgs {
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub j: Option<u64>,
    pub alpha: Option<f64>,
    pub corollary3: bool,
    /// Ratio for the CNS row; defaults to `m/n` (or 2 when `m ≤ n`).
    pub c: Option<f64>,
}

fn notes(b: &BoundResult, best: bool) -> String {
    let mut parts = Vec::new();
    if best {
        parts.push("best lower bound".to_owned());
    }
    if b.kind == BoundKind::Upper {
        parts.push("upper bound".to_owned());
    }
    if b.asymptotic {
        parts.push("asymptotic, in units of sqrt(n)".to_owned());
    }
    if b.squared && b.magnitude().is_none() {
        parts.push("vacuous: negative squared bound".to_owned());
    }
    if let Some(q) = b.inputs.q {
        parts.push(format!("q = {q}"));
    }
    if b.formula == powersum_core::FormulaId::CNS {
        if let Some(c) = b.inputs.c {
            parts.push(format!("c = {}", format_number(c)));
        }
    }
    let unmet: Vec<&str> = b.unsatisfied().map(|c| c.name.as_str()).collect();
    if !unmet.is_empty() {
        parts.push(format!("unmet: {}", unmet.join("; ")));
    }
    parts.join("; ")
}

fn square(n: u64) -> Result<u64, UsageError> {
    n.checked_mul(n)
        .filter(|&s| s <= 1 << 52)
        .map_or_else(|| usage(format!("n = {n} is too large")), Ok)
}

pub fn bounds(ctx: &Context, args: &BoundsArgs) -> Result<Outcome, UsageError> {
    let started = Instant::now();
    let mut rows: Vec<BoundResult> = Vec::new();
    let mut best = None;

    if let Some(alpha) = args.alpha {
        rows.push(phi_bound(alpha)?);
        rows.push(ceil_envelope_bound(alpha));
    }
    match args.n {
        Some(0) => return usage("n must be at least 1"),
        Some(n) if args.corollary3 => {
            square(n)?;
            let (lower, upper) = corollary3(n);
            rows.push(lower);
            rows.push(upper);
        }
        Some(n) => {
            let sq = square(n)?;
            let m = match (args.m, args.j, args.alpha) {
                (Some(_), Some(_), _) => return usage("--m and --j are mutually exclusive"),
                (Some(0), _, _) => return usage("m must be at least 1"),
                (Some(m), None, _) => m,
                (None, Some(j), _) => sq
                    .checked_add(j)
                    .map_or_else(|| usage("n^2 + j overflows"), Ok)?,
                (None, None, Some(alpha)) => (alpha * sq as f64).floor() as u64,
                (None, None, None) => sq,
            };
            if m > 1 << 52 {
                return usage("m is too large");
            }
            if m == sq {
                rows.push(corollary2(n));
            }
            if m >= sq {
                rows.push(theorem4(n, m - sq));
            }
            let (i, ii) = corollary1(n, m);
            rows.push(i);
            rows.push(ii);
            let c = match args.c {
                Some(c) if !(c.is_finite() && c > 0.0) => return usage("c must be positive"),
                Some(c) => c,
                None if m > n => m as f64 / n as f64,
                None => 2.0,
            };
            rows.extend(classical_bounds(n, m, c));
            best = Some(best_lower_bound(n, m));
        }
        None if args.corollary3 => return usage("--corollary3 needs --n"),
        None if args.m.is_some() || args.j.is_some() => return usage("--m and --j need --n"),
        None if args.alpha.is_none() => return usage("give --n, --alpha, or both"),
        None => {}
    }

    let mut table = Table::new(&["formula", "applicable", "value", "range_top", "notes"]);
    let mut lines = Vec::new();
    for b in &rows {
        let is_best = best.as_ref().is_some_and(|w| w.formula == b.formula);
        let value = b.magnitude().map(format_number).unwrap_or_default();
        table.push(vec![
            b.formula.to_string(),
            b.applicable.to_string(),
            value.clone(),
            b.range_top.map(|t| t.to_string()).unwrap_or_default(),
            notes(b, is_best),
        ]);
        lines.push(format!(
            "{:<12} {:<5} {}",
            b.formula.as_str(),
            if b.applicable { "yes" } else { "no" },
            if value.is_empty() { "-" } else { &value }
        ));
    }

    let inputs = json!({
        "n": args.n, "m": args.m, "j": args.j, "alpha": args.alpha,
        "corollary3": args.corollary3, "c": args.c,
    });
    let outputs = json!({ "rows": to_value(&rows), "best": best.as_ref().map(to_value) });
    Ok(ctx.finish("bounds", started, inputs, outputs, Status::Ok, table, lines))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyArgs {
    pub trials: u64,
    pub n_max: u64,
    pub m_max: u64,
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> Result<Outcome, UsageError> {
    let started = Instant::now();
    if args.m_max > 1_000_000 || args.n_max > 1000 {
        return usage("n-max is limited to 1000 and m-max to 1000000");
    }
    let config = CampaignConfig {
        trials: args.trials,
        n_max: args.n_max,
        m_max: args.m_max,
        seed: ctx.seed,
    };
    let summary = parallel::run_campaign(config, &parallel::pool(ctx.workers))?;
    let status = if summary.all_passed() {
        Status::Ok
    } else {
        Status::Violation
    };

    let mut table = Table::new(&["trials", "passed", "failed", "checks"]);
    table.push(vec![
        args.trials.to_string(),
        summary.passed.to_string(),
        summary.failed.to_string(),
        summary.checks.to_string(),
    ]);
    let mut lines = vec![format!("{}/{} pass", summary.passed, args.trials)];
    if let Some(cx) = &summary.first_failure {
        lines.push(format!(
            "first counterexample: trial {} failed {} (lhs {} < rhs {})",
            cx.trial, cx.check, cx.lhs, cx.rhs
        ));
        lines.push(serde_json::to_string(cx).expect("serializable"));
    }
    let inputs = json!({ "trials": args.trials, "nMax": args.n_max, "mMax": args.m_max });
    Ok(ctx.finish(
        "verify",
        started,
        inputs,
        to_value(&summary),
        status,
        table,
        lines,
    ))
}

pub fn construct(ctx: &Context, p: u64) -> Result<Outcome, UsageError> {
    let started = Instant::now();
    if p < 3 {
        return usage(format!("p = {p}: need a prime p >= 3"));
    }
    if !is_prime(p) {
        return usage(format!("p = {p} is not prime"));
    }
    if p > MAX_CERTIFIED_PRIME {
        return usage(format!("p is limited to {MAX_CERTIFIED_PRIME}"));
    }
    let inputs = json!({ "p": p });
    let header = [
        "p",
        "n",
        "range_top",
        "observed_max",
        "theoretical_max",
        "argmax",
        "gauss",
        "principal_nonzero",
        "zero",
        "max_deviation",
    ];
    let mut table = Table::new(&header);
    match parallel::certify(p, &parallel::pool(ctx.workers)) {
        Ok(c) => {
            table.push(vec![
                c.p.to_string(),
                c.n.to_string(),
                c.range_top.to_string(),
                format_number(c.observed_max),
                format_number(c.theoretical_max),
                c.argmax.to_string(),
                c.per_nu_class.gauss.to_string(),
                c.per_nu_class.principal_nonzero.to_string(),
                c.per_nu_class.zero.to_string(),
                format_number(c.max_deviation),
            ]);
            let lines = vec![format!(
                "observedMax {} over nu = 1..{} (theoretical {})",
                format_number(c.observed_max),
                c.range_top,
                format_number(c.theoretical_max)
            )];
            let outputs = json!({ "certificate": to_value(&c) });
            Ok(ctx.finish(
                "construct",
                started,
                inputs,
                outputs,
                Status::Ok,
                table,
                lines,
            ))
        }
        Err(Error::CertificateViolation {
            nu,
            value,
            expected,
        }) => {
            let lines = vec![format!(
                "certificate violated at nu = {nu}: |S| = {value}, expected {expected}"
            )];
            let outputs =
                json!({ "violation": { "nu": nu, "value": value, "expected": expected } });
            Ok(ctx.finish(
                "construct",
                started,
                inputs,
                outputs,
                Status::Violation,
                table,
                lines,
            ))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarmStart {
    None,
    /// Gauss-sum system when `n + 1` is prime, otherwise none.
    Auto,
    RootsOfUnity,
    Montgomery,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeArgs {
    pub n: u64,
    pub m: u64,
    pub restarts: u64,
    pub iterations: u64,
    pub step: f64,
    pub step_decay: f64,
    pub warm_start: WarmStart,
    pub check_gradient: bool,
}

impl OptimizeArgs {
    pub fn new(n: u64, m: u64) -> Self {
        let d = OptimizerConfig::new(n, m);
        Self {
            n,
            m,
            restarts: d.restarts,
            iterations: d.iterations,
            step: d.step,
            step_decay: d.step_decay,
            warm_start: WarmStart::None,
            check_gradient: false,
        }
    }

    pub fn config(&self, seed: u64) -> OptimizerConfig {
        let mut c = OptimizerConfig::new(self.n, self.m)
            .with_seed(seed)
            .with_restarts(self.restarts)
            .with_iterations(self.iterations);
        c.step = self.step;
        c.step_decay = self.step_decay;
        c.check_gradient = self.check_gradient;
        c.warm_start = match self.warm_start {
            WarmStart::None => None,
            WarmStart::Auto => return c.with_auto_warm_start(),
            WarmStart::RootsOfUnity => Some(InitKind::RootsOfUnity),
            WarmStart::Montgomery => Some(InitKind::Montgomery),
        };
        c
    }
}

pub fn optimize(ctx: &Context, args: &OptimizeArgs) -> Result<Outcome, UsageError> {
    let started = Instant::now();
    if args.n > 64 || args.m > 1_000_000 {
        return usage("n is limited to 64 and m to 1000000");
    }
    let config = args.config(ctx.seed);
    let report = parallel::minimize(&config, &parallel::pool(ctx.workers))?;
    let status = if report.sandwich_ok {
        Status::Ok
    } else {
        Status::Violation
    };

    let mut table = Table::new(&[
        "n",
        "m",
        "restarts",
        "iterations",
        "best_value",
        "best_restart",
        "lower_bound",
        "lower_formula",
        "sandwich_ok",
    ]);
    table.push(vec![
        args.n.to_string(),
        args.m.to_string(),
        args.restarts.to_string(),
        args.iterations.to_string(),
        format_number(report.best_value),
        report.best_restart.to_string(),
        format_number(report.lower_bound_used.value),
        report.lower_bound_used.formula.to_string(),
        report.sandwich_ok.to_string(),
    ]);
    let mut lines = vec![
        format!("bestValue {}", format_number(report.best_value)),
        format!(
            "lower bound {} ({})",
            format_number(report.lower_bound_used.value),
            report.lower_bound_used.formula
        ),
        format!(
            "sandwich {}",
            if report.sandwich_ok { "ok" } else { "VIOLATED" }
        ),
    ];
    if let Some(e) = report.gradient_check_max_error {
        lines.push(format!("gradient check max relative error {e:.3e}"));
    }
    lines.push(report.disclaimer.clone());
    let inputs = to_value(&config);
    Ok(ctx.finish(
        "optimize",
        started,
        inputs,
        to_value(&report),
        status,
        table,
        lines,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiArgs {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub step: f64,
}

/// Grid `α_min + i·step` for `i = 0, 1, …` up to `α_max`, with `α_max`
/// appended when the step does not land on it.
pub fn phi_grid(args: &PhiArgs) -> Result<Vec<f64>, UsageError> {
    let PhiArgs {
        alpha_min,
        alpha_max,
        step,
    } = *args;
    if !(alpha_min.is_finite() && alpha_max.is_finite() && step.is_finite()) {
        return usage("alpha bounds and step must be finite");
    }
    if alpha_min < 1.0 {
        return usage(format!(
            "alpha-min = {alpha_min}: the envelope is defined for alpha >= 1"
        ));
    }
    if alpha_min > alpha_max {
        return usage("alpha-min exceeds alpha-max");
    }
    if step <= 0.0 {
        return usage("step must be positive");
    }
    let span = (alpha_max - alpha_min) / step;
    if span >= MAX_PHI_ROWS as f64 {
        return usage(format!("more than {MAX_PHI_ROWS} rows"));
    }
    // Absorb rounding in the quotient so an exact multiple keeps its endpoint.
    let count = (span * (1.0 + 1e-12)).floor() as u64;
    let mut grid: Vec<f64> = (0..=count)
        .map(|i| (alpha_min + i as f64 * step).min(alpha_max))
        .collect();
    if let Some(&last) = grid.last() {
        if alpha_max - last > 1e-9 * step {
            grid.push(alpha_max);
        } else {
            *grid.last_mut().unwrap() = alpha_max;
        }
    }
    Ok(grid)
}

/// First grid interval where the curve decreases or jumps by more than the
/// envelope's slope allows (`Φ' ≤ 2/α²`).
pub fn phi_curve_defect(grid: &[f64], values: &[f64]) -> Option<usize> {
    grid.windows(2).zip(values.windows(2)).position(|(a, v)| {
        let rise = v[1] - v[0];
        rise < -1e-15 || rise > 2.0 * (a[1] - a[0]) / (a[0] * a[0]) + 1e-12
    })
}

pub fn phi_curve(ctx: &Context, args: &PhiArgs) -> Result<Outcome, UsageError> {
    let started = Instant::now();
    let grid = phi_grid(args)?;
    let values: Vec<f64> = grid.iter().map(|&a| phi(a)).collect::<Result<_, _>>()?;
    let defect = phi_curve_defect(&grid, &values);

    let mut table = Table::new(&["alpha", "phi", "sqrt_phi", "ceil_envelope"]);
    for (&a, &v) in grid.iter().zip(&values) {
        table.push(vec![
            format_number(a),
            format_number(v),
            format_number(v.sqrt()),
            format_number(ceil_envelope(a)),
        ]);
    }
    let (status, mut lines) = match defect {
        None => (
            Status::Ok,
            vec![format!("{} rows, monotone and continuous", grid.len())],
        ),
        Some(i) => (
            Status::Violation,
            vec![format!(
                "curve check failed between alpha = {} and {}",
                grid[i],
                grid[i + 1]
            )],
        ),
    };
    if status == Status::Violation {
        table.rows.clear();
        lines.push("no rows written".into());
    }
    let inputs =
        json!({ "alphaMin": args.alpha_min, "alphaMax": args.alpha_max, "step": args.step });
    let outputs = json!({
        "rows": grid.iter().zip(&values).map(|(&a, &v)| json!({
            "alpha": a, "phi": v, "sqrtPhi": v.sqrt(), "ceilEnvelope": ceil_envelope(a),
        })).collect::<Vec<_>>(),
        "curveOk": defect.is_none(),
    });
    Ok(ctx.finish("phi", started, inputs, outputs, status, table, lines))
}
