//! Property campaigns: drive every decomposition and certificate check over
//! deterministic random instances and aggregate a reproducible report.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::block::aggregate_max;
use crate::clean::{
    almost_star_clean, clean_decompose, clean_decompose_blocks, invert_via_splitting,
    CertificateKind,
};
use crate::error::{Error, Result};
use crate::generate::{
    generate, generate_block, generate_projection, haar_unitary, Generator, PairStyle,
    ALL_GENERATORS,
};
use crate::kernel::operator_norm;
use crate::lattice::{join, meet, Projection};
use crate::matrix::ComplexMatrix;
use crate::pairs::{decompose_pair, difference_inverse};
use crate::rng::{derive_seed, SplitMix64};
use crate::scalar::Real;
use crate::tolerance::ToleranceProfile;

/// Campaign parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct CampaignConfig<T: Real> {
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub seed: u64,
    pub generators: Vec<Generator>,
    pub norm_scales: Vec<f64>,
    /// Applied to every dimension when present; per-dimension defaults
    /// otherwise (the default rank cutoff scales with the dimension).
    #[serde(default = "none_tolerance")]
    pub tolerance: Option<ToleranceProfile<T>>,
}

fn none_tolerance<T>() -> Option<ToleranceProfile<T>> {
    None
}

impl<T: Real> Default for CampaignConfig<T> {
    fn default() -> Self {
        CampaignConfig {
            dims: (1..=8).collect(),
            trials_per_dim: 200,
            seed: 0x5EED_C1EA_u64,
            generators: ALL_GENERATORS.to_vec(),
            norm_scales: vec![0.1, 0.49, 0.5, 0.51, 1.0, 10.0],
            tolerance: None,
        }
    }
}

impl<T: Real> CampaignConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.generators.is_empty() {
            return Err(Error::InternalInvariantViolation {
                detail: "campaign needs at least one dimension and one generator".into(),
            });
        }
        if self.trials_per_dim == 0 {
            return Err(Error::InternalInvariantViolation {
                detail: "trials_per_dim must be at least 1".into(),
            });
        }
        if self.dims.iter().any(|&d| d == 0) {
            return Err(Error::EmptyMatrix);
        }
        if self.norm_scales.is_empty() || self.norm_scales.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InternalInvariantViolation {
                detail: "norm_scales must be nonempty and positive".into(),
            });
        }
        if let Some(tol) = &self.tolerance {
            tol.validate()?;
        }
        Ok(())
    }

    fn profile_for(&self, dim: usize) -> ToleranceProfile<T> {
        self.tolerance.unwrap_or_else(|| ToleranceProfile::for_dim(dim))
    }
}

/// Aggregated outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub pass_count: u64,
    pub fail_count: u64,
    /// Smallest observed `threshold - measured`; negative means a failure.
    pub worst_slack: f64,
    /// The measured value attaining the worst slack.
    pub worst_value: f64,
}

/// Reproduction data for a failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureDump {
    pub check: String,
    pub dim: usize,
    pub generator: String,
    pub scale: f64,
    pub trial: usize,
    pub instance_seed: u64,
    pub measured: f64,
    pub threshold: f64,
    /// Matrix JSON of the instance (or of the pair) that failed.
    pub instance: serde_json::Value,
}

/// Deterministic campaign report. `wall_clock_secs` is informational and is
/// excluded from the determinism comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignReport {
    pub total_instances: u64,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<FailureDump>,
    pub wall_clock_secs: f64,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.fail_count == 0)
    }

    /// Field-by-field comparison with a numeric tolerance, ignoring the wall
    /// clock.
    pub fn numerically_close(&self, other: &CampaignReport, tol: f64) -> bool {
        if self.total_instances != other.total_instances
            || self.checks.len() != other.checks.len()
            || self.failures.len() != other.failures.len()
        {
            return false;
        }
        let close = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0);
        self.checks.iter().zip(&other.checks).all(|(a, b)| {
            a.name == b.name
                && a.pass_count == b.pass_count
                && a.fail_count == b.fail_count
                && close(a.worst_slack, b.worst_slack)
                && close(a.worst_value, b.worst_value)
        }) && self.failures.iter().zip(&other.failures).all(|(a, b)| {
            a.check == b.check
                && a.dim == b.dim
                && a.generator == b.generator
                && a.trial == b.trial
                && a.instance_seed == b.instance_seed
                && close(a.measured, b.measured)
                && a.instance == b.instance
        })
    }
}

impl std::fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "campaign: {} instances", self.total_instances)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<26} pass {:>7}  fail {:>4}  worst slack {:+.3e}",
                c.name, c.pass_count, c.fail_count, c.worst_slack
            )?;
        }
        write!(
            f,
            "{} ({} failures, {:.2}s)",
            if self.passed() { "ALL CHECKS PASS" } else { "CHECK FAILURES" },
            self.failures.len(),
            self.wall_clock_secs
        )
    }
}

struct Entry {
    check: &'static str,
    measured: f64,
    threshold: f64,
}

struct TrialResult {
    entries: Vec<Entry>,
    context: TrialContext,
}

#[derive(Clone)]
struct TrialContext {
    dim: usize,
    generator: String,
    scale: f64,
    trial: usize,
    instance_seed: u64,
    instance: serde_json::Value,
}

struct Recorder {
    entries: Vec<Entry>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { entries: Vec::new() }
    }

    fn record(&mut self, check: &'static str, measured: f64, threshold: f64) {
        self.entries.push(Entry {
            check,
            measured,
            threshold,
        });
    }

    /// Records an operation error as a failing entry.
    fn record_error(&mut self, check: &'static str) {
        self.entries.push(Entry {
            check,
            measured: 1.0,
            threshold: 0.0,
        });
    }
}

const STREAM_INSTANCE: u64 = 1;
const STREAM_PAIR: u64 = 2;
const STREAM_DIFF: u64 = 3;
const STREAM_SPLIT: u64 = 4;

fn fro64<T: Real>(m: &ComplexMatrix<T>) -> f64 {
    m.frobenius_norm().as_f64()
}

/// Checks driven by one `(dim, trial)` cell.
fn run_trial<T: Real>(config: &CampaignConfig<T>, dim: usize, trial: usize) -> TrialResult {
    let gens = &config.generators;
    let kind = gens[trial % gens.len()];
    let scale = config.norm_scales[(trial / gens.len()) % config.norm_scales.len()];
    let profile = config.profile_for(dim);
    let instance_seed = derive_seed(config.seed, &[STREAM_INSTANCE, dim as u64, trial as u64]);

    let mut rec = Recorder::new();

    let raw: ComplexMatrix<T> =
        generate(kind, dim, instance_seed).expect("valid generator and dimension");
    let t = if kind == Generator::NearHalfNorm {
        raw
    } else {
        let norm = operator_norm(&raw);
        if norm > T::zero() {
            raw.scale_re(T::of(scale) / norm)
        } else {
            raw
        }
    };

    let context = TrialContext {
        dim,
        generator: kind.name().to_string(),
        scale,
        trial,
        instance_seed,
        instance: serde_json::to_value(&t).expect("matrix serializes"),
    };

    clean_checks(&t, &profile, &mut rec);
    star_checks(&t, &profile, &mut rec);

    if kind == Generator::Block {
        block_checks::<T>(dim, instance_seed, &config.tolerance, &mut rec);
    }

    let pair_seed = derive_seed(config.seed, &[STREAM_PAIR, dim as u64, trial as u64]);
    pair_checks::<T>(dim, trial, pair_seed, &profile, &mut rec);

    if dim >= 2 {
        let diff_seed = derive_seed(config.seed, &[STREAM_DIFF, dim as u64, trial as u64]);
        difference_checks::<T>(dim, diff_seed, &profile, &mut rec);
    }

    let split_seed = derive_seed(config.seed, &[STREAM_SPLIT, dim as u64, trial as u64]);
    splitting_checks::<T>(dim, split_seed, &profile, &mut rec);

    TrialResult {
        entries: rec.entries,
        context,
    }
}

fn clean_checks<T: Real>(t: &ComplexMatrix<T>, profile: &ToleranceProfile<T>, rec: &mut Recorder) {
    let dim = t.dim();
    let t_norm = operator_norm(t);
    let cert = match clean_decompose(t, profile) {
        Ok(c) => c,
        Err(_) => {
            rec.record_error("clean_error");
            return;
        }
    };
    rec.record("clean_idempotency", cert.idempotency_residual.as_f64(), 1e-8);
    rec.record("clean_bound", cert.inverse_norm.as_f64(), 4.0 + 1e-6);

    let identity = ComplexMatrix::identity(dim);
    let t_minus_p = t - &cert.summand;
    let left = operator_norm(&(&(&t_minus_p * &cert.inverse) - &identity)).as_f64();
    let right = operator_norm(&(&(&cert.inverse * &t_minus_p) - &identity)).as_f64();
    rec.record("clean_inverse_residual", left.max(right), dim as f64 * 1e-9);

    if t_norm.as_f64() <= 0.5 {
        rec.record(
            "clean_small_summand",
            fro64(&(&cert.summand - &identity)),
            1e-9,
        );
        rec.record("clean_small_bound", cert.inverse_norm.as_f64(), 2.0 + 1e-6);
    } else {
        // Split path: idempotent norm bound and the lambda dichotomy.
        let te = t * cert.split_projection.matrix();
        let bound = 2.0 + 2.0 * operator_norm(&te).as_f64() + 1e-8;
        rec.record("clean_p_norm", operator_norm(&cert.summand).as_f64(), bound);
        let lambda = cert.lambda.as_f64();
        let membership = lambda.abs().min((lambda - 0.5f64.sqrt()).abs());
        rec.record("clean_lambda", membership, 1e-8);
    }
}

fn star_checks<T: Real>(t: &ComplexMatrix<T>, profile: &ToleranceProfile<T>, rec: &mut Recorder) {
    let dim = t.dim();
    let cert = match almost_star_clean(t, profile) {
        Ok(c) => c,
        Err(_) => {
            rec.record_error("star_error");
            return;
        }
    };
    rec.record("star_idempotency", cert.idempotency_residual.as_f64(), 1e-8);
    rec.record(
        "star_selfadjoint",
        cert.selfadjointness_residual.unwrap_or(T::zero()).as_f64(),
        1e-8,
    );
    debug_assert_eq!(cert.kind, CertificateKind::AlmostStarProjection);

    let identity = ComplexMatrix::identity(dim);
    let t_minus_p = t - &cert.summand;
    let left = operator_norm(&(&(&t_minus_p * &cert.inverse) - &identity)).as_f64();
    let right = operator_norm(&(&(&cert.inverse * &t_minus_p) - &identity)).as_f64();
    rec.record("star_inverse_residual", left.max(right), dim as f64 * 1e-9);

    let lambda = cert.lambda.as_f64();
    let membership = lambda.abs().min((lambda - 0.5f64.sqrt()).abs());
    rec.record("star_lambda", membership, 1e-8);
}

fn block_checks<T: Real>(
    dim: usize,
    seed: u64,
    tolerance: &Option<ToleranceProfile<T>>,
    rec: &mut Recorder,
) {
    let b = match generate_block::<T>(dim, seed) {
        Ok(b) => b,
        Err(_) => {
            rec.record_error("block_error");
            return;
        }
    };
    match clean_decompose_blocks(&b, tolerance.as_ref()) {
        Ok(certs) => {
            let worst = aggregate_max(certs.iter().map(|c| c.inverse_norm)).as_f64();
            rec.record("block_bound_aggregate", worst, 4.0 + 1e-6);
        }
        Err(_) => rec.record_error("block_error"),
    }
}

fn pair_checks<T: Real>(
    dim: usize,
    trial: usize,
    seed: u64,
    profile: &ToleranceProfile<T>,
    rec: &mut Recorder,
) {
    let style = [PairStyle::Commuting, PairStyle::Nested, PairStyle::Haar][trial % 3];
    let (e, f): (Projection<T>, Projection<T>) =
        crate::generate::generate_projection_pair(style, dim, seed);
    let pd = match decompose_pair(&e, &f, profile) {
        Ok(pd) => pd,
        Err(_) => {
            rec.record_error("pair_error");
            return;
        }
    };
    let budget = dim as f64 * 1e-9;

    let re = fro64(&(&pd.reconstruct_e() - e.matrix()));
    let rf = fro64(&(&pd.reconstruct_f() - f.matrix()));
    rec.record("pair_reconstruction", re.max(rf), budget);

    let diff = &pd.generic_p() - &pd.generic_q();
    let lhs = &diff * &diff;
    let rhs = pd.generic_unit.matrix() - &pd.h;
    rec.record("pair_pq_identity", fro64(&(&lhs - &rhs)), budget);

    // Matrix-unit relations E_ij E_kl = delta_jk E_il, plus adjoint symmetry
    // and the partition of the generic unit.
    let units = [
        [&pd.e11, &pd.e12],
        [&pd.e21, &pd.e22],
    ];
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let prod = units[i][j] * units[k][l];
                    let expect = if j == k {
                        units[i][l].clone()
                    } else {
                        ComplexMatrix::zeros(dim)
                    };
                    worst = worst.max(fro64(&(&prod - &expect)));
                }
            }
        }
    }
    worst = worst.max(fro64(&(&pd.e12.adjoint() - &pd.e21)));
    worst = worst.max(fro64(&(&(&pd.e11 + &pd.e22) - pd.generic_unit.matrix())));
    rec.record("pair_matrix_units", worst, 1e-9);

    let mut comm = 0.0f64;
    for u in [&pd.e11, &pd.e12, &pd.e21, &pd.e22] {
        comm = comm.max(fro64(&(&(&pd.h * u) - &(u * &pd.h))));
    }
    rec.record("pair_h_commutes", comm, 1e-9);

    // [(I_0 - iE21 + iE12) - 2Q]^2 = 2 I_0, and the same with P.
    let i_unit = num_complex::Complex::new(T::zero(), T::one());
    let base = &(pd.generic_unit.matrix() - &pd.e21.scale(i_unit)) + &pd.e12.scale(i_unit);
    let two_i0 = pd.generic_unit.matrix().scale_re(T::of(2.0));
    let mut remark = 0.0f64;
    for half in [pd.generic_q(), pd.generic_p()] {
        let w = &base - &half.scale_re(T::of(2.0));
        remark = remark.max(fro64(&(&(&w * &w) - &two_i0)));
    }
    rec.record("pair_remark_pvq", remark, budget);

    // Cross-module coherence with the lattice operations.
    match (meet(&e, &f, profile), join(&e, &f, profile)) {
        (Ok(m), Ok(j)) => {
            rec.record(
                "pair_meet_agrees",
                fro64(&(m.matrix() - pd.meet_ef.matrix())),
                profile.projection_tol.as_f64(),
            );
            let join_sum = &(&(pd.generic_unit.matrix() + pd.meet_ef.matrix())
                + pd.meet_efp.matrix())
                + pd.meet_epf.matrix();
            rec.record(
                "pair_join_identity",
                fro64(&(j.matrix() - &join_sum)),
                profile.projection_tol.as_f64(),
            );
            rec.record(
                "pair_kaplansky_rank",
                ((j.rank() + m.rank()) as f64 - (e.rank() + f.rank()) as f64).abs(),
                0.5,
            );
            let demorgan = meet(&e.complement(), &f.complement(), profile)
                .map(|d| fro64(&(j.matrix() - d.complement().matrix())))
                .unwrap_or(f64::INFINITY);
            rec.record("pair_demorgan", demorgan, profile.projection_tol.as_f64());
            let leq = fro64(&(&(e.matrix() * m.matrix()) - m.matrix()));
            rec.record("pair_meet_leq", leq, profile.projection_tol.as_f64());
        }
        _ => rec.record_error("pair_error"),
    }
}

fn difference_checks<T: Real>(
    dim: usize,
    seed: u64,
    profile: &ToleranceProfile<T>,
    rec: &mut Recorder,
) {
    let mut rng = SplitMix64::new(seed);
    // Admissible pair: ranks at least 1 with sum at most the dimension, so
    // the meet vanishes almost surely for Haar ranges.
    let r1 = 1 + rng.next_below(dim - 1);
    let r2 = 1 + rng.next_below(dim - r1);
    let e: Projection<T> = generate_projection(dim, r1, &mut rng);
    let f: Projection<T> = generate_projection(dim, r2, &mut rng);
    let cert = match difference_inverse(&e, &f, profile) {
        Ok(c) => c,
        Err(_) => {
            rec.record_error("diff_error");
            return;
        }
    };
    let closed = (1.0 - cert.ef_norm.as_f64().powi(2)).powf(-0.5);
    let rel = (cert.norm_value.as_f64() - closed).abs() / closed;
    rec.record("diff_norm_law", rel, 1e-8);

    let join_mat = match join(&e, &f, profile) {
        Ok(j) => j.matrix().clone(),
        Err(_) => {
            rec.record_error("diff_error");
            return;
        }
    };
    let d = e.matrix() - f.matrix();
    let left = fro64(&(&(&cert.inverse_on_join * &d) - &join_mat));
    let right = fro64(&(&(&d * &cert.inverse_on_join) - &join_mat));
    rec.record(
        "diff_inverse_identity",
        left.max(right),
        dim as f64 * 1e-9,
    );
}

fn splitting_checks<T: Real>(
    dim: usize,
    seed: u64,
    profile: &ToleranceProfile<T>,
    rec: &mut Recorder,
) {
    let mut rng = SplitMix64::new(seed);
    // Well-conditioned invertible element: singular values in [0.6, 2.6].
    let u = haar_unitary::<T>(dim, &mut rng);
    let v = haar_unitary::<T>(dim, &mut rng);
    let svals: Vec<num_complex::Complex<T>> = (0..dim)
        .map(|_| num_complex::Complex::new(T::of(0.6 + 2.0 * rng.next_unit()), T::zero()))
        .collect();
    let t = &(&u * &ComplexMatrix::diag(&svals)) * &v.adjoint();
    let e: Projection<T> = generate_projection(dim, rng.next_below(dim + 1), &mut rng);

    let (s, cert) = match invert_via_splitting(&t, &e, profile) {
        Ok(out) => out,
        Err(_) => {
            rec.record_error("split_error");
            return;
        }
    };
    let mid = cert.s_norm.as_f64() * (1.0 - cert.lambda.as_f64()).sqrt();
    rec.record(
        "split_sandwich_lower",
        1.0 / cert.t_norm.as_f64() - mid,
        1e-8,
    );
    rec.record(
        "split_sandwich_upper",
        mid - 1.0 / cert.a1.min(cert.a2).as_f64(),
        1e-8,
    );
    let identity = ComplexMatrix::identity(dim);
    let resid = operator_norm(&(&(&s * &t) - &identity))
        .max(operator_norm(&(&(&t * &s) - &identity)));
    rec.record("split_inverse_residual", resid.as_f64(), dim as f64 * 1e-9);
}

const MAX_FAILURE_DUMPS: usize = 50;

/// Runs the full campaign. The report is deterministic for a fixed config
/// (wall clock aside); trials run in parallel, capped by the
/// `CLEAN_DECOMP_THREADS` environment variable when set.
pub fn run_campaign<T: Real>(config: &CampaignConfig<T>) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();

    let cells: Vec<(usize, usize)> = config
        .dims
        .iter()
        .flat_map(|&d| (0..config.trials_per_dim).map(move |t| (d, t)))
        .collect();

    let run_all = || -> Vec<TrialResult> {
        cells
            .par_iter()
            .map(|&(dim, trial)| run_trial(config, dim, trial))
            .collect()
    };

    let results: Vec<TrialResult> = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InternalInvariantViolation {
                detail: format!("thread pool: {e}"),
            })?
            .install(run_all),
        None => run_all(),
    };

    let mut summaries: BTreeMap<String, CheckSummary> = BTreeMap::new();
    let mut failures: Vec<FailureDump> = Vec::new();
    for r in &results {
        for entry in &r.entries {
            let slack = entry.threshold - entry.measured;
            let s = summaries
                .entry(entry.check.to_string())
                .or_insert_with(|| CheckSummary {
                    name: entry.check.to_string(),
                    pass_count: 0,
                    fail_count: 0,
                    worst_slack: f64::INFINITY,
                    worst_value: 0.0,
                });
            if entry.measured <= entry.threshold {
                s.pass_count += 1;
            } else {
                s.fail_count += 1;
                failures.push(FailureDump {
                    check: entry.check.to_string(),
                    dim: r.context.dim,
                    generator: r.context.generator.clone(),
                    scale: r.context.scale,
                    trial: r.context.trial,
                    instance_seed: r.context.instance_seed,
                    measured: entry.measured,
                    threshold: entry.threshold,
                    instance: r.context.instance.clone(),
                });
            }
            if slack < s.worst_slack {
                s.worst_slack = slack;
                s.worst_value = entry.measured;
            }
        }
    }
    failures.sort_by(|a, b| {
        (a.dim, &a.check, a.trial, &a.generator).cmp(&(b.dim, &b.check, b.trial, &b.generator))
    });
    failures.truncate(MAX_FAILURE_DUMPS);

    Ok(CampaignReport {
        total_instances: results.len() as u64,
        checks: summaries.into_values().collect(),
        failures,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

fn thread_cap() -> Option<usize> {
    std::env::var("CLEAN_DECOMP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
}
