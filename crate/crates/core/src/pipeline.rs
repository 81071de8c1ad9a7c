//! End to end: target slope -> parameters -> assignment at a prime `q` ->
//! cover invariants -> report. Also the per-`q` sweep used for plotting.

use num_traits::{Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{solve, DensityTarget, SolvedParams};
use crate::error::{Error, Result};
use crate::geometry::{build_resolution, log_chern_closed, ArrangementParams, Family, ResolvedConfiguration};
use crate::nefcheck::{min_nef_q, nef_report, NefReport};
use crate::numtheory::next_prime;
use crate::partitions::{min_feasible_q, Found, PartitionProblem, Requirement, Sampler, SearchOptions, Strategy, TryStats};
use crate::rational::{big, int, le_times_sqrt, serde_frac, to_f64, Rational};
use crate::rootcover::{chern_of_cover, CoverInvariants};

/// Largest resolved configuration the pipeline will build and sample.
pub const DEFAULT_MAX_COMPONENTS: u64 = 250_000;
/// Largest `fibers * q` table the conditioned sampler may fill.
pub const MAX_SAMPLER_CELLS: u64 = 4_000_000;
/// Upper end of the nef threshold scan used when choosing `q`.
pub const NEF_SCAN_LIMIT: i64 = 1_000_003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    CapHit,
    NotFound,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CapHit | Status::NotFound => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineRequest {
    #[serde(with = "serde_frac")]
    pub target: Rational,
    #[serde(with = "serde_frac")]
    pub epsilon: Rational,
    pub p: u64,
    pub family: Family,
    /// `None` picks `q` automatically.
    pub q: Option<i64>,
    pub seed: u64,
    /// Skip the cover computation and report only the parameters.
    pub sample: bool,
    pub max_tries: u64,
    pub max_components: u64,
}

impl PipelineRequest {
    pub fn new(target: Rational, epsilon: Rational, p: u64, family: Family, q: Option<i64>, seed: u64) -> Self {
        Self {
            target,
            epsilon,
            p,
            family,
            q,
            seed,
            sample: true,
            max_tries: 1_000,
            max_components: DEFAULT_MAX_COMPONENTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NefSummary {
    pub all_nef: bool,
    pub consistent: bool,
    #[serde(with = "serde_frac")]
    pub min_value: Rational,
    #[serde(with = "serde_frac")]
    pub t_value: Rational,
}

impl From<&NefReport> for NefSummary {
    fn from(r: &NefReport) -> Self {
        Self {
            all_nef: r.all_nef,
            consistent: r.consistent,
            min_value: r.entries.iter().map(|e| e.value.clone()).min().unwrap_or_else(Rational::zero),
            t_value: r.t_value.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCover {
    pub q: i64,
    pub seed: u64,
    pub asymptotic: bool,
    pub try_index: u64,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    #[serde(with = "serde_frac")]
    pub c1sq_x: Rational,
    #[serde(with = "serde_frac")]
    pub c2_x: Rational,
    #[serde(with = "serde_frac")]
    pub chi: Rational,
    #[serde(with = "serde_frac")]
    pub slope: Rational,
    pub slope_approx: f64,
    #[serde(with = "serde_frac")]
    pub defect: Rational,
    #[serde(with = "serde_frac::option")]
    pub defect_bound: Option<Rational>,
    pub nef: NefSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    #[serde(with = "serde_frac")]
    pub target: Rational,
    pub target_approx: f64,
    #[serde(with = "serde_frac")]
    pub epsilon: Rational,
    pub family: Family,
    pub params: Option<ArrangementParams>,
    pub method: Option<String>,
    #[serde(with = "serde_frac::option")]
    pub limit_slope: Option<Rational>,
    pub limit_slope_approx: Option<f64>,
    #[serde(with = "serde_frac::option")]
    pub error: Option<Rational>,
    pub sampled: Option<SampledCover>,
    pub status: Status,
    pub diagnostics: Vec<String>,
}

/// An assignment found at `q` and the invariants of its cover.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSample {
    pub found: Found,
    pub invariants: CoverInvariants,
}

/// Searches for an asymptotic assignment and falls back to any valid one.
/// `Ok(Err(stats))` means both searches ran out of tries.
pub fn sample_cover(
    config: &ResolvedConfiguration,
    params: &ArrangementParams,
    q: i64,
    seed: u64,
    max_tries: u64,
) -> Result<std::result::Result<CoverSample, TryStats>> {
    let problem = PartitionProblem::new(q, *params)?;
    let cells = config.tangencies.len() as u64 + params.w;
    if cells.saturating_mul(q as u64) > MAX_SAMPLER_CELLS {
        return Err(Error::CapExceeded(format!(
            "{cells} fiber unknowns at q = {q} exceed the sampler budget of {MAX_SAMPLER_CELLS} cells"
        )));
    }
    let sampler = Sampler::with_config(problem, config.clone())?;
    let mut opts = SearchOptions {
        seed,
        max_tries,
        strategy: Strategy::Conditioned,
        requirement: Requirement::Asymptotic,
    };
    let outcome = match sampler.sample(&opts).found() {
        Some(f) => Ok(f.clone()),
        None => {
            log::info!("no asymptotic assignment at q = {q}; accepting any valid one");
            opts.requirement = Requirement::Valid;
            let out = sampler.sample(&opts);
            match out {
                crate::partitions::SearchOutcome::Found(f) => Ok(*f),
                crate::partitions::SearchOutcome::NotFound(stats) => Err(stats),
            }
        }
    };
    match outcome {
        Ok(found) => {
            let invariants = chern_of_cover(config, &found.assignment)?;
            Ok(Ok(CoverSample { found, invariants }))
        }
        Err(stats) => Ok(Err(stats)),
    }
}

/// Seed for prime `q` in a run with master seed `seed`.
pub fn per_q_seed(seed: u64, q: i64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(q as u64);
    rng.next_u64()
}

/// `8 sqrt(q) t2 / (q c2bar)`, the allowed distance of the cover slope from
/// the limiting slope.
pub fn within_convergence_bound(diff: &Rational, q: i64, t2: i64, c2bar: &Rational) -> bool {
    let k = int(8 * t2) / (int(q) * c2bar);
    le_times_sqrt(&diff.abs(), &k.abs(), q as u64)
}

pub fn convergence_bound_approx(q: i64, t2: i64, c2bar: &Rational) -> f64 {
    8.0 * (q as f64).sqrt() * t2 as f64 / (q as f64 * to_f64(c2bar))
}

/// Smallest admissible prime: at least 17, past the partition minimum, and
/// past the nef threshold when that scan succeeds.
pub fn auto_q(params: &ArrangementParams, diagnostics: &mut Vec<String>) -> Result<i64> {
    params.validate()?;
    let need = min_feasible_q(params);
    let mut lower = std::cmp::max(17, i64::try_from(need * 2 + 1).unwrap_or(i64::MAX));
    match min_nef_q(params, NEF_SCAN_LIMIT) {
        Ok(t) => lower = lower.max(t),
        Err(e) => diagnostics.push(format!("nef threshold unavailable: {e}")),
    }
    let mut q = next_prime(lower);
    if q as u64 == params.p {
        q = next_prime(q + 1);
    }
    Ok(q)
}

pub fn run_pipeline(req: &PipelineRequest) -> Result<SlopeReport> {
    let mut target = DensityTarget::new(req.target.clone(), req.epsilon.clone(), req.p, req.family);
    if req.family == Family::A0 {
        target.w = 0;
    }
    target.validate()?;
    let mut report = SlopeReport {
        target: req.target.clone(),
        target_approx: to_f64(&req.target),
        epsilon: req.epsilon.clone(),
        family: req.family,
        params: None,
        method: None,
        limit_slope: None,
        limit_slope_approx: None,
        error: None,
        sampled: None,
        status: Status::Ok,
        diagnostics: Vec::new(),
    };
    let solved: SolvedParams = match solve(&target) {
        Ok(s) => s,
        Err(Error::CapExceeded(msg)) => {
            report.status = Status::CapHit;
            report.diagnostics.push(msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let params = solved.params;
    report.params = Some(params);
    report.method = Some(solved.method.clone());
    report.limit_slope_approx = Some(to_f64(&solved.achieved_limit));
    report.limit_slope = Some(solved.achieved_limit.clone());
    report.error = Some(solved.error.clone());
    if !req.sample {
        return Ok(report);
    }

    match params.component_count() {
        Some(n) if n <= req.max_components => {}
        n => {
            report.status = Status::CapHit;
            report.diagnostics.push(match n {
                Some(n) => format!("{n} resolved components exceed the cap of {}", req.max_components),
                None => "resolved component count overflows".to_string(),
            });
            return Ok(report);
        }
    }
    let q = match req.q {
        Some(q) => q,
        None => auto_q(&params, &mut report.diagnostics)?,
    };
    let config = build_resolution(&params)?;
    let sample = match sample_cover(&config, &params, q, req.seed, req.max_tries) {
        Ok(Ok(s)) => s,
        Ok(Err(stats)) => {
            report.status = Status::NotFound;
            report.diagnostics.push(format!(
                "no valid assignment at q = {q} after {} tries ({} with a vanishing multiplicity)",
                stats.tries, stats.zero_multiplicity
            ));
            return Ok(report);
        }
        Err(Error::Infeasible(msg)) => {
            report.status = Status::NotFound;
            report.diagnostics.push(msg);
            return Ok(report);
        }
        Err(Error::CapExceeded(msg)) => {
            report.status = Status::CapHit;
            report.diagnostics.push(msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let nef = nef_report(&params, q)?;
    let inv = &sample.invariants;
    if !inv.chi.is_integer() {
        report.status = Status::NotFound;
        report.diagnostics.push(format!("chi = {} is not an integer", inv.chi));
    }
    if !sample.found.asymptotic {
        report.diagnostics.push(format!("assignment at q = {q} is valid but not asymptotic"));
    }
    report.sampled = Some(SampledCover {
        q,
        seed: req.seed,
        asymptotic: sample.found.asymptotic,
        try_index: sample.found.try_index,
        x: sample.found.x.clone(),
        y: sample.found.y.clone(),
        c1sq_x: inv.c1sq_x.clone(),
        c2_x: inv.c2_x.clone(),
        chi: inv.chi.clone(),
        slope: inv.slope.clone(),
        slope_approx: to_f64(&inv.slope),
        defect: inv.c_sum.clone(),
        defect_bound: inv.defect_bound.clone(),
        nef: NefSummary::from(&nef),
    });
    Ok(report)
}

/// Serializes with sorted keys, so equal reports give equal bytes.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: i64,
    pub seed: u64,
    pub status: Status,
    pub asymptotic: Option<bool>,
    pub try_index: Option<u64>,
    pub c1sq_x: Option<String>,
    pub c2_x: Option<String>,
    pub chi: Option<String>,
    pub slope_approx: Option<f64>,
    pub limit_approx: f64,
    pub error_approx: Option<f64>,
    pub bound_approx: f64,
    pub within_bound: Option<bool>,
    pub defect_approx: Option<f64>,
    pub defect_bound: Option<String>,
}

/// One row per prime in `qs`, computed in parallel and sorted by `q`.
pub fn sweep(params: &ArrangementParams, qs: &[i64], seed: u64, max_tries: u64) -> Result<Vec<SweepRow>> {
    let config = build_resolution(params)?;
    let closed = log_chern_closed(params)?;
    let c2bar = big(&closed.c2);
    let limit = closed.slope.clone();
    let t2 = config.t2();
    let mut rows = qs
        .par_iter()
        .map(|&q| -> Result<SweepRow> {
            let s = per_q_seed(seed, q);
            let mut row = SweepRow {
                q,
                seed: s,
                status: Status::NotFound,
                asymptotic: None,
                try_index: None,
                c1sq_x: None,
                c2_x: None,
                chi: None,
                slope_approx: None,
                limit_approx: to_f64(&limit),
                error_approx: None,
                bound_approx: convergence_bound_approx(q, t2, &c2bar),
                within_bound: None,
                defect_approx: None,
                defect_bound: None,
            };
            let sample = match sample_cover(&config, params, q, s, max_tries) {
                Ok(Ok(sample)) => sample,
                Ok(Err(_)) | Err(Error::Infeasible(_)) => return Ok(row),
                Err(Error::CapExceeded(_)) => {
                    row.status = Status::CapHit;
                    return Ok(row);
                }
                Err(e) => return Err(e),
            };
            let inv = sample.invariants;
            let diff = &inv.slope - &limit;
            row.status = Status::Ok;
            row.asymptotic = Some(sample.found.asymptotic);
            row.try_index = Some(sample.found.try_index);
            row.c1sq_x = Some(inv.c1sq_x.to_string());
            row.c2_x = Some(inv.c2_x.to_string());
            row.chi = Some(inv.chi.to_string());
            row.slope_approx = Some(to_f64(&inv.slope));
            row.error_approx = Some(to_f64(&diff.abs()));
            row.within_bound = Some(within_convergence_bound(&diff, q, t2, &c2bar));
            row.defect_approx = Some(to_f64(&inv.c_sum));
            row.defect_bound = inv.defect_bound.as_ref().map(|b| b.to_string());
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.q);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, parse_decimal};

    #[test]
    fn seeds_differ_per_q() {
        assert_ne!(per_q_seed(42, 101), per_q_seed(42, 103));
        assert_eq!(per_q_seed(42, 101), per_q_seed(42, 101));
    }

    #[test]
    fn aprime_pipeline_is_ok() {
        let req = PipelineRequest::new(int(3), frac(1, 100), 2, Family::APrime, None, 42);
        let r = run_pipeline(&req).unwrap();
        assert_eq!(r.status, Status::Ok, "{:?}", r.diagnostics);
        let s = r.sampled.as_ref().unwrap();
        assert!(s.chi.is_integer());
        assert!(r.error.as_ref().unwrap() < &frac(1, 100));
        let again = run_pipeline(&req).unwrap();
        assert_eq!(to_sorted_json(&r).unwrap(), to_sorted_json(&again).unwrap());
    }

    #[test]
    fn low_q_is_not_found() {
        let req = PipelineRequest::new(int(2), frac(1, 100), 2, Family::A, Some(101), 42);
        let r = run_pipeline(&req).unwrap();
        assert_eq!(r.status, Status::NotFound);
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn rejects_low_target() {
        let req = PipelineRequest::new(parse_decimal("1.5").unwrap(), frac(1, 100), 2, Family::A, None, 1);
        assert!(run_pipeline(&req).is_err());
    }

    #[test]
    fn huge_family_a_is_cap_hit() {
        let req = PipelineRequest::new(int(3), frac(1, 100), 2, Family::A, None, 42);
        let r = run_pipeline(&req).unwrap();
        assert_eq!(r.status, Status::CapHit);
        assert!(r.limit_slope.is_some());
    }

    #[test]
    fn sweep_rows_sorted() {
        let params = ArrangementParams::a(2, 1, 1, 3, 0, 1, 1);
        let rows = sweep(&params, &[211, 101, 151], 7, 2000).unwrap();
        assert_eq!(rows.iter().map(|r| r.q).collect::<Vec<_>>(), vec![101, 151, 211]);
    }
}
