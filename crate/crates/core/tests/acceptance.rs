//! Acceptance suite. Runs every check, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chernslope::density::{solve, DensityTarget};
use chernslope::geometry::{build_resolution, log_chern_closed, log_chern_pair, ArrangementParams, Family};
use chernslope::girstmair::verify_girstmair;
use chernslope::nefcheck::{min_nef_q, nef_report};
use chernslope::numtheory::{c_value, dedekind_sum, dedekind_sum_naive, hj_length, next_prime, primes_between};
use chernslope::pipeline::{
    run_pipeline, sample_cover, to_sorted_json, within_convergence_bound, PipelineRequest, SlopeReport, Status,
};
use chernslope::prank::{genus, h1_dim, is_primitive_root, prank_upper_bound, CyclicCoverData};
use chernslope::rational::{big, frac, int, parse_decimal, Rational};
use chernslope::rootcover::CoverInvariants;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, format!("{what} took {t:?}, limit {limit:?}"))
}

fn dedekind_core() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for q in 2..=200i64 {
        for a in 1..q {
            if num_integer::gcd(a, q) != 1 {
                continue;
            }
            let s = dedekind_sum(q, a).map_err(|e| e.to_string())?;
            check(s == dedekind_sum_naive(q, a).unwrap(), format!("fast != naive at ({a},{q})"))?;
            let back = if a == 1 { Rational::zero() } else { dedekind_sum(a, q % a).unwrap() };
            let (ar, qr) = (int(a), int(q));
            let rhs = (&ar / &qr + &qr / &ar + (&ar * &qr).recip()) / int(12) - frac(1, 4);
            check(&s + back == rhs, format!("reciprocity fails at ({a},{q})"))?;
            pairs += 1;
        }
    }
    within(start, Duration::from_secs(10), "dedekind check")?;
    Ok(format!("{pairs} coprime pairs, {:?}", start.elapsed()))
}

fn rdp_constants() -> Outcome {
    let primes = primes_between(2, 1000);
    for &q in &primes {
        check(c_value(q, q - 1).unwrap() == int(2) - frac(2, q), format!("c(q-1,q) at {q}"))?;
        check(hj_length(q, q - 1).unwrap() == q - 1, format!("l(q-1,q) at {q}"))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn girstmair_bounds() -> Outcome {
    let start = Instant::now();
    let primes = primes_between(17, 2000);
    for &q in &primes {
        let r = verify_girstmair(q, &int(1)).map_err(|e| e.to_string())?;
        check(r.cardinality_ok, format!("|F| = {} too large at {q}", r.bad_count))?;
        check(r.length_ok, format!("length bound fails at {q}: {:?}", r.worst_length))?;
        check(r.dedekind_ok, format!("Dedekind bound fails at {q}: {:?}", r.worst_dedekind))?;
    }
    within(start, Duration::from_secs(120), "bad set check")?;
    Ok(format!("{} primes, {:?}", primes.len(), start.elapsed()))
}

fn parameter_grid() -> Vec<ArrangementParams> {
    let mut grid = Vec::new();
    for p in [2, 3] {
        for r in [1, 2] {
            for e in [1, 2] {
                for g in [0, 1] {
                    for d in [3, 4, 5] {
                        grid.push(ArrangementParams::a0(p, r, e, d, g));
                    }
                    for d in [3, 4] {
                        for u in [0, 1, 2] {
                            for w in [0, 1] {
                                grid.push(ArrangementParams::a(p, r, e, d, g, u, w));
                            }
                        }
                    }
                }
            }
        }
    }
    for p in [2, 3, 5] {
        for r in [1, 2] {
            for e in [1, 2] {
                for l in [3, 4, 5] {
                    grid.push(ArrangementParams::aprime(p, r, e, l));
                }
            }
        }
    }
    grid
}

fn closed_vs_brute() -> Outcome {
    let grid = parameter_grid();
    check(grid.len() >= 200, "grid too small")?;
    for params in &grid {
        let config = build_resolution(params).map_err(|e| format!("{params:?}: {e}"))?;
        let pair = log_chern_pair(&config);
        let closed = log_chern_closed(params).map_err(|e| format!("{params:?}: {e}"))?;
        check(
            pair.c1sq == closed.c1sq && pair.c2 == closed.c2,
            format!("{params:?}: brute ({}, {}) vs closed ({}, {})", pair.c1sq, pair.c2, closed.c1sq, closed.c2),
        )?;
    }
    Ok(format!("{} parameter points", grid.len()))
}

struct ConvergenceRun {
    samples: Vec<(i64, CoverInvariants, bool)>,
    skipped: Vec<i64>,
    limit: Rational,
    c2bar: Rational,
    t2: i64,
}

fn convergence_run() -> &'static ConvergenceRun {
    static RUN: OnceLock<ConvergenceRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let params = ArrangementParams::a(2, 1, 1, 3, 0, 1, 1);
        let config = build_resolution(&params).unwrap();
        let closed = log_chern_closed(&params).unwrap();
        let mut samples = Vec::new();
        let mut skipped = Vec::new();
        for q in primes_between(101, 2003) {
            match sample_cover(&config, &params, q, 2024, 5_000).unwrap() {
                Ok(s) => samples.push((q, s.invariants, s.found.asymptotic)),
                Err(_) => skipped.push(q),
            }
        }
        ConvergenceRun {
            samples,
            skipped,
            limit: closed.slope,
            c2bar: big(&closed.c2),
            t2: config.t2(),
        }
    })
}

fn mean(xs: &[Rational]) -> Rational {
    xs.iter().fold(Rational::zero(), |a, b| a + b) / int(xs.len() as i64)
}

fn slope_convergence() -> Outcome {
    let run = convergence_run();
    let asymptotic: Vec<_> = run.samples.iter().filter(|s| s.2).collect();
    check(asymptotic.len() >= 20, format!("only {} asymptotic samples", asymptotic.len()))?;
    let mut errors = Vec::new();
    for (q, inv, _) in &asymptotic {
        let diff = &inv.slope - &run.limit;
        check(
            within_convergence_bound(&diff, *q, run.t2, &run.c2bar),
            format!("q = {q}: slope error {} above bound", chernslope::rational::to_f64(&diff.abs())),
        )?;
        errors.push(diff.abs());
    }
    let k = 10.min(errors.len() / 2);
    let head = mean(&errors[..k]);
    let tail = mean(&errors[errors.len() - k..]);
    check(
        head >= &tail * int(2),
        format!("mean error {} near q=100 vs {} near q=2000", chernslope::rational::to_f64(&head), chernslope::rational::to_f64(&tail)),
    )?;
    Ok(format!(
        "{} primes sampled ({} skipped), error {:.3e} -> {:.3e}",
        asymptotic.len(),
        run.skipped.len(),
        chernslope::rational::to_f64(&head),
        chernslope::rational::to_f64(&tail)
    ))
}

const TARGETS: [&str; 6] = ["2", "2.5", "3", "3.14159", "4", "10"];

fn density_targets() -> Outcome {
    let start = Instant::now();
    let eps = frac(1, 100);
    for x in TARGETS {
        let xr = parse_decimal(x).unwrap();
        for family in [Family::A, Family::APrime] {
            let s = solve(&DensityTarget::new(xr.clone(), eps.clone(), 2, family))
                .map_err(|e| format!("{x} {family}: {e}"))?;
            let recomputed = log_chern_closed(&s.params).map_err(|e| e.to_string())?.slope;
            check(recomputed == s.achieved_limit, format!("{x} {family}: limits disagree"))?;
            check((&recomputed - &xr).abs() < eps, format!("{x} {family}: error {}", s.error_approx))?;
        }
    }
    within(start, Duration::from_secs(60), "density solvers")?;
    Ok(format!("12 targets, {:?}", start.elapsed()))
}

fn pipeline_reports() -> &'static Vec<SlopeReport> {
    static REPORTS: OnceLock<Vec<SlopeReport>> = OnceLock::new();
    REPORTS.get_or_init(|| {
        let mut out = Vec::new();
        for x in TARGETS {
            for family in [Family::A, Family::APrime] {
                let req = PipelineRequest::new(parse_decimal(x).unwrap(), frac(1, 100), 2, family, None, 42);
                out.push(run_pipeline(&req).unwrap());
            }
        }
        out
    })
}

fn noether() -> Outcome {
    let run = convergence_run();
    for (q, inv, _) in &run.samples {
        check(inv.chi.is_integer(), format!("q = {q}: chi = {}", inv.chi))?;
    }
    let reports = pipeline_reports();
    let mut sampled = 0;
    for r in reports {
        if let Some(s) = &r.sampled {
            check(s.chi.is_integer(), format!("target {}: chi = {}", r.target, s.chi))?;
            sampled += 1;
        }
    }
    Ok(format!("{} sweep covers, {} pipeline covers", run.samples.len(), sampled))
}

fn minimality_defect() -> Outcome {
    let run = convergence_run();
    let mut n = 0;
    for (q, inv, asymptotic) in &run.samples {
        if !asymptotic {
            continue;
        }
        check(inv.defect_ok() == Some(true), format!("q = {q}: defect {} > {:?}", inv.c_sum, inv.defect_bound))?;
        n += 1;
    }
    Ok(format!("{n} asymptotic covers"))
}

fn prank_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut primitive = 0;
    'outer: for p in [2u64, 3, 5, 7] {
        for q in primes_between(3, 60) {
            let q = q as u64;
            if q == p || !is_primitive_root(p, q) {
                continue;
            }
            let parts = rng.gen_range(2..=4usize.min(q as usize));
            let mut cuts: Vec<u64> = rand::seq::index::sample(&mut rng, q as usize - 1, parts - 1)
                .into_iter()
                .map(|c| c as u64 + 1)
                .collect();
            cuts.sort_unstable();
            let mut mults = Vec::new();
            let mut prev = 0;
            for c in cuts.into_iter().chain([q]) {
                mults.push(c - prev);
                prev = c;
            }
            let data = CyclicCoverData::new(q, p, mults).map_err(|e| e.to_string())?;
            check(prank_upper_bound(&data) == 0, format!("B != 0 for {data:?}"))?;
            primitive += 1;
            if primitive == 20 {
                break 'outer;
            }
        }
    }
    check(primitive == 20, format!("only {primitive} primitive-root instances"))?;

    let mut symmetric = 0;
    for q in primes_between(3, 100) {
        let q = q as u64;
        for l in 1..=5u64 {
            let halves: Vec<u64> = (0..l).map(|_| rng.gen_range(1..q)).collect();
            let data = CyclicCoverData::symmetric(q, 2, &halves).map_err(|e| e.to_string())?;
            let g = (q - 1) * (l - 1);
            check(genus(&data) == g, format!("genus of {data:?}"))?;
            check(prank_upper_bound(&data) == g, format!("B != g for {data:?}"))?;
            symmetric += 1;
        }
    }

    let mut random = 0;
    while random < 50 {
        let q: u64 = rng.gen_range(2..=50);
        let p = [2u64, 3, 5, 7, 11][rng.gen_range(0..5)];
        let r = rng.gen_range(2..=6);
        let mut mults: Vec<u64> = (0..r - 1).map(|_| rng.gen_range(1..q)).collect();
        let last = (q - mults.iter().sum::<u64>() % q) % q;
        mults.push(last);
        let Ok(data) = CyclicCoverData::new(q, p, mults) else { continue };
        let cohomology: u64 = (1..q).map(|i| h1_dim(i, &data).unwrap()).sum();
        check(cohomology == genus(&data), format!("genus mismatch for {data:?}"))?;
        check(prank_upper_bound(&data) <= genus(&data), format!("B > g for {data:?}"))?;
        random += 1;
    }
    Ok(format!("{primitive} primitive, {symmetric} symmetric, {random} random"))
}

fn nef_grid() -> (Vec<ArrangementParams>, Vec<ArrangementParams>) {
    let mut a = Vec::new();
    for p in [2, 3] {
        for r in [1, 2] {
            for d in [3, 4, 5] {
                for (u, w) in [(0, 0), (1, 1)] {
                    a.push(ArrangementParams::a(p, r, 1, d, 0, u, w));
                }
            }
        }
    }
    let mut ap = Vec::new();
    for p in [2, 3] {
        for r in [1, 2] {
            for e in [1, 2] {
                for l in [3, 4, 5] {
                    ap.push(ArrangementParams::aprime(p, r, e, l));
                }
            }
        }
    }
    (a, ap)
}

fn nef_surrogate() -> Outcome {
    let (a, ap) = nef_grid();
    check(a.len() >= 20 && ap.len() >= 20, "nef grid too small")?;
    let mut thresholds = Vec::new();
    for params in a.iter().chain(&ap) {
        let t = min_nef_q(params, 10_007).map_err(|e| format!("{params:?}: {e}"))?;
        check(t < 10_007, format!("{params:?}: threshold {t}"))?;
        let mut q = t;
        for _ in 0..6 {
            let r = nef_report(params, q).map_err(|e| e.to_string())?;
            check(r.all_nef, format!("{params:?}: negative entry at q = {q}"))?;
            check(r.entries.iter().all(|e| !e.value.is_negative()), "all_nef disagrees with entries")?;
            check(r.consistent, format!("{params:?}: closed form and configuration disagree at q = {q}"))?;
            for e in &r.entries {
                if let (Some(c), Some(f)) = (&e.closed_form, &e.from_configuration) {
                    check(c == f, format!("{params:?}: {} differs", e.curve_class))?;
                }
            }
            q = next_prime(q + 1);
            if q as u64 == params.p {
                q = next_prime(q + 1);
            }
        }
        thresholds.push(t);
    }
    Ok(format!(
        "{} family A and {} APRIME points, max threshold {}",
        a.len(),
        ap.len(),
        thresholds.iter().max().unwrap()
    ))
}

fn reproducibility() -> Outcome {
    let req = PipelineRequest::new(int(3), frac(1, 100), 2, Family::APrime, None, 42);
    let a = to_sorted_json(&run_pipeline(&req).unwrap()).unwrap();
    let b = to_sorted_json(&run_pipeline(&req).unwrap()).unwrap();
    check(a == b, "reports differ")?;
    let parsed: SlopeReport = serde_json::from_str(&a).map_err(|e| e.to_string())?;
    check(to_sorted_json(&parsed).unwrap() == a, "round trip changes the report")?;
    check(parsed.status == Status::Ok, format!("status {:?}", parsed.status))?;
    Ok(format!("{} bytes", a.len()))
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 11] = [
        ("dedekind_core", dedekind_core),
        ("rdp_constants", rdp_constants),
        ("girstmair_bounds", girstmair_bounds),
        ("closed_form_vs_brute_force", closed_vs_brute),
        ("slope_convergence", slope_convergence),
        ("density_targets", density_targets),
        ("noether_divisibility", noether),
        ("minimality_defect", minimality_defect),
        ("prank", prank_checks),
        ("nef_surrogate", nef_surrogate),
        ("reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in checks.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("[{:>2}] PASS {name}: {detail} ({:.1?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("[{:>2}] FAIL {name}: {why} ({:.1?})", k + 1, start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} check(s) failed");
        std::process::exit(1);
    }
}
