//! Farey points, their neighbourhoods, and the bad set of residues.
//!
//! For a prime `q` and a constant `C > 0`, the Farey point `q c/d` with
//! `1 <= d <= sqrt(q)`, `0 <= c <= d`, `gcd(c,d) = 1` has neighbourhood
//! `|x - q c/d| <= C sqrt(q)/d^2`. A residue `a in 1..q` is bad when it lies
//! in one of these neighbourhoods. Good residues have small Dedekind data:
//! for `q >= 17`, `l(a,q) <= (2 + 1/C) sqrt(q) + 2` and
//! `12|s(a,q)| <= (2 + 1/C) sqrt(q) + 5`, and there are at most
//! `C sqrt(q) (log q + 2 log 2)` bad residues.
//!
//! Membership is decided without floating point: multiplying the defining
//! inequality by `d^2` and squaring gives `(a d^2 - q c d)^2 <= C^2 q`.
//! The interval is closed, so residues landing exactly on an endpoint are bad.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{dedekind_sum, hj_length, is_prime};
use crate::rational::{ceil_sqrt, int, isqrt, le_times_sqrt, serde_frac, to_f64, Rational};

/// A Farey point `q c/d` together with the radius of its neighbourhood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FareyPoint {
    pub c: i64,
    pub d: i64,
    #[serde(with = "serde_frac")]
    pub value: Rational,
    /// `C sqrt(q) / d^2`, informational only.
    pub radius_approx: f64,
}

/// All Farey points of level `q`, ordered by `d` then `c`.
pub fn farey_points(q: i64, constant: &Rational) -> Vec<FareyPoint> {
    let root_q = (q as f64).sqrt();
    let dmax = isqrt(q as u64) as i64;
    (1..=dmax)
        .flat_map(|d| {
            (0..=d).filter(move |c| c.gcd(&d) == 1).map(move |c| (c, d))
        })
        .map(|(c, d)| FareyPoint {
            c,
            d,
            value: Rational::new(BigInt::from(q * c), BigInt::from(d)),
            radius_approx: to_f64(constant) * root_q / (d * d) as f64,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSet {
    pub q: i64,
    #[serde(rename = "C", with = "serde_frac")]
    pub constant: Rational,
    /// Sorted bad residues.
    pub members: Vec<i64>,
}

impl BadSet {
    pub fn contains(&self, a: i64) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// The complement in `1..q`, sorted.
    pub fn good(&self) -> Vec<i64> {
        let mut bad = self.members.iter().peekable();
        (1..self.q)
            .filter(|a| {
                if bad.peek() == Some(&a) {
                    bad.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }

    /// Lookup table indexed by residue; `true` means good.
    pub fn good_mask(&self) -> Vec<bool> {
        let mut mask = vec![true; self.q.max(1) as usize];
        mask[0] = false;
        for &a in &self.members {
            mask[a as usize] = false;
        }
        mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_constant(constant: &Rational) -> Result<()> {
    if !constant.is_positive() {
        return Err(Error::Domain(format!(
            "neighbourhood constant must be positive, got {constant}"
        )));
    }
    Ok(())
}

pub fn bad_set(q: i64, constant: &Rational) -> Result<BadSet> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    check_constant(constant)?;
    let c_num = constant.numer();
    let c_den = constant.denom();
    // (a d^2 - q c d)^2 * den^2 <= num^2 * q
    let rhs: BigInt = c_num * c_num * BigInt::from(q);
    let den_sq: BigInt = c_den * c_den;
    // integer upper bound for C sqrt(q)
    let reach = constant.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4)
        * ceil_sqrt(q as u64) as i64
        + 1;
    let dmax = isqrt(q as u64) as i64;

    let mut members: Vec<i64> = (1..=dmax)
        .into_par_iter()
        .flat_map_iter(|d| {
            let d2 = d * d;
            let rhs = &rhs;
            let den_sq = &den_sq;
            (0..=d)
                .filter(move |c| c.gcd(&d) == 1)
                .flat_map(move |c| {
                    let center = q * c * d; // q c/d scaled by d^2
                    let lo = Integer::div_floor(&(center - reach), &d2).max(1);
                    let hi = Integer::div_ceil(&(center + reach), &d2).min(q - 1);
                    (lo..=hi).filter(move |&a| {
                        let diff = BigInt::from(a * d2 - center);
                        &diff * &diff * den_sq <= *rhs
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(BadSet {
        q,
        constant: constant.clone(),
        members,
    })
}

/// Largest `l(a,q)` and largest `12|s(a,q)|` over a good set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstResidue {
    pub a: i64,
    pub l: i64,
    #[serde(with = "serde_frac")]
    pub twelve_abs_s: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: i64,
    #[serde(rename = "C", with = "serde_frac")]
    pub constant: Rational,
    pub bad_count: usize,
    pub good_count: usize,
    /// `C sqrt(q) (log q + 2 log 2)`.
    pub bad_count_bound_approx: f64,
    pub cardinality_ok: bool,
    /// Residue maximising `l(a,q)` over the good set.
    pub worst_length: Option<WorstResidue>,
    /// Residue maximising `12|s(a,q)|` over the good set.
    pub worst_dedekind: Option<WorstResidue>,
    pub length_ok: bool,
    pub dedekind_ok: bool,
    pub ok: bool,
}

/// Exhaustively checks the three Girstmair bounds at `q`.
///
/// The cardinality bound involves a logarithm and is the one comparison done
/// in floating point; the right-hand side is shrunk by a relative `1e-12`
/// so a pass is never a rounding artefact. The two per-residue bounds are
/// compared exactly.
pub fn verify_girstmair(q: i64, constant: &Rational) -> Result<BoundReport> {
    if q < 17 {
        return Err(Error::Domain(format!("Girstmair bounds need q >= 17, got {q}")));
    }
    let bad = bad_set(q, constant)?;
    let good = bad.good();
    let c = to_f64(constant);
    let card_bound = c * (q as f64).sqrt() * ((q as f64).ln() + 2.0 * 2f64.ln());
    let cardinality_ok = (bad.len() as f64) <= card_bound * (1.0 - 1e-12);

    let data: Vec<WorstResidue> = good
        .par_iter()
        .map(|&a| -> Result<WorstResidue> {
            Ok(WorstResidue {
                a,
                l: hj_length(q, a)?,
                twelve_abs_s: (dedekind_sum(q, a)? * int(12)).abs(),
            })
        })
        .collect::<Result<_>>()?;

    let k = int(2) + constant.recip();
    let mut length_ok = true;
    let mut dedekind_ok = true;
    for w in &data {
        length_ok &= le_times_sqrt(&int(w.l - 2), &k, q as u64);
        dedekind_ok &= le_times_sqrt(&(&w.twelve_abs_s - int(5)), &k, q as u64);
    }
    let worst_length = data.iter().max_by_key(|w| (w.l, -w.a)).cloned();
    let worst_dedekind = data
        .iter()
        .max_by(|x, y| x.twelve_abs_s.cmp(&y.twelve_abs_s).then(y.a.cmp(&x.a)))
        .cloned();

    Ok(BoundReport {
        q,
        constant: constant.clone(),
        bad_count: bad.len(),
        good_count: good.len(),
        bad_count_bound_approx: card_bound,
        cardinality_ok,
        worst_length,
        worst_dedekind,
        length_ok,
        dedekind_ok,
        ok: cardinality_ok && length_ok && dedekind_ok,
    })
}

/// Membership by the definition, over real-valued neighbourhoods scanned
/// one Farey point at a time. Used as an oracle in tests.
pub fn is_bad_by_definition(q: i64, constant: &Rational, a: i64) -> bool {
    farey_points(q, constant).iter().any(|fp| {
        let diff = int(a) - &fp.value;
        let d2 = int(fp.d * fp.d);
        // |a - qc/d| <= C sqrt(q)/d^2  <=>  |a - qc/d| d^2 <= C sqrt(q)
        le_times_sqrt(&(diff.abs() * d2), constant, q as u64)
    })
}
