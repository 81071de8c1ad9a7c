//! Hirzebruch-Jung continued fractions, Dedekind sums and the derived
//! quantities `l(a,q)`, `s(a,q)` and `c(a,q) = 12 s(a,q) + l(a,q)` attached
//! to a cyclic quotient singularity `1/q(1,a)`.
//!
//! Everything here is exact. [`dedekind_sum`] runs the reciprocity recursion
//! in `O(log q)` steps; [`dedekind_sum_naive`] evaluates the defining sum and
//! is kept as the reference it is checked against.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, int, serde_frac, Rational};

/// Negative-regular continued fraction `q/a = [e_1, ..., e_s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HJExpansion {
    pub q: i64,
    pub a: i64,
    pub digits: Vec<i64>,
}

impl HJExpansion {
    /// Number of exceptional curves in the resolution chain, `l(a,q)`.
    pub fn length(&self) -> usize {
        self.digits.len()
    }

    /// Evaluates `e_1 - 1/(e_2 - 1/(... - 1/e_s))`.
    pub fn evaluate(&self) -> Rational {
        let mut digits = self.digits.iter().rev();
        let mut acc = int(*digits.next().expect("expansion is never empty"));
        for &e in digits {
            acc = int(e) - acc.recip();
        }
        acc
    }
}

/// Dedekind data of the singularity `1/q(1,a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedekindData {
    pub q: i64,
    pub a: i64,
    #[serde(with = "serde_frac")]
    pub s: Rational,
    pub l: i64,
    #[serde(with = "serde_frac")]
    pub c: Rational,
    pub hj_digits: Vec<i64>,
}

impl DedekindData {
    pub fn new(q: i64, a: i64) -> Result<Self> {
        let hj = hj_expand(q, a)?;
        let s = dedekind_sum(q, a)?;
        let l = hj.length() as i64;
        let c = &s * int(12) + int(l);
        Ok(Self {
            q,
            a,
            s,
            l,
            c,
            hj_digits: hj.digits,
        })
    }
}

fn check_pair(q: i64, a: i64) -> Result<()> {
    if q < 2 || a <= 0 || a >= q {
        return Err(Error::Domain(format!(
            "need 0 < a < q with q >= 2, got a = {a}, q = {q}"
        )));
    }
    if q.gcd(&a) != 1 {
        return Err(Error::Domain(format!("gcd({a}, {q}) != 1")));
    }
    Ok(())
}

pub fn hj_expand(q: i64, a: i64) -> Result<HJExpansion> {
    check_pair(q, a)?;
    let mut digits = Vec::new();
    let (mut num, mut den) = (q, a);
    while den != 0 {
        let e = Integer::div_ceil(&num, &den);
        digits.push(e);
        (num, den) = (den, e * den - num);
    }
    Ok(HJExpansion { q, a, digits })
}

/// `l(a,q)`, the length of the Hirzebruch-Jung expansion of `q/a`.
pub fn hj_length(q: i64, a: i64) -> Result<i64> {
    Ok(hj_expand(q, a)?.length() as i64)
}

/// Sawtooth `((x)) = x - floor(x) - 1/2`, and 0 at integers.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    x - x.floor() - frac(1, 2)
}

/// `s(a,q) = sum_{i=1}^{q-1} ((i/q)) ((i a/q))` summed term by term. Each
/// term is `(2i - q)(2r - q) / 4q^2` with `r = i a mod q`, or 0 when `r = 0`,
/// so the sum is accumulated over the integers.
pub fn dedekind_sum_naive(q: i64, a: i64) -> Result<Rational> {
    check_pair(q, a)?;
    let (q128, a128) = (q as i128, a as i128);
    let num: i128 = (1..q128)
        .map(|i| {
            let r = (i * a128).rem_euclid(q128);
            if r == 0 {
                0
            } else {
                (2 * i - q128) * (2 * r - q128)
            }
        })
        .sum();
    Ok(Rational::new(num.into(), (4 * q128 * q128).into()))
}

/// `s(a,q)` through the reciprocity law
/// `s(a,q) + s(q,a) = -1/4 + (a/q + q/a + 1/(aq))/12` and `s(q,a) = s(q mod a, a)`.
pub fn dedekind_sum(q: i64, a: i64) -> Result<Rational> {
    check_pair(q, a)?;
    let mut total = Rational::zero();
    let mut sign = 1i64;
    let (mut q, mut a) = (q, a);
    // s(0, 1) = 0 terminates the recursion
    while q > 1 {
        let (qq, aa) = (i128::from(q), i128::from(a));
        let term = Rational::new(
            (aa * aa + qq * qq + 1 - 3 * aa * qq).into(),
            (12 * aa * qq).into(),
        );
        if sign > 0 {
            total += term;
        } else {
            total -= term;
        }
        sign = -sign;
        (q, a) = (a, q % a);
    }
    Ok(total)
}

/// `c(a,q) = 12 s(a,q) + l(a,q)`.
pub fn c_value(q: i64, a: i64) -> Result<Rational> {
    Ok(dedekind_sum(q, a)? * int(12) + int(hj_length(q, a)?))
}

/// Inverse of `a` modulo `m`, if it exists, in `0..m`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let ext = a.rem_euclid(m).extended_gcd(&m);
    (ext.gcd == 1).then(|| ext.x.rem_euclid(m))
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut f = 5;
    while f * f <= n {
        if n % f == 0 || n % (f + 2) == 0 {
            return false;
        }
        f += 6;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: i64) -> i64 {
    let mut k = n.max(2);
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// Primes in the closed range `[lo, hi]`.
pub fn primes_between(lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}
