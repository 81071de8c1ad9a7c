//! Genus and p-rank bounds for cyclic degree-`q` covers of the projective
//! line branched with multiplicities `a_1..a_r`.
//!
//! `B(a) = sum_i min_k h1(i p^k mod q)` bounds the p-rank from above. The
//! minimum runs over the full Frobenius orbit of `i`, `i` itself included.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicCoverData {
    pub q: u64,
    pub p: u64,
    pub mults: Vec<u64>,
    /// `sum a_j = q * l_branch`.
    pub l_branch: u64,
}

impl CyclicCoverData {
    pub fn new(q: u64, p: u64, mults: Vec<u64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::Domain(format!("q must be at least 2, got {q}")));
        }
        if !is_prime(p as i64) {
            return Err(Error::NotPrime(p as i64));
        }
        if q % p == 0 {
            return Err(Error::Domain(format!("q = {q} is not coprime to p = {p}")));
        }
        if let Some(a) = mults.iter().find(|&&a| a == 0 || a >= q) {
            return Err(Error::Domain(format!("multiplicity {a} outside 1..{q}")));
        }
        let sum: u64 = mults.iter().sum();
        if sum % q != 0 {
            return Err(Error::Domain(format!("sum of multiplicities {sum} is not divisible by {q}")));
        }
        if mults.iter().fold(q, |g, &a| g.gcd(&a)) != 1 {
            return Err(Error::Domain("multiplicities and q share a factor".into()));
        }
        Ok(Self {
            q,
            p,
            l_branch: sum / q,
            mults,
        })
    }

    /// `{a_1, q - a_1, ..., a_l, q - a_l}`.
    pub fn symmetric(q: u64, p: u64, halves: &[u64]) -> Result<Self> {
        let mults = halves.iter().flat_map(|&a| [a, q.wrapping_sub(a)]).collect();
        Self::new(q, p, mults)
    }
}

/// `max(0, i l - sum floor(a_j i / q) - 1)`.
pub fn h1_dim(i: u64, data: &CyclicCoverData) -> Result<u64> {
    if i == 0 || i >= data.q {
        return Err(Error::Domain(format!("index {i} outside 1..{}", data.q)));
    }
    let floors: u64 = data.mults.iter().map(|&a| a * i / data.q).sum();
    Ok((i * data.l_branch).saturating_sub(floors + 1))
}

/// Tame Riemann-Hurwitz: `2g - 2 = -2q + sum (q - gcd(a_j, q))`.
pub fn genus(data: &CyclicCoverData) -> u64 {
    let ram: u64 = data.mults.iter().map(|&a| data.q - a.gcd(&data.q)).sum();
    (ram + 2 - 2 * data.q) / 2
}

/// Orbits of `1..q` under multiplication by `p`.
pub fn frobenius_orbits(p: u64, q: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; q as usize];
    let mut orbits = Vec::new();
    for i in 1..q {
        if seen[i as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut j = i;
        while !seen[j as usize] {
            seen[j as usize] = true;
            orbit.push(j);
            j = j * (p % q) % q;
        }
        orbits.push(orbit);
    }
    orbits
}

pub fn prank_upper_bound(data: &CyclicCoverData) -> u64 {
    frobenius_orbits(data.p, data.q)
        .iter()
        .map(|orbit| {
            let m = orbit.iter().map(|&i| h1_dim(i, data).unwrap()).min().unwrap();
            m * orbit.len() as u64
        })
        .sum()
}

pub fn is_primitive_root(p: u64, q: u64) -> bool {
    if q == 2 {
        return p % 2 == 1;
    }
    if p % q == 0 {
        return false;
    }
    let mut x = p % q;
    for k in 1..q - 1 {
        if x == 1 {
            return k == q - 1;
        }
        x = x * (p % q) % q;
    }
    x == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrankReport {
    pub genus: u64,
    #[serde(rename = "B")]
    pub bound: u64,
    pub orbits: Vec<Vec<u64>>,
    pub primitive_root: bool,
}

pub fn prank_report(data: &CyclicCoverData) -> PrankReport {
    PrankReport {
        genus: genus(data),
        bound: prank_upper_bound(data),
        orbits: frobenius_orbits(data.p, data.q),
        primitive_root: is_primitive_root(data.p, data.q),
    }
}
