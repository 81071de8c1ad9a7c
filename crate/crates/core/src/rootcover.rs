//! Chern numbers of the resolved `q`-th root cover `X` of a pair `(Y, D)`.
//!
//! Over a node of `D_i` and `D_j` the normalised cover has a cyclic quotient
//! singularity `1/q(1,a)` with `nu_i a + nu_j = 0 mod q`. Resolving these,
//!
//! ```text
//! c1^2(X) = q c1bar^2 + 2(c2 - c2bar) + (c1^2 - c1bar^2 + 2 c2bar - 2 c2)/q - sum c(a,q)
//! c2(X)   = q c2bar   +  (c2 - c2bar) + sum l(a,q)
//! ```
//!
//! where the sums run over nodes with multiplicity and `c1^2, c2` belong to `Y`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{log_chern_pair, ResolvedConfiguration};
use crate::numtheory::{c_value, hj_expand, is_prime, mod_inverse};
use crate::rational::{big, ceil_sqrt, int, serde_frac, Rational};

/// Multiplicities of the branch divisor, keyed by component id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchAssignment {
    pub q: i64,
    pub nus: BTreeMap<String, i64>,
}

impl BranchAssignment {
    /// Builds an assignment from multiplicities listed in component order.
    pub fn from_indexed(config: &ResolvedConfiguration, q: i64, nus: &[i64]) -> Self {
        Self {
            q,
            nus: config
                .components
                .iter()
                .zip(nus)
                .map(|(c, &nu)| (c.id.clone(), nu.rem_euclid(q)))
                .collect(),
        }
    }

    /// Multiplicities in component order, reduced into `1..q`.
    pub fn resolve(&self, config: &ResolvedConfiguration) -> Result<Vec<i64>> {
        if !is_prime(self.q) {
            return Err(Error::NotPrime(self.q));
        }
        config
            .components
            .iter()
            .map(|c| {
                let nu = self.nus.get(&c.id).ok_or_else(|| {
                    Error::InvalidAssignment(format!("no multiplicity for {}", c.id))
                })?;
                let nu = nu.rem_euclid(self.q);
                if nu == 0 {
                    return Err(Error::InvalidAssignment(format!(
                        "multiplicity of {} vanishes mod {}",
                        c.id, self.q
                    )));
                }
                Ok(nu)
            })
            .collect()
    }
}

/// The unique `0 < a < q` with `nu_i a + nu_j = 0 mod q`.
pub fn node_residue(nu_i: i64, nu_j: i64, q: i64) -> i64 {
    let inv = mod_inverse(nu_i, q).expect("multiplicity must be a unit mod q");
    (-(nu_j % q) * inv).rem_euclid(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Singularity {
    pub node: (String, String),
    pub count: i64,
    pub a: i64,
    pub hj_digits: Vec<i64>,
    #[serde(with = "serde_frac")]
    pub c: Rational,
    pub l: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInvariants {
    pub q: i64,
    #[serde(with = "serde_frac")]
    pub c1sq_x: Rational,
    #[serde(with = "serde_frac")]
    pub c2_x: Rational,
    #[serde(with = "serde_frac")]
    pub chi: Rational,
    #[serde(with = "serde_frac")]
    pub slope: Rational,
    /// `sum c(a,q)` over nodes with multiplicity.
    #[serde(with = "serde_frac")]
    pub c_sum: Rational,
    pub l_sum: i64,
    pub t2: i64,
    /// `(6 ceil(sqrt q) + 7) t2`; absent for `q < 17`.
    #[serde(with = "serde_frac::option")]
    pub defect_bound: Option<Rational>,
    pub singularities: Vec<Singularity>,
}

impl CoverInvariants {
    /// Noether's formula needs `c1^2 + c2` divisible by 12.
    pub fn noether_ok(&self) -> bool {
        self.chi.is_integer()
    }

    /// `sum c(a,q) <= defect_bound`, when the bound is defined.
    pub fn defect_ok(&self) -> Option<bool> {
        self.defect_bound.as_ref().map(|b| &self.c_sum <= b)
    }
}

/// `(6 ceil(sqrt q) + 7) t2`, an upper bound for the minimality defect.
pub fn defect_bound(q: i64, t2: i64) -> Result<Rational> {
    if q < 17 {
        return Err(Error::Domain(format!("defect bound needs q >= 17, got {q}")));
    }
    Ok(int((6 * ceil_sqrt(q as u64) as i64 + 7) * t2))
}

pub fn chern_of_cover(
    config: &ResolvedConfiguration,
    assign: &BranchAssignment,
) -> Result<CoverInvariants> {
    let mut config = config.clone();
    config.validate()?;
    let q = assign.q;
    let nus = assign.resolve(&config)?;

    let mut cache: HashMap<i64, (Rational, i64, Vec<i64>)> = HashMap::new();
    let mut singularities = Vec::with_capacity(config.nodes.len());
    let mut c_sum = Rational::zero();
    let mut l_sum = 0i64;
    for node in &config.nodes {
        let a = node_residue(nus[node.i], nus[node.j], q);
        if !cache.contains_key(&a) {
            let hj = hj_expand(q, a)?;
            cache.insert(a, (c_value(q, a)?, hj.length() as i64, hj.digits));
        }
        let (c, l, digits) = &cache[&a];
        c_sum += c * int(node.count);
        l_sum += l * node.count;
        singularities.push(Singularity {
            node: (
                config.components[node.i].id.clone(),
                config.components[node.j].id.clone(),
            ),
            count: node.count,
            a,
            hj_digits: digits.clone(),
            c: c.clone(),
            l: *l,
        });
    }

    let pair = log_chern_pair(&config);
    let (cb1, cb2) = (big(&pair.c1sq), big(&pair.c2));
    let c1y = int(config.ambient.c1sq_y);
    let c2y = int(config.ambient.c2_y);
    let qr = int(q);
    let c1sq_x = &cb1 * &qr + int(2) * (&c2y - &cb2)
        + (&c1y - &cb1 + int(2) * &cb2 - int(2) * &c2y) / &qr
        - &c_sum;
    let c2_x = &cb2 * &qr + (&c2y - &cb2) + int(l_sum);
    if c2_x.is_zero() {
        return Err(Error::Degenerate("c2 of the cover vanishes".into()));
    }
    let chi = (&c1sq_x + &c2_x) / int(12);
    let slope = &c1sq_x / &c2_x;
    let t2 = config.t2();
    Ok(CoverInvariants {
        q,
        c1sq_x,
        c2_x,
        chi,
        slope,
        c_sum,
        l_sum,
        t2,
        defect_bound: defect_bound(q, t2).ok(),
        singularities,
    })
}

/// `|c1^2(X) - q c1bar^2|` and `|c2(X) - q c2bar|` as exact rationals.
pub fn leading_order_gaps(
    config: &ResolvedConfiguration,
    inv: &CoverInvariants,
) -> (Rational, Rational) {
    let pair = log_chern_pair(config);
    let q = BigInt::from(inv.q);
    let g1 = (&inv.c1sq_x - big(&(pair.c1sq * &q))).abs();
    let g2 = (&inv.c2_x - big(&(pair.c2 * q))).abs();
    (g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_resolution, ArrangementParams};
    use crate::rational::frac;

    #[test]
    fn residues() {
        assert_eq!(node_residue(5, 5, 17), 16);
        assert_eq!(node_residue(2, 3, 7), 2);
        assert_eq!(node_residue(3, 2, 7), 4);
        assert_eq!(2 * 4 % 7, 1);
        assert_eq!(node_residue(3, 10, 7), node_residue(3, 3, 7));
    }

    #[test]
    fn defect_bound_examples() {
        assert_eq!(defect_bound(17, 10).unwrap(), int(370));
        assert_eq!(defect_bound(101, 0).unwrap(), int(0));
        assert!(defect_bound(13, 1).is_err());
    }

    fn constant_assignment(config: &ResolvedConfiguration, q: i64, nu: i64) -> BranchAssignment {
        BranchAssignment::from_indexed(config, q, &vec![nu; config.components.len()])
    }

    #[test]
    fn equal_multiplicities_give_a_q_minus_one() {
        let cfg = build_resolution(&ArrangementParams::a0(2, 1, 1, 3, 0)).unwrap();
        let q = 17;
        let inv = chern_of_cover(&cfg, &constant_assignment(&cfg, q, 3)).unwrap();
        let t2 = cfg.t2();
        assert!(inv.singularities.iter().all(|s| s.a == q - 1));
        assert_eq!(inv.c_sum, int(t2) * (int(2) - frac(2, q)));
        assert_eq!(inv.l_sum, t2 * (q - 1));
    }

    #[test]
    fn orientation_does_not_matter() {
        let cfg = build_resolution(&ArrangementParams::a0(2, 1, 1, 3, 0)).unwrap();
        let q = 31;
        let nus: Vec<i64> = (0..cfg.components.len() as i64).map(|k| 1 + (7 * k) % 29).collect();
        let assign = BranchAssignment::from_indexed(&cfg, q, &nus);
        let a = chern_of_cover(&cfg, &assign).unwrap();
        let mut flipped = cfg.clone();
        for n in &mut flipped.nodes {
            std::mem::swap(&mut n.i, &mut n.j);
        }
        let b = chern_of_cover(&flipped, &assign).unwrap();
        assert_eq!((a.c1sq_x, a.c2_x), (b.c1sq_x, b.c2_x));
    }

    #[test]
    fn rejects_vanishing_multiplicity() {
        let cfg = build_resolution(&ArrangementParams::a0(2, 1, 1, 3, 0)).unwrap();
        let assign = constant_assignment(&cfg, 17, 17);
        assert!(matches!(
            chern_of_cover(&cfg, &assign),
            Err(Error::InvalidAssignment(_))
        ));
        let mut missing = constant_assignment(&cfg, 17, 1);
        missing.nus.remove("S1");
        assert!(chern_of_cover(&cfg, &missing).is_err());
        assert_eq!(
            chern_of_cover(&cfg, &constant_assignment(&cfg, 21, 1)),
            Err(Error::NotPrime(21))
        );
    }
}
