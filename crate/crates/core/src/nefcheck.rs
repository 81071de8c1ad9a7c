//! Intersection numbers of the canonical class of the normal cover `W`
//! with the curves supporting it.
//!
//! With `M = q K_Y + (q-1) D_red` we have `q K_W = f^* M`. For a branch
//! component `G`, `q Gbar = f^* G` and so `K_W . Gbar = M.G / q`; for a curve
//! `C` that is not in the branch locus (the general fiber, and the negative
//! section in the `APRIME` family) `Cbar = f^* C` and `K_W . Cbar = M.C`.
//!
//! Every entry is computed twice: from closed forms in the arrangement
//! parameters, and from the resolved configuration using adjunction
//! `K_Y.C = 2g(C) - 2 - C^2` and `D_red.C = C^2 + #(nodes on C)` for `C` in
//! `D`. The report states whether all listed numbers are nonnegative.
//!
//! `APRIME` closed forms use `t = (l-1) q e p^r - l e p^r - 2q + delta (q-1)`,
//! the coefficient of the fiber class in `M` once `K_Y` and `D_red` are
//! written in terms of `S_{d+1}`, `F`, the `S_i` and the `E_i = sum_j j G_{i,j}`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    build_resolution, ArrangementParams, ComponentKind, Family, ResolvedConfiguration,
};
use crate::numtheory::{is_prime, next_prime};
use crate::rational::{big, int, serde_frac, Rational};

/// Configurations above this size are not built; only closed forms are used.
pub const NEF_CONFIG_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefEntry {
    pub curve_class: String,
    /// Whether the curve lies in the branch locus.
    pub branch: bool,
    /// `M.C` from the closed form.
    #[serde(with = "serde_frac::option")]
    pub closed_form: Option<Rational>,
    /// `M.C` from the configuration.
    #[serde(with = "serde_frac::option")]
    pub from_configuration: Option<Rational>,
    #[serde(with = "serde_frac")]
    pub m_dot: Rational,
    /// `K_W . Cbar`.
    #[serde(with = "serde_frac")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefReport {
    pub family: Family,
    pub q: i64,
    pub entries: Vec<NefEntry>,
    /// Every listed intersection number is nonnegative.
    pub all_nef: bool,
    /// Closed forms and configuration agree wherever both exist.
    pub consistent: bool,
    #[serde(with = "serde_frac")]
    pub t_value: Rational,
}

/// `M.C = q k + (q-1) dd` with `k = K_Y.C` and `dd = D_red.C`.
#[derive(Debug, Clone)]
struct Adjunction {
    label: String,
    branch: bool,
    k: BigInt,
    dd: BigInt,
}

impl Adjunction {
    fn m_dot(&self, q: &BigInt) -> BigInt {
        q * &self.k + (q - 1) * &self.dd
    }
}

/// Precomputed data for evaluating nef reports at many primes.
pub struct NefModel {
    pub params: ArrangementParams,
    from_config: Option<Vec<Adjunction>>,
}

impl NefModel {
    pub fn new(params: ArrangementParams) -> Result<Self> {
        params.validate()?;
        let small = params
            .component_count()
            .is_some_and(|c| c <= NEF_CONFIG_LIMIT);
        let from_config = if small {
            Some(config_entries(&params, &build_resolution(&params)?))
        } else {
            None
        };
        Ok(Self {
            params,
            from_config,
        })
    }

    pub fn report(&self, q: i64) -> Result<NefReport> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let qb = BigInt::from(q);
        let (closed, t_value) = closed_entries(&self.params, &qb);
        let mut entries: Vec<NefEntry> = closed
            .into_iter()
            .map(|(label, branch, m)| {
                let from_configuration = self
                    .from_config
                    .as_ref()
                    .and_then(|c| c.iter().find(|a| a.label == label))
                    .map(|a| big(&a.m_dot(&qb)));
                NefEntry {
                    curve_class: label,
                    branch,
                    closed_form: Some(big(&m)),
                    from_configuration,
                    m_dot: big(&m),
                    value: Rational::default(),
                }
            })
            .collect();
        if let Some(config) = &self.from_config {
            for a in config {
                if entries.iter().all(|e| e.curve_class != a.label) {
                    let m = big(&a.m_dot(&qb));
                    entries.push(NefEntry {
                        curve_class: a.label.clone(),
                        branch: a.branch,
                        closed_form: None,
                        from_configuration: Some(m.clone()),
                        m_dot: m,
                        value: Rational::default(),
                    });
                }
            }
        }
        for e in &mut entries {
            e.value = if e.branch {
                &e.m_dot / int(q)
            } else {
                e.m_dot.clone()
            };
        }
        let all_nef = entries.iter().all(|e| {
            !e.m_dot.is_negative() && e.from_configuration.as_ref().is_none_or(|v| !v.is_negative())
        });
        let consistent = entries.iter().all(|e| match (&e.closed_form, &e.from_configuration) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        });
        Ok(NefReport {
            family: self.params.family,
            q,
            entries,
            all_nef,
            consistent,
            t_value,
        })
    }

    /// Smallest prime `q >= 17`, different from `p`, at which every listed
    /// number is nonnegative.
    pub fn min_nef_q(&self, q_max: i64) -> Result<i64> {
        let mut q = 17;
        while q <= q_max {
            if q as u64 != self.params.p && self.report(q)?.all_nef {
                return Ok(q);
            }
            q = next_prime(q + 1);
        }
        Err(Error::CapExceeded(format!(
            "no prime up to {q_max} makes every listed number nonnegative"
        )))
    }
}

pub fn nef_report(params: &ArrangementParams, q: i64) -> Result<NefReport> {
    NefModel::new(*params)?.report(q)
}

pub fn min_nef_q(params: &ArrangementParams, q_max: i64) -> Result<i64> {
    NefModel::new(*params)?.min_nef_q(q_max)
}

/// Closed forms `(label, branch, M.C)` and the fiber coefficient `t`.
fn closed_entries(p: &ArrangementParams, q: &BigInt) -> (Vec<(String, bool, BigInt)>, Rational) {
    let n = p.n();
    let delta = p.delta();
    let d = BigInt::from(p.d);
    let m = p.tangency_order();
    let q1 = q - 1;
    let mut out = Vec::new();
    let t;
    match p.family {
        Family::A0 | Family::A => {
            let (g, u, w) = (BigInt::from(p.g), BigInt::from(p.u), BigInt::from(p.w));
            // the displayed forms carry halves; work with twice the value
            let dn = &d * &n;
            t = Rational::new(
                (2 * (&delta + &w) + &dn) * &q1 - 2 * q * (2 - 2 * &g + &n),
                BigInt::from(2),
            );
            let s_i = {
                let twice = -(&q1) * (&d - 2) * &n + 2 * &n * (&d - 1) + 2 * &q1 * &u * &n
                    + (2 * (&delta + &w) + &dn) * &q1
                    - 2 * q * (2 - 2 * &g + &n);
                twice / 2
            };
            out.push(("S_i".to_string(), true, s_i));
            out.push((
                format!("S_{}", p.d + 1),
                true,
                q * (2 * &g - 2) + &n + (&delta + &w) * &q1,
            ));
            push_chain(&mut out, &m, q);
            out.push((
                "F_general".to_string(),
                false,
                (&d - 1) * q - (&d + 1) + &q1 * &u,
            ));
            if p.u > 0 {
                let twice = &q1 * &dn + (2 * (&delta + &w) + &dn) * &q1
                    - 2 * q * (2 - 2 * &g + &n)
                    + 2 * &q1 * &u * &n;
                out.push(("H_i".to_string(), true, twice / 2));
            }
        }
        Family::APrime => {
            let l = BigInt::from(p.half_d());
            let t_int = (&l - 1) * q * &n - &l * &n - 2 * q + &delta * &q1;
            let s_i = {
                let twice = &q1 * (&n - (&d - 1) * &n) + 2 * ((&d - 1) * &n + &t_int);
                twice / 2
            };
            t = big(&t_int);
            out.push(("S_i".to_string(), true, s_i));
            out.push((
                format!("S_{}", p.d + 1),
                false,
                q * (&n - 2) + &delta * &q1,
            ));
            push_chain(&mut out, &m, q);
            out.push(("F_general".to_string(), false, &q1 * &d - 2 * q));
        }
    }
    (out, t)
}

fn push_chain(out: &mut Vec<(String, bool, BigInt)>, m: &BigInt, q: &BigInt) {
    out.push(("G_first".to_string(), true, BigInt::from(0)));
    if *m >= BigInt::from(3) {
        out.push(("G_interior".to_string(), true, BigInt::from(0)));
    }
    out.push(("G_last".to_string(), true, q - 2));
}

/// Adjunction data for one representative of each curve class.
fn config_entries(p: &ArrangementParams, config: &ResolvedConfiguration) -> Vec<Adjunction> {
    let valence = config.valences();
    let on_divisor = |label: &str, idx: usize| {
        let c = &config.components[idx];
        Adjunction {
            label: label.to_string(),
            branch: true,
            k: BigInt::from(2 * c.genus - 2 - c.self_int),
            dd: BigInt::from(c.self_int + valence[idx]),
        }
    };
    let mut out = Vec::new();
    let idx = |id: String| config.index_of(&id);
    if let Some(i) = idx("S1".into()) {
        out.push(on_divisor("S_i", i));
    }
    let neg_label = format!("S_{}", p.d + 1);
    match idx(format!("S{}", p.d + 1)) {
        Some(i) => out.push(on_divisor(&neg_label, i)),
        None => {
            // off the divisor: meets only the vertical components
            let vertical = config
                .components
                .iter()
                .filter(|c| matches!(c.kind, ComponentKind::Fiber | ComponentKind::GeneralFiber))
                .count();
            out.push(Adjunction {
                label: neg_label,
                branch: false,
                k: p.n() - 2,
                dd: BigInt::from(vertical),
            });
        }
    }
    if let Some(t) = config.tangencies.first() {
        out.push(on_divisor("G_first", t.chain[0]));
        if t.chain.len() >= 3 {
            out.push(on_divisor("G_interior", t.chain[1]));
        }
        out.push(on_divisor("G_last", *t.chain.last().expect("chain is never empty")));
        out.push(on_divisor("F_j", t.fiber));
    }
    let horizontal = config
        .components
        .iter()
        .filter(|c| c.kind.is_horizontal())
        .count();
    out.push(Adjunction {
        label: "F_general".to_string(),
        branch: false,
        k: BigInt::from(-2),
        dd: BigInt::from(horizontal),
    });
    if let Some(i) = idx("H1".into()) {
        out.push(on_divisor("H_i", i));
    }
    if let Some(i) = idx("R1".into()) {
        out.push(on_divisor("R_j", i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aprime_negative_section_example() {
        let r = nef_report(&ArrangementParams::aprime(2, 1, 1, 3), 17).unwrap();
        let e = r.entries.iter().find(|e| e.curve_class == "S_7").unwrap();
        assert_eq!(e.m_dot, int(240));
        assert!(r.consistent, "{r:?}");
    }

    #[test]
    fn chain_entries() {
        for params in [
            ArrangementParams::a(3, 1, 1, 4, 1, 2, 1),
            ArrangementParams::aprime(3, 1, 1, 3),
        ] {
            let r = nef_report(&params, 101).unwrap();
            let get = |l: &str| r.entries.iter().find(|e| e.curve_class == l).unwrap().clone();
            assert_eq!(get("G_interior").m_dot, int(0));
            assert_eq!(get("G_first").m_dot, int(0));
            assert_eq!(get("G_last").value, Rational::new(99.into(), 101.into()));
            assert!(r.consistent, "{r:?}");
        }
    }

    #[test]
    fn family_a_agrees_with_configuration() {
        for g in 0..3 {
            for (u, w) in [(0, 0), (1, 0), (2, 3)] {
                let params = if u == 0 && w == 0 {
                    ArrangementParams::a0(2, 2, 1, 5, g)
                } else {
                    ArrangementParams::a(2, 2, 1, 5, g, u, w)
                };
                let model = NefModel::new(params).unwrap();
                let r = model.report(211).unwrap();
                assert!(r.consistent, "{r:?}");
                assert!(r.entries.iter().filter(|e| e.closed_form.is_some()).all(|e| e.from_configuration.is_some()));
            }
        }
    }

    #[test]
    fn negative_section_positive_for_large_q() {
        let params = ArrangementParams::a(2, 1, 1, 3, 0, 0, 1);
        let low = nef_report(&params, 17).unwrap();
        let high = nef_report(&params, 1009).unwrap();
        let get = |r: &NefReport| r.entries.iter().find(|e| e.curve_class == "S_4").unwrap().m_dot.clone();
        assert!(get(&high) > int(0));
        assert!(get(&high) > get(&low));
    }

    #[test]
    fn thresholds_are_stable() {
        let params = ArrangementParams::aprime(2, 1, 1, 3);
        let model = NefModel::new(params).unwrap();
        let q0 = model.min_nef_q(10007).unwrap();
        let mut q = q0;
        for _ in 0..6 {
            let r = model.report(q).unwrap();
            assert!(r.all_nef && r.t_value > int(0));
            q = next_prime(q + 1);
        }
    }

    #[test]
    fn large_parameters_skip_configuration() {
        let params = ArrangementParams::a(2, 20, 1, 50, 0, 30, 1);
        let r = nef_report(&params, 10007).unwrap();
        assert!(r.entries.iter().all(|e| e.from_configuration.is_none()));
    }
}
