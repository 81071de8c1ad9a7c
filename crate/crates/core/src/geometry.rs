//! Combinatorial models of the section-and-fiber arrangements on a ruled
//! surface, their minimal log resolutions, and log Chern numbers.
//!
//! The ruled surface `Z -> C` over a curve of genus `g` carries a negative
//! section `S_{d+1}` with `S_{d+1}^2 = -e p^r`. After `r` Frobenius base
//! changes, `d` general sections become pairwise tangent with contact order
//! `p^r` at `e` points per pair, `delta = e d(d-1)/2` points in total. Each
//! tangency point needs a chain of `p^r` blowups `G_1, ..., G_{p^r}`:
//!
//! ```text
//!   F_j --- G_1 --- G_2 --- ... --- G_{p^r} --- S_a
//!                                        \----- S_b
//! ```
//!
//! `G_1 .. G_{p^r - 1}` are (-2)-curves and `G_{p^r}` is the (-1)-curve.
//! The fiber `F_j` only passes through the first centre, so its strict
//! transform has `F_j^2 = -1`; it still meets the other `d - 2` sections
//! transversally. The sections pass through every centre on them and drop to
//! `S_i^2 = e p^r - (d-1) e p^r`.
//!
//! Nothing here knows about coordinates or fields; the configuration is the
//! list of components (self-intersection, genus), the node incidence with
//! multiplicities, and the Chern numbers of the blown-up ruled surface.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::is_prime;
use crate::rational::{big, serde_bigint, serde_frac, Rational};

/// Largest configuration [`build_resolution`] will materialise.
pub const MAX_COMPONENTS: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `d` tangent sections, the negative section and the `delta` fibers.
    A0,
    /// `A0` plus `u` general sections `H_i` and `w` general fibers `R_i`.
    A,
    /// `d = 2l` tangent sections and the `delta` fibers on a Hirzebruch
    /// surface, without the negative section.
    #[serde(rename = "APRIME")]
    APrime,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A0 => "A0",
            Family::A => "A",
            Family::APrime => "APRIME",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A0" => Ok(Family::A0),
            "A" => Ok(Family::A),
            "APRIME" | "A'" | "A_PRIME" => Ok(Family::APrime),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrangementParams {
    pub family: Family,
    /// Characteristic.
    pub p: u64,
    /// Frobenius iterations.
    pub r: u32,
    /// Degree of the twisting line bundle.
    pub e: u64,
    /// Number of tangent sections.
    pub d: u64,
    /// Genus of the base curve.
    pub g: u64,
    /// Extra general sections.
    pub u: u64,
    /// Extra general fibers.
    pub w: u64,
}

impl ArrangementParams {
    pub fn a0(p: u64, r: u32, e: u64, d: u64, g: u64) -> Self {
        Self {
            family: Family::A0,
            p,
            r,
            e,
            d,
            g,
            u: 0,
            w: 0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn a(p: u64, r: u32, e: u64, d: u64, g: u64, u: u64, w: u64) -> Self {
        Self {
            family: Family::A,
            p,
            r,
            e,
            d,
            g,
            u,
            w,
        }
    }

    /// The `APRIME` family with `d = 2l` sections over the projective line.
    pub fn aprime(p: u64, r: u32, e: u64, l: u64) -> Self {
        Self {
            family: Family::APrime,
            p,
            r,
            e,
            d: 2 * l,
            g: 0,
            u: 0,
            w: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfiguration(msg));
        if !is_prime(self.p as i64) {
            return bad(format!("characteristic p = {} is not prime", self.p));
        }
        if self.r == 0 || self.e == 0 {
            return bad("need r >= 1 and e >= 1".into());
        }
        if self.d < 3 {
            return bad(format!("need d >= 3 sections, got {}", self.d));
        }
        match self.family {
            Family::A0 if self.u != 0 || self.w != 0 => {
                bad("family A0 has no extra sections or fibers".into())
            }
            Family::APrime if self.g != 0 || self.u != 0 || self.w != 0 => {
                bad("family APRIME lives over P^1 with no extra curves".into())
            }
            Family::APrime if self.d % 2 != 0 => {
                bad(format!("family APRIME needs an even d = 2l, got {}", self.d))
            }
            _ => Ok(()),
        }
    }

    /// `l = d/2` for the `APRIME` family.
    pub fn half_d(&self) -> u64 {
        self.d / 2
    }

    /// Contact order `p^r` of the tangent sections.
    pub fn tangency_order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.r as usize)
    }

    /// `e p^r`, the negative of `S_{d+1}^2`.
    pub fn n(&self) -> BigInt {
        BigInt::from(self.e) * self.tangency_order()
    }

    /// Number of tangency points, `e d(d-1)/2`.
    pub fn delta(&self) -> BigInt {
        BigInt::from(self.e) * BigInt::from(self.d) * BigInt::from(self.d - 1) / 2
    }

    /// Change of the log Chern number `c2` when the `H_i` and `R_i` are added.
    ///
    /// `u(u-1)/2 e p^r + u d e p^r + u delta + 2(g-1)u + w(u + d - 1)`. Each
    /// general fiber meets the `d` sections, the negative section and every
    /// `H_i`, which gives the `w(u + d - 1)` term.
    pub fn upsilon(&self) -> BigInt {
        let (u, w, d) = (BigInt::from(self.u), BigInt::from(self.w), BigInt::from(self.d));
        let g1 = BigInt::from(self.g) - 1;
        let n = self.n();
        &u * (&u - 1) / 2 * &n + &u * &d * &n + &u * self.delta() + 2 * &g1 * &u
            + &w * (&u + &d - 1)
    }

    /// Number of components [`build_resolution`] would produce.
    pub fn component_count(&self) -> Option<u64> {
        let m = self.p.checked_pow(self.r)?;
        let delta = self.e.checked_mul(self.d * (self.d - 1) / 2)?;
        let negative = u64::from(self.family != Family::APrime);
        delta
            .checked_mul(m + 1)?
            .checked_add(self.d + negative + self.u + self.w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Section,
    NegativeSection,
    Fiber,
    GeneralFiber,
    Exceptional,
}

impl ComponentKind {
    /// Horizontal curves meet every fiber once.
    pub fn is_horizontal(self) -> bool {
        matches!(self, ComponentKind::Section | ComponentKind::NegativeSection)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
    pub self_int: i64,
    pub genus: i64,
}

/// `count` transverse intersection points between components `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub i: usize,
    pub j: usize,
    pub count: i64,
}

/// A tangency point of two sections together with its exceptional chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tangency {
    pub sections: (usize, usize),
    pub fiber: usize,
    /// `chain[0]` meets the fiber, the last entry meets both sections.
    pub chain: Vec<usize>,
}

impl Tangency {
    /// Coefficients of `G_1, ..., G_{p^r}` in the pullback of
    /// `mu_a S_a + mu_b S_b + mu_f F`, following the blowups one at a time:
    /// each centre lies on `S_a`, `S_b` and the previous exceptional curve
    /// (the fiber, for the first centre).
    pub fn pullback_coefficients(&self, mu_a: i64, mu_b: i64, mu_f: i64) -> Vec<i64> {
        let mut previous = mu_f;
        self.chain
            .iter()
            .map(|_| {
                previous += mu_a + mu_b;
                previous
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub c1sq_y: i64,
    pub c2_y: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedConfiguration {
    pub components: Vec<Component>,
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub tangencies: Vec<Tangency>,
    pub ambient: Ambient,
}

impl ResolvedConfiguration {
    /// Checks node indices, rejects self-intersection nodes and
    /// normalises every node to `i < j`.
    pub fn validate(&mut self) -> Result<()> {
        let n = self.components.len();
        for node in &mut self.nodes {
            if node.i >= n || node.j >= n {
                return Err(Error::InvalidConfiguration(format!(
                    "node ({}, {}) refers to a missing component",
                    node.i, node.j
                )));
            }
            if node.i == node.j {
                return Err(Error::InvalidConfiguration(format!(
                    "component {} cannot meet itself in a normal crossing divisor",
                    self.components[node.i].id
                )));
            }
            if node.count <= 0 {
                return Err(Error::InvalidConfiguration(format!(
                    "node ({}, {}) has non-positive count {}",
                    node.i, node.j, node.count
                )));
            }
            if node.i > node.j {
                std::mem::swap(&mut node.i, &mut node.j);
            }
        }
        for t in &self.tangencies {
            let ids = [t.sections.0, t.sections.1, t.fiber];
            if ids.iter().chain(&t.chain).any(|&k| k >= n) {
                return Err(Error::InvalidConfiguration(
                    "tangency refers to a missing component".into(),
                ));
            }
        }
        Ok(())
    }

    /// Total number of nodes `t2`, counted with multiplicity.
    pub fn t2(&self) -> i64 {
        self.nodes.iter().map(|n| n.count).sum()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Number of node points on each component.
    pub fn valences(&self) -> Vec<i64> {
        let mut v = vec![0; self.components.len()];
        for node in &self.nodes {
            v[node.i] += node.count;
            v[node.j] += node.count;
        }
        v
    }

    /// Intersection number of two distinct components.
    pub fn intersection(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return self.components[i].self_int;
        }
        let (a, b) = (i.min(j), i.max(j));
        self.nodes
            .iter()
            .filter(|n| n.i == a && n.j == b)
            .map(|n| n.count)
            .sum()
    }
}

struct Builder {
    components: Vec<Component>,
    nodes: Vec<Node>,
}

impl Builder {
    fn push(&mut self, id: String, kind: ComponentKind, self_int: i64, genus: i64) -> usize {
        self.components.push(Component {
            id,
            kind,
            self_int,
            genus,
        });
        self.components.len() - 1
    }

    fn meet(&mut self, a: usize, b: usize, count: i64) {
        self.nodes.push(Node {
            i: a.min(b),
            j: a.max(b),
            count,
        });
    }
}

fn small(v: BigInt, what: &str) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::CapExceeded(format!("{what} does not fit in 64 bits")))
}

/// Builds the minimal log resolution of the arrangement.
pub fn build_resolution(params: &ArrangementParams) -> Result<ResolvedConfiguration> {
    params.validate()?;
    let size = params.component_count().unwrap_or(u64::MAX);
    if size > MAX_COMPONENTS {
        return Err(Error::CapExceeded(format!(
            "resolution would have {size} components (limit {MAX_COMPONENTS})"
        )));
    }
    let m = small(params.tangency_order(), "p^r")?;
    let n = small(params.n(), "e p^r")?;
    let (d, e) = (params.d as usize, params.e as usize);
    let g = params.g as i64;
    let with_negative = params.family != Family::APrime;
    let section_genus = if params.family == Family::APrime { 0 } else { g };

    let mut b = Builder {
        components: Vec::with_capacity(size as usize),
        nodes: Vec::new(),
    };
    let sections: Vec<usize> = (1..=d)
        .map(|i| {
            b.push(
                format!("S{i}"),
                ComponentKind::Section,
                n - (d as i64 - 1) * n,
                section_genus,
            )
        })
        .collect();
    let negative =
        with_negative.then(|| b.push(format!("S{}", d + 1), ComponentKind::NegativeSection, -n, g));

    let mut tangencies = Vec::new();
    let mut point = 0usize;
    for a in 0..d {
        for c in (a + 1)..d {
            for _ in 0..e {
                point += 1;
                let fiber = b.push(format!("F{point}"), ComponentKind::Fiber, -1, 0);
                let chain: Vec<usize> = (1..=m)
                    .map(|k| {
                        b.push(
                            format!("G{point}.{k}"),
                            ComponentKind::Exceptional,
                            if k == m { -1 } else { -2 },
                            0,
                        )
                    })
                    .collect();
                b.meet(fiber, chain[0], 1);
                for link in chain.windows(2) {
                    b.meet(link[0], link[1], 1);
                }
                let last = *chain.last().expect("p^r >= 2");
                b.meet(sections[a], last, 1);
                b.meet(sections[c], last, 1);
                for (k, &s) in sections.iter().enumerate() {
                    if k != a && k != c {
                        b.meet(fiber, s, 1);
                    }
                }
                if let Some(neg) = negative {
                    b.meet(fiber, neg, 1);
                }
                tangencies.push(Tangency {
                    sections: (sections[a], sections[c]),
                    fiber,
                    chain,
                });
            }
        }
    }

    let fibers: Vec<usize> = tangencies.iter().map(|t| t.fiber).collect();
    let mut extra_sections = Vec::new();
    for i in 1..=params.u {
        let h = b.push(format!("H{i}"), ComponentKind::Section, n, g);
        for &s in &sections {
            b.meet(h, s, n);
        }
        for &other in &extra_sections {
            b.meet(h, other, n);
        }
        for &f in &fibers {
            b.meet(h, f, 1);
        }
        extra_sections.push(h);
    }
    for i in 1..=params.w {
        let rf = b.push(format!("R{i}"), ComponentKind::GeneralFiber, 0, 0);
        for &s in sections.iter().chain(negative.iter()).chain(&extra_sections) {
            b.meet(rf, s, 1);
        }
    }

    let blowups = small(params.delta() * params.tangency_order(), "number of blowups")?;
    let ambient = Ambient {
        c1sq_y: 8 * (1 - g) - blowups,
        c2_y: 4 * (1 - g) + blowups,
    };
    Ok(ResolvedConfiguration {
        components: b.components,
        nodes: b.nodes,
        tangencies,
        ambient,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogChernPair {
    #[serde(with = "serde_bigint")]
    pub c1sq: BigInt,
    #[serde(with = "serde_bigint")]
    pub c2: BigInt,
}

/// Log Chern numbers of `(Y, D)` from the component data:
/// `c1sq = c1sq(Y) - sum D_i^2 + 2 t2 + 4 sum (g(D_i) - 1)` and
/// `c2 = c2(Y) + t2 + 2 sum (g(D_i) - 1)`.
pub fn log_chern_pair(config: &ResolvedConfiguration) -> LogChernPair {
    let t2 = BigInt::from(config.t2());
    let self_ints: BigInt = config.components.iter().map(|c| BigInt::from(c.self_int)).sum();
    let genus_terms: BigInt = config
        .components
        .iter()
        .map(|c| BigInt::from(c.genus - 1))
        .sum();
    LogChernPair {
        c1sq: BigInt::from(config.ambient.c1sq_y) - self_ints + 2 * &t2 + 4 * &genus_terms,
        c2: BigInt::from(config.ambient.c2_y) + t2 + 2 * genus_terms,
    }
}

/// Closed-form log Chern numbers and the limiting Chern slope of the covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    #[serde(with = "serde_bigint")]
    pub c1sq: BigInt,
    #[serde(with = "serde_bigint")]
    pub c2: BigInt,
    /// Extra `c2` per unit of `q` from the `A_{q-1}` points: `e l p^r` for
    /// `APRIME`, zero otherwise.
    #[serde(with = "serde_bigint")]
    pub rdp_correction: BigInt,
    /// `c1sq / (c2 + rdp_correction)`.
    #[serde(with = "serde_frac")]
    pub slope: Rational,
}

pub fn log_chern_closed(params: &ArrangementParams) -> Result<ClosedForm> {
    params.validate()?;
    let m = params.tangency_order();
    let n = params.n();
    let delta = params.delta();
    let d = BigInt::from(params.d);
    let g1 = BigInt::from(params.g) - 1;
    let (c1sq, c2, rdp_correction) = match params.family {
        Family::A0 | Family::A => {
            let d1 = &d - 1;
            let mut c1sq: BigInt = &d1 * (2 * &delta + 4 * &g1 - &n) + &m * &delta;
            let mut c2: BigInt = &d1 * (2 * &g1 + &delta);
            if params.family == Family::A {
                let upsilon = params.upsilon();
                c1sq = c1sq - &n * BigInt::from(params.u) + 2 * &upsilon;
                c2 += upsilon;
            }
            (c1sq, c2, BigInt::zero())
        }
        Family::APrime => {
            let l = BigInt::from(params.half_d());
            let corr = &n * &l;
            // the displayed limit 2 + p^r l e (2l-5) / ((2l-2)(delta-2) + l e p^r)
            // with c2 = (2l-2)(delta-2) and the A_{q-1} correction l e p^r
            let c2: BigInt = (2 * &l - 2) * (&delta - 2);
            let c1sq = 2 * &c2 + &corr * (2 * &l - 3);
            (c1sq, c2, corr)
        }
    };
    let den: BigInt = &c2 + &rdp_correction;
    if den.is_zero() {
        return Err(Error::Degenerate("log c2 vanishes; slope undefined".into()));
    }
    let slope = Rational::new(c1sq.clone(), den);
    Ok(ClosedForm {
        c1sq,
        c2,
        rdp_correction,
        slope,
    })
}

/// `2 + p^r e(d-2) / (e d(d-1) + 4(g-1))`, the slope of the `A0` family.
pub fn a0_slope(params: &ArrangementParams) -> Rational {
    let e = BigInt::from(params.e);
    let d = BigInt::from(params.d);
    let num = params.tangency_order() * &e * (&d - 2);
    let den = &e * &d * (&d - 1) + 4 * (BigInt::from(params.g) - 1);
    big(&BigInt::from(2)) + Rational::new(num, den)
}

/// `c1sq(Y) + c2(Y) = 12(1 - g)` for the blown-up ruled surface.
pub fn ambient_is_noether(config: &ResolvedConfiguration, g: i64) -> bool {
    config.ambient.c1sq_y + config.ambient.c2_y == 12 * (1 - g)
}

/// True when all log Chern numbers are positive (the asymptotic covers
/// are then of general type).
pub fn positive(closed: &ClosedForm) -> bool {
    closed.c1sq.is_positive() && closed.c2.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn a0_small_example() {
        let p = ArrangementParams::a0(2, 1, 1, 3, 0);
        let cfg = build_resolution(&p).unwrap();
        assert_eq!(cfg.components.len(), 13);
        assert_eq!(p.delta(), BigInt::from(3));
        assert_eq!(cfg.ambient, Ambient { c1sq_y: 2, c2_y: 10 });
        let pair = log_chern_pair(&cfg);
        assert_eq!((pair.c1sq, pair.c2), (BigInt::from(6), BigInt::from(2)));
        let closed = log_chern_closed(&p).unwrap();
        assert_eq!(closed.c1sq, BigInt::from(6));
        assert_eq!(closed.c2, BigInt::from(2));
        assert_eq!(closed.slope, int(3));
        assert_eq!(a0_slope(&p), int(3));
    }

    #[test]
    fn chains_have_expected_shape() {
        let p = ArrangementParams::a0(3, 1, 1, 4, 1);
        let cfg = build_resolution(&p).unwrap();
        assert_eq!(cfg.tangencies.len(), 6);
        for t in &cfg.tangencies {
            assert_eq!(t.chain.len(), 3);
            let selfs: Vec<i64> = t.chain.iter().map(|&k| cfg.components[k].self_int).collect();
            assert_eq!(selfs, vec![-2, -2, -1]);
            assert_eq!(cfg.intersection(t.fiber, t.chain[0]), 1);
            assert_eq!(cfg.intersection(t.sections.0, t.chain[2]), 1);
            assert_eq!(cfg.intersection(t.sections.1, t.chain[2]), 1);
            assert_eq!(cfg.intersection(t.sections.0, t.sections.1), 0);
        }
        assert!(ambient_is_noether(&cfg, 1));
    }

    #[test]
    fn aprime_example() {
        let p = ArrangementParams::aprime(2, 1, 1, 3);
        assert_eq!(p.delta(), BigInt::from(15));
        let cfg = build_resolution(&p).unwrap();
        assert!(cfg.tangencies.iter().all(|t| t.chain.len() == 2));
        assert!(cfg.index_of("S7").is_none());
        let closed = log_chern_closed(&p).unwrap();
        assert_eq!(closed.slope, int(2) + frac(3, 29));
        let pair = log_chern_pair(&cfg);
        assert_eq!((pair.c1sq, pair.c2), (closed.c1sq, closed.c2));
    }

    #[test]
    fn pullback_coefficients_follow_qk_plus_y() {
        let p = ArrangementParams::aprime(3, 1, 1, 3);
        let cfg = build_resolution(&p).unwrap();
        let (q, a, y) = (101, 37, 12);
        let coeffs = cfg.tangencies[0].pullback_coefficients(a, q - a, y);
        let expected: Vec<i64> = (1..=3).map(|k| q * k + y).collect();
        assert_eq!(coeffs, expected);
    }

    #[test]
    fn empty_divisor_recovers_ambient() {
        let cfg = ResolvedConfiguration {
            components: vec![],
            nodes: vec![],
            tangencies: vec![],
            ambient: Ambient { c1sq_y: 8, c2_y: 4 },
        };
        let pair = log_chern_pair(&cfg);
        assert_eq!((pair.c1sq, pair.c2), (BigInt::from(8), BigInt::from(4)));
        let single = ResolvedConfiguration {
            components: vec![Component {
                id: "C".into(),
                kind: ComponentKind::GeneralFiber,
                self_int: 0,
                genus: 0,
            }],
            ..cfg
        };
        let pair = log_chern_pair(&single);
        assert_eq!((pair.c1sq, pair.c2), (BigInt::from(4), BigInt::from(2)));
    }

    #[test]
    fn family_a_without_extras_is_a0() {
        let a = log_chern_closed(&ArrangementParams::a(3, 2, 2, 5, 1, 0, 0)).unwrap();
        let a0 = log_chern_closed(&ArrangementParams::a0(3, 2, 2, 5, 1)).unwrap();
        assert_eq!(a, a0);
    }

    #[test]
    fn general_fibers_meet_every_section() {
        let p = ArrangementParams::a(2, 1, 1, 3, 0, 2, 1);
        let cfg = build_resolution(&p).unwrap();
        let r = cfg.index_of("R1").unwrap();
        assert_eq!(cfg.valences()[r], 3 + 1 + 2);
        // the printed fiber term w(u+d-2) undercounts by one node per R_i
        let printed = p.upsilon() - BigInt::from(p.w);
        let pair = log_chern_pair(&cfg);
        let a0 = log_chern_closed(&ArrangementParams::a0(2, 1, 1, 3, 0)).unwrap();
        assert_eq!(pair.c2.clone() - a0.c2.clone(), p.upsilon());
        assert_ne!(pair.c2 - a0.c2, printed);
    }

    #[test]
    fn rejects_inconsistent_params() {
        assert!(ArrangementParams::a0(4, 1, 1, 3, 0).validate().is_err());
        assert!(ArrangementParams::a0(2, 0, 1, 3, 0).validate().is_err());
        assert!(ArrangementParams::a0(2, 1, 1, 2, 0).validate().is_err());
        let mut p = ArrangementParams::a0(2, 1, 1, 3, 0);
        p.u = 1;
        assert!(p.validate().is_err());
        let mut p = ArrangementParams::aprime(2, 1, 1, 3);
        p.d = 7;
        assert!(p.validate().is_err());
        p.d = 6;
        p.g = 1;
        assert!(p.validate().is_err());
        let huge = ArrangementParams::a0(2, 40, 1, 3, 0);
        assert!(matches!(build_resolution(&huge), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn validation_catches_malformed_nodes() {
        let mut cfg = build_resolution(&ArrangementParams::a0(2, 1, 1, 3, 0)).unwrap();
        cfg.validate().unwrap();
        let mut looped = cfg.clone();
        looped.nodes.push(Node { i: 2, j: 2, count: 1 });
        assert!(looped.validate().is_err());
        let mut dangling = cfg.clone();
        dangling.nodes.push(Node { i: 0, j: 99, count: 1 });
        assert!(dangling.validate().is_err());
        let mut flipped = cfg;
        flipped.nodes.push(Node { i: 5, j: 1, count: 2 });
        flipped.validate().unwrap();
        assert_eq!(flipped.nodes.last().unwrap(), &Node { i: 1, j: 5, count: 2 });
    }
}
