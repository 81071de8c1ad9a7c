//! Multiplicity assignments for the branch divisor.
//!
//! Family `A` (and `A0`): positive `x_1..x_{d+u}` on the tangent and extra
//! sections and `y_1..y_{delta+w}` on the fibers with
//! `e p^r (x_1 + ... + x_{d+u}) + (y_1 + ... + y_{delta+w}) = q`; the negative
//! section gets `q - sum x_i`.
//!
//! Family `APRIME`: `a_1 + ... + a_l = q` with `S_{2i-1} -> a_i`,
//! `S_{2i} -> q - a_i`, and `y_1 + ... + y_delta = q` on the fibers.
//!
//! The exceptional curve `G_k` over a tangency of `S_a`, `S_b` on `F_j`
//! inherits `k (nu_a + nu_b) + y_j mod q`. An assignment is asymptotic when
//! every node residue lies outside the bad set; the `A_{q-1}` points inside
//! chains over tangencies with `nu_a + nu_b = 0 mod q` are exempt.
//!
//! Two samplers are provided. [`Strategy::Uniform`] draws the whole
//! composition by stars and bars and checks it. [`Strategy::Conditioned`]
//! draws only the section multiplicities that way, then picks the fiber
//! multiplicities uniformly among those making every fiber group good and
//! hitting the required sum. Both are deterministic in the seed: try `t` uses
//! a ChaCha stream numbered `t`, so parallel and serial runs agree.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_resolution, ArrangementParams, Family, ResolvedConfiguration};
use crate::girstmair::bad_set;
use crate::numtheory::{is_prime, mod_inverse};
use crate::rational::Rational;
use crate::rootcover::{node_residue, BranchAssignment};

/// Smallest `q` for which every unknown can be positive.
pub fn min_feasible_q(p: &ArrangementParams) -> i128 {
    let delta = p.delta().to_i128().unwrap_or(i128::MAX / 4);
    match p.family {
        Family::A0 | Family::A => {
            let n = p.n().to_i128().unwrap_or(i128::MAX / 4);
            n.saturating_mul((p.d + p.u) as i128) + delta + p.w as i128
        }
        Family::APrime => delta.max(p.half_d() as i128),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionProblem {
    pub q: i64,
    pub params: ArrangementParams,
}

impl PartitionProblem {
    pub fn new(q: i64, params: ArrangementParams) -> Result<Self> {
        params.validate()?;
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q as u64 == params.p {
            return Err(Error::Domain(format!("q = {q} equals the characteristic")));
        }
        let problem = Self { q, params };
        let need = problem.min_q();
        if (q as i128) < need {
            return Err(Error::Infeasible(format!(
                "q = {q} is below {need}, the smallest total with all parts positive"
            )));
        }
        Ok(problem)
    }

    /// Smallest `q` with positive solutions.
    pub fn min_q(&self) -> i128 {
        min_feasible_q(&self.params)
    }

    fn section_unknowns(&self) -> usize {
        match self.params.family {
            Family::APrime => self.params.half_d() as usize,
            _ => (self.params.d + self.params.u) as usize,
        }
    }

    fn fiber_unknowns(&self) -> usize {
        self.params.delta().to_usize().unwrap_or(usize::MAX) + self.params.w as usize
    }

    /// Natural log of the leading term of the number of solutions.
    pub fn log_count_estimate(&self) -> f64 {
        let q = (self.q as f64).ln();
        let (s, f) = (self.section_unknowns() as f64, self.fiber_unknowns() as f64);
        match self.params.family {
            Family::APrime => (s - 1.0) * q - ln_factorial(s - 1.0) + (f - 1.0) * q
                - ln_factorial(f - 1.0),
            _ => {
                let k = s + f;
                let n = self.params.n().to_f64().unwrap_or(f64::INFINITY).ln();
                (k - 1.0) * q - ln_factorial(k - 1.0) - s * n
            }
        }
    }

    /// `q^{k-1} / ((k-1)! (e p^r)^{d+u})` for family `A`; the product of the
    /// two composition counts' leading terms for `APRIME`.
    pub fn count_estimate(&self) -> f64 {
        self.log_count_estimate().exp()
    }
}

fn ln_factorial(n: f64) -> f64 {
    if n < 2.0 {
        return 0.0;
    }
    if n < 1e6 {
        return (2..=n as u64).map(|k| (k as f64).ln()).sum();
    }
    n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + 1.0 / (12.0 * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Uniform,
    Conditioned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    /// Every node residue good (or an exempt `A_{q-1}` point).
    Asymptotic,
    /// Only nonzero multiplicities.
    Valid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub seed: u64,
    pub max_tries: u64,
    pub strategy: Strategy,
    pub requirement: Requirement,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_tries: 10_000,
            strategy: Strategy::Conditioned,
            requirement: Requirement::Asymptotic,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TryStats {
    pub tries: u64,
    /// Tries where some multiplicity vanished mod `q`.
    pub zero_multiplicity: u64,
    /// Tries rejected for bad residues.
    pub bad_residue: u64,
    /// Tries that failed on a single node or, when conditioning, only on
    /// the sum constraint.
    pub near_misses: u64,
    /// Most frequent failure reason and how often it occurred.
    pub worst: Option<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Found {
    pub assignment: BranchAssignment,
    /// Section unknowns: `x_1..x_{d+u}` or `a_1..a_l`.
    pub x: Vec<i64>,
    /// Fiber unknowns `y_1..`.
    pub y: Vec<i64>,
    pub asymptotic: bool,
    /// Index of the successful try.
    pub try_index: u64,
    pub stats: TryStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(Box<Found>),
    NotFound(TryStats),
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Found> {
        match self {
            SearchOutcome::Found(f) => Some(f),
            SearchOutcome::NotFound(_) => None,
        }
    }
}

/// A fiber together with what hangs off it.
#[derive(Debug, Clone)]
struct Group {
    fiber: usize,
    chain: Vec<usize>,
    sections: Option<(usize, usize)>,
    /// Nodes inside the chain (fiber to first curve and the links).
    internal: Vec<usize>,
    /// All nodes touching the group.
    nodes: Vec<usize>,
    /// The same nodes with endpoints resolved for fast checks.
    specs: Vec<NodeSpec>,
}

/// Endpoint of a group node: a horizontal component, or the group member
/// whose multiplicity is `k (nu_a + nu_b) + y` (`k = 0` is the fiber).
#[derive(Debug, Clone, Copy)]
enum End {
    Fixed(usize),
    Member(i64),
}

#[derive(Debug, Clone, Copy)]
struct NodeSpec {
    ends: (End, End),
    internal: bool,
}

#[derive(Debug, Clone)]
struct Layout {
    /// Horizontal components in the order the section unknowns fill them.
    sections: Vec<usize>,
    negative: Option<usize>,
    groups: Vec<Group>,
    /// Nodes between horizontal components.
    horizontal_nodes: Vec<usize>,
}

enum Attempt {
    Success { nus: Vec<i64>, x: Vec<i64>, y: Vec<i64> },
    Failure { zero: bool, bad: Vec<String>, near: bool },
}

/// Reusable sampler for one problem: the resolved configuration and the
/// good-residue table at `q` are computed once.
pub struct Sampler {
    pub problem: PartitionProblem,
    pub config: ResolvedConfiguration,
    good: Vec<bool>,
    /// `inv[v] * v = 1 mod q`.
    inv: Vec<i64>,
    layout: Layout,
    n: i64,
}

impl Sampler {
    pub fn new(problem: PartitionProblem) -> Result<Self> {
        let config = build_resolution(&problem.params)?;
        Self::with_config(problem, config)
    }

    pub fn with_config(problem: PartitionProblem, config: ResolvedConfiguration) -> Result<Self> {
        let good = bad_set(problem.q, &Rational::one())?.good_mask();
        let layout = layout(&problem, &config)?;
        let n = problem
            .params
            .n()
            .to_i64()
            .ok_or_else(|| Error::CapExceeded("e p^r too large".into()))?;
        let q = problem.q;
        let mut inv = vec![0i64; q as usize];
        for v in 1..q {
            inv[v as usize] = mod_inverse(v, q).expect("q is prime");
        }
        Ok(Self {
            problem,
            config,
            good,
            inv,
            layout,
            n,
        })
    }

    pub fn sample(&self, opts: &SearchOptions) -> SearchOutcome {
        const MAX_CHUNK: u64 = 64;
        let mut chunk = 1;
        let mut stats = TryStats::default();
        let mut reasons: BTreeMap<String, u64> = BTreeMap::new();
        let mut start = 0;
        while start < opts.max_tries {
            let end = (start + chunk).min(opts.max_tries);
            chunk = (chunk * 2).min(MAX_CHUNK);
            let attempts: Vec<Attempt> = (start..end)
                .into_par_iter()
                .map(|t| self.attempt(opts, t))
                .collect();
            for (offset, attempt) in attempts.into_iter().enumerate() {
                stats.tries += 1;
                match attempt {
                    Attempt::Success { nus, x, y } => {
                        stats.worst = worst(&reasons);
                        let asymptotic = opts.requirement == Requirement::Asymptotic
                            || self.all_good(&nus);
                        return SearchOutcome::Found(Box::new(Found {
                            assignment: BranchAssignment::from_indexed(
                                &self.config,
                                self.problem.q,
                                &nus,
                            ),
                            x,
                            y,
                            asymptotic,
                            try_index: start + offset as u64,
                            stats,
                        }));
                    }
                    Attempt::Failure { zero, bad, near } => {
                        if zero {
                            stats.zero_multiplicity += 1;
                        } else {
                            stats.bad_residue += 1;
                        }
                        stats.near_misses += u64::from(near);
                        for b in bad {
                            *reasons.entry(b).or_default() += 1;
                        }
                    }
                }
            }
            start = end;
        }
        stats.worst = worst(&reasons);
        SearchOutcome::NotFound(stats)
    }

    fn rng(&self, seed: u64, try_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(try_index);
        rng
    }

    /// Draws the section unknowns and the full uniform composition.
    fn draw(&self, rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<i64>) {
        let q = self.problem.q;
        let groups = self.layout.groups.len();
        match self.problem.params.family {
            Family::APrime => {
                let l = self.layout.sections.len() / 2;
                (composition(rng, q, l), composition(rng, q, groups))
            }
            _ => {
                let s = self.layout.sections.len();
                let slack = q - self.n * s as i64 - groups as i64;
                let shares = composition(rng, slack + (s + groups) as i64, s + groups);
                let mut x = Vec::with_capacity(s);
                let mut y: Vec<i64> = shares[s..].to_vec();
                for &share in &shares[..s] {
                    let extra = share - 1;
                    x.push(1 + extra / self.n);
                    let spill = extra % self.n;
                    let k = rng.gen_range(0..groups);
                    y[k] += spill;
                }
                (x, y)
            }
        }
    }

    fn section_nus(&self, x: &[i64], nus: &mut [i64]) {
        let q = self.problem.q;
        match self.problem.params.family {
            Family::APrime => {
                for (i, &a) in x.iter().enumerate() {
                    nus[self.layout.sections[2 * i]] = a;
                    nus[self.layout.sections[2 * i + 1]] = q - a;
                }
            }
            _ => {
                for (&c, &xi) in self.layout.sections.iter().zip(x) {
                    nus[c] = xi;
                }
                if let Some(neg) = self.layout.negative {
                    nus[neg] = (q - x.iter().sum::<i64>()).rem_euclid(q);
                }
            }
        }
    }

    fn fill_group(&self, group: &Group, y: i64, nus: &mut [i64]) {
        let q = self.problem.q;
        nus[group.fiber] = y.rem_euclid(q);
        if let Some((a, b)) = group.sections {
            let s = nus[a] + nus[b];
            for (k, &g) in group.chain.iter().enumerate() {
                nus[g] = ((k as i64 + 1) * s + y).rem_euclid(q);
            }
        }
    }

    fn exempt(&self, group: &Group, nus: &[i64]) -> bool {
        group
            .sections
            .is_some_and(|(a, b)| (nus[a] + nus[b]) % self.problem.q == 0)
    }

    /// Checks one node; `None` when fine, otherwise whether a multiplicity vanished.
    fn node_fails(&self, node: usize, nus: &[i64], requirement: Requirement) -> Option<bool> {
        let nd = self.config.nodes[node];
        let (vi, vj) = (nus[nd.i], nus[nd.j]);
        if vi == 0 || vj == 0 {
            return Some(true);
        }
        if requirement == Requirement::Valid {
            return None;
        }
        (!self.good[self.residue(vi, vj)]).then_some(false)
    }

    fn residue(&self, vi: i64, vj: i64) -> usize {
        let q = self.problem.q;
        ((q - vj * self.inv[vi as usize] % q) % q) as usize
    }

    /// Fiber multiplicities in `1..=top` keeping every node of `group`
    /// admissible, given the horizontal multiplicities in `nus`.
    fn admissible_set(&self, group: &Group, top: i64, nus: &[i64], requirement: Requirement) -> Vec<i64> {
        let q = self.problem.q;
        let s = group.sections.map_or(0, |(a, b)| (nus[a] + nus[b]) % q);
        // y = -k s makes the k-th member vanish
        let mut forbidden = vec![false; q as usize];
        for k in 0..=group.chain.len() as i64 {
            forbidden[((q - k * s % q) % q) as usize] = true;
        }
        (1..=top)
            .filter(|&y| !forbidden[y as usize] && self.admissible(group, y, s, nus, requirement))
            .collect()
    }

    fn admissible(&self, group: &Group, y: i64, s: i64, nus: &[i64], requirement: Requirement) -> bool {
        let q = self.problem.q;
        let exempt = group.sections.is_some() && s == 0;
        let value = |e: End| match e {
            End::Fixed(c) => nus[c],
            End::Member(k) => (k * s + y) % q,
        };
        group.specs.iter().all(|spec| {
            if exempt && spec.internal {
                return true;
            }
            let (vi, vj) = (value(spec.ends.0), value(spec.ends.1));
            if vi == 0 || vj == 0 {
                return false;
            }
            requirement == Requirement::Valid || self.good[self.residue(vi, vj)]
        })
    }

    fn label(&self, node: usize) -> String {
        let nd = self.config.nodes[node];
        format!(
            "{}-{}",
            self.config.components[nd.i].id, self.config.components[nd.j].id
        )
    }

    fn attempt(&self, opts: &SearchOptions, try_index: u64) -> Attempt {
        let mut rng = self.rng(opts.seed, try_index);
        let (x, y_uniform) = self.draw(&mut rng);
        let mut nus = vec![0i64; self.config.components.len()];
        self.section_nus(&x, &mut nus);
        if self.layout.sections.iter().chain(&self.layout.negative).any(|&c| nus[c] == 0) {
            return Attempt::Failure {
                zero: true,
                bad: vec!["negative section multiplicity".into()],
                near: false,
            };
        }
        let mut bad = Vec::new();
        let mut zero = false;
        for &node in &self.layout.horizontal_nodes {
            if let Some(z) = self.node_fails(node, &nus, opts.requirement) {
                zero |= z;
                bad.push(self.label(node));
            }
        }
        if !bad.is_empty() {
            return Attempt::Failure { zero, bad, near: false };
        }
        match opts.strategy {
            Strategy::Uniform => {
                for (group, &y) in self.layout.groups.iter().zip(&y_uniform) {
                    self.fill_group(group, y, &mut nus);
                }
                let mut zero = false;
                for group in &self.layout.groups {
                    let exempt = self.exempt(group, &nus);
                    if group.chain.iter().any(|&c| nus[c] == 0) {
                        zero = true;
                        bad.push(format!("{} chain multiplicity", self.config.components[group.fiber].id));
                    }
                    for &node in &group.nodes {
                        if exempt && group.internal.contains(&node) {
                            continue;
                        }
                        if let Some(z) = self.node_fails(node, &nus, opts.requirement) {
                            zero |= z;
                            bad.push(self.label(node));
                        }
                    }
                }
                if bad.is_empty() {
                    Attempt::Success { nus, x, y: y_uniform }
                } else {
                    let near = bad.len() == 1;
                    Attempt::Failure { zero, bad, near }
                }
            }
            Strategy::Conditioned => {
                let total = match self.problem.params.family {
                    Family::APrime => self.problem.q,
                    _ => self.problem.q - self.n * x.iter().sum::<i64>(),
                };
                let q = self.problem.q;
                let mut allowed = Vec::with_capacity(self.layout.groups.len());
                for group in &self.layout.groups {
                    let ok = self.admissible_set(group, (q - 1).min(total), &nus, opts.requirement);
                    if ok.is_empty() {
                        return Attempt::Failure {
                            zero: false,
                            bad: vec![format!(
                                "no admissible multiplicity on {}",
                                self.config.components[group.fiber].id
                            )],
                            near: false,
                        };
                    }
                    allowed.push(ok);
                }
                match sample_sum(&mut rng, &allowed, total) {
                    Some(y) => {
                        for (group, &yy) in self.layout.groups.iter().zip(&y) {
                            self.fill_group(group, yy, &mut nus);
                        }
                        Attempt::Success { nus, x, y }
                    }
                    None => Attempt::Failure {
                        zero: false,
                        bad: vec!["fiber sum unreachable".into()],
                        near: true,
                    },
                }
            }
        }
    }

    fn all_good(&self, nus: &[i64]) -> bool {
        let mut exempt = vec![false; self.config.nodes.len()];
        for g in &self.layout.groups {
            if self.exempt(g, nus) {
                for &k in &g.internal {
                    exempt[k] = true;
                }
            }
        }
        (0..self.config.nodes.len())
            .all(|k| exempt[k] || self.node_fails(k, nus, Requirement::Asymptotic).is_none())
    }
}

fn worst(reasons: &BTreeMap<String, u64>) -> Option<(String, u64)> {
    reasons
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(k, v)| (k.clone(), *v))
}

/// Uniform composition of `total` into `parts` positive integers.
fn composition(rng: &mut ChaCha8Rng, total: i64, parts: usize) -> Vec<i64> {
    debug_assert!(parts >= 1 && total >= parts as i64);
    let mut cuts: Vec<i64> = sample(rng, (total - 1) as usize, parts - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain([total]) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// Picks one value from each allowed set, uniformly among the tuples with
/// the given sum.
fn sample_sum(rng: &mut ChaCha8Rng, allowed: &[Vec<i64>], total: i64) -> Option<Vec<i64>> {
    let t = total as usize;
    let k = allowed.len();
    // ways[g][s]: tuples for groups g.. summing to s, rescaled per row
    let mut ways = vec![vec![0f64; t + 1]; k + 1];
    ways[k][0] = 1.0;
    for g in (0..k).rev() {
        let (head, tail) = ways.split_at_mut(g + 1);
        let (row, next) = (&mut head[g], &tail[0]);
        for &y in &allowed[g] {
            let y = y as usize;
            if y > t {
                break;
            }
            for s in y..=t {
                row[s] += next[s - y];
            }
        }
        let max = row.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return None;
        }
        row.iter_mut().for_each(|v| *v /= max);
    }
    if ways[0][t] == 0.0 {
        return None;
    }
    let mut s = t;
    let mut out = Vec::with_capacity(k);
    for g in 0..k {
        let weights: Vec<(i64, f64)> = allowed[g]
            .iter()
            .filter(|&&y| y as usize <= s)
            .map(|&y| (y, ways[g + 1][s - y as usize]))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        let sum: f64 = weights.iter().map(|w| w.1).sum();
        let mut pick = rng.gen::<f64>() * sum;
        let mut chosen = weights.last()?.0;
        for &(y, w) in &weights {
            if pick < w {
                chosen = y;
                break;
            }
            pick -= w;
        }
        out.push(chosen);
        s -= chosen as usize;
    }
    (s == 0).then_some(out)
}

fn layout(problem: &PartitionProblem, config: &ResolvedConfiguration) -> Result<Layout> {
    let p = &problem.params;
    let find = |id: String| {
        config
            .index_of(&id)
            .ok_or_else(|| Error::InvalidConfiguration(format!("missing component {id}")))
    };
    let mut sections = (1..=p.d).map(|i| find(format!("S{i}"))).collect::<Result<Vec<_>>>()?;
    for i in 1..=p.u {
        sections.push(find(format!("H{i}"))?);
    }
    let negative = match p.family {
        Family::APrime => None,
        _ => Some(find(format!("S{}", p.d + 1))?),
    };

    let mut owner = vec![usize::MAX; config.components.len()];
    let mut groups: Vec<Group> = config
        .tangencies
        .iter()
        .map(|t| Group {
            fiber: t.fiber,
            chain: t.chain.clone(),
            sections: Some(t.sections),
            internal: Vec::new(),
            nodes: Vec::new(),
            specs: Vec::new(),
        })
        .collect();
    for i in 1..=p.w {
        groups.push(Group {
            fiber: find(format!("R{i}"))?,
            chain: Vec::new(),
            sections: None,
            internal: Vec::new(),
            nodes: Vec::new(),
            specs: Vec::new(),
        });
    }
    for (g, group) in groups.iter().enumerate() {
        owner[group.fiber] = g;
        for &c in &group.chain {
            owner[c] = g;
        }
    }
    let mut horizontal_nodes = Vec::new();
    for (k, node) in config.nodes.iter().enumerate() {
        match (owner[node.i], owner[node.j]) {
            (usize::MAX, usize::MAX) => horizontal_nodes.push(k),
            (g, usize::MAX) | (usize::MAX, g) => groups[g].nodes.push(k),
            (g, h) if g == h => {
                groups[g].nodes.push(k);
                groups[g].internal.push(k);
            }
            _ => {
                return Err(Error::InvalidConfiguration(
                    "two fiber groups meet; multiplicities are not separable".into(),
                ))
            }
        }
    }
    for group in &mut groups {
        let end = |c: usize| {
            if c == group.fiber {
                End::Member(0)
            } else if let Some(k) = group.chain.iter().position(|&g| g == c) {
                End::Member(k as i64 + 1)
            } else {
                End::Fixed(c)
            }
        };
        group.specs = group
            .nodes
            .iter()
            .map(|&k| NodeSpec {
                ends: (end(config.nodes[k].i), end(config.nodes[k].j)),
                internal: group.internal.contains(&k),
            })
            .collect();
    }
    Ok(Layout {
        sections,
        negative,
        groups,
        horizontal_nodes,
    })
}

/// Builds the configuration and samples once.
pub fn sample_assignment(problem: &PartitionProblem, opts: &SearchOptions) -> Result<SearchOutcome> {
    Ok(Sampler::new(*problem)?.sample(opts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadNode {
    pub node: (String, String),
    pub a: i64,
    pub count: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub ok: bool,
    pub bad_nodes: Vec<BadNode>,
    /// Exempt `A_{q-1}` points, with multiplicity.
    pub rdp_nodes: i64,
}

/// Checks that every node residue lies in the good set for the constant `C`.
pub fn verify_asymptotic(
    config: &ResolvedConfiguration,
    assign: &BranchAssignment,
    constant: &Rational,
) -> Result<AsymptoticReport> {
    let q = assign.q;
    let nus = assign.resolve(config)?;
    let bad = bad_set(q, constant)?;
    let mut exempt = vec![false; config.nodes.len()];
    for t in &config.tangencies {
        if (nus[t.sections.0] + nus[t.sections.1]) % q != 0 {
            continue;
        }
        let members: Vec<usize> = std::iter::once(t.fiber).chain(t.chain.iter().copied()).collect();
        for (k, node) in config.nodes.iter().enumerate() {
            if members.contains(&node.i) && members.contains(&node.j) {
                exempt[k] = true;
            }
        }
    }
    let mut rdp_nodes = 0;
    let mut bad_nodes = Vec::new();
    for (k, node) in config.nodes.iter().enumerate() {
        if exempt[k] {
            rdp_nodes += node.count;
            continue;
        }
        let a = node_residue(nus[node.i], nus[node.j], q);
        if bad.contains(a) {
            bad_nodes.push(BadNode {
                node: (
                    config.components[node.i].id.clone(),
                    config.components[node.j].id.clone(),
                ),
                a,
                count: node.count,
            });
        }
    }
    Ok(AsymptoticReport {
        ok: bad_nodes.is_empty(),
        bad_nodes,
        rdp_nodes,
    })
}
