//! Chern numbers of a q-th root cover for a hand-made assignment.
//!
//! For A0 with (p, r, e, d) = (2, 1, 1, 3) the sections take x_i, the
//! negative section q - sum x_i and each fiber y_j with
//! 2 (x_1 + x_2 + x_3) + y_1 + y_2 + y_3 = q. Chain curves inherit
//! k (nu_a + nu_b) + y_j.

use std::collections::BTreeMap;

use chernslope::geometry::{build_resolution, ArrangementParams};
use chernslope::rational::display;
use chernslope::rootcover::{chern_of_cover, BranchAssignment};

fn main() -> chernslope::error::Result<()> {
    let params = ArrangementParams::a0(2, 1, 1, 3, 0);
    let config = build_resolution(&params)?;
    let q = 17;
    let x = [1, 2, 3];
    let y = [2, 1, 2];
    let mut nus = BTreeMap::new();
    for (i, xi) in x.iter().enumerate() {
        nus.insert(format!("S{}", i + 1), *xi);
    }
    nus.insert("S4".into(), q - x.iter().sum::<i64>());
    for t in &config.tangencies {
        let (a, b) = t.sections;
        let fiber = &config.components[t.fiber].id;
        let j: usize = fiber[1..].parse().unwrap();
        let yj = y[j - 1];
        nus.insert(fiber.clone(), yj);
        for (k, &g) in t.chain.iter().enumerate() {
            let s = x[a] + x[b];
            nus.insert(config.components[g].id.clone(), ((k as i64 + 1) * s + yj) % q);
        }
    }
    let inv = chern_of_cover(&config, &BranchAssignment { q, nus })?;
    println!("c1^2 = {}, c2 = {}, chi = {}", display(&inv.c1sq_x), display(&inv.c2_x), display(&inv.chi));
    println!("slope = {}", display(&inv.slope));
    for s in &inv.singularities {
        println!("  {:?} x{}: 1/{q}(1,{}) c = {} l = {}", s.node, s.count, s.a, display(&s.c), s.l);
    }
    Ok(())
}
