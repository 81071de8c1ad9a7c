//! Residues near Farey points and the bounds on the good ones.
//!
//!     cargo run --release --example bad_residues -- 257

use chernslope::girstmair::{bad_set, verify_girstmair};
use chernslope::rational::int;

fn main() -> chernslope::error::Result<()> {
    let q: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(101);
    let set = bad_set(q, &int(1))?;
    let report = verify_girstmair(q, &int(1))?;
    println!("q = {q}: {} bad residues, {} good", set.len(), report.good_count);
    println!("bad: {:?}", &set.members[..set.members.len().min(20)]);
    println!(
        "|F| <= {:.1}: {}, length bound: {}, Dedekind bound: {}",
        report.bad_count_bound_approx, report.cardinality_ok, report.length_ok, report.dedekind_ok
    );
    if let Some(w) = &report.worst_length {
        println!("longest good expansion: a = {}, l = {}", w.a, w.l);
    }
    Ok(())
}
