//! Samples branch assignments whose node residues all avoid the bad set,
//! with both strategies.
//!
//!     cargo run --release --example assignment_search -- 211

use chernslope::geometry::ArrangementParams;
use chernslope::partitions::{sample_assignment, verify_asymptotic, PartitionProblem, SearchOptions, Strategy};
use chernslope::rational::int;

fn main() -> chernslope::error::Result<()> {
    let q: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(151);
    let params = ArrangementParams::a(2, 1, 1, 3, 0, 1, 1);
    let problem = PartitionProblem::new(q, params)?;
    println!("about 10^{:.1} compositions", problem.log_count_estimate() / std::f64::consts::LN_10);
    for strategy in [Strategy::Uniform, Strategy::Conditioned] {
        let opts = SearchOptions { seed: 7, strategy, ..Default::default() };
        let outcome = sample_assignment(&problem, &opts)?;
        match outcome.found() {
            Some(f) => {
                let config = chernslope::geometry::build_resolution(&params)?;
                let check = verify_asymptotic(&config, &f.assignment, &int(1))?;
                println!("{strategy:?}: try {} x = {:?} y = {:?} asymptotic = {}", f.try_index, f.x, f.y, check.ok);
            }
            None => println!("{strategy:?}: nothing found"),
        }
    }
    Ok(())
}
