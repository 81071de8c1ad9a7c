//! Intersection numbers in the nef check and the first prime where all
//! of them are nonnegative.

use chernslope::geometry::ArrangementParams;
use chernslope::nefcheck::{min_nef_q, nef_report};
use chernslope::rational::display;

fn main() -> chernslope::error::Result<()> {
    for params in [ArrangementParams::a(2, 2, 1, 4, 0, 1, 1), ArrangementParams::aprime(3, 1, 1, 4)] {
        let q = min_nef_q(&params, 100_003)?;
        let report = nef_report(&params, q)?;
        println!("{} threshold q = {q}, t = {}", params.family, display(&report.t_value));
        for e in &report.entries {
            let tag = if e.branch { "branch" } else { "other" };
            println!("  {:<12} {:<6} {}", e.curve_class, tag, display(&e.value));
        }
    }
    Ok(())
}
