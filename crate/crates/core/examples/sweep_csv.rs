//! One CSV row per prime, with per-prime seeds derived from a master seed.
//!
//!     cargo run --release --example sweep_csv > sweep.csv

use chernslope::geometry::ArrangementParams;
use chernslope::numtheory::primes_between;
use chernslope::pipeline::sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ArrangementParams::a(2, 1, 1, 3, 0, 1, 1);
    let rows = sweep(&params, &primes_between(101, 401), 1, 5_000)?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
