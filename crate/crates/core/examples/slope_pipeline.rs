//! Target slope to sampled cover in one call.

use chernslope::geometry::Family;
use chernslope::pipeline::{run_pipeline, to_sorted_json, PipelineRequest};
use chernslope::rational::frac;

fn main() -> chernslope::error::Result<()> {
    let req = PipelineRequest::new(frac(5, 2), frac(1, 100), 2, Family::APrime, None, 42);
    let report = run_pipeline(&req)?;
    println!("{}", to_sorted_json(&report)?);
    Ok(())
}
