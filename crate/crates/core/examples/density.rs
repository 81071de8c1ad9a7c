//! Parameters whose limiting Chern slope is within eps of a target.
//!
//!     cargo run --release --example density -- 3.14159 0.001

use chernslope::density::{solve, DensityTarget};
use chernslope::geometry::Family;
use chernslope::rational::parse_decimal;

fn main() -> chernslope::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let x = parse_decimal(&args.next().unwrap_or_else(|| "3".into()))?;
    let eps = parse_decimal(&args.next().unwrap_or_else(|| "0.01".into()))?;
    for family in [Family::A, Family::APrime] {
        let s = solve(&DensityTarget::new(x.clone(), eps.clone(), 2, family))?;
        let p = &s.params;
        println!(
            "{family}: r = {} e = {} d = {} u = {} w = {}  limit {:.6} error {:.2e} ({})",
            p.r,
            p.e,
            p.d,
            p.u,
            p.w,
            chernslope::rational::to_f64(&s.achieved_limit),
            s.error_approx,
            s.method
        );
        match p.component_count() {
            Some(n) => println!("  {n} resolved components"),
            None => println!("  component count overflows u64"),
        }
    }
    Ok(())
}
