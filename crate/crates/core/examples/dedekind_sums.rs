//! Dedekind sums, Hirzebruch-Jung expansions and c(a,q) = 12 s(a,q) + l(a,q).
//!
//!     cargo run --example dedekind_sums -- 101

use chernslope::numtheory::{dedekind_sum, dedekind_sum_naive, DedekindData};
use chernslope::rational::display;

fn main() -> chernslope::error::Result<()> {
    let q: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(17);
    println!("{:>4} {:>12} {:>4} {:>12}  digits", "a", "s(a,q)", "l", "c(a,q)");
    for a in (1..q).filter(|&a| num_integer::gcd(a, q) == 1).take(12) {
        let data = DedekindData::new(q, a)?;
        assert_eq!(dedekind_sum(q, a)?, dedekind_sum_naive(q, a)?);
        println!(
            "{a:>4} {:>12} {:>4} {:>12}  {:?}",
            display(&data.s),
            data.l,
            display(&data.c),
            data.hj_digits
        );
    }
    Ok(())
}
