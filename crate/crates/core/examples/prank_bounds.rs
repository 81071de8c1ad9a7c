//! Genus and the p-rank bound B for a few cyclic covers of the line.

use chernslope::prank::{is_primitive_root, prank_report, CyclicCoverData};

fn main() -> chernslope::error::Result<()> {
    let cases = [
        CyclicCoverData::new(5, 2, vec![1, 1, 3])?,
        CyclicCoverData::new(7, 2, vec![1, 2, 4])?,
        CyclicCoverData::new(13, 2, vec![1, 3, 9])?,
        CyclicCoverData::symmetric(11, 3, &[1, 4, 7])?,
    ];
    for data in &cases {
        let r = prank_report(data);
        println!(
            "q = {:>2} p = {} mults {:?}: genus {} B {} (primitive root: {}, {} orbits)",
            data.q,
            data.p,
            data.mults,
            r.genus,
            r.bound,
            is_primitive_root(data.p, data.q),
            r.orbits.len()
        );
    }
    Ok(())
}
