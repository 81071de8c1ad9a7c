//! Builds the resolved configuration of a small arrangement and compares the
//! log Chern numbers computed from it with the closed forms.

use chernslope::geometry::{build_resolution, log_chern_closed, log_chern_pair, ArrangementParams, ComponentKind};
use chernslope::rational::display;

fn main() -> chernslope::error::Result<()> {
    for params in [
        ArrangementParams::a0(2, 1, 1, 3, 0),
        ArrangementParams::a(3, 1, 1, 4, 1, 1, 1),
        ArrangementParams::aprime(2, 2, 1, 3),
    ] {
        let config = build_resolution(&params)?;
        let pair = log_chern_pair(&config);
        let closed = log_chern_closed(&params)?;
        let exceptional = config
            .components
            .iter()
            .filter(|c| c.kind == ComponentKind::Exceptional)
            .count();
        println!(
            "{}: {} components ({exceptional} exceptional), t2 = {}",
            params.family,
            config.components.len(),
            config.t2()
        );
        println!(
            "  from configuration: ({}, {})  closed form: ({}, {})  limit slope {}",
            pair.c1sq,
            pair.c2,
            closed.c1sq,
            closed.c2,
            display(&closed.slope)
        );
    }
    Ok(())
}
