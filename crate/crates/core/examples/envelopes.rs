//! Convex envelopes of the example fluxes next to a brute-force hull.
//!
//! cargo run --example envelopes

use conslaw::envelope::{build_envelope, oracle_envelope, EnvelopeSegment};
use conslaw::flux::parse_flux_spec;

fn main() -> conslaw::Result<()> {
    let cases = [
        ("polynomial:[0,0,4,-4,1]", 2.0, 0.0),
        ("polynomial:[0,0,4,-4,1]", 0.0, 2.0),
        ("polynomial:[0,0,3,-5/3,1/4]", 0.0, 5.0),
        ("polynomial:[0,0,3,-5/3,1/4]", 5.0, 0.0),
        ("named:buckley-leverett{M:0.5}", 1.0, 0.0),
    ];
    for (spec, ul, ur) in cases {
        let flux = parse_flux_spec(spec)?;
        let env = build_envelope(&flux, ul, ur)?;
        let hull = oracle_envelope(&flux, ul, ur, 100_000)?;
        println!("{spec}  {ul} -> {ur}  ({} envelope)", env.side);
        for seg in &env.segments {
            match *seg {
                EnvelopeSegment::Secant { u_a, u_b, slope } => {
                    println!("  shock       [{u_a:.6}, {u_b:.6}]  speed {slope:.6}")
                }
                EnvelopeSegment::Arc { u_a, u_b } => {
                    println!("  rarefaction [{u_a:.6}, {u_b:.6}]")
                }
            }
        }
        let gap = env
            .breakpoints()
            .iter()
            .zip(hull.breakpoints())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("  hull of 1e5 samples: {} segments, breakpoint gap {gap:.1e}", hull.segments.len());
    }
    Ok(())
}
