//! Riemann problem 2 -> 0 for F(u) = u²(u-2)²: two shocks around a rarefaction.
//!
//! cargo run --example two_shocks

use conslaw::flux::parse_flux_spec;
use conslaw::solver::{solve_riemann_exact, solve_riemann_numerical};

fn main() -> conslaw::Result<()> {
    let flux = parse_flux_spec("polynomial:[0,0,4,-4,1]")?;
    let exact = solve_riemann_exact(&flux, 2.0, 0.0, 0.0, 1.0)?;
    let numerical = solve_riemann_numerical(&flux, 2.0, 0.0, 0.0, 1.0, 80)?;

    println!("{:>10} {:>20} {:>20}", "", "exact", "characteristics");
    for (k, (e, n)) in exact.shocks.iter().zip(&numerical.shocks).enumerate() {
        println!("{:>10} {:>20.15} {:>20.15}", format!("x_s[{k}]"), e.x_s, n.x_s);
        println!("{:>10} {:>20.15} {:>20.15}", "u_top", e.u_top, n.u_top);
        println!("{:>10} {:>20.15} {:>20.15}", "u_bot", e.u_bot, n.u_bot);
    }
    println!("mass drift {:.2e}", numerical.mass_drift());

    // A coarse look at the profile.
    for &(x, u) in numerical.samples.iter().step_by(100) {
        println!("{x:8.3} {u:8.4} {}", "#".repeat((u * 20.0).round().max(0.0) as usize));
    }
    Ok(())
}
