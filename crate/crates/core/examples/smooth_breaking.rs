//! Smooth data under Burgers' flux: no shock before breaking, one after.
//!
//! cargo run --example smooth_breaking

use conslaw::characteristics::{InitialData, Profile};
use conslaw::flux::parse_flux_spec;
use conslaw::solver::solve_piecewise;

fn main() -> conslaw::Result<()> {
    let flux = parse_flux_spec("polynomial:[0,0,1/2]")?;
    // u0 = -tanh x on [-6, 6]; steepest slope -1 breaks at t = 1.
    let profile = Profile::Tanh {
        amp: -1.0,
        rate: 1.0,
        center: 0.0,
        offset: 0.0,
    };
    let init = InitialData::smooth_window(profile, -6.0, 6.0)?;
    println!("{init}");
    for t in [0.5, 0.99, 1.5, 3.0] {
        let sol = solve_piecewise(&flux, &init, t, 96)?;
        let central: Vec<String> = sol
            .shocks
            .iter()
            .filter(|s| s.x_s.abs() < 1.0)
            .map(|s| format!("x_s = {:+.2e}, jump {:.6}", s.x_s, s.u_top - s.u_bot))
            .collect();
        println!("t = {t:4}: {}", if central.is_empty() { "smooth".into() } else { central.join(", ") });
    }
    Ok(())
}
