//! Box data: the left jump follows the lower envelope, the right jump the upper.
//!
//! cargo run --example box_fans [t]

use conslaw::characteristics::InitialData;
use conslaw::flux::parse_flux_spec;
use conslaw::solver::{jump_envelopes, solve_piecewise};

fn main() -> conslaw::Result<()> {
    let t: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let flux = parse_flux_spec("polynomial:[0,0,3,-5/3,1/4]")?;
    let init = InitialData::box_data(0.0, 5.0, 5.0, 0.0)?;

    for (x, env) in jump_envelopes(&flux, &init)? {
        println!("jump at x = {x}: {} envelope", env.side);
        for row in env.csv_rows() {
            println!("  {row}");
        }
    }
    // Past t ≈ 0.197 the fans interact and this returns FanOverlap.
    let sol = solve_piecewise(&flux, &init, t, 160)?;
    for s in &sol.shocks {
        println!("shock at {:.12}: {:.9} | {:.9}, speed {:.9}", s.x_s, s.u_left, s.u_right, s.speed);
    }
    println!("mass drift {:.2e}", sol.mass_drift());
    Ok(())
}
