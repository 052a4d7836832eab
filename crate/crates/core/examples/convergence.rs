//! Shock-position error against the exact fan while doubling the node count.
//!
//! cargo run --release --example convergence [example-id ...]

use conslaw::cli::{converge, example, fitted_order, parse_ladder};

fn main() {
    let ids: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { vec![1, 3, 4] } else { ids };
    let ladder = parse_ladder("10x2^5").expect("valid ladder");
    for id in ids {
        let spec = match example(id) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{e}");
                continue;
            }
        };
        println!("example {id}: {}", spec.title);
        match converge(spec, &ladder) {
            Ok(rows) => {
                for r in &rows {
                    let order = r.order.map(|p| format!("{p:6.2}")).unwrap_or_default();
                    println!("  n = {:4}  err = {:.3e}  {order}", r.n, r.err);
                }
                match fitted_order(&rows) {
                    Some(p) => println!("  least-squares order {p:.2}"),
                    None => println!("  exact to round-off"),
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
}
