//! Area-preserving cubic interpolation of sin x on [0, 1].
//!
//! cargo run --example bezier_sine

use conslaw::bezier::{BezierSegment, Vec2};

fn main() -> conslaw::Result<()> {
    let mut prev: Option<f64> = None;
    for k in 0..6 {
        let n = 8usize << k;
        let h = 1.0 / n as f64;
        let mut err = 0.0f64;
        let mut area_err = 0.0f64;
        for i in 0..n {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            // ∫ sin = cos a - cos b, in a form without cancellation.
            let target = 2.0 * (0.5 * (a + b)).sin() * (0.5 * h).sin();
            let seg = BezierSegment::area_preserving(
                Vec2::new(a, a.sin()),
                Vec2::new(b, b.sin()),
                Vec2::new(1.0, a.cos()),
                Vec2::new(1.0, b.cos()),
                target,
            )?;
            area_err = area_err.max((seg.area() - target).abs());
            for j in 0..=64 {
                let p = seg.point(j as f64 / 64.0);
                err = err.max((p.y - p.x.sin()).abs());
            }
        }
        let order = prev.map(|e| format!("{:.2}", (e / err).log2())).unwrap_or_default();
        println!("N = {n:3}  max error {err:.3e}  area error {area_err:.1e}  {order}");
        prev = Some(err);
    }
    Ok(())
}
