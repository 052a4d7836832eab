//! Exact and numerical solutions sampled onto uniform grids.

use std::path::Path;

use crate::characteristics::{Front, InitialData};
use crate::envelope::{build_envelope, envelope_to_wavefan, ConvexEnvelope, WaveFan};
use crate::error::{Error, Result};
use crate::flux::FluxFunction;
use crate::io::{fmt_f64, write_csv};
use crate::projection::{geap_project, interpolate_chain, ProjectedFront, ShockRecord};

/// Samples written to profile CSVs by default.
pub const DEFAULT_SAMPLES: usize = 2001;
/// Margin added on both sides of the wave region.
pub const WINDOW_MARGIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shock {
    pub x_s: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub u_top: f64,
    pub u_bot: f64,
    /// Rankine-Hugoniot speed `ΔF / Δu`.
    pub speed: f64,
}

impl Shock {
    fn new(flux: &FluxFunction, x_s: f64, u_left: f64, u_right: f64) -> Self {
        let (u_top, u_bot) = (u_left.max(u_right), u_left.min(u_right));
        Self {
            x_s,
            u_left,
            u_right,
            u_top,
            u_bot,
            speed: (flux.f(u_top) - flux.f(u_bot)) / (u_top - u_bot),
        }
    }

    fn from_record(flux: &FluxFunction, r: &ShockRecord) -> Self {
        Self::new(flux, r.x_s, r.u_left, r.u_right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionMeta {
    pub flux: String,
    pub initial: String,
    /// Interpolating segments per curve piece; `None` for exact solutions.
    pub intervals: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionProfile {
    pub t: f64,
    pub window: (f64, f64),
    pub samples: Vec<(f64, f64)>,
    pub shocks: Vec<Shock>,
    pub meta: SolutionMeta,
    /// `∫ u dx` over `window`, integrated exactly.
    pub mass: f64,
    /// `∫ g dx` over `window` plus the boundary flux `t (F(u_left) - F(u_right))`.
    pub expected_mass: f64,
}

impl SolutionProfile {
    pub fn write_profile(&self, path: &Path) -> Result<()> {
        let rows: Vec<String> = self
            .samples
            .iter()
            .map(|(x, u)| format!("{},{}", fmt_f64(*x), fmt_f64(*u)))
            .collect();
        write_csv(path, "x,u", &rows)
    }

    pub fn write_shocks(&self, path: &Path) -> Result<()> {
        let rows: Vec<String> = self
            .shocks
            .iter()
            .map(|s| {
                format!(
                    "{},{},{},{}",
                    fmt_f64(s.x_s),
                    fmt_f64(s.u_top),
                    fmt_f64(s.u_bot),
                    fmt_f64(s.speed)
                )
            })
            .collect();
        write_csv(path, "x_s,u_top,u_bot,speed", &rows)
    }

    /// `|mass - expected_mass|`.
    pub fn mass_drift(&self) -> f64 {
        (self.mass - self.expected_mass).abs()
    }
}

fn uniform(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time must be positive, got {t}")));
    }
    Ok(())
}

/// Exact self-similar solution of a Riemann problem.
pub fn solve_riemann_exact(
    flux: &FluxFunction,
    u_l: f64,
    u_r: f64,
    x0: f64,
    t: f64,
) -> Result<SolutionProfile> {
    check_time(t)?;
    let env = build_envelope(flux, u_l, u_r)?;
    let fan = envelope_to_wavefan(&env, flux, x0);
    let (smin, smax) = fan.speed_range(flux);
    let window = (
        x0 + smin * t - WINDOW_MARGIN,
        x0 + smax * t + WINDOW_MARGIN,
    );
    Ok(exact_profile(flux, &fan, u_l, u_r, t, window))
}

fn exact_profile(
    flux: &FluxFunction,
    fan: &WaveFan,
    u_l: f64,
    u_r: f64,
    t: f64,
    window: (f64, f64),
) -> SolutionProfile {
    let (xa, xb) = window;
    let samples = uniform(xa, xb, DEFAULT_SAMPLES)
        .map(|x| (x, fan.sample(flux, x, t)))
        .collect();
    let shocks = fan
        .waves
        .iter()
        .filter_map(|w| match *w {
            crate::envelope::Wave::Shock {
                u_left,
                u_right,
                speed,
            } => Some(Shock {
                x_s: fan.x0 + speed * t,
                u_left,
                u_right,
                u_top: u_left.max(u_right),
                u_bot: u_left.min(u_right),
                speed,
            }),
            _ => None,
        })
        .collect();
    let initial = InitialData::riemann(fan.x0, u_l, u_r);
    SolutionProfile {
        t,
        window,
        samples,
        shocks,
        meta: SolutionMeta {
            flux: flux.spec().to_string(),
            initial: initial.to_string(),
            intervals: None,
        },
        mass: fan.integral(flux, xa, xb, t),
        expected_mass: u_l * (fan.x0 - xa) + u_r * (xb - fan.x0) + t * (flux.f(u_l) - flux.f(u_r)),
    }
}

/// Riemann solution by characteristics, Bézier interpolation with `n`
/// segments and equal-area projection.
pub fn solve_riemann_numerical(
    flux: &FluxFunction,
    u_l: f64,
    u_r: f64,
    x0: f64,
    t: f64,
    n: usize,
) -> Result<SolutionProfile> {
    if u_l == u_r {
        return Err(Error::DegenerateStates(u_l));
    }
    solve_piecewise(flux, &InitialData::riemann(x0, u_l, u_r), t, n)
}

/// Front of `init` at time `t`, projected to a single-valued curve.
pub fn project_front(
    flux: &FluxFunction,
    init: &InitialData,
    t: f64,
    n: usize,
) -> Result<ProjectedFront> {
    if n < 8 {
        return Err(Error::InvalidInput(format!("need at least 8 intervals, got {n}")));
    }
    check_time(t)?;
    let (lo, hi) = init.range();
    flux.check_interval(lo, hi)?;
    check_fan_overlap(flux, init, t)?;
    let front = Front::seed(init, n + 1)?.flowed(flux, t);
    let chain = interpolate_chain(&front, flux)?;
    geap_project(&chain)
}

/// Per-jump envelopes of piecewise data, in jump order.
pub fn jump_envelopes(flux: &FluxFunction, init: &InitialData) -> Result<Vec<(f64, ConvexEnvelope)>> {
    init.jumps()
        .into_iter()
        .map(|(x, a, b)| Ok((x, build_envelope(flux, a, b)?)))
        .collect()
}

/// Fails when the wave fans of neighbouring jumps would meet before `t`.
pub fn check_fan_overlap(flux: &FluxFunction, init: &InitialData, t: f64) -> Result<()> {
    let mut prev: Option<(f64, f64)> = None;
    for (x, env) in jump_envelopes(flux, init)? {
        let fan = envelope_to_wavefan(&env, flux, x);
        let (smin, smax) = fan.speed_range(flux);
        if let Some((px, pmax)) = prev {
            let meet = (x - px) / (pmax - smin);
            if pmax > smin && meet <= t {
                return Err(Error::FanOverlap(format!(
                    "fans from x = {px} and x = {x} meet at t = {meet:.6}, before t = {t}"
                )));
            }
        }
        prev = Some((x, smax));
    }
    Ok(())
}

/// Numerical solution for piecewise-smooth data, valid while the fans of
/// distinct jumps stay apart.
pub fn solve_piecewise(
    flux: &FluxFunction,
    init: &InitialData,
    t: f64,
    n: usize,
) -> Result<SolutionProfile> {
    let front = project_front(flux, init, t, n)?;
    let (lo, hi) = if front.pieces.is_empty() {
        (0.0, 0.0)
    } else {
        front.x_extent()
    };
    let (b_lo, b_hi) = match (init.breaks().first(), init.breaks().last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => (0.0, 0.0),
    };
    let window = (lo.min(b_lo) - WINDOW_MARGIN, hi.max(b_hi) + WINDOW_MARGIN);
    let (xa, xb) = window;
    let samples = uniform(xa, xb, DEFAULT_SAMPLES)
        .map(|x| (x, front.sample(x)))
        .collect();
    let shocks = front
        .shocks()
        .into_iter()
        .map(|r| Shock::from_record(flux, r))
        .collect();
    let (ul, ur) = (init.left_state(), init.right_state());
    Ok(SolutionProfile {
        t,
        window,
        samples,
        shocks,
        meta: SolutionMeta {
            flux: flux.spec().to_string(),
            initial: init.to_string(),
            intervals: Some(n),
        },
        mass: front.mass(xa, xb)?,
        expected_mass: init.integral(xa, xb)? + t * (flux.f(ul) - flux.f(ur)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristics::Profile;

    fn ex1() -> FluxFunction {
        FluxFunction::polynomial(&[0.0, 0.0, 4.0, -4.0, 1.0])
    }

    fn ex3() -> FluxFunction {
        FluxFunction::polynomial(&[0.0, 0.0, 3.0, -5.0 / 3.0, 0.25])
    }

    #[test]
    fn exact_example1() {
        let f = ex1();
        let p = solve_riemann_exact(&f, 2.0, 0.0, 0.0, 1.0).unwrap();
        let xs: Vec<f64> = p.shocks.iter().map(|s| s.x_s).collect();
        assert_eq!(xs.len(), 2);
        assert!((xs[0] + 32.0 / 27.0).abs() < 1e-12 && (xs[1] - 32.0 / 27.0).abs() < 1e-12);
        for &(x, u) in &p.samples {
            if x.abs() < 32.0 / 27.0 - 1e-9 {
                assert!((f.df(u) - x).abs() <= 1e-10, "x={x} u={u}");
                assert!((2.0 / 3.0..=4.0 / 3.0).contains(&u));
            }
        }
        assert!(p.mass_drift() < 1e-12);
    }

    #[test]
    fn exact_example2_and_bl() {
        let p = solve_riemann_exact(&ex1(), 0.0, 2.0, 0.0, 1.0).unwrap();
        assert_eq!(p.shocks.len(), 1);
        assert_eq!(p.shocks[0].x_s, 0.0);
        let bl = FluxFunction::buckley_leverett(0.5).unwrap();
        let p = solve_riemann_exact(&bl, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(p.shocks.len(), 1);
        assert!((p.shocks[0].x_s - (1.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(p.mass_drift() < 1e-9);
    }

    #[test]
    fn numerical_matches_exact_structure() {
        let bl = FluxFunction::buckley_leverett(0.5).unwrap();
        for (f, ul, ur) in [(ex1(), 2.0, 0.0), (ex1(), 0.0, 2.0), (ex3(), 0.0, 3.5), (bl, 1.0, 0.0)] {
            let exact = solve_riemann_exact(&f, ul, ur, 0.0, 1.0).unwrap();
            let num = solve_riemann_numerical(&f, ul, ur, 0.0, 1.0, 40).unwrap();
            assert_eq!(exact.shocks.len(), num.shocks.len());
            for (a, b) in exact.shocks.iter().zip(&num.shocks) {
                assert!((a.x_s - b.x_s).abs() < 1e-6);
                assert!((a.u_top - b.u_top).abs() < 1e-4 && (a.u_bot - b.u_bot).abs() < 1e-4);
            }
            assert!(num.mass_drift() < 1e-9, "drift {}", num.mass_drift());
            let (lo, hi) = (ul.min(ur), ul.max(ur));
            assert!(num.samples.iter().all(|&(_, u)| u >= lo - 1e-12 && u <= hi + 1e-12));
        }
    }

    #[test]
    fn coarse_example3_structure() {
        let num = solve_riemann_numerical(&ex3(), 0.0, 3.5, 0.0, 1.0, 8).unwrap();
        assert_eq!(num.shocks.len(), 1);
    }

    #[test]
    fn tanh_breaks_into_centred_shock() {
        let burgers = FluxFunction::polynomial(&[0.0, 0.0, 0.5]);
        let g = Profile::Tanh {
            amp: -1.0,
            rate: 1.0,
            center: 0.0,
            offset: 0.0,
        };
        let init = InitialData::smooth_window(g, -6.0, 6.0).unwrap();
        let early = solve_piecewise(&burgers, &init, 0.5, 64).unwrap();
        assert!(early.shocks.is_empty());
        let p = solve_piecewise(&burgers, &init, 2.0, 64).unwrap();
        assert_eq!(p.shocks.len(), 1);
        // Odd symmetry holds up to the (orientation-dependent) interpolation error.
        let coarse = p.shocks[0].x_s.abs();
        assert!(coarse < 1e-8, "{:?}", p.shocks);
        let fine = solve_piecewise(&burgers, &init, 2.0, 128).unwrap();
        assert!(fine.shocks[0].x_s.abs() < coarse / 16.0);
        assert!(p.mass_drift() < 1e-9);
    }

    #[test]
    fn box_data_has_both_envelopes() {
        let f = ex3();
        let init = InitialData::box_data(0.0, 5.0, 5.0, 0.0).unwrap();
        let p = solve_piecewise(&f, &init, 0.1, 80).unwrap();
        let envs = jump_envelopes(&f, &init).unwrap();
        let mut exact: Vec<f64> = Vec::new();
        for (x, env) in &envs {
            exact.extend(envelope_to_wavefan(env, &f, *x).shock_speeds().iter().map(|s| x + s * 0.1));
        }
        let got: Vec<f64> = p.shocks.iter().map(|s| s.x_s).collect();
        assert_eq!(exact.len(), got.len(), "{got:?} vs {exact:?}");
        for (e, g) in exact.iter().zip(&got) {
            assert!((e - g).abs() < 1e-6);
        }
        assert!(p.mass_drift() < 1e-9);
        assert!(matches!(
            solve_piecewise(&f, &init, 0.2, 80),
            Err(Error::FanOverlap(_))
        ));
    }
}
