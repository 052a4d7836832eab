//! Upper and lower convex envelopes of a flux between two states.
//!
//! [`build_envelope`] assembles the envelope from tangency conditions: the
//! steepest tangent secant leaving the anchor state, then concave arcs that
//! end either where a tangent line passes through the far state or at a
//! bitangent. [`oracle_envelope`] is an independent brute-force hull of the
//! sampled graph used for validation.
//!
//! For a Riemann problem `u_L -> u_R` the upper envelope applies when
//! `u_R < u_L` and the lower one otherwise; [`envelope_to_wavefan`] turns
//! either into the exact sequence of shocks and rarefactions.

use std::fmt;

use crate::error::{Error, Result};
use crate::flux::FluxFunction;
use crate::roots::{invert_monotone, scan_roots, scan_sampled};

/// Default number of scan cells used to bracket roots.
pub const DEFAULT_SCAN_CELLS: usize = 2048;
/// Minimum interior-arc curvature sign tolerance.
pub const ARC_CURVATURE_TOL: f64 = 1e-10;
/// Relative cross-product threshold used by the oracle's collinearity tests.
pub const ORACLE_COLLINEAR_TOL: f64 = 1e-9;

const XTOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    /// Envelope selected by a Riemann problem `u_l -> u_r`.
    pub fn for_states(u_l: f64, u_r: f64) -> Side {
        if u_r < u_l {
            Side::Upper
        } else {
            Side::Lower
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

pub const CSV_HEADER: &str = "side,kind,u_a,u_b,slope";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeSegment {
    Secant { u_a: f64, u_b: f64, slope: f64 },
    Arc { u_a: f64, u_b: f64 },
}

impl EnvelopeSegment {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            EnvelopeSegment::Secant { u_a, u_b, .. } | EnvelopeSegment::Arc { u_a, u_b } => {
                (u_a, u_b)
            }
        }
    }

    pub fn is_secant(&self) -> bool {
        matches!(self, EnvelopeSegment::Secant { .. })
    }

    fn mirrored_slope(self) -> Self {
        match self {
            EnvelopeSegment::Secant { u_a, u_b, slope } => EnvelopeSegment::Secant {
                u_a,
                u_b,
                slope: -slope,
            },
            arc => arc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexEnvelope {
    pub side: Side,
    pub interval: (f64, f64),
    pub segments: Vec<EnvelopeSegment>,
}

impl ConvexEnvelope {
    /// Envelope value at `u` (secant line or the flux itself on arcs).
    pub fn value(&self, flux: &FluxFunction, u: f64) -> f64 {
        for seg in &self.segments {
            let (a, b) = seg.bounds();
            if u >= a && u <= b {
                return match *seg {
                    EnvelopeSegment::Secant { u_a, slope, .. } => {
                        flux.f(u_a) + slope * (u - u_a)
                    }
                    EnvelopeSegment::Arc { .. } => flux.f(u),
                };
            }
        }
        flux.f(u)
    }

    /// Interior breakpoints between consecutive segments.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments
            .iter()
            .skip(1)
            .map(|s| s.bounds().0)
            .collect()
    }

    pub fn secants(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.segments.iter().filter_map(|s| match *s {
            EnvelopeSegment::Secant { u_a, u_b, slope } => Some((u_a, u_b, slope)),
            _ => None,
        })
    }

    /// Rows matching [`CSV_HEADER`] (slope empty for arcs), no header.
    pub fn csv_rows(&self) -> Vec<String> {
        let side = self.side;
        self.segments
            .iter()
            .map(|s| match *s {
                EnvelopeSegment::Secant { u_a, u_b, slope } => format!(
                    "{side},secant,{},{},{}",
                    crate::io::fmt_f64(u_a),
                    crate::io::fmt_f64(u_b),
                    crate::io::fmt_f64(slope)
                ),
                EnvelopeSegment::Arc { u_a, u_b } => format!(
                    "{side},arc,{},{},",
                    crate::io::fmt_f64(u_a),
                    crate::io::fmt_f64(u_b)
                ),
            })
            .collect()
    }
}

/// Two points sharing a tangent line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bitangent {
    pub a: f64,
    pub b: f64,
    pub slope: f64,
}

fn ordered(interval: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = (interval.0.min(interval.1), interval.0.max(interval.1));
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "degenerate interval [{}, {}]",
            interval.0, interval.1
        )));
    }
    Ok((lo, hi))
}

/// Points strictly inside `interval` whose tangent line passes through
/// `(anchor, F(anchor))`, ascending. Slope filtering is left to the caller.
pub fn tangency_roots(flux: &FluxFunction, anchor: f64, interval: (f64, f64)) -> Result<Vec<f64>> {
    tangency_roots_with(flux, anchor, interval, DEFAULT_SCAN_CELLS)
}

pub fn tangency_roots_with(
    flux: &FluxFunction,
    anchor: f64,
    interval: (f64, f64),
    cells: usize,
) -> Result<Vec<f64>> {
    let (lo, hi) = ordered(interval)?;
    flux.check_interval(lo, hi)?;
    let fa = flux.f(anchor);
    let residual = |u: f64| {
        let [f, df, _] = flux.eval3(u);
        f - fa - df * (u - anchor)
    };
    let grid: Vec<f64> = (0..=cells)
        .map(|k| lo + (hi - lo) * k as f64 / cells as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&u| residual(u)).collect();
    let scale = grid
        .iter()
        .map(|&u| {
            let [f, df, _] = flux.eval3(u);
            f.abs().max((df * (u - anchor)).abs())
        })
        .fold(fa.abs(), f64::max)
        .max(1.0);
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak <= 1e-13 * scale {
        // Affine flux: every point is trivially "tangent".
        return Ok(Vec::new());
    }
    check_osculation(&grid, &values, scale, "tangency residual")?;
    let mut f = residual;
    let roots = scan_sampled(&mut f, &grid, &values, XTOL)?;
    // Near the anchor the residual is ~F''(a)(u-a)²/2, below round-off
    // inside this radius; sign changes there are noise.
    let width = hi - lo;
    let noise = (1e3 * f64::EPSILON * scale / flux.d2f(anchor).abs()).sqrt();
    let exclude = noise.clamp(1e-12 * width, 1e-6 * width);
    Ok(roots
        .into_iter()
        .filter(|&u| u > lo && u < hi && (u - anchor).abs() > exclude)
        .collect())
}

/// Interior local minima of |r| that nearly touch zero without a sign change
/// indicate a double root the scan cannot bracket.
fn check_osculation(grid: &[f64], values: &[f64], scale: f64, what: &str) -> Result<()> {
    for k in 2..values.len().saturating_sub(2) {
        let (p, c, n) = (values[k - 1], values[k], values[k + 1]);
        if c == 0.0 || p.signum() != c.signum() || n.signum() != c.signum() {
            continue;
        }
        if c.abs() <= 1e-12 * scale && p.abs() > 1e3 * c.abs() && n.abs() > 1e3 * c.abs() {
            return Err(Error::BracketingFailure(format!(
                "{what} touches zero without crossing near u = {}",
                grid[k]
            )));
        }
    }
    Ok(())
}

/// Roots of `F''` strictly inside the interval.
pub fn inflection_points(flux: &FluxFunction, lo: f64, hi: f64, cells: usize) -> Result<Vec<f64>> {
    let peak = (0..=cells)
        .map(|k| flux.d2f(lo + (hi - lo) * k as f64 / cells as f64).abs())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(Vec::new());
    }
    scan_roots(|u| flux.d2f(u), lo, hi, cells, XTOL)
}

/// Pairs `a < b` inside `interval` with `F'(a) = F'(b)` and `b` on the
/// tangent line at `a`.
pub fn double_tangent(flux: &FluxFunction, interval: (f64, f64)) -> Result<Vec<Bitangent>> {
    double_tangent_with(flux, interval, DEFAULT_SCAN_CELLS)
}

pub fn double_tangent_with(
    flux: &FluxFunction,
    interval: (f64, f64),
    cells: usize,
) -> Result<Vec<Bitangent>> {
    let (lo, hi) = ordered(interval)?;
    flux.check_interval(lo, hi)?;
    let mut breaks = vec![lo];
    breaks.extend(inflection_points(flux, lo, hi, cells)?);
    breaks.push(hi);
    let pieces: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    let scale = (0..=64)
        .map(|k| flux.f(lo + (hi - lo) * k as f64 / 64.0).abs())
        .fold(1.0, f64::max);

    let mut out = Vec::new();
    for (i, &(a0, a1)) in pieces.iter().enumerate() {
        for &(b0, b1) in &pieces[i + 1..] {
            let (d0, d1) = (flux.df(b0), flux.df(b1));
            let (dmin, dmax) = (d0.min(d1), d0.max(d1));
            let slack = 1e-13 * dmin.abs().max(dmax.abs()).max(1.0);
            let partner = |p: f64| -> Option<f64> {
                let s = flux.df(p);
                if s < dmin - slack || s > dmax + slack {
                    return None;
                }
                Some(invert_monotone(|u| flux.df(u), s, b0, b1, XTOL))
            };
            let mut residual = |p: f64| match partner(p) {
                Some(q) => {
                    let [fp, dfp, _] = flux.eval3(p);
                    flux.f(q) - fp - dfp * (q - p)
                }
                None => f64::NAN,
            };
            let piece_cells = ((cells as f64 * (a1 - a0) / (hi - lo)).ceil() as usize).max(32);
            let grid: Vec<f64> = (0..=piece_cells)
                .map(|k| a0 + (a1 - a0) * k as f64 / piece_cells as f64)
                .collect();
            let values: Vec<f64> = grid.iter().map(|&p| residual(p)).collect();
            for a in scan_sampled(&mut residual, &grid, &values, XTOL)? {
                let Some(b) = partner(a) else { continue };
                // Pairs collapsing onto a shared inflection point are not bitangents.
                if !(a > lo && b < hi && b - a > 1e-8 * (hi - lo)) {
                    continue;
                }
                let slope_gap = (flux.df(a) - flux.df(b)).abs();
                let line_gap = (flux.f(b) - flux.f(a) - flux.df(a) * (b - a)).abs();
                let tol = 1e-12 * scale.max(flux.df(a).abs() * (b - a));
                if slope_gap > 1e-9 * scale || line_gap > tol {
                    continue;
                }
                out.push(Bitangent {
                    a,
                    b,
                    slope: (flux.f(b) - flux.f(a)) / (b - a),
                });
            }
        }
    }
    out.sort_by(|x, y| x.a.total_cmp(&y.a));
    out.dedup_by(|x, y| (x.a - y.a).abs() < 1e-10 && (x.b - y.b).abs() < 1e-10);
    Ok(out)
}

/// Envelope of `flux` between two Riemann states; upper when `u_r < u_l`.
pub fn build_envelope(flux: &FluxFunction, u_l: f64, u_r: f64) -> Result<ConvexEnvelope> {
    if u_l == u_r {
        return Err(Error::DegenerateStates(u_l));
    }
    let side = Side::for_states(u_l, u_r);
    let (lo, hi) = (u_l.min(u_r), u_l.max(u_r));
    flux.check_interval(lo, hi)?;
    let segments = match side {
        Side::Upper => upper_segments(flux, lo, hi)?,
        Side::Lower => upper_segments(&flux.negated(), lo, hi)?
            .into_iter()
            .map(EnvelopeSegment::mirrored_slope)
            .collect(),
    };
    let env = ConvexEnvelope {
        side,
        interval: (lo, hi),
        segments,
    };
    validate_cover(&env)?;
    Ok(env)
}

fn validate_cover(env: &ConvexEnvelope) -> Result<()> {
    let (lo, hi) = env.interval;
    let mut cursor = lo;
    for seg in &env.segments {
        let (a, b) = seg.bounds();
        if (a - cursor).abs() > 1e-12 * (hi - lo).max(1.0) || b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::EnvelopeFailure(format!(
                "segments do not tile [{lo}, {hi}] near u = {cursor}"
            )));
        }
        cursor = b;
    }
    if (cursor - hi).abs() > 1e-12 * (hi - lo).max(1.0) {
        return Err(Error::EnvelopeFailure(format!(
            "coverage stops at u = {cursor}, short of {hi}"
        )));
    }
    Ok(())
}

/// Upper (concave) envelope on `[lo, hi]`, assembled left to right.
fn upper_segments(flux: &FluxFunction, lo: f64, hi: f64) -> Result<Vec<EnvelopeSegment>> {
    let width = hi - lo;
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-12 * width.max(1.0);
    let bitangents = double_tangent(flux, (lo, hi))?;
    // Tangent points whose tangent line passes through the far state.
    let to_far: Vec<f64> = tangency_roots(flux, hi, (lo, hi))?;

    let mut segments = Vec::new();
    let mut c = lo;

    // Leaving `lo`: steepest tangent secant vs. following the flux.
    let mut best = (hi, (flux.f(hi) - flux.f(lo)) / width);
    for v in tangency_roots(flux, lo, (lo, hi))? {
        let slope = flux.df(v);
        let tol = 1e-12 * slope.abs().max(best.1.abs()).max(1.0);
        if slope > best.1 + tol || ((slope - best.1).abs() <= tol && v > best.0) {
            best = (v, slope);
        }
    }
    let tol = 1e-12 * best.1.abs().max(1.0);
    if flux.df(lo) <= best.1 + tol {
        let (v, _) = best;
        segments.push(secant(flux, lo, v));
        if near(v, hi) {
            return Ok(segments);
        }
        c = v;
    }

    // Arc from c, ending at the first tangent touching the flux again.
    for _ in 0..=bitangents.len() + 1 {
        let far = to_far.iter().copied().find(|&p| p > c && !near(p, c));
        let bit = bitangents.iter().find(|b| b.a > c && !near(b.a, c));
        let next = match (far, bit) {
            (None, None) => None,
            (Some(p), None) => Some((p, hi)),
            (None, Some(b)) => Some((b.a, b.b)),
            (Some(p), Some(b)) => {
                if near(p, b.a) || p < b.a {
                    Some((p, hi))
                } else {
                    Some((b.a, b.b))
                }
            }
        };
        match next {
            None => {
                segments.push(EnvelopeSegment::Arc { u_a: c, u_b: hi });
                return Ok(segments);
            }
            Some((p, q)) => {
                segments.push(EnvelopeSegment::Arc { u_a: c, u_b: p });
                segments.push(secant(flux, p, q));
                if near(q, hi) {
                    return Ok(segments);
                }
                c = q;
            }
        }
    }
    Err(Error::EnvelopeFailure(format!(
        "arc assembly did not reach u = {hi}"
    )))
}

fn secant(flux: &FluxFunction, a: f64, b: f64) -> EnvelopeSegment {
    EnvelopeSegment::Secant {
        u_a: a,
        u_b: b,
        slope: (flux.f(b) - flux.f(a)) / (b - a),
    }
}

/// Brute-force envelope: hull of the graph sampled at `n` uniform points.
pub fn oracle_envelope(
    flux: &FluxFunction,
    u_l: f64,
    u_r: f64,
    n: usize,
) -> Result<ConvexEnvelope> {
    if n < 64 {
        return Err(Error::InvalidInput(format!("oracle needs n >= 64, got {n}")));
    }
    if u_l == u_r {
        return Err(Error::DegenerateStates(u_l));
    }
    let side = Side::for_states(u_l, u_r);
    let (lo, hi) = (u_l.min(u_r), u_l.max(u_r));
    flux.check_interval(lo, hi)?;
    // Work with an upper hull; the lower hull of F is the upper hull of -F.
    let sign = if side == Side::Upper { 1.0 } else { -1.0 };
    let us: Vec<f64> = (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect();
    let ys: Vec<f64> = us.iter().map(|&u| sign * flux.f(u)).collect();
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));

    let cross = |o: usize, a: usize, b: usize| {
        (us[a] - us[o]) * (ys[b] - ys[o]) - (ys[a] - ys[o]) * (us[b] - us[o])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(n);
    for k in 0..n {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], k) >= 0.0 {
            hull.pop();
        }
        hull.push(k);
    }

    // Max gap between the chord i->j and the sampled graph.
    let chord_gap = |i: usize, j: usize| {
        let slope = (ys[j] - ys[i]) / (us[j] - us[i]);
        (i + 1..j)
            .map(|k| ys[i] + slope * (us[k] - us[i]) - ys[k])
            .fold(0.0f64, f64::max)
    };
    let thr = ORACLE_COLLINEAR_TOL * scale;

    // Runs of hull vertices: arc edges hug the graph, secant edges skip below it.
    let mut runs: Vec<(bool, usize, usize)> = Vec::new();
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let is_secant = j > i + 1 && chord_gap(i, j) > thr;
        match runs.last_mut() {
            Some((kind, _, end)) if *kind == is_secant && !is_secant => *end = j,
            _ => runs.push((is_secant, i, j)),
        }
    }
    // Straight arc runs are secants; then merge collinear neighbouring secants.
    for run in runs.iter_mut() {
        if !run.0 {
            let (i, j) = (run.1, run.2);
            let slope = (ys[j] - ys[i]) / (us[j] - us[i]);
            let bulge = (i + 1..j)
                .map(|k| (ys[k] - ys[i] - slope * (us[k] - us[i])).abs())
                .fold(0.0f64, f64::max);
            if bulge <= thr {
                run.0 = true;
            }
        }
    }
    let mut merged: Vec<(bool, usize, usize)> = Vec::new();
    for run in runs {
        if let Some(last) = merged.last_mut() {
            if last.0 && run.0 && cross(last.1, last.2, run.2).abs() <= thr * (hi - lo) {
                last.2 = run.2;
                continue;
            }
        }
        merged.push(run);
    }

    let segments = merged
        .into_iter()
        .map(|(is_secant, i, j)| {
            if is_secant {
                EnvelopeSegment::Secant {
                    u_a: us[i],
                    u_b: us[j],
                    slope: sign * (ys[j] - ys[i]) / (us[j] - us[i]),
                }
            } else {
                EnvelopeSegment::Arc {
                    u_a: us[i],
                    u_b: us[j],
                }
            }
        })
        .collect();
    Ok(ConvexEnvelope {
        side,
        interval: (lo, hi),
        segments,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { u_left: f64, u_right: f64, speed: f64 },
    Rarefaction { u_left: f64, u_right: f64 },
}

impl Wave {
    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }
}

/// Exact self-similar Riemann solution centred at `x0`, waves ordered left
/// to right.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFan {
    pub x0: f64,
    pub waves: Vec<Wave>,
}

impl WaveFan {
    pub fn left_state(&self) -> f64 {
        match self.waves.first() {
            Some(Wave::Shock { u_left, .. }) | Some(Wave::Rarefaction { u_left, .. }) => *u_left,
            None => f64::NAN,
        }
    }

    pub fn right_state(&self) -> f64 {
        match self.waves.last() {
            Some(Wave::Shock { u_right, .. }) | Some(Wave::Rarefaction { u_right, .. }) => {
                *u_right
            }
            None => f64::NAN,
        }
    }

    /// `(min, max)` signal speed across the fan.
    pub fn speed_range(&self, flux: &FluxFunction) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in &self.waves {
            let (a, b) = match *w {
                Wave::Shock { speed, .. } => (speed, speed),
                Wave::Rarefaction { u_left, u_right } => {
                    let (a, b) = (flux.df(u_left), flux.df(u_right));
                    (a.min(b), a.max(b))
                }
            };
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    pub fn shock_speeds(&self) -> Vec<f64> {
        self.waves
            .iter()
            .filter_map(|w| match *w {
                Wave::Shock { speed, .. } => Some(speed),
                _ => None,
            })
            .collect()
    }

    /// Solution value at `(x, t)`, `t > 0`.
    pub fn sample(&self, flux: &FluxFunction, x: f64, t: f64) -> f64 {
        let xi = (x - self.x0) / t;
        let mut state = self.left_state();
        for w in &self.waves {
            match *w {
                Wave::Shock {
                    u_left,
                    u_right,
                    speed,
                } => {
                    if xi < speed {
                        return u_left;
                    }
                    state = u_right;
                }
                Wave::Rarefaction { u_left, u_right } => {
                    let (s_l, s_r) = (flux.df(u_left), flux.df(u_right));
                    if xi < s_l {
                        return u_left;
                    }
                    if xi <= s_r {
                        return invert_monotone(
                            |u| flux.df(u),
                            xi,
                            u_left.min(u_right),
                            u_left.max(u_right),
                            1e-15,
                        );
                    }
                    state = u_right;
                }
            }
        }
        state
    }

    /// `∫ u dx` over `[xa, xb]` at time `t`, in closed form.
    pub fn integral(&self, flux: &FluxFunction, xa: f64, xb: f64, t: f64) -> f64 {
        let g = |u: f64| {
            let [f, df, _] = flux.eval3(u);
            u * df - f
        };
        let mut cursor = xa;
        let mut state = self.left_state();
        let mut total = 0.0;
        for w in &self.waves {
            match *w {
                Wave::Shock { u_right, speed, .. } => {
                    let xs = (self.x0 + speed * t).clamp(cursor, xb);
                    total += state * (xs - cursor);
                    cursor = xs;
                    state = u_right;
                }
                Wave::Rarefaction { u_left, u_right } => {
                    let xl = (self.x0 + flux.df(u_left) * t).clamp(cursor, xb);
                    let xr = (self.x0 + flux.df(u_right) * t).clamp(cursor, xb);
                    total += state * (xl - cursor);
                    if xr > xl {
                        let ua = self.sample(flux, xl, t);
                        let ub = self.sample(flux, xr, t);
                        total += t * (g(ub) - g(ua));
                    }
                    cursor = xr;
                    state = u_right;
                }
            }
        }
        total += state * (xb - cursor);
        total
    }
}

/// Shocks for secants, rarefactions for arcs, ordered by increasing speed.
pub fn envelope_to_wavefan(env: &ConvexEnvelope, _flux: &FluxFunction, x0: f64) -> WaveFan {
    let to_wave = |seg: &EnvelopeSegment, reversed: bool| {
        let (a, b) = seg.bounds();
        let (ul, ur) = if reversed { (b, a) } else { (a, b) };
        match *seg {
            EnvelopeSegment::Secant { slope, .. } => Wave::Shock {
                u_left: ul,
                u_right: ur,
                speed: slope,
            },
            EnvelopeSegment::Arc { .. } => Wave::Rarefaction {
                u_left: ul,
                u_right: ur,
            },
        }
    };
    let waves = match env.side {
        // u_L is the top of the interval: traverse from high u to low u.
        Side::Upper => env.segments.iter().rev().map(|s| to_wave(s, true)).collect(),
        Side::Lower => env.segments.iter().map(|s| to_wave(s, false)).collect(),
    };
    WaveFan { x0, waves }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> FluxFunction {
        FluxFunction::polynomial(&[0.0, 0.0, 4.0, -4.0, 1.0])
    }

    fn ex3() -> FluxFunction {
        FluxFunction::polynomial(&[0.0, 0.0, 3.0, -5.0 / 3.0, 0.25])
    }

    #[test]
    fn no_sliver_secant_at_the_far_state() {
        // Convex stretch ending just short of the inflection point.
        let env = build_envelope(&ex3(), -0.337682, 0.732409).unwrap();
        assert_eq!(env.segments.len(), 1);
        assert!(!env.segments[0].is_secant());
    }

    /// Independent oracle: sign changes of the residual on a fine grid.
    fn grid_scan(res: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for k in 1..n - 1 {
            let (a, b) = (
                lo + (hi - lo) * k as f64 / n as f64,
                lo + (hi - lo) * (k + 1) as f64 / n as f64,
            );
            if res(a).signum() != res(b).signum() {
                out.push(0.5 * (a + b));
            }
        }
        out
    }

    #[test]
    fn tangency_example1() {
        let f = ex1();
        let r = tangency_roots(&f, 0.0, (0.0, 2.0)).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0 / 3.0).abs() < 1e-13);
        let oracle = grid_scan(|u| f.f(u) - f.f(0.0) - f.df(u) * u, 0.0, 2.0, 10_000);
        assert_eq!(oracle.len(), 1);
        assert!((oracle[0] - r[0]).abs() < 2e-4);
    }

    #[test]
    fn tangency_example3() {
        let f = ex3();
        let r = tangency_roots(&f, 0.0, (0.0, 3.5)).unwrap();
        let s19 = 19f64.sqrt();
        let want = [(20.0 - 2.0 * s19) / 9.0, (20.0 + 2.0 * s19) / 9.0];
        assert_eq!(r.len(), 2);
        for (g, w) in r.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
        let oracle = grid_scan(|u| f.f(u) - f.f(0.0) - f.df(u) * u, 0.0, 3.5, 10_000);
        assert_eq!(oracle.len(), 2);
    }

    #[test]
    fn tangency_convex_is_empty() {
        let f = FluxFunction::polynomial(&[0.0, 0.0, 1.0]);
        assert!(tangency_roots(&f, 0.0, (0.0, 1.0)).unwrap().is_empty());
    }

    #[test]
    fn double_tangent_example3() {
        let f = ex3();
        let b = double_tangent(&f, (0.0, 3.5)).unwrap();
        assert_eq!(b.len(), 1);
        let s21 = 21f64.sqrt();
        assert!((b[0].a - (5.0 - s21) / 3.0).abs() < 1e-11);
        assert!((b[0].b - (5.0 + s21) / 3.0).abs() < 1e-11);
        assert!((b[0].slope - f.df(b[0].a)).abs() < 1e-10);
        assert!((b[0].slope - 0.7407).abs() < 1e-4);
    }

    #[test]
    fn double_tangent_example1_has_no_interior_pair() {
        // The only common tangent of (u^2-2u)^2 on [0, 2] is y = 0 touching
        // at the endpoints; F'(2/3) = -F'(4/3) so that pair is not one.
        assert!(double_tangent(&ex1(), (0.0, 2.0)).unwrap().is_empty());
        let f = ex1();
        assert!((f.df(2.0 / 3.0) + f.df(4.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn double_tangent_convex_is_empty() {
        let f = FluxFunction::polynomial(&[0.0, 0.0, 1.0]);
        assert!(double_tangent(&f, (-3.0, 5.0)).unwrap().is_empty());
    }

    #[test]
    fn envelope_example1_upper() {
        let f = ex1();
        let env = build_envelope(&f, 2.0, 0.0).unwrap();
        assert_eq!(env.side, Side::Upper);
        let s = &env.segments;
        assert_eq!(s.len(), 3, "{s:?}");
        let want = 32.0 / 27.0;
        match (s[0], s[1], s[2]) {
            (
                EnvelopeSegment::Secant { u_a, u_b, slope },
                EnvelopeSegment::Arc { u_a: a2, u_b: b2 },
                EnvelopeSegment::Secant {
                    u_a: a3,
                    u_b: b3,
                    slope: s3,
                },
            ) => {
                assert_eq!(u_a, 0.0);
                assert!((u_b - 2.0 / 3.0).abs() < 1e-13);
                assert!((slope - want).abs() < 1e-12);
                assert!((a2 - 2.0 / 3.0).abs() < 1e-13 && (b2 - 4.0 / 3.0).abs() < 1e-13);
                assert!((a3 - 4.0 / 3.0).abs() < 1e-13 && b3 == 2.0);
                assert!((s3 + want).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn envelope_example2_lower() {
        let env = build_envelope(&ex1(), 0.0, 2.0).unwrap();
        assert_eq!(env.side, Side::Lower);
        assert_eq!(
            env.segments,
            vec![EnvelopeSegment::Secant {
                u_a: 0.0,
                u_b: 2.0,
                slope: 0.0
            }]
        );
    }

    #[test]
    fn envelope_buckley_leverett() {
        let f = FluxFunction::buckley_leverett(0.5).unwrap();
        let env = build_envelope(&f, 1.0, 0.0).unwrap();
        assert_eq!(env.segments.len(), 2);
        let ustar = (1.0f64 / 3.0).sqrt();
        match env.segments[0] {
            EnvelopeSegment::Secant { u_a, u_b, slope } => {
                assert_eq!(u_a, 0.0);
                assert!((u_b - ustar).abs() < 1e-12);
                assert!((slope - (1.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(env.segments[1], EnvelopeSegment::Arc { u_b, .. } if u_b == 1.0));
    }

    #[test]
    fn envelope_example3_lower() {
        let env = build_envelope(&ex3(), 0.0, 3.5).unwrap();
        let kinds: Vec<bool> = env.segments.iter().map(|s| s.is_secant()).collect();
        assert_eq!(kinds, vec![false, true, false]);
    }

    #[test]
    fn oracle_example1_breakpoints() {
        let env = oracle_envelope(&ex1(), 2.0, 0.0, 100_000).unwrap();
        let bp = env.breakpoints();
        assert_eq!(bp.len(), 2, "{:?}", env.segments);
        assert!((bp[0] - 2.0 / 3.0).abs() < 1e-4);
        assert!((bp[1] - 4.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn oracle_linear_and_convex() {
        let lin = FluxFunction::polynomial(&[0.5, -1.25]);
        let env = oracle_envelope(&lin, -1.0, 3.0, 64).unwrap();
        assert_eq!(env.segments.len(), 1);
        match env.segments[0] {
            EnvelopeSegment::Secant { slope, .. } => assert!((slope + 1.25).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let sq = FluxFunction::polynomial(&[0.0, 0.0, 1.0]);
        let lower = oracle_envelope(&sq, 0.0, 1.0, 1024).unwrap();
        assert_eq!(lower.segments, vec![EnvelopeSegment::Arc { u_a: 0.0, u_b: 1.0 }]);
        let upper = oracle_envelope(&sq, 1.0, 0.0, 1024).unwrap();
        assert!(matches!(upper.segments[..], [EnvelopeSegment::Secant { .. }]));
    }

    #[test]
    fn linear_flux_envelope_is_one_secant() {
        let lin = FluxFunction::polynomial(&[0.5, -1.25]);
        for (a, b) in [(-1.0, 3.0), (3.0, -1.0)] {
            let env = build_envelope(&lin, a, b).unwrap();
            assert_eq!(env.segments.len(), 1);
            assert!(env.segments[0].is_secant());
        }
    }

    #[test]
    fn wavefans() {
        let f = ex1();
        let fan = envelope_to_wavefan(&build_envelope(&f, 2.0, 0.0).unwrap(), &f, 0.0);
        let sp = fan.shock_speeds();
        assert_eq!(sp.len(), 2);
        assert!((sp[0] + 32.0 / 27.0).abs() < 1e-12 && (sp[1] - 32.0 / 27.0).abs() < 1e-12);
        assert!(matches!(fan.waves[1], Wave::Rarefaction { .. }));
        assert_eq!(fan.left_state(), 2.0);
        assert_eq!(fan.right_state(), 0.0);

        let fan2 = envelope_to_wavefan(&build_envelope(&f, 0.0, 2.0).unwrap(), &f, 0.0);
        assert_eq!(fan2.waves.len(), 1);
        assert_eq!(fan2.shock_speeds(), vec![0.0]);

        let g = ex3();
        let fan3 = envelope_to_wavefan(&build_envelope(&g, 0.0, 3.5).unwrap(), &g, 0.0);
        assert_eq!(fan3.waves.len(), 3);
        assert!(fan3.waves[1].is_shock());
        assert!((fan3.shock_speeds()[0] - 0.7407).abs() < 1e-4);
    }

    #[test]
    fn fan_integral_matches_quadrature() {
        let f = ex1();
        let fan = envelope_to_wavefan(&build_envelope(&f, 2.0, 0.0).unwrap(), &f, 0.0);
        let (xa, xb, t) = (-2.0, 2.0, 1.0);
        let n = 400_000;
        let h = (xb - xa) / n as f64;
        let mid: f64 = (0..n)
            .map(|k| fan.sample(&f, xa + (k as f64 + 0.5) * h, t))
            .sum::<f64>()
            * h;
        let exact = fan.integral(&f, xa, xb, t);
        assert!((mid - exact).abs() < 1e-5, "{mid} vs {exact}");
        // boundary-flux balance: initial mass 2*2 minus t*(F(0) - F(2)) = 4
        assert!((exact - 4.0).abs() < 1e-12);
    }
}
