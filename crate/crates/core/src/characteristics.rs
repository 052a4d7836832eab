//! Initial data, characteristic seeding and flow, and exact parametric areas.
//!
//! The initial graph, including the vertical segment at every jump, is one
//! parametric curve. Under the flow each point moves to
//! `x = x0 + F'(u) t` with `u` fixed, and the area `∫ u dx` swept by any arc
//! of the curve changes only through the boundary term `t [u F'(u) - F(u)]`.

use std::fmt;
use std::ops::Range;

use crate::bezier::Vec2;
use crate::error::{Error, Result};
use crate::flux::{FluxFunction, Polynomial};
use crate::quadrature;

/// Absolute tolerance of the one-off base-area quadrature.
pub const AREA_QUAD_TOL: f64 = 1e-14;

/// Profile of one smooth piece of initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// Coefficients in ascending powers of `x`.
    Polynomial(Polynomial),
    /// `offset + amp * tanh(rate * (x - center))`.
    Tanh {
        amp: f64,
        rate: f64,
        center: f64,
        offset: f64,
    },
}

impl Profile {
    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    /// `(g(x), g'(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            Profile::Constant(c) => (*c, 0.0),
            Profile::Polynomial(p) => {
                let [v, d, _] = p.eval3(x);
                (v, d)
            }
            Profile::Tanh {
                amp,
                rate,
                center,
                offset,
            } => {
                let th = (rate * (x - center)).tanh();
                (offset + amp * th, amp * rate * (1.0 - th * th))
            }
        }
    }

    /// `∫_a^b g dx`: closed form for polynomials, quadrature otherwise.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        match self {
            Profile::Constant(c) => Ok(c * (b - a)),
            Profile::Polynomial(p) => {
                let anti = |x: f64| {
                    p.coeffs()
                        .iter()
                        .enumerate()
                        .rev()
                        .fold(0.0, |acc, (k, c)| acc * x + c / (k + 1) as f64)
                        * x
                };
                Ok(anti(b) - anti(a))
            }
            Profile::Tanh { .. } => quadrature::integrate(|x| self.value(x), a, b, AREA_QUAD_TOL),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Profile::Constant(_))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "const:{c}"),
            Profile::Polynomial(p) => {
                let parts: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Profile::Tanh {
                amp,
                rate,
                center,
                offset,
            } => write!(f, "tanh:{amp},{rate},{center},{offset}"),
        }
    }
}

/// Piecewise-smooth initial data: `pieces[k]` holds on
/// `[breaks[k-1], breaks[k])`, with unbounded constant end pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    breaks: Vec<f64>,
    pieces: Vec<Profile>,
}

impl InitialData {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Profile>) -> Result<Self> {
        if pieces.len() != breaks.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} pieces need {} breakpoints, got {}",
                pieces.len(),
                pieces.len().saturating_sub(1),
                breaks.len()
            )));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        if !pieces[0].is_constant() || !pieces[pieces.len() - 1].is_constant() {
            return Err(Error::InvalidInput(
                "unbounded end pieces must be constant".into(),
            ));
        }
        Ok(Self { breaks, pieces })
    }

    pub fn riemann(x0: f64, u_l: f64, u_r: f64) -> Self {
        Self {
            breaks: vec![x0],
            pieces: vec![Profile::Constant(u_l), Profile::Constant(u_r)],
        }
    }

    /// `u_in` on `[x0, x1)`, `u_out` elsewhere.
    pub fn box_data(x0: f64, x1: f64, u_in: f64, u_out: f64) -> Result<Self> {
        Self::new(
            vec![x0, x1],
            vec![
                Profile::Constant(u_out),
                Profile::Constant(u_in),
                Profile::Constant(u_out),
            ],
        )
    }

    /// `profile` on `[a, b)`, continued by its end values outside.
    pub fn smooth_window(profile: Profile, a: f64, b: f64) -> Result<Self> {
        let (ga, gb) = (profile.value(a), profile.value(b));
        Self::new(
            vec![a, b],
            vec![Profile::Constant(ga), profile, Profile::Constant(gb)],
        )
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Profile] {
        &self.pieces
    }

    pub fn value(&self, x: f64) -> f64 {
        let k = self.breaks.partition_point(|&b| b <= x);
        self.pieces[k].value(x)
    }

    pub fn left_state(&self) -> f64 {
        self.pieces[0].value(0.0)
    }

    pub fn right_state(&self) -> f64 {
        self.pieces[self.pieces.len() - 1].value(0.0)
    }

    /// `(x, u(x-), u(x+))` at every breakpoint with a nonzero jump.
    pub fn jumps(&self) -> Vec<(f64, f64, f64)> {
        self.breaks
            .iter()
            .enumerate()
            .filter_map(|(k, &x)| {
                let (a, b) = (self.pieces[k].value(x), self.pieces[k + 1].value(x));
                (a != b).then_some((x, a, b))
            })
            .collect()
    }

    /// `(min g, max g)`, sampling smooth bounded pieces densely.
    pub fn range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut take = |v: f64| {
            lo = lo.min(v);
            hi = hi.max(v);
        };
        take(self.left_state());
        take(self.right_state());
        for k in 1..self.pieces.len() - 1 {
            let (a, b) = (self.breaks[k - 1], self.breaks[k]);
            for j in 0..=4096 {
                take(self.pieces[k].value(a + (b - a) * j as f64 / 4096.0));
            }
        }
        (lo, hi)
    }

    /// `∫_a^b g dx`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        let mut total = 0.0;
        for (k, p) in self.pieces.iter().enumerate() {
            let lo = if k == 0 { f64::NEG_INFINITY } else { self.breaks[k - 1] };
            let hi = self.breaks.get(k).copied().unwrap_or(f64::INFINITY);
            let (x0, x1) = (a.max(lo), b.min(hi));
            if x1 > x0 {
                total += p.integral(x0, x1)?;
            }
        }
        Ok(total)
    }

    /// Curve pieces in order: jump fronts and bounded smooth pieces.
    fn curve_kinds(&self) -> Vec<PieceKind> {
        let mut out = Vec::new();
        for (k, &x) in self.breaks.iter().enumerate() {
            let (a, b) = (self.pieces[k].value(x), self.pieces[k + 1].value(x));
            if a != b {
                out.push(PieceKind::Jump {
                    x,
                    u_from: a,
                    u_to: b,
                });
            }
            if k + 1 < self.breaks.len() {
                out.push(PieceKind::Smooth {
                    profile: self.pieces[k + 1].clone(),
                    x_a: x,
                    x_b: self.breaks[k + 1],
                });
            }
        }
        out
    }
}

impl fmt::Display for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pieces[0])?;
        for (b, p) in self.breaks.iter().zip(&self.pieces[1..]) {
            write!(f, " | {b} | {p}")?;
        }
        Ok(())
    }
}

/// How one stretch of the seeded curve is parametrized.
#[derive(Debug, Clone, PartialEq)]
pub enum PieceKind {
    /// Vertical segment at `x`, `u(s) = (1 - s) u_from + s u_to`, `s ∈ [0, 1]`.
    Jump { x: f64, u_from: f64, u_to: f64 },
    /// Graph of `profile` over `[x_a, x_b]`, parametrized by the seed `x`.
    Smooth { profile: Profile, x_a: f64, x_b: f64 },
}

impl PieceKind {
    pub fn param_range(&self) -> (f64, f64) {
        match *self {
            PieceKind::Jump { .. } => (0.0, 1.0),
            PieceKind::Smooth { x_a, x_b, .. } => (x_a, x_b),
        }
    }

    /// `(seed x, d seed x / ds, u, du/ds)` at parameter `s`.
    pub fn seed(&self, s: f64) -> (f64, f64, f64, f64) {
        match self {
            PieceKind::Jump { x, u_from, u_to } => (*x, 0.0, u_to * s + (1.0 - s) * u_from, u_to - u_from),
            PieceKind::Smooth { profile, .. } => {
                let (g, dg) = profile.eval(s);
                (s, 1.0, g, dg)
            }
        }
    }

    /// `∫ u d(seed x)` between two parameters, i.e. the area at `t = 0`.
    pub fn base_area(&self, s0: f64, s1: f64) -> Result<f64> {
        match self {
            PieceKind::Jump { .. } => Ok(0.0),
            PieceKind::Smooth { profile, .. } => profile.integral(s0, s1),
        }
    }
}

/// A characteristic node of the flowed curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharNode {
    /// Parameter within its piece.
    pub s: f64,
    /// Index of the curve piece the node belongs to.
    pub piece: usize,
    pub seed_x: f64,
    pub seed_dx: f64,
    pub u: f64,
    pub du_ds: f64,
    pub x: f64,
    /// `(dx/ds, du/ds)` at the current time.
    pub tangent: Vec2,
    /// `∫ u dx` from the first node at `t = 0`.
    pub base_area: f64,
    /// `∫ u dx` from the first node at the current time.
    pub cum_area: f64,
}

/// The seeded curve: nodes grouped into contiguous pieces. Neighbouring
/// pieces share their junction point as two coincident nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub t: f64,
    pub nodes: Vec<CharNode>,
    pub pieces: Vec<(PieceKind, Range<usize>)>,
    pub left_state: f64,
    pub right_state: f64,
}

impl Front {
    /// Seeds `n` uniform nodes on every jump and bounded piece of `init`.
    pub fn seed(init: &InitialData, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 nodes per piece, got {n}")));
        }
        let mut nodes: Vec<CharNode> = Vec::new();
        let mut pieces = Vec::new();
        let mut area = 0.0;
        for (idx, kind) in init.curve_kinds().into_iter().enumerate() {
            let (a, b) = kind.param_range();
            let start = nodes.len();
            let mut prev = a;
            for k in 0..n {
                let s = if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 };
                area += kind.base_area(prev, s)?;
                prev = s;
                let (seed_x, seed_dx, u, du_ds) = kind.seed(s);
                nodes.push(CharNode {
                    s,
                    piece: idx,
                    seed_x,
                    seed_dx,
                    u,
                    du_ds,
                    x: seed_x,
                    tangent: Vec2::new(seed_dx, du_ds),
                    base_area: area,
                    cum_area: area,
                });
            }
            pieces.push((kind, start..nodes.len()));
        }
        Ok(Self {
            t: 0.0,
            nodes,
            pieces,
            left_state: init.left_state(),
            right_state: init.right_state(),
        })
    }

    pub fn riemann(u_l: f64, u_r: f64, x0: f64, n: usize) -> Result<Self> {
        if u_l == u_r {
            return Err(Error::DegenerateStates(u_l));
        }
        Self::seed(&InitialData::riemann(x0, u_l, u_r), n)
    }

    /// The same curve at time `t`.
    pub fn flowed(&self, flux: &FluxFunction, t: f64) -> Self {
        Self {
            t,
            nodes: flow(&self.nodes, flux, t),
            ..self.clone()
        }
    }

    /// `∫ u dx` along the whole seeded curve.
    pub fn total_area(&self) -> f64 {
        match (self.nodes.first(), self.nodes.last()) {
            (Some(a), Some(b)) => b.cum_area - a.cum_area,
            _ => 0.0,
        }
    }

    pub fn overturns(&self) -> Vec<Range<usize>> {
        detect_overturn(&self.nodes)
    }
}

/// Front nodes of a Riemann jump, `u(s) = u_R s + (1 - s) u_L`, at `t = 0`.
/// The constant flanks are left implicit.
pub fn seed_riemann(u_l: f64, u_r: f64, x0: f64, n: usize) -> Result<Vec<CharNode>> {
    Ok(Front::riemann(u_l, u_r, x0, n)?.nodes)
}

/// Moves nodes to time `t` (from their seeds, so repeated calls do not
/// accumulate). Areas are referenced to the first node.
pub fn flow(nodes: &[CharNode], flux: &FluxFunction, t: f64) -> Vec<CharNode> {
    let Some(first) = nodes.first() else {
        return Vec::new();
    };
    let g = |u: f64| {
        let [f, df, _] = flux.eval3(u);
        u * df - f
    };
    let g0 = g(first.u);
    nodes
        .iter()
        .map(|n| {
            let [f, df, d2f] = flux.eval3(n.u);
            CharNode {
                x: n.seed_x + df * t,
                tangent: Vec2::new(n.seed_dx + t * d2f * n.du_ds, n.du_ds),
                cum_area: n.base_area + t * ((n.u * df - f) - g0),
                ..*n
            }
        })
        .collect()
}

/// `∫ u dx` over parameters `[s0, s1]` of one piece at time `t`.
pub fn parametric_area(flux: &FluxFunction, piece: &PieceKind, s0: f64, s1: f64, t: f64) -> Result<f64> {
    let g = |s: f64| {
        let u = piece.seed(s).2;
        let [f, df, _] = flux.eval3(u);
        u * df - f
    };
    Ok(piece.base_area(s0, s1)? + t * (g(s1) - g(s0)))
}

/// Maximal runs of consecutive nodes whose tangent has negative x-component.
pub fn detect_overturn(nodes: &[CharNode]) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, n) in nodes.iter().enumerate() {
        match (n.tangent.x < 0.0, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push(s..k);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(s..nodes.len());
    }
    out
}
