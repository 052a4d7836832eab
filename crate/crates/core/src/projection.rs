//! Equal-area projection of an overturned characteristic curve.
//!
//! The flowed curve is interpolated by an area-preserving Bézier chain,
//! parametrized by a global `σ ∈ [0, N]` (segment index plus local
//! parameter) and flanked by two implicit constant half-lines. Shocks are
//! vertical cuts `x = x_s` joining two points of the curve (or a flank) so
//! that the enclosed signed area vanishes.
//!
//! The sweep starts at the right flank, takes the admissible cut whose right
//! end lies furthest along the chain, keeps the curve between consecutive
//! cuts, and repeats from the left end of the last cut until the left flank
//! is reached. Chains with `u_L < u_R` are swept in the mirrored frame
//! `x -> -x`.

use crate::bezier::{BezierSegment, Vec2};
use crate::characteristics::{CharNode, Front, PieceKind};
use crate::error::{Error, Result};
use crate::flux::FluxFunction;
use crate::roots::{brent, scan_sampled};

/// Residual samples per Bézier segment in the shock search.
pub const SAMPLES_PER_SEGMENT: usize = 4;
/// A uniform node closer than this fraction of the node spacing to a fold
/// is moved onto the fold instead of inserting a new node.
pub const FOLD_SNAP_FRACTION: f64 = 0.1;

const SIGMA_TOL: f64 = 1e-14;

/// Bézier interpolant of a flowed front.
#[derive(Debug, Clone, PartialEq)]
pub struct CharChain {
    pub t: f64,
    /// Nodes in chain order; pieces meet in duplicated junction nodes.
    pub nodes: Vec<CharNode>,
    pub segments: Vec<BezierSegment>,
    pub left_state: f64,
    pub right_state: f64,
    prefix: Vec<f64>,
    scale: f64,
}

/// A point of the chain or one of its flanks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainPoint {
    LeftFlank,
    At(f64),
    RightFlank,
}

impl ChainPoint {
    fn key(self, n: f64) -> f64 {
        match self {
            ChainPoint::LeftFlank => -1.0,
            ChainPoint::At(s) => s,
            ChainPoint::RightFlank => n + 1.0,
        }
    }

    fn mirrored(self, n: f64) -> Self {
        match self {
            ChainPoint::LeftFlank => ChainPoint::RightFlank,
            ChainPoint::At(s) => ChainPoint::At(n - s),
            ChainPoint::RightFlank => ChainPoint::LeftFlank,
        }
    }
}

/// An equal-area cut: `left` and `right` are joined by a vertical line at `x_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockCandidate {
    pub left: ChainPoint,
    pub right: ChainPoint,
    pub x_s: f64,
}

/// Which flank a shock search attaches to: the right flank (`Bottom`) or
/// the left flank (`Top`), in the frame the chain is swept in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachState {
    Bottom,
    Top,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShockRecord {
    pub x_s: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub u_top: f64,
    pub u_bot: f64,
    pub left: ChainPoint,
    pub right: ChainPoint,
    /// `(segment, local parameter)` where the cut meets the chain.
    pub t_splits: Vec<(usize, f64)>,
}

impl ShockRecord {
    /// Rankine-Hugoniot speed of the jump.
    pub fn rh_speed(&self, flux: &FluxFunction) -> f64 {
        (flux.f(self.u_top) - flux.f(self.u_bot)) / (self.u_top - self.u_bot)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrontPiece {
    /// Chain between two global parameters, single-valued in `x`.
    Fragment { sigma0: f64, sigma1: f64 },
    Shock(ShockRecord),
}

/// Single-valued front, pieces ordered by `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedFront {
    pub chain: CharChain,
    pub pieces: Vec<FrontPiece>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

impl CharChain {
    /// Interpolates a flowed front, inserting nodes at folds of `x(s)`.
    pub fn build(front: &Front, flux: &FluxFunction) -> Result<Self> {
        let t = front.t;
        let g = |u: f64| {
            let [f, df, _] = flux.eval3(u);
            u * df - f
        };
        let g0 = front.nodes.first().map(|n| g(n.u)).unwrap_or(0.0);
        let mut nodes: Vec<CharNode> = Vec::new();
        let mut segments = Vec::new();
        let mut base = 0.0;
        for (idx, (kind, range)) in front.pieces.iter().enumerate() {
            let mut params: Vec<f64> = front.nodes[range.clone()].iter().map(|n| n.s).collect();
            if t != 0.0 {
                insert_folds(kind, flux, t, &mut params)?;
            }
            let start = nodes.len();
            let mut prev = params[0];
            for &s in &params {
                base += kind.base_area(prev, s)?;
                prev = s;
                let (seed_x, seed_dx, u, du_ds) = kind.seed(s);
                let [f, df, d2f] = flux.eval3(u);
                nodes.push(CharNode {
                    s,
                    piece: idx,
                    seed_x,
                    seed_dx,
                    u,
                    du_ds,
                    x: seed_x + df * t,
                    tangent: Vec2::new(seed_dx + t * d2f * du_ds, du_ds),
                    base_area: base,
                    cum_area: base + t * ((u * df - f) - g0),
                });
            }
            for k in start..nodes.len() - 1 {
                let (a, b) = (&nodes[k], &nodes[k + 1]);
                let p0 = Vec2::new(a.x, a.u);
                let p1 = Vec2::new(b.x, b.u);
                let target = b.cum_area - a.cum_area;
                let seg = if p0 == p1 {
                    BezierSegment::line(p0, p1)
                } else {
                    fit_segment(p0, p1, a.tangent, b.tangent, target, b.s - a.s)?
                };
                segments.push(seg);
            }
        }
        Ok(Self::assemble(
            t,
            nodes,
            segments,
            front.left_state,
            front.right_state,
        ))
    }

    fn assemble(
        t: f64,
        nodes: Vec<CharNode>,
        segments: Vec<BezierSegment>,
        left_state: f64,
        right_state: f64,
    ) -> Self {
        let mut prefix = Vec::with_capacity(segments.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for s in &segments {
            acc += s.area();
            prefix.push(acc);
        }
        let scale = nodes
            .iter()
            .fold(1.0f64, |m, n| m.max(n.x.abs()).max(n.u.abs()));
        Self {
            t,
            nodes,
            segments,
            left_state,
            right_state,
            prefix,
            scale,
        }
    }

    /// The chain seen under `x -> -x`, traversed backwards.
    pub fn mirrored(&self) -> Self {
        let nodes = self
            .nodes
            .iter()
            .rev()
            .map(|n| CharNode {
                x: -n.x,
                tangent: Vec2::new(n.tangent.x, -n.tangent.y),
                ..*n
            })
            .collect();
        let segments = self.segments.iter().rev().map(|s| s.mirrored()).collect();
        Self::assemble(self.t, nodes, segments, self.right_state, self.left_state)
    }

    /// Number of segments `N`; the global parameter runs over `[0, N]`.
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn n(&self) -> f64 {
        self.segments.len() as f64
    }

    /// `(segment, local parameter)` of a global parameter.
    pub fn locate(&self, sigma: f64) -> (usize, f64) {
        let n = self.segments.len();
        let k = (sigma.floor().max(0.0) as usize).min(n - 1);
        (k, (sigma - k as f64).clamp(0.0, 1.0))
    }

    pub fn point(&self, sigma: f64) -> Vec2 {
        let (k, tau) = self.locate(sigma);
        self.segments[k].point(tau)
    }

    pub fn x(&self, sigma: f64) -> f64 {
        self.point(sigma).x
    }

    pub fn u(&self, sigma: f64) -> f64 {
        self.point(sigma).y
    }

    /// `∫ u dx` along the chain from its start to `sigma`.
    pub fn area_to(&self, sigma: f64) -> f64 {
        let (k, tau) = self.locate(sigma);
        if tau == 1.0 {
            return self.prefix[k + 1];
        }
        self.prefix[k] + self.segments[k].area_between(0.0, tau)
    }

    /// `∫ u dx` along the chain between two parameters.
    pub fn area(&self, s0: f64, s1: f64) -> f64 {
        self.area_to(s1) - self.area_to(s0)
    }

    pub fn total_area(&self) -> f64 {
        self.prefix[self.segments.len()]
    }

    pub fn x_start(&self) -> f64 {
        self.segments[0].a.x
    }

    pub fn x_end(&self) -> f64 {
        self.segments[self.segments.len() - 1].d.x
    }

    /// `(min x, max x)` over all control points.
    pub fn x_extent(&self) -> (f64, f64) {
        self.segments
            .iter()
            .flat_map(|s| s.control_points())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.x), hi.max(p.x))
            })
    }

    /// `∫ u dx` over `[xa, xb]` for the multivalued curve with its flanks.
    pub fn mass(&self, xa: f64, xb: f64) -> f64 {
        self.left_state * (self.x_start() - xa)
            + self.total_area()
            + self.right_state * (xb - self.x_end())
    }

    /// True if some stretch of the chain runs backwards in `x`.
    pub fn overturned(&self) -> bool {
        let tol = 1e-14 * self.scale;
        self.nodes.iter().any(|n| n.tangent.x < 0.0)
            || self.segments.iter().any(|s| s.d.x - s.a.x <= tol && s.d != s.a)
    }

    fn point_value(&self, p: ChainPoint) -> f64 {
        match p {
            ChainPoint::LeftFlank => self.left_state,
            ChainPoint::At(s) => self.u(s),
            ChainPoint::RightFlank => self.right_state,
        }
    }
}

/// Roots of `dx/ds` strictly inside node cells become nodes.
fn insert_folds(kind: &PieceKind, flux: &FluxFunction, t: f64, params: &mut Vec<f64>) -> Result<()> {
    let dxds = |s: f64| {
        let (_, seed_dx, u, du) = kind.seed(s);
        seed_dx + t * flux.d2f(u) * du
    };
    let mut folds = Vec::new();
    for w in params.windows(2) {
        let (a, b) = (dxds(w[0]), dxds(w[1]));
        if a * b < 0.0 {
            folds.push(brent(dxds, w[0], w[1], SIGMA_TOL * (w[1] - w[0]).abs().max(1e-300))?);
        }
    }
    let last = params.len() - 1;
    let spacing = (params[last] - params[0]) / last as f64;
    for fold in folds {
        let k = params.partition_point(|&s| s < fold);
        let nearest = if k == 0 {
            0
        } else if k > last || fold - params[k - 1] < params[k] - fold {
            k - 1
        } else {
            k
        };
        let interior = nearest > 0 && nearest < last;
        if interior && (params[nearest] - fold).abs() < FOLD_SNAP_FRACTION * spacing {
            params[nearest] = fold;
        } else if !params.contains(&fold) {
            params.insert(k, fold);
        }
    }
    Ok(())
}

/// Interpolates a flowed front into a Bézier chain.
/// Chord construction pinned at the start, then pinned at the end, then
/// in the seed parameter; the first that meets `target` wins.
fn fit_segment(p0: Vec2, p1: Vec2, t0: Vec2, t1: Vec2, target: f64, ds: f64) -> Result<BezierSegment> {
    let forward = BezierSegment::area_preserving_chord(p0, p1, t0, t1, target);
    if let Ok(seg) = &forward {
        if !seg.fallback {
            return forward;
        }
    }
    if let Ok(rev) = BezierSegment::area_preserving_chord(p1, p0, -t1, -t0, -target) {
        if !rev.fallback {
            return Ok(rev.reversed());
        }
    }
    let scaled = BezierSegment::area_preserving_scaled(p0, p1, t0, t1, target, ds)?;
    match forward {
        Ok(seg) if scaled.fallback => Ok(seg),
        _ => Ok(scaled),
    }
}

pub fn interpolate_chain(front: &Front, flux: &FluxFunction) -> Result<CharChain> {
    CharChain::build(front, flux)
}

/// Signed area enclosed by the chain over `span` and the line `x = x_s`;
/// flank endpoints contribute their constant state out to the line.
pub fn lobe_area(chain: &CharChain, x_s: f64, span: (ChainPoint, ChainPoint)) -> Result<f64> {
    let n = chain.n();
    let on_line = |p: ChainPoint| -> Result<()> {
        if let ChainPoint::At(s) = p {
            let offset = chain.x(s) - x_s;
            if offset.abs() > 1e-10 * chain.scale {
                return Err(Error::NoIntersection { x_s, offset });
            }
        }
        Ok(())
    };
    on_line(span.0)?;
    on_line(span.1)?;
    let (mut area, s0) = match span.0 {
        ChainPoint::LeftFlank => (chain.left_state * (chain.x_start() - x_s), 0.0),
        ChainPoint::At(s) => (0.0, s),
        ChainPoint::RightFlank => (chain.right_state * (x_s - chain.x_end()), n),
    };
    let s1 = match span.1 {
        ChainPoint::LeftFlank => {
            area += chain.left_state * (x_s - chain.x_start());
            0.0
        }
        ChainPoint::At(s) => s,
        ChainPoint::RightFlank => {
            area += chain.right_state * (x_s - chain.x_end());
            n
        }
    };
    Ok(area + chain.area(s0, s1))
}

fn sample_grid(lo: f64, hi: f64) -> Vec<f64> {
    let cells = (((hi - lo) * SAMPLES_PER_SEGMENT as f64).ceil() as usize).max(8);
    (0..=cells)
        .map(|k| lo + (hi - lo) * k as f64 / cells as f64)
        .collect()
}

fn residual_roots(f: &mut dyn FnMut(f64) -> f64, grid: &[f64]) -> Result<Vec<f64>> {
    let values: Vec<f64> = grid.iter().map(|&s| f(s)).collect();
    scan_sampled(f, grid, &values, SIGMA_TOL)
}

/// Cuts attaching to the right flank (`Bottom`) or the left flank (`Top`).
pub fn find_shocks_to_state(chain: &CharChain, state: AttachState) -> Result<Vec<ShockCandidate>> {
    let mut out = Vec::new();
    if let Some(c) = full_shock(chain) {
        out.push(c);
    }
    match state {
        AttachState::Bottom => out.extend(right_flank_cuts(chain)?),
        AttachState::Top => out.extend(left_flank_cuts(chain, chain.n())?),
    }
    Ok(out)
}

/// Single cut from the left flank straight to the right flank.
fn full_shock(c: &CharChain) -> Option<ShockCandidate> {
    let (ul, ur) = (c.left_state, c.right_state);
    if ul == ur {
        return None;
    }
    let (xs0, xe) = (c.x_start(), c.x_end());
    let x_s = (ul * xs0 - ur * xe + c.total_area()) / (ul - ur);
    let tol = 1e-12 * c.scale;
    (x_s >= xe - tol && x_s <= xs0 + tol).then_some(ShockCandidate {
        left: ChainPoint::LeftFlank,
        right: ChainPoint::RightFlank,
        x_s,
    })
}

/// Cuts from an interior point to the right flank.
fn right_flank_cuts(c: &CharChain) -> Result<Vec<ShockCandidate>> {
    let n = c.n();
    let (ur, xe, total) = (c.right_state, c.x_end(), c.total_area());
    let tol = 1e-12 * c.scale;
    let mut grid = sample_grid(0.0, n);
    grid.pop(); // the residual vanishes trivially at the chain end
    let mut r = |s: f64| total - c.area_to(s) + ur * (c.x(s) - xe);
    Ok(residual_roots(&mut r, &grid)?
        .into_iter()
        .map(|s| ShockCandidate {
            left: ChainPoint::At(s),
            right: ChainPoint::RightFlank,
            x_s: c.x(s),
        })
        .filter(|cand| cand.x_s >= xe - tol)
        .collect())
}

/// Cuts from the left flank to an interior point below `s_max`.
fn left_flank_cuts(c: &CharChain, s_max: f64) -> Result<Vec<ShockCandidate>> {
    let (ul, xs0) = (c.left_state, c.x_start());
    let tol = 1e-12 * c.scale;
    let mut grid = sample_grid(0.0, s_max);
    grid.remove(0); // trivial zero at the chain start
    let mut r = |s: f64| ul * (xs0 - c.x(s)) + c.area_to(s);
    Ok(residual_roots(&mut r, &grid)?
        .into_iter()
        .map(|s| ShockCandidate {
            left: ChainPoint::LeftFlank,
            right: ChainPoint::At(s),
            x_s: c.x(s),
        })
        .filter(|cand| cand.x_s <= xs0 + tol)
        .collect())
}

#[derive(Debug, Clone, Copy)]
struct Branch {
    s0: f64,
    s1: f64,
    x_lo: f64,
    x_hi: f64,
}

/// Maximal x-monotone stretches of `[0, s_max]`.
fn branches(c: &CharChain, s_max: f64) -> Vec<Branch> {
    let tol = 1e-14 * c.scale;
    let mut out: Vec<(f64, f64, i8)> = Vec::new();
    for (k, seg) in c.segments.iter().enumerate() {
        let s0 = k as f64;
        if s0 >= s_max {
            break;
        }
        let dx = seg.d.x - seg.a.x;
        let dir = if dx > tol {
            1
        } else if dx < -tol {
            -1
        } else {
            0
        };
        let s1 = (s0 + 1.0).min(s_max);
        match out.last_mut() {
            Some(last) if last.2 == dir => last.1 = s1,
            _ => out.push((s0, s1, dir)),
        }
    }
    out.into_iter()
        .filter(|b| b.2 != 0)
        .map(|(s0, s1, _)| {
            let (xa, xb) = (c.x(s0), c.x(s1));
            Branch {
                s0,
                s1,
                x_lo: xa.min(xb),
                x_hi: xa.max(xb),
            }
        })
        .collect()
}

/// Interior cuts: both ends on the chain below `s_max`, on distinct branches.
fn interior_cuts(c: &CharChain, s_max: f64) -> Result<Vec<ShockCandidate>> {
    let bs = branches(c, s_max);
    let mut out = Vec::new();
    for j in 1..bs.len() {
        let bj = bs[j];
        for bi in &bs[..j] {
            let adjacent = bi.s1 == bj.s0;
            let partner = |x: f64| -> Option<f64> {
                if x < bi.x_lo || x > bi.x_hi {
                    return None;
                }
                brent(|s| c.x(s) - x, bi.s0, bi.s1, SIGMA_TOL).ok()
            };
            let mut grid = sample_grid(bj.s0, bj.s1);
            if adjacent && grid.len() > 2 {
                grid.remove(0); // degenerate zero at the shared fold
            }
            let mut lobe = |s: f64| match partner(c.x(s)) {
                Some(p) => c.area(p, s),
                None => f64::NAN,
            };
            for s in residual_roots(&mut lobe, &grid)? {
                if let Some(p) = partner(c.x(s)) {
                    out.push(ShockCandidate {
                        left: ChainPoint::At(p),
                        right: ChainPoint::At(s),
                        x_s: c.x(s),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn pick(cands: &[ShockCandidate], n: f64, tol_x: f64) -> Option<ShockCandidate> {
    let flank: Vec<&ShockCandidate> = cands
        .iter()
        .filter(|c| c.right == ChainPoint::RightFlank)
        .collect();
    let better = |a: &ShockCandidate, b: &ShockCandidate, ka: f64, kb: f64, tol: f64| {
        ka > kb + tol || ((ka - kb).abs() <= tol && a.left.key(n) < b.left.key(n))
    };
    let mut best: Option<ShockCandidate> = None;
    if !flank.is_empty() {
        for c in flank {
            if best.is_none_or(|b| better(c, &b, c.x_s, b.x_s, tol_x)) {
                best = Some(*c);
            }
        }
        return best;
    }
    for c in cands {
        if best.is_none_or(|b| better(c, &b, c.right.key(n), b.right.key(n), 1e-12)) {
            best = Some(*c);
        }
    }
    best
}

/// Sweep in the chain's own frame; pieces returned left to right.
fn sweep(c: &CharChain) -> Result<Vec<FrontPiece>> {
    let n = c.n();
    let tol_x = 1e-12 * c.scale;
    let cap = c.nodes.len().max(1);
    let mut rl: Vec<FrontPiece> = Vec::new();
    let mut star = ChainPoint::RightFlank;
    for _ in 0..=cap {
        let s_max = star.key(n).min(n);
        let mut cands = Vec::new();
        if star == ChainPoint::RightFlank {
            cands.extend(full_shock(c));
            cands.extend(right_flank_cuts(c)?);
        }
        cands.extend(left_flank_cuts(c, s_max)?);
        cands.extend(interior_cuts(c, s_max)?);
        cands.retain(|k| k.left.key(n) < k.right.key(n) && k.right.key(n) <= star.key(n));
        cands.retain(|k| !matches!(k.right, ChainPoint::At(s) if s >= s_max - 1e-12));

        let Some(best) = pick(&cands, n, tol_x) else {
            if s_max > 0.0 {
                rl.push(FrontPiece::Fragment {
                    sigma0: 0.0,
                    sigma1: s_max,
                });
            }
            rl.reverse();
            return Ok(rl);
        };
        if let ChainPoint::At(r) = best.right {
            if s_max > r {
                rl.push(FrontPiece::Fragment {
                    sigma0: r,
                    sigma1: s_max,
                });
            }
        }
        rl.push(FrontPiece::Shock(shock_record(c, &best)));
        if best.left == ChainPoint::LeftFlank {
            rl.reverse();
            return Ok(rl);
        }
        star = best.left;
    }
    Err(Error::ProjectionFailure(format!(
        "no convergence after {cap} cuts"
    )))
}

fn shock_record(c: &CharChain, k: &ShockCandidate) -> ShockRecord {
    let (ul, ur) = (c.point_value(k.left), c.point_value(k.right));
    let split = |p: ChainPoint| match p {
        ChainPoint::At(s) => Some(c.locate(s)),
        _ => None,
    };
    ShockRecord {
        x_s: k.x_s,
        u_left: ul,
        u_right: ur,
        u_top: ul.max(ur),
        u_bot: ul.min(ur),
        left: k.left,
        right: k.right,
        t_splits: [split(k.left), split(k.right)].into_iter().flatten().collect(),
    }
}

/// Projects the chain onto a single-valued front, sweeping from the right
/// flank when `u_L >= u_R` and in the mirrored frame otherwise.
pub fn geap_project(chain: &CharChain) -> Result<ProjectedFront> {
    let dir = if chain.left_state < chain.right_state {
        Direction::Reverse
    } else {
        Direction::Forward
    };
    geap_project_with(chain, dir)
}

pub fn geap_project_with(chain: &CharChain, dir: Direction) -> Result<ProjectedFront> {
    if chain.is_empty() || !chain.overturned() {
        let pieces = if chain.is_empty() {
            Vec::new()
        } else {
            vec![FrontPiece::Fragment {
                sigma0: 0.0,
                sigma1: chain.n(),
            }]
        };
        return Ok(ProjectedFront {
            chain: chain.clone(),
            pieces,
        });
    }
    let pieces = match dir {
        Direction::Forward => sweep(chain)?,
        Direction::Reverse => {
            let n = chain.n();
            let m = chain.mirrored();
            sweep(&m)?
                .into_iter()
                .rev()
                .map(|p| match p {
                    FrontPiece::Fragment { sigma0, sigma1 } => FrontPiece::Fragment {
                        sigma0: n - sigma1,
                        sigma1: n - sigma0,
                    },
                    FrontPiece::Shock(s) => {
                        let k = ShockCandidate {
                            left: s.right.mirrored(n),
                            right: s.left.mirrored(n),
                            x_s: -s.x_s,
                        };
                        FrontPiece::Shock(shock_record(chain, &k))
                    }
                })
                .collect()
        }
    };
    Ok(ProjectedFront {
        chain: chain.clone(),
        pieces,
    })
}

impl ProjectedFront {
    pub fn shocks(&self) -> Vec<&ShockRecord> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                FrontPiece::Shock(s) => Some(s),
                _ => None,
            })
            .collect()
    }

    pub fn left_state(&self) -> f64 {
        self.chain.left_state
    }

    pub fn right_state(&self) -> f64 {
        self.chain.right_state
    }

    fn fragment_u(&self, s0: f64, s1: f64, x: f64) -> f64 {
        let c = &self.chain;
        match brent(|s| c.x(s) - x, s0, s1, SIGMA_TOL) {
            Ok(s) => c.u(s),
            // Flat in x to roundoff: either end will do.
            Err(_) => c.u(if (c.x(s0) - x).abs() < (c.x(s1) - x).abs() { s0 } else { s1 }),
        }
    }

    /// Value of the front at `x`.
    pub fn sample(&self, x: f64) -> f64 {
        let c = &self.chain;
        let mut state = c.left_state;
        for p in &self.pieces {
            match p {
                FrontPiece::Fragment { sigma0, sigma1 } => {
                    let (xa, xb) = (c.x(*sigma0), c.x(*sigma1));
                    if x < xa {
                        return state;
                    }
                    if x <= xb {
                        return self.fragment_u(*sigma0, *sigma1, x);
                    }
                    state = c.u(*sigma1);
                }
                FrontPiece::Shock(s) => {
                    if x < s.x_s {
                        return state;
                    }
                    state = s.u_right;
                }
            }
        }
        state
    }

    /// `(min x, max x)` of the front's non-constant part.
    pub fn x_extent(&self) -> (f64, f64) {
        let c = &self.chain;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &self.pieces {
            let (a, b) = match p {
                FrontPiece::Fragment { sigma0, sigma1 } => (c.x(*sigma0), c.x(*sigma1)),
                FrontPiece::Shock(s) => (s.x_s, s.x_s),
            };
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// `∫ u dx` over a window containing the whole front.
    pub fn mass(&self, xa: f64, xb: f64) -> Result<f64> {
        let (lo, hi) = self.x_extent();
        if self.pieces.is_empty() {
            return Ok(self.chain.left_state * (xb - xa));
        }
        if xa > lo || xb < hi {
            return Err(Error::InvalidInput(format!(
                "window [{xa}, {xb}] does not contain the front [{lo}, {hi}]"
            )));
        }
        let c = &self.chain;
        let mut cursor = xa;
        let mut state = c.left_state;
        let mut total = 0.0;
        for p in &self.pieces {
            match p {
                FrontPiece::Fragment { sigma0, sigma1 } => {
                    let start = c.x(*sigma0);
                    total += state * (start - cursor) + c.area(*sigma0, *sigma1);
                    cursor = c.x(*sigma1);
                    state = c.u(*sigma1);
                }
                FrontPiece::Shock(s) => {
                    total += state * (s.x_s - cursor);
                    cursor = s.x_s;
                    state = s.u_right;
                }
            }
        }
        Ok(total + state * (xb - cursor))
    }

    /// Checks `x` is non-decreasing along the assembled front.
    pub fn is_single_valued(&self, tol: f64) -> bool {
        let c = &self.chain;
        let mut last = f64::NEG_INFINITY;
        for p in &self.pieces {
            match p {
                FrontPiece::Fragment { sigma0, sigma1 } => {
                    let cells = ((sigma1 - sigma0) * 8.0).ceil().max(1.0) as usize;
                    for k in 0..=cells {
                        let x = c.x(sigma0 + (sigma1 - sigma0) * k as f64 / cells as f64);
                        if x < last - tol {
                            return false;
                        }
                        last = last.max(x);
                    }
                }
                FrontPiece::Shock(s) => {
                    if s.x_s < last - tol {
                        return false;
                    }
                    last = s.x_s;
                }
            }
        }
        true
    }
}
