//! Area-preserving cubic Bézier interpolation in the (x, u) plane.
//!
//! A segment interpolates endpoint positions and tangent directions of a
//! parametric curve; the free tangent magnitude at the far end is chosen so
//! the segment's signed area `∫ u dx` matches a prescribed value exactly.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Scalar cross product `self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Relative size of the `r2` coefficient below which the area constraint
/// is abandoned.
pub const DEGENERATE_COEF_TOL: f64 = 1e-12;

/// Gauss-Legendre 3-point rule on [0, 1]; exact for degree 5.
const GL3_NODES: [f64; 3] = [
    0.5 - 0.387_298_334_620_741_7,
    0.5,
    0.5 + 0.387_298_334_620_741_7,
];
const GL3_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

#[derive(Debug, Clone, PartialEq)]
pub struct BezierSegment {
    pub a: Vec2,
    pub c1: Vec2,
    pub c2: Vec2,
    pub d: Vec2,
    pub r1: f64,
    pub r2: f64,
    pub alpha: Vec2,
    pub beta: Vec2,
    pub target_area: Option<f64>,
    pub fallback: bool,
}

impl BezierSegment {
    pub fn from_control_points(a: Vec2, c1: Vec2, c2: Vec2, d: Vec2) -> Self {
        Self {
            a,
            c1,
            c2,
            d,
            r1: 1.0,
            r2: 1.0,
            alpha: (c1 - a) * 3.0,
            beta: (d - c2) * 3.0,
            target_area: None,
            fallback: false,
        }
    }

    /// Straight segment between two points.
    pub fn line(p0: Vec2, p1: Vec2) -> Self {
        Self::from_control_points(p0, p0.lerp(p1, 1.0 / 3.0), p0.lerp(p1, 2.0 / 3.0), p1)
    }

    /// Area-preserving construction with `r1` equal to the x-extent of the
    /// data, for tangents given per unit of x.
    pub fn area_preserving(
        p0: Vec2,
        p1: Vec2,
        tan0: Vec2,
        tan1: Vec2,
        target_area: f64,
    ) -> Result<Self> {
        let h = (p1.x - p0.x).abs();
        if h == 0.0 {
            return Err(Error::DegenerateSegment);
        }
        Self::area_preserving_scaled(p0, p1, tan0, tan1, target_area, h)
    }

    /// Graph construction in the frame of the chord: tangents are rescaled
    /// to unit component along `p1 - p0` and `r1` is the chord length.
    /// Tangents within ~84° of the chord normal are rejected.
    pub fn area_preserving_chord(
        p0: Vec2,
        p1: Vec2,
        tan0: Vec2,
        tan1: Vec2,
        target_area: f64,
    ) -> Result<Self> {
        let d = p1 - p0;
        let h = d.norm();
        if h == 0.0 {
            return Err(Error::DegenerateSegment);
        }
        let along = |v: Vec2| (v.x * d.x + v.y * d.y) / h;
        let (a0, a1) = (along(tan0), along(tan1));
        if !(a0 > 0.1 * tan0.norm() && a1 > 0.1 * tan1.norm()) {
            return Err(Error::DegenerateSegment);
        }
        Self::area_preserving_scaled(p0, p1, tan0 * (1.0 / a0), tan1 * (1.0 / a1), target_area, h)
    }

    /// Same curve traversed from `d` to `a`; the signed area changes sign.
    pub fn reversed(&self) -> Self {
        Self {
            a: self.d,
            c1: self.c2,
            c2: self.c1,
            d: self.a,
            r1: self.r2,
            r2: self.r1,
            alpha: -self.beta,
            beta: -self.alpha,
            target_area: self.target_area.map(|t| -t),
            fallback: self.fallback,
        }
    }

    /// Area-preserving construction with an explicit parameter step `h`
    /// (tangents are derivatives with respect to that parameter).
    pub fn area_preserving_scaled(
        p0: Vec2,
        p1: Vec2,
        tan0: Vec2,
        tan1: Vec2,
        target_area: f64,
        h: f64,
    ) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || p0 == p1 {
            return Err(Error::DegenerateSegment);
        }
        let (alpha, beta) = (tan0, tan1);
        let d = p1 - p0;
        let r1 = h;
        // Area of the translated curve (A at the origin):
        //   r1 r2 / 60 (α×β) + r1/10 (D×α) + r2/10 (β×D) + D1 D2 / 2
        let adjusted = target_area - p0.y * d.x;
        let coef = r1 / 60.0 * alpha.cross(beta) + beta.cross(d) / 10.0;
        let rest = r1 / 10.0 * d.cross(alpha) + 0.5 * d.x * d.y;
        let scale = r1 * alpha.norm() * beta.norm() / 60.0 + beta.norm() * d.norm() / 10.0;

        let mut r2 = f64::NAN;
        let mut fallback = true;
        if coef.abs() > DEGENERATE_COEF_TOL * scale {
            let candidate = (adjusted - rest) / coef;
            if candidate > 0.0 && candidate.is_finite() {
                r2 = candidate;
                fallback = false;
            }
        }
        if fallback {
            r2 = h;
        }
        Ok(Self {
            a: p0,
            c1: p0 + alpha * (r1 / 3.0),
            c2: p1 - beta * (r2 / 3.0),
            d: p1,
            r1,
            r2,
            alpha,
            beta,
            target_area: Some(target_area),
            fallback,
        })
    }

    pub fn control_points(&self) -> [Vec2; 4] {
        [self.a, self.c1, self.c2, self.d]
    }

    pub fn point(&self, t: f64) -> Vec2 {
        let s = 1.0 - t;
        self.a * (s * s * s)
            + self.c1 * (3.0 * s * s * t)
            + self.c2 * (3.0 * s * t * t)
            + self.d * (t * t * t)
    }

    pub fn derivative(&self, t: f64) -> Vec2 {
        let s = 1.0 - t;
        (self.c1 - self.a) * (3.0 * s * s)
            + (self.c2 - self.c1) * (6.0 * s * t)
            + (self.d - self.c2) * (3.0 * t * t)
    }

    /// Position and first derivative at `t ∈ [0, 1]`.
    pub fn eval(&self, t: f64) -> Result<(Vec2, Vec2)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange(t));
        }
        Ok((self.point(t), self.derivative(t)))
    }

    /// `∫₀¹ B₂(t) B₁'(t) dt`, exact up to rounding.
    pub fn area(&self) -> f64 {
        self.area_between(0.0, 1.0)
    }

    /// `∫ B₂ B₁' dt` over `[t0, t1]` (signed; reversed limits negate).
    pub fn area_between(&self, t0: f64, t1: f64) -> f64 {
        let h = t1 - t0;
        if h == 0.0 {
            return 0.0;
        }
        GL3_NODES
            .iter()
            .zip(GL3_WEIGHTS)
            .map(|(&n, w)| {
                let t = t0 + h * n;
                w * self.point(t).y * self.derivative(t).x
            })
            .sum::<f64>()
            * h
    }

    /// de Casteljau split at `t`.
    pub fn split(&self, t: f64) -> (BezierSegment, BezierSegment) {
        let p01 = self.a.lerp(self.c1, t);
        let p12 = self.c1.lerp(self.c2, t);
        let p23 = self.c2.lerp(self.d, t);
        let p012 = p01.lerp(p12, t);
        let p123 = p12.lerp(p23, t);
        let mid = p012.lerp(p123, t);
        (
            Self::from_control_points(self.a, p01, p012, mid),
            Self::from_control_points(mid, p123, p23, self.d),
        )
    }

    /// Same curve traversed backwards with x negated. Preserves `∫ u dx`.
    pub fn mirrored(&self) -> BezierSegment {
        let m = |p: Vec2| Vec2::new(-p.x, p.y);
        BezierSegment {
            a: m(self.d),
            c1: m(self.c2),
            c2: m(self.c1),
            d: m(self.a),
            r1: self.r2,
            r2: self.r1,
            alpha: Vec2::new(self.beta.x, -self.beta.y),
            beta: Vec2::new(self.alpha.x, -self.alpha.y),
            target_area: self.target_area,
            fallback: self.fallback,
        }
    }

    /// x-coefficients in the power basis, lowest degree first.
    fn x_power_basis(&self) -> [f64; 4] {
        let (p0, p1, p2, p3) = (self.a.x, self.c1.x, self.c2.x, self.d.x);
        [
            p0,
            3.0 * (p1 - p0),
            3.0 * (p0 - 2.0 * p1 + p2),
            -p0 + 3.0 * p1 - 3.0 * p2 + p3,
        ]
    }

    /// All `t ∈ [0, 1]` with `B₁(t) = x_line`, ascending.
    pub fn intersect_vertical(&self, x_line: f64) -> Vec<f64> {
        let [c0, c1, c2, c3] = self.x_power_basis();
        let xs = [self.a.x, self.c1.x, self.c2.x, self.d.x];
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if x_line < lo || x_line > hi {
            return Vec::new();
        }
        let poly = [c0 - x_line, c1, c2, c3];
        let mut roots: Vec<f64> = real_cubic_roots(poly)
            .into_iter()
            .map(|t| newton_polish(&poly, t))
            .filter(|t| (-1e-9..=1.0 + 1e-9).contains(t))
            .map(|t| t.clamp(0.0, 1.0))
            .collect();
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        roots
    }
}

fn horner(p: &[f64; 4], t: f64) -> (f64, f64) {
    let v = ((p[3] * t + p[2]) * t + p[1]) * t + p[0];
    let d = (3.0 * p[3] * t + 2.0 * p[2]) * t + p[1];
    (v, d)
}

fn newton_polish(p: &[f64; 4], mut t: f64) -> f64 {
    for _ in 0..3 {
        let (v, d) = horner(p, t);
        if d == 0.0 || v == 0.0 {
            break;
        }
        let next = t - v / d;
        if !next.is_finite() || (next - t).abs() > 1e-3 {
            break;
        }
        t = next;
    }
    t
}

/// Real roots of `p[0] + p[1] t + p[2] t² + p[3] t³`.
pub fn real_cubic_roots(p: [f64; 4]) -> Vec<f64> {
    let scale = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    if p[3].abs() <= 1e-14 * scale {
        return real_quadratic_roots(p[0], p[1], p[2], scale);
    }
    let b = p[2] / p[3];
    let c = p[1] / p[3];
    let d = p[0] / p[3];
    let shift = b / 3.0;
    let q_p = c - b * b / 3.0;
    let q_q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = 0.25 * q_q * q_q + q_p * q_p * q_p / 27.0;
    if q_p.abs() <= 1e-300 && q_q.abs() <= 1e-300 {
        return vec![-shift];
    }
    if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-0.5 * q_q + sq).cbrt();
        let v = (-0.5 * q_q - sq).cbrt();
        vec![u + v - shift]
    } else {
        let m = 2.0 * (-q_p / 3.0).sqrt();
        let arg = (3.0 * q_q / (q_p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}

fn real_quadratic_roots(c: f64, b: f64, a: f64, scale: f64) -> Vec<f64> {
    if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // Near-tangent: report the vertex when the discriminant is rounding noise.
        if disc > -1e-14 * b * b {
            return vec![-b / (2.0 * a)];
        }
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut out = vec![q / a];
    if q != 0.0 {
        out.push(c / q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn straight_line_falls_back_to_hermite() {
        let s = BezierSegment::area_preserving(v(0., 0.), v(1., 1.), v(1., 1.), v(1., 1.), 0.5)
            .unwrap();
        assert_eq!(s.r2, 1.0);
        assert!((s.area() - 0.5).abs() < 1e-15);
        let mid = s.point(0.5);
        assert!((mid.x - 0.5).abs() < 1e-15 && (mid.y - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parabola_hits_target_area() {
        let s = BezierSegment::area_preserving(v(0., 0.), v(1., 1.), v(1., 0.), v(1., 2.), 1.0 / 3.0)
            .unwrap();
        assert!(!s.fallback);
        assert!((s.area() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn arbitrary_target_is_met() {
        let s = BezierSegment::area_preserving(v(0.2, 0.1), v(1.3, 0.9), v(1., 0.3), v(1., 1.1), 0.45)
            .unwrap();
        assert!(!s.fallback);
        assert!((s.area() - 0.45).abs() < 1e-12);
    }

    #[test]
    fn reversal_negates_area_and_keeps_the_curve() {
        let s = BezierSegment::area_preserving(v(0.2, 0.1), v(1.3, 0.9), v(1., 0.3), v(1., 1.1), 0.45)
            .unwrap();
        let r = s.reversed();
        assert!((r.area() + s.area()).abs() < 1e-15);
        let (p, q) = (s.point(0.3), r.point(0.7));
        assert!((p.x - q.x).abs() < 1e-15 && (p.y - q.y).abs() < 1e-15);
        assert_eq!(r.reversed(), s);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        // The linear-in-r2 area relation against direct integration.
        let (alpha, beta) = (v(0.7, -0.4), v(1.3, 0.9));
        let (p0, p1) = (v(0.3, -0.2), v(1.1, 0.6));
        let (r1, r2) = (0.8, 1.7);
        let seg = BezierSegment::from_control_points(
            p0,
            p0 + alpha * (r1 / 3.0),
            p1 - beta * (r2 / 3.0),
            p1,
        );
        let d = p1 - p0;
        let closed = r1 * r2 / 60.0 * alpha.cross(beta)
            + r1 / 10.0 * d.cross(alpha)
            + r2 / 10.0 * beta.cross(d)
            + 0.5 * d.x * d.y
            + p0.y * d.x;
        assert!((seg.area() - closed).abs() < 1e-15);
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert_eq!(
            BezierSegment::area_preserving(v(1., 0.), v(1., 1.), v(0., 1.), v(0., 1.), 0.0),
            Err(Error::DegenerateSegment)
        );
    }

    #[test]
    fn reversed_segment_negates_area() {
        let s = BezierSegment::from_control_points(v(0., 0.), v(0.4, 1.), v(0.9, -0.5), v(1.5, 0.3));
        let r = BezierSegment::from_control_points(s.d, s.c2, s.c1, s.a);
        assert!((s.area() + r.area()).abs() < 1e-15);
    }

    #[test]
    fn mirrored_preserves_area() {
        let s = BezierSegment::from_control_points(v(0., 0.), v(0.4, 1.), v(0.9, -0.5), v(1.5, 0.3));
        assert!((s.area() - s.mirrored().area()).abs() < 1e-15);
    }

    #[test]
    fn eval_endpoints_and_range() {
        let s = BezierSegment::from_control_points(v(0., 0.), v(0.4, 1.), v(0.9, -0.5), v(1.5, 0.3));
        assert_eq!(s.eval(0.0).unwrap().0, s.a);
        assert_eq!(s.eval(1.0).unwrap().0, s.d);
        assert_eq!(s.eval(1.5), Err(Error::ParameterOutOfRange(1.5)));
    }

    #[test]
    fn vertical_intersections() {
        let line = BezierSegment::line(v(0., 0.), v(1., 1.));
        let r = line.intersect_vertical(0.25);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.25).abs() < 1e-14);
        assert!(line.intersect_vertical(2.0).is_empty());
    }

    #[test]
    fn s_shaped_segment_has_three_crossings() {
        let s = BezierSegment::from_control_points(v(0., 0.), v(2., 0.3), v(-1., 0.7), v(1., 1.));
        let x_line = 0.5;
        let roots = s.intersect_vertical(x_line);
        assert_eq!(roots.len(), 3);
        // dense sampling oracle
        let n = 1_000_000;
        let mut crossings = Vec::new();
        let mut prev = s.point(0.0).x - x_line;
        for k in 1..=n {
            let t = k as f64 / n as f64;
            let cur = s.point(t).x - x_line;
            if prev.signum() != cur.signum() {
                crossings.push(t);
            }
            prev = cur;
        }
        assert_eq!(crossings.len(), 3);
        for (r, c) in roots.iter().zip(&crossings) {
            assert!((r - c).abs() < 2e-6);
            assert!((s.point(*r).x - x_line).abs() < 1e-14);
        }
    }
}
