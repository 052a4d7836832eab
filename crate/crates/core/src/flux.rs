//! Smooth flux functions with closed-form first and second derivatives.
//!
//! Fluxes are built from a declarative [`FluxSpec`]; derivatives come from
//! differentiating the flux polynomials, never from finite differences.
//!
//! Text grammar accepted by [`parse_flux_spec`]:
//!
//! ```text
//! polynomial:[c0,c1,...]          coefficients, lowest degree first
//! rational:[p0,p1,...]/[q0,...]   numerator / denominator
//! named:<id>{key:value,...}       registered closed forms
//! ```
//!
//! Numbers may be written as decimals or as fractions (`-5/3`).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Denominator magnitude below which a rational flux is treated as singular.
pub const DENOMINATOR_TOL: f64 = 1e-14;

/// Default mobility ratio for the Buckley-Leverett flux.
pub const BUCKLEY_LEVERETT_DEFAULT_M: f64 = 0.5;

/// Dense polynomial, coefficients ordered low-to-high degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Polynomial { coeffs }
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// Value, first and second derivative in one Horner pass.
    pub fn eval3(&self, u: f64) -> [f64; 3] {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            ddp = ddp * u + 2.0 * dp;
            dp = dp * u + p;
            p = p * u + c;
        }
        [p, dp, ddp]
    }
}

/// Declarative description of a flux.
#[derive(Debug, Clone, PartialEq)]
pub enum FluxSpec {
    Polynomial(Vec<f64>),
    Rational {
        numerator: Vec<f64>,
        denominator: Vec<f64>,
    },
    Named {
        id: String,
        params: BTreeMap<String, f64>,
    },
}

impl fmt::Display for FluxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(v: &[f64]) -> String {
            v.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",")
        }
        match self {
            FluxSpec::Polynomial(c) => write!(f, "polynomial:[{}]", list(c)),
            FluxSpec::Rational {
                numerator,
                denominator,
            } => write!(f, "rational:[{}]/[{}]", list(numerator), list(denominator)),
            FluxSpec::Named { id, params } => {
                let body = params
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, "named:{id}{{{body}}}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Polynomial {
        p: Polynomial,
    },
    Rational {
        p: Polynomial,
        q: Polynomial,
    },
}

/// A smooth flux `F` with exact `F'` and `F''`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxFunction {
    spec: FluxSpec,
    form: Form,
}

impl FluxFunction {
    pub fn from_spec(spec: FluxSpec) -> Result<Self> {
        let form = match &spec {
            FluxSpec::Polynomial(c) => {
                if c.is_empty() {
                    return Err(Error::InvalidInput("empty coefficient list".into()));
                }
                Form::Polynomial {
                    p: Polynomial::new(c.clone()),
                }
            }
            FluxSpec::Rational {
                numerator,
                denominator,
            } => {
                if numerator.is_empty() || denominator.is_empty() {
                    return Err(Error::InvalidInput("empty coefficient list".into()));
                }
                if denominator.iter().all(|&c| c == 0.0) {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                Form::Rational {
                    p: Polynomial::new(numerator.clone()),
                    q: Polynomial::new(denominator.clone()),
                }
            }
            FluxSpec::Named { id, params } => named_form(id, params)?,
        };
        Ok(Self { spec, form })
    }

    pub fn polynomial(coeffs: &[f64]) -> Self {
        Self::from_spec(FluxSpec::Polynomial(coeffs.to_vec()))
            .expect("polynomial flux needs at least one coefficient")
    }

    /// `F(u) = u^2 / (u^2 + m (1 - u)^2)`.
    pub fn buckley_leverett(m: f64) -> Result<Self> {
        let mut params = BTreeMap::new();
        params.insert("M".to_string(), m);
        Self::from_spec(FluxSpec::Named {
            id: "buckley-leverett".into(),
            params,
        })
    }

    pub fn spec(&self) -> &FluxSpec {
        &self.spec
    }

    /// Checked evaluation of `F`, `F'` or `F''`.
    pub fn evaluate(&self, u: f64, order: u8) -> Result<f64> {
        if order > 2 {
            return Err(Error::InvalidOrder(order));
        }
        if let Form::Rational { q, .. } = &self.form {
            if q.eval(u).abs() <= DENOMINATOR_TOL {
                return Err(Error::Domain { u });
            }
        }
        Ok(self.eval3(u)[order as usize])
    }

    /// `[F(u), F'(u), F''(u)]` without domain checks.
    pub fn eval3(&self, u: f64) -> [f64; 3] {
        match &self.form {
            Form::Polynomial { p } => p.eval3(u),
            Form::Rational { p, q } => {
                let [pv, dp, ddp] = p.eval3(u);
                let [qv, dq, ddq] = q.eval3(u);
                let f = pv / qv;
                let df = (dp - f * dq) / qv;
                let ddf = (ddp - 2.0 * df * dq - f * ddq) / qv;
                [f, df, ddf]
            }
        }
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match &self.form {
            Form::Polynomial { p } => p.eval(u),
            Form::Rational { p, q } => p.eval(u) / q.eval(u),
        }
    }

    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        self.eval3(u)[1]
    }

    #[inline]
    pub fn d2f(&self, u: f64) -> f64 {
        self.eval3(u)[2]
    }

    /// Flux with the opposite sign. Upper envelopes of `F` are lower
    /// envelopes of `-F`.
    pub fn negated(&self) -> FluxFunction {
        let neg = |v: &[f64]| v.iter().map(|c| -c).collect::<Vec<_>>();
        match &self.form {
            Form::Polynomial { p } => FluxFunction::polynomial(&neg(p.coeffs())),
            Form::Rational { p, q } => FluxFunction::from_spec(FluxSpec::Rational {
                numerator: neg(p.coeffs()),
                denominator: q.coeffs().to_vec(),
            })
            .expect("negation keeps a valid rational"),
        }
    }

    /// Fails with [`Error::Domain`] when the denominator vanishes on `[lo, hi]`.
    pub fn check_interval(&self, lo: f64, hi: f64) -> Result<()> {
        let Form::Rational { q, .. } = &self.form else {
            return Ok(());
        };
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        const CELLS: usize = 2048;
        let mut prev = q.eval(lo);
        if prev.abs() <= DENOMINATOR_TOL {
            return Err(Error::Domain { u: lo });
        }
        for k in 1..=CELLS {
            let u = lo + (hi - lo) * k as f64 / CELLS as f64;
            let v = q.eval(u);
            if v.abs() <= DENOMINATOR_TOL || v.signum() != prev.signum() {
                return Err(Error::Domain { u });
            }
            prev = v;
        }
        Ok(())
    }
}

fn named_form(id: &str, params: &BTreeMap<String, f64>) -> Result<Form> {
    match id {
        "buckley-leverett" => {
            for key in params.keys() {
                if key != "M" {
                    return Err(Error::InvalidInput(format!(
                        "buckley-leverett takes only parameter M, got `{key}`"
                    )));
                }
            }
            let m = params
                .get("M")
                .copied()
                .unwrap_or(BUCKLEY_LEVERETT_DEFAULT_M);
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "buckley-leverett needs M > 0, got {m}"
                )));
            }
            Ok(Form::Rational {
                p: Polynomial::new(vec![0.0, 0.0, 1.0]),
                q: Polynomial::new(vec![m, -2.0 * m, 1.0 + m]),
            })
        }
        other => Err(Error::UnknownNamedFlux(other.to_string())),
    }
}

/// Parses the flux grammar described in the module docs.
pub fn parse_flux_spec(text: &str) -> Result<FluxFunction> {
    let mut p = Parser { text, pos: 0 };
    p.skip_ws();
    let kind = p.ident()?;
    p.expect(':')?;
    let spec = match kind.as_str() {
        "polynomial" => {
            let at = p.pos;
            let c = p.list()?;
            if c.is_empty() {
                return Err(p.error_at(at, "empty coefficient list"));
            }
            FluxSpec::Polynomial(c)
        }
        "rational" => {
            let at = p.pos;
            let numerator = p.list()?;
            p.skip_ws();
            p.expect('/')?;
            let denominator = p.list()?;
            if numerator.is_empty() || denominator.is_empty() {
                return Err(p.error_at(at, "empty coefficient list"));
            }
            if denominator.iter().all(|&c| c == 0.0) {
                return Err(p.error_at(at, "denominator is identically zero"));
            }
            FluxSpec::Rational {
                numerator,
                denominator,
            }
        }
        "named" => {
            p.skip_ws();
            let id = p.ident()?;
            p.skip_ws();
            let mut params = BTreeMap::new();
            if p.peek() == Some('{') {
                p.bump();
                loop {
                    p.skip_ws();
                    if p.peek() == Some('}') {
                        p.bump();
                        break;
                    }
                    let key = p.ident()?;
                    p.skip_ws();
                    p.expect(':')?;
                    let value = p.number()?;
                    params.insert(key, value);
                    p.skip_ws();
                    match p.bump() {
                        Some(',') => continue,
                        Some('}') => break,
                        _ => return Err(p.error_at(p.pos, "expected `,` or `}`")),
                    }
                }
            }
            if id != "buckley-leverett" {
                return Err(Error::UnknownNamedFlux(id));
            }
            FluxSpec::Named { id, params }
        }
        other => {
            return Err(p.error_at(0, &format!("unknown flux kind `{other}`")));
        }
    };
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error_at(p.pos, "trailing input"));
    }
    FluxFunction::from_spec(spec)
}

/// Shared number/list lexer, also used by the CLI's initial-data grammar.
pub(crate) struct Parser<'a> {
    pub(crate) text: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    pub(crate) fn error_at(&self, position: usize, message: &str) -> Error {
        Error::Parse {
            position,
            message: message.to_string(),
        }
    }

    pub(crate) fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error_at(self.pos, &format!("expected `{want}`"))),
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error_at(start, "expected identifier"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn scalar(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
        {
            self.bump();
        }
        let lexeme = &self.text[start..self.pos];
        match lexeme {
            "" => Err(self.error_at(start, "expected number")),
            "inf" => Ok(f64::INFINITY),
            _ => lexeme
                .parse::<f64>()
                .map_err(|_| self.error_at(start, &format!("invalid number `{lexeme}`"))),
        }
    }

    /// A decimal or a fraction `a/b`.
    pub(crate) fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let num = self.scalar()?;
        self.skip_ws();
        if self.peek() == Some('/') && self.text[self.pos + 1..].trim_start().starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.') {
            self.bump();
            let den = self.scalar()?;
            if den == 0.0 {
                return Err(self.error_at(start, "division by zero in fraction"));
            }
            return Ok(num / den);
        }
        Ok(num)
    }

    pub(crate) fn list(&mut self) -> Result<Vec<f64>> {
        self.expect('[')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(']') => return Ok(out),
                _ => return Err(self.error_at(self.pos, "expected `,` or `]`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> FluxFunction {
        parse_flux_spec("polynomial:[0,0,4,-4,1]").unwrap()
    }

    #[test]
    fn example1_values() {
        let f = example1();
        assert_eq!(f.evaluate(2.0, 0).unwrap(), 0.0);
        let d = f.evaluate(2.0 / 3.0, 1).unwrap();
        assert!((d - 32.0 / 27.0).abs() < 1e-14);
        for u in [-1.3, 0.2, 0.9, 1.7] {
            let closed = (u * u - 2.0 * u) * (u * u - 2.0 * u);
            assert!((f.f(u) - closed).abs() < 1e-13);
        }
    }

    #[test]
    fn buckley_leverett_parse_and_values() {
        let f = parse_flux_spec("named:buckley-leverett{M:0.5}").unwrap();
        assert_eq!(f.evaluate(1.0, 0).unwrap(), 1.0);
        for u in [0.1, 0.4, 0.77] {
            let closed = u * u / (u * u + 0.5 * (1.0 - u) * (1.0 - u));
            assert!((f.f(u) - closed).abs() < 1e-15);
        }
        let default = parse_flux_spec("named:buckley-leverett").unwrap();
        assert_eq!(default.f(0.3), f.f(0.3));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_flux_spec("polynomial:[]"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_flux_spec("named:burgers{}"),
            Err(Error::UnknownNamedFlux(_))
        ));
        assert!(matches!(
            parse_flux_spec("polynomial:[1,2"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_flux_spec("named:buckley-leverett{M:-1}"),
            Err(Error::InvalidInput(_))
        ));
        match parse_flux_spec("polynomial:[1,x]") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 14),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fractions_and_rational() {
        let f = parse_flux_spec("polynomial:[0, 0, 3, -5/3, 1/4]").unwrap();
        let u: f64 = 1.5;
        let closed = 0.25 * u.powi(4) - 5.0 / 3.0 * u.powi(3) + 3.0 * u * u;
        assert!((f.f(u) - closed).abs() < 1e-14);

        let r = parse_flux_spec("rational:[0,0,1]/[1,0,1]").unwrap();
        assert!((r.f(1.0) - 0.5).abs() < 1e-15);
        // d/du u^2/(1+u^2) = 2u/(1+u^2)^2
        assert!((r.df(1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_order_and_domain() {
        let f = example1();
        assert_eq!(f.evaluate(0.0, 3), Err(Error::InvalidOrder(3)));
        let r = parse_flux_spec("rational:[1]/[-1,1]").unwrap();
        assert!(matches!(r.evaluate(1.0, 0), Err(Error::Domain { .. })));
        assert!(r.check_interval(0.0, 2.0).is_err());
        assert!(r.check_interval(2.0, 3.0).is_ok());
    }

    #[test]
    fn polynomial_second_derivative_exact_on_integers() {
        // F = 4u^2 - 4u^3 + u^4, F'' = 8 - 24u + 12u^2
        let f = example1();
        for u in -5i32..=5 {
            let u = u as f64;
            assert_eq!(f.d2f(u), 8.0 - 24.0 * u + 12.0 * u * u);
            assert_eq!(f.df(u), 8.0 * u - 12.0 * u * u + 4.0 * u * u * u);
        }
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "polynomial:[0,0,4,-4,1]",
            "rational:[0,0,1]/[0.5,-1,1.5]",
            "named:buckley-leverett{M:0.5}",
        ] {
            let f = parse_flux_spec(text).unwrap();
            let again = parse_flux_spec(&f.spec().to_string()).unwrap();
            assert_eq!(f, again);
        }
    }
}
