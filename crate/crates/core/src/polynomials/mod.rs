//! Sparse exact multivariate polynomials over a [`Field`].

mod monomial;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use monomial::{binomial, monomials_of_degree, monomials_up_to, Monomial};
pub use parse::{parse_element, parse_poly};

use crate::error::{Error, Result};
use crate::scalars::{same_field, Field, FieldElement, FieldKind};

/// Total degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }

    /// True unless the degree is finite and exceeds `bound`.
    pub fn at_most(self, bound: u32) -> bool {
        self <= Degree::Finite(bound)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A point of `K^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Point {
    ctx: Field,
    coords: Vec<FieldElement>,
}

impl Point {
    pub fn new(ctx: &Field, coords: Vec<FieldElement>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !same_field(c.ctx(), ctx)) {
            return Err(Error::ContextMismatch(format!(
                "coordinate {bad} lies in {}, point in {ctx}",
                bad.ctx()
            )));
        }
        Ok(Point {
            ctx: ctx.clone(),
            coords,
        })
    }

    pub fn from_i64(ctx: &Field, coords: &[i64]) -> Self {
        Point {
            ctx: ctx.clone(),
            coords: coords.iter().map(|&c| FieldElement::from_i64(ctx, c)).collect(),
        }
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate-wise `a -> a^(p^r)`.
    pub fn frobenius_pow(&self, r: u64) -> Point {
        Point {
            ctx: self.ctx.clone(),
            coords: self.coords.iter().map(|c| c.frobenius_pow(r)).collect(),
        }
    }

    /// Values of all monomials of degree `<= d` at this point, in column order.
    pub fn monomial_values(&self, d: u32) -> Vec<FieldElement> {
        let powers = self.powers(d);
        monomials_up_to(self.nvars(), d)
            .iter()
            .map(|m| monomial_value(&self.ctx, &powers, m))
            .collect()
    }

    fn powers(&self, max: u32) -> Vec<Vec<FieldElement>> {
        self.coords
            .iter()
            .map(|c| {
                let mut row = Vec::with_capacity(max as usize + 1);
                row.push(FieldElement::one(&self.ctx));
                for k in 1..=max as usize {
                    let next = &row[k - 1] * c;
                    row.push(next);
                }
                row
            })
            .collect()
    }
}

fn monomial_value(ctx: &Field, powers: &[Vec<FieldElement>], m: &Monomial) -> FieldElement {
    m.exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(FieldElement::one(ctx), |acc, (i, &e)| &acc * &powers[i][e as usize])
}

/// Sparse polynomial: monomial to nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ctx: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(ctx: &Field, nvars: usize) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Field, nvars: usize, c: FieldElement) -> Self {
        Self::monomial(ctx, Monomial::one(nvars), c)
    }

    pub fn one(ctx: &Field, nvars: usize) -> Self {
        Self::constant(ctx, nvars, FieldElement::one(ctx))
    }

    /// The variable `X_{i+1}`.
    pub fn var(ctx: &Field, nvars: usize, i: usize) -> Self {
        Self::monomial(ctx, Monomial::var(nvars, i), FieldElement::one(ctx))
    }

    pub fn monomial(ctx: &Field, m: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(ctx, m.nvars());
        p.add_term(m, c);
        p
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I>(ctx: &Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut p = Self::zero(ctx, nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "monomial {m} has {} variables, expected {nvars}",
                    m.nvars()
                )));
            }
            if !same_field(c.ctx(), ctx) {
                return Err(Error::ContextMismatch(format!("coefficient {c} not in {ctx}")));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Inverse of [`MultiPoly::coefficient_vector`].
    pub fn from_coefficient_vector(
        ctx: &Field,
        nvars: usize,
        d: u32,
        coeffs: &[FieldElement],
    ) -> Result<Self> {
        let basis = monomials_up_to(nvars, d);
        if basis.len() != coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                basis.len()
            )));
        }
        Self::from_terms(ctx, nvars, basis.into_iter().zip(coeffs.iter().cloned()))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    /// Terms in column order (`1, X1, X2, X1^2, X1X2, ...`), the canonical
    /// serialization order.
    pub fn terms_column_order(&self) -> Vec<(&Monomial, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.column_cmp(b.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.ctx))
    }

    /// Largest term under graded-lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |m| Degree::Finite(m.degree()))
    }

    /// Nonzero with all terms of one total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => false,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if !same_field(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch(format!("{} vs {}", self.ctx, other.ctx)));
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &MultiPoly) {
        if let Err(e) = self.check_compatible(other) {
            panic!("incompatible polynomial operands: {e}");
        }
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.ctx, self.nvars);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.ctx, self.nvars);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.ctx, self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `point`; evaluation is a ring homomorphism `K[X] -> K`.
    pub fn evaluate(&self, point: &Point) -> Result<FieldElement> {
        if !same_field(&self.ctx, point.ctx()) {
            return Err(Error::ContextMismatch(format!(
                "polynomial over {} evaluated at point over {}",
                self.ctx,
                point.ctx()
            )));
        }
        if point.nvars() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{}-variate polynomial at a point of K^{}",
                self.nvars,
                point.nvars()
            )));
        }
        let max = self
            .terms
            .keys()
            .flat_map(|m| m.exps().iter().copied())
            .max()
            .unwrap_or(0);
        let powers = point.powers(max);
        Ok(self.terms.iter().fold(FieldElement::zero(&self.ctx), |acc, (m, c)| {
            &acc + &(c * &monomial_value(&self.ctx, &powers, m))
        }))
    }

    /// Sum of the terms of total degree exactly `k`.
    pub fn degree_part(&self, k: u32) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficients of all `C(n+d, d)` monomials of degree `<= d`, in column order.
    pub fn coefficient_vector(&self, d: u32) -> Result<Vec<FieldElement>> {
        if let Degree::Finite(deg) = self.degree() {
            if deg > d {
                return Err(Error::DegreeOverflow { degree: deg, bound: d });
            }
        }
        Ok(monomials_up_to(self.nvars, d).iter().map(|m| self.coeff(m)).collect())
    }

    /// Applies `a -> a^(p^r)` to every coefficient.
    pub fn galois_apply(&self, r: u64) -> Result<MultiPoly> {
        if !matches!(self.ctx.kind(), FieldKind::Extension { .. }) {
            return Err(Error::NotExtension(self.ctx.to_string()));
        }
        self.map_coefficients(&self.ctx, |c| Ok(c.frobenius_pow(r)))
    }

    /// Rewrites every coefficient into `target` (zero images are dropped).
    pub fn map_coefficients<F>(&self, target: &Field, mut f: F) -> Result<MultiPoly>
    where
        F: FnMut(&FieldElement) -> Result<FieldElement>,
    {
        let mut out = Self::zero(target, self.nvars);
        for (m, c) in &self.terms {
            let image = f(c)?;
            if !same_field(image.ctx(), target) {
                return Err(Error::ContextMismatch(format!("image {image} not in {target}")));
            }
            out.add_term(m.clone(), image);
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        Ok(self * other)
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = MultiPoly::zero(&self.ctx, self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders leading term first in the grammar accepted by [`parse_poly`].
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.as_rational() {
                Some(r) if r < &num_rational::BigRational::from_integer(0.into()) => (true, -c),
                _ => (false, c.clone()),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if is_const {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_extension, FieldCtx};

    fn q() -> Field {
        FieldCtx::rational()
    }

    fn p(text: &str, n: usize, ctx: &Field) -> MultiPoly {
        parse_poly(text, n, ctx).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let ctx = q();
        let any = Point::from_i64(&ctx, &[3, -7]);
        assert!(MultiPoly::one(&ctx, 2).evaluate(&any).unwrap().is_one());
        assert!(p("X1*X2", 2, &ctx)
            .evaluate(&Point::from_i64(&ctx, &[1, 1]))
            .unwrap()
            .is_one());
        let f = p("(X1+X2-1)*(X1+X2-2)", 2, &ctx);
        assert_eq!(
            f.evaluate(&Point::from_i64(&ctx, &[0, 0])).unwrap(),
            FieldElement::from_i64(&ctx, 2)
        );
    }

    #[test]
    fn evaluate_rejects_mismatches() {
        let f = p("X1", 1, &q());
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(matches!(
            f.evaluate(&Point::from_i64(&f5, &[1])),
            Err(Error::ContextMismatch(_))
        ));
        assert!(matches!(
            f.evaluate(&Point::from_i64(&q(), &[1, 2])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn degree_parts() {
        let ctx = q();
        let f = p("X1^2 + X2", 2, &ctx);
        assert_eq!(f.degree_part(2), p("X1^2", 2, &ctx));
        assert_eq!(f.degree_part(1), p("X2", 2, &ctx));
        assert!(f.degree_part(0).is_zero());
        assert_eq!(MultiPoly::zero(&ctx, 2).degree(), Degree::NegInfinity);
        assert_eq!(f.degree(), Degree::Finite(2));
    }

    #[test]
    fn coefficient_vectors() {
        let ctx = q();
        let v = |f: &str, d| -> Vec<String> {
            p(f, 2, &ctx)
                .coefficient_vector(d)
                .unwrap()
                .iter()
                .map(|c| c.to_string())
                .collect()
        };
        assert_eq!(v("1", 1), ["1", "0", "0"]);
        assert_eq!(v("X1+2*X2", 1), ["0", "1", "2"]);
        assert_eq!(v("X1*X2", 2), ["0", "0", "0", "0", "1", "0"]);
        assert_eq!(
            p("X1^2", 2, &ctx).coefficient_vector(1),
            Err(Error::DegreeOverflow { degree: 2, bound: 1 })
        );
    }

    #[test]
    fn galois_apply_examples() {
        let f4 = make_extension(2, 2).unwrap();
        let f = p("X1 + [0,1]", 1, &f4);
        assert_eq!(f.galois_apply(1).unwrap(), p("X1 + [1,1]", 1, &f4));
        assert_eq!(f.galois_apply(2).unwrap(), f);
        let fixed = p("X1^2 + 1", 1, &f4);
        assert_eq!(fixed.galois_apply(1).unwrap(), fixed);
        assert!(matches!(
            p("X1", 1, &q()).galois_apply(1),
            Err(Error::NotExtension(_))
        ));
    }

    #[test]
    fn render_parse_round_trip_examples() {
        let ctx = q();
        for s in ["X1*X2 - 2", "-3/2*X1^2 + X2 - 1/7", "0", "-X1"] {
            let f = p(s, 2, &ctx);
            assert_eq!(p(&f.to_string(), 2, &ctx), f, "{s}");
        }
        assert_eq!(p("X1*X2 - 2", 2, &ctx).to_string(), "X1*X2 - 2");
    }
}
