//! Explicit dual certificates built from products of linear forms.
//!
//! Each `f_P` is a product of `d` linear factors, each vanishing on a line
//! (or hyperplane) through some of the other points, arranged so that every
//! point other than `P` is covered.

use num_bigint::BigInt;

use crate::dual_certificates::{verify_certificate, DualCertificate};
use crate::error::{Error, Result};
use crate::polynomials::{monomials_up_to, MultiPoly, Point};
use crate::scalars::{same_field, Field, FieldElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Char0Simplex,
    QAnalogLine,
    TwoVarTriangle,
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub family: Family,
    /// Named field parameters: `zeta`, or `x` and `y`.
    pub parameters: Vec<(&'static str, FieldElement)>,
    pub certificate: DualCertificate,
    /// Linear factors of each polynomial, in the order they are multiplied.
    pub factors: Vec<Vec<MultiPoly>>,
}

fn product(ctx: &Field, n: usize, factors: &[MultiPoly]) -> MultiPoly {
    factors
        .iter()
        .fold(MultiPoly::one(ctx, n), |acc, f| &acc * f)
}

fn finish(
    family: Family,
    parameters: Vec<(&'static str, FieldElement)>,
    ctx: &Field,
    n: usize,
    d: u32,
    points: Vec<Point>,
    factors: Vec<Vec<MultiPoly>>,
) -> ConstructionResult {
    let polys: Vec<MultiPoly> = factors.iter().map(|fs| product(ctx, n, fs)).collect();
    let diagonal = polys
        .iter()
        .zip(&points)
        .map(|(f, p)| f.evaluate(p).expect("same field"))
        .collect();
    let certificate = DualCertificate {
        ctx: ctx.clone(),
        n,
        d,
        points,
        polys,
        diagonal,
    };
    debug_assert!(verify_certificate(&certificate).valid);
    ConstructionResult {
        family,
        parameters,
        certificate,
        factors,
    }
}

fn constant(ctx: &Field, n: usize, c: FieldElement) -> MultiPoly {
    MultiPoly::constant(ctx, n, c)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * i)
}

/// `(-1)^(d-f) (d-f)! prod d_i!` with `f = sum d_i`: the value of the
/// simplex polynomial at its own point.
pub fn simplex_diagonal(d: u32, point: &[u32]) -> BigInt {
    let f: u32 = point.iter().sum();
    let sign = if (d - f) % 2 == 0 { 1 } else { -1 };
    point
        .iter()
        .fold(factorial(d - f) * sign, |acc, &di| acc * factorial(di))
}

/// Points `(d_1..d_n)` in `N^n` with `sum d_i <= d`, and
/// `f_P = prod_i prod_{j<d_i} (X_i - j) * prod_{f<i<=d} (X - i)` where
/// `X = X_1 + ... + X_n` and `f = sum d_i`.
pub fn char0_simplex(n: usize, d: u32, ctx: &Field) -> Result<ConstructionResult> {
    if ctx.characteristic() != 0 {
        return Err(Error::PositiveCharacteristic(ctx.characteristic()));
    }
    let c = |v: i64| constant(ctx, n, FieldElement::from_i64(ctx, v));
    let sum = (0..n).fold(MultiPoly::zero(ctx, n), |acc, i| &acc + &MultiPoly::var(ctx, n, i));
    let mut points = Vec::new();
    let mut factors = Vec::new();
    for m in monomials_up_to(n, d) {
        let exps = m.exps();
        let mut fs = Vec::new();
        for (i, &di) in exps.iter().enumerate() {
            for j in 0..di {
                fs.push(&MultiPoly::var(ctx, n, i) - &c(j as i64));
            }
        }
        let f = m.degree();
        for i in f + 1..=d {
            fs.push(&sum - &c(i as i64));
        }
        let coords: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
        points.push(Point::from_i64(ctx, &coords));
        factors.push(fs);
    }
    Ok(finish(Family::Char0Simplex, Vec::new(), ctx, n, d, points, factors))
}

/// `alpha_i = (1 - zeta^i) / (1 - zeta)` for `i = 0..=d`, with the
/// Lagrange-type products `f_i = prod_{j != i} (X - alpha_j)`.
pub fn q_analog_line(d: u32, zeta: &FieldElement) -> Result<ConstructionResult> {
    let ctx = zeta.ctx().clone();
    let one = FieldElement::one(&ctx);
    if zeta.is_one() {
        return Err(Error::InvalidArgument("zeta must differ from 1".into()));
    }
    let denom = (&one - zeta).inv()?;
    let mut alphas: Vec<FieldElement> = Vec::with_capacity(d as usize + 1);
    let mut power = one.clone();
    for i in 0..=d {
        let alpha = &(&one - &power) * &denom;
        if let Some(j) = alphas.iter().position(|a| *a == alpha) {
            return Err(Error::OrderTooSmall { i: j as u32, j: i });
        }
        alphas.push(alpha);
        power = &power * zeta;
    }
    let x = MultiPoly::var(&ctx, 1, 0);
    let factors = (0..alphas.len())
        .map(|i| {
            alphas
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, a)| &x - &constant(&ctx, 1, a.clone()))
                .collect()
        })
        .collect();
    let points = alphas
        .into_iter()
        .map(|a| Point::new(&ctx, vec![a]).expect("same field"))
        .collect();
    Ok(finish(
        Family::QAnalogLine,
        vec![("zeta", zeta.clone())],
        &ctx,
        1,
        d,
        points,
        factors,
    ))
}

/// `P_ij = ((x^i - y^i)/x^i, (x^j - y^j)/y^j)` for `i + j <= d`, with
/// `f_ij` the product of the row lines `i' < i`, the column lines `j' < j`
/// and the diagonal lines `x^k X + y^k Y = x^k - y^k` for `i + j < k <= d`.
pub fn two_var_triangle(d: u32, x: &FieldElement, y: &FieldElement) -> Result<ConstructionResult> {
    let ctx = x.ctx().clone();
    if !same_field(y.ctx(), &ctx) {
        return Err(Error::ContextMismatch(format!("{} vs {}", x.ctx(), y.ctx())));
    }
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroElement);
    }
    for m in 1..=d {
        if x.pow(m as u64) == y.pow(m as u64) {
            return Err(Error::PowerCollision { m });
        }
    }
    let xp = |k: u32| x.pow(k as u64);
    let yp = |k: u32| y.pow(k as u64);
    let c = |v: FieldElement| constant(&ctx, 2, v);
    let (vx, vy) = (MultiPoly::var(&ctx, 2, 0), MultiPoly::var(&ctx, 2, 1));
    let row = |i: u32| &vx.scale(&xp(i)) - &c(&xp(i) - &yp(i));
    let col = |j: u32| &vy.scale(&yp(j)) - &c(&xp(j) - &yp(j));
    let diag = |k: u32| &(&vx.scale(&xp(k)) + &vy.scale(&yp(k))) - &c(&xp(k) - &yp(k));
    let mut points = Vec::new();
    let mut factors = Vec::new();
    for m in monomials_up_to(2, d) {
        let (i, j) = (m.exps()[0], m.exps()[1]);
        let px = &(&xp(i) - &yp(i)) / &xp(i);
        let py = &(&xp(j) - &yp(j)) / &yp(j);
        points.push(Point::new(&ctx, vec![px, py]).expect("same field"));
        let mut fs: Vec<MultiPoly> = (0..i).map(row).collect();
        fs.extend((0..j).map(col));
        fs.extend((i + j + 1..=d).map(diag));
        factors.push(fs);
    }
    Ok(finish(
        Family::TwoVarTriangle,
        vec![("x", x.clone()), ("y", y.clone())],
        &ctx,
        2,
        d,
        points,
        factors,
    ))
}

/// Closed form of `f_ij(P_ij)`:
/// `prod_{i'<i} (y^i' - x^(i'-i) y^i) * prod_{j'<j} (y^(j'-j) x^j - x^j')
///  * prod_{i+j<k<=d} (y^(k-j) x^j - x^(k-i) y^i)`.
pub fn triangle_diagonal(d: u32, i: u32, j: u32, x: &FieldElement, y: &FieldElement) -> FieldElement {
    let pw = |a: &FieldElement, e: i64| a.powi(e).expect("nonzero");
    let (i, j, d) = (i as i64, j as i64, d as i64);
    let mut acc = FieldElement::one(x.ctx());
    for ip in 0..i {
        acc = &acc * &(&pw(y, ip) - &(&pw(x, ip - i) * &pw(y, i)));
    }
    for jp in 0..j {
        acc = &acc * &(&(&pw(y, jp - j) * &pw(x, j)) - &pw(x, jp));
    }
    for k in i + j + 1..=d {
        acc = &acc * &(&(&pw(y, k - j) * &pw(x, j)) - &(&pw(x, k - i) * &pw(y, i)));
    }
    acc
}
