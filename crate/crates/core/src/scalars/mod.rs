//! Exact scalar domains: the rationals `Q`, prime fields `F_p` and extension
//! fields `F_{p^e}` together with their Frobenius automorphisms.
//!
//! Every [`FieldElement`] carries a shared handle to its [`FieldCtx`].
//! Arithmetic between elements of different contexts panics; code that
//! accepts user data checks contexts up front and reports
//! [`Error::ContextMismatch`] instead.

pub(crate) mod fp_poly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest admissible characteristic; keeps residue products inside `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// Largest admissible finite field order.
pub const MAX_ORDER: u64 = 1 << 62;

/// Which scalar domain a context describes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime {
        p: u64,
    },
    /// `F_p[t]/(modulus)`; the modulus is monic and stored little-endian
    /// with `e + 1` coefficients.
    Extension {
        p: u64,
        e: u32,
        modulus: Vec<u64>,
    },
}

/// A scalar domain. Shared between elements through [`Field`].
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    kind: FieldKind,
}

pub type Field = Arc<FieldCtx>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// Splits `q = p^e` with `p` prime, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn checked_order(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{e}")))
}

impl FieldCtx {
    pub fn rational() -> Field {
        Arc::new(FieldCtx {
            kind: FieldKind::Rational,
        })
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(Error::FieldTooLarge(format!("characteristic {p}")));
        }
        Ok(Arc::new(FieldCtx {
            kind: FieldKind::Prime { p },
        }))
    }

    /// Extension of `F_p` by an explicit monic modulus (little-endian).
    /// A degree-1 modulus yields the prime field itself.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        let base = Self::prime(p)?;
        let e = modulus.len().saturating_sub(1);
        if e == 0 {
            return Err(Error::InvalidModulus("modulus must have degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficients must lie in [0, {p})"
            )));
        }
        if modulus[e] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus(format!(
                "{modulus:?} is reducible over F_{p}"
            )));
        }
        if e == 1 {
            return Ok(base);
        }
        checked_order(p, e as u32)?;
        Ok(Arc::new(FieldCtx {
            kind: FieldKind::Extension {
                p,
                e: e as u32,
                modulus,
            },
        }))
    }

    /// Parses `q`, `gf:p` or `gf:p^e`.
    pub fn from_spec(spec: &str) -> Result<Field> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("q") {
            return Ok(Self::rational());
        }
        let body = spec
            .strip_prefix("gf:")
            .or_else(|| spec.strip_prefix("GF:"))
            .ok_or_else(|| {
                Error::InvalidArgument(format!("field spec `{spec}`: expected q, gf:p or gf:p^e"))
            })?;
        let bad = || Error::InvalidArgument(format!("field spec `{spec}`"));
        match body.split_once('^') {
            None => Self::prime(body.parse().map_err(|_| bad())?),
            Some((p, e)) => make_extension(p.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?),
        }
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => p,
        }
    }

    /// Degree over the prime field (1 for `Q` and `F_p`).
    pub fn degree(&self) -> u32 {
        match self.kind {
            FieldKind::Extension { e, .. } => e,
            _ => 1,
        }
    }

    /// Cardinality, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rational => None,
            FieldKind::Prime { p } => Some(p),
            FieldKind::Extension { p, e, .. } => Some(p.pow(e)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &self.kind {
            FieldKind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Spec string accepted by [`FieldCtx::from_spec`].
    pub fn spec(&self) -> String {
        match self.kind {
            FieldKind::Rational => "q".into(),
            FieldKind::Prime { p } => format!("gf:{p}"),
            FieldKind::Extension { p, e, .. } => format!("gf:{p}^{e}"),
        }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime { p } => write!(f, "GF({p})"),
            FieldKind::Extension { p, e, modulus } => {
                write!(f, "GF({p}^{e}) mod {modulus:?}")
            }
        }
    }
}

/// `F_q` for a prime power `q`, built by [`make_extension`].
pub fn finite_field(q: u64) -> Result<Field> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    make_extension(p, e)
}

/// The extension of `F_p` of degree `e` whose modulus is the smallest monic
/// irreducible, comparing coefficient vectors from the constant term upward.
pub fn make_extension(p: u64, e: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    if e == 1 {
        return FieldCtx::prime(p);
    }
    let count = checked_order(p, e)?;
    // Candidate index i encodes (c_0, ..., c_{e-1}) with c_0 most significant.
    for idx in 0..count {
        let mut modulus = vec![0u64; e as usize + 1];
        let mut rest = idx;
        for slot in (0..e as usize).rev() {
            modulus[slot] = rest % p;
            rest /= p;
        }
        modulus[e as usize] = 1;
        if modulus[0] == 0 {
            continue;
        }
        if fp_poly::is_irreducible(&modulus, p) {
            return FieldCtx::extension(p, modulus);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Prime(u64),
    /// Exactly `e` little-endian coefficients.
    Ext(Vec<u64>),
}

/// An exact scalar tagged with its field.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Field,
    repr: Repr,
}

pub fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl FieldElement {
    pub fn zero(ctx: &Field) -> Self {
        Self::from_i64(ctx, 0)
    }

    pub fn one(ctx: &Field) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn from_i64(ctx: &Field, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    /// Image of an integer under the canonical map `Z -> K`.
    pub fn from_bigint(ctx: &Field, n: &BigInt) -> Self {
        let repr = match &ctx.kind {
            FieldKind::Rational => Repr::Rational(BigRational::from_integer(n.clone())),
            FieldKind::Prime { p } => Repr::Prime(reduce_bigint(n, *p)),
            FieldKind::Extension { p, e, .. } => {
                let mut v = vec![0; *e as usize];
                v[0] = reduce_bigint(n, *p);
                Repr::Ext(v)
            }
        };
        FieldElement {
            ctx: ctx.clone(),
            repr,
        }
    }

    /// Rational `num/den`; in positive characteristic the image of `num * den^-1`.
    pub fn from_ratio(ctx: &Field, num: &BigInt, den: &BigInt) -> Result<Self> {
        let d = Self::from_bigint(ctx, den);
        if d.is_zero() {
            return Err(Error::CoefficientNotInField(format!("{num}/{den}")));
        }
        Ok(&Self::from_bigint(ctx, num) / &d)
    }

    pub fn from_rational(ctx: &Field, r: &BigRational) -> Result<Self> {
        Self::from_ratio(ctx, r.numer(), r.denom())
    }

    /// Extension element from its little-endian coordinates. Prime fields
    /// accept a single coordinate.
    pub fn from_coeffs(ctx: &Field, coeffs: &[u64]) -> Result<Self> {
        let bad = || Error::CoefficientNotInField(format!("{coeffs:?}"));
        match &ctx.kind {
            FieldKind::Rational => Err(bad()),
            FieldKind::Prime { p } => match coeffs {
                [c] if c < p => Ok(FieldElement {
                    ctx: ctx.clone(),
                    repr: Repr::Prime(*c),
                }),
                _ => Err(bad()),
            },
            FieldKind::Extension { p, e, .. } => {
                if coeffs.len() != *e as usize || coeffs.iter().any(|c| c >= p) {
                    return Err(bad());
                }
                Ok(FieldElement {
                    ctx: ctx.clone(),
                    repr: Repr::Ext(coeffs.to_vec()),
                })
            }
        }
    }

    /// The `index`-th element of a finite field: the residue itself in
    /// `F_p`, and `sum c_i p^i` for extension coordinates.
    pub fn from_index(ctx: &Field, index: u64) -> Result<Self> {
        let q = ctx
            .order()
            .ok_or_else(|| Error::InfiniteField(ctx.to_string()))?;
        if index >= q {
            return Err(Error::InvalidArgument(format!("element index {index} >= {q}")));
        }
        let repr = match &ctx.kind {
            FieldKind::Prime { .. } => Repr::Prime(index),
            FieldKind::Extension { p, e, .. } => {
                let mut rest = index;
                Repr::Ext(
                    (0..*e)
                        .map(|_| {
                            let c = rest % p;
                            rest /= p;
                            c
                        })
                        .collect(),
                )
            }
            FieldKind::Rational => unreachable!(),
        };
        Ok(FieldElement {
            ctx: ctx.clone(),
            repr,
        })
    }

    /// Inverse of [`FieldElement::from_index`]; `None` over `Q`.
    pub fn index(&self) -> Option<u64> {
        match (&self.repr, &self.ctx.kind) {
            (Repr::Prime(c), _) => Some(*c),
            (Repr::Ext(v), FieldKind::Extension { p, .. }) => {
                Some(v.iter().rev().fold(0, |acc, &c| acc * p + c))
            }
            _ => None,
        }
    }

    /// Uniform element of a finite field.
    pub fn random<R: Rng + ?Sized>(ctx: &Field, rng: &mut R) -> Result<Self> {
        let q = ctx
            .order()
            .ok_or_else(|| Error::InfiniteField(ctx.to_string()))?;
        Self::from_index(ctx, rng.gen_range(0..q))
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_zero(),
            Repr::Prime(c) => *c == 0,
            Repr::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_one(),
            Repr::Prime(c) => *c == 1,
            Repr::Ext(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
        }
    }

    /// Value over `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Coordinates over the prime field (`[c]` for `F_p`).
    pub fn coords(&self) -> Option<Vec<u64>> {
        match &self.repr {
            Repr::Rational(_) => None,
            Repr::Prime(c) => Some(vec![*c]),
            Repr::Ext(v) => Some(v.clone()),
        }
    }

    /// True when the element lies in the prime subfield (`Q` or `F_p`).
    pub fn in_prime_subfield(&self) -> bool {
        match &self.repr {
            Repr::Ext(v) => v[1..].iter().all(|&c| c == 0),
            _ => true,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let repr = match (&self.repr, &self.ctx.kind) {
            (Repr::Rational(r), _) => Repr::Rational(r.recip()),
            (Repr::Prime(c), FieldKind::Prime { p }) => Repr::Prime(fp_poly::inv_mod(*c, *p)),
            (Repr::Ext(_), FieldKind::Extension { p, e, .. }) => {
                return Ok(self.pow(p.pow(*e) - 2));
            }
            _ => unreachable!("element representation matches its context"),
        };
        Ok(FieldElement {
            ctx: self.ctx.clone(),
            repr,
        })
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Power with a signed exponent; negative exponents invert first.
    pub fn powi(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        }
    }

    /// `a -> a^(p^r)`; the identity on `Q` and `F_p`.
    pub fn frobenius_pow(&self, r: u64) -> Self {
        match &self.ctx.kind {
            FieldKind::Extension { p, e, .. } => {
                let mut out = self.clone();
                for _ in 0..(r % *e as u64) {
                    out = out.pow(*p);
                }
                out
            }
            _ => self.clone(),
        }
    }

    fn check_same(&self, other: &Self) {
        assert!(
            same_field(&self.ctx, &other.ctx),
            "cross-context arithmetic between {} and {}",
            self.ctx,
            other.ctx
        );
    }

    fn with_repr(&self, repr: Repr) -> Self {
        FieldElement {
            ctx: self.ctx.clone(),
            repr,
        }
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// `a -> a^p` on an element of the given context.
pub fn frobenius(a: &FieldElement, ctx: &Field) -> Result<FieldElement> {
    if !same_field(&a.ctx, ctx) {
        return Err(Error::ContextMismatch(format!("{} vs {}", a.ctx, ctx)));
    }
    if !ctx.is_finite() {
        return Err(Error::InfiniteField(ctx.to_string()));
    }
    Ok(a.frobenius_pow(1))
}

/// Least `n >= 1` with `a^n = 1`.
pub fn element_order(a: &FieldElement) -> Result<u64> {
    let q = a
        .ctx
        .order()
        .ok_or_else(|| Error::InfiniteField(a.ctx.to_string()))?;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut order = q - 1;
    let mut n = q - 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            while n % f == 0 {
                n /= f;
            }
            while order % f == 0 && a.pow(order / f).is_one() {
                order /= f;
            }
        }
        f += 1;
    }
    if n > 1 && order % n == 0 && a.pow(order / n).is_one() {
        order /= n;
    }
    Ok(order)
}

/// Generator of the multiplicative group with the smallest index.
pub fn primitive_element(ctx: &Field) -> Result<FieldElement> {
    let q = ctx.order().ok_or_else(|| Error::InfiniteField(ctx.to_string()))?;
    for index in 1..q {
        let a = FieldElement::from_index(ctx, index)?;
        if element_order(&a)? == q - 1 {
            return Ok(a);
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.ctx, &other.ctx) && self.repr == other.repr
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Value order over `Q`, index order over finite fields.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            _ => self.index().cmp(&other.index()),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Integers print bare, fractions as `a/b`, extension elements as their
/// bracketed coordinate vector.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Prime(c) => write!(f, "{c}"),
            Repr::Ext(v) => {
                write!(f, "[")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        let repr = match (&self.repr, &rhs.repr, &self.ctx.kind) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a + b),
            (Repr::Prime(a), Repr::Prime(b), FieldKind::Prime { p }) => Repr::Prime((a + b) % p),
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { p, .. }) => {
                Repr::Ext(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            _ => unreachable!(),
        };
        self.with_repr(repr)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = match (&self.repr, &self.ctx.kind) {
            (Repr::Rational(a), _) => Repr::Rational(-a),
            (Repr::Prime(a), FieldKind::Prime { p }) => Repr::Prime((p - a) % p),
            (Repr::Ext(a), FieldKind::Extension { p, .. }) => {
                Repr::Ext(a.iter().map(|x| (p - x) % p).collect())
            }
            _ => unreachable!(),
        };
        self.with_repr(repr)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        let repr = match (&self.repr, &rhs.repr, &self.ctx.kind) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a - b),
            (Repr::Prime(a), Repr::Prime(b), FieldKind::Prime { p }) => {
                Repr::Prime((a + p - b) % p)
            }
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { p, .. }) => {
                Repr::Ext(a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect())
            }
            _ => unreachable!(),
        };
        self.with_repr(repr)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        let repr = match (&self.repr, &rhs.repr, &self.ctx.kind) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a * b),
            (Repr::Prime(a), Repr::Prime(b), FieldKind::Prime { p }) => Repr::Prime(a * b % p),
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { p, e, modulus }) => {
                let mut v = fp_poly::mul_mod(a, b, modulus, *p);
                v.resize(*e as usize, 0);
                Repr::Ext(v)
            }
            _ => unreachable!(),
        };
        self.with_repr(repr)
    }
}

/// Panics on division by zero.
impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
