//! The univariate case over `F_q`: irreducible counts, and the largest
//! minimal generating set of `(1)` obtained from the `m` lowest-degree
//! irreducibles `h_1, h_2, ...` as `f_i = prod_{j != i} h_j`.
//!
//! `h_j` divides `f_i` exactly when `i != j`, so each `f_i` is needed, and
//! the `f_i` are coprime as a whole. The degree of `f_1` is
//! `deg h_2 + ... + deg h_m`, which fixes the largest admissible `m`.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polynomials::{Monomial, MultiPoly};
use crate::scalars::{finite_field, prime_power, primitive_element, Field, FieldElement};

const MAX_TABLE_ORDER: u64 = 1 << 20;

/// `F_q` on element indices, with log tables for multiplication.
#[derive(Clone, Debug)]
struct SmallField {
    p: u32,
    e: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl SmallField {
    fn new(ctx: &Field) -> Result<Self> {
        let q = ctx.order().ok_or_else(|| Error::InfiniteField(ctx.to_string()))?;
        if q > MAX_TABLE_ORDER {
            return Err(Error::FieldTooLarge(format!("{q} exceeds {MAX_TABLE_ORDER} for univariate tables")));
        }
        let zeta = primitive_element(ctx)?;
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut power = FieldElement::one(ctx);
        for i in 0..q - 1 {
            let idx = power.index().expect("finite") as u32;
            exp.push(idx);
            log[idx as usize] = i as u32;
            power = &power * &zeta;
        }
        Ok(SmallField {
            p: ctx.characteristic() as u32,
            e: ctx.degree(),
            q: q as u32,
            exp,
            log,
        })
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }
}

/// Dense little-endian coefficients over a [`SmallField`]; zero is empty.
type Dense = Vec<u32>;

fn trim(mut a: Dense) -> Dense {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mul(f: &SmallField, a: &[u32], b: &[u32]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

fn rem(f: &SmallField, a: &[u32], b: &[u32]) -> Dense {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]);
    while r.len() > db {
        let c = f.mul(*r.last().expect("nonempty"), lead_inv);
        let shift = r.len() - 1 - db;
        let negc = f.neg(c);
        for (k, &y) in b.iter().enumerate() {
            r[shift + k] = f.add(r[shift + k], f.mul(negc, y));
        }
        r = trim(r);
    }
    r
}

fn gcd(f: &SmallField, a: &[u32], b: &[u32]) -> Dense {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead);
        a.iter_mut().for_each(|c| *c = f.mul(*c, inv));
    }
    a
}

fn is_one(a: &[u32]) -> bool {
    a == [1]
}

fn to_poly(ctx: &Field, a: &[u32]) -> MultiPoly {
    MultiPoly::from_terms(
        ctx,
        1,
        a.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| {
            (
                Monomial::new(vec![k as u32]),
                FieldElement::from_index(ctx, c as u64).expect("index below order"),
            )
        }),
    )
    .expect("same field")
}

fn from_poly(ctx: &Field, poly: &MultiPoly) -> Result<Dense> {
    if poly.nvars() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a univariate polynomial, got {} variables",
            poly.nvars()
        )));
    }
    if !crate::scalars::same_field(poly.ctx(), ctx) {
        return Err(Error::ContextMismatch(format!("{} vs {ctx}", poly.ctx())));
    }
    let deg = poly.degree().finite().map_or(0, |d| d as usize + 1);
    let mut out = vec![0u32; deg];
    for (m, c) in poly.terms() {
        out[m.exps()[0] as usize] = c.index().expect("finite field") as u32;
    }
    Ok(out)
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `k` over `F_q`:
/// `(1/k) sum_{e | k} mu(e) q^(k/e)`.
pub fn count_irreducibles(q: u64, k: u32) -> Result<BigUint> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if k == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let k = k as u64;
    let mut sum = BigInt::zero();
    for e in (1..=k).filter(|e| k % e == 0) {
        let term = BigInt::from(q).pow((k / e) as u32);
        match mobius(e) {
            1 => sum += term,
            -1 => sum -= term,
            _ => {}
        }
    }
    let (quot, r) = (&sum / BigInt::from(k), &sum % BigInt::from(k));
    debug_assert!(r.is_zero());
    Ok(quot.to_biguint().expect("count is nonnegative"))
}

/// Number of monic irreducibles of degree at most `n`.
pub fn cumulative_count(q: u64, n: u32) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for k in 1..=n {
        total += count_irreducibles(q, k)?;
    }
    Ok(total)
}

/// Yields monic irreducibles in order of degree, then lexicographically on
/// coefficients from `X^(k-1)` down to the constant term.
struct Sieve {
    field: SmallField,
    found: Vec<Dense>,
    degree: u32,
    cursor: u64,
}

impl Sieve {
    fn new(field: SmallField) -> Self {
        Sieve {
            field,
            found: Vec::new(),
            degree: 1,
            cursor: 0,
        }
    }

    fn next_irreducible(&mut self) -> &Dense {
        let q = self.field.q as u64;
        loop {
            if self.cursor == q.pow(self.degree) {
                self.degree += 1;
                self.cursor = 0;
            }
            let mut cand = Vec::with_capacity(self.degree as usize + 1);
            let mut rest = self.cursor;
            for _ in 0..self.degree {
                cand.push((rest % q) as u32);
                rest /= q;
            }
            cand.push(1);
            self.cursor += 1;
            let half = self.degree as usize / 2;
            let reducible = self
                .found
                .iter()
                .take_while(|h| h.len() - 1 <= half)
                .any(|h| rem(&self.field, &cand, h).is_empty());
            if !reducible {
                self.found.push(cand);
                return self.found.last().expect("just pushed");
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct IrreducibleTable {
    pub q: u64,
    pub field: Field,
    /// Monic entries `h_1, h_2, ...` as polynomials in `X1`.
    pub entries: Vec<MultiPoly>,
    /// `counts_by_degree[k]` is the number of entries of degree `k`.
    pub counts_by_degree: Vec<u64>,
}

impl IrreducibleTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn from_dense(q: u64, field: Field, dense: &[Dense]) -> Self {
        let mut counts = vec![0u64];
        for h in dense {
            let k = h.len() - 1;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        IrreducibleTable {
            q,
            entries: dense.iter().map(|h| to_poly(&field, h)).collect(),
            field,
            counts_by_degree: counts,
        }
    }
}

/// The first `need` monic irreducibles over `F_q`.
pub fn enumerate_irreducibles(q: u64, need: usize) -> Result<IrreducibleTable> {
    let field = finite_field(q)?;
    let mut sieve = Sieve::new(SmallField::new(&field)?);
    for _ in 0..need {
        sieve.next_irreducible();
    }
    Ok(IrreducibleTable::from_dense(q, field, &sieve.found))
}

/// Every monic irreducible over `F_q` of degree at most `max_degree`.
pub fn enumerate_irreducibles_up_to(q: u64, max_degree: u32) -> Result<IrreducibleTable> {
    let field = finite_field(q)?;
    let mut sieve = Sieve::new(SmallField::new(&field)?);
    let mut kept = 0;
    loop {
        if sieve.next_irreducible().len() - 1 > max_degree as usize {
            break;
        }
        kept += 1;
    }
    Ok(IrreducibleTable::from_dense(q, field, &sieve.found[..kept]))
}

#[derive(Clone, Debug)]
pub struct ExtremalReport {
    pub q: u64,
    pub d: u32,
    pub m: usize,
    /// `deg h_1, ..., deg h_m`.
    pub degrees_used: Vec<u32>,
    pub irreducibles: Vec<MultiPoly>,
    /// `f_i = prod_{j != i} h_j`.
    pub generators: Vec<MultiPoly>,
    /// `deg f_1`.
    pub max_degree: u32,
    /// `m = 1`, where the only generator is `1`.
    pub degenerate: bool,
}

/// Largest `m` with `deg h_2 + ... + deg h_m <= d`, and the corresponding
/// generators.
pub fn extremal_set(q: u64, d: u32) -> Result<ExtremalReport> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree bound must be >= 1".into()));
    }
    let ctx = finite_field(q)?;
    let field = SmallField::new(&ctx)?;
    let mut sieve = Sieve::new(field.clone());
    sieve.next_irreducible();
    let mut budget_used = 0u32;
    loop {
        let deg = sieve.next_irreducible().len() as u32 - 1;
        if budget_used + deg > d {
            sieve.found.pop();
            break;
        }
        budget_used += deg;
    }
    let hs = sieve.found;
    let m = hs.len();
    let one: Dense = vec![1];
    let mut prefix = vec![one.clone()];
    for h in &hs {
        let next = mul(&field, prefix.last().expect("nonempty"), h);
        prefix.push(next);
    }
    let mut suffix = vec![one; m + 1];
    for i in (0..m).rev() {
        suffix[i] = mul(&field, &suffix[i + 1], &hs[i]);
    }
    let generators = (0..m)
        .map(|i| to_poly(&ctx, &mul(&field, &prefix[i], &suffix[i + 1])))
        .collect();
    Ok(ExtremalReport {
        q,
        d,
        m,
        degrees_used: hs.iter().map(|h| h.len() as u32 - 1).collect(),
        irreducibles: hs.iter().map(|h| to_poly(&ctx, h)).collect(),
        generators,
        max_degree: budget_used,
        degenerate: m == 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityVerdict {
    /// `gcd` of all generators is 1.
    pub generates_unit: bool,
    /// Unit ideal, and no generator can be dropped.
    pub minimal: bool,
    /// First index whose removal still leaves `gcd = 1`.
    pub redundant: Option<usize>,
}

/// Euclidean check that `gens` minimally generate `(1)` in `F_q[X]`.
pub fn verify_univariate_minimality(gens: &[MultiPoly]) -> Result<MinimalityVerdict> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidArgument("empty generator list".into()));
    };
    let ctx = first.ctx().clone();
    let field = SmallField::new(&ctx)?;
    let dense = gens.iter().map(|g| from_poly(&ctx, g)).collect::<Result<Vec<_>>>()?;
    let m = dense.len();
    let mut prefix: Vec<Dense> = vec![Vec::new()];
    for g in &dense {
        let next = gcd(&field, prefix.last().expect("nonempty"), g);
        prefix.push(next);
    }
    let generates_unit = is_one(&prefix[m]);
    let mut suffix: Vec<Dense> = vec![Vec::new(); m + 1];
    for i in (0..m).rev() {
        suffix[i] = gcd(&field, &suffix[i + 1], &dense[i]);
    }
    let redundant = (0..m).find(|&i| is_one(&gcd(&field, &prefix[i], &suffix[i + 1])));
    Ok(MinimalityVerdict {
        generates_unit,
        minimal: generates_unit && redundant.is_none(),
        redundant,
    })
}
