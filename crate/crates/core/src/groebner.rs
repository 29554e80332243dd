//! Small-scale ground truth: reduced Gröbner bases under graded-lex,
//! normal forms, ideal membership and ideal equality.
//!
//! This is a plain Buchberger loop with the normal selection strategy and
//! Buchberger's two criteria. It is meant for tests and verification, and
//! refuses inputs beyond hard size caps.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::polynomials::{Monomial, MultiPoly};
use crate::scalars::{same_field, Field, FieldElement};

/// Size limits enforced by the oracle.
#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    pub max_vars: usize,
    pub max_input_terms: usize,
    pub max_basis: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_vars: 3,
            max_input_terms: 256,
            max_basis: 400,
        }
    }
}

/// Reduced, monic Gröbner basis (graded-lex), sorted by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ctx: Field,
    nvars: usize,
    basis: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].degree() == crate::Degree::Finite(0)
    }

    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        check_poly(&self.ctx, self.nvars, f)?;
        Ok(normal_form(f, &self.basis))
    }
}

fn lm(f: &MultiPoly) -> &Monomial {
    f.leading_term().expect("nonzero polynomial").0
}

fn monic(f: &MultiPoly) -> MultiPoly {
    let lc = f.leading_term().expect("nonzero polynomial").1;
    f.scale(&lc.inv().expect("nonzero leading coefficient"))
}

fn check_poly(ctx: &Field, nvars: usize, f: &MultiPoly) -> Result<()> {
    if !same_field(f.ctx(), ctx) {
        return Err(Error::ContextMismatch(format!("{} vs {ctx}", f.ctx())));
    }
    if f.nvars() != nvars {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {nvars} variables",
            f.nvars()
        )));
    }
    Ok(())
}

/// Full reduction of `f` by `basis` (every term, not only the leading one).
pub fn normal_form(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let mut rem = MultiPoly::zero(f.ctx(), f.nvars());
    let mut p = f.clone();
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| lm(g).divides(&m)) {
            Some(g) => {
                let (gm, gc) = g.leading_term().expect("nonzero");
                let factor = &c / gc;
                p = &p - &g.mul_monomial(&gm.quotient(&m), &factor);
            }
            None => {
                let lead = MultiPoly::monomial(f.ctx(), m, c);
                rem = &rem + &lead;
                p = &p - &lead;
            }
        }
    }
    rem
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_monomial(&fm.quotient(&l), &fc.inv().expect("nonzero"));
    let b = g.mul_monomial(&gm.quotient(&l), &gc.inv().expect("nonzero"));
    &a - &b
}

pub fn buchberger(ctx: &Field, nvars: usize, gens: &[MultiPoly]) -> Result<GroebnerBasis> {
    buchberger_with_caps(ctx, nvars, gens, OracleCaps::default())
}

pub fn buchberger_with_caps(
    ctx: &Field,
    nvars: usize,
    gens: &[MultiPoly],
    caps: OracleCaps,
) -> Result<GroebnerBasis> {
    if nvars > caps.max_vars {
        return Err(Error::OracleCap(format!(
            "{nvars} variables (cap {})",
            caps.max_vars
        )));
    }
    for g in gens {
        check_poly(ctx, nvars, g)?;
    }
    let terms: usize = gens.iter().map(MultiPoly::num_terms).sum();
    if terms > caps.max_input_terms {
        return Err(Error::OracleCap(format!(
            "{terms} input terms (cap {})",
            caps.max_input_terms
        )));
    }

    let mut g: Vec<MultiPoly> = gens.iter().filter(|f| !f.is_zero()).map(monic).collect();
    let mut pending: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pending.insert((lm(&g[i]).lcm(lm(&g[j])), i, j));
        }
    }
    // Normal selection: smallest lcm first.
    while let Some(pair) = pending.pop_first() {
        let (l, i, j) = pair;
        let (mi, mj) = (lm(&g[i]), lm(&g[j]));
        // first criterion: coprime leading monomials
        if mi.mul(mj) == l {
            continue;
        }
        // second criterion: some k whose pairs with i and j are both done
        let done = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            !pending.contains(&(lm(&g[a]).lcm(lm(&g[b])), a, b))
        };
        if (0..g.len()).any(|k| k != i && k != j && lm(&g[k]).divides(&l) && done(i, k) && done(j, k)) {
            continue;
        }
        let s = normal_form(&s_polynomial(&g[i], &g[j]), &g);
        if s.is_zero() {
            continue;
        }
        if g.len() >= caps.max_basis {
            return Err(Error::OracleCap(format!(
                "intermediate basis exceeds {} elements",
                caps.max_basis
            )));
        }
        let new = monic(&s);
        let k = g.len();
        for (i, h) in g.iter().enumerate() {
            pending.insert((lm(h).lcm(lm(&new)), i, k));
        }
        g.push(new);
    }

    // Minimalize, then inter-reduce.
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (i, f) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(k, h)| {
            k != i && lm(h).divides(lm(f)) && (lm(h) != lm(f) || k < i)
        });
        if !redundant {
            minimal.push(f.clone());
        }
    }
    let mut reduced: Vec<MultiPoly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<MultiPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, h)| h.clone())
                .collect();
            let lead = MultiPoly::monomial(
                ctx,
                lm(&minimal[i]).clone(),
                FieldElement::one(ctx),
            );
            let tail = &minimal[i] - &lead;
            &lead + &normal_form(&tail, &others)
        })
        .collect();
    reduced.sort_by(|a, b| lm(a).cmp(lm(b)));
    Ok(GroebnerBasis {
        ctx: ctx.clone(),
        nvars,
        basis: reduced,
    })
}

/// `f` lies in the ideal iff its normal form vanishes.
pub fn membership(f: &MultiPoly, gb: &GroebnerBasis) -> Result<bool> {
    Ok(gb.normal_form(f)?.is_zero())
}

/// Equality of the ideals generated by `a` and `b`.
pub fn ideal_equal(ctx: &Field, nvars: usize, a: &[MultiPoly], b: &[MultiPoly]) -> Result<bool> {
    let ga = buchberger(ctx, nvars, a)?;
    let gb = buchberger(ctx, nvars, b)?;
    for f in b {
        if !membership(f, &ga)? {
            return Ok(false);
        }
    }
    for f in a {
        if !membership(f, &gb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ideal containment `(a) ⊆ (b)`.
pub fn ideal_contained(ctx: &Field, nvars: usize, a: &[MultiPoly], b: &[MultiPoly]) -> Result<bool> {
    let gb = buchberger(ctx, nvars, b)?;
    for f in a {
        if !membership(f, &gb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::parse_poly;
    use crate::scalars::FieldCtx;

    fn polys(ctx: &Field, n: usize, texts: &[&str]) -> Vec<MultiPoly> {
        texts.iter().map(|t| parse_poly(t, n, ctx).unwrap()).collect()
    }

    #[test]
    fn buchberger_examples() {
        let q = FieldCtx::rational();
        let gb = buchberger(&q, 2, &polys(&q, 2, &["X1^2 + X2", "X1^2"])).unwrap();
        assert_eq!(gb.basis(), polys(&q, 2, &["X2", "X1^2"]).as_slice());
        let gb = buchberger(&q, 2, &polys(&q, 2, &["X1", "X2"])).unwrap();
        assert_eq!(gb.basis(), polys(&q, 2, &["X2", "X1"]).as_slice());
        let gb = buchberger(&q, 1, &polys(&q, 1, &["1", "X1"])).unwrap();
        assert_eq!(gb.basis(), polys(&q, 1, &["1"]).as_slice());
        assert!(gb.is_unit_ideal());
    }

    #[test]
    fn membership_examples() {
        let q = FieldCtx::rational();
        let gb = buchberger(&q, 2, &polys(&q, 2, &["X1^2 + X2", "X1^2"])).unwrap();
        assert!(membership(&parse_poly("X2", 2, &q).unwrap(), &gb).unwrap());
        let gb = buchberger(&q, 1, &polys(&q, 1, &["X1^2"])).unwrap();
        assert!(!membership(&parse_poly("X1", 1, &q).unwrap(), &gb).unwrap());
        assert!(membership(&MultiPoly::zero(&q, 1), &gb).unwrap());
    }

    #[test]
    fn ideal_equality_examples() {
        let q = FieldCtx::rational();
        assert!(ideal_equal(
            &q,
            2,
            &polys(&q, 2, &["X1^2 + X2", "X1^2"]),
            &polys(&q, 2, &["X2", "X1^2"])
        )
        .unwrap());
        assert!(!ideal_equal(&q, 1, &polys(&q, 1, &["X1"]), &polys(&q, 1, &["X1^2"])).unwrap());
        assert!(ideal_equal(&q, 2, &[], &[MultiPoly::zero(&q, 2)]).unwrap());
    }

    #[test]
    fn s_polynomials_reduce_to_zero() {
        let f7 = FieldCtx::prime(7).unwrap();
        let gens = polys(&f7, 3, &["X1*X2 - X3", "X2*X3 - X1", "X1*X3 - X2^2 + 1"]);
        let gb = buchberger(&f7, 3, &gens).unwrap();
        let b = gb.basis();
        for i in 0..b.len() {
            for j in 0..i {
                assert!(normal_form(&s_polynomial(&b[i], &b[j]), b).is_zero());
            }
            // auto-reduced: no leading monomial divides another's
            for j in 0..b.len() {
                assert!(i == j || !lm(&b[j]).divides(lm(&b[i])));
            }
            assert!(b[i].leading_term().unwrap().1.is_one());
        }
        for g in &gens {
            assert!(membership(g, &gb).unwrap());
        }
    }

    #[test]
    fn normal_form_is_linear_and_idempotent() {
        let q = FieldCtx::rational();
        let gb = buchberger(&q, 2, &polys(&q, 2, &["X1^2 - X2", "X1*X2 - 1"])).unwrap();
        let f = parse_poly("X1^3 + 2*X2^2 - X1", 2, &q).unwrap();
        let g = parse_poly("X1*X2^2 + 5", 2, &q).unwrap();
        let nf = |p: &MultiPoly| gb.normal_form(p).unwrap();
        assert_eq!(nf(&nf(&f)), nf(&f));
        assert_eq!(nf(&(&f + &g)), &nf(&f) + &nf(&g));
    }

    #[test]
    fn caps_are_enforced() {
        let q = FieldCtx::rational();
        let x = MultiPoly::var(&q, 4, 0);
        assert!(matches!(buchberger(&q, 4, &[x]), Err(Error::OracleCap(_))));
        let caps = OracleCaps {
            max_input_terms: 1,
            ..OracleCaps::default()
        };
        assert!(matches!(
            buchberger_with_caps(&q, 1, &polys(&q, 1, &["X1 + 1"]), caps),
            Err(Error::OracleCap(_))
        ));
    }
}
