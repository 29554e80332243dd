//! Dual systems over `F_{q^k}` descended to `F_q` by the norm.
//!
//! With `k = floor(log_q d) + 1` and `d' = floor(d / k)`, a dual
//! certificate `(P_i, g_i)` of degree `d'` over `F_{q^k}` gives
//! `f_i = prod_r sigma^r(g_i)` over `F_q` of degree `k d' <= d`, where
//! `sigma(a) = a^q`. Then `f_i(P_j) = 0` for `i != j`, while `f_i(P_i) != 0`
//! needs the extra condition `g_i(sigma^r(P_i)) != 0` for all `r`. Nothing
//! guarantees that condition, so the search here measures how often it
//! holds.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual_certificates::{greedy_point_search, solve_certificate, SearchOptions};
use crate::error::{Error, Result};
use crate::polynomials::{binomial, Degree, MultiPoly, Point};
use crate::scalars::{finite_field, make_extension, prime_power, primitive_element, same_field, Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureParams {
    pub q: u64,
    pub d: u32,
    pub n: usize,
    pub k: u32,
    pub d_prime: u32,
    /// `C(n+d', d')`.
    pub target_size: u64,
}

pub fn conjecture_params(q: u64, d: u32, n: usize) -> Result<ConjectureParams> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if d == 0 {
        return Err(Error::InvalidArgument("degree bound must be >= 1".into()));
    }
    // Least k with q^k > d, which is floor(log_q d) + 1.
    let mut k = 1u32;
    let mut power = q as u128;
    while power <= d as u128 {
        power *= q as u128;
        k += 1;
    }
    let d_prime = d / k;
    Ok(ConjectureParams {
        q,
        d,
        n,
        k,
        d_prime,
        target_size: binomial(n as u64 + d_prime as u64, d_prime as u64),
    })
}

/// `F_q` inside `F_{q^k}`, with both fields built independently by
/// [`make_extension`].
#[derive(Clone, Debug)]
pub struct Embedding {
    base: Field,
    ext: Field,
    /// `q = p^s`.
    s: u32,
    k: u32,
    image: Vec<FieldElement>,
    preimage: HashMap<FieldElement, u64>,
}

const MAX_EMBED_BASE: u64 = 1 << 20;

impl Embedding {
    pub fn new(q: u64, k: u32) -> Result<Self> {
        let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_EMBED_BASE {
            return Err(Error::FieldTooLarge(format!("base field of order {q}")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let base = finite_field(q)?;
        let ext = make_extension(p, s * k)?;
        // A root of the base modulus, searched in the subfield generated by
        // zeta^((q^k - 1)/(q - 1)).
        let alpha = match base.modulus() {
            None => FieldElement::zero(&ext),
            Some(modulus) => {
                let qk = ext.order().expect("finite");
                let g = primitive_element(&ext)?.pow((qk - 1) / (q - 1));
                let eval = |x: &FieldElement| {
                    modulus.iter().rev().fold(FieldElement::zero(&ext), |acc, &c| {
                        &(&acc * x) + &FieldElement::from_i64(&ext, c as i64)
                    })
                };
                let mut x = g.clone();
                loop {
                    if eval(&x).is_zero() {
                        break x;
                    }
                    x = &x * &g;
                    if x == g {
                        unreachable!("base modulus splits in the extension");
                    }
                }
            }
        };
        let mut image = Vec::with_capacity(q as usize);
        let mut preimage = HashMap::with_capacity(q as usize);
        for idx in 0..q {
            let a = FieldElement::from_index(&base, idx)?;
            let coords = a.coords().unwrap_or_else(|| vec![idx]);
            let mut power = FieldElement::one(&ext);
            let mut value = FieldElement::zero(&ext);
            for &c in &coords {
                value = &value + &(&power * &FieldElement::from_i64(&ext, c as i64));
                power = &power * &alpha;
            }
            preimage.insert(value.clone(), idx);
            image.push(value);
        }
        debug_assert_eq!(preimage.len(), q as usize);
        Ok(Embedding {
            base,
            ext,
            s,
            k,
            image,
            preimage,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn extension(&self) -> &Field {
        &self.ext
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn embed(&self, a: &FieldElement) -> Result<FieldElement> {
        if !same_field(a.ctx(), &self.base) {
            return Err(Error::ContextMismatch(format!("{} vs {}", a.ctx(), self.base)));
        }
        Ok(self.image[a.index().expect("finite") as usize].clone())
    }

    /// Preimage of an element of `F_{q^k}` fixed by `a -> a^q`.
    pub fn contract(&self, a: &FieldElement) -> Result<FieldElement> {
        match self.preimage.get(a) {
            Some(&idx) => FieldElement::from_index(&self.base, idx),
            None => Err(Error::NotFrobeniusFixed(a.to_string())),
        }
    }

    /// `a -> a^(q^r)`.
    pub fn sigma(&self, a: &FieldElement, r: u32) -> FieldElement {
        a.frobenius_pow(self.s as u64 * r as u64)
    }

    pub fn sigma_poly(&self, g: &MultiPoly, r: u32) -> MultiPoly {
        g.map_coefficients(&self.ext, |c| Ok(self.sigma(c, r)))
            .expect("same field")
    }

    pub fn sigma_point(&self, p: &Point) -> Vec<Point> {
        (0..self.k)
            .map(|r| Point::new(&self.ext, p.coords().iter().map(|c| self.sigma(c, r)).collect()).expect("same field"))
            .collect()
    }

    pub fn embed_poly(&self, f: &MultiPoly) -> Result<MultiPoly> {
        f.map_coefficients(&self.ext, |c| self.embed(c))
    }
}

/// `N(g) = prod_{r<k} sigma^r(g)`, re-encoded over `F_q`.
pub fn descend_by_norm(g: &MultiPoly, emb: &Embedding) -> Result<MultiPoly> {
    if !same_field(g.ctx(), emb.extension()) {
        return Err(Error::ContextMismatch(format!("{} vs {}", g.ctx(), emb.extension())));
    }
    let mut product = MultiPoly::one(emb.extension(), g.nvars());
    for r in 0..emb.k() {
        product = &product * &emb.sigma_poly(g, r);
    }
    product.map_coefficients(emb.base(), |c| emb.contract(c))
}

/// Seed of the `attempt`-th restart; attempt 0 uses `seed` itself.
pub fn attempt_seed(seed: u64, attempt: u64) -> u64 {
    if attempt == 0 {
        return seed;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng.next_u64()
}

/// Result of one certificate over `F_{q^k}` tested for the conjugate
/// condition.
#[derive(Clone, Debug)]
pub struct Attempt {
    pub seed: u64,
    pub trials: u64,
    pub points: Vec<Point>,
    pub lifted_g: Vec<MultiPoly>,
    /// First `(i, r)` with `g_i(sigma^r(P_i)) = 0`.
    pub galois_failure: Option<(usize, u32)>,
}

/// Searches a certificate of degree `d'` over `F_{q^k}` and checks
/// `g_i(sigma^r(P_i)) != 0` for every `i` and `r < k`.
pub fn galois_attempt(params: &ConjectureParams, emb: &Embedding, seed: u64, budget: u64) -> Result<Attempt> {
    let ext = emb.extension();
    let options = if params.k == 1 {
        SearchOptions::default()
    } else {
        SearchOptions {
            grid_size: ext.order(),
            structured: false,
        }
    };
    let found = greedy_point_search(ext, params.n, params.d_prime, seed, budget, &options)?;
    let cert = solve_certificate(ext, params.n, &found.points, params.d_prime)?;
    let mut galois_failure = None;
    'outer: for (i, (g, p)) in cert.polys.iter().zip(&cert.points).enumerate() {
        for (r, conj) in emb.sigma_point(p).iter().enumerate() {
            if g.evaluate(conj)?.is_zero() {
                galois_failure = Some((i, r as u32));
                break 'outer;
            }
        }
    }
    Ok(Attempt {
        seed,
        trials: found.trials,
        points: cert.points,
        lifted_g: cert.polys,
        galois_failure,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub attempts: u64,
    pub galois_rejections: u64,
    pub trials: u64,
    pub seeds: Vec<u64>,
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
pub struct GaloisOutcome {
    pub accepted: Option<Attempt>,
    pub stats: SearchStats,
}

/// Restarts [`galois_attempt`] with derived seeds until one passes or the
/// total point budget is spent.
pub fn galois_search(params: &ConjectureParams, emb: &Embedding, seed: u64, budget: u64) -> Result<GaloisOutcome> {
    let mut stats = SearchStats::default();
    loop {
        let remaining = budget - stats.trials;
        let s = attempt_seed(seed, stats.attempts);
        match galois_attempt(params, emb, s, remaining) {
            Ok(attempt) => {
                stats.attempts += 1;
                stats.trials += attempt.trials;
                stats.seeds.push(s);
                if attempt.galois_failure.is_none() {
                    return Ok(GaloisOutcome {
                        accepted: Some(attempt),
                        stats,
                    });
                }
                stats.galois_rejections += 1;
            }
            Err(Error::BudgetExhausted { .. }) => {
                stats.attempts += 1;
                stats.trials = budget;
                stats.seeds.push(s);
                stats.exhausted = true;
                return Ok(GaloisOutcome { accepted: None, stats });
            }
            Err(e) => return Err(e),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormInstance {
    pub params: ConjectureParams,
    pub base: Field,
    pub extension: Field,
    pub points: Vec<Point>,
    pub lifted_g: Vec<MultiPoly>,
    pub descended_f: Vec<MultiPoly>,
    pub galois_ok: bool,
    pub stats: SearchStats,
}

pub fn build_conjecture_instance(q: u64, d: u32, n: usize, seed: u64, budget: u64) -> Result<NormInstance> {
    let params = conjecture_params(q, d, n)?;
    let emb = Embedding::new(q, params.k)?;
    let outcome = galois_search(&params, &emb, seed, budget)?;
    let Some(attempt) = outcome.accepted else {
        return Err(Error::BudgetExhausted { budget });
    };
    instance_from_attempt(&params, &emb, attempt, outcome.stats)
}

pub fn instance_from_attempt(
    params: &ConjectureParams,
    emb: &Embedding,
    attempt: Attempt,
    stats: SearchStats,
) -> Result<NormInstance> {
    let descended_f = attempt
        .lifted_g
        .iter()
        .map(|g| descend_by_norm(g, emb))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormInstance {
        params: params.clone(),
        base: emb.base().clone(),
        extension: emb.extension().clone(),
        points: attempt.points,
        lifted_g: attempt.lifted_g,
        descended_f,
        galois_ok: attempt.galois_failure.is_none(),
        stats,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormVerdict {
    pub size_ok: bool,
    pub degree_ok: bool,
    /// `embed(f_i) = prod_r sigma^r(g_i)`, so every coefficient of the norm
    /// is fixed by `sigma`.
    pub norm_ok: bool,
    /// `f_i(P_j) = 0` for all `i != j`.
    pub off_diagonal_ok: bool,
    /// `f_i(P_i) != 0` for all `i`.
    pub diagonal_ok: bool,
    pub valid: bool,
}

/// Re-evaluates an instance from scratch.
pub fn verify_norm_instance(inst: &NormInstance) -> Result<NormVerdict> {
    let p = &inst.params;
    let emb = Embedding::new(p.q, p.k)?;
    let m = inst.descended_f.len();
    let size_ok = m as u64 == p.target_size && inst.points.len() == m && inst.lifted_g.len() == m;
    let degree_ok = inst.descended_f.iter().all(|f| f.degree().at_most(p.d))
        && inst
            .descended_f
            .iter()
            .zip(&inst.lifted_g)
            .all(|(f, g)| match (f.degree(), g.degree()) {
                (Degree::Finite(a), Degree::Finite(b)) => a == p.k * b,
                _ => false,
            });
    let mut norm_ok = size_ok;
    let mut off_diagonal_ok = size_ok;
    let mut diagonal_ok = size_ok;
    if size_ok {
        for (f, g) in inst.descended_f.iter().zip(&inst.lifted_g) {
            let mut product = MultiPoly::one(emb.extension(), p.n);
            for r in 0..p.k {
                product = &product * &emb.sigma_poly(g, r);
            }
            norm_ok &= emb.embed_poly(f)? == product;
        }
        for (i, f) in inst.descended_f.iter().enumerate() {
            let lifted = emb.embed_poly(f)?;
            for (j, pt) in inst.points.iter().enumerate() {
                let zero = lifted.evaluate(pt)?.is_zero();
                if i == j {
                    diagonal_ok &= !zero;
                } else {
                    off_diagonal_ok &= zero;
                }
            }
        }
    }
    Ok(NormVerdict {
        size_ok,
        degree_ok,
        norm_ok,
        off_diagonal_ok,
        diagonal_ok,
        valid: size_ok && degree_ok && norm_ok && off_diagonal_ok && diagonal_ok,
    })
}
