//! Generator counts for ideals with bounded-degree generators.
//!
//! For an ideal `I` let `V_{<=k}` be its elements of degree at most `k` and
//! `V_k` the space of their degree-`k` parts, with `c_k = dim V_k`. The
//! telescoping construction emits `c_k - c_{k-1}` new generators at each
//! degree `k`, so `I` is generated by `c_d <= C(n+d-1, d)` polynomials of
//! degree at most `d`.
//!
//! `V_{<=k}` is approximated from the Macaulay span
//! `{m * f_j : deg(m * f_j) <= D}` at a working degree `D`, closed under
//! multiplication by the variables. For homogeneous generators `D = d` is
//! exact; otherwise `D` is escalated until the profile stops changing.

use crate::error::{Error, Result};
use crate::linalg::RowBasis;
use crate::polynomials::{binomial, monomials_of_degree, monomials_up_to, Degree, Monomial, MultiPoly};
use crate::scalars::{same_field, Field, FieldElement};

/// Working degree selection for [`degree_profile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorkingDegree {
    Auto,
    Fixed(u32),
}

/// The sequence `c_0, ..., c_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub n: usize,
    pub d: u32,
    pub working_degree: u32,
    pub c: Vec<usize>,
    /// Whether the profile is known exact: homogeneous input, or a fixed
    /// point reached under escalation.
    pub stabilized: bool,
}

#[derive(Clone, Debug)]
pub struct GeneratorReport {
    pub generators: Vec<MultiPoly>,
    /// Degree step at which each generator's top part was added.
    pub added_at: Vec<u32>,
    pub profile: DegreeProfile,
    /// `C(n+d-1, d)`.
    pub claimed_bound: u64,
}

/// Element of `V_k` together with an ideal element of degree `<= k` whose
/// degree-`k` part it is.
#[derive(Clone, Debug)]
struct Lifted {
    top: MultiPoly,
    lift: MultiPoly,
}

struct Spaces {
    working_degree: u32,
    /// `levels[k]` is a basis of `V_k` with lifts.
    levels: Vec<Vec<Lifted>>,
}

impl Spaces {
    fn profile(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }
}

fn validate(ctx: &Field, n: usize, gens: &[MultiPoly], d: u32) -> Result<()> {
    for g in gens {
        if !same_field(g.ctx(), ctx) {
            return Err(Error::ContextMismatch(format!("{} vs {ctx}", g.ctx())));
        }
        if g.nvars() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator in {} variables, expected {n}",
                g.nvars()
            )));
        }
        if let Degree::Finite(deg) = g.degree() {
            if deg > d {
                return Err(Error::DegreeOverflow { degree: deg, bound: d });
            }
        }
    }
    Ok(())
}

fn coefficient_row(f: &MultiPoly, columns: &[Monomial]) -> Vec<FieldElement> {
    columns.iter().map(|m| f.coeff(m)).collect()
}

/// Builds `V_0 .. V_d` from the Macaulay span at working degree `big_d`.
fn graded_spaces(ctx: &Field, n: usize, gens: &[MultiPoly], d: u32, big_d: u32) -> Spaces {
    // Highest monomial first, so each echelon pivot is a leading monomial.
    let mut columns = monomials_up_to(n, big_d);
    columns.sort_by(|a, b| b.cmp(a));
    let mut basis = RowBasis::new(ctx, columns.len());
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let deg = g.degree().finite().expect("nonzero");
        for m in monomials_up_to(n, big_d - deg) {
            let row = g.mul_monomial(&m, &FieldElement::one(ctx));
            basis.insert(&coefficient_row(&row, &columns));
        }
    }
    let echelon: Vec<MultiPoly> = basis
        .reduced()
        .into_iter()
        .map(|(_, row)| {
            MultiPoly::from_terms(ctx, n, columns.iter().cloned().zip(row)).expect("same field")
        })
        .collect();

    let mut levels: Vec<Vec<Lifted>> = Vec::with_capacity(d as usize + 1);
    for k in 0..=d {
        let cols = monomials_of_degree(n, k);
        let mut space = RowBasis::new(ctx, cols.len());
        let mut level = Vec::new();
        let mut offer = |cand: Lifted, level: &mut Vec<Lifted>| {
            if space.insert(&coefficient_row(&cand.top, &cols)).is_some() {
                level.push(cand);
            }
        };
        for w in echelon.iter().filter(|w| w.degree() == Degree::Finite(k)) {
            offer(
                Lifted {
                    top: w.degree_part(k),
                    lift: w.clone(),
                },
                &mut level,
            );
        }
        if k > 0 {
            for prev in &levels[k as usize - 1] {
                for i in 0..n {
                    let x = Monomial::var(n, i);
                    let one = FieldElement::one(ctx);
                    offer(
                        Lifted {
                            top: prev.top.mul_monomial(&x, &one),
                            lift: prev.lift.mul_monomial(&x, &one),
                        },
                        &mut level,
                    );
                }
            }
        }
        levels.push(level);
    }
    Spaces {
        working_degree: big_d,
        levels,
    }
}

fn compute(
    ctx: &Field,
    n: usize,
    gens: &[MultiPoly],
    d: u32,
    working: WorkingDegree,
) -> Result<(Spaces, bool)> {
    validate(ctx, n, gens, d)?;
    let nonzero: Vec<&MultiPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let homogeneous = nonzero.iter().all(|g| g.is_homogeneous());
    match working {
        WorkingDegree::Fixed(big_d) => {
            if big_d < d {
                return Err(Error::InvalidArgument(format!(
                    "working degree {big_d} below degree bound {d}"
                )));
            }
            Ok((graded_spaces(ctx, n, gens, d, big_d), homogeneous))
        }
        WorkingDegree::Auto => {
            let mut spaces = graded_spaces(ctx, n, gens, d, d);
            if homogeneous {
                return Ok((spaces, true));
            }
            let cap = 2 * d + 2;
            let mut unchanged = 0;
            while spaces.working_degree < cap {
                let next = graded_spaces(ctx, n, gens, d, spaces.working_degree + 1);
                if next.profile() == spaces.profile() {
                    unchanged += 1;
                } else {
                    unchanged = 0;
                }
                spaces = next;
                if unchanged == 2 {
                    return Ok((spaces, true));
                }
            }
            Ok((spaces, false))
        }
    }
}

/// Degree profile `c_0..c_d` of the ideal generated by `gens`.
pub fn degree_profile(
    ctx: &Field,
    n: usize,
    gens: &[MultiPoly],
    d: u32,
    working: WorkingDegree,
) -> Result<DegreeProfile> {
    let (spaces, stabilized) = compute(ctx, n, gens, d, working)?;
    Ok(DegreeProfile {
        n,
        d,
        working_degree: spaces.working_degree,
        c: spaces.profile(),
        stabilized,
    })
}

/// Runs the telescoping construction and returns `c_d` generators of degree
/// at most `d`.
pub fn telescope_generators(
    ctx: &Field,
    n: usize,
    gens: &[MultiPoly],
    d: u32,
    working: WorkingDegree,
) -> Result<GeneratorReport> {
    let (spaces, stabilized) = compute(ctx, n, gens, d, working)?;
    let mut generators = Vec::new();
    let mut added_at = Vec::new();
    for k in 0..=d {
        let cols = monomials_of_degree(n, k);
        let mut span = RowBasis::new(ctx, cols.len());
        if k > 0 && n > 0 {
            let x1 = Monomial::var(n, 0);
            for prev in &spaces.levels[k as usize - 1] {
                let shifted = prev.top.mul_monomial(&x1, &FieldElement::one(ctx));
                span.insert(&coefficient_row(&shifted, &cols));
            }
        }
        for cand in &spaces.levels[k as usize] {
            if span.insert(&coefficient_row(&cand.top, &cols)).is_some() {
                generators.push(cand.lift.clone());
                added_at.push(k);
            }
        }
    }
    let profile = DegreeProfile {
        n,
        d,
        working_degree: spaces.working_degree,
        c: spaces.profile(),
        stabilized,
    };
    Ok(GeneratorReport {
        generators,
        added_at,
        claimed_bound: binomial(n as u64 + d as u64 - 1, d as u64),
        profile,
    })
}

/// All `C(n+d-1, d)` monomials of degree exactly `d`, generating `(X_1..X_n)^d`.
pub fn sharp_instance(ctx: &Field, n: usize, d: u32) -> Vec<MultiPoly> {
    monomials_of_degree(n, d)
        .into_iter()
        .map(|m| MultiPoly::monomial(ctx, m, FieldElement::one(ctx)))
        .collect()
}

/// Necessary condition for `candidate` to generate `(X_1..X_n)^d` with
/// degree at most `d`: every member is homogeneous of degree `d` and the
/// members span all `C(n+d-1, d)` forms of degree `d`.
pub fn verify_monomial_lower_bound(n: usize, d: u32, candidate: &[MultiPoly]) -> bool {
    let Some(first) = candidate.first() else {
        return binomial(n as u64 + d as u64 - 1, d as u64) == 0;
    };
    let ctx = first.ctx();
    if candidate
        .iter()
        .any(|f| !same_field(f.ctx(), ctx) || f.nvars() != n || !f.is_homogeneous() || f.degree() != Degree::Finite(d))
    {
        return false;
    }
    let cols = monomials_of_degree(n, d);
    let mut span = RowBasis::new(ctx, cols.len());
    for f in candidate {
        span.insert(&coefficient_row(f, &cols));
    }
    span.rank() == cols.len()
}
