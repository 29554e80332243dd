//! Dual certificates: `C(n+d, d)` points `P_j` and polynomials `f_i` of
//! degree `<= d` with `f_i(P_j) = 0` exactly when `i != j`.
//!
//! Such a family generates the unit ideal minimally: dropping `f_i` leaves
//! every remaining generator inside the maximal ideal of `P_i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, nullspace, solve_many, Matrix, RowBasis};
use crate::polynomials::{binomial, monomials_up_to, Degree, MultiPoly, Point};
use crate::scalars::{primitive_element, same_field, Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub ctx: Field,
    pub n: usize,
    pub d: u32,
    pub points: Vec<Point>,
    pub polys: Vec<MultiPoly>,
    /// `f_i(P_i)`.
    pub diagonal: Vec<FieldElement>,
}

impl DualCertificate {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// First check that failed, with 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Malformed(String),
    DuplicatePoints { i: usize, j: usize },
    DegreeExceeded { i: usize, degree: u32 },
    OffDiagonal { i: usize, j: usize },
    ZeroDiagonal { i: usize },
    DiagonalMismatch { i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub first_failure: Option<Violation>,
}

impl Verdict {
    fn fail(v: Violation) -> Self {
        Verdict {
            valid: false,
            first_failure: Some(v),
        }
    }
}

/// Indices of a maximal linearly independent subset of `gens`, scanning in
/// order. The selected polynomials span every input, so they generate the
/// same ideal.
pub fn select_minimal_subset(gens: &[MultiPoly], d: u32) -> Result<Vec<usize>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ctx = first.ctx();
    let n = first.nvars();
    let width = monomials_up_to(n, d).len();
    let mut basis = RowBasis::new(ctx, width);
    let mut chosen = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if !same_field(g.ctx(), ctx) || g.nvars() != n {
            return Err(Error::ContextMismatch(format!("generator {i} differs from generator 0")));
        }
        if basis.insert(&g.coefficient_vector(d)?).is_some() {
            chosen.push(i);
        }
    }
    Ok(chosen)
}

/// Rows are the monomial values of each point, in column order.
pub fn build_vandermonde(ctx: &Field, n: usize, points: &[Point], d: u32) -> Result<Matrix> {
    for p in points {
        if !same_field(p.ctx(), ctx) {
            return Err(Error::ContextMismatch(format!("point over {}, expected {ctx}", p.ctx())));
        }
        if p.nvars() != n {
            return Err(Error::DimensionMismatch(format!(
                "point with {} coordinates, expected {n}",
                p.nvars()
            )));
        }
    }
    let width = binomial(n as u64 + d as u64, d as u64) as usize;
    Matrix::from_rows(ctx, width, points.iter().map(|p| p.monomial_values(d)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Size of the coordinate grid for random sampling; defaults to
    /// `min(|K|, d+1)`.
    pub grid_size: Option<u64>,
    /// Try the deterministic structured candidates before sampling.
    pub structured: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid_size: None,
            structured: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub points: Vec<Point>,
    /// Candidate points evaluated, structured and random.
    pub trials: u64,
}

/// Element of the coordinate grid: `k`-th element by index, or the integer
/// `k` over `Q`.
fn grid_element(ctx: &Field, k: u64) -> FieldElement {
    if ctx.is_finite() {
        FieldElement::from_index(ctx, k).expect("index below field order")
    } else {
        FieldElement::from_i64(ctx, k as i64)
    }
}

/// Points `(s_{a_1}, ..., s_{a_n})` for `|a| <= d`; unisolvent for degree
/// `d` whenever `s_0..s_d` are distinct.
fn lower_simplex(ctx: &Field, n: usize, d: u32, s: &[FieldElement]) -> Vec<Point> {
    monomials_up_to(n, d)
        .iter()
        .map(|m| Point::new(ctx, m.exps().iter().map(|&a| s[a as usize].clone()).collect()).expect("same field"))
        .collect()
}

fn q_analog_nodes(zeta: &FieldElement, count: usize) -> Vec<FieldElement> {
    let ctx = zeta.ctx();
    let one = FieldElement::one(ctx);
    let denom = (&one - zeta).inv().expect("zeta != 1");
    let mut power = one.clone();
    (0..count)
        .map(|_| {
            let alpha = &(&one - &power) * &denom;
            power = &power * zeta;
            alpha
        })
        .collect()
}

fn triangle_points(ctx: &Field, d: u32, zeta: &FieldElement) -> Vec<Point> {
    let one = FieldElement::one(ctx);
    let mut out = Vec::new();
    for k in 0..=d {
        for i in (0..=k).rev() {
            let j = k - i;
            let x = &one - &zeta.pow(i as u64);
            let zj = zeta.pow(j as u64);
            let y = &(&one - &zj) / &zj;
            out.push(Point::new(ctx, vec![x, y]).expect("same field"));
        }
    }
    out
}

/// Deterministic candidates, unisolvent for degree `d` whenever `|K| > d`.
fn structured_stream(ctx: &Field, n: usize, d: u32) -> Vec<Point> {
    let grid: Vec<FieldElement> = (0..=d as u64).map(|k| grid_element(ctx, k)).collect();
    let Some(q) = ctx.order() else {
        return lower_simplex(ctx, n, d, &grid);
    };
    let zeta = primitive_element(ctx).expect("finite field");
    match n {
        1 if q > d as u64 + 1 => q_analog_nodes(&zeta, d as usize + 1)
            .into_iter()
            .map(|a| Point::new(ctx, vec![a]).expect("same field"))
            .collect(),
        2 if q > d as u64 + 1 => triangle_points(ctx, d, &zeta),
        _ => lower_simplex(ctx, n, d, &grid),
    }
}

/// Chooses `C(n+d, d)` points with invertible Vandermonde matrix, one rank
/// step at a time: each new point must not vanish on a polynomial that
/// vanishes at all points chosen so far. Every evaluated candidate counts
/// against `budget`.
pub fn greedy_point_search(
    ctx: &Field,
    n: usize,
    d: u32,
    seed: u64,
    budget: u64,
    options: &SearchOptions,
) -> Result<SearchResult> {
    if let Some(q) = ctx.order() {
        if q <= d as u64 {
            return Err(Error::FieldTooSmall { order: q, degree: d });
        }
    }
    let grid_size = match (options.grid_size, ctx.order()) {
        (Some(g), Some(q)) if g > q => {
            return Err(Error::InvalidArgument(format!("grid size {g} exceeds field order {q}")))
        }
        (Some(g), _) if g <= d as u64 => {
            return Err(Error::InvalidArgument(format!("grid size {g} must exceed degree {d}")))
        }
        (Some(g), _) => g,
        (None, Some(q)) => q.min(d as u64 + 1),
        (None, None) => d as u64 + 1,
    };
    let total = binomial(n as u64 + d as u64, d as u64) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let structured = if options.structured {
        structured_stream(ctx, n, d)
    } else {
        Vec::new()
    };
    let mut points: Vec<Point> = Vec::with_capacity(total);
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(total);
    let mut trials = 0u64;

    while points.len() < total {
        let current = Matrix::from_rows(ctx, total, rows.clone())?;
        let h = nullspace(&current).into_iter().next().expect("rank below width");
        let accept = |p: &Point, trials: &mut u64| -> Result<Option<Vec<FieldElement>>> {
            if *trials >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
            *trials += 1;
            let values = p.monomial_values(d);
            Ok((!dot(ctx, &h, &values).is_zero()).then_some(values))
        };
        let mut found = None;
        for p in structured.iter().filter(|p| !points.contains(p)) {
            if let Some(values) = accept(p, &mut trials)? {
                found = Some((p.clone(), values));
                break;
            }
        }
        while found.is_none() {
            use rand::Rng;
            let coords = (0..n)
                .map(|_| grid_element(ctx, rng.gen_range(0..grid_size)))
                .collect();
            let p = Point::new(ctx, coords)?;
            if let Some(values) = accept(&p, &mut trials)? {
                found = Some((p, values));
            }
        }
        let (p, values) = found.expect("loop exits with a point");
        points.push(p);
        rows.push(values);
    }
    Ok(SearchResult { points, trials })
}

/// Solves for the Lagrange-type dual basis: `f_i(P_j) = delta_ij`.
pub fn solve_certificate(ctx: &Field, n: usize, points: &[Point], d: u32) -> Result<DualCertificate> {
    let total = binomial(n as u64 + d as u64, d as u64) as usize;
    if points.len() != total {
        return Err(Error::DimensionMismatch(format!(
            "{} points, need C(n+d, d) = {total}",
            points.len()
        )));
    }
    let a = build_vandermonde(ctx, n, points, d)?;
    let unit = |i: usize| {
        (0..total)
            .map(|j| if i == j { FieldElement::one(ctx) } else { FieldElement::zero(ctx) })
            .collect::<Vec<_>>()
    };
    let rhs: Vec<Vec<FieldElement>> = (0..total).map(unit).collect();
    let coeffs = solve_many(&a, &rhs)?;
    let polys = coeffs
        .iter()
        .map(|c| MultiPoly::from_coefficient_vector(ctx, n, d, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualCertificate {
        ctx: ctx.clone(),
        n,
        d,
        points: points.to_vec(),
        polys,
        diagonal: vec![FieldElement::one(ctx); total],
    })
}

/// Re-checks a certificate by direct evaluation, independent of how it was
/// produced.
pub fn verify_certificate(cert: &DualCertificate) -> Verdict {
    use Violation::*;
    let m = cert.points.len();
    if cert.polys.len() != m || cert.diagonal.len() != m {
        return Verdict::fail(Malformed(format!(
            "{} points, {} polynomials, {} diagonal entries",
            m,
            cert.polys.len(),
            cert.diagonal.len()
        )));
    }
    for (i, p) in cert.points.iter().enumerate() {
        if !same_field(p.ctx(), &cert.ctx) || p.nvars() != cert.n {
            return Verdict::fail(Malformed(format!("point {i} does not lie in K^{}", cert.n)));
        }
    }
    for (i, f) in cert.polys.iter().enumerate() {
        if !same_field(f.ctx(), &cert.ctx) || f.nvars() != cert.n {
            return Verdict::fail(Malformed(format!("polynomial {i} is not in K[X1..X{}]", cert.n)));
        }
    }
    for (i, c) in cert.diagonal.iter().enumerate() {
        if !same_field(c.ctx(), &cert.ctx) {
            return Verdict::fail(Malformed(format!("diagonal entry {i} is not in K")));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if cert.points[i] == cert.points[j] {
                return Verdict::fail(DuplicatePoints { i, j });
            }
        }
    }
    for (i, f) in cert.polys.iter().enumerate() {
        if let Degree::Finite(degree) = f.degree() {
            if degree > cert.d {
                return Verdict::fail(DegreeExceeded { i, degree });
            }
        }
    }
    for (i, f) in cert.polys.iter().enumerate() {
        for (j, p) in cert.points.iter().enumerate() {
            let value = f.evaluate(p).expect("checked shapes");
            if i != j && !value.is_zero() {
                return Verdict::fail(OffDiagonal { i, j });
            }
            if i == j {
                if value.is_zero() {
                    return Verdict::fail(ZeroDiagonal { i });
                }
                if value != cert.diagonal[i] {
                    return Verdict::fail(DiagonalMismatch { i });
                }
            }
        }
    }
    Verdict {
        valid: true,
        first_failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det;
    use crate::polynomials::parse_poly;
    use crate::scalars::{make_extension, FieldCtx};
    use proptest::prelude::*;

    fn polys(ctx: &Field, n: usize, texts: &[&str]) -> Vec<MultiPoly> {
        texts.iter().map(|t| parse_poly(t, n, ctx).unwrap()).collect()
    }

    fn pts(ctx: &Field, coords: &[&[i64]]) -> Vec<Point> {
        coords.iter().map(|c| Point::from_i64(ctx, c)).collect()
    }

    #[test]
    fn minimal_subset_examples() {
        let q = FieldCtx::rational();
        assert_eq!(
            select_minimal_subset(&polys(&q, 2, &["X1", "2*X1", "X1+X2", "X2"]), 1).unwrap(),
            vec![0, 2]
        );
        assert!(select_minimal_subset(&[], 1).unwrap().is_empty());
        let simplex = polys(
            &q,
            2,
            &["X1*X2", "X1*(X1-1)", "X2*(X2-1)", "X1*(X1+X2-2)", "X2*(X1+X2-2)", "(X1+X2-1)*(X1+X2-2)"],
        );
        assert_eq!(select_minimal_subset(&simplex, 2).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(
            select_minimal_subset(&polys(&q, 1, &["X1^3"]), 2).unwrap_err(),
            Error::DegreeOverflow { degree: 3, bound: 2 }
        );
    }

    #[test]
    fn minimal_subset_ignores_dependent_tail() {
        let f5 = FieldCtx::prime(5).unwrap();
        let base = polys(&f5, 2, &["X1^2 + X2", "X1*X2", "X1^2 + X2 + X1*X2", "X2^2 - 1"]);
        let mut extended = base.clone();
        extended.extend(polys(&f5, 2, &["2*X1^2 + 2*X2", "X1*X2 - X2^2 + 1"]));
        assert_eq!(
            select_minimal_subset(&base, 2).unwrap(),
            select_minimal_subset(&extended, 2).unwrap()
        );
    }

    #[test]
    fn vandermonde_examples() {
        let q = FieldCtx::rational();
        let a = build_vandermonde(&q, 1, &pts(&q, &[&[0], &[1]]), 1).unwrap();
        assert_eq!(a, Matrix::from_i64(&q, &[&[1, 0], &[1, 1]]));
        let b = build_vandermonde(&q, 2, &pts(&q, &[&[0, 0], &[1, 0], &[0, 1]]), 1).unwrap();
        assert_eq!(b, Matrix::from_i64(&q, &[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]]));
        assert!(det(&b).unwrap().is_one());
        let c = build_vandermonde(&q, 2, &pts(&q, &[&[0, 0], &[1, 2], &[1, 2]]), 1).unwrap();
        assert!(det(&c).unwrap().is_zero());
    }

    #[test]
    fn search_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let r = greedy_point_search(&f2, 2, 1, 0, 100, &SearchOptions::default()).unwrap();
        assert_eq!(r.points, pts(&f2, &[&[0, 0], &[1, 0], &[0, 1]]));

        let q = FieldCtx::rational();
        let r = greedy_point_search(&q, 1, 2, 0, 100, &SearchOptions::default()).unwrap();
        assert_eq!(r.points, pts(&q, &[&[0], &[1], &[2]]));
        assert_eq!(r.trials, 3);

        assert_eq!(
            greedy_point_search(&f2, 1, 2, 0, 100, &SearchOptions::default()).unwrap_err(),
            Error::FieldTooSmall { order: 2, degree: 2 }
        );
    }

    #[test]
    fn search_respects_budget() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(
            greedy_point_search(&f7, 2, 3, 0, 5, &SearchOptions::default()).unwrap_err(),
            Error::BudgetExhausted { budget: 5 }
        );
    }

    #[test]
    fn searched_points_are_unisolvent() {
        let cases = [
            (FieldCtx::prime(7).unwrap(), 2, 3),
            (FieldCtx::prime(11).unwrap(), 2, 4),
            (FieldCtx::rational(), 3, 2),
            (FieldCtx::prime(3).unwrap(), 3, 2),
            (FieldCtx::prime(5).unwrap(), 1, 4),
            (make_extension(2, 2).unwrap(), 2, 2),
        ];
        for (ctx, n, d) in cases {
            for structured in [true, false] {
                let opts = SearchOptions {
                    grid_size: None,
                    structured,
                };
                let r = greedy_point_search(&ctx, n, d, 7, 10_000, &opts).unwrap();
                let a = build_vandermonde(&ctx, n, &r.points, d).unwrap();
                assert!(!det(&a).unwrap().is_zero(), "{ctx} n={n} d={d}");
            }
        }
    }

    #[test]
    fn solve_examples() {
        let q = FieldCtx::rational();
        let c = solve_certificate(&q, 1, &pts(&q, &[&[0], &[1]]), 1).unwrap();
        assert_eq!(c.polys, polys(&q, 1, &["1 - X1", "X1"]));

        let f2 = FieldCtx::prime(2).unwrap();
        let c = solve_certificate(&f2, 2, &pts(&f2, &[&[0, 0], &[1, 0], &[0, 1]]), 1).unwrap();
        assert_eq!(c.polys, polys(&f2, 2, &["1 + X1 + X2", "X1", "X2"]));
        assert!(verify_certificate(&c).valid);

        let c = solve_certificate(&q, 1, &pts(&q, &[&[0], &[1], &[2]]), 2).unwrap();
        assert_eq!(
            c.polys,
            polys(&q, 1, &["1/2*(X1-1)*(X1-2)", "-X1*(X1-2)", "1/2*X1*(X1-1)"])
        );
    }

    #[test]
    fn solve_rejects_singular_points() {
        let q = FieldCtx::rational();
        assert_eq!(
            solve_certificate(&q, 2, &pts(&q, &[&[0, 0], &[1, 1], &[2, 2]]), 1).unwrap_err(),
            Error::SingularMatrix
        );
    }

    #[test]
    fn tampering_is_detected() {
        let f2 = FieldCtx::prime(2).unwrap();
        let mut c = solve_certificate(&f2, 2, &pts(&f2, &[&[0, 0], &[1, 0], &[0, 1]]), 1).unwrap();
        c.polys[1] = &c.polys[1] + &c.polys[0];
        assert_eq!(
            verify_certificate(&c).first_failure,
            Some(Violation::OffDiagonal { i: 1, j: 0 })
        );
    }

    #[test]
    fn verifier_checks_structure() {
        let q = FieldCtx::rational();
        let good = solve_certificate(&q, 1, &pts(&q, &[&[0], &[1]]), 1).unwrap();

        let mut dup = good.clone();
        dup.points[1] = dup.points[0].clone();
        assert_eq!(
            verify_certificate(&dup).first_failure,
            Some(Violation::DuplicatePoints { i: 0, j: 1 })
        );

        let mut high = good.clone();
        high.polys[1] = parse_poly("X1^2", 1, &q).unwrap();
        assert_eq!(
            verify_certificate(&high).first_failure,
            Some(Violation::DegreeExceeded { i: 1, degree: 2 })
        );

        let mut zero = good.clone();
        zero.polys[0] = MultiPoly::zero(&q, 1);
        assert_eq!(verify_certificate(&zero).first_failure, Some(Violation::ZeroDiagonal { i: 0 }));

        let mut scaled = good.clone();
        scaled.polys[0] = scaled.polys[0].scale(&FieldElement::from_i64(&q, 3));
        assert_eq!(
            verify_certificate(&scaled).first_failure,
            Some(Violation::DiagonalMismatch { i: 0 })
        );
        scaled.diagonal[0] = FieldElement::from_i64(&q, 3);
        assert!(verify_certificate(&scaled).valid);

        let mut short = good;
        short.diagonal.pop();
        assert!(matches!(verify_certificate(&short).first_failure, Some(Violation::Malformed(_))));
    }

    #[test]
    fn six_point_simplex_instance_verifies() {
        let q = FieldCtx::rational();
        let cert = DualCertificate {
            ctx: q.clone(),
            n: 2,
            d: 2,
            points: pts(&q, &[&[1, 1], &[2, 0], &[0, 2], &[1, 0], &[0, 1], &[0, 0]]),
            polys: polys(
                &q,
                2,
                &["X1*X2", "X1*(X1-1)", "X2*(X2-1)", "X1*(X1+X2-2)", "X2*(X1+X2-2)", "(X1+X2-1)*(X1+X2-2)"],
            ),
            diagonal: [1, 2, 2, -1, -1, 2].iter().map(|&v| FieldElement::from_i64(&q, v)).collect(),
        };
        assert_eq!(verify_certificate(&cert), Verdict { valid: true, first_failure: None });
    }

    fn search_cases() -> Vec<(Field, usize, u32)> {
        vec![
            (FieldCtx::prime(5).unwrap(), 2, 2),
            (FieldCtx::prime(7).unwrap(), 2, 3),
            (FieldCtx::prime(3).unwrap(), 3, 1),
            (make_extension(2, 3).unwrap(), 2, 2),
            (FieldCtx::rational(), 2, 2),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn certificates_are_valid_and_minimal(case in 0usize..5, seed in any::<u64>(), structured in any::<bool>()) {
            let (ctx, n, d) = search_cases()[case].clone();
            let opts = SearchOptions { grid_size: None, structured };
            let r = greedy_point_search(&ctx, n, d, seed, 10_000, &opts).unwrap();
            let again = greedy_point_search(&ctx, n, d, seed, 10_000, &opts).unwrap();
            prop_assert_eq!(&r, &again);
            let cert = solve_certificate(&ctx, n, &r.points, d).unwrap();
            prop_assert!(verify_certificate(&cert).valid);
            // Each polynomial other than f_i lies in the kernel of evaluation at P_i.
            for i in 0..cert.len() {
                for (j, f) in cert.polys.iter().enumerate() {
                    prop_assert_eq!(j == i, !f.evaluate(&cert.points[i]).unwrap().is_zero());
                }
            }
            let all: Vec<usize> = (0..cert.len()).collect();
            prop_assert_eq!(select_minimal_subset(&cert.polys, d).unwrap(), all);
        }
    }
}
