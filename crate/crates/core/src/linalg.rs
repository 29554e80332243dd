//! Exact dense linear algebra over any [`Field`].
//!
//! Over `Q` rows are cleared of denominators and eliminated fraction-free
//! (content-normalized row echelon; Bareiss for determinants and solving).
//! Over finite fields plain Gaussian elimination is used. Pivots are always
//! the first admissible row or column in scan order, so results are
//! deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{same_field, Field, FieldElement, FieldKind};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    ctx: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(ctx: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![FieldElement::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &Field, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::one(ctx);
        }
        m
    }

    /// Builds a matrix from rows of equal length. An empty row list gives a
    /// `0 x cols` matrix.
    pub fn from_rows(ctx: &Field, cols: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|c| !same_field(c.ctx(), ctx)) {
                return Err(Error::ContextMismatch(format!("entry {bad} not in {ctx}")));
            }
            data.extend(row);
        }
        Ok(Matrix {
            ctx: ctx.clone(),
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(ctx: &Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| FieldElement::from_i64(ctx, x)).collect())
            .collect();
        Self::from_rows(ctx, cols, rows).expect("well-formed literal matrix")
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self.rows().map(|row| dot(&self.ctx, row, v)).collect())
    }

    fn is_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }
}

pub(crate) fn dot(ctx: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(FieldElement::zero(ctx), |acc, (x, y)| &acc + &(x * y))
}

fn is_rational(ctx: &Field) -> bool {
    matches!(ctx.kind(), FieldKind::Rational)
}

/// Multiplies a rational row by the lcm of its denominators.
fn clear_denominators(row: &[FieldElement]) -> (Vec<BigInt>, BigInt) {
    let lcm = row
        .iter()
        .map(|c| c.as_rational().expect("rational entry").denom().clone())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let ints = row
        .iter()
        .map(|c| {
            let r = c.as_rational().expect("rational entry");
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    (ints, lcm)
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

enum Rows {
    Exact(Vec<Vec<FieldElement>>),
    Integral(Vec<Vec<BigInt>>),
}

/// An incrementally grown row echelon basis.
///
/// Each stored row has zeros in the pivot columns of all earlier rows, so a
/// single pass in insertion order reduces a new vector.
pub struct RowBasis {
    ctx: Field,
    cols: usize,
    rows: Rows,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn new(ctx: &Field, cols: usize) -> Self {
        let rows = if is_rational(ctx) {
            Rows::Integral(Vec::new())
        } else {
            Rows::Exact(Vec::new())
        };
        RowBasis {
            ctx: ctx.clone(),
            cols,
            rows,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Pivot column of every stored row, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, row: &[FieldElement]) {
        assert_eq!(row.len(), self.cols, "row length");
    }

    /// Adds `row` if it is independent of the stored rows; returns its pivot
    /// column in that case.
    pub fn insert(&mut self, row: &[FieldElement]) -> Option<usize> {
        self.check(row);
        match &mut self.rows {
            Rows::Exact(stored) => {
                let mut r = row.to_vec();
                for (b, &c) in stored.iter().zip(&self.pivots) {
                    if !r[c].is_zero() {
                        let f = r[c].clone();
                        for (x, y) in r.iter_mut().zip(b).skip(c) {
                            if !y.is_zero() {
                                *x = &*x - &(&f * y);
                            }
                        }
                    }
                }
                let pivot = r.iter().position(|x| !x.is_zero())?;
                let inv = r[pivot].inv().expect("nonzero pivot");
                for x in r.iter_mut().skip(pivot) {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
                stored.push(r);
                self.pivots.push(pivot);
                Some(pivot)
            }
            Rows::Integral(stored) => {
                let (mut r, _) = clear_denominators(row);
                for (b, &c) in stored.iter().zip(&self.pivots) {
                    if !r[c].is_zero() {
                        let (bc, rc) = (b[c].clone(), r[c].clone());
                        for (x, y) in r.iter_mut().zip(b) {
                            *x = &bc * &*x - &rc * y;
                        }
                        remove_content(&mut r);
                    }
                }
                let pivot = r.iter().position(|x| !x.is_zero())?;
                if r[pivot].is_negative() {
                    for x in r.iter_mut() {
                        *x = -&*x;
                    }
                }
                stored.push(r);
                self.pivots.push(pivot);
                Some(pivot)
            }
        }
    }

    /// True when `row` lies in the span of the stored rows.
    pub fn contains(&self, row: &[FieldElement]) -> bool {
        self.check(row);
        let mut probe = RowBasis {
            ctx: self.ctx.clone(),
            cols: self.cols,
            rows: match &self.rows {
                Rows::Exact(v) => Rows::Exact(v.clone()),
                Rows::Integral(v) => Rows::Integral(v.clone()),
            },
            pivots: self.pivots.clone(),
        };
        probe.insert(row).is_none()
    }

    /// Stored rows as field vectors (same span, same pivots, insertion order).
    pub fn basis_rows(&self) -> Vec<Vec<FieldElement>> {
        match &self.rows {
            Rows::Exact(v) => v.clone(),
            Rows::Integral(v) => v
                .iter()
                .map(|r| r.iter().map(|x| FieldElement::from_bigint(&self.ctx, x)).collect())
                .collect(),
        }
    }

    /// Reduced row echelon form of the span: rows sorted by pivot column,
    /// pivots equal to 1, pivot columns cleared elsewhere.
    pub fn reduced(&self) -> Vec<(usize, Vec<FieldElement>)> {
        let mut rows: Vec<(usize, Vec<FieldElement>)> =
            self.pivots.iter().copied().zip(self.basis_rows()).collect();
        rows.sort_by_key(|(c, _)| *c);
        for (_, r) in rows.iter_mut() {
            let c = r.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let inv = r[c].inv().expect("nonzero pivot");
            for x in r.iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        for i in (0..rows.len()).rev() {
            let (c, pivot_row) = rows[i].clone();
            for (_, r) in rows.iter_mut().take(i) {
                if !r[c].is_zero() {
                    let f = r[c].clone();
                    for (x, y) in r.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
            }
        }
        rows
    }
}

/// Rank together with the lexicographically first maximal independent set
/// of rows, found by scanning rows top to bottom.
pub fn rank_profile(m: &Matrix) -> (usize, Vec<usize>) {
    let mut basis = RowBasis::new(&m.ctx, m.cols);
    let pivots: Vec<usize> = m
        .rows()
        .enumerate()
        .filter_map(|(i, row)| basis.insert(row).map(|_| i))
        .collect();
    (pivots.len(), pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rank_profile(m).0
}

/// Basis of the right kernel `{v : Mv = 0}`, one vector per free column in
/// ascending order, parametrized by the reduced echelon form.
pub fn nullspace(m: &Matrix) -> Vec<Vec<FieldElement>> {
    let mut basis = RowBasis::new(&m.ctx, m.cols);
    for row in m.rows() {
        basis.insert(row);
    }
    let rref = basis.reduced();
    let pivot_cols: Vec<usize> = rref.iter().map(|(c, _)| *c).collect();
    (0..m.cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![FieldElement::zero(&m.ctx); m.cols];
            v[free] = FieldElement::one(&m.ctx);
            for (c, row) in &rref {
                v[*c] = -&row[free];
            }
            v
        })
        .collect()
}

fn rational_integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = m
        .rows()
        .map(|row| {
            let (ints, s) = clear_denominators(row);
            scale *= s;
            ints
        })
        .collect();
    (rows, scale)
}

/// Fraction-free Bareiss forward elimination on the first `n` columns of
/// `a` (which may carry extra right-hand-side columns). Returns the sign of
/// the row permutation, or `None` when the leading block is singular.
fn bareiss(a: &mut [Vec<BigInt>], n: usize) -> Option<i32> {
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let width = a[k].len();
        for i in k + 1..n {
            for j in k + 1..width {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Some(sign)
}

/// Gaussian elimination to upper triangular form over a finite field;
/// returns the permutation sign, `None` if singular.
fn gauss_upper(a: &mut [Vec<FieldElement>], n: usize) -> Option<i32> {
    let mut sign = 1;
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            let pivot_row = &top[k];
            for (x, y) in bottom[0].iter_mut().zip(pivot_row).skip(k) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    Some(sign)
}

/// Exact determinant of a square matrix.
pub fn det(m: &Matrix) -> Result<FieldElement> {
    let n = m.is_square()?;
    if n == 0 {
        return Ok(FieldElement::one(&m.ctx));
    }
    if is_rational(&m.ctx) {
        let (mut a, scale) = rational_integer_rows(m);
        let Some(sign) = bareiss(&mut a, n) else {
            return Ok(FieldElement::zero(&m.ctx));
        };
        let num = &a[n - 1][n - 1] * BigInt::from(sign);
        return Ok(FieldElement::from_rational(&m.ctx, &BigRational::new(num, scale))
            .expect("nonzero denominator"));
    }
    let mut a: Vec<Vec<FieldElement>> = m.rows().map(|r| r.to_vec()).collect();
    let Some(sign) = gauss_upper(&mut a, n) else {
        return Ok(FieldElement::zero(&m.ctx));
    };
    let prod = (0..n).fold(FieldElement::one(&m.ctx), |acc, i| &acc * &a[i][i]);
    Ok(if sign < 0 { -&prod } else { prod })
}

/// Solves `M X = B` for a square invertible `M`, one solution per
/// right-hand side.
pub fn solve_many(m: &Matrix, rhs: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>> {
    let n = m.is_square()?;
    for b in rhs {
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {n}x{n} system",
                b.len()
            )));
        }
        if let Some(bad) = b.iter().find(|c| !same_field(c.ctx(), &m.ctx)) {
            return Err(Error::ContextMismatch(format!("entry {bad} not in {}", m.ctx)));
        }
    }
    let k = rhs.len();
    if is_rational(&m.ctx) {
        // Augment each row with its right-hand sides, clear denominators row-wise.
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row = m.row(i).to_vec();
                row.extend(rhs.iter().map(|b| b[i].clone()));
                clear_denominators(&row).0
            })
            .collect();
        bareiss(&mut a, n).ok_or(Error::SingularMatrix)?;
        let rat = |x: &BigInt| BigRational::from_integer(x.clone());
        let mut out = vec![vec![FieldElement::zero(&m.ctx); n]; k];
        for (col, sol) in out.iter_mut().enumerate() {
            let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
            for i in (0..n).rev() {
                let mut acc = rat(&a[i][n + col]);
                for j in i + 1..n {
                    if !a[i][j].is_zero() {
                        acc -= rat(&a[i][j]) * &x[j];
                    }
                }
                x[i] = acc / rat(&a[i][i]);
            }
            for (s, v) in sol.iter_mut().zip(&x) {
                *s = FieldElement::from_rational(&m.ctx, v).expect("rational");
            }
        }
        return Ok(out);
    }
    let mut a: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    gauss_upper(&mut a, n).ok_or(Error::SingularMatrix)?;
    let mut out = vec![vec![FieldElement::zero(&m.ctx); n]; k];
    for (col, sol) in out.iter_mut().enumerate() {
        for i in (0..n).rev() {
            let mut acc = a[i][n + col].clone();
            for j in i + 1..n {
                if !a[i][j].is_zero() {
                    acc = &acc - &(&a[i][j] * &sol[j]);
                }
            }
            sol[i] = &acc / &a[i][i];
        }
    }
    Ok(out)
}

/// Unique solution of `M x = b`.
pub fn solve(m: &Matrix, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
    Ok(solve_many(m, &[b.to_vec()])?.pop().expect("one solution"))
}

/// Inverse of a square matrix (columns are the solutions of `M x = e_i`).
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.is_square()?;
    let units: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut e = vec![FieldElement::zero(&m.ctx); n];
            e[i] = FieldElement::one(&m.ctx);
            e
        })
        .collect();
    let cols = solve_many(m, &units)?;
    Ok(Matrix::from_rows(&m.ctx, n, cols)?.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_extension, FieldCtx};
    use proptest::prelude::*;

    fn q() -> Field {
        FieldCtx::rational()
    }

    fn el(ctx: &Field, n: i64) -> FieldElement {
        FieldElement::from_i64(ctx, n)
    }

    fn frac(n: i64, d: i64) -> FieldElement {
        FieldElement::from_ratio(&q(), &n.into(), &d.into()).unwrap()
    }

    #[test]
    fn rank_profile_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(rank_profile(&Matrix::from_i64(&f2, &[&[1, 1], &[1, 1]])), (1, vec![0]));
        assert_eq!(rank_profile(&Matrix::identity(&q(), 2)), (2, vec![0, 1]));
        // coefficient vectors of X, 2X, X+Y, Y in the basis (1, X, Y)
        let m = Matrix::from_i64(&q(), &[&[0, 1, 0], &[0, 2, 0], &[0, 1, 1], &[0, 0, 1]]);
        assert_eq!(rank_profile(&m), (2, vec![0, 2]));
    }

    #[test]
    fn det_examples() {
        assert!(det(&Matrix::identity(&q(), 4)).unwrap().is_one());
        assert!(det(&Matrix::from_i64(&q(), &[&[1, 0], &[1, 1]])).unwrap().is_one());
        let v = Matrix::from_i64(&q(), &[&[1, 0, 0], &[1, 1, 1], &[1, 2, 4]]);
        assert_eq!(det(&v).unwrap(), el(&q(), 2));
        assert_eq!(
            det(&Matrix::zeros(&q(), 2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn det_with_row_swaps_and_fractions() {
        let ctx = q();
        let m = Matrix::from_rows(
            &ctx,
            2,
            vec![vec![el(&ctx, 0), frac(1, 2)], vec![frac(2, 3), el(&ctx, 5)]],
        )
        .unwrap();
        assert_eq!(det(&m).unwrap(), frac(-1, 3));
        let f7 = FieldCtx::prime(7).unwrap();
        let m = Matrix::from_i64(&f7, &[&[0, 1], &[1, 0]]);
        assert_eq!(det(&m).unwrap(), el(&f7, -1));
    }

    #[test]
    fn solve_examples() {
        let ctx = q();
        let b = vec![frac(3, 4), el(&ctx, -2), el(&ctx, 9)];
        assert_eq!(solve(&Matrix::identity(&ctx, 3), &b).unwrap(), b);
        let m = Matrix::from_i64(&ctx, &[&[1, 0], &[1, 1]]);
        assert_eq!(
            solve(&m, &[el(&ctx, 0), el(&ctx, 1)]).unwrap(),
            vec![el(&ctx, 0), el(&ctx, 1)]
        );
        let v = Matrix::from_i64(&ctx, &[&[1, 0, 0], &[1, 1, 1], &[1, 2, 4]]);
        let x = solve(&v, &[el(&ctx, 0), el(&ctx, 0), el(&ctx, 1)]).unwrap();
        assert_eq!(x, vec![el(&ctx, 0), frac(-1, 2), frac(1, 2)]);
        let sing = Matrix::from_i64(&ctx, &[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&sing, &[el(&ctx, 1), el(&ctx, 1)]), Err(Error::SingularMatrix));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&Matrix::identity(&q(), 3)).is_empty());
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(
            nullspace(&Matrix::from_i64(&f2, &[&[1, 1]])),
            vec![vec![el(&f2, 1), el(&f2, 1)]]
        );
        let empty = Matrix::from_rows(&q(), 3, vec![]).unwrap();
        let ns = nullspace(&empty);
        assert_eq!(ns.len(), 3);
        for (i, v) in ns.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert_eq!(x.is_zero(), i != j);
            }
        }
    }

    fn arb_matrix(ctx: Field, max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
            let ctx = ctx.clone();
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                let rows = v
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&x| el(&ctx, x)).collect())
                    .collect();
                Matrix::from_rows(&ctx, c, rows).unwrap()
            })
        })
    }

    fn contexts() -> Vec<Field> {
        vec![
            q(),
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(5).unwrap(),
            make_extension(2, 3).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn linear_algebra_identities(m in (0usize..4).prop_flat_map(|i| arb_matrix(contexts()[i].clone(), 6))) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
            for v in nullspace(&m) {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(nullspace(&m).len(), m.ncols() - rank(&m));
            if m.nrows() == m.ncols() {
                let d = det(&m).unwrap();
                prop_assert_eq!(!d.is_zero(), rank(&m) == m.nrows());
                if !d.is_zero() {
                    let b: Vec<_> = (0..m.nrows()).map(|i| el(m.ctx(), i as i64 - 1)).collect();
                    let x = solve(&m, &b).unwrap();
                    prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn rational_det_matches_cofactor_expansion() {
        fn cofactor(m: &[Vec<FieldElement>]) -> FieldElement {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = FieldElement::zero(m[0][0].ctx());
            for j in 0..n {
                let minor: Vec<Vec<FieldElement>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * &cofactor(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let ctx = q();
        let mut seed = 17u64;
        for n in 1..=5 {
            for _ in 0..10 {
                let rows: Vec<Vec<FieldElement>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                                let num = ((seed >> 33) % 11) as i64 - 5;
                                let den = ((seed >> 50) % 4) as i64 + 1;
                                frac(num, den)
                            })
                            .collect()
                    })
                    .collect();
                let m = Matrix::from_rows(&ctx, n, rows.clone()).unwrap();
                assert_eq!(det(&m).unwrap(), cofactor(&rows));
            }
        }
    }

    #[test]
    fn pivot_rows_stable_under_permuting_dependent_tail() {
        let ctx = q();
        let m1 = Matrix::from_i64(&ctx, &[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2], &[2, 0, 2], &[0, 3, 3]]);
        let m2 = Matrix::from_i64(&ctx, &[&[1, 0, 1], &[0, 1, 1], &[0, 3, 3], &[1, 1, 2], &[2, 0, 2]]);
        assert_eq!(rank_profile(&m1).1, vec![0, 1]);
        assert_eq!(rank_profile(&m2).1, vec![0, 1]);
    }

    #[test]
    fn inverse_round_trip() {
        let f5 = FieldCtx::prime(5).unwrap();
        let m = Matrix::from_i64(&f5, &[&[1, 2, 0], &[0, 1, 4], &[3, 0, 2]]);
        let inv = inverse(&m).unwrap();
        for j in 0..3 {
            let col: Vec<_> = (0..3).map(|i| inv.get(i, j).clone()).collect();
            let e = m.mul_vec(&col).unwrap();
            for (i, x) in e.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
            }
        }
    }
}
