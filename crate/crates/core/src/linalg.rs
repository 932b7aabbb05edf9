//! Exact linear algebra over any [`Field`], plus a small complex solver.
//!
//! Row reduction is fraction-free (Bareiss) in the forward pass, so that
//! polynomial matrices stay polynomial until the final normalisation.
//! Subspaces are kept as canonical reduced row echelon bases.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::field::Field;
use crate::scalars::BigComplex;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds a matrix from rows, which must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, r: Vec<F>) {
        assert_eq!(r.len(), self.cols, "ragged matrix");
        self.data.extend(r);
        self.rows += 1;
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] = m[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Fraction-free forward elimination. Returns the echelon form, the pivot
    /// columns and the sign of the row permutation.
    fn bareiss(&self) -> (Self, Vec<usize>, bool) {
        let mut m = self.clone();
        let mut prev = F::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut odd = false;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by_key(|&i| m[(i, c)].weight());
            let Some(p) = best else { continue };
            if p != r {
                m.swap_rows(p, r);
                odd = !odd;
            }
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                let f = m[(i, c)].clone();
                for j in c + 1..m.cols {
                    let v = piv.clone() * m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v.div(&prev).expect("previous pivot is nonzero");
                }
                m[(i, c)] = F::zero();
            }
            // Rows above r keep their scale; later multiplications only touch
            // rows below.
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (m, pivots, odd)
    }

    /// Reduced row echelon form and pivot columns. Pivot rows are normalized
    /// as they are found and only rows with a nonzero entry in the pivot
    /// column are touched, which keeps sparse tall systems cheap.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by_key(|&i| m[(i, c)].weight());
            let Some(p) = best else { continue };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].clone() * inv.clone();
                }
            }
            let support: Vec<usize> = (c + 1..m.cols).filter(|&j| !m[(r, j)].is_zero()).collect();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for &j in &support {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                }
                m[(i, c)] = F::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return F::one();
        }
        let (m, pivots, odd) = self.bareiss();
        if pivots.len() < self.rows {
            return F::zero();
        }
        let d = m[(self.rows - 1, self.cols - 1)].clone();
        if odd {
            -d
        } else {
            d
        }
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (m, pivots) = self.rref();
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); self.cols];
            v[f] = F::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[(r, f)].clone();
            }
            out.push(v);
        }
        out
    }

    /// One solution of `M x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = F::one();
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = m[(r, n + c)].clone();
            }
        }
        Some(inv)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

/// A subspace of `F^ambient` with a canonical RREF basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, Matrix::<F>::identity(ambient).row_vecs())
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (m, pivots) = Matrix::from_rows(ambient, vectors).rref();
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    /// `{x : M x = 0}`.
    pub fn kernel_of(m: &Matrix<F>) -> Self {
        Self::span(m.cols(), m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after reducing by the RREF basis. Zero iff `v` lies in
    /// the subspace.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(Field::is_zero)
    }

    pub fn contains_space(&self, o: &Self) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Self::span(self.ambient, v)
    }

    /// Vectors orthogonal to the subspace under the standard bilinear form.
    pub fn annihilator(&self) -> Vec<Vec<F>> {
        if self.basis.is_empty() {
            return Matrix::<F>::identity(self.ambient).row_vecs();
        }
        Matrix::from_rows(self.ambient, self.basis.clone()).kernel()
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let mut eqs = self.annihilator();
        eqs.extend(o.annihilator());
        if eqs.is_empty() {
            return Self::full(self.ambient);
        }
        Self::kernel_of(&Matrix::from_rows(self.ambient, eqs))
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Whether `vectors` stay linearly independent modulo `sub`.
pub fn independent_modulo<F: Field>(vectors: &[Vec<F>], sub: &Subspace<F>) -> bool {
    let mut all = sub.basis().to_vec();
    all.extend(vectors.iter().cloned());
    Subspace::span(sub.ambient(), all).dim() == sub.dim() + vectors.len()
}

/// Diagnostics from [`solve_complex`].
#[derive(Clone, Debug, Default)]
pub struct ComplexSolveInfo {
    /// Complete pivoting was used because a partial pivot looked tiny.
    pub complete_pivoting: bool,
    /// Smallest pivot exponent relative to the largest entry, in bits.
    pub pivot_drop_bits: i64,
}

/// Solves `A X = B` over arbitrary-precision complex numbers. Returns `None`
/// if `A` is numerically singular at the working precision.
pub fn solve_complex(a: &[Vec<BigComplex>], b: &[Vec<BigComplex>]) -> Option<(Vec<Vec<BigComplex>>, ComplexSolveInfo)> {
    let n = a.len();
    let prec = a.first()?.first()?.prec();
    let threshold = (prec / 2) as i64;
    match lu_solve(a, b, false, threshold) {
        Some((x, drop)) if drop <= threshold => Some((
            x,
            ComplexSolveInfo {
                complete_pivoting: false,
                pivot_drop_bits: drop,
            },
        )),
        _ => {
            let (x, drop) = lu_solve(a, b, true, threshold)?;
            let _ = n;
            Some((
                x,
                ComplexSolveInfo {
                    complete_pivoting: true,
                    pivot_drop_bits: drop,
                },
            ))
        }
    }
}

fn lu_solve(
    a: &[Vec<BigComplex>],
    b: &[Vec<BigComplex>],
    complete: bool,
    threshold: i64,
) -> Option<(Vec<Vec<BigComplex>>, i64)> {
    let n = a.len();
    let mut m: Vec<Vec<BigComplex>> = a.to_vec();
    let mut rhs: Vec<Vec<BigComplex>> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let top = m
        .iter()
        .flatten()
        .map(BigComplex::magnitude_exp)
        .max()
        .unwrap_or(i64::MIN);
    if top == i64::MIN {
        return None;
    }
    let mut worst = 0i64;
    for k in 0..n {
        let (pr, pc) = if complete {
            let mut best = (k, k, i64::MIN);
            for (i, row) in m.iter().enumerate().skip(k) {
                for (j, x) in row.iter().enumerate().skip(k) {
                    let e = x.magnitude_exp();
                    if e > best.2 {
                        best = (i, j, e);
                    }
                }
            }
            (best.0, best.1)
        } else {
            let i = (k..n).max_by_key(|&i| m[i][k].magnitude_exp()).unwrap_or(k);
            (i, k)
        };
        let e = m[pr][pc].magnitude_exp();
        if e == i64::MIN {
            return None;
        }
        worst = worst.max(top - e);
        if complete && top - e > 2 * threshold {
            return None;
        }
        m.swap(k, pr);
        rhs.swap(k, pr);
        if pc != k {
            for row in m.iter_mut() {
                row.swap(k, pc);
            }
            perm.swap(k, pc);
        }
        let inv = m[k][k].recip()?;
        for i in k + 1..n {
            let f = &m[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let d = &f * &m[k][j];
                m[i][j] = &m[i][j] - &d;
            }
            for j in 0..rhs[i].len() {
                let d = &f * &rhs[k][j];
                rhs[i][j] = &rhs[i][j] - &d;
            }
        }
    }
    let cols = rhs.first().map_or(0, Vec::len);
    let prec = m[0][0].prec();
    let mut x = vec![vec![BigComplex::zero(prec); cols]; n];
    for c in 0..cols {
        for i in (0..n).rev() {
            let mut s = rhs[i][c].clone();
            for j in i + 1..n {
                let d = &m[i][j] * &x[j][c];
                s = &s - &d;
            }
            x[i][c] = &s / &m[i][i];
        }
    }
    // undo the column permutation
    let mut out = vec![vec![BigComplex::zero(prec); cols]; n];
    for (k, &orig) in perm.iter().enumerate() {
        out[orig] = x[k].clone();
    }
    Some((out, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::{int, rat};
    use crate::scalars::Rational;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows[0].len();
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rref_rank_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Field::is_zero));
        let (r, p) = a.rref();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r.row(0), &[int(1), int(0), int(1)]);
    }

    #[test]
    fn det_inverse_solve() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), int(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        let x = a.solve(&[int(1), int(2), int(3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(1), int(2), int(3)]);
        let s = m(&[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[int(1), int(2)]).is_none());
        assert!(s.inverse().is_none());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), int(-1));
    }

    #[test]
    fn subspace_operations() {
        let u = Subspace::span(3, vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]]);
        let w = Subspace::span(3, vec![vec![int(0), int(1), int(0)], vec![int(0), int(0), int(1)]]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[int(0), rat(5, 2), int(0)]));
        assert_eq!(u.sum(&w).dim(), 3);
        assert!(independent_modulo(&[vec![int(0), int(0), int(1)]], &u));
        assert!(!independent_modulo(&[vec![int(1), int(1), int(0)]], &u));
    }

    #[test]
    fn complex_solver() {
        let p = 128;
        let c = |x: f64, y: f64| BigComplex::from_f64(x, y, p);
        let a = vec![vec![c(0.0, 0.0), c(1.0, 1.0)], vec![c(2.0, 0.0), c(1.0, 0.0)]];
        let b = vec![vec![c(1.0, 1.0)], vec![c(3.0, 0.0)]];
        let (x, _) = solve_complex(&a, &b).unwrap();
        let (re0, im0) = x[0][0].to_f64_pair();
        let (re1, _) = x[1][0].to_f64_pair();
        assert!((re0 - 1.0).abs() < 1e-15 && im0.abs() < 1e-15);
        assert!((re1 - 1.0).abs() < 1e-15);
        let sing = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]];
        assert!(solve_complex(&sing, &b).is_none());
    }
}
