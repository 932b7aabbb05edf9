//! Structure-constant algebras, identity checks and invariants.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::field::Field;
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Cyclo12, RatFun, Vars};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter {0} takes an excluded value")]
    ExcludedParameter(String),
    #[error("parameter {0} has no value")]
    MissingParameter(String),
    #[error("structure constant has a pole at the given parameters")]
    Pole,
}

/// A formal parameter of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    /// Index of the parameter in the shared [`Vars`] table.
    pub var: usize,
    pub excluded: Vec<Cyclo12>,
}

/// `eᵢeⱼ = Σₖ c[i][j][k] eₖ`, zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra<F> {
    pub name: String,
    dim: usize,
    consts: Vec<F>,
    pub params: Vec<Param>,
}

/// One failing triple of the antiassociative identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityViolation<F> {
    pub triple: (usize, usize, usize),
    pub residual: Vec<F>,
}

/// Dimensions of the power chain `A ⊇ A² ⊇ A³ ⊇ A⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerChain {
    pub a2: usize,
    pub a3: usize,
    pub a4: usize,
    /// `A²·A²`, which the chain `A^{k−1}A + AA^{k−1}` does not include.
    pub a2a2: usize,
}

impl PowerChain {
    pub fn is_nilpotent4(&self) -> bool {
        self.a4 == 0 && self.a2a2 == 0
    }
}

impl<F: Field> Algebra<F> {
    pub fn zero(name: &str, dim: usize) -> Self {
        Algebra {
            name: name.to_string(),
            dim,
            consts: vec![F::zero(); dim * dim * dim],
            params: Vec::new(),
        }
    }

    /// Builds an algebra from `(i, j, eᵢeⱼ)` triples with zero-based indices.
    pub fn from_products(name: &str, dim: usize, products: Vec<(usize, usize, Vec<F>)>) -> Self {
        let mut a = Self::zero(name, dim);
        for (i, j, v) in products {
            assert_eq!(v.len(), dim, "product vector length");
            for (k, x) in v.into_iter().enumerate() {
                a.set(i, j, k, x);
            }
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &F {
        &self.consts[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: F) {
        let ix = self.idx(i, j, k);
        self.consts[ix] = v;
    }

    /// `eᵢeⱼ` as a coordinate vector.
    pub fn product(&self, i: usize, j: usize) -> &[F] {
        let s = self.idx(i, j, 0);
        &self.consts[s..s + self.dim]
    }

    pub fn constants(&self) -> &[F] {
        &self.consts
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Algebra<G> {
        Algebra {
            name: self.name.clone(),
            dim: self.dim,
            consts: self.consts.iter().map(f).collect(),
            params: self.params.clone(),
        }
    }

    /// Bilinear product of coordinate vectors.
    pub fn multiply(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim;
        let mut out = vec![F::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let s = x[i].clone() * y[j].clone();
                for (k, c) in self.product(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + s.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        v[i] = F::one();
        v
    }

    /// All triples where `(eᵢeⱼ)eₖ + eᵢ(eⱼeₖ) ≠ 0`.
    pub fn antiassociativity_violations(&self) -> Vec<IdentityViolation<F>> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j).to_vec();
                for k in 0..n {
                    let jk = self.product(j, k).to_vec();
                    let l = self.multiply(&ij, &self.basis_vector(k));
                    let r = self.multiply(&self.basis_vector(i), &jk);
                    let res: Vec<F> = l.into_iter().zip(r).map(|(a, b)| a + b).collect();
                    if res.iter().any(|x| !x.is_zero()) {
                        out.push(IdentityViolation {
                            triple: (i, j, k),
                            residual: res,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_antiassociative(&self) -> bool {
        self.antiassociativity_violations().is_empty()
    }

    /// Span of all products `x·y` with `x ∈ U`, `y ∈ W`.
    pub fn subspace_product(&self, u: &Subspace<F>, w: &Subspace<F>) -> Subspace<F> {
        let mut vs = Vec::new();
        for x in u.basis() {
            for y in w.basis() {
                let p = self.multiply(x, y);
                if p.iter().any(|c| !c.is_zero()) {
                    vs.push(p);
                }
            }
        }
        Subspace::span(self.dim, vs)
    }

    pub fn square(&self) -> Subspace<F> {
        let full = Subspace::full(self.dim);
        self.subspace_product(&full, &full)
    }

    /// Power chain with `Aᵏ = A^{k−1}·A + A·A^{k−1}`, plus `A²·A²`.
    pub fn power_chain(&self) -> PowerChain {
        let a = Subspace::full(self.dim);
        let a2 = self.subspace_product(&a, &a);
        let step = |p: &Subspace<F>| self.subspace_product(p, &a).sum(&self.subspace_product(&a, p));
        let a3 = step(&a2);
        let a4 = step(&a3);
        let a2a2 = self.subspace_product(&a2, &a2);
        PowerChain {
            a2: a2.dim(),
            a3: a3.dim(),
            a4: a4.dim(),
            a2a2: a2a2.dim(),
        }
    }

    /// `{x : xA = 0}`.
    pub fn left_annihilator(&self) -> Subspace<F> {
        self.annihilator_sides(true, false)
    }

    /// `{x : Ax = 0}`.
    pub fn right_annihilator(&self) -> Subspace<F> {
        self.annihilator_sides(false, true)
    }

    /// `{x : xA = Ax = 0}`.
    pub fn annihilator(&self) -> Subspace<F> {
        self.annihilator_sides(true, true)
    }

    fn annihilator_sides(&self, left: bool, right: bool) -> Subspace<F> {
        let n = self.dim;
        let mut m = Matrix::zeros(0, n);
        for j in 0..n {
            for k in 0..n {
                if left {
                    m.push_row((0..n).map(|i| self.get(i, j, k).clone()).collect());
                }
                if right {
                    m.push_row((0..n).map(|i| self.get(j, i, k).clone()).collect());
                }
            }
        }
        if n == 0 {
            return Subspace::zero(0);
        }
        Subspace::kernel_of(&m)
    }

    /// Linear system whose kernel is `Der(A)`; unknown `D[k][m]` sits at
    /// `k·n + m` and `d(eₘ) = Σₖ D[k][m] eₖ`.
    pub fn derivation_system(&self) -> Matrix<F> {
        let n = self.dim;
        let mut m = Matrix::zeros(0, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut row = vec![F::zero(); n * n];
                    for mm in 0..n {
                        let c = self.get(i, j, mm);
                        if !c.is_zero() {
                            row[k * n + mm] = row[k * n + mm].clone() + c.clone();
                        }
                    }
                    for l in 0..n {
                        let c = self.get(l, j, k);
                        if !c.is_zero() {
                            row[l * n + i] = row[l * n + i].clone() - c.clone();
                        }
                        let c = self.get(i, l, k);
                        if !c.is_zero() {
                            row[l * n + j] = row[l * n + j].clone() - c.clone();
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        m.push_row(row);
                    }
                }
            }
        }
        m
    }

    /// `Der(A)` as a subspace of `n×n` matrices flattened row-major.
    pub fn derivations(&self) -> Subspace<F> {
        let n = self.dim;
        let sys = self.derivation_system();
        if sys.rows() == 0 {
            return Subspace::full(n * n);
        }
        Subspace::kernel_of(&sys)
    }

    /// `n² − dim Der(A)`.
    pub fn orbit_dim(&self) -> usize {
        self.dim * self.dim - self.derivations().dim()
    }

    /// Constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Algebra<F>, AlgebraError> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                got: p.rows(),
            });
        }
        let inv = p.inverse().ok_or(AlgebraError::SingularBasis)?;
        let cols: Vec<Vec<F>> = (0..n).map(|i| p.column(i)).collect();
        let mut out = Algebra::zero(&self.name, n);
        out.params = self.params.clone();
        for i in 0..n {
            for j in 0..n {
                let v = self.multiply(&cols[i], &cols[j]);
                let c = inv.mul_vec(&v);
                for (k, x) in c.into_iter().enumerate() {
                    out.set(i, j, k, x);
                }
            }
        }
        Ok(out)
    }

    /// The conjugated product `g·μ(g⁻¹x, g⁻¹y)` in the standard basis.
    pub fn random_basis_change(&self, g: &Matrix<F>) -> Result<Algebra<F>, AlgebraError> {
        let inv = g.inverse().ok_or(AlgebraError::SingularBasis)?;
        self.change_basis(&inv)
    }

    /// `A ⊕ C^k` with the new basis vectors annihilating everything.
    pub fn direct_sum_trivial(&self, k: usize, name: &str) -> Algebra<F> {
        let n = self.dim;
        let mut out = Algebra::zero(name, n + k);
        out.params = self.params.clone();
        for i in 0..n {
            for j in 0..n {
                for kk in 0..n {
                    out.set(i, j, kk, self.get(i, j, kk).clone());
                }
            }
        }
        out
    }
}

impl Algebra<RatFun> {
    /// Substitutes parameter values.
    pub fn instantiate(&self, values: &[(usize, Cyclo12)]) -> Result<Algebra<Cyclo12>, AlgebraError> {
        for p in &self.params {
            match values.iter().find(|(v, _)| *v == p.var) {
                None => return Err(AlgebraError::MissingParameter(p.name.clone())),
                Some((_, x)) if p.excluded.contains(x) => return Err(AlgebraError::ExcludedParameter(p.name.clone())),
                _ => {}
            }
        }
        let mut consts = Vec::with_capacity(self.consts.len());
        for c in &self.consts {
            consts.push(c.eval_cyclo(values).ok_or(AlgebraError::Pole)?);
        }
        Ok(Algebra {
            name: self.name.clone(),
            dim: self.dim,
            consts,
            params: Vec::new(),
        })
    }

    /// Algebra with constant coefficients, if no parameter occurs.
    pub fn as_constant(&self) -> Option<Algebra<Cyclo12>> {
        let consts: Option<Vec<_>> = self.consts.iter().map(RatFun::as_constant).collect();
        Some(Algebra {
            name: self.name.clone(),
            dim: self.dim,
            consts: consts?,
            params: Vec::new(),
        })
    }

    /// Human-readable multiplication table.
    pub fn table_string(&self, vars: &Vars) -> String {
        let n = self.dim;
        let mut parts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.product(i, j);
                if v.iter().all(RatFun::is_zero) {
                    continue;
                }
                parts.push(alloc::format!("e{}e{} = {}", i + 1, j + 1, vector_string(v, vars)));
            }
        }
        if parts.is_empty() {
            "(all products vanish)".to_string()
        } else {
            parts.join(", ")
        }
    }
}

/// Renders `Σ vₖ eₖ`.
pub fn vector_string(v: &[RatFun], vars: &Vars) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_expr_string(vars);
        let term = if c.is_one() {
            alloc::format!("e{}", k + 1)
        } else if s == "-1" {
            alloc::format!("-e{}", k + 1)
        } else if s.contains(' ') {
            alloc::format!("({s})*e{}", k + 1)
        } else {
            alloc::format!("{s}*e{}", k + 1)
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl Algebra<Cyclo12> {
    pub fn to_ratfun(&self) -> Algebra<RatFun> {
        self.map(|c| RatFun::constant(c.clone()))
    }
}

/// Basis-independent invariants used to separate isomorphism classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub ann: usize,
    pub a2: usize,
    pub a3: usize,
    pub a4: usize,
    pub left_ann: usize,
    pub right_ann: usize,
    pub der: usize,
    pub z2: usize,
    pub h2: usize,
    pub ann_cap_a2: usize,
}

impl<F: Field> Algebra<F> {
    pub fn fingerprint(&self) -> Fingerprint {
        let chain = self.power_chain();
        let ann = self.annihilator();
        let a2 = self.square();
        let coh = crate::cohomology::compute_h2(self);
        Fingerprint {
            dim: self.dim,
            ann: ann.dim(),
            a2: chain.a2,
            a3: chain.a3,
            a4: chain.a4,
            left_ann: self.left_annihilator().dim(),
            right_ann: self.right_annihilator().dim(),
            der: self.derivations().dim(),
            z2: coh.z2.dim(),
            h2: coh.reps.len(),
            ann_cap_a2: ann.intersect(&a2).dim(),
        }
    }
}
