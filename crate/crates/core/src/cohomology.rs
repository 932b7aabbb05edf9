//! Second cohomology with trivial coefficients, the automorphism action on
//! cocycles and central extensions.
//!
//! A bilinear form `θ` is stored as an `n×n` matrix with `θ[i][j] = θ(eᵢ, eⱼ)`
//! and, when flattened, at index `i·n + j`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::field::Field;
use crate::linalg::{independent_modulo, Matrix, Subspace};
use crate::scalars::{Cyclo12, RatFun};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("cocycle {0} violates the cocycle condition")]
    NotCocycle(usize),
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error("dimension mismatch")]
    Dimension,
    #[error("transformed cocycle leaves the span of the listed classes")]
    OutsideSpan,
}

/// A scalar bilinear form on an `n`-dimensional algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle<F> {
    pub m: Matrix<F>,
}

impl<F: Field> Cocycle<F> {
    pub fn zero(n: usize) -> Self {
        Cocycle { m: Matrix::zeros(n, n) }
    }

    /// The elementary form `Δᵢⱼ` (zero-based).
    pub fn delta(n: usize, i: usize, j: usize) -> Self {
        let mut c = Self::zero(n);
        c.m[(i, j)] = F::one();
        c
    }

    pub fn from_flat(n: usize, v: &[F]) -> Self {
        let mut c = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                c.m[(i, j)] = v[i * n + j].clone();
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn flat(&self) -> Vec<F> {
        let n = self.dim();
        (0..n * n).map(|k| self.m[(k / n, k % n)].clone()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.dim();
        let v: Vec<F> = self.flat().into_iter().zip(o.flat()).map(|(a, b)| a + b).collect();
        Self::from_flat(n, &v)
    }

    pub fn scale(&self, c: &F) -> Self {
        let n = self.dim();
        let v: Vec<F> = self.flat().into_iter().map(|a| a * c.clone()).collect();
        Self::from_flat(n, &v)
    }

    /// `θ(x, y)` for coordinate vectors.
    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        let my = self.m.mul_vec(y);
        crate::linalg::dot(x, &my)
    }
}

/// Linear constraints `θ(eᵢeⱼ, eₖ) + θ(eᵢ, eⱼeₖ) = 0` on the `n²` entries.
pub fn z2_system<F: Field>(a: &Algebra<F>) -> Matrix<F> {
    let n = a.dim();
    let mut sys = Matrix::zeros(0, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![F::zero(); n * n];
                for m in 0..n {
                    let c = a.get(i, j, m);
                    if !c.is_zero() {
                        row[m * n + k] = row[m * n + k].clone() + c.clone();
                    }
                    let c = a.get(j, k, m);
                    if !c.is_zero() {
                        row[i * n + m] = row[i * n + m].clone() + c.clone();
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    sys.push_row(row);
                }
            }
        }
    }
    sys
}

pub fn compute_z2<F: Field>(a: &Algebra<F>) -> Subspace<F> {
    let n = a.dim();
    let sys = z2_system(a);
    if sys.rows() == 0 {
        return Subspace::full(n * n);
    }
    Subspace::kernel_of(&sys)
}

/// Generators `δe*ₘ = (c_{ij}^m)_{ij}` of `B²`, one per `m`.
pub fn b2_generators<F: Field>(a: &Algebra<F>) -> Vec<Vec<F>> {
    let n = a.dim();
    (0..n)
        .map(|m| {
            let mut v = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    v.push(a.get(i, j, m).clone());
                }
            }
            v
        })
        .collect()
}

pub fn compute_b2<F: Field>(a: &Algebra<F>) -> Subspace<F> {
    Subspace::span(a.dim() * a.dim(), b2_generators(a))
}

/// `Z²`, `B²` and a transversal of `B²` in `Z²`.
#[derive(Clone, Debug)]
pub struct CohomologySpaces<F> {
    pub z2: Subspace<F>,
    pub b2: Subspace<F>,
    pub reps: Vec<Cocycle<F>>,
}

impl<F: Field> CohomologySpaces<F> {
    pub fn h2_dim(&self) -> usize {
        self.reps.len()
    }
}

/// Representatives are the RREF rows of `Z²` taken greedily whenever they are
/// independent of `B²` plus those already chosen, which makes the choice
/// canonical.
pub fn compute_h2<F: Field>(a: &Algebra<F>) -> CohomologySpaces<F> {
    let n = a.dim();
    let z2 = compute_z2(a);
    let b2 = compute_b2(a);
    let mut acc = b2.clone();
    let mut reps = Vec::new();
    for v in z2.basis() {
        if !acc.contains(v) {
            acc = acc.sum(&Subspace::span(n * n, vec![v.clone()]));
            reps.push(Cocycle::from_flat(n, v));
        }
    }
    CohomologySpaces { z2, b2, reps }
}

pub fn is_cocycle<F: Field>(a: &Algebra<F>, theta: &Cocycle<F>) -> bool {
    let sys = z2_system(a);
    let v = theta.flat();
    (0..sys.rows()).all(|r| crate::linalg::dot(sys.row(r), &v).is_zero())
}

/// Whether the classes of `cocycles` are independent modulo `B²`.
pub fn independent_classes<F: Field>(a: &Algebra<F>, cocycles: &[Cocycle<F>]) -> bool {
    let vs: Vec<Vec<F>> = cocycles.iter().map(Cocycle::flat).collect();
    independent_modulo(&vs, &compute_b2(a))
}

/// `Ann(θ) = {x : θ(x, A) = θ(A, x) = 0}`.
pub fn cocycle_annihilator<F: Field>(theta: &Cocycle<F>) -> Subspace<F> {
    let n = theta.dim();
    let mut m = theta.m.transpose();
    for r in 0..n {
        m.push_row(theta.m.row(r).to_vec());
    }
    if n == 0 {
        return Subspace::zero(0);
    }
    Subspace::kernel_of(&m)
}

/// Outcome of the `T_s` test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsReport {
    /// `dim(∩ Ann(θᵢ) ∩ Ann(A))`.
    pub radical_dim: usize,
    pub independent: bool,
    pub holds: bool,
}

pub fn check_ts<F: Field>(a: &Algebra<F>, cocycles: &[Cocycle<F>]) -> TsReport {
    if cocycles.is_empty() {
        return TsReport {
            radical_dim: a.annihilator().dim(),
            independent: false,
            holds: false,
        };
    }
    let mut rad = a.annihilator();
    for c in cocycles {
        rad = rad.intersect(&cocycle_annihilator(c));
    }
    let independent = independent_classes(a, cocycles);
    TsReport {
        radical_dim: rad.dim(),
        independent,
        holds: rad.is_zero() && independent,
    }
}

/// `A ⊕ V` with `eᵢeⱼ = Σ c + Σ_r θ_r(eᵢ, eⱼ) e_{n+r}`.
pub fn central_extension<F: Field>(
    a: &Algebra<F>,
    cocycles: &[Cocycle<F>],
    name: &str,
) -> Result<Algebra<F>, CohomologyError> {
    let n = a.dim();
    for (r, c) in cocycles.iter().enumerate() {
        if c.dim() != n {
            return Err(CohomologyError::Dimension);
        }
        if !is_cocycle(a, c) {
            return Err(CohomologyError::NotCocycle(r));
        }
    }
    let mut out = a.direct_sum_trivial(cocycles.len(), name);
    for (r, c) in cocycles.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, n + r, c.m[(i, j)].clone());
            }
        }
    }
    Ok(out)
}

/// Whether `φ` (columns are images of basis vectors) satisfies
/// `φ(eᵢeⱼ) = φ(eᵢ)φ(eⱼ)` and is invertible.
pub fn is_automorphism<F: Field>(a: &Algebra<F>, phi: &Matrix<F>) -> bool {
    let n = a.dim();
    if phi.rows() != n || phi.cols() != n || phi.det().is_zero() {
        return false;
    }
    let cols: Vec<Vec<F>> = (0..n).map(|i| phi.column(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = phi.mul_vec(a.product(i, j));
            let rhs = a.multiply(&cols[i], &cols[j]);
            if lhs != rhs && lhs.iter().zip(&rhs).any(|(x, y)| !(x.clone() - y.clone()).is_zero()) {
                return false;
            }
        }
    }
    true
}

/// `(φθ)(x, y) = θ(φx, φy)`, i.e. the matrix `φᵀθφ`.
pub fn aut_action<F: Field>(
    a: &Algebra<F>,
    phi: &Matrix<F>,
    theta: &Cocycle<F>,
) -> Result<Cocycle<F>, CohomologyError> {
    if !is_automorphism(a, phi) {
        return Err(CohomologyError::NotAutomorphism);
    }
    Ok(Cocycle {
        m: phi.transpose().mul(&theta.m).mul(phi),
    })
}

/// Coordinates of `θ` on `generators` modulo `B²`.
pub fn h2_coordinates<F: Field>(
    a: &Algebra<F>,
    generators: &[Cocycle<F>],
    theta: &Cocycle<F>,
) -> Result<Vec<F>, CohomologyError> {
    let n = a.dim();
    let mut cols: Vec<Vec<F>> = generators.iter().map(Cocycle::flat).collect();
    cols.extend(b2_generators(a));
    let k = cols.len();
    let mut m = Matrix::zeros(n * n, k);
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            m[(r, c)] = x.clone();
        }
    }
    let x = m.solve(&theta.flat()).ok_or(CohomologyError::OutsideSpan)?;
    Ok(x[..generators.len()].to_vec())
}

/// A family's automorphism shape together with the displayed
/// transformation formulas `α*ᵢ`.
#[derive(Clone, Debug)]
pub struct AlphaFormulaSet {
    pub id: String,
    pub algebra: Algebra<RatFun>,
    pub generators: Vec<Cocycle<RatFun>>,
    /// Variables standing for `α₁, …, α_s`.
    pub alpha_vars: Vec<usize>,
    pub phi: Matrix<RatFun>,
    pub formulas: Vec<RatFun>,
}

#[derive(Clone, Debug)]
pub struct AlphaCheck {
    pub index: usize,
    pub computed: RatFun,
    pub expected: RatFun,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct AlphaReport {
    pub automorphism: bool,
    pub checks: Vec<AlphaCheck>,
    pub error: Option<CohomologyError>,
}

impl AlphaReport {
    pub fn passed(&self) -> bool {
        self.automorphism && self.error.is_none() && self.checks.iter().all(|c| c.ok)
    }
}

fn generic_cocycle(set: &AlphaFormulaSet) -> Cocycle<RatFun> {
    let n = set.algebra.dim();
    let mut theta = Cocycle::zero(n);
    for (g, v) in set.generators.iter().zip(&set.alpha_vars) {
        theta = theta.add(&g.scale(&RatFun::var(*v)));
    }
    theta
}

/// Computes the coordinates of `φᵀθφ` of the generic cocycle `Σ αᵢ∇ᵢ` modulo `B²`
/// and compares them with the displayed formulas.
pub fn verify_alpha_formulas(set: &AlphaFormulaSet) -> AlphaReport {
    let theta = generic_cocycle(set);
    let moved = match aut_action(&set.algebra, &set.phi, &theta) {
        Ok(m) => m,
        Err(e) => {
            return AlphaReport {
                automorphism: false,
                checks: Vec::new(),
                error: Some(e),
            }
        }
    };
    match h2_coordinates(&set.algebra, &set.generators, &moved) {
        Ok(coords) => AlphaReport {
            automorphism: true,
            checks: coords
                .into_iter()
                .zip(&set.formulas)
                .enumerate()
                .map(|(index, (computed, expected))| AlphaCheck {
                    index,
                    ok: computed == *expected,
                    computed,
                    expected: expected.clone(),
                })
                .collect(),
            error: None,
        },
        Err(e) => AlphaReport {
            automorphism: true,
            checks: Vec::new(),
            error: Some(e),
        },
    }
}

/// One stated orbit reduction, instantiated at a sample point.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Values of every symbol in the family, the `α`s and the entries of `φ`.
    pub point: Vec<(usize, Cyclo12)>,
    /// Subspace to move, as coefficient vectors on the generators.
    pub input: Vec<Vec<Cyclo12>>,
    /// Claimed representative, same encoding.
    pub expected: Vec<Vec<Cyclo12>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("value missing or pole at the sample point")]
    Evaluation,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// Moves the input subspace by `φ` and checks that it spans the claimed
/// subspace of `H²`.
pub fn verify_reduction(set: &AlphaFormulaSet, red: &Reduction) -> Result<bool, ReductionError> {
    let a = set
        .algebra
        .instantiate(&red.point)
        .map_err(|_| ReductionError::Evaluation)?;
    let ev = |r: &RatFun| r.eval_cyclo(&red.point).ok_or(ReductionError::Evaluation);
    let n = a.dim();
    let mut phi = Matrix::<Cyclo12>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            phi[(i, j)] = ev(&set.phi[(i, j)])?;
        }
    }
    let gens: Vec<Cocycle<Cyclo12>> = set
        .generators
        .iter()
        .map(|g| {
            Ok(Cocycle {
                m: g.m.map(|x| ev(x).unwrap_or_default()),
            })
        })
        .collect::<Result<_, ReductionError>>()?;
    let combine = |coeffs: &[Cyclo12]| {
        let mut t = Cocycle::zero(n);
        for (g, c) in gens.iter().zip(coeffs) {
            t = t.add(&g.scale(c));
        }
        t
    };
    let mut moved = Vec::new();
    for v in &red.input {
        let t = aut_action(&a, &phi, &combine(v))?;
        moved.push(h2_coordinates(&a, &gens, &t)?);
    }
    let s = gens.len();
    let got = Subspace::span(s, moved);
    let want = Subspace::span(s, red.expected.clone());
    Ok(got == want && got.dim() == red.input.len())
}

/// Generic rank test for "every cocycle has `Ann(θ) ∩ Ann(A) ≠ 0`": builds the
/// system for `x ∈ Ann(A)` with `θ = Σ αᵢ∇ᵢ` symbolic and returns
/// `(generic rank, dim Ann(A))`. A rank below `dim Ann(A)` proves the claim
/// for every choice of the `αᵢ`.
pub fn generic_radical_rank(
    a: &Algebra<RatFun>,
    generators: &[Cocycle<RatFun>],
    alpha_vars: &[usize],
) -> (usize, usize) {
    let n = a.dim();
    let ann = a.annihilator();
    let mut theta = Cocycle::zero(n);
    for (g, v) in generators.iter().zip(alpha_vars) {
        theta = theta.add(&g.scale(&RatFun::var(*v)));
    }
    let basis = ann.basis().to_vec();
    if basis.is_empty() {
        return (0, 0);
    }
    // rows: θ(x, eⱼ) and θ(eⱼ, x) for x = Σ y_k a_k
    let mut m = Matrix::zeros(0, basis.len());
    for j in 0..n {
        let ej: Vec<RatFun> = a.basis_vector(j);
        m.push_row(basis.iter().map(|b| theta.eval(b, &ej)).collect());
        m.push_row(basis.iter().map(|b| theta.eval(&ej, b)).collect());
    }
    (m.rank(), basis.len())
}

/// Parses `Δ`-expressions such as `D12 - D21 + 2*D33` into cocycles. The
/// expression is evaluated by the caller; this helper names the symbols.
pub fn delta_symbols(n: usize) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            v.push(alloc::format!("D{i}{j}"));
        }
    }
    v
}

/// Builds a cocycle from coefficients keyed by `Dij` names.
pub fn cocycle_from_deltas<F: Field>(n: usize, coeffs: &BTreeMap<String, F>) -> Cocycle<F> {
    let mut c = Cocycle::zero(n);
    for i in 0..n {
        for j in 0..n {
            if let Some(v) = coeffs.get(&alloc::format!("D{}{}", i + 1, j + 1)) {
                c.m[(i, j)] = v.clone();
            }
        }
    }
    c
}

/// Short label for error messages.
pub fn describe(err: &CohomologyError) -> String {
    err.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::int;
    use crate::scalars::Rational;

    fn n31() -> Algebra<Rational> {
        let mut v = vec![int(0); 3];
        v[1] = int(1);
        Algebra::from_products("N3.1", 3, vec![(0, 0, v)])
    }

    fn d(i: usize, j: usize) -> Cocycle<Rational> {
        Cocycle::delta(3, i - 1, j - 1)
    }

    #[test]
    fn spaces_of_small_algebra() {
        let a = n31();
        let sys = z2_system(&a);
        assert_eq!(sys.rank(), 4);
        assert_eq!(compute_z2(&a).dim(), 5);
        assert_eq!(compute_b2(&a).dim(), 1);
        let h = compute_h2(&a);
        assert_eq!(h.h2_dim(), 4);
        assert!(h.z2.contains_space(&h.b2));
        let listed = [d(1, 2).add(&d(2, 1).scale(&int(-1))), d(1, 3), d(3, 1), d(3, 3)];
        assert!(listed.iter().all(|c| is_cocycle(&a, c)));
        assert!(independent_classes(&a, &listed));
        assert!(!is_cocycle(&a, &d(2, 2)));
    }

    #[test]
    fn annihilators_and_ts() {
        let a = n31();
        let n1 = d(1, 2).add(&d(2, 1).scale(&int(-1)));
        let n2 = d(1, 3);
        assert_eq!(
            cocycle_annihilator(&n1),
            Subspace::span(3, vec![vec![int(0), int(0), int(1)]])
        );
        assert_eq!(
            cocycle_annihilator(&n2),
            Subspace::span(3, vec![vec![int(0), int(1), int(0)]])
        );
        assert_eq!(cocycle_annihilator(&d(3, 3)).dim(), 2);
        assert_eq!(cocycle_annihilator(&Cocycle::<Rational>::zero(3)).dim(), 3);
        assert!(check_ts(&a, &[n1.add(&n2)]).holds);
        assert!(!check_ts(&a, core::slice::from_ref(&n1)).holds);
        assert!(!check_ts(&a, &[]).holds);
    }

    #[test]
    fn extension_and_action() {
        let a = n31();
        let n1 = d(1, 2).add(&d(2, 1).scale(&int(-1)));
        let ext = central_extension(&a, &[n1.add(&d(1, 3))], "x").unwrap();
        assert!(ext.is_antiassociative());
        assert_eq!(ext.get(0, 1, 3), &int(1));
        assert_eq!(ext.get(1, 0, 3), &int(-1));
        assert_eq!(
            central_extension(&a, &[d(2, 2)], "x"),
            Err(CohomologyError::NotCocycle(0))
        );
        let split = central_extension(&a, &[Cocycle::zero(3)], "s").unwrap();
        assert_eq!(split.annihilator().dim(), a.annihilator().dim() + 1);
        let id = Matrix::identity(3);
        assert_eq!(aut_action(&a, &id, &n1).unwrap(), n1);
        let bad = Matrix::from_rows(
            3,
            vec![
                vec![int(1), int(0), int(0)],
                vec![int(0), int(2), int(0)],
                vec![int(0), int(0), int(1)],
            ],
        );
        assert_eq!(aut_action(&a, &bad, &n1), Err(CohomologyError::NotAutomorphism));
    }
}
