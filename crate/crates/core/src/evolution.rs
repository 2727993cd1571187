//! Evolution algebras: the two-dimensional families, products, structural
//! predicates, automorphism polynomial systems and rational automorphisms
//! over prime fields.
//!
//! The structure matrix stores `omega[j][i]`, the coefficient of `e_j` in
//! `e_i^2`. A linear map is a matrix `m` acting on rows: `f(e_i) = sum_k
//! m[i][k] e_k`, so composition `f` then `g` is the product `m_f * m_g`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{FieldElement, FieldError, FieldSpec};
use crate::linalg::{self, Matrix};
use crate::poly::{PolyRing, Polynomial, Ring, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvolutionError {
    #[error("invalid parameters for {family}: {reason}")]
    Parameter { family: String, reason: String },
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("structure matrix must be square and nonempty")]
    BadStructureMatrix,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("group closure violated: {0}")]
    ClosureViolation(String),
    #[error("search space of {0} candidates exceeds the bound")]
    SearchTooLarge(u128),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The named two-dimensional families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyName {
    A1,
    A2,
    A3,
    A4,
    A5ab,
    A5,
    A6,
    A7,
    A8,
}

impl FamilyName {
    pub const ALL: [FamilyName; 9] = [
        FamilyName::A1,
        FamilyName::A2,
        FamilyName::A3,
        FamilyName::A4,
        FamilyName::A5ab,
        FamilyName::A5,
        FamilyName::A6,
        FamilyName::A7,
        FamilyName::A8,
    ];

    /// Number of scalar parameters (alpha, beta) the family takes.
    pub fn arity(&self) -> usize {
        match self {
            FamilyName::A2 | FamilyName::A3 | FamilyName::A4 | FamilyName::A8 => 1,
            FamilyName::A5ab => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FamilyName {
    type Err = EvolutionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        FamilyName::ALL
            .iter()
            .copied()
            .find(|f| f.to_string().eq_ignore_ascii_case(t))
            .ok_or_else(|| EvolutionError::UnknownFamily(s.to_string()))
    }
}

/// A finite-dimensional evolution algebra with its natural basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionAlgebra {
    field: FieldSpec,
    omega: Matrix,
    label: String,
}

impl EvolutionAlgebra {
    /// `omega[j][i]` is the coefficient of `e_j` in `e_i^2`.
    pub fn new(field: FieldSpec, omega: Matrix) -> Result<Self, EvolutionError> {
        let n = omega.len();
        if n == 0 || omega.iter().any(|r| r.len() != n) {
            return Err(EvolutionError::BadStructureMatrix);
        }
        for x in omega.iter().flatten() {
            if x.spec() != field {
                return Err(FieldError::SpecMismatch(x.spec(), field).into());
            }
        }
        Ok(EvolutionAlgebra {
            field,
            omega,
            label: format!("custom({n})"),
        })
    }

    /// Builds from the squares: `squares[i]` are the coordinates of `e_i^2`.
    pub fn from_squares(field: FieldSpec, squares: &[Vec<FieldElement>]) -> Result<Self, EvolutionError> {
        let n = squares.len();
        if squares.iter().any(|s| s.len() != n) {
            return Err(EvolutionError::BadStructureMatrix);
        }
        let omega = (0..n).map(|j| (0..n).map(|i| squares[i][j].clone()).collect()).collect();
        Self::new(field, omega)
    }

    /// A member of a named family. `params` holds alpha (and beta for A5ab).
    ///
    /// A5ab uses `e1^2 = e1 + alpha e2`, `e2^2 = beta e1 + e2`.
    pub fn family(name: FamilyName, field: FieldSpec, params: &[FieldElement]) -> Result<Self, EvolutionError> {
        let bad = |reason: &str| EvolutionError::Parameter {
            family: name.to_string(),
            reason: reason.to_string(),
        };
        if params.len() != name.arity() {
            return Err(bad(&format!("expected {} parameter(s)", name.arity())));
        }
        for p in params {
            if p.spec() != field {
                return Err(FieldError::SpecMismatch(p.spec(), field).into());
            }
            if p.is_zero() {
                return Err(bad("parameters must be nonzero"));
            }
        }
        let k = |n: i64| field.element(n);
        let squares: Vec<Vec<FieldElement>> = match name {
            FamilyName::A1 => vec![vec![k(1), k(0)], vec![k(0), k(1)]],
            FamilyName::A2 => vec![vec![k(0), k(1)], vec![params[0].clone(), k(0)]],
            FamilyName::A3 => vec![vec![k(1), k(0)], vec![params[0].clone(), k(1)]],
            FamilyName::A4 => vec![vec![k(0), params[0].clone()], vec![k(1), k(1)]],
            FamilyName::A5ab => {
                let (a, b) = (&params[0], &params[1]);
                if (a * b).is_one() {
                    return Err(bad("alpha * beta must differ from 1"));
                }
                vec![vec![k(1), a.clone()], vec![b.clone(), k(1)]]
            }
            FamilyName::A5 => vec![vec![k(1), k(-1)], vec![k(-1), k(1)]],
            FamilyName::A6 => vec![vec![k(0), k(0)], vec![k(1), k(0)]],
            FamilyName::A7 => vec![vec![k(1), k(0)], vec![k(0), k(0)]],
            FamilyName::A8 => vec![vec![k(1), k(0)], vec![params[0].clone(), k(0)]],
        };
        let mut a = Self::from_squares(field, &squares)?;
        a.label = match params {
            [] => name.to_string(),
            [x] => format!("{name}({x})"),
            [x, y] => format!("{name}({x},{y})"),
            _ => unreachable!(),
        };
        Ok(a)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    /// Coordinates of `e_i^2`.
    pub fn square(&self, i: usize) -> Vec<FieldElement> {
        self.omega.iter().map(|row| row[i].clone()).collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<FieldElement> {
        (0..self.dim())
            .map(|k| if k == i { self.field.one() } else { self.field.zero() })
            .collect()
    }

    pub fn multiply(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<Vec<FieldElement>, EvolutionError> {
        let n = self.dim();
        if u.len() != n || v.len() != n {
            return Err(EvolutionError::DimensionMismatch(u.len().max(v.len()), n));
        }
        let mut w = vec![self.field.zero(); n];
        for i in 0..n {
            let c = &u[i] * &v[i];
            if c.is_zero() {
                continue;
            }
            for (j, wj) in w.iter_mut().enumerate() {
                if !self.omega[j][i].is_zero() {
                    *wj = &*wj + &(&c * &self.omega[j][i]);
                }
            }
        }
        Ok(w)
    }

    pub fn is_perfect(&self) -> bool {
        !linalg::determinant(&self.omega, self.field).is_zero()
    }

    pub fn is_zero_product(&self) -> bool {
        self.omega.iter().flatten().all(|x| x.is_zero())
    }

    /// All associators of basis triples vanish.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        let e: Vec<Vec<FieldElement>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let ij = self.multiply(&e[i], &e[j]).unwrap();
                for k in 0..n {
                    let left = self.multiply(&ij, &e[k]).unwrap();
                    let jk = self.multiply(&e[j], &e[k]).unwrap();
                    let right = self.multiply(&e[i], &jk).unwrap();
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Image of `v` under the row-convention matrix `m`.
    pub fn apply(&self, m: &Matrix, v: &[FieldElement]) -> Vec<FieldElement> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = self.field.zero();
                for i in 0..n {
                    if !v[i].is_zero() && !m[i][k].is_zero() {
                        acc = &acc + &(&v[i] * &m[i][k]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Whether `m` is a bijective algebra map from `self` to `target`,
    /// checked directly on products of basis vectors.
    pub fn is_isomorphism_to(&self, target: &EvolutionAlgebra, m: &Matrix) -> bool {
        let n = self.dim();
        if target.dim() != n || linalg::determinant(m, self.field).is_zero() {
            return false;
        }
        for i in 0..n {
            for j in i..n {
                let ei = self.basis_vector(i);
                let ej = self.basis_vector(j);
                let lhs = self.apply(m, &self.multiply(&ei, &ej).unwrap());
                let rhs = target.multiply(&m[i], &m[j]).unwrap();
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        self.is_isomorphism_to(self, m)
    }

    /// Polynomial equations in the matrix entries (and `u`) whose solutions
    /// over a ring R are the R-automorphisms.
    pub fn aut_system(&self) -> AutSystem {
        let n = self.dim();
        let mut names: Vec<String> = if n == 2 {
            ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect()
        } else {
            (0..n * n).map(|k| format!("m{}_{}", k / n + 1, k % n + 1)).collect()
        };
        names.push("u".into());
        let ring = PolyRing::new(VariableSet::plain(&names), self.field);
        let m = |i: usize, k: usize| Polynomial::var(&ring, i * n + k);
        let c = |x: &FieldElement| Polynomial::constant(&ring, x.clone());
        let mut equations = Vec::new();
        // f(e_i^2) = f(e_i)^2
        for i in 0..n {
            for l in 0..n {
                let mut lhs = Polynomial::zero(&ring);
                for j in 0..n {
                    lhs = &lhs + &(&c(&self.omega[j][i]) * &m(j, l));
                }
                let mut rhs = Polynomial::zero(&ring);
                for k in 0..n {
                    rhs = &rhs + &(&(&m(i, k) * &m(i, k)) * &c(&self.omega[l][k]));
                }
                equations.push(&lhs - &rhs);
            }
        }
        // f(e_i) f(e_j) = 0 for i < j
        for i in 0..n {
            for j in i + 1..n {
                for l in 0..n {
                    let mut e = Polynomial::zero(&ring);
                    for k in 0..n {
                        e = &e + &(&(&m(i, k) * &m(j, k)) * &c(&self.omega[l][k]));
                    }
                    equations.push(e);
                }
            }
        }
        let det = poly_det(&(0..n).map(|i| (0..n).map(|k| m(i, k)).collect()).collect::<Vec<Vec<_>>>(), &ring);
        equations.push(&(&det * &Polynomial::var(&ring, n * n)) - &Polynomial::one(&ring));
        equations.retain(|e| !e.is_zero());
        AutSystem {
            ring,
            dim: n,
            equations,
        }
    }

    /// All automorphisms over a finite field, sorted, each re-verified and the
    /// set checked to be a group.
    pub fn aut_points(&self) -> Result<Vec<Matrix>, EvolutionError> {
        let system = self.aut_system();
        let points = system.solve_over_field()?;
        for m in &points {
            if !self.is_automorphism(m) {
                return Err(EvolutionError::ClosureViolation(format!(
                    "solver returned a non-automorphism {}",
                    format_matrix(m)
                )));
            }
        }
        group_order(&points, self.field)?;
        Ok(points)
    }
}

/// Determinant of a matrix of polynomials by cofactor expansion.
fn poly_det(m: &[Vec<Polynomial>], ring: &Ring) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring);
    for c in 0..n {
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * &poly_det(&minor, ring);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Equations for the automorphisms: unknowns are the `dim^2` matrix entries
/// followed by the inverse-determinant witness `u`.
#[derive(Debug, Clone)]
pub struct AutSystem {
    pub ring: Ring,
    pub dim: usize,
    pub equations: Vec<Polynomial>,
}

impl AutSystem {
    /// Exhaustive search over GF(p)^(dim^2); `u` is replaced by `det != 0`.
    pub fn solve_over_field(&self) -> Result<Vec<Matrix>, EvolutionError> {
        let field = self.ring.field;
        let elems = field.enumerate()?;
        let n = self.dim;
        let k = n * n;
        let p = elems.len() as u128;
        let total = p.pow(k as u32);
        if total > 100_000_000 {
            return Err(EvolutionError::SearchTooLarge(total));
        }
        let u_index = k;
        let eqs: Vec<&Polynomial> = self
            .equations
            .iter()
            .filter(|e| !e.vars_used().contains(&u_index))
            .collect();
        let mut found: Vec<Matrix> = (0..total as u64)
            .into_par_iter()
            .filter_map(|mut code| {
                let mut point = Vec::with_capacity(k + 1);
                for _ in 0..k {
                    point.push(elems[(code % p as u64) as usize].clone());
                    code /= p as u64;
                }
                point.push(field.zero());
                if eqs.iter().any(|e| !e.evaluate_at(&point).is_zero()) {
                    return None;
                }
                let m: Matrix = (0..n).map(|i| point[i * n..(i + 1) * n].to_vec()).collect();
                (!linalg::determinant(&m, field).is_zero()).then_some(m)
            })
            .collect();
        found.sort();
        Ok(found)
    }
}

/// Order of a finite set of invertible matrices after checking that it
/// contains the identity and is closed under products and inverses.
pub fn group_order(points: &[Matrix], field: FieldSpec) -> Result<usize, EvolutionError> {
    let Some(first) = points.first() else {
        return Err(EvolutionError::ClosureViolation("empty set".into()));
    };
    let n = first.len();
    let set: HashSet<&Matrix> = points.iter().collect();
    if !set.contains(&linalg::identity(field, n)) {
        return Err(EvolutionError::ClosureViolation("identity missing".into()));
    }
    for a in points {
        let inv = linalg::inverse(a, field)
            .ok_or_else(|| EvolutionError::ClosureViolation(format!("singular {}", format_matrix(a))))?;
        if !set.contains(&inv) {
            return Err(EvolutionError::ClosureViolation(format!(
                "inverse of {} missing",
                format_matrix(a)
            )));
        }
        for b in points {
            let ab = linalg::matmul(a, b, field);
            if !set.contains(&ab) {
                return Err(EvolutionError::ClosureViolation(format!(
                    "{} * {} missing",
                    format_matrix(a),
                    format_matrix(b)
                )));
            }
        }
    }
    Ok(set.len())
}

pub fn format_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// All isomorphisms between two algebras of the same dimension over a
/// finite field, by exhaustive search.
pub fn isomorphisms(a: &EvolutionAlgebra, b: &EvolutionAlgebra) -> Result<Vec<Matrix>, EvolutionError> {
    if a.dim() != b.dim() {
        return Err(EvolutionError::DimensionMismatch(a.dim(), b.dim()));
    }
    let field = a.field();
    let elems = field.enumerate()?;
    let n = a.dim();
    let p = elems.len() as u64;
    let total = (p as u128).pow((n * n) as u32);
    if total > 100_000_000 {
        return Err(EvolutionError::SearchTooLarge(total));
    }
    let mut out: Vec<Matrix> = (0..total as u64)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut m: Matrix = vec![Vec::with_capacity(n); n];
            for row in m.iter_mut() {
                for _ in 0..n {
                    row.push(elems[(code % p) as usize].clone());
                    code /= p;
                }
            }
            a.is_isomorphism_to(b, &m).then_some(m)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The classification of algebras with `e_2^2 = 0`: zero product, or
/// isomorphic to A6 or A7.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateKind {
    ZeroProduct,
    LikeA6,
    LikeA7,
}

/// Classifies a two-dimensional algebra whose second basis vector squares
/// to zero; `None` otherwise.
pub fn classify_second_square_zero(a: &EvolutionAlgebra) -> Option<DegenerateKind> {
    if a.dim() != 2 || a.square(1).iter().any(|x| !x.is_zero()) {
        return None;
    }
    let s = a.square(0);
    Some(if s.iter().all(|x| x.is_zero()) {
        DegenerateKind::ZeroProduct
    } else if s[0].is_zero() {
        DegenerateKind::LikeA6
    } else {
        DegenerateKind::LikeA7
    })
}

/// JSON description of an algebra: a named family or an explicit matrix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Family {
        family: FamilyName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<String>,
    },
    Matrix {
        dim: usize,
        /// `omega[j][i]`: coefficient of `e_j` in `e_i^2`.
        omega: Vec<Vec<String>>,
    },
}

impl AlgebraSpec {
    pub fn family(family: FamilyName, alpha: Option<&str>, beta: Option<&str>) -> Self {
        AlgebraSpec::Family {
            family,
            alpha: alpha.map(str::to_string),
            beta: beta.map(str::to_string),
        }
    }

    pub fn build(&self, field: FieldSpec) -> Result<EvolutionAlgebra, EvolutionError> {
        match self {
            AlgebraSpec::Family { family, alpha, beta } => {
                let mut params = Vec::new();
                for s in [alpha, beta].into_iter().flatten().take(family.arity()) {
                    params.push(field.parse_element(s)?);
                }
                EvolutionAlgebra::family(*family, field, &params)
            }
            AlgebraSpec::Matrix { dim, omega } => {
                if omega.len() != *dim {
                    return Err(EvolutionError::BadStructureMatrix);
                }
                let m = omega
                    .iter()
                    .map(|r| r.iter().map(|x| field.parse_element(x)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Matrix, _>>()?;
                EvolutionAlgebra::new(field, m)
            }
        }
    }
}
