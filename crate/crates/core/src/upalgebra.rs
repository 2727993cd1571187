//! Universal unital p-algebras `U_p`, tight p-algebras `T_p`, faithfulness
//! of the universal associative-and-commutative representation, and
//! *-automorphisms of small tight algebras over prime fields.
//!
//! For an evolution algebra with basis `e_1..e_n` and a product law
//! `p(a,b) = l0*a*b + l1*a*b* + l2*a**b + l3*a**b*`, `U_p` is the quotient of
//! `K[x_1..x_n, x_1*..x_n*]` by the *-ideal generated by `p(x_i, x_j)` for
//! `i != j` and `p(x_i, x_i) - sum_j omega_ji x_j`.

use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolution::EvolutionAlgebra;
use crate::fields::{FieldElement, FieldError, FieldSpec};
use crate::groebner::{linear_dependence_over_field, Dependence, GroebnerError, QuotientAlgebra, StarIdeal};
use crate::linalg::{self, Matrix};
use crate::poly::{MonomialOrder, PolyRing, Polynomial, Ring, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} images, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("product law needs four coefficients, got {0}")]
    LawArity(usize),
    #[error("the tight algebra is infinite-dimensional")]
    Infinite,
    #[error("element is not in the tight algebra")]
    NotInTight,
    #[error("the given elements do not generate the tight algebra")]
    NotGenerating,
    #[error("search space of {0} candidates exceeds the bound {1}")]
    SearchTooLarge(u128, u128),
    #[error("*-automorphisms found do not form a group: {0}")]
    ClosureViolation(String),
    #[error("target algebra has no involution")]
    NoInvolution,
    #[error(transparent)]
    Evolution(#[from] crate::evolution::EvolutionError),
}

impl From<crate::poly::PolyError> for UpError {
    fn from(e: crate::poly::PolyError) -> Self {
        UpError::Groebner(e.into())
    }
}

/// Coefficients of `ab`, `ab*`, `a*b`, `a*b*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductLaw {
    pub coeffs: [FieldElement; 4],
}

impl ProductLaw {
    pub fn new(coeffs: [FieldElement; 4]) -> Self {
        ProductLaw { coeffs }
    }

    pub fn from_i64(field: FieldSpec, c: [i64; 4]) -> Self {
        ProductLaw {
            coeffs: c.map(|x| field.element(x)),
        }
    }

    /// Parses a comma list such as `0,0,0,1` or `-15/4,17/4,17/4,-15/4`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self, UpError> {
        let parts: Vec<&str> = s.split(',').collect();
        Self::from_strs(field, &parts)
    }

    pub fn from_strs<S: AsRef<str>>(field: FieldSpec, parts: &[S]) -> Result<Self, UpError> {
        if parts.len() != 4 {
            return Err(UpError::LawArity(parts.len()));
        }
        let v: Vec<FieldElement> = parts
            .iter()
            .map(|p| field.parse_element(p.as_ref()))
            .collect::<Result<_, _>>()?;
        Ok(ProductLaw {
            coeffs: [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()],
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.coeffs[0].spec()
    }

    /// `l0 + l1 + l2 + l3`.
    pub fn lambda(&self) -> FieldElement {
        self.coeffs.iter().fold(self.field().zero(), |acc, c| &acc + c)
    }

    /// `p(a, b)` given `a`, `b` and their involutes.
    pub fn apply(&self, a: &Polynomial, a_star: &Polynomial, b: &Polynomial, b_star: &Polynomial) -> Polynomial {
        let terms = [(a, b), (a, b_star), (a_star, b), (a_star, b_star)];
        let mut acc = Polynomial::zero(a.ring());
        for (c, (u, v)) in self.coeffs.iter().zip(terms) {
            if !c.is_zero() {
                acc = &acc + &(u * v).scalar_mul(c).expect("law and ring share the field");
            }
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl std::fmt::Display for ProductLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// All laws with coefficients in {-2,-1,0,1,2}, mapped into `field` and
/// deduplicated, in a fixed order.
pub fn default_law_grid(field: FieldSpec) -> Vec<ProductLaw> {
    const VALUES: [i64; 5] = [0, 1, -1, 2, -2];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in VALUES {
        for b in VALUES {
            for c in VALUES {
                for d in VALUES {
                    let law = ProductLaw::from_i64(field, [a, b, c, d]);
                    if seen.insert(law.clone()) {
                        out.push(law);
                    }
                }
            }
        }
    }
    out
}

/// Variable names `x, y` (or `x1..xn`) followed by their starred partners.
pub fn generator_names(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// `U_p` together with the data it was built from.
#[derive(Debug)]
pub struct UniversalPAlgebra {
    source: EvolutionAlgebra,
    law: ProductLaw,
    ring: Ring,
    ideal: StarIdeal,
    quotient: OnceLock<QuotientAlgebra>,
}

impl UniversalPAlgebra {
    pub fn build(source: &EvolutionAlgebra, law: &ProductLaw) -> Result<Self, UpError> {
        let field = source.field();
        if law.field() != field {
            return Err(FieldError::SpecMismatch(law.field(), field).into());
        }
        let n = source.dim();
        let ring = PolyRing::new(VariableSet::starred(&generator_names(n)), field);
        let x = |i: usize| Polynomial::var(&ring, i);
        let xs = |i: usize| Polynomial::var(&ring, i + n);
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = law.apply(&x(i), &xs(i), &x(j), &xs(j));
                if i != j {
                    gens.push(p);
                } else {
                    let mut rhs = Polynomial::zero(&ring);
                    for (k, row) in source.omega().iter().enumerate() {
                        rhs = &rhs + &x(k).scalar_mul(&row[i])?;
                    }
                    gens.push(&p - &rhs);
                }
            }
        }
        let ideal = StarIdeal::star_generated(&ring, gens, MonomialOrder::DegRevLex)?;
        Ok(UniversalPAlgebra {
            source: source.clone(),
            law: law.clone(),
            ring,
            ideal,
            quotient: OnceLock::new(),
        })
    }

    pub fn source(&self) -> &EvolutionAlgebra {
        &self.source
    }

    pub fn law(&self) -> &ProductLaw {
        &self.law
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ideal(&self) -> &StarIdeal {
        &self.ideal
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        self.quotient.get_or_init(|| self.ideal.quotient())
    }

    pub fn dim(&self) -> Option<usize> {
        self.quotient().dim()
    }

    /// The generators `x_i` (images of the natural basis before reduction).
    pub fn rho_images(&self) -> Vec<Polynomial> {
        (0..self.source.dim()).map(|i| Polynomial::var(&self.ring, i)).collect()
    }

    pub fn starred_images(&self) -> Vec<Polynomial> {
        let n = self.source.dim();
        (0..n).map(|i| Polynomial::var(&self.ring, i + n)).collect()
    }

    /// NF(x_i*) = NF(x_i) for every i.
    pub fn has_symmetric_image(&self) -> Result<bool, UpError> {
        let q = self.quotient();
        for (x, xs) in self.rho_images().iter().zip(self.starred_images()) {
            if q.reduce(&(x - &xs))?.is_zero() {
                continue;
            }
            return Ok(false);
        }
        Ok(true)
    }

    /// Faithfulness via linear independence of the classes of `x_i`.
    pub fn faithful(&self) -> Result<RepresentationReport, UpError> {
        let gb = self.ideal.groebner();
        let dep = linear_dependence_over_field(&self.rho_images(), gb)?;
        let dim_u = self.dim();
        let dim_t = match dim_u {
            Some(_) => Some(self.tight()?.dim()),
            None => None,
        };
        let (faithful, kernel_relation) = match dep {
            Dependence::Independent => (true, None),
            Dependence::Relation(v) => (false, Some(v)),
        };
        Ok(RepresentationReport {
            faithful,
            kernel_relation,
            dim_u,
            dim_t,
            gb_size: gb.len(),
            symmetric_image: self.has_symmetric_image()?,
        })
    }

    /// Basis of `T_p` by breadth-first closure from the generators.
    pub fn tight(&self) -> Result<TightPAlgebra, UpError> {
        TightPAlgebra::build(self)
    }

    /// Kernel of the representation when its image is symmetric, with the
    /// checks that the kernel is an ideal and the quotient is associative.
    pub fn sym_image_consequence(&self) -> Result<SymImageReport, UpError> {
        let symmetric = self.has_symmetric_image()?;
        if !symmetric {
            return Ok(SymImageReport {
                symmetric_image: false,
                kernel: Vec::new(),
                kernel_is_ideal: None,
                quotient_associative: None,
            });
        }
        let n = self.source.dim();
        let field = self.source.field();
        let q = self.quotient();
        let nfs: Vec<Polynomial> = self
            .rho_images()
            .iter()
            .map(|x| q.reduce(x))
            .collect::<Result<_, _>>()?;
        let mut rows: std::collections::BTreeMap<crate::poly::Monomial, Vec<FieldElement>> = Default::default();
        for (k, f) in nfs.iter().enumerate() {
            for (m, c) in f.terms() {
                rows.entry(m.clone()).or_insert_with(|| vec![field.zero(); n])[k] = c.clone();
            }
        }
        let matrix: Matrix = rows.into_values().collect();
        let kernel = linalg::kernel(&matrix, n, field);
        let a = &self.source;
        let in_kernel = |v: &[FieldElement]| {
            if kernel.is_empty() {
                return v.iter().all(|x| x.is_zero());
            }
            let mut m: Matrix = kernel.clone();
            m.push(v.to_vec());
            linalg::rank(&m) == kernel.len()
        };
        let basis: Vec<Vec<FieldElement>> = (0..n).map(|i| a.basis_vector(i)).collect();
        let mut is_ideal = true;
        for k in &kernel {
            for e in &basis {
                if !in_kernel(&a.multiply(k, e).expect("same dimension")) {
                    is_ideal = false;
                }
            }
        }
        let mut assoc = true;
        for u in &basis {
            for v in &basis {
                let uv = a.multiply(u, v).unwrap();
                for w in &basis {
                    let left = a.multiply(&uv, w).unwrap();
                    let right = a.multiply(u, &a.multiply(v, w).unwrap()).unwrap();
                    let diff: Vec<FieldElement> = left.iter().zip(&right).map(|(l, r)| l - r).collect();
                    if !in_kernel(&diff) {
                        assoc = false;
                    }
                }
            }
        }
        Ok(SymImageReport {
            symmetric_image: true,
            kernel,
            kernel_is_ideal: Some(is_ideal),
            quotient_associative: Some(assoc),
        })
    }

    /// Whether `x_i -> images[i]`, `x_i* -> images[i]*` kills every ideal
    /// generator, i.e. factors through `U_p` as a *-homomorphism.
    pub fn factors_through(&self, target: &QuotientAlgebra, images: &[Polynomial]) -> Result<bool, UpError> {
        let n = self.source.dim();
        if images.len() != n {
            return Err(UpError::DimensionMismatch {
                expected: n,
                got: images.len(),
            });
        }
        let mut map: Vec<Option<Polynomial>> = images.iter().cloned().map(Some).collect();
        for img in images {
            map.push(Some(target_star(target, img)?));
        }
        for g in self.ideal.generators() {
            let s = g.substitute(target.ring(), &map)?;
            if !target.reduce(&s)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Matrix on the tight basis (row convention) of the *-endomorphism
    /// induced by a linear map `m` of the source, `x_i -> sum_k m[i][k] x_k`.
    /// Errors unless the substitution preserves the defining ideal, which
    /// holds for every automorphism of the source.
    pub fn induced_tight_map(&self, tight: &TightPAlgebra, m: &Matrix) -> Result<Matrix, UpError> {
        let n = self.source.dim();
        if m.len() != n {
            return Err(UpError::DimensionMismatch {
                expected: n,
                got: m.len(),
            });
        }
        let q = self.quotient();
        let mut images: Vec<Option<Polynomial>> = vec![None; 2 * n];
        for (i, row) in m.iter().enumerate() {
            let mut plain = Polynomial::zero(&self.ring);
            let mut starred = Polynomial::zero(&self.ring);
            for (k, c) in row.iter().enumerate() {
                plain = &plain + &Polynomial::var(&self.ring, k).scalar_mul(c)?;
                starred = &starred + &Polynomial::var(&self.ring, k + n).scalar_mul(c)?;
            }
            images[i] = Some(plain);
            images[i + n] = Some(starred);
        }
        for g in self.ideal.generators() {
            if !q.reduce(&g.substitute(&self.ring, &images)?)?.is_zero() {
                return Err(UpError::ClosureViolation(format!(
                    "{} does not preserve the defining ideal",
                    crate::evolution::format_matrix(m)
                )));
            }
        }
        tight
            .basis()
            .iter()
            .map(|b| tight.express(&q.reduce(&b.substitute(&self.ring, &images)?)?))
            .collect()
    }

    /// Over a finite field, the group of *-automorphisms of `T_p` generated
    /// by the maps induced from `aut(A)` together with the involution, sorted.
    pub fn induced_star_group(&self, tight: &TightPAlgebra) -> Result<Vec<Matrix>, UpError> {
        let field = tight.field();
        let mut gens = vec![tight.star_matrix()?];
        for m in self.source.aut_points()? {
            gens.push(self.induced_tight_map(tight, &m)?);
        }
        let id = linalg::identity(field, tight.dim());
        let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
        let mut queue = vec![id];
        while let Some(g) = queue.pop() {
            for h in &gens {
                let gh = linalg::matmul(&g, h, field);
                if seen.insert(gh.clone()) {
                    queue.push(gh);
                }
            }
        }
        let mut out: Vec<Matrix> = seen.into_iter().collect();
        out.sort();
        check_matrix_group(&out, field)?;
        Ok(out)
    }
}

fn target_star(target: &QuotientAlgebra, f: &Polynomial) -> Result<Polynomial, UpError> {
    if target.ring().vars.is_identity_involution() {
        return Ok(target.reduce(f)?);
    }
    target.star(f).map_err(|e| match e {
        GroebnerError::NotStarClosed => UpError::NoInvolution,
        other => other.into(),
    })
}

/// Outcome of the faithfulness decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationReport {
    pub faithful: bool,
    /// Coefficients `c` with `sum c_i x_i` in the ideal, when not faithful.
    pub kernel_relation: Option<Vec<FieldElement>>,
    pub dim_u: Option<usize>,
    pub dim_t: Option<usize>,
    pub gb_size: usize,
    pub symmetric_image: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymImageReport {
    pub symmetric_image: bool,
    /// Basis of the kernel of the representation in natural coordinates.
    pub kernel: Vec<Vec<FieldElement>>,
    pub kernel_is_ideal: Option<bool>,
    pub quotient_associative: Option<bool>,
}

/// How a tight-basis element was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    /// The class of ring variable `k` (a generator or its involute).
    Generator(usize),
    /// Product of two earlier basis elements.
    Product(usize, usize),
}

/// `T_p` as a subalgebra of a finite-dimensional `U_p`.
#[derive(Debug, Clone)]
pub struct TightPAlgebra {
    quotient: QuotientAlgebra,
    basis: Vec<Polynomial>,
    derivations: Vec<Derivation>,
    echelon: Echelon,
    n_generators: usize,
}

/// Incremental row echelon form used for span tests and coordinates.
#[derive(Debug, Clone)]
struct Echelon {
    field: FieldSpec,
    /// Rows in echelon form, each with its pivot and its expression in the
    /// inserted vectors.
    rows: Vec<(usize, Vec<FieldElement>, Vec<FieldElement>)>,
    inserted: usize,
}

impl Echelon {
    fn new(field: FieldSpec) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    /// Reduces `v`, returning the residual and the combination of inserted
    /// vectors subtracted.
    fn reduce(&self, v: &[FieldElement], width: usize) -> (Vec<FieldElement>, Vec<FieldElement>) {
        let mut r = v.to_vec();
        let mut comb = vec![self.field.zero(); width];
        for (p, row, expr) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            for (c, e) in comb.iter_mut().zip(expr) {
                if !e.is_zero() {
                    *c = &*c + &(&f * e);
                }
            }
        }
        (r, comb)
    }

    /// Inserts `v` if independent; returns whether it was.
    fn insert(&mut self, v: &[FieldElement], capacity: usize) -> bool {
        let (r, comb) = self.reduce(v, capacity);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        let row: Vec<FieldElement> = r.iter().map(|x| x * &inv).collect();
        let mut expr: Vec<FieldElement> = comb.iter().map(|c| -c).collect();
        expr[self.inserted] = self.field.one();
        let expr: Vec<FieldElement> = expr.iter().map(|x| x * &inv).collect();
        self.rows.push((p, row, expr));
        self.inserted += 1;
        true
    }

    /// Coordinates of `v` on the inserted vectors, if in their span.
    fn express(&self, v: &[FieldElement], capacity: usize) -> Option<Vec<FieldElement>> {
        let (r, comb) = self.reduce(v, capacity);
        r.iter().all(|x| x.is_zero()).then_some(comb)
    }
}

impl TightPAlgebra {
    fn build(up: &UniversalPAlgebra) -> Result<Self, UpError> {
        let q = up.quotient().clone();
        let dim_u = q.dim().ok_or(UpError::Infinite)?;
        let field = q.field();
        let nvars = up.ring().nvars();
        let mut echelon = Echelon::new(field);
        let mut basis = Vec::new();
        let mut derivations = Vec::new();
        for k in 0..nvars {
            let f = q.reduce(&Polynomial::var(up.ring(), k))?;
            let c = q.coordinates(&f)?;
            if echelon.insert(&c, dim_u) {
                basis.push(f);
                derivations.push(Derivation::Generator(k));
            }
        }
        let mut next = 0;
        while next < basis.len() {
            for i in 0..=next {
                let f = q.multiply(&basis[i], &basis[next])?;
                let c = q.coordinates(&f)?;
                if echelon.insert(&c, dim_u) {
                    basis.push(f);
                        derivations.push(Derivation::Product(i, next));
                }
            }
            next += 1;
        }
        Ok(TightPAlgebra {
            quotient: q,
            basis,
            derivations,
            echelon,
            n_generators: up.source().dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.quotient.field()
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    /// Basis elements as normal forms in `U_p`.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    /// Classes of `x_1..x_n` (without their involutes).
    pub fn generator_classes(&self) -> Result<Vec<Polynomial>, UpError> {
        let ring = self.quotient.ring().clone();
        (0..self.n_generators)
            .map(|i| Ok(self.quotient.reduce(&Polynomial::var(&ring, i))?))
            .collect()
    }

    /// Coordinates of `f` on the tight basis.
    pub fn express(&self, f: &Polynomial) -> Result<Vec<FieldElement>, UpError> {
        let c = self.quotient.coordinates(f)?;
        self.echelon.express(&c, self.dim()).ok_or(UpError::NotInTight)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, UpError> {
        let c = self.quotient.coordinates(f)?;
        Ok(self.echelon.express(&c, self.dim()).is_some())
    }

    pub fn element(&self, coords: &[FieldElement]) -> Polynomial {
        let mut acc = Polynomial::zero(self.quotient.ring());
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = &acc + &b.scalar_mul(c).unwrap();
            }
        }
        acc
    }

    /// `table[i][j]` holds the coordinates of `b_i * b_j`.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<FieldElement>>>, UpError> {
        let m = self.dim();
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let f = self.quotient.multiply(&self.basis[i], &self.basis[j])?;
                table[i][j] = self.express(&f)?;
            }
        }
        Ok(table)
    }

    /// `star[i]` holds the coordinates of `b_i*`.
    pub fn star_matrix(&self) -> Result<Vec<Vec<FieldElement>>, UpError> {
        self.basis
            .iter()
            .map(|b| self.express(&self.quotient.star(b)?))
            .collect()
    }

    /// Whether `1` of `U_p` lies in `T_p`.
    pub fn contains_one(&self) -> Result<bool, UpError> {
        self.contains(&Polynomial::one(self.quotient.ring()))
    }

    /// The unit element of `T_p`, if it has one.
    pub fn unit(&self) -> Result<Option<Polynomial>, UpError> {
        let m = self.dim();
        let field = self.field();
        if m == 0 {
            return Ok(None);
        }
        let table = self.structure_constants()?;
        // sum_k e_k (b_k b_i) = b_i for every i
        let mut rows: Matrix = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..m {
            for l in 0..m {
                rows.push((0..m).map(|k| table[k][i][l].clone()).collect());
                rhs.push(if l == i { field.one() } else { field.zero() });
            }
        }
        Ok(linalg::solve(&rows, &rhs, m, field).map(|e| self.element(&e)))
    }

    /// Group of *-automorphisms over a prime field, as matrices on the tight
    /// basis (row convention), sorted. `generators` must generate `T_p` as an
    /// algebra; the default is the classes of `x_i`.
    pub fn star_automorphisms(&self, generators: Option<&[Polynomial]>, bound: u128) -> Result<Vec<Matrix>, UpError> {
        let gens = match generators {
            Some(g) => g.to_vec(),
            None => self.generator_classes()?,
        };
        let gens: Vec<Vec<FieldElement>> = gens.iter().map(|g| self.express(g)).collect::<Result<_, _>>()?;
        let table = self.structure_constants()?;
        let star = self.star_matrix()?;
        let alg = ModAlgebra::new(self.field(), &table, &star)?;
        let gens: Vec<Vec<u64>> = gens.iter().map(|g| alg.lift(g)).collect();
        let found = alg.star_automorphisms(&gens, bound)?;
        let field = self.field();
        let mut out: Vec<Matrix> = found
            .into_iter()
            .map(|m| m.into_iter().map(|r| r.into_iter().map(|x| field.element(x as i64)).collect()).collect())
            .collect();
        out.sort();
        check_matrix_group(&out, field)?;
        Ok(out)
    }
}

fn check_matrix_group(points: &[Matrix], field: FieldSpec) -> Result<(), UpError> {
    crate::evolution::group_order(points, field)
        .map(|_| ())
        .map_err(|e| UpError::ClosureViolation(e.to_string()))
}

/// A finite-dimensional algebra over GF(p) in residue arithmetic.
struct ModAlgebra {
    p: u64,
    m: usize,
    /// `mult[i][j]`: nonzero (k, c) with `b_i b_j = sum c b_k`.
    mult: Vec<Vec<Vec<(usize, u64)>>>,
    star: Vec<Vec<u64>>,
}

impl ModAlgebra {
    fn new(field: FieldSpec, table: &[Vec<Vec<FieldElement>>], star: &[Vec<FieldElement>]) -> Result<Self, UpError> {
        let FieldSpec::Prime(p) = field else {
            return Err(FieldError::InfiniteField(field).into());
        };
        let m = table.len();
        let res = |x: &FieldElement| x.residue().expect("prime field element");
        let mult = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, res(c))).collect())
                    .collect()
            })
            .collect();
        let star = star.iter().map(|r| r.iter().map(res).collect()).collect();
        Ok(ModAlgebra { p, m, mult, star })
    }

    fn lift(&self, v: &[FieldElement]) -> Vec<u64> {
        v.iter().map(|x| x.residue().unwrap()).collect()
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.m];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = self.mulmod(ai, bj);
                for &(k, s) in &self.mult[i][j] {
                    out[k] = (out[k] + self.mulmod(c, s)) % self.p;
                }
            }
        }
        out
    }

    fn add_scaled(&self, acc: &mut [u64], c: u64, v: &[u64]) {
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = (*a + self.mulmod(c, x)) % self.p;
        }
    }

    /// `v*` using the star matrix.
    fn star_of(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.m];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                self.add_scaled(&mut out, c, &self.star[i]);
            }
        }
        out
    }

    fn field(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn to_fe(&self, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| self.field().element(x as i64)).collect()
    }

    /// All vectors of GF(p)^m, decoded from an index.
    fn decode(&self, mut code: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.m];
        for x in v.iter_mut() {
            *x = code % self.p;
            code /= self.p;
        }
        v
    }

    fn star_automorphisms(&self, gens: &[Vec<u64>], bound: u128) -> Result<Vec<Vec<Vec<u64>>>, UpError> {
        let m = self.m;
        let field = self.field();
        // spanning words from the generators
        let mut words: Vec<(Vec<u64>, Derivation)> = Vec::new();
        let mut ech = Echelon::new(field);
        for (s, g) in gens.iter().enumerate() {
            if ech.insert(&self.to_fe(g), m) {
                words.push((g.clone(), Derivation::Generator(s)));
            }
        }
        let mut next = 0;
        while next < words.len() {
            for i in 0..=next {
                let prod = self.mul(&words[i].0, &words[next].0);
                if ech.insert(&self.to_fe(&prod), m) {
                    words.push((prod, Derivation::Product(i, next)));
                }
            }
            next += 1;
        }
        if words.len() != m {
            return Err(UpError::NotGenerating);
        }
        // word coordinates of every generator, tight basis vector and star
        let express = |v: &[u64]| -> Vec<u64> {
            ech.express(&self.to_fe(v), m)
                .expect("words span the algebra")
                .iter()
                .map(|x| x.residue().unwrap())
                .collect()
        };
        let gen_coords: Vec<Vec<u64>> = gens.iter().map(|g| express(g)).collect();
        let basis_coords: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut e = vec![0u64; m];
                e[i] = 1;
                express(&e)
            })
            .collect();
        let word_products: Vec<Vec<Vec<u64>>> = (0..m)
            .map(|i| (0..m).map(|j| express(&self.mul(&words[i].0, &words[j].0))).collect())
            .collect();
        let word_stars: Vec<Vec<u64>> = words.iter().map(|(w, _)| express(&self.star_of(w))).collect();

        // candidate images of each generator satisfy its power relation
        let total_space = (self.p as u128).pow(m as u32);
        if total_space > bound {
            return Err(UpError::SearchTooLarge(total_space, bound));
        }
        let mut candidates: Vec<Vec<Vec<u64>>> = Vec::new();
        for g in gens {
            let relation = self.power_relation(g);
            let cands: Vec<Vec<u64>> = (0..total_space as u64)
                .into_par_iter()
                .filter_map(|code| {
                    let h = self.decode(code);
                    (h.iter().any(|&x| x != 0) && self.satisfies_power_relation(&h, &relation)).then_some(h)
                })
                .collect();
            candidates.push(cands);
        }
        let tuples: u128 = candidates.iter().map(|c| c.len() as u128).product();
        if tuples > bound {
            return Err(UpError::SearchTooLarge(tuples, bound));
        }

        let check = |images: &[Vec<u64>]| -> Option<Vec<Vec<u64>>> {
            // images of words
            let mut wimg: Vec<Vec<u64>> = Vec::with_capacity(m);
            for (_, d) in &words {
                let v = match *d {
                    Derivation::Generator(s) => images[s].clone(),
                    Derivation::Product(i, j) => self.mul(&wimg[i], &wimg[j]),
                };
                wimg.push(v);
            }
            let apply = |c: &[u64]| {
                let mut out = vec![0u64; m];
                for (k, &x) in c.iter().enumerate() {
                    if x != 0 {
                        self.add_scaled(&mut out, x, &wimg[k]);
                    }
                }
                out
            };
            for (s, gc) in gen_coords.iter().enumerate() {
                if apply(gc) != images[s] {
                    return None;
                }
            }
            for i in 0..m {
                for j in i..m {
                    if apply(&word_products[i][j]) != self.mul(&wimg[i], &wimg[j]) {
                        return None;
                    }
                }
                if apply(&word_stars[i]) != self.star_of(&wimg[i]) {
                    return None;
                }
            }
            let matrix: Vec<Vec<u64>> = basis_coords.iter().map(|c| apply(c)).collect();
            let fe: Matrix = matrix.iter().map(|r| self.to_fe(r)).collect();
            (linalg::rank(&fe) == m).then_some(matrix)
        };

        // enumerate tuples with early rejection on products of generators
        let pair_rel = gens_products(gens, self);
        let first = &candidates[0];
        let results: Vec<Vec<Vec<u64>>> = first
            .par_iter()
            .flat_map_iter(|h0| {
                let mut out = Vec::new();
                let mut stack: Vec<Vec<u64>> = vec![h0.clone()];
                let mut left = vec![self.left_matrix(h0)];
                self.extend_tuples(&candidates, &pair_rel, &mut stack, &mut left, &mut |t| {
                    if let Some(mat) = check(t) {
                        out.push(mat);
                    }
                });
                out
            })
            .collect();
        Ok(results)
    }

    fn extend_tuples(
        &self,
        candidates: &[Vec<Vec<u64>>],
        pair_rel: &PairRelations,
        stack: &mut Vec<Vec<u64>>,
        left_mult: &mut Vec<Vec<u64>>,
        visit: &mut dyn FnMut(&[Vec<u64>]),
    ) {
        let s = stack.len();
        if s == candidates.len() {
            visit(stack);
            return;
        }
        'cand: for h in &candidates[s] {
            // products of generators that vanish must still vanish
            for t in 0..s {
                if pair_rel.vanishes[t][s] && !self.annihilates(&left_mult[t], h) {
                    continue 'cand;
                }
            }
            stack.push(h.clone());
            left_mult.push(self.left_matrix(h));
            self.extend_tuples(candidates, pair_rel, stack, left_mult, visit);
            stack.pop();
            left_mult.pop();
        }
    }

    /// Row-major matrix of `v -> h v`.
    fn left_matrix(&self, h: &[u64]) -> Vec<u64> {
        let m = self.m;
        let mut mat = vec![0u64; m * m];
        for j in 0..m {
            let mut e = vec![0u64; m];
            e[j] = 1;
            let col = self.mul(h, &e);
            for k in 0..m {
                mat[k * m + j] = col[k];
            }
        }
        mat
    }

    fn annihilates(&self, mat: &[u64], v: &[u64]) -> bool {
        let m = self.m;
        (0..m).all(|k| {
            let mut acc: u128 = 0;
            for j in 0..m {
                acc += mat[k * m + j] as u128 * v[j] as u128;
            }
            acc % self.p as u128 == 0
        })
    }

    /// Smallest k with g^k in the span of g, ..., g^(k-1): returns k and
    /// the coefficients.
    fn power_relation(&self, g: &[u64]) -> (usize, Vec<u64>) {
        let field = self.field();
        let mut ech = Echelon::new(field);
        let mut power = g.to_vec();
        let mut k = 1;
        loop {
            let fe = self.to_fe(&power);
            if let Some(c) = ech.express(&fe, self.m + 1) {
                let coeffs = c[..k - 1].iter().map(|x| x.residue().unwrap()).collect();
                return (k, coeffs);
            }
            ech.insert(&fe, self.m + 1);
            power = self.mul(&power, g);
            k += 1;
        }
    }

    fn satisfies_power_relation(&self, h: &[u64], rel: &(usize, Vec<u64>)) -> bool {
        let (k, coeffs) = rel;
        let mut acc = vec![0u64; self.m];
        let mut power = h.to_vec();
        for i in 1..*k {
            self.add_scaled(&mut acc, coeffs[i - 1], &power);
            power = self.mul(&power, h);
        }
        power == acc
    }
}

/// Which pairs of generators multiply to zero.
struct PairRelations {
    vanishes: Vec<Vec<bool>>,
}

fn gens_products(gens: &[Vec<u64>], alg: &ModAlgebra) -> PairRelations {
    let r = gens.len();
    let mut vanishes = vec![vec![false; r]; r];
    for s in 0..r {
        for t in 0..r {
            vanishes[s][t] = alg.mul(&gens[s], &gens[t]).iter().all(|&x| x == 0);
        }
    }
    PairRelations { vanishes }
}

/// Whether `e_i -> images[i]` is an injective linear map into `target` with
/// `sigma(e_i e_j) = p[sigma(e_i), sigma(e_j)]` for all basis pairs.
pub fn check_representation(
    source: &EvolutionAlgebra,
    law: &ProductLaw,
    target: &QuotientAlgebra,
    images: &[Polynomial],
) -> Result<bool, UpError> {
    let n = source.dim();
    if images.len() != n {
        return Err(UpError::DimensionMismatch {
            expected: n,
            got: images.len(),
        });
    }
    let imgs: Vec<Polynomial> = images.iter().map(|f| target.reduce(f)).collect::<Result<_, _>>()?;
    let stars: Vec<Polynomial> = imgs.iter().map(|f| target_star(target, f)).collect::<Result<_, _>>()?;
    let sigma = |v: &[FieldElement]| -> Polynomial {
        let mut acc = Polynomial::zero(target.ring());
        for (c, f) in v.iter().zip(&imgs) {
            if !c.is_zero() {
                acc = &acc + &f.scalar_mul(c).unwrap();
            }
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            let prod = source.multiply(&source.basis_vector(i), &source.basis_vector(j)).unwrap();
            let lhs = sigma(&prod);
            let rhs = law.apply(&imgs[i], &stars[i], &imgs[j], &stars[j]);
            if !target.reduce(&(&lhs - &rhs))?.is_zero() {
                return Ok(false);
            }
        }
    }
    let dep = linear_dependence_over_field(&imgs, target.gb())?;
    Ok(dep == Dependence::Independent)
}

/// Serializable form of a [`RepresentationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReportJson {
    pub faithful: bool,
    pub dims: DimsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_relation: Option<Vec<String>>,
    pub gb_size: usize,
    pub symmetric_image: bool,
}

/// Dimensions of `U_p` and `T_p`; `None` means infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsJson {
    pub u: Option<usize>,
    pub t: Option<usize>,
}

impl From<&RepresentationReport> for RepresentationReportJson {
    fn from(r: &RepresentationReport) -> Self {
        RepresentationReportJson {
            faithful: r.faithful,
            dims: DimsJson {
                u: r.dim_u,
                t: r.dim_t,
            },
            kernel_relation: r
                .kernel_relation
                .as_ref()
                .map(|v| v.iter().map(|c| c.to_string()).collect()),
            gb_size: r.gb_size,
            symmetric_image: r.symmetric_image,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::FamilyName;

    fn fam(name: FamilyName, field: FieldSpec, params: &[i64]) -> EvolutionAlgebra {
        let ps: Vec<FieldElement> = params.iter().map(|&x| field.element(x)).collect();
        EvolutionAlgebra::family(name, field, &ps).unwrap()
    }

    fn up(name: FamilyName, field: FieldSpec, params: &[i64], law: [i64; 4]) -> UniversalPAlgebra {
        UniversalPAlgebra::build(&fam(name, field, params), &ProductLaw::from_i64(field, law)).unwrap()
    }

    #[test]
    fn a2_universal_and_tight_dimensions() {
        let q = FieldSpec::Rationals;
        let u = up(FamilyName::A2, q, &[1], [0, 0, 0, 1]);
        assert_eq!(u.dim(), Some(7));
        let t = u.tight().unwrap();
        assert_eq!(t.dim(), 6);
        let p = |s| Polynomial::parse(u.ring(), s).unwrap();
        let unit = t.unit().unwrap().unwrap();
        assert_eq!(unit, u.quotient().reduce(&p("x^3 + y^3")).unwrap());
        assert!(!t.contains_one().unwrap());
        assert!(u.faithful().unwrap().faithful);
    }

    #[test]
    fn induced_star_group_orders() {
        let f7 = FieldSpec::prime(7).unwrap();
        let u = up(FamilyName::A2, f7, &[1], [0, 0, 0, 1]);
        let t = u.tight().unwrap();
        let g = u.induced_star_group(&t).unwrap();
        assert_eq!(g.len(), 12);
        let star = t.star_matrix().unwrap();
        assert!(g.contains(&star));
        let scale = vec![vec![f7.one(), f7.zero()], vec![f7.zero(), f7.element(2)]];
        assert!(matches!(u.induced_tight_map(&t, &scale), Err(UpError::ClosureViolation(_))));
        let f3 = FieldSpec::prime(3).unwrap();
        let u = up(FamilyName::A1, f3, &[], [0, 1, 0, 0]);
        assert_eq!(u.induced_star_group(&u.tight().unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn a1_tight_algebra() {
        let q = FieldSpec::Rationals;
        let u = up(FamilyName::A1, q, &[], [0, 1, 0, 0]);
        assert_eq!(u.dim(), Some(3));
        let t = u.tight().unwrap();
        assert_eq!(t.dim(), 2);
        let p = |s| Polynomial::parse(u.ring(), s).unwrap();
        assert_eq!(t.unit().unwrap().unwrap(), u.quotient().reduce(&p("x + y")).unwrap());
        let table = t.structure_constants().unwrap();
        let (z, o) = (q.zero(), q.one());
        assert_eq!(table[0][0], vec![o.clone(), z.clone()]);
        assert_eq!(table[1][1], vec![z.clone(), o.clone()]);
        assert_eq!(table[0][1], vec![z.clone(), z.clone()]);
    }

    #[test]
    fn faithfulness_examples() {
        let q = FieldSpec::Rationals;
        assert!(!up(FamilyName::A3, q, &[1], [1, 0, 0, 0]).faithful().unwrap().faithful);
        assert!(up(FamilyName::A5ab, q, &[2, 2], [1, 0, 0, 2]).faithful().unwrap().faithful);
        let f2 = FieldSpec::prime(2).unwrap();
        for law in default_law_grid(f2) {
            let u = UniversalPAlgebra::build(&fam(FamilyName::A8, f2, &[1]), &law).unwrap();
            assert!(!u.faithful().unwrap().faithful, "law {law}");
        }
    }

    #[test]
    fn a5_equal_parameters_tight_is_k2() {
        let q = FieldSpec::Rationals;
        let t = up(FamilyName::A5ab, q, &[2, 2], [1, 0, 0, 2]).tight().unwrap();
        assert_eq!(t.dim(), 2);
        let table = t.structure_constants().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(table[i][j], table[j][i]);
            }
        }
    }

    #[test]
    fn grid_size() {
        assert_eq!(default_law_grid(FieldSpec::Rationals).len(), 625);
        assert_eq!(default_law_grid(FieldSpec::prime(2).unwrap()).len(), 16);
        assert_eq!(default_law_grid(FieldSpec::prime(3).unwrap()).len(), 81);
    }

    #[test]
    fn star_automorphism_small_cases() {
        let f3 = FieldSpec::prime(3).unwrap();
        let t = up(FamilyName::A1, f3, &[], [0, 1, 0, 0]).tight().unwrap();
        assert_eq!(t.star_automorphisms(None, 100_000_000).unwrap().len(), 2);
        let f5 = FieldSpec::prime(5).unwrap();
        let t = up(FamilyName::A5ab, f5, &[2, 2], [1, 0, 0, 2]).tight().unwrap();
        assert_eq!(t.star_automorphisms(None, 100_000_000).unwrap().len(), 2);
    }

    #[test]
    fn sym_image_examples() {
        let q = FieldSpec::Rationals;
        let r = up(FamilyName::A3, q, &[1], [1, 0, 0, 1]).sym_image_consequence().unwrap();
        assert!(r.symmetric_image);
        assert_eq!(r.quotient_associative, Some(true));
        let r = up(FamilyName::A1, q, &[], [0, 1, 0, 0]).sym_image_consequence().unwrap();
        assert!(r.symmetric_image && r.kernel.is_empty());
        let r = up(FamilyName::A5ab, q, &[2, 3], [1, 1, 1, 1]).sym_image_consequence().unwrap();
        assert!(r.symmetric_image);
        assert_eq!(r.quotient_associative, Some(true));
    }

    #[test]
    fn a5_complex_representation() {
        let q = FieldSpec::Rationals;
        let ring = PolyRing::new(VariableSet::starred(&["s"]), q);
        let p = |s: &str| Polynomial::parse(&ring, s).unwrap();
        let target = StarIdeal::star_generated(&ring, vec![p("s^2 + 1"), p("s + s*")], MonomialOrder::DegRevLex)
            .unwrap()
            .quotient();
        let a5 = fam(FamilyName::A5, q, &[]);
        let law = ProductLaw::from_i64(q, [-2, 0, 0, 2]);
        let images = vec![p("-1/4 + s"), p("-1/4 - s")];
        assert!(check_representation(&a5, &law, &target, &images).unwrap());
        let u = UniversalPAlgebra::build(&a5, &law).unwrap();
        assert!(u.factors_through(&target, &images).unwrap());
        let wrong = vec![p("-1/4 + s"), p("-1/4 + s")];
        assert!(!check_representation(&a5, &law, &target, &wrong).unwrap());
    }
}
