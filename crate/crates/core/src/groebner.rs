//! Buchberger's algorithm, normal forms, ideal membership, elimination and
//! quotient algebras for ideals that may be closed under the involution.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{FieldElement, FieldSpec};
use crate::linalg;
use crate::poly::{Monomial, MonomialOrder, PolyError, PolyRing, Polynomial, Ring, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("quotient algebra is infinite-dimensional")]
    InfiniteDimensional,
    #[error("ideal is not closed under the involution")]
    NotStarClosed,
    #[error("coordinate vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

type Terms = Vec<(Monomial, FieldElement)>;

fn to_terms(p: &Polynomial, ord: &MonomialOrder) -> Terms {
    p.sorted_terms(ord)
}

fn from_terms(ring: &Ring, t: Terms) -> Polynomial {
    Polynomial::from_terms(ring, t)
}

/// `a - c * m * b` for term lists sorted in decreasing order.
fn sub_scaled(a: &[(Monomial, FieldElement)], c: &FieldElement, m: &Monomial, b: &[(Monomial, FieldElement)], ord: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let mut bj: Option<(Monomial, FieldElement)> = b.first().map(|(bm, bc)| (bm.mul(m), bc * c));
    while i < a.len() || bj.is_some() {
        let take = match (&bj, a.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some((mb, _)), Some((ma, _))) => ord.compare(ma, mb),
        };
        match take {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (mb, cb) = bj.take().unwrap();
                out.push((mb, -cb));
                j += 1;
                bj = b.get(j).map(|(bm, bc)| (bm.mul(m), bc * c));
            }
            Ordering::Equal => {
                let (mb, cb) = bj.take().unwrap();
                let s = &a[i].1 - &cb;
                if !s.is_zero() {
                    out.push((mb, s));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|(bm, bc)| (bm.mul(m), bc * c));
            }
        }
    }
    out
}

/// Full reduction of `h` by `basis`; the first divisor in list order is used.
fn reduce(mut h: Terms, basis: &[&Terms], ord: &MonomialOrder) -> Terms {
    let mut pos = 0;
    while pos < h.len() {
        let m = &h[pos].0;
        match basis.iter().find(|g| g[0].0.divides(m)) {
            Some(g) => {
                let q = m.div(&g[0].0).unwrap();
                let coef = h[pos].1.checked_div(&g[0].1).expect("same field and nonzero lead");
                let tail = sub_scaled(&h[pos..], &coef, &q, g, ord);
                h.truncate(pos);
                h.extend(tail);
            }
            None => pos += 1,
        }
    }
    h
}

fn spoly(f: &Terms, g: &Terms, ord: &MonomialOrder) -> Terms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = l.div(&f[0].0).unwrap();
    let mg = l.div(&g[0].0).unwrap();
    let cf = f[0].1.inv().unwrap();
    let scaled_f: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c * &cf)).collect();
    let cg = g[0].1.inv().unwrap();
    sub_scaled(&scaled_f, &cg, &mg, g, ord)
}

/// Clears denominators and content over Q (positive lead); monic over GF(p).
fn normalize_stored(t: &mut Terms) {
    let Some(first) = t.first() else { return };
    let field = first.1.spec();
    if field.is_finite() {
        let inv = first.1.inv().unwrap();
        for (_, c) in t.iter_mut() {
            *c = &*c * &inv;
        }
        return;
    }
    let mut den = BigInt::one();
    for (_, c) in t.iter() {
        den = den.lcm(c.as_rational().unwrap().denom());
    }
    let mut content = BigInt::zero();
    for (_, c) in t.iter() {
        let q = c.as_rational().unwrap();
        let n = q.numer() * (&den / q.denom());
        content = content.gcd(&n);
    }
    if t[0].1.is_negative() {
        content = -content;
    }
    for (_, c) in t.iter_mut() {
        let q = c.rational_mut().unwrap();
        let n = q.numer() * (&den / q.denom());
        *q = num_rational::BigRational::from_integer(n / &content);
    }
}

fn make_monic(t: &mut Terms) {
    if let Some(first) = t.first() {
        let inv = first.1.inv().unwrap();
        for (_, c) in t.iter_mut() {
            *c = &*c * &inv;
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Deterministic pair order: lcm degree, then lcm exponents, then indices.
fn pair_key(p: &Pair) -> (u32, &[u32], usize, usize) {
    (p.lcm.degree(), p.lcm.exponents(), p.i, p.j)
}

/// Reduced monic Groebner basis of the ideal generated by `generators`.
pub fn buchberger(ring: &Ring, generators: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    for g in generators {
        if !Arc::ptr_eq(g.ring(), ring) && **g.ring() != **ring {
            return Err(PolyError::RingMismatch.into());
        }
    }
    let mut polys: Vec<Terms> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Terms> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| to_terms(g, order))
        .collect();
    inputs.sort_by(|a, b| order.compare(&a[0].0, &b[0].0).then_with(|| a.len().cmp(&b.len())));

    let mut unit = false;
    for f in inputs {
        let reducers: Vec<&Terms> = polys.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        let mut h = reduce(f, &reducers, order);
        if h.is_empty() {
            continue;
        }
        normalize_stored(&mut h);
        if h[0].0.is_one() {
            unit = true;
            break;
        }
        gm_update(&mut polys, &mut active, &mut pairs, h);
    }

    while !unit && !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| pair_key(&pairs[a]).cmp(&pair_key(&pairs[b])))
            .unwrap();
        let Pair { i, j, .. } = pairs.swap_remove(best);
        let s = spoly(&polys[i], &polys[j], order);
        let reducers: Vec<&Terms> = polys.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        let mut h = reduce(s, &reducers, order);
        if h.is_empty() {
            continue;
        }
        normalize_stored(&mut h);
        if h[0].0.is_one() {
            unit = true;
            break;
        }
        gm_update(&mut polys, &mut active, &mut pairs, h);
    }

    let mut basis: Vec<Terms> = if unit {
        vec![vec![(Monomial::one(ring.nvars()), ring.field.one())]]
    } else {
        polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect()
    };
    for b in basis.iter_mut() {
        make_monic(b);
    }
    // interreduce tails
    for k in 0..basis.len() {
        let g = basis[k].clone();
        let others: Vec<&Terms> = basis.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, b)| b).collect();
        let head = g[0].clone();
        let mut tail = reduce(g[1..].to_vec(), &others, order);
        tail.insert(0, head);
        basis[k] = tail;
    }
    basis.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));
    let elements = basis.iter().map(|t| from_terms(ring, t.clone())).collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: order.clone(),
        elements,
        terms: basis,
    })
}

/// Gebauer-Moeller installation of a new basis element `h`.
fn gm_update(polys: &mut Vec<Terms>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Terms) {
    let t = h[0].0.clone();
    let k = polys.len();
    let candidates: Vec<(usize, Monomial, bool)> = (0..k)
        .filter(|&i| active[i])
        .map(|i| {
            let lm = &polys[i][0].0;
            (i, lm.lcm(&t), lm.is_coprime(&t))
        })
        .collect();

    // chain criterion among the new pairs
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for (idx, (i, l, coprime)) in candidates.iter().enumerate() {
        let dominated = candidates[idx + 1..].iter().any(|(_, l2, _)| l2.divides(l))
            || kept.iter().any(|(_, l2, _)| l2.divides(l));
        if *coprime || !dominated {
            kept.push((*i, l.clone(), *coprime));
        }
    }
    // among pairs sharing an lcm keep one, preferring a coprime one
    let mut by_lcm: BTreeMap<Monomial, (usize, bool)> = BTreeMap::new();
    for (i, l, coprime) in &kept {
        by_lcm
            .entry(l.clone())
            .and_modify(|e| {
                if *coprime && !e.1 {
                    *e = (*i, true);
                }
            })
            .or_insert((*i, *coprime));
    }
    let new_pairs: Vec<Pair> = by_lcm
        .into_iter()
        .filter(|(_, (_, coprime))| !coprime)
        .map(|(lcm, (i, _))| Pair { i, j: k, lcm })
        .collect();

    // drop old pairs made redundant by t
    pairs.retain(|p| {
        let li = polys[p.i][0].0.lcm(&t);
        let lj = polys[p.j][0].0.lcm(&t);
        !(t.divides(&p.lcm) && li != p.lcm && lj != p.lcm)
    });
    pairs.extend(new_pairs);

    for i in 0..k {
        if active[i] && t.divides(&polys[i][0].0) {
            active[i] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

/// A reduced monic Groebner basis, sorted by increasing leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
    terms: Vec<Terms>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.elements == other.elements
    }
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.terms.len() == 1 && self.terms[0][0].0.is_one()
    }

    /// The unique remainder of `f` modulo the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if !Arc::ptr_eq(f.ring(), &self.ring) && **f.ring() != *self.ring {
            return Err(PolyError::RingMismatch.into());
        }
        let reducers: Vec<&Terms> = self.terms.iter().collect();
        let r = reduce(to_terms(f, &self.order), &reducers, &self.order);
        Ok(from_terms(&self.ring, r))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// True when every S-polynomial of the basis reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let reducers: Vec<&Terms> = self.terms.iter().collect();
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                let s = spoly(&self.terms[i], &self.terms[j], &self.order);
                if !reduce(s, &reducers, &self.order).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// True when no term of an element is divisible by another element's leading monomial.
    pub fn is_reduced(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, t)| {
            t[0].1.is_one()
                && t.iter().all(|(m, _)| {
                    self.terms
                        .iter()
                        .enumerate()
                        .all(|(j, g)| i == j || !g[0].0.divides(m))
                })
        })
    }

    /// Standard monomials when the quotient is finite-dimensional.
    pub fn quotient_basis(&self) -> QuotientBasis {
        let n = self.ring.nvars();
        if self.is_unit_ideal() {
            return QuotientBasis::Finite(Vec::new());
        }
        let lms = self.leading_monomials();
        let bounded = (0..n).all(|v| lms.iter().any(|m| m.pure_power_var() == Some(v)));
        if !bounded {
            return QuotientBasis::Infinite;
        }
        let standard = |m: &Monomial| !lms.iter().any(|l| l.divides(m));
        let start = Monomial::one(n);
        let mut seen: HashSet<Monomial> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(m) = queue.pop_front() {
            for v in 0..n {
                let mut next = m.clone();
                *next.exponent_mut(v) += 1;
                if standard(&next) && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            out.push(m);
        }
        out.sort_by(|a, b| self.order.compare(a, b));
        QuotientBasis::Finite(out)
    }

    /// NF(g*) = 0 for every basis element.
    pub fn is_star_stable(&self) -> bool {
        self.elements
            .iter()
            .all(|g| self.contains(&g.apply_involution()).unwrap_or(false))
    }
}

/// Monomial basis of a quotient, or a marker for infinite dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientBasis {
    Finite(Vec<Monomial>),
    Infinite,
}

impl QuotientBasis {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            QuotientBasis::Finite(v) => Some(v.len()),
            QuotientBasis::Infinite => None,
        }
    }
}

/// Outcome of a linear dependence test in a quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dependence {
    Independent,
    /// Nonzero coefficients `c` with `sum c_i f_i` in the ideal.
    Relation(Vec<FieldElement>),
}

/// Decides whether the classes of `elems` are linearly dependent modulo `gb`.
pub fn linear_dependence_over_field(elems: &[Polynomial], gb: &GroebnerBasis) -> Result<Dependence, GroebnerError> {
    let nfs: Vec<Polynomial> = elems.iter().map(|f| gb.normal_form(f)).collect::<Result<_, _>>()?;
    let field = gb.ring.field;
    let mut rows: BTreeMap<Monomial, Vec<FieldElement>> = BTreeMap::new();
    for (k, f) in nfs.iter().enumerate() {
        for (m, c) in f.terms() {
            rows.entry(m.clone())
                .or_insert_with(|| vec![field.zero(); nfs.len()])[k] = c.clone();
        }
    }
    let matrix: linalg::Matrix = rows.into_values().collect();
    let kernel = linalg::kernel(&matrix, nfs.len(), field);
    Ok(match kernel.into_iter().next() {
        None => Dependence::Independent,
        Some(v) => Dependence::Relation(v),
    })
}

/// A finitely generated ideal, closed under the involution when `star_closed`.
#[derive(Debug)]
pub struct StarIdeal {
    ring: Ring,
    generators: Vec<Polynomial>,
    star_closed: bool,
    order: MonomialOrder,
    gb: OnceLock<Arc<GroebnerBasis>>,
}

impl Clone for StarIdeal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        StarIdeal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            star_closed: self.star_closed,
            order: self.order.clone(),
            gb,
        }
    }
}

impl StarIdeal {
    /// The *-ideal generated by `generators`: involutes are appended.
    pub fn star_generated(ring: &Ring, generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        Self::build(ring, generators, order, true)
    }

    /// The ordinary ideal generated by `generators`.
    pub fn plain(ring: &Ring, generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        Self::build(ring, generators, order, false)
    }

    fn build(ring: &Ring, generators: Vec<Polynomial>, order: MonomialOrder, star_closed: bool) -> Result<Self, GroebnerError> {
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in generators {
            if !Arc::ptr_eq(g.ring(), ring) && **g.ring() != **ring {
                return Err(PolyError::RingMismatch.into());
            }
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        if star_closed {
            let invs: Vec<Polynomial> = gens.iter().map(|g| g.apply_involution()).collect();
            for g in invs {
                if !gens.contains(&g) {
                    gens.push(g);
                }
            }
        }
        Ok(StarIdeal {
            ring: ring.clone(),
            generators: gens,
            star_closed,
            order,
            gb: OnceLock::new(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_star_closed(&self) -> bool {
        self.star_closed
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Same generators under another order.
    pub fn with_order(&self, order: MonomialOrder) -> StarIdeal {
        StarIdeal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            star_closed: self.star_closed,
            order,
            gb: OnceLock::new(),
        }
    }

    /// The reduced Groebner basis, computed on first use.
    pub fn groebner(&self) -> &Arc<GroebnerBasis> {
        self.gb.get_or_init(|| {
            Arc::new(buchberger(&self.ring, &self.generators, &self.order).expect("generators share the ideal's ring"))
        })
    }

    pub fn member(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        self.groebner().contains(f)
    }

    /// Generators of the intersection with the polynomial ring in the
    /// variables not listed, from a lex GB with the removed variables first.
    pub fn eliminate(&self, vars_to_remove: &[usize]) -> Result<Vec<Polynomial>, GroebnerError> {
        let gb = buchberger(&self.ring, &self.generators, &MonomialOrder::LexPriority(vars_to_remove.to_vec()))?;
        Ok(gb
            .elements()
            .iter()
            .filter(|g| g.vars_used().iter().all(|v| !vars_to_remove.contains(v)))
            .cloned()
            .collect())
    }

    pub fn quotient_basis(&self) -> QuotientBasis {
        self.groebner().quotient_basis()
    }

    pub fn quotient(&self) -> QuotientAlgebra {
        QuotientAlgebra::new(self.groebner().clone(), self.star_closed)
    }
}

/// `R/I` with multiplication by normal forms; coordinates over the standard
/// monomials in the finite case.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    gb: Arc<GroebnerBasis>,
    star_closed: bool,
    basis: QuotientBasis,
    index: HashMap<Monomial, usize>,
}

impl QuotientAlgebra {
    pub fn new(gb: Arc<GroebnerBasis>, star_closed: bool) -> Self {
        let basis = gb.quotient_basis();
        let index = match &basis {
            QuotientBasis::Finite(ms) => ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect(),
            QuotientBasis::Infinite => HashMap::new(),
        };
        QuotientAlgebra {
            gb,
            star_closed,
            basis,
            index,
        }
    }

    pub fn ring(&self) -> &Ring {
        self.gb.ring()
    }

    pub fn field(&self) -> FieldSpec {
        self.gb.ring().field
    }

    pub fn gb(&self) -> &Arc<GroebnerBasis> {
        &self.gb
    }

    pub fn basis(&self) -> &QuotientBasis {
        &self.basis
    }

    pub fn dim(&self) -> Option<usize> {
        self.basis.dimension()
    }

    pub fn is_star_closed(&self) -> bool {
        self.star_closed
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        self.gb.normal_form(f)
    }

    pub fn multiply(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GroebnerError> {
        self.gb.normal_form(&f.checked_mul(g)?)
    }

    /// The induced involution; only defined when the ideal is star-closed.
    pub fn star(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if !self.star_closed {
            return Err(GroebnerError::NotStarClosed);
        }
        self.gb.normal_form(&f.apply_involution())
    }

    /// Coordinates of NF(f) on the standard monomials.
    pub fn coordinates(&self, f: &Polynomial) -> Result<Vec<FieldElement>, GroebnerError> {
        let QuotientBasis::Finite(ms) = &self.basis else {
            return Err(GroebnerError::InfiniteDimensional);
        };
        let nf = self.reduce(f)?;
        let mut v = vec![self.field().zero(); ms.len()];
        for (m, c) in nf.terms() {
            v[self.index[m]] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coordinates(&self, v: &[FieldElement]) -> Result<Polynomial, GroebnerError> {
        let QuotientBasis::Finite(ms) = &self.basis else {
            return Err(GroebnerError::InfiniteDimensional);
        };
        if v.len() != ms.len() {
            return Err(GroebnerError::DimensionMismatch {
                expected: ms.len(),
                got: v.len(),
            });
        }
        Ok(Polynomial::from_terms(self.ring(), ms.iter().cloned().zip(v.iter().cloned())))
    }
}

/// NF(f*g) for inputs already in normal form.
pub fn quotient_multiply(q: &QuotientAlgebra, f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GroebnerError> {
    q.multiply(f, g)
}

/// JSON description of an ideal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealSpec {
    pub vars: Vec<String>,
    /// Pairs of variable names exchanged by the involution.
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    pub field: FieldSpec,
    pub generators: Vec<String>,
    #[serde(default = "default_order")]
    pub order: String,
    #[serde(default = "default_true")]
    pub star_closed: bool,
}

fn default_order() -> String {
    "degrevlex".into()
}

fn default_true() -> bool {
    true
}

impl IdealSpec {
    pub fn build(&self) -> Result<StarIdeal, GroebnerError> {
        let idx = |n: &str| {
            self.vars
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| PolyError::UnknownVariable(n.to_string()))
        };
        let pairs = self
            .pairs
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        let vars = VariableSet::with_pairs(&self.vars, &pairs)?;
        let order = MonomialOrder::parse(&self.order, &vars)?;
        let ring = PolyRing::new(vars, self.field);
        let gens = self
            .generators
            .iter()
            .map(|g| Polynomial::parse(&ring, g))
            .collect::<Result<Vec<_>, _>>()?;
        if self.star_closed {
            StarIdeal::star_generated(&ring, gens, order)
        } else {
            StarIdeal::plain(&ring, gens, order)
        }
    }
}

/// Sign-normalized content-free integer multiple; used in reports over Q.
pub fn primitive_part(f: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let mut t = to_terms(f, order);
    if t.is_empty() {
        return f.clone();
    }
    normalize_stored(&mut t);
    if !t[0].1.spec().is_finite() && t[0].1.as_rational().is_some_and(|q| q.is_negative()) {
        for (_, c) in t.iter_mut() {
            *c = -&*c;
        }
    }
    from_terms(f.ring(), t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str], field: FieldSpec) -> Ring {
        PolyRing::new(VariableSet::plain(names), field)
    }

    fn polys(r: &Ring, gens: &[&str]) -> Vec<Polynomial> {
        gens.iter().map(|g| Polynomial::parse(r, g).unwrap()).collect()
    }

    fn gb(r: &Ring, gens: &[&str]) -> GroebnerBasis {
        buchberger(r, &polys(r, gens), &MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn already_reduced_basis_is_returned() {
        let r = ring(&["x", "y"], FieldSpec::Rationals);
        let g = gb(&r, &["x^2 - x", "y^2 - y", "x*y"]);
        let mut expected = polys(&r, &["x^2 - x", "y^2 - y", "x*y"]);
        expected.sort_by_key(|p| p.to_string());
        let mut got = g.elements().to_vec();
        got.sort_by_key(|p| p.to_string());
        assert_eq!(got, expected);
        assert!(g.satisfies_buchberger_criterion());
        assert_eq!(gb(&r, &["x"]).elements(), polys(&r, &["x"]).as_slice());
        assert_eq!(gb(&r, &["x - y", "y - x"]).elements(), polys(&r, &["x - y"]).as_slice());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y"], FieldSpec::Rationals);
        let g = gb(&r, &["x^2 - x", "y^2 - y", "x*y"]);
        let p = |s| Polynomial::parse(&r, s).unwrap();
        assert_eq!(g.normal_form(&p("x^3")).unwrap(), p("x"));
        assert!(!g.normal_form(&p("1 - x - y")).unwrap().is_zero());
        for e in g.elements() {
            assert!(g.normal_form(e).unwrap().is_zero());
        }
    }

    #[test]
    fn membership_examples() {
        let r = ring(&["x", "y"], FieldSpec::Rationals);
        let p = |s| Polynomial::parse(&r, s).unwrap();
        let i = StarIdeal::plain(&r, vec![p("x^2")], MonomialOrder::DegRevLex).unwrap();
        assert!(!i.member(&p("x")).unwrap());
        let i = StarIdeal::plain(&r, vec![p("x")], MonomialOrder::DegRevLex).unwrap();
        assert!(i.member(&p("x*y")).unwrap());
    }

    #[test]
    fn elimination_examples() {
        let r = ring(&["x", "y"], FieldSpec::Rationals);
        let p = |s| Polynomial::parse(&r, s).unwrap();
        let i = StarIdeal::plain(&r, vec![p("x - y^2")], MonomialOrder::DegRevLex).unwrap();
        assert!(i.eliminate(&[0]).unwrap().is_empty());
        let i = StarIdeal::plain(&r, vec![p("x - y"), p("y^2 - y")], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(i.eliminate(&[0]).unwrap(), vec![p("y^2 - y")]);
    }

    #[test]
    fn quotient_dimensions() {
        let q = FieldSpec::Rationals;
        let r = ring(&["x", "y"], q);
        let g = gb(&r, &["x^4 - x", "y^4 - y", "x*y"]);
        assert_eq!(g.quotient_basis().dimension(), Some(7));
        let r = ring(&["a", "b"], q);
        assert_eq!(gb(&r, &["a*b", "a^3 + b^3 - 1"]).quotient_basis().dimension(), Some(6));
        let r = ring(&["y", "u"], q);
        assert_eq!(gb(&r, &["y*u - 1"]).quotient_basis(), QuotientBasis::Infinite);
        assert_eq!(gb(&r, &["y", "1 + y"]).quotient_basis().dimension(), Some(0));
    }

    #[test]
    fn dependence_examples() {
        let r = ring(&["u", "v"], FieldSpec::Rationals);
        let p = |s| Polynomial::parse(&r, s).unwrap();
        let g = gb(&r, &["u^2 - u - v", "u*v", "v^2"]);
        assert_eq!(linear_dependence_over_field(&[p("u"), p("v")], &g).unwrap(), Dependence::Independent);
        let g = gb(&r, &["2*u + 3*v", "v^2"]);
        assert!(matches!(
            linear_dependence_over_field(&[p("u"), p("v")], &g).unwrap(),
            Dependence::Relation(_)
        ));
        let g = gb(&r, &["v^2"]);
        let q = r.field;
        assert_eq!(
            linear_dependence_over_field(&[p("u+v"), p("u+v")], &g).unwrap(),
            Dependence::Relation(vec![q.element(-1), q.one()])
        );
    }

    #[test]
    fn quotient_multiplication_examples() {
        let q = FieldSpec::Rationals;
        let r = ring(&["a", "b"], q);
        let p = |s| Polynomial::parse(&r, s).unwrap();
        let ideal = StarIdeal::plain(&r, polys(&r, &["a*b", "a^3 + b^3 - 1"]), MonomialOrder::DegRevLex).unwrap();
        let alg = ideal.quotient();
        assert!(quotient_multiply(&alg, &p("a"), &p("b")).unwrap().is_zero());
        assert_eq!(alg.reduce(&p("a^3 + b^3")).unwrap(), Polynomial::one(&r));
        let r = ring(&["x", "y"], q);
        let ideal = StarIdeal::plain(&r, polys(&r, &["x^2 - x", "y^2 - y", "x*y"]), MonomialOrder::DegRevLex).unwrap();
        let alg = ideal.quotient();
        let x = Polynomial::parse(&r, "x").unwrap();
        assert_eq!(alg.multiply(&x, &x).unwrap(), x);
    }

    #[test]
    fn star_generated_ideal_is_stable() {
        let r = PolyRing::new(VariableSet::starred(&["x", "y"]), FieldSpec::Rationals);
        let gens = polys(&r, &["x^2 - y*", "y^2 - x*", "x*y"]);
        let i = StarIdeal::star_generated(&r, gens, MonomialOrder::DegRevLex).unwrap();
        assert!(i.groebner().is_star_stable());
        assert_eq!(i.quotient_basis().dimension(), Some(7));
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x"], FieldSpec::prime(3).unwrap());
        let g = gb(&r, &["x", "x + 1"]);
        assert!(g.is_unit_ideal());
        assert!(g.contains(&Polynomial::parse(&r, "x^5 + 2").unwrap()).unwrap());
    }

    #[test]
    fn ideal_json() {
        let spec: IdealSpec = serde_json::from_str(
            r#"{"vars": ["x", "y", "x*", "y*"], "pairs": [["x", "x*"], ["y", "y*"]],
                "field": {"field": "Q"}, "generators": ["x^2 - y*", "y^2 - x*", "x*y"]}"#,
        )
        .unwrap();
        let i = spec.build().unwrap();
        assert_eq!(i.generators().len(), 6);
        assert_eq!(i.quotient_basis().dimension(), Some(7));
    }
}
