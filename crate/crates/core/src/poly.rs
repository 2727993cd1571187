//! Sparse multivariate polynomials with an involution on the variables.
//!
//! A [`PolyRing`] fixes the variable names, the involution pairing
//! (`x <-> x*`) and the coefficient field. Polynomials keep a shared handle to
//! their ring; mixing rings through the `checked_*` methods is an error.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::fields::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("no value or image for variable {0}")]
    MissingVariable(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("invalid variable set: {0}")]
    InvalidVariables(String),
    #[error("expected univariate polynomials in a common variable")]
    NotUnivariate,
    #[error("parse error in {input:?}: {message}")]
    Parse { input: String, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Ordered variable names plus a self-inverse permutation of their indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableSet {
    names: Vec<String>,
    involution: Vec<usize>,
}

impl VariableSet {
    pub fn new(names: Vec<String>, involution: Vec<usize>) -> Result<Self, PolyError> {
        let n = names.len();
        if involution.len() != n {
            return Err(PolyError::InvalidVariables(
                "involution length differs from variable count".into(),
            ));
        }
        for (i, &j) in involution.iter().enumerate() {
            if j >= n || involution[j] != i {
                return Err(PolyError::InvalidVariables(format!(
                    "involution is not self-inverse at index {i}"
                )));
            }
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || names[..i].contains(a) {
                return Err(PolyError::InvalidVariables(format!("bad or repeated name {a:?}")));
            }
        }
        Ok(VariableSet { names, involution })
    }

    /// Variables fixed by the involution.
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let involution = (0..names.len()).collect();
        VariableSet::new(names, involution).expect("plain variable names must be distinct")
    }

    /// `base` followed by the starred copies `base*`, paired by the involution.
    pub fn starred<S: AsRef<str>>(base: &[S]) -> Self {
        let n = base.len();
        let mut names: Vec<String> = base.iter().map(|s| s.as_ref().to_string()).collect();
        names.extend(base.iter().map(|s| format!("{}*", s.as_ref())));
        let involution = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        VariableSet::new(names, involution).expect("starred variable names must be distinct")
    }

    /// Names with explicit pairs; unpaired variables are fixed.
    pub fn with_pairs<S: AsRef<str>>(names: &[S], pairs: &[(usize, usize)]) -> Result<Self, PolyError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut involution: Vec<usize> = (0..names.len()).collect();
        for &(a, b) in pairs {
            if a >= names.len() || b >= names.len() {
                return Err(PolyError::InvalidVariables(format!("pair ({a}, {b}) out of range")));
            }
            involution[a] = b;
            involution[b] = a;
        }
        VariableSet::new(names, involution)
    }

    /// `copies` disjoint copies of this set, the k-th copy decorated with k
    /// primes (`v'`, `v''`, ...). The involution acts within each copy.
    pub fn tensor_power(&self, copies: usize) -> Self {
        let n = self.len();
        let mut names = Vec::with_capacity(n * copies);
        let mut involution = Vec::with_capacity(n * copies);
        for k in 0..copies {
            let primes = "'".repeat(k + 1);
            for (i, name) in self.names.iter().enumerate() {
                names.push(format!("{name}{primes}"));
                involution.push(k * n + self.involution[i]);
            }
        }
        VariableSet::new(names, involution).expect("primed copies are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn partner(&self, i: usize) -> usize {
        self.involution[i]
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn is_identity_involution(&self) -> bool {
        self.involution.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Variables and coefficient field of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub vars: VariableSet,
    pub field: FieldSpec,
}

impl PolyRing {
    pub fn new(vars: VariableSet, field: FieldSpec) -> Arc<PolyRing> {
        Arc::new(PolyRing { vars, field })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

/// Shared handle to a ring; every polynomial holds one.
pub type Ring = Arc<PolyRing>;

fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the only variable occurring, if this is a pure power `v^k`, k >= 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut out = Monomial::one(self.len());
        for (i, &e) in self.0.iter().enumerate() {
            out.0[perm[i]] += e;
        }
        out
    }

    pub(crate) fn exponent_mut(&mut self, i: usize) -> &mut u32 {
        &mut self.0[i]
    }

    /// Renders as `x^2*y` in the given variable names; `1` for the unit.
    pub fn display(&self, vars: &VariableSet) -> String {
        let mut out = String::new();
        let mut prev_starred = false;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(if prev_starred { " * " } else { "*" });
            }
            let name = vars.name(i);
            out.push_str(name);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
                prev_starred = false;
            } else {
                prev_starred = name.ends_with('*');
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

/// A term order on monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic with variable 0 largest.
    DegRevLex,
    /// Lexicographic with variable 0 largest.
    Lex,
    /// Lexicographic where the listed variables come first, in the given
    /// order, followed by the others by index.
    LexPriority(Vec<usize>),
    /// Elimination block order: degrevlex on the listed variables, ties
    /// broken by degrevlex on the remaining ones.
    Block(Vec<usize>),
}

fn degrevlex_on(a: &Monomial, b: &Monomial, idx: &[usize]) -> Ordering {
    let da: u32 = idx.iter().map(|&i| a.0[i]).sum();
    let db: u32 = idx.iter().map(|&i| b.0[i]).sum();
    da.cmp(&db).then_with(|| {
        for &i in idx.iter().rev() {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::LexPriority(first) => {
                for &i in first {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                for i in 0..a.len() {
                    if first.contains(&i) {
                        continue;
                    }
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block(first) => {
                let rest: Vec<usize> = (0..a.len()).filter(|i| !first.contains(i)).collect();
                degrevlex_on(a, b, first).then_with(|| degrevlex_on(a, b, &rest))
            }
        }
    }

    /// Parses `degrevlex`, `lex`, `lex:x,y,t` or `block:x,y` against `vars`.
    pub fn parse(s: &str, vars: &VariableSet) -> Result<Self, PolyError> {
        let t = s.trim();
        let lookup = |list: &str| -> Result<Vec<usize>, PolyError> {
            list.split(',')
                .map(|v| {
                    let v = v.trim();
                    vars.index_of(v).ok_or_else(|| PolyError::UnknownVariable(v.to_string()))
                })
                .collect()
        };
        match t.split_once(':') {
            None if t == "degrevlex" || t == "grevlex" => Ok(MonomialOrder::DegRevLex),
            None if t == "lex" => Ok(MonomialOrder::Lex),
            Some(("lex", list)) => Ok(MonomialOrder::LexPriority(lookup(list)?)),
            Some(("block", list)) => Ok(MonomialOrder::Block(lookup(list)?)),
            _ => Err(PolyError::Parse {
                input: s.to_string(),
                message: "unknown monomial order".into(),
            }),
        }
    }
}

/// A polynomial: nonzero coefficients keyed by monomial.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Ring, c: FieldElement) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: FieldElement) -> Self {
        assert_eq!(c.spec(), ring.field, "coefficient field differs from ring field");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), ring.field.one())
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Self, PolyError> {
        let i = ring
            .vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, FieldElement)>>(ring: &Ring, terms: I) -> Self {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Self, PolyError> {
        Parser::new(ring, s)?.parse_all()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    /// The value if the polynomial is constant (including zero).
    pub fn constant_value(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(self.ring.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Indices of variables occurring with positive exponent.
    pub fn vars_used(&self) -> Vec<usize> {
        let n = self.ring.nvars();
        (0..n)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> Result<Self, PolyError> {
        if c.spec() != self.ring.field {
            return Err(FieldError::SpecMismatch(c.spec(), self.ring.field).into());
        }
        if c.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        })
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces every variable by its involution partner.
    pub fn apply_involution(&self) -> Self {
        let perm = self.ring.vars.involution();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())).collect(),
        }
    }

    /// Terms in decreasing order.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, FieldElement)> {
        let mut v: Vec<(Monomial, FieldElement)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.compare(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Result<(Monomial, FieldElement), PolyError> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            Ok((_, c)) => self
                .scalar_mul(&c.inv().expect("leading coefficient is nonzero"))
                .expect("same field"),
            Err(_) => self.clone(),
        }
    }

    /// Value at a point given by index.
    pub fn evaluate_at(&self, point: &[FieldElement]) -> FieldElement {
        let mut acc = self.ring.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Value under a by-name assignment covering every variable that occurs.
    pub fn evaluate(&self, assignment: &BTreeMap<String, FieldElement>) -> Result<FieldElement, PolyError> {
        let field = self.ring.field;
        let mut point = vec![field.zero(); self.ring.nvars()];
        for i in self.vars_used() {
            let name = self.ring.vars.name(i);
            let v = assignment
                .get(name)
                .ok_or_else(|| PolyError::MissingVariable(name.to_string()))?;
            if v.spec() != field {
                return Err(FieldError::SpecMismatch(v.spec(), field).into());
            }
            point[i] = v.clone();
        }
        Ok(self.evaluate_at(&point))
    }

    /// Ring homomorphism sending variable `i` to `images[i]` in `target`.
    /// Only variables that occur need an image.
    pub fn substitute(&self, target: &Ring, images: &[Option<Polynomial>]) -> Result<Polynomial, PolyError> {
        if target.field != self.ring.field {
            return Err(FieldError::SpecMismatch(target.field, self.ring.field).into());
        }
        let used = self.vars_used();
        for &i in &used {
            match images.get(i).and_then(|x| x.as_ref()) {
                None => return Err(PolyError::MissingVariable(self.ring.vars.name(i).to_string())),
                Some(img) if !same_ring(img.ring(), target) => return Err(PolyError::RingMismatch),
                Some(_) => {}
            }
        }
        // powers[i][k] = images[i]^(k+1), filled on demand
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); self.ring.nvars()];
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for &i in &used {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                let img = images[i].as_ref().unwrap();
                while powers[i].len() < e {
                    let next = match powers[i].last() {
                        Some(p) => p * img,
                        None => img.clone(),
                    };
                    powers[i].push(next);
                }
                t = &t * &powers[i][e - 1];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// [`Polynomial::substitute`] with images keyed by variable name.
    pub fn substitute_named(
        &self,
        target: &Ring,
        images: &BTreeMap<String, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        let imgs: Vec<Option<Polynomial>> = self
            .ring
            .vars
            .names()
            .iter()
            .map(|n| images.get(n).cloned())
            .collect();
        self.substitute(target, &imgs)
    }

    /// Moves the polynomial into `target`, sending variable `i` to `map[i]`.
    pub fn rename_into(&self, target: &Ring, map: &[usize]) -> Polynomial {
        assert_eq!(target.field, self.ring.field);
        let n = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one(n);
            for (i, &e) in m.0.iter().enumerate() {
                out.0[map[i]] += e;
            }
            (out, c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Single variable occurring, `Ok(None)` for constants.
    fn univariate_var(&self) -> Result<Option<usize>, PolyError> {
        let used = self.vars_used();
        match used.len() {
            0 => Ok(None),
            1 => Ok(Some(used[0])),
            _ => Err(PolyError::NotUnivariate),
        }
    }

    fn dense(&self, var: Option<usize>) -> Vec<FieldElement> {
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut v = vec![self.ring.field.zero(); deg + 1];
        for (m, c) in &self.terms {
            let k = var.map(|i| m.0[i] as usize).unwrap_or(0);
            v[k] = c.clone();
        }
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        if self.is_zero() {
            v.clear();
        }
        v
    }

    /// Monic gcd of two univariate polynomials in the same variable.
    pub fn univariate_gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
        f.check(g)?;
        let var = match (f.univariate_var()?, g.univariate_var()?) {
            (Some(a), Some(b)) if a != b => return Err(PolyError::NotUnivariate),
            (a, b) => a.or(b),
        };
        let mut a = f.dense(var);
        let mut b = g.dense(var);
        while !b.is_empty() {
            let r = poly_rem(&a, &b);
            a = b;
            b = r;
        }
        let ring = &f.ring;
        if a.is_empty() {
            return Ok(Polynomial::zero(ring));
        }
        let lead_inv = a.last().unwrap().inv()?;
        let n = ring.nvars();
        let terms = a.iter().enumerate().map(|(k, c)| {
            let mut m = Monomial::one(n);
            if let Some(i) = var {
                m.0[i] = k as u32;
            }
            (m, c * &lead_inv)
        });
        Ok(Polynomial::from_terms(ring, terms))
    }
}

/// Remainder of dense univariate division; inputs have nonzero leading entry.
fn poly_rem(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().inv().expect("nonzero leading coefficient");
    while r.len() >= b.len() {
        let q = r.last().unwrap() * &lb;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&q * c);
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

macro_rules! forward_poly_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_poly_op!(Add, add, checked_add);
forward_poly_op!(Sub, sub, checked_sub);
forward_poly_op!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Prints terms in decreasing degrevlex order, e.g. `2*x^2*y - 1/3*y* + 1`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms(&MonomialOrder::DegRevLex).iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.ring.vars))?;
            } else {
                write!(f, "{abs}*{}", m.display(&self.ring.vars))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Times,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let next_significant = |mut j: usize| {
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        chars.get(j).copied()
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().map_err(|_| format!("bad number {text}"))?));
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            let mut name: String = chars[start..i].iter().collect();
            // a `*` directly after a name is a star suffix unless an operand follows
            if i < chars.len() && chars[i] == '*' {
                let follow = next_significant(i + 1);
                let operand = matches!(follow, Some(c) if is_ident_start(c) || c.is_ascii_digit() || c == '(');
                if !operand {
                    name.push('*');
                    i += 1;
                }
            }
            out.push(Token::Ident(name));
        } else {
            out.push(match c {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Times,
                '/' => Token::Slash,
                '^' => Token::Caret,
                '(' => Token::LParen,
                ')' => Token::RParen,
                _ => return Err(format!("unexpected character {c:?}")),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    input: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, input: &'a str) -> Result<Self, PolyError> {
        let tokens = tokenize(input).map_err(|message| PolyError::Parse {
            input: input.to_string(),
            message,
        })?;
        Ok(Parser {
            ring,
            input,
            tokens,
            pos: 0,
        })
    }

    fn err(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse {
            input: self.input.to_string(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn parse_all(mut self) -> Result<Polynomial, PolyError> {
        if self.tokens.is_empty() {
            return Err(self.err("empty input"));
        }
        let p = self.expr()?;
        if self.pos != self.tokens.len() {
            return Err(self.err(format!("unexpected token {:?}", self.tokens[self.pos])));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign_neg = false;
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                sign_neg = true;
            }
            Some(Token::Plus) => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign_neg { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Token::Plus) => sign_neg = false,
                Some(Token::Minus) => sign_neg = true,
                _ => break,
            }
            self.bump();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Times) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Token::Slash) => {
                    self.bump();
                    let d = self.factor()?;
                    let c = d
                        .constant_value()
                        .ok_or_else(|| self.err("division by a non-constant"))?;
                    let inv = c.inv()?;
                    acc = acc.scalar_mul(&inv)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let (base, var_name) = match self.bump() {
            Some(Token::Num(n)) => (
                Polynomial::constant(self.ring, FieldElement::from_bigint(self.ring.field, &n)),
                None,
            ),
            Some(Token::Ident(name)) => {
                let p = Polynomial::var_named(self.ring, &name);
                (p.unwrap_or_else(|_| Polynomial::zero(self.ring)), Some(name))
            }
            Some(Token::LParen) => {
                let p = self.expr()?;
                if self.bump() != Some(Token::RParen) {
                    return Err(self.err("missing ')'"));
                }
                (p, None)
            }
            Some(Token::Minus) => return Ok(-self.factor()?),
            other => return Err(self.err(format!("unexpected token {other:?}"))),
        };
        if self.peek() != Some(&Token::Caret) {
            if let Some(name) = &var_name {
                if self.ring.vars.index_of(name).is_none() {
                    return Err(PolyError::UnknownVariable(name.clone()));
                }
            }
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek() == Some(&Token::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let e: u32 = match self.bump() {
            Some(Token::Num(n)) => n.try_into().map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected exponent")),
        };
        match (negative, var_name) {
            (false, Some(name)) => {
                if self.ring.vars.index_of(&name).is_none() {
                    return Err(PolyError::UnknownVariable(name));
                }
                Ok(base.pow(e))
            }
            (false, None) => Ok(base.pow(e)),
            (true, Some(name)) => {
                // primes stay at the end: y''^-1 is y_inv''
                let stem = name.trim_end_matches('\'');
                let inv_name = format!("{stem}_inv{}", &name[stem.len()..]);
                Ok(Polynomial::var_named(self.ring, &inv_name)?.pow(e))
            }
            (true, None) => Err(self.err("negative exponent needs a variable with an _inv partner")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_q(names: &[&str]) -> Ring {
        PolyRing::new(VariableSet::plain(names), FieldSpec::Rationals)
    }

    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn ring_ops_examples() {
        let r = ring_q(&["x", "y"]);
        assert_eq!(&p(&r, "x+y") * &p(&r, "x-y"), p(&r, "x^2 - y^2"));
        let f = p(&r, "3*x*y - 1/2");
        assert!((&f + &f.scalar_mul(&r.field.element(-1)).unwrap()).is_zero());
        let r2 = PolyRing::new(VariableSet::plain(&["x", "y"]), FieldSpec::prime(2).unwrap());
        assert_eq!(p(&r2, "(x+y)^2"), p(&r2, "x^2+y^2"));
    }

    #[test]
    fn ring_mismatch_is_error() {
        let a = ring_q(&["x"]);
        let b = ring_q(&["y"]);
        assert_eq!(p(&a, "x").checked_add(&p(&b, "y")), Err(PolyError::RingMismatch));
    }

    #[test]
    fn involution_examples() {
        let r = PolyRing::new(VariableSet::starred(&["x", "y"]), FieldSpec::Rationals);
        assert_eq!(p(&r, "x*y*").apply_involution(), p(&r, "x* * y"));
        assert_eq!(p(&r, "x^2 + y").apply_involution(), p(&r, "x*^2 + y*"));
        let plain = ring_q(&["x", "y"]);
        let f = p(&plain, "x^2*y + 3");
        assert_eq!(f.apply_involution(), f);
    }

    #[test]
    fn leading_term_examples() {
        let r = ring_q(&["x", "y"]);
        let (m, _) = p(&r, "x^2*y + x*y^2").leading_term(&MonomialOrder::DegRevLex).unwrap();
        assert_eq!(m.exponents(), &[2, 1]);
        let (m, _) = p(&r, "x + y^3").leading_term(&MonomialOrder::Lex).unwrap();
        assert_eq!(m.exponents(), &[1, 0]);
        let (m, c) = p(&r, "5").leading_term(&MonomialOrder::DegRevLex).unwrap();
        assert!(m.is_one());
        assert_eq!(c, r.field.element(5));
        assert_eq!(
            Polynomial::zero(&r).leading_term(&MonomialOrder::Lex),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn degrevlex_breaks_ties_on_last_variable() {
        let r = ring_q(&["x", "y", "z"]);
        // x*z < y^2 in degrevlex, x*z > y^2 in lex
        let (m, _) = p(&r, "x*z + y^2").leading_term(&MonomialOrder::DegRevLex).unwrap();
        assert_eq!(m.exponents(), &[0, 2, 0]);
        let (m, _) = p(&r, "x*z + y^2").leading_term(&MonomialOrder::Lex).unwrap();
        assert_eq!(m.exponents(), &[1, 0, 1]);
        let ord = MonomialOrder::LexPriority(vec![2, 0]);
        let (m, _) = p(&r, "x^5 + z").leading_term(&ord).unwrap();
        assert_eq!(m.exponents(), &[0, 0, 1]);
    }

    #[test]
    fn evaluate_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        let r = PolyRing::new(VariableSet::plain(&["a", "b"]), f7);
        let point = |a: i64, b: i64| {
            BTreeMap::from([("a".to_string(), f7.element(a)), ("b".to_string(), f7.element(b))])
        };
        assert!(p(&r, "a^3 + b^3 - 1").evaluate(&point(1, 0)).unwrap().is_zero());
        assert!(p(&r, "a*b").evaluate(&point(2, 0)).unwrap().is_zero());
        let q = ring_q(&["x", "y"]);
        let pt = BTreeMap::from([("x".to_string(), q.field.one()), ("y".to_string(), q.field.one())]);
        assert!(p(&q, "2*x*y - y - 1").evaluate(&pt).unwrap().is_zero());
        let partial = BTreeMap::from([("x".to_string(), q.field.one())]);
        assert_eq!(
            p(&q, "x*y").evaluate(&partial),
            Err(PolyError::MissingVariable("y".into()))
        );
    }

    #[test]
    fn substitute_examples() {
        let base = ring_q(&["x", "y"]);
        let doubled = PolyRing::new(base.vars.tensor_power(2), FieldSpec::Rationals);
        let f = p(&base, "x^2");
        let img = vec![Some(p(&doubled, "x'")), None];
        assert_eq!(f.substitute(&doubled, &img).unwrap(), p(&doubled, "x'^2"));
        let delta_x = p(&doubled, "x'*y''^2 + y'*x''");
        let img = vec![Some(delta_x.clone()), Some(p(&doubled, "y'*y''"))];
        assert_eq!(p(&base, "x").substitute(&doubled, &img).unwrap(), delta_x);
        let k = ring_q(&[]);
        let eps = vec![Some(Polynomial::one(&k)), Some(Polynomial::zero(&k))];
        assert!(p(&base, "x*y").substitute(&k, &eps).unwrap().is_zero());
        assert!(matches!(
            p(&base, "y").substitute(&doubled, &[Some(p(&doubled, "x'"))]),
            Err(PolyError::MissingVariable(_))
        ));
    }

    #[test]
    fn gcd_examples() {
        let r = ring_q(&["z"]);
        let g = Polynomial::univariate_gcd(&p(&r, "z^2 - z"), &p(&r, "z^3 - z")).unwrap();
        assert_eq!(g, p(&r, "z^2 - z"));
        let g = Polynomial::univariate_gcd(&p(&r, "2*z"), &p(&r, "z^2")).unwrap();
        assert_eq!(g, p(&r, "z"));
        let r2 = ring_q(&["z", "w"]);
        assert_eq!(
            Polynomial::univariate_gcd(&p(&r2, "z*w"), &p(&r2, "z")),
            Err(PolyError::NotUnivariate)
        );
        let f2 = PolyRing::new(VariableSet::plain(&["z"]), FieldSpec::prime(2).unwrap());
        let g = Polynomial::univariate_gcd(&p(&f2, "z^2 + z"), &p(&f2, "z^3 + z")).unwrap();
        assert_eq!(g, p(&f2, "z^2 + z"));
    }

    #[test]
    fn print_and_parse_round_trip() {
        let r = PolyRing::new(VariableSet::starred(&["x", "y"]), FieldSpec::Rationals);
        let f = p(&r, "2*x^2*y - 1/3*y* + 1");
        assert_eq!(f.to_string(), "2*x^2*y - 1/3*y* + 1");
        let g = p(&r, "x* * y* - x*y* + x^3*x*^2 - 7");
        assert_eq!(p(&r, &g.to_string()), g);
        assert!(matches!(Polynomial::parse(&r, "x + w"), Err(PolyError::UnknownVariable(_))));
        assert!(Polynomial::parse(&r, "x +").is_err());
    }

    #[test]
    fn laurent_exponents_use_inverse_variable() {
        let r = ring_q(&["x", "y", "y_inv"]);
        assert_eq!(p(&r, "-x*y^-3"), p(&r, "-x*y_inv^3"));
    }

    #[test]
    fn primed_names_parse() {
        let base = ring_q(&["a", "b"]);
        let r = PolyRing::new(base.vars.tensor_power(3), FieldSpec::Rationals);
        let f = p(&r, "a'*a'' + b'*b''^2 - a'''");
        assert_eq!(p(&r, &f.to_string()), f);
        assert_eq!(f.num_terms(), 3);
    }
}
