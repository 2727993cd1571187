//! Commutative Hopf algebras given by generators and relations, the catalog
//! of algebras representing the automorphism group schemes of the
//! two-dimensional families, axiom verification, and the group law on
//! rational points.
//!
//! A presentation `K[v_1..v_k]/J` carries the images of its generators under
//! the comultiplication (polynomials in the doubled variables `v'`, `v''`),
//! the counit and the antipode. Axioms are checked by substitution followed
//! by normal forms modulo `J' + J''` (or `J' + J'' + J'''`). That is enough
//! because every map involved is an algebra homomorphism of commutative
//! algebras. A Laurent generator `y` is an extra variable `y_inv` with the
//! relation `y*y_inv - 1`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolution::{format_matrix, EvolutionAlgebra, EvolutionError, FamilyName};
use crate::fields::{FieldElement, FieldError, FieldSpec};
use crate::groebner::{buchberger, GroebnerBasis, GroebnerError, QuotientAlgebra};
use crate::linalg::{self, Matrix};
use crate::poly::{Monomial, MonomialOrder, PolyError, PolyRing, Polynomial, Ring, VariableSet};
use crate::upalgebra::{ProductLaw, TightPAlgebra, UniversalPAlgebra, UpError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Up(#[from] UpError),
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("{name} is not available in characteristic {characteristic}")]
    Characteristic { name: String, characteristic: u64 },
    #[error("{name} needs {expected} parameter(s), got {got}")]
    Parameters { name: String, expected: usize, got: usize },
    #[error("no {map} image for generator {generator}")]
    MissingMap { map: &'static str, generator: String },
    #[error("rational points need a finite field")]
    InfiniteField,
    #[error("point search over {0} assignments exceeds the bound")]
    SearchTooLarge(u128),
    #[error("point product left the variety: {0}")]
    PointViolation(String),
    #[error("invalid presentation: {0}")]
    Invalid(String),
}

/// Entries of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CatalogName {
    /// The ground field, for trivial group schemes.
    K,
    /// `K^2`, functions on the constant group of order 2.
    H1,
    /// `K[a,b]/(ab, a^3 + alpha b^3 - 1)`.
    H2,
    /// `K[x]`, the additive group, characteristic 2 only.
    H5Char2,
    /// `K[x, x^-1]`, the multiplicative group via the determinant.
    H5,
    /// `K[x,y]/(2xy - y - 1)`, an alternate form of `H5`.
    H5Alt,
    /// `K[x, y, y^-1]`.
    H6,
    /// `K[x, x^-1]`.
    H7,
    /// `K[x]/(x^2 - 1)`; dual numbers `K[x]/(x^2)` in characteristic 2.
    H8,
}

impl CatalogName {
    pub const ALL: [CatalogName; 9] = [
        CatalogName::K,
        CatalogName::H1,
        CatalogName::H2,
        CatalogName::H5Char2,
        CatalogName::H5,
        CatalogName::H5Alt,
        CatalogName::H6,
        CatalogName::H7,
        CatalogName::H8,
    ];

    pub fn arity(&self) -> usize {
        match self {
            CatalogName::H2 | CatalogName::H8 => 1,
            _ => 0,
        }
    }

    /// Whether the entry exists over fields of characteristic `c` (0 for Q).
    pub fn allows_characteristic(&self, c: u64) -> bool {
        match self {
            CatalogName::H5Char2 => c == 2,
            CatalogName::H5 | CatalogName::H5Alt => c != 2,
            _ => true,
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            CatalogName::K => "K",
            CatalogName::H1 => "H1",
            CatalogName::H2 => "H2",
            CatalogName::H5Char2 => "H5_char2",
            CatalogName::H5 => "H5",
            CatalogName::H5Alt => "H5_alt",
            CatalogName::H6 => "H6",
            CatalogName::H7 => "H7",
            CatalogName::H8 => "H8",
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = HopfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogName::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HopfError::UnknownName(s.to_string()))
    }
}

/// Serializable presentation. Maps are keyed by generator name; images of
/// `v_inv` for a Laurent generator `v` may be omitted when they can be
/// inverted from the image of `v`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HopfJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vars: Vec<String>,
    #[serde(default)]
    pub laurent_vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub delta: BTreeMap<String, String>,
    pub epsilon: BTreeMap<String, String>,
    pub antipode: BTreeMap<String, String>,
    /// Automorphism matrix (row convention) of the algebra whose group
    /// scheme this represents, as polynomials in the generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_matrix: Option<Vec<Vec<String>>>,
}

/// A verified-on-demand presentation of a commutative Hopf algebra.
#[derive(Debug, Clone)]
pub struct HopfPresentation {
    name: String,
    json: HopfJson,
    ring: Ring,
    /// For each ring variable, the index of its inverse variable.
    inverse: Vec<Option<usize>>,
    relations: Vec<Polynomial>,
    quotient: QuotientAlgebra,
    doubled: Ring,
    comul: Vec<Polynomial>,
    counit: Vec<FieldElement>,
    antipode: Vec<Polynomial>,
    aut_matrix: Option<Vec<Vec<Polynomial>>>,
}

impl HopfPresentation {
    pub fn from_json(json: &HopfJson, field: FieldSpec) -> Result<Self, HopfError> {
        let mut names: Vec<String> = json.vars.clone();
        names.extend(json.laurent_vars.iter().cloned());
        let n_free = names.len();
        names.extend(json.laurent_vars.iter().map(|v| format!("{v}_inv")));
        let vars = VariableSet::plain(&names);
        let mut inverse = vec![None; names.len()];
        for k in 0..json.laurent_vars.len() {
            let (v, vi) = (json.vars.len() + k, n_free + k);
            inverse[v] = Some(vi);
            inverse[vi] = Some(v);
        }
        let doubled = PolyRing::new(vars.tensor_power(2), field);
        let ring = PolyRing::new(vars, field);
        let mut relations = json
            .relations
            .iter()
            .map(|r| Polynomial::parse(&ring, r))
            .collect::<Result<Vec<_>, _>>()?;
        for k in 0..json.laurent_vars.len() {
            let v = Polynomial::var(&ring, json.vars.len() + k);
            let vi = Polynomial::var(&ring, n_free + k);
            relations.push(&(&v * &vi) - &Polynomial::one(&ring));
        }
        let gb = buchberger(&ring, &relations, &MonomialOrder::DegRevLex)?;
        let quotient = QuotientAlgebra::new(Arc::new(gb), false);

        let lookup = |map: &BTreeMap<String, String>, name: &str| map.get(name).cloned();
        let n = names.len();
        let mut comul: Vec<Option<Polynomial>> = vec![None; n];
        let mut counit: Vec<Option<FieldElement>> = vec![None; n];
        let mut antipode: Vec<Option<Polynomial>> = vec![None; n];
        for (i, name) in names.iter().enumerate() {
            if let Some(s) = lookup(&json.delta, name) {
                comul[i] = Some(Polynomial::parse(&doubled, &s)?);
            }
            if let Some(s) = lookup(&json.epsilon, name) {
                counit[i] = Some(field.parse_element(&s)?);
            }
            if let Some(s) = lookup(&json.antipode, name) {
                antipode[i] = Some(Polynomial::parse(&ring, &s)?);
            }
        }
        for i in n_free..n {
            let v = inverse[i].unwrap();
            if comul[i].is_none() {
                let doubled_inverse: Vec<Option<usize>> =
                    (0..2 * n).map(|j| inverse[j % n].map(|k| (j / n) * n + k)).collect();
                comul[i] = comul[v].as_ref().and_then(|f| invert_unit(f, &doubled_inverse));
            }
            if counit[i].is_none() {
                counit[i] = counit[v].as_ref().and_then(|c| c.inv().ok());
            }
            if antipode[i].is_none() {
                antipode[i] = antipode[v].as_ref().and_then(|f| invert_unit(f, &inverse));
            }
        }
        let missing = |map: &'static str, i: usize| HopfError::MissingMap {
            map,
            generator: names[i].clone(),
        };
        let comul = comul
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| missing("delta", i)))
            .collect::<Result<Vec<_>, _>>()?;
        let counit = counit
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| missing("epsilon", i)))
            .collect::<Result<Vec<_>, _>>()?;
        let antipode = antipode
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| missing("antipode", i)))
            .collect::<Result<Vec<_>, _>>()?;
        let aut_matrix = match &json.aut_matrix {
            None => None,
            Some(rows) => Some(
                rows.iter()
                    .map(|r| r.iter().map(|s| Polynomial::parse(&ring, s)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(HopfPresentation {
            name: json.name.clone().unwrap_or_else(|| "custom".into()),
            json: json.clone(),
            ring,
            inverse,
            relations,
            quotient,
            doubled,
            comul,
            counit,
            antipode,
            aut_matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn doubled_ring(&self) -> &Ring {
        &self.doubled
    }

    /// Relations of `J`, including `v*v_inv - 1` for Laurent generators.
    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    /// Vector-space dimension, `None` when infinite.
    pub fn dim(&self) -> Option<usize> {
        self.quotient.dim()
    }

    pub fn comultiplication(&self) -> &[Polynomial] {
        &self.comul
    }

    pub fn counit(&self) -> &[FieldElement] {
        &self.counit
    }

    pub fn antipode(&self) -> &[Polynomial] {
        &self.antipode
    }

    pub fn aut_matrix(&self) -> Option<&[Vec<Polynomial>]> {
        self.aut_matrix.as_deref()
    }

    pub fn to_json(&self) -> HopfJson {
        self.json.clone()
    }

    /// Copy with one comultiplication image replaced.
    pub fn with_delta(&self, generator: &str, image: &str) -> Result<Self, HopfError> {
        let mut json = self.json.clone();
        json.delta.insert(generator.to_string(), image.to_string());
        self.rebuilt(json)
    }

    /// Copy with one antipode image replaced.
    pub fn with_antipode(&self, generator: &str, image: &str) -> Result<Self, HopfError> {
        let mut json = self.json.clone();
        json.antipode.insert(generator.to_string(), image.to_string());
        self.rebuilt(json)
    }

    /// Copy with one counit value replaced.
    pub fn with_counit(&self, generator: &str, value: &str) -> Result<Self, HopfError> {
        let mut json = self.json.clone();
        json.epsilon.insert(generator.to_string(), value.to_string());
        self.rebuilt(json)
    }

    /// Copy whose comultiplication of generator `g` has the coefficient of
    /// its `term`-th term (in degrevlex order) shifted by `shift`.
    pub fn with_shifted_delta_coefficient(&self, g: usize, term: usize, shift: &FieldElement) -> Result<Self, HopfError> {
        let terms = self.comul[g].sorted_terms(&MonomialOrder::DegRevLex);
        let Some((m, _)) = terms.get(term % terms.len().max(1)) else {
            return Err(HopfError::Invalid("empty comultiplication image".into()));
        };
        let bump = Polynomial::monomial(&self.doubled, m.clone(), shift.clone());
        let image = &self.comul[g] + &bump;
        self.with_delta(self.ring.vars.name(g), &image.to_string())
    }

    fn rebuilt(&self, mut json: HopfJson) -> Result<Self, HopfError> {
        json.name = Some(format!("{} (modified)", self.name));
        HopfPresentation::from_json(&json, self.field())
    }

    fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Ring on `copies` primed copies of the generators.
    fn tensor_ring(&self, copies: usize) -> Ring {
        PolyRing::new(self.ring.vars.tensor_power(copies), self.field())
    }

    /// Groebner basis of `J' + J'' + ...` in the tensor ring.
    fn tensor_gb(&self, target: &Ring, copies: usize) -> Result<GroebnerBasis, HopfError> {
        let n = self.nvars();
        let mut gens = Vec::new();
        for k in 0..copies {
            let map: Vec<usize> = (0..n).map(|i| k * n + i).collect();
            for g in self.quotient.gb().elements() {
                gens.push(g.rename_into(target, &map));
            }
        }
        Ok(buchberger(target, &gens, &MonomialOrder::DegRevLex)?)
    }

    /// Structure constants of the quotient on its standard monomials:
    /// `table[i][j]` holds the coordinates of `m_i m_j`.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<FieldElement>>>, HopfError> {
        let q = &self.quotient;
        let d = q.dim().ok_or(GroebnerError::InfiniteDimensional)?;
        let basis: Vec<Polynomial> = (0..d)
            .map(|i| {
                let mut e = vec![self.field().zero(); d];
                e[i] = self.field().one();
                q.from_coordinates(&e)
            })
            .collect::<Result<_, _>>()?;
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                table[i][j] = q.coordinates(&q.multiply(&basis[i], &basis[j])?)?;
            }
        }
        Ok(table)
    }
}

/// Inverse of a unit monomial `c * v_1^e_1 ...` whose variables all have
/// inverse partners.
fn invert_unit(f: &Polynomial, inverse: &[Option<usize>]) -> Option<Polynomial> {
    if f.num_terms() != 1 {
        return None;
    }
    let (m, c) = f.terms().next()?;
    let mut out = Monomial::one(m.len());
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            let j = inverse.get(i).copied().flatten()?;
            *out.exponent_mut(j) += e;
        }
    }
    Some(Polynomial::monomial(f.ring(), out, c.inv().ok()?))
}

/// The catalog entry `name` over `field`; `H2` and `H8` take `alpha`.
pub fn catalog(name: CatalogName, field: FieldSpec, params: &[FieldElement]) -> Result<HopfPresentation, HopfError> {
    if params.len() != name.arity() {
        return Err(HopfError::Parameters {
            name: name.to_string(),
            expected: name.arity(),
            got: params.len(),
        });
    }
    let c = field.characteristic();
    if !name.allows_characteristic(c) {
        return Err(HopfError::Characteristic {
            name: name.to_string(),
            characteristic: c,
        });
    }
    let s = |x: &str| x.to_string();
    let map = |pairs: &[(&str, &str)]| pairs.iter().map(|(k, v)| (s(k), s(v))).collect::<BTreeMap<_, _>>();
    let matrix = |rows: [[&str; 2]; 2]| Some(rows.iter().map(|r| r.iter().map(|x| s(x)).collect()).collect());
    let mut json = match name {
        CatalogName::K => HopfJson {
            aut_matrix: matrix([["1", "0"], ["0", "1"]]),
            ..HopfJson::default()
        },
        CatalogName::H1 => HopfJson {
            vars: vec![s("h")],
            relations: vec![s("h^2 - h")],
            delta: map(&[("h", "h' + h'' - 2*h'*h''")]),
            epsilon: map(&[("h", "0")]),
            antipode: map(&[("h", "h")]),
            aut_matrix: matrix([["1 - h", "h"], ["h", "1 - h"]]),
            ..HopfJson::default()
        },
        CatalogName::H2 => {
            let alpha = &params[0];
            if alpha.is_zero() {
                return Err(HopfError::Invalid("alpha must be nonzero".into()));
            }
            let b2 = format!("({alpha})*b^2");
            HopfJson {
                vars: vec![s("a"), s("b")],
                relations: vec![s("a*b"), format!("a^3 + ({alpha})*b^3 - 1")],
                delta: [
                    (s("a"), format!("a'*a'' + ({alpha})*b'*b''^2")),
                    (s("b"), s("a'*b'' + b'*a''^2")),
                ]
                .into_iter()
                .collect(),
                epsilon: map(&[("a", "1"), ("b", "0")]),
                antipode: map(&[("a", "a^2"), ("b", "b")]),
                aut_matrix: Some(vec![vec![s("a"), s("b")], vec![b2, s("a^2")]]),
                ..HopfJson::default()
            }
        }
        CatalogName::H5Char2 => HopfJson {
            vars: vec![s("x")],
            delta: map(&[("x", "x' + x'' + 1")]),
            epsilon: map(&[("x", "1")]),
            antipode: map(&[("x", "x")]),
            aut_matrix: matrix([["x", "1 - x"], ["1 - x", "x"]]),
            ..HopfJson::default()
        },
        CatalogName::H5 => HopfJson {
            laurent_vars: vec![s("x")],
            delta: map(&[("x", "x'*x''")]),
            epsilon: map(&[("x", "1")]),
            antipode: map(&[("x", "x^-1")]),
            aut_matrix: matrix([["1/2 + 1/2*x", "1/2 - 1/2*x"], ["1/2 - 1/2*x", "1/2 + 1/2*x"]]),
            ..HopfJson::default()
        },
        CatalogName::H5Alt => HopfJson {
            vars: vec![s("x"), s("y")],
            relations: vec![s("2*x*y - y - 1")],
            delta: map(&[("x", "1 - x' - x'' + 2*x'*x''"), ("y", "y'*y''")]),
            epsilon: map(&[("x", "1"), ("y", "1")]),
            antipode: map(&[("x", "x*y"), ("y", "2*x - 1")]),
            aut_matrix: matrix([["x", "1 - x"], ["1 - x", "x"]]),
            ..HopfJson::default()
        },
        CatalogName::H6 => HopfJson {
            vars: vec![s("x")],
            laurent_vars: vec![s("y")],
            delta: map(&[("x", "x'*y''^2 + y'*x''"), ("y", "y'*y''")]),
            epsilon: map(&[("x", "0"), ("y", "1")]),
            antipode: map(&[("x", "-x*y^-3"), ("y", "y^-1")]),
            aut_matrix: matrix([["y^2", "0"], ["x", "y"]]),
            ..HopfJson::default()
        },
        CatalogName::H7 => HopfJson {
            laurent_vars: vec![s("x")],
            delta: map(&[("x", "x'*x''")]),
            epsilon: map(&[("x", "1")]),
            antipode: map(&[("x", "x^-1")]),
            aut_matrix: matrix([["1", "0"], ["0", "x"]]),
            ..HopfJson::default()
        },
        CatalogName::H8 => {
            if params[0].is_zero() {
                return Err(HopfError::Invalid("alpha must be nonzero".into()));
            }
            if c == 2 {
                // dual numbers: x stands for d - 1 where d^2 = 1
                HopfJson {
                    vars: vec![s("x")],
                    relations: vec![s("x^2")],
                    delta: map(&[("x", "x' + x'' + x'*x''")]),
                    epsilon: map(&[("x", "0")]),
                    antipode: map(&[("x", "x")]),
                    aut_matrix: matrix([["1", "0"], ["0", "1 + x"]]),
                    ..HopfJson::default()
                }
            } else {
                HopfJson {
                    vars: vec![s("x")],
                    relations: vec![s("x^2 - 1")],
                    delta: map(&[("x", "x'*x''")]),
                    epsilon: map(&[("x", "1")]),
                    antipode: map(&[("x", "x")]),
                    aut_matrix: matrix([["1", "0"], ["0", "x"]]),
                    ..HopfJson::default()
                }
            }
        }
    };
    json.name = Some(match params.first() {
        Some(a) => format!("{name}({a})"),
        None => name.to_string(),
    });
    HopfPresentation::from_json(&json, field)
}

/// The catalog entry representing the automorphism group scheme of a family
/// member. `params` are the family parameters.
pub fn catalog_for_family(family: FamilyName, field: FieldSpec, params: &[FieldElement]) -> Result<HopfPresentation, HopfError> {
    let alpha = || {
        params.first().cloned().ok_or_else(|| HopfError::Parameters {
            name: family.to_string(),
            expected: family.arity(),
            got: params.len(),
        })
    };
    match family {
        FamilyName::A1 => catalog(CatalogName::H1, field, &[]),
        FamilyName::A2 => catalog(CatalogName::H2, field, &[alpha()?]),
        FamilyName::A3 | FamilyName::A4 => catalog(CatalogName::K, field, &[]),
        FamilyName::A5ab => {
            if params.len() != 2 {
                return Err(HopfError::Parameters {
                    name: family.to_string(),
                    expected: 2,
                    got: params.len(),
                });
            }
            if params[0] == params[1] {
                catalog(CatalogName::H1, field, &[])
            } else {
                catalog(CatalogName::K, field, &[])
            }
        }
        FamilyName::A5 if field.characteristic() == 2 => catalog(CatalogName::H5Char2, field, &[]),
        FamilyName::A5 => catalog(CatalogName::H5, field, &[]),
        FamilyName::A6 => catalog(CatalogName::H6, field, &[]),
        FamilyName::A7 => catalog(CatalogName::H7, field, &[]),
        FamilyName::A8 => catalog(CatalogName::H8, field, &[alpha()?]),
    }
}

/// The default family members paired with their catalog entries over
/// `field`; members whose parameters are invalid over `field` are skipped.
pub fn default_pairings(field: FieldSpec) -> Vec<(EvolutionAlgebra, HopfPresentation)> {
    let cases: [(FamilyName, &[i64]); 11] = [
        (FamilyName::A1, &[]),
        (FamilyName::A2, &[1]),
        (FamilyName::A3, &[1]),
        (FamilyName::A4, &[1]),
        (FamilyName::A5ab, &[1, 2]),
        (FamilyName::A5ab, &[2, 2]),
        (FamilyName::A5, &[]),
        (FamilyName::A6, &[]),
        (FamilyName::A7, &[]),
        (FamilyName::A8, &[1]),
        (FamilyName::A8, &[2]),
    ];
    let mut out = Vec::new();
    for (family, ps) in cases {
        let params: Vec<FieldElement> = ps.iter().map(|&x| field.element(x)).collect();
        let (Ok(a), Ok(h)) = (
            EvolutionAlgebra::family(family, field, &params),
            catalog_for_family(family, field, &params),
        ) else {
            continue;
        };
        if out.iter().any(|(b, _): &(EvolutionAlgebra, HopfPresentation)| b.label() == a.label()) {
            continue;
        }
        out.push((a, h));
    }
    out
}

/// Outcome of one axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// Where it failed and the nonzero normal form found there.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            passed: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        AxiomCheck {
            passed: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub name: String,
    pub field: String,
    pub well_defined: AxiomCheck,
    pub coassociativity: AxiomCheck,
    pub counit: AxiomCheck,
    pub antipode: AxiomCheck,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.well_defined.passed && self.coassociativity.passed && self.counit.passed && self.antipode.passed
    }
}

/// Checks the four Hopf axioms. Checks stop at the first failure within an
/// axiom, which is then reported with its witness.
pub fn verify_hopf(h: &HopfPresentation) -> Result<AxiomReport, HopfError> {
    let n = h.nvars();
    let base = &h.ring;
    let names = h.ring.vars.names();
    let doubled_gb = h.tensor_gb(&h.doubled, 2)?;
    let base_var = |i: usize| Some(Polynomial::var(base, i));

    // (1) relations are sent into the ideal
    let mut well_defined = AxiomCheck::pass();
    let comul_map: Vec<Option<Polynomial>> = h.comul.iter().cloned().map(Some).collect();
    let antipode_map: Vec<Option<Polynomial>> = h.antipode.iter().cloned().map(Some).collect();
    for r in &h.relations {
        let d = doubled_gb.normal_form(&r.substitute(&h.doubled, &comul_map)?)?;
        if !d.is_zero() {
            well_defined = AxiomCheck::fail(format!("delta({r}) = {d}"));
            break;
        }
        let e = r.evaluate_at(&h.counit);
        if !e.is_zero() {
            well_defined = AxiomCheck::fail(format!("epsilon({r}) = {e}"));
            break;
        }
        let s = h.quotient.reduce(&r.substitute(base, &antipode_map)?)?;
        if !s.is_zero() {
            well_defined = AxiomCheck::fail(format!("S({r}) = {s}"));
            break;
        }
    }

    // (2) (delta x id) delta = (id x delta) delta
    let tripled = h.tensor_ring(3);
    let tripled_gb = h.tensor_gb(&tripled, 3)?;
    let shift = |f: &Polynomial, offset: usize| {
        let map: Vec<usize> = (0..2 * n).map(|j| j + offset).collect();
        f.rename_into(&tripled, &map)
    };
    let left: Vec<Option<Polynomial>> = (0..2 * n)
        .map(|j| {
            Some(if j < n {
                shift(&h.comul[j], 0)
            } else {
                Polynomial::var(&tripled, j + n)
            })
        })
        .collect();
    let right: Vec<Option<Polynomial>> = (0..2 * n)
        .map(|j| {
            Some(if j < n {
                Polynomial::var(&tripled, j)
            } else {
                shift(&h.comul[j - n], n)
            })
        })
        .collect();
    let mut coassociativity = AxiomCheck::pass();
    for (g, d) in h.comul.iter().enumerate() {
        let diff = &d.substitute(&tripled, &left)? - &d.substitute(&tripled, &right)?;
        let nf = tripled_gb.normal_form(&diff)?;
        if !nf.is_zero() {
            coassociativity = AxiomCheck::fail(format!("generator {}: {nf}", names[g]));
            break;
        }
    }

    // (3) (epsilon x id) delta = id = (id x epsilon) delta
    let constant = |i: usize| Some(Polynomial::constant(base, h.counit[i].clone()));
    let eps_left: Vec<Option<Polynomial>> = (0..2 * n).map(|j| if j < n { constant(j) } else { base_var(j - n) }).collect();
    let eps_right: Vec<Option<Polynomial>> = (0..2 * n).map(|j| if j < n { base_var(j) } else { constant(j - n) }).collect();
    let mut counit = AxiomCheck::pass();
    'counit: for (g, d) in h.comul.iter().enumerate() {
        for (side, map) in [("left", &eps_left), ("right", &eps_right)] {
            let diff = &d.substitute(base, map)? - &Polynomial::var(base, g);
            let nf = h.quotient.reduce(&diff)?;
            if !nf.is_zero() {
                counit = AxiomCheck::fail(format!("{side} counit at {}: {nf}", names[g]));
                break 'counit;
            }
        }
    }

    // (4) m(S x id) delta = unit . epsilon = m(id x S) delta
    let s_left: Vec<Option<Polynomial>> = (0..2 * n)
        .map(|j| if j < n { Some(h.antipode[j].clone()) } else { base_var(j - n) })
        .collect();
    let s_right: Vec<Option<Polynomial>> = (0..2 * n)
        .map(|j| if j < n { base_var(j) } else { Some(h.antipode[j - n].clone()) })
        .collect();
    let mut antipode = AxiomCheck::pass();
    'antipode: for (g, d) in h.comul.iter().enumerate() {
        for (side, map) in [("left", &s_left), ("right", &s_right)] {
            let diff = &d.substitute(base, map)? - &Polynomial::constant(base, h.counit[g].clone());
            let nf = h.quotient.reduce(&diff)?;
            if !nf.is_zero() {
                antipode = AxiomCheck::fail(format!("{side} antipode at {}: {nf}", names[g]));
                break 'antipode;
            }
        }
    }

    Ok(AxiomReport {
        name: h.name.clone(),
        field: h.field().to_string(),
        well_defined,
        coassociativity,
        counit,
        antipode,
    })
}

/// An algebra map `H -> K`: values of all ring variables, Laurent inverses
/// included, satisfying every relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub values: Vec<FieldElement>,
}

impl RationalPoint {
    pub fn assignment(&self, h: &HopfPresentation) -> BTreeMap<String, FieldElement> {
        h.ring.vars.names().iter().cloned().zip(self.values.iter().cloned()).collect()
    }

    /// `(a=1, b=0)` over the generators, inverses omitted.
    pub fn display(&self, h: &HopfPresentation) -> String {
        let parts: Vec<String> = h
            .ring
            .vars
            .names()
            .iter()
            .zip(&self.values)
            .zip(&h.inverse)
            .enumerate()
            .filter(|(i, (_, inv))| inv.map_or(true, |j| j > *i))
            .map(|(_, ((n, v), _))| format!("{n}={v}"))
            .collect();
        format!("({})", parts.join(", "))
    }
}

const POINT_SEARCH_BOUND: u128 = 10_000_000;

/// All rational points over a finite field, sorted.
pub fn rational_points(h: &HopfPresentation) -> Result<Vec<RationalPoint>, HopfError> {
    let field = h.field();
    let elems = field.enumerate().map_err(|_| HopfError::InfiniteField)?;
    let n = h.nvars();
    // inverse variables are determined by their partners
    let free: Vec<usize> = (0..n).filter(|&i| h.inverse[i].map_or(true, |j| j > i)).collect();
    let p = elems.len() as u128;
    let total = p.checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if total > POINT_SEARCH_BOUND {
        return Err(HopfError::SearchTooLarge(total));
    }
    let mut out = Vec::new();
    'search: for mut code in 0..total {
        let mut values = vec![field.zero(); n];
        for &i in &free {
            values[i] = elems[(code % p) as usize].clone();
            code /= p;
        }
        for &i in &free {
            if let Some(j) = h.inverse[i] {
                match values[i].inv() {
                    Ok(v) => values[j] = v,
                    Err(_) => continue 'search,
                }
            }
        }
        if h.relations.iter().all(|r| r.evaluate_at(&values).is_zero()) {
            out.push(RationalPoint { values });
        }
    }
    out.sort();
    Ok(out)
}

/// The neutral point `epsilon`.
pub fn counit_point(h: &HopfPresentation) -> RationalPoint {
    RationalPoint {
        values: h.counit.clone(),
    }
}

/// The inverse point `phi o S`.
pub fn antipode_point(h: &HopfPresentation, phi: &RationalPoint) -> Result<RationalPoint, HopfError> {
    let values: Vec<FieldElement> = h.antipode.iter().map(|s| s.evaluate_at(&phi.values)).collect();
    check_point(h, values)
}

/// Convolution product: `g -> delta(g)` evaluated at `v' = phi(v)`,
/// `v'' = psi(v)`.
pub fn point_product(h: &HopfPresentation, phi: &RationalPoint, psi: &RationalPoint) -> Result<RationalPoint, HopfError> {
    let doubled: Vec<FieldElement> = phi.values.iter().chain(&psi.values).cloned().collect();
    let values: Vec<FieldElement> = h.comul.iter().map(|d| d.evaluate_at(&doubled)).collect();
    check_point(h, values)
}

fn check_point(h: &HopfPresentation, values: Vec<FieldElement>) -> Result<RationalPoint, HopfError> {
    if let Some(r) = h.relations.iter().find(|r| !r.evaluate_at(&values).is_zero()) {
        let point = RationalPoint { values };
        return Err(HopfError::PointViolation(format!("{r} fails at {}", point.display(h))));
    }
    Ok(RationalPoint { values })
}

/// Automorphism matrix of a point under the recorded parameterization.
pub fn point_matrix(h: &HopfPresentation, phi: &RationalPoint) -> Result<Matrix, HopfError> {
    let rows = h
        .aut_matrix
        .as_ref()
        .ok_or_else(|| HopfError::Invalid(format!("{} records no automorphism matrix", h.name)))?;
    Ok(rows
        .iter()
        .map(|r| r.iter().map(|f| f.evaluate_at(&phi.values)).collect())
        .collect())
}

/// Comparison of the point group of `H` with the automorphism group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsIsoReport {
    pub hopf_points: usize,
    pub aut_points: usize,
    /// Every point maps to an automorphism, injectively and onto.
    pub bijective: bool,
    /// `matrix(phi * psi) = matrix(phi) matrix(psi)` for all pairs.
    pub respects_products: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl PointsIsoReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.respects_products
    }
}

/// Checks that the recorded parameterization is a group isomorphism from the
/// rational points of `h` onto the automorphisms of `a`.
pub fn points_group_iso_check(h: &HopfPresentation, a: &EvolutionAlgebra) -> Result<PointsIsoReport, HopfError> {
    if a.field() != h.field() {
        return Err(FieldError::SpecMismatch(a.field(), h.field()).into());
    }
    let points = rational_points(h)?;
    let auts = a.aut_points()?;
    let field = h.field();
    let matrices: Vec<Matrix> = points.iter().map(|p| point_matrix(h, p)).collect::<Result<_, _>>()?;
    let aut_set: HashSet<&Matrix> = auts.iter().collect();
    let image: HashSet<&Matrix> = matrices.iter().collect();
    let mut witness = None;
    if let Some((p, m)) = points.iter().zip(&matrices).find(|(_, m)| !aut_set.contains(m)) {
        witness = Some(format!("{} gives {} outside aut(A)", p.display(h), format_matrix(m)));
    }
    let bijective = witness.is_none() && image.len() == points.len() && image.len() == auts.len();
    let index: HashMap<&RationalPoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut respects_products = true;
    'pairs: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            let pq = point_product(h, p, q)?;
            let expected = linalg::matmul(&matrices[i], &matrices[j], field);
            let ok = index.contains_key(&pq) && point_matrix(h, &pq)? == expected;
            if !ok {
                respects_products = false;
                witness.get_or_insert_with(|| format!("product of {} and {}", p.display(h), q.display(h)));
                break 'pairs;
            }
        }
    }
    Ok(PointsIsoReport {
        hopf_points: points.len(),
        aut_points: auts.len(),
        bijective,
        respects_products,
        witness,
    })
}

/// A recorded algebra map from a tight algebra onto a catalog entry, given
/// by the images of `x, y, x*, y*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordedCorrespondence {
    pub family: FamilyName,
    pub params: Vec<i64>,
    pub law: [i64; 4],
    pub hopf: CatalogName,
    pub hopf_params: Vec<i64>,
    pub images: [&'static str; 4],
}

/// Correspondences for the perfect families with a faithful law.
pub fn recorded_correspondences() -> Vec<RecordedCorrespondence> {
    vec![
        RecordedCorrespondence {
            family: FamilyName::A1,
            params: vec![],
            law: [0, 1, 0, 0],
            hopf: CatalogName::H1,
            hopf_params: vec![],
            images: ["h", "1 - h", "h", "1 - h"],
        },
        RecordedCorrespondence {
            family: FamilyName::A2,
            params: vec![1],
            law: [0, 0, 0, 1],
            hopf: CatalogName::H2,
            hopf_params: vec![1],
            images: ["a", "b", "b^2", "a^2"],
        },
        RecordedCorrespondence {
            family: FamilyName::A5ab,
            params: vec![2, 2],
            law: [1, 0, 0, 2],
            hopf: CatalogName::H1,
            hopf_params: vec![],
            images: ["h", "1 - h", "1 - h", "h"],
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub dim_tight: usize,
    pub dim_hopf: usize,
    /// The images kill every defining relation of `U_p`.
    pub well_defined: bool,
    /// The induced map `T_p -> H` is a linear bijection.
    pub bijective: bool,
    /// Structure constants of `H` on the transported basis equal those of
    /// `T_p`.
    pub constants_match: bool,
    /// The unit of `T_p` goes to `1`.
    pub unit_to_one: bool,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.well_defined && self.bijective && self.constants_match && self.unit_to_one
    }
}

/// Compares `T_p` with `H` under the map sending the ring variables of `U_p`
/// to `images`.
pub fn check_tight_correspondence(
    up: &UniversalPAlgebra,
    tight: &TightPAlgebra,
    h: &HopfPresentation,
    images: &[Polynomial],
) -> Result<CorrespondenceReport, HopfError> {
    let nv = up.ring().nvars();
    if images.len() != nv {
        return Err(UpError::DimensionMismatch {
            expected: nv,
            got: images.len(),
        }
        .into());
    }
    let q = h.quotient();
    let map: Vec<Option<Polynomial>> = images.iter().map(|f| q.reduce(f).map(Some)).collect::<Result<_, _>>()?;
    let phi = |f: &Polynomial| -> Result<Polynomial, HopfError> { Ok(q.reduce(&f.substitute(h.ring(), &map)?)?) };
    let mut well_defined = true;
    for g in up.ideal().generators() {
        if !phi(g)?.is_zero() {
            well_defined = false;
            break;
        }
    }
    let dim_tight = tight.dim();
    let dim_hopf = h.dim().ok_or(GroebnerError::InfiniteDimensional)?;
    let field = h.field();
    let transported: Vec<Polynomial> = tight.basis().iter().map(&phi).collect::<Result<_, _>>()?;
    let p: Matrix = transported.iter().map(|f| q.coordinates(f)).collect::<Result<_, _>>()?;
    let inverse = (dim_tight == dim_hopf).then(|| linalg::inverse(&p, field)).flatten();
    let bijective = inverse.is_some();
    let mut constants_match = false;
    if let Some(pinv) = &inverse {
        let table = tight.structure_constants()?;
        constants_match = true;
        'table: for i in 0..dim_tight {
            for j in 0..dim_tight {
                let prod = q.coordinates(&q.multiply(&transported[i], &transported[j])?)?;
                let on_transported = linalg::matmul(&vec![prod], pinv, field).remove(0);
                if on_transported != table[i][j] {
                    constants_match = false;
                    break 'table;
                }
            }
        }
    }
    let unit_to_one = match tight.unit()? {
        Some(e) => phi(&e)? == Polynomial::one(h.ring()),
        None => false,
    };
    Ok(CorrespondenceReport {
        dim_tight,
        dim_hopf,
        well_defined,
        bijective,
        constants_match,
        unit_to_one,
    })
}

/// Runs a recorded correspondence over `field`.
pub fn run_recorded_correspondence(rc: &RecordedCorrespondence, field: FieldSpec) -> Result<CorrespondenceReport, HopfError> {
    let params: Vec<FieldElement> = rc.params.iter().map(|&x| field.element(x)).collect();
    let a = EvolutionAlgebra::family(rc.family, field, &params)?;
    let law = ProductLaw::from_i64(field, rc.law);
    let up = UniversalPAlgebra::build(&a, &law)?;
    let tight = up.tight()?;
    let hp: Vec<FieldElement> = rc.hopf_params.iter().map(|&x| field.element(x)).collect();
    let h = catalog(rc.hopf, field, &hp)?;
    let images: Vec<Polynomial> = rc
        .images
        .iter()
        .map(|s| Polynomial::parse(h.ring(), s))
        .collect::<Result<_, _>>()?;
    check_tight_correspondence(&up, &tight, &h, &images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn entry(name: CatalogName, field: FieldSpec) -> HopfPresentation {
        let params: Vec<FieldElement> = (0..name.arity()).map(|_| field.one()).collect();
        catalog(name, field, &params).unwrap()
    }

    #[test]
    fn h2_presentation_and_dimension() {
        let h = entry(CatalogName::H2, FieldSpec::Rationals);
        assert_eq!(h.dim(), Some(6));
        assert_eq!(h.relations().len(), 2);
        let report = verify_hopf(&h).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn every_entry_verifies() {
        for field in [FieldSpec::Rationals, gf(2), gf(3), gf(5), gf(7)] {
            for name in CatalogName::ALL {
                if !name.allows_characteristic(field.characteristic()) {
                    assert!(catalog(name, field, &vec![field.one(); name.arity()]).is_err());
                    continue;
                }
                let h = entry(name, field);
                let report = verify_hopf(&h).unwrap();
                assert!(report.all_passed(), "{name} over {field}: {report:?}");
            }
        }
    }

    #[test]
    fn mutated_antipode_fails() {
        let h = entry(CatalogName::H2, FieldSpec::Rationals).with_antipode("a", "a").unwrap();
        let report = verify_hopf(&h).unwrap();
        assert!(!report.antipode.passed);
        assert!(report.antipode.witness.is_some());
        assert!(!report.all_passed());
    }

    #[test]
    fn h6_inverse_images_are_derived() {
        let h = entry(CatalogName::H6, FieldSpec::Rationals);
        let names = h.ring().vars.names().to_vec();
        assert_eq!(names, vec!["x", "y", "y_inv"]);
        assert_eq!(h.comultiplication()[2].to_string(), "y_inv'*y_inv''");
        assert_eq!(h.antipode()[2].to_string(), "y");
        assert_eq!(h.antipode()[0], Polynomial::parse(h.ring(), "-x*y_inv^3").unwrap());
        assert_eq!(h.dim(), None);
    }

    #[test]
    fn point_counts() {
        assert_eq!(rational_points(&entry(CatalogName::H2, gf(7))).unwrap().len(), 6);
        assert_eq!(rational_points(&entry(CatalogName::H2, gf(13))).unwrap().len(), 6);
        assert_eq!(rational_points(&entry(CatalogName::H8, gf(2))).unwrap().len(), 1);
        for p in [2, 3, 5, 7] {
            assert_eq!(rational_points(&entry(CatalogName::H1, gf(p))).unwrap().len(), 2);
        }
        assert_eq!(rational_points(&entry(CatalogName::H6, gf(3))).unwrap().len(), 6);
        assert_eq!(rational_points(&entry(CatalogName::K, gf(5))).unwrap().len(), 1);
        assert!(matches!(
            rational_points(&entry(CatalogName::H1, FieldSpec::Rationals)),
            Err(HopfError::InfiniteField)
        ));
    }

    #[test]
    fn h2_point_product() {
        let f = gf(7);
        let h = entry(CatalogName::H2, f);
        let pt = |a: i64, b: i64| RationalPoint {
            values: vec![f.element(a), f.element(b)],
        };
        assert_eq!(point_product(&h, &pt(2, 0), &pt(0, 2)).unwrap(), pt(0, 4));
        let e = counit_point(&h);
        for p in rational_points(&h).unwrap() {
            assert_eq!(point_product(&h, &p, &e).unwrap(), p);
            let inv = antipode_point(&h, &p).unwrap();
            assert_eq!(point_product(&h, &p, &inv).unwrap(), e);
        }
    }

    #[test]
    fn points_match_automorphisms() {
        let f = gf(7);
        let a2 = EvolutionAlgebra::family(FamilyName::A2, f, &[f.one()]).unwrap();
        let h = catalog_for_family(FamilyName::A2, f, &[f.one()]).unwrap();
        let r = points_group_iso_check(&h, &a2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.hopf_points, r.aut_points), (6, 6));
        let f3 = gf(3);
        let a6 = EvolutionAlgebra::family(FamilyName::A6, f3, &[]).unwrap();
        let r = points_group_iso_check(&catalog_for_family(FamilyName::A6, f3, &[]).unwrap(), &a6).unwrap();
        assert!(r.passed());
        assert_eq!(r.hopf_points, 6);
    }

    #[test]
    fn json_round_trip() {
        let h = entry(CatalogName::H6, gf(5));
        let text = serde_json::to_string(&h.to_json()).unwrap();
        let back: HopfJson = serde_json::from_str(&text).unwrap();
        let h2 = HopfPresentation::from_json(&back, gf(5)).unwrap();
        assert_eq!(h2.comultiplication(), h.comultiplication());
        assert!(verify_hopf(&h2).unwrap().all_passed());
    }

    #[test]
    fn recorded_correspondences_hold() {
        for rc in recorded_correspondences() {
            for field in [FieldSpec::Rationals, gf(5)] {
                let r = run_recorded_correspondence(&rc, field).unwrap();
                assert!(r.passed(), "{:?} over {field}: {r:?}", rc.family);
            }
        }
    }

    #[test]
    fn wrong_images_are_rejected() {
        let mut rc = recorded_correspondences().remove(1);
        rc.images = ["a", "b", "a^2", "b^2"];
        let r = run_recorded_correspondence(&rc, FieldSpec::Rationals).unwrap();
        assert!(!r.well_defined);
    }

    #[test]
    fn default_pairings_are_consistent() {
        for p in [2, 3, 5, 7, 13] {
            let pairs = default_pairings(gf(p));
            assert!(pairs.len() >= 8, "GF({p}) has {} pairings", pairs.len());
            for (a, h) in pairs {
                let r = points_group_iso_check(&h, &a).unwrap();
                assert!(r.passed(), "{} / {} over GF({p}): {r:?}", a.label(), h.name());
                assert_eq!(r.hopf_points, r.aut_points);
            }
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("h5_char2".parse::<CatalogName>().unwrap(), CatalogName::H5Char2);
        assert!("H9".parse::<CatalogName>().is_err());
    }
}
