//! Ideal-membership claims of the non-faithfulness case analysis, re-checked
//! by normal forms instead of explicit cofactors.
//!
//! Every case works in `K[x, y, z, t]` with `z = x*` and `t = y*`. A case
//! either refers to the full defining ideal of `U_p` or to an explicitly
//! listed generating set (which is then also checked to lie inside `U_p`'s
//! ideal).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolution::{EvolutionAlgebra, EvolutionError, FamilyName};
use crate::fields::{FieldError, FieldSpec};
use crate::groebner::{GroebnerError, StarIdeal};
use crate::poly::{MonomialOrder, PolyError, PolyRing, Polynomial, Ring, VariableSet};
use crate::upalgebra::{ProductLaw, UniversalPAlgebra, UpError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Up(#[from] UpError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{family} algebras have dimension {dim}; certificates need dimension 2")]
    Dimension { family: FamilyName, dim: usize },
    #[error("elimination check needs characteristic 2, got {0}")]
    Characteristic(u64),
}

impl From<PolyError> for CertifyError {
    fn from(e: PolyError) -> Self {
        CertifyError::Groebner(e.into())
    }
}

/// One membership claim: the listed polynomials lie in the ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertCase {
    pub label: String,
    pub family: FamilyName,
    #[serde(default)]
    pub params: Vec<String>,
    pub law: [String; 4],
    pub field: FieldSpec,
    /// Generators of the ideal the claim is about; empty means the full
    /// defining ideal of `U_p`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub listed: Vec<String>,
    pub members: Vec<String>,
}

/// Normal-form verdict for one polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCheck {
    pub polynomial: String,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub label: String,
    pub ideal: String,
    /// Whether every listed generator lies in the ideal of `U_p`; `None`
    /// when the case uses the full ideal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub listed_in_ideal: Option<bool>,
    pub checks: Vec<MembershipCheck>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.listed_in_ideal != Some(false) && self.checks.iter().all(|c| c.member)
    }
}

/// `K[x, y, z, t]` with the involution `x <-> z`, `y <-> t`.
pub fn xyzt_ring(field: FieldSpec) -> Ring {
    let vars = VariableSet::with_pairs(&["x", "y", "z", "t"], &[(0, 2), (1, 3)]).expect("valid pairing");
    PolyRing::new(vars, field)
}

fn full_ideal(case: &CertCase, ring: &Ring) -> Result<StarIdeal, CertifyError> {
    let field = case.field;
    let params = case
        .params
        .iter()
        .map(|s| field.parse_element(s))
        .collect::<Result<Vec<_>, _>>()?;
    let algebra = EvolutionAlgebra::family(case.family, field, &params)?;
    if algebra.dim() != 2 {
        return Err(CertifyError::Dimension {
            family: case.family,
            dim: algebra.dim(),
        });
    }
    let law = ProductLaw::from_strs(field, &case.law)?;
    let up = UniversalPAlgebra::build(&algebra, &law)?;
    // U_p orders its variables x, y, x*, y*, which is x, y, z, t here
    let gens = up
        .ideal()
        .generators()
        .iter()
        .map(|g| g.rename_into(ring, &[0, 1, 2, 3]))
        .collect();
    Ok(StarIdeal::star_generated(ring, gens, MonomialOrder::DegRevLex)?)
}

/// Runs one case: builds the ideal and reduces every claimed member.
pub fn run_case(case: &CertCase) -> Result<CaseOutcome, CertifyError> {
    let ring = xyzt_ring(case.field);
    let full = full_ideal(case, &ring)?;
    let (ideal, listed_in_ideal, name) = if case.listed.is_empty() {
        (full, None, "full".to_string())
    } else {
        let gens = case
            .listed
            .iter()
            .map(|g| Polynomial::parse(&ring, g))
            .collect::<Result<Vec<_>, _>>()?;
        let mut inside = true;
        for g in &gens {
            inside &= full.member(g)?;
        }
        let listed = StarIdeal::plain(&ring, gens, MonomialOrder::DegRevLex)?;
        (listed, Some(inside), format!("listed ({} generators)", case.listed.len()))
    };
    let mut checks = Vec::new();
    for m in &case.members {
        let f = Polynomial::parse(&ring, m)?;
        checks.push(MembershipCheck {
            polynomial: m.clone(),
            member: ideal.member(&f)?,
        });
    }
    Ok(CaseOutcome {
        label: case.label.clone(),
        ideal: name,
        listed_in_ideal,
        checks,
    })
}

fn case(label: &str, family: FamilyName, params: &[&str], law: [&str; 4], listed: &[&str], members: &[&str]) -> CertCase {
    CertCase {
        label: label.to_string(),
        family,
        params: params.iter().map(|s| s.to_string()).collect(),
        law: law.map(str::to_string),
        field: FieldSpec::Rationals,
        listed: listed.iter().map(|s| s.to_string()).collect(),
        members: members.iter().map(|s| s.to_string()).collect(),
    }
}

/// The case list for A3, A4 and A5(alpha, beta), instantiated at `alpha = 1`
/// (and `beta = 2`) with a concrete law satisfying each case's conditions.
pub fn default_cases() -> Vec<CertCase> {
    use FamilyName::{A3, A4, A5ab};
    let mut v = vec![
        // A3: e1^2 = e1, e2^2 = e1 + e2
        case("A3 l0=l3", A3, &["1"], ["1", "0", "0", "1"], &[], &["x - z", "y - t"]),
        case(
            "A3 l1!=l2, lambda!=0",
            A3,
            &["1"],
            ["1", "1", "0", "0"],
            &[],
            &["x*y - z*t", "x*t - z*y", "x - z", "x"],
        ),
        case("A3 l1!=l2, lambda=0", A3, &["1"], ["1", "1", "0", "-2"], &[], &["x"]),
        case("A3 l1=l2=0, l3=0", A3, &["1"], ["1", "0", "0", "0"], &[], &["x*y", "x"]),
        case(
            "A3 l1=l2=0, l0+l3!=0, l3!=0",
            A3,
            &["1"],
            ["1", "0", "0", "2"],
            &[],
            &["x*y", "z^2*y", "z*y", "x"],
        ),
        case("A3 l1=l2=0, l0+l3=0", A3, &["1"], ["1", "0", "0", "-1"], &[], &["x + z", "x"]),
        case(
            "A3 l1=l2=1, cubic identity",
            A3,
            &["1"],
            ["2", "1", "1", "0"],
            &[
                "2*x*z + 2*z^2 - z",
                "2*x^2 + 2*x*z - x",
                "t*x + 2*x*y + y*z",
                "2*t^2 + 2*t*y - t - z",
                "2*t*y - x + 2*y^2 - y",
                "x*y - t*z",
            ],
            &["x*z^2 - x^3"],
        ),
        case(
            "A3 l1=l2=1, (l0+l3+1)^2!=1",
            A3,
            &["1"],
            ["2", "1", "1", "0"],
            &[],
            &["z - x", "x*t", "x*y", "x"],
        ),
        case(
            "A3 l1=l2=1, l0+l3=0",
            A3,
            &["1"],
            ["1", "1", "1", "-1"],
            &["2*x^2 - x", "t*x + x*y", "t^2 - y^2 + 2*t*y - t - x", "-t^2 + y^2 + 2*t*y - x - y"],
            &["x"],
        ),
        case("A3 l1=l2=1, l0+l3=-2", A3, &["1"], ["-2", "1", "1", "0"], &[], &["x"]),
        // A4: e1^2 = e2, e2^2 = e1 + e2
        case("A4 l0=l3", A4, &["1"], ["1", "1", "0", "1"], &[], &["y - t", "x - z"]),
        case(
            "A4 l0=0, l1!=l2",
            A4,
            &["1"],
            ["0", "1", "2", "1"],
            &[
                "x*y - z*t",
                "3*x*z + z^2 - y",
                "3*y*t + t^2 - x - y",
                "x*y + x*t + 2*z*y",
                "x*y + 2*x*t + z*y",
                "x^2 + 3*x*z - t",
                "y^2 + 3*y*t - z - t",
            ],
            &["t"],
        ),
        case(
            "A4 l0=0, l1=l2!=0, l3!=0",
            A4,
            &["1"],
            ["0", "1", "1", "1"],
            &[
                "x*y - z*t",
                "2*x*z + z^2 - y",
                "2*y*t + t^2 - x - y",
                "x*y + x*t + z*y",
                "x^2 + 2*x*z - t",
                "y^2 + 2*y*t - z - t",
                "z*t + z*y + x*t",
            ],
            &["t"],
        ),
        case(
            "A4 l0=l1=l2=0, l3!=0",
            A4,
            &["1"],
            ["0", "0", "0", "1"],
            &["x*y - z*t", "z^2 + t^2 - x - 2*y", "x*y", "x^2 - t", "y^2 - z - t", "z*t"],
            &["t"],
        ),
        case(
            "A4 l0!=0, l1!=l2, l0+l1+l2!=0",
            A4,
            &["1"],
            ["1", "1", "0", "0"],
            &[],
            &["x*t - z*y", "x*y - z*t", "t"],
        ),
        case(
            "A4 l0!=0, l1!=l2, l0+l1+l2=0",
            A4,
            &["1"],
            ["-1", "1", "0", "0"],
            &[
                "x*y - z*t",
                "-x^2 + x*z - y",
                "-y^2 + y*t - x - y",
                "-x*y + x*t",
                "-x*y + z*y",
                "x*z - z^2 - t",
                "y*t - t^2 - z - t",
                "-z*t + z*y",
                "-z*t + x*t",
            ],
            &["t"],
        ),
        case(
            "A4 l0=1, l1=l2 not in {-1,0}",
            A4,
            &["1"],
            ["1", "1", "1", "0"],
            &[
                "x*y - z*t",
                "x^2 + 2*x*z - y",
                "y^2 + 2*y*t - x - y",
                "x*y + x*t + z*y",
                "2*x*z + z^2 - t",
                "2*y*t + t^2 - z - t",
                "z*t + z*y + x*t",
            ],
            &["t"],
        ),
        case(
            "A4 l0=1, l1=l2=0",
            A4,
            &["1"],
            ["1", "0", "0", "2"],
            &[
                "x*y - z*t",
                "x^2 + 2*z^2 - y",
                "y^2 + 2*t^2 - x - y",
                "3*x*y",
                "2*x^2 + z^2 - t",
                "2*y^2 + t^2 - z - t",
                "3*z*t",
            ],
            &["t"],
        ),
        case(
            "A4 l0=1, l1=l2=-1",
            A4,
            &["1"],
            ["1", "-1", "-1", "0"],
            &[
                "x*y - z*t",
                "x^2 - 2*x*z - y",
                "y^2 - 2*y*t - x - y",
                "x*y - x*t - z*y",
                "-2*x*z + z^2 - t",
                "-2*y*t + t^2 - z - t",
                "z*t - z*y - x*t",
            ],
            &["t"],
        ),
        // A5(alpha, beta): e1^2 = e1 + alpha e2, e2^2 = beta e1 + e2, law (l, m, n, p)
        case("A5ab p=l", A5ab, &["1", "2"], ["1", "0", "0", "1"], &[], &["x - z", "y - t"]),
        case(
            "A5ab p!=l, m!=n",
            A5ab,
            &["1", "2"],
            ["1", "1", "0", "0"],
            &[],
            &["x*t - z*y", "x*y - z*t", "x^2 - z^2", "y^2 - t^2"],
        ),
        case("A5ab p=m=n=0, l!=0", A5ab, &["1", "2"], ["1", "0", "0", "0"], &[], &["x*y", "z*t", "x", "y"]),
        case(
            "A5ab m=n=0, p not in {l,0}, p^2!=l^2, p!=beta l",
            A5ab,
            &["1", "2"],
            ["1", "0", "0", "3"],
            &[],
            &["y^2", "t^2", "x", "y", "z", "t"],
        ),
        case(
            "A5ab m=n=0, p=beta l",
            A5ab,
            &["1", "2"],
            ["1", "0", "0", "2"],
            &[],
            &["x*z", "x^2", "x", "y"],
        ),
        case(
            "A5ab m=n=0, p=-l",
            A5ab,
            &["1", "2"],
            ["1", "0", "0", "-1"],
            &[],
            &["x + z", "y + t", "x^2 - z^2", "y^2 - t^2"],
        ),
        case(
            "A5ab p!=l, m=n=1",
            A5ab,
            &["1", "2"],
            ["1", "1", "1", "0"],
            &[
                "x*y - t*z",
                "x*y + t*x + y*z",
                "x^2 + 2*x*z - x - y",
                "2*x*z + z^2 - z - t",
                "2*y*t + y^2 - 2*x - y",
                "t^2 + 2*y*t - 2*z - t",
                "t*z + t*x + y*z",
            ],
            &[
                "y*t - 2*x*z",
                "y^2 - 2*z^2",
                "-2*t*x + 2*x^2 + 2*y*z - 2*z^2",
                "-t*x + y*z + 2*t*x - 2*y*z",
            ],
        ),
        case(
            "A5ab p!=l, m=n=1, consequences",
            A5ab,
            &["1", "2"],
            ["1", "1", "1", "0"],
            &[],
            &["y*z - x*t", "x^2 - z^2", "y^2 - t^2"],
        ),
    ];
    // the characteristic-2 branch of the A4 analysis, where the claim is alpha t
    let mut char2 = case(
        "A4 char 2, l0=1, l1=l2=1",
        A4,
        &["1"],
        ["1", "1", "1", "0"],
        &[
            "x*y + z*t",
            "x^2 + y",
            "y^2 + x + y",
            "x*y + x*t + z*y",
            "z^2 + t",
            "t^2 + z + t",
        ],
        &["t"],
    );
    char2.field = FieldSpec::Prime(2);
    v.push(char2);
    v
}

/// Outcome of the elimination-then-gcd pipeline.
#[derive(Debug, Clone)]
pub struct EliminationReport {
    pub generators: Vec<Polynomial>,
    /// Elements of the elimination ideal, univariate in `z`.
    pub eliminated: Vec<Polynomial>,
    /// Monic gcd of `eliminated`.
    pub gcd: Polynomial,
    /// The three univariate polynomials quoted with the argument, at the
    /// given parameters.
    pub quoted: Vec<Polynomial>,
    pub quoted_gcd: Polynomial,
    pub z_member: bool,
}

fn monic_gcd(polys: &[Polynomial], ring: &Ring) -> Result<Polynomial, CertifyError> {
    let mut g = Polynomial::zero(ring);
    for f in polys {
        g = Polynomial::univariate_gcd(&g, f)?;
    }
    Ok(g)
}

/// Eliminates `x`, `y`, `t` (in that order) from the characteristic-2
/// system for A4 with `l0 = 0`, `l1 = l2`, `l3 = 1`, then takes the gcd of
/// the resulting polynomials in `z`.
pub fn char2_elimination(field: FieldSpec, alpha: &str, lambda1: &str) -> Result<EliminationReport, CertifyError> {
    if field.characteristic() != 2 {
        return Err(CertifyError::Characteristic(field.characteristic()));
    }
    let a = field.parse_element(alpha)?;
    let l = field.parse_element(lambda1)?;
    let ring = xyzt_ring(field);
    let src = [
        format!("x*y - z*t"),
        format!("z^2 - ({a})*y"),
        format!("t^2 - x - y"),
        format!("x*y + ({l})*(x*t + z*y)"),
        format!("x^2 - ({a})*t"),
        format!("y^2 - z - t"),
    ];
    let generators = src
        .iter()
        .map(|s| Polynomial::parse(&ring, s))
        .collect::<Result<Vec<_>, _>>()?;
    let ideal = StarIdeal::plain(&ring, generators.clone(), MonomialOrder::DegRevLex)?;
    let eliminated = ideal.eliminate(&[0, 1, 3])?;
    let gcd = monic_gcd(&eliminated, &ring)?;
    let quoted_src = [
        format!("z^10 + ({a})^3*z^5 + ({a})^4*z^4 + ({a})^3*z^4 + ({a})^5*z^2"),
        format!("z^16 + ({a})^8*z^4 + ({a})^7*z^4 + ({a})^6*z^4 + ({a})^9*z"),
        format!(
            "({l})*z^12 + ({a})*z^10 + ({a})^2*({l})*z^9 + ({a})^4*({l})*z^6 + ({a})^3*({l})*z^6 \
             + ({a})^5*z^4 + ({a})^4*z^4 + ({a})^6*({l})*z^3"
        ),
    ];
    let quoted = quoted_src
        .iter()
        .map(|s| Polynomial::parse(&ring, s))
        .collect::<Result<Vec<_>, _>>()?;
    let quoted_gcd = monic_gcd(&quoted, &ring)?;
    let z = Polynomial::var(&ring, 2);
    let z_member = ideal.member(&z)?;
    Ok(EliminationReport {
        generators,
        eliminated,
        gcd,
        quoted,
        quoted_gcd,
        z_member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_default_case_holds() {
        for c in default_cases() {
            let out = run_case(&c).unwrap();
            assert!(out.passed(), "{}: {:?}", c.label, out);
        }
    }

    #[test]
    fn non_members_are_rejected() {
        let mut c = default_cases().remove(0);
        c.members = vec!["x".into(), "x - y".into()];
        let out = run_case(&c).unwrap();
        assert!(!out.passed());
        // listed generators outside the ideal are caught
        let mut c = default_cases().remove(0);
        c.listed = vec!["x + 1".into()];
        c.members = vec!["x + 1".into()];
        let out = run_case(&c).unwrap();
        assert_eq!(out.listed_in_ideal, Some(false));
        assert!(!out.passed());
    }

    #[test]
    fn elimination_gcd_is_z() {
        let r = char2_elimination(FieldSpec::Prime(2), "1", "1").unwrap();
        let ring = xyzt_ring(FieldSpec::Prime(2));
        let z = Polynomial::var(&ring, 2);
        assert!(!r.eliminated.is_empty());
        assert!(r.eliminated.iter().all(|f| f.vars_used() == vec![2]));
        assert_eq!(r.gcd, z);
        assert_eq!(r.quoted_gcd, z);
        assert!(r.z_member);
        assert!(char2_elimination(FieldSpec::Prime(3), "1", "1").is_err());
    }

    #[test]
    fn cases_round_trip_json() {
        let cases = default_cases();
        let s = serde_json::to_string(&cases).unwrap();
        let back: Vec<CertCase> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cases);
    }
}
