//! Reduced Groebner bases, normal forms and ideal membership for a
//! *-closed ideal.

use std::sync::Arc;

use evohopf::fields::FieldSpec;
use evohopf::groebner::StarIdeal;
use evohopf::poly::{MonomialOrder, PolyRing, Polynomial, VariableSet};

fn main() {
    let ring = Arc::new(PolyRing {
        vars: VariableSet::starred(&["x", "y"]),
        field: FieldSpec::Rationals,
    });
    let gens = ["x^2 - y*", "y^2 - x*", "x*y"]
        .iter()
        .map(|s| Polynomial::parse(&ring, s).unwrap())
        .collect();
    let ideal = StarIdeal::star_generated(&ring, gens, MonomialOrder::DegRevLex).unwrap();
    let gb = ideal.groebner();
    println!("reduced basis ({} elements, star-stable {}):", gb.len(), gb.is_star_stable());
    for g in gb.elements() {
        println!("  {g}");
    }
    println!("quotient dimension: {:?}", gb.quotient_basis().dimension());
    for s in ["x^4 - x", "x^3 - y*x", "x*y*", "x + y"] {
        let f = Polynomial::parse(&ring, s).unwrap();
        println!("{s}: member {}, normal form {}", ideal.member(&f).unwrap(), gb.normal_form(&f).unwrap());
    }
}
