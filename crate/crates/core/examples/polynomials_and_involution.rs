//! Sparse polynomials in starred variables and the involution that swaps
//! each variable with its star.

use std::sync::Arc;

use evohopf::fields::FieldSpec;
use evohopf::poly::{PolyRing, Polynomial, VariableSet};

fn main() {
    let ring = Arc::new(PolyRing {
        vars: VariableSet::starred(&["x", "y"]),
        field: FieldSpec::Rationals,
    });
    let f = Polynomial::parse(&ring, "x*y* + 2*x^2 - 1/3*y*").unwrap();
    let g = Polynomial::parse(&ring, "x - x*").unwrap();
    println!("ring variables: {:?}", ring.vars.names());
    println!("f = {f}");
    println!("g = {g}");
    println!("f * g = {}", &f * &g);
    println!("f* = {}", f.apply_involution());
    println!("g* = -g: {}", g.apply_involution() == g.scalar_mul(&FieldSpec::Rationals.element(-1)).unwrap());
    println!("(fg)* = f* g*: {}", (&f * &g).apply_involution() == &f.apply_involution() * &g.apply_involution());

    let plain = Arc::new(PolyRing {
        vars: VariableSet::plain(&["z"]),
        field: FieldSpec::prime(2).unwrap(),
    });
    let p = Polynomial::parse(&plain, "z^4 + z^2").unwrap();
    let q = Polynomial::parse(&plain, "z^3 + z").unwrap();
    println!("over GF:2, gcd({p}, {q}) = {}", Polynomial::univariate_gcd(&p, &q).unwrap());
}
