//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::time::Duration;

use evohopf::evolution::{EvolutionAlgebra, FamilyName};
use evohopf::fields::{FieldElement, FieldSpec};
use evohopf::poly::{Monomial, Polynomial, Ring};
use rand::Rng;

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn family(name: FamilyName, field: FieldSpec, params: &[&str]) -> Option<EvolutionAlgebra> {
    let ps: Vec<FieldElement> = params.iter().map(|s| field.parse_element(s).unwrap()).collect();
    EvolutionAlgebra::family(name, field, &ps).ok()
}

/// Random polynomial with up to `terms` terms, exponents below `max_exp`
/// and small integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &Ring, terms: usize, max_exp: u32) -> Polynomial {
    let n = ring.nvars();
    let field = ring.field;
    let k = rng.gen_range(0..=terms);
    let ts: Vec<(Monomial, FieldElement)> = (0..k)
        .map(|_| {
            let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..max_exp)).collect();
            (Monomial::from_exponents(&e), field.element(rng.gen_range(-5..=5)))
        })
        .collect();
    Polynomial::from_terms(ring, ts)
}

/// Prints one acceptance line and returns whether it passed.
pub fn line(criterion: &str, passed: bool, detail: &str, elapsed: Duration, limit: Option<Duration>) -> bool {
    let within = limit.is_none_or(|l| elapsed <= l);
    let ok = passed && within;
    let limit_text = limit.map_or_else(String::new, |l| format!(", limit {} ms", l.as_millis()));
    println!(
        "criterion {criterion}: {} - {detail} (elapsed {} ms{limit_text})",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_millis()
    );
    ok
}
