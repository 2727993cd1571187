//! Re-derive the case-by-case membership claims with direct Groebner basis
//! membership tests.

use evohopf::certify;

fn main() {
    for case in certify::default_cases() {
        let out = certify::run_case(&case).unwrap();
        let verdict = if out.passed() { "ok" } else { "FAILED" };
        println!("{verdict:6} {} over {} ({} ideal)", case.label, case.field, out.ideal);
        for c in &out.checks {
            println!("       {} in ideal: {}", c.polynomial, c.member);
        }
    }
}
