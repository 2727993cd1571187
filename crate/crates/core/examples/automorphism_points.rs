//! Automorphism groups of the two-dimensional evolution algebras over
//! small prime fields.

use evohopf::evolution::{format_matrix, group_order, EvolutionAlgebra, FamilyName};
use evohopf::fields::FieldSpec;

fn main() {
    for p in [5, 7, 13] {
        let field = FieldSpec::prime(p).unwrap();
        for (name, params) in [
            (FamilyName::A1, vec![]),
            (FamilyName::A2, vec![1]),
            (FamilyName::A3, vec![2]),
            (FamilyName::A6, vec![]),
            (FamilyName::A8, vec![1]),
        ] {
            let ps: Vec<_> = params.iter().map(|&x| field.element(x)).collect();
            let a = EvolutionAlgebra::family(name, field, &ps).unwrap();
            let pts = a.aut_points().unwrap();
            println!("{} over {field}: {} automorphisms", a.label(), group_order(&pts, field).unwrap());
            if name == FamilyName::A2 && p == 7 {
                for m in &pts {
                    println!("  {}", format_matrix(m));
                }
            }
        }
    }
}
