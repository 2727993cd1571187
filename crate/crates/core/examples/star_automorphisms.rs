//! Automorphisms of T_p that commute with the involution, compared with the
//! subgroup generated by aut(A) and the involution itself.

use evohopf::evolution::{EvolutionAlgebra, FamilyName};
use evohopf::fields::FieldSpec;
use evohopf::upalgebra::{ProductLaw, UniversalPAlgebra};

fn main() {
    let cases = [
        (FamilyName::A1, vec![], [0, 1, 0, 0], 3),
        (FamilyName::A2, vec![1], [0, 0, 0, 1], 7),
        (FamilyName::A2, vec![1], [0, 0, 0, 1], 13),
    ];
    for (name, params, law, p) in cases {
        let field = FieldSpec::prime(p).unwrap();
        let ps: Vec<_> = params.iter().map(|&x| field.element(x)).collect();
        let a = EvolutionAlgebra::family(name, field, &ps).unwrap();
        let up = UniversalPAlgebra::build(&a, &ProductLaw::from_i64(field, law)).unwrap();
        let tight = up.tight().unwrap();
        let all = tight.star_automorphisms(None, 100_000_000).unwrap();
        let induced = up.induced_star_group(&tight).unwrap();
        println!(
            "{} over {field}: |aut(A)| = {}, induced subgroup {}, all *-automorphisms of T_p {}",
            a.label(),
            a.aut_points().unwrap().len(),
            induced.len(),
            all.len()
        );
    }
}
