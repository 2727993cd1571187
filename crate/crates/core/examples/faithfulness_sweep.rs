//! Sweep the default grid of product laws and count faithful universal
//! representations per family.

use evohopf::evolution::{EvolutionAlgebra, FamilyName};
use evohopf::fields::FieldSpec;
use evohopf::upalgebra::{default_law_grid, UniversalPAlgebra};
use rayon::prelude::*;

fn main() {
    let field = FieldSpec::prime(5).unwrap();
    let grid = default_law_grid(field);
    println!("{} laws over {field}", grid.len());
    for (name, params) in [
        (FamilyName::A1, vec![]),
        (FamilyName::A2, vec![1]),
        (FamilyName::A3, vec![1]),
        (FamilyName::A4, vec![1]),
        (FamilyName::A5ab, vec![1, 2]),
        (FamilyName::A6, vec![]),
    ] {
        let ps: Vec<_> = params.iter().map(|&x| field.element(x)).collect();
        let a = EvolutionAlgebra::family(name, field, &ps).unwrap();
        let faithful = grid
            .par_iter()
            .filter(|law| UniversalPAlgebra::build(&a, law).unwrap().faithful().unwrap().faithful)
            .count();
        let automorphisms = a.aut_points().unwrap().len();
        println!("{}: {faithful} faithful laws, {automorphisms} automorphisms", a.label());
    }
}
