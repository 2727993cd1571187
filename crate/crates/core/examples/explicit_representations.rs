//! Checking a candidate representation directly: the images of the basis in
//! U_p satisfy the product law and are linearly independent exactly when
//! the law is faithful.

use evohopf::evolution::{EvolutionAlgebra, FamilyName};
use evohopf::fields::FieldSpec;
use evohopf::upalgebra::{check_representation, ProductLaw, UniversalPAlgebra};

fn main() {
    let field = FieldSpec::Rationals;
    let cases = [
        (FamilyName::A2, vec![1], [0, 0, 0, 1]),
        (FamilyName::A6, vec![], [1, 0, 0, 0]),
        (FamilyName::A3, vec![1], [1, 0, 0, 1]),
    ];
    for (name, params, coeffs) in cases {
        let ps: Vec<_> = params.iter().map(|&x| field.element(x)).collect();
        let a = EvolutionAlgebra::family(name, field, &ps).unwrap();
        let law = ProductLaw::from_i64(field, coeffs);
        let up = UniversalPAlgebra::build(&a, &law).unwrap();
        let images = up.rho_images();
        let ok = check_representation(&a, &law, up.quotient(), &images).unwrap();
        let shown: Vec<String> = images.iter().map(|f| up.quotient().reduce(f).unwrap().to_string()).collect();
        println!("{} with law {law}: images {shown:?}, faithful representation {ok}", a.label());
    }
}
