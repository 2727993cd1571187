//! The universal p-algebra U_p of an evolution algebra and its tight
//! subalgebra T_p.

use evohopf::evolution::{EvolutionAlgebra, FamilyName};
use evohopf::fields::FieldSpec;
use evohopf::upalgebra::{ProductLaw, UniversalPAlgebra};

fn main() {
    let field = FieldSpec::Rationals;
    let a = EvolutionAlgebra::family(FamilyName::A2, field, &[field.one()]).unwrap();
    let law = ProductLaw::from_i64(field, [0, 0, 0, 1]);
    let up = UniversalPAlgebra::build(&a, &law).unwrap();
    println!("{} with law {law}", a.label());
    println!("ideal basis:");
    for g in up.ideal().groebner().elements() {
        println!("  {g}");
    }
    let report = up.faithful().unwrap();
    println!("dim U_p = {:?}, faithful {}", report.dim_u, report.faithful);
    let tight = up.tight().unwrap();
    println!("dim T_p = {}", tight.dim());
    println!("T_p basis: {:?}", tight.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>());
    println!("unit of T_p: {:?}", tight.unit().unwrap().map(|u| u.to_string()));

    let a4 = EvolutionAlgebra::family(FamilyName::A4, field, &[field.one()]).unwrap();
    let law = ProductLaw::from_i64(field, [0, 1, 2, 1]);
    let r = UniversalPAlgebra::build(&a4, &law).unwrap().faithful().unwrap();
    let relation = r.kernel_relation.map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("{} with law {law}: faithful {}, kernel relation {relation:?}", a4.label(), r.faithful);
}
