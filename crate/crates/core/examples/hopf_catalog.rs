//! The catalog of Hopf algebras: axiom checks, dimensions and the group of
//! rational points.

use evohopf::fields::FieldSpec;
use evohopf::hopf::{self, CatalogName};

fn main() {
    for field in [FieldSpec::Rationals, FieldSpec::prime(2).unwrap(), FieldSpec::prime(7).unwrap()] {
        for name in CatalogName::ALL {
            let params = vec![field.one(); name.arity()];
            let Ok(h) = hopf::catalog(name, field, &params) else {
                continue;
            };
            let report = hopf::verify_hopf(&h).unwrap();
            println!("{} over {field}: dim {:?}, axioms pass {}", h.name(), h.dim(), report.all_passed());
        }
    }

    let gf13 = FieldSpec::prime(13).unwrap();
    let h2 = hopf::catalog(CatalogName::H2, gf13, &[gf13.one()]).unwrap();
    let pts = hopf::rational_points(&h2).unwrap();
    println!("{} has {} points over {gf13}", h2.name(), pts.len());
    let (a, b) = (&pts[1], &pts[2]);
    let ab = hopf::point_product(&h2, a, b).unwrap();
    println!("  {} * {} = {}", a.display(&h2), b.display(&h2), ab.display(&h2));
    println!("  inverse of {}: {}", a.display(&h2), hopf::antipode_point(&h2, a).unwrap().display(&h2));
    println!("  identity: {}", hopf::counit_point(&h2).display(&h2));
}
