//! For perfect algebras with a faithful law, T_p carries the same structure
//! constants as the Hopf algebra of the automorphism group scheme.

use evohopf::fields::FieldSpec;
use evohopf::hopf;

fn main() {
    for rc in hopf::recorded_correspondences() {
        let r = hopf::run_recorded_correspondence(&rc, FieldSpec::Rationals).unwrap();
        println!(
            "{}{:?} with {}: dim T_p = {}, dim H = {}, structure constants match {}",
            rc.family, rc.params, rc.hopf, r.dim_tight, r.dim_hopf, r.constants_match
        );
    }
}
