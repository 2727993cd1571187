//! Lex elimination in characteristic 2: eliminate x, y, t and take the gcd
//! of what is left in z.

use evohopf::certify::char2_elimination;
use evohopf::fields::FieldSpec;

fn main() {
    let r = char2_elimination(FieldSpec::prime(2).unwrap(), "1", "1").unwrap();
    println!("ideal generators:");
    for g in &r.generators {
        println!("  {g}");
    }
    println!("elimination ideal in z:");
    for g in &r.eliminated {
        println!("  {g}");
    }
    println!("gcd: {}", r.gcd);
    println!("gcd of the hand-derived polynomials: {}", r.quoted_gcd);
    println!("z in the ideal: {}", r.z_member);
}
