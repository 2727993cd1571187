//! Exact arithmetic over Q and prime fields.

use evohopf::fields::FieldSpec;

fn main() {
    for field in [FieldSpec::Rationals, FieldSpec::prime(7).unwrap()] {
        let a = field.parse_element("3/4").unwrap();
        let b = field.element(-5);
        println!("over {field}:");
        println!("  a = {a}, b = {b}");
        println!("  a + b = {}, a * b = {}, a - b = {}", &a + &b, &a * &b, &a - &b);
        println!("  1/a = {}, a^5 = {}", a.inv().unwrap(), a.pow(5));
    }
    let gf13 = FieldSpec::prime(13).unwrap();
    let cube_roots: Vec<String> = gf13
        .enumerate()
        .unwrap()
        .into_iter()
        .filter(|x| x.pow(3) == gf13.one())
        .map(|x| x.to_string())
        .collect();
    println!("cube roots of unity in {gf13}: {cube_roots:?}");
}
