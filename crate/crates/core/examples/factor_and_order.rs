// Factor X^15 - 1 over F_2 and compute the order of X modulo a few divisors.

use std::error::Error;

use cyclic_embed::gf::FieldSpec;
use cyclic_embed::poly::Poly;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f2 = FieldSpec::prime(2);
    let x15 = Poly::x_pow_minus_one(&f2, 15);
    let fac = x15.factor()?;
    for (p, mult) in &fac.factors {
        println!("{p:?}  (multiplicity {mult}, order of X {})", p.order_of_x()?);
    }
    assert_eq!(fac.expand(&f2), x15);

    let g = Poly::new(&f2, vec![1, 0, 1, 0, 1, 1])?;
    println!("g = {g:?}, factors {:?}", g.factor()?.factors);
    assert_eq!(g.order_of_x()?, 15);
    assert!(g.x_pow_mod(15)?.is_one());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
