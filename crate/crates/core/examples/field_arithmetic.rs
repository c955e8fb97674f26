// Arithmetic in F_4 and F_9 with the default moduli.

use std::error::Error;

use cyclic_embed::gf::FieldSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f4 = FieldSpec::new(2, 2, None)?;
    println!("{f4}");
    // 2 encodes the class of X, 3 encodes X + 1
    assert_eq!(f4.mul(2, 2), 3);
    assert_eq!(f4.mul(2, 3), 1);
    assert_eq!(f4.inv(2)?, 3);

    let f9 = FieldSpec::new(3, 2, None)?;
    println!("{f9}");
    let x = 3; // X, with X^2 = -1
    assert_eq!(f9.mul(x, x), 2);
    assert_eq!(f9.pow(x, 4), 1);
    for a in 1..f9.q() {
        assert_eq!(f9.mul(a, f9.inv(a)?), 1);
    }
    println!("digits of 7 in F_9: {:?}", f9.decode(7)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
