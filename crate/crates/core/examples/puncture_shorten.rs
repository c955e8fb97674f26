// Puncturing and shortening a small ternary code, checked against brute force.

use std::error::Error;

use cyclic_embed::codes::{CoordSet, LinearCode};
use cyclic_embed::gf::FieldSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f3 = FieldSpec::prime(3);
    let c = LinearCode::new(&f3, vec![vec![1, 0, 2, 1], vec![0, 1, 1, 2]])?;
    print!("{}", c.to_text());

    let last = CoordSet::new(vec![4], 4)?;
    let p = c.puncture(&last)?;
    let s = c.shorten(&last)?;
    println!("punctured at 4: {:?}", p.rows());
    println!("shortened at 4: {:?}", s.rows());
    assert_eq!((p.n(), p.k()), (3, 2));
    assert_eq!((s.n(), s.k()), (3, 1));
    assert_eq!(s, c.enumerate_shorten_oracle(&last)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
