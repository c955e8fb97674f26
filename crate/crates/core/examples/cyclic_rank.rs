// Generator rows of a cyclic code and the streaming rank of column subsets.

use std::error::Error;

use cyclic_embed::codes::CoordSet;
use cyclic_embed::cyclic::CyclicCode;
use cyclic_embed::gf::FieldSpec;
use cyclic_embed::poly::Poly;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f2 = FieldSpec::prime(2);
    let c = CyclicCode::new(15, Poly::new(&f2, vec![1, 0, 1, 0, 1, 1])?)?;
    println!("C(15, g): k' = {}", c.kprime());
    for i in [0, 2] {
        println!("row {i}: {:?}", c.row(i)?);
    }

    let all = CoordSet::range(1, 15, 15)?;
    assert_eq!(c.restricted_rank(&all)?, 10);
    // rows 0, 2, 4, 5..9 on original columns 7..15
    let rows = [0, 2, 4, 5, 6, 7, 8, 9];
    let cols: Vec<usize> = (6..15).collect();
    println!("restricted rank: {}", c.restricted_rank_rows(&rows, &cols)?);

    // a longer code: X^10 + X^3 + 1 is primitive, so its length is 1023
    let g = Poly::new(&f2, [&[1, 0, 0, 1][..], &[0; 6], &[1]].concat())?;
    let n = g.order_of_x()? as usize;
    let long = CyclicCode::new(n, g)?;
    let thirds = CoordSet::new((1..=n).step_by(3).collect(), n)?;
    println!("C({n}, X^10+X^3+1): rank on every third column = {}", long.restricted_rank(&thirds)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
