// Oracle and structural verification, and what a tampered certificate looks like.

use std::error::Error;

use cyclic_embed::codes::{CoordSet, LinearCode};
use cyclic_embed::embed::build_certificate;
use cyclic_embed::gf::FieldSpec;
use cyclic_embed::verify::{verify_oracle, verify_structural};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = LinearCode::new(&FieldSpec::prime(2), vec![vec![1, 0], vec![0, 1]])?;
    let cert = build_certificate(&c, 1 << 20)?;
    println!("nprime = {}", cert.header.nprime);

    let oracle = verify_oracle(&c, &cert)?;
    print!("{}", oracle.render(&cert));
    let structural = verify_structural(&c, &cert)?;
    print!("{}", structural.render(&cert));
    assert!(oracle.final_equal && structural.final_equal);

    // drop the last coordinate from stage B
    let mut bad = cert.clone();
    let b = &mut bad.steps[1];
    let fewer = b.coords.coords()[..b.coords.len() - 1].to_vec();
    b.coords = CoordSet::new(fewer, b.len_before)?;
    let report = verify_structural(&c, &bad)?;
    print!("{}", report.render(&bad));
    assert!(!report.final_equal);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
