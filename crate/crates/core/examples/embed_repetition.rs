// Certificate for the binary repetition code of length 2.

use std::error::Error;

use cyclic_embed::codes::LinearCode;
use cyclic_embed::embed::{build_certificate, DEFAULT_BOUND};
use cyclic_embed::gf::FieldSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rep = LinearCode::new(&FieldSpec::prime(2), vec![vec![1, 1]])?;
    let cert = build_certificate(&rep, DEFAULT_BOUND)?;
    print!("{}", cert.to_text());

    let h = &cert.header;
    assert_eq!((h.m, h.e, h.nprime, h.kprime), (3, 15, 15, 10));
    assert_eq!(h.g.coeffs(), &[1, 0, 1, 0, 1, 1]);
    assert_eq!(cert.steps.len(), 4);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
