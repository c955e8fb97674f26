// The built-in corpus under a small length budget.

use std::error::Error;

use cyclic_embed::cli::{demo_corpus, demo_line};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for c in demo_corpus(1) {
        let line = demo_line(&c, 2048);
        println!("{line}");
        assert!(line.ends_with("ok") || line.contains("skipped"), "{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
