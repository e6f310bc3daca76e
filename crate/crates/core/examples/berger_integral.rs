//! Monte-Carlo average of the unit volume forms of the octonionic lines,
//! compared against Φ.
//!
//! `cargo run --release --example berger_integral -- [samples] [seed] [workers]`

use std::time::Instant;

use octoforms::berger::{berger_mc, line_space_volume};

fn main() -> octoforms::error::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let samples = args.next().unwrap_or(50_000) as usize;
    let seed = args.next().unwrap_or(0);
    let workers = args.next().unwrap_or(4) as usize;

    let t = Instant::now();
    let (mean, fit) = berger_mc(samples, seed, workers)?;
    println!("{samples} samples, seed {seed}, {workers} workers, {:.2?}", t.elapsed());
    println!("cosine with Phi     {:.6}", fit.cosine);
    println!("fitted c            {:.17e}", fit.c);
    println!("expected 1/132      {:.17e}", fit.expected_constant);
    println!("integral constant   {:.6e} (pi^4/110880 = {:.6e})", fit.c * line_space_volume(), std::f64::consts::PI.powi(4) / 110880.0);
    println!("zero block z-score  {:.3} (pass: {})", fit.zero_block_z, fit.zero_pattern_ok());
    println!("mean on e^{{1..8}}    {:.6}", mean.coeffs[0]);
    Ok(())
}
