//! Maximal systems of orthonormal tangent vector fields on S^{m−1}, checked
//! exactly, and the naive construction on S⁵¹¹ that fails.
//!
//! `cargo run --release --example vector_fields -- 1024 2048` adds dimensions.

use octoforms::sphere_fields::{build_and_verify, hr_decompose, left_mult_comparison, naive_512_system, verify_system};

fn main() -> octoforms::error::Result<()> {
    let mut dims = vec![2, 4, 8, 16, 32, 48, 64, 96, 128, 256, 512];
    dims.extend(std::env::args().skip(1).filter_map(|a| a.parse::<usize>().ok()));
    for m in dims {
        let hr = hr_decompose(m)?;
        let (v, report) = build_and_verify(m, 0)?;
        println!("m = {m:<5} (k={}, p={}, q={})  {report}", hr.k, hr.p, hr.q);
        if let Some(src) = &v.left_mult {
            println!("           left multiplications: {src:?}");
        }
    }

    println!("\nlisted octonionic left multiplications vs the table:");
    for d in left_mult_comparison(8)? {
        println!("  {d}");
    }

    let naive = naive_512_system()?;
    let r = verify_system(&naive, 4, 0);
    println!("\nnaive system on S^511: {} fields, passes: {}", naive.len(), r.passed());
    for f in r.failures.iter().take(4) {
        println!("  {f:?}");
    }
    Ok(())
}
