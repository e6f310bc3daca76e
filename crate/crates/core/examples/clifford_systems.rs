//! The standard Clifford systems C₁, C₂, C₄, C₈, the extension step
//! C_m → C_{m+1}, and the δ(m) table.

use octoforms::clifford::{delta, expected_trace_magnitude, CliffordSystem, StandardKind};

fn main() -> octoforms::error::Result<()> {
    for kind in StandardKind::ALL {
        let c = CliffordSystem::standard(kind);
        let r = c.verify();
        println!(
            "{:<20} C_{} on R^{:<3} passes: {}  tr(P0…Pm) = {} (expected ±{})",
            kind.name(),
            c.m(),
            c.n(),
            r.passed(),
            c.trace_invariant()?,
            expected_trace_magnitude(c.m())?
        );
    }

    let c9 = CliffordSystem::standard_spin9().extend()?;
    println!("\nextend(spin9): C_{} on R^{}, passes: {}", c9.m(), c9.n(), c9.verify().passed());

    print!("\ndelta(m), m = 1..16:");
    for m in 1..=16 {
        print!(" {}", delta(m)?);
    }
    println!();

    let spin9 = CliffordSystem::standard_spin9();
    println!(
        "\nspin9: {} pairs J_ab, {} triples J_abc, all independent: {}",
        spin9.pairs().len(),
        spin9.triples().len(),
        octoforms::matrix::independence_count(&[spin9.pairs(), spin9.triples()].concat())? == 120
    );
    Ok(())
}
