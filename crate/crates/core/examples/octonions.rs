//! Cayley–Dickson doubling from ℝ to the sedenions: multiplication table,
//! non-associativity of 𝕆, and a sedenion zero divisor.

use octoforms::cayley_dickson::{multiplication_table, CdElement, OCTONION_UNITS};

fn main() -> octoforms::error::Result<()> {
    println!("octonion table (row · column):");
    print!("     ");
    for u in OCTONION_UNITS {
        print!("{u:>4}");
    }
    println!();
    for (i, row) in multiplication_table(3).chunks(8).enumerate() {
        print!("{:>4} ", OCTONION_UNITS[i]);
        for e in row {
            let p = CdElement::new(3, e.product.iter().map(|s| s.parse().unwrap()).collect())?;
            print!("{:>4}", p.to_string());
        }
        println!();
    }

    let (i, j, e) = (CdElement::basis(3, 1), CdElement::basis(3, 2), CdElement::basis(3, 4));
    println!("\n[i, j, e] = (ij)e − i(je) = {}", CdElement::associator(&i, &j, &e)?);

    let x = CdElement::from_i64(3, &[1, 2, 0, -1, 3, 0, 1, 1])?;
    let y = CdElement::from_i64(3, &[0, 1, 1, 2, -2, 1, 0, 3])?;
    let xy = x.mul(&y)?;
    println!("|xy|² = {} = |x|²|y|² = {}", xy.norm2(), x.norm2() * y.norm2());

    // (e₂ − e₁₁)(e₇ + e₁₄) = 0 in the sedenions
    let a = CdElement::basis(4, 2).sub(&CdElement::basis(4, 11))?;
    let b = CdElement::basis(4, 7).add(&CdElement::basis(4, 14))?;
    println!("sedenions: ({a})({b}) = {}", a.mul(&b)?);
    Ok(())
}
