//! The Spin(9) canonical 8-form on ℝ¹⁶ three ways: from the characteristic
//! polynomial of the Kähler-form matrix, as the quadruple sum, and from
//! octonionic differentials. Also the τ₈ ratio and the Pontrjagin table.
//!
//! `cargo run --release --example canonical_form [csv]` prints the 702
//! monomials of Φ instead when given `csv`.

use std::time::Instant;

use octoforms::canonical::{
    cgm_form, kotrbaty_psi8, pontrjagin_report, spin9_charpoly, spin9_form, spin9_psi, spin9_tau4, tau8_and_ratio,
    KOTRBATY_FACTOR,
};
use octoforms::rational::q;

fn main() -> octoforms::error::Result<()> {
    if std::env::args().nth(1).as_deref() == Some("csv") {
        print!("{}", spin9_form().to_csv());
        return Ok(());
    }
    let psi = spin9_psi();
    println!("psi_12 = {}", psi.get(0, 1));
    println!("psi_19 = {}", psi.get(0, 8));

    let t = Instant::now();
    let taus = spin9_charpoly();
    println!("\ncharacteristic coefficients ({:.2?}):", t.elapsed());
    for (j, tau) in taus.iter().enumerate() {
        println!("  tau{} has {} terms", j + 1, tau.len());
    }
    let phi = spin9_form();
    println!("gcd(tau4) = {:?}; Phi = tau4/360 has {} monomials", spin9_tau4().integer_gcd().map(|g| g.to_string()), phi.len());
    for (c, n) in phi.coeff_histogram() {
        println!("  {c:>4} × {n}");
    }
    println!("Phi on e^{{1..8}}: {}", phi.coeff_of(&[1, 2, 3, 4, 5, 6, 7, 8])?);

    let t = Instant::now();
    let cgm = cgm_form()?;
    println!("\nquadruple sum = -4 tau4: {} ({:.2?})", cgm == spin9_tau4().scale(&q(-4)), t.elapsed());

    let t = Instant::now();
    let k = kotrbaty_psi8()?;
    println!(
        "octonionic Psi8: real part = {KOTRBATY_FACTOR}·Phi: {}, imaginary parts vanish: {} ({:.2?})",
        k.real() == phi.scale(&q(KOTRBATY_FACTOR)),
        k.is_real(),
        t.elapsed()
    );

    let r = tau8_and_ratio()?;
    println!("\ntau8 = {} e^{{1..16}}, tau4∧tau4 / tau8 = {}", r.tau8_top, r.ratio);
    println!("\n{}", pontrjagin_report());
    Ok(())
}
