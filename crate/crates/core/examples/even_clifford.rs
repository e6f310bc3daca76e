//! Even Clifford structures on the Cayley–Rosenfeld models and the
//! 16-dimensional Grassmannians, with Lie closures and the structure census.

use octoforms::cayley_dickson::CdElement;
use octoforms::even_clifford::{build_model, eiii_closures, eiii_tau2, muv_check, structure_census, ModelName};

fn main() -> octoforms::error::Result<()> {
    for name in ModelName::ALL {
        let m = build_model(name);
        let rep = m.check();
        println!(
            "{:<9} rank {:>2} on R^{:<3}  checks pass: {}  closure of J_ab: {}",
            name.name(),
            m.rank(),
            m.ambient_dim,
            rep.passed(),
            m.closure_dim()?
        );
    }
    let (from_j9, spin9) = eiii_closures()?;
    println!("EIII: closure of J_a9 = {from_j9}, spin9 part = {spin9}");

    let t = eiii_tau2()?;
    println!("\nEIII: tau2 has {} terms, tau2 + 3 omega^2 = 0: {}", t.tau2.len(), t.identity_holds());
    for (w, c) in &t.tau4_samples {
        println!("  tau4 on e^{w:?} = {c}");
    }

    let c = muv_check(&CdElement::one(3), &CdElement::basis(3, 1))?;
    println!("\nm_(1,i): {c:?}");
    let c = muv_check(&CdElement::one(3), &CdElement::one(3))?;
    println!("m_(1,1): {c:?}");

    println!("\n{}", structure_census()?);
    Ok(())
}
