//! The octonionic Hopf map S¹⁵ → S⁸ through the Spin(9) matrices: the λ
//! identity at rational points, constancy on fibers, and orthogonality of
//! fiber tangents to the I_α N.

use octoforms::cayley_dickson::CdElement;
use octoforms::hopf::{
    fiber_orthogonality_check, hopf_map, infinity_fiber_certificate, lambda_report, line_point, line_tangent,
    random_sphere_point, random_unit_octonion,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> octoforms::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let p = random_sphere_point(&mut rng);
    let r = lambda_report(&p)?;
    println!("N = ({}, {})", p.x(), p.y());
    println!("lambda = [{}]", r.lambda.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    println!("sum lambda^2 = {}, N = sum lambda_a I_a N: {}, I_a N orthonormal: {}", r.norm2, r.reconstructs, r.orthonormal);

    let passed = (0..1000).filter(|_| lambda_report(&random_sphere_point(&mut rng)).is_ok_and(|r| r.passed())).count();
    println!("identity holds at {passed}/1000 random rational points");

    // 1 + |m|² = 4, so the fiber over m has rational points
    let m = CdElement::from_i64(3, &[0, 1, 1, 1, 0, 0, 0, 0])?;
    let x1 = random_unit_octonion(&mut rng);
    let x2 = random_unit_octonion(&mut rng);
    let (a, b) = (line_point(&m, &x1)?, line_point(&m, &x2)?);
    println!("\nfiber over m = {m}: same image for two points: {}", hopf_map(&a) == hopf_map(&b));
    let w = x1.mul(&CdElement::basis(3, 5))?;
    println!("tangent (w, w·m) orthogonal to all I_a N: {}", fiber_orthogonality_check(&a, &line_tangent(&m, &w)?)?);
    println!("l_inf certificate on 100 points: {}", infinity_fiber_certificate(100, 1)?);
    Ok(())
}
