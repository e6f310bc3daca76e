//! The full invariant suite, one named check per result.

use std::fmt;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::berger::berger_mc;
use crate::canonical::{
    cgm_form, fpq_identity_check, kotrbaty_psi8, pontrjagin_report, quaternionic_forms, spin9_charpoly, spin9_form,
    spin9_psi, spin9_tau4, tau8_and_ratio, PiMultiple, KOTRBATY_FACTOR, SPIN9_FACTOR,
};
use crate::clifford::{delta, expected_trace_magnitude, CliffordSystem, StandardKind};
use crate::error::Result;
use crate::even_clifford::{build_model, eiii_closures, eiii_tau2, structure_census, ModelName};
use crate::exterior::charpoly_coeffs;
use crate::hopf::{infinity_fiber_certificate, lambda_report, random_sphere_point};
use crate::rational::{q, Rational};
use crate::sphere_fields::{build_and_verify, naive_512_system, sigma, verify_system};

/// The dimensions covered by the vector-field check.
pub const FIELD_DIMS: [usize; 10] = [2, 4, 8, 16, 32, 48, 64, 128, 256, 512];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub workers: usize,
    pub berger_samples: usize,
    /// Adds the EVIII closure.
    pub deep: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, workers: 1, berger_samples: 100_000, deep: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Wall time; kept out of the deterministic outputs.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {:<22} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let n = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{ok}/{n} checks passed")
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name: name.to_string(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

pub fn check_charpoly() -> Result<(bool, String)> {
    let taus = spin9_charpoly();
    let counts: Vec<usize> = taus.iter().map(|t| t.len()).collect();
    let shape = taus.iter().enumerate().all(|(j, t)| t.is_zero() != (j == 3 || j == 7));
    Ok((shape, format!("terms per tau_1..tau_9 = {counts:?}")))
}

pub fn check_factor_360() -> Result<(bool, String)> {
    let tau4 = spin9_tau4();
    let gcd = tau4.integer_gcd();
    let phi = spin9_form();
    let ok = gcd == Some(q(SPIN9_FACTOR)) && phi.len() == 702 && phi.integer_gcd() == Some(Rational::one());
    Ok((ok, format!("gcd(tau4) = {}, Phi has {} monomials", gcd.map_or("-".into(), |g| g.to_string()), phi.len())))
}

pub fn check_cgm() -> Result<(bool, String)> {
    let cgm = cgm_form()?;
    let fpq = fpq_identity_check(100, 0)?;
    let ok = cgm == spin9_tau4().scale(&q(-4)) && fpq.all_passed();
    Ok((ok, format!("CGM = -4 tau4: {}, F = 2P^2 - 4Q on {}/{} random skew matrices", cgm == spin9_tau4().scale(&q(-4)), fpq.passed, fpq.trials)))
}

pub fn check_kotrbaty() -> Result<(bool, String)> {
    let k = kotrbaty_psi8()?;
    let real_ok = k.real() == spin9_form().scale(&q(KOTRBATY_FACTOR));
    Ok((real_ok && k.is_real(), format!("Re Psi8 = {KOTRBATY_FACTOR} Phi: {real_ok}, imaginary parts vanish: {}", k.is_real())))
}

pub fn check_quaternionic() -> Result<(bool, String)> {
    let (theta, omega_l) = quaternionic_forms()?;
    let tau2 = charpoly_coeffs(&theta)?.swap_remove(1);
    let c = tau2.coeff_of(&[1, 2, 3, 4])?;
    let ok = tau2.add(&omega_l.scale(&q(2)))?.is_zero() && c == q(-12);
    Ok((ok, format!("tau2(theta) = -2 Omega_L, e^1234 coefficient {c}")))
}

pub fn check_tau8() -> Result<(bool, String)> {
    let r = tau8_and_ratio()?;
    Ok((r.ratio == q(-12), format!("tau8 top = {}, (tau4^2)/tau8 = {}", r.tau8_top, r.ratio)))
}

pub fn check_berger(samples: usize, seed: u64, workers: usize) -> Result<(bool, String)> {
    let (_, fit) = berger_mc(samples, seed, workers)?;
    let ok = fit.cosine >= 0.999 && fit.zero_pattern_ok();
    Ok((
        ok,
        format!(
            "{} samples: cosine {:.6}, c = {:.6e} (1/132 = {:.6e}), zero block z = {:.2}",
            samples, fit.cosine, fit.c, fit.expected_constant, fit.zero_block_z
        ),
    ))
}

pub fn check_fields(seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut counts = Vec::new();
    for m in FIELD_DIMS {
        let (v, r) = build_and_verify(m, seed)?;
        ok &= r.passed() && v.len() == sigma(m)?;
        counts.push(format!("{m}:{}", v.len()));
    }
    let naive = verify_system(&naive_512_system()?, 8, seed);
    ok &= !naive.passed();
    Ok((ok, format!("{}; naive S^511 rejected: {}", counts.join(" "), !naive.passed())))
}

pub fn check_hopf(points: usize, seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    for _ in 0..points {
        if lambda_report(&random_sphere_point(&mut rng))?.passed() {
            good += 1;
        }
    }
    let fiber = infinity_fiber_certificate(50, seed)?;
    Ok((good == points && fiber, format!("lambda identity at {good}/{points} points, l_inf certificate {fiber}")))
}

pub fn check_clifford() -> Result<(bool, String)> {
    let standard = StandardKind::ALL.iter().all(|k| CliffordSystem::standard(*k).verify().passed());
    let c9 = CliffordSystem::standard_spin9().extend()?;
    let extended = c9.verify().passed() && c9.n() == 32 && c9.m() == 9;
    let table = [1u128, 2, 4, 4, 8, 8, 8, 8];
    let deltas = (1..=8).all(|m| delta(m) == Ok(table[m - 1])) && (1..=8).all(|h| delta(8 + h).map(|d| d == 16 * table[h - 1]).unwrap_or(false));
    let mut traces = true;
    for (kind, m) in [(StandardKind::QuaternionicSp2Sp1, 4), (StandardKind::Spin9, 8)] {
        let t = CliffordSystem::standard(kind).trace_invariant()?.abs();
        traces &= t == Rational::from(expected_trace_magnitude(m)? as i64);
    }
    Ok((
        standard && extended && deltas && traces,
        format!("standard {standard}, C9 on R^32 {extended}, delta table {deltas}, |trace| = 2 delta(m) {traces}"),
    ))
}

pub fn check_census() -> Result<(bool, String)> {
    let census = structure_census()?;
    let (eiii, spin9) = eiii_closures()?;
    let full = build_model(ModelName::EIII).closure_dim()?;
    let tau2 = eiii_tau2()?;
    let counts: Vec<String> = census.entries.iter().map(|e| format!("{}={}", e.label, e.independent)).collect();
    let ok = census.passed() && eiii == 45 && full == 45 && spin9 == 36 && tau2.identity_holds() && tau2.tau4_nonzero();
    Ok((
        ok,
        format!(
            "{}; closures EIII {full} (from J_a9: {eiii}), spin9 {spin9}; tau2 = -3 omega^2: {}",
            counts.join(" "),
            tau2.identity_holds()
        ),
    ))
}

pub fn check_models(deep: bool) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ModelName::ALL {
        if name == ModelName::EVIII && !deep {
            continue;
        }
        let m = build_model(name);
        let rep = m.check();
        let dim = m.closure_dim()?;
        let r = m.rank();
        ok &= rep.passed() && dim == r * (r - 1) / 2;
        parts.push(format!("{name}:{dim}"));
    }
    Ok((ok, format!("closures {}", parts.join(" "))))
}

pub fn check_pontrjagin() -> Result<(bool, String)> {
    let r = pontrjagin_report();
    let p2 = &r.manifold[1].coefficient;
    let p4 = &r.manifold[3].coefficient;
    let ok = r.tau2_zero
        && r.tau6_zero
        && *p2 == PiMultiple { coeff: Rational::new(-45, 2), pi_power: 4 }
        && *p4 == PiMultiple { coeff: Rational::new(-13, 256), pi_power: 8 }
        && r.manifold[0].coefficient.coeff.is_zero()
        && r.manifold[2].coefficient.coeff.is_zero();
    Ok((ok, format!("p2(M) = {p2} Phi, p4(M) = {p4} tau8")))
}

pub fn check_psi_entries() -> Result<(bool, String)> {
    let psi = spin9_psi();
    let mut ok = true;
    for a in 0..9 {
        for b in a + 1..9 {
            let e = psi.get(a, b);
            ok &= e.is_homogeneous_of(2) && e.terms().iter().all(|(_, c)| c.abs().is_one());
        }
    }
    Ok((ok, "36 Kahler forms of I_a I_b, unit coefficients".to_string()))
}

pub fn run_suite(cfg: &VerifyConfig) -> Summary {
    let seed = cfg.seed;
    let mut checks = vec![
        timed("psi_entries", check_psi_entries),
        timed("charpoly_shape", check_charpoly),
        timed("factor_360", check_factor_360),
        timed("cgm", check_cgm),
        timed("kotrbaty", check_kotrbaty),
        timed("quaternionic_tau2", check_quaternionic),
        timed("tau8_ratio", check_tau8),
        timed("pontrjagin", check_pontrjagin),
        timed("clifford_systems", check_clifford),
        timed("vector_fields", || check_fields(seed)),
        timed("hopf_lambda", || check_hopf(1000, seed)),
        timed("census_closures", check_census),
        timed("even_clifford_models", || check_models(cfg.deep)),
    ];
    if cfg.berger_samples > 0 {
        checks.push(timed("berger", || check_berger(cfg.berger_samples, seed, cfg.workers)));
    }
    Summary { seed, checks }
}
