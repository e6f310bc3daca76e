//! Monte-Carlo average of `p_l^*ν_l` over the octonionic lines of 𝕆².
//!
//! A point `(u, r)` of S⁸ selects the line `{(x, x·m)}` with `m = u/(1+r)`,
//! the +1 eigenspace of the Hopf action. Its volume form pulled back by the
//! orthogonal projection has the 8×8 minors of `[I | R_m] / √(1+|m|²)` as
//! coefficients, where row `i` of `R_m` holds `e_i·m`.
//!
//! The minors are all `k×k` minors of `R_m`, obtained by Laplace expansion
//! along the identity columns, so a sample costs about 51k multiply-adds.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::cayley_dickson::CdElement;
use crate::error::{Error, Result};
use crate::exterior::{Blade, Multivector};

pub const SLOTS: usize = 12870;
const BLOCK: usize = 1024;
/// Lines are oriented so that `⟨ν_l, Φ⟩ > 0`; the basis `(e_i, e_i·m)` gives the opposite sign.
const ORIENTATION: f64 = -1.0;
/// `π⁴/110880` divided by `Vol(S⁸(½)) = π⁴/840`.
pub const EXPECTED_CONSTANT: f64 = 840.0 / 110880.0;

/// Grade-8 blades of ℝ¹⁶ in lexicographic order of their index lists.
pub fn slots() -> &'static [Blade] {
    static SL: OnceLock<Vec<Blade>> = OnceLock::new();
    SL.get_or_init(|| {
        let mut out = Vec::with_capacity(SLOTS);
        let mut idx: Vec<usize> = (0..8).collect();
        loop {
            out.push(Blade(idx.iter().map(|&i| 1u128 << i).sum()));
            let Some(p) = (0..8).rev().find(|&p| idx[p] < 8 + p) else { break };
            idx[p] += 1;
            for q in p + 1..8 {
                idx[q] = idx[q - 1] + 1;
            }
        }
        out
    })
}

fn slot_table() -> &'static [u16] {
    static T: OnceLock<Vec<u16>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = vec![u16::MAX; 1 << 16];
        for (k, b) in slots().iter().enumerate() {
            t[b.0 as usize] = k as u16;
        }
        t
    })
}

pub fn slot_of(blade: Blade) -> Option<usize> {
    if blade.0 >= 1 << 16 {
        return None;
    }
    match slot_table()[blade.0 as usize] {
        u16::MAX => None,
        k => Some(k as usize),
    }
}

/// Dense coefficients of `form` on the 12870 slots.
pub fn dense(form: &Multivector) -> Result<Vec<f64>> {
    let mut v = vec![0.0; SLOTS];
    for (b, c) in form.terms() {
        let k = slot_of(*b).ok_or_else(|| Error::DimensionMismatch(format!("{b} is not a grade-8 blade of R^16")))?;
        v[k] = c.to_f64();
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledForm {
    pub n: usize,
    pub grade: usize,
    #[serde(serialize_with = "crate::export::floats17")]
    pub coeffs: Vec<f64>,
    /// Standard error of each mean.
    #[serde(serialize_with = "crate::export::floats17")]
    pub stderr: Vec<f64>,
}

impl SampledForm {
    pub fn dot(&self, v: &[f64]) -> f64 {
        self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(&self.coeffs).sqrt()
    }

    /// `blade;mean;stderr` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("blade;mean;stderr\n");
        for (k, b) in slots().iter().enumerate() {
            let name: Vec<String> = b.indices().iter().map(usize::to_string).collect();
            s += &format!("{};{:.16e};{:.16e}\n", name.join("-"), self.coeffs[k], self.stderr[k]);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub samples: usize,
    pub seed: u64,
    /// Least-squares `c` in `mean ≈ c·Φ`.
    #[serde(serialize_with = "crate::export::float17")]
    pub c: f64,
    #[serde(serialize_with = "crate::export::float17")]
    pub cosine: f64,
    /// RMS of `mean − c·Φ` over all slots.
    #[serde(serialize_with = "crate::export::float17")]
    pub residual_rms: f64,
    #[serde(serialize_with = "crate::export::float17")]
    pub expected_constant: f64,
    /// Slots where Φ vanishes.
    pub zero_slots: usize,
    /// `S = Σ mean²` over the zero slots.
    #[serde(serialize_with = "crate::export::float17")]
    pub zero_block_ss: f64,
    /// Mean and standard deviation of `S` under pure noise.
    #[serde(serialize_with = "crate::export::float17")]
    pub zero_block_expected: f64,
    #[serde(serialize_with = "crate::export::float17")]
    pub zero_block_sd: f64,
    /// Normal score of `S` under the scaled chi-square matching its mean and
    /// variance (Wilson–Hilferty).
    #[serde(serialize_with = "crate::export::float17")]
    pub zero_block_z: f64,
    /// Zero slots whose own mean exceeds three standard errors. The slots are
    /// strongly correlated, so this count is reported but not tested.
    pub exceedances: usize,
    #[serde(serialize_with = "crate::export::float17")]
    pub max_abs_z: f64,
}

impl FitReport {
    /// The zero block sits within 3σ of Monte-Carlo noise.
    pub fn zero_pattern_ok(&self) -> bool {
        self.zero_block_z <= 3.0
    }
}

/// Samples used to estimate `tr C²` for the zero-block test.
const GRAM_SAMPLES: usize = 400;

/// Unbiased `tr C²` of the per-sample covariance restricted to `mask`,
/// from the off-diagonal Gram entries of the first `GRAM_SAMPLES` lines.
fn trace_cov_squared(seed: u64, mask: &[bool]) -> f64 {
    let k = GRAM_SAMPLES;
    let mut minors = vec![0.0; 1 << 16];
    let mut v = vec![0.0; SLOTS];
    let xs: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            line_form(&sample_point(seed, i as u64), &mut v, &mut minors);
            v.iter().zip(mask).filter(|(_, &m)| m).map(|(x, _)| *x).collect()
        })
        .collect();
    let off: f64 = (0..k)
        .into_par_iter()
        .map(|i| (i + 1..k).map(|j| xs[i].iter().zip(&xs[j]).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum();
    2.0 * off / (k * (k - 1)) as f64
}

struct Plan {
    /// Octonion right multiplication: `e_i·e_a = sign · e_{index}`.
    mult: [[(u8, f64); 8]; 8],
    /// `(dest, first op, op count)` in order of increasing size.
    dests: Vec<(u32, u32, u8)>,
    /// `(src, row*8+col, sign)`.
    ops: Vec<(u32, u8, f64)>,
    /// Per slot: `(minor index, sign)`.
    slot_src: Vec<(u32, f64)>,
}

fn plan() -> &'static Plan {
    static P: OnceLock<Plan> = OnceLock::new();
    P.get_or_init(|| {
        let mut mult = [[(0u8, 0.0); 8]; 8];
        for (i, row) in mult.iter_mut().enumerate() {
            for (a, slot) in row.iter_mut().enumerate() {
                let p = CdElement::basis(3, i).mul(&CdElement::basis(3, a)).expect("same level");
                let (idx, c) = p.coeffs().iter().enumerate().find(|(_, c)| !c.is_zero()).expect("unit product");
                *slot = (idx as u8, c.to_f64());
            }
        }
        let mut dests = Vec::new();
        let mut ops = Vec::new();
        for k in 1..=8u32 {
            for t in 0u32..256 {
                if t.count_ones() != k {
                    continue;
                }
                let last = 31 - t.leading_zeros();
                for c in 0u32..256 {
                    if c.count_ones() != k {
                        continue;
                    }
                    let start = ops.len() as u32;
                    for (j, col) in (0..8).filter(|b| c >> b & 1 == 1).enumerate() {
                        let sign = if (k as usize - 1 + j).is_multiple_of(2) { 1.0 } else { -1.0 };
                        let src = (t & !(1 << last)) * 256 + (c & !(1 << col));
                        ops.push((src, (last * 8 + col) as u8, sign));
                    }
                    dests.push((t * 256 + c, start, k as u8));
                }
            }
        }
        let slot_src = slots()
            .iter()
            .map(|b| {
                let sx = (b.0 & 0xFF) as u32;
                let sy = (b.0 >> 8) as u32;
                let t = !sx & 0xFF;
                let kx = sx.count_ones();
                let rows: u32 = (0..8).filter(|s| sx >> s & 1 == 1).map(|s| s + 1).sum();
                let sign = if (rows + kx * (kx + 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                (t * 256 + sy, sign)
            })
            .collect();
        Plan { mult, dests, ops, slot_src }
    })
}

/// A uniform point of S⁸ for sample `index`, independent of how samples are split.
pub fn sample_point(seed: u64, index: u64) -> [f64; 9] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let mut v = [0.0f64; 9];
        for x in &mut v {
            *x = StandardNormal.sample(&mut rng);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            v.iter_mut().for_each(|x| *x /= n);
            return v;
        }
    }
}

/// The 12870 coefficients of `p_l^*ν_l` for the line of `(u, r) ∈ S⁸`.
pub fn line_form(point: &[f64; 9], out: &mut [f64], minors: &mut [f64]) {
    let p = plan();
    let (u, r) = (&point[..8], point[8]);
    out.iter_mut().for_each(|x| *x = 0.0);
    if 1.0 + r < 1e-12 {
        // l_∞ = {(0, y)}
        out[SLOTS - 1] = ORIENTATION;
        return;
    }
    let m: Vec<f64> = u.iter().map(|x| x / (1.0 + r)).collect();
    let mut rm = [0.0f64; 64];
    for i in 0..8 {
        for a in 0..8 {
            let (idx, s) = p.mult[i][a];
            rm[i * 8 + idx as usize] += s * m[a];
        }
    }
    minors[0] = 1.0;
    for &(dest, start, len) in &p.dests {
        let mut acc = 0.0;
        for &(src, rc, sign) in &p.ops[start as usize..start as usize + len as usize] {
            acc += sign * rm[rc as usize] * minors[src as usize];
        }
        minors[dest as usize] = acc;
    }
    let m2: f64 = m.iter().map(|x| x * x).sum();
    let scale = ORIENTATION / (1.0 + m2).powi(4);
    for (o, &(src, sign)) in out.iter_mut().zip(&p.slot_src) {
        *o = scale * sign * minors[src as usize];
    }
}

struct Sums {
    sum: Vec<f64>,
    sumsq: Vec<f64>,
}

fn block_sums(seed: u64, lo: usize, hi: usize) -> Sums {
    let mut s = Sums { sum: vec![0.0; SLOTS], sumsq: vec![0.0; SLOTS] };
    let mut v = vec![0.0; SLOTS];
    let mut minors = vec![0.0; 1 << 16];
    for i in lo..hi {
        line_form(&sample_point(seed, i as u64), &mut v, &mut minors);
        for k in 0..SLOTS {
            s.sum[k] += v[k];
            s.sumsq[k] += v[k] * v[k];
        }
    }
    s
}

/// Mean and standard error of `p_l^*ν_l` over `samples` uniform lines.
///
/// Samples are grouped in fixed blocks whose sums are added in block order,
/// so the result does not depend on `workers`.
pub fn sample_mean(samples: usize, seed: u64, workers: usize) -> Result<SampledForm> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let blocks: Vec<(usize, usize)> = (0..samples).step_by(BLOCK).map(|lo| (lo, (lo + BLOCK).min(samples))).collect();
    let mut total = Sums { sum: vec![0.0; SLOTS], sumsq: vec![0.0; SLOTS] };
    for group in blocks.chunks(16 * workers) {
        let parts: Vec<Sums> = pool.install(|| group.par_iter().map(|&(lo, hi)| block_sums(seed, lo, hi)).collect());
        for part in parts {
            for k in 0..SLOTS {
                total.sum[k] += part.sum[k];
                total.sumsq[k] += part.sumsq[k];
            }
        }
    }
    let n = samples as f64;
    let coeffs: Vec<f64> = total.sum.iter().map(|s| s / n).collect();
    let stderr = coeffs
        .iter()
        .zip(&total.sumsq)
        .map(|(mean, sq)| {
            if samples < 2 {
                return f64::INFINITY;
            }
            let var = ((sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        })
        .collect();
    Ok(SampledForm { n: 16, grade: 8, coeffs, stderr })
}

fn wilson_hilferty(s: f64, mean: f64, sd: f64) -> f64 {
    let h = 2.0 * mean * mean / (sd * sd);
    let v = 2.0 / (9.0 * h);
    ((s / mean).cbrt() - (1.0 - v)) / v.sqrt()
}

/// Fits `mean ≈ c·phi` and tests the zero pattern of `phi`.
pub fn fit(mean: &SampledForm, phi: &Multivector, samples: usize, seed: u64) -> Result<FitReport> {
    let phi = dense(phi)?;
    let pp: f64 = phi.iter().map(|x| x * x).sum();
    let c = mean.dot(&phi) / pp;
    let cosine = mean.dot(&phi) / (pp.sqrt() * mean.norm());
    let residual_rms =
        (mean.coeffs.iter().zip(&phi).map(|(m, p)| (m - c * p).powi(2)).sum::<f64>() / SLOTS as f64).sqrt();
    let mask: Vec<bool> = phi.iter().map(|&p| p == 0.0).collect();
    let zero_slots = mask.iter().filter(|&&m| m).count();
    let mut exceedances = 0;
    let mut max_abs_z: f64 = 0.0;
    let (mut ss, mut trace) = (0.0, 0.0);
    let n = samples as f64;
    for k in (0..SLOTS).filter(|&k| mask[k]) {
        let (m, se) = (mean.coeffs[k], mean.stderr[k]);
        ss += m * m;
        trace += se * se;
        let z = if se > 0.0 {
            m.abs() / se
        } else if m == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        max_abs_z = max_abs_z.max(z);
        if z > 3.0 {
            exceedances += 1;
        }
    }
    let sd = (2.0 * trace_cov_squared(seed, &mask)).sqrt() / n;
    Ok(FitReport {
        samples,
        seed,
        c,
        cosine,
        residual_rms,
        expected_constant: EXPECTED_CONSTANT,
        zero_slots,
        zero_block_ss: ss,
        zero_block_expected: trace,
        zero_block_sd: sd,
        zero_block_z: wilson_hilferty(ss, trace, sd),
        exceedances,
        max_abs_z,
    })
}

/// Samples, averages and fits against the canonical 8-form.
pub fn berger_mc(samples: usize, seed: u64, workers: usize) -> Result<(SampledForm, FitReport)> {
    let mean = sample_mean(samples, seed, workers)?;
    let report = fit(&mean, crate::canonical::spin9_form(), samples, seed)?;
    Ok((mean, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct Convergence {
    pub samples: usize,
    #[serde(serialize_with = "crate::export::float17")]
    pub rms: f64,
    #[serde(serialize_with = "crate::export::float17")]
    pub rms_doubled: f64,
}

impl Convergence {
    /// `1/√N` scaling predicts a ratio of `1/√2 ≈ 0.707`.
    pub fn ratio(&self) -> f64 {
        self.rms_doubled / self.rms
    }

    pub fn consistent(&self) -> bool {
        (0.55..=0.85).contains(&self.ratio())
    }
}

/// Residual RMS of the fit at `samples` and `2·samples` (the first half shared).
pub fn convergence_check(samples: usize, seed: u64, workers: usize) -> Result<Convergence> {
    let (_, a) = berger_mc(samples, seed, workers)?;
    let (_, b) = berger_mc(2 * samples, seed, workers)?;
    Ok(Convergence { samples, rms: a.residual_rms, rms_doubled: b.residual_rms })
}

/// `Vol(S⁸(½))`, the total mass of 𝕆P¹ as a round sphere of radius ½.
pub fn line_space_volume() -> f64 {
    PI.powi(4) / 840.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::spin9_form;
    use crate::matrix::Matrix;
    use crate::rational::Rational;

    #[test]
    fn slot_order() {
        let s = slots();
        assert_eq!(s.len(), SLOTS);
        assert_eq!(s[0].indices(), (1..=8).collect::<Vec<_>>());
        assert_eq!(s[SLOTS - 1].indices(), (9..=16).collect::<Vec<_>>());
        assert!(s.windows(2).all(|w| w[0].indices() < w[1].indices()));
        assert_eq!(slot_of(s[777]), Some(777));
    }

    // Independent oracle: exact Bareiss determinants of the 8×8 column
    // selections of [I | R_m] at a rational m.
    #[test]
    fn minors_match_exact_determinants() {
        let m_int = [1i64, -2, 0, 3, 1, 0, -1, 2];
        let m = CdElement::from_i64(3, &m_int).unwrap();
        let mut rows = Vec::new();
        for i in 0..8 {
            let p = CdElement::basis(3, i).mul(&m).unwrap();
            let mut row = vec![Rational::from(0); 16];
            row[i] = Rational::from(1);
            row[8..].clone_from_slice(p.coeffs());
            rows.push(row);
        }
        let full = Matrix::from_fn(8, 16, |i, j| rows[i][j].clone());
        let m2: i64 = m_int.iter().map(|x| x * x).sum();
        // choose (u, r) with u/(1+r) = m: r = 0 needs |u| = 1, so scale by 1+r instead
        let r = (1.0 - m2 as f64) / (1.0 + m2 as f64);
        let mut point = [0.0; 9];
        for a in 0..8 {
            point[a] = m_int[a] as f64 * (1.0 + r);
        }
        point[8] = r;
        let mut out = vec![0.0; SLOTS];
        let mut minors = vec![0.0; 1 << 16];
        line_form(&point, &mut out, &mut minors);
        let scale = ORIENTATION / ((1 + m2) as f64).powi(4);
        for k in (0..SLOTS).step_by(37) {
            let cols = slots()[k].indices();
            let sub = Matrix::from_fn(8, 8, |i, j| full[(i, cols[j] - 1)].clone());
            let exact = sub.det().unwrap().to_f64() * scale;
            assert!((out[k] - exact).abs() < 1e-9 * (1.0 + exact.abs()), "slot {k}: {} vs {exact}", out[k]);
        }
    }

    #[test]
    fn each_line_pairs_to_fourteen() {
        let phi = dense(spin9_form()).unwrap();
        let mut out = vec![0.0; SLOTS];
        let mut minors = vec![0.0; 1 << 16];
        for i in 0..20 {
            line_form(&sample_point(5, i), &mut out, &mut minors);
            let d: f64 = out.iter().zip(&phi).map(|(a, b)| a * b).sum();
            assert!((d - 14.0).abs() < 1e-9, "{d}");
            // a unit decomposable 8-form
            let n2: f64 = out.iter().map(|x| x * x).sum();
            assert!((n2 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn workers_do_not_change_bits() {
        let a = sample_mean(3000, 11, 1).unwrap();
        let b = sample_mean(3000, 11, 4).unwrap();
        assert_eq!(a, b);
        assert!(sample_mean(0, 1, 1).is_err());
    }

    #[test]
    fn noise_shrinks_like_inverse_sqrt() {
        let c = convergence_check(4000, 2, 2).unwrap();
        assert!(c.consistent(), "{c:?}");
    }

    #[test]
    fn expected_constant_is_one_over_132() {
        assert!((EXPECTED_CONSTANT - 1.0 / 132.0).abs() < 1e-15);
        assert!((EXPECTED_CONSTANT * line_space_volume() - PI.powi(4) / 110880.0).abs() < 1e-15);
    }
}
