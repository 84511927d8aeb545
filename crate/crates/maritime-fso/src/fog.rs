//! Fog-induced attenuation statistics.
//!
//! The random attenuation coefficient of a fog bank over a link of length
//! `l` km makes the irradiance factor `I_a = exp(−T)` with
//! `T ~ Gamma(shape k, rate z)`, `z = 4.343/(β·l)`. Change of variables gives
//! the density on (0, 1]:
//!
//! * `f_Ia(ia) = z^k/Γ(k) · [ln(1/ia)]^{k−1} · ia^{z−1}`
//! * `F_Ia(ia) = Q(k, z·ln(1/ia))` (regularized upper incomplete gamma)
//! * `E[Ia^m] = (z/(z+m))^k`
//!
//! Four named presets `(k, β)` cover dense, thick, moderate and light fog;
//! the sampler draws `T` directly from the Gamma law, so Monte-Carlo runs
//! and closed forms describe exactly the same distribution.

use crate::error::{Error, Result};
use crate::specfun;
use rand_distr::{Distribution, Gamma};

// ----- parameters ---------------------------------------------------------

/// Named fog density presets with tabulated `(k, β)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FogPreset {
    Dense,
    Thick,
    Moderate,
    Light,
}

impl FogPreset {
    /// Tabulated shape/attenuation pair `(k, β_dB_per_km)`.
    pub fn constants(self) -> (f64, f64) {
        match self {
            FogPreset::Dense => (36.05, 11.91),
            FogPreset::Thick => (6.00, 23.00),
            FogPreset::Moderate => (5.49, 12.06),
            FogPreset::Light => (2.32, 13.12),
        }
    }

    /// Parse the preset names used verbatim in scenario files.
    pub fn parse(name: &str) -> Result<FogPreset> {
        match name {
            "dense" => Ok(FogPreset::Dense),
            "thick" => Ok(FogPreset::Thick),
            "moderate" => Ok(FogPreset::Moderate),
            "light" => Ok(FogPreset::Light),
            other => Err(Error::Config(format!(
                "unknown fog preset {other:?}; expected dense|thick|moderate|light"
            ))),
        }
    }
}

/// Fog channel parameters: Gamma shape `k`, attenuation scale `β` (dB/km),
/// link length `l` (km).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FogParams {
    pub k: f64,
    pub beta: f64,
    pub l: f64,
}

impl FogParams {
    pub fn new(k: f64, beta: f64, l: f64) -> Result<FogParams> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("fog shape k must be positive, got {k}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("fog scale beta must be positive, got {beta}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Domain(format!("link length l must be positive, got {l}")));
        }
        Ok(FogParams { k, beta, l })
    }

    /// Gamma rate `z = 4.343/(β·l)` of the log-attenuation `T = ln(1/Ia)`.
    pub fn z(&self) -> f64 {
        4.343 / (self.beta * self.l)
    }
}

/// Look up a Table-style preset at link length `l` km.
///
/// ```
/// use maritime_fso::fog::{fog_preset, FogPreset};
/// let p = fog_preset(FogPreset::Light, 0.5).unwrap();
/// assert_eq!((p.k, p.beta), (2.32, 13.12));
/// assert!((p.z() - 0.662042).abs() < 1e-6);
/// ```
pub fn fog_preset(name: FogPreset, l: f64) -> Result<FogParams> {
    let (k, beta) = name.constants();
    FogParams::new(k, beta, l)
}

// ----- closed-form statistics ---------------------------------------------

/// Density of the fog attenuation factor `Ia` on (0, 1].
///
/// Evaluated in log space so extreme shape/rate combinations cannot
/// overflow; the `k = 1` edge (where `[ln(1/ia)]^{k−1}` is `0^0` at the
/// right endpoint) is handled explicitly.
pub fn fog_pdf(p: &FogParams, ia: f64) -> Result<f64> {
    if !(ia > 0.0 && ia <= 1.0) {
        return Err(Error::Domain(format!("fog_pdf requires ia in (0, 1], got {ia}")));
    }
    let z = p.z();
    let t = -ia.ln(); // ln(1/ia) ≥ 0
    if t == 0.0 {
        // Right endpoint: the density is z for k = 1, zero for k > 1,
        // divergent (but still integrable) for k < 1.
        return Ok(if p.k > 1.0 {
            0.0
        } else if p.k == 1.0 {
            z
        } else {
            f64::INFINITY
        });
    }
    let ln_f = p.k * z.ln() - specfun::ln_gamma(p.k) + (p.k - 1.0) * t.ln() + (z - 1.0) * ia.ln();
    Ok(ln_f.exp())
}

/// CDF of `Ia`: `F(ia) = Q(k, z·ln(1/ia))` on (0, 1].
pub fn fog_cdf(p: &FogParams, ia: f64) -> Result<f64> {
    if !(ia > 0.0 && ia <= 1.0) {
        return Err(Error::Domain(format!("fog_cdf requires ia in (0, 1], got {ia}")));
    }
    let t = -ia.ln();
    Ok(1.0 - specfun::reg_lower_gamma(p.k, p.z() * t))
}

/// Mean attenuation `E[Ia] = (z/(z+1))^k`.
pub fn fog_mean(p: &FogParams) -> f64 {
    fog_moment(p, 1.0)
}

/// Raw moment `E[Ia^m] = (z/(z+m))^k` (the Gamma moment-generating function
/// of `T` evaluated at `−m`), valid for any `m > −z`.
pub fn fog_moment(p: &FogParams, m: f64) -> f64 {
    let z = p.z();
    (z / (z + m)).powf(p.k)
}

// ----- sampling -------------------------------------------------------------

/// Draw one attenuation factor `Ia = exp(−T)`, `T ~ Gamma(k, rate z)`.
///
/// The Gamma draw delegates to a squeeze/rejection sampler valid for every
/// shape `k > 0`, so all presets share one code path; the output always lies
/// in (0, 1].
pub fn fog_sample<R: rand::Rng + ?Sized>(p: &FogParams, rng: &mut R) -> f64 {
    let gamma = Gamma::new(p.k, 1.0 / p.z()).expect("validated FogParams imply a valid Gamma law");
    (-gamma.sample(rng)).exp()
}

// ----- tests ----------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_rel(actual: f64, expected: f64, tol: f64, what: &str) {
        let rel = (actual - expected).abs() / expected.abs().max(1e-300);
        assert!(
            rel <= tol,
            "{what}: actual {actual:.12e}, expected {expected:.12e}, rel {rel:.2e}"
        );
    }

    const ALL_PRESETS: [FogPreset; 4] =
        [FogPreset::Dense, FogPreset::Thick, FogPreset::Moderate, FogPreset::Light];

    #[test]
    fn preset_rate_examples() {
        assert_rel(fog_preset(FogPreset::Light, 0.5).unwrap().z(), 0.6620426829268293, 1e-12, "light z");
        assert_rel(fog_preset(FogPreset::Dense, 0.5).unwrap().z(), 0.7293031066330814, 1e-12, "dense z");
        assert_rel(fog_preset(FogPreset::Moderate, 1.0).unwrap().z(), 0.3601160862354892, 1e-12, "moderate z");
        assert!(FogPreset::parse("haze").is_err());
        assert_eq!(FogPreset::parse("thick").unwrap(), FogPreset::Thick);
    }

    #[test]
    fn pdf_domain_and_endpoint() {
        let p = fog_preset(FogPreset::Light, 0.5).unwrap();
        assert!(fog_pdf(&p, 0.0).is_err());
        assert!(fog_pdf(&p, 1.0 + 1e-12).is_err());
        assert_eq!(fog_pdf(&p, 1.0).unwrap(), 0.0, "k > 1 kills the density at ia = 1");
        let unit = FogParams::new(1.0, 10.0, 4.343 / 10.0).unwrap(); // z = 1
        assert_rel(fog_pdf(&unit, 1.0).unwrap(), 1.0, 1e-12, "k = 1 endpoint equals z");
    }

    /// Normalization for all presets at several lengths, integrating in the
    /// log-attenuation variable T = ln(1/ia) where the density is a plain
    /// Gamma law (the spec'd log-substitution).
    #[test]
    fn pdf_normalization_all_presets() {
        for preset in ALL_PRESETS {
            for &l in &[0.1, 0.5, 1.0] {
                let p = fog_preset(preset, l).unwrap();
                let z = p.z();
                let t_hi = (p.k + 14.0 * p.k.sqrt() + 60.0) / z;
                let mass = quad::integrate(
                    |t| fog_pdf(&p, (-t).exp()).unwrap() * (-t).exp(),
                    0.0,
                    t_hi,
                    1e-11,
                    1e-11,
                )
                .unwrap()
                .value;
                assert_rel(mass, 1.0, 1e-9, &format!("normalization {preset:?} l={l}"));
            }
        }
    }

    #[test]
    fn pdf_change_of_variables_oracle() {
        // f_Ia(ia) must equal the Gamma density of T = ln(1/ia) times 1/ia.
        let p = fog_preset(FogPreset::Light, 0.5).unwrap();
        let z = p.z();
        let ia = 0.5f64;
        let t = -(ia.ln());
        let gamma_pdf =
            (p.k * z.ln() - specfun::ln_gamma(p.k) + (p.k - 1.0) * t.ln() - z * t).exp();
        assert_rel(fog_pdf(&p, ia).unwrap(), gamma_pdf / ia, 1e-12, "change of variables");
    }

    #[test]
    fn mean_against_quadrature_and_limits() {
        let p = fog_preset(FogPreset::Light, 0.5).unwrap();
        let z = p.z();
        let t_hi = (p.k + 14.0 * p.k.sqrt() + 60.0) / z;
        let mean_quad = quad::integrate(
            |t| {
                let ia = (-t).exp();
                ia * fog_pdf(&p, ia).unwrap() * ia
            },
            0.0,
            t_hi,
            1e-12,
            1e-11,
        )
        .unwrap()
        .value;
        assert_rel(fog_mean(&p), mean_quad, 1e-9, "fog_mean vs quadrature");

        // Vanishing attenuation: l → 0 sends z → ∞ and the mean to 1.
        let thin = FogParams::new(2.32, 13.12, 1e-9).unwrap();
        assert!((fog_mean(&thin) - 1.0).abs() < 1e-6);

        // Monotone decrease in k at fixed z.
        let mut prev = f64::INFINITY;
        for &k in &[1.0, 2.0, 6.0, 12.0, 36.05] {
            let m = fog_mean(&FogParams::new(k, 13.12, 0.5).unwrap());
            assert!(m < prev, "fog_mean must decrease with k");
            prev = m;
        }
        assert_eq!(fog_moment(&p, 1.0), fog_mean(&p));
    }

    #[test]
    fn cdf_matches_pdf_quadrature() {
        let p = fog_preset(FogPreset::Moderate, 0.5).unwrap();
        for &ia0 in &[0.2, 0.5, 0.9] {
            // F(ia0) = ∫ from T0 = ln(1/ia0) upward of the T-space density.
            let t0 = -(ia0 as f64).ln();
            let t_hi = (p.k + 14.0 * p.k.sqrt() + 60.0) / p.z();
            let tail = quad::integrate(
                |t| fog_pdf(&p, (-t).exp()).unwrap() * (-t).exp(),
                t0,
                t_hi,
                1e-12,
                1e-11,
            )
            .unwrap()
            .value;
            assert_rel(fog_cdf(&p, ia0).unwrap(), tail, 1e-9, &format!("F({ia0})"));
        }
        assert_rel(fog_cdf(&p, 1.0).unwrap(), 1.0, 1e-12, "F(1) = 1");
        let mut prev = 0.0;
        for i in 1..=40 {
            let v = fog_cdf(&p, i as f64 / 40.0).unwrap();
            assert!(v >= prev, "CDF must be nondecreasing");
            prev = v;
        }
    }

    #[test]
    fn sampler_moments_support_and_determinism() {
        let p = fog_preset(FogPreset::Light, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let s = fog_sample(&p, &mut rng);
            assert!(s > 0.0 && s <= 1.0, "support violation: {s}");
            sum += s;
            sumsq += s * s;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        let se = (var / n as f64).sqrt();
        let expect = fog_mean(&p);
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "sample mean {mean:.6} vs {expect:.6} (se {se:.2e})"
        );

        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            assert_eq!(
                fog_sample(&p, &mut a).to_bits(),
                fog_sample(&p, &mut b).to_bits(),
                "fixed seed must reproduce bitwise"
            );
        }
    }

    #[test]
    fn empirical_cdf_ks_distance() {
        // Kolmogorov–Smirnov distance between 10⁶ draws and the analytic CDF.
        let p = fog_preset(FogPreset::Moderate, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 1_000_000usize;
        let mut draws: Vec<f64> = (0..n).map(|_| fog_sample(&p, &mut rng)).collect();
        draws.sort_by(|a, b| a.total_cmp(b));
        let mut ks: f64 = 0.0;
        // Scan a decimated grid of order statistics (full scan is O(n) CDF
        // evaluations; every 1000th point bounds the statistic tightly).
        for i in (0..n).step_by(1000) {
            let f = fog_cdf(&p, draws[i]).unwrap();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((f - lo).abs()).max((f - hi).abs());
        }
        assert!(ks < 0.002, "KS statistic {ks:.4} exceeds 0.002");
    }
}
