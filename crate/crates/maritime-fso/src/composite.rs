//! Composite irradiance and SNR statistics for the fog × pointing channel.
//!
//! The received irradiance factor is `I = Ia·Ip` and the electrical SNR is
//! `γ = μ(I/E[I])^r` with `r = 1` (heterodyne) or `r = 2` (intensity
//! modulation / direct detection). With `y = ln(A0/I)` the composite density
//! collapses onto a single kernel
//!
//! * `K(y) = ∫₀^{y/2} (y−2t)^{k−1} e^{−Wt} I₀(2Gt) dt`,
//!   `G = (1−q²)ξ/(2q)`, `P = (1+q²)ξ/q`, `W = P − 2z`,
//! * `f_I(I) = (2 z^k ξ)/(A0 Γ(k)) (I/A0)^{z−1} K(y)`,
//! * `f_γ(γ) = C e^{−zy} K(y)/(rγ)`, `C = 2 z^k ξ/Γ(k)`,
//!   `y = (1/r) ln(γ_max/γ)`, `γ_max = μ/D̃^r`, `D̃ = E[Ia]E[Ip]/A0`.
//!
//! Two genuinely independent evaluation paths are kept side by side:
//!
//! * **closed** — the binomial/Bessel double series of the kernel and, for
//!   integer `k`, the fully closed CDF (₂F₁ head plus incomplete-gamma
//!   i-sums), assembled in signed log space;
//! * **quadrature** — adaptive Gauss–Kronrod on the exact kernel integral
//!   (with the exponentially scaled Bessel, so nothing overflows).
//!
//! The closed path monitors its own conditioning (digits lost to
//! cancellation) and falls back to quadrature when the series leaves its
//! trustworthy regime; every CDF result carries an [`EvalPath`] tag saying
//! which route produced it. The identity `P² − 4G² = 4ξ²` makes the
//! quadrature CDF exactly normalized.

use crate::error::{Error, Result};
use crate::fog::{fog_mean, FogParams};
use crate::pointing::{ip_mean, DerivedPointing};
use crate::quad;
use crate::specfun::{
    bessel_i0e, gamma_exp_moment_ln, gen_binomial, hyp2f1, ln_abs_lower_inc_gamma, ln_gamma,
    reg_lower_gamma, LnVal, SeriesControl,
};

/// Smallest SNR (dB) the link-budget bookkeeping treats as usable.
pub const MIN_USABLE_SNR_DB: f64 = 7.1;

/// Digits of cancellation beyond which a series result is distrusted and the
/// quadrature path takes over. Seven lost digits leave ≈1e-9 relative
/// accuracy in f64 — the tightest guarantee any downstream tolerance needs.
const MAX_LOST_DIGITS: f64 = 7.0;

// ----- model ------------------------------------------------------------------

/// Detection technique, fixing the SNR exponent `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    /// Heterodyne detection: γ ∝ I (r = 1).
    Hd,
    /// Intensity modulation / direct detection: γ ∝ I² (r = 2).
    ImDd,
}

impl Detection {
    pub fn r(self) -> f64 {
        match self {
            Detection::Hd => 1.0,
            Detection::ImDd => 2.0,
        }
    }

    /// Parse the names used verbatim in scenario files.
    pub fn parse(name: &str) -> Result<Detection> {
        match name {
            "hd" => Ok(Detection::Hd),
            "imdd" => Ok(Detection::ImDd),
            other => Err(Error::Config(format!(
                "unknown detection {other:?}; expected hd|imdd"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Detection::Hd => "hd",
            Detection::ImDd => "imdd",
        }
    }
}

/// Which evaluation route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Closed,
    Quadrature,
}

impl EvalPath {
    pub fn label(self) -> &'static str {
        match self {
            EvalPath::Closed => "closed",
            EvalPath::Quadrature => "quadrature",
        }
    }

    /// Combine route tags: a result is only "closed" if every input was.
    pub fn worst(self, other: EvalPath) -> EvalPath {
        if self == EvalPath::Quadrature || other == EvalPath::Quadrature {
            EvalPath::Quadrature
        } else {
            EvalPath::Closed
        }
    }
}

/// dB → linear power ratio.
pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio → dB.
pub fn lin_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// A value together with the route that produced it.
#[derive(Debug, Clone, Copy)]
pub struct Tagged<T> {
    pub value: T,
    pub path: EvalPath,
}

/// Everything needed to evaluate composite statistics at one operating point.
#[derive(Debug, Clone, Copy)]
pub struct ChannelModel {
    pub fog: FogParams,
    pub pointing: DerivedPointing,
    pub detection: Detection,
    /// Average electrical SNR μ (linear).
    pub mu: f64,
    pub series: SeriesControl,
}

impl ChannelModel {
    pub fn new(
        fog: FogParams,
        pointing: DerivedPointing,
        detection: Detection,
        mu: f64,
    ) -> Result<ChannelModel> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!("average SNR mu must be positive, got {mu}")));
        }
        Ok(ChannelModel { fog, pointing, detection, mu, series: SeriesControl::default() })
    }

    /// Same model at a different average SNR given in dB.
    pub fn with_mu_db(&self, mu_db: f64) -> ChannelModel {
        ChannelModel { mu: 10f64.powf(mu_db / 10.0), ..*self }
    }

    pub fn mu_db(&self) -> f64 {
        10.0 * self.mu.log10()
    }

    pub fn r(&self) -> f64 {
        self.detection.r()
    }

    /// Fog rate `z`.
    pub fn z(&self) -> f64 {
        self.fog.z()
    }

    /// Bessel-series coefficient `G = (1−q²)ξ/(2q)`.
    pub(crate) fn big_g(&self) -> f64 {
        let (q, xi) = (self.pointing.q, self.pointing.xi);
        (1.0 - q * q) * xi / (2.0 * q)
    }

    /// Power-law exponent `P = (1+q²)ξ/q`.
    pub(crate) fn big_p(&self) -> f64 {
        let (q, xi) = (self.pointing.q, self.pointing.xi);
        (1.0 + q * q) * xi / q
    }

    /// The sign-convention constant ϖ = 2z − P (the kernel uses W = −ϖ).
    pub fn varpi(&self) -> f64 {
        2.0 * self.z() - self.big_p()
    }

    pub(crate) fn big_w(&self) -> f64 {
        self.big_p() - 2.0 * self.z()
    }

    /// Mean irradiance factor `E[I] = E[Ia]·E[Ip]`.
    pub fn mean_irradiance(&self) -> f64 {
        fog_mean(&self.fog) * ip_mean(&self.pointing)
    }

    /// Normalized mean `D̃ = E[I]/A0 ∈ (0, 1)`.
    pub fn d_tilde(&self) -> f64 {
        self.mean_irradiance() / self.pointing.a0
    }

    /// Largest attainable SNR `γ_max = μ/D̃^r` (at `I = A0`).
    pub fn gamma_max(&self) -> f64 {
        self.mu / self.d_tilde().powf(self.r())
    }

    /// Kernel coordinate of an SNR value: `y = (1/r)·ln(γ_max/γ)`.
    pub fn y_of_gamma(&self, gamma: f64) -> f64 {
        (self.gamma_max().ln() - gamma.ln()) / self.r()
    }

    /// ln of the SNR-density prefactor `C = 2 z^k ξ/Γ(k)`.
    pub(crate) fn ln_c(&self) -> f64 {
        let z = self.z();
        let k = self.fog.k;
        2f64.ln() + k * z.ln() - ln_gamma(k) + self.pointing.xi.ln()
    }

    pub(crate) fn integer_k(&self) -> Option<u32> {
        let k = self.fog.k;
        if (k - k.round()).abs() <= 1e-9 && k.round() >= 1.0 {
            Some(k.round() as u32)
        } else {
            None
        }
    }
}

// ----- kernel: series path ------------------------------------------------------

/// Binomial/Bessel double series of the kernel,
/// `K(y) = Σ_m G^{2m}/(m!)² Σ_n C(k−1,n)(−2)^n y^{k−1−n} W^{−a} γ(a, Wy/2)`,
/// `a = 2m+n+1`, with every term assembled in signed log space.
///
/// Returns the kernel value together with the digits lost to cancellation
/// (max-term magnitude over result magnitude); the caller decides whether
/// the conditioning is acceptable.
fn kernel_series(m: &ChannelModel, y: f64) -> Result<(f64, f64)> {
    if y <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let k = m.fog.k;
    let g = m.big_g();
    let w = m.big_w();
    let ln_y = y.ln();
    let ln_g = if g > 0.0 { g.ln() } else { f64::NEG_INFINITY };
    let tol = m.series.abs_tol;
    let integer_k = m.integer_k();
    let n_cap: u32 = match integer_k {
        Some(ki) => ki - 1, // the binomial terminates the n-sum exactly
        None => 400,
    };

    let mut total = 0.0f64;
    let mut max_ln_term = f64::NEG_INFINITY;
    let mut converged = false;

    for mm in 0..m.series.max_terms {
        let mf = mm as f64;
        let mut block = 0.0f64;
        let mut binom = 1.0f64; // C(k−1, n), sign-exact recurrence
        // Avoid 0·(−∞) when G = 0 (the m = 0 block is still finite).
        let ln_g_pow = if mm == 0 { 0.0 } else { 2.0 * mf * ln_g };
        let mut n = 0u32;
        loop {
            let nf = n as f64;
            let a = 2.0 * mf + nf + 1.0; // always a positive integer
            let base = binom.abs().ln()
                + nf * 2f64.ln()
                + (k - 1.0 - nf) * ln_y
                + ln_g_pow
                - 2.0 * ln_gamma(mf + 1.0);
            let (ln_mag, sgn) = if w == 0.0 {
                // lim W→0 of W^{−a} γ(a, Wy/2) = (y/2)^a / a.
                (base + a * (y / 2.0).ln() - a.ln(), binom.signum() * neg_pow(n))
            } else {
                let (ln_gam, sg_gam) = ln_abs_lower_inc_gamma(a, w * y / 2.0)?;
                let w_sign = if w > 0.0 || (a as i64) % 2 == 0 { 1.0 } else { -1.0 };
                (
                    base - a * w.abs().ln() + ln_gam,
                    binom.signum() * neg_pow(n) * sg_gam * w_sign,
                )
            };
            if ln_mag > 709.0 {
                return Err(Error::Overflow(format!(
                    "kernel series term exceeds the f64 range at (m={mm}, n={n}), y={y}"
                )));
            }
            let term = if ln_mag < -745.0 { 0.0 } else { sgn * ln_mag.exp() };
            block += term;
            max_ln_term = max_ln_term.max(ln_mag);

            if n >= n_cap {
                break;
            }
            if integer_k.is_none()
                && n > 4
                && term.abs() <= tol * block.abs().max(1e-300)
            {
                break;
            }
            // C(k−1, n+1) = C(k−1, n)·(k−1−n)/(n+1).
            binom *= (k - 1.0 - nf) / (nf + 1.0);
            n += 1;
        }
        total += block;
        if mm > 2 && block.abs() <= tol * total.abs().max(1e-300) {
            converged = true;
            break;
        }
        if g == 0.0 {
            // q = 1 collapses the Bessel series to its m = 0 term.
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!(
            "kernel series did not converge within {} m-terms at y = {y}",
            m.series.max_terms
        )));
    }
    let lost = if total > 0.0 {
        (max_ln_term - total.ln()) / std::f64::consts::LN_10
    } else {
        f64::INFINITY // a nonpositive kernel is always a cancellation artifact
    };
    Ok((total, lost))
}

fn neg_pow(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

// ----- kernel: quadrature path ---------------------------------------------------

/// Direct adaptive quadrature of the kernel integral, with the Bessel factor
/// exponentially rescaled: `exp((2G−W)t)·i0e(2Gt)·(y−2t)^{k−1}`.
fn kernel_t_quad(m: &ChannelModel, y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    let k = m.fog.k;
    let g = m.big_g();
    let w = m.big_w();
    quad::integrate_decaying(
        |t| ((2.0 * g - w) * t).exp() * bessel_i0e(2.0 * g * t) * (y - 2.0 * t).max(0.0).powf(k - 1.0),
        y / 2.0,
        w - 2.0 * g, // = 2qξ − 2z; a boundary layer exists only when positive
        &[],
        1e-280,
        1e-10,
    )
}

/// Production kernel: the series when it is well conditioned, quadrature
/// otherwise, with the chosen route reported.
pub(crate) fn kernel(m: &ChannelModel, y: f64) -> Result<(f64, EvalPath)> {
    if y <= 0.0 {
        return Ok((0.0, EvalPath::Closed));
    }
    match kernel_series(m, y) {
        Ok((v, lost)) if v > 0.0 && lost <= MAX_LOST_DIGITS => Ok((v, EvalPath::Closed)),
        Ok(_) => Ok((kernel_t_quad(m, y)?, EvalPath::Quadrature)),
        Err(Error::NonConvergence(_)) | Err(Error::Overflow(_)) => {
            Ok((kernel_t_quad(m, y)?, EvalPath::Quadrature))
        }
        Err(e) => Err(e),
    }
}

// ----- composite irradiance PDF ---------------------------------------------------

/// Density of the composite irradiance factor `I = Ia·Ip` on (0, A0].
pub fn composite_irradiance_pdf(m: &ChannelModel, i: f64) -> Result<f64> {
    let a0 = m.pointing.a0;
    if !(i > 0.0 && i <= a0) {
        return Err(Error::Domain(format!(
            "composite_irradiance_pdf requires I in (0, A0 = {a0}], got {i}"
        )));
    }
    let y = a0.ln() - i.ln(); // ln(A0/I) without cancellation near A0
    let (kv, _) = kernel(m, y)?;
    if kv <= 0.0 {
        return Ok(0.0);
    }
    let z = m.z();
    let ln_f = m.ln_c() - a0.ln() + (z - 1.0) * (i.ln() - a0.ln()) + kv.ln();
    Ok(ln_f.exp())
}

// ----- SNR PDF --------------------------------------------------------------------

/// Unified SNR density `f_γ(γ) = C e^{−zy} K(y)/(rγ)` on (0, γ_max].
pub fn snr_pdf(m: &ChannelModel, gamma: f64) -> Result<f64> {
    let gmax = m.gamma_max();
    if !(gamma > 0.0 && gamma <= gmax) {
        return Err(Error::Domain(format!(
            "snr_pdf requires gamma in (0, gamma_max = {gmax:.6e}], got {gamma:.6e}"
        )));
    }
    let y = m.y_of_gamma(gamma);
    let (kv, _) = kernel(m, y)?;
    if kv <= 0.0 {
        return Ok(0.0);
    }
    let ln_f = m.ln_c() - m.z() * y + kv.ln() - (m.r() * gamma).ln();
    Ok(ln_f.exp())
}

// ----- SNR CDF --------------------------------------------------------------------

/// Unified SNR distribution function `F_γ(x)`, tagged with the evaluation
/// route. Values at or above `γ_max` clamp to 1.
///
/// Integer shape `k` activates the fully closed form (₂F₁ head plus
/// incomplete-gamma i-sums); any conditioning or domain failure inside it —
/// and every non-integer `k` — routes to the exactly normalized quadrature
/// representation `F = 2ξ ∫₀^∞ e^{−2qξt} i0e(2Gt) Q(k, z(Y−2t)₊) dt`.
pub fn snr_cdf(m: &ChannelModel, x: f64) -> Result<Tagged<f64>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("snr_cdf requires x > 0, got {x}")));
    }
    let gmax = m.gamma_max();
    if x >= gmax {
        return Ok(Tagged { value: 1.0, path: EvalPath::Closed });
    }
    let y_big = m.y_of_gamma(x);
    if m.integer_k().is_some() {
        if let Some(v) = snr_cdf_closed(m, y_big)? {
            return Ok(Tagged { value: v, path: EvalPath::Closed });
        }
    }
    Ok(Tagged { value: cdf_tail_quad(m, y_big)?, path: EvalPath::Quadrature })
}

/// Closed-form CDF for integer k. Returns Ok(None) when the series is
/// outside its trustworthy regime (ill-conditioned, |W/P| ≥ 1, divergent…),
/// which the caller treats as "use quadrature".
fn snr_cdf_closed(m: &ChannelModel, y_big: f64) -> Result<Option<f64>> {
    let ki = match m.integer_k() {
        Some(k) => k,
        None => return Ok(None),
    };
    let k = ki as f64;
    let z = m.z();
    let g = m.big_g();
    let w = m.big_w();
    let p = m.big_p();
    if w == 0.0 || (w / p).abs() >= 1.0 {
        return Ok(None); // ₂F₁ argument leaves the unit disc
    }
    let tol = m.series.abs_tol;
    let ln_g = if g > 0.0 { g.ln() } else { f64::NEG_INFINITY };

    let mut total = LnVal::ZERO;
    let mut max_ln_term = f64::NEG_INFINITY;
    let mut converged = false;
    for mm in 0..m.series.max_terms {
        let mf = mm as f64;
        let ln_g_pow = if mm == 0 { 0.0 } else { 2.0 * mf * ln_g };
        let mut block = LnVal::ZERO;
        for n in 0..ki {
            let nf = n as f64;
            let a = 2.0 * mf + nf + 1.0;
            let cap_k = ki - 1 - n; // K exponent of the moment integral

            // J_∞ = Γ(k+2m+1)(W/2)^a / (a (P/2)^{k+2m+1}) · ₂F₁(1, k+2m+1; a+1; W/P)
            let f21 = match hyp2f1(1.0, k + 2.0 * mf + 1.0, a + 1.0, w / p) {
                Ok(v) => v,
                Err(Error::Domain(_)) | Err(Error::NonConvergence(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let j_inf = LnVal::from_parts(
                ln_gamma(k + 2.0 * mf + 1.0) + a * (w.abs() / 2.0).ln()
                    - a.ln()
                    - (k + 2.0 * mf + 1.0) * (p / 2.0).ln(),
                if w > 0.0 || (a as i64) % 2 == 0 { 1.0 } else { -1.0 },
            )
            .mul(LnVal::from_value(f21));

            // J(Y) = ∫₀^Y γ(a, Wy/2) e^{−zy} y^{K} dy, exactly.
            let j_y = match gamma_exp_moment_ln(a, w / 2.0, z, cap_k, 0.0, y_big) {
                Ok(v) => v,
                Err(Error::Domain(_)) | Err(Error::NonConvergence(_)) => return Ok(None),
                Err(e) => return Err(e),
            };

            let binom = gen_binomial(k - 1.0, n);
            let coef = LnVal::from_parts(
                binom.abs().ln() + nf * 2f64.ln() + ln_g_pow - 2.0 * ln_gamma(mf + 1.0)
                    - a * w.abs().ln(),
                binom.signum()
                    * neg_pow(n)
                    * (if w > 0.0 || (a as i64) % 2 == 0 { 1.0 } else { -1.0 }),
            );
            let term = coef.mul(j_inf.sub(j_y));
            max_ln_term = max_ln_term.max(term.ln);
            block = block.add(term);
        }
        total = total.add(block);
        if mm > 2 && !total.is_zero() && block.ln <= tol.ln() + total.ln {
            converged = true;
            break;
        }
        if g == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(None);
    }
    let f = LnVal::from_parts(m.ln_c(), 1.0).mul(total).value();
    let lost = if total.is_zero() {
        f64::INFINITY
    } else {
        (max_ln_term - total.ln) / std::f64::consts::LN_10
    };
    if !f.is_finite() || lost > MAX_LOST_DIGITS || !(-1e-9..=1.0 + 1e-9).contains(&f) {
        return Ok(None);
    }
    Ok(Some(f.clamp(0.0, 1.0)))
}

/// Quadrature CDF via the swapped (exactly normalized) representation.
fn cdf_tail_quad(m: &ChannelModel, y_big: f64) -> Result<f64> {
    let k = m.fog.k;
    let z = m.z();
    let g = m.big_g();
    let q_xi = m.pointing.q * m.pointing.xi;
    let integrand = |t: f64| {
        let lo = (y_big - 2.0 * t).max(0.0);
        (-2.0 * q_xi * t).exp() * bessel_i0e(2.0 * g * t) * (1.0 - reg_lower_gamma(k, z * lo))
    };
    // Kink at t = Y/2 (the survivor factor saturates at 1); e^{−2qξt} sets
    // how far past the kink any mass can live.
    let t_knee = y_big / 2.0;
    let t_hi = t_knee + 50.0 / (2.0 * q_xi);
    let total = quad::integrate_decaying(integrand, t_hi, 2.0 * q_xi, &[t_knee], 1e-13, 1e-10)?;
    Ok((2.0 * m.pointing.xi * total).clamp(0.0, 1.0))
}

// ----- weighted kernel integrals ---------------------------------------------------

/// `∫_α^β y^p e^{−cy} K(y) dy` for `p ∈ {0, 1}` and `c > 0`, via the exact
/// order swap onto the t-axis (one adaptive quadrature, no nested integral):
/// the inner y-integral reduces to regularized incomplete-gamma differences.
pub(crate) fn int_exp_kernel(m: &ChannelModel, alpha: f64, beta: f64, c: f64, p: u8) -> Result<f64> {
    if !(alpha >= 0.0 && beta >= alpha) {
        return Err(Error::Domain(format!(
            "int_exp_kernel requires 0 ≤ alpha ≤ beta, got [{alpha}, {beta}]"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("int_exp_kernel requires c > 0, got {c}")));
    }
    if beta == alpha {
        return Ok(0.0);
    }
    if p > 1 {
        return Err(Error::Domain(format!("int_exp_kernel supports p ∈ {{0,1}}, got {p}")));
    }
    let k = m.fog.k;
    let g = m.big_g();
    let w = m.big_w();
    let scale_k = (ln_gamma(k) - k * c.ln()).exp(); // Γ(k)/c^k
    let scale_k1 = (ln_gamma(k + 1.0) - (k + 1.0) * c.ln()).exp(); // Γ(k+1)/c^{k+1}
    let integrand = |t: f64| {
        let hi = beta - 2.0 * t;
        let lo = (alpha - 2.0 * t).max(0.0);
        let dk = reg_lower_gamma(k, c * hi) - reg_lower_gamma(k, c * lo);
        let inner = if p == 0 {
            scale_k * dk
        } else {
            let dk1 = reg_lower_gamma(k + 1.0, c * hi) - reg_lower_gamma(k + 1.0, c * lo);
            scale_k1 * dk1 + 2.0 * t * scale_k * dk
        };
        ((2.0 * g - w - 2.0 * c) * t).exp() * bessel_i0e(2.0 * g * t) * inner
    };
    // The exponential factor decays like e^{−κt}, κ = 2qξ + 2(c−z); the
    // lower clamp (α−2t)₊ releases at t = α/2.
    let kappa = 2.0 * m.pointing.q * m.pointing.xi + 2.0 * (c - m.z());
    quad::integrate_decaying(integrand, beta / 2.0, kappa, &[alpha / 2.0], 1e-290, 1e-10)
}

// ----- fog-only limit ----------------------------------------------------------------

/// Largest attainable SNR of the fog-only (ξ² ≫ 1) limit: `μ/E[Ia]^r`
/// (the pointing factor degenerates to the constant A0, which cancels).
pub fn gamma_max_fog_only(m: &ChannelModel) -> f64 {
    m.mu / fog_mean(&m.fog).powf(m.r())
}

/// SNR density of the fog-only limit on (0, γ_max,f]:
/// `f(γ) = z^k T^{k−1} e^{−zT} / (Γ(k) r γ)`, `T = (1/r) ln(γ_max,f/γ)`.
pub fn snr_pdf_fog_only(m: &ChannelModel, gamma: f64) -> Result<f64> {
    let gmax = gamma_max_fog_only(m);
    if !(gamma > 0.0 && gamma <= gmax) {
        return Err(Error::Domain(format!(
            "snr_pdf_fog_only requires gamma in (0, {gmax:.6e}], got {gamma:.6e}"
        )));
    }
    let z = m.z();
    let k = m.fog.k;
    let t = (gmax.ln() - gamma.ln()) / m.r();
    if t == 0.0 {
        return Ok(if k > 1.0 {
            0.0
        } else if k == 1.0 {
            z / (m.r() * gamma)
        } else {
            f64::INFINITY
        });
    }
    let ln_f = k * z.ln() - ln_gamma(k) + (k - 1.0) * t.ln() - z * t - (m.r() * gamma).ln();
    Ok(ln_f.exp())
}

/// CDF of the fog-only limit: `F(x) = Q(k, z·T(x))`.
pub fn snr_cdf_fog_only(m: &ChannelModel, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("snr_cdf_fog_only requires x > 0, got {x}")));
    }
    let gmax = gamma_max_fog_only(m);
    if x >= gmax {
        return Ok(1.0);
    }
    let t = (gmax.ln() - x.ln()) / m.r();
    Ok(1.0 - reg_lower_gamma(m.fog.k, m.z() * t))
}

// ----- effective average SNR ------------------------------------------------------------

/// Average SNR in dB over the usable region `γ ≥ 10^{0.71}` (7.1 dB):
///
///   E[γ_dB | γ ≥ γ_min] = 10·log₁₀(γ_max) − (10r/ln 10)·M₁/M₀,
///
/// with `M_p = ∫₀^{Y(γ_min)} y^p e^{−zy} K(y) dy` — the dB-domain mean of
/// the SNR distribution conditioned on the link being usable at all.
pub fn effective_avg_snr_db(m: &ChannelModel) -> Result<f64> {
    let gamma_min = 10f64.powf(MIN_USABLE_SNR_DB / 10.0);
    let gmax = m.gamma_max();
    if gamma_min >= gmax {
        return Err(Error::Domain(format!(
            "no usable SNR region: gamma_max = {gmax:.4e} sits below the \
             {MIN_USABLE_SNR_DB} dB floor"
        )));
    }
    let y_big = m.y_of_gamma(gamma_min);
    let m0 = int_exp_kernel(m, 0.0, y_big, m.z(), 0)?;
    let m1 = int_exp_kernel(m, 0.0, y_big, m.z(), 1)?;
    if m0 <= 0.0 {
        return Err(Error::Domain(
            "usable-SNR probability vanished; conditional mean undefined".into(),
        ));
    }
    Ok(10.0 * gmax.log10() - (10.0 * m.r() / std::f64::consts::LN_10) * (m1 / m0))
}

/// Probability that a single beam is usable at all: `1 − F(γ_min)`.
pub fn usable_probability(m: &ChannelModel) -> Result<f64> {
    let gamma_min = 10f64.powf(MIN_USABLE_SNR_DB / 10.0);
    if gamma_min >= m.gamma_max() {
        return Ok(0.0);
    }
    Ok(1.0 - snr_cdf(m, gamma_min)?.value)
}

// ----- tests --------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fog::{fog_pdf, fog_preset, FogPreset};
    use crate::pointing::{derive_pointing, ip_pdf, PointingGeometry};

    fn assert_rel(actual: f64, expected: f64, tol: f64, what: &str) {
        let rel = (actual - expected).abs() / expected.abs().max(1e-300);
        assert!(
            rel <= tol,
            "{what}: actual {actual:.12e}, expected {expected:.12e}, rel {rel:.2e}"
        );
    }

    /// Weak-impact case: light fog over 0.5 km, mild sway.
    fn weak(detection: Detection, mu_db: f64) -> ChannelModel {
        let fog = fog_preset(FogPreset::Light, 0.5).unwrap();
        let p = derive_pointing(&PointingGeometry::reference(0.5)).unwrap();
        ChannelModel::new(fog, p, detection, 10f64.powf(mu_db / 10.0)).unwrap()
    }

    /// Severe-impact case: dense fog over 0.5 km, strong sway.
    fn severe(detection: Detection, mu_db: f64) -> ChannelModel {
        let fog = fog_preset(FogPreset::Dense, 0.5).unwrap();
        let p = derive_pointing(&PointingGeometry::reference(2.5)).unwrap();
        ChannelModel::new(fog, p, detection, 10f64.powf(mu_db / 10.0)).unwrap()
    }

    /// Moderate fog at unit sway — the joint-density showcase case.
    fn moderate(detection: Detection, mu_db: f64) -> ChannelModel {
        let fog = fog_preset(FogPreset::Moderate, 0.5).unwrap();
        let p = derive_pointing(&PointingGeometry::reference(1.0)).unwrap();
        ChannelModel::new(fog, p, detection, 10f64.powf(mu_db / 10.0)).unwrap()
    }

    /// Synthetic integer-shape model (k = 6) exercising the closed CDF.
    fn synthetic_k6(detection: Detection, mu_db: f64) -> ChannelModel {
        let fog = fog_preset(FogPreset::Thick, 0.5).unwrap(); // k = 6.00 exactly
        let mut p = derive_pointing(&PointingGeometry::reference(1.0)).unwrap();
        p.xi = 5.0;
        ChannelModel::new(fog, p, detection, 10f64.powf(mu_db / 10.0)).unwrap()
    }

    #[test]
    fn kernel_series_vs_quadrature_well_conditioned() {
        // Moderate case: the series is trustworthy over the working range.
        let m = moderate(Detection::Hd, 30.0);
        for &y in &[0.5, 2.0, 5.0, 10.0] {
            let (series, lost) = kernel_series(&m, y).unwrap();
            let quadv = kernel_t_quad(&m, y).unwrap();
            assert!(lost < 6.0, "unexpected conditioning loss {lost} at y={y}");
            assert_rel(series, quadv, 1e-8, &format!("kernel at y={y}"));
        }
    }

    #[test]
    fn kernel_guard_reroutes_ill_conditioned_series() {
        // Severe case: C(35.05, n) peaks near 4.5e9 against an n-sum of
        // order 1e-2·y^k, so the alternating series burns ~10 digits even at
        // small y — the guard must hand both regimes to quadrature.
        let m = severe(Detection::Hd, 45.0);
        for &y in &[0.5, 40.0] {
            let (v, path) = kernel(&m, y).unwrap();
            assert_eq!(path, EvalPath::Quadrature, "guard must reroute at y = {y}");
            assert_rel(v, kernel_t_quad(&m, y).unwrap(), 1e-12, "severe kernel y={y}");
        }
        // A heavily damped n-sum (weak case: W ≈ 1043) stays on the series.
        let mw = weak(Detection::Hd, 45.0);
        let (v_closed, path_small) = kernel(&mw, 2.0).unwrap();
        assert_eq!(path_small, EvalPath::Closed);
        assert_rel(v_closed, kernel_t_quad(&mw, 2.0).unwrap(), 1e-8, "weak kernel y=2");
    }

    #[test]
    fn irradiance_pdf_matches_convolution_oracle() {
        // Independent route: direct convolution of the fog and pointing
        // densities, f_I(I) = ∫₀^y f_Ip(I e^u) f_Ia(e^{−u}) du.
        let m = moderate(Detection::Hd, 30.0);
        let a0 = m.pointing.a0;
        for idx in 0..50 {
            let frac = 10f64.powf(-4.0 + 3.9 * idx as f64 / 49.0); // I/A0 ∈ [1e-4, ~0.8]
            let i = frac * a0;
            let y = (a0 / i).ln();
            let conv = quad::integrate(
                |u| {
                    ip_pdf(&m.pointing, i * u.exp()).unwrap()
                        * fog_pdf(&m.fog, (-u).exp()).unwrap()
                },
                0.0,
                y,
                1e-300,
                1e-9,
            )
            .unwrap()
            .value;
            assert_rel(
                composite_irradiance_pdf(&m, i).unwrap(),
                conv,
                1e-5,
                &format!("product-law convolution at I/A0 = {frac:.3e}"),
            );
        }
    }

    #[test]
    fn irradiance_pdf_normalization() {
        let m = moderate(Detection::Hd, 30.0);
        let a0 = m.pointing.a0;
        // Integrate in y = ln(A0/I): ∫ f_I(A0 e^{−y}) A0 e^{−y} dy.
        let y_hi = 80.0 / (2.0 * m.pointing.q * m.pointing.xi).min(2.0 * m.z()) + 20.0;
        let mass = quad::integrate(
            |y| {
                let i = a0 * (-y).exp();
                composite_irradiance_pdf(&m, i).unwrap() * i
            },
            0.0,
            y_hi,
            1e-9,
            1e-8,
        )
        .unwrap()
        .value;
        assert_rel(mass, 1.0, 1e-6, "composite irradiance normalization");
    }

    #[test]
    fn snr_pdf_consistency_and_normalization() {
        for (m, label) in [
            (weak(Detection::Hd, 30.0), "weak hd"),
            (weak(Detection::ImDd, 30.0), "weak imdd"),
            (severe(Detection::Hd, 45.0), "severe hd"),
        ] {
            // r-transformation consistency: f_γ(γ) = f_I(I)·I/(rγ).
            let gmax = m.gamma_max();
            for &frac in &[0.9, 0.1, 1e-3] {
                let gamma = frac * gmax;
                let i = m.pointing.a0 * (frac as f64).powf(1.0 / m.r());
                let expect = composite_irradiance_pdf(&m, i).unwrap() * i / (m.r() * gamma);
                assert_rel(
                    snr_pdf(&m, gamma).unwrap(),
                    expect,
                    1e-9,
                    &format!("{label} change of variables at {frac}"),
                );
            }
            // Normalization in y-space: ∫ f_γ(γ_max e^{−ry})·rγ dy = 1.
            let decay = (2.0 * m.pointing.q * m.pointing.xi).min(m.z());
            let y_hi = 80.0 / decay + 20.0;
            let mass = quad::integrate(
                |y| {
                    let gamma = gmax * (-m.r() * y).exp();
                    snr_pdf(&m, gamma).unwrap() * m.r() * gamma
                },
                0.0,
                y_hi,
                1e-9,
                1e-8,
            )
            .unwrap()
            .value;
            assert_rel(mass, 1.0, 1e-6, &format!("{label} SNR normalization"));
        }
    }

    #[test]
    fn snr_cdf_closed_matches_quadrature_integer_k() {
        for det in [Detection::Hd, Detection::ImDd] {
            let m = synthetic_k6(det, 45.0);
            let gmax = m.gamma_max();
            for idx in 0..20 {
                let x = gmax * 10f64.powf(-6.0 + 5.8 * idx as f64 / 19.0);
                let closed = snr_cdf(&m, x).unwrap();
                assert_eq!(closed.path, EvalPath::Closed, "closed path must engage");
                let quadv = cdf_tail_quad(&m, m.y_of_gamma(x)).unwrap();
                assert!(
                    (closed.value - quadv).abs() < 1e-6,
                    "closed {:.12e} vs quadrature {quadv:.12e} at x/gmax = {:.2e} ({det:?})",
                    closed.value,
                    x / gmax
                );
            }
        }
    }

    #[test]
    fn snr_cdf_frozen_oracles() {
        // Pinned values for the synthetic k = 6 model (HD, μ = 45 dB).
        let m = synthetic_k6(Detection::Hd, 45.0);
        let gmax = m.gamma_max();
        let f1 = snr_cdf(&m, 1e-6 * gmax).unwrap().value;
        let f2 = snr_cdf(&m, 1e-4 * gmax).unwrap().value;
        assert_rel(f1, 0.5942773741, 1e-7, "F(1e-6 gmax)");
        assert_rel(f2, 0.8721243068, 1e-7, "F(1e-4 gmax)");
    }

    #[test]
    fn snr_cdf_limits_and_monotonicity() {
        // The deep-tail probe must sit far below each channel's own median:
        // the severe channel concentrates its SNR mass hundreds of dB below
        // γ_max, so its probe is e^{−300}·γ_max rather than 1e-30·γ_max.
        for (m, deep_frac, label) in [
            (weak(Detection::Hd, 30.0), 1e-30, "weak hd"),
            (severe(Detection::ImDd, 45.0), (-300f64).exp(), "severe imdd"),
        ] {
            let gmax = m.gamma_max();
            assert_eq!(snr_cdf(&m, gmax).unwrap().value, 1.0, "{label}: F(γ_max) = 1");
            assert!(
                snr_cdf(&m, gmax * deep_frac).unwrap().value < 1e-9,
                "{label}: F(0⁺) → 0"
            );
            let mut prev = -1.0;
            for idx in 0..100 {
                let x = gmax * 10f64.powf(-8.0 + 8.0 * idx as f64 / 99.0);
                let v = snr_cdf(&m, x).unwrap().value;
                assert!(
                    v >= prev - 1e-12,
                    "{label}: CDF must be nondecreasing at grid point {idx}"
                );
                prev = v;
            }
        }
    }

    #[test]
    fn snr_cdf_derivative_matches_pdf() {
        let m = weak(Detection::Hd, 30.0);
        let gmax = m.gamma_max();
        for &frac in &[0.3, 0.05, 3e-3] {
            let x = frac * gmax;
            let h = x * 1e-4;
            let d = (snr_cdf(&m, x + h).unwrap().value - snr_cdf(&m, x - h).unwrap().value)
                / (2.0 * h);
            assert_rel(d, snr_pdf(&m, x).unwrap(), 1e-3, &format!("dF/dx at {frac} γmax"));
        }
    }

    #[test]
    fn fog_only_limit() {
        // Large ξ sends the composite model to the fog-only expressions.
        let fog = fog_preset(FogPreset::Light, 0.5).unwrap();
        let mut p = derive_pointing(&PointingGeometry::reference(0.5)).unwrap();
        p.xi = 1e6;
        let m = ChannelModel::new(fog, p, Detection::Hd, 10f64.powf(3.0)).unwrap();
        let gmax_f = gamma_max_fog_only(&m);
        for &frac in &[0.5, 0.1, 1e-2, 1e-4] {
            let gamma = frac * gmax_f;
            let full = snr_pdf(&m, gamma).unwrap();
            let fog_only = snr_pdf_fog_only(&m, gamma).unwrap();
            assert_rel(full, fog_only, 1e-2, &format!("fog-only pointwise limit at {frac}"));
        }
        // Fog-only pdf normalization.
        let z = m.z();
        let t_hi = (m.fog.k + 14.0 * m.fog.k.sqrt() + 60.0) / z;
        let mass = quad::integrate(
            |t| {
                let gamma = gmax_f * (-m.r() * t).exp();
                snr_pdf_fog_only(&m, gamma).unwrap() * m.r() * gamma
            },
            0.0,
            t_hi,
            1e-10,
            1e-9,
        )
        .unwrap()
        .value;
        assert_rel(mass, 1.0, 1e-7, "fog-only normalization");
        // r = 1: fog-only pdf is the change of variables of fog_pdf itself.
        let gamma = 0.3 * gmax_f;
        let ia = (gamma / m.mu) * fog_mean(&m.fog);
        let expect = fog_pdf(&m.fog, ia).unwrap() * fog_mean(&m.fog) / m.mu;
        assert_rel(
            snr_pdf_fog_only(&m, gamma).unwrap(),
            expect,
            1e-10,
            "fog-only r=1 change of variables",
        );
        // CDF consistency against quadrature of the fog-only pdf.
        let x = 0.05 * gmax_f;
        let t_x = (gmax_f / x).ln();
        let tail = quad::integrate(
            |t| {
                let gamma = gmax_f * (-t).exp();
                snr_pdf_fog_only(&m, gamma).unwrap() * gamma
            },
            t_x,
            t_hi,
            1e-11,
            1e-10,
        )
        .unwrap()
        .value;
        assert_rel(snr_cdf_fog_only(&m, x).unwrap(), tail, 1e-8, "fog-only CDF");
    }

    #[test]
    fn effective_snr_weak_anchors() {
        // The two weak-impact anchor values at μ = 45 dB, 0.05 dB tolerance.
        let hd = effective_avg_snr_db(&weak(Detection::Hd, 45.0)).unwrap();
        assert!(
            (hd - 39.4631).abs() < 0.05,
            "weak HD effective SNR {hd:.4} dB vs anchor 39.4631 dB"
        );
        let imdd = effective_avg_snr_db(&weak(Detection::ImDd, 45.0)).unwrap();
        assert!(
            (imdd - 38.0607).abs() < 0.05,
            "weak IM/DD effective SNR {imdd:.4} dB vs anchor 38.0607 dB"
        );
    }

    #[test]
    fn effective_snr_lossless_limit() {
        // ξ→∞, A0→1, z→∞ leaves μ essentially unchanged.
        let fog = crate::fog::FogParams::new(2.32, 13.12, 1e-7).unwrap(); // z huge
        let mut p = derive_pointing(&PointingGeometry::reference(0.5)).unwrap();
        p.xi = 1e9;
        p.a0 = 1.0;
        let m = ChannelModel::new(fog, p, Detection::Hd, 10f64.powf(2.0)).unwrap();
        let eff = effective_avg_snr_db(&m).unwrap();
        assert!((eff - 20.0).abs() < 1e-3, "lossless limit: {eff:.6} dB vs 20 dB");
    }

    #[test]
    fn int_exp_kernel_against_pointwise_quadrature() {
        let m = moderate(Detection::Hd, 30.0);
        let z = m.z();
        for &(alpha, beta) in &[(0.0, 4.0), (1.0, 9.0), (0.5, 2.5)] {
            for p in [0u8, 1u8] {
                let swapped = int_exp_kernel(&m, alpha, beta, z, p).unwrap();
                let direct = quad::integrate(
                    |y| y.powi(p as i32) * (-z * y).exp() * kernel_t_quad(&m, y).unwrap(),
                    alpha,
                    beta,
                    1e-300,
                    1e-9,
                )
                .unwrap()
                .value;
                assert_rel(swapped, direct, 1e-7, &format!("int_exp_kernel p={p} [{alpha},{beta}]"));
            }
        }
    }

    #[test]
    fn usable_probability_reference_points() {
        // Pinned single-beam usable probabilities at μ = 45 dB.
        assert_rel(usable_probability(&weak(Detection::Hd, 45.0)).unwrap(), 0.98973, 2e-4, "weak hd");
        assert_rel(
            usable_probability(&weak(Detection::ImDd, 45.0)).unwrap(),
            0.89563,
            2e-4,
            "weak imdd",
        );
        assert_rel(
            usable_probability(&severe(Detection::Hd, 45.0)).unwrap(),
            0.10198,
            2e-3,
            "severe hd",
        );
        assert_rel(
            usable_probability(&severe(Detection::ImDd, 45.0)).unwrap(),
            0.029095,
            2e-3,
            "severe imdd",
        );
    }

    #[test]
    fn series_control_stability() {
        // Doubling the term budget must not move any well-conditioned result
        // by more than 10× the absolute tolerance.
        let mut mc = synthetic_k6(Detection::ImDd, 45.0);
        let gmax = mc.gamma_max();
        let xs = [0.7 * gmax, 0.05 * gmax, 1e-4 * gmax];
        let base: Vec<f64> = xs.iter().map(|&x| snr_cdf(&mc, x).unwrap().value).collect();
        mc.series.max_terms *= 2;
        for (i, &x) in xs.iter().enumerate() {
            let t = snr_cdf(&mc, x).unwrap();
            assert_eq!(t.path, EvalPath::Closed);
            assert!(
                (t.value - base[i]).abs() <= 10.0 * mc.series.abs_tol,
                "doubling max_terms moved F({x:.3e}) by {:.2e}",
                (t.value - base[i]).abs()
            );
        }
        // Same for the kernel series behind the pdf.
        let mut mp = moderate(Detection::Hd, 35.0);
        let i_pt = 0.01 * mp.pointing.a0;
        let base_pdf = composite_irradiance_pdf(&mp, i_pt).unwrap();
        mp.series.max_terms *= 2;
        let v = composite_irradiance_pdf(&mp, i_pt).unwrap();
        assert!((v - base_pdf).abs() <= 10.0 * mp.series.abs_tol * base_pdf.max(1.0));
    }
}
