//! Threshold-based multi-beam opportunistic selection (TMOS) with adaptive
//! coding and modulation (ACM).
//!
//! Out of `H` i.i.d. beams, the scheduler picks uniformly among those whose
//! SNR clears the selection threshold `γ_T`; the selected beam's SNR then
//! follows the threshold-truncated law
//!
//! * `f_sel(γ) = f_γ(γ)/(1 − F_γ(γ_T))` on `[γ_T, γ_max]`, 0 elsewhere,
//! * outage = `(F(γ_TH,OUT) − F(γ_T))/(1 − F(γ_T))`,
//! * ANSB = `H·(1 − F(γ_T))` (average number of supported beams),
//! * ASE = `Σ_u R_u F_u` over the code regions `[γ_{T_u}, γ_{T_{u+1}})`
//!   clipped to the truncated support, `R_u = u + 0.5`, `M_u = 2^{u+1}`,
//! * `BER_u(γ) = a_u exp(−b_u γ/M_u)` and
//!   `avg BER = Σ_u R_u·BER̄_u / Σ_u R_u·F_u`.
//!
//! Every per-region BER integral keeps two routes: the Maclaurin l-series of
//! the exponential against closed kernel moments (integer k), and adaptive
//! quadrature of `code_ber·f_γ`. The l-series is asymptotic in character —
//! its terms first grow like `(b_u γ_hi/M_u)^l/l!` — so it answers only when
//! its own growth and cancellation diagnostics stay clean; otherwise the
//! quadrature route takes over and the result is tagged accordingly.

use crate::composite::{
    db_to_lin, gamma_max_fog_only, kernel, snr_cdf, snr_cdf_fog_only, snr_pdf, ChannelModel,
    EvalPath, Tagged,
};
use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{gamma_exp_moment_ln, gen_binomial, ln_gamma, LnVal};

/// Truncation denominators below this are treated as degenerate.
const DEGENERATE_EPS: f64 = 1e-12;

/// Hard cap on the Maclaurin l-series length.
const MAX_L_TERMS: u32 = 60;

/// Consecutive growing l-terms before the series is declared divergent.
const DIVERGENCE_RUN: u32 = 20;

/// Digits of cancellation the closed BER series may burn before the
/// quadrature route takes over (matches the kernel-series guard).
const MAX_LOST_DIGITS: f64 = 7.0;

// ----- code table ------------------------------------------------------------

/// One ACM mode: constellation order, exponential BER fit, and activation
/// threshold.
#[derive(Debug, Clone, Copy)]
pub struct AcmCodeRow {
    /// Mode index `u` (1-based).
    pub u: u32,
    /// Constellation order `M_u = 2^{u+1}`.
    pub m_order: u32,
    /// BER fit amplitude `a_u`.
    pub a: f64,
    /// BER fit decay `b_u`.
    pub b: f64,
    /// Activation threshold `γ_{T_u}` in dB.
    pub gamma_t_db: f64,
}

impl AcmCodeRow {
    /// Spectral efficiency of the mode: `R_u = log₂(M_u) − 0.5 = u + 0.5`.
    pub fn rate(&self) -> f64 {
        self.u as f64 + 0.5
    }

    pub fn gamma_t_lin(&self) -> f64 {
        db_to_lin(self.gamma_t_db)
    }
}

/// An ordered ACM mode table with its design target BER.
#[derive(Debug, Clone)]
pub struct AcmCodeTable {
    rows: Vec<AcmCodeRow>,
    pub target_ber: f64,
}

impl AcmCodeTable {
    pub fn new(rows: Vec<AcmCodeRow>, target_ber: f64) -> Result<AcmCodeTable> {
        if rows.is_empty() {
            return Err(Error::Config("ACM table needs at least one row".into()));
        }
        if !(target_ber > 0.0 && target_ber < 1.0) {
            return Err(Error::Config(format!(
                "target BER must lie in (0, 1), got {target_ber}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let u = i as u32 + 1;
            if row.u != u {
                return Err(Error::Config(format!(
                    "row {i}: mode index must be {u}, got {}",
                    row.u
                )));
            }
            if row.m_order != 1u32 << (u + 1) {
                return Err(Error::Config(format!(
                    "row u={u}: constellation order must be 2^{} = {}, got {}",
                    u + 1,
                    1u32 << (u + 1),
                    row.m_order
                )));
            }
            if !(row.a > 0.0) || !(row.b > 0.0) {
                return Err(Error::Config(format!(
                    "row u={u}: fit parameters must be positive (a={}, b={})",
                    row.a, row.b
                )));
            }
            if !row.gamma_t_db.is_finite() {
                return Err(Error::Config(format!("row u={u}: non-finite threshold")));
            }
            if i > 0 && row.gamma_t_db <= rows[i - 1].gamma_t_db {
                return Err(Error::Config(format!(
                    "row u={u}: thresholds must be strictly increasing"
                )));
            }
        }
        Ok(AcmCodeTable { rows, target_ber })
    }

    pub fn rows(&self) -> &[AcmCodeRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Highest spectral efficiency in the table, `R_{N_max}`.
    pub fn max_rate(&self) -> f64 {
        self.rows.last().map(AcmCodeRow::rate).unwrap_or(0.0)
    }
}

impl Default for AcmCodeTable {
    /// The eight-mode exponential-fit table used throughout the results
    /// (target BER 1e-3).
    fn default() -> AcmCodeTable {
        let spec: [(u32, f64, f64, f64); 8] = [
            (1, 896.0704, 10.7367, 7.1),
            (2, 404.4353, 6.8043, 11.8),
            (3, 996.5492, 8.7345, 14.0),
            (4, 443.1272, 8.2282, 17.0),
            (5, 296.6007, 7.9270, 20.1),
            (6, 327.4874, 8.2036, 23.0),
            (7, 404.2837, 7.8824, 26.2),
            (8, 310.5283, 8.2425, 29.0),
        ];
        let rows = spec
            .iter()
            .map(|&(u, a, b, gamma_t_db)| AcmCodeRow {
                u,
                m_order: 1u32 << (u + 1),
                a,
                b,
                gamma_t_db,
            })
            .collect();
        AcmCodeTable::new(rows, 1e-3).expect("built-in table is valid")
    }
}

// ----- TMOS configuration ------------------------------------------------------

/// Selection/outage thresholds and beam count.
#[derive(Debug, Clone, Copy)]
pub struct TmosConfig {
    /// Selection threshold `γ_T` in dB.
    pub gamma_t_db: f64,
    /// Outage threshold `γ_TH,OUT` in dB (≥ `γ_T`).
    pub gamma_th_out_db: f64,
    /// Total number of beams `H`.
    pub h: u32,
}

impl TmosConfig {
    pub fn new(gamma_t_db: f64, gamma_th_out_db: f64, h: u32) -> Result<TmosConfig> {
        if !gamma_t_db.is_finite() || !gamma_th_out_db.is_finite() {
            return Err(Error::Config("TMOS thresholds must be finite".into()));
        }
        if gamma_th_out_db < gamma_t_db {
            return Err(Error::Config(format!(
                "outage threshold ({gamma_th_out_db} dB) must not sit below the \
                 selection threshold ({gamma_t_db} dB)"
            )));
        }
        if h == 0 {
            return Err(Error::Config("beam count H must be at least 1".into()));
        }
        Ok(TmosConfig { gamma_t_db, gamma_th_out_db, h })
    }

    pub fn gamma_t_lin(&self) -> f64 {
        db_to_lin(self.gamma_t_db)
    }

    pub fn gamma_th_out_lin(&self) -> f64 {
        db_to_lin(self.gamma_th_out_db)
    }
}

impl Default for TmosConfig {
    /// Reference settings: `γ_T = 14 dB`, outage measured at the selection
    /// threshold, `H = 5` beams.
    fn default() -> TmosConfig {
        TmosConfig { gamma_t_db: 14.0, gamma_th_out_db: 14.0, h: 5 }
    }
}

// ----- selection statistics -------------------------------------------------------

/// Survival probability of one beam at the selection threshold,
/// `1 − F(γ_T)`, tagged with the CDF route.
fn truncation_survivor(m: &ChannelModel, c: &TmosConfig) -> Result<Tagged<f64>> {
    let f_t = snr_cdf(m, c.gamma_t_lin())?;
    Ok(Tagged { value: 1.0 - f_t.value, path: f_t.path })
}

/// Density of the selected beam's SNR: `f_γ(γ)/(1 − F(γ_T))` on
/// `[γ_T, γ_max]`, 0 elsewhere.
pub fn tmos_pdf(m: &ChannelModel, c: &TmosConfig, gamma: f64) -> Result<f64> {
    let surv = truncation_survivor(m, c)?.value;
    if surv < DEGENERATE_EPS {
        return Err(Error::DegenerateTruncation(format!(
            "1 − F(γ_T) = {surv:.3e} at γ_T = {} dB; no beam ever qualifies",
            c.gamma_t_db
        )));
    }
    if gamma < c.gamma_t_lin() || gamma > m.gamma_max() {
        return Ok(0.0);
    }
    Ok(snr_pdf(m, gamma)? / surv)
}

/// Probability of no transmission given a beam was selected:
/// `(F(γ_TH,OUT) − F(γ_T))/(1 − F(γ_T))`.
pub fn outage_probability(m: &ChannelModel, c: &TmosConfig) -> Result<Tagged<f64>> {
    let f_t = snr_cdf(m, c.gamma_t_lin())?;
    let surv = 1.0 - f_t.value;
    if surv < DEGENERATE_EPS {
        return Err(Error::DegenerateTruncation(format!(
            "1 − F(γ_T) = {surv:.3e}; outage conditioning impossible"
        )));
    }
    let f_th = snr_cdf(m, c.gamma_th_out_lin())?;
    let value = ((f_th.value - f_t.value).max(0.0) / surv).clamp(0.0, 1.0);
    Ok(Tagged { value, path: f_t.path.worst(f_th.path) })
}

/// Average number of supported beams, `H·(1 − F(γ_T))` ∈ [0, H].
pub fn ansb(m: &ChannelModel, c: &TmosConfig) -> Result<Tagged<f64>> {
    let surv = truncation_survivor(m, c)?;
    Ok(Tagged { value: c.h as f64 * surv.value, path: surv.path })
}

// ----- ACM spectral efficiency ------------------------------------------------------

/// The code regions clipped to the truncated support `[γ_T, γ_max]`:
/// `(row index, lo, hi)` in linear SNR, empty regions skipped.
fn clipped_regions(
    t: &AcmCodeTable,
    c: &TmosConfig,
    gamma_max: f64,
) -> Vec<(usize, f64, f64)> {
    let gamma_t = c.gamma_t_lin();
    let mut out = Vec::with_capacity(t.rows.len());
    for (i, row) in t.rows.iter().enumerate() {
        let lo = row.gamma_t_lin().max(gamma_t);
        let hi = match t.rows.get(i + 1) {
            Some(next) => next.gamma_t_lin().min(gamma_max),
            None => gamma_max,
        };
        if hi > lo {
            out.push((i, lo, hi));
        }
    }
    out
}

/// Per-mode selection probabilities `F_u` (zero for regions clipped away).
///
/// The regions partition `[max(γ_T, γ_{T_1}), γ_max]`, so `Σ_u F_u = 1`
/// whenever `γ_T ≥ γ_{T_1}`; a selection threshold below the first
/// activation threshold leaves the sub-`γ_{T_1}` mass rateless instead.
pub fn region_probabilities(
    m: &ChannelModel,
    c: &TmosConfig,
    t: &AcmCodeTable,
) -> Result<Tagged<Vec<f64>>> {
    let surv = truncation_survivor(m, c)?;
    if surv.value < DEGENERATE_EPS {
        return Err(Error::DegenerateTruncation(format!(
            "1 − F(γ_T) = {:.3e}; no region is ever reached",
            surv.value
        )));
    }
    let mut path = surv.path;
    let mut probs = vec![0.0; t.rows.len()];
    for (i, lo, hi) in clipped_regions(t, c, m.gamma_max()) {
        let f_lo = snr_cdf(m, lo)?;
        let f_hi = snr_cdf(m, hi)?;
        path = path.worst(f_lo.path).worst(f_hi.path);
        probs[i] = ((f_hi.value - f_lo.value).max(0.0) / surv.value).min(1.0);
    }
    Ok(Tagged { value: probs, path })
}

/// Average spectral efficiency of the selected beam, `Σ_u R_u F_u`
/// (bits/s/Hz).
pub fn ase(m: &ChannelModel, c: &TmosConfig, t: &AcmCodeTable) -> Result<Tagged<f64>> {
    let probs = region_probabilities(m, c, t)?;
    let value = t
        .rows
        .iter()
        .zip(&probs.value)
        .map(|(row, &f_u)| row.rate() * f_u)
        .sum();
    Ok(Tagged { value, path: probs.path })
}

/// System-level ASE across all beams: `ansb · ase`. A selection threshold no
/// beam can clear yields 0 rather than an error.
pub fn system_ase(m: &ChannelModel, c: &TmosConfig, t: &AcmCodeTable) -> Result<Tagged<f64>> {
    let surv = truncation_survivor(m, c)?;
    if surv.value < DEGENERATE_EPS {
        return Ok(Tagged { value: 0.0, path: surv.path });
    }
    let n = ansb(m, c)?;
    let e = ase(m, c, t)?;
    Ok(Tagged { value: n.value * e.value, path: n.path.worst(e.path) })
}

// ----- BER ---------------------------------------------------------------------------

/// Exponential BER fit of mode `u` at linear SNR γ: `a_u exp(−b_u γ/M_u)`.
pub fn code_ber(t: &AcmCodeTable, u: u32, gamma: f64) -> Result<f64> {
    if u == 0 || u as usize > t.rows.len() {
        return Err(Error::Domain(format!(
            "mode index u must lie in 1..={}, got {u}",
            t.rows.len()
        )));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("code_ber requires gamma > 0, got {gamma}")));
    }
    let row = &t.rows[u as usize - 1];
    Ok(row.a * (-row.b * gamma / row.m_order as f64).exp())
}

fn neg_pow(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Closed kernel moment `∫_α^β e^{−cy} K(y) dy` for integer shape `ki`,
/// assembled in signed log space. `None` when the double series leaves its
/// trustworthy regime.
fn closed_kernel_moment(
    m: &ChannelModel,
    ki: u32,
    c: f64,
    alpha: f64,
    beta: f64,
) -> Result<Option<LnVal>> {
    let k = ki as f64;
    let g = m.big_g();
    let w = m.big_w();
    if w == 0.0 {
        return Ok(None);
    }
    let tol = m.series.abs_tol;
    let ln_g = if g > 0.0 { g.ln() } else { f64::NEG_INFINITY };
    let mut total = LnVal::ZERO;
    let mut max_ln = f64::NEG_INFINITY;
    let mut converged = false;
    for mm in 0..m.series.max_terms {
        let mf = mm as f64;
        let ln_g_pow = if mm == 0 { 0.0 } else { 2.0 * mf * ln_g };
        let mut block = LnVal::ZERO;
        for n in 0..ki {
            let nf = n as f64;
            let a = 2.0 * mf + nf + 1.0;
            let j = match gamma_exp_moment_ln(a, w / 2.0, c, ki - 1 - n, alpha, beta) {
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
            let term = coef.mul(j);
            max_ln = max_ln.max(term.ln);
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
    if !converged || total.is_zero() {
        return Ok(None);
    }
    if (max_ln - total.ln) / std::f64::consts::LN_10 > MAX_LOST_DIGITS {
        return Ok(None);
    }
    Ok(Some(total))
}

/// Closed route for `∫_lo^hi a_u e^{−b_u γ/M_u} f_γ(γ) dγ`: Maclaurin
/// l-series of the exponential against closed kernel moments. `None` when
/// divergent, ill-conditioned, or the shape is non-integer.
fn region_ber_closed(
    m: &ChannelModel,
    row: &AcmCodeRow,
    lo: f64,
    hi: f64,
) -> Result<Option<f64>> {
    let ki = match m.integer_k() {
        Some(v) => v,
        None => return Ok(None),
    };
    let chi = row.b * m.gamma_max() / row.m_order as f64;
    let alpha = m.y_of_gamma(hi).max(0.0);
    let beta = m.y_of_gamma(lo);
    let tol = m.series.abs_tol;
    let mut sum = LnVal::ZERO;
    let mut max_ln = f64::NEG_INFINITY;
    let mut prev_ln = f64::INFINITY;
    let mut growth_run = 0u32;
    let mut converged = false;
    for l in 0..=MAX_L_TERMS {
        let lf = l as f64;
        let mom = match closed_kernel_moment(m, ki, m.z() + m.r() * lf, alpha, beta)? {
            Some(v) => v,
            None => return Ok(None),
        };
        let term = LnVal::from_parts(lf * chi.ln() - ln_gamma(lf + 1.0), neg_pow(l)).mul(mom);
        if term.ln > prev_ln {
            growth_run += 1;
            if growth_run >= DIVERGENCE_RUN {
                return Ok(None); // asymptotic regime: hand over to quadrature
            }
        } else {
            growth_run = 0;
        }
        prev_ln = term.ln;
        max_ln = max_ln.max(term.ln);
        sum = sum.add(term);
        if l >= 2 && !sum.is_zero() && term.ln <= tol.ln() + sum.ln {
            converged = true;
            break;
        }
    }
    if !converged || sum.is_zero() {
        return Ok(None);
    }
    if (max_ln - sum.ln) / std::f64::consts::LN_10 > MAX_LOST_DIGITS {
        return Ok(None);
    }
    let v = row.a * (m.ln_c() + sum.ln).exp() * sum.sgn;
    if !(v.is_finite() && v >= 0.0) {
        return Ok(None);
    }
    Ok(Some(v))
}

/// Quadrature route for the same region integral:
/// `a_u ∫ exp(ln C − zy − χ e^{−ry} + ln K(y)) dy`, `χ = b_u γ_max/M_u`.
pub(crate) fn region_ber_quad(m: &ChannelModel, row: &AcmCodeRow, lo: f64, hi: f64) -> Result<f64> {
    let chi = row.b * m.gamma_max() / row.m_order as f64;
    let alpha = m.y_of_gamma(hi).max(0.0);
    let beta = m.y_of_gamma(lo);
    let ln_c = m.ln_c();
    let z = m.z();
    let r = m.r();
    let err_cell = std::cell::Cell::new(None);
    let integrand = |y: f64| match kernel(m, y) {
        Ok((kv, _)) if kv > 0.0 => (ln_c - z * y - chi * (-r * y).exp() + kv.ln()).exp(),
        Ok(_) => 0.0,
        Err(e) => {
            err_cell.set(Some(e));
            0.0
        }
    };
    let result = quad::integrate(integrand, alpha, beta, 1e-300, 1e-10)?;
    if let Some(e) = err_cell.take() {
        return Err(e);
    }
    Ok(row.a * result.value)
}

/// Average BER of the selected beam under ACM:
/// `Σ_u R_u·BER̄_u / Σ_u R_u·F_u` (the truncation denominators cancel).
pub fn avg_ber(m: &ChannelModel, c: &TmosConfig, t: &AcmCodeTable) -> Result<Tagged<f64>> {
    let surv = truncation_survivor(m, c)?;
    if surv.value < DEGENERATE_EPS {
        return Err(Error::DegenerateTruncation(format!(
            "1 − F(γ_T) = {:.3e}; the selected-beam law is undefined",
            surv.value
        )));
    }
    let mut path = surv.path;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, lo, hi) in clipped_regions(t, c, m.gamma_max()) {
        let row = &t.rows[i];
        let f_lo = snr_cdf(m, lo)?;
        let f_hi = snr_cdf(m, hi)?;
        path = path.worst(f_lo.path).worst(f_hi.path);
        den += row.rate() * (f_hi.value - f_lo.value).max(0.0);
        let integral = match region_ber_closed(m, row, lo, hi)? {
            Some(v) => v,
            None => {
                path = EvalPath::Quadrature;
                region_ber_quad(m, row, lo, hi)?
            }
        };
        num += row.rate() * integral;
    }
    if den <= 0.0 {
        return Err(Error::Domain(
            "no probability mass falls in any ACM region; average BER undefined".into(),
        ));
    }
    Ok(Tagged { value: num / den, path })
}

// ----- fog-only BER ----------------------------------------------------------------

/// Closed route for the fog-only region integral: the Maclaurin l-series
/// collapses onto plain incomplete-gamma differences with the `(z + r·l)`
/// exponent, valid for any shape k.
fn region_ber_fog_closed(
    m: &ChannelModel,
    row: &AcmCodeRow,
    lo: f64,
    hi: f64,
) -> Result<Option<f64>> {
    let gmax = gamma_max_fog_only(m);
    let chi = row.b * gmax / row.m_order as f64;
    let z = m.z();
    let r = m.r();
    let k = m.fog.k;
    let t_hi = ((gmax.ln() - hi.ln()) / r).max(0.0); // smaller T
    let t_lo = (gmax.ln() - lo.ln()) / r; // larger T
    let tol = m.series.abs_tol;
    let mut sum = LnVal::ZERO;
    let mut max_ln = f64::NEG_INFINITY;
    let mut prev_ln = f64::INFINITY;
    let mut growth_run = 0u32;
    let mut converged = false;
    for l in 0..=MAX_L_TERMS {
        let lf = l as f64;
        let c_exp = z + r * lf;
        let dp = crate::specfun::reg_lower_gamma_diff(k, c_exp * t_hi, c_exp * t_lo);
        if dp <= 0.0 {
            // A zero slice at l = 0 means a zero-width region; later zeros
            // mean every remaining term underflows — the series is done.
            if sum.is_zero() {
                return Ok(Some(0.0));
            }
            converged = true;
            break;
        }
        let term = LnVal::from_parts(
            lf * chi.ln() - ln_gamma(lf + 1.0) + k * (z.ln() - c_exp.ln()) + dp.ln(),
            neg_pow(l),
        );
        if term.ln > prev_ln {
            growth_run += 1;
            if growth_run >= DIVERGENCE_RUN {
                return Ok(None);
            }
        } else {
            growth_run = 0;
        }
        prev_ln = term.ln;
        max_ln = max_ln.max(term.ln);
        sum = sum.add(term);
        if l >= 2 && !sum.is_zero() && term.ln <= tol.ln() + sum.ln {
            converged = true;
            break;
        }
    }
    if !converged || sum.is_zero() {
        return Ok(None);
    }
    if (max_ln - sum.ln) / std::f64::consts::LN_10 > MAX_LOST_DIGITS {
        return Ok(None);
    }
    let v = row.a * sum.ln.exp() * sum.sgn;
    if !(v.is_finite() && v >= 0.0) {
        return Ok(None);
    }
    Ok(Some(v))
}

/// Quadrature route for the fog-only region integral, in `T`-space.
pub(crate) fn region_ber_fog_quad(
    m: &ChannelModel,
    row: &AcmCodeRow,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let gmax = gamma_max_fog_only(m);
    let chi = row.b * gmax / row.m_order as f64;
    let z = m.z();
    let r = m.r();
    let k = m.fog.k;
    let t_hi = ((gmax.ln() - hi.ln()) / r).max(0.0);
    let t_lo = (gmax.ln() - lo.ln()) / r;
    let ln_pref = k * z.ln() - ln_gamma(k);
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        (ln_pref + (k - 1.0) * t.ln() - z * t - chi * (-r * t).exp()).exp()
    };
    let result = quad::integrate(integrand, t_hi, t_lo, 1e-300, 1e-10)?;
    Ok(row.a * result.value)
}

/// Average BER in the fog-only (ξ² ≫ 1) limit, same estimator shape as
/// [`avg_ber`] with the fog-only law throughout.
pub fn avg_ber_fog_only(
    m: &ChannelModel,
    c: &TmosConfig,
    t: &AcmCodeTable,
) -> Result<Tagged<f64>> {
    let f_t = snr_cdf_fog_only(m, c.gamma_t_lin())?;
    let surv = 1.0 - f_t;
    if surv < DEGENERATE_EPS {
        return Err(Error::DegenerateTruncation(format!(
            "fog-only 1 − F(γ_T) = {surv:.3e}; the selected-beam law is undefined"
        )));
    }
    let mut path = EvalPath::Closed;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, lo, hi) in clipped_regions(t, c, gamma_max_fog_only(m)) {
        let row = &t.rows[i];
        den += row.rate()
            * (snr_cdf_fog_only(m, hi)? - snr_cdf_fog_only(m, lo)?).max(0.0);
        let integral = match region_ber_fog_closed(m, row, lo, hi)? {
            Some(v) => v,
            None => {
                path = EvalPath::Quadrature;
                region_ber_fog_quad(m, row, lo, hi)?
            }
        };
        num += row.rate() * integral;
    }
    if den <= 0.0 {
        return Err(Error::Domain(
            "no fog-only probability mass falls in any ACM region".into(),
        ));
    }
    Ok(Tagged { value: num / den, path })
}

// ----- tests --------------------------------------------------------------------------
