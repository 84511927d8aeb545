//! Scenario files and the verb runners behind the CLI.
//!
//! A scenario is a TOML file with one section per module; physical quantities
//! carry unit suffixes in the key names (`_db`, `_m`, `_km`, `_rad`) so dB
//! thresholds can never be mistaken for linear ones:
//!
//! ```toml
//! [fog]
//! preset = "moderate"     # or explicit k = 5.49, beta = 12.06
//! l_km = 0.1
//!
//! [pointing]
//! sigma = 1.0             # l_m, w_l_m, r0_m, alpha_d_rad, beta_d_rad default
//!                         # to the reference link
//! [channel]
//! detection = "hd"        # or "imdd"
//! mu_db_start = 10.0
//! mu_db_stop = 45.0
//! mu_db_step = 5.0
//!
//! [tmos]
//! gamma_t_db = 14.0
//! gamma_th_out_db = 17.0  # defaults to gamma_t_db
//! h = 5
//!
//! [mc]
//! n_samples = 200000
//! seed = 12345
//! workers = 0             # 0 = all cores
//! sampler = "hoyt"        # or "geometric"
//! ```
//!
//! Every section except `[fog]` is optional. An `[acm]` section with
//! `target_ber` and `rows = [{ u, m, a, b, gamma_t_db }, …]` overrides the
//! built-in code table, and `[output]` presets `path`/`format`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::composite::{
    self, db_to_lin, ChannelModel, Detection, EvalPath,
};
use crate::error::{Error, Result};
use crate::fog::{fog_preset, FogParams, FogPreset};
use crate::montecarlo::{
    mc_ansb, mc_ber, mc_irradiance_hist, mc_mean_irradiance, mc_outage, mc_system_ase, McConfig,
    SamplerKind,
};
use crate::pointing::{derive_pointing, DerivedPointing, PointingGeometry};
use crate::quad;
use crate::report::{Cell, Format, Table};
use crate::tmos_acm::{self, AcmCodeRow, AcmCodeTable, TmosConfig};

// ----- raw TOML shapes ---------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioToml {
    fog: FogToml,
    #[serde(default)]
    pointing: PointingToml,
    #[serde(default)]
    channel: ChannelToml,
    #[serde(default)]
    tmos: TmosToml,
    acm: Option<AcmToml>,
    #[serde(default)]
    mc: McToml,
    #[serde(default)]
    output: OutputToml,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FogToml {
    preset: Option<String>,
    k: Option<f64>,
    beta: Option<f64>,
    #[serde(default = "default_l_km")]
    l_km: f64,
}

fn default_l_km() -> f64 {
    0.5
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PointingToml {
    l_m: f64,
    w_l_m: f64,
    r0_m: f64,
    alpha_d_rad: f64,
    beta_d_rad: f64,
    sigma: f64,
}

impl Default for PointingToml {
    fn default() -> Self {
        let r = PointingGeometry::reference(1.0);
        PointingToml {
            l_m: r.l,
            w_l_m: r.w_l,
            r0_m: r.r0,
            alpha_d_rad: r.alpha_d,
            beta_d_rad: r.beta_d,
            sigma: 1.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ChannelToml {
    detection: String,
    mu_db_start: f64,
    mu_db_stop: f64,
    mu_db_step: f64,
}

impl Default for ChannelToml {
    fn default() -> Self {
        ChannelToml {
            detection: "hd".into(),
            mu_db_start: 10.0,
            mu_db_stop: 45.0,
            mu_db_step: 5.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct TmosToml {
    gamma_t_db: f64,
    gamma_th_out_db: Option<f64>,
    h: u32,
}

impl Default for TmosToml {
    fn default() -> Self {
        TmosToml { gamma_t_db: 14.0, gamma_th_out_db: None, h: 5 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AcmToml {
    #[serde(default = "default_target_ber")]
    target_ber: f64,
    rows: Vec<AcmRowToml>,
}

fn default_target_ber() -> f64 {
    1e-3
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AcmRowToml {
    u: u32,
    m: u32,
    a: f64,
    b: f64,
    gamma_t_db: f64,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct McToml {
    n_samples: usize,
    seed: u64,
    workers: usize,
    sampler: String,
}

impl Default for McToml {
    fn default() -> Self {
        McToml { n_samples: 1_000_000, seed: 12_345, workers: 0, sampler: "hoyt".into() }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OutputToml {
    path: Option<String>,
    format: Option<String>,
}

// ----- built scenario ----------------------------------------------------------

/// A fully validated scenario: every derived object the verbs need.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub fog: FogParams,
    pub geometry: PointingGeometry,
    pub pointing: DerivedPointing,
    pub detection: Detection,
    /// Nonempty μ grid in dB.
    pub mu_grid_db: Vec<f64>,
    pub tmos: TmosConfig,
    pub table: AcmCodeTable,
    pub mc: McConfig,
    pub out_path: Option<PathBuf>,
    pub format: Format,
}

impl Scenario {
    /// Parse and validate a scenario from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let raw: ScenarioToml = toml::from_str(text)
            .map_err(|e| Error::Config(format!("scenario parse error: {e}")))?;
        Scenario::build(raw)
    }

    /// Read, parse, and validate a scenario file.
    pub fn from_path(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
        Scenario::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn build(raw: ScenarioToml) -> Result<Scenario> {
        let fog = match (&raw.fog.preset, raw.fog.k, raw.fog.beta) {
            (Some(name), None, None) => fog_preset(FogPreset::parse(name)?, raw.fog.l_km)?,
            (None, Some(k), Some(beta)) => FogParams::new(k, beta, raw.fog.l_km)?,
            (Some(_), _, _) => {
                return Err(Error::Config(
                    "[fog] takes either a preset or explicit (k, beta), not both".into(),
                ))
            }
            _ => {
                return Err(Error::Config(
                    "[fog] needs a preset name or both k and beta".into(),
                ))
            }
        };

        let p = &raw.pointing;
        if !(p.sigma > 0.0) {
            return Err(Error::Config("[pointing] sigma must be positive".into()));
        }
        let geometry = PointingGeometry {
            l: p.l_m,
            w_l: p.w_l_m,
            r0: p.r0_m,
            alpha_d: p.alpha_d_rad,
            beta_d: p.beta_d_rad,
            sigma: p.sigma,
        };
        let pointing = derive_pointing(&geometry)?;

        let detection = Detection::parse(&raw.channel.detection)?;
        let mu_grid_db = mu_grid(
            raw.channel.mu_db_start,
            raw.channel.mu_db_stop,
            raw.channel.mu_db_step,
        )?;

        let tmos = TmosConfig::new(
            raw.tmos.gamma_t_db,
            raw.tmos.gamma_th_out_db.unwrap_or(raw.tmos.gamma_t_db),
            raw.tmos.h,
        )?;

        let table = match raw.acm {
            Some(a) => {
                let rows: Vec<AcmCodeRow> = a
                    .rows
                    .iter()
                    .map(|r| AcmCodeRow {
                        u: r.u,
                        m_order: r.m,
                        a: r.a,
                        b: r.b,
                        gamma_t_db: r.gamma_t_db,
                    })
                    .collect();
                AcmCodeTable::new(rows, a.target_ber)?
            }
            None => AcmCodeTable::default(),
        };

        let workers = if raw.mc.workers == 0 {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        } else {
            raw.mc.workers
        };
        let sampler = match raw.mc.sampler.to_ascii_lowercase().as_str() {
            "hoyt" => SamplerKind::Hoyt,
            "geometric" => SamplerKind::Geometric(geometry),
            other => {
                return Err(Error::Config(format!(
                    "unknown sampler {other:?}; expected \"hoyt\" or \"geometric\""
                )))
            }
        };
        let mc = McConfig::new(raw.mc.n_samples, raw.mc.seed, workers, sampler)?;

        let format = match &raw.output.format {
            Some(f) => Format::parse(f)?,
            None => Format::Csv,
        };

        Ok(Scenario {
            fog,
            geometry,
            pointing,
            detection,
            mu_grid_db,
            tmos,
            table,
            mc,
            out_path: raw.output.path.as_ref().map(PathBuf::from),
            format,
        })
    }

    /// The channel model at one grid point.
    pub fn model_at(&self, mu_db: f64) -> Result<ChannelModel> {
        ChannelModel::new(self.fog, self.pointing, self.detection, db_to_lin(mu_db))
    }
}

fn mu_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Error::Config("μ grid bounds must be finite".into()));
    }
    if stop < start {
        return Err(Error::Config(format!(
            "μ grid is empty: mu_db_stop {stop} < mu_db_start {start}"
        )));
    }
    if step <= 0.0 {
        return Err(Error::Config(format!("mu_db_step must be positive, got {step}")));
    }
    let mut grid = Vec::new();
    let mut i = 0u32;
    loop {
        let v = start + f64::from(i) * step;
        if v > stop + 1e-9 {
            break;
        }
        grid.push(v);
        i += 1;
    }
    Ok(grid)
}

// ----- verb runners ------------------------------------------------------------

/// `pdf`: 200-bin comparison of the analytic composite irradiance PDF against
/// an MC histogram over `(0, A₀]`. The irradiance law does not depend on μ.
pub fn run_pdf(sc: &Scenario) -> Result<Table> {
    let m = sc.model_at(sc.mu_grid_db[0])?;
    let bins = 200;
    let hist = mc_irradiance_hist(&m, &sc.mc, bins)?;
    let mut t = Table::new(&["I", "analytic_pdf", "mc_density", "abs_diff"]);
    for (x, density) in hist {
        let pdf = composite::composite_irradiance_pdf(&m, x)?;
        t.push_row(vec![x.into(), pdf.into(), density.into(), (pdf - density).abs().into()]);
    }
    Ok(t)
}

fn sweep_columns() -> [&'static str; 5] {
    ["mu_db", "analytic", "mc", "mc_se", "path_tag"]
}

fn sweep_row(mu_db: f64, analytic: f64, path: EvalPath, mc_v: f64, mc_se: f64) -> Vec<Cell> {
    vec![mu_db.into(), analytic.into(), mc_v.into(), mc_se.into(), path.label().into()]
}

/// `outage`: per grid μ, analytic outage probability vs the MC trial
/// estimate.
pub fn run_outage(sc: &Scenario) -> Result<Table> {
    let mut t = Table::new(&sweep_columns());
    for &mu_db in &sc.mu_grid_db {
        let m = sc.model_at(mu_db)?;
        let analytic = tmos_acm::outage_probability(&m, &sc.tmos)?;
        let mc = mc_outage(&m, &sc.tmos, &sc.mc)?;
        t.push_row(sweep_row(mu_db, analytic.value, analytic.path, mc.value, mc.std_error));
    }
    Ok(t)
}

/// `ansb`: per grid μ, analytic average number of selected beams vs MC.
pub fn run_ansb(sc: &Scenario) -> Result<Table> {
    let mut t = Table::new(&sweep_columns());
    for &mu_db in &sc.mu_grid_db {
        let m = sc.model_at(mu_db)?;
        let analytic = tmos_acm::ansb(&m, &sc.tmos)?;
        let mc = mc_ansb(&m, &sc.tmos, &sc.table, &sc.mc)?;
        t.push_row(sweep_row(mu_db, analytic.value, analytic.path, mc.value, mc.std_error));
    }
    Ok(t)
}

/// `ase`: per grid μ, analytic system spectral efficiency (ANSB × per-beam
/// ASE) vs MC.
pub fn run_ase(sc: &Scenario) -> Result<Table> {
    let mut t = Table::new(&sweep_columns());
    for &mu_db in &sc.mu_grid_db {
        let m = sc.model_at(mu_db)?;
        let analytic = tmos_acm::system_ase(&m, &sc.tmos, &sc.table)?;
        let mc = mc_system_ase(&m, &sc.tmos, &sc.table, &sc.mc)?;
        t.push_row(sweep_row(mu_db, analytic.value, analytic.path, mc.value, mc.std_error));
    }
    Ok(t)
}

/// `ber`: per grid μ, analytic rate-weighted average BER vs MC.
pub fn run_ber(sc: &Scenario) -> Result<Table> {
    let mut t = Table::new(&sweep_columns());
    for &mu_db in &sc.mu_grid_db {
        let m = sc.model_at(mu_db)?;
        let analytic = tmos_acm::avg_ber(&m, &sc.tmos, &sc.table)?;
        let mc = mc_ber(&m, &sc.tmos, &sc.table, &sc.mc)?;
        t.push_row(sweep_row(mu_db, analytic.value, analytic.path, mc.value, mc.std_error));
    }
    Ok(t)
}

// ----- validate ------------------------------------------------------------------

struct Checks {
    table: Table,
    all_pass: bool,
}

impl Checks {
    fn new() -> Checks {
        Checks { table: Table::new(&["check", "tolerance", "measured", "verdict"]), all_pass: true }
    }

    fn push(&mut self, name: &str, tol: f64, measured: f64, pass: bool) {
        self.all_pass &= pass;
        self.table.push_row(vec![
            name.into(),
            tol.into(),
            measured.into(),
            if pass { "pass" } else { "fail" }.into(),
        ]);
    }
}

/// `validate`: run the scenario-level invariant and oracle suite and report
/// one row per check. Returns the report table and whether every check
/// passed; the CLI maps a failed run to exit code 3.
pub fn run_validate(sc: &Scenario) -> Result<(Table, bool)> {
    let mut checks = Checks::new();
    let mid = sc.mu_grid_db[sc.mu_grid_db.len() / 2];
    let m = sc.model_at(mid)?;

    // 1. Geometry anchors (σ = 0.5 / 2.5 reference links).
    let weak_xi = derive_pointing(&PointingGeometry::reference(0.5))?.xi;
    let severe_xi = derive_pointing(&PointingGeometry::reference(2.5))?.xi;
    checks.push(
        "xi_anchor_sigma_0.5",
        1e-3,
        (weak_xi / 420.7725 - 1.0).abs(),
        (weak_xi / 420.7725 - 1.0).abs() < 1e-3,
    );
    checks.push(
        "xi_anchor_sigma_2.5",
        1e-3,
        (severe_xi / 0.6732 - 1.0).abs(),
        (severe_xi / 0.6732 - 1.0).abs() < 1e-3,
    );

    // 2. Mean-irradiance identity: E[I] = E[Ia]·E[Ip] against the sampler.
    let mean = mc_mean_irradiance(&m, &sc.mc)?;
    let gap_se = (mean.value - m.mean_irradiance()).abs() / mean.std_error.max(1e-300);
    checks.push("mean_irradiance_identity_4se", 4.0, gap_se, gap_se <= 4.0);

    // 3. PDF–CDF consistency: ∫ f_γ over a mid band equals ΔF (quadrature in
    // ln γ so steep supports stay resolvable).
    let gmax = m.gamma_max();
    let (ga, gb) = (1e-3 * gmax, 0.5 * gmax);
    let mass = quad::integrate(
        |u| {
            let g = u.exp();
            composite::snr_pdf(&m, g).map(|p| p * g).unwrap_or(f64::NAN)
        },
        ga.ln(),
        gb.ln(),
        1e-12,
        1e-9,
    )?
    .value;
    let df = composite::snr_cdf(&m, gb)?.value - composite::snr_cdf(&m, ga)?.value;
    checks.push("pdf_cdf_consistency", 1e-6, (mass - df).abs(), (mass - df).abs() < 1e-6);

    // 4. ACM partition: region masses plus any sub-first-region mass total 1.
    let probs = tmos_acm::region_probabilities(&m, &sc.tmos, &sc.table)?;
    let total: f64 = probs.value.iter().sum::<f64>() + sub_first_region_mass(&m, &sc.tmos)?;
    checks.push("acm_partition_totals_one", 1e-6, (total - 1.0).abs(), (total - 1.0).abs() < 1e-6);

    // 5–7. MC vs analytic at the grid midpoint, in standard-error units. The
    // outage check widens γ_TH_OUT by 3 dB when the scenario's window is
    // empty, so the comparison is never vacuous.
    let out_cfg = if sc.tmos.gamma_th_out_db > sc.tmos.gamma_t_db {
        sc.tmos
    } else {
        TmosConfig::new(sc.tmos.gamma_t_db, sc.tmos.gamma_t_db + 3.0, sc.tmos.h)?
    };
    let an = tmos_acm::outage_probability(&m, &out_cfg)?.value;
    let mc = mc_outage(&m, &out_cfg, &sc.mc)?;
    let gap_se = se_units(an, &mc);
    checks.push("mc_outage_3se", 3.0, gap_se, gap_se <= 3.0);

    let an = tmos_acm::system_ase(&m, &sc.tmos, &sc.table)?.value;
    let mc = mc_system_ase(&m, &sc.tmos, &sc.table, &sc.mc)?;
    let gap_se = se_units(an, &mc);
    checks.push("mc_system_ase_3se", 3.0, gap_se, gap_se <= 3.0);

    let an = tmos_acm::avg_ber(&m, &sc.tmos, &sc.table)?.value;
    let mc = mc_ber(&m, &sc.tmos, &sc.table, &sc.mc)?;
    let gap_se = se_units(an, &mc);
    checks.push("mc_avg_ber_3se", 3.0, gap_se, gap_se <= 3.0);

    // 8. The ACM design target: analytic BER at or below 1.1× target across
    // the whole grid.
    let mut worst = 0.0f64;
    for &mu_db in &sc.mu_grid_db {
        let mm = sc.model_at(mu_db)?;
        worst = worst.max(tmos_acm::avg_ber(&mm, &sc.tmos, &sc.table)?.value);
    }
    let rel = worst / sc.table.target_ber;
    checks.push("ber_within_relaxed_target", 1.1, rel, rel <= 1.1);

    // 9. Series-truncation stability: doubling the term budget must not move
    // the outage by more than 10× the series tolerance.
    let mut m2 = m;
    m2.series.max_terms *= 2;
    let base = tmos_acm::outage_probability(&m, &sc.tmos)?.value;
    let doubled = tmos_acm::outage_probability(&m2, &sc.tmos)?.value;
    let tol = 10.0 * m.series.abs_tol;
    checks.push("series_doubling_stability", tol, (base - doubled).abs(), (base - doubled).abs() <= tol);

    // 10. Determinism: identical config and seed reproduce identical estimates.
    let again = mc_outage(&m, &out_cfg, &sc.mc)?;
    let mc_ref = mc_outage(&m, &out_cfg, &sc.mc)?;
    let identical = again == mc_ref;
    checks.push("mc_determinism", 0.0, if identical { 0.0 } else { 1.0 }, identical);

    Ok((checks.table, checks.all_pass))
}

/// Truncated-law mass below the first ACM region, `(F(min(γ_T1, γ_max)) −
/// F(γ_T))₊ / (1 − F(γ_T))`, zero when γ_T already clears the first switching
/// threshold.
fn sub_first_region_mass(m: &ChannelModel, c: &TmosConfig) -> Result<f64> {
    let t1 = AcmCodeTable::default();
    let first_db = t1.rows()[0].gamma_t_db;
    if c.gamma_t_db >= first_db {
        return Ok(0.0);
    }
    let gmax = m.gamma_max();
    let lo = db_to_lin(c.gamma_t_db).min(gmax);
    let hi = db_to_lin(first_db).min(gmax);
    let f_lo = composite::snr_cdf(m, lo)?.value;
    let f_hi = composite::snr_cdf(m, hi)?.value;
    let surv = 1.0 - f_lo;
    if surv <= 1e-12 {
        return Err(Error::DegenerateTruncation(
            "no mass above the selection threshold".into(),
        ));
    }
    Ok(((f_hi - f_lo).max(0.0)) / surv)
}

fn se_units(analytic: f64, mc: &crate::montecarlo::McEstimate) -> f64 {
    let gap = (mc.value - analytic).abs();
    if gap <= 1e-9 {
        0.0
    } else {
        gap / mc.std_error.max(1e-300)
    }
}

// ----- tests ----------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[fog]\npreset = \"moderate\"\nl_km = 0.1\n";

    fn fast(extra: &str) -> String {
        format!(
            "{MINIMAL}\n[channel]\nmu_db_start = 25.0\nmu_db_stop = 35.0\nmu_db_step = 5.0\n\n\
             [mc]\nn_samples = 2000\nseed = 7\nworkers = 2\n{extra}"
        )
    }

    #[test]
    fn minimal_scenario_gets_defaults() {
        let sc = Scenario::from_toml_str(MINIMAL).unwrap();
        assert_eq!(sc.geometry.l, 500.0);
        assert_eq!(sc.geometry.sigma, 1.0);
        assert_eq!(sc.detection, Detection::Hd);
        assert_eq!(sc.mu_grid_db, vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0]);
        assert_eq!(sc.tmos.gamma_t_db, 14.0);
        assert_eq!(sc.tmos.gamma_th_out_db, 14.0);
        assert_eq!(sc.tmos.h, 5);
        assert_eq!(sc.table.len(), 8);
        assert_eq!(sc.mc.n_samples, 1_000_000);
        assert_eq!(sc.mc.seed, 12_345);
        assert!(sc.mc.workers >= 1, "workers=0 must resolve to a live pool");
        assert_eq!(sc.mc.sampler, SamplerKind::Hoyt);
        assert!(sc.out_path.is_none());
        assert_eq!(sc.format, Format::Csv);
    }

    #[test]
    fn full_scenario_round_trip() {
        let text = r#"
            [fog]
            k = 6.0
            beta = 23.0
            l_km = 0.5

            [pointing]
            l_m = 400.0
            w_l_m = 0.25
            r0_m = 0.08
            alpha_d_rad = 0.4
            beta_d_rad = 1.9
            sigma = 1.5

            [channel]
            detection = "imdd"
            mu_db_start = 20.0
            mu_db_stop = 30.0
            mu_db_step = 10.0

            [tmos]
            gamma_t_db = 7.1
            gamma_th_out_db = 11.8
            h = 4

            [acm]
            target_ber = 1e-4
            rows = [
                { u = 1, m = 4, a = 100.0, b = 5.0, gamma_t_db = 5.0 },
                { u = 2, m = 8, a = 90.0, b = 4.0, gamma_t_db = 9.0 },
            ]

            [mc]
            n_samples = 5000
            seed = 99
            workers = 3
            sampler = "geometric"

            [output]
            path = "result.csv"
            format = "json"
        "#;
        let sc = Scenario::from_toml_str(text).unwrap();
        assert_eq!(sc.fog.k, 6.0);
        assert_eq!(sc.detection, Detection::ImDd);
        assert_eq!(sc.mu_grid_db, vec![20.0, 30.0]);
        assert_eq!(sc.tmos.gamma_th_out_db, 11.8);
        assert_eq!(sc.table.len(), 2);
        assert_eq!(sc.table.target_ber, 1e-4);
        assert_eq!(sc.mc.workers, 3);
        assert!(matches!(sc.mc.sampler, SamplerKind::Geometric(g) if g.l == 400.0));
        assert_eq!(sc.out_path.as_deref(), Some(Path::new("result.csv")));
        assert_eq!(sc.format, Format::Json);
    }

    #[test]
    fn fog_preset_and_explicit_are_exclusive() {
        let both = "[fog]\npreset = \"light\"\nk = 2.0\nbeta = 13.0\n";
        assert!(matches!(Scenario::from_toml_str(both), Err(Error::Config(_))));
        let neither = "[fog]\nl_km = 0.5\n";
        assert!(matches!(Scenario::from_toml_str(neither), Err(Error::Config(_))));
        let unknown = "[fog]\npreset = \"drizzle\"\n";
        assert!(Scenario::from_toml_str(unknown).is_err());
    }

    #[test]
    fn parse_errors_carry_line_diagnostics() {
        let bad = "[fog\npreset = \"light\"\n";
        let err = Scenario::from_toml_str(bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "diagnostic lacks a line reference: {msg}");
        // Unknown keys are rejected, naming the offender.
        let typo = "[fog]\npreset = \"light\"\nl_mk = 0.5\n";
        let err = Scenario::from_toml_str(typo).unwrap_err();
        assert!(err.to_string().contains("l_mk"), "{err}");
    }

    #[test]
    fn grid_validation() {
        let empty = format!("{MINIMAL}[channel]\nmu_db_start = 30.0\nmu_db_stop = 20.0\n");
        assert!(matches!(Scenario::from_toml_str(&empty), Err(Error::Config(_))));
        let bad_step = format!("{MINIMAL}[channel]\nmu_db_step = 0.0\n");
        assert!(matches!(Scenario::from_toml_str(&bad_step), Err(Error::Config(_))));
        let single =
            format!("{MINIMAL}[channel]\nmu_db_start = 30.0\nmu_db_stop = 30.0\n");
        assert_eq!(Scenario::from_toml_str(&single).unwrap().mu_grid_db, vec![30.0]);
    }

    #[test]
    fn pdf_verb_shape_and_determinism() {
        let sc = Scenario::from_toml_str(&fast("")).unwrap();
        let t = run_pdf(&sc).unwrap();
        assert_eq!(t.len(), 200);
        assert_eq!(t.columns(), ["I", "analytic_pdf", "mc_density", "abs_diff"]);
        let again = run_pdf(&sc).unwrap();
        assert_eq!(t.to_csv(), again.to_csv(), "pdf table must be reproducible");
    }

    #[test]
    fn sweep_verbs_emit_one_row_per_grid_point() {
        let sc = Scenario::from_toml_str(&fast("")).unwrap();
        for run in [run_outage, run_ansb, run_ase, run_ber] {
            let t = run(&sc).unwrap();
            assert_eq!(t.len(), sc.mu_grid_db.len());
            assert_eq!(t.columns(), ["mu_db", "analytic", "mc", "mc_se", "path_tag"]);
            for row in t.rows() {
                match &row[4] {
                    Cell::Text(tag) => {
                        assert!(tag == "closed" || tag == "quadrature", "bad tag {tag}")
                    }
                    other => panic!("path_tag must be text, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn validate_passes_on_a_healthy_scenario() {
        let sc = Scenario::from_toml_str(&fast("")).unwrap();
        let (table, all_pass) = run_validate(&sc).unwrap();
        assert!(table.len() >= 9);
        assert_eq!(table.columns(), ["check", "tolerance", "measured", "verdict"]);
        assert!(all_pass, "healthy scenario failed validation:\n{}", table.to_csv());
    }
}
