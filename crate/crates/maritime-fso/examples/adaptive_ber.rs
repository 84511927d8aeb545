//! Average coded BER of the selected beam under adaptive coding/modulation.
//!
//! The ACM controller always picks the highest-order region whose threshold
//! the selected beam clears, and each region's code keeps the instantaneous
//! BER `a_u·exp(−b_u·γ/M_u)` under the 1e-3 target inside its region — so
//! the rate-weighted average BER stays below target at every average SNR,
//! for the weak and severe cases alike. Monte-Carlo columns re-estimate the
//! ratio `Σ R_u·BER_u / Σ R_u·F_u` from raw trials.
//!
//! Run with: `cargo run --release --example adaptive_ber`

use maritime_fso::composite::{db_to_lin, ChannelModel, Detection};
use maritime_fso::fog::{fog_preset, FogPreset};
use maritime_fso::montecarlo::{mc_ber, McConfig, SamplerKind};
use maritime_fso::pointing::{derive_pointing, PointingGeometry};
use maritime_fso::tmos_acm::{avg_ber, code_ber, AcmCodeTable, TmosConfig};
use maritime_fso::Result;

fn main() -> Result<()> {
    let tmos = TmosConfig::new(14.0, 14.0, 5)?;
    let table = AcmCodeTable::default();
    let mc = McConfig::new(60_000, 512, 1, SamplerKind::Hoyt)?;

    println!("per-code BER at its own region threshold (worst point in region)");
    println!("{:>4} {:>6} {:>10} {:>14}", "u", "M", "γ_T (dB)", "BER at γ_T");
    for row in table.rows() {
        println!(
            "{:>4} {:>6} {:>10.1} {:>14.4e}",
            row.u,
            row.m_order,
            row.gamma_t_db,
            code_ber(&table, row.u, row.gamma_t_lin())?
        );
    }
    println!();

    for (name, preset, sigma) in
        [("weak", FogPreset::Light, 0.5_f64), ("severe", FogPreset::Dense, 2.5_f64)]
    {
        let fog = fog_preset(preset, 0.5)?;
        let pt = derive_pointing(&PointingGeometry::reference(sigma))?;
        for det in [Detection::Hd, Detection::ImDd] {
            println!("{name} impact, {}, γ_T = 14 dB — target 1e-3", det.label());
            println!(
                "{:>8} {:>14} {:>14} {:>10} {:>8}",
                "μ (dB)", "avg BER", "avg BER (MC)", "MC s.e.", "≤ target"
            );
            for mu_db in (15..=45).step_by(5) {
                let m = ChannelModel::new(fog, pt, det, db_to_lin(mu_db as f64))?;
                let a = avg_ber(&m, &tmos, &table)?;
                // Deep outage leaves no conditional trials to average over;
                // the simulator reports that honestly, print it as a dash.
                let (mc_val, mc_se) = match mc_ber(&m, &tmos, &table, &mc) {
                    Ok(e) => (format!("{:>14.4e}", e.value), format!("{:>10.2e}", e.std_error)),
                    Err(_) => (format!("{:>14}", "–"), format!("{:>10}", "–")),
                };
                println!(
                    "{:>8} {:>14.4e} {} {} {:>8}",
                    mu_db,
                    a.value,
                    mc_val,
                    mc_se,
                    if a.value <= 1e-3 { "yes" } else { "NO" }
                );
            }
            println!();
        }
    }
    Ok(())
}
