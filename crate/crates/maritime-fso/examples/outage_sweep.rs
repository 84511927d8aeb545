//! Outage probability of the threshold-based multi-beam scheme.
//!
//! Sweeps the average SNR for the weak (light fog, σ = 0.5) and severe
//! (dense fog, σ = 2.5) impact cases under both detection techniques, with
//! selection threshold γ_T = 7.1 dB and outage threshold γ_TH = 11.8 dB,
//! and cross-checks each analytic point against Monte-Carlo trials.
//!
//! Run with: `cargo run --release --example outage_sweep`

use maritime_fso::composite::{db_to_lin, ChannelModel, Detection};
use maritime_fso::fog::{fog_preset, FogPreset};
use maritime_fso::montecarlo::{mc_outage, McConfig, SamplerKind};
use maritime_fso::pointing::{derive_pointing, PointingGeometry};
use maritime_fso::tmos_acm::{outage_probability, TmosConfig};
use maritime_fso::Result;

fn main() -> Result<()> {
    let tmos = TmosConfig::new(7.1, 11.8, 5)?;
    let mc = McConfig::new(100_000, 2024, 1, SamplerKind::Hoyt)?;
    let cases = [
        ("weak", FogPreset::Light, 0.5_f64),
        ("severe", FogPreset::Dense, 2.5_f64),
    ];

    println!("outage of the selected beam, γ_T = 7.1 dB, γ_TH = 11.8 dB, H = 5");
    for (name, preset, sigma) in cases {
        let fog = fog_preset(preset, 0.5)?;
        let pt = derive_pointing(&PointingGeometry::reference(sigma))?;
        for det in [Detection::Hd, Detection::ImDd] {
            println!();
            println!("{name} impact, {}", det.label());
            println!(
                "{:>8} {:>14} {:>14} {:>10} {:>8} {:>12}",
                "μ (dB)", "analytic", "MC", "MC s.e.", "|z|", "path"
            );
            for mu_db in (10..=45).step_by(5) {
                let m = ChannelModel::new(fog, pt, det, db_to_lin(mu_db as f64))?;
                let a = outage_probability(&m, &tmos)?;
                let e = mc_outage(&m, &tmos, &mc)?;
                let z = (a.value - e.value).abs() / e.std_error.max(1e-12);
                println!(
                    "{:>8} {:>14.6e} {:>14.6e} {:>10.2e} {:>8.2} {:>12}",
                    mu_db,
                    a.value,
                    e.value,
                    e.std_error,
                    z,
                    a.path.label()
                );
            }
        }
    }
    Ok(())
}
