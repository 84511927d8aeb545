//! Average number of selected beams (ANSB) under threshold-based selection.
//!
//! Each of the H = 5 beams qualifies independently when its SNR clears
//! γ_T = 14 dB, so ANSB = H·(1 − F(γ_T)) climbs from near zero to H as the
//! average SNR grows — faster in the weak-impact case. Also prints the
//! probability that no beam qualifies at all (selection outage).
//!
//! Run with: `cargo run --release --example beam_selection`

use maritime_fso::composite::{db_to_lin, snr_cdf, ChannelModel, Detection};
use maritime_fso::fog::{fog_preset, FogPreset};
use maritime_fso::montecarlo::{mc_ansb, McConfig, SamplerKind};
use maritime_fso::pointing::{derive_pointing, PointingGeometry};
use maritime_fso::tmos_acm::{ansb, AcmCodeTable, TmosConfig};
use maritime_fso::Result;

fn main() -> Result<()> {
    let tmos = TmosConfig::new(14.0, 14.0, 5)?;
    let table = AcmCodeTable::default();
    let mc = McConfig::new(60_000, 99, 1, SamplerKind::Hoyt)?;

    for (name, preset, sigma, det) in [
        ("weak impact, heterodyne", FogPreset::Light, 0.5, Detection::Hd),
        ("weak impact, IM/DD", FogPreset::Light, 0.5, Detection::ImDd),
        ("severe impact, heterodyne", FogPreset::Dense, 2.5, Detection::Hd),
        ("severe impact, IM/DD", FogPreset::Dense, 2.5, Detection::ImDd),
    ] {
        let fog = fog_preset(preset, 0.5)?;
        let pt = derive_pointing(&PointingGeometry::reference(sigma))?;
        println!("{name}, γ_T = 14 dB, H = 5");
        println!(
            "{:>8} {:>12} {:>12} {:>10} {:>16}",
            "μ (dB)", "ANSB", "ANSB (MC)", "MC s.e.", "P(no qualifier)"
        );
        for mu_db in (10..=45).step_by(5) {
            let m = ChannelModel::new(fog, pt, det, db_to_lin(mu_db as f64))?;
            let a = ansb(&m, &tmos)?;
            let e = mc_ansb(&m, &tmos, &table, &mc)?;
            let f_t = snr_cdf(&m, tmos.gamma_t_lin())?.value;
            println!(
                "{:>8} {:>12.5} {:>12.5} {:>10.2e} {:>16.4e}",
                mu_db,
                a.value,
                e.value,
                e.std_error,
                f_t.powi(5)
            );
        }
        println!();
    }
    Ok(())
}
