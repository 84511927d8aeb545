//! Composite channel densities on both evaluation routes.
//!
//! Builds the moderate-fog reference channel and prints the composite
//! irradiance pdf together with a Monte-Carlo histogram, then compares the
//! SNR cdf between the closed-form series and the direct quadrature route —
//! the two must agree without either standing in for the other.
//!
//! Run with: `cargo run --release --example composite_pdf`

use maritime_fso::composite::{
    snr_cdf, snr_pdf, ChannelModel, Detection, composite_irradiance_pdf, db_to_lin,
};
use maritime_fso::fog::{fog_preset, FogPreset};
use maritime_fso::montecarlo::{mc_irradiance_hist, McConfig, SamplerKind};
use maritime_fso::pointing::{derive_pointing, PointingGeometry};
use maritime_fso::Result;

fn main() -> Result<()> {
    // Moderate fog over 100 m keeps z > 1, so the irradiance density is
    // bounded and a histogram resolves it cleanly.
    let fog = fog_preset(FogPreset::Moderate, 0.1)?;
    let pt = derive_pointing(&PointingGeometry::reference(1.0))?;
    let m = ChannelModel::new(fog, pt, Detection::Hd, db_to_lin(30.0))?;

    let mc = McConfig::new(400_000, 12_345, 1, SamplerKind::Hoyt)?;
    let hist = mc_irradiance_hist(&m, &mc, 20)?;

    println!("composite irradiance density, moderate fog l = 0.1 km, σ = 1.0");
    println!("{:>12} {:>14} {:>14} {:>10}", "I", "analytic", "MC density", "|diff|");
    let mut l1 = 0.0;
    let bin_w = m.pointing.a0 / 20.0;
    for (center, density) in &hist {
        let f = composite_irradiance_pdf(&m, *center)?;
        l1 += (f - density).abs() * bin_w;
        println!("{:>12.5e} {:>14.6e} {:>14.6e} {:>10.2e}", center, f, density, (f - density).abs());
    }
    println!("L1(analytic, histogram) = {l1:.4}");
    println!();

    println!("SNR cdf: closed-form series vs direct quadrature (HD, μ = 30 dB)");
    println!(
        "{:>9} {:>16} {:>16} {:>10} {:>12}",
        "γ (dB)", "series", "quadrature", "rel diff", "path used"
    );
    for gdb in [5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
        let x = db_to_lin(gdb);
        let closed = closed_route(&m, x)?;
        let tagged = snr_cdf(&m, x)?;
        let rel = (closed - tagged.value).abs() / tagged.value.max(1e-300);
        println!(
            "{:>9.1} {:>16.10e} {:>16.10e} {:>10.2e} {:>12}",
            gdb,
            closed,
            tagged.value,
            rel,
            tagged.path.label()
        );
    }
    println!();

    println!("SNR pdf at a few points (density of γ, not of γ_dB)");
    println!("{:>9} {:>16}", "γ (dB)", "f_γ(γ)");
    for gdb in [10.0, 20.0, 30.0] {
        let x = db_to_lin(gdb);
        println!("{:>9.1} {:>16.6e}", gdb, snr_pdf(&m, x)?);
    }
    Ok(())
}

/// Integrate the closed-form pdf over ln γ with a plain trapezoid, as an
/// arm's-length reconstruction of the cdf that never calls `snr_cdf`.
fn closed_route(m: &ChannelModel, x: f64) -> Result<f64> {
    let lo = (x * 1e-14).ln();
    let hi = x.ln();
    let n = 4000;
    let h = (hi - lo) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let g = (lo + i as f64 * h).exp();
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += w * snr_pdf(m, g)? * g; // f(γ)·γ dlnγ
    }
    Ok(acc * h)
}
