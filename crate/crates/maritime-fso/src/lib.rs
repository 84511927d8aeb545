//! Closed-form and Monte-Carlo performance analysis of threshold-based
//! multi-beam free-space-optical links between moving maritime platforms,
//! under fog attenuation and 3D pointing errors.
//!
//! The optical channel is the product `I = Ia · Ip` of two independent
//! factors:
//!
//! - `Ia ∈ (0, 1]` — fog attenuation, log-gamma distributed with shape `k`
//!   and rate `z = 4.343/(β·l)`: `f(ia) = z^k/Γ(k) · ln(1/ia)^{k−1} ·
//!   ia^{z−1}` ([`fog`]);
//! - `Ip ∈ (0, A₀]` — collected power fraction under pointing error, driven
//!   by a Hoyt-distributed radial displacement of the beam footprint
//!   ([`pointing`]).
//!
//! The instantaneous electrical SNR is `γ = μ · (I/E[I])^r`, with `r = 1`
//! for heterodyne detection and `r = 2` for IM/DD. On top of this stack:
//!
//! - [`composite`] evaluates the SNR pdf and cdf on two independent routes
//!   (the closed-form series and direct adaptive quadrature) and never lets
//!   one silently stand in for the other;
//! - [`tmos_acm`] turns the cdf into link-layer metrics of a `H`-beam
//!   threshold-based selection scheme with adaptive coding and modulation:
//!   outage, average number of selected beams, average spectral efficiency,
//!   and average coded BER;
//! - [`montecarlo`] is the independent sampling oracle for all of the above,
//!   bit-reproducible for any worker count;
//! - [`scenario`] + the `maritime-fso` binary drive whole parameter sweeps
//!   described in TOML, emitting CSV or JSON tables ([`report`]).
//!
//! # Examples
//!
//! Outage probability of a 5-beam link in light fog, cross-checked between
//! the analytic route and simulation:
//!
//! ```
//! use maritime_fso::composite::{ChannelModel, Detection};
//! use maritime_fso::fog::{fog_preset, FogPreset};
//! use maritime_fso::montecarlo::{mc_outage, McConfig, SamplerKind};
//! use maritime_fso::pointing::{derive_pointing, PointingGeometry};
//! use maritime_fso::tmos_acm::{outage_probability, TmosConfig};
//!
//! let fog = fog_preset(FogPreset::Light, 0.5)?;
//! let pt = derive_pointing(&PointingGeometry::reference(0.5))?;
//! let m = ChannelModel::new(fog, pt, Detection::Hd, 1_000.0)?;
//! let tmos = TmosConfig::new(14.0, 17.0, 5)?;
//!
//! let analytic = outage_probability(&m, &tmos)?.value;
//! let mc = mc_outage(&m, &tmos, &McConfig::new(40_000, 7, 1, SamplerKind::Hoyt)?)?;
//! assert!((analytic - mc.value).abs() < 4.0 * mc.std_error + 1e-9);
//! # Ok::<(), maritime_fso::Error>(())
//! ```

pub mod composite;
pub mod error;
pub mod fog;
pub mod montecarlo;
pub mod pointing;
pub mod quad;
pub mod report;
pub mod scenario;
pub mod specfun;
pub mod tmos_acm;

pub use error::{Error, Result};
