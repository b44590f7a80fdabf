//! Central-spin quantum battery: exact charging dynamics on the Dicke ladder.
//!
//! A battery of `N_b` spins is charged by `N_c` charger spins through a
//! flip-flop coupling. Starting from an empty battery and a charger Dicke
//! state with `m` excitations, the evolution stays on a tridiagonal ladder of
//! dimension `min(N_b, m) + 1`, which makes large chargers cheap to simulate.
//!
//! ```
//! use csbattery::{find_charging_time, ModelParams, SearchOptions};
//!
//! let p = ModelParams::new(1.0, 1.0, 1.0, 0.0, 1, 10, 5).unwrap();
//! let s = find_charging_time(&p, &SearchOptions::default()).unwrap();
//! assert!((s.report.injected - 1.0f64).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod thermo;

pub use analysis::{
    check_orderings, find_charging_time, predict_regimes, sweep_m, ChargingSummary, Objective, SearchOptions,
};
pub use dynamics::{evolve, periodic_grid, populations, trace, uniform_grid, BatteryPopulations, ChargingTrace};
pub use error::{Error, Result};
pub use model::{build_hamiltonian, validate_params, ModelParams, RawParams, TridiagonalHamiltonian};
pub use scalar::Real;
pub use spectral::{diagonalize, Spectrum};
pub use thermo::ThermoReport;

pub type Params64 = ModelParams<f64>;
pub type Params32 = ModelParams<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type Populations64 = BatteryPopulations<f64>;
pub type Trace64 = ChargingTrace<f64>;
pub type Summary64 = ChargingSummary<f64>;
