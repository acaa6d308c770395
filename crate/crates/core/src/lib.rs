//! Decides, per annual level series, whether a linear or an exponential
//! deterministic growth trend better explains the data.
//!
//! Two routes are provided:
//!
//! * a curve-fit comparison of the best exponential fit over a growth-rate
//!   grid against the linear fit, by R² ([`growth`]);
//! * a two-step selection: for every candidate growth rate, pick the best
//!   ARIMA(p,1,q)-with-drift model by information criterion, then pick the
//!   growth rate minimizing that criterion across the grid ([`selection`]).
//!
//! The likelihood engine is exact Gaussian ML via a Kalman filter over the
//! Harvey state-space form ([`arima`]).

pub mod arima;
pub mod dataio;
pub mod growth;
pub mod optim;
pub mod selection;

pub use arima::{
    difference, fit, kalman_loglik, t_ratio, ArimaError, ArimaOrder, FitResult, RegressionDesign,
};
pub use dataio::{parse_csv, serialize_csv, CountrySeries, DataError, SampleWindow};
pub use growth::{build_grid, compare_fits, exp_regressor, ols_r2, GrowthError, GrowthGrid, R2Comparison};
pub use selection::{
    run_battery, score, select_growth, select_order, BatteryResult, CountrySelection, Criterion,
    CriterionScores, GridPointResult, SelectionError,
};
