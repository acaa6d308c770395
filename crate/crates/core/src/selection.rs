//! Two-step model selection: per candidate growth rate, pick the best
//! ARIMA(p,1,q)+drift(+exponential regressor) order by information
//! criterion; then pick the rate minimizing that criterion across the
//! grid. The three criteria share one fit per (rate, p, q) cell and are
//! evaluated independently.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arima::{difference, fit, ArimaOrder, FitResult, RegressionDesign};
use crate::dataio::{CountrySeries, SampleWindow};
use crate::growth::GrowthGrid;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("AICc undefined: n = {n} must exceed k + 1 = {k} + 1")]
    AICcUndefined { n: usize, k: usize },
    #[error("every (p,q) fit failed at rate {rate}")]
    AllFitsFailed { rate: f64 },
    #[error("every grid point failed for series {id}")]
    AllRatesFailed { id: String },
}

/// AR root modulus below which a fit is flagged as near unit root.
pub const NEAR_UNIT_ROOT_THRESHOLD: f64 = 1.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    Aic,
    Aicc,
    Bic,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Aic, Criterion::Aicc, Criterion::Bic];
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Criterion::Aic => write!(f, "AIC"),
            Criterion::Aicc => write!(f, "AICc"),
            Criterion::Bic => write!(f, "BIC"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionScores {
    pub aic: f64,
    pub aicc: f64,
    pub bic: f64,
}

impl CriterionScores {
    pub fn get(&self, c: Criterion) -> f64 {
        match c {
            Criterion::Aic => self.aic,
            Criterion::Aicc => self.aicc,
            Criterion::Bic => self.bic,
        }
    }
}

/// AIC = 2k - 2 loglik; AICc = AIC + 2k(k+1)/(n-k-1); BIC = k ln n - 2 loglik.
pub fn score(fit: &FitResult) -> Result<CriterionScores, SelectionError> {
    let n = fit.n_obs;
    let k = fit.k_params;
    if n <= k + 1 {
        return Err(SelectionError::AICcUndefined { n, k });
    }
    let (nf, kf) = (n as f64, k as f64);
    let aic = 2.0 * kf - 2.0 * fit.loglik;
    let aicc = aic + 2.0 * kf * (kf + 1.0) / (nf - kf - 1.0);
    let bic = kf * nf.ln() - 2.0 * fit.loglik;
    Ok(CriterionScores { aic, aicc, bic })
}

/// Best fit at one grid rate for one criterion.
#[derive(Debug, Clone)]
pub struct GridPointResult {
    pub rate: f64,
    pub best_order: ArimaOrder,
    pub fit: FitResult,
    pub scores: CriterionScores,
}

/// The per-criterion winner for one series and window.
#[derive(Debug, Clone)]
pub struct Chosen {
    pub rate: f64,
    pub order: ArimaOrder,
    pub fit: FitResult,
}

/// Per-criterion selections and criterion-vs-rate curves for one series.
#[derive(Debug, Clone)]
pub struct CountrySelection {
    pub id: String,
    pub window: SampleWindow,
    pub per_criterion: BTreeMap<Criterion, Chosen>,
    pub curves: BTreeMap<Criterion, Vec<GridPointResult>>,
    pub warnings: Vec<String>,
}

/// Regression design at one rate: a drift constant, plus the differenced
/// exponential trend `r (1+r)^t` when the rate is positive. At rate 0 the
/// exponential regressor vanishes and is dropped, so the linear model is
/// genuinely one parameter smaller.
pub fn design_for(n_diff: usize, rate: f64) -> RegressionDesign {
    let mut d = RegressionDesign::new();
    d.push("drift", vec![1.0; n_diff]);
    if rate > 0.0 {
        let base = 1.0 + rate;
        d.push("exp", (0..n_diff).map(|t| rate * base.powi(t as i32)).collect());
    }
    d
}

/// All (p,q) fits at one rate, scored three ways. Failed fits are dropped.
fn fit_rate_point(
    dz: &[f64],
    rate: f64,
    p_max: usize,
    q_max: usize,
    seed: u64,
) -> Vec<(ArimaOrder, FitResult, CriterionScores)> {
    let design = design_for(dz.len(), rate);
    let mut out = Vec::with_capacity((p_max + 1) * (q_max + 1));
    for p in 0..=p_max {
        for q in 0..=q_max {
            let order = ArimaOrder::new(p, q);
            let Ok(f) = fit(dz, &design, order, seed) else {
                continue;
            };
            if !f.loglik.is_finite() {
                continue;
            }
            let Ok(s) = score(&f) else { continue };
            out.push((order, f, s));
        }
    }
    out
}

/// Picks the criterion-minimal entry; ties go to smaller p+q, then
/// smaller p. Non-converged fits are excluded unless none converged.
fn best_for_criterion(
    fits: &[(ArimaOrder, FitResult, CriterionScores)],
    criterion: Criterion,
) -> Option<(ArimaOrder, FitResult, CriterionScores)> {
    let any_converged = fits.iter().any(|(_, f, _)| f.converged);
    fits.iter()
        .filter(|(_, f, _)| !any_converged || f.converged)
        .filter(|(_, _, s)| s.get(criterion).is_finite())
        .min_by(|(oa, _, sa), (ob, _, sb)| {
            sa.get(criterion)
                .partial_cmp(&sb.get(criterion))
                .unwrap()
                .then((oa.p + oa.q).cmp(&(ob.p + ob.q)))
                .then(oa.p.cmp(&ob.p))
        })
        .cloned()
}

/// Step 1 of the two-step procedure: selects the (p,q) order at one rate.
pub fn select_order(
    series: &CountrySeries,
    rate: f64,
    criterion: Criterion,
    p_max: usize,
    q_max: usize,
    seed: u64,
) -> Result<GridPointResult, SelectionError> {
    let dz = difference(series.values()).expect("validated series has >= 2 points");
    let fits = fit_rate_point(&dz, rate, p_max, q_max, seed);
    let (best_order, fit, scores) =
        best_for_criterion(&fits, criterion).ok_or(SelectionError::AllFitsFailed { rate })?;
    Ok(GridPointResult { rate, best_order, fit, scores })
}

/// Step 2: runs step 1 at every grid rate and, per criterion, picks the
/// rate minimizing the criterion. All three criteria are evaluated from
/// the same underlying fits. Ties go to the smaller rate, then smaller
/// p+q, then smaller p.
pub fn select_growth(
    series: &CountrySeries,
    grid: &GrowthGrid,
    p_max: usize,
    q_max: usize,
    seed: u64,
) -> Result<CountrySelection, SelectionError> {
    let dz = difference(series.values()).expect("validated series has >= 2 points");

    let mut curves: BTreeMap<Criterion, Vec<GridPointResult>> =
        Criterion::ALL.iter().map(|&c| (c, Vec::new())).collect();
    for &rate in grid.rates() {
        let fits = fit_rate_point(&dz, rate, p_max, q_max, seed);
        for &c in &Criterion::ALL {
            if let Some((best_order, fit, scores)) = best_for_criterion(&fits, c) {
                curves.get_mut(&c).unwrap().push(GridPointResult {
                    rate,
                    best_order,
                    fit,
                    scores,
                });
            }
        }
    }

    let mut per_criterion = BTreeMap::new();
    for &c in &Criterion::ALL {
        let curve = &curves[&c];
        let best = curve.iter().min_by(|a, b| {
            a.scores
                .get(c)
                .partial_cmp(&b.scores.get(c))
                .unwrap()
                .then(a.rate.partial_cmp(&b.rate).unwrap())
                .then((a.best_order.p + a.best_order.q).cmp(&(b.best_order.p + b.best_order.q)))
                .then(a.best_order.p.cmp(&b.best_order.p))
        });
        if let Some(g) = best {
            per_criterion.insert(
                c,
                Chosen {
                    rate: g.rate,
                    order: g.best_order,
                    fit: g.fit.clone(),
                },
            );
        }
    }
    if per_criterion.is_empty() {
        return Err(SelectionError::AllRatesFailed { id: series.id().to_string() });
    }

    // post-hoc diagnostics; never alter the selection
    let mut warnings = Vec::new();
    for &c in &Criterion::ALL {
        let Some(ch) = per_criterion.get(&c) else { continue };
        if ch.fit.ar_root_min_modulus < NEAR_UNIT_ROOT_THRESHOLD {
            warnings.push(format!(
                "{c}: near unit root (min AR root modulus {:.4})",
                ch.fit.ar_root_min_modulus
            ));
        }
        if ch.rate > 0.0 {
            if let Some(b0) = ch.fit.beta_named("exp") {
                if b0 < 0.0 {
                    warnings.push(format!("{c}: negative exponential-trend coefficient"));
                }
            }
        }
    }

    Ok(CountrySelection {
        id: series.id().to_string(),
        window: SampleWindow {
            start_year: series.start_year(),
            end_year: series.end_year(),
        },
        per_criterion,
        curves,
        warnings,
    })
}

/// A (series, window) cell skipped by the battery, with the reason.
#[derive(Debug, Clone)]
pub struct SkippedCell {
    pub id: String,
    pub window: SampleWindow,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct BatteryResult {
    pub selections: Vec<CountrySelection>,
    pub skipped: Vec<SkippedCell>,
}

/// Cartesian product of series and windows, in input order. Per-cell
/// failures are recorded and the run continues.
pub fn run_battery(
    all_series: &[CountrySeries],
    grid: &GrowthGrid,
    windows: &[SampleWindow],
    p_max: usize,
    q_max: usize,
    seed: u64,
) -> BatteryResult {
    let mut out = BatteryResult::default();
    for &w in windows {
        for s in all_series {
            let windowed = match s.window(w) {
                Ok(ws) => ws,
                Err(e) => {
                    out.skipped.push(SkippedCell {
                        id: s.id().to_string(),
                        window: w,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            match select_growth(&windowed, grid, p_max, q_max, seed) {
                Ok(sel) => out.selections.push(sel),
                Err(e) => out.skipped.push(SkippedCell {
                    id: s.id().to_string(),
                    window: w,
                    reason: e.to_string(),
                }),
            }
        }
    }
    out
}
