//! Charging-time search, excitation sweeps, closed-form predictors and the
//! entanglement/work ordering checks.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::dynamics::{evolve, populations, symmetric_nb2_frequency, uniform_grid, BatteryPopulations};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams};
use crate::scalar::Real;
use crate::spectral::{diagonalize, Spectrum};
use crate::thermo::{self, binary_entropy, ThermoReport};

pub const DEFAULT_SAMPLES: usize = 4096;
/// Default point count for traces over the search window.
pub const DEFAULT_TRACE_POINTS: usize = 2048;
/// Refinement stops once the bracket is this fraction of the window.
const REFINE_RESOLUTION: f64 = 1e-10;
/// Two quantities are treated as tied below this difference in ordering checks.
pub const ORDERING_TOLERANCE: f64 = 1e-9;

/// Quantity maximized to define the charging time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    /// Injected energy `ΔE(t)`.
    #[default]
    InjectedEnergy,
    /// Ergotropy `ℰ(t)`.
    Ergotropy,
}

impl Objective {
    pub fn pick<T: Real>(self, r: &ThermoReport<T>) -> T {
        match self {
            Objective::InjectedEnergy => r.injected,
            Objective::Ergotropy => r.ergotropy,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Objective::InjectedEnergy => "injected-energy",
            Objective::Ergotropy => "ergotropy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions<T> {
    pub objective: Objective,
    /// End of the search window `[0, end]`; derived from the spectrum if unset.
    pub window_end: Option<T>,
    pub samples: usize,
}

impl<T> Default for SearchOptions<T> {
    fn default() -> Self {
        Self { objective: Objective::default(), window_end: None, samples: DEFAULT_SAMPLES }
    }
}

impl<T> SearchOptions<T> {
    pub fn with_objective(objective: Objective) -> Self {
        Self { objective, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargingSummary<T> {
    pub charging_time: T,
    pub report: ThermoReport<T>,
    pub populations: BatteryPopulations<T>,
    pub objective: Objective,
    pub window: (T, T),
    pub samples: usize,
}

/// `[0, 2π / g_min]` with `g_min` the smallest nonzero eigenvalue gap.
pub fn default_window<T: Real>(s: &Spectrum<T>) -> Option<T> {
    let scale = s.eigenvalues().iter().fold(T::one(), |acc, v| acc.max(v.abs()));
    s.min_gap(T::lit(1e-12) * scale).map(|g| T::lit(2.0) * T::PI() / g)
}

fn ensure_chargeable<T: Real>(p: &ModelParams<T>) -> Result<()> {
    if p.coupling() == T::zero() {
        return Err(Error::NoChargingPossible("flip-flop coupling A is zero".into()));
    }
    if p.excitations() == 0 {
        return Err(Error::NoChargingPossible("charger holds no excitations (m = 0)".into()));
    }
    Ok(())
}

fn evaluate<T: Real>(s: &Spectrum<T>, p: &ModelParams<T>, t: T) -> (BatteryPopulations<T>, ThermoReport<T>) {
    let pop = populations(&evolve(s, t), p);
    let report = thermo::report(&pop);
    (pop, report)
}

/// Brent's parabolic/golden maximization of `f` on `[lo, hi]` starting from
/// the interior point `x0`. Returns the best point seen.
fn refine_max<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, x0: T, f0: T, resolution: T) -> (T, T) {
    let golden = T::lit(0.381_966_011_250_105_1);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let eps = T::epsilon() * two;
    // minimize g = -f
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut gx, mut gw, mut gv) = (-f0, -f0, -f0);
    let (mut step, mut prev_step) = (T::zero(), T::zero());
    for _ in 0..200 {
        let mid = half * (lo + hi);
        let tol1 = eps * x.abs() + resolution / T::lit(3.0);
        let tol2 = two * tol1;
        if (x - mid).abs() <= tol2 - half * (hi - lo) {
            break;
        }
        let mut use_golden = true;
        if prev_step.abs() > tol1 {
            let r = (x - w) * (gx - gv);
            let mut q = (x - v) * (gx - gw);
            let mut num = (x - v) * q - (x - w) * r;
            q = two * (q - r);
            if q > T::zero() {
                num = -num;
            }
            q = q.abs();
            let older = prev_step;
            prev_step = step;
            if num.abs() < (half * q * older).abs() && num > q * (lo - x) && num < q * (hi - x) {
                step = num / q;
                let u = x + step;
                if u - lo < tol2 || hi - u < tol2 {
                    step = if x < mid { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            prev_step = if x < mid { hi - x } else { lo - x };
            step = golden * prev_step;
        }
        let u = if step.abs() >= tol1 { x + step } else if step > T::zero() { x + tol1 } else { x - tol1 };
        let gu = -f(u);
        if gu <= gx {
            if u < x {
                hi = x;
            } else {
                lo = x;
            }
            (v, gv) = (w, gw);
            (w, gw) = (x, gx);
            (x, gx) = (u, gu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if gu <= gw || w == x {
                (v, gv) = (w, gw);
                (w, gw) = (u, gu);
            } else if gu <= gv || v == x || v == w {
                (v, gv) = (u, gu);
            }
        }
    }
    (x, -gx)
}

/// Locates the charging time as the maximizer of the chosen objective:
/// dense uniform sampling of the window, then parabolic refinement inside
/// the bracket around the best sample.
pub fn find_charging_time<T: Real>(p: &ModelParams<T>, options: &SearchOptions<T>) -> Result<ChargingSummary<T>> {
    ensure_chargeable(p)?;
    let s = diagonalize(&build_hamiltonian(p))?;
    let end = match options.window_end {
        Some(end) => end,
        None => default_window(&s)
            .ok_or_else(|| Error::NoChargingPossible("spectrum is fully degenerate".into()))?,
    };
    if end <= T::zero() || !end.is_finite() {
        return Err(Error::InvalidGrid(format!("search window end {end} must be positive")));
    }
    let samples = options.samples.max(3);
    let grid = uniform_grid(end, samples);
    let objective = options.objective;
    let values: Vec<T> = grid.par_iter().map(|&t| objective.pick(&evaluate(&s, p, t).1)).collect();
    let (best, best_value) = values
        .iter()
        .enumerate()
        .fold((0, values[0]), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(samples - 1)];
    let (t_refined, v_refined) = refine_max(
        |t| objective.pick(&evaluate(&s, p, t).1),
        lo,
        hi,
        grid[best],
        best_value,
        T::lit(REFINE_RESOLUTION) * end,
    );
    let charging_time = if v_refined >= best_value { t_refined } else { grid[best] };
    let (pop, report) = evaluate(&s, p, charging_time);
    Ok(ChargingSummary {
        charging_time,
        report,
        populations: pop,
        objective,
        window: (T::zero(), end),
        samples,
    })
}

/// Charging summaries for each `m` in the range, in ascending `m`.
pub fn sweep_m<T: Real>(
    p: &ModelParams<T>,
    m_range: RangeInclusive<usize>,
    options: &SearchOptions<T>,
) -> Result<Vec<(usize, ChargingSummary<T>)>> {
    let ms: Vec<usize> = m_range.collect();
    let params = ms.iter().map(|&m| p.with_excitations(m)).collect::<Result<Vec<_>>>()?;
    params
        .par_iter()
        .zip(ms.par_iter())
        .map(|(q, &m)| find_charging_time(q, options).map(|s| (m, s)))
        .collect()
}

/// Tavis–Cummings-limit estimate `π / (2A sqrt(m N_c))`; infinite for `m = 0`.
pub fn predict_tc_time<T: Real>(p: &ModelParams<T>) -> T {
    T::PI() / (T::lit(2.0) * p.coupling() * (T::of(p.excitations()) * T::of(p.n_charger())).sqrt())
}

/// Non-TC estimate `π / (2A sqrt(k(1-k)) N_c)` with `k = m / N_c`.
pub fn predict_ntc_time<T: Real>(p: &ModelParams<T>) -> Result<T> {
    let (m, nc) = (p.excitations(), p.n_charger());
    if m == 0 || m == nc {
        return Err(Error::DegenerateFilling { m, n_charger: nc });
    }
    let k = T::of(m) / T::of(nc);
    Ok(T::PI() / (T::lit(2.0) * p.coupling() * (k * (T::one() - k)).sqrt() * T::of(nc)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePrediction<T> {
    /// Filling fraction `m / N_c`.
    pub k: T,
    pub tc_time: T,
    /// `None` at `k ∈ {0, 1}`.
    pub ntc_time: Option<T>,
}

pub fn predict_regimes<T: Real>(p: &ModelParams<T>) -> RegimePrediction<T> {
    RegimePrediction {
        k: T::of(p.excitations()) / T::of(p.n_charger()),
        tc_time: predict_tc_time(p),
        ntc_time: predict_ntc_time(p).ok(),
    }
}

/// One-cell ergotropy at the charging time,
/// `B [1 - 2(h-B)² / (4A² m (N_c - m + 1) + (B-h)²)]`.
pub fn ergotropy_at_charge_nb1<T: Real>(p: &ModelParams<T>) -> Result<T> {
    if p.n_battery() != 1 {
        return Err(Error::WrongCellCount { expected: 1, found: p.n_battery() });
    }
    if p.ising() != T::zero() {
        return Err(Error::UnsupportedRegime("one-cell charging formula assumes delta = 0".into()));
    }
    ensure_chargeable(p)?;
    let b = p.b_field();
    let detuning_sq = (p.h_field() - b).powi(2);
    let a = p.coupling();
    let m = T::of(p.excitations());
    let slots = T::of(p.n_charger() - p.excitations() + 1);
    let two = T::lit(2.0);
    Ok(b * (T::one() - two * detuning_sq / (T::lit(4.0) * a * a * m * slots + detuning_sq)))
}

/// Published two-cell expression `2B [-1 + 8 / (u₁²/u₂² + u₂²/u₁² + 2)]`.
///
/// Away from `u₁ = u₂` this differs from the sort-based ergotropy of the
/// state at `cos(ωT) = -1` by `B (u₁² - u₂²)² / (u₁² + u₂²)²`.
pub fn ergotropy_at_charge_nb2_published<T: Real>(p: &ModelParams<T>) -> Result<T> {
    if p.n_battery() != 2 {
        return Err(Error::WrongCellCount { expected: 2, found: p.n_battery() });
    }
    if !p.is_resonant_flip_flop() || p.excitations() < 2 {
        return Err(Error::UnsupportedRegime("needs h = B, delta = 0 and m >= 2".into()));
    }
    ensure_chargeable(p)?;
    let h = build_hamiltonian(p);
    let (u1sq, u2sq) = (h.offdiag()[0].powi(2), h.offdiag()[1].powi(2));
    let two = T::lit(2.0);
    Ok(two * p.b_field() * (-T::one() + T::lit(8.0) / (u1sq / u2sq + u2sq / u1sq + two)))
}

/// Branch points of the symmetric two-cell charging curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nb2Breakpoints<T> {
    pub omega: T,
    /// `arccos(1/3) / ω`, where ergotropy first becomes nonzero.
    pub t1: T,
    /// `π / 2ω`, the entropy maximum.
    pub t_star: T,
    /// `arccos(-1/3) / ω`.
    pub t2: T,
    /// `π / ω`.
    pub charging_time: T,
}

pub fn nb2_breakpoints<T: Real>(p: &ModelParams<T>) -> Result<Nb2Breakpoints<T>> {
    let omega = symmetric_nb2_frequency(p)?;
    if omega == T::zero() {
        return Err(Error::NoChargingPossible("flip-flop coupling A is zero".into()));
    }
    let third = T::one() / T::lit(3.0);
    Ok(Nb2Breakpoints {
        omega,
        t1: third.acos() / omega,
        t_star: T::FRAC_PI_2() / omega,
        t2: (-third).acos() / omega,
        charging_time: T::PI() / omega,
    })
}

/// Four-branch ergotropy and closed-form entropy for the symmetric two-cell
/// battery. Times past `π/ω` are folded back by the period and the
/// reflection symmetry of `cos(ωt)`.
pub fn piecewise_nb2<T: Real>(p: &ModelParams<T>, t: T) -> Result<(T, T)> {
    let bp = nb2_breakpoints(p)?;
    let period = T::lit(2.0) * bp.charging_time;
    let mut tau = t % period;
    if tau > bp.charging_time {
        tau = period - tau;
    }
    let x = (bp.omega * tau).cos();
    let one = T::one();
    let three_quarters = T::lit(0.75);
    let third = one / T::lit(3.0);
    let scaled = if tau < bp.t1 {
        T::zero()
    } else if tau < bp.t_star {
        -three_quarters * (x + third).powi(2) + third
    } else if tau < bp.t2 {
        -three_quarters * (x + one).powi(2) + one
    } else {
        -T::lit(2.0) * x
    };
    let half = T::lit(0.5);
    let xlogx = |a: T, b: T| if b > T::zero() { a * b.log2() } else { T::zero() };
    let entropy = T::lit(1.5) + half * x * x
        - half * xlogx((x + one).powi(2), x + one)
        - half * xlogx((x - one).powi(2), one - x)
        - half * xlogx(one - x * x, one - x * x);
    Ok((p.b_field() * scaled, entropy))
}

/// First pair `(i, j)` whose `(ℰ, S)` values move in the same direction,
/// counting only pairs where both differ by more than `tol`.
pub fn find_same_ordering<T: Real>(points: &[(T, T)], tol: T) -> Option<(usize, usize)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if same_ordering(points[i], points[j], tol) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether a pair of `(ℰ, S)` points violates the anti-ordering.
pub fn same_ordering<T: Real>(a: (T, T), b: (T, T), tol: T) -> bool {
    let de = a.0 - b.0;
    let ds = a.1 - b.1;
    de.abs() > tol && ds.abs() > tol && (de > T::zero()) == (ds > T::zero())
}

/// Count of pairs taking part in an anti-ordering check.
fn comparable_pairs<T: Real>(points: &[(T, T)], tol: T) -> usize {
    let mut n = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i].0 - points[j].0).abs() > tol && (points[i].1 - points[j].1).abs() > tol {
                n += 1;
            }
        }
    }
    n
}

/// One cell: among grid states with ergotropy above tolerance, larger
/// ergotropy always comes with smaller entropy. Returns the number of
/// comparable pairs.
pub fn check_ergotropy_entropy_over_time<T: Real>(p: &ModelParams<T>, grid: &[T]) -> Result<usize> {
    if p.n_battery() != 1 {
        return Err(Error::WrongCellCount { expected: 1, found: p.n_battery() });
    }
    let tol = T::lit(ORDERING_TOLERANCE);
    let s = diagonalize(&build_hamiltonian(p))?;
    let points: Vec<(T, T)> = grid
        .iter()
        .map(|&t| evaluate(&s, p, t).1)
        .filter(|r| r.ergotropy > tol)
        .map(|r| (r.ergotropy, r.entropy))
        .collect();
    if let Some((i, j)) = find_same_ordering(&points, tol) {
        return Err(Error::PropertyViolation(format!(
            "one-cell states (erg={}, S={}) and (erg={}, S={}) are not anti-ordered",
            points[i].0, points[i].1, points[j].0, points[j].1
        )));
    }
    Ok(comparable_pairs(&points, tol))
}

/// Two cells with `h = B`, `Δ = 0`: the middle ladder level is empty at the
/// charging time. Returns `p_1(T)`.
pub fn check_middle_level_empty<T: Real>(p: &ModelParams<T>) -> Result<T> {
    if p.n_battery() != 2 {
        return Err(Error::WrongCellCount { expected: 2, found: p.n_battery() });
    }
    if !p.is_resonant_flip_flop() || p.excitations() < 2 {
        return Err(Error::UnsupportedRegime("needs h = B, delta = 0 and m >= 2".into()));
    }
    let summary = find_charging_time(p, &SearchOptions::default())?;
    let middle = summary.populations.values()[1];
    if middle > T::lit(1e-8) {
        return Err(Error::PropertyViolation(format!(
            "middle level population {middle} at T = {} exceeds 1e-8",
            summary.charging_time
        )));
    }
    Ok(middle)
}

/// Across a sweep, `ℰ(T)` and `S(T)` are anti-ordered for every pair of
/// excitation numbers where both differ by more than the tolerance.
pub fn check_sweep_anti_ordering<T: Real>(sweep: &[(usize, ChargingSummary<T>)]) -> Result<usize> {
    let tol = T::lit(ORDERING_TOLERANCE);
    let points: Vec<(T, T)> = sweep.iter().map(|(_, s)| (s.report.ergotropy, s.report.entropy)).collect();
    if let Some((i, j)) = find_same_ordering(&points, tol) {
        let (a, b) = (&sweep[i], &sweep[j]);
        return Err(Error::PropertyViolation(format!(
            "m={} (erg={}, S={}) and m={} (erg={}, S={}) are not anti-ordered",
            a.0, a.1.report.ergotropy, a.1.report.entropy, b.0, b.1.report.ergotropy, b.1.report.entropy
        )));
    }
    Ok(comparable_pairs(&points, tol))
}

/// Zero entropy at the charging time means all injected energy is
/// extractable: `S(T) <= 1e-9` implies `|ℰ(T) - ΔE(T)| <= 1e-8`.
pub fn check_optimal_extraction<T: Real>(summary: &ChargingSummary<T>) -> Result<()> {
    let r = &summary.report;
    if r.entropy <= T::lit(1e-9) && (r.ergotropy - r.injected).abs() > T::lit(1e-8) {
        return Err(Error::PropertyViolation(format!(
            "S(T) = {} but ergotropy {} differs from injected energy {}",
            r.entropy, r.ergotropy, r.injected
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport<T> {
    /// Comparable time pairs in the one-cell check, when `N_b = 1`.
    pub one_cell_pairs: Option<usize>,
    /// `p_1(T)` in the two-cell check, when it applies.
    pub middle_level_population: Option<T>,
    /// Comparable `m` pairs in the sweep check over `m = 1..=N_c`.
    pub sweep_pairs: usize,
}

/// Runs every ordering check that applies to `p`; the first failing check
/// is returned as [`Error::PropertyViolation`].
pub fn check_orderings<T: Real>(p: &ModelParams<T>) -> Result<OrderingReport<T>> {
    let probe = if p.excitations() == 0 { p.with_excitations(1)? } else { *p };
    let one_cell_pairs = if p.n_battery() == 1 {
        ensure_chargeable(&probe)?;
        let s = diagonalize(&build_hamiltonian(&probe))?;
        let end = default_window(&s).ok_or_else(|| Error::NoChargingPossible("degenerate spectrum".into()))?;
        Some(check_ergotropy_entropy_over_time(&probe, &uniform_grid(end, DEFAULT_TRACE_POINTS))?)
    } else {
        None
    };
    let middle_level_population =
        if p.n_battery() == 2 && p.is_resonant_flip_flop() && p.excitations() >= 2 {
            Some(check_middle_level_empty(p)?)
        } else {
            None
        };
    let sweep = sweep_m(p, 1..=p.n_charger(), &SearchOptions::default())?;
    for (_, s) in &sweep {
        check_optimal_extraction(s)?;
    }
    let sweep_pairs = check_sweep_anti_ordering(&sweep)?;
    Ok(OrderingReport { one_cell_pairs, middle_level_population, sweep_pairs })
}

/// One-cell ergotropy and entropy as functions of `r = p_0 - p_1`.
pub fn nb1_from_r<T: Real>(b_field: T, r: T) -> (T, T) {
    let erg = if r < T::zero() { -b_field * r } else { T::zero() };
    (erg, binary_entropy((T::one() + r) / T::lit(2.0)))
}
