//! Spectral propagation of `|0⟩_b ⊗ |m⟩_c` and the battery occupations.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams, TridiagonalHamiltonian};
use crate::scalar::{close_rel, Real};
use crate::spectral::{diagonalize, spectrum_nb1, Spectrum};
use crate::thermo::{self, ThermoReport};

/// Ladder amplitudes `ψ_1(t) .. ψ_d(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitudes<T> {
    pub t: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> Amplitudes<T> {
    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨ψ|H|ψ⟩` for the ladder Hamiltonian.
    pub fn expectation(&self, h: &TridiagonalHamiltonian<T>) -> T {
        let re: Vec<T> = self.values.iter().map(|a| a.re).collect();
        let im: Vec<T> = self.values.iter().map(|a| a.im).collect();
        let (h_re, h_im) = (h.apply(&re), h.apply(&im));
        (0..re.len()).map(|j| re[j] * h_re[j] + im[j] * h_im[j]).sum()
    }
}

/// Diagonal of the reduced battery state on its Dicke ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryPopulations<T> {
    t: T,
    p: Vec<T>,
    params: ModelParams<T>,
}

impl<T: Real> BatteryPopulations<T> {
    pub fn new(t: T, p: Vec<T>, params: ModelParams<T>) -> Self {
        assert!(
            !p.is_empty() && p.len() <= params.n_battery() + 1,
            "population vector length {} outside 1..={}",
            p.len(),
            params.n_battery() + 1
        );
        Self { t, p, params }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn values(&self) -> &[T] {
        &self.p
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn total(&self) -> T {
        self.p.iter().copied().sum()
    }

    pub fn into_values(self) -> Vec<T> {
        self.p
    }
}

/// `ψ_j(t) = Σ_k U_jk e^{-iλ_k t} U_0k`.
/// At `t = 0` the initial ladder state is returned exactly.
pub fn evolve<T: Real>(s: &Spectrum<T>, t: T) -> Amplitudes<T> {
    let d = s.dim();
    if t == T::zero() {
        let mut values = vec![Complex::new(T::zero(), T::zero()); d];
        values[0] = Complex::new(T::one(), T::zero());
        return Amplitudes { t, values };
    }
    let phases: Vec<Complex<T>> = (0..d)
        .map(|k| Complex::from_polar(s.vector(0, k), -s.eigenvalues()[k] * t))
        .collect();
    let values = (0..d)
        .map(|j| {
            (0..d).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + phases[k] * s.vector(j, k))
        })
        .collect();
    Amplitudes { t, values }
}

pub fn populations<T: Real>(a: &Amplitudes<T>, params: &ModelParams<T>) -> BatteryPopulations<T> {
    BatteryPopulations::new(a.t, a.values.iter().map(|z| z.norm_sqr()).collect(), *params)
}

/// One-cell occupations from `r(t) = cos²θ + cos((d_1 - d_2) t) sin²θ`.
pub fn populations_nb1<T: Real>(p: &ModelParams<T>, t: T) -> Result<BatteryPopulations<T>> {
    let (theta, s) = spectrum_nb1(p)?;
    let gap = s.eigenvalues()[1] - s.eigenvalues()[0];
    let (sin, cos) = theta.radians().sin_cos();
    let r = cos * cos + (gap * t).cos() * sin * sin;
    let two = T::lit(2.0);
    Ok(BatteryPopulations::new(t, vec![(T::one() + r) / two, (T::one() - r) / two], *p))
}

/// Two-cell occupations when `u_1 = u_2` (relative tolerance `1e-9`),
/// `h = B`, `Δ = 0`: with `x = cos(ωt)`,
/// `p = ((1+x)²/4, (1-x²)/2, (1-x)²/4)`.
pub fn populations_nb2_symmetric<T: Real>(p: &ModelParams<T>, t: T) -> Result<BatteryPopulations<T>> {
    let omega = symmetric_nb2_frequency(p)?;
    let x = (omega * t).cos();
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let values = vec![(one + x).powi(2) / four, (one - x * x) / two, (one - x).powi(2) / four];
    Ok(BatteryPopulations::new(t, values, *p))
}

/// `ω = sqrt(u_1² + u_2²)` after checking the symmetric two-cell regime.
pub(crate) fn symmetric_nb2_frequency<T: Real>(p: &ModelParams<T>) -> Result<T> {
    if p.n_battery() != 2 {
        return Err(Error::WrongCellCount { expected: 2, found: p.n_battery() });
    }
    if !p.is_resonant_flip_flop() || p.excitations() < 2 {
        return Err(Error::UnsupportedRegime("needs h = B, delta = 0 and m >= 2".into()));
    }
    let h = build_hamiltonian(p);
    let (u1, u2) = (h.offdiag()[0], h.offdiag()[1]);
    if !close_rel(u1, u2, T::lit(1e-9)) {
        return Err(Error::UnsupportedRegime(format!("u1 = {u1} differs from u2 = {u2}")));
    }
    Ok(u1.hypot(u2))
}

/// One grid point of a charging trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow<T> {
    pub t: T,
    pub populations: Vec<T>,
    pub report: ThermoReport<T>,
    /// `Σ|ψ_j|²`.
    pub norm: T,
    /// `⟨ψ(t)|H|ψ(t)⟩` in the ladder representation.
    pub total_energy: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargingTrace<T> {
    pub params: ModelParams<T>,
    pub rows: Vec<TraceRow<T>>,
}

impl<T: Real> ChargingTrace<T> {
    pub fn dim(&self) -> usize {
        self.params.subspace_dimension()
    }

    /// Largest deviation of the norm from 1 over the trace.
    pub fn max_norm_drift(&self) -> T {
        self.rows.iter().fold(T::zero(), |acc, r| acc.max((r.norm - T::one()).abs()))
    }

    /// Largest relative deviation of the total energy from its value at the
    /// first grid point.
    pub fn max_energy_drift(&self) -> T {
        let Some(first) = self.rows.first() else {
            return T::zero();
        };
        let scale = first.total_energy.abs().max(T::one());
        self.rows
            .iter()
            .fold(T::zero(), |acc, r| acc.max((r.total_energy - first.total_energy).abs() / scale))
    }
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(bad) = grid.iter().find(|t| !t.is_finite() || **t < T::zero()) {
        return Err(Error::InvalidGrid(format!("time {bad} is negative or not finite")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!("times not strictly increasing at {} -> {}", w[0], w[1])));
    }
    Ok(())
}

/// Evaluates populations and thermodynamics at every grid time. Grid points
/// are evaluated in parallel; rows come back in grid order.
pub fn trace<T: Real>(p: &ModelParams<T>, grid: &[T]) -> Result<ChargingTrace<T>> {
    check_grid(grid)?;
    let h = build_hamiltonian(p);
    let s = diagonalize(&h)?;
    let rows = grid
        .par_iter()
        .map(|&t| {
            let amps = evolve(&s, t);
            let pop = populations(&amps, p);
            TraceRow {
                t,
                report: thermo::report(&pop),
                norm: amps.norm_sqr(),
                total_energy: amps.expectation(&h),
                populations: pop.into_values(),
            }
        })
        .collect();
    Ok(ChargingTrace { params: *p, rows })
}

/// `n` uniform points on `[0, t_max]`, endpoints included.
pub fn uniform_grid<T: Real>(t_max: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => {
            let step = t_max / T::of(n - 1);
            (0..n).map(|i| if i + 1 == n { t_max } else { step * T::of(i) }).collect()
        }
    }
}

/// `n` uniform points on `[0, t_max)` with step `t_max / n`. Suited to
/// windows that span a period, where `t_max` would repeat `t = 0`.
pub fn periodic_grid<T: Real>(t_max: T, n: usize) -> Vec<T> {
    let step = t_max / T::of(n.max(1));
    (0..n).map(|i| step * T::of(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(b: f64, h: f64, a: f64, delta: f64, nb: usize, nc: usize, m: usize) -> ModelParams<f64> {
        ModelParams::new(b, h, a, delta, nb, nc, m).unwrap()
    }

    fn spectrum(p: &ModelParams<f64>) -> Spectrum<f64> {
        diagonalize(&build_hamiltonian(p)).unwrap()
    }

    #[test]
    fn identity_at_zero() {
        let p = params(1.0, 0.3, 1.2, 0.4, 4, 9, 6);
        let a = evolve(&spectrum(&p), 0.0);
        assert_relative_eq!(a.values[0].re, 1.0, epsilon = 1e-14);
        for z in &a.values[1..] {
            assert!(z.norm() < 1e-14);
        }
    }

    #[test]
    fn rabi_oscillation() {
        let p = params(1.0, 1.0, 1.0, 0.0, 1, 2, 1);
        let s = spectrum(&p);
        for i in 0..50 {
            let t = 0.1 * i as f64;
            let a = evolve(&s, t);
            assert_relative_eq!(a.values[1].norm_sqr(), (2f64.sqrt() * t).sin().powi(2), epsilon = 1e-12);
            assert!((a.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn populations_drop_phases() {
        let p = params(1.0, 1.0, 1.0, 0.0, 2, 4, 2);
        let a = Amplitudes { t: 0.0, values: vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)] };
        assert_eq!(populations(&a, &p).values(), &[1.0, 0.0, 0.0]);
        let p = params(1.0, 1.0, 1.0, 0.0, 1, 4, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = Amplitudes { t: 0.0, values: vec![Complex::new(h, 0.0), Complex::new(0.0, h)] };
        let pop = populations(&a, &p);
        assert_relative_eq!(pop.values()[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(pop.values()[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn nb1_closed_form() {
        let p = params(1.0, 1.0, 1.0, 0.0, 1, 2, 1);
        assert_eq!(populations_nb1(&p, 0.0).unwrap().values(), &[1.0, 0.0]);
        let u1 = 2f64.sqrt();
        let pop = populations_nb1(&p, std::f64::consts::PI / (2.0 * u1)).unwrap();
        assert!(pop.values()[0].abs() < 1e-15);
        assert_relative_eq!(pop.values()[1], 1.0, epsilon = 1e-15);

        let p = params(1.0, 4.0, 1.0, 0.0, 1, 20, 20);
        let t_charge = std::f64::consts::PI / (2.0 * 22.25f64.sqrt());
        let pop = populations_nb1(&p, t_charge).unwrap();
        assert_relative_eq!(pop.values()[0], 9.0 / 89.0, epsilon = 1e-14);
        assert_relative_eq!(pop.values()[1], 80.0 / 89.0, epsilon = 1e-14);
        let numeric = populations(&evolve(&spectrum(&p), t_charge), &p);
        assert_relative_eq!(numeric.values()[1], 80.0 / 89.0, epsilon = 1e-12);

        assert!(matches!(populations_nb1(&params(1.0, 1.0, 1.0, 0.0, 2, 2, 1), 0.0), Err(Error::WrongCellCount { .. })));
    }

    #[test]
    fn nb2_symmetric_closed_form() {
        let p = params(1.0, 1.0, 1.0, 0.0, 2, 10, 6);
        let omega = 120f64.sqrt();
        assert_eq!(populations_nb2_symmetric(&p, 0.0).unwrap().values(), &[1.0, 0.0, 0.0]);
        let quarter = populations_nb2_symmetric(&p, std::f64::consts::FRAC_PI_2 / omega).unwrap();
        for (x, y) in quarter.values().iter().zip([0.25, 0.5, 0.25]) {
            assert_relative_eq!(*x, y, epsilon = 1e-15);
        }
        let flipped = populations_nb2_symmetric(&p, std::f64::consts::PI / omega).unwrap();
        for (x, y) in flipped.values().iter().zip([0.0, 0.0, 1.0]) {
            assert_relative_eq!(*x, y, epsilon = 1e-15);
        }
        assert!(matches!(
            populations_nb2_symmetric(&params(1.0, 1.0, 1.0, 0.0, 2, 10, 3), 0.1),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn trace_single_point_and_errors() {
        let p = params(1.0, 1.0, 1.0, 0.0, 2, 10, 6);
        let tr = trace(&p, &[0.0]).unwrap();
        assert_eq!(tr.rows.len(), 1);
        let r = &tr.rows[0];
        assert_eq!(r.report.injected, 0.0);
        assert_eq!(r.report.ergotropy, 0.0);
        assert!(r.report.entropy.abs() < 1e-12);
        assert_eq!(trace::<f64>(&p, &[]).unwrap_err(), Error::EmptyGrid);
        assert!(matches!(trace(&p, &[0.0, 0.0]), Err(Error::InvalidGrid(_))));
        assert!(matches!(trace(&p, &[-1.0]), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn trace_matches_rabi_formula() {
        let p = params(1.0, 1.0, 1.0, 0.0, 1, 2, 1);
        let grid = uniform_grid(std::f64::consts::PI / 2f64.sqrt(), 257);
        let tr = trace(&p, &grid).unwrap();
        for row in &tr.rows {
            assert!((row.populations[1] - (2f64.sqrt() * row.t).sin().powi(2)).abs() <= 1e-10);
        }
    }

    #[test]
    fn ten_cell_trace_charges() {
        let p = params(1.0, 1.0, 1.0, 0.0, 10, 20, 20);
        let tr = trace(&p, &uniform_grid(1.0, 512)).unwrap();
        let best = tr.rows.iter().map(|r| r.report.injected).fold(0.0, f64::max);
        assert!(best > 0.0);
        assert!(tr.max_norm_drift() <= 1e-12);
        assert!(tr.max_energy_drift() <= 1e-10);
    }

    #[test]
    fn uniform_grid_endpoints() {
        assert!(uniform_grid(1.0f64, 0).is_empty());
        assert_eq!(uniform_grid(1.0f64, 1), vec![0.0]);
        let g = uniform_grid(2.0f64, 5);
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(periodic_grid(2.0f64, 4), vec![0.0, 0.5, 1.0, 1.5]);
        assert_eq!(periodic_grid(2.0f64, 1), vec![0.0]);
        assert!(periodic_grid(2.0f64, 0).is_empty());
    }

    proptest! {
        #[test]
        fn unitarity_and_energy_conservation(
            b in 0.1f64..3.0, h in -3.0f64..3.0, a in 0.0f64..2.0, delta in -1.0f64..1.0,
            nb in 1usize..=10, nc in 1usize..=30, m_frac in 0.0f64..=1.0, t in 0.0f64..20.0,
        ) {
            let m = (nc as f64 * m_frac).round() as usize;
            let p = params(b, h, a, delta, nb, nc, m);
            let ham = build_hamiltonian(&p);
            let s = diagonalize(&ham).unwrap();
            let a0 = evolve(&s, 0.0);
            let at = evolve(&s, t);
            let pop = populations(&at, &p);
            prop_assert!((pop.total() - 1.0).abs() <= 1e-12);
            prop_assert!(pop.values().iter().all(|&x| x >= 0.0));
            let (e0, et) = (a0.expectation(&ham), at.expectation(&ham));
            prop_assert!((e0 - et).abs() <= 1e-10 * e0.abs().max(1.0));
        }

        #[test]
        fn nb1_route_agreement(
            b in 0.1f64..3.0, h in -3.0f64..3.0, a in 0.0f64..2.0, delta in -1.0f64..1.0,
            nc in 1usize..=40, m_frac in 0.0f64..=1.0, t in 0.0f64..20.0,
        ) {
            let m = 1 + ((nc - 1) as f64 * m_frac).round() as usize;
            let p = params(b, h, a, delta, 1, nc, m);
            let closed = populations_nb1(&p, t).unwrap();
            let numeric = populations(&evolve(&spectrum(&p), t), &p);
            for (x, y) in closed.values().iter().zip(numeric.values()) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn nb1_periodicity(b in 0.1f64..3.0, h in -3.0f64..3.0, a in 0.1f64..2.0, nc in 1usize..=40, t in 0.0f64..10.0) {
            let p = params(b, h, a, 0.0, 1, nc, nc);
            let s = spectrum(&p);
            let period = 2.0 * std::f64::consts::PI / (s.eigenvalues()[1] - s.eigenvalues()[0]);
            let x = populations(&evolve(&s, t), &p);
            let y = populations(&evolve(&s, t + period), &p);
            for (u, v) in x.values().iter().zip(y.values()) {
                prop_assert!((u - v).abs() <= 1e-10);
            }
        }

        #[test]
        fn nb2_symmetric_route_agreement(a in 0.1f64..2.0, b in 0.1f64..3.0, half in 1usize..=200, t in 0.0f64..2.0) {
            // u1 = u2 exactly when N_c = 2m - 2
            let m = half + 1;
            let nc = 2 * m - 2;
            let p = params(b, b, a, 0.0, 2, nc, m);
            let closed = populations_nb2_symmetric(&p, t).unwrap();
            let numeric = populations(&evolve(&spectrum(&p), t), &p);
            for (x, y) in closed.values().iter().zip(numeric.values()) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }
    }
}
