//! Model parameters and the invariant-subspace Hamiltonian.
//!
//! The total excitation number `S^z + J^z` is conserved, so starting from
//! `|0⟩_b ⊗ |m⟩_c` the dynamics stays on the ladder `|j⟩_b |m-j⟩_c`,
//! `j = 0..d`, where both factors are Dicke states. In that basis the
//! Hamiltonian is a real symmetric tridiagonal matrix.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unvalidated parameter record, as read from a command line or a config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams<T> {
    /// Battery field `B`.
    pub b_field: T,
    /// Charger field `h`.
    pub h_field: T,
    /// Flip-flop coupling `A`.
    pub coupling: T,
    /// Ising coupling `Δ`.
    pub ising: T,
    pub n_battery: usize,
    pub n_charger: usize,
    /// Initial number of up spins in the charger Dicke state.
    pub excitations: usize,
}

/// Validated physical parameters. Construct through [`validate_params`] or
/// [`ModelParams::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    b_field: T,
    h_field: T,
    coupling: T,
    ising: T,
    n_battery: usize,
    n_charger: usize,
    excitations: usize,
}

pub fn validate_params<T: Real>(raw: RawParams<T>) -> Result<ModelParams<T>> {
    for (field, v) in [
        ("B", raw.b_field),
        ("h", raw.h_field),
        ("A", raw.coupling),
        ("delta", raw.ising),
    ] {
        if !v.is_finite() {
            return Err(Error::NonFinite { field });
        }
    }
    if raw.b_field <= T::zero() {
        return Err(Error::NonPositiveB { value: raw.b_field.to_f64_lossy() });
    }
    if raw.n_battery == 0 {
        return Err(Error::NonPositiveCount { field: "N_b" });
    }
    if raw.n_charger == 0 {
        return Err(Error::NonPositiveCount { field: "N_c" });
    }
    if raw.excitations > raw.n_charger {
        return Err(Error::OutOfRangeM { m: raw.excitations, n_charger: raw.n_charger });
    }
    Ok(ModelParams {
        b_field: raw.b_field,
        h_field: raw.h_field,
        coupling: raw.coupling,
        ising: raw.ising,
        n_battery: raw.n_battery,
        n_charger: raw.n_charger,
        excitations: raw.excitations,
    })
}

impl<T: Real> ModelParams<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        b_field: T,
        h_field: T,
        coupling: T,
        ising: T,
        n_battery: usize,
        n_charger: usize,
        excitations: usize,
    ) -> Result<Self> {
        validate_params(RawParams {
            b_field,
            h_field,
            coupling,
            ising,
            n_battery,
            n_charger,
            excitations,
        })
    }

    pub fn b_field(&self) -> T {
        self.b_field
    }

    pub fn h_field(&self) -> T {
        self.h_field
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn ising(&self) -> T {
        self.ising
    }

    pub fn n_battery(&self) -> usize {
        self.n_battery
    }

    pub fn n_charger(&self) -> usize {
        self.n_charger
    }

    pub fn excitations(&self) -> usize {
        self.excitations
    }

    pub fn raw(&self) -> RawParams<T> {
        RawParams {
            b_field: self.b_field,
            h_field: self.h_field,
            coupling: self.coupling,
            ising: self.ising,
            n_battery: self.n_battery,
            n_charger: self.n_charger,
            excitations: self.excitations,
        }
    }

    /// Same parameters with a different charger excitation number.
    pub fn with_excitations(&self, m: usize) -> Result<Self> {
        validate_params(RawParams { excitations: m, ..self.raw() })
    }

    /// Ladder dimension `min(N_b, m) + 1`.
    pub fn subspace_dimension(&self) -> usize {
        subspace_dimension(self)
    }

    /// Bare battery energy `B (j - N_b/2)` of ladder level `j`.
    pub fn level_energy(&self, j: usize) -> T {
        self.b_field * (T::of(j) - T::of(self.n_battery) / T::lit(2.0))
    }

    /// Battery energy of the all-down initial state, `-B N_b / 2`.
    pub fn ground_energy(&self) -> T {
        self.level_energy(0)
    }

    /// `h == B` and `Δ == 0`, the regime where the two-cell closed forms apply.
    pub fn is_resonant_flip_flop(&self) -> bool {
        self.h_field == self.b_field && self.ising == T::zero()
    }
}

pub fn subspace_dimension<T: Real>(p: &ModelParams<T>) -> usize {
    p.n_battery.min(p.excitations) + 1
}

/// Real symmetric tridiagonal matrix on the excitation ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Real> TridiagonalHamiltonian<T> {
    /// Builds from raw diagonals. `offdiag.len()` must be `diag.len() - 1`.
    pub fn from_parts(diag: Vec<T>, offdiag: Vec<T>) -> Self {
        assert!(!diag.is_empty(), "tridiagonal matrix needs at least one row");
        assert_eq!(offdiag.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `b_0 .. b_{d-1}`.
    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    /// `u_1 .. u_{d-1}`; `offdiag()[j-1]` couples rows `j-1` and `j`.
    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    /// Matrix element `H[i][j]`.
    pub fn get(&self, i: usize, j: usize) -> T {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.offdiag[i.min(j)],
            _ => T::zero(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.diag
            .iter()
            .chain(self.offdiag.iter())
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    /// `H v` for a real vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc = acc + self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < d {
                    acc = acc + self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Leading principal `k × k` submatrix.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.dim());
        Self::from_parts(self.diag[..k].to_vec(), self.offdiag[..k - 1].to_vec())
    }
}

/// Diagonal element `b_j`.
fn ladder_diag<T: Real>(p: &ModelParams<T>, j: usize) -> T {
    let two = T::lit(2.0);
    let battery_z = T::of(j) - T::of(p.n_battery) / two;
    let charger_z = T::of(p.excitations) - T::of(j) - T::of(p.n_charger) / two;
    p.b_field * battery_z + p.h_field * charger_z + two * p.ising * battery_z * charger_z
}

/// Coupling `u_j`, `1 <= j < d`. Every factor under the root is positive
/// on the truncated ladder.
fn ladder_coupling<T: Real>(p: &ModelParams<T>, j: usize) -> T {
    debug_assert!(j >= 1 && j <= p.n_battery.min(p.excitations));
    let radicand = j * (p.n_battery - j + 1) * (p.n_charger - p.excitations + j) * (p.excitations - j + 1);
    p.coupling * T::of(radicand).sqrt()
}

pub fn build_hamiltonian<T: Real>(p: &ModelParams<T>) -> TridiagonalHamiltonian<T> {
    let d = subspace_dimension(p);
    let diag = (0..d).map(|j| ladder_diag(p, j)).collect();
    let offdiag = (1..d).map(|j| ladder_coupling(p, j)).collect();
    TridiagonalHamiltonian { diag, offdiag }
}
