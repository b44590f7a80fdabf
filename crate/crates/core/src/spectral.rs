//! Eigendecomposition of the ladder Hamiltonian.
//!
//! [`diagonalize`] handles any ladder through implicit-shift QL iterations.
//! [`spectrum_nb1`] and [`spectrum_nb2`] are the closed forms for one and
//! two battery cells; they never call the iterative solver and serve as an
//! independent route for cross-checks.

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams, TridiagonalHamiltonian};
use crate::scalar::Real;

/// Eigenvalues in ascending order and the orthonormal eigenvector matrix
/// `U`, whose column `k` belongs to `eigenvalues[k]`.
///
/// Columns are sign-normalized: the first component that is not at rounding
/// level is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    eigenvalues: Vec<T>,
    // row-major d x d
    vectors: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Sorts the pairs ascending and applies the sign convention. `vectors`
    /// is row-major with eigenvectors in columns.
    pub fn from_parts(eigenvalues: Vec<T>, vectors: Vec<T>) -> Self {
        let d = eigenvalues.len();
        assert_eq!(vectors.len(), d * d, "eigenvector matrix shape mismatch");
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eigenvalues[a].partial_cmp(&eigenvalues[b]).expect("finite eigenvalues"));
        let mut sorted_vectors = vec![T::zero(); d * d];
        for (new_col, &old_col) in order.iter().enumerate() {
            let pivot = (0..d)
                .map(|row| vectors[row * d + old_col])
                .find(|v| v.abs() > T::epsilon())
                .unwrap_or(T::zero());
            let sign = if pivot < T::zero() { -T::one() } else { T::one() };
            for row in 0..d {
                sorted_vectors[row * d + new_col] = sign * vectors[row * d + old_col];
            }
        }
        Self {
            eigenvalues: order.iter().map(|&k| eigenvalues[k]).collect(),
            vectors: sorted_vectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `U[row][col]`.
    pub fn vector(&self, row: usize, col: usize) -> T {
        self.vectors[row * self.dim() + col]
    }

    /// Column `k` of `U`.
    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        (0..self.dim()).map(|row| self.vector(row, k)).collect()
    }

    /// `max |U diag(λ) Uᵀ - H|`.
    pub fn reconstruction_error(&self, h: &TridiagonalHamiltonian<T>) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let rebuilt: T = (0..d).map(|k| self.vector(i, k) * self.eigenvalues[k] * self.vector(j, k)).sum();
                worst = worst.max((rebuilt - h.get(i, j)).abs());
            }
        }
        worst
    }

    /// `max |UᵀU - I|`.
    pub fn orthonormality_error(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for a in 0..d {
            for b in 0..d {
                let dot: T = (0..d).map(|row| self.vector(row, a) * self.vector(row, b)).sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Smallest pairwise eigenvalue gap above `tol`, if any.
    pub fn min_gap(&self, tol: T) -> Option<T> {
        let ev = &self.eigenvalues;
        let mut best: Option<T> = None;
        for i in 0..ev.len() {
            for j in i + 1..ev.len() {
                let g = (ev[j] - ev[i]).abs();
                if g > tol {
                    best = Some(best.map_or(g, |b| b.min(g)));
                }
            }
        }
        best
    }
}

/// Diagonalizes a symmetric tridiagonal matrix by QL iterations with
/// implicit Wilkinson-style shifts, accumulating the rotations into `U`.
///
/// Fails with [`Error::ConvergenceFailure`] after `50 d` sweeps in total.
pub fn diagonalize<T: Real>(h: &TridiagonalHamiltonian<T>) -> Result<Spectrum<T>> {
    let n = h.dim();
    let mut d = h.diag().to_vec();
    // e[i] couples rows i and i+1; the trailing slot is scratch
    let mut e: Vec<T> = h.offdiag().iter().copied().chain(std::iter::once(T::zero())).collect();
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }

    let cap = 50 * n;
    let mut sweeps = 0usize;
    let two = T::lit(2.0);
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(Error::ConvergenceFailure { iterations: cap });
            }

            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z[k * n + i + 1];
                    let zk0 = z[k * n + i];
                    z[k * n + i + 1] = s * zk0 + c * zk1;
                    z[k * n + i] = c * zk0 - s * zk1;
                }
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(Spectrum::from_parts(d, z))
}

/// Mixing angle of the one-cell battery, `θ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngle<T>(pub T);

impl<T: Real> MixingAngle<T> {
    pub fn radians(self) -> T {
        self.0
    }
}

fn require_cells<T: Real>(p: &ModelParams<T>, expected: usize) -> Result<()> {
    if p.n_battery() != expected {
        return Err(Error::WrongCellCount { expected, found: p.n_battery() });
    }
    Ok(())
}

/// Two-level closed form for `N_b = 1`.
///
/// With `R = sqrt(u_1² + (b_0 - b_1)²/4)`: `sin θ = u_1 / R`,
/// `cos θ = (b_0 - b_1) / 2R`, and the levels are `(b_0 + b_1)/2 ± R`.
/// The upper level `d_1` is `eigenvalues()[1]`, the lower `d_2` is
/// `eigenvalues()[0]`.
pub fn spectrum_nb1<T: Real>(p: &ModelParams<T>) -> Result<(MixingAngle<T>, Spectrum<T>)> {
    require_cells(p, 1)?;
    if p.excitations() == 0 {
        return Err(Error::UnsupportedRegime("one-cell closed form needs m >= 1".into()));
    }
    let h = build_hamiltonian(p);
    let two = T::lit(2.0);
    let (b0, b1, u1) = (h.diag()[0], h.diag()[1], h.offdiag()[0]);
    let half_split = (b0 - b1) / two;
    let radius = u1.hypot(half_split);
    let theta = u1.atan2(half_split);
    let mean = (b0 + b1) / two;
    let (c, s) = ((theta / two).cos(), (theta / two).sin());
    // U = exp(-iθσ^y/2): column for d_1 is (c, s), for d_2 it is (-s, c)
    let vectors = vec![c, -s, s, c];
    let spectrum = Spectrum::from_parts(vec![mean + radius, mean - radius], vectors);
    Ok((MixingAngle(theta), spectrum))
}

/// Three-level closed form for `N_b = 2`, `h = B`, `Δ = 0`.
///
/// The diagonal is flat at `e_1 = B(m - 1 - N_c/2)` and the side levels sit at
/// `e_1 ± ω`, `ω = sqrt(u_1² + u_2²)`. Ascending order is `(e_3, e_1, e_2)`.
pub fn spectrum_nb2<T: Real>(p: &ModelParams<T>) -> Result<Spectrum<T>> {
    require_cells(p, 2)?;
    if !p.is_resonant_flip_flop() {
        return Err(Error::UnsupportedRegime("two-cell closed form needs h = B and delta = 0".into()));
    }
    if p.excitations() < 2 {
        return Err(Error::UnsupportedRegime("two-cell closed form needs m >= 2".into()));
    }
    let h = build_hamiltonian(p);
    let (u1, u2) = (h.offdiag()[0], h.offdiag()[1]);
    let e1 = p.b_field() * (T::of(p.excitations()) - T::one() - T::of(p.n_charger()) / T::lit(2.0));
    let sum_sq = u1 * u1 + u2 * u2;
    let omega = sum_sq.sqrt();
    if omega == T::zero() {
        let mut identity = vec![T::zero(); 9];
        for i in 0..3 {
            identity[i * 3 + i] = T::one();
        }
        return Ok(Spectrum::from_parts(vec![e1; 3], identity));
    }
    let norm = (T::lit(2.0) * sum_sq).sqrt();
    let sqrt2 = T::lit(2.0).sqrt();
    // columns: e_1, e_2, e_3
    #[rustfmt::skip]
    let vectors = vec![
        sqrt2 * u2 / norm,  u1 / norm,     u1 / norm,
        T::zero(),          omega / norm, -omega / norm,
        -sqrt2 * u1 / norm, u2 / norm,     u2 / norm,
    ];
    Ok(Spectrum::from_parts(vec![e1, e1 + omega, e1 - omega], vectors))
}
