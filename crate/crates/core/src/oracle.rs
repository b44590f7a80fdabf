//! Brute-force reference in the full `2^(N_b + N_c)` qubit space.
//!
//! Nothing here uses the Dicke-ladder reduction: the Hamiltonian is assembled
//! from single-spin flips on computational basis states, evolved by dense
//! diagonalization, and the charger is traced out explicitly. Only at the end
//! is the battery state projected onto its Dicke states so the result can be
//! compared with the ladder engine.
//!
//! Basis index layout: battery qubits occupy the low `N_b` bits, charger
//! qubits the next `N_c` bits; bit `q` set means qubit `q` is up.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::{evolve, populations, BatteryPopulations};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams};
use crate::spectral::diagonalize;
use crate::thermo;

/// Largest total qubit count the oracle accepts.
pub const MAX_QUBITS: usize = 12;
/// Largest ladder dimension for the permutation search.
pub const MAX_PERMUTATION_DIM: usize = 8;

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooLarge { what: "qubit count", size: n, limit: MAX_QUBITS });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dicke state of `n` qubits with `m` up spins as a real amplitude vector.
pub fn dicke_vector(n: usize, m: usize) -> Result<Vec<f64>> {
    check_qubits(n)?;
    if m > n {
        return Err(Error::OutOfRangeM { m, n_charger: n });
    }
    let amp = 1.0 / binomial(n, m).sqrt();
    Ok((0..1usize << n).map(|s| if s.count_ones() as usize == m { amp } else { 0.0 }).collect())
}

/// Full state vector with the battery/charger bit layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub values: Vec<Complex64>,
    pub n_battery: usize,
    pub n_charger: usize,
}

impl DenseState {
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Amplitude of battery configuration `b` and charger configuration `c`.
    pub fn amplitude(&self, b: usize, c: usize) -> Complex64 {
        self.values[b | (c << self.n_battery)]
    }

    /// `|0⟩_b ⊗ |m⟩_c`.
    pub fn initial(p: &ModelParams<f64>) -> Result<Self> {
        check_qubits(p.n_battery() + p.n_charger())?;
        let charger = dicke_vector(p.n_charger(), p.excitations())?;
        let mut values = vec![Complex64::new(0.0, 0.0); 1 << (p.n_battery() + p.n_charger())];
        for (c, amp) in charger.into_iter().enumerate() {
            values[c << p.n_battery()] = Complex64::new(amp, 0.0);
        }
        Ok(Self { values, n_battery: p.n_battery(), n_charger: p.n_charger() })
    }
}

fn half_count(bits: usize, n: usize) -> f64 {
    bits.count_ones() as f64 - n as f64 / 2.0
}

/// Dense `H = B S^z + h J^z + A (S^+ J^- + S^- J^+) + 2Δ S^z J^z`.
pub fn full_hamiltonian(p: &ModelParams<f64>) -> Result<DMatrix<f64>> {
    let (nb, nc) = (p.n_battery(), p.n_charger());
    check_qubits(nb + nc)?;
    let dim = 1usize << (nb + nc);
    let battery_mask = (1usize << nb) - 1;
    let mut h = DMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let (b, c) = (idx & battery_mask, idx >> nb);
        let sz = half_count(b, nb);
        let jz = half_count(c, nc);
        h[(idx, idx)] = p.b_field() * sz + p.h_field() * jz + 2.0 * p.ising() * sz * jz;
        // raise battery qubit i, lower charger qubit k; the reverse flip is the transpose
        for i in (0..nb).filter(|i| b & (1 << i) == 0) {
            for k in (0..nc).filter(|k| c & (1 << k) != 0) {
                let target = (b | (1 << i)) | ((c & !(1 << k)) << nb);
                h[(target, idx)] += p.coupling();
                h[(idx, target)] += p.coupling();
            }
        }
    }
    Ok(h)
}

/// `max |[H, S^z + J^z]|` for a dense Hamiltonian on `n` qubits.
pub fn excitation_commutator_norm(h: &DMatrix<f64>, n: usize) -> f64 {
    let dim = 1usize << n;
    assert_eq!(h.nrows(), dim);
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            // Z is diagonal, so [H, Z]_ij = H_ij (z_j - z_i)
            let dz = j.count_ones() as f64 - i.count_ones() as f64;
            worst = worst.max((h[(i, j)] * dz).abs());
        }
    }
    worst
}

/// Observables extracted from the full state at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSnapshot {
    /// Battery Dicke-ladder occupations `j = 0..d`.
    pub populations: BatteryPopulations<f64>,
    /// Battery weight outside the first `d` Dicke states.
    pub leakage: f64,
    /// Largest `|⟨D_i|ρ_b|D_j⟩|`, `i ≠ j`.
    pub ladder_coherence: f64,
    /// Entanglement entropy from the spectrum of the smaller reduced state.
    pub entropy: f64,
    /// `Tr(ρ_b B S^z)` from the full state.
    pub energy: f64,
}

impl OracleSnapshot {
    /// Ergotropy with the same ladder passive convention as [`thermo`].
    pub fn ergotropy(&self) -> Result<f64> {
        Ok(self.energy - passive_energy_bruteforce(&self.populations)?)
    }
}

/// Dense propagator for one parameter set.
///
/// `[H, S^z + J^z] = 0`, so only the computational basis states of Hamming
/// weight `m` are reachable; the dense eigenproblem is solved on that block.
pub struct BruteForce {
    params: ModelParams<f64>,
    sector: Vec<usize>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    // initial state in the eigenbasis
    weights: Vec<f64>,
    battery_dicke: Vec<Vec<f64>>,
}

impl BruteForce {
    pub fn new(p: &ModelParams<f64>) -> Result<Self> {
        let n = p.n_battery() + p.n_charger();
        check_qubits(n)?;
        let h = full_hamiltonian(p)?;
        let sector: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() as usize == p.excitations()).collect();
        let block = DMatrix::from_fn(sector.len(), sector.len(), |i, j| h[(sector[i], sector[j])]);
        let eig = SymmetricEigen::new(block);
        let psi0 = DenseState::initial(p)?;
        let weights = (0..sector.len())
            .map(|k| (0..sector.len()).map(|i| eig.eigenvectors[(i, k)] * psi0.values[sector[i]].re).sum())
            .collect();
        let battery_dicke = (0..=p.n_battery()).map(|j| dicke_vector(p.n_battery(), j)).collect::<Result<_>>()?;
        Ok(Self {
            params: *p,
            sector,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
            weights,
            battery_dicke,
        })
    }

    pub fn state(&self, t: f64) -> DenseState {
        let (nb, nc) = (self.params.n_battery(), self.params.n_charger());
        let mut values = vec![Complex64::new(0.0, 0.0); 1 << (nb + nc)];
        let phased: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| Complex64::from_polar(w, -e * t))
            .collect();
        for (i, &idx) in self.sector.iter().enumerate() {
            values[idx] = (0..phased.len()).map(|k| phased[k] * self.eigenvectors[(i, k)]).sum();
        }
        DenseState { values, n_battery: nb, n_charger: nc }
    }

    pub fn snapshot(&self, t: f64) -> OracleSnapshot {
        let psi = self.state(t);
        let (nb, nc) = (psi.n_battery, psi.n_charger);
        let d = self.params.subspace_dimension();

        // φ_j(c) = Σ_b D_j(b) ψ(b, c)
        let projected: Vec<Vec<Complex64>> = self
            .battery_dicke
            .iter()
            .map(|dj| {
                (0..1usize << nc)
                    .map(|c| (0..1usize << nb).map(|b| psi.amplitude(b, c) * dj[b]).sum())
                    .collect()
            })
            .collect();
        let overlap = |i: usize, j: usize| -> Complex64 {
            projected[i].iter().zip(&projected[j]).map(|(a, b)| a.conj() * b).sum()
        };
        let ladder: Vec<f64> = (0..=nb).map(|j| overlap(j, j).re).collect();
        let mut ladder_coherence = 0.0f64;
        for i in 0..=nb {
            for j in i + 1..=nb {
                ladder_coherence = ladder_coherence.max(overlap(i, j).norm());
            }
        }
        let leakage = (psi.norm_sqr() - ladder[..d].iter().sum::<f64>()).abs();

        let energy = self.params.b_field()
            * (0..1usize << nb)
                .flat_map(|b| (0..1usize << nc).map(move |c| (b, c)))
                .map(|(b, c)| psi.amplitude(b, c).norm_sqr() * half_count(b, nb))
                .sum::<f64>();

        OracleSnapshot {
            populations: BatteryPopulations::new(t, ladder[..d].to_vec(), self.params),
            leakage,
            ladder_coherence,
            entropy: reduced_entropy(&psi),
            energy,
        }
    }
}

/// Von Neumann entropy (bits) of the smaller side of the bipartition.
fn reduced_entropy(psi: &DenseState) -> f64 {
    let (nb, nc) = (psi.n_battery, psi.n_charger);
    let keep_battery = nb <= nc;
    let (dk, dt) = if keep_battery { (1usize << nb, 1usize << nc) } else { (1usize << nc, 1usize << nb) };
    let amp = |kept: usize, traced: usize| {
        if keep_battery {
            psi.amplitude(kept, traced)
        } else {
            psi.amplitude(traced, kept)
        }
    };
    let rho = DMatrix::from_fn(dk, dk, |i, j| (0..dt).map(|x| amp(i, x) * amp(j, x).conj()).sum::<Complex64>());
    SymmetricEigen::new(rho)
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

pub fn brute_force_populations(p: &ModelParams<f64>, t: f64) -> Result<BatteryPopulations<f64>> {
    Ok(BruteForce::new(p)?.snapshot(t).populations)
}

/// Minimum of `Σ_j p_σ(j) ε_j` over every permutation `σ` of the ladder.
pub fn passive_energy_bruteforce(pop: &BatteryPopulations<f64>) -> Result<f64> {
    let p = pop.values();
    if p.len() > MAX_PERMUTATION_DIM {
        return Err(Error::TooLarge { what: "ladder dimension", size: p.len(), limit: MAX_PERMUTATION_DIM });
    }
    let levels: Vec<f64> = (0..p.len()).map(|j| pop.params().level_energy(j)).collect();
    let mut order: Vec<usize> = (0..p.len()).collect();
    let mut best = f64::INFINITY;
    // Heap's algorithm
    let mut counters = vec![0usize; p.len()];
    let energy = |order: &[usize]| order.iter().zip(&levels).map(|(&k, &e)| p[k] * e).sum::<f64>();
    best = best.min(energy(&order));
    let mut i = 1;
    while i < p.len() {
        if counters[i] < i {
            let swap_with = if i % 2 == 0 { 0 } else { counters[i] };
            order.swap(swap_with, i);
            best = best.min(energy(&order));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Worst-case differences between the oracle and the ladder engine.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeviationReport {
    pub times: usize,
    pub populations: f64,
    pub entropy: f64,
    pub energy: f64,
    pub ergotropy: f64,
    pub leakage: f64,
    pub ladder_coherence: f64,
}

impl DeviationReport {
    pub fn max_deviation(&self) -> f64 {
        [self.populations, self.entropy, self.energy, self.ergotropy, self.leakage, self.ladder_coherence]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// Runs both engines at every time and records the largest deviations.
pub fn compare(p: &ModelParams<f64>, times: &[f64]) -> Result<DeviationReport> {
    let oracle = BruteForce::new(p)?;
    let spectrum = diagonalize(&build_hamiltonian(p))?;
    let mut report = DeviationReport { times: times.len(), ..Default::default() };
    for &t in times {
        let snap = oracle.snapshot(t);
        let ladder = populations(&evolve(&spectrum, t), p);
        let thermo = thermo::report(&ladder);
        let pop_dev = snap
            .populations
            .values()
            .iter()
            .zip(ladder.values())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        report.populations = report.populations.max(pop_dev);
        report.entropy = report.entropy.max((snap.entropy - thermo.entropy).abs());
        report.energy = report.energy.max((snap.energy - thermo.energy).abs());
        report.ergotropy = report.ergotropy.max((snap.ergotropy()? - thermo.ergotropy).abs());
        report.leakage = report.leakage.max(snap.leakage);
        report.ladder_coherence = report.ladder_coherence.max(snap.ladder_coherence);
    }
    Ok(report)
}
