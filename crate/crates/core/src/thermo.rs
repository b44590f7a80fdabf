//! Thermodynamic figures of merit for a battery population vector.
//!
//! The reduced battery state is diagonal on the Dicke ladder, so every
//! quantity here is a function of the occupations `p_j` and the ladder
//! energies `B (j - N_b/2)`. Passive states are formed on that ladder only:
//! occupations sorted descending and assigned to ascending levels.

use crate::dynamics::BatteryPopulations;
use crate::scalar::Real;

/// Snapshot of battery thermodynamics at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoReport<T> {
    /// Entanglement entropy in bits.
    pub entropy: T,
    /// Battery energy `E`.
    pub energy: T,
    /// Initial (ground) energy `-B N_b / 2`.
    pub initial_energy: T,
    /// Injected energy `E - E(0)`.
    pub injected: T,
    /// Energy of the passive counterpart.
    pub passive: T,
    /// Ergotropy `E - E_p`.
    pub ergotropy: T,
}

/// Von Neumann entropy in bits, `0 log 0 = 0`. Occupations that round above
/// one contribute nothing, so the result is never negative.
pub fn entropy<T: Real>(pop: &BatteryPopulations<T>) -> T {
    shannon_bits(pop.values())
}

pub(crate) fn shannon_bits<T: Real>(p: &[T]) -> T {
    p.iter()
        .filter(|&&x| x > T::zero() && x < T::one())
        .map(|&x| -x * x.log2())
        .sum()
}

/// `Σ_j p_j · j`, the mean number of excited cells.
fn mean_excitation<T: Real>(p: &[T]) -> T {
    p.iter().enumerate().map(|(j, &x)| x * T::of(j)).sum()
}

fn descending<T: Real>(p: &[T]) -> Vec<T> {
    let mut q = p.to_vec();
    q.sort_by(|a, b| b.partial_cmp(a).expect("finite populations"));
    q
}

pub fn battery_energy<T: Real>(pop: &BatteryPopulations<T>) -> T {
    let params = pop.params();
    pop.values()
        .iter()
        .enumerate()
        .map(|(j, &x)| x * params.level_energy(j))
        .sum()
}

pub fn passive_energy<T: Real>(pop: &BatteryPopulations<T>) -> T {
    let params = pop.params();
    descending(pop.values())
        .into_iter()
        .enumerate()
        .map(|(j, q)| q * params.level_energy(j))
        .sum()
}

/// `E - E_p`, evaluated as `B Σ_j (p_j - q_j) j` so the constant level
/// offset cancels exactly. Nonnegative by the rearrangement inequality;
/// rounding-level negatives are reported as zero.
pub fn ergotropy<T: Real>(pop: &BatteryPopulations<T>) -> T {
    let p = pop.values();
    let q = descending(p);
    let diff = mean_excitation(p) - mean_excitation(&q);
    (pop.params().b_field() * diff).max(T::zero())
}

/// `E - E(0)`, evaluated as `B Σ_j p_j j`.
pub fn injected_energy<T: Real>(pop: &BatteryPopulations<T>) -> T {
    pop.params().b_field() * mean_excitation(pop.values())
}

pub fn report<T: Real>(pop: &BatteryPopulations<T>) -> ThermoReport<T> {
    let initial_energy = pop.params().ground_energy();
    let injected = injected_energy(pop);
    let ergotropy = ergotropy(pop);
    let energy = initial_energy + injected;
    ThermoReport {
        entropy: entropy(pop),
        energy,
        initial_energy,
        injected,
        passive: energy - ergotropy,
        ergotropy,
    }
}

/// Binary entropy `h₂(q)` in bits.
pub fn binary_entropy<T: Real>(q: T) -> T {
    shannon_bits(&[q, T::one() - q])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pop(nb: usize, p: &[f64]) -> BatteryPopulations<f64> {
        let params = ModelParams::new(1.0, 1.0, 1.0, 0.0, nb, 10, nb.max(p.len() - 1)).unwrap();
        BatteryPopulations::new(0.0, p.to_vec(), params)
    }

    /// Exhaustive minimum over level assignments.
    fn brute_passive(nb: usize, p: &[f64]) -> f64 {
        fn permute(rest: &mut Vec<usize>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(chosen.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                chosen.push(x);
                permute(rest, chosen, out);
                chosen.pop();
                rest.insert(i, x);
            }
        }
        let mut perms = Vec::new();
        permute(&mut (0..p.len()).collect(), &mut Vec::new(), &mut perms);
        perms
            .iter()
            .map(|s| s.iter().enumerate().map(|(j, &k)| p[k] * (j as f64 - nb as f64 / 2.0)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&pop(1, &[1.0, 0.0])), 0.0);
        assert_eq!(entropy(&pop(1, &[0.5, 0.5])), 1.0);
        assert_relative_eq!(entropy(&pop(2, &[0.25, 0.5, 0.25])), 1.5, epsilon = 1e-15);
        assert_eq!(entropy(&pop(1, &[1.0 + 4e-16, 0.0])), 0.0);
        assert!(entropy(&pop(1, &[1.0 + 4e-16, 1e-20])) >= 0.0);
    }

    #[test]
    fn energy_values() {
        assert_eq!(battery_energy(&pop(3, &[1.0, 0.0, 0.0, 0.0])), -1.5);
        assert_eq!(battery_energy(&pop(3, &[0.0, 0.0, 0.0, 1.0])), 1.5);
        let p = pop(2, &[1.0 / 49.0, 0.0, 48.0 / 49.0]);
        assert_relative_eq!(battery_energy(&p), 47.0 / 49.0, epsilon = 1e-15);
        assert_relative_eq!(injected_energy(&p), 96.0 / 49.0, epsilon = 1e-15);
        assert_relative_eq!(passive_energy(&p), -48.0 / 49.0, epsilon = 1e-15);
        assert_relative_eq!(ergotropy(&p), 95.0 / 49.0, epsilon = 1e-15);
    }

    #[test]
    fn passive_values() {
        let p = [0.2, 0.5, 0.3];
        assert_relative_eq!(brute_passive(2, &p), -0.3, epsilon = 1e-15);
        assert_relative_eq!(passive_energy(&pop(2, &p)), -0.3, epsilon = 1e-15);
        let already = pop(2, &[0.6, 0.3, 0.1]);
        assert_relative_eq!(passive_energy(&already), battery_energy(&already), epsilon = 1e-15);
        assert_eq!(ergotropy(&already), 0.0);
    }

    #[test]
    fn ground_and_inverted() {
        let ground = pop(1, &[1.0, 0.0]);
        assert_eq!(ergotropy(&ground), 0.0);
        assert_eq!(injected_energy(&ground), 0.0);
        let inverted = pop(1, &[0.0, 1.0]);
        assert_eq!(injected_energy(&inverted), 1.0);
        assert_eq!(ergotropy(&inverted), 1.0);
        let r = -71.0 / 89.0;
        let p = pop(1, &[(1.0 + r) / 2.0, (1.0 - r) / 2.0]);
        assert_relative_eq!(ergotropy(&p), 71.0 / 89.0, epsilon = 1e-15);
    }

    #[test]
    fn report_is_consistent() {
        let r = report(&pop(2, &[0.2, 0.5, 0.3]));
        assert_relative_eq!(r.energy, 0.1, epsilon = 1e-15);
        assert_relative_eq!(r.injected, 1.1, epsilon = 1e-15);
        assert_relative_eq!(r.passive, -0.3, epsilon = 1e-15);
        assert_relative_eq!(r.ergotropy, 0.4, epsilon = 1e-15);
        assert_eq!(r.initial_energy, -1.0);
    }

    fn arb_distribution(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_map(|w| {
            let total: f64 = w.iter().sum();
            if total == 0.0 {
                let n = w.len() as f64;
                w.iter().map(|_| 1.0 / n).collect()
            } else {
                w.iter().map(|x| x / total).collect()
            }
        })
    }

    proptest! {
        #[test]
        fn passive_is_optimal(p in arb_distribution(6)) {
            let nb = p.len() - 1;
            let b = pop(nb.max(1), &p);
            prop_assert!((passive_energy(&b) - brute_passive(nb.max(1), &p)).abs() <= 1e-14);
        }

        #[test]
        fn ergotropy_bounds(p in arb_distribution(7)) {
            let b = pop((p.len() - 1).max(1), &p);
            let e = ergotropy(&b);
            prop_assert!(e >= 0.0);
            prop_assert!(e <= injected_energy(&b) + 1e-14);
            prop_assert!(entropy(&b) <= (p.len() as f64).log2() + 1e-12);
        }

        #[test]
        fn entropy_concave(p in arb_distribution(5), q_raw in prop::collection::vec(0.0f64..1.0, 5), lambda in 0.0f64..1.0) {
            let n = p.len();
            let total: f64 = q_raw[..n].iter().sum();
            prop_assume!(total > 0.0);
            let q: Vec<f64> = q_raw[..n].iter().map(|x| x / total).collect();
            let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
            let lhs = shannon_bits(&mix);
            let rhs = lambda * shannon_bits(&p) + (1.0 - lambda) * shannon_bits(&q);
            prop_assert!(lhs >= rhs - 1e-12);
        }

        #[test]
        fn one_cell_entropy_ergotropy_anti_ordering(ra in -1.0f64..0.0, rb in -1.0f64..0.0) {
            let mk = |r: f64| pop(1, &[(1.0 + r) / 2.0, (1.0 - r) / 2.0]);
            let (a, b) = (mk(ra), mk(rb));
            prop_assert!((ergotropy(&a) - (-ra)).abs() <= 1e-15);
            prop_assert!((entropy(&a) - binary_entropy((1.0 + ra) / 2.0)).abs() <= 1e-15);
            prop_assume!((ra - rb).abs() > 1e-6);
            let (ea, eb) = (ergotropy(&a), ergotropy(&b));
            let (sa, sb) = (entropy(&a), entropy(&b));
            prop_assert_eq!(ea > eb, sa < sb);
        }
    }
}
