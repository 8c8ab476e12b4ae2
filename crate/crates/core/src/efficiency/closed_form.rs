//! Closed-form averages for real channel parameters and real `m`.

use crate::channel::DisentanglementParams;
use crate::entanglement::concurrence_param as c;
use crate::protocol::CopySlot;

fn prefactor(params: &DisentanglementParams, m: f64) -> f64 {
    let [np, na, n1, n2] = params.as_array();
    let a2 = 1.0
        / (1.0
            + (np * n1).powi(2) / 4.0
            + (na * n1).powi(2) / 4.0
            + (np * n2).powi(2) / 4.0
            + (na * n2).powi(2) / 4.0
            + (np * na * n1 * n2).powi(2));
    a2 / (1.0 + m * m)
}

/// `⟨P_j⟩` over Haar inputs, in `Outcome::ALL` order.
pub fn avg_probabilities(params: &DisentanglementParams, m: f64) -> [f64; 4] {
    let [np, na, n1, n2] = params.as_array().map(|x| x * x);
    let m2 = m * m;
    let k = prefactor(params, m) / 2.0;
    let even =
        k * (1.0 + np * n1 * m2 / 4.0 + na * n1 / 4.0 + np * n2 * m2 / 4.0 + na * n2 / 4.0 + np * na * n1 * n2 * m2);
    let odd = k * (m2 + np * n1 / 4.0 + na * n1 * m2 / 4.0 + np * n2 / 4.0 + na * n2 * m2 / 4.0 + np * na * n1 * n2);
    [even, odd, odd, even]
}

/// `⟨P_j F_{k,j}⟩` over Haar inputs, in `Outcome::ALL` order.
pub fn avg_fp(params: &DisentanglementParams, m: f64, copy: CopySlot) -> [f64; 4] {
    let p = match copy {
        CopySlot::First => *params,
        CopySlot::Second => params.swap_copies(),
    };
    let [np, na, n1, n2] = p.as_array();
    let (np2, na2, n12, n22, m2) = (np * np, na * na, n1 * n1, n2 * n2, m * m);
    let k = prefactor(&p, m) / 3.0;
    let cross = np * n1 * m / 2.0 + np * na2 * n1 * n22 * m / 2.0;
    let even = k
        * (1.0
            + na2 * n12 / 8.0
            + na2 * n22 / 4.0
            + cross
            + np2 * n12 * m2 / 4.0
            + np2 * n22 * m2 / 8.0
            + np2 * na2 * n12 * n22 * m2);
    let odd = k
        * (m2
            + na2 * n12 * m2 / 8.0
            + na2 * n22 * m2 / 4.0
            + cross
            + np2 * n12 / 4.0
            + np2 * n22 / 8.0
            + np2 * na2 * n12 * n22);
    [even, odd, odd, even]
}

/// Efficiency of one copy for general real parameters.
pub fn cpro_general(params: &DisentanglementParams, m: f64, copy: CopySlot) -> f64 {
    let p = match copy {
        CopySlot::First => *params,
        CopySlot::Second => params.swap_copies(),
    };
    let [np, na, n1, n2] = p.as_array();
    let (np2, na2, n12, n22) = (np * np, na * na, n1 * n1, n2 * n2);
    let f = (1.0 + np2) * (1.0 + n12) * (1.0 + na2 * n22) * c(np) * c(n1) * c(m) - (na2 * n12 + np2 * n22);
    let g = (np2 + na2) * (n12 + n22) + 4.0 * (1.0 + np2 * na2 * n12 * n22);
    2.0 / 3.0 * (1.0 + f / (2.0 * g))
}

/// Only the port disentangled: `(11/18)(1 + 4 c(m) c(n_P)/11)`, same for both copies.
pub fn cpro_port(n_p: f64, m: f64) -> f64 {
    11.0 / 18.0 * (1.0 + 4.0 * c(m) * c(n_p) / 11.0)
}

/// Only the ancilla disentangled. The result does not depend on `n_A`.
pub fn cpro_ancilla(_n_a: f64, m: f64) -> f64 {
    11.0 / 18.0 * (1.0 + 4.0 * c(m) / 11.0)
}

/// Only the copies disentangled.
pub fn cpro_copy(n_c1: f64, n_c2: f64, m: f64, copy: CopySlot) -> f64 {
    let (own, other) = match copy {
        CopySlot::First => (n_c1, n_c2),
        CopySlot::Second => (n_c2, n_c1),
    };
    let (a, b) = (own * own, other * other);
    let lambda = (1.0 + a) * (1.0 + b) / (1.0 + a * b);
    let k1 = 1.0 / (1.0 + lambda);
    let k2 = 1.0 / (1.0 + 1.0 / lambda);
    0.5 * (1.0 + 2.0 / 3.0 * (k1 + k2 * c(own) * c(m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn ideal_point() {
        let p = DisentanglementParams::IDEAL;
        for copy in CopySlot::BOTH {
            assert!((cpro_general(&p, 1.0, copy) - 5.0 / 6.0).abs() < EPS);
            assert!((avg_fp(&p, 1.0, copy).iter().sum::<f64>() - 5.0 / 6.0).abs() < EPS);
        }
        for v in avg_probabilities(&p, 1.0) {
            assert!((v - 0.25).abs() < EPS);
        }
    }

    #[test]
    fn special_cases_agree_with_general_form() {
        for &x in &[0.0, 0.2, 0.55, 0.9, 1.0] {
            for &m in &[0.0, 0.3, 0.8, 1.0] {
                let g = |p: DisentanglementParams, copy| cpro_general(&p, m, copy);
                for copy in CopySlot::BOTH {
                    assert!((g(DisentanglementParams::new(x, 1.0, 1.0, 1.0), copy) - cpro_port(x, m)).abs() < EPS);
                    assert!((g(DisentanglementParams::new(1.0, x, 1.0, 1.0), copy) - cpro_ancilla(x, m)).abs() < EPS);
                    let y = 1.0 - 0.5 * x;
                    let cp = DisentanglementParams::new(1.0, 1.0, x, y);
                    assert!((g(cp, copy) - cpro_copy(x, y, m, copy)).abs() < EPS);
                }
            }
        }
    }

    #[test]
    fn fp_sum_matches_general_form() {
        let p = DisentanglementParams::new(0.35, 0.75, 0.45, 0.95);
        for copy in CopySlot::BOTH {
            let sum: f64 = avg_fp(&p, 0.6, copy).iter().sum();
            assert!((sum - cpro_general(&p, 0.6, copy)).abs() < EPS);
        }
    }

    #[test]
    fn frozen_values() {
        assert!((cpro_port(0.5, 1.0) - 0.788888888888889).abs() < EPS);
        assert!((cpro_ancilla(0.1, 0.5) - 0.788888888888889).abs() < EPS);
        assert!((cpro_port(1.0, 0.0) - 11.0 / 18.0).abs() < EPS);
    }
}
