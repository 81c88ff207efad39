//! Communication rates per physical qubit, from exact integer combinatorics.

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result};
use crate::irrep::{binomial, multiplicity, total_irrep_count};
use crate::protocols::encoding::j_max;

pub const MAX_RATE_QUBITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    /// Bits per qubit.
    pub classical_rate: f64,
    /// Logical qubits per qubit, noiseless subsystem on `j_max`.
    pub quantum_rate: f64,
    /// Logical qubits per qubit under collective dephasing only.
    pub dephasing_quantum_rate: f64,
    /// `1 − log₂(n)/(2n) − classical_rate`.
    pub asymptotic_gap: f64,
    /// Twice the spin of greatest multiplicity.
    pub j2_max: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn row(&self, n: usize) -> Option<&RateRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// `1 − log₂(n)/(2n)`, the large-`n` form of the classical rate.
pub fn classical_asymptote(n: usize) -> f64 {
    let n = n as f64;
    1.0 - n.log2() / (2.0 * n)
}

/// `1 − log₂(n)/n`, the large-`n` form of the quantum rate.
pub fn quantum_asymptote(n: usize) -> f64 {
    let n = n as f64;
    1.0 - n.log2() / n
}

fn per_qubit(count: u128, n: usize) -> f64 {
    (count as f64).log2() / n as f64
}

pub fn rate_row(n: usize) -> Result<RateRow> {
    if n == 0 || n > MAX_RATE_QUBITS {
        return Err(out_of_range("qubit count", n, format!("1..={MAX_RATE_QUBITS}")));
    }
    let classical_rate = per_qubit(total_irrep_count(n)?, n);
    let jm = j_max(n)?;
    Ok(RateRow {
        n,
        classical_rate,
        quantum_rate: per_qubit(multiplicity(n, jm)?, n),
        dephasing_quantum_rate: per_qubit(binomial(n as u64, n as u64 / 2), n),
        asymptotic_gap: classical_asymptote(n) - classical_rate,
        j2_max: jm.twice() as u32,
    })
}

/// Rows for `n = 1..=n_max`.
pub fn rate_table(n_max: usize) -> Result<RateTable> {
    if n_max == 0 || n_max > MAX_RATE_QUBITS {
        return Err(out_of_range("n_max", n_max, format!("1..={MAX_RATE_QUBITS}")));
    }
    let rows = (1..=n_max).map(rate_row).collect::<Result<Vec<_>>>()?;
    Ok(RateTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let t = rate_table(20).unwrap();
        assert_eq!(t.rows.len(), 20);
        assert_eq!(t.row(2).unwrap().classical_rate, 0.5);
        assert!((t.row(4).unwrap().classical_rate - 6f64.log2() / 4.0).abs() < 1e-15);
        assert!((t.row(20).unwrap().classical_rate - 0.8747).abs() < 1e-4);
        assert!(t.row(20).unwrap().asymptotic_gap < t.row(10).unwrap().asymptotic_gap);
        assert!((t.row(3).unwrap().quantum_rate - 1.0 / 3.0).abs() < 1e-15);
        assert!((t.row(4).unwrap().quantum_rate - 3f64.log2() / 4.0).abs() < 1e-15);
        assert_eq!(t.row(4).unwrap().j2_max, 2);
        assert_eq!(t.row(2).unwrap().quantum_rate, 0.0);
        assert_eq!(t.row(2).unwrap().dephasing_quantum_rate, 0.5);
    }

    #[test]
    fn bounds_and_monotonicity() {
        let t = rate_table(64).unwrap();
        for row in &t.rows {
            for v in [row.classical_rate, row.quantum_rate, row.dephasing_quantum_rate] {
                assert!((0.0..=1.0).contains(&v), "{row:?}");
            }
            assert!(row.quantum_rate <= row.dephasing_quantum_rate + 1e-15);
        }
        let even: Vec<f64> = t.rows.iter().filter(|r| r.n % 2 == 0).map(|r| r.classical_rate).collect();
        assert!(even.windows(2).all(|w| w[1] >= w[0]));
        assert!(t.row(64).unwrap().classical_rate >= 0.90);
    }

    #[test]
    fn range_checks() {
        assert!(rate_table(0).is_err());
        assert!(rate_table(65).is_err());
    }
}
