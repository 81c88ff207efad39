//! Qubit exchanges acting on encoded states, and the logical Pauli pair
//! built from them on the four-qubit decoherence-free subspace.

use crate::error::{out_of_range, Error, Result};
use crate::protocols::encoding::{EncodingKind, LogicalEncoding};
use crate::quantum::{CMatrix, ONE};

/// Permutation matrix exchanging qubits `a` and `b` (1-based) of `n`.
pub fn swap_operator(n: usize, a: usize, b: usize) -> Result<CMatrix> {
    if n == 0 || n > crate::quantum::MAX_QUBITS {
        return Err(out_of_range("qubit count", n, format!("1..={}", crate::quantum::MAX_QUBITS)));
    }
    for q in [a, b] {
        if q == 0 || q > n {
            return Err(out_of_range("qubit index", q, format!("1..={n}")));
        }
    }
    if a == b {
        return Err(Error::InvalidOperator(format!("exchange needs two distinct qubits, got ({a} {b})")));
    }
    let dim = 1usize << n;
    let (sa, sb) = (n - a, n - b);
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let (ba, bb) = ((i >> sa) & 1, (i >> sb) & 1);
        let j = (i & !(1 << sa) & !(1 << sb)) | (ba << sb) | (bb << sa);
        m[(j, i)] = ONE;
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct ExchangeAction {
    /// `V† SWAP V`.
    pub matrix: CMatrix,
    /// `‖(I − P_code) SWAP V‖` (spectral norm).
    pub leakage: f64,
}

/// Action of the exchange `(a b)` on the code space of `enc`.
pub fn exchange_logical_action(a: usize, b: usize, enc: &LogicalEncoding) -> Result<ExchangeAction> {
    let swap = swap_operator(enc.n(), a, b)?;
    let v = enc.isometry();
    let moved = &swap * v;
    let matrix = v.adjoint() * &moved;
    let outside = &moved - v * &matrix;
    let leakage = outside.singular_values().iter().copied().fold(0.0, f64::max);
    Ok(ExchangeAction { matrix, leakage })
}

#[derive(Clone, Debug)]
pub struct LogicalPaulis {
    pub z: CMatrix,
    pub x: CMatrix,
}

/// `Z_L = −V† SWAP₁₂ V`; `X_L` is `V† SWAP₂₃ V` with its identity and
/// `Z_L` components removed (Hilbert–Schmidt Gram–Schmidt), then scaled to
/// square to the identity.
pub fn dfs_logical_paulis(enc: &LogicalEncoding) -> Result<LogicalPaulis> {
    if enc.kind() != EncodingKind::DfsJ0 || enc.n() != 4 || enc.logical_dim() != 2 {
        return Err(Error::InvalidOperator(
            "logical Paulis are defined for the four-qubit spin-zero code".into(),
        ));
    }
    let s12 = exchange_logical_action(1, 2, enc)?;
    let s23 = exchange_logical_action(2, 3, enc)?;
    let z = -s12.matrix;
    let id = CMatrix::identity(2, 2);
    let hs = |p: &CMatrix, q: &CMatrix| (p.adjoint() * q).trace() / 2.0;
    let rest = &s23.matrix - &id * hs(&id, &s23.matrix) - &z * hs(&z, &s23.matrix);
    let norm = hs(&rest, &rest).re.sqrt();
    if norm < 1e-12 {
        return Err(Error::InvalidOperator("exchange (2 3) adds no new logical direction".into()));
    }
    let x = rest.unscale(norm);
    Ok(LogicalPaulis { z, x })
}

/// `V O V†`.
pub fn physical_operator(enc: &LogicalEncoding, logical: &CMatrix) -> Result<CMatrix> {
    crate::quantum::check_dim(enc.logical_dim(), logical.nrows())?;
    Ok(enc.isometry() * logical * enc.isometry().adjoint())
}

/// `AB − BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{
        collective_rotation, haar_random_su2, max_abs_diff, r, StateVector, ZERO,
    };
    use crate::rng::RandomSource;

    #[test]
    fn swap_matrix_moves_bits() {
        let s = swap_operator(3, 1, 3).unwrap();
        let out = StateVector::from_bits("100").unwrap().apply(&s).unwrap();
        assert_eq!(out, StateVector::from_bits("001").unwrap());
        assert!(swap_operator(3, 2, 2).is_err());
        assert!(swap_operator(3, 0, 1).is_err());
        assert!(swap_operator(3, 1, 4).is_err());
    }

    #[test]
    fn swaps_commute_with_collective_rotations() {
        let mut rng = RandomSource::new(21);
        for (a, b) in [(1, 2), (2, 3), (1, 4)] {
            let s = swap_operator(4, a, b).unwrap();
            for _ in 0..20 {
                let u = collective_rotation(&haar_random_su2(&mut rng), 4).unwrap();
                assert!(max_abs_diff(&commutator(&s, &u), &CMatrix::zeros(16, 16)) < 1e-10);
            }
        }
    }

    #[test]
    fn exchange_12_and_34_are_diagonal() {
        let enc = LogicalEncoding::dfs_four_qubit_standard().unwrap();
        let diag = CMatrix::from_row_slice(2, 2, &[r(-1.0), ZERO, ZERO, r(1.0)]);
        for (a, b) in [(1, 2), (3, 4)] {
            let act = exchange_logical_action(a, b, &enc).unwrap();
            assert!(max_abs_diff(&act.matrix, &diag) < 1e-12);
            assert!(act.leakage < 1e-12);
        }
    }

    #[test]
    fn logical_paulis_anticommute() {
        let enc = LogicalEncoding::dfs_four_qubit_standard().unwrap();
        let p = dfs_logical_paulis(&enc).unwrap();
        let id = CMatrix::identity(2, 2);
        assert!(max_abs_diff(&(&p.z * &p.z), &id) < 1e-12);
        assert!(max_abs_diff(&(&p.x * &p.x), &id) < 1e-12);
        assert!(max_abs_diff(&anticommutator(&p.z, &p.x), &CMatrix::zeros(2, 2)) < 1e-12);
        assert!(dfs_logical_paulis(&LogicalEncoding::dephasing_code(2).unwrap()).is_err());
    }

    #[test]
    fn physical_operator_checks_dimension() {
        let enc = LogicalEncoding::dfs_four_qubit_standard().unwrap();
        assert!(physical_operator(&enc, &CMatrix::identity(3, 3)).is_err());
        let p = physical_operator(&enc, &CMatrix::identity(2, 2)).unwrap();
        assert!(max_abs_diff(&p, &enc.code_projector()) < 1e-15);
    }
}
