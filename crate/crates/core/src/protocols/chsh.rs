//! CHSH test on a logical Bell pair shared between two four-qubit
//! decoherence-free blocks, each sent through its own unknown frame.

use rayon::prelude::*;

use crate::error::{out_of_range, Result};
use crate::protocols::encoding::LogicalEncoding;
use crate::protocols::gates::{dfs_logical_paulis, physical_operator};
use crate::quantum::{collective_rotation, haar_random_su2, CMatrix, GroupElement};
use crate::rng::RandomSource;

/// Physical observables for one party.
#[derive(Clone, Debug)]
pub struct ChshSettings {
    pub a0: CMatrix,
    pub a1: CMatrix,
    pub b0: CMatrix,
    pub b1: CMatrix,
}

/// `A₀ = Z_L`, `A₁ = X_L`, `B± = (Z_L ± X_L)/√2`, lifted to 16 dimensions.
pub fn logical_chsh_settings(enc: &LogicalEncoding) -> Result<ChshSettings> {
    let p = dfs_logical_paulis(enc)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let b0 = (&p.z + &p.x).scale(s);
    let b1 = (&p.z - &p.x).scale(s);
    Ok(ChshSettings {
        a0: physical_operator(enc, &p.z)?,
        a1: physical_operator(enc, &p.x)?,
        b0: physical_operator(enc, &b0)?,
        b1: physical_operator(enc, &b1)?,
    })
}

/// `(|0_L 0_L⟩ + |1_L 1_L⟩)/√2` on eight qubits, reshaped so that
/// `ψ[a, b]` is the amplitude of Alice's basis state `a` and Bob's `b`.
pub fn logical_bell_pair(enc: &LogicalEncoding) -> CMatrix {
    let v = enc.isometry();
    (v * v.transpose()).scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// `⟨ψ| A ⊗ B |ψ⟩ = tr(ψ† A ψ Bᵀ)`.
fn correlator(psi: &CMatrix, a: &CMatrix, b: &CMatrix) -> f64 {
    (psi.adjoint() * a * psi * b.transpose()).trace().re
}

/// `⟨A₀B₀⟩ + ⟨A₀B₁⟩ + ⟨A₁B₀⟩ − ⟨A₁B₁⟩` after rotating Alice's block by
/// `ga` and Bob's by `gb`.
pub fn chsh_value(
    psi: &CMatrix,
    settings: &ChshSettings,
    ga: &GroupElement,
    gb: &GroupElement,
) -> Result<f64> {
    let ua = collective_rotation(ga, 4)?;
    let ub = collective_rotation(gb, 4)?;
    let rotated = ua * psi * ub.transpose();
    let s = settings;
    Ok(correlator(&rotated, &s.a0, &s.b0) + correlator(&rotated, &s.a0, &s.b1)
        + correlator(&rotated, &s.a1, &s.b0)
        - correlator(&rotated, &s.a1, &s.b1))
}

/// CHSH value of every trial; trial `t` draws both rotations from
/// `rng.split(t)`.
pub fn logical_bell_chsh_trials(rng: &RandomSource, trials: usize) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(out_of_range("rotation trials", 0, "≥ 1"));
    }
    let enc = LogicalEncoding::dfs_four_qubit_standard()?;
    let settings = logical_chsh_settings(&enc)?;
    let psi = logical_bell_pair(&enc);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut child = rng.split(t as u64);
            let ga = haar_random_su2(&mut child);
            let gb = haar_random_su2(&mut child);
            chsh_value(&psi, &settings, &ga, &gb)
        })
        .collect()
}

/// Mean CHSH value over `trials` independent frame pairs.
pub fn logical_bell_chsh(rng: &RandomSource, trials: usize) -> Result<f64> {
    let values = logical_bell_chsh_trials(rng, trials)?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `2√2`.
pub fn tsirelson_bound() -> f64 {
    2.0 * std::f64::consts::SQRT_2
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_pair_is_normalised() {
        let enc = LogicalEncoding::dfs_four_qubit_standard().unwrap();
        let psi = logical_bell_pair(&enc);
        assert!((psi.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_frames_reach_tsirelson() {
        let enc = LogicalEncoding::dfs_four_qubit_standard().unwrap();
        let s = logical_chsh_settings(&enc).unwrap();
        let psi = logical_bell_pair(&enc);
        let id = GroupElement::identity();
        let v = chsh_value(&psi, &s, &id, &id).unwrap();
        assert!((v - tsirelson_bound()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn every_trial_violates() {
        let rng = RandomSource::new(8);
        let vals = logical_bell_chsh_trials(&rng, 25).unwrap();
        assert!(vals.iter().all(|v| (v - tsirelson_bound()).abs() < 1e-9));
        assert!(logical_bell_chsh(&rng, 3).unwrap() > 2.0);
        assert!(logical_bell_chsh(&rng, 0).is_err());
    }
}
