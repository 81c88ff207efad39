//! Optimal two-state discrimination at equal priors.

use crate::error::Result;
use crate::quantum::{trace_distance, DensityOperator};

/// `½ + ½ D(ρ0, ρ1)`.
pub fn helstrom_success_probability(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<f64> {
    Ok(0.5 + 0.5 * trace_distance(rho0, rho1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::StateVector;
    use crate::twirl::TwirlChannel;

    #[test]
    fn trivial_cases() {
        let a = StateVector::from_bits("0").unwrap().to_density();
        let b = StateVector::from_bits("1").unwrap().to_density();
        assert!((helstrom_success_probability(&a, &a).unwrap() - 0.5).abs() < 1e-15);
        assert!((helstrom_success_probability(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!(helstrom_success_probability(&a, &DensityOperator::maximally_mixed(4)).is_err());
    }

    #[test]
    fn parallel_versus_antiparallel() {
        let ch = TwirlChannel::full_su2(2).unwrap();
        let par = ch.apply(&StateVector::from_bits("00").unwrap().to_density()).unwrap();
        let anti = ch.apply(&StateVector::from_bits("01").unwrap().to_density()).unwrap();
        let p = helstrom_success_probability(&par, &anti).unwrap();
        assert!((p - 0.75).abs() < 1e-9);
    }
}
