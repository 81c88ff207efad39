//! Decohering channels for a missing (or partially shared) reference frame.
//!
//! The full SU(2) twirl is evaluated from the irrep decomposition instead of
//! by integration: in the coupled basis the output is maximally mixed on each
//! carrier space while coherences between blocks of equal spin survive on the
//! multiplicity index. The U(1) twirl about a shared axis keeps each total-`m`
//! sector and removes coherence between sectors.
//!
//! Channels are applied behaviourally; no superoperator matrix is built.

use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::irrep::{decompose, HalfInteger, IrrepDecomposition};
use crate::quantum::{
    check_dim, collective_rotation, haar_random_su2, trace_distance, CMatrix, DensityOperator,
    GroupElement, ZERO, MAX_QUBITS,
};
use crate::rng::RandomSource;

/// Samples per chunk in the Monte Carlo twirl; each chunk draws from its own
/// child of the caller's random source.
const MC_CHUNK: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    FullSu2,
    U1Dephasing,
}

#[derive(Clone, Debug)]
struct SpinGroup {
    dim: usize,
    offsets: Vec<usize>,
}

#[derive(Clone, Debug)]
enum Structure {
    Su2 {
        decomposition: IrrepDecomposition,
        coupling: CMatrix,
        groups: Vec<SpinGroup>,
    },
    U1 {
        /// Number of `|1⟩` factors (spin down) in each basis state.
        weights: Vec<u32>,
    },
}

#[derive(Clone, Debug)]
pub struct TwirlChannel {
    n: usize,
    structure: Structure,
}

impl TwirlChannel {
    /// Collective SU(2) twirl on `n` qubits.
    pub fn full_su2(n: usize) -> Result<Self> {
        Ok(Self::from_decomposition(decompose(n)?))
    }

    pub fn from_decomposition(decomposition: IrrepDecomposition) -> Self {
        let coupling = decomposition.coupling_matrix();
        let mut groups: Vec<SpinGroup> = Vec::new();
        let mut offset = 0;
        let mut last: Option<HalfInteger> = None;
        for b in decomposition.blocks() {
            if last != Some(b.j) {
                groups.push(SpinGroup {
                    dim: b.dimension(),
                    offsets: Vec::new(),
                });
                last = Some(b.j);
            }
            groups.last_mut().unwrap().offsets.push(offset);
            offset += b.dimension();
        }
        Self {
            n: decomposition.n(),
            structure: Structure::Su2 {
                decomposition,
                coupling,
                groups,
            },
        }
    }

    /// Collective dephasing about the shared axis on `n` qubits.
    pub fn u1_dephasing(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(out_of_range("qubit count", n, format!("1..={MAX_QUBITS}")));
        }
        let weights = (0..1usize << n).map(|i| i.count_ones()).collect();
        Ok(Self {
            n,
            structure: Structure::U1 { weights },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn kind(&self) -> ChannelKind {
        match self.structure {
            Structure::Su2 { .. } => ChannelKind::FullSu2,
            Structure::U1 { .. } => ChannelKind::U1Dephasing,
        }
    }

    pub fn decomposition(&self) -> Option<&IrrepDecomposition> {
        match &self.structure {
            Structure::Su2 { decomposition, .. } => Some(decomposition),
            Structure::U1 { .. } => None,
        }
    }

    /// Projector onto the total-`m` sector, `m = n/2 − (number of 1s)`.
    pub fn sector_projector(&self, m: HalfInteger) -> Result<CMatrix> {
        let n = self.n as i32;
        let tm = m.twice();
        if tm.abs() > n || (n - tm) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "no total-m sector {m} for {} qubits",
                self.n
            )));
        }
        let ones = ((n - tm) / 2) as u32;
        let dim = self.dim();
        Ok(CMatrix::from_fn(dim, dim, |i, k| {
            if i == k && i.count_ones() == ones {
                crate::quantum::ONE
            } else {
                ZERO
            }
        }))
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        check_dim(self.dim(), rho.dim())?;
        let out = match &self.structure {
            Structure::Su2 {
                coupling, groups, ..
            } => su2_twirl(rho.matrix(), coupling, groups),
            Structure::U1 { weights } => {
                let m = rho.matrix();
                CMatrix::from_fn(m.nrows(), m.ncols(), |i, k| {
                    if weights[i] == weights[k] {
                        m[(i, k)]
                    } else {
                        ZERO
                    }
                })
            }
        };
        Ok(DensityOperator::from_raw(out))
    }
}

fn su2_twirl(rho: &CMatrix, coupling: &CMatrix, groups: &[SpinGroup]) -> CMatrix {
    let coupled = coupling.adjoint() * rho * coupling;
    let dim = rho.nrows();
    let mut twirled = CMatrix::zeros(dim, dim);
    for g in groups {
        for &row in &g.offsets {
            for &col in &g.offsets {
                let mut avg = ZERO;
                for k in 0..g.dim {
                    avg += coupled[(row + k, col + k)];
                }
                avg /= g.dim as f64;
                for k in 0..g.dim {
                    twirled[(row + k, col + k)] = avg;
                }
            }
        }
    }
    let out = coupling * twirled * coupling.adjoint();
    (&out + out.adjoint()).scale(0.5)
}

/// Exact collective SU(2) twirl.
pub fn twirl_su2_exact(rho: &DensityOperator, ch: &TwirlChannel) -> Result<DensityOperator> {
    if ch.kind() != ChannelKind::FullSu2 {
        return Err(Error::WrongChannel("full SU(2) twirl"));
    }
    ch.apply(rho)
}

/// Collective dephasing `Σ_m P_m ρ P_m`.
pub fn twirl_u1_dephasing(rho: &DensityOperator, ch: &TwirlChannel) -> Result<DensityOperator> {
    if ch.kind() != ChannelKind::U1Dephasing {
        return Err(Error::WrongChannel("U(1) dephasing"));
    }
    ch.apply(rho)
}

fn qubits_of(rho: &DensityOperator) -> Result<usize> {
    let dim = rho.dim();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::InvalidState(format!("dimension {dim} is not 2^n")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn renormalize(sum: CMatrix) -> DensityOperator {
    let tr = sum.trace().re;
    DensityOperator::from_raw(sum.unscale(tr))
}

/// Average of `U ρ U†` over `samples` collective rotations drawn by `sampler`.
pub fn twirl_monte_carlo_with(
    rho: &DensityOperator,
    samples: usize,
    mut sampler: impl FnMut() -> GroupElement,
) -> Result<DensityOperator> {
    if samples == 0 {
        return Err(out_of_range("sample count", 0, "≥ 1"));
    }
    let n = qubits_of(rho)?;
    let mut sum = CMatrix::zeros(rho.dim(), rho.dim());
    for _ in 0..samples {
        let u = collective_rotation(&sampler(), n)?;
        sum += &u * rho.matrix() * u.adjoint();
    }
    Ok(renormalize(sum.unscale(samples as f64)))
}

/// Monte Carlo estimate of the collective twirl from Haar samples.
///
/// Samples are split into fixed-size chunks, chunk `k` drawing from
/// `rng.split(k)`; partial sums are added in chunk order, so the result does
/// not depend on the worker count.
pub fn twirl_su2_monte_carlo(
    rho: &DensityOperator,
    samples: usize,
    rng: &RandomSource,
) -> Result<DensityOperator> {
    if samples == 0 {
        return Err(out_of_range("sample count", 0, "≥ 1"));
    }
    let n = qubits_of(rho)?;
    let dim = rho.dim();
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<CMatrix> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut child = rng.split(k as u64);
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut sum = CMatrix::zeros(dim, dim);
            for _ in 0..count {
                let g = haar_random_su2(&mut child);
                let u = collective_rotation(&g, n).expect("n validated above");
                sum += &u * rho.matrix() * u.adjoint();
            }
            sum
        })
        .collect();
    let total = partials
        .into_iter()
        .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
    Ok(renormalize(total.unscale(samples as f64)))
}

/// `D(E(ρ), ρ)`.
pub fn fixed_point_residual(rho: &DensityOperator, ch: &TwirlChannel) -> Result<f64> {
    trace_distance(&ch.apply(rho)?, rho)
}

/// True iff `D(E(ρ), ρ) ≤ tol`.
pub fn channel_fixed_point_check(
    rho: &DensityOperator,
    ch: &TwirlChannel,
    tol: f64,
) -> Result<bool> {
    Ok(fixed_point_residual(rho, ch)? <= tol)
}
