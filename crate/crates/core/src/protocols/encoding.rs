//! Logical encodings that survive the collective channels: the four-qubit
//! decoherence-free subspace, noiseless subsystems on the multiplicity space
//! of a spin sector, and total-`m` sectors for collective dephasing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::irrep::{decompose, multiplicity, spins_for, HalfInteger};
use crate::quantum::{
    check_dim, fidelity, r, random_pure_state, CMatrix, CVector, DensityOperator, StateVector,
    ZERO,
};
use crate::rng::RandomSource;
use crate::twirl::TwirlChannel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingKind {
    /// Spin-zero sector of the collective SU(2) action.
    DfsJ0,
    /// Multiplicity space of spin `j`, carrier traced out on decode.
    NoiselessSubsystem { j: HalfInteger },
    /// Total-`m` eigenspace, protected against collective dephasing.
    DephasingSector { m: HalfInteger },
}

#[derive(Clone, Debug)]
pub struct LogicalEncoding {
    n: usize,
    kind: EncodingKind,
    isometry: CMatrix,
    /// For noiseless subsystems: the full carrier isometry of every block of
    /// spin `j`, in multiplicity order.
    sector: Vec<CMatrix>,
}

const ORTHO_TOL: f64 = 1e-10;

fn check_orthonormal(isometry: &CMatrix) -> Result<()> {
    let k = isometry.ncols();
    let gram = isometry.adjoint() * isometry;
    let err = crate::quantum::max_abs_diff(&gram, &CMatrix::identity(k, k));
    if err > ORTHO_TOL {
        return Err(Error::InvalidOperator(format!(
            "encoding columns not orthonormal ({err:e})"
        )));
    }
    Ok(())
}

impl LogicalEncoding {
    /// Subspace code from explicit orthonormal columns.
    pub fn from_isometry(n: usize, kind: EncodingKind, isometry: CMatrix) -> Result<Self> {
        check_dim(1 << n, isometry.nrows())?;
        if matches!(kind, EncodingKind::NoiselessSubsystem { .. }) {
            return Err(Error::InvalidOperator(
                "noiseless subsystems are built with LogicalEncoding::noiseless_subsystem".into(),
            ));
        }
        check_orthonormal(&isometry)?;
        Ok(Self {
            n,
            kind,
            isometry,
            sector: Vec::new(),
        })
    }

    /// The two-dimensional spin-zero code on four qubits in the given
    /// single-qubit basis.
    pub fn dfs_four_qubit(basis: (&StateVector, &StateVector)) -> Result<Self> {
        let (zero_l, one_l) = dfs_basis_4qubit(basis)?;
        let isometry = CMatrix::from_columns(&[zero_l.into_amplitudes(), one_l.into_amplitudes()]);
        Self::from_isometry(4, EncodingKind::DfsJ0, isometry)
    }

    /// Four-qubit spin-zero code in the computational basis.
    pub fn dfs_four_qubit_standard() -> Result<Self> {
        let e0 = StateVector::from_bits("0")?;
        let e1 = StateVector::from_bits("1")?;
        Self::dfs_four_qubit((&e0, &e1))
    }

    /// Spin-zero code for any even `n`, one logical level per coupling path.
    pub fn dfs_j0(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "no spin-zero sector for odd n = {n}"
            )));
        }
        let d = decompose(n)?;
        let cols: Vec<CVector> = d
            .blocks_with_spin(HalfInteger::ZERO)
            .map(|b| b.highest_weight())
            .collect();
        Self::from_isometry(n, EncodingKind::DfsJ0, CMatrix::from_columns(&cols))
    }

    /// Noiseless subsystem on the multiplicity space of spin `j`; the logical
    /// basis is `|j, m = j, r⟩` over the paths `r`.
    pub fn noiseless_subsystem(n: usize, j: HalfInteger) -> Result<Self> {
        multiplicity(n, j)?;
        let d = decompose(n)?;
        let sector: Vec<CMatrix> = d.blocks_with_spin(j).map(|b| b.isometry.clone()).collect();
        let cols: Vec<CVector> = sector.iter().map(|w| w.column(0).into_owned()).collect();
        let isometry = CMatrix::from_columns(&cols);
        check_orthonormal(&isometry)?;
        Ok(Self {
            n,
            kind: EncodingKind::NoiselessSubsystem { j },
            isometry,
            sector,
        })
    }

    /// Computational basis states with total projection `m`, in index order.
    pub fn dephasing_sector(n: usize, m: HalfInteger) -> Result<Self> {
        let tm = m.twice();
        if n == 0 || n > crate::quantum::MAX_QUBITS {
            return Err(out_of_range("qubit count", n, format!("1..={}", crate::quantum::MAX_QUBITS)));
        }
        if tm.abs() > n as i32 || (n as i32 - tm) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "no total-m sector {m} for {n} qubits"
            )));
        }
        let ones = ((n as i32 - tm) / 2) as u32;
        let dim = 1usize << n;
        let cols: Vec<CVector> = (0..dim)
            .filter(|i| i.count_ones() == ones)
            .map(|i| {
                let mut v = CVector::zeros(dim);
                v[i] = r(1.0);
                v
            })
            .collect();
        Self::from_isometry(n, EncodingKind::DephasingSector { m }, CMatrix::from_columns(&cols))
    }

    /// Largest dephasing-protected sector: `m = 0` for even `n`, `m = ½` for odd.
    pub fn dephasing_code(n: usize) -> Result<Self> {
        Self::dephasing_sector(n, HalfInteger::from_twice((n % 2) as i32))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn logical_dim(&self) -> usize {
        self.isometry.ncols()
    }

    pub fn isometry(&self) -> &CMatrix {
        &self.isometry
    }

    /// Projector onto the code space (the whole spin-`j` sector for a
    /// noiseless subsystem).
    pub fn code_projector(&self) -> CMatrix {
        match self.kind {
            EncodingKind::NoiselessSubsystem { .. } => self
                .sector
                .iter()
                .fold(CMatrix::zeros(1 << self.n, 1 << self.n), |acc, w| {
                    acc + w * w.adjoint()
                }),
            _ => &self.isometry * self.isometry.adjoint(),
        }
    }

    /// The channel this code is designed to pass unharmed.
    pub fn protecting_channel(&self) -> Result<TwirlChannel> {
        match self.kind {
            EncodingKind::DephasingSector { .. } => TwirlChannel::u1_dephasing(self.n),
            _ => TwirlChannel::full_su2(self.n),
        }
    }
}

/// The two spin-zero states of four qubits written in the single-qubit
/// basis `(e0, e1)`:
///
/// ```text
/// |0_L⟩ = ½ (|01⟩ − |10⟩)(|01⟩ − |10⟩)
/// |1_L⟩ = (|0011⟩ + |1100⟩)/√3 − (|01⟩ + |10⟩)(|01⟩ + |10⟩)/(2√3)
/// ```
pub fn dfs_basis_4qubit(basis: (&StateVector, &StateVector)) -> Result<(StateVector, StateVector)> {
    let (e0, e1) = basis;
    check_dim(2, e0.dim())?;
    check_dim(2, e1.dim())?;
    let overlap = e0.inner(e1)?.norm();
    if overlap > ORTHO_TOL {
        return Err(Error::InvalidState(format!(
            "basis vectors not orthogonal (overlap {overlap:e})"
        )));
    }
    let ket = |bits: &str| -> CVector {
        bits.chars()
            .map(|b| if b == '0' { e0 } else { e1 })
            .fold(CVector::from_element(1, r(1.0)), |acc, e| {
                acc.kronecker(e.amplitudes())
            })
    };
    let zero_l = (ket("0101") - ket("0110") - ket("1001") + ket("1010")).scale(0.5);
    let s3 = 3f64.sqrt();
    let one_l = (ket("0011") + ket("1100")).unscale(s3)
        - (ket("0101") + ket("0110") + ket("1001") + ket("1010")).unscale(2.0 * s3);
    Ok((StateVector::new(zero_l)?, StateVector::new(one_l)?))
}

/// Spin with the largest multiplicity among `n` qubits (ties go to the
/// smaller spin).
pub fn j_max(n: usize) -> Result<HalfInteger> {
    let mut best: Option<(HalfInteger, u128)> = None;
    // ascending j so that a tie keeps the smaller spin
    for j in spins_for(n).into_iter().rev() {
        let c = multiplicity(n, j)?;
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((j, c));
        }
    }
    best.map(|(j, _)| j)
        .ok_or_else(|| out_of_range("qubit count", n, "n ≥ 1"))
}

pub const MAX_SUBSYSTEM_QUBITS: usize = 10;

/// Noiseless subsystem on the spin sector of greatest multiplicity.
pub fn noiseless_subsystem_plan(n: usize) -> Result<LogicalEncoding> {
    if !(2..=MAX_SUBSYSTEM_QUBITS).contains(&n) {
        return Err(out_of_range("qubit count", n, format!("2..={MAX_SUBSYSTEM_QUBITS}")));
    }
    LogicalEncoding::noiseless_subsystem(n, j_max(n)?)
}

/// `V |ψ⟩⟨ψ| V†`.
pub fn encode_logical(psi: &StateVector, enc: &LogicalEncoding) -> Result<DensityOperator> {
    check_dim(enc.logical_dim(), psi.dim())?;
    let v = &enc.isometry * psi.amplitudes();
    Ok(StateVector::new(v)?.to_density())
}

/// Recovers the logical state. Subspace codes compress with `V†`; noiseless
/// subsystems trace out the carrier of the spin sector. The result is
/// renormalised by the in-code probability.
pub fn decode_logical(rho_phys: &DensityOperator, enc: &LogicalEncoding) -> Result<DensityOperator> {
    check_dim(1 << enc.n, rho_phys.dim())?;
    let logical = match enc.kind {
        EncodingKind::NoiselessSubsystem { .. } => {
            let k = enc.sector.len();
            let projected: Vec<CMatrix> = enc.sector.iter().map(|w| rho_phys.matrix() * w).collect();
            CMatrix::from_fn(k, k, |a, b| {
                // tr(W_a† ρ W_b)
                let wa = &enc.sector[a];
                let pb = &projected[b];
                let mut acc = ZERO;
                for col in 0..wa.ncols() {
                    acc += wa.column(col).dotc(&pb.column(col));
                }
                acc
            })
        }
        _ => enc.isometry.adjoint() * rho_phys.matrix() * &enc.isometry,
    };
    let p = logical.trace().re;
    if !(p >= 1e-12) {
        return Err(Error::Undecodable(p));
    }
    let m = logical.unscale(p);
    Ok(crate::quantum::DensityOperator::from_raw((&m + m.adjoint()).scale(0.5)))
}

/// `F(decode(E(encode(ψ))), ψ)`.
pub fn round_trip_fidelity(psi: &StateVector, enc: &LogicalEncoding, ch: &TwirlChannel) -> Result<f64> {
    let sent = encode_logical(psi, enc)?;
    let received = ch.apply(&sent)?;
    let decoded = decode_logical(&received, enc)?;
    fidelity(&decoded, &psi.to_density())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityRun {
    pub trials: usize,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
}

/// Round-trip fidelity over `trials` Haar-random logical states through the
/// code's protecting channel; trial `t` draws from `rng.split(t)`.
pub fn run_logical(enc: &LogicalEncoding, trials: usize, rng: &RandomSource) -> Result<FidelityRun> {
    if trials == 0 {
        return Err(out_of_range("trials", 0, "≥ 1"));
    }
    let ch = enc.protecting_channel()?;
    let fids = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut child = rng.split(t as u64);
            let psi = random_pure_state(enc.logical_dim(), &mut child);
            round_trip_fidelity(&psi, enc, &ch)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FidelityRun {
        trials,
        min_fidelity: fids.iter().copied().fold(1.0, f64::min),
        mean_fidelity: fids.iter().sum::<f64>() / trials as f64,
    })
}
