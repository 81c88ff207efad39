//! Ideal two-photon linear optics: two spatial modes with two polarizations
//! each, lossless beam splitter, number-resolving polarization-blind
//! detectors.
//!
//! States live in the ten-dimensional two-photon Fock space. Internally a
//! state is also held as a symmetric first-quantized wavefunction `ψ[i][k]`
//! over the four modes, on which a mode unitary `M` acts as `M ψ Mᵀ`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::quantum::{check_dim, CMatrix, CVector, GroupElement, StateVector, ONE, ZERO};
use crate::rng::RandomSource;

pub const MODES: usize = 4;
pub const FOCK_DIM: usize = 10;

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

/// Mode index in `0..4`, ordered `(1H, 1V, 2H, 2V)`.
pub fn mode_index(spatial: usize, pol: Polarization) -> Result<usize> {
    if !(1..=2).contains(&spatial) {
        return Err(out_of_range("spatial mode", spatial, "1 or 2"));
    }
    Ok(2 * (spatial - 1) + if pol == Polarization::H { 0 } else { 1 })
}

fn spatial_of(mode: usize) -> usize {
    mode / 2 + 1
}

/// The unordered mode pairs `(a, b)`, `a ≤ b`, in lexicographic order.
pub fn fock_basis() -> Vec<(usize, usize)> {
    (0..MODES).flat_map(|a| (a..MODES).map(move |b| (a, b))).collect()
}

fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    // rows before `a` hold 4 + 3 + ... entries
    (0..a).map(|k| MODES - k).sum::<usize>() + (b - a)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpticalState {
    amplitudes: CVector,
}

impl OpticalState {
    /// Fock amplitudes in [`fock_basis`] order; must be normalized.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        check_dim(FOCK_DIM, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("optical state norm {norm}")));
        }
        Ok(Self { amplitudes })
    }

    /// Single basis element `a†_a a†_b |vac⟩`, normalized.
    pub fn basis(a: usize, b: usize) -> Result<Self> {
        if a >= MODES || b >= MODES {
            return Err(out_of_range("mode", a.max(b), "0..4"));
        }
        let mut v = CVector::zeros(FOCK_DIM);
        v[pair_index(a, b)] = ONE;
        Ok(Self { amplitudes: v })
    }

    /// Dual-rail lift of a two-qubit state: qubit `k` is the polarization
    /// of the photon in spatial mode `k`, `|0⟩ = H`.
    pub fn from_two_qubit(state: &StateVector) -> Result<Self> {
        check_dim(4, state.dim())?;
        let mut v = CVector::zeros(FOCK_DIM);
        for p in 0..2 {
            for q in 0..2 {
                v[pair_index(p, 2 + q)] = state.amplitudes()[2 * p + q];
            }
        }
        Self::new(v)
    }

    /// Two-qubit amplitudes of the one-photon-per-spatial-mode component.
    /// Not normalized; its norm is the weight of that component.
    pub fn dual_rail_amplitudes(&self) -> CVector {
        CVector::from_fn(4, |i, _| self.amplitudes[pair_index(i / 2, 2 + i % 2)])
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, a: usize, b: usize) -> num_complex::Complex64 {
        self.amplitudes[pair_index(a, b)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &OpticalState) -> num_complex::Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Symmetric `ψ` with `Σ|ψ_ik|² = 1`.
    pub fn first_quantized(&self) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_fn(MODES, MODES, |i, k| {
            let c = self.amplitudes[pair_index(i, k)];
            if i == k {
                c
            } else {
                c * s
            }
        })
    }

    fn from_first_quantized(psi: &CMatrix) -> Self {
        let amplitudes = CVector::from_iterator(
            FOCK_DIM,
            fock_basis().into_iter().map(|(a, b)| {
                if a == b {
                    psi[(a, a)]
                } else {
                    // ψ_ab and ψ_ba both contribute
                    (psi[(a, b)] + psi[(b, a)]) * std::f64::consts::FRAC_1_SQRT_2
                }
            }),
        );
        Self { amplitudes }
    }

    /// Applies the single-photon mode unitary `m`: column `i` of `m` is the
    /// image of `a†_i`.
    pub fn apply_mode_unitary(&self, m: &CMatrix) -> Result<Self> {
        check_dim(MODES, m.nrows())?;
        check_dim(MODES, m.ncols())?;
        let res = crate::quantum::unitarity_residual(m);
        if res > 1e-10 {
            return Err(Error::InvalidOperator(format!("mode transformation not unitary ({res:e})")));
        }
        let psi = self.first_quantized();
        Ok(Self::from_first_quantized(&(m * psi * m.transpose())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellState {
    PsiMinus,
    PhiMinus,
}

/// `Ψ⁻ = (H₁V₂ − V₁H₂)/√2` or `Φ⁻ = (H₁H₂ − V₁V₂)/√2`.
pub fn prepare_bell(which: BellState) -> OpticalState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match which {
        BellState::PsiMinus => [0.0, s, -s, 0.0],
        BellState::PhiMinus => [s, 0.0, 0.0, -s],
    };
    let q = StateVector::new(CVector::from_iterator(4, amps.iter().map(|&x| crate::quantum::r(x))))
        .expect("Bell amplitudes are normalized");
    OpticalState::from_two_qubit(&q).expect("two-qubit input")
}

/// Half-wave plate at 45°: exchanges the H and V axes of one mode,
/// `H → −iV`, `V → −iH`. Turns `Ψ⁻` into `Φ⁻` when applied to one mode.
pub fn ninety_degree_rotation() -> GroupElement {
    GroupElement::rotation([1.0, 0.0, 0.0], std::f64::consts::PI).expect("unit axis")
}

/// Applies `g` to the polarization of each listed spatial mode (1-based).
pub fn polarization_rotation(s: &OpticalState, g: &GroupElement, modes: &[usize]) -> Result<OpticalState> {
    let mut m = CMatrix::identity(MODES, MODES);
    let g2 = g.matrix2();
    for &spatial in modes {
        let base = mode_index(spatial, Polarization::H)?;
        for r in 0..2 {
            for c in 0..2 {
                m[(base + r, base + c)] = g2[(r, c)];
            }
        }
    }
    s.apply_mode_unitary(&m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BeamSplitterConvention {
    /// `a₁ → (a₁ + a₂)/√2`, `a₂ → (a₁ − a₂)/√2`.
    Hadamard,
    /// `a₁ → (a₁ + i a₂)/√2`, `a₂ → (i a₁ + a₂)/√2`.
    Symmetric,
}

pub fn beam_splitter_matrix(convention: BeamSplitterConvention) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (t, r1, r2) = match convention {
        BeamSplitterConvention::Hadamard => (ONE, ONE, -ONE),
        BeamSplitterConvention::Symmetric => (ONE, crate::quantum::I, ONE),
    };
    // spatial 2×2 block: columns are images of a†_1 and a†_2
    let b = [[t, r1], [r1, r2]];
    let mut m = CMatrix::from_element(MODES, MODES, ZERO);
    for (so, row) in b.iter().enumerate() {
        for (si, &v) in row.iter().enumerate() {
            for p in 0..2 {
                m[(2 * so + p, 2 * si + p)] = v * s;
            }
        }
    }
    m
}

/// 50/50 beam splitter in the Hadamard convention.
pub fn beam_splitter(s: &OpticalState) -> OpticalState {
    beam_splitter_with(s, BeamSplitterConvention::Hadamard)
}

pub fn beam_splitter_with(s: &OpticalState, convention: BeamSplitterConvention) -> OpticalState {
    s.apply_mode_unitary(&beam_splitter_matrix(convention))
        .expect("beam splitter is unitary")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionDistribution {
    pub p_coincidence: f64,
    pub p_bunch_port1: f64,
    pub p_bunch_port2: f64,
}

pub fn detect(s: &OpticalState) -> DetectionDistribution {
    let mut d = DetectionDistribution {
        p_coincidence: 0.0,
        p_bunch_port1: 0.0,
        p_bunch_port2: 0.0,
    };
    for (k, (a, b)) in fock_basis().into_iter().enumerate() {
        let p = s.amplitudes[k].norm_sqr();
        match (spatial_of(a), spatial_of(b)) {
            (1, 1) => d.p_bunch_port1 += p,
            (2, 2) => d.p_bunch_port2 += p,
            _ => d.p_coincidence += p,
        }
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Coincidence,
    BunchPort1,
    BunchPort2,
}

impl Outcome {
    /// Coincidence means the antisymmetric state, bit 0.
    pub fn decoded_bit(self) -> u8 {
        match self {
            Outcome::Coincidence => 0,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpticalCounts {
    pub coincidence: usize,
    pub bunch1: usize,
    pub bunch2: usize,
}

impl OpticalCounts {
    fn add(self, o: Self) -> Self {
        Self {
            coincidence: self.coincidence + o.coincidence,
            bunch1: self.bunch1 + o.bunch1,
            bunch2: self.bunch2 + o.bunch2,
        }
    }

    fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Coincidence => self.coincidence += 1,
            Outcome::BunchPort1 => self.bunch1 += 1,
            Outcome::BunchPort2 => self.bunch2 += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalReport {
    pub bit: u8,
    pub trials: usize,
    pub counts: OpticalCounts,
    pub error_rate: f64,
}

impl OpticalReport {
    /// Number of trials decoded as 0 and as 1.
    pub fn decoded_histogram(&self) -> [usize; 2] {
        let c = self.counts;
        [c.coincidence, c.bunch1 + c.bunch2]
    }
}

/// Probabilities below this are rounding noise on an exact zero.
const PROB_FLOOR: f64 = 1e-12;

fn sample_outcome(d: &DetectionDistribution, rng: &mut RandomSource) -> Outcome {
    let clean = |p: f64| if p < PROB_FLOOR { 0.0 } else { p };
    let ps = [clean(d.p_coincidence), clean(d.p_bunch_port1), clean(d.p_bunch_port2)];
    let u = rng.random::<f64>() * ps.iter().sum::<f64>();
    if u < ps[0] {
        Outcome::Coincidence
    } else if u < ps[0] + ps[1] || ps[2] == 0.0 {
        Outcome::BunchPort1
    } else {
        Outcome::BunchPort2
    }
}

/// Detection statistics Bob sees for bit `bit` sent through a fiber that
/// rotates both photons' polarization by `g_fiber`.
pub fn protocol_distribution(bit: u8, g_fiber: &GroupElement) -> Result<DetectionDistribution> {
    let which = match bit {
        0 => BellState::PsiMinus,
        1 => BellState::PhiMinus,
        _ => return Err(out_of_range("bit", bit, "0 or 1")),
    };
    let sent = polarization_rotation(&prepare_bell(which), g_fiber, &[1, 2])?;
    Ok(detect(&beam_splitter(&sent)))
}

const TRIAL_CHUNK: usize = 4096;

/// Samples `trials` detection events; chunk `k` of trials draws from
/// `rng.split(k)`.
pub fn run_optical_protocol(
    bit: u8,
    g_fiber: &GroupElement,
    trials: usize,
    rng: &RandomSource,
) -> Result<OpticalReport> {
    if trials == 0 {
        return Err(out_of_range("trials", 0, "≥ 1"));
    }
    let d = protocol_distribution(bit, g_fiber)?;
    let chunks = trials.div_ceil(TRIAL_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut child = rng.split(k as u64);
            let len = TRIAL_CHUNK.min(trials - k * TRIAL_CHUNK);
            let mut c = OpticalCounts::default();
            for _ in 0..len {
                c.record(sample_outcome(&d, &mut child));
            }
            c
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(OpticalCounts::default(), OpticalCounts::add);
    let report = OpticalReport {
        bit,
        trials,
        counts,
        error_rate: 0.0,
    };
    let wrong = report.decoded_histogram()[1 - bit as usize];
    Ok(OpticalReport {
        error_rate: wrong as f64 / trials as f64,
        ..report
    })
}
