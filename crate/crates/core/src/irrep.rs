//! Decomposition of the collective SU(2) action on `n` qubits into irreps.
//!
//! Qubits are coupled one at a time from left to right. Each way of doing so
//! is a [`CouplingPath`] (the sequence of intermediate total spins), and the
//! path is the multiplicity label of the irrep block it produces. Blocks are
//! ordered by `j` descending, then by path in lexicographic order with the
//! `+½` step before the `−½` step.
//!
//! Single-qubit convention: `|0⟩` is `m = +½`, `|1⟩` is `m = −½`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::quantum::{r, CMatrix, CVector, MAX_QUBITS};

/// An exact half-integer, stored as twice its value.
///
/// Also used for magnetic quantum numbers, so the stored value is signed;
/// operations that need a spin reject negative values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger(0);
    pub const HALF: HalfInteger = HalfInteger(1);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInteger(twice)
    }

    pub const fn integer(value: i32) -> Self {
        HalfInteger(2 * value)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn is_nonnegative(self) -> bool {
        self.0 >= 0
    }

    /// Carrier dimension `2j + 1`.
    pub fn dimension(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }

    pub fn abs(self) -> Self {
        HalfInteger(self.0.abs())
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: Self) -> Self {
        HalfInteger(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: Self) -> Self {
        HalfInteger(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> Self {
        HalfInteger(-self.0)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Intermediate total spins `j_1 = ½, j_2, …, j_n` of a sequential coupling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CouplingPath(Vec<HalfInteger>);

impl CouplingPath {
    pub fn new(spins: Vec<HalfInteger>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidQuantumNumbers(msg);
        match spins.first() {
            Some(&HalfInteger::HALF) => {}
            _ => return Err(bad("coupling path must start at 1/2".into())),
        }
        for w in spins.windows(2) {
            if (w[1].twice() - w[0].twice()).abs() != 1 {
                return Err(bad(format!("step {} -> {} is not ±1/2", w[0], w[1])));
            }
        }
        if spins.iter().any(|s| !s.is_nonnegative()) {
            return Err(bad("negative spin in coupling path".into()));
        }
        Ok(CouplingPath(spins))
    }

    pub fn spins(&self) -> &[HalfInteger] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn final_spin(&self) -> HalfInteger {
        *self.0.last().expect("paths are never empty")
    }

    /// Step signs `+1`/`−1` after the first qubit.
    pub fn steps(&self) -> impl Iterator<Item = i32> + '_ {
        self.0.windows(2).map(|w| w[1].twice() - w[0].twice())
    }

    /// Lexicographic on steps with `+½` ordered first.
    fn step_cmp(&self, other: &Self) -> Ordering {
        self.steps()
            .zip(other.steps())
            .map(|(a, b)| b.cmp(&a))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for CouplingPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

fn factorial(k: i32) -> f64 {
    debug_assert!(k >= 0);
    (1..=k).fold(1.0, |acc, x| acc * f64::from(x))
}

fn check_projection(j: HalfInteger, m: HalfInteger, name: &str) -> Result<()> {
    if !j.is_nonnegative() {
        return Err(Error::InvalidQuantumNumbers(format!("{name}: negative spin {j}")));
    }
    if m.abs() > j || (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "{name}: projection {m} invalid for spin {j}"
        )));
    }
    Ok(())
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | j m⟩` in the Condon–Shortley
/// convention, from the Racah sum.
pub fn clebsch_gordan(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> Result<f64> {
    check_projection(j1, m1, "j1")?;
    check_projection(j2, m2, "j2")?;
    check_projection(j, m, "j")?;
    if j < (j1 - j2).abs() || j > j1 + j2 || (j1 + j2 + j).twice() % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "triangle rule fails for ({j1}, {j2}, {j})"
        )));
    }
    if m != m1 + m2 {
        return Ok(0.0);
    }
    // All combinations below are integers once the checks above pass.
    let h = |x: HalfInteger| x.twice() / 2;
    let (a, b, cc) = (j1 + j2 - j, j1 - j2 + j, -j1 + j2 + j);
    let triangle = factorial(h(a)) * factorial(h(b)) * factorial(h(cc))
        / factorial(h(j1 + j2 + j) + 1);
    let prefactor = (f64::from(j.twice() + 1)
        * triangle
        * factorial(h(j + m))
        * factorial(h(j - m))
        * factorial(h(j1 - m1))
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(h(j2 + m2)))
    .sqrt();

    let e1 = h(j1 + j2 - j);
    let e2 = h(j1 - m1);
    let e3 = h(j2 + m2);
    let e4 = h(j - j2 + m1);
    let e5 = h(j - j1 - m2);
    let k_min = 0.max(-e4).max(-e5);
    let k_max = e1.min(e2).min(e3);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial(e1 - k)
            * factorial(e2 - k)
            * factorial(e3 - k)
            * factorial(e4 + k)
            * factorial(e5 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    Ok(prefactor * sum)
}

fn check_spin_for_n(n: usize, j: HalfInteger) -> Result<()> {
    if n == 0 {
        return Err(out_of_range("qubit count", n, "n ≥ 1"));
    }
    let tj = j.twice();
    if tj < 0 || tj as usize > n {
        return Err(out_of_range("spin", j, format!("0..={}", HalfInteger::from_twice(n as i32))));
    }
    if (n as i32 - tj) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "spin {j} has the wrong parity for {n} qubits"
        )));
    }
    Ok(())
}

/// `C(n, k)` in exact integer arithmetic.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Allowed total spins for `n` qubits, from `n/2` down to `0` or `½`.
pub fn spins_for(n: usize) -> Vec<HalfInteger> {
    (0..=n as i32)
        .rev()
        .step_by(2)
        .map(HalfInteger::from_twice)
        .collect()
}

/// Number of copies of spin `j` among `n` qubits:
/// `C(n, n/2 − j) · (2j + 1) / (n/2 + j + 1)`.
pub fn multiplicity(n: usize, j: HalfInteger) -> Result<u128> {
    check_spin_for_n(n, j)?;
    let tj = j.twice() as u64;
    let n = n as u64;
    let k = (n - tj) / 2;
    let numer = binomial(n, k) * u128::from(tj + 1);
    let denom = u128::from((n + tj) / 2 + 1);
    debug_assert_eq!(numer % denom, 0);
    Ok(numer / denom)
}

/// Total number of irrep blocks `Σ_j c_j`.
pub fn total_irrep_count(n: usize) -> Result<u128> {
    if n == 0 {
        return Err(out_of_range("qubit count", n, "n ≥ 1"));
    }
    spins_for(n).into_iter().map(|j| multiplicity(n, j)).sum()
}

/// All coupling paths of `n` qubits ending at `j`, in canonical order.
pub fn enumerate_paths(n: usize, j: HalfInteger) -> Result<Vec<CouplingPath>> {
    check_spin_for_n(n, j)?;
    let target = j.twice();
    let mut out = Vec::new();
    let mut current = vec![HalfInteger::HALF];

    fn walk(
        current: &mut Vec<HalfInteger>,
        n: usize,
        target: i32,
        out: &mut Vec<CouplingPath>,
    ) {
        let here = current.last().unwrap().twice();
        let remaining = (n - current.len()) as i32;
        if remaining == 0 {
            if here == target {
                out.push(CouplingPath(current.clone()));
            }
            return;
        }
        for step in [1, -1] {
            let next = here + step;
            if next < 0 || (next - target).abs() > remaining - 1 {
                continue;
            }
            current.push(HalfInteger::from_twice(next));
            walk(current, n, target, out);
            current.pop();
        }
    }

    walk(&mut current, n, target, &mut out);
    Ok(out)
}

/// One irrep block: spin `j`, multiplicity label `r` (1-based, the position
/// of `path` among the canonical paths ending at `j`) and the isometry whose
/// columns are `|j, m, r⟩` for `m = j, j−1, …, −j`.
#[derive(Clone, Debug)]
pub struct IrrepBlock {
    pub j: HalfInteger,
    pub r: usize,
    pub path: CouplingPath,
    pub isometry: CMatrix,
}

impl IrrepBlock {
    pub fn dimension(&self) -> usize {
        self.j.dimension()
    }

    /// Orthogonal projector onto the carrier space.
    pub fn projector(&self) -> CMatrix {
        &self.isometry * self.isometry.adjoint()
    }

    /// Highest-weight state `|j, m = j, r⟩`.
    pub fn highest_weight(&self) -> CVector {
        self.isometry.column(0).into_owned()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRow {
    /// `2j`
    pub j2: u32,
    pub multiplicity: u64,
}

/// Serializable summary of a decomposition (no isometries).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub n: usize,
    pub table: Vec<MultiplicityRow>,
    pub total: u64,
}

#[derive(Clone, Debug)]
pub struct IrrepDecomposition {
    n: usize,
    blocks: Vec<IrrepBlock>,
    table: Vec<(HalfInteger, usize)>,
}

/// Coupled states `|j, m⟩` (m descending) for one path prefix.
type Multiplet = Vec<CVector>;

/// Couples one more qubit (as the new least-significant factor) onto the
/// multiplet `states` of spin `j`, producing spin `j_new = j ± ½`.
fn couple_qubit(states: &Multiplet, j: HalfInteger, j_new: HalfInteger) -> Multiplet {
    let dim = states[0].len();
    let half = HalfInteger::HALF;
    (0..j_new.dimension())
        .map(|k| {
            let m = j_new - HalfInteger::from_twice(2 * k as i32);
            let mut v = CVector::zeros(2 * dim);
            // s = +½ is |0⟩ (bit 0), s = −½ is |1⟩ (bit 1)
            for (bit, s) in [(0usize, half), (1usize, -half)] {
                let m_old = m - s;
                if m_old.abs() > j {
                    continue;
                }
                let coeff = clebsch_gordan(j, m_old, half, s, j_new, m)
                    .expect("quantum numbers valid by construction");
                if coeff == 0.0 {
                    continue;
                }
                let idx_old = ((j - m_old).twice() / 2) as usize;
                let src = &states[idx_old];
                for (i, a) in src.iter().enumerate() {
                    v[2 * i + bit] += a * r(coeff);
                }
            }
            v
        })
        .collect()
}

impl IrrepDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn blocks(&self) -> &[IrrepBlock] {
        &self.blocks
    }

    /// `(j, c_j)` with `j` descending.
    pub fn multiplicity_table(&self) -> &[(HalfInteger, usize)] {
        &self.table
    }

    pub fn multiplicity_of(&self, j: HalfInteger) -> usize {
        self.table
            .iter()
            .find(|(s, _)| *s == j)
            .map_or(0, |&(_, c)| c)
    }

    /// Block `(j, r)` with 1-based multiplicity label `r`.
    pub fn block(&self, j: HalfInteger, r: usize) -> Result<&IrrepBlock> {
        self.blocks
            .iter()
            .find(|b| b.j == j && b.r == r)
            .ok_or(Error::UnknownBlock { j: j.to_string(), r })
    }

    /// Blocks with spin `j`, in label order.
    pub fn blocks_with_spin(&self, j: HalfInteger) -> impl Iterator<Item = &IrrepBlock> {
        self.blocks.iter().filter(move |b| b.j == j)
    }

    /// Columns of every block side by side: the unitary taking the coupled
    /// basis to the computational basis.
    pub fn coupling_matrix(&self) -> CMatrix {
        let dim = self.dim();
        let mut u = CMatrix::zeros(dim, dim);
        let mut col = 0;
        for b in &self.blocks {
            u.columns_mut(col, b.dimension()).copy_from(&b.isometry);
            col += b.dimension();
        }
        u
    }

    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            n: self.n,
            table: self
                .table
                .iter()
                .map(|&(j, c)| MultiplicityRow {
                    j2: j.twice() as u32,
                    multiplicity: c as u64,
                })
                .collect(),
            total: self.blocks.len() as u64,
        }
    }
}

/// Builds every irrep block of `n` qubits, `1 ≤ n ≤ 12`.
pub fn decompose(n: usize) -> Result<IrrepDecomposition> {
    if n == 0 || n > MAX_QUBITS {
        return Err(out_of_range("qubit count", n, format!("1..={MAX_QUBITS}")));
    }
    let up = CVector::from_vec(vec![r(1.0), r(0.0)]);
    let down = CVector::from_vec(vec![r(0.0), r(1.0)]);
    let mut leaves: Vec<(CouplingPath, Multiplet)> = Vec::new();

    // Depth-first over path prefixes, `+½` first, so leaves come out in
    // lexicographic order.
    fn grow(
        path: &mut Vec<HalfInteger>,
        states: Multiplet,
        n: usize,
        leaves: &mut Vec<(CouplingPath, Multiplet)>,
    ) {
        if path.len() == n {
            leaves.push((CouplingPath(path.clone()), states));
            return;
        }
        let j = *path.last().unwrap();
        for step in [1, -1] {
            let j_new = HalfInteger::from_twice(j.twice() + step);
            if !j_new.is_nonnegative() {
                continue;
            }
            let next = couple_qubit(&states, j, j_new);
            path.push(j_new);
            grow(path, next, n, leaves);
            path.pop();
        }
    }

    grow(&mut vec![HalfInteger::HALF], vec![up, down], n, &mut leaves);

    let mut blocks: Vec<IrrepBlock> = leaves
        .into_iter()
        .map(|(path, states)| {
            let j = path.final_spin();
            let isometry = CMatrix::from_columns(&states);
            IrrepBlock { j, r: 0, path, isometry }
        })
        .collect();
    // Stable: keeps the lexicographic path order within each spin.
    blocks.sort_by(|a, b| b.j.cmp(&a.j).then_with(|| a.path.step_cmp(&b.path)));

    let mut table: Vec<(HalfInteger, usize)> = Vec::new();
    for b in blocks.iter_mut() {
        match table.last_mut() {
            Some((j, count)) if *j == b.j => *count += 1,
            _ => table.push((b.j, 1)),
        }
        b.r = table.last().unwrap().1;
    }
    Ok(IrrepDecomposition { n, blocks, table })
}

/// Orthogonal projector onto block `(j, r)`.
pub fn block_projector(d: &IrrepDecomposition, j: HalfInteger, r: usize) -> Result<CMatrix> {
    Ok(d.block(j, r)?.projector())
}
