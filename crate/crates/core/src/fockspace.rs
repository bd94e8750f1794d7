//! Truncated atom ⊗ cavity Hilbert space and dense operator algebra.
//!
//! Basis ordering is fixed: `index = 2·n + s` with `s = 0` for |g⟩ and
//! `s = 1` for |e⟩, `n ∈ [0, n_max]`. The atom index runs fastest, so
//! serialized states are portable between runs with the same cutoff.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::csvio::{fmt_num, CsvDocument};
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entrywise tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a state's norm from one.
pub const NORM_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    Ground,
    Excited,
}

impl AtomLevel {
    pub fn index(self) -> usize {
        match self {
            AtomLevel::Ground => 0,
            AtomLevel::Excited => 1,
        }
    }

    pub fn from_index(s: usize) -> Option<Self> {
        match s {
            0 => Some(AtomLevel::Ground),
            1 => Some(AtomLevel::Excited),
            _ => None,
        }
    }

    /// Eigenvalue of σ_z.
    pub fn sigma_z(self) -> f64 {
        match self {
            AtomLevel::Ground => -1.0,
            AtomLevel::Excited => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    n_max: u32,
}

impl FockSpace {
    pub const DEFAULT_N_MAX: u32 = 30;

    pub fn new(n_max: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParams("n_max must be >= 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max as usize + 1)
    }

    pub fn index(&self, n: u32, level: AtomLevel) -> usize {
        debug_assert!(n <= self.n_max);
        2 * n as usize + level.index()
    }

    pub fn decode(&self, index: usize) -> (u32, AtomLevel) {
        (
            (index / 2) as u32,
            AtomLevel::from_index(index % 2).unwrap(),
        )
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// Dense operator on a [`FockSpace`], tagged when known to be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: FockSpace,
    data: DMatrix<C64>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn from_matrix(space: FockSpace, data: DMatrix<C64>) -> Result<Self> {
        space.check_dim(data.nrows())?;
        space.check_dim(data.ncols())?;
        Ok(Self {
            space,
            data,
            hermitian: false,
        })
    }

    pub fn zeros(space: FockSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            data: DMatrix::zeros(d, d),
            hermitian: true,
        }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Largest entrywise deviation from `M = M†`.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.data.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Verifies Hermiticity to [`HERMITIAN_TOL`] and tags the operator.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            data: self.data.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space,
            data: &self.data * C64::new(factor, 0.0),
            hermitian: self.hermitian,
        }
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self {
            space: self.space,
            data: &self.data * factor,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn compose(&self, rhs: &OperatorMatrix) -> Self {
        assert_eq!(self.space, rhs.space, "operators on different spaces");
        Self {
            space: self.space,
            data: &self.data * &rhs.data,
            hermitian: false,
        }
    }

    pub fn apply(&self, state: &StateVector) -> DVector<C64> {
        assert_eq!(
            self.space, state.space,
            "operator and state on different spaces"
        );
        &self.data * &state.amps
    }

    /// ⟨ψ|M|ψ⟩
    pub fn expectation(&self, state: &StateVector) -> C64 {
        state.amps.dotc(&self.apply(state))
    }
}

impl std::ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operators on different spaces");
        OperatorMatrix {
            space: self.space,
            data: &self.data + &rhs.data,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl std::ops::Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operators on different spaces");
        OperatorMatrix {
            space: self.space,
            data: &self.data - &rhs.data,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl std::ops::Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.compose(rhs)
    }
}

fn build(
    space: FockSpace,
    hermitian: bool,
    mut f: impl FnMut(u32, AtomLevel, u32, AtomLevel) -> C64,
) -> OperatorMatrix {
    let d = space.dim();
    let data = DMatrix::from_fn(d, d, |i, j| {
        let (n_i, s_i) = space.decode(i);
        let (n_j, s_j) = space.decode(j);
        f(n_i, s_i, n_j, s_j)
    });
    OperatorMatrix {
        space,
        data,
        hermitian,
    }
}

/// Cavity annihilation operator `a ⊗ 1`.
pub fn annihilation(space: FockSpace) -> OperatorMatrix {
    build(space, false, |n_i, s_i, n_j, s_j| {
        if s_i == s_j && n_j == n_i + 1 {
            C64::new((n_j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

pub fn creation(space: FockSpace) -> OperatorMatrix {
    annihilation(space).adjoint()
}

/// `a†a`, exact on every basis state including the cutoff.
pub fn number(space: FockSpace) -> OperatorMatrix {
    build(space, true, |n_i, s_i, n_j, s_j| {
        if s_i == s_j && n_i == n_j {
            C64::new(n_i as f64, 0.0)
        } else {
            ZERO
        }
    })
}

pub fn identity(space: FockSpace) -> OperatorMatrix {
    build(space, true, |n_i, s_i, n_j, s_j| {
        if s_i == s_j && n_i == n_j {
            ONE
        } else {
            ZERO
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// σ₊ = |e⟩⟨g|
    Plus,
    /// σ₋ = |g⟩⟨e|
    Minus,
}

impl Pauli {
    /// 2×2 matrix in the (g, e) basis, row = output level.
    fn atom_matrix(self) -> [[C64; 2]; 2] {
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            // σ_y = −i(|e⟩⟨g| − |g⟩⟨e|)
            Pauli::Y => [[ZERO, i], [-i, ZERO]],
            Pauli::Z => [[-ONE, ZERO], [ZERO, ONE]],
            Pauli::Plus => [[ZERO, ZERO], [ONE, ZERO]],
            Pauli::Minus => [[ZERO, ONE], [ZERO, ZERO]],
        }
    }

    fn is_hermitian(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y | Pauli::Z)
    }
}

/// Pauli operator acting on the atom, identity on the cavity.
pub fn pauli(which: Pauli, space: FockSpace) -> OperatorMatrix {
    let m = which.atom_matrix();
    build(space, which.is_hermitian(), |n_i, s_i, n_j, s_j| {
        if n_i == n_j {
            m[s_i.index()][s_j.index()]
        } else {
            ZERO
        }
    })
}

/// Normalized state on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: FockSpace,
    amps: DVector<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized to [`NORM_TOL`].
    pub fn new(space: FockSpace, amps: DVector<C64>) -> Result<Self> {
        space.check_dim(amps.len())?;
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self { space, amps })
    }

    pub fn normalized(space: FockSpace, amps: DVector<C64>) -> Result<Self> {
        space.check_dim(amps.len())?;
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParams(
                "cannot normalize a zero vector".into(),
            ));
        }
        Ok(Self {
            space,
            amps: amps.unscale(norm),
        })
    }

    /// Amplitudes produced by a norm-preserving map; the norm is not rechecked.
    pub(crate) fn from_unitary_image(space: FockSpace, amps: DVector<C64>) -> Self {
        debug_assert_eq!(space.dim(), amps.len());
        Self { space, amps }
    }

    pub fn basis(space: FockSpace, n: u32, level: AtomLevel) -> Result<Self> {
        if n > space.n_max() {
            return Err(Error::InvalidParams(format!(
                "photon number {n} exceeds cutoff {}",
                space.n_max()
            )));
        }
        let mut amps = DVector::zeros(space.dim());
        amps[space.index(n, level)] = ONE;
        Ok(Self { space, amps })
    }

    /// `(c_g|g⟩ + c_e|e⟩) ⊗ |cavity⟩`, renormalized.
    pub fn product(space: FockSpace, atom: [C64; 2], cavity: &CavityState) -> Result<Self> {
        if cavity.n_max() != space.n_max() {
            return Err(Error::DimensionMismatch {
                expected: space.n_max() as usize + 1,
                found: cavity.amplitudes().len(),
            });
        }
        let amps = DVector::from_fn(space.dim(), |i, _| {
            let (n, s) = space.decode(i);
            atom[s.index()] * cavity.amplitudes()[n as usize]
        });
        Self::normalized(space, amps)
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, n: u32, level: AtomLevel) -> C64 {
        self.amps[self.space.index(n, level)]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.space, other.space, "states on different spaces");
        self.amps.dotc(&other.amps)
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        Self {
            space: self.space,
            amps: &self.amps * C64::from_polar(1.0, phase),
        }
    }

    pub fn photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, c)| self.space.decode(i).0 as f64 * c.norm_sqr())
            .sum()
    }

    pub fn excited_population(&self) -> f64 {
        self.amps
            .iter()
            .skip(1)
            .step_by(2)
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// CSV with columns `index, n, atom_level, re, im` (`atom_level` 0 = g, 1 = e).
    pub fn to_csv(&self) -> CsvDocument {
        let mut doc = CsvDocument::new(&["index", "n", "atom_level", "re", "im"]);
        doc.meta("n_max", self.space.n_max());
        doc.meta("basis", "index = 2*n + atom_level");
        for (i, c) in self.amps.iter().enumerate() {
            let (n, s) = self.space.decode(i);
            doc.push_row(vec![
                i.to_string(),
                n.to_string(),
                s.index().to_string(),
                fmt_num(c.re),
                fmt_num(c.im),
            ]);
        }
        doc
    }

    pub fn from_csv(doc: &CsvDocument) -> Result<Self> {
        let n_col = doc.column_f64("n")?;
        let s_col = doc.column_f64("atom_level")?;
        let re = doc.column_f64("re")?;
        let im = doc.column_f64("im")?;
        let n_max = n_col.iter().copied().fold(0.0, f64::max) as u32;
        let space = FockSpace::new(n_max)?;
        let mut amps = DVector::zeros(space.dim());
        for k in 0..doc.rows.len() {
            let level = AtomLevel::from_index(s_col[k] as usize)
                .ok_or_else(|| Error::Config(format!("bad atom_level {}", s_col[k])))?;
            amps[space.index(n_col[k] as u32, level)] = C64::new(re[k], im[k]);
        }
        Self::new(space, amps)
    }
}

/// Cavity-only amplitudes over `n ∈ [0, n_max]`, to be tensored with an atom state.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityState {
    amps: DVector<C64>,
    tail_mass: f64,
}

impl CavityState {
    pub fn n_max(&self) -> u32 {
        (self.amps.len() - 1) as u32
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// Probability mass of the untruncated state lost beyond the cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }
}

/// Coherent state |α⟩ truncated at `n_max` and renormalized.
pub fn coherent_state(alpha: C64, n_max: u32) -> Result<CavityState> {
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    let mut amps = DVector::zeros(n_max as usize + 1);
    let mut c = C64::new(prefactor, 0.0);
    amps[0] = c;
    for n in 1..=n_max as usize {
        c = c * alpha / (n as f64).sqrt();
        amps[n] = c;
    }
    // Sum the discarded Poisson weights directly; 1 - Σ kept would cancel.
    let mut tail = 0.0;
    let mut n = n_max as usize + 1;
    loop {
        c = c * alpha / (n as f64).sqrt();
        let w = c.norm_sqr();
        tail += w;
        if w <= tail * 1e-17 || w == 0.0 || n > n_max as usize + 10_000 {
            break;
        }
        n += 1;
    }
    if tail > 1e-6 {
        return Err(Error::TailTooHeavy { mass: tail });
    }
    if tail > 1e-12 {
        log::warn!(
            "coherent state |alpha|^2 = {} loses {tail:.2e} beyond n_max = {n_max}",
            alpha.norm_sqr()
        );
    }
    let norm = amps.norm();
    Ok(CavityState {
        amps: amps.unscale(norm),
        tail_mass: tail,
    })
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: DMatrix<C64>,
}

pub fn diagonalize(h: &OperatorMatrix) -> Result<Eigensystem> {
    let deviation = h.hermitian_deviation();
    if !h.is_hermitian() || deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.matrix().nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok(Eigensystem { values, vectors })
}
