//! Closed-form Jaynes–Cummings eigensystem, critical couplings and the
//! ground-state photon number.
//!
//! The JC Hamiltonian `ω₀σ_z/2 + ω_c a†a + g(a†σ₋ + aσ₊)` conserves the
//! excitation number. Besides `|g,0⟩` (energy `−ω₀/2`) every eigenstate sits
//! in a doublet `{|e,n−1⟩, |g,n⟩}` with energies
//! `E_{n,±} = (n − ½)ω_c ± ½√(4g²n + δ²)`. The same formulas serve the
//! effective model after `ω_c → ω̃_c`, `ω₀ → ω̃₀`, `g → g_r`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockspace::{AtomLevel, FockSpace, StateVector, C64};
use crate::modulation::{Advisory, EffectiveParams};

/// Relative tolerance (in units of |ω_c|) below which two candidate ground
/// energies count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// `Ωₙ = √(4g²n + δ²)`
pub fn doublet_splitting(n: u32, delta: f64, g: f64) -> f64 {
    (4.0 * g * g * n as f64 + delta * delta).sqrt()
}

/// `E_{n,±} = (n − ½)ω_c ± ½Ωₙ`, evaluated as written for any sign of ω_c, δ.
pub fn jc_eigenenergy(n: u32, branch: Branch, omega_c: f64, delta: f64, g: f64) -> f64 {
    let half_split = 0.5 * doublet_splitting(n, delta, g);
    let centre = (n as f64 - 0.5) * omega_c;
    match branch {
        Branch::Plus => centre + half_split,
        Branch::Minus => centre - half_split,
    }
}

/// Mixing angle with `sin 2θ = 2g√n/Ωₙ`, `cos 2θ = δ/Ωₙ`.
///
/// Lies in `[0, π/2]` for `g ≥ 0`; a negative coupling mirrors it to
/// `[−π/2, 0)`. The resonant uncoupled case returns π/4.
pub fn mixing_angle(n: u32, delta: f64, g: f64) -> f64 {
    let s = 2.0 * g * (n as f64).sqrt();
    if s == 0.0 && delta == 0.0 {
        return std::f64::consts::FRAC_PI_4;
    }
    0.5 * s.atan2(delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedLevel {
    pub n: u32,
    pub branch: Branch,
    pub energy: f64,
    pub theta: f64,
}

impl DressedLevel {
    /// `|n,+⟩ = cos θ|e,n−1⟩ + sin θ|g,n⟩`, `|n,−⟩ = −sin θ|e,n−1⟩ + cos θ|g,n⟩`.
    pub fn state(&self, space: FockSpace) -> Result<StateVector> {
        if self.n == 0 || self.n > space.n_max() {
            return Err(Error::InvalidParams(format!(
                "dressed level n = {} outside [1, {}]",
                self.n,
                space.n_max()
            )));
        }
        let (s, c) = self.theta.sin_cos();
        let (e_amp, g_amp) = match self.branch {
            Branch::Plus => (c, s),
            Branch::Minus => (-s, c),
        };
        let mut amps = nalgebra::DVector::zeros(space.dim());
        amps[space.index(self.n - 1, AtomLevel::Excited)] = C64::new(e_amp, 0.0);
        amps[space.index(self.n, AtomLevel::Ground)] = C64::new(g_amp, 0.0);
        StateVector::new(space, amps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "n")]
pub enum GroundKind {
    NormalG0,
    SuperradiantNMinus(u32),
}

impl GroundKind {
    /// Excitation number: 0 for `|g,0⟩`, n for `|n,−⟩`.
    pub fn excitation(&self) -> u32 {
        match *self {
            GroundKind::NormalG0 => 0,
            GroundKind::SuperradiantNMinus(n) => n,
        }
    }

    pub fn from_excitation(n: u32) -> Self {
        if n == 0 {
            GroundKind::NormalG0
        } else {
            GroundKind::SuperradiantNMinus(n)
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, GroundKind::NormalG0)
    }
}

impl std::fmt::Display for GroundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroundKind::NormalG0 => f.write_str("g0"),
            GroundKind::SuperradiantNMinus(n) => write!(f, "{n}-"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundLabel {
    pub kind: GroundKind,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundState {
    pub label: GroundLabel,
    /// Another candidate was within the degeneracy tolerance.
    pub degenerate: bool,
}

/// Energy of the candidate ground state with excitation number `n`
/// (`|g,0⟩` for n = 0, `|n,−⟩` otherwise).
pub fn candidate_energy(n: u32, omega_c: f64, omega0: f64, g: f64) -> f64 {
    if n == 0 {
        -omega0 / 2.0
    } else {
        jc_eigenenergy(n, Branch::Minus, omega_c, omega0 - omega_c, g)
    }
}

/// Lowest of `−ω₀/2` and `E_{n,−}` for `1 ≤ n ≤ n_max`.
///
/// Ties within `DEGENERACY_TOL·|ω_c|` go to the smaller n. A minimizer at
/// `n_max` means the candidate list was cut too early.
pub fn ground_state(omega_c: f64, omega0: f64, g: f64, n_max: u32) -> Result<GroundState> {
    if n_max < 1 {
        return Err(Error::InvalidParams("n_max must be >= 1".into()));
    }
    let tol = DEGENERACY_TOL * omega_c.abs();
    let energy = |n| candidate_energy(n, omega_c, omega0, g);
    let mut best_n = 0;
    let mut best_e = energy(0);
    for n in 1..=n_max {
        let e = energy(n);
        if e < best_e - tol {
            best_n = n;
            best_e = e;
        }
    }
    let degenerate = (0..=n_max).any(|n| n != best_n && (energy(n) - best_e).abs() <= tol);
    if best_n == n_max {
        return Err(Error::CutoffSuspect { n_max });
    }
    Ok(GroundState {
        label: GroundLabel {
            kind: GroundKind::from_excitation(best_n),
            energy: best_e,
        },
        degenerate,
    })
}

/// Critical couplings at which the ground state changes.
///
/// `n = 0` gives `g₀ = √((ω_c + δ)ω_c)` (`|g,0⟩ ↔ |1,−⟩`); `n ≥ 1` gives
/// `gₙ = √(ω_c²(2n+1) + √(4nω_c⁴(n+1) + δ²ω_c²))` (`|n,−⟩ ↔ |n+1,−⟩`).
pub fn critical_couplings(omega_c: f64, delta: f64, n_list: &[u32]) -> Result<Vec<f64>> {
    if omega_c == 0.0 {
        return Err(Error::InvalidParams("omega_c must be nonzero".into()));
    }
    n_list
        .iter()
        .map(|&n| {
            if n == 0 {
                let radicand = (omega_c + delta) * omega_c;
                if radicand < 0.0 {
                    return Err(Error::NegativeRadicand { value: radicand });
                }
                Ok(radicand.sqrt())
            } else {
                let nf = n as f64;
                let w2 = omega_c * omega_c;
                let inner = (4.0 * nf * w2 * w2 * (nf + 1.0) + delta * delta * w2).sqrt();
                Ok((w2 * (2.0 * nf + 1.0) + inner).sqrt())
            }
        })
        .collect()
}

/// Ground-state mean photon number: 0 for `|g,0⟩`, `n − ½ + δ/(2Ωₙ)` for `|n,−⟩`.
pub fn order_parameter(kind: GroundKind, delta: f64, g: f64) -> f64 {
    match kind {
        GroundKind::NormalG0 => 0.0,
        GroundKind::SuperradiantNMinus(n) => {
            let omega = doublet_splitting(n, delta, g);
            if omega == 0.0 {
                // degenerate doublet; take the resonant mixture
                return n as f64 - 0.5;
            }
            n as f64 - 0.5 + delta / (2.0 * omega)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveEigensystem {
    /// `(n, −)` and `(n, +)` for n = 1..=n_max, in that order.
    pub levels: Vec<DressedLevel>,
    pub ground: GroundState,
    pub advisories: Vec<Advisory>,
}

impl EffectiveEigensystem {
    pub fn level(&self, n: u32, branch: Branch) -> Option<&DressedLevel> {
        self.levels.iter().find(|l| l.n == n && l.branch == branch)
    }

    /// `Ẽ_{g,0} = −ω̃₀/2` together with every doublet energy, ascending.
    pub fn energies(&self, omega0_eff: f64) -> Vec<f64> {
        let mut out: Vec<f64> = std::iter::once(-omega0_eff / 2.0)
            .chain(self.levels.iter().map(|l| l.energy))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

pub fn effective_eigensystem(eff: &EffectiveParams, n_max: u32) -> Result<EffectiveEigensystem> {
    let omega_c = eff.omega_c_eff;
    let delta = eff.delta_eff;
    let g = eff.g_r;
    let levels = (1..=n_max)
        .flat_map(|n| {
            let theta = mixing_angle(n, delta, g);
            [Branch::Minus, Branch::Plus].map(|branch| DressedLevel {
                n,
                branch,
                energy: jc_eigenenergy(n, branch, omega_c, delta, g),
                theta,
            })
        })
        .collect();
    let ground = ground_state(omega_c, eff.omega0_eff, g, n_max)?;
    let mut advisories = eff.advisories.clone();
    if ground.degenerate && !advisories.contains(&Advisory::Degenerate) {
        advisories.push(Advisory::Degenerate);
    }
    Ok(EffectiveEigensystem {
        levels,
        ground,
        advisories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::modulation::effective_params;
    use proptest::prelude::*;

    #[test]
    fn first_crossing_at_unit_coupling() {
        let e = jc_eigenenergy(1, Branch::Minus, 1.0, 0.0, 1.0);
        assert!((e + 0.5).abs() < 1e-15);
        assert!((e - candidate_energy(0, 1.0, 1.0, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn bare_ladder() {
        for n in 1..10 {
            for b in [Branch::Plus, Branch::Minus] {
                assert_eq!(jc_eigenenergy(n, b, 1.0, 0.0, 0.0), n as f64 - 0.5);
            }
        }
    }

    #[test]
    fn second_crossing() {
        let g = 1.0 + 2f64.sqrt();
        let e1 = jc_eigenenergy(1, Branch::Minus, 1.0, 0.0, g);
        let e2 = jc_eigenenergy(2, Branch::Minus, 1.0, 0.0, g);
        assert!((e1 - e2).abs() < 1e-12);
        assert!((g - 2.414).abs() < 1e-3);
    }

    #[test]
    fn resonant_critical_values() {
        let gs = critical_couplings(1.0, 0.0, &[0, 1, 2]).unwrap();
        assert!((gs[0] - 1.0).abs() < 1e-15);
        assert!((gs[1] - (3.0 + 8f64.sqrt()).sqrt()).abs() < 1e-14);
        assert!((gs[2] - (5.0 + 24f64.sqrt()).sqrt()).abs() < 1e-14);
        assert!((gs[1] - 2.414).abs() < 1e-3);
        assert!((gs[2] - 3.146).abs() < 1e-3);
    }

    #[test]
    fn critical_values_are_degeneracies() {
        for &delta in &[0.0, 0.3, -0.4] {
            let ns: Vec<u32> = (0..8).collect();
            let gs = critical_couplings(1.0, delta, &ns).unwrap();
            for (&n, &g) in ns.iter().zip(&gs) {
                let lower = candidate_energy(n, 1.0, 1.0 + delta, g);
                let upper = candidate_energy(n + 1, 1.0, 1.0 + delta, g);
                assert!((lower - upper).abs() < 1e-10, "n = {n}, δ = {delta}");
            }
        }
    }

    #[test]
    fn negative_radicand() {
        assert!(matches!(
            critical_couplings(1.0, -1.5, &[0]),
            Err(Error::NegativeRadicand { .. })
        ));
        assert!(critical_couplings(1.0, -1.5, &[1, 2]).is_ok());
    }

    #[test]
    fn effective_critical_coupling() {
        let p = ModelParams::dimensionless(0.0, 0.05, 0.0, 0.33).unwrap();
        let eff = effective_params(&p);
        let g0 = critical_couplings(eff.omega_c_eff, eff.delta_eff, &[0]).unwrap()[0];
        assert!((g0 - 0.01).abs() < 1e-14);
    }

    #[test]
    fn ground_labels() {
        let gs = ground_state(1.0, 1.0, 1.5, 30).unwrap();
        assert_eq!(gs.label.kind, GroundKind::SuperradiantNMinus(1));
        let gs = ground_state(1.0, 1.0, 2.8, 30).unwrap();
        assert_eq!(gs.label.kind, GroundKind::SuperradiantNMinus(2));
        let gs = ground_state(1.0, 1.0, 0.0, 30).unwrap();
        assert_eq!(gs.label.kind, GroundKind::NormalG0);
        assert_eq!(gs.label.energy, -0.5);
    }

    #[test]
    fn degenerate_goes_to_lower_photon_number() {
        let gs = ground_state(1.0, 1.0, 1.0, 30).unwrap();
        assert_eq!(gs.label.kind, GroundKind::NormalG0);
        assert!(gs.degenerate);
        let gs = ground_state(1.0, 1.0, 1.0 + 2f64.sqrt(), 30).unwrap();
        assert_eq!(gs.label.kind, GroundKind::SuperradiantNMinus(1));
        assert!(gs.degenerate);
    }

    #[test]
    fn cutoff_suspect() {
        assert!(matches!(
            ground_state(1.0, 1.0, 6.0, 3),
            Err(Error::CutoffSuspect { n_max: 3 })
        ));
        // negative cavity frequency: energies fall without bound
        assert!(matches!(
            ground_state(-0.01, 0.01, 0.05, 30),
            Err(Error::CutoffSuspect { .. })
        ));
    }

    #[test]
    fn photon_numbers() {
        assert_eq!(order_parameter(GroundKind::NormalG0, 0.1, 0.3), 0.0);
        assert_eq!(
            order_parameter(GroundKind::SuperradiantNMinus(1), 0.0, 0.3),
            0.5
        );
        assert_eq!(
            order_parameter(GroundKind::SuperradiantNMinus(6), 0.0, 0.05),
            5.5
        );
    }

    #[test]
    fn photon_number_matches_dressed_state() {
        let space = FockSpace::new(10).unwrap();
        for &(delta, g) in &[(0.02, 0.01), (-0.3, 0.7), (0.0, 0.4)] {
            for n in 1..6 {
                let level = DressedLevel {
                    n,
                    branch: Branch::Minus,
                    energy: jc_eigenenergy(n, Branch::Minus, 1.0, delta, g),
                    theta: mixing_angle(n, delta, g),
                };
                let st = level.state(space).unwrap();
                let nbar = order_parameter(GroundKind::SuperradiantNMinus(n), delta, g);
                assert!((st.photon_number() - nbar).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn effective_ground_states() {
        let p = ModelParams::dimensionless(0.0, 0.05, 0.2, 0.49).unwrap();
        let sys = effective_eigensystem(&effective_params(&p), 30).unwrap();
        assert_eq!(sys.ground.label.kind, GroundKind::SuperradiantNMinus(2));

        let p = ModelParams::dimensionless(0.0, 0.05, 2.5, 0.33).unwrap();
        let sys = effective_eigensystem(&effective_params(&p), 30).unwrap();
        assert_eq!(sys.ground.label.kind, GroundKind::NormalG0);
        assert!((sys.ground.label.energy + 0.005).abs() < 1e-14);
    }

    #[test]
    fn resonant_mixing_is_quarter_pi() {
        let p = ModelParams::dimensionless(0.0, 0.05, 0.7, 0.33).unwrap();
        let sys = effective_eigensystem(&effective_params(&p), 10).unwrap();
        for l in &sys.levels {
            assert!((l.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        }
        let minus = sys.level(3, Branch::Minus).unwrap();
        let st = minus.state(FockSpace::new(5).unwrap()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((st.amplitude(2, AtomLevel::Excited).re + r).abs() < 1e-15);
        assert!((st.amplitude(3, AtomLevel::Ground).re - r).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn mixing_angle_relations(n in 1u32..40, delta in -2.0f64..2.0, g in 0.0f64..3.0) {
            prop_assume!(g > 0.0 || delta != 0.0);
            let theta = mixing_angle(n, delta, g);
            let omega = doublet_splitting(n, delta, g);
            let (s2, c2) = (2.0 * theta).sin_cos();
            prop_assert!((s2 - 2.0 * g * (n as f64).sqrt() / omega).abs() < 1e-12);
            prop_assert!((c2 - delta / omega).abs() < 1e-12);
            prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&theta));
        }

        #[test]
        fn plus_above_minus(n in 1u32..40, omega_c in -1.0f64..2.0, delta in -2.0f64..2.0, g in -3.0f64..3.0) {
            prop_assert!(jc_eigenenergy(n, Branch::Plus, omega_c, delta, g) >= jc_eigenenergy(n, Branch::Minus, omega_c, delta, g));
        }

        #[test]
        fn coupling_sign_gauge(n in 1u32..40, omega_c in -1.0f64..2.0, delta in -2.0f64..2.0, g in 0.0f64..3.0) {
            for b in [Branch::Plus, Branch::Minus] {
                prop_assert_eq!(jc_eigenenergy(n, b, omega_c, delta, g), jc_eigenenergy(n, b, omega_c, delta, -g));
            }
        }
    }
}
