//! Ground-state phase diagrams of the effective JC model over (δ, ξ).

use rayon::prelude::*;
use serde::Serialize;

use crate::csvio::{fmt_num, CsvDocument};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::modulation::{effective_params, EffectiveParams};
use crate::spectrum::{candidate_energy, ground_state, order_parameter, GroundKind, GroundLabel};

/// Candidate cutoff used when the effective cavity frequency is not positive
/// and no finite minimizer can be predicted.
const FALLBACK_N_MAX: u32 = 64;
/// Boundary brackets are bisected down to this width.
const BISECT_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub label: GroundLabel,
    pub n_bar: f64,
    pub degenerate: bool,
}

/// Cutoff guaranteed to lie beyond the minimizer of the convex sequence
/// `E_{n,−}` when `ω̃_c > 0`.
fn candidate_cutoff(eff: &EffectiveParams) -> u32 {
    let w = eff.omega_c_eff;
    if !(w > 0.0) {
        return FALLBACK_N_MAX;
    }
    let g2 = eff.g_r * eff.g_r;
    let n_star = if g2 > 0.0 {
        ((g2 * g2 / (w * w) - eff.delta_eff * eff.delta_eff) / (4.0 * g2)).max(0.0)
    } else {
        0.0
    };
    (2.0 * n_star.ceil() + 8.0).min(u32::MAX as f64 / 2.0) as u32
}

fn phase_of(eff: &EffectiveParams) -> Result<PhasePoint> {
    let gs = ground_state(
        eff.omega_c_eff,
        eff.omega0_eff,
        eff.g_r,
        candidate_cutoff(eff),
    )?;
    Ok(PhasePoint {
        label: gs.label,
        n_bar: order_parameter(gs.label.kind, eff.delta_eff, eff.g_r),
        degenerate: gs.degenerate,
    })
}

/// Ground state of the effective JC model at `p` and its mean photon number.
pub fn phase_at(p: &ModelParams) -> Result<PhasePoint> {
    phase_of(&effective_params(p))
}

/// A ground-state change along ξ at fixed δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boundary {
    pub xi: f64,
    /// Ground state just below `xi`.
    pub left: GroundKind,
    /// Ground state just above `xi`.
    pub right: GroundKind,
    /// `|E_left − E_right|` at `xi`.
    pub energy_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Pre-scan step in ξ.
    pub resolution: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { resolution: 1e-3 }
    }
}

/// Every ground-state change for ξ in `[xi_lo, xi_hi]` at the δ, g, v of `base`.
///
/// Labels are sampled every `opts.resolution`; each bracket with a label
/// change is bisected until it is narrower than 1e-12, splitting it further
/// whenever an intermediate phase shows up.
pub fn boundary_scan(
    base: &ModelParams,
    xi_lo: f64,
    xi_hi: f64,
    opts: &ScanOptions,
) -> Result<Vec<Boundary>> {
    if !(xi_lo.is_finite() && xi_hi.is_finite() && xi_hi > xi_lo) {
        return Err(Error::InvalidParams(format!(
            "empty ξ range [{xi_lo}, {xi_hi}]"
        )));
    }
    if !(opts.resolution > 0.0) {
        return Err(Error::InvalidParams(
            "scan resolution must be positive".into(),
        ));
    }
    let kind_at = |xi: f64| -> Result<GroundKind> { Ok(phase_at(&base.with_xi(xi)?)?.label.kind) };
    let steps = ((xi_hi - xi_lo) / opts.resolution).ceil() as usize;
    let mut out = Vec::new();
    let mut a = xi_lo;
    let mut ka = kind_at(a)?;
    for k in 1..=steps {
        let b = if k == steps {
            xi_hi
        } else {
            xi_lo + k as f64 * opts.resolution
        };
        let kb = kind_at(b)?;
        if ka != kb {
            refine(base, a, ka, b, kb, &kind_at, &mut out)?;
        }
        a = b;
        ka = kb;
    }
    Ok(out)
}

fn refine(
    base: &ModelParams,
    mut a: f64,
    ka: GroundKind,
    mut b: f64,
    kb: GroundKind,
    kind_at: &impl Fn(f64) -> Result<GroundKind>,
    out: &mut Vec<Boundary>,
) -> Result<()> {
    while b - a > BISECT_WIDTH {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let km = kind_at(mid)?;
        if km == ka {
            a = mid;
        } else if km == kb {
            b = mid;
        } else {
            refine(base, a, ka, mid, km, kind_at, out)?;
            return refine(base, mid, km, b, kb, kind_at, out);
        }
    }
    let xi = 0.5 * (a + b);
    let eff = effective_params(&base.with_xi(xi)?);
    let energy =
        |k: GroundKind| candidate_energy(k.excitation(), eff.omega_c_eff, eff.omega0_eff, eff.g_r);
    out.push(Boundary {
        xi,
        left: ka,
        right: kb,
        energy_gap: (energy(ka) - energy(kb)).abs(),
    });
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub delta: f64,
    pub xi: f64,
    pub kind: GroundKind,
    pub n_bar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub delta: f64,
    pub xi: f64,
    pub left: GroundKind,
    pub right: GroundKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub id: usize,
    pub points: Vec<BoundaryPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub v: f64,
    pub delta_grid: Vec<f64>,
    pub xi_grid: Vec<f64>,
    /// Row-major: all ξ for the first δ, then the next δ.
    pub cells: Vec<Cell>,
    pub boundaries: Vec<BoundaryCurve>,
}

impl PhaseDiagram {
    pub fn cell(&self, delta_index: usize, xi_index: usize) -> &Cell {
        &self.cells[delta_index * self.xi_grid.len() + xi_index]
    }

    pub fn cells_csv(&self) -> CsvDocument {
        let mut doc = CsvDocument::new(&["delta", "xi", "phase_label", "n_excitation", "n_bar"]);
        for c in &self.cells {
            doc.push_row(vec![
                fmt_num(c.delta),
                fmt_num(c.xi),
                c.kind.to_string(),
                c.kind.excitation().to_string(),
                fmt_num(c.n_bar),
            ]);
        }
        doc
    }

    pub fn boundaries_csv(&self) -> CsvDocument {
        let mut doc = CsvDocument::new(&["curve_id", "delta", "xi", "left_label", "right_label"]);
        for curve in &self.boundaries {
            for p in &curve.points {
                doc.push_row(vec![
                    curve.id.to_string(),
                    fmt_num(p.delta),
                    fmt_num(p.xi),
                    p.left.to_string(),
                    p.right.to_string(),
                ]);
            }
        }
        doc
    }
}

fn check_ascending(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid.windows(2).any(|w| !(w[1] > w[0]))
        || grid.iter().any(|x| !x.is_finite())
    {
        return Err(Error::InvalidParams(format!(
            "{name} grid must be non-empty and strictly ascending"
        )));
    }
    Ok(())
}

/// Cell `(δ, ξ)` evaluated exactly as [`diagram`] does.
pub fn diagram_cell(base: &ModelParams, delta: f64, xi: f64) -> Result<Cell> {
    let pt = phase_at(&base.with_delta(delta)?.with_xi(xi)?)?;
    Ok(Cell {
        delta,
        xi,
        kind: pt.label.kind,
        n_bar: pt.n_bar,
    })
}

/// Phase diagram at modulation frequency `v` (overriding `base.v`).
///
/// Rows of constant δ are computed in parallel. Boundaries come from
/// [`boundary_scan`] on each row over the ξ-grid span and are joined into
/// curves across rows when they move by less than five ξ-grid spacings.
pub fn diagram(
    v: f64,
    delta_grid: &[f64],
    xi_grid: &[f64],
    base: &ModelParams,
    opts: &ScanOptions,
) -> Result<PhaseDiagram> {
    check_ascending("delta", delta_grid)?;
    check_ascending("xi", xi_grid)?;
    let base = base.with_v(v)?;
    let xi_lo = xi_grid[0];
    let xi_hi = *xi_grid.last().unwrap();

    let rows: Vec<(Vec<Cell>, Vec<Boundary>)> = delta_grid
        .par_iter()
        .map(|&delta| {
            let cells = xi_grid
                .iter()
                .map(|&xi| diagram_cell(&base, delta, xi))
                .collect::<Result<Vec<_>>>()?;
            let bounds = if xi_grid.len() > 1 {
                boundary_scan(&base.with_delta(delta)?, xi_lo, xi_hi, opts)?
            } else {
                Vec::new()
            };
            Ok((cells, bounds))
        })
        .collect::<Result<_>>()?;

    let spacing = if xi_grid.len() > 1 {
        (xi_hi - xi_lo) / (xi_grid.len() - 1) as f64
    } else {
        opts.resolution
    };
    let boundaries = stitch(
        delta_grid,
        rows.iter().map(|(_, b)| b.as_slice()),
        5.0 * spacing,
    );
    let cells = rows.into_iter().flat_map(|(c, _)| c).collect();
    Ok(PhaseDiagram {
        v,
        delta_grid: delta_grid.to_vec(),
        xi_grid: xi_grid.to_vec(),
        cells,
        boundaries,
    })
}

/// Nearest-neighbor continuation of per-row boundary points into curves.
fn stitch<'a>(
    delta_grid: &[f64],
    rows: impl Iterator<Item = &'a [Boundary]>,
    join_within: f64,
) -> Vec<BoundaryCurve> {
    let mut curves: Vec<BoundaryCurve> = Vec::new();
    // indices of curves whose last point sits on the previous row
    let mut open: Vec<usize> = Vec::new();
    for (&delta, row) in delta_grid.iter().zip(rows) {
        let mut claimed = vec![false; open.len()];
        let mut next_open = Vec::with_capacity(row.len());
        for b in row {
            let best = open
                .iter()
                .enumerate()
                .filter(|(k, _)| !claimed[*k])
                .map(|(k, &c)| (k, c, (curves[c].points.last().unwrap().xi - b.xi).abs()))
                .filter(|&(_, _, d)| d < join_within)
                .min_by(|x, y| x.2.total_cmp(&y.2));
            let point = BoundaryPoint {
                delta,
                xi: b.xi,
                left: b.left,
                right: b.right,
            };
            let idx = match best {
                Some((k, c, _)) => {
                    claimed[k] = true;
                    curves[c].points.push(point);
                    c
                }
                None => {
                    curves.push(BoundaryCurve {
                        id: curves.len(),
                        points: vec![point],
                    });
                    curves.len() - 1
                }
            };
            next_open.push(idx);
        }
        open = next_open;
    }
    curves
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderPoint {
    pub xi: f64,
    pub kind: GroundKind,
    pub n_bar: f64,
}

/// Ground-state mean photon number along `xi_grid` at the δ, g, v of `base`.
pub fn photon_ladder(base: &ModelParams, xi_grid: &[f64]) -> Result<Vec<LadderPoint>> {
    xi_grid
        .par_iter()
        .map(|&xi| {
            let pt = phase_at(&base.with_xi(xi)?)?;
            Ok(LadderPoint {
                xi,
                kind: pt.label.kind,
                n_bar: pt.n_bar,
            })
        })
        .collect()
}

pub fn ladder_csv(points: &[LadderPoint]) -> CsvDocument {
    let mut doc = CsvDocument::new(&["xi", "n_bar"]);
    for p in points {
        doc.push_row(vec![fmt_num(p.xi), fmt_num(p.n_bar)]);
    }
    doc
}

/// `count` equally spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !(lo.is_finite() && hi.is_finite()) || (count > 1 && !(hi > lo)) {
        return Err(Error::InvalidParams(format!(
            "bad grid [{lo}, {hi}] with {count} points"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            if k == count - 1 {
                hi
            } else {
                lo + k as f64 * step
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::bessel_j;
    use crate::spectrum::critical_couplings;

    fn base(v: f64, delta: f64) -> ModelParams {
        ModelParams::dimensionless(delta, 0.05, 0.0, v).unwrap()
    }

    #[test]
    fn sample_points() {
        let pt = phase_at(&base(0.33, 0.0).with_xi(1.0).unwrap()).unwrap();
        assert_eq!(pt.label.kind, GroundKind::SuperradiantNMinus(4));
        assert_eq!(pt.n_bar, 3.5);
        let pt = phase_at(&base(0.49, 0.0).with_xi(2.0).unwrap()).unwrap();
        assert_eq!(pt.label.kind, GroundKind::NormalG0);
        assert_eq!(pt.n_bar, 0.0);
    }

    #[test]
    fn uncoupled_is_normal() {
        for &v in &[0.18, 0.33, 0.49] {
            for &xi in &[0.0, 0.7, 2.0, 3.0] {
                let p = ModelParams::dimensionless(0.01, 0.0, xi, v).unwrap();
                assert_eq!(phase_at(&p).unwrap().label.kind, GroundKind::NormalG0);
            }
        }
    }

    #[test]
    fn first_boundary_from_bessel_root() {
        // |g,0⟩ ↔ |1,−⟩ where 0.05·|J₀(ξ)| = ω̃_c = 0.01 at v = 0.33, δ = 0
        let f = |x: f64| 0.05 * bessel_j(0, x).unwrap() - 0.01;
        let (mut lo, mut hi) = (1.5, 2.4);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (f(lo) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        let found = boundary_scan(&base(0.33, 0.0), 0.0, 3.0, &ScanOptions::default()).unwrap();
        let b = found
            .iter()
            .find(|b| {
                b.left == GroundKind::SuperradiantNMinus(1) && b.right == GroundKind::NormalG0
            })
            .unwrap();
        assert!((b.xi - root).abs() < 1e-9, "{} vs {root}", b.xi);
    }

    #[test]
    fn boundaries_match_closed_form_couplings() {
        for &(v, delta) in &[
            (0.33, 0.0),
            (0.49, 0.0),
            (0.33, 0.03),
            (0.33, -0.015),
            (0.18, 0.05),
        ] {
            let b0 = base(v, delta);
            let eff = effective_params(&b0);
            assert!(eff.omega_c_eff > 0.0);
            for b in boundary_scan(&b0, 0.0, 3.0, &ScanOptions::default()).unwrap() {
                assert!(b.energy_gap <= 1e-9, "gap {}", b.energy_gap);
                let (lo, hi) = {
                    let (l, r) = (b.left.excitation(), b.right.excitation());
                    (l.min(r), l.max(r))
                };
                assert_eq!(hi, lo + 1, "non-adjacent phases meet at {}", b.xi);
                let gc = critical_couplings(eff.omega_c_eff, delta, &[lo]).unwrap()[0];
                // |g J₀(ξ)| = gc near b.xi; Newton step on the Bessel side
                let h = 1e-7;
                let f = |x: f64| 0.05 * bessel_j(0, x).unwrap().abs() - gc;
                let slope = (f(b.xi + h) - f(b.xi - h)) / (2.0 * h);
                let shift = f(b.xi) / slope;
                assert!(
                    shift.abs() < 1e-5,
                    "v = {v}, δ = {delta}, ξ = {}: shift {shift}",
                    b.xi
                );
            }
        }
    }

    #[test]
    fn single_phase_gives_no_boundaries() {
        let p = ModelParams::dimensionless(0.0, 0.0, 0.0, 0.33).unwrap();
        assert!(boundary_scan(&p, 0.0, 3.0, &ScanOptions::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn nearby_boundaries_are_separated() {
        // coarse pre-scan that straddles several transitions at once
        let coarse = ScanOptions { resolution: 0.9 };
        let fine = ScanOptions::default();
        let a = boundary_scan(&base(0.33, 0.0), 0.0, 3.0, &coarse).unwrap();
        let b = boundary_scan(&base(0.33, 0.0), 0.0, 3.0, &fine).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.xi - y.xi).abs() < 1e-9);
            assert_eq!((x.left, x.right), (y.left, y.right));
        }
    }

    #[test]
    fn diagram_cells_are_pure() {
        let b0 = base(0.33, 0.0);
        let dg = linear_grid(-0.1, 0.1, 7).unwrap();
        let xg = linear_grid(0.0, 3.0, 31).unwrap();
        let d = diagram(0.33, &dg, &xg, &b0, &ScanOptions::default()).unwrap();
        let bv = b0.with_v(0.33).unwrap();
        for (i, &delta) in dg.iter().enumerate() {
            for (j, &xi) in xg.iter().enumerate() {
                let alone = diagram_cell(&bv, delta, xi).unwrap();
                assert_eq!(*d.cell(i, j), alone);
                assert_eq!(alone.n_bar.to_bits(), d.cell(i, j).n_bar.to_bits());
            }
        }
    }

    #[test]
    fn uncoupled_diagram_is_uniform() {
        let p = ModelParams::dimensionless(0.0, 0.0, 0.0, 0.33).unwrap();
        let dg = linear_grid(-0.1, 0.1, 5).unwrap();
        let xg = linear_grid(0.0, 3.0, 21).unwrap();
        let d = diagram(0.49, &dg, &xg, &p, &ScanOptions::default()).unwrap();
        assert!(d.boundaries.is_empty());
        for c in &d.cells {
            assert_eq!(c.n_bar, 0.0);
            // below δ = −ω̃_c the effective atom frequency is negative and
            // |1,−⟩ = |e,0⟩ lies lowest, still without photons
            let eff = effective_params(&p.with_v(0.49).unwrap().with_delta(c.delta).unwrap());
            if eff.omega0_eff > 0.0 {
                assert_eq!(c.kind, GroundKind::NormalG0);
            } else {
                assert_eq!(c.kind, GroundKind::SuperradiantNMinus(1));
            }
        }
    }

    #[test]
    fn stitching_follows_rows() {
        let mk = |xi: f64| Boundary {
            xi,
            left: GroundKind::NormalG0,
            right: GroundKind::SuperradiantNMinus(1),
            energy_gap: 0.0,
        };
        let rows = vec![
            vec![mk(1.0), mk(2.0)],
            vec![mk(1.01), mk(2.02)],
            vec![mk(2.03)],
            vec![mk(1.0)],
        ];
        let curves = stitch(
            &[0.0, 0.1, 0.2, 0.3],
            rows.iter().map(|r| r.as_slice()),
            0.025,
        );
        assert_eq!(curves.len(), 3);
        assert_eq!(curves[0].points.len(), 2);
        assert_eq!(curves[1].points.len(), 3);
        assert_eq!(curves[2].points.len(), 1);
        assert_eq!(curves[2].points[0].delta, 0.3);
    }

    #[test]
    fn ladder_monotone_at_resonance() {
        for &v in &[0.33, 0.49] {
            let b0 = base(v, 0.0);
            let grid = linear_grid(0.001, 3.0, 3000).unwrap();
            let ladder = photon_ladder(&b0, &grid).unwrap();
            let first_zero = 2.404825557695773;
            for w in ladder.windows(2) {
                if w[1].xi < first_zero {
                    assert!(w[1].n_bar <= w[0].n_bar);
                } else if w[0].xi > first_zero {
                    assert!(w[1].n_bar >= w[0].n_bar);
                }
            }
        }
    }

    #[test]
    fn grids() {
        assert_eq!(linear_grid(0.0, 3.0, 601).unwrap().len(), 601);
        assert_eq!(*linear_grid(-0.1, 0.1, 201).unwrap().last().unwrap(), 0.1);
        assert_eq!(linear_grid(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(linear_grid(1.0, 0.0, 3).is_err());
    }
}
