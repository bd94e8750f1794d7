use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use crate::csvio::{fmt_num, CsvDocument};
use crate::dynamics::{FidelityRun, Frame, PropagationOptions, Window};
use crate::error::{Error, Result};
use crate::fockspace::C64;
use crate::model::{classify_ratio, classify_regime, ModelParams};
use crate::modulation::{
    counter_rotating_crossings, effective_params, ratio_sweep, rwa_report, zero_point,
    DEFAULT_RWA_THRESHOLD,
};
use crate::phases::{diagram, ladder_csv, linear_grid, photon_ladder, ScanOptions};
use crate::spectrum::{critical_couplings, jc_eigenenergy, Branch};

use super::{
    FidelityArgs, FrameArg, LadderArgs, ModelArgs, ParamsArgs, PhaseDiagramArgs, SpectrumArgs,
    SweepArgs, WindowUnit,
};

/// One output: a file when `path` is set, standard output otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub body: String,
}

impl Artifact {
    fn csv(path: Option<PathBuf>, doc: &CsvDocument) -> Self {
        Self {
            path,
            body: doc.render(),
        }
    }
}

const WINDOW_NOTE: &str = "the window length is a modeling choice; both the minimum over the window and the final value are reported";

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

impl ModelArgs {
    fn params(&self, xi: f64) -> Result<ModelParams> {
        ModelParams::dimensionless(self.delta, self.g, xi, self.v)
    }
}

fn add_model_metadata(doc: &mut CsvDocument, p: &ModelParams) {
    doc.meta("tool", format!("fmrabi {}", env!("CARGO_PKG_VERSION")))
        .meta("units", "omega_c = 1, times in 1/omega_c")
        .meta("params", to_json(p))
        .meta("effective", to_json(&effective_params(p)))
        .meta("rwa", to_json(&rwa_report(p, DEFAULT_RWA_THRESHOLD)));
}

pub fn cmd_params(args: &ParamsArgs) -> Result<Vec<Artifact>> {
    if !(args.threshold > 0.0) {
        return Err(Error::InvalidParams("threshold must be positive".into()));
    }
    let p = args.model.params(args.xi)?;
    let eff = effective_params(&p);
    let zero = zero_point(&p);
    let report = json!({
        "tool": format!("fmrabi {}", env!("CARGO_PKG_VERSION")),
        "params": p,
        "delta": p.delta(),
        "effective": eff,
        "ratios": {
            "gr_over_omega_c": eff.rotating_ratio_cavity(),
            "gr_over_omega0": eff.rotating_ratio_atom(),
            "gc_over_delta_m0": eff.counter_rotating_ratio(),
        },
        "rwa": rwa_report(&p, args.threshold),
        "zero_point": zero.as_ref().ok(),
        "zero_point_error": zero.as_ref().err().map(|e| e.to_string()),
        "regime": {
            "lab": classify_regime(&p),
            "effective": classify_ratio(eff.rotating_ratio_cavity().abs()),
        },
    });
    let mut body = serde_json::to_string_pretty(&report).expect("json value serializes");
    body.push('\n');
    Ok(vec![Artifact { path: None, body }])
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<Artifact>> {
    let grid = linear_grid(args.xi_min, args.xi_max, args.xi_points)?;
    let base = args.model.params(args.xi_min)?;
    let samples = ratio_sweep(&base, &grid)?;
    let crossings = if args.xi_max > args.xi_min {
        counter_rotating_crossings(&base, args.xi_min, args.xi_max, args.level, 1e-3)?
    } else {
        Vec::new()
    };
    let mut doc = CsvDocument::new(&[
        "xi",
        "gr_over_omega_c",
        "gr_over_omega0",
        "gc_over_delta_m0",
    ]);
    add_model_metadata(&mut doc, &base);
    doc.meta("level", fmt_num(args.level)).meta(
        "level_crossings_xi",
        crossings
            .iter()
            .map(|x| fmt_num(*x))
            .collect::<Vec<_>>()
            .join(" "),
    );
    for s in samples {
        doc.push_row(vec![
            fmt_num(s.xi),
            fmt_num(s.gr_over_omega_c),
            fmt_num(s.gr_over_omega0),
            fmt_num(s.gc_over_delta_m0),
        ]);
    }
    Ok(vec![Artifact::csv(args.out.clone(), &doc)])
}

pub fn cmd_fidelity(args: &FidelityArgs) -> Result<Vec<Artifact>> {
    let p = args.model.params(args.xi)?;
    let frame = match args.frame {
        FrameArg::First => Frame::First,
        FrameArg::Second => Frame::Second,
    };
    let window = match (args.duration, args.window_unit) {
        (Some(t), _) => Window::Duration(t),
        (None, Some(WindowUnit::Modulation)) => Window::ModulationPeriods(args.periods),
        (None, Some(WindowUnit::Rabi)) => Window::RabiPeriods(args.periods),
        (None, None) => match frame.default_window() {
            Window::ModulationPeriods(_) => Window::ModulationPeriods(args.periods),
            Window::RabiPeriods(_) => Window::RabiPeriods(args.periods),
            w => w,
        },
    };
    if !(args.tolerance > 0.0) || args.steps_per_period == 0 {
        return Err(Error::InvalidParams(
            "tolerance and steps-per-period must be positive".into(),
        ));
    }
    let run = FidelityRun {
        frame,
        params: p,
        window,
        samples: args.samples,
        alpha: C64::new(args.alpha, 0.0),
        n_max: args.n_max,
        bessel_cutoff: args.bessel_cutoff,
        options: PropagationOptions {
            steps_per_period: args.steps_per_period,
            tolerance: args.tolerance,
            max_halvings: args.max_halvings,
        },
    };
    let trace = run.run()?;
    let mut doc = trace.to_csv();
    add_model_metadata(&mut doc, &p);
    let t_end = window.duration(&p)?;
    doc.meta("frame", to_json(&frame))
        .meta("window", to_json(&window))
        .meta("window_length", fmt_num(t_end))
        .meta("samples", run.samples)
        .meta("alpha", fmt_num(args.alpha))
        .meta("n_max", run.n_max)
        .meta("window_note", WINDOW_NOTE);
    Ok(vec![Artifact::csv(args.out.clone(), &doc)])
}

fn boundaries_path(args: &PhaseDiagramArgs) -> PathBuf {
    if let Some(p) = &args.boundaries_out {
        return p.clone();
    }
    let stem = args
        .out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = args
        .out
        .extension()
        .map(|e| e.to_string_lossy().into_owned());
    let name = match ext {
        Some(e) => format!("{stem}_boundaries.{e}"),
        None => format!("{stem}_boundaries"),
    };
    args.out.with_file_name(name)
}

pub fn cmd_phase_diagram(args: &PhaseDiagramArgs) -> Result<Vec<Artifact>> {
    let delta_grid = linear_grid(args.delta_min, args.delta_max, args.delta_points)?;
    let xi_grid = linear_grid(args.xi_min, args.xi_max, args.xi_points)?;
    let base = ModelParams::dimensionless(0.0, args.g, args.xi_min, args.v)?;
    let opts = ScanOptions {
        resolution: args.resolution,
    };
    let d = diagram(args.v, &delta_grid, &xi_grid, &base, &opts)?;
    let mut cells = d.cells_csv();
    let mut bounds = d.boundaries_csv();
    for doc in [&mut cells, &mut bounds] {
        add_model_metadata(doc, &base);
        doc.meta(
            "delta_grid",
            format!(
                "{} {} {}",
                fmt_num(args.delta_min),
                fmt_num(args.delta_max),
                args.delta_points
            ),
        )
        .meta(
            "xi_grid",
            format!(
                "{} {} {}",
                fmt_num(args.xi_min),
                fmt_num(args.xi_max),
                args.xi_points
            ),
        )
        .meta("scan_resolution", fmt_num(args.resolution));
    }
    Ok(vec![
        Artifact::csv(Some(args.out.clone()), &cells),
        Artifact::csv(Some(boundaries_path(args)), &bounds),
    ])
}

pub fn cmd_ladder(args: &LadderArgs) -> Result<Vec<Artifact>> {
    let grid = linear_grid(args.xi_min, args.xi_max, args.xi_points)?;
    let base = args.model.params(args.xi_min)?;
    let points = photon_ladder(&base, &grid)?;
    let mut doc = ladder_csv(&points);
    add_model_metadata(&mut doc, &base);
    Ok(vec![Artifact::csv(args.out.clone(), &doc)])
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<Vec<Artifact>> {
    if args.levels == 0 {
        return Err(Error::InvalidParams("levels must be at least 1".into()));
    }
    if args.g_min < 0.0 {
        return Err(Error::InvalidParams("g-min must be >= 0".into()));
    }
    let grid = linear_grid(args.g_min, args.g_max, args.g_points)?;
    let omega_c = 1.0;
    let omega0 = omega_c + args.delta;
    let n_list: Vec<u32> = (0..args.levels).collect();
    let critical = critical_couplings(omega_c, args.delta, &n_list)?;
    let mut doc = CsvDocument::new(&["g", "level_id", "E"]);
    doc.meta("tool", format!("fmrabi {}", env!("CARGO_PKG_VERSION")))
        .meta("units", "omega_c = 1")
        .meta("delta", fmt_num(args.delta))
        .meta(
            "critical_couplings",
            critical
                .iter()
                .map(|g| fmt_num(*g))
                .collect::<Vec<_>>()
                .join(" "),
        );
    for &g in &grid {
        doc.push_row(vec![fmt_num(g), "g0".into(), fmt_num(-omega0 / 2.0)]);
        for n in 1..=args.levels {
            for (branch, tag) in [(Branch::Minus, '-'), (Branch::Plus, '+')] {
                let e = jc_eigenenergy(n, branch, omega_c, args.delta, g);
                doc.push_row(vec![fmt_num(g), format!("{n}{tag}"), fmt_num(e)]);
            }
        }
    }
    Ok(vec![Artifact::csv(args.out.clone(), &doc)])
}
