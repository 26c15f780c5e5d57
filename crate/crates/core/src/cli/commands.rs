//! One function per subcommand. Each returns the process exit code.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::dynamics::{ensemble_average, integrate_master, propagate_nhh, TimeGrid};
use crate::error::{Error, Result};
use crate::linalg::{trace_distance, DensityMatrix, Operator, C64};
use crate::model::json::{ComplexJson, ModelJson};
use crate::model::{betadyne, liouvillian_matrix, nhh, nhh_beta, LindbladModel, UnravelingSpec};
use crate::spectral::{
    char_poly3, coalescence_of, cubic_discriminant, eigendecompose, find_ep, track_branches, CoalescenceReport,
    EigenSystem, EpLocation, EpSearchOptions, SearchSpace,
};
use crate::tol;
use crate::validate::{construction_failure, report_with, run_validation, validate_model};

use super::config::{self, EnsembleConfig, GridConfig, SearchConfig, SweepConfig, TimeConfig, ValidateConfig};
use super::output::{Format, OutputDir, Table};

/// Unraveling with the listed channels (all when `None`) displaced by `beta`.
fn with_beta(spec: &UnravelingSpec, channels: Option<&[usize]>, beta: C64) -> Result<UnravelingSpec> {
    let mut betas = spec.betas().to_vec();
    match channels {
        Some(list) => {
            for &k in list {
                let n = betas.len();
                *betas.get_mut(k).ok_or_else(|| Error::Config(format!("channel {k} out of range ({n} channels)")))? =
                    beta;
            }
        }
        None => betas.iter_mut().for_each(|b| *b = beta),
    }
    UnravelingSpec::new(betas, spec.mixing().cloned())
}

fn model_at(cfg: &Value, path: &str, x: f64) -> Result<(LindbladModel, UnravelingSpec)> {
    let mut c = cfg.clone();
    config::set_path(&mut c, path, Value::from(x))?;
    config::build_model(&c)
}

fn discriminant_of(h: &Operator) -> Result<Option<C64>> {
    if h.dim() != 3 {
        return Ok(None);
    }
    let (a, b, c) = char_poly3(h)?;
    Ok(Some(cubic_discriminant(a, b, c)))
}

#[derive(Serialize)]
struct SpectrumSummary {
    param: String,
    points: usize,
    min_measure: f64,
    at_param: f64,
    min_gap: f64,
    max_overlap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    discriminant_ratio: Option<f64>,
}

pub fn spectrum(cfg: &Value, format: Format, out: &mut OutputDir) -> Result<i32> {
    let sweep: SweepConfig = config::required(cfg, "sweep", "spectrum")?;
    let xs = sweep.values()?;
    let points: Vec<(EigenSystem, CoalescenceReport, Option<C64>)> = xs
        .par_iter()
        .map(|&x| {
            let (model, spec) = model_at(cfg, &sweep.param, x)?;
            let h = nhh_beta(&model, &spec)?;
            let sys = eigendecompose(&h)?;
            let report = coalescence_of(&sys)?;
            Ok((sys, report, discriminant_of(&h)?))
        })
        .collect::<Result<_>>()?;
    let systems: Vec<EigenSystem> = points.iter().map(|p| p.0.clone()).collect();
    let branches = track_branches(&systems)?;
    let values = branches.values(&systems);

    let mut table = Table::new(&["param", "branch_index", "re_E", "im_E", "min_gap", "max_overlap"]);
    for (p, &x) in xs.iter().enumerate() {
        for (b, branch) in values.iter().enumerate() {
            let r = &points[p].1;
            table.push(vec![
                x.into(),
                b.into(),
                branch[p].re.into(),
                branch[p].im.into(),
                r.min_gap.into(),
                r.max_overlap.into(),
            ]);
        }
    }
    out.table("spectrum", "branch-tracked NHH eigenvalues along the sweep", &table, format)?;

    let best = (0..xs.len()).min_by(|&i, &j| points[i].1.measure.total_cmp(&points[j].1.measure)).expect("points >= 2");
    let disc_max = points.iter().filter_map(|p| p.2.map(|d| d.norm())).fold(0.0, f64::max);
    let summary = SpectrumSummary {
        param: sweep.param.clone(),
        points: xs.len(),
        min_measure: points[best].1.measure,
        at_param: xs[best],
        min_gap: points[best].1.min_gap,
        max_overlap: points[best].1.max_overlap,
        discriminant_ratio: points[best].2.map(|d| if disc_max > 0.0 { d.norm() / disc_max } else { 0.0 }),
    };
    out.json("spectrum_summary.json", "sweep point closest to coalescence", &summary)?;
    Ok(0)
}

#[derive(Serialize)]
struct OverlapSummary {
    max_overlap: f64,
    #[serde(with = "crate::model::json::complex")]
    at: C64,
    min_measure: f64,
    #[serde(with = "crate::model::json::complex")]
    min_measure_at: C64,
}

pub fn overlap_map(cfg: &Value, format: Format, out: &mut OutputDir) -> Result<i32> {
    let grid: GridConfig = config::required(cfg, "grid", "overlap-map")?;
    let (re, im) = grid.axes()?;
    let (model, spec) = config::build_model(cfg)?;
    if model.dim() < 2 {
        return Err(Error::Config("overlap map needs a model of dimension at least 2".into()));
    }
    let rows: Vec<Vec<(C64, CoalescenceReport)>> = im
        .par_iter()
        .map(|&y| {
            re.iter()
                .map(|&x| {
                    let beta = C64::new(x, y);
                    let h = nhh_beta(&model, &with_beta(&spec, grid.channels.as_deref(), beta)?)?;
                    Ok((beta, coalescence_of(&eigendecompose(&h)?)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["re_beta", "im_beta", "max_overlap", "min_gap"]);
    let mut best_overlap = (f64::NEG_INFINITY, C64::new(0.0, 0.0));
    let mut best_measure = (f64::INFINITY, C64::new(0.0, 0.0));
    for (beta, r) in rows.iter().flatten() {
        table.push(vec![beta.re.into(), beta.im.into(), r.max_overlap.into(), r.min_gap.into()]);
        if r.max_overlap > best_overlap.0 {
            best_overlap = (r.max_overlap, *beta);
        }
        if r.measure < best_measure.0 {
            best_measure = (r.measure, *beta);
        }
    }
    out.table("overlap_map", "eigenvector overlap and eigenvalue gap over the beta grid", &table, format)?;
    let summary = OverlapSummary {
        max_overlap: best_overlap.0,
        at: best_overlap.1,
        min_measure: best_measure.0,
        min_measure_at: best_measure.1,
    };
    out.json("overlap_summary.json", "grid maximum of the overlap", &summary)?;
    Ok(0)
}

#[derive(Serialize)]
struct EpReport {
    over: String,
    location: EpLocation,
    converged: bool,
    tolerance: f64,
    measure: f64,
    min_gap: f64,
    max_overlap: f64,
    pair: (usize, usize),
    iterations: usize,
    eigenvalues: Vec<ComplexJson>,
    eigenvectors: Vec<Vec<ComplexJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discriminant: Option<ComplexJson>,
}

fn parse_x0(v: &Value) -> Result<EpLocation> {
    if let Some(x) = v.as_f64() {
        return Ok(EpLocation::Real(x));
    }
    let z: ComplexJson = serde_json::from_value(v.clone()).map_err(|e| Error::Config(format!("search.x0: {e}")))?;
    Ok(EpLocation::Complex(z.into()))
}

pub fn ep_find(cfg: &Value, out: &mut OutputDir) -> Result<i32> {
    let search: SearchConfig = match cfg.get("search") {
        Some(_) => config::required(cfg, "search", "ep-find")?,
        None => serde_json::from_value(serde_json::json!({})).expect("defaults"),
    };
    let opts = EpSearchOptions {
        tol: search.tol.unwrap_or(tol::EP_SEARCH),
        grid: search.grid.unwrap_or(9),
        starts: search.starts.unwrap_or(4),
        ..Default::default()
    };
    let x0 = search.x0.as_ref().map(parse_x0).transpose()?;
    let (model, spec) = config::build_model(cfg)?;
    let channels = search.channels.clone();
    let result = if search.over == "beta" {
        let space = SearchSpace::Complex {
            re: search.re.map_or((-1.0, 1.0), |r| (r[0], r[1])),
            im: search.im.map_or((-1.0, 1.0), |r| (r[0], r[1])),
        };
        let family = |loc: EpLocation| -> Result<Operator> {
            let beta = loc.as_complex().ok_or_else(|| Error::InvalidParameter("expected a complex location".into()))?;
            Ok(nhh_beta(&model, &with_beta(&spec, channels.as_deref(), beta)?)?.into_operator())
        };
        find_ep(family, &space, x0, &opts)?
    } else {
        let (min, max) = match (search.min, search.max) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Config(format!("search over '{}' needs 'min' and 'max'", search.over))),
        };
        let path = search.over.clone();
        let family = |loc: EpLocation| -> Result<Operator> {
            let x = loc.as_real().ok_or_else(|| Error::InvalidParameter("expected a real location".into()))?;
            let (m, s) = model_at(cfg, &path, x)?;
            Ok(nhh_beta(&m, &s)?.into_operator())
        };
        find_ep(family, &SearchSpace::Real { min, max }, x0, &opts)?
    };
    let h = match result.location {
        EpLocation::Complex(beta) => nhh_beta(&model, &with_beta(&spec, channels.as_deref(), beta)?)?,
        EpLocation::Real(x) => {
            let (m, s) = model_at(cfg, &search.over, x)?;
            nhh_beta(&m, &s)?
        }
    };
    let report = EpReport {
        over: search.over.clone(),
        location: result.location,
        converged: result.converged,
        tolerance: opts.tol,
        measure: result.report.measure,
        min_gap: result.report.min_gap,
        max_overlap: result.report.max_overlap,
        pair: result.report.pair,
        iterations: result.iterations,
        eigenvalues: result.system.eigenvalues.iter().map(|&z| z.into()).collect(),
        eigenvectors: result
            .system
            .vectors
            .iter()
            .map(|v| v.amplitudes().iter().map(|&z| z.into()).collect())
            .collect(),
        discriminant: discriminant_of(&h)?.map(Into::into),
    };
    if !result.converged {
        log::warn!(
            "search did not reach tolerance {:.1e}: best measure {:.3e}; reporting the best location found",
            opts.tol,
            result.report.measure
        );
    }
    out.json("ep.json", "exceptional-point search result", &report)?;
    Ok(0)
}

#[derive(Serialize)]
struct TrajectorySummary {
    trajectories: usize,
    seed: u64,
    steps: usize,
    dt: f64,
    jump_load: f64,
    total_jumps: usize,
    statistical_bound: f64,
    max_trace_distance: f64,
    within_bound: bool,
    final_nojump_fraction: f64,
    final_survival: f64,
    max_fraction_relative_error: Option<f64>,
    max_conditional_distance: Option<f64>,
}

pub fn trajectories(cfg: &Value, seed: u64, format: Format, out: &mut OutputDir) -> Result<i32> {
    let (model, spec) = config::build_model(cfg)?;
    let time: TimeConfig = config::optional(cfg, "time")?;
    let grid: TimeGrid = time.grid()?;
    let ens: EnsembleConfig = config::optional(cfg, "ensemble")?;
    if ens.trajectories == 0 {
        return Err(Error::Config("ensemble.trajectories must be at least 1".into()));
    }
    let psi0 = ens.initial_state.ket(model.dim())?;
    let unraveled = betadyne(&model, &spec)?;
    let jump_load = grid.check_jump_load(&unraveled)?;
    let stats = ensemble_average(&unraveled, &psi0, &grid, ens.trajectories, seed)?;
    let master = integrate_master(&model, &DensityMatrix::pure(&psi0)?, &grid)?;
    let nojump = propagate_nhh(&nhh(&unraveled), &psi0, &grid)?;

    let d = model.dim();
    let mut columns: Vec<String> = ["t", "trace_distance", "nojump_fraction", "survival", "conditional_distance"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in 0..d {
        columns.push(format!("pop{k}_ensemble"));
        columns.push(format!("pop{k}_master"));
    }
    let mut table = Table { columns, rows: Vec::new() };
    let mut max_td = 0.0f64;
    let mut max_rel: Option<f64> = None;
    let mut max_cond: Option<f64> = None;
    for (k, &t) in stats.times.iter().enumerate() {
        let td = trace_distance(stats.mean_state[k].operator(), master[k].operator())?;
        max_td = max_td.max(td);
        let surv = nojump.survival[k];
        let frac = stats.nojump_fraction[k];
        if surv >= 0.05 {
            let rel = (frac - surv).abs() / surv;
            max_rel = Some(max_rel.map_or(rel, |m| m.max(rel)));
        }
        let cond = match &stats.conditional_state[k] {
            Some(rho) => {
                let target = nojump.conditional(k)?.projector();
                let dist = trace_distance(rho.operator(), &target)?;
                max_cond = Some(max_cond.map_or(dist, |m| m.max(dist)));
                Some(dist)
            }
            None => None,
        };
        let mut row = vec![t.into(), td.into(), frac.into(), surv.into(), cond.into()];
        for i in 0..d {
            row.push(stats.mean_state[k].population(i).into());
            row.push(master[k].population(i).into());
        }
        table.push(row);
    }
    out.table("trajectories", "ensemble average vs master equation and no-jump statistics per time", &table, format)?;
    let bound = 3.0 / (ens.trajectories as f64).sqrt();
    let summary = TrajectorySummary {
        trajectories: ens.trajectories,
        seed,
        steps: grid.steps,
        dt: grid.dt(),
        jump_load,
        total_jumps: stats.total_jumps,
        statistical_bound: bound,
        max_trace_distance: max_td,
        within_bound: max_td <= bound,
        final_nojump_fraction: *stats.nojump_fraction.last().expect("grid has points"),
        final_survival: *nojump.survival.last().expect("grid has points"),
        max_fraction_relative_error: max_rel,
        max_conditional_distance: max_cond,
    };
    out.json("summary.json", "ensemble summary statistics", &summary)?;
    Ok(0)
}

fn has_model(cfg: &Value) -> bool {
    ["scenario", "hamiltonian", "model"].iter().any(|k| cfg.get(k).is_some())
}

pub fn validate(cfg: &Value, seed: u64, out: &mut OutputDir) -> Result<i32> {
    let vc: ValidateConfig = config::optional(cfg, "validate")?;
    let mut properties = run_validation(seed, vc.cases)?.properties;
    if has_model(cfg) {
        match config::build_model(cfg) {
            Ok((model, spec)) => properties.extend(validate_model(&model, &spec, seed)?),
            Err(e) => properties.push(construction_failure(e.to_string())),
        }
    }
    let report = report_with(seed, properties);
    for p in &report.properties {
        println!(
            "{} {} (residual {:.3e}, tolerance {:.1e})",
            if p.passed { "PASS" } else { "FAIL" },
            p.name,
            p.residual,
            p.tolerance
        );
        if let Some(d) = &p.detail {
            println!("    {d}");
        }
    }
    out.json("validate.json", "property suite results", &report)?;
    Ok(if report.passed { 0 } else { 2 })
}

fn spectrum_table(sys: &EigenSystem) -> Table {
    let mut t = Table::new(&["index", "re", "im"]);
    for (k, z) in sys.eigenvalues.iter().enumerate() {
        t.push(vec![k.into(), z.re.into(), z.im.into()]);
    }
    t
}

pub fn scenario_dump(cfg: &Value, format: Format, out: &mut OutputDir) -> Result<i32> {
    let (model, spec) = config::build_model(cfg)?;
    out.json("model.json", "model in the JSON model schema", &ModelJson::from_model(&model, Some(&spec)))?;
    let liouvillian = eigendecompose(liouvillian_matrix(&model).matrix())?;
    out.table("liouvillian_spectrum", "Liouvillian eigenvalues", &spectrum_table(&liouvillian), format)?;
    let heff = eigendecompose(nhh_beta(&model, &spec)?.operator())?;
    out.table(
        "nhh_spectrum",
        "eigenvalues of the no-jump Hamiltonian for the configured unraveling",
        &spectrum_table(&heff),
        format,
    )?;
    Ok(0)
}
