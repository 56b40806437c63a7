//! One function per subcommand, each producing a [`Table`].

use ctl_core::equilibrium::{curvature_report, rho_scan, CurvatureReport, RhoScan, CURVATURE_STEP};
use ctl_core::fd::DEFAULT_STEP;
use ctl_core::flows::{
    discrete_legendre, hamiltonian_vector_field, integrate_flow, total_legendre_field, ContactHamiltonian,
    LegendreMap,
};
use ctl_core::metriclab::{
    build_metric, discrete_isometry_residual, flow_recurrence_residual, killing_residual,
    poisson_constraint_residual, GtdPartialParams, GtdTotalParams, MetricFamily, MetricField, OmegaFunction,
    OMEGA_FLOOR,
};
use ctl_core::phasespace::VectorField;
use ctl_core::registry;
use ctl_core::sampling::{PointSampler, DEFAULT_BOX};
use ctl_core::DarbouxPoint;

use crate::config::{CommandName, RunConfig};
use crate::error::CliError;
use crate::output::{coordinate_columns, Cell, Table};

pub fn execute(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    match cfg.command()? {
        CommandName::Orbit => orbit(cfg),
        CommandName::Legendre => legendre(cfg),
        CommandName::Killing => killing(cfg),
        CommandName::OmegaCheck => omega_check(cfg),
        CommandName::Curvature => curvature(cfg),
        CommandName::RhoScan => scan(cfg),
        CommandName::Isometry => isometry(cfg),
    }
}

fn floats(x: &DarbouxPoint) -> impl Iterator<Item = Cell> {
    x.to_vec().into_iter().map(Cell::Float)
}

/// With a pair index each condition is `(q_i, p_i, Phi)` and the other
/// pairs start at zero; otherwise it is a full Darboux tuple.
fn initial_conditions(cfg: &RunConfig) -> Result<Vec<DarbouxPoint>, CliError> {
    let Some(ic) = cfg.ic.as_ref().filter(|v| !v.is_empty()) else {
        return Err(CliError::Validation("no initial conditions given (--ic)".into()));
    };
    let n = cfg.n();
    ic.iter()
        .map(|c| match cfg.pair {
            Some(i) => {
                if i == 0 || i > n {
                    return Err(CliError::Validation(format!("pair {i} out of range 1..={n}")));
                }
                let [q, p, phi] = c.as_slice() else {
                    return Err(CliError::Validation(format!(
                        "with --pair each initial condition is q,p,Phi; got {} values",
                        c.len()
                    )));
                };
                let (mut qs, mut ps) = (vec![0.0; n], vec![0.0; n]);
                qs[i - 1] = *q;
                ps[i - 1] = *p;
                Ok(DarbouxPoint::new(*phi, qs, ps)?)
            }
            None => {
                if c.len() != 2 * n + 1 {
                    return Err(CliError::Validation(format!(
                        "initial condition needs {} values for n = {n}, got {}",
                        2 * n + 1,
                        c.len()
                    )));
                }
                Ok(DarbouxPoint::from_coords(c)?)
            }
        })
        .collect()
}

fn generator(cfg: &RunConfig) -> Result<VectorField, CliError> {
    let n = cfg.n();
    Ok(match cfg.pair {
        Some(i) => hamiltonian_vector_field(&ContactHamiltonian::partial_legendre(i, n)?),
        None => total_legendre_field(n)?,
    })
}

fn parse_map(text: &str, n: usize) -> Result<LegendreMap, CliError> {
    if text.trim() == "total" {
        return Ok(LegendreMap::total(n)?);
    }
    let idx = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Validation(format!("map '{text}' must be 'total' or a list like 1,2")))?;
    Ok(LegendreMap::new(n, &idx)?)
}

fn omega(cfg: &RunConfig) -> Result<OmegaFunction, CliError> {
    Ok(registry::phase_omega(cfg.omega(), cfg.n())?)
}

fn family(cfg: &RunConfig) -> Result<MetricFamily, CliError> {
    let w = omega(cfg)?;
    Ok(match cfg.family() {
        "epsilon" => MetricFamily::Epsilon(w),
        "gtd_total" => MetricFamily::GtdTotal(GtdTotalParams::identity(w)),
        "gtd_partial" => MetricFamily::GtdPartial(GtdPartialParams {
            k: cfg.k.unwrap_or(0),
            omega: w,
        }),
        other => {
            return Err(CliError::Validation(format!(
                "unknown family '{other}' (expected epsilon, gtd_total or gtd_partial)"
            )))
        }
    })
}

/// Seeded points, skipping those where `Omega` nearly vanishes when the
/// epsilon family is in use.
fn sample(cfg: &RunConfig, fam: Option<&MetricFamily>) -> Result<Vec<DarbouxPoint>, CliError> {
    let mut s = PointSampler::new(cfg.seed());
    let guard = match fam {
        Some(MetricFamily::Epsilon(w)) => Some(w),
        _ => None,
    };
    let mut out = Vec::with_capacity(cfg.points());
    let mut draws = 0usize;
    while out.len() < cfg.points() {
        draws += 1;
        if draws > 1000 * cfg.points() {
            return Err(CliError::Numeric("metric function vanishes on almost every sampled point".into()));
        }
        let x = s.point(cfg.n(), DEFAULT_BOX)?;
        if let Some(w) = guard {
            if w.value(&x)?.abs() < OMEGA_FLOOR {
                continue;
            }
        }
        out.push(x);
    }
    Ok(out)
}

fn points(cfg: &RunConfig, fam: Option<&MetricFamily>) -> Result<Vec<DarbouxPoint>, CliError> {
    if cfg.ic.is_some() {
        initial_conditions(&RunConfig { pair: None, ..cfg.clone() })
    } else {
        sample(cfg, fam)
    }
}

fn point_table(n: usize, extra: &[String]) -> Table {
    let mut cols = vec!["point".to_string()];
    cols.extend(coordinate_columns(n));
    cols.extend(extra.iter().cloned());
    Table::new(cols)
}

fn report_max(what: &str, values: impl Iterator<Item = f64>) {
    let (count, max) = values.fold((0usize, 0.0f64), |(c, m), v| (c + 1, m.max(v.abs())));
    eprintln!("{what}: max {max:.6e} over {count} points");
}

fn orbit(cfg: &RunConfig) -> Result<Table, CliError> {
    let field = generator(cfg)?;
    let mut table = Table::new(std::iter::once("t".to_string()).chain(coordinate_columns(cfg.n())));
    for ic in initial_conditions(cfg)? {
        let traj = integrate_flow(&field, &ic, cfg.t_end(), cfg.dt())?;
        for (t, x) in traj.times.iter().zip(&traj.states) {
            table.push(std::iter::once(Cell::Float(*t)).chain(floats(x)).collect());
        }
    }
    Ok(table)
}

fn legendre(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = cfg.n();
    let map = parse_map(cfg.map(), n)?;
    let images: Vec<String> = coordinate_columns(n).into_iter().map(|c| format!("{c}_out")).collect();
    let mut table = point_table(n, &images);
    for (i, x) in points(cfg, None)?.iter().enumerate() {
        let y = discrete_legendre(x, &map)?;
        table.push(std::iter::once(Cell::Int(i)).chain(floats(x)).chain(floats(&y)).collect());
    }
    Ok(table)
}

fn killing(cfg: &RunConfig) -> Result<Table, CliError> {
    let fam = family(cfg)?;
    let metric = build_metric(&fam)?;
    let field = generator(cfg)?;
    let h = cfg.h_fd.unwrap_or(DEFAULT_STEP);
    let mut table = point_table(cfg.n(), &["residual".into()]);
    let mut residuals = Vec::new();
    for (i, x) in points(cfg, Some(&fam))?.iter().enumerate() {
        let r = killing_residual(&field, &metric, x, h)?;
        residuals.push(r);
        table.push(std::iter::once(Cell::Int(i)).chain(floats(x)).chain([Cell::Float(r)]).collect());
    }
    report_max(&format!("killing residual of {}", metric.label()), residuals.into_iter());
    Ok(table)
}

fn omega_check(cfg: &RunConfig) -> Result<Table, CliError> {
    let w = omega(cfg)?;
    let h = cfg.h_fd.unwrap_or(DEFAULT_STEP);
    let mut table = point_table(cfg.n(), &["residual".into()]);
    let mut residuals = Vec::new();
    for (i, x) in points(cfg, None)?.iter().enumerate() {
        let r = poisson_constraint_residual(&w, x, h)?;
        residuals.push(r);
        table.push(std::iter::once(Cell::Int(i)).chain(floats(x)).chain([Cell::Float(r)]).collect());
    }
    report_max(&format!("bracket {{h, {}}}", w.label()), residuals.into_iter());
    Ok(table)
}

const CURVATURE_COLUMNS: [&str; 7] = ["rho", "u", "v", "R_analytic", "R_numeric", "rel_error", "near_singularity"];

fn curvature_row(r: &CurvatureReport) -> Vec<Cell> {
    vec![
        Cell::Float(r.rho),
        Cell::Float(r.u),
        Cell::Float(r.v),
        Cell::Float(r.r_analytic),
        Cell::Float(r.r_numeric),
        Cell::Float(r.rel_error),
        Cell::Bool(r.near_singularity),
    ]
}

fn curvature(cfg: &RunConfig) -> Result<Table, CliError> {
    let u = cfg.u.ok_or_else(|| CliError::Validation("curvature needs --u".into()))?;
    let v = cfg.v.unwrap_or(1.0);
    let w = registry::equilibrium_omega(cfg.omega(), cfg.c_v())?;
    let report = curvature_report(u, v, cfg.c_v(), &w, cfg.h_fd.unwrap_or(CURVATURE_STEP))?;
    let mut table = Table::new(CURVATURE_COLUMNS);
    table.push(curvature_row(&report));
    Ok(table)
}

fn scan(cfg: &RunConfig) -> Result<Table, CliError> {
    let range = cfg.rho()?;
    let w = registry::equilibrium_omega(cfg.omega(), cfg.c_v())?;
    let params = RhoScan {
        v_fixed: cfg.v_fixed(),
        h_fd: cfg.h_fd.unwrap_or(CURVATURE_STEP),
        ..RhoScan::new(cfg.c_v(), range.min, range.max, range.steps)
    };
    let mut table = Table::new(CURVATURE_COLUMNS);
    for r in rho_scan(&params, &w)? {
        table.push(curvature_row(&r));
    }
    let flagged = table.rows.iter().filter(|r| r[6] == Cell::Bool(true)).count();
    eprintln!("rho-scan: {} rows, {flagged} flagged near rho = {:.6}", table.rows.len(), cfg.c_v().sqrt());
    Ok(table)
}

fn isometry(cfg: &RunConfig) -> Result<Table, CliError> {
    let fam = family(cfg)?;
    let metric: MetricField = build_metric(&fam)?;
    let maps = LegendreMap::all(cfg.n())?;
    let mut extra: Vec<String> = maps.iter().map(|m| format!("map_{}", m.to_string().replace(',', "+"))).collect();
    extra.push("recurrence".into());
    let mut table = point_table(cfg.n(), &extra);
    for (i, x) in points(cfg, Some(&fam))?.iter().enumerate() {
        let mut row: Vec<Cell> = std::iter::once(Cell::Int(i)).chain(floats(x)).collect();
        for m in &maps {
            row.push(Cell::Float(discrete_isometry_residual(&metric, m, x)?));
        }
        row.push(Cell::Float(flow_recurrence_residual(&metric, x, cfg.dt())?));
        table.push(row);
    }
    Ok(table)
}
