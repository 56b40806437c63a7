//! Legendre embeddings of fundamental relations and the geometry of the
//! induced equilibrium-space metric.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{CtlError, Result};
use crate::fd;
use crate::metriclab::{epsilon_matrix, MetricField, OmegaFunction};
use crate::phasespace::{eval_eta, p_index, q_index, DarbouxPoint, PHI};

/// Half-width of the band `|rho^2 - c_v| < SINGULAR_BAND` where the ideal-gas
/// curvature is treated as singular.
pub const SINGULAR_BAND: f64 = 1e-3;

/// Smallest `|det g|` accepted by the numeric curvature.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Default base step for the nested finite-difference curvature.
pub const CURVATURE_STEP: f64 = 1e-4;

type QFn<T> = Arc<dyn Fn(&[f64]) -> Result<T> + Send + Sync>;
type DomainFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A thermodynamic potential `Phi(q)` defining the embedding
/// `q -> (Phi(q), q, dPhi/dq)`.
#[derive(Clone)]
pub struct FundamentalRelation {
    n: usize,
    label: String,
    value: QFn<f64>,
    gradient: Option<QFn<Vec<f64>>>,
    hessian: Option<QFn<DMatrix<f64>>>,
    domain: DomainFn,
}

impl fmt::Debug for FundamentalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FundamentalRelation")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("analytic_gradient", &self.gradient.is_some())
            .field("analytic_hessian", &self.hessian.is_some())
            .finish()
    }
}

impl FundamentalRelation {
    /// A potential with finite-difference gradient and Hessian and an
    /// unrestricted domain.
    pub fn from_fn<F>(n: usize, label: impl Into<String>, value: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(CtlError::ZeroDimension);
        }
        Ok(Self {
            n,
            label: label.into(),
            value: Arc::new(value),
            gradient: None,
            hessian: None,
            domain: Arc::new(|_| true),
        })
    }

    pub fn with_gradient<F>(mut self, gradient: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_hessian<F>(mut self, hessian: F) -> Self
    where
        F: Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(hessian));
        self
    }

    pub fn with_domain<F>(mut self, domain: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.domain = Arc::new(domain);
        self
    }

    /// Molar ideal gas in the entropy representation,
    /// `s(u, v) = c_v ln u + ln v` on `u, v > 0`.
    pub fn ideal_gas(c_v: f64) -> Result<Self> {
        if !c_v.is_finite() || c_v <= 0.0 {
            return Err(CtlError::InvalidParameter(format!("heat capacity must be positive, got {c_v}")));
        }
        Ok(
            Self::from_fn(2, format!("ideal-gas(c_v={c_v})"), move |q| Ok(c_v * q[0].ln() + q[1].ln()))?
                .with_gradient(move |q| Ok(vec![c_v / q[0], 1.0 / q[1]]))
                .with_hessian(move |q| {
                    Ok(DMatrix::from_row_slice(
                        2,
                        2,
                        &[-c_v / (q[0] * q[0]), 0.0, 0.0, -1.0 / (q[1] * q[1])],
                    ))
                })
                .with_domain(|q| q[0] > 0.0 && q[1] > 0.0),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn check(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.n {
            return Err(CtlError::DimensionMismatch {
                expected: self.n,
                got: q.len(),
            });
        }
        if !(self.domain)(q) {
            return Err(CtlError::Domain {
                what: self.label.clone(),
                point: q.to_vec(),
            });
        }
        Ok(())
    }

    pub fn value(&self, q: &[f64]) -> Result<f64> {
        self.check(q)?;
        (self.value)(q)
    }

    pub fn gradient(&self, q: &[f64]) -> Result<Vec<f64>> {
        self.check(q)?;
        if let Some(g) = &self.gradient {
            return g(q);
        }
        let h = fd::scaled_step(fd::DEFAULT_STEP, q.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
        fd::gradient(&*self.value, q, h)
    }

    pub fn hessian(&self, q: &[f64]) -> Result<DMatrix<f64>> {
        self.check(q)?;
        if let Some(h) = &self.hessian {
            return h(q);
        }
        let scale = q.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        let rows = match &self.gradient {
            Some(g) => fd::jacobian(&**g, q, fd::scaled_step(fd::DEFAULT_STEP, scale))?,
            None => {
                let h = fd::scaled_step(CURVATURE_STEP, scale);
                (0..self.n)
                    .map(|i| (0..self.n).map(|j| fd::mixed_partial(&*self.value, q, i, j, h)).collect())
                    .collect::<Result<Vec<Vec<f64>>>>()?
            }
        };
        let m = DMatrix::from_fn(self.n, self.n, |i, j| rows[i][j]);
        Ok((&m + m.transpose()) * 0.5)
    }
}

/// The Legendre embedding `q -> (Phi(q), q, dPhi/dq)`.
pub fn embed(fr: &FundamentalRelation, q: &[f64]) -> Result<DarbouxPoint> {
    DarbouxPoint::new(fr.value(q)?, q.to_vec(), fr.gradient(q)?)
}

/// Tangent vectors `dZ/dq^a` of the embedding, one column per `a`.
pub fn embedding_tangents(fr: &FundamentalRelation, q: &[f64]) -> Result<DMatrix<f64>> {
    let n = fr.n();
    let grad = fr.gradient(q)?;
    let hess = fr.hessian(q)?;
    let mut t = DMatrix::zeros(2 * n + 1, n);
    for a in 0..n {
        t[(PHI, a)] = grad[a];
        t[(q_index(a), a)] = 1.0;
        for b in 0..n {
            t[(p_index(n, b), a)] = hess[(b, a)];
        }
    }
    Ok(t)
}

/// `eta` pulled back to the equilibrium space: its value on each tangent.
pub fn first_law_residual(fr: &FundamentalRelation, q: &[f64]) -> Result<Vec<f64>> {
    let eta = eval_eta(&embed(fr, q)?);
    let t = embedding_tangents(fr, q)?;
    Ok(t.column_iter().map(|c| eta.contract(&c.into_owned())).collect())
}

/// Partial derivatives of `Omega(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaPartials {
    pub value: f64,
    pub du: f64,
    pub dv: f64,
    pub duv: f64,
}

type UvFn<T> = Arc<dyn Fn(f64, f64) -> Result<T> + Send + Sync>;

/// The metric function written directly on equilibrium coordinates `(u, v)`.
#[derive(Clone)]
pub struct EquilibriumOmega {
    label: String,
    eval: UvFn<f64>,
    partials: Option<UvFn<OmegaPartials>>,
}

impl fmt::Debug for EquilibriumOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquilibriumOmega")
            .field("label", &self.label)
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl EquilibriumOmega {
    pub fn from_fn<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
            partials: None,
        }
    }

    pub fn with_partials<F>(mut self, partials: F) -> Self
    where
        F: Fn(f64, f64) -> Result<OmegaPartials> + Send + Sync + 'static,
    {
        self.partials = Some(Arc::new(partials));
        self
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("const:{c}"), move |_, _| Ok(c)).with_partials(move |_, _| {
            Ok(OmegaPartials {
                value: c,
                du: 0.0,
                dv: 0.0,
                duv: 0.0,
            })
        })
    }

    /// `Omega(q, dPhi/dq)`: a phase-space metric function restricted to the
    /// embedded equilibrium space. Partials by finite differences.
    pub fn pullback(omega: &OmegaFunction, fr: &FundamentalRelation) -> Result<Self> {
        if omega.n() != 2 || fr.n() != 2 {
            return Err(CtlError::InvalidParameter(
                "equilibrium pullback needs two degrees of freedom".into(),
            ));
        }
        let (omega, fr) = (omega.clone(), fr.clone());
        let label = format!("pullback[{}]", omega.label());
        Ok(Self::from_fn(label, move |u, v| {
            let q = [u, v];
            omega.value_qp(&q, &fr.gradient(&q)?)
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, u: f64, v: f64) -> Result<f64> {
        (self.eval)(u, v)
    }

    pub fn partials(&self, u: f64, v: f64) -> Result<OmegaPartials> {
        if let Some(p) = &self.partials {
            return p(u, v);
        }
        let f = |z: &[f64]| (self.eval)(z[0], z[1]);
        let z = [u, v];
        let h1 = fd::scaled_step(fd::DEFAULT_STEP, u.abs().max(v.abs()));
        let h2 = fd::scaled_step(CURVATURE_STEP, u.abs().max(v.abs()));
        Ok(OmegaPartials {
            value: f(&z)?,
            du: fd::partial(&f, &z, 0, h1)?,
            dv: fd::partial(&f, &z, 1, h1)?,
            duv: fd::mixed_partial(&f, &z, 0, 1, h2)?,
        })
    }
}

/// A metric on equilibrium coordinates.
#[derive(Clone)]
pub struct EquilibriumMetric {
    n: usize,
    label: String,
    eval: QFn<DMatrix<f64>>,
}

impl fmt::Debug for EquilibriumMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquilibriumMetric")
            .field("n", &self.n)
            .field("label", &self.label)
            .finish()
    }
}

impl EquilibriumMetric {
    pub fn from_fn<F>(n: usize, label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        Self {
            n,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// Numeric pullback `T^T G T` of an arbitrary phase-space metric through
    /// the embedding of `fr`.
    pub fn pullback(metric: &MetricField, fr: &FundamentalRelation) -> Result<Self> {
        if metric.n() != fr.n() {
            return Err(CtlError::DimensionMismatch {
                expected: fr.n(),
                got: metric.n(),
            });
        }
        let (metric, fr) = (metric.clone(), fr.clone());
        let label = format!("pullback[{}]", metric.label());
        Ok(Self::from_fn(fr.n(), label, move |q| pullback_metric(&metric, &fr, q)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, q: &[f64]) -> Result<DMatrix<f64>> {
        if q.len() != self.n {
            return Err(CtlError::DimensionMismatch {
                expected: self.n,
                got: q.len(),
            });
        }
        (self.eval)(q)
    }
}

/// `g = T^T G(embed(q)) T` with `T` the embedding tangents.
pub fn pullback_metric(metric: &MetricField, fr: &FundamentalRelation, q: &[f64]) -> Result<DMatrix<f64>> {
    let t = embedding_tangents(fr, q)?;
    let g = metric.eval(&embed(fr, q)?)?;
    let pulled = t.transpose() * g * &t;
    Ok((&pulled + pulled.transpose()) * 0.5)
}

/// Induced metric of the epsilon class,
/// `g_ac = Omega (eps_a^b Phi_bc + eps_c^b Phi_ba)`, with `Omega` given on
/// the equilibrium coordinates.
pub fn induced_metric(fr: &FundamentalRelation, omega: &EquilibriumOmega) -> Result<EquilibriumMetric> {
    if fr.n() != 2 {
        return Err(CtlError::InvalidParameter(format!(
            "the epsilon class needs two degrees of freedom, got {}",
            fr.n()
        )));
    }
    let (fr, omega) = (fr.clone(), omega.clone());
    let label = format!("induced[{}; {}]", fr.label(), omega.label());
    Ok(EquilibriumMetric::from_fn(2, label, move |q| {
        let hess = fr.hessian(q)?;
        let w = omega.value(q[0], q[1])?;
        let m = epsilon_matrix() * hess;
        Ok((&m + m.transpose()) * w)
    }))
}

pub fn metric_determinant(g: &EquilibriumMetric, q: &[f64]) -> Result<f64> {
    let m = g.eval(q)?;
    Ok(if m.nrows() == 2 {
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
    } else {
        m.determinant()
    })
}

/// Christoffel symbols `Gamma^a_bc`, flattened as `[a][b][c]`.
fn christoffel(g: &EquilibriumMetric, q: &[f64], steps: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let d = q.len();
    let metric = g.eval(q)?;
    let inv = metric
        .clone()
        .try_inverse()
        .ok_or_else(|| CtlError::Degenerate {
            point: q.to_vec(),
            det: metric.determinant(),
        })?;
    let mut dg = Vec::with_capacity(d);
    let mut probe = q.to_vec();
    for k in 0..d {
        probe[k] = q[k] + steps[k];
        let plus = g.eval(&probe)?;
        probe[k] = q[k] - steps[k];
        let minus = g.eval(&probe)?;
        probe[k] = q[k];
        dg.push((plus - minus) / (2.0 * steps[k]));
    }
    let mut gamma = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for e in 0..d {
                    s += inv[(a, e)] * (dg[b][(e, c)] + dg[c][(e, b)] - dg[e][(b, c)]);
                }
                gamma[(a * d + b) * d + c] = 0.5 * s;
            }
        }
    }
    Ok((gamma, inv))
}

/// Scalar curvature from finite differences of the metric.
///
/// Christoffel symbols come from central differences of `g`; their
/// derivatives from central differences of those, with per-coordinate
/// steps `h_fd * max(1, |q_i|)`. Sign convention: the unit sphere has `R = 2`.
pub fn scalar_curvature_numeric(g: &EquilibriumMetric, q: &[f64], h_fd: f64) -> Result<f64> {
    if h_fd.is_nan() || h_fd <= 0.0 {
        return Err(CtlError::InvalidParameter(format!("finite-difference step must be positive, got {h_fd}")));
    }
    let det = metric_determinant(g, q)?;
    if det.is_nan() || det.abs() <= DEGENERACY_FLOOR {
        return Err(CtlError::Degenerate { point: q.to_vec(), det });
    }
    let d = q.len();
    let steps: Vec<f64> = q.iter().map(|v| fd::scaled_step(h_fd, *v)).collect();
    let (gamma, inv) = christoffel(g, q, &steps)?;
    let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;

    // dgamma[k] = d Gamma / d q^k
    let mut dgamma = Vec::with_capacity(d);
    let mut probe = q.to_vec();
    for k in 0..d {
        probe[k] = q[k] + steps[k];
        let (plus, _) = christoffel(g, &probe, &steps)?;
        probe[k] = q[k] - steps[k];
        let (minus, _) = christoffel(g, &probe, &steps)?;
        probe[k] = q[k];
        dgamma.push(
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * steps[k]))
                .collect::<Vec<_>>(),
        );
    }

    // Ric_bd = R^a_bad = d_a G^a_db - d_d G^a_ab + G^a_ae G^e_db - G^a_de G^e_ab
    let mut scalar = 0.0;
    for b in 0..d {
        for dd in 0..d {
            let mut ric = 0.0;
            for a in 0..d {
                ric += dgamma[a][idx(a, dd, b)] - dgamma[dd][idx(a, a, b)];
                for e in 0..d {
                    ric += gamma[idx(a, a, e)] * gamma[idx(e, dd, b)] - gamma[idx(a, dd, e)] * gamma[idx(e, a, b)];
                }
            }
            scalar += inv[(b, dd)] * ric;
        }
    }
    Ok(scalar)
}

fn singular_gap(u: f64, v: f64, c_v: f64) -> (f64, f64) {
    let rho = u / v;
    (rho, rho * rho - c_v)
}

/// Closed-form scalar curvature of the ideal-gas equilibrium space for the
/// epsilon class:
///
/// `R = (2 rho^2 / W^3) [ v^2 (W W_uv - W_u W_v) / (rho^2 - c_v)
///                        + 4 W^2 c_v rho / (rho^2 - c_v)^3 ]`
///
/// with `rho = u / v` and `W = Omega(u, v)`.
pub fn scalar_curvature_ideal_gas(u: f64, v: f64, c_v: f64, omega: &EquilibriumOmega) -> Result<f64> {
    if !(u > 0.0 && v > 0.0) {
        return Err(CtlError::Domain {
            what: "ideal gas".into(),
            point: vec![u, v],
        });
    }
    let (rho, gap) = singular_gap(u, v, c_v);
    if gap.abs() < SINGULAR_BAND {
        return Err(CtlError::Singular {
            gap: gap.abs(),
            band: SINGULAR_BAND,
        });
    }
    let w = omega.partials(u, v)?;
    if w.value == 0.0 {
        return Err(CtlError::ZeroOmega { point: vec![u, v] });
    }
    let bracket = v * v * (w.value * w.duv - w.du * w.dv) / gap + 4.0 * w.value * w.value * c_v * rho / gap.powi(3);
    Ok(2.0 * rho * rho / w.value.powi(3) * bracket)
}

/// One row of a curvature comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub u: f64,
    pub v: f64,
    pub rho: f64,
    pub r_analytic: f64,
    pub r_numeric: f64,
    pub rel_error: f64,
    pub near_singularity: bool,
}

impl CurvatureReport {
    fn flagged(u: f64, v: f64, rho: f64) -> Self {
        Self {
            u,
            v,
            rho,
            r_analytic: f64::NAN,
            r_numeric: f64::NAN,
            rel_error: f64::NAN,
            near_singularity: true,
        }
    }
}

pub fn relative_error(reference: f64, value: f64) -> f64 {
    let diff = (reference - value).abs();
    if reference == 0.0 {
        diff
    } else {
        diff / reference.abs()
    }
}

/// Closed-form and numeric curvature of the ideal gas at `(u, v)`.
///
/// Inside the singular band both curvature values are `NaN` and the row is
/// flagged.
pub fn curvature_report(u: f64, v: f64, c_v: f64, omega: &EquilibriumOmega, h_fd: f64) -> Result<CurvatureReport> {
    let (rho, gap) = singular_gap(u, v, c_v);
    if gap.abs() < SINGULAR_BAND {
        return Ok(CurvatureReport::flagged(u, v, rho));
    }
    let r_analytic = scalar_curvature_ideal_gas(u, v, c_v, omega)?;
    let g = induced_metric(&FundamentalRelation::ideal_gas(c_v)?, omega)?;
    let r_numeric = scalar_curvature_numeric(&g, &[u, v], h_fd)?;
    Ok(CurvatureReport {
        u,
        v,
        rho,
        r_analytic,
        r_numeric,
        rel_error: relative_error(r_analytic, r_numeric),
        near_singularity: false,
    })
}

/// Parameters of a curvature scan along the energy density at fixed `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoScan {
    pub c_v: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
    pub v_fixed: f64,
    pub h_fd: f64,
}

impl RhoScan {
    pub fn new(c_v: f64, rho_min: f64, rho_max: f64, steps: usize) -> Self {
        Self {
            c_v,
            rho_min,
            rho_max,
            steps,
            v_fixed: 1.0,
            h_fd: CURVATURE_STEP,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.c_v, self.rho_min, self.rho_max, self.v_fixed, self.h_fd]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.steps == 0 {
            return Err(CtlError::InvalidParameter("scan parameters must be finite with steps >= 1".into()));
        }
        if !(self.rho_min > 0.0 && self.rho_max >= self.rho_min) {
            return Err(CtlError::InvalidParameter(format!(
                "rho range must satisfy 0 < min <= max, got {}..{}",
                self.rho_min, self.rho_max
            )));
        }
        if !(self.v_fixed > 0.0 && self.c_v > 0.0) {
            return Err(CtlError::InvalidParameter("v_fixed and c_v must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.rho_min];
        }
        let span = self.rho_max - self.rho_min;
        (0..self.steps)
            .map(|i| self.rho_min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// Curvature along `rho` at fixed `v`, ordered by `rho`.
///
/// When `sqrt(c_v)` lies strictly inside the range and no grid point falls
/// in the singular band, a flagged row at `rho = sqrt(c_v)` is inserted so
/// the divergence is always marked. Points are evaluated in parallel.
pub fn rho_scan(scan: &RhoScan, omega: &EquilibriumOmega) -> Result<Vec<CurvatureReport>> {
    scan.validate()?;
    let mut rows = scan
        .grid()
        .par_iter()
        .map(|rho| curvature_report(rho * scan.v_fixed, scan.v_fixed, scan.c_v, omega, scan.h_fd))
        .collect::<Result<Vec<_>>>()?;

    let critical = scan.c_v.sqrt();
    let inside = scan.rho_min < critical && critical < scan.rho_max;
    if inside && !rows.iter().any(|r| r.near_singularity) {
        let at = rows.partition_point(|r| r.rho < critical);
        rows.insert(at, CurvatureReport::flagged(critical * scan.v_fixed, scan.v_fixed, critical));
    }
    Ok(rows)
}

/// Largest `|R|` over a grid of equilibrium points for a phase-space metric
/// function pulled back through the ideal gas.
pub fn curvature_sup(c_v: f64, omega: &OmegaFunction, grid: &[(f64, f64)]) -> Result<f64> {
    let fr = FundamentalRelation::ideal_gas(c_v)?;
    let w = EquilibriumOmega::pullback(omega, &fr)?;
    grid.iter().try_fold(0.0f64, |sup, &(u, v)| {
        Ok(sup.max(scalar_curvature_ideal_gas(u, v, c_v, &w)?.abs()))
    })
}

/// Residual of the embedding's tangents in the kernel of `eta`, using the
/// push-forward by finite differences of [`embed`].
pub fn first_law_residual_fd(fr: &FundamentalRelation, q: &[f64], h_fd: f64) -> Result<Vec<f64>> {
    let eta = eval_eta(&embed(fr, q)?);
    let f = |z: &[f64]| -> Result<Vec<f64>> { Ok(embed(fr, z)?.to_vec()) };
    let rows = fd::jacobian(&f, q, h_fd)?;
    Ok((0..fr.n())
        .map(|a| eta.contract(&DVector::from_iterator(rows.len(), rows.iter().map(|r| r[a]))))
        .collect())
}
