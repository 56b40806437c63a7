//! Phase-space metric families and their symmetry residuals.
//!
//! All families share the block form `eta (x) eta + C_ab dq^a (x) dp_b`,
//! stored symmetrically: a coefficient `C_ab` on `dq^a (x) dp_b` puts
//! `C_ab / 2` on both `(q^a, p_b)` and `(p_b, q^a)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{CtlError, Result};
use crate::fd;
use crate::flows::{self, jacobian_discrete_legendre, LegendreMap, QUARTER_TURN};
use crate::phasespace::{eval_eta, p_index, q_index, DarbouxPoint, PointFn, VectorField};

/// Below this magnitude the epsilon metric is flagged as degenerate.
pub const OMEGA_FLOOR: f64 = 1e-12;

type QpFn<T> = Arc<dyn Fn(&[f64], &[f64]) -> Result<T> + Send + Sync>;

/// A `Phi`-independent metric function `Omega(q, p)`.
#[derive(Clone)]
pub struct OmegaFunction {
    n: usize,
    label: String,
    eval: QpFn<f64>,
    gradient: Option<QpFn<(Vec<f64>, Vec<f64>)>>,
}

impl fmt::Debug for OmegaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OmegaFunction")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

fn require_two(n: usize, what: &str) -> Result<()> {
    if n == 2 {
        Ok(())
    } else {
        Err(CtlError::InvalidParameter(format!("{what} is defined for n = 2 only, got n = {n}")))
    }
}

impl OmegaFunction {
    /// Derivatives are taken by central differences.
    pub fn from_fn<F>(n: usize, label: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(&[f64], &[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(CtlError::ZeroDimension);
        }
        Ok(Self {
            n,
            label: label.into(),
            eval: Arc::new(eval),
            gradient: None,
        })
    }

    /// Attaches analytic partials `(dOmega/dq, dOmega/dp)`.
    pub fn with_gradient<F>(mut self, gradient: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Result<(Vec<f64>, Vec<f64>)> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn without_gradient(mut self) -> Self {
        self.gradient = None;
        self
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Ok(Self::from_fn(n, format!("const:{c}"), move |_, _| Ok(c))?
            .with_gradient(move |_, _| Ok((vec![0.0; n], vec![0.0; n]))))
    }

    /// `q_i^2 + p_i^2` for the one-based pair `i`.
    pub fn pair_norm(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(CtlError::IndexOutOfRange { index: i, n });
        }
        let a = i - 1;
        Ok(Self::from_fn(n, format!("pair-norm:{i}"), move |q, p| Ok(q[a] * q[a] + p[a] * p[a]))?
            .with_gradient(move |q, p| {
                let mut dq = vec![0.0; n];
                let mut dp = vec![0.0; n];
                dq[a] = 2.0 * q[a];
                dp[a] = 2.0 * p[a];
                Ok((dq, dp))
            }))
    }

    /// `sum_i (q_i^2 + p_i^2)`.
    pub fn total_norm(n: usize) -> Result<Self> {
        Ok(Self::from_fn(n, "total-norm", |q, p| {
            Ok(q.iter().chain(p).map(|v| v * v).sum())
        })?
        .with_gradient(|q, p| {
            Ok((q.iter().map(|v| 2.0 * v).collect(), p.iter().map(|v| 2.0 * v).collect()))
        }))
    }

    /// `q1 q2 + p1 p2`.
    pub fn cross_dot() -> Result<Self> {
        Ok(Self::from_fn(2, "cross-dot", |q, p| Ok(q[0] * q[1] + p[0] * p[1]))?
            .with_gradient(|q, p| Ok((vec![q[1], q[0]], vec![p[1], p[0]]))))
    }

    /// `q1 p2 - q2 p1`.
    pub fn cross_wedge() -> Result<Self> {
        Ok(Self::from_fn(2, "cross-wedge", |q, p| Ok(q[0] * p[1] - q[1] * p[0]))?
            .with_gradient(|q, p| Ok((vec![p[1], -p[0]], vec![-q[1], q[0]]))))
    }

    /// `q^i`, a function that does not satisfy the invariance constraint.
    pub fn coordinate_q(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(CtlError::IndexOutOfRange { index: i, n });
        }
        let a = i - 1;
        Ok(Self::from_fn(n, format!("q{i}"), move |q, _| Ok(q[a]))?.with_gradient(move |_, _| {
            let mut dq = vec![0.0; n];
            dq[a] = 1.0;
            Ok((dq, vec![0.0; n]))
        }))
    }

    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        Self::combine(a, b, '*')
    }

    pub fn sum(a: &Self, b: &Self) -> Result<Self> {
        Self::combine(a, b, '+')
    }

    fn combine(a: &Self, b: &Self, op: char) -> Result<Self> {
        if a.n != b.n {
            return Err(CtlError::DimensionMismatch {
                expected: a.n,
                got: b.n,
            });
        }
        let label = format!("({}){op}({})", a.label, b.label);
        let (ea, eb) = (a.clone(), b.clone());
        let f = Self::from_fn(a.n, label, move |q, p| {
            let (x, y) = (ea.value_qp(q, p)?, eb.value_qp(q, p)?);
            Ok(if op == '*' { x * y } else { x + y })
        })?;
        if a.gradient.is_none() || b.gradient.is_none() {
            return Ok(f);
        }
        let (ga, gb) = (a.clone(), b.clone());
        Ok(f.with_gradient(move |q, p| {
            let (aq, ap) = ga.gradient_qp(q, p, fd::DEFAULT_STEP)?;
            let (bq, bp) = gb.gradient_qp(q, p, fd::DEFAULT_STEP)?;
            let mix = |da: &[f64], db: &[f64]| -> Result<Vec<f64>> {
                if op == '*' {
                    let (va, vb) = (ga.value_qp(q, p)?, gb.value_qp(q, p)?);
                    Ok(da.iter().zip(db).map(|(x, y)| x * vb + va * y).collect())
                } else {
                    Ok(da.iter().zip(db).map(|(x, y)| x + y).collect())
                }
            };
            Ok((mix(&aq, &bq)?, mix(&ap, &bp)?))
        }))
    }

    /// Built-in functions annihilated by the Legendre invariance constraint.
    pub fn invariant_registry() -> Result<Vec<Self>> {
        let one = Self::constant(2, 1.0)?;
        let n1 = Self::pair_norm(1, 2)?;
        let n2 = Self::pair_norm(2, 2)?;
        let total = Self::total_norm(2)?;
        let dot = Self::cross_dot()?;
        let wedge = Self::cross_wedge()?;
        Ok(vec![
            Self::constant(2, 2.5)?,
            Self::sum(&one, &total)?,
            Self::product(&n1, &n2)?,
            Self::product(&dot, &wedge)?,
            one,
            n1,
            n2,
            total,
            dot,
            wedge,
        ])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn value(&self, x: &DarbouxPoint) -> Result<f64> {
        x.check_dof(self.n)?;
        (self.eval)(x.q(), x.p())
    }

    pub fn value_qp(&self, q: &[f64], p: &[f64]) -> Result<f64> {
        (self.eval)(q, p)
    }

    pub fn gradient(&self, x: &DarbouxPoint, h_fd: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        x.check_dof(self.n)?;
        self.gradient_qp(x.q(), x.p(), h_fd)
    }

    pub fn gradient_qp(&self, q: &[f64], p: &[f64], h_fd: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if let Some(g) = &self.gradient {
            return g(q, p);
        }
        let n = self.n;
        let f = |z: &[f64]| (self.eval)(&z[..n], &z[n..]);
        let z: Vec<f64> = q.iter().chain(p).copied().collect();
        let g = fd::gradient(&f, &z, h_fd)?;
        Ok((g[..n].to_vec(), g[n..].to_vec()))
    }
}

/// A point-dependent symmetric bilinear form on phase-space.
///
/// `d_eval` returns `dG/dZ^C` for every coordinate `C`.
#[derive(Clone)]
pub struct MetricField {
    n: usize,
    label: String,
    eval: PointFn<DMatrix<f64>>,
    d_eval: Option<PointFn<Vec<DMatrix<f64>>>>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("analytic_derivatives", &self.d_eval.is_some())
            .finish()
    }
}

impl MetricField {
    pub fn from_fn<F>(n: usize, label: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(&DarbouxPoint) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(CtlError::ZeroDimension);
        }
        Ok(Self {
            n,
            label: label.into(),
            eval: Arc::new(eval),
            d_eval: None,
        })
    }

    pub fn with_derivatives<F>(mut self, d_eval: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<Vec<DMatrix<f64>>> + Send + Sync + 'static,
    {
        self.d_eval = Some(Arc::new(d_eval));
        self
    }

    /// Forces the finite-difference derivative path.
    pub fn without_derivatives(mut self) -> Self {
        self.d_eval = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.d_eval.is_some()
    }

    pub fn eval(&self, x: &DarbouxPoint) -> Result<DMatrix<f64>> {
        x.check_dof(self.n)?;
        (self.eval)(x)
    }

    pub fn derivatives(&self, x: &DarbouxPoint, h_fd: f64) -> Result<Vec<DMatrix<f64>>> {
        x.check_dof(self.n)?;
        if let Some(d) = &self.d_eval {
            return d(x);
        }
        let z = x.to_vec();
        let mut probe = z.clone();
        (0..z.len())
            .map(|c| {
                probe[c] = z[c] + h_fd;
                let plus = (self.eval)(&DarbouxPoint::from_coords(&probe)?)?;
                probe[c] = z[c] - h_fd;
                let minus = (self.eval)(&DarbouxPoint::from_coords(&probe)?)?;
                probe[c] = z[c];
                Ok((plus - minus) / (2.0 * h_fd))
            })
            .collect()
    }
}

/// Parameters of the family invariant under total Legendre maps,
/// `eta (x) eta + Omega (xi_a q^a p_a) chi_b dq^b (x) dp_b`.
#[derive(Debug, Clone)]
pub struct GtdTotalParams {
    xi: Vec<f64>,
    chi: Vec<f64>,
    omega: OmegaFunction,
}

impl GtdTotalParams {
    pub fn new(xi: Vec<f64>, chi: Vec<f64>, omega: OmegaFunction) -> Result<Self> {
        let n = omega.n();
        for (name, v) in [("xi", &xi), ("chi", &chi)] {
            if v.len() != n {
                return Err(CtlError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if v.iter().any(|e| *e == 0.0 || !e.is_finite()) {
                return Err(CtlError::InvalidParameter(format!("{name} entries must be finite and nonzero")));
            }
        }
        Ok(Self { xi, chi, omega })
    }

    /// `xi = chi = identity`.
    pub fn identity(omega: OmegaFunction) -> Self {
        let n = omega.n();
        Self {
            xi: vec![1.0; n],
            chi: vec![1.0; n],
            omega,
        }
    }
}

/// Parameters of the family invariant under partial Legendre maps,
/// `eta (x) eta + Omega sum_i (q^i p_i)^(2k+1) dq^i (x) dp_i`.
#[derive(Debug, Clone)]
pub struct GtdPartialParams {
    pub k: u32,
    pub omega: OmegaFunction,
}

#[derive(Debug, Clone)]
pub enum MetricFamily {
    GtdTotal(GtdTotalParams),
    GtdPartial(GtdPartialParams),
    /// `eta (x) eta + 2 Omega eps_a^b dq^a (x) dp_b` with the 2x2 symplectic `eps`.
    Epsilon(OmegaFunction),
}

impl MetricFamily {
    pub fn omega(&self) -> &OmegaFunction {
        match self {
            Self::GtdTotal(p) => &p.omega,
            Self::GtdPartial(p) => &p.omega,
            Self::Epsilon(o) => o,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::GtdTotal(_) => "gtd_total",
            Self::GtdPartial(_) => "gtd_partial",
            Self::Epsilon(_) => "epsilon",
        }
    }
}

/// The symplectic matrix `[[0, 1], [-1, 0]]`.
pub fn epsilon_matrix() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

/// `C_ab(x)` and `dC_ab/dZ^C` for one family.
type Coefficients = (DMatrix<f64>, Vec<DMatrix<f64>>);

fn block_coefficients(family: &MetricFamily, x: &DarbouxPoint) -> Result<Coefficients> {
    let n = x.n();
    let dim = x.dim();
    let omega = family.omega();
    let w = omega.value(x)?;
    let (wq, wp) = omega.gradient(x, fd::DEFAULT_STEP)?;
    // gradient of Omega in flattened order; Phi slot is zero
    let mut dw = vec![0.0; dim];
    for a in 0..n {
        dw[q_index(a)] = wq[a];
        dw[p_index(n, a)] = wp[a];
    }

    let mut c = DMatrix::zeros(n, n);
    let mut dc = vec![DMatrix::zeros(n, n); dim];
    match family {
        MetricFamily::Epsilon(_) => {
            if w.abs() < OMEGA_FLOOR {
                log::warn!("epsilon metric: |Omega| = {:e} at {x} is below {OMEGA_FLOOR:e}", w.abs());
            }
            let eps = epsilon_matrix();
            c = &eps * (2.0 * w);
            for (k, d) in dc.iter_mut().enumerate() {
                *d = &eps * (2.0 * dw[k]);
            }
        }
        MetricFamily::GtdTotal(params) => {
            let s: f64 = (0..n).map(|a| params.xi[a] * x.q()[a] * x.p()[a]).sum();
            let mut ds = vec![0.0; dim];
            for a in 0..n {
                ds[q_index(a)] = params.xi[a] * x.p()[a];
                ds[p_index(n, a)] = params.xi[a] * x.q()[a];
            }
            for a in 0..n {
                c[(a, a)] = w * s * params.chi[a];
                for k in 0..dim {
                    dc[k][(a, a)] = (dw[k] * s + w * ds[k]) * params.chi[a];
                }
            }
        }
        MetricFamily::GtdPartial(params) => {
            let power = 2 * params.k as i32 + 1;
            for a in 0..n {
                let (qa, pa) = (x.q()[a], x.p()[a]);
                let prod = qa * pa;
                let weight = prod.powi(power);
                let dweight = power as f64 * prod.powi(power - 1);
                c[(a, a)] = w * weight;
                for k in 0..dim {
                    dc[k][(a, a)] = dw[k] * weight;
                }
                dc[q_index(a)][(a, a)] += w * dweight * pa;
                dc[p_index(n, a)][(a, a)] += w * dweight * qa;
            }
        }
    }
    Ok((c, dc))
}

fn add_block(g: &mut DMatrix<f64>, n: usize, c: &DMatrix<f64>) {
    for a in 0..n {
        for b in 0..n {
            let half = 0.5 * c[(a, b)];
            g[(q_index(a), p_index(n, b))] += half;
            g[(p_index(n, b), q_index(a))] += half;
        }
    }
}

fn assemble(x: &DarbouxPoint, c: &DMatrix<f64>) -> DMatrix<f64> {
    let eta = eval_eta(x).0;
    let mut g = &eta * eta.transpose();
    add_block(&mut g, x.n(), c);
    g
}

fn assemble_derivatives(x: &DarbouxPoint, dc: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let n = x.n();
    let eta = eval_eta(x).0;
    dc.iter()
        .enumerate()
        .map(|(k, dck)| {
            let mut d = DMatrix::zeros(x.dim(), x.dim());
            // only d/dp_a moves eta, through its -p_a dq^a component
            if k > n {
                let a = k - n - 1;
                let mut deta = DVector::zeros(x.dim());
                deta[q_index(a)] = -1.0;
                d += &deta * eta.transpose() + &eta * deta.transpose();
            }
            add_block(&mut d, n, dck);
            d
        })
        .collect()
}

/// Builds the metric field for a family, with analytic coordinate
/// derivatives whenever `Omega` has an analytic gradient.
pub fn build_metric(family: &MetricFamily) -> Result<MetricField> {
    let n = family.omega().n();
    if let MetricFamily::Epsilon(_) = family {
        require_two(n, "the epsilon family")?;
    }
    let label = format!("{}[{}]", family.name(), family.omega().label());
    let fam = family.clone();
    let metric = MetricField::from_fn(n, label, move |x| {
        let (c, _) = block_coefficients(&fam, x)?;
        Ok(assemble(x, &c))
    })?;
    let fam = family.clone();
    Ok(metric.with_derivatives(move |x| {
        let (_, dc) = block_coefficients(&fam, x)?;
        Ok(assemble_derivatives(x, &dc))
    }))
}

/// `(L_X G)_AB = X^C d_C G_AB + G_CB d_A X^C + G_AC d_B X^C`.
pub fn lie_derivative_metric(
    field: &VectorField,
    metric: &MetricField,
    x: &DarbouxPoint,
    h_fd: f64,
) -> Result<DMatrix<f64>> {
    if field.n() != metric.n() {
        return Err(CtlError::DimensionMismatch {
            expected: metric.n(),
            got: field.n(),
        });
    }
    let xv = field.eval(x)?;
    let jac = field.jacobian(x, h_fd)?;
    let g = metric.eval(x)?;
    let dg = metric.derivatives(x, h_fd)?;

    let transport = jac.tr_mul(&g);
    let mut lie = &transport + transport.transpose();
    for (xc, dgc) in xv.iter().zip(&dg) {
        lie += dgc * *xc;
    }
    Ok((&lie + lie.transpose()) * 0.5)
}

/// Frobenius norm of the Lie derivative of `metric` along `field`.
pub fn killing_residual(field: &VectorField, metric: &MetricField, x: &DarbouxPoint, h_fd: f64) -> Result<f64> {
    Ok(lie_derivative_metric(field, metric, x, h_fd)?.norm())
}

/// Killing residual along the Reeb field; equals `|dG/dPhi|`.
pub fn k_contact_residual(metric: &MetricField, x: &DarbouxPoint, h_fd: f64) -> Result<f64> {
    killing_residual(&VectorField::reeb_field(metric.n())?, metric, x, h_fd)
}

/// `{h, Omega} = p_a dOmega/dq^a - q^a dOmega/dp_a`.
pub fn poisson_constraint_residual(omega: &OmegaFunction, x: &DarbouxPoint, h_fd: f64) -> Result<f64> {
    let (dq, dp) = omega.gradient(x, h_fd)?;
    Ok((0..x.n()).map(|a| x.p()[a] * dq[a] - x.q()[a] * dp[a]).sum())
}

/// `|J^T G(m(x)) J - G(x)|_F` for the exact Jacobian `J` of the map.
pub fn discrete_isometry_residual(metric: &MetricField, map: &LegendreMap, x: &DarbouxPoint) -> Result<f64> {
    let image = flows::discrete_legendre(x, map)?;
    let j = jacobian_discrete_legendre(map, x)?;
    let pulled = j.transpose() * metric.eval(&image)? * &j;
    Ok((pulled - metric.eval(x)?).norm())
}

/// Pulls `metric` back along the time-`t` RK4 flow of `X_L` and compares
/// with the metric at `x`. The flow-map Jacobian comes from central
/// differences of integrated endpoints.
pub fn flow_pullback_residual(metric: &MetricField, x: &DarbouxPoint, t: f64, dt: f64) -> Result<f64> {
    let field = flows::total_legendre_field(metric.n())?;
    let endpoint = |z: &[f64]| -> Result<Vec<f64>> {
        Ok(flows::flow_map(&field, &DarbouxPoint::from_coords(z)?, t, dt)?.to_vec())
    };
    let rows = fd::jacobian(&endpoint, &x.to_vec(), fd::DEFAULT_STEP)?;
    let dim = x.dim();
    let j = DMatrix::from_fn(dim, dim, |r, c| rows[r][c]);
    let image = flows::flow_map(&field, x, t, dt)?;
    let pulled = j.transpose() * metric.eval(&image)? * &j;
    Ok((pulled - metric.eval(x)?).norm())
}

/// [`flow_pullback_residual`] at the quarter turn, where the flow realizes
/// the total Legendre map.
pub fn flow_recurrence_residual(metric: &MetricField, x: &DarbouxPoint, dt: f64) -> Result<f64> {
    flow_pullback_residual(metric, x, QUARTER_TURN, dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(phi: f64, q: &[f64], p: &[f64]) -> DarbouxPoint {
        DarbouxPoint::new(phi, q.to_vec(), p.to_vec()).unwrap()
    }

    fn epsilon(omega: OmegaFunction) -> MetricField {
        build_metric(&MetricFamily::Epsilon(omega)).unwrap()
    }

    #[test]
    fn epsilon_at_origin() {
        let g = epsilon(OmegaFunction::constant(2, 1.0).unwrap())
            .eval(&DarbouxPoint::origin(2).unwrap())
            .unwrap();
        let mut want = DMatrix::zeros(5, 5);
        want[(0, 0)] = 1.0;
        want[(1, 4)] = 1.0;
        want[(4, 1)] = 1.0;
        want[(2, 3)] = -1.0;
        want[(3, 2)] = -1.0;
        assert_eq!(g, want);
    }

    #[test]
    fn gtd_partial_substitution() {
        let fam = MetricFamily::GtdPartial(GtdPartialParams {
            k: 0,
            omega: OmegaFunction::constant(2, 1.0).unwrap(),
        });
        let g = build_metric(&fam).unwrap().eval(&pt(0.0, &[1.0, 1.0], &[1.0, 1.0])).unwrap();
        let eta = DVector::from_vec(vec![1.0, -1.0, -1.0, 0.0, 0.0]);
        let mut want = &eta * eta.transpose();
        want[(1, 3)] += 0.5;
        want[(3, 1)] += 0.5;
        want[(2, 4)] += 0.5;
        want[(4, 2)] += 0.5;
        assert_eq!(g, want);
    }

    #[test]
    fn epsilon_rejects_other_dimensions() {
        let fam = MetricFamily::Epsilon(OmegaFunction::constant(3, 1.0).unwrap());
        assert!(build_metric(&fam).is_err());
    }

    #[test]
    fn gtd_total_parameter_validation() {
        let w = OmegaFunction::constant(2, 1.0).unwrap();
        assert!(GtdTotalParams::new(vec![1.0, 0.0], vec![1.0, 1.0], w.clone()).is_err());
        assert!(GtdTotalParams::new(vec![1.0], vec![1.0, 1.0], w.clone()).is_err());
        assert!(GtdTotalParams::new(vec![2.0, 1.0], vec![1.0, -3.0], w).is_ok());
    }

    #[test]
    fn poisson_examples() {
        let x = pt(0.1, &[1.3, -0.4], &[0.7, 2.2]);
        let h = fd::DEFAULT_STEP;
        assert_eq!(poisson_constraint_residual(&OmegaFunction::pair_norm(1, 2).unwrap(), &x, h).unwrap(), 0.0);
        assert!(poisson_constraint_residual(&OmegaFunction::cross_dot().unwrap(), &x, h).unwrap().abs() < 1e-15);
        let r = poisson_constraint_residual(&OmegaFunction::coordinate_q(1, 2).unwrap(), &x, h).unwrap();
        assert_eq!(r, 0.7);
    }

    #[test]
    fn k_contact_for_phi_dependent_metric() {
        let g = MetricField::from_fn(2, "(1+Phi^2) eta eta", |x| {
            let e = eval_eta(x).0;
            Ok(&e * e.transpose() * (1.0 + x.phi() * x.phi()))
        })
        .unwrap();
        let h = fd::DEFAULT_STEP;
        assert!(k_contact_residual(&g, &pt(0.8, &[1.0, 0.5], &[0.2, -1.0]), h).unwrap() > 0.1);
        assert!(k_contact_residual(&g, &pt(0.0, &[1.0, 0.5], &[0.2, -1.0]), h).unwrap() < 1e-9);
    }

    #[test]
    fn builtin_families_are_k_contact() {
        let w = OmegaFunction::total_norm(2).unwrap();
        let x = pt(1.7, &[0.3, -1.1], &[0.9, 0.4]);
        for fam in [
            MetricFamily::Epsilon(w.clone()),
            MetricFamily::GtdTotal(GtdTotalParams::identity(w.clone())),
            MetricFamily::GtdPartial(GtdPartialParams { k: 1, omega: w.clone() }),
        ] {
            let g = build_metric(&fam).unwrap();
            assert_eq!(k_contact_residual(&g, &x, fd::DEFAULT_STEP).unwrap(), 0.0, "{}", fam.name());
        }
    }

    #[test]
    fn lie_derivative_is_exactly_symmetric() {
        let w = OmegaFunction::coordinate_q(1, 2).unwrap();
        let g = build_metric(&MetricFamily::GtdTotal(GtdTotalParams::identity(w))).unwrap();
        let field = flows::total_legendre_field(2).unwrap();
        let l = lie_derivative_metric(&field, &g, &pt(0.2, &[1.0, 2.0], &[-0.3, 0.6]), 1e-5).unwrap();
        assert_eq!(l, l.transpose());
    }
}
