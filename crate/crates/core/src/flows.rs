//! Contact Hamiltonian vector fields, their flows, and the Legendre maps.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{CtlError, Result};
use crate::fd;
use crate::phasespace::{p_index, q_index, DarbouxPoint, PointFn, VectorField, PHI};

/// A scalar function on phase-space generating a contact vector field.
///
/// Gradients and Hessians are in flattened `(Phi, q, p)` order. Built-ins
/// carry both analytically; [`ContactHamiltonian::from_fn`] falls back to
/// central differences.
#[derive(Clone)]
pub struct ContactHamiltonian {
    n: usize,
    label: String,
    value: PointFn<f64>,
    gradient: Option<PointFn<DVector<f64>>>,
    hessian: Option<PointFn<DMatrix<f64>>>,
}

impl fmt::Debug for ContactHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContactHamiltonian")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("analytic_gradient", &self.gradient.is_some())
            .field("analytic_hessian", &self.hessian.is_some())
            .finish()
    }
}

impl ContactHamiltonian {
    pub fn from_fn<F>(n: usize, label: impl Into<String>, value: F) -> Result<Self>
    where
        F: Fn(&DarbouxPoint) -> Result<f64> + Send + Sync + 'static,
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
        })
    }

    pub fn with_gradient<F>(mut self, gradient: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<DVector<f64>> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_hessian<F>(mut self, hessian: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(hessian));
        self
    }

    /// Strips analytic derivatives, forcing the finite-difference path.
    pub fn finite_difference_only(mut self) -> Self {
        self.gradient = None;
        self.hessian = None;
        self
    }

    /// `h = c`. With `c = 1` this generates the Reeb field.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        let dim = 2 * n + 1;
        Ok(Self::from_fn(n, format!("const:{c}"), move |_| Ok(c))?
            .with_gradient(move |_| Ok(DVector::zeros(dim)))
            .with_hessian(move |_| Ok(DMatrix::zeros(dim, dim))))
    }

    /// `h = sum_i (q_i^2 + p_i^2) / 2`, the generator of total Legendre
    /// transformations.
    pub fn total_legendre(n: usize) -> Result<Self> {
        let pairs: Vec<usize> = (0..n).collect();
        Self::rotation(n, pairs, "total-legendre".to_string())
    }

    /// `h_i = (q_i^2 + p_i^2) / 2` for the one-based pair `i`.
    pub fn partial_legendre(i: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CtlError::ZeroDimension);
        }
        if i == 0 || i > n {
            return Err(CtlError::IndexOutOfRange { index: i, n });
        }
        Self::rotation(n, vec![i - 1], format!("partial-legendre:{i}"))
    }

    fn rotation(n: usize, pairs: Vec<usize>, label: String) -> Result<Self> {
        let dim = 2 * n + 1;
        let pairs = Arc::new(pairs);
        let (pv, pg) = (Arc::clone(&pairs), Arc::clone(&pairs));
        Ok(Self::from_fn(n, label, move |x| {
            Ok(pv
                .iter()
                .map(|&a| 0.5 * (x.q()[a].powi(2) + x.p()[a].powi(2)))
                .sum())
        })?
        .with_gradient(move |x| {
            let mut g = DVector::zeros(dim);
            for &a in pg.iter() {
                g[q_index(a)] = x.q()[a];
                g[p_index(n, a)] = x.p()[a];
            }
            Ok(g)
        })
        .with_hessian(move |_| {
            let mut h = DMatrix::zeros(dim, dim);
            for &a in pairs.iter() {
                h[(q_index(a), q_index(a))] = 1.0;
                h[(p_index(n, a), p_index(n, a))] = 1.0;
            }
            Ok(h)
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    pub fn value(&self, x: &DarbouxPoint) -> Result<f64> {
        x.check_dof(self.n)?;
        (self.value)(x)
    }

    pub fn gradient(&self, x: &DarbouxPoint, h_fd: f64) -> Result<DVector<f64>> {
        x.check_dof(self.n)?;
        if let Some(g) = &self.gradient {
            return g(x);
        }
        let f = |z: &[f64]| (self.value)(&DarbouxPoint::from_coords(z)?);
        Ok(DVector::from_vec(fd::gradient(&f, &x.to_vec(), h_fd)?))
    }

    /// Analytic Hessian if supplied.
    pub fn hessian(&self, x: &DarbouxPoint) -> Option<Result<DMatrix<f64>>> {
        self.hessian.as_ref().map(|h| h(x))
    }
}

/// Evaluates `X_h` from `h` and its gradient `g` at `x`.
fn contact_field_components(x: &DarbouxPoint, h: f64, g: &DVector<f64>) -> DVector<f64> {
    let n = x.n();
    let mut v = DVector::zeros(x.dim());
    let mut phi_dot = h;
    for a in 0..n {
        let pa = x.p()[a];
        phi_dot -= pa * g[p_index(n, a)];
        v[q_index(a)] = -g[p_index(n, a)];
        v[p_index(n, a)] = g[q_index(a)] + pa * g[PHI];
    }
    v[PHI] = phi_dot;
    v
}

fn contact_field_jacobian(x: &DarbouxPoint, g: &DVector<f64>, hess: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.n();
    let dim = x.dim();
    let mut j = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mut d_phi = g[b];
        for a in 0..n {
            let pa = x.p()[a];
            let pi = p_index(n, a);
            let qi = q_index(a);
            d_phi -= pa * hess[(pi, b)];
            if b == pi {
                d_phi -= g[pi];
            }
            j[(qi, b)] = -hess[(pi, b)];
            j[(pi, b)] = hess[(qi, b)] + pa * hess[(PHI, b)] + if b == pi { g[PHI] } else { 0.0 };
        }
        j[(PHI, b)] = d_phi;
    }
    j
}

/// The contact vector field `X_h` with `eta[X_h] = h`:
/// `Phi' = h - p_a dh/dp_a`, `p_a' = dh/dq^a + p_a dh/dPhi`, `q^a' = -dh/dp_a`.
pub fn hamiltonian_vector_field(h: &ContactHamiltonian) -> VectorField {
    let ham = h.clone();
    let mut field = VectorField::new(h.n, format!("X[{}]", h.label), move |x| {
        let value = ham.value(x)?;
        let g = ham.gradient(x, fd::DEFAULT_STEP)?;
        Ok(contact_field_components(x, value, &g))
    });
    if h.has_analytic_hessian() {
        let ham = h.clone();
        field = field.with_jacobian(move |x| {
            let g = ham.gradient(x, fd::DEFAULT_STEP)?;
            let hess = ham.hessian(x).expect("analytic hessian present")?;
            Ok(contact_field_jacobian(x, &g, &hess))
        });
    }
    field
}

/// `X_L`, the generator of total Legendre transformations.
pub fn total_legendre_field(n: usize) -> Result<VectorField> {
    Ok(hamiltonian_vector_field(&ContactHamiltonian::total_legendre(n)?))
}

/// A sampled integral curve of a vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DarbouxPoint>,
    pub ic: DarbouxPoint,
    pub dt: f64,
}

impl FlowTrajectory {
    pub fn final_state(&self) -> &DarbouxPoint {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Sample whose time is closest to `t`.
    pub fn nearest(&self, t: f64) -> (f64, &DarbouxPoint) {
        let i = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        (self.times[i], &self.states[i])
    }
}

fn rk4_step(field: &VectorField, z: &[f64], h: f64) -> Result<Vec<f64>> {
    let eval = |y: &[f64]| -> Result<DVector<f64>> { field.eval(&DarbouxPoint::from_coords(y)?) };
    let shifted = |k: &DVector<f64>, s: f64| -> Vec<f64> {
        z.iter().zip(k.iter()).map(|(a, b)| a + s * b).collect()
    };
    let k1 = eval(z)?;
    let k2 = eval(&shifted(&k1, 0.5 * h))?;
    let k3 = eval(&shifted(&k2, 0.5 * h))?;
    let k4 = eval(&shifted(&k3, h))?;
    Ok(z
        .iter()
        .enumerate()
        .map(|(i, a)| a + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Step schedule: whole steps of `dt`, then one partial step ending at `t_end`.
fn schedule(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(CtlError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(CtlError::InvalidParameter(format!(
            "t_end must be finite and non-negative, got {t_end}"
        )));
    }
    let ratio = t_end / dt;
    let mut whole = ratio.floor();
    // absorb a remainder that is only rounding noise
    if ratio - whole > 1.0 - 1e-9 {
        whole += 1.0;
    }
    let whole = whole as usize;
    let remainder = t_end - whole as f64 * dt;
    Ok((whole, if remainder.abs() > 1e-9 * dt { remainder } else { 0.0 }))
}

fn drive<F>(field: &VectorField, ic: &DarbouxPoint, t_end: f64, dt: f64, mut visit: F) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64]) -> Result<()>,
{
    ic.check_dof(field.n())?;
    let (whole, remainder) = schedule(t_end, dt)?;
    let mut z = ic.to_vec();
    let mut t = 0.0;
    let steps = (0..whole).map(|i| ((i + 1) as f64 * dt, dt));
    let tail = (remainder > 0.0).then_some((t_end, remainder));
    for (t_next, h) in steps.chain(tail) {
        let next = rk4_step(field, &z, h)?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(CtlError::NonFiniteState { last_time: t });
        }
        z = next;
        t = t_next;
        visit(t, &z)?;
    }
    Ok(z)
}

/// Classic fixed-step RK4 integration from `t = 0` to `t_end`, storing
/// every step. The last step is shortened to land exactly on `t_end`.
pub fn integrate_flow(field: &VectorField, ic: &DarbouxPoint, t_end: f64, dt: f64) -> Result<FlowTrajectory> {
    let mut times = vec![0.0];
    let mut states = vec![ic.clone()];
    drive(field, ic, t_end, dt, |t, z| {
        times.push(t);
        states.push(DarbouxPoint::from_coords(z)?);
        Ok(())
    })?;
    Ok(FlowTrajectory {
        times,
        states,
        ic: ic.clone(),
        dt,
    })
}

/// Endpoint of the RK4 flow without storing the trajectory.
pub fn flow_map(field: &VectorField, ic: &DarbouxPoint, t: f64, dt: f64) -> Result<DarbouxPoint> {
    let z = drive(field, ic, t, dt, |_, _| Ok(()))?;
    DarbouxPoint::from_coords(&z)
}

/// Exact orbit of `X_L` (all pairs rotating by the same angle).
pub fn closed_form_orbit(ic: &DarbouxPoint, t: f64) -> DarbouxPoint {
    let pairs: Vec<usize> = (0..ic.n()).collect();
    rotate_pairs(ic, &pairs, t)
}

/// Exact orbit of the sum of `X_{L_i}` over the pairs of `map`.
pub fn closed_form_orbit_pairs(ic: &DarbouxPoint, map: &LegendreMap, t: f64) -> Result<DarbouxPoint> {
    map.check(ic.n())?;
    let pairs: Vec<usize> = map.indices().iter().map(|i| i - 1).collect();
    Ok(rotate_pairs(ic, &pairs, t))
}

fn rotate_pairs(ic: &DarbouxPoint, pairs: &[usize], t: f64) -> DarbouxPoint {
    let (s, c) = t.sin_cos();
    let mut q = ic.q().to_vec();
    let mut p = ic.p().to_vec();
    let mut phi = ic.phi();
    for &a in pairs {
        let (q0, p0) = (ic.q()[a], ic.p()[a]);
        p[a] = p0 * c + q0 * s;
        q[a] = -p0 * s + q0 * c;
        phi += 0.5 * (q0 * q0 - p0 * p0) * s * c - p0 * q0 * s * s;
    }
    DarbouxPoint::new(phi, q, p).expect("shape preserved")
}

/// The set of conjugate pairs exchanged by a discrete Legendre map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreMap {
    n: usize,
    indices: Vec<usize>,
}

impl LegendreMap {
    /// `indices` are one-based pair labels in `1..=n`.
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(CtlError::ZeroDimension);
        }
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Err(CtlError::InvalidParameter(
                "a Legendre map must exchange at least one pair".into(),
            ));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
            return Err(CtlError::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { n, indices: idx })
    }

    pub fn total(n: usize) -> Result<Self> {
        Self::new(n, &(1..=n).collect::<Vec<_>>())
    }

    /// Every nonempty subset of pairs, `2^n - 1` maps.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        (1u32..(1 << n))
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|a| mask & (1 << a) != 0).map(|a| a + 1).collect();
                Self::new(n, &idx)
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_total(&self) -> bool {
        self.indices.len() == self.n
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(CtlError::DimensionMismatch {
                expected: self.n,
                got: n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for LegendreMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_total() {
            write!(f, "total")
        } else {
            let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// `Phi -> Phi - sum_{i in I} p_i q^i`, `p_i -> q^i`, `q^i -> -p_i`.
pub fn discrete_legendre(x: &DarbouxPoint, map: &LegendreMap) -> Result<DarbouxPoint> {
    map.check(x.n())?;
    let mut q = x.q().to_vec();
    let mut p = x.p().to_vec();
    let mut phi = x.phi();
    for a in map.indices().iter().map(|i| i - 1) {
        phi -= x.p()[a] * x.q()[a];
        p[a] = x.q()[a];
        q[a] = -x.p()[a];
    }
    DarbouxPoint::new(phi, q, p)
}

/// Exact Jacobian `d(image)/dZ` of [`discrete_legendre`] at `x`.
pub fn jacobian_discrete_legendre(map: &LegendreMap, x: &DarbouxPoint) -> Result<DMatrix<f64>> {
    map.check(x.n())?;
    let n = x.n();
    let mut j = DMatrix::identity(x.dim(), x.dim());
    for a in map.indices().iter().map(|i| i - 1) {
        let (qi, pi) = (q_index(a), p_index(n, a));
        j[(PHI, qi)] = -x.p()[a];
        j[(PHI, pi)] = -x.q()[a];
        j[(qi, qi)] = 0.0;
        j[(qi, pi)] = -1.0;
        j[(pi, pi)] = 0.0;
        j[(pi, qi)] = 1.0;
    }
    Ok(j)
}

/// Quarter period of the `X_L` orbits: the flow time that realizes a
/// Legendre transformation.
pub const QUARTER_TURN: f64 = FRAC_PI_2;
