//! Darboux coordinates, the contact form and the Reeb field.
//!
//! Every vector, covector and matrix in this crate uses the flattened
//! coordinate order `Z = (Phi, q1..qn, p1..pn)`.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{CtlError, Result};
use crate::fd;

/// Largest `n` accepted by [`volume_form_coefficient`]; the brute-force
/// antisymmetrization walks `(2n+1)!` permutations.
pub const MAX_WEDGE_DOF: usize = 3;

/// Slot of `Phi` in the flattened coordinates.
pub const PHI: usize = 0;

/// Slot of `q^a` (zero-based `a`).
#[inline]
pub fn q_index(a: usize) -> usize {
    1 + a
}

/// Slot of `p_a` (zero-based `a`) for `n` degrees of freedom.
#[inline]
pub fn p_index(n: usize, a: usize) -> usize {
    1 + n + a
}

/// A point of the `(2n+1)`-dimensional phase-space.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxPoint {
    phi: f64,
    q: Vec<f64>,
    p: Vec<f64>,
}

impl DarbouxPoint {
    pub fn new(phi: f64, q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(CtlError::ZeroDimension);
        }
        if q.len() != p.len() {
            return Err(CtlError::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        Ok(Self { phi, q, p })
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::new(0.0, vec![0.0; n], vec![0.0; n])
    }

    /// Rebuilds a point from flattened coordinates of length `2n+1`.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.len() < 3 || coords.len().is_multiple_of(2) {
            return Err(CtlError::InvalidParameter(format!(
                "phase-space coordinates must have odd length 2n+1 >= 3, got {}",
                coords.len()
            )));
        }
        let n = (coords.len() - 1) / 2;
        Self::new(
            coords[0],
            coords[1..=n].to_vec(),
            coords[n + 1..].to_vec(),
        )
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// Ambient dimension `2n+1`.
    pub fn dim(&self) -> usize {
        2 * self.n() + 1
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut z = Vec::with_capacity(self.dim());
        z.push(self.phi);
        z.extend_from_slice(&self.q);
        z.extend_from_slice(&self.p);
        z
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_vec(self.to_vec())
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite()
            && self.q.iter().all(|v| v.is_finite())
            && self.p.iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_dof(&self, n: usize) -> Result<()> {
        if self.n() == n {
            Ok(())
        } else {
            Err(CtlError::DimensionMismatch {
                expected: n,
                got: self.n(),
            })
        }
    }
}

impl fmt::Display for DarbouxPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(Phi={}, q={:?}, p={:?})", self.phi, self.q, self.p)
    }
}

/// Components of a 1-form at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector(pub DVector<f64>);

impl Covector {
    pub fn components(&self) -> &DVector<f64> {
        &self.0
    }

    /// `omega[v]`.
    pub fn contract(&self, v: &DVector<f64>) -> f64 {
        self.0.dot(v)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Components of an antisymmetric 2-form.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm(DMatrix<f64>);

impl TwoForm {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `omega(u, v)`.
    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&(&self.0 * v))
    }

    /// Interior product `i_v omega`, i.e. `omega(v, .)`.
    pub fn interior(&self, v: &DVector<f64>) -> DVector<f64> {
        self.0.tr_mul(v)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.0 == -self.0.transpose()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(CtlError::ZeroDimension)
    } else {
        Ok(())
    }
}

/// The contact form `eta = dPhi - p_a dq^a` at `x`.
pub fn eval_eta(x: &DarbouxPoint) -> Covector {
    let n = x.n();
    let mut c = DVector::zeros(x.dim());
    c[PHI] = 1.0;
    for a in 0..n {
        c[q_index(a)] = -x.p()[a];
    }
    Covector(c)
}

/// `d eta = dq^a ^ dp_a`, constant in Darboux coordinates.
pub fn eval_deta(n: usize) -> Result<TwoForm> {
    check_n(n)?;
    let mut m = DMatrix::zeros(2 * n + 1, 2 * n + 1);
    for a in 0..n {
        m[(q_index(a), p_index(n, a))] = 1.0;
        m[(p_index(n, a), q_index(a))] = -1.0;
    }
    Ok(TwoForm(m))
}

/// The Reeb field `d/dPhi`.
pub fn reeb(n: usize) -> Result<DVector<f64>> {
    check_n(n)?;
    let mut r = DVector::zeros(2 * n + 1);
    r[PHI] = 1.0;
    Ok(r)
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let inversions = perm
        .iter()
        .enumerate()
        .flat_map(|(i, a)| perm[i + 1..].iter().filter(move |b| a > *b))
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficient of `eta ^ (d eta)^n` on `dPhi ^ dq^1 ^ .. ^ dp_n`.
///
/// Evaluates the top form on the ordered coordinate basis by summing over
/// all permutations, so it is limited to `n <= 3`. The result is nonzero and
/// independent of `x`; only its sign depends on the basis ordering.
pub fn volume_form_coefficient(x: &DarbouxPoint) -> Result<f64> {
    let n = x.n();
    if n > MAX_WEDGE_DOF {
        return Err(CtlError::DimensionTooLarge {
            n,
            max: MAX_WEDGE_DOF,
        });
    }
    let eta = eval_eta(x);
    let deta = eval_deta(n)?;
    let w = deta.matrix();
    let dim = x.dim();
    let norm = 2f64.powi(n as i32);

    let total: f64 = (0..dim)
        .permutations(dim)
        .map(|perm| {
            let mut term = eta.0[perm[0]];
            for k in 0..n {
                term *= w[(perm[2 * k + 1], perm[2 * k + 2])];
            }
            permutation_sign(&perm) * term
        })
        .sum();
    Ok(total / norm)
}

pub type PointFn<T> = Arc<dyn Fn(&DarbouxPoint) -> Result<T> + Send + Sync>;

/// A vector field on phase-space with an optional analytic Jacobian.
///
/// The Jacobian is stored as `J[(C, A)] = d X^C / d Z^A`.
#[derive(Clone)]
pub struct VectorField {
    n: usize,
    label: String,
    eval: PointFn<DVector<f64>>,
    jacobian: Option<PointFn<DMatrix<f64>>>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl VectorField {
    pub fn new<F>(n: usize, label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<DVector<f64>> + Send + Sync + 'static,
    {
        Self {
            n,
            label: label.into(),
            eval: Arc::new(eval),
            jacobian: None,
        }
    }

    pub fn with_jacobian<F>(mut self, jacobian: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    /// Drops the analytic Jacobian so that [`VectorField::jacobian`] falls
    /// back to finite differences.
    pub fn without_jacobian(mut self) -> Self {
        self.jacobian = None;
        self
    }

    /// A constant field with the given flattened components.
    pub fn constant(n: usize, label: impl Into<String>, components: DVector<f64>) -> Result<Self> {
        check_n(n)?;
        if components.len() != 2 * n + 1 {
            return Err(CtlError::DimensionMismatch {
                expected: 2 * n + 1,
                got: components.len(),
            });
        }
        let dim = 2 * n + 1;
        Ok(Self::new(n, label, move |_| Ok(components.clone()))
            .with_jacobian(move |_| Ok(DMatrix::zeros(dim, dim))))
    }

    /// The coordinate field `d/dZ^index`.
    pub fn coordinate(n: usize, index: usize) -> Result<Self> {
        check_n(n)?;
        if index > 2 * n {
            return Err(CtlError::IndexOutOfRange { index, n: 2 * n });
        }
        let mut c = DVector::zeros(2 * n + 1);
        c[index] = 1.0;
        Self::constant(n, format!("d/dZ{index}"), c)
    }

    pub fn reeb_field(n: usize) -> Result<Self> {
        Self::constant(n, "reeb", reeb(n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn eval(&self, x: &DarbouxPoint) -> Result<DVector<f64>> {
        x.check_dof(self.n)?;
        (self.eval)(x)
    }

    /// Analytic Jacobian when available, otherwise central differences with
    /// step `h_fd`.
    pub fn jacobian(&self, x: &DarbouxPoint, h_fd: f64) -> Result<DMatrix<f64>> {
        x.check_dof(self.n)?;
        if let Some(j) = &self.jacobian {
            return j(x);
        }
        let f = |z: &[f64]| -> Result<Vec<f64>> {
            let y = DarbouxPoint::from_coords(z)?;
            Ok((self.eval)(&y)?.iter().copied().collect())
        };
        let rows = fd::jacobian(&f, &x.to_vec(), h_fd)?;
        let dim = x.dim();
        Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }
}

/// A 1-form field with optional analytic derivative `D[(A, B)] = d w_A / d Z^B`.
#[derive(Clone)]
pub struct OneFormField {
    n: usize,
    label: String,
    eval: PointFn<DVector<f64>>,
    derivative: Option<PointFn<DMatrix<f64>>>,
}

impl fmt::Debug for OneFormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OneFormField")
            .field("n", &self.n)
            .field("label", &self.label)
            .finish()
    }
}

impl OneFormField {
    pub fn new<F>(n: usize, label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<DVector<f64>> + Send + Sync + 'static,
    {
        Self {
            n,
            label: label.into(),
            eval: Arc::new(eval),
            derivative: None,
        }
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(&DarbouxPoint) -> Result<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn without_derivative(mut self) -> Self {
        self.derivative = None;
        self
    }

    /// The contact form as a field, with its exact derivative.
    pub fn eta(n: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 2 * n + 1;
        Ok(Self::new(n, "eta", |x| Ok(eval_eta(x).0)).with_derivative(move |_| {
            let mut d = DMatrix::zeros(dim, dim);
            for a in 0..n {
                d[(q_index(a), p_index(n, a))] = -1.0;
            }
            Ok(d)
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &DarbouxPoint) -> Result<Covector> {
        x.check_dof(self.n)?;
        Ok(Covector((self.eval)(x)?))
    }

    pub fn derivative(&self, x: &DarbouxPoint, h_fd: f64) -> Result<DMatrix<f64>> {
        x.check_dof(self.n)?;
        if let Some(d) = &self.derivative {
            return d(x);
        }
        let f = |z: &[f64]| -> Result<Vec<f64>> {
            let y = DarbouxPoint::from_coords(z)?;
            Ok((self.eval)(&y)?.iter().copied().collect())
        };
        let rows = fd::jacobian(&f, &x.to_vec(), h_fd)?;
        let dim = x.dim();
        Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }
}

/// Lie derivative of a 1-form, `(L_X w)_A = X^B d_B w_A + w_B d_A X^B`.
pub fn lie_derivative_oneform(
    field: &VectorField,
    form: &OneFormField,
    x: &DarbouxPoint,
    h_fd: f64,
) -> Result<Covector> {
    if h_fd <= 0.0 {
        return Err(CtlError::InvalidParameter(format!(
            "finite-difference step must be positive, got {h_fd}"
        )));
    }
    let xv = field.eval(x)?;
    let jx = field.jacobian(x, h_fd)?;
    let w = form.eval(x)?;
    let dw = form.derivative(x, h_fd)?;
    Ok(Covector(&dw * &xv + jx.tr_mul(&w.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(phi: f64, q: &[f64], p: &[f64]) -> DarbouxPoint {
        DarbouxPoint::new(phi, q.to_vec(), p.to_vec()).unwrap()
    }

    #[test]
    fn eta_examples() {
        let e = eval_eta(&DarbouxPoint::origin(2).unwrap());
        assert_eq!(e.0.as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let e = eval_eta(&pt(5.0, &[1.0, 2.0], &[3.0, -4.0]));
        assert_eq!(e.0.as_slice(), &[1.0, -3.0, 4.0, 0.0, 0.0]);
        let e = eval_eta(&pt(1.0, &[2.0], &[7.0]));
        assert_eq!(e.0.as_slice(), &[1.0, -7.0, 0.0]);
    }

    #[test]
    fn deta_structure() {
        let d1 = eval_deta(1).unwrap();
        assert_eq!(d1.matrix()[(1, 2)], 1.0);
        assert_eq!(d1.matrix()[(2, 1)], -1.0);
        assert_eq!(d1.matrix().iter().filter(|v| **v != 0.0).count(), 2);

        let d2 = eval_deta(2).unwrap();
        assert!(d2.is_antisymmetric());
        assert_eq!(d2.matrix()[(1, 3)], 1.0);
        assert_eq!(d2.matrix()[(2, 4)], 1.0);
        assert!(d2.matrix().row(0).iter().all(|v| *v == 0.0));
        assert!(d2.matrix().column(0).iter().all(|v| *v == 0.0));
        assert!(eval_deta(0).is_err());
    }

    #[test]
    fn reeb_is_dphi_and_in_kernel_of_deta() {
        let r = reeb(2).unwrap();
        assert_eq!(r.as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let x = pt(0.3, &[1.2, -0.7], &[4.0, 2.5]);
        assert_eq!(eval_eta(&x).contract(&r), 1.0);
        assert!(eval_deta(2).unwrap().interior(&r).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn point_construction_rejects_bad_shapes() {
        assert!(DarbouxPoint::new(0.0, vec![], vec![]).is_err());
        assert!(DarbouxPoint::new(0.0, vec![1.0], vec![1.0, 2.0]).is_err());
        assert!(DarbouxPoint::from_coords(&[1.0, 2.0]).is_err());
        let x = DarbouxPoint::from_coords(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(x.q(), &[2.0, 3.0]);
        assert_eq!(x.p(), &[4.0, 5.0]);
        assert_eq!(x.to_vec(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn volume_form_rejects_large_n() {
        let x = DarbouxPoint::origin(4).unwrap();
        assert!(matches!(
            volume_form_coefficient(&x),
            Err(CtlError::DimensionTooLarge { n: 4, .. })
        ));
    }

    #[test]
    fn lie_derivative_of_eta_along_reeb_and_q1_vanishes() {
        let eta = OneFormField::eta(2).unwrap();
        let x = pt(0.4, &[1.0, -2.0], &[0.5, 3.0]);
        for field in [
            VectorField::reeb_field(2).unwrap(),
            VectorField::coordinate(2, q_index(0)).unwrap(),
        ] {
            let l = lie_derivative_oneform(&field, &eta, &x, fd::DEFAULT_STEP).unwrap();
            assert!(l.0.iter().all(|v| *v == 0.0), "{}: {:?}", field.label(), l);
        }
    }

    #[test]
    fn lie_derivative_along_p1_picks_up_eta_derivative() {
        // L_{d/dp1} eta = d/dp1 (-p1 dq1) = -dq1
        let eta = OneFormField::eta(1).unwrap();
        let field = VectorField::coordinate(1, p_index(1, 0)).unwrap();
        let x = pt(0.0, &[1.0], &[2.0]);
        let l = lie_derivative_oneform(&field, &eta, &x, 1e-5).unwrap();
        assert_eq!(l.0.as_slice(), &[0.0, -1.0, 0.0]);
    }
}
