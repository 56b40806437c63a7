//! Metric functions and potentials by name.
//!
//! Phase-space `Omega`:
//!
//! | name               | function                  |
//! |--------------------|---------------------------|
//! | `const:<c>`        | `c`                       |
//! | `pair-norm:<i>`    | `q_i^2 + p_i^2`           |
//! | `total-norm`       | `sum_i q_i^2 + p_i^2`     |
//! | `cross-dot`        | `q1 q2 + p1 p2`           |
//! | `cross-wedge`      | `q1 p2 - q2 p1`           |
//! | `q:<i>`            | `q_i`                     |
//! | `expr:<text>`      | expression in `q1..qn, p1..pn` |
//!
//! Equilibrium `Omega(u, v)`: `const:<c>`, `expr:<text>` in `u, v`, or
//! `pullback:<phase-space name>` through the ideal gas.
//!
//! Potentials: `ideal-gas:<c_v>` or `expr:<text>` in `u, v`.

use crate::equilibrium::{EquilibriumOmega, FundamentalRelation};
use crate::error::{CtlError, Result};
use crate::expr::{parse_expression, Context};
use crate::metriclab::OmegaFunction;

fn split(name: &str) -> (&str, Option<&str>) {
    match name.split_once(':') {
        Some((head, tail)) => (head.trim(), Some(tail)),
        None => (name.trim(), None),
    }
}

fn number(name: &str, arg: Option<&str>) -> Result<f64> {
    let raw = arg.ok_or_else(|| CtlError::InvalidParameter(format!("'{name}' needs a numeric argument")))?;
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CtlError::InvalidParameter(format!("'{raw}' is not a number in '{name}'")))?;
    if !v.is_finite() {
        return Err(CtlError::InvalidParameter(format!("'{name}' must be finite")));
    }
    Ok(v)
}

fn index(name: &str, arg: Option<&str>) -> Result<usize> {
    let raw = arg.ok_or_else(|| CtlError::InvalidParameter(format!("'{name}' needs a pair index")))?;
    raw.trim()
        .parse()
        .map_err(|_| CtlError::InvalidParameter(format!("'{raw}' is not a pair index in '{name}'")))
}

/// Builds a phase-space metric function from its text form.
pub fn phase_omega(name: &str, n: usize) -> Result<OmegaFunction> {
    let (head, arg) = split(name);
    match head {
        "const" => OmegaFunction::constant(n, number(name, arg)?),
        "pair-norm" => OmegaFunction::pair_norm(index(name, arg)?, n),
        "total-norm" => OmegaFunction::total_norm(n),
        "cross-dot" | "cross-wedge" if n != 2 => Err(CtlError::InvalidParameter(format!(
            "'{head}' is defined for n = 2 only"
        ))),
        "cross-dot" => OmegaFunction::cross_dot(),
        "cross-wedge" => OmegaFunction::cross_wedge(),
        "q" => OmegaFunction::coordinate_q(index(name, arg)?, n),
        "expr" => {
            let text = arg.unwrap_or_default();
            let e = parse_expression(text, &Context::phase_space(n))?;
            OmegaFunction::from_fn(n, format!("expr:{text}"), move |q, p| {
                let b: Vec<f64> = q.iter().chain(p).copied().collect();
                Ok(e.eval(&b)?)
            })
        }
        _ => Err(CtlError::InvalidParameter(format!("unknown metric function '{name}'"))),
    }
}

/// Builds `Omega(u, v)` on the equilibrium space of the ideal gas with heat
/// capacity `c_v`.
pub fn equilibrium_omega(name: &str, c_v: f64) -> Result<EquilibriumOmega> {
    let (head, arg) = split(name);
    match head {
        "const" => Ok(EquilibriumOmega::constant(number(name, arg)?)),
        "expr" => {
            let text = arg.unwrap_or_default();
            let e = parse_expression(text, &Context::equilibrium())?;
            Ok(EquilibriumOmega::from_fn(format!("expr:{text}"), move |u, v| Ok(e.eval(&[u, v])?)))
        }
        "pullback" => {
            let inner = arg.unwrap_or_default();
            let omega = phase_omega(inner, 2)?;
            EquilibriumOmega::pullback(&omega, &FundamentalRelation::ideal_gas(c_v)?)
        }
        _ => Err(CtlError::InvalidParameter(format!("unknown equilibrium metric function '{name}'"))),
    }
}

/// Builds a two-variable fundamental relation; expression potentials get
/// finite-difference gradients and Hessians.
pub fn potential(name: &str) -> Result<FundamentalRelation> {
    let (head, arg) = split(name);
    match head {
        "ideal-gas" => FundamentalRelation::ideal_gas(number(name, arg)?),
        "expr" => {
            let text = arg.unwrap_or_default();
            let e = parse_expression(text, &Context::equilibrium())?;
            FundamentalRelation::from_fn(2, format!("expr:{text}"), move |q| Ok(e.eval(q)?))
        }
        _ => Err(CtlError::InvalidParameter(format!("unknown potential '{name}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::DarbouxPoint;

    #[test]
    fn phase_names_resolve() {
        let x = DarbouxPoint::new(0.0, vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        let cases = [
            ("const:2.5", 2.5),
            ("pair-norm:2", 20.0),
            ("total-norm", 30.0),
            ("cross-dot", 14.0),
            ("cross-wedge", -2.0),
            ("q:1", 1.0),
            ("expr:q1*p2 - q2*p1", -2.0),
        ];
        for (name, want) in cases {
            assert_eq!(phase_omega(name, 2).unwrap().value(&x).unwrap(), want, "{name}");
        }
    }

    #[test]
    fn bad_names_are_rejected() {
        assert!(phase_omega("const", 2).is_err());
        assert!(phase_omega("const:abc", 2).is_err());
        assert!(phase_omega("pair-norm:3", 2).is_err());
        assert!(phase_omega("cross-dot", 3).is_err());
        assert!(phase_omega("wat", 2).is_err());
        assert!(matches!(phase_omega("expr:c*q1", 2), Err(CtlError::Expression(_))));
        assert!(equilibrium_omega("expr:q1", 1.5).is_err());
        assert!(potential("expr:ln(", ).is_err());
    }

    #[test]
    fn expression_potential_matches_builtin() {
        let a = potential("expr:1.5*ln(u)+ln(v)").unwrap();
        let b = potential("ideal-gas:1.5").unwrap();
        let q = [2.0, 0.5];
        assert_eq!(a.value(&q).unwrap(), b.value(&q).unwrap());
        let (ga, gb) = (a.gradient(&q).unwrap(), b.gradient(&q).unwrap());
        assert!((ga[0] - gb[0]).abs() < 1e-7 && (ga[1] - gb[1]).abs() < 1e-7);
    }

    #[test]
    fn pullback_name() {
        let w = equilibrium_omega("pullback:pair-norm:1", 1.5).unwrap();
        // q1 = u, p1 = c_v / u
        assert!((w.value(2.0, 1.0).unwrap() - (4.0 + 0.5625)).abs() < 1e-15);
    }
}
