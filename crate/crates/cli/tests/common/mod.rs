use std::path::Path;
use std::process::{Command, Output};

use ctl_core::expr::{parse_expression, Context};

/// Variable set an expression is parsed against.
#[derive(Clone, Copy)]
pub enum Vars {
    /// no variables
    None,
    /// `q1, q2, p1, p2` bound to `(1, 2, 3, 4)`
    Phase,
    /// `u, v`
    Uv(f64, f64),
}

pub struct Case {
    pub text: &'static str,
    pub vars: Vars,
    pub value: f64,
}

const fn c(text: &'static str, vars: Vars, value: f64) -> Case {
    Case { text, vars, value }
}

const E: f64 = std::f64::consts::E;

pub const CORPUS: [Case; 50] = [
    c("1+2", Vars::None, 3.0),
    c("2*3+4", Vars::None, 10.0),
    c("2+3*4", Vars::None, 14.0),
    c("(2+3)*4", Vars::None, 20.0),
    c("2^3^2", Vars::None, 512.0),
    c("-2^2", Vars::None, -4.0),
    c("(-2)^2", Vars::None, 4.0),
    c("2^-1", Vars::None, 0.5),
    c("10/4/5", Vars::None, 0.5),
    c("10-4-3", Vars::None, 3.0),
    c("-(-3)", Vars::None, 3.0),
    c("--3", Vars::None, 3.0),
    c("2*-3", Vars::None, -6.0),
    c("1.5e2", Vars::None, 150.0),
    c(".5+.25", Vars::None, 0.75),
    c("q1^2+p1^2", Vars::Phase, 10.0),
    c("-(q1*p2 - q2*p1)", Vars::Phase, 2.0),
    c("ln(1)", Vars::None, 0.0),
    c("exp(0)", Vars::None, 1.0),
    c("sqrt(16)", Vars::None, 4.0),
    c("sin(0)", Vars::None, 0.0),
    c("cos(0)", Vars::None, 1.0),
    c("1.5*ln(u)+ln(v)", Vars::Uv(1.0, 1.0), 0.0),
    c("1.5*ln(u)+ln(v)", Vars::Uv(E, 1.0), 1.5),
    c("u/v", Vars::Uv(2.0, 4.0), 0.5),
    c("u^2*v", Vars::Uv(3.0, 2.0), 18.0),
    c("-u^2", Vars::Uv(3.0, 1.0), -9.0),
    c("(u+v)^2", Vars::Uv(1.0, 2.0), 9.0),
    c("2^2^0", Vars::None, 2.0),
    c("exp(ln(u))", Vars::Uv(5.0, 1.0), 5.0),
    c("sqrt(u*u+v*v)", Vars::Uv(3.0, 4.0), 5.0),
    c("q1*q2*p1*p2", Vars::Phase, 24.0),
    c("(q1^2+p1^2)*(q2^2+p2^2)", Vars::Phase, 200.0),
    c("q1*p2-q2*p1", Vars::Phase, -2.0),
    c("q1*q2+p1*p2", Vars::Phase, 14.0),
    c("1+0.1*u*v", Vars::Uv(2.0, 3.0), 1.6),
    c("cos(u)^2+sin(u)^2", Vars::Uv(0.7, 1.0), 1.0),
    c("2*(3+(4-1))", Vars::None, 12.0),
    c("((1))", Vars::None, 1.0),
    c("1 + 2 * 3 ^ 2", Vars::None, 19.0),
    c("-1-1", Vars::None, -2.0),
    c("8/2^2", Vars::None, 2.0),
    c("3-2^2*2", Vars::None, -5.0),
    c("-u*v", Vars::Uv(2.0, 3.0), -6.0),
    c("u^-2", Vars::Uv(2.0, 1.0), 0.25),
    c("exp(1)", Vars::None, E),
    c("ln(exp(2))", Vars::None, 2.0),
    c("sqrt(2)^2", Vars::None, 2.0),
    c("p2 - q2 + p1 - q1", Vars::Phase, 4.0),
    c("2^(1+1)^2", Vars::None, 16.0),
];

/// Checks one case: the value, and that printing reparses to the same tree.
pub fn check_case(case: &Case) -> Result<(), String> {
    let (ctx, bindings) = match case.vars {
        Vars::None => (Context::new(Vec::<String>::new()), vec![]),
        Vars::Phase => (Context::phase_space(2), vec![1.0, 2.0, 3.0, 4.0]),
        Vars::Uv(u, v) => (Context::equilibrium(), vec![u, v]),
    };
    let e = parse_expression(case.text, &ctx).map_err(|err| format!("{}: {err}", case.text))?;
    let printed = e.to_string();
    let again = parse_expression(&printed, &ctx).map_err(|err| format!("{printed}: {err}"))?;
    if again.ast() != e.ast() {
        return Err(format!("{}: '{printed}' reparses differently", case.text));
    }
    let got = e.eval(&bindings).map_err(|err| format!("{}: {err}", case.text))?;
    if (got - case.value).abs() > 1e-12 * case.value.abs().max(1.0) {
        return Err(format!("{}: expected {}, got {got}", case.text, case.value));
    }
    Ok(())
}

pub fn ctl(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ctl"));
    cmd.args(args).env_remove("CTL_OUTPUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("CTL_OUTPUT_DIR", d);
    }
    cmd.output().expect("ctl binary runs")
}

/// Parses CSV text into the header and rows of fields.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}
