//! A small arithmetic expression language for user-supplied metric functions
//! and potentials.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! So `-2^2 = -4` and `2^3^2 = 512`. Functions: `ln exp sqrt sin cos`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("{function}({argument}) is undefined at {}", format_bindings(.bindings))]
    Domain {
        function: String,
        argument: f64,
        bindings: Vec<(String, f64)>,
    },

    #[error("expected {expected} bound values, got {got}")]
    Arity { expected: usize, got: usize },
}

fn format_bindings(b: &[(String, f64)]) -> String {
    let parts: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            Self::Add => '+',
            Self::Sub => '-',
            Self::Mul => '*',
            Self::Div => '/',
            Self::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "ln" => Self::Ln,
            "exp" => Self::Exp,
            "sqrt" => Self::Sqrt,
            "sin" => Self::Sin,
            "cos" => Self::Cos,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Ln => "ln",
            Self::Exp => "exp",
            Self::Sqrt => "sqrt",
            Self::Sin => "sin",
            Self::Cos => "cos",
        }
    }
}

/// Syntax tree. Variables carry their slot in the parsing [`Context`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var { name: String, slot: usize },
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl fmt::Display for Expr {
    /// Fully parenthesized, so the output reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Num(v) => write!(f, "{v}"),
            Self::Var { name, .. } => write!(f, "{name}"),
            Self::Neg(e) => write!(f, "(-{e})"),
            Self::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Self::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

/// The variables an expression may reference, in binding order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    names: Vec<String>,
}

impl Context {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// `q1..qn, p1..pn`.
    pub fn phase_space(n: usize) -> Self {
        Self::new(
            (1..=n)
                .map(|i| format!("q{i}"))
                .chain((1..=n).map(|i| format!("p{i}"))),
        )
    }

    /// `u, v`.
    pub fn equilibrium() -> Self {
        Self::new(["u", "v"])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn slot(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push((Tok::Op(c as char), i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lexeme = &text[start..i];
                let value: f64 = lexeme.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("malformed number '{lexeme}'"),
                })?;
                if !value.is_finite() {
                    return Err(ExprError::Syntax {
                        offset: start,
                        message: format!("number '{lexeme}' overflows"),
                    });
                }
                out.push((Tok::Num(value), start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: i,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a Context,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if let Tok::Op('-') = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Tok::LParen = self.peek() {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ExprError::UnknownIdentifier { name, offset });
                    };
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                match self.ctx.slot(&name) {
                    Some(slot) => Ok(Expr::Var { name, slot }),
                    None => Err(ExprError::UnknownIdentifier { name, offset }),
                }
            }
            Tok::End => Err(ExprError::Syntax {
                offset,
                message: "unexpected end of input".into(),
            }),
            other => Err(ExprError::Syntax {
                offset,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            _ => self.syntax("expected ')'"),
        }
    }
}

/// A parsed expression bound to its variable context.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    ast: Expr,
    context: Context,
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

pub fn parse_expression(text: &str, context: &Context) -> Result<Expression, ExprError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        ctx: context,
    };
    let ast = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.syntax("trailing input");
    }
    Ok(Expression {
        ast,
        context: context.clone(),
    })
}

impl Expression {
    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    /// Evaluates with `bindings[i]` bound to the `i`-th context variable.
    pub fn eval(&self, bindings: &[f64]) -> Result<f64, ExprError> {
        if bindings.len() != self.context.names.len() {
            return Err(ExprError::Arity {
                expected: self.context.names.len(),
                got: bindings.len(),
            });
        }
        self.eval_node(&self.ast, bindings)
    }

    fn domain(&self, function: &str, argument: f64, bindings: &[f64]) -> ExprError {
        ExprError::Domain {
            function: function.to_string(),
            argument,
            bindings: self
                .context
                .names
                .iter()
                .cloned()
                .zip(bindings.iter().copied())
                .collect(),
        }
    }

    fn eval_node(&self, e: &Expr, b: &[f64]) -> Result<f64, ExprError> {
        Ok(match e {
            Expr::Num(v) => *v,
            Expr::Var { slot, .. } => b[*slot],
            Expr::Neg(inner) => -self.eval_node(inner, b)?,
            Expr::Binary(op, lhs, rhs) => {
                let (x, y) = (self.eval_node(lhs, b)?, self.eval_node(rhs, b)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(self.domain("div", y, b));
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        let r = if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
                            x.powi(y as i32)
                        } else {
                            x.powf(y)
                        };
                        if !r.is_finite() && x.is_finite() && y.is_finite() {
                            return Err(self.domain("pow", x, b));
                        }
                        r
                    }
                }
            }
            Expr::Call(func, arg) => {
                let x = self.eval_node(arg, b)?;
                match func {
                    Func::Ln if x <= 0.0 => return Err(self.domain("ln", x, b)),
                    Func::Sqrt if x < 0.0 => return Err(self.domain("sqrt", x, b)),
                    Func::Ln => x.ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Exp => {
                        let r = x.exp();
                        if r.is_infinite() {
                            return Err(self.domain("exp", x, b));
                        }
                        r
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                }
            }
        })
    }
}
