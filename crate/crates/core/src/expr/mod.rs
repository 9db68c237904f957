//! Closed-form data expressions in one free variable.
//!
//! Expressions are immutable DAGs behind `Arc`, so derivatives share common
//! subtrees and can be handed to worker threads freely. Each expression is
//! compiled once into a flat tape used for real, complex and truncated
//! Taylor-series (jet) evaluation.

mod diff;
mod parse;
mod print;
mod tape;

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub use diff::DEFAULT_MAX_ORDER;
use tape::Tape;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("derivative order {requested} exceeds the limit {max}")]
    OrderLimit { requested: usize, max: usize },
    #[error("expression grew past {0} nodes while differentiating")]
    Growth(usize),
}

pub type Result<T> = std::result::Result<T, ExprError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
            Func::Sqrt => v.sqrt(),
        }
    }
}

pub type Link = Arc<Node>;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Link),
    Add(Link, Link),
    Sub(Link, Link),
    Mul(Link, Link),
    Div(Link, Link),
    /// Power with a constant exponent.
    Pow(Link, f64),
    Func(Func, Link),
}

impl Node {
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }
}

/// A parsed expression in a single named variable.
#[derive(Clone)]
pub struct Expression {
    root: Link,
    var: Arc<str>,
    tape: Arc<Tape>,
}

impl std::fmt::Debug for Expression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Expression({})", self)
    }
}

/// Variable names accepted by the parser.
pub const VARIABLES: [&str; 4] = ["x", "t", "y", "s"];

impl Expression {
    pub fn from_node(root: Link, var: &str) -> Self {
        let tape = Arc::new(Tape::compile(&root));
        Expression { root, var: var.into(), tape }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_node(Arc::new(Node::Const(c)), "t")
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }

    pub fn root(&self) -> &Link {
        &self.root
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn as_const(&self) -> Option<f64> {
        self.root.as_const()
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        self.tape.len()
    }

    /// True when evaluation at complex arguments is unambiguous (no square
    /// roots and only integer powers).
    pub fn supports_complex(&self) -> bool {
        self.tape.supports_complex()
    }

    pub fn eval(&self, v: f64) -> Result<f64> {
        self.tape.eval(v)
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        self.tape.eval_complex(z)
    }

    /// Taylor coefficients of `f(v + scale*tau)` in `tau` through `order`.
    pub fn taylor(&self, v: f64, order: usize, scale: f64) -> Result<Vec<f64>> {
        self.tape.jet(v, order, scale)
    }

    /// Derivative values `f^(k)(v)` for `k = 0..=order`, computed by Taylor-mode
    /// arithmetic rather than symbolic expansion.
    pub fn derivatives(&self, v: f64, order: usize) -> Result<Vec<f64>> {
        if order > DEFAULT_MAX_ORDER {
            return Err(ExprError::OrderLimit { requested: order, max: DEFAULT_MAX_ORDER });
        }
        // a scale near order/e keeps the scaled coefficients of entire data in range
        let scale = if order <= 120 { 1.0 } else { order as f64 / std::f64::consts::E };
        let g = self.taylor(v, order, scale)?;
        let mut out = Vec::with_capacity(order + 1);
        let mut factor = 1.0;
        for (k, gk) in g.iter().enumerate() {
            if k > 0 {
                factor *= k as f64 / scale;
            }
            let d = gk * factor;
            if !d.is_finite() {
                return Err(ExprError::Domain(format!("derivative of order {k} overflows at {v}")));
            }
            out.push(d);
        }
        Ok(out)
    }

    /// `exp(rate*v) * self`.
    pub fn times_exp(&self, rate: f64) -> Expression {
        use diff::build::{func, konst, mul, var};
        let root = mul(func(Func::Exp, mul(konst(rate), var())), self.root.clone());
        Expression::from_node(root, &self.var)
    }

    /// Exact symbolic derivative of the given order.
    pub fn differentiate(&self, order: usize) -> Result<Expression> {
        diff::differentiate(self, order, DEFAULT_MAX_ORDER)
    }
}

impl std::fmt::Display for Expression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        print::write_node(f, &self.root, &self.var, 0)
    }
}

pub fn parse(text: &str) -> Result<Expression> {
    Expression::parse(text)
}

pub fn differentiate(e: &Expression, order: usize) -> Result<Expression> {
    e.differentiate(order)
}

pub fn eval(e: &Expression, value: f64) -> Result<f64> {
    e.eval(value)
}

/// Memoized symbolic derivatives of one expression.
///
/// Not `Sync`: each worker keeps its own cache while the expression itself is
/// shared.
pub struct DerivativeCache {
    entries: RefCell<Vec<Expression>>,
    max_order: usize,
}

impl DerivativeCache {
    pub fn new(base: Expression) -> Self {
        Self::with_max_order(base, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(base: Expression, max_order: usize) -> Self {
        DerivativeCache { entries: RefCell::new(vec![base]), max_order }
    }

    pub fn base(&self) -> Expression {
        self.entries.borrow()[0].clone()
    }

    pub fn get(&self, order: usize) -> Result<Expression> {
        if order > self.max_order {
            return Err(ExprError::OrderLimit { requested: order, max: self.max_order });
        }
        let mut entries = self.entries.borrow_mut();
        while entries.len() <= order {
            let next = diff::differentiate(entries.last().unwrap(), 1, self.max_order)?;
            entries.push(next);
        }
        Ok(entries[order].clone())
    }

    pub fn len(&self) -> usize {
        self.entries.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests;
