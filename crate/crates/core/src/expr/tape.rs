use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{ExprError, Func, Link, Node, Result};

#[derive(Debug, Clone, Copy)]
pub(super) enum Op {
    Const(f64),
    Var,
    Neg(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, f64),
    Func(Func, usize),
}

/// Topologically ordered instruction list; shared subexpressions appear once.
#[derive(Debug)]
pub(super) struct Tape {
    pub(super) ops: Vec<Op>,
}

impl Tape {
    pub(super) fn compile(root: &Link) -> Tape {
        let mut ops = Vec::new();
        let mut index: HashMap<*const Node, usize> = HashMap::new();
        // iterative post-order so deep derivative chains cannot overflow the stack
        let mut stack: Vec<(&Link, bool)> = vec![(root, false)];
        while let Some((node, expanded)) = stack.pop() {
            let key = Arc::as_ptr(node);
            if index.contains_key(&key) {
                continue;
            }
            let children: Vec<&Link> = match &**node {
                Node::Const(_) | Node::Var => vec![],
                Node::Neg(a) | Node::Pow(a, _) | Node::Func(_, a) => vec![a],
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => vec![a, b],
            };
            if !expanded {
                stack.push((node, true));
                for c in children.into_iter().rev() {
                    if !index.contains_key(&Arc::as_ptr(c)) {
                        stack.push((c, false));
                    }
                }
                continue;
            }
            let id = |c: &Link| index[&Arc::as_ptr(c)];
            let op = match &**node {
                Node::Const(c) => Op::Const(*c),
                Node::Var => Op::Var,
                Node::Neg(a) => Op::Neg(id(a)),
                Node::Add(a, b) => Op::Add(id(a), id(b)),
                Node::Sub(a, b) => Op::Sub(id(a), id(b)),
                Node::Mul(a, b) => Op::Mul(id(a), id(b)),
                Node::Div(a, b) => Op::Div(id(a), id(b)),
                Node::Pow(a, c) => Op::Pow(id(a), *c),
                Node::Func(f, a) => Op::Func(*f, id(a)),
            };
            index.insert(key, ops.len());
            ops.push(op);
        }
        Tape { ops }
    }

    pub(super) fn len(&self) -> usize {
        self.ops.len()
    }

    pub(super) fn supports_complex(&self) -> bool {
        self.ops.iter().all(|op| match op {
            Op::Func(Func::Sqrt, _) => false,
            Op::Pow(_, c) => *c == c.trunc(),
            _ => true,
        })
    }

    pub(super) fn eval(&self, v: f64) -> Result<f64> {
        let mut buf: Vec<f64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let r = match *op {
                Op::Const(c) => c,
                Op::Var => v,
                Op::Neg(a) => -buf[a],
                Op::Add(a, b) => buf[a] + buf[b],
                Op::Sub(a, b) => buf[a] - buf[b],
                Op::Mul(a, b) => buf[a] * buf[b],
                Op::Div(a, b) => {
                    if buf[b] == 0.0 {
                        return Err(ExprError::Domain(format!("division by zero at {v}")));
                    }
                    buf[a] / buf[b]
                }
                Op::Pow(a, c) => real_pow(buf[a], c, v)?,
                Op::Func(Func::Sqrt, a) => {
                    if buf[a] < 0.0 {
                        return Err(ExprError::Domain(format!("sqrt of negative value at {v}")));
                    }
                    buf[a].sqrt()
                }
                Op::Func(f, a) => f.apply(buf[a]),
            };
            buf.push(r);
        }
        let out = *buf.last().unwrap();
        if !out.is_finite() {
            return Err(ExprError::Domain(format!("non-finite value at {v}")));
        }
        Ok(out)
    }

    pub(super) fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        let mut buf: Vec<Complex64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let r = match *op {
                Op::Const(c) => Complex64::new(c, 0.0),
                Op::Var => z,
                Op::Neg(a) => -buf[a],
                Op::Add(a, b) => buf[a] + buf[b],
                Op::Sub(a, b) => buf[a] - buf[b],
                Op::Mul(a, b) => buf[a] * buf[b],
                Op::Div(a, b) => {
                    if buf[b] == Complex64::new(0.0, 0.0) {
                        return Err(ExprError::Domain(format!("division by zero at {z}")));
                    }
                    buf[a] / buf[b]
                }
                Op::Pow(a, c) => {
                    if c != c.trunc() {
                        return Err(ExprError::Domain("non-integer power at a complex argument".into()));
                    }
                    if c < 0.0 && buf[a] == Complex64::new(0.0, 0.0) {
                        return Err(ExprError::Domain(format!("negative power of zero at {z}")));
                    }
                    buf[a].powi(c as i32)
                }
                Op::Func(f, a) => {
                    let w = buf[a];
                    match f {
                        Func::Exp => w.exp(),
                        Func::Sin => w.sin(),
                        Func::Cos => w.cos(),
                        Func::Sinh => w.sinh(),
                        Func::Cosh => w.cosh(),
                        Func::Sqrt => {
                            return Err(ExprError::Domain("sqrt at a complex argument is ambiguous".into()))
                        }
                    }
                }
            };
            buf.push(r);
        }
        let out = *buf.last().unwrap();
        if !(out.re.is_finite() && out.im.is_finite()) {
            return Err(ExprError::Domain(format!("non-finite value at {z}")));
        }
        Ok(out)
    }

    /// Taylor coefficients of f(v + scale*tau) through `order`.
    pub(super) fn jet(&self, v: f64, order: usize, scale: f64) -> Result<Vec<f64>> {
        let n = order + 1;
        let mut buf: Vec<Vec<f64>> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let r = match *op {
                Op::Const(c) => {
                    let mut r = vec![0.0; n];
                    r[0] = c;
                    r
                }
                Op::Var => {
                    let mut r = vec![0.0; n];
                    r[0] = v;
                    if n > 1 {
                        r[1] = scale;
                    }
                    r
                }
                Op::Neg(a) => buf[a].iter().map(|x| -x).collect(),
                Op::Add(a, b) => buf[a].iter().zip(&buf[b]).map(|(x, y)| x + y).collect(),
                Op::Sub(a, b) => buf[a].iter().zip(&buf[b]).map(|(x, y)| x - y).collect(),
                Op::Mul(a, b) => jet_mul(&buf[a], &buf[b]),
                Op::Div(a, b) => {
                    if buf[b][0] == 0.0 {
                        return Err(ExprError::Domain(format!("division by zero at {v}")));
                    }
                    jet_div(&buf[a], &buf[b])
                }
                Op::Pow(a, c) => jet_pow(&buf[a], c, v)?,
                Op::Func(f, a) => {
                    let u = &buf[a];
                    match f {
                        Func::Exp => jet_exp(u),
                        Func::Sin => jet_sincos(u, false).0,
                        Func::Cos => jet_sincos(u, false).1,
                        Func::Sinh => jet_sincos(u, true).0,
                        Func::Cosh => jet_sincos(u, true).1,
                        Func::Sqrt => {
                            if u[0] <= 0.0 {
                                return Err(ExprError::Domain(format!("sqrt not differentiable at {v}")));
                            }
                            jet_sqrt(u)
                        }
                    }
                }
            };
            buf.push(r);
        }
        let out = buf.pop().unwrap();
        if out.iter().any(|x| !x.is_finite()) {
            return Err(ExprError::Domain(format!("non-finite Taylor coefficient at {v}")));
        }
        Ok(out)
    }
}

fn real_pow(x: f64, c: f64, at: f64) -> Result<f64> {
    if c == c.trunc() && c.abs() < 2_147_483_647.0 {
        if c < 0.0 && x == 0.0 {
            return Err(ExprError::Domain(format!("negative power of zero at {at}")));
        }
        Ok(x.powi(c as i32))
    } else {
        if x < 0.0 {
            return Err(ExprError::Domain(format!("non-integer power of a negative value at {at}")));
        }
        if x == 0.0 && c < 0.0 {
            return Err(ExprError::Domain(format!("negative power of zero at {at}")));
        }
        Ok(x.powf(c))
    }
}

fn jet_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n).map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum()).collect()
}

fn jet_div(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n];
    for k in 0..n {
        let mut s = a[k];
        for j in 1..=k {
            s -= b[j] * c[k - j];
        }
        c[k] = s / b[0];
    }
    c
}

fn jet_exp(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut e = vec![0.0; n];
    e[0] = u[0].exp();
    for k in 1..n {
        let s: f64 = (1..=k).map(|j| j as f64 * u[j] * e[k - j]).sum();
        e[k] = s / k as f64;
    }
    e
}

fn jet_sincos(u: &[f64], hyperbolic: bool) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    if hyperbolic {
        s[0] = u[0].sinh();
        c[0] = u[0].cosh();
    } else {
        s[0] = u[0].sin();
        c[0] = u[0].cos();
    }
    let sign = if hyperbolic { 1.0 } else { -1.0 };
    for k in 1..n {
        let mut ss = 0.0;
        let mut cc = 0.0;
        for j in 1..=k {
            let w = j as f64 * u[j];
            ss += w * c[k - j];
            cc += w * s[k - j];
        }
        s[k] = ss / k as f64;
        c[k] = sign * cc / k as f64;
    }
    (s, c)
}

fn jet_sqrt(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut y = vec![0.0; n];
    y[0] = u[0].sqrt();
    for k in 1..n {
        let mut s = u[k];
        for j in 1..k {
            s -= y[j] * y[k - j];
        }
        y[k] = s / (2.0 * y[0]);
    }
    y
}

fn jet_pow(u: &[f64], c: f64, at: f64) -> Result<Vec<f64>> {
    let n = u.len();
    if u[0] == 0.0 {
        if c >= 0.0 && c == c.trunc() {
            // repeated squaring keeps the exact zero structure
            let mut result = vec![0.0; n];
            result[0] = 1.0;
            let mut base = u.to_vec();
            let mut e = c as u64;
            while e > 0 {
                if e & 1 == 1 {
                    result = jet_mul(&result, &base);
                }
                e >>= 1;
                if e > 0 {
                    base = jet_mul(&base, &base);
                }
            }
            return Ok(result);
        }
        return Err(ExprError::Domain(format!("power {c} not differentiable at {at}")));
    }
    let mut y = vec![0.0; n];
    y[0] = real_pow(u[0], c, at)?;
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k {
            s += (c * j as f64 - (k - j) as f64) * u[j] * y[k - j];
        }
        y[k] = s / (k as f64 * u[0]);
    }
    Ok(y)
}
