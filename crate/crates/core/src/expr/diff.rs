use std::collections::HashMap;
use std::sync::Arc;

use super::{Expression, ExprError, Func, Link, Node, Result};

pub const DEFAULT_MAX_ORDER: usize = 200;
const NODE_LIMIT: usize = 2_000_000;

/// Constructors with light simplification: constant folding, identities for
/// 0 and 1, and flattening of nested integer powers.
pub(crate) mod build {
    use super::*;

    pub fn konst(c: f64) -> Link {
        Arc::new(Node::Const(c))
    }

    pub fn var() -> Link {
        Arc::new(Node::Var)
    }

    pub fn neg(a: Link) -> Link {
        match &*a {
            Node::Const(c) => konst(-c),
            Node::Neg(inner) => inner.clone(),
            Node::Mul(l, r) => match l.as_const() {
                Some(c) => mul(konst(-c), r.clone()),
                None => Arc::new(Node::Neg(a)),
            },
            _ => Arc::new(Node::Neg(a)),
        }
    }

    pub fn add(a: Link, b: Link) -> Link {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => konst(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => match &*b {
                Node::Neg(inner) => Arc::new(Node::Sub(a, inner.clone())),
                _ => Arc::new(Node::Add(a, b)),
            },
        }
    }

    pub fn sub(a: Link, b: Link) -> Link {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => konst(x - y),
            (_, Some(y)) if y == 0.0 => a,
            (Some(x), _) if x == 0.0 => neg(b),
            _ => match &*b {
                Node::Neg(inner) => Arc::new(Node::Add(a, inner.clone())),
                _ => Arc::new(Node::Sub(a, b)),
            },
        }
    }

    pub fn mul(a: Link, b: Link) -> Link {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => konst(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => konst(0.0),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            (Some(x), _) if x == -1.0 => neg(b),
            (_, Some(y)) if y == -1.0 => neg(a),
            (None, Some(_)) => mul(b, a),
            (Some(x), None) => match &*b {
                Node::Mul(l, r) => match l.as_const() {
                    Some(y) => mul(konst(x * y), r.clone()),
                    None => Arc::new(Node::Mul(a, b)),
                },
                Node::Neg(inner) => mul(konst(-x), inner.clone()),
                _ => Arc::new(Node::Mul(a, b)),
            },
            (None, None) => match (&*a, &*b) {
                (Node::Neg(l), Node::Neg(r)) => mul(l.clone(), r.clone()),
                (Node::Neg(l), _) => neg(mul(l.clone(), b)),
                (_, Node::Neg(r)) => neg(mul(a, r.clone())),
                (Node::Mul(l, r), _) if l.as_const().is_some() => mul(l.clone(), mul(r.clone(), b)),
                (_, Node::Mul(l, r)) if l.as_const().is_some() => mul(l.clone(), mul(a, r.clone())),
                _ => Arc::new(Node::Mul(a, b)),
            },
        }
    }

    pub fn div(a: Link, b: Link) -> Link {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != 0.0 => konst(x / y),
            (Some(x), _) if x == 0.0 => konst(0.0),
            (_, Some(y)) if y == 1.0 => a,
            (_, Some(y)) if y != 0.0 => mul(konst(1.0 / y), a),
            _ => Arc::new(Node::Div(a, b)),
        }
    }

    pub fn pow(a: Link, c: f64) -> Link {
        if c == 0.0 {
            return konst(1.0);
        }
        if c == 1.0 {
            return a;
        }
        match &*a {
            Node::Const(x) => konst(x.powf(c)),
            Node::Pow(inner, e) if c == c.trunc() => pow(inner.clone(), e * c),
            _ => Arc::new(Node::Pow(a, c)),
        }
    }

    pub fn func(f: Func, a: Link) -> Link {
        match a.as_const() {
            Some(c) => konst(f.apply(c)),
            None => Arc::new(Node::Func(f, a)),
        }
    }
}

use build::*;

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Const(u64),
    Var,
    Neg(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, u64),
    Func(Func, usize),
}

/// Hash-consing table: structurally equal subtrees share one node, so the
/// pointer memo in `Differ` sees repeated subexpressions across passes.
#[derive(Default)]
struct Interner {
    table: HashMap<Key, Link>,
    canonical: HashMap<*const Node, Link>,
}

impl Interner {
    fn intern(&mut self, e: &Link) -> Link {
        if self.canonical.contains_key(&Arc::as_ptr(e)) {
            return e.clone();
        }
        let p = |l: &Link| Arc::as_ptr(l) as usize;
        let (key, node) = match &**e {
            Node::Const(c) => (Key::Const(c.to_bits()), e.clone()),
            Node::Var => (Key::Var, e.clone()),
            Node::Neg(a) => {
                let a = self.intern(a);
                (Key::Neg(p(&a)), Arc::new(Node::Neg(a)))
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                let (pa, pb) = (p(&a), p(&b));
                match &**e {
                    Node::Add(..) => (Key::Add(pa, pb), Arc::new(Node::Add(a, b))),
                    Node::Sub(..) => (Key::Sub(pa, pb), Arc::new(Node::Sub(a, b))),
                    Node::Mul(..) => (Key::Mul(pa, pb), Arc::new(Node::Mul(a, b))),
                    _ => (Key::Div(pa, pb), Arc::new(Node::Div(a, b))),
                }
            }
            Node::Pow(a, c) => {
                let a = self.intern(a);
                (Key::Pow(p(&a), c.to_bits()), Arc::new(Node::Pow(a, *c)))
            }
            Node::Func(f, a) => {
                let a = self.intern(a);
                (Key::Func(*f, p(&a)), Arc::new(Node::Func(*f, a)))
            }
        };
        if let Some(found) = self.table.get(&key) {
            return found.clone();
        }
        self.canonical.insert(Arc::as_ptr(&node), node.clone());
        self.table.insert(key, node.clone());
        node
    }
}

struct Differ {
    interner: Interner,
    memo: HashMap<*const Node, (Link, Link)>,
}

impl Differ {
    /// Derivative of an interned node; the result is interned too.
    fn d(&mut self, e: &Link) -> Link {
        let key = Arc::as_ptr(e);
        if let Some((_, v)) = self.memo.get(&key) {
            return v.clone();
        }
        let out = match &**e {
            Node::Const(_) => konst(0.0),
            Node::Var => konst(1.0),
            Node::Neg(a) => neg(self.d(a)),
            Node::Add(a, b) => add(self.d(a), self.d(b)),
            Node::Sub(a, b) => sub(self.d(a), self.d(b)),
            Node::Mul(a, b) => {
                let da = self.d(a);
                let db = self.d(b);
                add(mul(da, b.clone()), mul(a.clone(), db))
            }
            Node::Div(a, b) => {
                let da = self.d(a);
                let db = self.d(b);
                if db.as_const() == Some(0.0) {
                    div(da, b.clone())
                } else {
                    // (a/b)' = (a' - (a/b) b') / b keeps the denominator from squaring
                    div(sub(da, mul(e.clone(), db)), b.clone())
                }
            }
            Node::Pow(a, c) => {
                let da = self.d(a);
                mul(mul(konst(*c), pow(a.clone(), c - 1.0)), da)
            }
            Node::Func(f, a) => {
                let da = self.d(a);
                let outer = match f {
                    Func::Exp => e.clone(),
                    Func::Sin => func(Func::Cos, a.clone()),
                    Func::Cos => neg(func(Func::Sin, a.clone())),
                    Func::Sinh => func(Func::Cosh, a.clone()),
                    Func::Cosh => func(Func::Sinh, a.clone()),
                    Func::Sqrt => return self.store(e, div(da, mul(konst(2.0), e.clone()))),
                };
                mul(outer, da)
            }
        };
        self.store(e, out)
    }

    fn store(&mut self, e: &Link, out: Link) -> Link {
        let out = self.interner.intern(&out);
        // keep the source alive so its address is not reused
        self.memo.insert(Arc::as_ptr(e), (e.clone(), out.clone()));
        out
    }
}

pub(super) fn differentiate(e: &Expression, order: usize, max_order: usize) -> Result<Expression> {
    if order > max_order {
        return Err(ExprError::OrderLimit { requested: order, max: max_order });
    }
    let mut differ = Differ { interner: Interner::default(), memo: HashMap::new() };
    let mut root = differ.interner.intern(e.root());
    let mut cur = e.clone();
    for _ in 0..order {
        root = differ.d(&root);
        cur = Expression::from_node(root.clone(), e.var());
        if cur.node_count() > NODE_LIMIT {
            return Err(ExprError::Growth(NODE_LIMIT));
        }
    }
    Ok(cur)
}
