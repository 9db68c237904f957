use std::fmt::{self, Write};

use super::{Link, Node};

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => 0,
        Node::Mul(..) | Node::Div(..) => 1,
        Node::Neg(..) => 2,
        Node::Pow(..) => 3,
        Node::Const(c) if *c < 0.0 => 2,
        _ => 4,
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    // Debug formatting is the shortest string that round-trips
    if c < 0.0 {
        write!(f, "-{:?}", -c)
    } else {
        write!(f, "{c:?}")
    }
}

pub(super) fn write_node(f: &mut fmt::Formatter<'_>, node: &Link, var: &str, parent: u8) -> fmt::Result {
    let prec = precedence(node);
    let wrap = prec < parent;
    if wrap {
        f.write_char('(')?;
    }
    match &**node {
        Node::Const(c) => write_const(f, *c)?,
        Node::Var => f.write_str(var)?,
        Node::Neg(a) => {
            f.write_char('-')?;
            write_node(f, a, var, 3)?;
        }
        Node::Add(a, b) => {
            write_node(f, a, var, 0)?;
            f.write_str(" + ")?;
            write_node(f, b, var, 1)?;
        }
        Node::Sub(a, b) => {
            write_node(f, a, var, 0)?;
            f.write_str(" - ")?;
            write_node(f, b, var, 1)?;
        }
        Node::Mul(a, b) => {
            write_node(f, a, var, 1)?;
            f.write_char('*')?;
            write_node(f, b, var, 2)?;
        }
        Node::Div(a, b) => {
            write_node(f, a, var, 1)?;
            f.write_char('/')?;
            write_node(f, b, var, 3)?;
        }
        Node::Pow(a, c) => {
            write_node(f, a, var, 4)?;
            f.write_char('^')?;
            if *c < 0.0 {
                f.write_char('(')?;
                write_const(f, *c)?;
                f.write_char(')')?;
            } else {
                write_const(f, *c)?;
            }
        }
        Node::Func(func, a) => {
            f.write_str(func.name())?;
            f.write_char('(')?;
            write_node(f, a, var, 0)?;
            f.write_char(')')?;
        }
    }
    if wrap {
        f.write_char(')')?;
    }
    Ok(())
}
