//! Expression trees for printed formulas.
//!
//! A formula is written once as an [`Expr`] and then either evaluated in
//! floating point exactly in the order it is written, or lowered to a
//! [`RatFn`] for exact comparison.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::SymbolicError;
use crate::ratfn::RatFn;
use crate::sym::Sym;

#[derive(Debug)]
pub enum Node {
    Sym(Sym),
    Int(i64),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Par(Expr, Expr),
}

#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

/// A division whose denominator evaluated to exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("expression hits a pole")]
pub struct Pole;

impl Expr {
    pub fn sym(s: Sym) -> Expr {
        Expr(Arc::new(Node::Sym(s)))
    }

    pub fn int(n: i64) -> Expr {
        Expr(Arc::new(Node::Int(n)))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// `self || other`, i.e. `self*other/(self+other)`.
    pub fn par(&self, other: &Expr) -> Expr {
        Expr(Arc::new(Node::Par(self.clone(), other.clone())))
    }

    pub fn recip(&self) -> Expr {
        Expr::int(1) / self
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Sym>) {
        match self.node() {
            Node::Sym(s) => {
                out.insert(*s);
            }
            Node::Int(_) => {}
            Node::Neg(a) => a.collect_symbols(out),
            Node::Add(a, b)
            | Node::Sub(a, b)
            | Node::Mul(a, b)
            | Node::Div(a, b)
            | Node::Par(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    /// Floating-point evaluation in written order.
    pub fn eval<F: Fn(Sym) -> f64 + Copy>(&self, value: F) -> Result<f64, Pole> {
        Ok(match self.node() {
            Node::Sym(s) => value(*s),
            Node::Int(n) => *n as f64,
            Node::Add(a, b) => a.eval(value)? + b.eval(value)?,
            Node::Sub(a, b) => a.eval(value)? - b.eval(value)?,
            Node::Mul(a, b) => a.eval(value)? * b.eval(value)?,
            Node::Neg(a) => -a.eval(value)?,
            Node::Div(a, b) => {
                let d = b.eval(value)?;
                if d == 0.0 {
                    return Err(Pole);
                }
                a.eval(value)? / d
            }
            Node::Par(a, b) => {
                let (x, y) = (a.eval(value)?, b.eval(value)?);
                let s = x + y;
                if s == 0.0 {
                    return Err(Pole);
                }
                x * y / s
            }
        })
    }

    /// Exact lowering. Derived symbols (`ALPHA`, `RPI`) are kept as-is.
    pub fn to_ratfn(&self) -> Result<RatFn, SymbolicError> {
        Ok(match self.node() {
            Node::Sym(s) => RatFn::var(*s),
            Node::Int(n) => RatFn::int(*n),
            Node::Add(a, b) => &a.to_ratfn()? + &b.to_ratfn()?,
            Node::Sub(a, b) => &a.to_ratfn()? - &b.to_ratfn()?,
            Node::Mul(a, b) => &a.to_ratfn()? * &b.to_ratfn()?,
            Node::Neg(a) => -&a.to_ratfn()?,
            Node::Div(a, b) => a.to_ratfn()?.checked_div(&b.to_ratfn()?)?,
            Node::Par(a, b) => a.to_ratfn()?.parallel(&b.to_ratfn()?)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Sym(_) | Node::Int(_) => 4,
            Node::Neg(_) => 3,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Par(..) => 1,
            Node::Add(..) | Node::Sub(..) => 0,
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Sym(s) => write!(f, "{s}"),
            Node::Int(n) => write!(f, "{n}"),
            Node::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 3)
            }
            Node::Add(a, b) => {
                wrap(f, a, 0)?;
                f.write_str(" + ")?;
                wrap(f, b, 1)
            }
            Node::Sub(a, b) => {
                wrap(f, a, 0)?;
                f.write_str(" - ")?;
                wrap(f, b, 1)
            }
            Node::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            Node::Div(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("/")?;
                wrap(f, b, 3)
            }
            Node::Par(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" || ")?;
                wrap(f, b, 2)
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr(Arc::new(Node::$variant(self, rhs)))
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr(Arc::new(Node::$variant(self, rhs.clone())))
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr(Arc::new(Node::$variant(self.clone(), rhs)))
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr(Arc::new(Node::$variant(self.clone(), rhs.clone())))
            }
        }
        impl $tr<i64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                Expr(Arc::new(Node::$variant(self, Expr::int(rhs))))
            }
        }
        impl $tr<i64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                Expr(Arc::new(Node::$variant(self.clone(), Expr::int(rhs))))
            }
        }
        impl $tr<Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr(Arc::new(Node::$variant(Expr::int(self), rhs)))
            }
        }
        impl $tr<&Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr(Arc::new(Node::$variant(Expr::int(self), rhs.clone())))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Arc::new(Node::Neg(self)))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Arc::new(Node::Neg(self.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_lower_agree() {
        let rc = Expr::sym(Sym::Rc);
        let rf = Expr::sym(Sym::Rf);
        let gm = Expr::sym(Sym::Gm);
        let e = -(&gm - rf.recip()) * rc.par(&rf);
        let val = |s: Sym| match s {
            Sym::Rc => 1000.0,
            Sym::Rf => 5000.0,
            Sym::Gm => 0.01,
            _ => f64::NAN,
        };
        let x = e.eval(val).unwrap();
        assert!((x - (-(0.01 - 1.0 / 5000.0) * (1000.0 * 5000.0 / 6000.0))).abs() < 1e-12);
        let r = e.to_ratfn().unwrap();
        assert_eq!(r.symbols(), vec![Sym::Gm, Sym::Rf, Sym::Rc]);
        assert_eq!(e.to_string(), "-(gm - 1/RF)*(RC || RF)");
    }

    #[test]
    fn pole_reported() {
        let e = Expr::int(1) / (Expr::sym(Sym::Rc) - 1);
        assert_eq!(e.eval(|_| 1.0), Err(Pole));
    }
}
