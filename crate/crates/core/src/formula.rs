//! Evaluation of a written formula, with exact handling of zero and
//! infinite arguments.
//!
//! At ordinary points the expression is evaluated as written. When an
//! argument is `0` or `INF`, the formula is lowered to a rational function
//! once, the limit is taken symbolically for each special argument, and the
//! result is compiled to a polynomial pair that is cached per special mask.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use ampgen_symbolic::{Expr, Limit, Monomial, RatFn, Sym, SymbolicError, NSYMS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("{quantity} has no {variant} row")]
    Unsupported {
        quantity: &'static str,
        variant: &'static str,
    },
    #[error("{0} is not a {1} quantity")]
    WrongDevice(&'static str, &'static str),
    #[error("{variant} requires {symbol} = {expected}, got {got}")]
    PinMismatch {
        variant: &'static str,
        symbol: &'static str,
        expected: &'static str,
        got: f64,
    },
    #[error("expression hits a pole")]
    Pole,
    #[error("value is unbounded at this point")]
    Unbounded,
    #[error("{0} is not a valid resistance")]
    NotAResistance(f64),
    #[error("ill-defined: {0}")]
    IllDefined(&'static str),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pin {
    Zero,
    Inf,
}

impl Pin {
    pub fn holds(self, v: f64) -> bool {
        match self {
            Pin::Zero => v == 0.0,
            Pin::Inf => v.is_infinite() && v > 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pin::Zero => "0",
            Pin::Inf => "inf",
        }
    }
}

#[derive(Clone, Debug)]
struct Compiled {
    num: Vec<(f64, Monomial)>,
    den: Vec<(f64, Monomial)>,
}

impl Compiled {
    fn new(f: &RatFn) -> Self {
        Compiled {
            num: f.num().to_f64_terms(),
            den: f.den().to_f64_terms(),
        }
    }

    fn eval(&self, v: &[f64; NSYMS]) -> Result<f64, EvalError> {
        let sum = |terms: &[(f64, Monomial)]| -> f64 {
            terms.iter().map(|(c, m)| c * m.eval_f64(v)).sum()
        };
        let d = sum(&self.den);
        if d == 0.0 {
            return Err(EvalError::Pole);
        }
        Ok(sum(&self.num) / d)
    }
}

#[derive(Clone, Debug)]
enum Special {
    Finite(Compiled),
    Unbounded,
}

type Mask = (u16, u16);

/// A formula written once, evaluable anywhere in its domain.
pub struct Formula {
    expr: Expr,
    free: Vec<Sym>,
    lowered: OnceLock<Result<RatFn, SymbolicError>>,
    cache: Mutex<HashMap<Mask, Arc<Special>>>,
}

impl std::fmt::Debug for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Formula({})", self.expr)
    }
}

impl Formula {
    pub fn new(expr: Expr) -> Self {
        let mut free = BTreeSet::new();
        for s in expr.symbols() {
            match s {
                Sym::Alpha => {
                    free.insert(Sym::Beta);
                }
                Sym::Rpi => {
                    free.insert(Sym::Beta);
                    free.insert(Sym::Gm);
                }
                s => {
                    free.insert(s);
                }
            }
        }
        Formula {
            expr,
            free: free.into_iter().collect(),
            lowered: OnceLock::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Symbols after eliminating `alpha` and `rpi`.
    pub fn free_symbols(&self) -> &[Sym] {
        &self.free
    }

    /// Exact rational function, with derived symbols eliminated.
    pub fn ratfn(&self) -> Result<RatFn, SymbolicError> {
        self.lowered
            .get_or_init(|| self.expr.to_ratfn().map(|f| f.eliminate_derived()))
            .clone()
    }

    /// Value at `v`, where `v` holds every symbol (derived ones included).
    pub fn eval(&self, v: &[f64; NSYMS]) -> Result<f64, EvalError> {
        let mask = self.mask(v);
        if mask == (0, 0) {
            match self.expr.eval(|s| v[s.index()]) {
                Ok(x) if x.is_finite() => return Ok(x),
                // A removable singularity of the written form.
                _ => {}
            }
        }
        match &*self.special(mask)? {
            Special::Finite(c) => c.eval(v),
            Special::Unbounded => Err(EvalError::Unbounded),
        }
    }

    fn mask(&self, v: &[f64; NSYMS]) -> Mask {
        let mut zero = 0u16;
        let mut inf = 0u16;
        for s in &self.free {
            let x = v[s.index()];
            if x == 0.0 {
                zero |= 1 << s.index();
            } else if x.is_infinite() {
                inf |= 1 << s.index();
            }
        }
        (zero, inf)
    }

    fn special(&self, mask: Mask) -> Result<Arc<Special>, EvalError> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&mask) {
            return Ok(hit.clone());
        }
        let mut f = self.ratfn()?;
        let mut out = None;
        for s in &self.free {
            let bit = 1u16 << s.index();
            let lim = if mask.0 & bit != 0 {
                f.limit_at_zero(*s)
            } else if mask.1 & bit != 0 {
                f.limit_at_infinity(*s)
            } else {
                continue;
            };
            match lim {
                Limit::Finite(g) => f = g,
                Limit::Unbounded => {
                    out = Some(Special::Unbounded);
                    break;
                }
            }
        }
        let special = Arc::new(out.unwrap_or_else(|| Special::Finite(Compiled::new(&f))));
        self.cache
            .lock()
            .expect("cache lock")
            .insert(mask, special.clone());
        Ok(special)
    }

    /// The exact limit form for a set of pinned symbols, in symbol order.
    pub fn limit(&self, pins: &[(Sym, Pin)]) -> Result<Limit, SymbolicError> {
        let mut f = self.ratfn()?;
        let mut pins = pins.to_vec();
        pins.sort_by_key(|(s, _)| *s);
        for (s, pin) in pins {
            let lim = match pin {
                Pin::Zero => f.limit_at_zero(s),
                Pin::Inf => f.limit_at_infinity(s),
            };
            match lim {
                Limit::Finite(g) => f = g,
                Limit::Unbounded => return Ok(Limit::Unbounded),
            }
        }
        Ok(Limit::Finite(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(pairs: &[(Sym, f64)]) -> [f64; NSYMS] {
        let mut v = [f64::NAN; NSYMS];
        for (s, x) in pairs {
            v[s.index()] = *x;
        }
        v
    }

    #[test]
    fn zero_and_infinite_arguments() {
        let rc = Expr::sym(Sym::Rc);
        let rf = Expr::sym(Sym::Rf);
        let gm = Expr::sym(Sym::Gm);
        let f = Formula::new(-(&gm - rf.recip()) * rc.par(&rf));
        let at = |rf: f64| f.eval(&vals(&[(Sym::Gm, 0.01), (Sym::Rc, 1000.0), (Sym::Rf, rf)]));
        assert!((at(f64::INFINITY).unwrap() + 10.0).abs() < 1e-12);
        // RF = 0 shorts output to input: gain 1.
        assert!((at(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((at(5000.0).unwrap() - (-(0.01 - 1.0 / 5000.0) * (5000.0 / 6.0))).abs() < 1e-12);
    }

    #[test]
    fn unbounded_reported() {
        let f = Formula::new(Expr::sym(Sym::Rc) + Expr::sym(Sym::Re));
        let v = vals(&[(Sym::Rc, f64::INFINITY), (Sym::Re, 1.0)]);
        assert_eq!(f.eval(&v), Err(EvalError::Unbounded));
    }

    #[test]
    fn removable_singularity_is_bridged() {
        // (RC^2 - RE^2)/(RC - RE) at RC = RE.
        let rc = Expr::sym(Sym::Rc);
        let re = Expr::sym(Sym::Re);
        let f = Formula::new((&rc * &rc - &re * &re) / (&rc - &re));
        let v = vals(&[(Sym::Rc, 3.0), (Sym::Re, 3.0)]);
        assert_eq!(f.eval(&v), Ok(6.0));
    }
}
