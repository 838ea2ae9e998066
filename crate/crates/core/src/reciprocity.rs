//! Base-emitter reciprocity: `gm -> -gm`, `alpha <-> -beta`, `ro <-> RF`,
//! `RE <-> RB`, with `RC` unchanged.
//!
//! The map keeps `alpha = beta/(beta+1)` (with `beta' = -alpha`,
//! `beta'/(beta'+1) = -beta`), so mapped parameters can still go through
//! the limit forms, which assume that relation.

use std::fmt;

use ampgen_symbolic::{Expr, RatFn, Sym, SymbolicError};

use crate::closed_form::{aux, bjt_eval, open_terminal_equiv, pin_loads, OpenTerminalKind};
use crate::formula::EvalError;
use crate::identity::{derive_quantity, specialize};
use crate::model::{bjt_values, Device, GenParams, LoadSet, Quantity, Variant};
use crate::table::row_for;

/// Image of `(p, loads)` under the reciprocity map. Applying it twice gives
/// back the input exactly.
pub fn reciprocal_params(p: &GenParams, loads: &LoadSet) -> (GenParams, LoadSet) {
    let q = GenParams::from_parts(-p.gm(), -p.beta(), -p.alpha(), loads.r_fb);
    let l = LoadSet {
        r_common_low: loads.r_input_side,
        r_input_side: loads.r_common_low,
        r_top: loads.r_top,
        r_fb: p.ro(),
    };
    (q, l)
}

/// `alpha <-> beta`, `ro <-> RF`, `RE <-> RB`, `gm` kept. Only meaningful for
/// the collector resistance, evaluated as written.
pub fn collapsed_params(p: &GenParams, loads: &LoadSet) -> (GenParams, LoadSet) {
    let q = GenParams::from_parts(p.gm(), p.beta(), p.alpha(), loads.r_fb);
    let l = LoadSet {
        r_common_low: loads.r_input_side,
        r_input_side: loads.r_common_low,
        r_top: loads.r_top,
        r_fb: p.ro(),
    };
    (q, l)
}

/// One side of a reciprocity statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Row(Quantity, Variant),
    /// Base-emitter resistance with the collector open.
    OpenCollectorRbe,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Row(q, v) => write!(f, "{q}({v})"),
            Side::OpenCollectorRbe => write!(f, "{}", OpenTerminalKind::RBeOpenCollector.name()),
        }
    }
}

/// `left` at `(p, loads)` equals `right` at the reciprocal parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReciprocalPair {
    pub id: &'static str,
    pub left: Side,
    pub right: Side,
}

impl fmt::Display for ReciprocalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-> {}", self.left, self.right)
    }
}

const fn pair(id: &'static str, lq: Quantity, lv: Variant, rq: Quantity, rv: Variant) -> ReciprocalPair {
    ReciprocalPair {
        id,
        left: Side::Row(lq, lv),
        right: Side::Row(rq, rv),
    }
}

use Quantity::{AvCb, AvCe, RBase, RCollector, REmitter};
use Variant::{General, NoDegen, NoEmitterDegen, NoFeedback, NoRo, RcInf};

/// The gain pairs, the base/emitter resistance pairs and the collector
/// resistance pairs.
pub const PAIRS: [ReciprocalPair; 12] = [
    pair("gain-general", AvCe, General, AvCb, General),
    pair("gain-no-degen", AvCe, NoDegen, AvCb, NoDegen),
    pair("gain-no-feedback", AvCe, NoFeedback, AvCb, NoRo),
    pair("gain-no-ro", AvCe, NoRo, AvCb, NoFeedback),
    pair("rb-re-general", RBase, General, REmitter, General),
    pair("rb-re-no-degen", RBase, NoDegen, REmitter, NoDegen),
    pair("rb-re-no-feedback", RBase, NoFeedback, REmitter, NoRo),
    pair("rb-re-no-ro", RBase, NoRo, REmitter, NoFeedback),
    pair("rb-re-open-collector", RBase, RcInf, REmitter, RcInf),
    pair("rc-general", RCollector, General, RCollector, General),
    pair("rc-degen-swap", RCollector, NoDegen, RCollector, NoEmitterDegen),
    pair("rc-no-feedback", RCollector, NoFeedback, RCollector, NoRo),
];

/// The open-collector base-emitter resistance is its own reciprocal.
pub const SELF_RBE: ReciprocalPair = ReciprocalPair {
    id: "rbe-self",
    left: Side::OpenCollectorRbe,
    right: Side::OpenCollectorRbe,
};

/// Every statement checked by this module.
pub fn all_pairs() -> Vec<ReciprocalPair> {
    let mut v = PAIRS.to_vec();
    v.push(SELF_RBE);
    v
}

fn eval_side(side: Side, p: &GenParams, loads: &LoadSet) -> Result<f64, EvalError> {
    match side {
        Side::Row(q, v) => bjt_eval(q, v, p, loads),
        Side::OpenCollectorRbe => {
            open_terminal_equiv(OpenTerminalKind::RBeOpenCollector, &Device::Bjt(*p), loads.r_fb)
        }
    }
}

/// Outcome of one numeric pair evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCheck {
    pub left: f64,
    pub right: f64,
    pub rel_err: f64,
    pub holds: bool,
}

/// Relative error with an absolute floor of `1e-15`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / b.abs().max(1e-15)
}

/// Numeric check at one point. Loads fixed by the left row label are forced
/// first. A pole on either side is returned as `Err(EvalError::Pole)`.
pub fn check_pair(pair: &ReciprocalPair, p: &GenParams, loads: &LoadSet) -> Result<PairCheck, EvalError> {
    let (p, loads) = match pair.left {
        Side::Row(q, v) => pin_loads(q, v, p, loads),
        Side::OpenCollectorRbe => (*p, *loads),
    };
    let left = eval_side(pair.left, &p, &loads)?;
    let (rp, rl) = reciprocal_params(&p, &loads);
    let right = eval_side(pair.right, &rp, &rl)?;
    let rel_err = rel_err(left, right);
    Ok(PairCheck {
        left,
        right,
        rel_err,
        holds: rel_err < 1e-9,
    })
}

/// Numeric check of the collapsed map on the general collector row.
pub fn check_collapsed(p: &GenParams, loads: &LoadSet) -> Result<PairCheck, EvalError> {
    let row = row_for(RCollector, General).expect("general collector row");
    let eval = |p: &GenParams, l: &LoadSet| {
        let vals = bjt_values(p, l);
        row.expr().eval(|s| vals[s.index()]).map_err(|_| EvalError::Pole)
    };
    let left = eval(p, loads)?;
    let (cp, cl) = collapsed_params(p, loads);
    let right = eval(&cp, &cl)?;
    let rel_err = rel_err(left, right);
    Ok(PairCheck {
        left,
        right,
        rel_err,
        holds: rel_err < 1e-9,
    })
}

fn swap_rules() -> Vec<(Sym, RatFn)> {
    vec![
        (Sym::Ro, RatFn::var(Sym::Rf)),
        (Sym::Rf, RatFn::var(Sym::Ro)),
        (Sym::Re, RatFn::var(Sym::Rb)),
        (Sym::Rb, RatFn::var(Sym::Re)),
    ]
}

fn rpi_rule() -> Result<Vec<(Sym, RatFn)>, SymbolicError> {
    Ok(vec![(Sym::Rpi, RatFn::var(Sym::Beta).checked_div(&RatFn::var(Sym::Gm))?)])
}

/// Applies the map to `f`, which may contain `alpha` and `rpi`, and
/// eliminates `alpha` afterwards.
pub fn map_ratfn(f: &RatFn) -> Result<RatFn, SymbolicError> {
    let f = f.substitute(&rpi_rule()?);
    let mut rules = swap_rules();
    rules.push((Sym::Gm, -&RatFn::var(Sym::Gm)));
    rules.push((Sym::Alpha, -&RatFn::var(Sym::Beta)));
    rules.push((Sym::Beta, -&RatFn::var(Sym::Alpha)));
    Ok(f.substitute(&rules).eliminate_derived())
}

/// Applies the collapsed map, keeping `alpha` and `beta` as separate symbols.
pub fn collapsed_ratfn(f: &RatFn) -> Result<RatFn, SymbolicError> {
    let f = f.substitute(&rpi_rule()?);
    let mut rules = swap_rules();
    rules.push((Sym::Alpha, RatFn::var(Sym::Beta)));
    rules.push((Sym::Beta, RatFn::var(Sym::Alpha)));
    Ok(f.substitute(&rules))
}

fn written(side: Side) -> Expr {
    match side {
        Side::Row(q, v) => row_for(q, v).expect("listed pair row").expr().clone(),
        Side::OpenCollectorRbe => aux().rbe_open_collector.expr().clone(),
    }
}

/// Derivation of one side from the nodal equations.
fn derived(side: Side) -> Result<RatFn, EvalError> {
    let (q, pins, minus) = match side {
        Side::Row(q, v) => (q, row_for(q, v).expect("listed pair row").pins.clone(), None),
        Side::OpenCollectorRbe => {
            let pins = row_for(RBase, RcInf).expect("open-collector row").pins.clone();
            (RBase, pins, Some(Sym::Re))
        }
    };
    let f = specialize(&derive_quantity(q)?, &pins)
        .finite()
        .ok_or(EvalError::Unbounded)?;
    Ok(match minus {
        Some(s) => &f - &RatFn::var(s),
        None => f,
    })
}

/// Symbolic verdicts for one pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicPairCheck {
    /// The written rows satisfy the relation.
    pub rows: bool,
    /// The nodal derivations satisfy the relation.
    pub derivations: bool,
}

impl SymbolicPairCheck {
    pub fn holds(&self) -> bool {
        self.rows && self.derivations
    }
}

pub fn symbolic_check_pair(pair: &ReciprocalPair) -> Result<SymbolicPairCheck, EvalError> {
    let left = written(pair.left).to_ratfn()?;
    let right = written(pair.right).to_ratfn()?.eliminate_derived();
    let rows = map_ratfn(&left)?.equals(&right);
    let derivations = map_ratfn(&derived(pair.left)?)?.equals(&derived(pair.right)?);
    Ok(SymbolicPairCheck { rows, derivations })
}

/// The collapsed map leaves the written general collector row unchanged.
pub fn symbolic_check_collapsed() -> Result<bool, EvalError> {
    let f = written(Side::Row(RCollector, General))
        .to_ratfn()?
        .substitute(&rpi_rule()?);
    Ok(collapsed_ratfn(&f)?.equals(&f))
}

/// The map applied twice is the identity on `f`.
pub fn symbolic_involution(f: &RatFn) -> Result<bool, SymbolicError> {
    Ok(map_ratfn(&map_ratfn(f)?)?.equals(&f.eliminate_derived()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExtResistance;

    fn r(x: f64) -> ExtResistance {
        ExtResistance::ohms(x)
    }

    #[test]
    fn mechanical_application() {
        let p = GenParams::bjt(10e-3, 100.0, r(10e3)).unwrap();
        let loads = LoadSet::new(r(100.0), r(0.0), r(1e3), r(5e3));
        let (q, l) = reciprocal_params(&p, &loads);
        assert_eq!(q.gm(), -10e-3);
        assert_eq!(q.alpha(), -100.0);
        assert_eq!(q.beta(), -p.alpha());
        assert_eq!(q.ro(), r(5e3));
        assert_eq!(l.r_fb, r(10e3));
        assert_eq!(l.r_common_low, r(0.0));
        assert_eq!(l.r_input_side, r(100.0));
        assert_eq!(l.r_top, r(1e3));
        // r_pi' = alpha r_m.
        assert!((q.r_pi() - p.alpha() / p.gm()).abs() < 1e-12);
        let (p2, l2) = reciprocal_params(&q, &l);
        assert_eq!((p2, l2), (p, loads));
    }

    #[test]
    fn gain_pair_at_reference_point() {
        let p = GenParams::bjt(10e-3, 100.0, r(10e3)).unwrap();
        let loads = LoadSet::new(r(100.0), r(220.0), r(1e3), r(5e3));
        let c = check_pair(&PAIRS[0], &p, &loads).unwrap();
        assert!(c.holds, "{c:?}");
    }

    #[test]
    fn every_pair_holds_symbolically() {
        for pair in all_pairs() {
            let c = symbolic_check_pair(&pair).unwrap();
            assert!(c.holds(), "{pair}: {c:?}");
        }
        assert!(symbolic_check_collapsed().unwrap());
    }

    #[test]
    fn wrong_pairing_fails() {
        let bad = pair("bad", AvCe, NoFeedback, AvCb, NoFeedback);
        assert!(!symbolic_check_pair(&bad).unwrap().holds());
    }

    #[test]
    fn symbolic_map_is_an_involution() {
        for q in [AvCe, RBase, RCollector] {
            assert!(symbolic_involution(&derive_quantity(q).unwrap()).unwrap());
        }
    }
}
