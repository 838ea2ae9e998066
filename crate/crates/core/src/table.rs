//! Every table row, written once as an expression tree in the same shape
//! as it is printed.

use std::sync::OnceLock;

use ampgen_symbolic::{Expr, Sym};

use crate::formula::{Formula, Pin};
use crate::model::{Quantity, Variant};

pub struct Row {
    pub quantity: Quantity,
    pub variant: Variant,
    pub label: &'static str,
    /// Symbols the row label fixes at `0` or `INF`.
    pub pins: Vec<(Sym, Pin)>,
    pub formula: Formula,
    /// The same row in the other printed arrangement(s).
    pub alternates: Vec<Expr>,
}

impl Row {
    pub fn expr(&self) -> &Expr {
        self.formula.expr()
    }
}

/// Shorthand symbols for writing formulas.
pub(crate) struct S {
    pub gm: Expr,
    pub beta: Expr,
    pub alpha: Expr,
    pub rpi: Expr,
    pub rm: Expr,
    pub ro: Expr,
    pub rf: Expr,
    pub re: Expr,
    pub rb: Expr,
    pub rc: Expr,
    pub gmb: Expr,
    pub rg: Expr,
    pub rd: Expr,
    pub rs: Expr,
}

impl S {
    pub fn new() -> Self {
        let gm = Expr::sym(Sym::Gm);
        S {
            rm: gm.recip(),
            gm,
            beta: Expr::sym(Sym::Beta),
            alpha: Expr::sym(Sym::Alpha),
            rpi: Expr::sym(Sym::Rpi),
            ro: Expr::sym(Sym::Ro),
            rf: Expr::sym(Sym::Rf),
            re: Expr::sym(Sym::Re),
            rb: Expr::sym(Sym::Rb),
            rc: Expr::sym(Sym::Rc),
            gmb: Expr::sym(Sym::Gmb),
            rg: Expr::sym(Sym::Rg),
            rd: Expr::sym(Sym::Rd),
            rs: Expr::sym(Sym::Rs),
        }
    }
}

fn one() -> Expr {
    Expr::int(1)
}

fn row(
    quantity: Quantity,
    variant: Variant,
    label: &'static str,
    pins: &[(Sym, Pin)],
    expr: Expr,
    alternates: Vec<Expr>,
) -> Row {
    Row {
        quantity,
        variant,
        label,
        pins: pins.to_vec(),
        formula: Formula::new(expr),
        alternates,
    }
}

const RE0: (Sym, Pin) = (Sym::Re, Pin::Zero);
const RB0: (Sym, Pin) = (Sym::Rb, Pin::Zero);
const RF0: (Sym, Pin) = (Sym::Rf, Pin::Zero);
const RC0: (Sym, Pin) = (Sym::Rc, Pin::Zero);
const RF_INF: (Sym, Pin) = (Sym::Rf, Pin::Inf);
const RO_INF: (Sym, Pin) = (Sym::Ro, Pin::Inf);
const RE_INF: (Sym, Pin) = (Sym::Re, Pin::Inf);
const RC_INF: (Sym, Pin) = (Sym::Rc, Pin::Inf);

fn common_emitter(s: &S) -> Vec<Row> {
    use Quantity::AvCe as Q;
    let S {
        gm,
        beta,
        alpha,
        ro,
        rf,
        re,
        rc,
        ..
    } = s;
    let degen = one() + gm * re / alpha + re / ro;
    let gm_factor = (one() - re / (beta * ro)) / &degen;
    let ro_factor = (one() + gm * re / beta) / &degen;
    vec![
        row(
            Q,
            Variant::General,
            "general",
            &[],
            -((gm * &gm_factor - rf.recip()) / (rc.par(rf).recip() + ro.recip() * &ro_factor)),
            vec![],
        ),
        row(
            Q,
            Variant::NoDegen,
            "no degeneration (RE = 0)",
            &[RE0],
            -(gm - rf.recip()) * rc.par(rf).par(ro),
            vec![],
        ),
        row(
            Q,
            Variant::NoFeedback,
            "no feedback (RF -> inf)",
            &[RF_INF],
            -((gm * &gm_factor) / (rc.recip() + ro.recip() * &ro_factor)),
            vec![],
        ),
        row(
            Q,
            Variant::NoRo,
            "neglecting output resistance (ro -> inf)",
            &[RO_INF],
            -(gm / (one() + gm * re / alpha) - rf.recip()) * rc.par(rf),
            vec![],
        ),
    ]
}

fn common_base(s: &S) -> Vec<Row> {
    use Quantity::AvCb as Q;
    let S {
        gm,
        beta,
        alpha,
        ro,
        rf,
        rb,
        rc,
        ..
    } = s;
    let degen = one() + gm * rb / beta + rb / rf;
    let gm_factor = (one() + rb / (alpha * rf)) / &degen;
    let rf_factor = (one() + gm * rb / alpha) / &degen;
    vec![
        row(
            Q,
            Variant::General,
            "general",
            &[],
            (gm * &gm_factor + ro.recip()) / (rc.par(ro).recip() + rf.recip() * &rf_factor),
            vec![],
        ),
        row(
            Q,
            Variant::NoDegen,
            "no base degeneration (RB = 0)",
            &[RB0],
            (gm + ro.recip()) * rc.par(rf).par(ro),
            vec![],
        ),
        row(
            Q,
            Variant::NoFeedback,
            "no feedback (RF -> inf)",
            &[RF_INF],
            (gm / (one() + gm * rb / beta) + ro.recip()) * rc.par(ro),
            vec![],
        ),
        row(
            Q,
            Variant::NoRo,
            "neglecting output resistance (ro -> inf)",
            &[RO_INF],
            (gm * &gm_factor) / (rc.recip() + rf.recip() * &rf_factor),
            vec![],
        ),
    ]
}

fn common_collector(s: &S) -> Vec<Row> {
    use Quantity::AvCc as Q;
    let S {
        gm,
        beta,
        alpha,
        rm,
        ro,
        rf,
        re,
        rc,
        ..
    } = s;
    let x = gm / alpha * ro + gm / beta * rc.par(rf);
    let divider = rc / (rc + rf);
    let g_par = gm / alpha * re.par(ro);
    vec![
        row(
            Q,
            Variant::General,
            "general",
            &[],
            (&x + &divider) / (&x + (ro + rc.par(rf)) / re + 1),
            vec![],
        ),
        row(
            Q,
            Variant::ReInf,
            "current-source load (RE -> inf)",
            &[RE_INF],
            (&x + &divider) / (&x + 1),
            vec![],
        ),
        row(
            Q,
            Variant::RfZero,
            "diode-connected (RF = 0)",
            &[RF0],
            (&g_par + re / (re + ro)) / (&g_par + 1),
            vec![re / (re + (alpha * rm).par(ro))],
        ),
        row(
            Q,
            Variant::RcZero,
            "collector shorted to supply (RC = 0)",
            &[RC0],
            &g_par / (&g_par + 1),
            vec![],
        ),
        row(
            Q,
            Variant::NoRo,
            "neglecting output resistance (ro -> inf)",
            &[RO_INF],
            (gm * re / alpha) / (gm * re / alpha + 1),
            vec![],
        ),
    ]
}

fn into_base(s: &S) -> Vec<Row> {
    use Quantity::RBase as Q;
    let S {
        gm,
        beta,
        alpha,
        rpi,
        rm,
        ro,
        rf,
        re,
        rc,
        ..
    } = s;
    let general = (rf
        + rc.par(&(re + ro))
        + gm * (ro / alpha + rc.par(rf) / beta) * (re * (rc + rf) / (rc + re + ro)))
        / (one() + gm * rf / beta + gm * (rc + re).par(ro) / alpha);
    let inner = one() + gm * re / alpha;
    vec![
        row(Q, Variant::General, "general", &[], general, vec![]),
        row(
            Q,
            Variant::NoDegen,
            "no emitter degeneration (RE = 0)",
            &[RE0],
            rpi.par(&((rf + rc.par(ro)) / (one() + gm * rc.par(ro)))),
            vec![(alpha * rm).par(&((rf + rc.par(ro)) / (one() - gm * rf)))],
        ),
        row(
            Q,
            Variant::NoFeedback,
            "no feedback (RF -> inf)",
            &[RF_INF],
            rpi + re * (((beta + 1) * ro + rc) / (ro + rc + re)),
            vec![],
        ),
        row(
            Q,
            Variant::NoRo,
            "neglecting output resistance (ro -> inf)",
            &[RO_INF],
            (rpi + (beta + 1) * re).par(&((rc + rf) / (one() + gm * rc / &inner))),
            vec![(alpha * rm + re).par(&((rc + rf) / (one() - gm * rf / &inner)))],
        ),
        row(
            Q,
            Variant::ReInf,
            "current-source bias at emitter (RE -> inf)",
            &[RE_INF],
            (rpi + (beta + 1) * ro).par(rf) + rc,
            vec![],
        ),
        row(
            Q,
            Variant::RcInf,
            "current-source bias at collector (RC -> inf)",
            &[RC_INF],
            rpi.par(&((rf + ro) / (one() + gm * ro))) + re,
            vec![(alpha * rm).par(&((rf + ro) / (one() - gm * rf))) + re],
        ),
    ]
}

fn into_emitter(s: &S) -> Vec<Row> {
    use Quantity::REmitter as Q;
    let S {
        gm,
        beta,
        alpha,
        rpi,
        rm,
        ro,
        rf,
        rb,
        rc,
        ..
    } = s;
    let general = (ro
        + rc.par(&(rb + rf))
        + gm * (rf / beta + rc.par(ro) / alpha) * (rb * (rc + ro) / (rb + rc + rf)))
        / (one() + gm * ro / alpha + gm * (rb + rc).par(rf) / beta);
    let inner = one() + gm * rb / beta;
    vec![
        row(Q, Variant::General, "general", &[], general, vec![]),
        row(
            Q,
            Variant::NoDegen,
            "no base degeneration (RB = 0)",
            &[RB0],
            rpi.par(&((ro + rc.par(rf)) / (one() + gm * ro))),
            vec![(alpha * rm).par(&((ro + rc.par(rf)) / (one() - gm * rc.par(rf))))],
        ),
        row(
            Q,
            Variant::NoFeedback,
            "no feedback (RF -> inf)",
            &[RF_INF],
            (rpi + rb).par(&((rc + ro) / (one() + gm * ro / &inner))),
            vec![(alpha * rm + rb / (beta + 1)).par(&((rc + ro) / (one() - gm * rc / &inner)))],
        ),
        row(
            Q,
            Variant::NoRo,
            "neglecting output resistance (ro -> inf)",
            &[RO_INF],
            alpha * rm + rb * (rc + rf / (beta + 1)) / (rb + rc + rf),
            vec![],
        ),
        row(
            Q,
            Variant::RcInf,
            "current-source bias at collector (RC -> inf)",
            &[RC_INF],
            rpi.par(&((rf + ro) / (one() + gm * ro))) + rb,
            vec![(alpha * rm).par(&((rf + ro) / (one() - gm * rf))) + rb],
        ),
    ]
}

fn into_collector(s: &S) -> Vec<Row> {
    use Quantity::RCollector as Q;
    let S {
        gm,
        beta,
        alpha,
        rpi,
        ro,
        rf,
        re,
        rb,
        ..
    } = s;
    let general = ((ro + re + gm * ro * re / alpha) * ((rb + rf) / (ro + rf))
        + gm * rb * rf / beta * ((ro + re) / (ro + rf)))
        / (one() + (one() + gm * ro / alpha + gm * rf / beta) * ((rb + re) / (ro + rf)));
    vec![
        row(Q, Variant::General, "general", &[], general, vec![]),
        row(
            Q,
            Variant::NoDegen,
            "no base degeneration (RB = 0)",
            &[RB0],
            rf.par(&((ro + re + gm * ro * re / alpha) / (one() + gm * re / beta))),
            vec![],
        ),
        row(
            Q,
            Variant::NoEmitterDegen,
            "no emitter degeneration (RE = 0)",
            &[RE0],
            ro.par(&((rb + rf + gm * rb * rf / beta) / (one() + gm * rb / alpha))),
            vec![],
        ),
        row(
            Q,
            Variant::NoFeedback,
            "no feedback (RF -> inf)",
            &[RF_INF],
            ((ro + re) * (one() + gm * rb / beta) + gm * ro * re / alpha)
                / (one() + gm * (rb + re) / beta),
            vec![],
        ),
        row(
            Q,
            Variant::NoRo,
            "neglecting output resistance (ro -> inf)",
            &[RO_INF],
            ((rb + rf) * (one() + gm * re / alpha) + gm * rb * rf / beta)
                / (one() + gm * (rb + re) / alpha),
            vec![],
        ),
        row(
            Q,
            Variant::ReInf,
            "current-source bias at emitter (RE -> inf)",
            &[RE_INF],
            (rpi + (beta + 1) * ro).par(rf) + rb,
            vec![],
        ),
    ]
}

fn mos(s: &S) -> Vec<Row> {
    let S {
        gm,
        rm,
        ro,
        rf,
        gmb,
        rg,
        rd,
        rs,
        ..
    } = s;
    let gsum = gm + gmb;
    let degen = one() / (one() + &gsum * rs + rs / ro);
    let rmb = gmb.recip();
    let gate_den = one() + gm * ro * (one() + rf / rd);
    let gate_printed =
        rf + rd.par(&((ro + rs + gm * ro * rs * (one() + gmb / gm - rf / rs)) / &gate_den));
    let gate_expanded =
        rf + rd.par(&((ro + rs + gm * ro * rs * (one() + gmb / gm) - gm * ro * rf) / &gate_den));
    let general = |q, e, alts| row(q, Variant::General, "general", &[], e, alts);
    vec![
        general(
            Quantity::AvCs,
            -((gm * &degen - rf.recip()) / (rd.par(rf).recip() + ro.recip() * &degen)),
            vec![],
        ),
        general(
            Quantity::AvCg,
            (&gsum + ro.recip()) / (rd.par(ro).recip() + (one() + gm * rg) / (rg + rf)),
            vec![],
        ),
        general(
            Quantity::AvCd,
            (gm * ro + rd / (rd + rf)) / (&gsum * ro + (ro + rd.par(rf)) / rs + 1),
            vec![],
        ),
        // The printed arrangement divides by RS; the expanded one does not.
        general(Quantity::RGate, gate_expanded, vec![gate_printed]),
        general(
            Quantity::RSource,
            rm.par(&rmb).par(ro)
                + rd / (rg + rd + rf) * (((one() + gm * ro) * rg + rf) / (one() + &gsum * ro)),
            vec![],
        ),
        general(
            Quantity::RDrain,
            (rg + rf).par(&((ro + rs + &gsum * ro * rs) / (one() + gm * ro * (rg / (rg + rf))))),
            vec![],
        ),
    ]
}

fn build() -> Vec<Row> {
    let s = S::new();
    let mut rows = Vec::new();
    rows.extend(common_emitter(&s));
    rows.extend(common_base(&s));
    rows.extend(common_collector(&s));
    rows.extend(into_base(&s));
    rows.extend(into_emitter(&s));
    rows.extend(into_collector(&s));
    rows.extend(mos(&s));
    rows
}

/// All rows, in table order.
pub fn rows() -> &'static [Row] {
    static ROWS: OnceLock<Vec<Row>> = OnceLock::new();
    ROWS.get_or_init(build)
}

pub fn row_for(q: Quantity, v: Variant) -> Option<&'static Row> {
    rows().iter().find(|r| r.quantity == q && r.variant == v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_variant_lists() {
        let mut special = 0;
        for q in Quantity::ALL {
            for v in q.variants() {
                let r = row_for(q, *v).expect("row present");
                assert_eq!(r.pins.is_empty(), *v == Variant::General);
                if *v != Variant::General {
                    special += 1;
                }
                for (s, _) in &r.pins {
                    assert!(!r.expr().symbols().contains(s), "{q} {v} mentions {s}");
                }
            }
        }
        assert_eq!(special, 24);
        assert_eq!(rows().len(), 36);
    }

    #[test]
    fn rows_use_only_present_loads() {
        for r in rows() {
            let loads = r.quantity.load_syms();
            for s in r.expr().symbols() {
                if s.is_resistance() && !matches!(s, Sym::Ro | Sym::Rpi) {
                    assert!(loads.contains(&s), "{} uses {s}", r.quantity);
                }
            }
        }
    }

    #[test]
    fn printed_shape_of_a_row() {
        let r = row_for(Quantity::AvCe, Variant::NoDegen).unwrap();
        assert_eq!(r.expr().to_string(), "-(gm - 1/RF)*(RC || RF || ro)");
    }
}
