//! Evaluation of the table rows and of the auxiliary decompositions.

use std::sync::OnceLock;

use ampgen_symbolic::{Expr, Sym, NSYMS};

use crate::formula::{EvalError, Formula, Pin};
use crate::model::{
    bjt_values, mos_values, Device, ExtResistance, GenParams, LoadRole, LoadSet, MosParams,
    Quantity, Variant,
};
use crate::table::{row_for, Row, S};

fn row_checked(q: Quantity, v: Variant) -> Result<&'static Row, EvalError> {
    row_for(q, v).ok_or(EvalError::Unsupported {
        quantity: q.name(),
        variant: v.name(),
    })
}

fn check_pins(row: &Row, vals: &[f64; NSYMS]) -> Result<(), EvalError> {
    for (s, pin) in &row.pins {
        let got = vals[s.index()];
        if !pin.holds(got) {
            return Err(EvalError::PinMismatch {
                variant: row.variant.name(),
                symbol: s.name(),
                expected: pin.name(),
                got,
            });
        }
    }
    Ok(())
}

/// Evaluates one bipolar table row. Loads fixed by the row label must
/// already hold the fixed value; anything else is a [`EvalError::PinMismatch`].
pub fn bjt_eval(q: Quantity, v: Variant, p: &GenParams, loads: &LoadSet) -> Result<f64, EvalError> {
    if q.is_mos() {
        return Err(EvalError::WrongDevice(q.name(), "bipolar"));
    }
    let row = row_checked(q, v)?;
    let vals = bjt_values(p, loads);
    check_pins(row, &vals)?;
    row.formula.eval(&vals)
}

/// Evaluates the MOS table row for `q`.
pub fn mos_eval(q: Quantity, p: &MosParams, loads: &LoadSet) -> Result<f64, EvalError> {
    if !q.is_mos() {
        return Err(EvalError::WrongDevice(q.name(), "MOS"));
    }
    let row = row_checked(q, Variant::General)?;
    row.formula.eval(&mos_values(p, loads))
}

/// Forces the loads a row label fixes. `NO_RO` is applied to `p`.
pub fn pin_loads(q: Quantity, v: Variant, p: &GenParams, loads: &LoadSet) -> (GenParams, LoadSet) {
    let mut p = *p;
    let mut loads = *loads;
    if let Some(row) = row_for(q, v) {
        for (s, pin) in &row.pins {
            let r = match pin {
                Pin::Zero => ExtResistance::ZERO,
                Pin::Inf => ExtResistance::INF,
            };
            match crate::model::load_role(*s) {
                Some(role) => loads.set(role, r),
                None => p = p.with_ro(r),
            }
        }
    }
    (p, loads)
}

/// Auxiliary printed expressions that are not table rows.
pub struct Aux {
    pub ce_gm_eff: Formula,
    pub ce_ro_eff: Formula,
    pub cb_gm_eff: Formula,
    pub cb_rf_eff: Formula,
    pub rbe_open_collector: Formula,
    pub rbe_open_collector_alt: Expr,
    pub rbc_open_emitter: Formula,
    pub rgs_open_drain: Formula,
    pub blackman_rb: Formula,
    pub cascode_exact: Formula,
    pub cascode_printed: Expr,
    pub cascode_beta_inf: Formula,
    pub cascode_re_inf: Formula,
    /// `r_s` without body effect.
    pub rs_no_body: Formula,
    /// `r_s|gmb=0 / (1 + gmb (r_m || r_o))`.
    pub rs_factored: Formula,
    /// Input resistance of the diode-connected follower.
    pub rin_diode: Formula,
    /// Feedback-less common-emitter approximation.
    pub ce_no_feedback_approx: Formula,
    /// `(1 + gm RE/alpha) / (1 + gm RE/beta)`.
    pub degeneration_ratio: Formula,
}

pub fn aux() -> &'static Aux {
    static AUX: OnceLock<Aux> = OnceLock::new();
    AUX.get_or_init(build_aux)
}

fn build_aux() -> Aux {
    let S {
        gm,
        beta,
        alpha,
        rpi,
        rm,
        ro,
        rf,
        re,
        rb,
        rc,
        gmb,
        rg,
        rd,
        ..
    } = S::new();
    let one = || Expr::int(1);
    let ce_degen = one() + &gm * &re / &alpha + &re / &ro;
    let cb_degen = one() + &gm * &rb / &beta + &rb / &rf;
    let z0 = rpi.par(&(&rf + rc.par(&ro)));
    let t_oc = &gm * (&rpi + &rf).par(&rc).par(&ro) * (&rpi / (&rpi + &rf));
    let t_sc = Expr::int(0);
    let rs_no_body = rm.par(&ro) + &rd * (&rg + &rf / (one() + &gm * &ro)) / (&rg + &rd + &rf);
    Aux {
        ce_gm_eff: Formula::new(&gm * ((one() - &re / (&beta * &ro)) / &ce_degen)),
        ce_ro_eff: Formula::new(&ro * (&ce_degen / (one() + &gm * &re / &beta))),
        cb_gm_eff: Formula::new(&gm * ((one() + &rb / (&alpha * &rf)) / &cb_degen)),
        cb_rf_eff: Formula::new(&rf * (&cb_degen / (one() + &gm * &rb / &alpha))),
        rbe_open_collector: Formula::new(rpi.par(&((&rf + &ro) / (one() + &gm * &ro)))),
        rbe_open_collector_alt: (&alpha * &rm).par(&((&rf + &ro) / (one() - &gm * &rf))),
        rbc_open_emitter: Formula::new((&rpi + (&beta + 1) * &ro).par(&rf)),
        rgs_open_drain: Formula::new((&rf + &ro) / (one() + &gm * &ro)),
        blackman_rb: Formula::new(&z0 * (one() + &t_sc) / (one() + &t_oc)),
        cascode_exact: Formula::new(&ro + (one() + &gm * &ro) * re.par(&rpi)),
        cascode_printed: (&ro + &re + &gm * &ro * &re / &alpha) / (one() + &gm * &re / &beta),
        cascode_beta_inf: Formula::new(&ro + (one() + &gm * &ro) * &re),
        cascode_re_inf: Formula::new(&rpi + (&beta + 1) * &ro),
        rs_factored: Formula::new(&rs_no_body / (one() + &gmb * rm.par(&ro))),
        rs_no_body: Formula::new(rs_no_body),
        rin_diode: Formula::new(rc.par(&(&re + (&alpha * &rm).par(&ro)))),
        ce_no_feedback_approx: Formula::new(
            -(&gm) * (&rc / (one() + &gm * &re / &alpha)).par(&(&ro / (one() + &gm * &re / &beta))),
        ),
        degeneration_ratio: Formula::new(
            (one() + &gm * &re / &alpha) / (one() + &gm * &re / &beta),
        ),
    }
}

fn to_resistance(r: Result<f64, EvalError>) -> Result<ExtResistance, EvalError> {
    match r {
        Ok(x) => ExtResistance::new(x).map_err(|_| EvalError::NotAResistance(x)),
        Err(EvalError::Unbounded) => Ok(ExtResistance::INF),
        Err(e) => Err(e),
    }
}

fn or_infinite(r: Result<f64, EvalError>) -> Result<f64, EvalError> {
    match r {
        Err(EvalError::Unbounded) => Ok(f64::INFINITY),
        r => r,
    }
}

/// Effective transconductance and output resistance of the common emitter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveCE {
    pub gm_eff: f64,
    pub ro_eff: ExtResistance,
}

impl EffectiveCE {
    /// `-(gm_eff - 1/RF) (RC || RF || ro_eff)`; needs `RF > 0`.
    pub fn gain(&self, loads: &LoadSet) -> f64 {
        let g_f = loads.r_fb.conductance().unwrap_or(f64::INFINITY);
        let load = loads.r_top.par(loads.r_fb).par(self.ro_eff).value();
        -(self.gm_eff - g_f) * load
    }
}

/// Effective transconductance and feedback resistance of the common base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveCB {
    pub gm_eff: f64,
    pub rf_eff: ExtResistance,
}

impl EffectiveCB {
    /// `(gm_eff + 1/ro) (RC || rf_eff || ro)`; needs `ro > 0`.
    pub fn gain(&self, p: &GenParams, loads: &LoadSet) -> f64 {
        let g_o = p.ro().conductance().unwrap_or(f64::INFINITY);
        let load = loads.r_top.par(self.rf_eff).par(p.ro()).value();
        (self.gm_eff + g_o) * load
    }
}

pub fn effective_ce(p: &GenParams, loads: &LoadSet) -> Result<EffectiveCE, EvalError> {
    let vals = bjt_values(p, loads);
    let a = aux();
    Ok(EffectiveCE {
        gm_eff: a.ce_gm_eff.eval(&vals)?,
        ro_eff: to_resistance(a.ce_ro_eff.eval(&vals))?,
    })
}

pub fn effective_cb(p: &GenParams, loads: &LoadSet) -> Result<EffectiveCB, EvalError> {
    let vals = bjt_values(p, loads);
    let a = aux();
    Ok(EffectiveCB {
        gm_eff: a.cb_gm_eff.eval(&vals)?,
        rf_eff: to_resistance(a.cb_rf_eff.eval(&vals))?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpenTerminalKind {
    RBeOpenCollector,
    RBcOpenEmitter,
    RGsOpenDrain,
    RGdOpenSource,
}

impl OpenTerminalKind {
    pub const ALL: [OpenTerminalKind; 4] = [
        OpenTerminalKind::RBeOpenCollector,
        OpenTerminalKind::RBcOpenEmitter,
        OpenTerminalKind::RGsOpenDrain,
        OpenTerminalKind::RGdOpenSource,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpenTerminalKind::RBeOpenCollector => "R_BE_OPEN_COLLECTOR",
            OpenTerminalKind::RBcOpenEmitter => "R_BC_OPEN_EMITTER",
            OpenTerminalKind::RGsOpenDrain => "R_GS_OPEN_DRAIN",
            OpenTerminalKind::RGdOpenSource => "R_GD_OPEN_SOURCE",
        }
    }
}

/// A terminal impedance that reduces to an open-terminal equivalent plus
/// the far-side load once `pins` are applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenTerminalParent {
    pub quantity: Quantity,
    pub pins: &'static [(Sym, Pin)],
    pub far: Sym,
}

impl OpenTerminalKind {
    /// The two impedances the equivalent is read from.
    pub fn parents(self) -> [OpenTerminalParent; 2] {
        use Pin::{Inf, Zero};
        use Quantity::*;
        let p = |quantity, pins, far| OpenTerminalParent { quantity, pins, far };
        match self {
            OpenTerminalKind::RBeOpenCollector => [
                p(RBase, &[(Sym::Rc, Inf)], Sym::Re),
                p(REmitter, &[(Sym::Rc, Inf)], Sym::Rb),
            ],
            OpenTerminalKind::RBcOpenEmitter => [
                p(RBase, &[(Sym::Re, Inf)], Sym::Rc),
                p(RCollector, &[(Sym::Re, Inf)], Sym::Rb),
            ],
            OpenTerminalKind::RGsOpenDrain => [
                p(RGate, &[(Sym::Gmb, Zero), (Sym::Rd, Inf)], Sym::Rs),
                p(RSource, &[(Sym::Gmb, Zero), (Sym::Rd, Inf)], Sym::Rg),
            ],
            OpenTerminalKind::RGdOpenSource => [
                p(RGate, &[(Sym::Rs, Inf)], Sym::Rd),
                p(RDrain, &[(Sym::Rs, Inf)], Sym::Rg),
            ],
        }
    }

    /// The equivalent as an expression.
    pub fn expr(self) -> Expr {
        let a = aux();
        match self {
            OpenTerminalKind::RBeOpenCollector => a.rbe_open_collector.expr().clone(),
            OpenTerminalKind::RBcOpenEmitter => a.rbc_open_emitter.expr().clone(),
            OpenTerminalKind::RGsOpenDrain => a.rgs_open_drain.expr().clone(),
            OpenTerminalKind::RGdOpenSource => Expr::sym(Sym::Rf),
        }
    }
}

/// Two-terminal resistance left when the far terminal is opened.
pub fn open_terminal_equiv(
    k: OpenTerminalKind,
    device: &Device,
    r_fb: ExtResistance,
) -> Result<f64, EvalError> {
    let loads = LoadSet::open().with(LoadRole::Feedback, r_fb);
    let a = aux();
    match (k, device) {
        (OpenTerminalKind::RGdOpenSource, _) => Ok(r_fb.value()),
        (OpenTerminalKind::RBeOpenCollector, Device::Bjt(p)) => {
            a.rbe_open_collector.eval(&bjt_values(p, &loads))
        }
        (OpenTerminalKind::RBcOpenEmitter, Device::Bjt(p)) => {
            or_infinite(a.rbc_open_emitter.eval(&bjt_values(p, &loads)))
        }
        (OpenTerminalKind::RGsOpenDrain, Device::Mos(p)) => {
            if p.gmb() != 0.0 {
                return Err(EvalError::IllDefined(
                    "the gate-source impedance with an open drain needs gmb = 0",
                ));
            }
            or_infinite(a.rgs_open_drain.eval(&mos_values(p, &loads)))
        }
        (OpenTerminalKind::RGsOpenDrain, Device::Bjt(_)) => {
            Err(EvalError::WrongDevice(k.name(), "bipolar"))
        }
        (_, Device::Mos(_)) => Err(EvalError::WrongDevice(k.name(), "MOS")),
    }
}

/// Base resistance without emitter degeneration, assembled from return
/// ratios. `R_E` must be 0.
pub fn blackman_rb(p: &GenParams, loads: &LoadSet) -> Result<f64, EvalError> {
    if !loads.r_common_low.is_zero() {
        return Err(EvalError::PinMismatch {
            variant: "BLACKMAN",
            symbol: "RE",
            expected: "0",
            got: loads.r_common_low.value(),
        });
    }
    aux().blackman_rb.eval(&bjt_values(p, loads))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CascodeLimits {
    pub exact: f64,
    pub beta_inf: f64,
    pub re_inf: f64,
}

/// Collector resistance with `R_B = 0`, `R_F -> inf`, and its two limits.
pub fn cascode_rc_limits(p: &GenParams, r_e_load: ExtResistance) -> Result<CascodeLimits, EvalError> {
    let loads = LoadSet::open().with(LoadRole::CommonLow, r_e_load);
    let vals = bjt_values(p, &loads);
    let a = aux();
    Ok(CascodeLimits {
        exact: or_infinite(a.cascode_exact.eval(&vals))?,
        beta_inf: or_infinite(a.cascode_beta_inf.eval(&vals))?,
        re_inf: or_infinite(a.cascode_re_inf.eval(&vals))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> ExtResistance {
        ExtResistance::ohms(x)
    }
    const INF: ExtResistance = ExtResistance::INF;

    fn reference() -> GenParams {
        GenParams::bjt(10e-3, 100.0, r(10e3)).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn follower_rows_at_reference_point() {
        let p = reference();
        let open = LoadSet::new(r(100.0), INF, r(1e3), INF);
        let v = bjt_eval(Quantity::AvCc, Variant::General, &p, &open).unwrap();
        assert!(close(v, 0.476_661_951_909_476_63, 1e-13));
        let diode = LoadSet::new(r(100.0), INF, r(1e3), r(0.0));
        let v = bjt_eval(Quantity::AvCc, Variant::RfZero, &p, &diode).unwrap();
        assert!((v - 0.5).abs() < 0.01);
        assert!(close(v, 0.504_950_495_049_505, 1e-13));
        let rin = bjt_eval(Quantity::RBase, Variant::NoFeedback, &p, &open).unwrap();
        assert!((rin - 19.1e3).abs() < 50.0);
        assert!(close(rin, 19_108.108_108_108_107, 1e-13));
    }

    #[test]
    fn emitter_resistance_reduces_to_alpha_rm() {
        let p = GenParams::bjt(10e-3, 100.0, INF).unwrap();
        for rc in [r(1.0), r(1e3), INF] {
            let loads = LoadSet::new(INF, r(0.0), rc, INF);
            let v = bjt_eval(Quantity::REmitter, Variant::General, &p, &loads).unwrap();
            assert!(close(v, 100.0 / 101.0 / 10e-3, 1e-13), "{rc}: {v}");
        }
    }

    #[test]
    fn common_base_plain() {
        let p = GenParams::bjt(10e-3, 100.0, INF).unwrap();
        let loads = LoadSet::new(INF, r(0.0), r(1e3), INF);
        let v = bjt_eval(Quantity::AvCb, Variant::NoDegen, &p, &loads).unwrap();
        assert!(close(v, 10.0, 1e-14));
    }

    #[test]
    fn pin_mismatch_and_unsupported() {
        let p = reference();
        let loads = LoadSet::new(r(100.0), INF, r(1e3), r(5e3));
        assert!(matches!(
            bjt_eval(Quantity::AvCe, Variant::NoFeedback, &p, &loads),
            Err(EvalError::PinMismatch { .. })
        ));
        assert!(matches!(
            bjt_eval(Quantity::AvCe, Variant::RcInf, &p, &loads),
            Err(EvalError::Unsupported { .. })
        ));
        assert!(matches!(
            bjt_eval(Quantity::AvCs, Variant::General, &p, &loads),
            Err(EvalError::WrongDevice(..))
        ));
    }

    #[test]
    fn mos_examples() {
        let m = MosParams::new(9.36e-3, 0.0, r(14.4e3)).unwrap();
        let loads = LoadSet::new(r(0.0), r(100.0), INF, r(100e3));
        let v = mos_eval(Quantity::RDrain, &m, &loads).unwrap();
        assert!(close(v, 11_263.150_656_673_313, 1e-13));
        let ideal = MosParams::new(9.36e-3, 0.0, INF).unwrap();
        for rd in [r(0.0), r(1e3), INF] {
            let loads = LoadSet::new(INF, INF, rd, r(5e3));
            assert!(close(mos_eval(Quantity::AvCd, &ideal, &loads).unwrap(), 1.0, 1e-15));
        }
        let body = MosParams::new(10e-3, 1e-3, INF).unwrap();
        let loads = LoadSet::new(INF, r(470.0), r(0.0), r(5e3));
        let v = mos_eval(Quantity::RSource, &body, &loads).unwrap();
        assert!(close(v, 1.0 / 11e-3, 1e-14));
        assert!(close(v, 90.909_090_909_090_9, 1e-13));
    }

    #[test]
    fn effective_quantities() {
        let p = reference();
        let loads = LoadSet::new(r(0.0), r(0.0), r(1e3), r(5e3));
        let ce = effective_ce(&p, &loads).unwrap();
        assert_eq!(ce.gm_eff, 10e-3);
        assert_eq!(ce.ro_eff, r(10e3));
        let cb = effective_cb(&p, &loads).unwrap();
        assert_eq!(cb.gm_eff, 10e-3);
        assert_eq!(cb.rf_eff, r(5e3));

        let ideal = GenParams::bjt(10e-3, 100.0, INF).unwrap();
        let loads = LoadSet::new(r(100.0), INF, r(1e3), r(5e3));
        let ce = effective_ce(&ideal, &loads).unwrap();
        assert!(close(ce.gm_eff, 10e-3 / (1.0 + 1.0 * 101.0 / 100.0), 1e-14));
        assert!((ce.gm_eff - 4.975e-3).abs() < 1e-6);
        assert!(ce.ro_eff.is_inf());

        let loads = LoadSet::new(INF, r(1e3), r(1e3), INF);
        let cb = effective_cb(&p, &loads).unwrap();
        assert!(close(cb.gm_eff, 10e-3 / 1.1, 1e-14));
    }

    #[test]
    fn open_terminal_examples() {
        let p = reference();
        let v = open_terminal_equiv(OpenTerminalKind::RBcOpenEmitter, &Device::Bjt(p), INF).unwrap();
        assert!(close(v, 1.02e6, 1e-14));
        let v = open_terminal_equiv(OpenTerminalKind::RGdOpenSource, &Device::Bjt(p), r(5e3)).unwrap();
        assert_eq!(v, 5e3);
        let v = open_terminal_equiv(OpenTerminalKind::RBeOpenCollector, &Device::Bjt(p), r(0.0)).unwrap();
        assert!(close(v, 98.039_215_686_274_52, 1e-13));
        let m = MosParams::new(10e-3, 1e-3, r(1e4)).unwrap();
        assert!(matches!(
            open_terminal_equiv(OpenTerminalKind::RGsOpenDrain, &Device::Mos(m), r(5e3)),
            Err(EvalError::IllDefined(_))
        ));
    }

    #[test]
    fn blackman_examples() {
        let p = reference();
        let loads = LoadSet::new(r(0.0), INF, r(1e3), r(5e3));
        let b = blackman_rb(&p, &loads).unwrap();
        let t = bjt_eval(Quantity::RBase, Variant::NoDegen, &p, &loads).unwrap();
        assert!(close(b, t, 1e-12));
        assert!(close(b, 553.191_489_361_702_1, 1e-12));
        let open = LoadSet::new(r(0.0), INF, r(1e3), INF);
        assert!(close(blackman_rb(&p, &open).unwrap(), 10e3, 1e-14));
        let grounded = LoadSet::new(r(0.0), INF, r(0.0), r(5e3));
        assert!(close(blackman_rb(&p, &grounded).unwrap(), 10e3 * 5e3 / 15e3, 1e-14));
    }

    #[test]
    fn cascode_examples() {
        let p = reference();
        let c = cascode_rc_limits(&p, INF).unwrap();
        assert!(close(c.exact, 1.02e6, 1e-14));
        assert!(close(c.re_inf, 1.02e6, 1e-14));
        assert!(c.beta_inf.is_infinite());
        let c = cascode_rc_limits(&p, r(0.0)).unwrap();
        assert!(close(c.exact, 10e3, 1e-15));
        let c = cascode_rc_limits(&p, r(100.0)).unwrap();
        assert!(close(c.exact, 20_000.0, 1e-13));
        let loads = LoadSet::new(r(100.0), r(0.0), INF, INF);
        let t = bjt_eval(Quantity::RCollector, Variant::General, &p, &loads).unwrap();
        assert!(close(c.exact, t, 1e-12));
    }
}
