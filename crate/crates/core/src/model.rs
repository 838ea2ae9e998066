//! Domain types: extended resistances, device parameters, loads, and the
//! quantity/variant tags that select a formula.

use std::fmt;
use std::str::FromStr;

use ampgen_symbolic::{Sym, NSYMS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("resistance must be a nonnegative number or `inf`, got {0}")]
    BadResistance(f64),
    #[error("cannot parse resistance `{0}`")]
    ParseResistance(String),
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("gmb must be nonnegative and finite, got {0}")]
    BadGmb(f64),
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
}

/// A nonnegative resistance, or the distinguished value [`ExtResistance::INF`].
///
/// NaN and negative values cannot be constructed. Infinity is stored as the
/// IEEE infinity but every formula treats it structurally.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtResistance(f64);

impl ExtResistance {
    pub const INF: ExtResistance = ExtResistance(f64::INFINITY);
    pub const ZERO: ExtResistance = ExtResistance(0.0);

    pub fn new(ohms: f64) -> Result<Self, ModelError> {
        if ohms.is_nan() || ohms < 0.0 {
            return Err(ModelError::BadResistance(ohms));
        }
        Ok(ExtResistance(ohms))
    }

    /// Panics on NaN or negative input; for literals in tests and examples.
    pub fn ohms(ohms: f64) -> Self {
        ExtResistance::new(ohms).expect("valid resistance literal")
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn finite(self) -> Option<f64> {
        (!self.is_inf()).then_some(self.0)
    }

    /// `1/R`, with `INF -> 0`. A short has no finite conductance.
    pub fn conductance(self) -> Option<f64> {
        if self.is_inf() {
            Some(0.0)
        } else if self.is_zero() {
            None
        } else {
            Some(1.0 / self.0)
        }
    }

    pub fn par(self, other: ExtResistance) -> ExtResistance {
        parallel(self, other)
    }
}

/// Parallel combination `a*b/(a+b)`; `INF` is the identity and `0` absorbs.
pub fn parallel(a: ExtResistance, b: ExtResistance) -> ExtResistance {
    match (a.is_inf(), b.is_inf()) {
        (true, _) => b,
        (_, true) => a,
        _ if a.is_zero() || b.is_zero() => ExtResistance::ZERO,
        _ => ExtResistance(a.0 * b.0 / (a.0 + b.0)),
    }
}

impl fmt::Debug for ExtResistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtResistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Parses `inf`, plain numbers, and numbers with one of the suffixes
/// `M` (1e6), `k` (1e3), `m` (1e-3), `u` (1e-6).
pub fn parse_scaled(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Some(f64::INFINITY);
    }
    let (body, exp) = match s.chars().last()? {
        'M' => (&s[..s.len() - 1], 6),
        'k' | 'K' => (&s[..s.len() - 1], 3),
        'm' => (&s[..s.len() - 1], -3),
        'u' => (&s[..s.len() - 1], -6),
        _ => return s.parse().ok(),
    };
    let body = body.trim();
    if body.contains(['e', 'E']) {
        return None;
    }
    // Let the parser apply the exponent so `9.36m` is exactly `9.36e-3`.
    format!("{body}e{exp}").parse().ok()
}

impl FromStr for ExtResistance {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_scaled(s).ok_or_else(|| ModelError::ParseResistance(s.to_string()))?;
        ExtResistance::new(v)
    }
}

/// Bipolar small-signal parameters.
///
/// `alpha` and `beta` are stored independently: the physical constructor
/// couples them, while the base-emitter reciprocity transform produces
/// (nonphysical) pairs that only the transform may build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    gm: f64,
    alpha: f64,
    beta: f64,
    ro: ExtResistance,
}

impl GenParams {
    /// Physical bipolar transistor: `alpha = beta/(beta+1)`.
    pub fn bjt(gm: f64, beta: f64, ro: ExtResistance) -> Result<Self, ModelError> {
        check_positive("gm", gm)?;
        check_positive("beta", beta)?;
        Ok(GenParams {
            gm,
            alpha: beta / (beta + 1.0),
            beta,
            ro,
        })
    }

    /// The `beta -> inf` limit (`alpha = 1`), i.e. a MOS device without body effect.
    pub fn bjt_infinite_beta(gm: f64, ro: ExtResistance) -> Result<Self, ModelError> {
        check_positive("gm", gm)?;
        Ok(GenParams {
            gm,
            alpha: 1.0,
            beta: f64::INFINITY,
            ro,
        })
    }

    pub(crate) fn from_parts(gm: f64, alpha: f64, beta: f64, ro: ExtResistance) -> Self {
        GenParams {
            gm,
            alpha,
            beta,
            ro,
        }
    }

    pub fn gm(&self) -> f64 {
        self.gm
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ro(&self) -> ExtResistance {
        self.ro
    }

    /// `r_pi = beta/g_m`; infinite when `beta` is.
    pub fn r_pi(&self) -> f64 {
        self.beta / self.gm
    }

    /// `r_m = 1/g_m`.
    pub fn r_m(&self) -> f64 {
        1.0 / self.gm
    }

    pub fn with_ro(&self, ro: ExtResistance) -> Self {
        GenParams { ro, ..*self }
    }
}

/// MOS small-signal parameters; the body sits at small-signal ground.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MosParams {
    gm: f64,
    gmb: f64,
    ro: ExtResistance,
}

impl MosParams {
    pub fn new(gm: f64, gmb: f64, ro: ExtResistance) -> Result<Self, ModelError> {
        check_positive("gm", gm)?;
        if !(gmb >= 0.0 && gmb.is_finite()) {
            return Err(ModelError::BadGmb(gmb));
        }
        Ok(MosParams { gm, gmb, ro })
    }

    pub fn gm(&self) -> f64 {
        self.gm
    }

    pub fn gmb(&self) -> f64 {
        self.gmb
    }

    pub fn ro(&self) -> ExtResistance {
        self.ro
    }

    pub fn r_m(&self) -> f64 {
        1.0 / self.gm
    }

    /// `1/g_mb`, or `INF` without body effect.
    pub fn r_mb(&self) -> ExtResistance {
        if self.gmb == 0.0 {
            ExtResistance::INF
        } else {
            ExtResistance(1.0 / self.gmb)
        }
    }

    pub fn with_gmb(&self, gmb: f64) -> Result<Self, ModelError> {
        MosParams::new(self.gm, gmb, self.ro)
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NotPositive { name, value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Device {
    Bjt(GenParams),
    Mos(MosParams),
}

/// Position of a load resistor in the stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoadRole {
    /// Emitter or source to ground.
    CommonLow,
    /// Base or gate to ground.
    InputSide,
    /// Collector or drain to ground.
    Top,
    /// Base-collector or gate-drain feedback.
    Feedback,
}

/// External resistors around the transistor. Which fields a quantity reads
/// is given by [`Quantity::loads`]; the rest are ignored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoadSet {
    /// `R_E` or `R_S`.
    pub r_common_low: ExtResistance,
    /// `R_B` or `R_G`.
    pub r_input_side: ExtResistance,
    /// `R_C` or `R_D`.
    pub r_top: ExtResistance,
    /// `R_F`.
    pub r_fb: ExtResistance,
}

impl LoadSet {
    pub fn new(
        r_common_low: ExtResistance,
        r_input_side: ExtResistance,
        r_top: ExtResistance,
        r_fb: ExtResistance,
    ) -> Self {
        LoadSet {
            r_common_low,
            r_input_side,
            r_top,
            r_fb,
        }
    }

    /// Every load open.
    pub fn open() -> Self {
        LoadSet::new(
            ExtResistance::INF,
            ExtResistance::INF,
            ExtResistance::INF,
            ExtResistance::INF,
        )
    }

    pub fn get(&self, role: LoadRole) -> ExtResistance {
        match role {
            LoadRole::CommonLow => self.r_common_low,
            LoadRole::InputSide => self.r_input_side,
            LoadRole::Top => self.r_top,
            LoadRole::Feedback => self.r_fb,
        }
    }

    pub fn set(&mut self, role: LoadRole, r: ExtResistance) {
        match role {
            LoadRole::CommonLow => self.r_common_low = r,
            LoadRole::InputSide => self.r_input_side = r,
            LoadRole::Top => self.r_top = r,
            LoadRole::Feedback => self.r_fb = r,
        }
    }

    pub fn with(mut self, role: LoadRole, r: ExtResistance) -> Self {
        self.set(role, r);
        self
    }
}

/// Which load a symbol names, if any.
pub fn load_role(s: Sym) -> Option<LoadRole> {
    match s {
        Sym::Re | Sym::Rs => Some(LoadRole::CommonLow),
        Sym::Rb | Sym::Rg => Some(LoadRole::InputSide),
        Sym::Rc | Sym::Rd => Some(LoadRole::Top),
        Sym::Rf => Some(LoadRole::Feedback),
        _ => None,
    }
}

pub fn load_sym(role: LoadRole, mos: bool) -> Sym {
    match (role, mos) {
        (LoadRole::CommonLow, false) => Sym::Re,
        (LoadRole::InputSide, false) => Sym::Rb,
        (LoadRole::Top, false) => Sym::Rc,
        (LoadRole::CommonLow, true) => Sym::Rs,
        (LoadRole::InputSide, true) => Sym::Rg,
        (LoadRole::Top, true) => Sym::Rd,
        (LoadRole::Feedback, _) => Sym::Rf,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    AvCe,
    AvCb,
    AvCc,
    RBase,
    REmitter,
    RCollector,
    AvCs,
    AvCg,
    AvCd,
    RGate,
    RSource,
    RDrain,
}

impl Quantity {
    pub const ALL: [Quantity; 12] = [
        Quantity::AvCe,
        Quantity::AvCb,
        Quantity::AvCc,
        Quantity::RBase,
        Quantity::REmitter,
        Quantity::RCollector,
        Quantity::AvCs,
        Quantity::AvCg,
        Quantity::AvCd,
        Quantity::RGate,
        Quantity::RSource,
        Quantity::RDrain,
    ];

    pub fn is_mos(self) -> bool {
        matches!(
            self,
            Quantity::AvCs
                | Quantity::AvCg
                | Quantity::AvCd
                | Quantity::RGate
                | Quantity::RSource
                | Quantity::RDrain
        )
    }

    pub fn is_gain(self) -> bool {
        matches!(
            self,
            Quantity::AvCe
                | Quantity::AvCb
                | Quantity::AvCc
                | Quantity::AvCs
                | Quantity::AvCg
                | Quantity::AvCd
        )
    }

    /// Loads present in the measuring circuit. The load on a driven or
    /// probed terminal is absent: it sits across the ideal source.
    pub fn loads(self) -> &'static [LoadRole] {
        use LoadRole::*;
        match self {
            Quantity::AvCe | Quantity::AvCc | Quantity::RBase => &[CommonLow, Top, Feedback],
            Quantity::AvCs | Quantity::AvCd | Quantity::RGate => &[CommonLow, Top, Feedback],
            Quantity::AvCb | Quantity::REmitter => &[InputSide, Top, Feedback],
            Quantity::AvCg | Quantity::RSource => &[InputSide, Top, Feedback],
            Quantity::RCollector | Quantity::RDrain => &[CommonLow, InputSide, Feedback],
        }
    }

    /// Load symbols present in the measuring circuit.
    pub fn load_syms(self) -> Vec<Sym> {
        self.loads()
            .iter()
            .map(|r| load_sym(*r, self.is_mos()))
            .collect()
    }

    /// Rows printed for this quantity, in table order.
    pub fn variants(self) -> &'static [Variant] {
        use Variant::*;
        match self {
            Quantity::AvCe | Quantity::AvCb => &[General, NoDegen, NoFeedback, NoRo],
            Quantity::AvCc => &[General, ReInf, RfZero, RcZero, NoRo],
            Quantity::RBase => &[General, NoDegen, NoFeedback, NoRo, ReInf, RcInf],
            Quantity::REmitter => &[General, NoDegen, NoFeedback, NoRo, RcInf],
            Quantity::RCollector => &[General, NoDegen, NoEmitterDegen, NoFeedback, NoRo, ReInf],
            _ => &[General],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::AvCe => "AV_CE",
            Quantity::AvCb => "AV_CB",
            Quantity::AvCc => "AV_CC",
            Quantity::RBase => "R_BASE",
            Quantity::REmitter => "R_EMITTER",
            Quantity::RCollector => "R_COLLECTOR",
            Quantity::AvCs => "AV_CS",
            Quantity::AvCg => "AV_CG",
            Quantity::AvCd => "AV_CD",
            Quantity::RGate => "R_GATE",
            Quantity::RSource => "R_SOURCE",
            Quantity::RDrain => "R_DRAIN",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| ModelError::UnknownQuantity(s.to_string()))
    }
}

/// Row of a table: the general expression or one of its printed special cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    General,
    /// `R_E = 0` for base-driven quantities, `R_B = 0` for emitter-driven
    /// ones and for the collector resistance.
    NoDegen,
    /// `R_E = 0` for the collector resistance.
    NoEmitterDegen,
    /// `R_F -> inf`.
    NoFeedback,
    /// `r_o -> inf`.
    NoRo,
    RfZero,
    RcZero,
    ReInf,
    RcInf,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::General,
        Variant::NoDegen,
        Variant::NoEmitterDegen,
        Variant::NoFeedback,
        Variant::NoRo,
        Variant::RfZero,
        Variant::RcZero,
        Variant::ReInf,
        Variant::RcInf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::General => "GENERAL",
            Variant::NoDegen => "NO_DEGEN",
            Variant::NoEmitterDegen => "NO_EMITTER_DEGEN",
            Variant::NoFeedback => "NO_FEEDBACK",
            Variant::NoRo => "NO_RO",
            Variant::RfZero => "RF_ZERO",
            Variant::RcZero => "RC_ZERO",
            Variant::ReInf => "RE_INF",
            Variant::RcInf => "RC_INF",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| ModelError::UnknownVariant(s.to_string()))
    }
}

/// Values of every symbol for a bipolar device; MOS-only symbols are NaN.
pub fn bjt_values(p: &GenParams, loads: &LoadSet) -> [f64; NSYMS] {
    let mut v = [f64::NAN; NSYMS];
    v[Sym::Gm.index()] = p.gm();
    v[Sym::Beta.index()] = p.beta();
    v[Sym::Alpha.index()] = p.alpha();
    v[Sym::Rpi.index()] = p.r_pi();
    v[Sym::Ro.index()] = p.ro().value();
    v[Sym::Rf.index()] = loads.r_fb.value();
    v[Sym::Re.index()] = loads.r_common_low.value();
    v[Sym::Rb.index()] = loads.r_input_side.value();
    v[Sym::Rc.index()] = loads.r_top.value();
    v
}

/// Values of every symbol for a MOS device; bipolar-only symbols are NaN.
pub fn mos_values(p: &MosParams, loads: &LoadSet) -> [f64; NSYMS] {
    let mut v = [f64::NAN; NSYMS];
    v[Sym::Gm.index()] = p.gm();
    v[Sym::Gmb.index()] = p.gmb();
    v[Sym::Ro.index()] = p.ro().value();
    v[Sym::Rf.index()] = loads.r_fb.value();
    v[Sym::Rs.index()] = loads.r_common_low.value();
    v[Sym::Rg.index()] = loads.r_input_side.value();
    v[Sym::Rd.index()] = loads.r_top.value();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(x: f64) -> ExtResistance {
        ExtResistance::ohms(x)
    }

    #[test]
    fn parallel_examples() {
        assert_eq!(parallel(r(1000.0), r(1000.0)), r(500.0));
        assert_eq!(parallel(ExtResistance::INF, r(250.0)), r(250.0));
        assert_eq!(parallel(r(0.0), r(5000.0)), r(0.0));
        assert!(parallel(ExtResistance::INF, ExtResistance::INF).is_inf());
        assert!(parallel(ExtResistance::INF, ExtResistance::ZERO).is_zero());
    }

    #[test]
    fn resistance_construction() {
        assert!(ExtResistance::new(-1.0).is_err());
        assert!(ExtResistance::new(f64::NAN).is_err());
        assert_eq!(ExtResistance::INF.conductance(), Some(0.0));
        assert_eq!(ExtResistance::ZERO.conductance(), None);
        assert_eq!("4.7k".parse::<ExtResistance>().unwrap(), r(4700.0));
        assert_eq!("1M".parse::<ExtResistance>().unwrap(), r(1e6));
        assert_eq!("100m".parse::<ExtResistance>().unwrap(), r(0.1));
        assert!("inf".parse::<ExtResistance>().unwrap().is_inf());
        assert!("-3".parse::<ExtResistance>().is_err());
        assert!("abc".parse::<ExtResistance>().is_err());
        assert_eq!(parse_scaled("9.36m"), Some(9.36e-3));
        assert_eq!(parse_scaled("83.1u"), Some(83.1e-6));
        assert_eq!(parse_scaled("1e3k"), None);
    }

    #[test]
    fn bjt_constructor() {
        let p = GenParams::bjt(10e-3, 100.0, r(10e3)).unwrap();
        assert!((p.alpha() - 100.0 / 101.0).abs() < 1e-15);
        assert!((p.r_pi() - 10e3).abs() < 1e-9);
        let q = GenParams::bjt_infinite_beta(9.36e-3, r(14.4e3)).unwrap();
        assert_eq!(q.alpha(), 1.0);
        let h = GenParams::bjt(1.0, 1.0, ExtResistance::INF).unwrap();
        assert_eq!(h.alpha(), 0.5);
        assert!(GenParams::bjt(0.0, 100.0, ExtResistance::INF).is_err());
        assert!(GenParams::bjt(-1e-3, 100.0, ExtResistance::INF).is_err());
        assert!(GenParams::bjt(1e-3, 0.0, ExtResistance::INF).is_err());
    }

    #[test]
    fn mos_constructor() {
        let m = MosParams::new(10e-3, 0.0, r(1e4)).unwrap();
        assert!(m.r_mb().is_inf());
        assert!(MosParams::new(10e-3, -1.0, r(1e4)).is_err());
        assert!(MosParams::new(0.0, 0.0, r(1e4)).is_err());
    }

    #[test]
    fn names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
    }

    fn ext() -> impl Strategy<Value = ExtResistance> {
        prop_oneof![
            1 => Just(ExtResistance::ZERO),
            1 => Just(ExtResistance::INF),
            6 => (0.0f64..7.0).prop_map(|e| ExtResistance::ohms(10f64.powf(e))),
        ]
    }

    proptest! {
        #[test]
        fn parallel_commutes_and_associates(a in ext(), b in ext(), c in ext()) {
            let ab = parallel(a, b);
            prop_assert_eq!(ab, parallel(b, a));
            prop_assert!(!ab.value().is_nan());
            prop_assert!(ab.value() <= a.value().min(b.value()));
            let left = parallel(ab, c).value();
            let right = parallel(a, parallel(b, c)).value();
            if left.is_infinite() || left == 0.0 {
                prop_assert_eq!(left, right);
            } else {
                prop_assert!(((left - right) / left).abs() < 1e-14);
            }
        }

        #[test]
        fn physical_constructor_couples_alpha_beta(gm in 1e-4f64..0.1, beta in 1.0f64..1000.0) {
            let p = GenParams::bjt(gm, beta, ExtResistance::INF).unwrap();
            prop_assert!(0.0 < p.alpha() && p.alpha() < 1.0 && 1.0 < beta + 1.0);
            prop_assert!(((p.gm() * p.r_pi() - beta) / beta).abs() <= 2.0 * f64::EPSILON);
            prop_assert!((p.alpha() - beta / (beta + 1.0)).abs() == 0.0);
        }
    }
}
