//! The verification report: every acceptance check, one record each.

use std::fmt;
use std::thread;

use ampgen::identity::{derive_quantity, lower, specialize, verify_expr, verify_identity, verify_open_terminal};
use ampgen::model::{bjt_values, load_role, mos_values};
use ampgen::reciprocity::{
    all_pairs, check_collapsed, check_pair, reciprocal_params, rel_err, symbolic_check_collapsed,
    symbolic_check_pair, symbolic_involution,
};
use ampgen::sample::Sampler;
use ampgen::{
    aux, bjt_eval, blackman_rb, mos_eval, open_terminal_equiv, pin_loads, solve_bjt, solve_mos, Device,
    EvalError, ExtResistance, GenParams, LoadRole, LoadSet, MosParams, OpenTerminalKind, Pin, Quantity,
    Variant,
};
use ampgen_symbolic::{Expr, Limit, RatFn, Sym};
use serde::{Deserialize, Serialize};

use crate::crossover;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckKind {
    SymbolicIdentity,
    OracleMatch,
    Reciprocity,
    PaperNumber,
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// Acceptance criterion this check belongs to, 1 to 10.
    pub criterion: u8,
    pub kind: CheckKind,
    pub status: Status,
    pub worst_rel_err: Option<f64>,
    pub details: String,
}

impl CheckRecord {
    fn new(id: impl Into<String>, criterion: u8, kind: CheckKind, ok: bool, worst: Option<f64>, details: String) -> Self {
        CheckRecord {
            id: id.into(),
            criterion,
            kind,
            status: if ok { Status::Pass } else { Status::Fail },
            worst_rel_err: worst.filter(|w| w.is_finite()),
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}", self.criterion, self.id)?;
        if let Some(w) = self.worst_rel_err {
            write!(f, " (worst {w:.2e})")?;
        }
        write!(f, ": {}", self.details)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn criterion(&self, n: u8) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(move |c| c.criterion == n)
    }

    pub fn to_jsonl(&self) -> String {
        self.checks
            .iter()
            .map(|c| serde_json::to_string(c).expect("plain record") + "\n")
            .collect()
    }

    pub fn from_jsonl(text: &str) -> Result<Self, serde_json::Error> {
        let checks = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<_, _>>()?;
        Ok(VerifyReport { checks })
    }
}

/// A replacement expression for one row, to show the identity suite notices.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub quantity: Quantity,
    pub variant: Variant,
    pub expr: Expr,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Comparisons per general row; special rows get a fifth.
    pub oracle_draws: usize,
    /// Points per numeric reciprocity, open-terminal and Blackman check.
    pub sample_draws: usize,
    pub mutation: Option<Mutation>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 2024,
            oracle_draws: 10_000,
            sample_draws: 1_000,
            mutation: None,
        }
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "follower and input-resistance numbers"),
    (2, "symbolic identities"),
    (3, "closed forms against the nodal solver"),
    (4, "base-emitter reciprocity"),
    (5, "common-source crossovers"),
    (6, "degeneration-ratio bound"),
    (7, "body effect"),
    (8, "open-terminal equivalents"),
    (9, "Blackman base resistance"),
    (10, "cascode limits"),
];

pub fn run_criterion(n: u8, opts: &VerifyOptions) -> Vec<CheckRecord> {
    let seed = opts.seed;
    match n {
        1 => follower_numbers(),
        2 => identities(opts.mutation.as_ref()),
        3 => oracle_match(seed, opts.oracle_draws),
        4 => reciprocity(seed, opts.sample_draws),
        5 => crossovers(),
        6 => degeneration_bound(seed, opts.oracle_draws),
        7 => body_effect(seed, opts.sample_draws),
        8 => open_terminals(seed, opts.sample_draws),
        9 => blackman(seed, opts.sample_draws),
        10 => cascode(),
        _ => Vec::new(),
    }
}

/// Runs every criterion concurrently; records come back in criterion order.
pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let checks = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|(n, _)| s.spawn(move || run_criterion(*n, opts)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("check thread"))
            .collect()
    });
    VerifyReport { checks }
}

fn r(x: f64) -> ExtResistance {
    ExtResistance::ohms(x)
}

// 1. Worked numeric example.

pub fn follower_numbers() -> Vec<CheckRecord> {
    let p = GenParams::bjt(10e-3, 100.0, r(10e3)).expect("physical");
    let open = LoadSet::new(r(100.0), ExtResistance::INF, r(1e3), ExtResistance::INF);
    let diode = open.with(LoadRole::Feedback, ExtResistance::ZERO);
    let cases = [
        ("av-cc-rf-inf", Quantity::AvCc, Variant::General, open, 0.48, 0.005, 0.476_661_951_909_476_63),
        ("av-cc-rf-zero", Quantity::AvCc, Variant::RfZero, diode, 0.50, 0.01, 0.504_950_495_049_505),
        ("r-in-rf-inf", Quantity::RBase, Variant::NoFeedback, open, 19.1e3, 50.0, 19_108.108_108_108_107),
        ("r-in-rf-zero", Quantity::RBase, Variant::General, diode, 165.0, 1.0, 165.302_782_324_058_9),
    ];
    let mut out: Vec<CheckRecord> = cases
        .iter()
        .map(|(id, q, v, loads, printed, tol, frozen)| {
            let closed = bjt_eval(*q, *v, &p, loads);
            let oracle = solve_bjt(*q, &p, loads);
            let (ok, worst, details) = match (closed, oracle) {
                (Ok(c), Ok(o)) => {
                    let w = rel_err(c, *frozen).max(rel_err(o, *frozen));
                    let ok = (c - printed).abs() <= *tol && w < 1e-12;
                    (ok, Some(w), format!("{q} {v} = {c} (printed {printed} +- {tol}), solver {o}"))
                }
                (c, o) => (false, None, format!("{q} {v}: closed {c:?}, solver {o:?}")),
            };
            CheckRecord::new(format!("numbers/{id}"), 1, CheckKind::PaperNumber, ok, worst, details)
        })
        .collect();
    // The diode-connected input resistance also has a divider reading.
    let d = aux().rin_diode.eval(&bjt_values(&p, &diode));
    let t = bjt_eval(Quantity::RBase, Variant::General, &p, &diode);
    let (ok, w) = match (d, t) {
        (Ok(d), Ok(t)) => (rel_err(d, t) < 1e-12, Some(rel_err(d, t))),
        _ => (false, None),
    };
    out.push(CheckRecord::new(
        "numbers/r-in-diode-form",
        1,
        CheckKind::PaperNumber,
        ok,
        w,
        "RC || (RE + (alpha rm || ro)) against the general base row".into(),
    ));
    out
}

// 2. Symbolic identities.

pub fn identities(mutation: Option<&Mutation>) -> Vec<CheckRecord> {
    let rows: Vec<(Quantity, Variant)> = Quantity::ALL
        .into_iter()
        .flat_map(|q| q.variants().iter().map(move |v| (q, *v)))
        .collect();
    thread::scope(|s| {
        let handles: Vec<_> = rows
            .iter()
            .map(|(q, v)| {
                s.spawn(move || {
                    let result = match mutation {
                        Some(m) if m.quantity == *q && m.variant == *v => {
                            verify_expr(*q, *v, &m.expr).map_err(EvalError::from)
                        }
                        _ => verify_identity(*q, *v),
                    };
                    let (ok, details) = match result {
                        Ok(rep) => (rep.passed(), rep.to_string()),
                        Err(e) => (false, format!("{q} {v}: {e}")),
                    };
                    CheckRecord::new(format!("identity/{q}/{v}"), 2, CheckKind::SymbolicIdentity, ok, None, details)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("identity thread")).collect()
    })
}

// 3. Closed forms against the nodal solver.

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchStats {
    pub compared: usize,
    pub ill_posed: usize,
    pub worst: f64,
    pub failures: Vec<String>,
}

/// Compares one row with the solver until `want` well-posed points agree,
/// drawing every other point with `0`/`INF` corners.
pub fn match_row(q: Quantity, v: Variant, want: usize, seed: u64) -> MatchStats {
    let mut s = Sampler::new(seed);
    let mut st = MatchStats::default();
    let mut i = 0usize;
    while st.compared < want && i < 4 * want {
        let corners = i % 2 == 1;
        i += 1;
        let loads = s.loads(corners);
        let (closed, oracle, desc) = if q.is_mos() {
            let p = s.mos(corners);
            (mos_eval(q, &p, &loads), solve_mos(q, &p, &loads), format!("{p:?} {loads:?}"))
        } else {
            let p = s.bjt(corners);
            let (p, loads) = pin_loads(q, v, &p, &loads);
            (bjt_eval(q, v, &p, &loads), solve_bjt(q, &p, &loads), format!("{p:?} {loads:?}"))
        };
        match (closed, oracle) {
            (Ok(c), Ok(o)) => {
                st.compared += 1;
                let e = rel_err(c, o);
                st.worst = st.worst.max(e);
                if e >= 1e-9 && st.failures.len() < 3 {
                    st.failures.push(format!("{c} vs {o} at {desc}"));
                }
            }
            // No solution exists at this corner; the closed form may still
            // report the limit.
            (_, Err(_)) => st.ill_posed += 1,
            (Err(e), Ok(o)) => {
                if st.failures.len() < 3 {
                    st.failures.push(format!("{e}, solver {o} at {desc}"));
                }
                st.worst = f64::INFINITY;
            }
        }
    }
    st
}

pub fn oracle_match(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let rows: Vec<(usize, Quantity, Variant)> = Quantity::ALL
        .into_iter()
        .flat_map(|q| q.variants().iter().map(move |v| (q, *v)))
        .enumerate()
        .map(|(i, (q, v))| (i, q, v))
        .collect();
    thread::scope(|s| {
        let handles: Vec<_> = rows
            .iter()
            .map(|(i, q, v)| {
                s.spawn(move || {
                    let want = if *v == Variant::General { draws } else { (draws / 5).max(1) };
                    let st = match_row(*q, *v, want, seed.wrapping_add(1000 + *i as u64));
                    let ok = st.compared >= want && st.worst < 1e-9;
                    let mut details = format!(
                        "{q} {v}: {} points compared, {} ill-posed corners skipped",
                        st.compared, st.ill_posed
                    );
                    for f in &st.failures {
                        details.push_str("; ");
                        details.push_str(f);
                    }
                    CheckRecord::new(format!("oracle/{q}/{v}"), 3, CheckKind::OracleMatch, ok, Some(st.worst), details)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle thread")).collect()
    })
}

// 4. Reciprocity.

pub fn reciprocity(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (k, pair) in all_pairs().iter().enumerate() {
        let sym = symbolic_check_pair(pair);
        let mut s = Sampler::new(seed.wrapping_add(2000 + k as u64));
        let (mut worst, mut poles, mut bad, mut other) = (0.0f64, 0, 0, 0);
        for _ in 0..draws {
            let p = s.bjt(false);
            let loads = s.loads(false);
            match check_pair(pair, &p, &loads) {
                Ok(c) => {
                    worst = worst.max(c.rel_err);
                    if !c.holds {
                        bad += 1;
                    }
                }
                Err(EvalError::Pole) => poles += 1,
                Err(_) => other += 1,
            }
        }
        let (sym_ok, sym_text) = match sym {
            Ok(c) => (
                c.holds(),
                format!("rows {}, derivations {}", verdict(c.rows), verdict(c.derivations)),
            ),
            Err(e) => (false, e.to_string()),
        };
        let ok = sym_ok && bad == 0 && other == 0 && poles < draws / 10;
        out.push(CheckRecord::new(
            format!("reciprocity/{}", pair.id),
            4,
            CheckKind::Reciprocity,
            ok,
            Some(worst),
            format!(
                "{pair}: symbolic {sym_text}; {} points, {bad} unequal, {poles} poles, {other} errors",
                draws
            ),
        ));
    }

    let mut s = Sampler::new(seed.wrapping_add(2100));
    let mut numeric_ok = true;
    for i in 0..draws * 10 {
        let p = s.bjt(i % 2 == 1);
        let loads = s.loads(i % 2 == 1);
        let (p1, l1) = reciprocal_params(&p, &loads);
        numeric_ok &= reciprocal_params(&p1, &l1) == (p, loads);
    }
    let sym_ok = Quantity::ALL
        .into_iter()
        .filter(|q| !q.is_mos())
        .all(|q| derive_quantity(q).ok().and_then(|f| symbolic_involution(&f).ok()) == Some(true));
    out.push(CheckRecord::new(
        "reciprocity/involution",
        4,
        CheckKind::Reciprocity,
        numeric_ok && sym_ok,
        None,
        format!(
            "applied twice: {} points exact {}, six bipolar derivations {}",
            draws * 10,
            verdict(numeric_ok),
            verdict(sym_ok)
        ),
    ));

    let sym = symbolic_check_collapsed();
    let mut s = Sampler::new(seed.wrapping_add(2200));
    let (mut worst, mut bad) = (0.0f64, 0);
    for _ in 0..draws {
        let p = s.bjt(false);
        let loads = s.loads(false);
        match check_collapsed(&p, &loads) {
            Ok(c) => {
                worst = worst.max(c.rel_err);
                bad += usize::from(!c.holds);
            }
            Err(_) => bad += 1,
        }
    }
    let sym_ok = sym == Ok(true);
    out.push(CheckRecord::new(
        "reciprocity/collector-collapsed",
        4,
        CheckKind::Reciprocity,
        sym_ok && bad == 0,
        Some(worst),
        format!(
            "alpha <-> beta, ro <-> RF, RE <-> RB leaves the general collector row unchanged: \
             symbolic {}, {draws} points with {bad} failures",
            verdict(sym_ok)
        ),
    ));
    out
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "equal"
    } else {
        "DIFFER"
    }
}

// 5. Crossovers.

pub fn crossovers() -> Vec<CheckRecord> {
    let rep = crossover::fig1(241);
    vec![
        CheckRecord::new(
            "crossover/small-load",
            5,
            CheckKind::PaperNumber,
            rep.degenerated_wins_small(),
            None,
            format!("best at RD = {:.0}: {}", rep.rd[0], rep.best[0].name()),
        ),
        CheckRecord::new(
            "crossover/feedback",
            5,
            CheckKind::PaperNumber,
            rep.feedback_in_band(),
            None,
            format!("feedback form overtakes at {:?} ohm, band [RF/2, 2 RF]", rep.feedback_crossover),
        ),
        CheckRecord::new(
            "crossover/output-resistance",
            5,
            CheckKind::PaperNumber,
            rep.ro_in_band(),
            None,
            format!("-gm (RD || ro) overtakes at {:?} ohm, band [ro/2, 2 ro]", rep.ro_crossover),
        ),
        CheckRecord::new(
            "crossover/general-tracks-solver",
            5,
            CheckKind::OracleMatch,
            rep.general_worst_rel < 1e-9,
            Some(rep.general_worst_rel),
            format!("{} log-spaced loads from 10 ohm to 1 Mohm", rep.rd.len()),
        ),
    ]
}

// 6. Degeneration ratio.

pub fn degeneration_bound(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let mut s = Sampler::new(seed.wrapping_add(3000));
    let f = &aux().degeneration_ratio;
    let mut bad = Vec::new();
    for _ in 0..draws {
        let gm = s.gm();
        let re = s.log_uniform(1.0, 1e7);
        let beta = s.beta();
        let p = GenParams::bjt(gm, beta, ExtResistance::INF).expect("physical");
        let vals = bjt_values(&p, &LoadSet::open().with(LoadRole::CommonLow, r(re)));
        match f.eval(&vals) {
            Ok(x) if 1.0 < x && x < beta + 1.0 => {}
            other => bad.push(format!("gm RE = {}, beta = {beta}: {other:?}", gm * re)),
        }
    }
    vec![CheckRecord::new(
        "bound/degeneration-ratio",
        6,
        CheckKind::Bound,
        bad.is_empty(),
        None,
        format!(
            "1 < (1 + gm RE/alpha)/(1 + gm RE/beta) < beta + 1 at {draws} points{}",
            bad.first().map(|b| format!("; violated at {b}")).unwrap_or_default()
        ),
    )]
}

// 7. Body effect.

pub fn body_effect(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let a = aux();
    let mut out = Vec::new();

    let row = derive_quantity(Quantity::RSource);
    let factored = a.rs_factored.ratfn();
    let sym_ok = matches!((&row, &factored), (Ok(r), Ok(f)) if r.equals(f));
    let mut s = Sampler::new(seed.wrapping_add(4000));
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let p = s.mos(false);
        let loads = s.loads(false);
        let vals = mos_values(&p, &loads);
        match (mos_eval(Quantity::RSource, &p, &loads), a.rs_factored.eval(&vals)) {
            (Ok(x), Ok(y)) => worst = worst.max(rel_err(y, x)),
            _ => worst = f64::INFINITY,
        }
    }
    out.push(CheckRecord::new(
        "body/factorization",
        7,
        CheckKind::SymbolicIdentity,
        sym_ok && worst < 1e-12,
        Some(worst),
        format!(
            "r_s = r_s(gmb = 0) / (1 + gmb (rm || ro)): symbolic {}, {draws} points",
            verdict(sym_ok)
        ),
    ));

    let lim = row.map(|f| specialize(&f, &[(Sym::Ro, Pin::Inf), (Sym::Rd, Pin::Zero)]));
    let target = (&RatFn::var(Sym::Gm) + &RatFn::var(Sym::Gmb)).recip();
    let sym_ok = matches!((&lim, &target), (Ok(Limit::Finite(l)), Ok(t)) if l.equals(t));
    let mut worst = 0.0f64;
    for (gm, gmb) in [(10e-3, 1e-3), (9.36e-3, 83.1e-6), (1e-4, 3e-5), (0.1, 0.0), (2.5e-3, 7e-4)] {
        let p = MosParams::new(gm, gmb, ExtResistance::INF).expect("physical");
        for (rg, rf) in [(r(100.0), r(5e3)), (ExtResistance::INF, r(1.0)), (r(0.0), ExtResistance::INF)] {
            let loads = LoadSet::new(ExtResistance::INF, rg, ExtResistance::ZERO, rf);
            let want = 1.0 / (gm + gmb);
            match mos_eval(Quantity::RSource, &p, &loads) {
                Ok(v) => worst = worst.max(rel_err(v, want)),
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    out.push(CheckRecord::new(
        "body/shorted-drain-limit",
        7,
        CheckKind::PaperNumber,
        sym_ok && worst <= f64::EPSILON,
        Some(worst),
        format!("r_s(RD = 0, ro -> inf) = 1/(gm + gmb): symbolic {}", verdict(sym_ok)),
    ));

    let mut s = Sampler::new(seed.wrapping_add(4100));
    let mut bad = 0;
    let configs = draws / 10;
    for _ in 0..configs {
        let gm = s.gm();
        let ro = s.resistance(false);
        let loads = s.loads(false);
        let mut last = f64::INFINITY;
        for k in 0..=30 {
            let p = MosParams::new(gm, gm * 0.01 * k as f64, ro).expect("physical");
            match mos_eval(Quantity::RSource, &p, &loads) {
                Ok(v) if v < last => last = v,
                _ => {
                    bad += 1;
                    break;
                }
            }
        }
    }
    out.push(CheckRecord::new(
        "body/monotone-in-gmb",
        7,
        CheckKind::Bound,
        bad == 0,
        None,
        format!("r_s strictly decreasing over gmb = 0..0.3 gm at {configs} load sets, {bad} violations"),
    ));
    out
}

// 8. Open-terminal equivalents.

pub fn open_terminals(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (k, kind) in OpenTerminalKind::ALL.into_iter().enumerate() {
        let sym = verify_open_terminal(kind);
        let mut s = Sampler::new(seed.wrapping_add(5000 + k as u64));
        let (mut worst, mut errors, mut ill) = (0.0f64, 0, 0);
        for _ in 0..draws {
            let loads = s.loads(false);
            let device = if kind.parents()[0].quantity.is_mos() {
                let p = s.mos(false);
                let p = if kind == OpenTerminalKind::RGsOpenDrain { p.with_gmb(0.0).expect("zero gmb") } else { p };
                Device::Mos(p)
            } else {
                Device::Bjt(s.bjt(false))
            };
            let Ok(equiv) = open_terminal_equiv(kind, &device, loads.r_fb) else {
                errors += 1;
                continue;
            };
            for parent in kind.parents() {
                let mut l = loads;
                for (sym, pin) in parent.pins {
                    if let Some(role) = load_role(*sym) {
                        l.set(role, if *pin == Pin::Inf { ExtResistance::INF } else { ExtResistance::ZERO });
                    }
                }
                let far = l.get(load_role(parent.far).expect("far side is a load")).value();
                let q = parent.quantity;
                let (closed, oracle) = match &device {
                    Device::Bjt(p) => (bjt_eval(q, Variant::General, p, &l), solve_bjt(q, p, &l).ok()),
                    Device::Mos(p) => (mos_eval(q, p, &l), solve_mos(q, p, &l).ok()),
                };
                match closed {
                    Ok(c) => worst = worst.max(rel_err(equiv + far, c)),
                    Err(_) => errors += 1,
                }
                match oracle {
                    Some(o) => worst = worst.max(rel_err(equiv + far, o)),
                    None => ill += 1,
                }
            }
        }
        let (sym_ok, sym_text) = match sym {
            Ok([a, b]) => (a && b, format!("{} and {}", verdict(a), verdict(b))),
            Err(e) => (false, e.to_string()),
        };
        let parents = kind.parents();
        out.push(CheckRecord::new(
            format!("open-terminal/{}", kind.name()),
            8,
            CheckKind::SymbolicIdentity,
            sym_ok && worst < 1e-9 && errors == 0 && ill < draws / 10,
            Some(worst),
            format!(
                "equivalent + far load against {} and {}: symbolic {sym_text}; {draws} points, {errors} errors, {ill} ill-posed",
                parents[0].quantity, parents[1].quantity
            ),
        ));
    }
    out
}

// 9. Blackman.

pub fn blackman(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let mut s = Sampler::new(seed.wrapping_add(6000));
    let (mut worst, mut errors) = (0.0f64, 0);
    for i in 0..draws {
        let corners = i % 4 == 3;
        let p = s.bjt(false);
        let loads = s.loads(corners).with(LoadRole::CommonLow, ExtResistance::ZERO);
        match (blackman_rb(&p, &loads), bjt_eval(Quantity::RBase, Variant::NoDegen, &p, &loads)) {
            (Ok(b), Ok(t)) => worst = worst.max(rel_err(b, t)),
            _ => errors += 1,
        }
    }
    vec![CheckRecord::new(
        "blackman/base-resistance",
        9,
        CheckKind::SymbolicIdentity,
        worst < 1e-12 && errors == 0,
        Some(worst),
        format!("Z0 (1 + Tsc)/(1 + Toc) against the undegenerated base row at {draws} points, {errors} errors"),
    )]
}

// 10. Cascode limits.

pub fn cascode() -> Vec<CheckRecord> {
    let a = aux();
    let derived = derive_quantity(Quantity::RCollector)
        .map(|f| specialize(&f, &[(Sym::Rf, Pin::Inf), (Sym::Rb, Pin::Zero)]).finite());
    let exact = a.cascode_exact.ratfn();
    let printed = lower(&a.cascode_printed);
    let beta_inf = a.cascode_beta_inf.ratfn();
    let re_inf = a.cascode_re_inf.ratfn();
    let check = |id: &str, ok: bool, details: &str| {
        CheckRecord::new(format!("cascode/{id}"), 10, CheckKind::SymbolicIdentity, ok, None, details.to_string())
    };
    let (Ok(Some(derived)), Ok(exact), Ok(printed), Ok(beta_inf), Ok(re_inf)) =
        (derived, exact, printed, beta_inf, re_inf)
    else {
        return vec![check("exact", false, "symbolic lowering failed")];
    };
    let lim = |s: Sym| exact.limit_at_infinity(s).finite();
    vec![
        check(
            "exact",
            derived.equals(&exact) && printed.equals(&exact),
            "ro + (1 + gm ro)(RE || rpi) and the printed quotient equal the collector row at RB = 0, RF -> inf",
        ),
        check(
            "beta-inf",
            lim(Sym::Beta).is_some_and(|l| l.equals(&beta_inf)),
            "beta -> inf gives ro + (1 + gm ro) RE",
        ),
        check(
            "re-inf",
            lim(Sym::Re).is_some_and(|l| l.equals(&re_inf)),
            "RE -> inf gives rpi + (beta + 1) ro",
        ),
    ]
}

/// A deliberately wrong coefficient in one row.
pub fn sample_mutation() -> Mutation {
    let row = ampgen::row_for(Quantity::AvCe, Variant::NoDegen).expect("row exists");
    let s = |x| Expr::sym(x);
    // -(gm - 1/RF)(RC || RF || ro) with gm doubled.
    let expr = -(Expr::int(2) * s(Sym::Gm) - s(Sym::Rf).recip()) * s(Sym::Rc).par(&s(Sym::Rf)).par(&s(Sym::Ro));
    debug_assert!(row.expr().to_string() != expr.to_string());
    Mutation {
        quantity: Quantity::AvCe,
        variant: Variant::NoDegen,
        expr,
    }
}
