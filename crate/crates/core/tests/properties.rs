use ampgen::reciprocity::rel_err;
use ampgen::sample::Sampler;
use ampgen::{
    bjt_eval, mos_eval, pin_loads, ExtResistance, GenParams, LoadSet, MosParams, Quantity, Variant,
};

fn scaled(l: &LoadSet, k: f64) -> LoadSet {
    let s = |r: ExtResistance| ExtResistance::ohms(r.value() * k);
    LoadSet::new(s(l.r_common_low), s(l.r_input_side), s(l.r_top), s(l.r_fb))
}

#[test]
fn special_rows_are_the_general_row_at_their_pins() {
    let mut s = Sampler::new(11);
    for q in Quantity::ALL.into_iter().filter(|q| !q.is_mos()) {
        for v in q.variants().iter().copied().filter(|v| *v != Variant::General) {
            for _ in 0..300 {
                let (p, loads) = pin_loads(q, v, &s.bjt(false), &s.loads(false));
                let special = bjt_eval(q, v, &p, &loads).unwrap();
                let general = bjt_eval(q, Variant::General, &p, &loads).unwrap();
                assert!(rel_err(special, general) < 1e-12, "{q} {v}: {special} vs {general}");
            }
        }
    }
}

#[test]
fn gains_are_dimensionless_and_resistances_scale() {
    let mut s = Sampler::new(12);
    let k = 8.0;
    for _ in 0..500 {
        let p = s.bjt(true);
        let loads = s.loads(true);
        let ro = ExtResistance::ohms(p.ro().value() * k);
        let pk = GenParams::bjt(p.gm() / k, p.beta(), ro).unwrap();
        let lk = scaled(&loads, k);
        let m = s.mos(true);
        let mk = MosParams::new(m.gm() / k, m.gmb() / k, ExtResistance::ohms(m.ro().value() * k)).unwrap();
        for q in Quantity::ALL {
            let f = if q.is_gain() { 1.0 } else { k };
            let (a, b) = if q.is_mos() {
                (mos_eval(q, &m, &loads), mos_eval(q, &mk, &lk))
            } else {
                (bjt_eval(q, Variant::General, &p, &loads), bjt_eval(q, Variant::General, &pk, &lk))
            };
            match (a, b) {
                (Ok(a), Ok(b)) if a.is_finite() => assert!(rel_err(a * f, b) < 1e-12, "{q}: {a} -> {b}"),
                (Ok(a), Ok(b)) => assert_eq!(a, b, "{q}"),
                (Err(a), Err(b)) => assert_eq!(a, b, "{q}"),
                (a, b) => panic!("{q}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn follower_gain_is_between_zero_and_one() {
    let mut s = Sampler::new(13);
    for _ in 0..5000 {
        let p = s.bjt(false);
        let loads = s.loads(false);
        let g = bjt_eval(Quantity::AvCc, Variant::General, &p, &loads).unwrap();
        assert!(0.0 < g && g < 1.0, "{g} at {p:?} {loads:?}");
        let m = s.mos(false);
        let g = mos_eval(Quantity::AvCd, &m, &loads).unwrap();
        assert!(0.0 < g && g < 1.0, "{g} at {m:?} {loads:?}");
    }
}

#[test]
fn input_resistance_exceeds_r_pi_without_feedback() {
    let mut s = Sampler::new(14);
    for _ in 0..2000 {
        let p = s.bjt(false);
        let loads = s.loads(false).with(ampgen::LoadRole::Feedback, ExtResistance::INF);
        let rin = bjt_eval(Quantity::RBase, Variant::NoFeedback, &p, &loads).unwrap();
        assert!(rin >= p.r_pi() * (1.0 - 1e-12), "{rin} < r_pi at {p:?} {loads:?}");
    }
}
