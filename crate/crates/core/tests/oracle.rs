use ampgen::identity::{derive_quantity, specialize};
use ampgen::model::{bjt_values, mos_values};
use ampgen::{
    bjt_eval, mos_eval, pin_loads, row_for, solve_bjt, solve_mos, EvalError, ExtResistance,
    GenParams, LoadSet, MosParams, Quantity,
};
use ampgen_symbolic::NSYMS;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn resistance(rng: &mut ChaCha8Rng, corners: bool) -> ExtResistance {
    if corners {
        match rng.random_range(0..8) {
            0 => return ExtResistance::ZERO,
            1 => return ExtResistance::INF,
            _ => {}
        }
    }
    ExtResistance::ohms(log_uniform(rng, 1.0, 1e7))
}

fn loads(rng: &mut ChaCha8Rng, corners: bool) -> LoadSet {
    LoadSet::new(
        resistance(rng, corners),
        resistance(rng, corners),
        resistance(rng, corners),
        resistance(rng, corners),
    )
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / b.abs().max(1e-15)
}

struct Draw {
    closed: Result<f64, EvalError>,
    oracle: Result<f64, ampgen::NodalError>,
    values: [f64; NSYMS],
    desc: String,
}

fn draws(q: Quantity, v: ampgen::Variant, n: usize, seed: u64) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let corners = i % 2 == 1;
            let l = loads(&mut rng, corners);
            let gm = log_uniform(&mut rng, 1e-4, 0.1);
            let ro = resistance(&mut rng, corners);
            if q.is_mos() {
                let gmb = if rng.random_bool(0.3) { 0.0 } else { gm * rng.random_range(0.0..0.3) };
                let p = MosParams::new(gm, gmb, ro).unwrap();
                Draw {
                    closed: mos_eval(q, &p, &l),
                    oracle: solve_mos(q, &p, &l),
                    values: mos_values(&p, &l),
                    desc: format!("{p:?} {l:?}"),
                }
            } else {
                let beta = rng.random_range(20.0..500.0);
                let p = GenParams::bjt(gm, beta, ro).unwrap();
                let (p, l) = pin_loads(q, v, &p, &l);
                Draw {
                    closed: bjt_eval(q, v, &p, &l),
                    oracle: solve_bjt(q, &p, &l),
                    values: bjt_values(&p, &l),
                    desc: format!("{p:?} {l:?}"),
                }
            }
        })
        .collect()
}

#[test]
fn rows_track_the_oracle() {
    let mut failures = Vec::new();
    for (k, q) in Quantity::ALL.into_iter().enumerate() {
        for v in q.variants() {
            let mut compared = 0;
            for d in draws(q, *v, 4000, 7 + k as u64) {
                match (&d.closed, &d.oracle) {
                    (Ok(c), Ok(o)) => {
                        compared += 1;
                        if rel(*c, *o) > 1e-9 {
                            failures.push(format!("{q} {v}: {c} vs {o} at {}", d.desc));
                        }
                    }
                    // Ill-posed as drawn; the closed form may still give the limit.
                    (_, Err(_)) => {}
                    (Err(e), Ok(o)) => failures.push(format!("{q} {v}: {e} but oracle {o} at {}", d.desc)),
                }
            }
            assert!(compared > 2500, "{q} {v}: only {compared} comparable draws");
        }
    }
    assert!(failures.is_empty(), "{}", failures[..failures.len().min(10)].join("\n"));
}

#[test]
fn both_sides_match_exact_rational_value() {
    for q in Quantity::ALL {
        for v in q.variants() {
            let pins = row_for(q, *v).unwrap().pins.clone();
            let f = specialize(&derive_quantity(q).unwrap(), &pins).finite().unwrap();
            let syms = f.symbols();
            for d in draws(q, *v, 200, 99) {
                let (Ok(c), Ok(o)) = (&d.closed, &d.oracle) else { continue };
                if syms.iter().any(|s| {
                    let x = d.values[s.index()];
                    x == 0.0 || x.is_infinite()
                }) {
                    continue;
                }
                let pt: [BigRational; NSYMS] = std::array::from_fn(|k| {
                    BigRational::from_float(if d.values[k].is_finite() { d.values[k] } else { 1.0 }).unwrap()
                });
                let exact = f.eval_rational(&pt).unwrap().to_f64().unwrap();
                assert!(rel(*o, exact) < 1e-14, "{q} {v} oracle {o} exact {exact}");
                assert!(rel(*c, exact) < 1e-10, "{q} {v} closed {c} exact {exact}");
            }
        }
    }
}
