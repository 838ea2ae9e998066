//! Which familiar common-source approximation is closest to the exact gain
//! as the drain load is swept.

use std::fmt::Write as _;

use ampgen::{mos_eval, solve_mos, ExtResistance, LoadSet, MosParams, Quantity};

pub const GM: f64 = 9.36e-3;
pub const RO: f64 = 14.4e3;
pub const RS: f64 = 100.0;
pub const RF: f64 = 5e3;

/// The approximations compared against the exact gain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approx {
    /// `-gm RD / (1 + gm RS)`
    Degenerated,
    /// `-(gm - 1/RF) (RD || RF)`
    Feedback,
    /// `-gm (RD || ro)`
    OutputResistance,
}

impl Approx {
    pub const ALL: [Approx; 3] = [Approx::Degenerated, Approx::Feedback, Approx::OutputResistance];

    pub fn name(self) -> &'static str {
        match self {
            Approx::Degenerated => "degenerated",
            Approx::Feedback => "feedback",
            Approx::OutputResistance => "gm_rd_par_ro",
        }
    }

    pub fn gain(self, rd: f64) -> f64 {
        let par = |a: f64, b: f64| a * b / (a + b);
        match self {
            Approx::Degenerated => -GM * rd / (1.0 + GM * RS),
            Approx::Feedback => -(GM - 1.0 / RF) * par(rd, RF),
            Approx::OutputResistance => -GM * par(rd, RO),
        }
    }
}

fn device() -> MosParams {
    MosParams::new(GM, 0.0, ExtResistance::ohms(RO)).expect("positive gm")
}

fn loads(rd: f64) -> LoadSet {
    LoadSet::new(
        ExtResistance::ohms(RS),
        ExtResistance::INF,
        ExtResistance::ohms(rd),
        ExtResistance::ohms(RF),
    )
}

/// Exact gain from the nodal solver.
pub fn exact(rd: f64) -> f64 {
    solve_mos(Quantity::AvCs, &device(), &loads(rd)).expect("well-posed common source")
}

pub fn general(rd: f64) -> f64 {
    mos_eval(Quantity::AvCs, &device(), &loads(rd)).expect("regular point")
}

pub fn error(a: Approx, rd: f64) -> f64 {
    (a.gain(rd) - exact(rd)).abs()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverReport {
    pub rd: Vec<f64>,
    /// Most accurate approximation at each swept point.
    pub best: Vec<Approx>,
    /// First `RD` where the feedback form beats the degenerated one.
    pub feedback_crossover: Option<f64>,
    /// First `RD` where `-gm (RD || ro)` beats the degenerated one.
    pub ro_crossover: Option<f64>,
    /// Worst relative gap between the general formula and the solver.
    pub general_worst_rel: f64,
}

impl CrossoverReport {
    pub fn feedback_in_band(&self) -> bool {
        self.feedback_crossover.is_some_and(|x| (RF / 2.0..=2.0 * RF).contains(&x))
    }

    pub fn ro_in_band(&self) -> bool {
        self.ro_crossover.is_some_and(|x| (RO / 2.0..=2.0 * RO).contains(&x))
    }

    pub fn degenerated_wins_small(&self) -> bool {
        self.best.first() == Some(&Approx::Degenerated)
    }

    pub fn passed(&self) -> bool {
        self.feedback_in_band()
            && self.ro_in_band()
            && self.degenerated_wins_small()
            && self.general_worst_rel < 1e-9
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("RD,oracle,general");
        for a in Approx::ALL {
            let _ = write!(out, ",{}", a.name());
        }
        out.push_str(",best\n");
        for (rd, best) in self.rd.iter().zip(&self.best) {
            let _ = write!(out, "{rd:.16e},{:.16e},{:.16e}", exact(*rd), general(*rd));
            for a in Approx::ALL {
                let _ = write!(out, ",{:.16e}", a.gain(*rd));
            }
            let _ = writeln!(out, ",{}", best.name());
        }
        out
    }
}

impl std::fmt::Display for CrossoverReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |x: Option<f64>| x.map_or("none".to_string(), |v| format!("{v:.1} ohm"));
        writeln!(f, "most accurate at RD = {:.0} ohm: {}", self.rd[0], self.best[0].name())?;
        writeln!(
            f,
            "feedback form overtakes degenerated at {} (band {:.0}..{:.0})",
            show(self.feedback_crossover),
            RF / 2.0,
            2.0 * RF
        )?;
        writeln!(
            f,
            "-gm (RD || ro) overtakes degenerated at {} (band {:.0}..{:.0})",
            show(self.ro_crossover),
            RO / 2.0,
            2.0 * RO
        )?;
        write!(f, "general formula vs solver: worst relative gap {:.2e}", self.general_worst_rel)
    }
}

/// `RD` where `a` first becomes more accurate than the degenerated form,
/// refined by bisection in `ln RD`.
fn crossover(rd: &[f64], a: Approx) -> Option<f64> {
    let beats = |x: f64| error(a, x) < error(Approx::Degenerated, x);
    let k = rd.iter().position(|x| beats(*x))?;
    if k == 0 {
        return Some(rd[0]);
    }
    let (mut lo, mut hi) = (rd[k - 1].ln(), rd[k].ln());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if beats(mid.exp()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi.exp())
}

/// Sweeps `RD` over `points` log-spaced values in [10, 1e6].
pub fn fig1(points: usize) -> CrossoverReport {
    let rd: Vec<f64> = (0..points)
        .map(|i| 10f64 * 1e5f64.powf(i as f64 / (points - 1) as f64))
        .collect();
    let best = rd
        .iter()
        .map(|x| {
            *Approx::ALL
                .iter()
                .min_by(|a, b| error(**a, *x).total_cmp(&error(**b, *x)))
                .expect("three approximations")
        })
        .collect();
    let general_worst_rel = rd
        .iter()
        .map(|x| ((general(*x) - exact(*x)) / exact(*x)).abs())
        .fold(0.0, f64::max);
    CrossoverReport {
        feedback_crossover: crossover(&rd, Approx::Feedback),
        ro_crossover: crossover(&rd, Approx::OutputResistance),
        best,
        rd,
        general_worst_rel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossovers_bracket_rf_and_ro() {
        let r = fig1(241);
        assert!(r.passed(), "{r}");
        let fb = r.feedback_crossover.unwrap();
        let ro = r.ro_crossover.unwrap();
        assert!((fb - 4.47e3).abs() < 20.0, "{fb}");
        assert!((ro - 13.4e3).abs() < 100.0, "{ro}");
    }
}
