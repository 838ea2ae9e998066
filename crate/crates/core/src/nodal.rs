//! Numeric nodal analysis of the measuring circuits.
//!
//! Assembly is in conductance form. Open elements contribute nothing and
//! shorted ones merge their nodes, so every matrix entry is finite.
//! Stamping and elimination run in double-double precision; `y` and `rhs`
//! are exposed rounded to `f64`.

use ampgen_symbolic::{Sym, NSYMS};

use crate::circuit::{Element, Excitation, Node, Topology};
use crate::dd::Dd;
use crate::model::{bjt_values, mos_values, GenParams, LoadSet, MosParams, Quantity};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NodalError {
    #[error("{0} is not a {1} quantity")]
    WrongDevice(Quantity, &'static str),
    #[error("ill-posed: the {0} node has no resistive path to a fixed potential")]
    Floating(&'static str),
    #[error("ill-posed: the driven {0} node is shorted to ground")]
    DrivenShorted(&'static str),
    #[error("ill-posed: singular nodal system")]
    Singular,
}

/// Assembled linear system `y * v = rhs` over the unknown node voltages.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalSystem {
    pub y: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    /// One representative node per unknown (merged nodes share a voltage).
    pub unknowns: Vec<Node>,
    yd: Vec<Vec<Dd>>,
    rhsd: Vec<Dd>,
    readout: Readout,
    mos: bool,
    classes: [usize; 4],
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Readout {
    Known(f64),
    Unknown(usize),
}

/// Gain or impedance of a bipolar measuring circuit.
pub fn solve_bjt(q: Quantity, p: &GenParams, loads: &LoadSet) -> Result<f64, NodalError> {
    if q.is_mos() {
        return Err(NodalError::WrongDevice(q, "bipolar"));
    }
    solve(q, &bjt_values(p, loads))
}

/// Gain or impedance of a MOS measuring circuit.
pub fn solve_mos(q: Quantity, p: &MosParams, loads: &LoadSet) -> Result<f64, NodalError> {
    if !q.is_mos() {
        return Err(NodalError::WrongDevice(q, "MOS"));
    }
    solve(q, &mos_values(p, loads))
}

pub(crate) fn solve(q: Quantity, values: &[f64; NSYMS]) -> Result<f64, NodalError> {
    let sys = assemble(q, values)?;
    sys.solve()
}

struct Classes {
    parent: [usize; 4],
}

impl Classes {
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Builds the system for `q` with symbol values taken from `values`.
pub fn assemble(q: Quantity, values: &[f64; NSYMS]) -> Result<NodalSystem, NodalError> {
    let topo = Topology::for_quantity(q);
    let val = |s: Sym| values[s.index()];

    let mut uf = Classes {
        parent: [0, 1, 2, 3],
    };
    for e in &topo.elements {
        if let Element::Resistor { a, b, value } = e {
            if val(*value) == 0.0 {
                uf.union(a.index(), b.index());
            }
        }
    }
    let mut classes = [0usize; 4];
    for n in Node::ALL {
        classes[n.index()] = uf.find(n.index());
    }
    let class = |n: Node| classes[n.index()];

    let ground = class(Node::Ground);
    let mut known: Vec<(usize, f64)> = vec![(ground, 0.0)];
    if let Excitation::Drive { input, .. } = topo.excitation {
        if class(input) == ground {
            return Err(NodalError::DrivenShorted(input.name(topo.mos)));
        }
        known.push((class(input), 1.0));
    }

    let mut unknowns = Vec::new();
    let mut unknown_class = Vec::new();
    for n in topo.unknowns() {
        let c = class(n);
        if known.iter().all(|(k, _)| *k != c) && !unknown_class.contains(&c) {
            unknowns.push(n);
            unknown_class.push(c);
        }
    }
    let index_of = |c: usize| unknown_class.iter().position(|u| *u == c);
    let known_of = |c: usize| known.iter().find(|(k, _)| *k == c).map(|(_, v)| *v);

    let n = unknowns.len();
    let mut y = vec![vec![Dd::ZERO; n]; n];
    let mut rhs = vec![Dd::ZERO; n];
    let mut edges = Vec::new();
    let mut stamp = |row: usize, col: usize, coeff: Dd| {
        if let Some(i) = index_of(row) {
            match index_of(col) {
                Some(j) => y[i][j] += coeff,
                // Known voltages are 0 or 1.
                None => {
                    if known_of(col) == Some(1.0) {
                        rhs[i] -= coeff;
                    }
                }
            }
        }
    };

    for e in &topo.elements {
        match *e {
            Element::Resistor { a, b, value } => {
                let r = val(value);
                let (ca, cb) = (class(a), class(b));
                if r.is_infinite() || ca == cb {
                    continue;
                }
                let g = Dd::from(r).recip();
                stamp(ca, ca, g);
                stamp(ca, cb, -g);
                stamp(cb, cb, g);
                stamp(cb, ca, -g);
                edges.push((ca, cb));
            }
            Element::Vccs {
                from,
                to,
                ctrl_pos,
                ctrl_neg,
                g,
            } => {
                let g = Dd::from(val(g));
                let (cf, ct) = (class(from), class(to));
                let (cp, cn) = (class(ctrl_pos), class(ctrl_neg));
                if cf == ct || cp == cn || g == Dd::ZERO {
                    continue;
                }
                stamp(cf, cp, g);
                stamp(cf, cn, -g);
                stamp(ct, cp, -g);
                stamp(ct, cn, g);
            }
        }
    }

    let probe = class(topo.probe());
    if let Excitation::TestCurrent { node } = topo.excitation {
        if let Some(i) = index_of(class(node)) {
            rhs[i] += Dd::ONE;
        }
    }
    let readout = match index_of(probe) {
        Some(i) => Readout::Unknown(i),
        None => Readout::Known(known_of(probe).unwrap_or(0.0)),
    };

    Ok(NodalSystem {
        y: y.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect(),
        rhs: rhs.iter().map(|v| v.to_f64()).collect(),
        yd: y,
        rhsd: rhs,
        unknowns,
        readout,
        mos: topo.mos,
        classes,
        edges,
    })
}

impl NodalSystem {
    /// Solves the system and returns the probed voltage.
    pub fn solve(&self) -> Result<f64, NodalError> {
        if let Readout::Known(v) = self.readout {
            return Ok(v);
        }
        let x = self.solve_all().ok_or_else(|| self.diagnose())?;
        match self.readout {
            Readout::Unknown(i) => Ok(x[i]),
            Readout::Known(v) => Ok(v),
        }
    }

    /// Full solution vector, or `None` when singular.
    pub fn solve_all(&self) -> Option<Vec<f64>> {
        let lu = Lu::factor(&self.yd)?;
        let mut x = lu.solve(&self.rhsd);
        // One round of refinement against the unscaled system.
        let r: Vec<Dd> = (0..x.len())
            .map(|i| {
                let ax = self.yd[i]
                    .iter()
                    .zip(&x)
                    .fold(Dd::ZERO, |acc, (a, b)| acc + *a * *b);
                self.rhsd[i] - ax
            })
            .collect();
        let d = lu.solve(&r);
        for (xi, di) in x.iter_mut().zip(d) {
            *xi += di;
        }
        x.iter()
            .all(|v| v.is_finite())
            .then(|| x.iter().map(|v| v.to_f64()).collect())
    }

    fn diagnose(&self) -> NodalError {
        let ground = self.classes[Node::Ground.index()];
        let mut reached: Vec<usize> = (0..4)
            .map(|i| self.classes[i])
            .filter(|c| *c == ground || !self.unknown_classes().contains(c))
            .collect();
        loop {
            let before = reached.len();
            for (a, b) in &self.edges {
                if reached.contains(a) && !reached.contains(b) {
                    reached.push(*b);
                } else if reached.contains(b) && !reached.contains(a) {
                    reached.push(*a);
                }
            }
            if reached.len() == before {
                break;
            }
        }
        for n in &self.unknowns {
            if !reached.contains(&self.classes[n.index()]) {
                return NodalError::Floating(n.name(self.mos));
            }
        }
        NodalError::Singular
    }

    fn unknown_classes(&self) -> Vec<usize> {
        self.unknowns
            .iter()
            .map(|n| self.classes[n.index()])
            .collect()
    }
}

const PIVOT_FLOOR: f64 = 1e-13;

/// Row-equilibrated LU factorization with partial pivoting.
struct Lu {
    a: Vec<Vec<Dd>>,
    perm: Vec<usize>,
    scale: Vec<Dd>,
}

impl Lu {
    fn factor(y: &[Vec<Dd>]) -> Option<Lu> {
        let n = y.len();
        let mut scale = Vec::with_capacity(n);
        let mut a = Vec::with_capacity(n);
        for row in y {
            let m = row.iter().fold(0.0f64, |m, v| m.max(v.abs().to_f64()));
            if m == 0.0 {
                return None;
            }
            // A power of two, so scaling is exact.
            let s = Dd::from((-m.log2().floor()).exp2());
            scale.push(s);
            a.push(row.iter().map(|v| *v * s).collect::<Vec<_>>());
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|i, j| {
                    let (x, y) = (a[*i][k].abs().to_f64(), a[*j][k].abs().to_f64());
                    x.total_cmp(&y).then(j.cmp(i))
                })
                .unwrap_or(k);
            if a[p][k].abs().to_f64() <= PIVOT_FLOOR {
                return None;
            }
            a.swap(k, p);
            perm.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in k + 1..n {
                    let t = f * a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        Some(Lu { a, perm, scale })
    }

    fn solve(&self, b: &[Dd]) -> Vec<Dd> {
        let n = self.a.len();
        let mut x: Vec<Dd> = self.perm.iter().map(|i| b[*i] * self.scale[*i]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.a[i][j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.a[i][j] * x[j];
                x[i] -= t;
            }
            x[i] = x[i] / self.a[i][i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExtResistance;

    fn r(x: f64) -> ExtResistance {
        ExtResistance::ohms(x)
    }
    const INF: ExtResistance = ExtResistance::INF;

    fn reference_params() -> GenParams {
        GenParams::bjt(10e-3, 100.0, r(10e3)).unwrap()
    }

    #[test]
    fn follower_reference_value() {
        let loads = LoadSet::new(r(100.0), INF, r(1000.0), INF);
        let v = solve_bjt(Quantity::AvCc, &reference_params(), &loads).unwrap();
        assert!((v - 0.48).abs() < 0.005);
        assert!((v - 0.476_661_951_909_476_63).abs() < 1e-14);
    }

    #[test]
    fn plain_common_emitter() {
        let p = GenParams::bjt(10e-3, 100.0, INF).unwrap();
        let loads = LoadSet::new(r(0.0), INF, r(1000.0), INF);
        let v = solve_bjt(Quantity::AvCe, &p, &loads).unwrap();
        assert!((v + 10.0).abs() < 1e-12);
    }

    #[test]
    fn body_effect_source_resistance() {
        let p = MosParams::new(10e-3, 1e-3, INF).unwrap();
        let loads = LoadSet::new(INF, r(1e3), r(0.0), INF);
        let v = solve_mos(Quantity::RSource, &p, &loads).unwrap();
        assert!((v - 1.0 / 11e-3).abs() < 1e-10);
    }

    #[test]
    fn undegenerated_drain_is_ro() {
        let p = MosParams::new(9.36e-3, 0.0, r(14.4e3)).unwrap();
        for rg in [r(0.0), r(100.0), r(1e6)] {
            let loads = LoadSet::new(r(0.0), rg, INF, INF);
            let v = solve_mos(Quantity::RDrain, &p, &loads).unwrap();
            assert!((v - 14.4e3).abs() < 1e-8, "{rg}: {v}");
        }
        let loads = LoadSet::new(r(0.0), INF, INF, INF);
        assert_eq!(
            solve_mos(Quantity::RDrain, &p, &loads),
            Err(NodalError::Floating("gate"))
        );
    }

    #[test]
    fn floating_collector_is_named() {
        let p = GenParams::bjt(10e-3, 100.0, INF).unwrap();
        let loads = LoadSet::new(r(100.0), r(100.0), INF, INF);
        let err = solve_bjt(Quantity::RCollector, &p, &loads).unwrap_err();
        assert_eq!(err, NodalError::Floating("collector"));
    }

    #[test]
    fn shorted_drive_is_rejected() {
        let p = reference_params();
        let loads = LoadSet::new(r(100.0), INF, r(0.0), r(0.0));
        assert_eq!(
            solve_bjt(Quantity::AvCe, &p, &loads),
            Err(NodalError::DrivenShorted("base"))
        );
    }

    #[test]
    fn wrong_device_rejected() {
        let loads = LoadSet::open();
        assert!(solve_bjt(Quantity::AvCs, &reference_params(), &loads).is_err());
    }

    #[test]
    fn merged_probe_reads_known_voltage() {
        let p = reference_params();
        let loads = LoadSet::new(r(100.0), INF, r(1e3), r(0.0));
        // Collector tied to the driven base.
        assert_eq!(solve_bjt(Quantity::AvCe, &p, &loads), Ok(1.0));
        let loads = LoadSet::new(r(100.0), INF, r(0.0), r(1e3));
        assert_eq!(solve_bjt(Quantity::AvCe, &p, &loads), Ok(0.0));
    }

    #[test]
    fn common_emitter_matrix() {
        let p = reference_params();
        let (re, rc, rf) = (100.0, 1000.0, 5000.0);
        let loads = LoadSet::new(r(re), INF, r(rc), r(rf));
        let sys = assemble(Quantity::AvCe, &bjt_values(&p, &loads)).unwrap();
        let (gm, ro, rpi) = (10e-3, 10e3, 10e3);
        assert_eq!(sys.unknowns, vec![Node::Top, Node::Low]);
        let want = [
            [1.0 / rc + 1.0 / rf + 1.0 / ro, -gm - 1.0 / ro],
            [-1.0 / ro, gm + 1.0 / rpi + 1.0 / re + 1.0 / ro],
        ];
        let want_rhs = [-gm + 1.0 / rf, gm + 1.0 / rpi];
        for i in 0..2 {
            assert!((sys.rhs[i] - want_rhs[i]).abs() < 1e-15);
            for j in 0..2 {
                assert!((sys.y[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn repeat_solves_are_identical() {
        let p = reference_params();
        let loads = LoadSet::new(r(123.0), r(4567.0), r(891.0), r(23456.0));
        for q in &Quantity::ALL[..6] {
            let a = solve_bjt(*q, &p, &loads).unwrap();
            let b = solve_bjt(*q, &p, &loads).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
