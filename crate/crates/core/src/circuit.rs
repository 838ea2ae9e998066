//! The fixed measuring circuits, described once and shared by the numeric
//! oracle and the symbolic derivation.

use ampgen_symbolic::Sym;

use crate::model::{load_sym, Quantity};

/// Circuit node. `Control` is the base or gate, `Top` the collector or
/// drain, `Low` the emitter or source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Ground,
    Control,
    Top,
    Low,
}

impl Node {
    pub const ALL: [Node; 4] = [Node::Ground, Node::Control, Node::Top, Node::Low];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self, mos: bool) -> &'static str {
        match (self, mos) {
            (Node::Ground, _) => "ground",
            (Node::Control, false) => "base",
            (Node::Top, false) => "collector",
            (Node::Low, false) => "emitter",
            (Node::Control, true) => "gate",
            (Node::Top, true) => "drain",
            (Node::Low, true) => "source",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Element {
    Resistor {
        a: Node,
        b: Node,
        value: Sym,
    },
    /// Current `g*(v(ctrl_pos) - v(ctrl_neg))` flowing from `from` through
    /// the source into `to`.
    Vccs {
        from: Node,
        to: Node,
        ctrl_pos: Node,
        ctrl_neg: Node,
        g: Sym,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Excitation {
    /// Unit voltage at `input`, gain read at `output`.
    Drive { input: Node, output: Node },
    /// Unit current into `node`; its voltage is the impedance.
    TestCurrent { node: Node },
}

#[derive(Clone, Debug)]
pub struct Topology {
    pub mos: bool,
    pub elements: Vec<Element>,
    pub excitation: Excitation,
}

impl Topology {
    pub fn for_quantity(q: Quantity) -> Topology {
        let mos = q.is_mos();
        let mut elements = Vec::with_capacity(7);
        elements.push(Element::Vccs {
            from: Node::Top,
            to: Node::Low,
            ctrl_pos: Node::Control,
            ctrl_neg: Node::Low,
            g: Sym::Gm,
        });
        if mos {
            elements.push(Element::Vccs {
                from: Node::Top,
                to: Node::Low,
                ctrl_pos: Node::Ground,
                ctrl_neg: Node::Low,
                g: Sym::Gmb,
            });
        } else {
            elements.push(Element::Resistor {
                a: Node::Control,
                b: Node::Low,
                value: Sym::Rpi,
            });
        }
        elements.push(Element::Resistor {
            a: Node::Top,
            b: Node::Low,
            value: Sym::Ro,
        });
        for role in q.loads() {
            let value = load_sym(*role, mos);
            let (a, b) = match value {
                Sym::Rf => (Node::Control, Node::Top),
                Sym::Re | Sym::Rs => (Node::Low, Node::Ground),
                Sym::Rb | Sym::Rg => (Node::Control, Node::Ground),
                _ => (Node::Top, Node::Ground),
            };
            elements.push(Element::Resistor { a, b, value });
        }
        let excitation = match q {
            Quantity::AvCe | Quantity::AvCs => Excitation::Drive {
                input: Node::Control,
                output: Node::Top,
            },
            Quantity::AvCb | Quantity::AvCg => Excitation::Drive {
                input: Node::Low,
                output: Node::Top,
            },
            Quantity::AvCc | Quantity::AvCd => Excitation::Drive {
                input: Node::Control,
                output: Node::Low,
            },
            Quantity::RBase | Quantity::RGate => Excitation::TestCurrent {
                node: Node::Control,
            },
            Quantity::REmitter | Quantity::RSource => Excitation::TestCurrent { node: Node::Low },
            Quantity::RCollector | Quantity::RDrain => Excitation::TestCurrent { node: Node::Top },
        };
        Topology {
            mos,
            elements,
            excitation,
        }
    }

    pub fn probe(&self) -> Node {
        match self.excitation {
            Excitation::Drive { output, .. } => output,
            Excitation::TestCurrent { node } => node,
        }
    }

    /// Nodes whose voltages are unknowns, in the order rows are assembled:
    /// the excited node first for impedances, the output first for gains.
    pub fn unknowns(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(3);
        match self.excitation {
            Excitation::TestCurrent { node } => out.push(node),
            Excitation::Drive { output, .. } => out.push(output),
        }
        for n in [Node::Control, Node::Low, Node::Top] {
            let fixed = matches!(self.excitation, Excitation::Drive { input, .. } if input == n);
            if !fixed && !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }
}
