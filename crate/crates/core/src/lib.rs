//! Small-signal gain and impedance of single-transistor amplifier stages.
//!
//! Every printed formula is evaluated against an independent nodal solver
//! and proved against a symbolic derivation.

pub mod circuit;
pub mod closed_form;
mod dd;
pub mod formula;
pub mod identity;
pub mod model;
pub mod nodal;
pub mod reciprocity;
pub mod sample;
pub mod table;

pub use closed_form::{
    aux, blackman_rb, bjt_eval, cascode_rc_limits, effective_cb, effective_ce, mos_eval,
    open_terminal_equiv, pin_loads, CascodeLimits, EffectiveCB, EffectiveCE, OpenTerminalKind,
    OpenTerminalParent,
};
pub use formula::{EvalError, Formula, Pin};
pub use model::{
    parallel, Device, ExtResistance, GenParams, LoadRole, LoadSet, ModelError, MosParams,
    Quantity, Variant,
};
pub use nodal::{solve_bjt, solve_mos, NodalError, NodalSystem};
pub use table::{row_for, rows, Row};
