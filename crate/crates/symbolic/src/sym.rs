//! The fixed symbol alphabet.
//!
//! Symbols are ordered `GM < BETA < RO < RF < RE < RB < RC < GMB < RG < RD < RS`.
//! `ALPHA` and `RPI` sit after the independent symbols: they are derived
//! quantities (`alpha = beta/(beta+1)`, `r_pi = beta/g_m`) and are eliminated
//! by [`crate::RatFn::eliminate_derived`] before any equality check.

use std::fmt;
use std::str::FromStr;

/// Number of symbols, including the two derived ones.
pub const NSYMS: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Gm,
    Beta,
    Ro,
    Rf,
    Re,
    Rb,
    Rc,
    Gmb,
    Rg,
    Rd,
    Rs,
    Alpha,
    Rpi,
}

impl Sym {
    pub const ALL: [Sym; NSYMS] = [
        Sym::Gm,
        Sym::Beta,
        Sym::Ro,
        Sym::Rf,
        Sym::Re,
        Sym::Rb,
        Sym::Rc,
        Sym::Gmb,
        Sym::Rg,
        Sym::Rd,
        Sym::Rs,
        Sym::Alpha,
        Sym::Rpi,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Sym {
        Sym::ALL[i]
    }

    /// `ALPHA` and `RPI` are shorthand for expressions in the other symbols.
    pub fn is_derived(self) -> bool {
        matches!(self, Sym::Alpha | Sym::Rpi)
    }

    /// Resistances (ohms), as opposed to transconductances and current gains.
    pub fn is_resistance(self) -> bool {
        matches!(
            self,
            Sym::Ro | Sym::Rf | Sym::Re | Sym::Rb | Sym::Rc | Sym::Rg | Sym::Rd | Sym::Rs | Sym::Rpi
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::Gm => "gm",
            Sym::Beta => "beta",
            Sym::Ro => "ro",
            Sym::Rf => "RF",
            Sym::Re => "RE",
            Sym::Rb => "RB",
            Sym::Rc => "RC",
            Sym::Gmb => "gmb",
            Sym::Rg => "RG",
            Sym::Rd => "RD",
            Sym::Rs => "RS",
            Sym::Alpha => "alpha",
            Sym::Rpi => "rpi",
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown symbol `{0}`")]
pub struct UnknownSymbol(pub String);

impl FromStr for Sym {
    type Err = UnknownSymbol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase().replace('_', "");
        Sym::ALL
            .iter()
            .copied()
            .find(|sym| sym.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| UnknownSymbol(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_matches_index() {
        for (i, s) in Sym::ALL.iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(Sym::from_index(i), *s);
        }
        assert!(Sym::Gm < Sym::Beta && Sym::Rd < Sym::Rs);
    }

    #[test]
    fn parse_names() {
        assert_eq!("R_D".parse::<Sym>().unwrap(), Sym::Rd);
        assert_eq!("gm".parse::<Sym>().unwrap(), Sym::Gm);
        assert!("rx".parse::<Sym>().is_err());
    }
}
