use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A three-valued truth value, ordered `Zero < Half < One`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tri {
    Zero,
    Half,
    One,
}

impl Tri {
    pub const ALL: [Tri; 3] = [Tri::Zero, Tri::Half, Tri::One];
    pub const CRISP: [Tri; 2] = [Tri::Zero, Tri::One];

    /// Kleene negation `1 - v`.
    pub fn not(self) -> Tri {
        match self {
            Tri::Zero => Tri::One,
            Tri::Half => Tri::Half,
            Tri::One => Tri::Zero,
        }
    }

    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::One
        } else {
            Tri::Zero
        }
    }

    pub fn is_crisp(self) -> bool {
        self != Tri::Half
    }

    /// Caminada label: `in`, `out` or `und`.
    pub fn label(self) -> &'static str {
        match self {
            Tri::Zero => "out",
            Tri::Half => "und",
            Tri::One => "in",
        }
    }

    pub(crate) fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub(crate) fn from_index(i: u8) -> Tri {
        Tri::ALL[i as usize]
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Zero => "0",
            Tri::Half => "½",
            Tri::One => "1",
        })
    }
}

impl FromStr for Tri {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" | "out" => Ok(Tri::Zero),
            "½" | "1/2" | "0.5" | "und" => Ok(Tri::Half),
            "1" | "in" => Ok(Tri::One),
            other => Err(Error::Input(format!("not a truth value: `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_swaps_crisp_values() {
        assert_eq!(Tri::Zero.not(), Tri::One);
        assert_eq!(Tri::One.not(), Tri::Zero);
        assert_eq!(Tri::Half.not(), Tri::Half);
    }

    #[test]
    fn order_and_crispness() {
        assert!(Tri::Zero < Tri::Half && Tri::Half < Tri::One);
        assert!(Tri::from_bool(true).is_crisp());
        assert!(!Tri::Half.is_crisp());
    }
}
