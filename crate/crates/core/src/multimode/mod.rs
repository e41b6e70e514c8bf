//! The multimode algebra with generators θ_i, θ̄_i, ∂_i, ∂̄_i.
//!
//! [`rep`] realizes the generators as Kronecker products of single-mode
//! matrices; [`symbolic`] normal-orders words in the θ/θ̄ subalgebra. The two
//! are independent and cross-checked in the tests.

use std::fmt;

pub mod rep;
pub mod symbolic;

pub use rep::{build_multimode, check_relations, monomial_matrix, MultiModeRep, SignVector};
pub use symbolic::{PGAlgebra, PGMonomial, PGPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Theta,
    ThetaBar,
    Partial,
    PartialBar,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Theta, Kind::ThetaBar, Kind::Partial, Kind::PartialBar];
}

/// A generator; `mode` is zero-based and printed one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub kind: Kind,
    pub mode: usize,
}

impl Symbol {
    pub const fn new(kind: Kind, mode: usize) -> Self {
        Symbol { kind, mode }
    }

    pub const fn theta(mode: usize) -> Self {
        Symbol::new(Kind::Theta, mode)
    }

    pub const fn theta_bar(mode: usize) -> Self {
        Symbol::new(Kind::ThetaBar, mode)
    }

    pub const fn partial(mode: usize) -> Self {
        Symbol::new(Kind::Partial, mode)
    }

    pub const fn partial_bar(mode: usize) -> Self {
        Symbol::new(Kind::PartialBar, mode)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            Kind::Theta => "θ",
            Kind::ThetaBar => "θ̄",
            Kind::Partial => "∂",
            Kind::PartialBar => "∂̄",
        };
        write!(f, "{name}{}", self.mode + 1)
    }
}

/// ε_ij = +1 for i > j and -1 for i <= j.
pub fn epsilon(i: usize, j: usize) -> i64 {
    if i > j {
        1
    } else {
        -1
    }
}
