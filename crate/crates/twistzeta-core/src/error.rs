use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input.
    Input(String),
    /// The multiplication table violates associativity at the given triple.
    NotAssociative(usize, usize, usize),
    /// A closure or table exceeds the configured order cap.
    TooLarge(usize),
    /// The designated subgroup is not normal.
    NotNormal,
    /// The designated subgroup is not a `p`-group for the configured prime.
    NotPGroup(u64),
    /// `HN` differs from the group the transversal was requested for.
    NotComplementSpanning,
    DivisionByZero,
    /// No monomial pair was found for a character.
    MonomialSearchExhausted,
    /// A conjugating element moves the character outside its twist class.
    NotInTwistStabilizer,
    /// The factor sets of two classes are not cohomologous.
    CInvariantsDiffer,
    /// An internal consistency check failed.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(s) => write!(f, "invalid input: {}", s),
            Error::NotAssociative(a, b, c) => {
                write!(f, "table is not associative at ({}, {}, {})", a, b, c)
            }
            Error::TooLarge(n) => write!(f, "group order exceeds the cap of {}", n),
            Error::NotNormal => write!(f, "subgroup is not normal"),
            Error::NotPGroup(p) => write!(f, "subgroup is not a {}-group", p),
            Error::NotComplementSpanning => write!(f, "not a complement-spanning subgroup"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::MonomialSearchExhausted => write!(f, "monomial search exhausted"),
            Error::NotInTwistStabilizer => {
                write!(f, "element does not stabilise the twist class")
            }
            Error::CInvariantsDiffer => write!(f, "C-invariants differ"),
            Error::Internal(s) => write!(f, "internal check failed: {}", s),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
