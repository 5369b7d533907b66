use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::PolyError;

/// A polynomial variable.
///
/// Chern classes `c_i` carry weight `i`; every other variable has weight 1.
/// Variables are totally ordered as
/// `c1 < c2 < … < H < K < xi < l1 < l2 < … < t1 < t2 < …`,
/// which fixes the monomial order used for canonical printing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Var {
    /// Chern class `c_i` of the standard representation, `i >= 1`.
    C(u16),
    /// Hyperplane class on the projectivised quadric space.
    H,
    /// Hyperplane class on the projectivised dual standard representation.
    K,
    /// Generic tautological class on a projective bundle.
    Xi,
    /// Chern root `l_i` of the dual standard representation.
    L(u16),
    /// Torus character class `t_i = -l_i`.
    T(u16),
}

impl Var {
    fn rank(&self) -> (u8, u16) {
        match *self {
            Var::C(i) => (0, i),
            Var::H => (1, 0),
            Var::K => (2, 0),
            Var::Xi => (3, 0),
            Var::L(i) => (4, i),
            Var::T(i) => (5, i),
        }
    }

    pub fn weight(&self) -> u32 {
        match *self {
            Var::C(i) => u32::from(i),
            _ => 1,
        }
    }

    pub fn is_root(&self) -> bool {
        matches!(self, Var::L(_))
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn to_latex(&self) -> String {
        match *self {
            Var::C(i) => format!("c_{{{i}}}"),
            Var::H => "H".into(),
            Var::K => "K".into(),
            Var::Xi => "\\xi".into(),
            Var::L(i) => format!("l_{{{i}}}"),
            Var::T(i) => format!("t_{{{i}}}"),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::C(i) => write!(f, "c{i}"),
            Var::H => write!(f, "H"),
            Var::K => write!(f, "K"),
            Var::Xi => write!(f, "xi"),
            Var::L(i) => write!(f, "l{i}"),
            Var::T(i) => write!(f, "t{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::UnknownVariable(s.to_string());
        match s {
            "H" => return Ok(Var::H),
            "K" => return Ok(Var::K),
            "xi" => return Ok(Var::Xi),
            _ => {}
        }
        let (head, digits) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        if digits.starts_with('0') {
            return Err(bad());
        }
        let index: u16 = digits.parse().map_err(|_| bad())?;
        match head {
            "c" => Ok(Var::C(index)),
            "l" => Ok(Var::L(index)),
            "t" => Ok(Var::T(index)),
            _ => Err(bad()),
        }
    }
}
