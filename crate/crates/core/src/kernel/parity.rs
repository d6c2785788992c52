use std::fmt;
use std::ops::Add;

/// Grassmann parity, the ℤ₂ degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// (−1)^(self·other) as ±1.
    pub fn koszul(self, other: Parity) -> i32 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    /// (−1)^self as ±1.
    pub fn sign(self) -> i32 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" | "0" => Ok(Parity::Even),
            "odd" | "1" => Ok(Parity::Odd),
            other => Err(format!("expected `even` or `odd`, found `{other}`")),
        }
    }
}

/// Result of a homogeneity query. The zero polynomial is homogeneous of
/// every degree and reports [`Degree::Any`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree<T> {
    Any,
    Exactly(T),
    Inhomogeneous,
}

impl<T: PartialEq + Copy> Degree<T> {
    /// True when the value is compatible with degree `d` (zero is compatible with everything).
    pub fn admits(&self, d: T) -> bool {
        match self {
            Degree::Any => true,
            Degree::Exactly(x) => *x == d,
            Degree::Inhomogeneous => false,
        }
    }

    pub fn exact(&self) -> Option<T> {
        match self {
            Degree::Exactly(x) => Some(*x),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, Degree::Inhomogeneous)
    }
}

impl<T: fmt::Display> fmt::Display for Degree<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Any => f.write_str("any (zero)"),
            Degree::Exactly(x) => write!(f, "{x}"),
            Degree::Inhomogeneous => f.write_str("inhomogeneous"),
        }
    }
}
