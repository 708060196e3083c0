use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Bond color, identified with the single-site Pauli measured on both endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    X,
    Y,
    Z,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::X, Color::Y, Color::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i % 3]
    }

    /// The color different from both arguments. Panics if they coincide.
    pub fn third(a: Color, b: Color) -> Color {
        assert_ne!(a, b);
        Color::from_index(3 - a.index() - b.index())
    }

    pub fn as_char(self) -> char {
        match self {
            Color::X => 'x',
            Color::Y => 'y',
            Color::Z => 'z',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseColorError(pub String);

impl fmt::Display for ParseColorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a bond color: {:?}", self.0)
    }
}

impl std::error::Error for ParseColorError {}

impl FromStr for Color {
    type Err = ParseColorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Color::X),
            "y" => Ok(Color::Y),
            "z" => Ok(Color::Z),
            _ => Err(ParseColorError(s.to_string())),
        }
    }
}
