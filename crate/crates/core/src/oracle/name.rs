use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A fixed-width bit string naming a vertex. The all-ones string of each
/// width is reserved and never names a vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct VertexName {
    bits: u64,
    width: u32,
}

impl VertexName {
    pub const MAX_WIDTH: u32 = 62;

    pub fn new(bits: u64, width: u32) -> Result<Self> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(Error::param(
                "width",
                format!("{width} not in 1..={}", Self::MAX_WIDTH),
            ));
        }
        if bits >> width != 0 {
            return Err(Error::param(
                "bits",
                format!("{bits:#x} does not fit in {width} bits"),
            ));
        }
        Ok(VertexName { bits, width })
    }

    pub(crate) const fn raw(bits: u64, width: u32) -> Self {
        VertexName { bits, width }
    }

    pub fn zero(width: u32) -> Self {
        VertexName { bits: 0, width }
    }

    /// The reserved `11...1` string.
    pub fn invalid(width: u32) -> Self {
        VertexName {
            bits: Self::mask(width),
            width,
        }
    }

    pub fn mask(width: u32) -> u64 {
        (1u64 << width) - 1
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn is_invalid(self) -> bool {
        self.bits == Self::mask(self.width)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let width = s.len() as u32;
        if width == 0 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::param("name", format!("`{s}` is not a bit string")));
        }
        let bits = u64::from_str_radix(s, 2).map_err(|e| Error::param("name", e.to_string()))?;
        Self::new(bits, width)
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0w$b}", self.bits, w = self.width as usize)
    }
}

/// Edge color: a letter `A`..`C` from the even-column endpoint and a digit
/// `1`..`3` from the odd-column endpoint. Index `3*letter + digit`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Color(u8);

impl Color {
    pub const COUNT: usize = 9;

    pub fn new(letter: u8, digit: u8) -> Result<Self> {
        if letter > 2 || digit > 2 {
            return Err(Error::param(
                "color",
                format!("({letter}, {digit}) out of range"),
            ));
        }
        Ok(Color(letter * 3 + digit))
    }

    pub fn from_index(i: usize) -> Result<Self> {
        if i >= Self::COUNT {
            return Err(Error::param("color", format!("index {i} out of range")));
        }
        Ok(Color(i as u8))
    }

    pub fn all() -> impl Iterator<Item = Color> {
        (0..Self::COUNT as u8).map(Color)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self) -> u8 {
        self.0 / 3
    }

    pub fn digit(self) -> u8 {
        self.0 % 3
    }

    pub fn parse(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        if b.len() != 2 || !(b'A'..=b'C').contains(&b[0]) || !(b'1'..=b'3').contains(&b[1]) {
            return Err(Error::param("color", format!("`{s}` is not one of A1..C3")));
        }
        Color::new(b[0] - b'A', b[1] - b'1')
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'A' + self.letter()) as char, self.digit() + 1)
    }
}
