use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Qubit order: `a` on bits `0..w`, `b` on `w..2w`, `r` on `2w`, the
/// ancilla on `2w+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    width: u32,
}

impl RegisterLayout {
    pub fn new(width: u32) -> Result<Self> {
        if width == 0 || width > 30 {
            return Err(Error::param("width", format!("{width} not in 1..=30")));
        }
        Ok(RegisterLayout { width })
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn qubits(self) -> u32 {
        2 * self.width + 2
    }

    pub fn name_mask(self) -> u64 {
        (1u64 << self.width) - 1
    }

    pub fn a_qubit(self, l: u32) -> u32 {
        l
    }

    pub fn b_qubit(self, l: u32) -> u32 {
        self.width + l
    }

    pub fn r_qubit(self) -> u32 {
        2 * self.width
    }

    pub fn ancilla_qubit(self) -> u32 {
        2 * self.width + 1
    }

    pub fn index(self, a: u64, b: u64, r: bool, anc: bool) -> u64 {
        a | (b << self.width)
            | (u64::from(r) << (2 * self.width))
            | (u64::from(anc) << (2 * self.width + 1))
    }

    pub fn split(self, idx: u64) -> (u64, u64, bool, bool) {
        let m = self.name_mask();
        (
            idx & m,
            (idx >> self.width) & m,
            (idx >> (2 * self.width)) & 1 == 1,
            (idx >> (2 * self.width + 1)) & 1 == 1,
        )
    }
}
