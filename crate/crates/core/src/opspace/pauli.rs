//! Pauli strings: labels of the tensor-product measurement basis.
//!
//! Site 0 is the leftmost tensor factor and the most significant bit of a
//! computational-basis index, with `|↑⟩ = |0⟩`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Subscript used for σ_0..σ_3.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// 2x2 matrix in row-major order.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn signs(self) -> bool {
        matches!(self, Pauli::Y | Pauli::Z)
    }
}

/// A tensor product of single-site Pauli operators, one label per site.
///
/// Ordering is lexicographic in site order with `I < X < Y < Z`, which is also
/// the order of the base-4 [`PauliString::index`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(labels: Vec<Pauli>) -> Self {
        PauliString(labels)
    }

    pub fn identity(num_sites: usize) -> Self {
        PauliString(vec![Pauli::I; num_sites])
    }

    /// The string whose base-4 digits (site 0 most significant) spell `index`.
    pub fn from_index(num_sites: usize, mut index: usize) -> Self {
        let mut labels = vec![Pauli::I; num_sites];
        for slot in labels.iter_mut().rev() {
            *slot = Pauli::ALL[index % 4];
            index /= 4;
        }
        PauliString(labels)
    }

    /// All `4^m` strings in lexicographic order.
    pub fn all(num_sites: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * num_sites)).map(move |i| PauliString::from_index(num_sites, i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, p| acc * 4 + p.index())
    }

    /// Digit form, e.g. `"03"` for `IZ`.
    pub fn digits(&self) -> String {
        self.0
            .iter()
            .map(|p| char::from(b'0' + p.index() as u8))
            .collect()
    }

    fn mask(&self, pick: impl Fn(Pauli) -> bool) -> usize {
        let m = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &p)| pick(p))
            .fold(0, |acc, (k, _)| acc | 1 << (m - 1 - k))
    }

    /// Column of the single nonzero entry in `row`, and its value.
    ///
    /// Every Pauli string is a signed permutation matrix up to powers of `i`;
    /// this gives O(1) access without materializing the matrix.
    pub fn row_entry(&self, row: usize) -> (usize, Complex64) {
        let flip = self.mask(Pauli::flips);
        let sign = self.mask(Pauli::signs);
        let n_y = self.0.iter().filter(|&&p| p == Pauli::Y).count();
        entry(row, flip, sign, n_y)
    }

    pub(crate) fn masks(&self) -> (usize, usize, usize) {
        let n_y = self.0.iter().filter(|&&p| p == Pauli::Y).count();
        (self.mask(Pauli::flips), self.mask(Pauli::signs), n_y)
    }
}

pub(crate) fn entry(row: usize, flip: usize, sign: usize, n_y: usize) -> (usize, Complex64) {
    // Y = -i·(-1)^r on its flipped entry, Z = (-1)^r.
    let base = match n_y % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let value = if (row & sign).count_ones() % 2 == 1 {
        -base
    } else {
        base
    };
    (row ^ flip, value)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts letter form (`"XZ"`) or digit form (`"13"`), not a mix.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidPauliLabel(s.to_string()));
        }
        let digits = s.chars().all(|c| c.is_ascii_digit());
        let labels = s
            .chars()
            .map(|c| {
                if digits {
                    c.to_digit(10).and_then(|d| Pauli::from_index(d as usize))
                } else {
                    match c.to_ascii_uppercase() {
                        'I' => Some(Pauli::I),
                        'X' => Some(Pauli::X),
                        'Y' => Some(Pauli::Y),
                        'Z' => Some(Pauli::Z),
                        _ => None,
                    }
                }
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidPauliLabel(s.to_string()))?;
        Ok(PauliString(labels))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
