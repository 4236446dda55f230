use std::fmt;

use num_complex::Complex64;

use crate::linalg::{CMatrix, I, ONE, ZERO};

/// Single-qubit Pauli operator, modulo global phase.
///
/// Under composition the four labels form the Klein group Z2 x Z2; the
/// `(x, z)` bit pair is the group coordinate and composition is XOR.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLabel::I,
            (true, false) => PauliLabel::X,
            (true, true) => PauliLabel::Y,
            (false, true) => PauliLabel::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, PauliLabel::X | PauliLabel::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, PauliLabel::Z | PauliLabel::Y)
    }

    /// Product up to phase.
    pub fn compose(self, other: PauliLabel) -> PauliLabel {
        Self::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit())
    }

    pub fn anticommutes(self, other: PauliLabel) -> bool {
        (self.x_bit() & other.z_bit()) ^ (self.z_bit() & other.x_bit())
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            PauliLabel::I => CMatrix::identity(2),
            PauliLabel::X => CMatrix::from_rows(2, vec![ZERO, ONE, ONE, ZERO]),
            PauliLabel::Y => CMatrix::from_rows(2, vec![ZERO, -I, I, ZERO]),
            PauliLabel::Z => CMatrix::from_rows(2, vec![ONE, ZERO, ZERO, -ONE]),
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliLabel::I => "I",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
            PauliLabel::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Two-bit dense-coding symbol. `00 -> I`, `01 -> σx`, `10 -> iσy`, `11 -> σz`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u8);

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol(0), Symbol(1), Symbol(2), Symbol(3)];

    /// Symbol from its bit value `0b_ij`. Only the low two bits are used.
    pub fn new(bits: u8) -> Self {
        Symbol(bits & 3)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn pauli(self) -> PauliLabel {
        match self.0 {
            0 => PauliLabel::I,
            1 => PauliLabel::X,
            2 => PauliLabel::Y,
            _ => PauliLabel::Z,
        }
    }

    pub fn from_pauli(p: PauliLabel) -> Self {
        match p {
            PauliLabel::I => Symbol(0),
            PauliLabel::X => Symbol(1),
            PauliLabel::Y => Symbol(2),
            PauliLabel::Z => Symbol(3),
        }
    }

    /// The exact encoding unitary `U_ij`, phase included.
    pub fn unitary(self) -> CMatrix {
        match self.0 {
            2 => PauliLabel::Y.matrix().scale(I),
            _ => self.pauli().matrix(),
        }
    }

    /// Group difference `self ⊖ other` (equal to composition, every element is its own inverse).
    pub fn difference(self, other: Symbol) -> Symbol {
        Symbol::from_pauli(self.pauli().compose(other.pauli()))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

/// Measurement basis named by the Pauli whose eigenbasis it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn pauli(self) -> PauliLabel {
        match self {
            Basis::Z => PauliLabel::Z,
            Basis::X => PauliLabel::X,
            Basis::Y => PauliLabel::Y,
        }
    }

    /// Eigenvectors for outcome 0 (eigenvalue +1) and outcome 1 (eigenvalue -1).
    pub fn eigenvectors(self) -> [[Complex64; 2]; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            Basis::Z => [[ONE, ZERO], [ZERO, ONE]],
            Basis::X => [[r(h), r(h)], [r(h), r(-h)]],
            Basis::Y => [[r(h), I * h], [r(h), -I * h]],
        }
    }

    pub fn projector(self, outcome: u8) -> CMatrix {
        let v = self.eigenvectors()[(outcome & 1) as usize];
        CMatrix::outer(&v, &v)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Basis::Z => "Z",
            Basis::X => "X",
            Basis::Y => "Y",
        };
        f.write_str(s)
    }
}
