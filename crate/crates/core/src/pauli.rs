//! n-qubit Pauli operators in binary symplectic form.
//!
//! An operator is stored as `i^phase · X^x Z^z`, with the single-qubit
//! convention `Y = iXZ`. Text forms put qubit 1 leftmost, and every index that
//! crosses the public API is 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: BitVec,
    z: BitVec,
    phase: u8,
}

/// Sign prefixes in the order they must be tried when parsing.
const PREFIXES: [(&str, u8); 4] = [("+i", 1), ("-i", 3), ("+", 0), ("-", 2)];

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self { n, x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    /// Builds `i^phase · X^x Z^z` directly from its symplectic parts.
    pub fn from_parts(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch { left: x.len(), right: z.len() });
        }
        Ok(Self { n: x.len(), x, z, phase: phase & 3 })
    }

    /// The Hermitian operator with coefficient +1 and the given symplectic parts.
    pub fn unsigned_from_bits(x: BitVec, z: BitVec) -> Self {
        let y = x.and_count(&z);
        Self { n: x.len(), x, z, phase: (y & 3) as u8 }
    }

    /// Splits a `2n`-bit symplectic row `(x | z)` into an unsigned operator.
    pub fn from_symplectic(row: &BitVec) -> Self {
        let n = row.len() / 2;
        Self::unsigned_from_bits(row.slice(0, n), row.slice(n, n))
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let n = letters.len();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for (q, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x.set(q, xb);
            z.set(q, zb);
        }
        Self::unsigned_from_bits(x, z)
    }

    /// Parses an optional sign prefix (`+`, `-`, `+i`, `-i`) followed by exactly
    /// `n` letters from `IXYZ`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let (body, coeff) = PREFIXES
            .iter()
            .find_map(|(p, c)| text.strip_prefix(p).map(|rest| (rest, *c)))
            .unwrap_or((text, 0));
        let offset = text.len() - body.len();
        let mut letters = Vec::with_capacity(n);
        for (i, ch) in body.chars().enumerate() {
            match Letter::from_char(ch) {
                Some(l) => letters.push(l),
                None => return Err(Error::IllegalCharacter { ch, position: offset + i }),
            }
        }
        if letters.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: letters.len() });
        }
        let mut op = Self::from_letters(&letters);
        op.phase = (op.phase + coeff) & 3;
        Ok(op)
    }

    /// Parses a string whose length fixes `n`.
    pub fn parse_any(text: &str) -> Result<Self> {
        let body = PREFIXES
            .iter()
            .find_map(|(p, _)| text.trim().strip_prefix(p))
            .unwrap_or(text.trim());
        Self::parse(text, body.chars().count())
    }

    /// Parses the indexed form used in prose, e.g. `Y2Y3X5` or `-Z1X4`.
    pub fn parse_sparse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let (body, coeff) = PREFIXES
            .iter()
            .find_map(|(p, c)| text.strip_prefix(p).map(|rest| (rest, *c)))
            .unwrap_or((text, 0));
        let mut letters = vec![Letter::I; n];
        let chars: Vec<char> = if body == "I" { Vec::new() } else { body.chars().collect() };
        let mut i = 0;
        while i < chars.len() {
            let letter = Letter::from_char(chars[i])
                .ok_or(Error::IllegalCharacter { ch: chars[i], position: i })?;
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let digits: String = chars[start..end].iter().collect();
            let q: usize = digits.parse().map_err(|_| Error::IllegalCharacter {
                ch: chars.get(start).copied().unwrap_or(' '),
                position: start,
            })?;
            if q == 0 || q > n {
                return Err(Error::InvalidSubset { subset: vec![q], n });
            }
            letters[q - 1] = letter;
            i = end;
        }
        let mut op = Self::from_letters(&letters);
        op.phase = (op.phase + coeff) & 3;
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    /// Exponent `p` in `i^p · X^x Z^z`.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    fn y_count(&self) -> u32 {
        self.x.and_count(&self.z)
    }

    /// Exponent `e` such that the operator equals `i^e` times its letter string.
    pub fn coefficient_exp(&self) -> u8 {
        ((self.phase as u32 + 4 - (self.y_count() & 3)) & 3) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        self.coefficient_exp() & 1 == 0
    }

    /// `Some(+1)` or `Some(-1)` for Hermitian operators.
    pub fn sign(&self) -> Option<i8> {
        match self.coefficient_exp() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// The same letters with coefficient +1.
    pub fn unsigned(&self) -> Self {
        Self::unsigned_from_bits(self.x.clone(), self.z.clone())
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.phase = (out.phase + 2) & 3;
        out
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn same_up_to_phase(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Letter on qubit `q` (0-based).
    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Letters only, without any sign prefix.
    pub fn letter_string(&self) -> String {
        (0..self.n).map(|q| self.letter(q).as_char()).collect()
    }

    /// Indexed form, e.g. `Y2Y3X5`; identity renders as `I`.
    pub fn sparse_string(&self) -> String {
        let mut s = String::from(self.sign_prefix());
        let body: String = (0..self.n)
            .filter(|&q| self.letter(q) != Letter::I)
            .map(|q| format!("{}{}", self.letter(q).as_char(), q + 1))
            .collect();
        if body.is_empty() {
            s.push('I');
        } else {
            s.push_str(&body);
        }
        s
    }

    fn sign_prefix(&self) -> &'static str {
        match self.coefficient_exp() {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }

    /// Symplectic row `(x | z)` of length `2n`.
    pub fn symplectic_row(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Support as a bit mask over 0-based qubits.
    pub fn support_mask(&self) -> BitVec {
        self.x.or(&self.z)
    }

    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    /// Weight and 1-based support.
    pub fn weight_support(&self) -> (usize, BTreeSet<usize>) {
        let support: BTreeSet<usize> = self.support_mask().ones().map(|q| q + 1).collect();
        (support.len(), support)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        // X^a1 Z^b1 X^a2 Z^b2 = (-1)^{b1·a2} X^{a1+a2} Z^{b1+b2}
        let swaps = self.z.and_count(&other.x);
        let phase = (self.phase as u32 + other.phase as u32 + 2 * (swaps & 1)) & 3;
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        Ok(Self { n: self.n, x, z, phase: phase as u8 })
    }

    /// In-place right multiplication, `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let swaps = self.z.and_count(&other.x);
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * (swaps & 1)) & 3) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(!self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &Self) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) & 1 == 1
    }

    /// Right cyclic shift by `k`: qubit `q` of the result carries the letter of
    /// qubit `q - k` (mod n) of `self`. The phase is unchanged.
    pub fn cyclic_shift(&self, k: usize) -> Self {
        if self.n == 0 {
            return self.clone();
        }
        let k = k % self.n;
        let shift = |v: &BitVec| BitVec::from_indices(self.n, v.ones().map(|q| (q + k) % self.n));
        Self { n: self.n, x: shift(&self.x), z: shift(&self.z), phase: self.phase }
    }

    /// Restriction to the listed 0-based qubits, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> Self {
        let letters: Vec<Letter> = qubits.iter().map(|&q| self.letter(q)).collect();
        Self::from_letters(&letters)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign_prefix(), self.letter_string())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.try_mul(rhs).expect("qubit count mismatch")
    }
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PauliOperator::parse_any(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse_any(s).unwrap()
    }

    #[test]
    fn parse_sets_symplectic_bits() {
        let op = PauliOperator::parse("XZZXI", 5).unwrap();
        assert_eq!(op.x_bits(), &BitVec::from_indices(5, [0, 3]));
        assert_eq!(op.z_bits(), &BitVec::from_indices(5, [1, 2]));
        assert_eq!(op.phase_exp(), 0);
        assert_eq!(op.to_string(), "XZZXI");
    }

    #[test]
    fn parse_identity_and_prefixes() {
        let id = PauliOperator::parse("IIII", 4).unwrap();
        assert_eq!(id.weight(), 0);
        assert_eq!(id, PauliOperator::identity(4));
        assert_eq!(p("-YYX").to_string(), "-YYX");
        assert_eq!(p("+i XZ".replace(' ', "").as_str()).to_string(), "+iXZ");
        assert_eq!(p("-iY").coefficient_exp(), 3);
        assert_eq!(p("+Z").to_string(), "Z");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            PauliOperator::parse("XZZX", 5),
            Err(Error::LengthMismatch { expected: 5, found: 4 })
        );
        assert_eq!(
            PauliOperator::parse("XQZ", 3),
            Err(Error::IllegalCharacter { ch: 'Q', position: 1 })
        );
        assert!(matches!(PauliOperator::parse("-XaZ", 3), Err(Error::IllegalCharacter { position: 2, .. })));
    }

    #[test]
    fn single_qubit_products() {
        // X·Z = -iY under Y = iXZ
        let xz = &p("X") * &p("Z");
        assert_eq!(xz.to_string(), "-iY");
        assert_eq!((&p("X") * &p("X")).to_string(), "I");
        assert_eq!((&p("Z") * &p("X")).to_string(), "+iY");
        assert_eq!((&p("Y") * &p("Y")).to_string(), "I");
    }

    #[test]
    fn five_qubit_generator_product() {
        assert_eq!((&p("XZZXI") * &p("IXZZX")).to_string(), "XYIYX");
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes_with(&p("Z")).unwrap());
        let z13 = PauliOperator::parse_sparse("Z1Z3", 4).unwrap();
        let zbar = PauliOperator::parse_sparse("Y1X2Z4", 4).unwrap();
        assert!(!z13.commutes_with(&zbar).unwrap());
        assert!(p("XZZXI").commutes_with(&p("IXZZX")).unwrap());
        assert!(matches!(p("XX").commutes_with(&p("X")), Err(Error::DimensionMismatch { .. })));
        assert!(p("XX").try_mul(&p("X")).is_err());
    }

    #[test]
    fn weight_and_support() {
        let (w, s) = p("XZZXI").weight_support();
        assert_eq!(w, 4);
        assert_eq!(s, BTreeSet::from([1, 2, 3, 4]));
        assert_eq!(PauliOperator::identity(3).weight_support(), (0, BTreeSet::new()));
        let (w, s) = PauliOperator::parse_sparse("Y2Y3X5", 5).unwrap().weight_support();
        assert_eq!(w, 3);
        assert_eq!(s, BTreeSet::from([2, 3, 5]));
    }

    #[test]
    fn cyclic_shifts() {
        let g = p("XZZXI");
        assert_eq!(g.cyclic_shift(1).to_string(), "IXZZX");
        assert_eq!(g.cyclic_shift(0), g);
        assert_eq!(g.cyclic_shift(3).cyclic_shift(2), g);
        assert_eq!(p("-YIZ").cyclic_shift(1).to_string(), "-ZYI");
    }

    #[test]
    fn sparse_form_round_trips() {
        let op = PauliOperator::parse_sparse("-Y2Y3X5", 5).unwrap();
        assert_eq!(op.to_string(), "-IYYIX");
        assert_eq!(op.sparse_string(), "-Y2Y3X5");
        assert_eq!(PauliOperator::identity(2).sparse_string(), "I");
        assert!(PauliOperator::parse_sparse("X6", 5).is_err());
    }

    #[test]
    fn hermiticity_and_sign() {
        assert!(p("-YYX").is_hermitian());
        assert_eq!(p("-YYX").sign(), Some(-1));
        assert!(!p("+iX").is_hermitian());
        assert_eq!(p("+iX").sign(), None);
        assert_eq!(p("-iY").unsigned().to_string(), "Y");
    }
}
