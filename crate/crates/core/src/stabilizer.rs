//! Stabilizer groups, their centralizers, and the logical-operator classes used
//! by the undeterminedness analysis.
//!
//! Everything that enumerates is exact and capped by [`Limits`]; exceeding a
//! cap is an error rather than a signal to start sampling.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{gray, BitVec, Echelon};
use crate::pauli::PauliOperator;

/// Enumeration caps shared by every exhaustive routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest group rank whose `2^rank` elements may be listed.
    pub max_rank: usize,
    /// Largest qubit count for which centralizer spans are listed.
    pub max_enum_n: usize,
    /// Largest qubit count handed to the dense oracle.
    pub oracle_max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_rank: 20, max_enum_n: 16, oracle_max_n: 10 }
    }
}

impl Limits {
    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if rank > self.max_rank {
            return Err(Error::CapExceeded { what: "rank", value: rank, cap: self.max_rank });
        }
        Ok(())
    }

    pub(crate) fn check_enum_n(&self, n: usize) -> Result<()> {
        if n > self.max_enum_n {
            return Err(Error::CapExceeded { what: "n", value: n, cap: self.max_enum_n });
        }
        Ok(())
    }

    pub(crate) fn check_oracle_n(&self, n: usize) -> Result<()> {
        if n > self.oracle_max_n {
            return Err(Error::CapExceeded { what: "oracle n", value: n, cap: self.oracle_max_n });
        }
        Ok(())
    }
}

/// A validated, independent, commuting generator set whose group excludes `-I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerGroup {
    /// Validates `generators`. Generator indices in errors are 1-based.
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParams("empty generator list".into()));
        };
        let n = first.n();
        for g in &generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: g.n() });
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if a.anticommutes_unchecked(b) {
                    return Err(Error::NonCommuting(i + 1, j + 1));
                }
            }
        }
        // A non-Hermitian Pauli squares to -I.
        if generators.iter().any(|g| !g.is_hermitian()) {
            return Err(Error::MinusIdentity);
        }
        let rows: Vec<BitVec> = generators.iter().map(|g| g.symplectic_row()).collect();
        let echelon = Echelon::new(&rows, 2 * n);
        let mut first_dependent = None;
        for dep in &echelon.dependencies {
            let subset: Vec<usize> = dep.ones().collect();
            let mut product = PauliOperator::identity(n);
            for &i in &subset {
                product.mul_assign_right(&generators[i]);
            }
            if product.sign() == Some(-1) {
                return Err(Error::MinusIdentity);
            }
            first_dependent.get_or_insert_with(|| subset.iter().map(|i| i + 1).collect());
        }
        if let Some(subset) = first_dependent {
            return Err(Error::Dependent(subset));
        }
        Ok(Self { n, generators })
    }

    /// The rank-0 group `{I}`.
    pub fn trivial(n: usize) -> Self {
        Self { n, generators: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// All `2^rank` signed elements; element `m` is the product of the
    /// generators selected by the bits of `m`.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<PauliOperator>> {
        self.coset(&PauliOperator::identity(self.n), limits)
    }

    /// `rep · s` for every `s` in the group, indexed like [`Self::elements`].
    pub fn coset(&self, rep: &PauliOperator, limits: &Limits) -> Result<Vec<PauliOperator>> {
        if rep.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: rep.n() });
        }
        let r = self.rank();
        limits.check_rank(r)?;
        let total = 1u64 << r;
        let mut out = vec![PauliOperator::identity(self.n); total as usize];
        let mut current = rep.clone();
        out[0] = current.clone();
        for i in 1..total {
            let flip = (gray(i) ^ gray(i - 1)).trailing_zeros() as usize;
            current.mul_assign_right(&self.generators[flip]);
            out[gray(i) as usize] = current.clone();
        }
        Ok(out)
    }

    /// Whether `op` equals some group element up to phase.
    pub fn contains_up_to_phase(&self, op: &PauliOperator) -> bool {
        self.signed_match(op).is_some()
    }

    /// The group element with the same letters as `op`, with its true sign.
    pub fn signed_match(&self, op: &PauliOperator) -> Option<PauliOperator> {
        if op.n() != self.n {
            return None;
        }
        if op.is_identity_up_to_phase() {
            return Some(PauliOperator::identity(self.n));
        }
        let mut rows: Vec<BitVec> = self.generators.iter().map(|g| g.symplectic_row()).collect();
        rows.push(op.symplectic_row());
        let last = rows.len() - 1;
        let echelon = Echelon::new(&rows, 2 * self.n);
        let dep = echelon.dependencies.iter().find(|d| d.get(last))?;
        let mut product = PauliOperator::identity(self.n);
        for i in dep.ones().filter(|&i| i != last) {
            product.mul_assign_right(&self.generators[i]);
        }
        Some(product)
    }

    /// Basis of the centralizer modulo phases: `2n - rank` unsigned operators,
    /// from the kernel of the symplectic form against the generator rows.
    pub fn centralizer_basis(&self) -> Vec<PauliOperator> {
        let n = self.n;
        // (a|b) commutes with (gx|gz) iff gz·a + gx·b = 0.
        let rows: Vec<BitVec> = self
            .generators
            .iter()
            .map(|g| g.z_bits().concat(g.x_bits()))
            .collect();
        Echelon::new(&rows, 2 * n)
            .nullspace()
            .iter()
            .map(PauliOperator::from_symplectic)
            .collect()
    }

    /// Minimum weight over `rep · S`, with the lexicographically smallest
    /// element of that weight as witness.
    pub fn coset_min_weight(&self, rep: &PauliOperator, limits: &Limits) -> Result<(usize, PauliOperator)> {
        let coset = self.coset(rep, limits)?;
        let best = coset
            .into_iter()
            .min_by_key(|p| (p.weight(), p.letter_string()))
            .expect("coset is nonempty");
        Ok((best.weight(), best))
    }

    fn unsigned_keys(&self, limits: &Limits) -> Result<HashSet<BitVec>> {
        Ok(self.elements(limits)?.iter().map(|p| p.symplectic_row()).collect())
    }
}

/// Every element of the GF(2) span of `basis` as an unsigned operator,
/// indexed by the bits selecting basis vectors.
pub fn unsigned_span(basis: &[PauliOperator], n: usize, limits: &Limits) -> Result<Vec<PauliOperator>> {
    limits.check_enum_n(n)?;
    let dim = basis.len();
    // The span of 2n - r vectors with n <= max_enum_n is bounded by 4^max_enum_n;
    // guard the shift itself.
    if dim >= 63 {
        return Err(Error::CapExceeded { what: "span dimension", value: dim, cap: 62 });
    }
    let rows: Vec<BitVec> = basis.iter().map(|b| b.symplectic_row()).collect();
    let total = 1u64 << dim;
    let mut out = Vec::with_capacity(total as usize);
    out.resize(total as usize, BitVec::zeros(2 * n));
    let mut current = BitVec::zeros(2 * n);
    for i in 1..total {
        let flip = (gray(i) ^ gray(i - 1)).trailing_zeros() as usize;
        current.xor_assign(&rows[flip]);
        out[gray(i) as usize] = current.clone();
    }
    Ok(out.iter().map(PauliOperator::from_symplectic).collect())
}

/// Unsigned centralizer members that anticommute with `target`.
pub fn anticommuting_members(
    group: &StabilizerGroup,
    target: &PauliOperator,
    limits: &Limits,
) -> Result<Vec<PauliOperator>> {
    if group.generators().iter().any(|g| g.anticommutes_unchecked(target)) {
        return Err(Error::NotInCentralizer(target.to_string()));
    }
    let span = unsigned_span(&group.centralizer_basis(), group.n(), limits)?;
    Ok(span.into_iter().filter(|p| p.anticommutes_unchecked(target)).collect())
}

/// Candidate logical bit-flips for `z_bar`: every distinct unsigned Pauli in the
/// centralizer that anticommutes with it. Counting is per Pauli, not per coset
/// of the stabilizer.
pub fn logical_x_set(group: &StabilizerGroup, z_bar: &PauliOperator, limits: &Limits) -> Result<Vec<PauliOperator>> {
    anticommuting_members(group, z_bar, limits)
}

/// Logical operator classes of a code.
#[derive(Debug, Clone)]
pub struct LogicalSet {
    pub z_bars: Vec<PauliOperator>,
    pub centralizer_basis: Vec<PauliOperator>,
    /// For logical `i`, the unsigned centralizer members anticommuting with `z_bars[i]`.
    pub x_sets: Vec<Vec<PauliOperator>>,
}

impl LogicalSet {
    pub fn new(group: &StabilizerGroup, z_bars: Vec<PauliOperator>, limits: &Limits) -> Result<Self> {
        let x_sets = z_bars
            .iter()
            .map(|z| logical_x_set(group, z, limits))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { centralizer_basis: group.centralizer_basis(), z_bars, x_sets })
    }

    pub fn k(&self) -> usize {
        self.z_bars.len()
    }
}

/// Minimum weight over unsigned centralizer elements that are not (up to
/// sign) in the group.
pub fn code_distance(group: &StabilizerGroup, limits: &Limits) -> Result<usize> {
    let in_group = group.unsigned_keys(limits)?;
    let span = unsigned_span(&group.centralizer_basis(), group.n(), limits)?;
    span.iter()
        .filter(|p| !in_group.contains(&p.symplectic_row()))
        .map(|p| p.weight())
        .min()
        .ok_or_else(|| Error::InvalidParams("centralizer equals the stabilizer group (k = 0)".into()))
}
