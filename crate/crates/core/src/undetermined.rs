//! Which traced-out qubit sets leave the two codeword states indistinguishable.
//!
//! For a pure pair `ρ_0, ρ_1` of a `k = 1` code, `ρ_0 - ρ_1` is proportional to
//! the sum of the coset `Z̄·S`. Tracing out `T` kills every Pauli that is not
//! the identity on `T`, and the surviving restrictions are linearly
//! independent, so the reductions agree iff no coset element is supported
//! inside the kept set. The `k = 2` mixtures behave the same way with the
//! coset `(Z̄_1 Z̄_2)·S`. This module decides everything through that coset;
//! [`oracle_sweep`] re-derives the verdicts from dense matrices.

use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{validate, CodeSpec};
use crate::dense::{self, EQUALITY_TOL};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::stabilizer::{anticommuting_members, code_distance, Limits, StabilizerGroup};

/// Whether the analysed pair is two pure codewords or the two `k = 2` mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetVerdict {
    pub traced_out: Vec<usize>,
    pub equal: bool,
    /// A difference-coset element supported on the kept qubits.
    pub witness: Option<PauliOperator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnconditionalD {
    /// Smallest `D` such that every `D`-subset leaves equal reductions;
    /// `None` when no `D ≤ n - 1` works.
    pub d_min: Option<usize>,
    pub w_min: usize,
    pub witness: PauliOperator,
    /// Subset scans at `d_min` and `d_min - 1` agree with the coset formula.
    pub scan_confirms: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminedSubset {
    pub traced_out: Vec<usize>,
    pub witness: PauliOperator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalScan {
    pub d_prime: usize,
    pub total: usize,
    pub undetermined: Vec<Vec<usize>>,
    pub determined: Vec<DeterminedSubset>,
}

impl ConditionalScan {
    pub fn all_undetermined(&self) -> bool {
        self.determined.is_empty()
    }

    pub fn any_undetermined(&self) -> bool {
        !self.undetermined.is_empty()
    }

    pub fn is_undetermined(&self, subset: &[usize]) -> bool {
        self.undetermined.iter().any(|s| s == subset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveredSubset {
    pub subset: Vec<usize>,
    pub operator: PauliOperator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCover {
    pub d: usize,
    pub total: usize,
    pub covered: Vec<CoveredSubset>,
    pub uncovered: Vec<Vec<usize>>,
    pub full: bool,
    /// Whether every `d`-subset leaves equal reductions (coset criterion).
    pub undetermined: bool,
    /// Full coverage implies undeterminedness; this must hold.
    pub consistent: bool,
    /// Coverage and undeterminedness coincide at this `d`.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdEntry {
    pub d: usize,
    pub count: usize,
    pub binomial: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSweep {
    pub subsets_checked: usize,
    pub disagreements: Vec<Vec<usize>>,
    /// Largest Frobenius distance among subsets called equal.
    pub max_equal_distance: f64,
    /// Smallest Frobenius distance among subsets called unequal.
    pub min_unequal_distance: Option<f64>,
}

impl OracleSweep {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    (0..k).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}

fn subsets(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).combinations(size)
}

fn mask_of(subset: &[usize]) -> u64 {
    subset.iter().fold(0, |m, &q| m | 1 << (q - 1))
}

/// Difference-coset elements grouped by inclusion-minimal support, in
/// (weight, lexicographic) order. The first entry inside a kept set is the
/// lowest-weight, lexicographically first coset element there.
#[derive(Debug, Clone)]
struct SupportTable {
    entries: Vec<(u64, PauliOperator)>,
}

impl SupportTable {
    fn new(mut coset: Vec<PauliOperator>) -> Self {
        coset.sort_by_cached_key(|p| (p.weight(), p.letter_string()));
        let mut entries: Vec<(u64, PauliOperator)> = Vec::new();
        for p in coset {
            let m = p.support_mask().ones().fold(0u64, |m, q| m | 1 << q);
            if entries.iter().any(|(s, _)| s & !m == 0) {
                continue;
            }
            entries.push((m, p));
        }
        Self { entries }
    }

    fn inside(&self, kept: u64) -> Option<&PauliOperator> {
        self.entries.iter().find(|(s, _)| s & !kept == 0).map(|(_, p)| p)
    }
}

/// Symbolic analysis of one codeword pair.
#[derive(Debug)]
pub struct Analysis {
    spec: CodeSpec,
    kind: PairKind,
    group: StabilizerGroup,
    logical_z: Vec<PauliOperator>,
    difference: PauliOperator,
    limits: Limits,
    w_min: usize,
    witness: PauliOperator,
    table: SupportTable,
    x_class: OnceLock<Vec<PauliOperator>>,
}

impl Analysis {
    /// Validates `spec` and builds the difference coset. `k = 1` gives the pure
    /// pair, `k = 2` the mixtures `½(|00⟩⟨00| + |11⟩⟨11|)` vs `½(|10⟩⟨10| + |01⟩⟨01|)`.
    pub fn new(spec: &CodeSpec, limits: Limits) -> Result<Self> {
        let report = validate(spec);
        if !report.valid {
            let failures: Vec<String> = report
                .failures()
                .map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()))
                .collect();
            return Err(Error::Validation(failures.join("; ")));
        }
        if spec.n > 64 {
            return Err(Error::CapExceeded { what: "n", value: spec.n, cap: 64 });
        }
        let group = spec.group()?;
        let logical_z = spec.logical_z_ops()?;
        let (kind, difference) = match logical_z.as_slice() {
            [z] => (PairKind::Pure, z.clone()),
            [z1, z2] => (PairKind::Mixed, z1 * z2),
            _ => unreachable!("validated k"),
        };
        let coset = group.coset(&difference, &limits)?;
        let table = SupportTable::new(coset);
        let witness = table.entries[0].1.clone();
        Ok(Self {
            spec: spec.clone(),
            kind,
            w_min: witness.weight(),
            witness,
            group,
            logical_z,
            difference,
            limits,
            table,
            x_class: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn group(&self) -> &StabilizerGroup {
        &self.group
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// `Z̄` for pure pairs, `Z̄_1 Z̄_2` for the mixtures.
    pub fn difference_operator(&self) -> &PauliOperator {
        &self.difference
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    fn check_subset(&self, traced_out: &[usize]) -> Result<u64> {
        let n = self.n();
        let sorted: Vec<usize> = traced_out.iter().copied().sorted().dedup().collect();
        if sorted.len() != traced_out.len() || sorted.is_empty() || sorted.len() >= n || sorted.iter().any(|&q| q == 0 || q > n) {
            return Err(Error::InvalidSubset { subset: traced_out.to_vec(), n });
        }
        Ok(mask_of(&sorted))
    }

    fn full_mask(&self) -> u64 {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }

    fn witness_for(&self, traced_mask: u64) -> Option<&PauliOperator> {
        self.table.inside(self.full_mask() & !traced_mask)
    }

    /// Decides whether tracing out `traced_out` (1-based) leaves equal reductions.
    pub fn reduced_equal_on(&self, traced_out: &[usize]) -> Result<SubsetVerdict> {
        let mask = self.check_subset(traced_out)?;
        let witness = self.witness_for(mask).cloned();
        Ok(SubsetVerdict { traced_out: traced_out.to_vec(), equal: witness.is_none(), witness })
    }

    fn all_equal_at(&self, d: usize) -> bool {
        subsets(self.n(), d).all(|s| self.witness_for(mask_of(&s)).is_none())
    }

    fn any_equal_at(&self, d: usize) -> bool {
        subsets(self.n(), d).any(|s| self.witness_for(mask_of(&s)).is_none())
    }

    pub fn w_min(&self) -> usize {
        self.w_min
    }

    /// `n - w_min + 1` when that is at most `n - 1`.
    pub fn d_min_formula(&self) -> Option<usize> {
        let d = self.n() + 1 - self.w_min;
        (d < self.n()).then_some(d)
    }

    pub fn unconditional_d(&self) -> UnconditionalD {
        let d_min = self.d_min_formula();
        let scan_confirms = match d_min {
            Some(d) => self.all_equal_at(d) && (d == 1 || !self.all_equal_at(d - 1)),
            None => !self.all_equal_at(self.n() - 1),
        };
        UnconditionalD { d_min, w_min: self.w_min, witness: self.witness.clone(), scan_confirms }
    }

    /// Smallest `D` whose subsets are all undetermined, by direct scan.
    pub fn d_min_by_scan(&self) -> Option<usize> {
        (1..self.n()).find(|&d| self.all_equal_at(d))
    }

    /// Smallest `D′` with at least one undetermined subset.
    pub fn minimal_conditional_d(&self) -> Option<usize> {
        (1..self.n()).find(|&d| self.any_equal_at(d))
    }

    pub fn conditional_scan(&self, d_prime: usize) -> Result<ConditionalScan> {
        let n = self.n();
        if d_prime == 0 || d_prime >= n {
            return Err(Error::InvalidParams(format!("D′ must be in 1..={}, got {d_prime}", n - 1)));
        }
        let total = binomial(n, d_prime);
        if total > 50_000_000 {
            return Err(Error::CapExceeded { what: "subset count", value: total as usize, cap: 50_000_000 });
        }
        let all: Vec<Vec<usize>> = subsets(n, d_prime).collect();
        let verdicts: Vec<Option<PauliOperator>> =
            all.par_iter().map(|s| self.witness_for(mask_of(s)).cloned()).collect();
        let mut scan = ConditionalScan { d_prime, total: all.len(), undetermined: Vec::new(), determined: Vec::new() };
        for (s, w) in all.into_iter().zip(verdicts) {
            match w {
                None => scan.undetermined.push(s),
                Some(witness) => scan.determined.push(DeterminedSubset { traced_out: s, witness }),
            }
        }
        Ok(scan)
    }

    /// Unsigned centralizer members anticommuting with the difference operator:
    /// the logical bit-flips for a pure pair, the symmetric difference of the two
    /// anticommutation classes for the mixtures.
    pub fn x_class(&self) -> Result<&[PauliOperator]> {
        if let Some(v) = self.x_class.get() {
            return Ok(v);
        }
        let members = anticommuting_members(&self.group, &self.difference, &self.limits)?;
        Ok(self.x_class.get_or_init(|| members))
    }

    pub fn necessary_ed(&self, d: usize) -> Result<EdEntry> {
        let count = self.x_class()?.iter().filter(|p| p.weight() == d).count();
        let binomial = binomial(self.n(), d);
        Ok(EdEntry { d, count, binomial, pass: count as u64 >= binomial })
    }

    pub fn ed_table(&self) -> Result<Vec<EdEntry>> {
        (1..self.n()).map(|d| self.necessary_ed(d)).collect()
    }

    /// For each `d`-subset, a class member whose support is exactly that subset.
    pub fn undetected_error_cover(&self, d: usize) -> Result<ErrorCover> {
        let n = self.n();
        if d == 0 || d >= n {
            return Err(Error::InvalidParams(format!("D must be in 1..={}, got {d}", n - 1)));
        }
        let mut by_support: std::collections::HashMap<u64, &PauliOperator> = std::collections::HashMap::new();
        let mut members: Vec<&PauliOperator> = self.x_class()?.iter().filter(|p| p.weight() == d).collect();
        members.sort_by_cached_key(|p| p.letter_string());
        for p in members {
            let m = p.support_mask().ones().fold(0u64, |m, q| m | 1 << q);
            by_support.entry(m).or_insert(p);
        }
        let mut covered = Vec::new();
        let mut uncovered = Vec::new();
        for s in subsets(n, d) {
            match by_support.get(&mask_of(&s)) {
                Some(p) => covered.push(CoveredSubset { subset: s, operator: (*p).clone() }),
                None => uncovered.push(s),
            }
        }
        let full = uncovered.is_empty();
        let undetermined = self.all_equal_at(d);
        Ok(ErrorCover {
            d,
            total: covered.len() + uncovered.len(),
            covered,
            uncovered,
            full,
            undetermined,
            consistent: !full || undetermined,
            agrees: full == undetermined,
        })
    }

    /// Dense matrices of the two states being compared.
    pub fn dense_pair(&self) -> Result<(dense::DenseMatrix, dense::DenseMatrix)> {
        match self.kind {
            PairKind::Pure => Ok((
                dense::build_density(&self.spec, 0, &self.limits)?,
                dense::build_density(&self.spec, 1, &self.limits)?,
            )),
            PairKind::Mixed => Ok((
                dense::build_mixed_density(&self.spec, 0, &self.limits)?,
                dense::build_mixed_density(&self.spec, 1, &self.limits)?,
            )),
        }
    }
}

/// Compares the symbolic verdict with a dense partial-trace comparison for
/// every traced subset of every size `1..n-1`.
pub fn oracle_sweep(analysis: &Analysis) -> Result<OracleSweep> {
    let n = analysis.n();
    let (rho0, rho1) = analysis.dense_pair()?;
    let all: Vec<Vec<usize>> = (1..n).flat_map(|d| subsets(n, d)).collect();
    let rows: Vec<(Vec<usize>, bool, f64)> = all
        .into_par_iter()
        .map(|s| {
            let symbolic = analysis.reduced_equal_on(&s)?.equal;
            let a = dense::partial_trace(&rho0, n, &s)?;
            let b = dense::partial_trace(&rho1, n, &s)?;
            Ok((s, symbolic, dense::frobenius_distance(&a, &b)))
        })
        .collect::<Result<_>>()?;
    let mut sweep = OracleSweep {
        subsets_checked: rows.len(),
        disagreements: Vec::new(),
        max_equal_distance: 0.0,
        min_unequal_distance: None,
    };
    for (s, symbolic, dist) in rows {
        let oracle_equal = dist <= EQUALITY_TOL;
        if oracle_equal != symbolic {
            sweep.disagreements.push(s);
        }
        if oracle_equal {
            sweep.max_equal_distance = sweep.max_equal_distance.max(dist);
        } else {
            sweep.min_unequal_distance = Some(sweep.min_unequal_distance.map_or(dist, |m: f64| m.min(dist)));
        }
    }
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDownCheck {
    /// Unconditional `D` of the pure pair.
    pub d: usize,
    pub d_prime: usize,
    /// Qubits traced out to form the mixed pair (1-based, original labels).
    pub traced: Vec<usize>,
    pub d_double_prime: usize,
    pub subsets_tested: usize,
    /// Further subsets (original labels) whose reductions differ.
    pub failures: Vec<Vec<usize>>,
    pub max_distance: f64,
    pub verdict: bool,
}

/// Traces `D′` qubits out of both pure codewords and checks, densely, that
/// tracing any `D - D′` further qubits leaves equal matrices. `traced`
/// defaults to `{1..D′}`.
pub fn mixed_tracedown_check(analysis: &Analysis, d_prime: usize, traced: Option<&[usize]>) -> Result<TraceDownCheck> {
    if analysis.kind() != PairKind::Pure {
        return Err(Error::InvalidParams("trace-down construction needs a k = 1 code".into()));
    }
    let n = analysis.n();
    let d = analysis
        .d_min_formula()
        .ok_or_else(|| Error::InvalidParams(format!("{} is not D-undetermined for any D < n", analysis.spec().name)))?;
    if d_prime >= d {
        return Err(Error::InvalidParams(format!("D′ = {d_prime} must be below D = {d}")));
    }
    analysis.limits().check_oracle_n(n)?;
    let traced: Vec<usize> = match traced {
        Some(t) => t.iter().copied().sorted().collect(),
        None => (1..=d_prime).collect(),
    };
    if traced.len() != d_prime {
        return Err(Error::InvalidSubset { subset: traced, n });
    }
    dense::zero_based_subset(&traced, n)?;
    let (rho0, rho1) = analysis.dense_pair()?;
    let (mixed0, mixed1) = if traced.is_empty() {
        (rho0, rho1)
    } else {
        (dense::partial_trace(&rho0, n, &traced)?, dense::partial_trace(&rho1, n, &traced)?)
    };
    let remaining: Vec<usize> = (1..=n).filter(|q| !traced.contains(q)).collect();
    let m = remaining.len();
    let d2 = d - d_prime;
    let mut check = TraceDownCheck {
        d,
        d_prime,
        traced,
        d_double_prime: d2,
        subsets_tested: 0,
        failures: Vec::new(),
        max_distance: 0.0,
        verdict: true,
    };
    for local in (1..=m).combinations(d2) {
        let a = dense::partial_trace(&mixed0, m, &local)?;
        let b = dense::partial_trace(&mixed1, m, &local)?;
        let dist = dense::frobenius_distance(&a, &b);
        check.subsets_tested += 1;
        check.max_distance = check.max_distance.max(dist);
        if dist > EQUALITY_TOL {
            check.failures.push(local.iter().map(|&i| remaining[i - 1]).collect());
        }
    }
    check.verdict = check.failures.is_empty();
    Ok(check)
}

/// Summary for the `k = 2` mixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedPair {
    pub d_mixed: Option<usize>,
    pub w_min: usize,
    pub difference_operator: PauliOperator,
    pub witness: PauliOperator,
    pub x12_size: usize,
    /// Members of the symmetric-difference class whose weight equals `d_mixed`.
    pub x12_weight_d: Vec<PauliOperator>,
}

pub fn mixed_pair_n2(analysis: &Analysis) -> Result<MixedPair> {
    if analysis.kind() != PairKind::Mixed {
        return Err(Error::InvalidParams("mixed pair analysis needs a k = 2 code".into()));
    }
    let d_mixed = analysis.d_min_formula();
    let class = analysis.x_class()?;
    let mut x12_weight_d: Vec<PauliOperator> =
        class.iter().filter(|p| Some(p.weight()) == d_mixed).cloned().collect();
    x12_weight_d.sort_by_cached_key(|p| p.letter_string());
    Ok(MixedPair {
        d_mixed,
        w_min: analysis.w_min(),
        difference_operator: analysis.difference_operator().clone(),
        witness: analysis.witness.clone(),
        x12_size: class.len(),
        x12_weight_d,
    })
}

/// Convenience wrappers taking a bare spec.
pub fn reduced_equal_on(spec: &CodeSpec, traced_out: &[usize]) -> Result<SubsetVerdict> {
    Analysis::new(spec, Limits::default())?.reduced_equal_on(traced_out)
}

pub fn unconditional_d(spec: &CodeSpec) -> Result<UnconditionalD> {
    Ok(Analysis::new(spec, Limits::default())?.unconditional_d())
}

pub fn conditional_scan(spec: &CodeSpec, d_prime: usize) -> Result<ConditionalScan> {
    Analysis::new(spec, Limits::default())?.conditional_scan(d_prime)
}

pub fn necessary_ed(spec: &CodeSpec, d: usize) -> Result<EdEntry> {
    Analysis::new(spec, Limits::default())?.necessary_ed(d)
}

pub fn undetected_error_cover(spec: &CodeSpec, d: usize) -> Result<ErrorCover> {
    Analysis::new(spec, Limits::default())?.undetected_error_cover(d)
}

pub fn distance(analysis: &Analysis) -> Result<usize> {
    code_distance(analysis.group(), analysis.limits())
}
