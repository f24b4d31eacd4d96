//! JSON reports and run manifests.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codes::{self, validate, CodeSpec, ValidationReport};
use crate::error::Result;
use crate::pauli::PauliOperator;
use crate::stabilizer::Limits;
use crate::undetermined::{
    self, mixed_pair_n2, oracle_sweep, Analysis, ConditionalScan, EdEntry, ErrorCover, MixedPair, OracleSweep, PairKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Symbolic,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UndeterminedReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub pair: PairKind,
    pub distance: usize,
    pub difference_operator: PauliOperator,
    pub difference_coset_min_weight: usize,
    pub difference_coset_witness: PauliOperator,
    pub minimal_unconditional_d: Option<usize>,
    pub minimal_unconditional_d_by_scan: Option<usize>,
    pub formula_scan_agree: bool,
    /// `n - D + 1`, the share count of the threshold scheme the pair would support.
    pub threshold_shares: Option<usize>,
    pub minimal_conditional_d: Option<usize>,
    pub conditional: BTreeMap<usize, ConditionalScan>,
    pub ed_table: Vec<EdEntry>,
    /// Undetected-error coverage at the minimal unconditional `D`.
    pub cover: Option<ErrorCover>,
    pub mixed: Option<MixedPair>,
    pub oracle: Option<OracleSweep>,
    pub methods: Vec<Method>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    /// Largest `D` in the `E_D` table; defaults to `n - 1`.
    pub max_trace: Option<usize>,
    pub conditional: Vec<usize>,
    pub oracle: bool,
    pub limits: Limits,
}

const NOTE_UNSIGNED: &str =
    "logical operator classes and E_D count distinct unsigned Paulis, not classes modulo the stabilizer group";
const NOTE_RULE: &str =
    "equal reductions iff no element of the difference coset is supported inside the kept qubits";

pub fn analyze(spec: &CodeSpec, options: &AnalyzeOptions) -> Result<UndeterminedReport> {
    let a = Analysis::new(spec, options.limits)?;
    let n = a.n();
    let u = a.unconditional_d();
    let by_scan = a.d_min_by_scan();
    let max_trace = options.max_trace.unwrap_or(n - 1).min(n - 1);
    let mut conditional = BTreeMap::new();
    for &d in &options.conditional {
        conditional.insert(d, a.conditional_scan(d)?);
    }
    let ed_table = (1..=max_trace).map(|d| a.necessary_ed(d)).collect::<Result<Vec<_>>>()?;
    let cover = u.d_min.map(|d| a.undetected_error_cover(d)).transpose()?;
    let mixed = match a.kind() {
        PairKind::Mixed => Some(mixed_pair_n2(&a)?),
        PairKind::Pure => None,
    };
    let oracle = if options.oracle { Some(oracle_sweep(&a)?) } else { None };
    let mut methods = vec![Method::Symbolic];
    if oracle.is_some() {
        methods.push(Method::Oracle);
    }
    let mut notes = vec![NOTE_RULE.to_string(), NOTE_UNSIGNED.to_string()];
    if u.d_min.is_none() {
        notes.push(format!(
            "difference coset has weight-{} elements, so some {}-subset trace already tells the states apart",
            u.w_min,
            n - 1
        ));
    }
    if let Some(c) = &cover {
        if !c.agrees {
            notes.push(format!("error cover and reduced-matrix equality diverge at D = {}", c.d));
        }
    }
    Ok(UndeterminedReport {
        code: spec.name.clone(),
        n,
        k: spec.k,
        rank: a.group().rank(),
        pair: a.kind(),
        distance: undetermined::distance(&a)?,
        difference_operator: a.difference_operator().clone(),
        difference_coset_min_weight: u.w_min,
        difference_coset_witness: u.witness,
        minimal_unconditional_d: u.d_min,
        minimal_unconditional_d_by_scan: by_scan,
        formula_scan_agree: u.d_min == by_scan && u.scan_confirms,
        threshold_shares: u.d_min.map(|d| n - d + 1),
        minimal_conditional_d: a.minimal_conditional_d(),
        conditional,
        ed_table,
        cover,
        mixed,
        oracle,
        methods,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicEntry {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub pattern: String,
    pub validation: ValidationReport,
    pub w_min: Option<usize>,
    pub minimal_unconditional_d: Option<usize>,
    /// Every `(n-2)`-subset trace leaves equal reductions, checked subset by subset.
    pub undetermined_at_n_minus_2: Option<bool>,
    pub distance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicScan {
    pub from: usize,
    pub to: usize,
    pub entries: Vec<CyclicEntry>,
}

impl CyclicScan {
    pub fn invalid(&self) -> impl Iterator<Item = &CyclicEntry> {
        self.entries.iter().filter(|e| !e.validation.valid)
    }

    /// All valid `n` are `(n-2)`-undetermined.
    pub fn claim_holds(&self) -> bool {
        self.entries.iter().filter(|e| e.validation.valid).all(|e| e.undetermined_at_n_minus_2 == Some(true))
    }
}

pub fn scan_cyclic(from: usize, to: usize, limits: &Limits) -> Result<CyclicScan> {
    let mut entries = Vec::new();
    for n in from..=to {
        let spec = codes::cyclic(n)?;
        let validation = validate(&spec);
        let mut entry = CyclicEntry {
            n,
            p: (n - n % 4) / 4,
            q: n % 4,
            pattern: codes::cyclic_pattern(n),
            validation,
            w_min: None,
            minimal_unconditional_d: None,
            undetermined_at_n_minus_2: None,
            distance: None,
        };
        if entry.validation.valid {
            let a = Analysis::new(&spec, *limits)?;
            entry.w_min = Some(a.w_min());
            entry.minimal_unconditional_d = a.d_min_formula();
            entry.undetermined_at_n_minus_2 = Some(a.conditional_scan(n - 2)?.all_undetermined());
            entry.distance = Some(undetermined::distance(&a)?);
        }
        entries.push(entry);
    }
    Ok(CyclicScan { from, to, entries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_time_ms: f64,
    /// SHA-256 of the compact JSON of `result`.
    pub result_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub manifest: RunManifest,
    pub result: T,
}

pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("report types serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, parameters: serde_json::Value, seed: Option<u64>, started: Instant, result: T) -> Self {
        let manifest = RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            result_digest: digest(&result),
        };
        Self { manifest, result }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;

    #[test]
    fn analyze_513() {
        let r = analyze(&codes::code_513(), &AnalyzeOptions { conditional: vec![2], ..Default::default() }).unwrap();
        assert_eq!(r.minimal_unconditional_d, Some(3));
        assert_eq!(r.distance, 3);
        assert!(r.formula_scan_agree);
        assert_eq!(r.threshold_shares, Some(3));
        assert_eq!(r.ed_table.len(), 4);
        assert!(r.cover.unwrap().full);
        assert!(r.conditional.contains_key(&2));
    }

    #[test]
    fn analyze_ghz_with_oracle() {
        let r = analyze(&codes::ghz(3).unwrap(), &AnalyzeOptions { oracle: true, ..Default::default() }).unwrap();
        assert!(r.oracle.unwrap().agrees());
        assert_eq!(r.methods, vec![Method::Symbolic, Method::Oracle]);
    }

    #[test]
    fn digest_is_stable() {
        let a = digest(&vec![1, 2, 3]);
        assert_eq!(a, digest(&vec![1, 2, 3]));
        assert_eq!(a.len(), 64);
    }
}
