//! Code presentations: the built-in catalog, validation, and the JSON file form.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::stabilizer::StabilizerGroup;

/// A stabilizer code as written down: generator strings plus logical operators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub stabilizers: Vec<String>,
    pub logical_z: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_x: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl CodeSpec {
    pub fn new(name: impl Into<String>, stabilizers: Vec<PauliOperator>, logical_z: Vec<PauliOperator>) -> Self {
        let n = stabilizers.first().or(logical_z.first()).map_or(0, |p| p.n());
        Self {
            name: name.into(),
            n,
            k: logical_z.len(),
            stabilizers: stabilizers.iter().map(|p| p.to_string()).collect(),
            logical_z: logical_z.iter().map(|p| p.to_string()).collect(),
            logical_x: None,
            provenance: None,
        }
    }

    fn with_provenance(mut self, text: &str) -> Self {
        self.provenance = Some(text.to_string());
        self
    }

    /// Checks field shapes; the first violation names the offending field.
    pub fn check_schema(&self) -> Result<()> {
        let violation = |field: String, message: String| Err(Error::Schema { field, message });
        if self.n == 0 {
            return violation("n".into(), "must be positive".into());
        }
        if !(1..=2).contains(&self.k) {
            return violation("k".into(), format!("must be 1 or 2, got {}", self.k));
        }
        if self.k >= self.n {
            return violation("k".into(), format!("must be smaller than n = {}", self.n));
        }
        let lists: [(&str, &[String], usize); 2] = [
            ("stabilizers", &self.stabilizers, self.n - self.k),
            ("logical_z", &self.logical_z, self.k),
        ];
        let logical_x = self.logical_x.as_deref();
        for (field, list, expected) in lists.into_iter().chain(logical_x.map(|l| ("logical_x", l, self.k))) {
            if list.len() != expected {
                return violation(field.into(), format!("expected {expected} entries, found {}", list.len()));
            }
            for (i, s) in list.iter().enumerate() {
                match PauliOperator::parse(s, self.n) {
                    Ok(_) => {}
                    Err(Error::LengthMismatch { expected, found }) => {
                        return violation(format!("{field}[{i}] length"), format!("expected {expected}, found {found}"));
                    }
                    Err(e) => return violation(format!("{field}[{i}]"), e.to_string()),
                }
            }
        }
        Ok(())
    }

    fn parse_list(&self, list: &[String]) -> Result<Vec<PauliOperator>> {
        list.iter().map(|s| PauliOperator::parse(s, self.n)).collect()
    }

    pub fn stabilizer_ops(&self) -> Result<Vec<PauliOperator>> {
        self.parse_list(&self.stabilizers)
    }

    pub fn logical_z_ops(&self) -> Result<Vec<PauliOperator>> {
        self.parse_list(&self.logical_z)
    }

    pub fn logical_x_ops(&self) -> Result<Option<Vec<PauliOperator>>> {
        self.logical_x.as_deref().map(|l| self.parse_list(l)).transpose()
    }

    /// The validated stabilizer group.
    pub fn group(&self) -> Result<StabilizerGroup> {
        self.check_schema()?;
        StabilizerGroup::new(self.stabilizer_ops()?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("CodeSpec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CodeSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        spec.check_schema()?;
        Ok(spec)
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<CodeSpec> {
    CodeSpec::from_json(&std::fs::read_to_string(path)?)
}

pub fn save_spec(spec: &CodeSpec, path: impl AsRef<Path>) -> Result<()> {
    let mut text = spec.to_json();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Names accepted by [`catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogCode {
    Ghz,
    Code412,
    Code513,
    Cyclic,
    Steane713,
    Code422,
}

impl CatalogCode {
    pub const ALL: [CatalogCode; 6] = [
        CatalogCode::Ghz,
        CatalogCode::Code412,
        CatalogCode::Code513,
        CatalogCode::Cyclic,
        CatalogCode::Steane713,
        CatalogCode::Code422,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogCode::Ghz => "ghz",
            CatalogCode::Code412 => "code_412",
            CatalogCode::Code513 => "code_513",
            CatalogCode::Cyclic => "cyclic",
            CatalogCode::Steane713 => "steane_713",
            CatalogCode::Code422 => "code_422",
        }
    }

    pub fn takes_n(self) -> bool {
        matches!(self, CatalogCode::Ghz | CatalogCode::Cyclic)
    }
}

impl fmt::Display for CatalogCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogCode::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCode(s.to_string()))
    }
}

fn ops(strings: &[&str]) -> Vec<PauliOperator> {
    strings.iter().map(|s| PauliOperator::parse_any(s).expect("catalog literal")).collect()
}

fn all_z(n: usize) -> PauliOperator {
    PauliOperator::parse(&"Z".repeat(n), n).expect("valid")
}

fn all_x(n: usize) -> PauliOperator {
    PauliOperator::parse(&"X".repeat(n), n).expect("valid")
}

/// GHZ code: `g_i = Z_i Z_{i+1}`, logical Z = `X^n`.
pub fn ghz(n: usize) -> Result<CodeSpec> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("ghz needs n >= 2, got {n}")));
    }
    let gens = (0..n - 1)
        .map(|i| {
            let mut letters = vec!['I'; n];
            letters[i] = 'Z';
            letters[i + 1] = 'Z';
            PauliOperator::parse(&letters.iter().collect::<String>(), n).expect("valid")
        })
        .collect();
    Ok(CodeSpec::new(format!("ghz_{n}"), gens, vec![all_x(n)]).with_provenance("GHZ [[n,1,1]] code"))
}

pub fn code_412() -> CodeSpec {
    CodeSpec::new("code_412", ops(&["YIYI", "IYIY", "ZZZZ"]), ops(&["YXIZ"])).with_provenance("[[4,1,2]] code")
}

pub fn code_513() -> CodeSpec {
    let g = PauliOperator::parse_any("XZZXI").expect("valid");
    CodeSpec::new("code_513", (0..4).map(|k| g.cyclic_shift(k)).collect(), vec![all_z(5)])
        .with_provenance("[[5,1,3]] code")
}

/// The `X^p Z^2p X^p I^q` word with `n = 4p + q`, `q = n mod 4`.
pub fn cyclic_pattern(n: usize) -> String {
    let q = n % 4;
    let p = (n - q) / 4;
    format!("{}{}{}{}", "X".repeat(p), "Z".repeat(2 * p), "X".repeat(p), "I".repeat(q))
}

/// Cyclic family: the `n - 1` right shifts `r^0 .. r^(n-2)` of [`cyclic_pattern`],
/// logical Z = `Z^n`. The spec is not validated here; use [`validate`].
pub fn cyclic(n: usize) -> Result<CodeSpec> {
    if n < 5 {
        return Err(Error::InvalidParams(format!("cyclic needs n >= 5, got {n}")));
    }
    let g = PauliOperator::parse(&cyclic_pattern(n), n).expect("valid");
    Ok(CodeSpec::new(format!("cyclic_{n}"), (0..n - 1).map(|k| g.cyclic_shift(k)).collect(), vec![all_z(n)])
        .with_provenance("cyclic family, n = 4p + q"))
}

pub fn steane_713() -> CodeSpec {
    CodeSpec::new(
        "steane_713",
        ops(&["IIXXXXI", "IXXIIXX", "XIXIXIX", "IIZZZZI", "IZZIIZZ", "ZIZIZIZ"]),
        vec![all_z(7)],
    )
    .with_provenance("[[7,1,3]] Steane code")
}

pub fn code_422() -> CodeSpec {
    CodeSpec::new("code_422", ops(&["YYYY", "ZZZZ"]), ops(&["IZZI", "ZZII"])).with_provenance("[[4,2,2]] code")
}

/// Looks up a catalog code. `n` is required for `ghz` and `cyclic` and must be
/// absent otherwise.
pub fn catalog(code: CatalogCode, n: Option<usize>) -> Result<CodeSpec> {
    match (code, n) {
        (CatalogCode::Ghz, Some(n)) => ghz(n),
        (CatalogCode::Cyclic, Some(n)) => cyclic(n),
        (c, None) if c.takes_n() => Err(Error::InvalidParams(format!("{c} needs n"))),
        (c, Some(_)) if !c.takes_n() => Err(Error::InvalidParams(format!("{c} takes no n"))),
        (CatalogCode::Code412, _) => Ok(code_412()),
        (CatalogCode::Code513, _) => Ok(code_513()),
        (CatalogCode::Steane713, _) => Ok(steane_713()),
        (CatalogCode::Code422, _) => Ok(code_422()),
        _ => unreachable!(),
    }
}

pub fn catalog_by_name(name: &str, n: Option<usize>) -> Result<CodeSpec> {
    catalog(name.parse()?, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub rank: Option<usize>,
    pub hermitian: bool,
    pub checks: Vec<Check>,
    pub valid: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every structural check; failures become report entries, never errors.
pub fn validate(spec: &CodeSpec) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, result: std::result::Result<(), String>| {
        checks.push(Check { name: name.into(), passed: result.is_ok(), detail: result.err() });
    };
    let mut report = ValidationReport {
        name: spec.name.clone(),
        n: spec.n,
        k: spec.k,
        rank: None,
        hermitian: false,
        checks: Vec::new(),
        valid: false,
    };

    let schema = spec.check_schema();
    push("schema", schema.clone().map_err(|e| e.to_string()));
    if schema.is_err() {
        report.checks = checks;
        return report;
    }
    let stabs = spec.stabilizer_ops().expect("schema checked");
    let zs = spec.logical_z_ops().expect("schema checked");
    let xs = spec.logical_x_ops().expect("schema checked");

    report.hermitian = stabs.iter().chain(&zs).chain(xs.iter().flatten()).all(|p| p.is_hermitian());
    push("hermitian", if report.hermitian { Ok(()) } else { Err("non-Hermitian operator".into()) });

    let group = StabilizerGroup::new(stabs.clone());
    push("stabilizer_group", group.as_ref().map(|_| ()).map_err(|e| e.to_string()));
    if let Ok(g) = &group {
        report.rank = Some(g.rank());
        let expected = spec.n - spec.k;
        push(
            "rank",
            if g.rank() == expected { Ok(()) } else { Err(format!("rank {} != n - k = {expected}", g.rank())) },
        );
    }

    let anticommuting_pairs = |ops: &[PauliOperator], label: &str| -> std::result::Result<(), String> {
        for (i, op) in ops.iter().enumerate() {
            for (j, s) in stabs.iter().enumerate() {
                if op.anticommutes_unchecked(s) {
                    return Err(format!("{label}[{i}] anticommutes with stabilizers[{j}]"));
                }
            }
        }
        Ok(())
    };
    push("logical_z_commute_with_stabilizers", anticommuting_pairs(&zs, "logical_z"));
    if spec.k == 2 {
        push(
            "logical_z_mutually_commute",
            if zs[0].anticommutes_unchecked(&zs[1]) { Err("logical_z[0] anticommutes with logical_z[1]".into()) } else { Ok(()) },
        );
    }
    if let Ok(g) = &group {
        // Z̄ (and every product of Z̄s) must lie outside S, otherwise a codeword
        // projector vanishes.
        let mut products = zs.clone();
        if spec.k == 2 {
            products.push(&zs[0] * &zs[1]);
        }
        let inside: Vec<String> = products.iter().filter(|z| g.contains_up_to_phase(z)).map(|z| z.to_string()).collect();
        push(
            "logical_z_outside_group",
            if inside.is_empty() { Ok(()) } else { Err(format!("{} lies in the stabilizer group", inside.join(", "))) },
        );
    }
    if let Some(xs) = &xs {
        push("logical_x_commute_with_stabilizers", anticommuting_pairs(xs, "logical_x"));
        let mut pairing = Ok(());
        for (i, x) in xs.iter().enumerate() {
            for (j, z) in zs.iter().enumerate() {
                if x.anticommutes_unchecked(z) != (i == j) {
                    pairing = Err(format!("logical_x[{i}] / logical_z[{j}] commutation is wrong"));
                }
            }
        }
        push("logical_pairing", pairing);
    }

    report.valid = checks.iter().all(|c| c.passed);
    report.checks = checks;
    report
}
