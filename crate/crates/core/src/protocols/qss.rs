//! GHZ-based secret sharing with X/Y measurements.
//!
//! Alice holds qubit 1, receivers hold qubits `2..=parties`; the last receiver
//! ("Charlie") is the one who may cheat. Round outcomes are sampled from dense
//! state vectors. The sign relating the outcome parity to the measured Pauli
//! string is taken from the stabilizer group of the prepared codeword, so every
//! honest round doubles as a check of the stabilizer bookkeeping.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stream_rng, Rate};
use crate::codes;
use crate::dense::{self, DenseMatrix, StateVector};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::stabilizer::{Limits, StabilizerGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Alice always prepares `(|0…0⟩ + |1…1⟩)/√2`.
    Original,
    /// Alice prepares either GHZ codeword at random and announces which one
    /// after the receivers have exchanged outcomes.
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Honest,
    /// Charlie intercepts every receiver qubit, hands the other receivers fresh
    /// `|0⟩` qubits, announces a random basis and delays his measurement until
    /// he must commit to an outcome.
    DelayDiscriminate,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(Self::Original),
            "modified" => Ok(Self::Modified),
            _ => Err(Error::InvalidParams(format!("unknown variant '{s}' (expected original|modified)"))),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(Self::Honest),
            "delay_discriminate" | "delay-discriminate" => Ok(Self::DelayDiscriminate),
            _ => Err(Error::InvalidParams(format!("unknown strategy '{s}' (expected honest|delay_discriminate)"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Original => "original",
            Self::Modified => "modified",
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Honest => "honest",
            Self::DelayDiscriminate => "delay_discriminate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QssConfig {
    pub variant: Variant,
    pub parties: usize,
    pub rounds: u64,
    pub check_fraction: f64,
    pub strategy: Strategy,
    pub seed: u64,
    /// Abort when the check-phase error rate exceeds this.
    pub abort_threshold: f64,
}

impl Default for QssConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Modified,
            parties: 3,
            rounds: 100_000,
            check_fraction: 0.25,
            strategy: Strategy::Honest,
            seed: 2024,
            abort_threshold: 0.1,
        }
    }
}

impl QssConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParams("rounds must be at least 1".into()));
        }
        if !(self.check_fraction > 0.0 && self.check_fraction < 1.0) {
            return Err(Error::InvalidParams(format!("check fraction must lie in (0, 1), got {}", self.check_fraction)));
        }
        if !(0.0..=1.0).contains(&self.abort_threshold) {
            return Err(Error::InvalidParams(format!("abort threshold must lie in [0, 1], got {}", self.abort_threshold)));
        }
        if self.parties < 3 {
            return Err(Error::InvalidParams(format!("need at least 3 parties, got {}", self.parties)));
        }
        Limits::default().check_oracle_n(self.parties)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QssStats {
    pub config: QssConfig,
    pub kept: u64,
    pub keep_rate: Rate,
    /// Receivers' reconstruction vs Alice's bit on kept, unchecked rounds.
    pub honest_key_agreement: Rate,
    pub check_error_rate: Rate,
    pub attacker_solo_accuracy: Option<Rate>,
    pub per_forged_round_detection: Option<Rate>,
    pub aborted: bool,
    /// Honest kept rounds whose outcome parity disagrees with the stabilizer sign.
    pub parity_violations: u64,
    /// Optimal probability of guessing Alice's bit from the held qubits once
    /// her basis is public but before the state is announced.
    pub attacker_helstrom_bound: f64,
    /// `½‖ρ_R(ψ0) - ρ_R(ψ1)‖₁` for the receivers' joint marginal.
    pub receiver_trace_distance: f64,
    /// `½ + ½·receiver_trace_distance`.
    pub receiver_helstrom_bound: f64,
}

#[derive(Debug, Clone, Copy)]
enum Basis {
    X,
    Y,
}

impl Basis {
    fn from_bit(y: bool) -> Self {
        if y {
            Self::Y
        } else {
            Self::X
        }
    }

    fn letter(self) -> char {
        match self {
            Self::X => 'X',
            Self::Y => 'Y',
        }
    }

    /// Rows are the conjugated `+1` and `-1` eigenvectors.
    fn rotation(self) -> DenseMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let off = match self {
            Self::X => Complex64::new(h, 0.0),
            Self::Y => Complex64::new(0.0, -h),
        };
        let h = Complex64::new(h, 0.0);
        DenseMatrix::from_row_slice(2, 2, &[h, off, h, -off])
    }
}

fn ghz_vector(m: usize, i: usize) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = StateVector::zeros(1 << m);
    v[0] = Complex64::new(h, 0.0);
    v[(1 << m) - 1] = Complex64::new(if i == 0 { h } else { -h }, 0.0);
    v
}

/// Pattern bit `q` set means qubit `q + 1` is measured in the Y basis.
fn bases_of(pattern: usize, m: usize) -> Vec<Basis> {
    (0..m).map(|q| Basis::from_bit(pattern >> q & 1 == 1)).collect()
}

fn rotate_all(psi: &StateVector, bases: &[Basis]) -> Result<StateVector> {
    let m = bases.len();
    let mut v = psi.clone();
    for (q, b) in bases.iter().enumerate() {
        v = dense::apply_on_subset(&b.rotation(), &v, m, &[q + 1])?;
    }
    Ok(v)
}

fn sample(dist: &[f64], rng: &mut impl Rng) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    for (k, p) in dist.iter().enumerate() {
        acc += p;
        if r < acc {
            return k;
        }
    }
    dist.len() - 1
}

#[derive(Debug, Clone)]
struct Helstrom {
    /// Projector onto "guess 0"; `None` means the hypotheses coincide.
    projector: Option<DenseMatrix>,
    bound: f64,
}

fn helstrom(rho0: &DenseMatrix, rho1: &DenseMatrix) -> Helstrom {
    let gamma = (rho0 - rho1) * Complex64::new(0.5, 0.0);
    let eig = gamma.clone().symmetric_eigen();
    let positive: f64 = eig.eigenvalues.iter().filter(|&&l| l > 0.0).sum();
    if eig.eigenvalues.iter().all(|l| l.abs() < 1e-12) {
        return Helstrom { projector: None, bound: 0.5 };
    }
    let dim = gamma.nrows();
    let mut proj = DenseMatrix::zeros(dim, dim);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l > 1e-12 {
            let v = eig.eigenvectors.column(k);
            proj += v * v.adjoint();
        }
    }
    Helstrom { projector: Some(proj), bound: 0.5 + positive }
}

/// Everything a round needs, precomputed from the dense states.
struct Model {
    m: usize,
    variant: Variant,
    /// `sign_bit[pattern][i]`: 1 when the measured string carries sign −1 on codeword `i`.
    sign_bit: Vec<[u8; 2]>,
    /// Outcome distributions for kept patterns, per codeword.
    honest: Vec<Option<[Vec<f64>; 2]>>,
    /// `post[b1][i][a]`: receivers' state after Alice sees `a` in basis `b1`.
    post: [[[StateVector; 2]; 2]; 2],
    alice_prob: [[[f64; 2]; 2]; 2],
    charlie: [Helstrom; 2],
    fresh_prob: [f64; 2],
    receiver_trace_distance: f64,
}

impl Model {
    fn new(variant: Variant, m: usize) -> Result<Self> {
        let spec = codes::ghz(m)?;
        let stabilizers = spec.stabilizer_ops()?;
        let z_bar = spec.logical_z_ops()?.remove(0);
        let groups = [0u8, 1].map(|i| {
            let mut gens = stabilizers.clone();
            gens.push(if i == 0 { z_bar.clone() } else { z_bar.negated() });
            StabilizerGroup::new(gens)
        });
        let groups = [groups[0].clone()?, groups[1].clone()?];
        let states = [ghz_vector(m, 0), ghz_vector(m, 1)];

        let mut sign_bit = vec![[0u8; 2]; 1 << m];
        let mut honest = vec![None; 1 << m];
        for pattern in 0..1usize << m {
            if pattern.count_ones() % 2 == 1 {
                continue;
            }
            let bases = bases_of(pattern, m);
            let text: String = bases.iter().map(|b| b.letter()).collect();
            let op = PauliOperator::parse(&text, m)?;
            for i in 0..2 {
                let signed = groups[i]
                    .signed_match(&op)
                    .ok_or_else(|| Error::Numerical(format!("{text} not in the GHZ stabilizer group")))?;
                sign_bit[pattern][i] = u8::from(signed.sign() == Some(-1));
            }
            let dists = [0, 1].map(|i| rotate_all(&states[i], &bases).map(|v| v.iter().map(|c| c.norm_sqr()).collect()));
            let [d0, d1] = dists;
            honest[pattern] = Some([d0?, d1?]);
        }

        let half = 1usize << (m - 1);
        let mut post: [[[StateVector; 2]; 2]; 2] = Default::default();
        let mut alice_prob = [[[0.0; 2]; 2]; 2];
        for b1 in 0..2 {
            let rot = Basis::from_bit(b1 == 1).rotation();
            for i in 0..2 {
                let v = dense::apply_on_subset(&rot, &states[i], m, &[1])?;
                for a in 0..2 {
                    let part = StateVector::from_iterator(half, (0..half).map(|r| v[a * half + r]));
                    let p = part.norm_squared();
                    alice_prob[b1][i][a] = p;
                    post[b1][i][a] = part / Complex64::new(p.sqrt(), 0.0);
                }
            }
        }
        let prior = match variant {
            Variant::Original => [1.0, 0.0],
            Variant::Modified => [0.5, 0.5],
        };
        let charlie = [0, 1].map(|b1| {
            let hyp = [0, 1].map(|a| {
                let mut rho = DenseMatrix::zeros(half, half);
                for i in 0..2 {
                    let v = &post[b1][i][a];
                    rho += v * v.adjoint() * Complex64::new(prior[i], 0.0);
                }
                rho
            });
            helstrom(&hyp[0], &hyp[1])
        });
        let fresh = |b: usize| -> f64 {
            let mut zero = StateVector::zeros(2);
            zero[0] = Complex64::new(1.0, 0.0);
            (Basis::from_bit(b == 1).rotation() * zero)[0].norm_sqr()
        };
        let r0 = dense::reduced_from_vector(&states[0], m, &[1])?;
        let r1 = dense::reduced_from_vector(&states[1], m, &[1])?;
        Ok(Self {
            m,
            variant,
            sign_bit,
            honest,
            post,
            alice_prob,
            charlie,
            fresh_prob: [fresh(0), fresh(1)],
            receiver_trace_distance: dense::trace_distance(&r0, &r1),
        })
    }

    fn prepared(&self, rng: &mut impl Rng) -> usize {
        match self.variant {
            Variant::Original => 0,
            Variant::Modified => usize::from(rng.random::<bool>()),
        }
    }

    /// Codeword index the receivers use when reconstructing.
    fn announced(&self, i: usize) -> usize {
        match self.variant {
            Variant::Original => 0,
            Variant::Modified => i,
        }
    }

    fn honest_round(&self, rng: &mut impl Rng, check_fraction: f64, t: &mut Tally) {
        let i = self.prepared(rng);
        let pattern = rng.random_range(0..1usize << self.m);
        let Some(dists) = &self.honest[pattern] else { return };
        t.kept += 1;
        let idx = sample(&dists[i], rng);
        let bit = |q: usize| (idx >> (self.m - 1 - q) & 1) as u8;
        let a = bit(0);
        let receivers = (1..self.m).fold(0u8, |acc, q| acc ^ bit(q));
        if a ^ receivers != self.sign_bit[pattern][i] {
            t.parity_violations += 1;
        }
        let recon = receivers ^ self.sign_bit[pattern][self.announced(i)];
        t.finish(recon == a, rng.random_bool(check_fraction));
    }

    fn attack_round(&self, rng: &mut impl Rng, check_fraction: f64, t: &mut Tally) {
        let i = self.prepared(rng);
        let pattern = rng.random_range(0..1usize << self.m);
        if pattern.count_ones() % 2 == 1 {
            return;
        }
        t.kept += 1;
        let b1 = pattern & 1;
        let a = usize::from(rng.random::<f64>() >= self.alice_prob[b1][i][0]);
        // receivers 2..m-1 measure fresh |0⟩ qubits in their own bases
        let others = (1..self.m - 1).fold(0u8, |acc, q| {
            let b = pattern >> q & 1;
            acc ^ u8::from(rng.random::<f64>() >= self.fresh_prob[b])
        });
        let guess = match &self.charlie[b1].projector {
            Some(p) => {
                let v = &self.post[b1][i][a];
                let p0 = v.dotc(&(p * v)).re;
                u8::from(rng.random::<f64>() >= p0)
            }
            None => u8::from(rng.random::<bool>()),
        };
        let state_guess = self.prepared(rng);
        let forged = guess ^ others ^ self.sign_bit[pattern][state_guess];
        let recon = others ^ forged ^ self.sign_bit[pattern][self.announced(i)];
        t.solo_correct += u64::from(guess == a as u8);
        t.finish(recon == a as u8, rng.random_bool(check_fraction));
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    kept: u64,
    key: u64,
    agree: u64,
    checked: u64,
    check_errors: u64,
    solo_correct: u64,
    parity_violations: u64,
}

impl Tally {
    fn finish(&mut self, correct: bool, check: bool) {
        if check {
            self.checked += 1;
            self.check_errors += u64::from(!correct);
        } else {
            self.key += 1;
            self.agree += u64::from(correct);
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            kept: self.kept + o.kept,
            key: self.key + o.key,
            agree: self.agree + o.agree,
            checked: self.checked + o.checked,
            check_errors: self.check_errors + o.check_errors,
            solo_correct: self.solo_correct + o.solo_correct,
            parity_violations: self.parity_violations + o.parity_violations,
        }
    }
}

pub fn qss_run(config: &QssConfig) -> Result<QssStats> {
    config.validate()?;
    let model = Model::new(config.variant, config.parties)?;
    let tally = (0..config.rounds)
        .into_par_iter()
        .fold(Tally::default, |mut t, r| {
            let mut rng = stream_rng(config.seed, r);
            match config.strategy {
                Strategy::Honest => model.honest_round(&mut rng, config.check_fraction, &mut t),
                Strategy::DelayDiscriminate => model.attack_round(&mut rng, config.check_fraction, &mut t),
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    let check_error_rate = Rate::new(tally.check_errors, tally.checked);
    let attacking = config.strategy == Strategy::DelayDiscriminate;
    Ok(QssStats {
        config: config.clone(),
        kept: tally.kept,
        keep_rate: Rate::new(tally.kept, config.rounds),
        honest_key_agreement: Rate::new(tally.agree, tally.key),
        check_error_rate,
        attacker_solo_accuracy: attacking.then(|| Rate::new(tally.solo_correct, tally.kept)),
        per_forged_round_detection: attacking.then_some(check_error_rate),
        aborted: tally.checked > 0 && check_error_rate.value > config.abort_threshold,
        parity_violations: tally.parity_violations,
        attacker_helstrom_bound: 0.5 * (model.charlie[0].bound + model.charlie[1].bound),
        receiver_trace_distance: model.receiver_trace_distance,
        receiver_helstrom_bound: 0.5 + 0.5 * model.receiver_trace_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(variant: Variant, strategy: Strategy, rounds: u64) -> QssStats {
        qss_run(&QssConfig { variant, strategy, rounds, ..QssConfig::default() }).unwrap()
    }

    #[test]
    fn rotation_rows_are_eigenvectors() {
        for b in [Basis::X, Basis::Y] {
            let w = b.rotation();
            let u = &w * w.adjoint();
            assert!((u - DenseMatrix::identity(2, 2)).norm() < 1e-12);
        }
        // ⟨+i| for Y rows: (1, -i)/√2
        let w = Basis::Y.rotation();
        assert!((w[(0, 1)] - Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn yyx_sign_on_ghz_plus() {
        let model = Model::new(Variant::Modified, 3).unwrap();
        // pattern bits: qubits 1 and 2 in Y
        assert_eq!(model.sign_bit[0b011], [1, 0]);
        assert_eq!(model.sign_bit[0b000], [0, 1]);
    }

    #[test]
    fn honest_modified() {
        let s = run(Variant::Modified, Strategy::Honest, 20_000);
        assert!(s.keep_rate.consistent_with(0.5));
        assert_eq!(s.honest_key_agreement.value, 1.0);
        assert_eq!(s.check_error_rate.successes, 0);
        assert_eq!(s.parity_violations, 0);
        assert!(!s.aborted);
    }

    #[test]
    fn attack_contrast() {
        let orig = run(Variant::Original, Strategy::DelayDiscriminate, 20_000);
        assert_eq!(orig.attacker_solo_accuracy.unwrap().value, 1.0);
        assert_eq!(orig.per_forged_round_detection.unwrap().successes, 0);
        assert!((orig.attacker_helstrom_bound - 1.0).abs() < 1e-12);
        let modi = run(Variant::Modified, Strategy::DelayDiscriminate, 20_000);
        assert!(modi.attacker_solo_accuracy.unwrap().consistent_with(0.5));
        assert!(modi.per_forged_round_detection.unwrap().consistent_with(0.5));
        assert!((modi.attacker_helstrom_bound - 0.5).abs() < 1e-12);
        assert!(modi.receiver_trace_distance < 1e-12);
        assert!(modi.aborted);
    }

    #[test]
    fn more_parties() {
        let s = qss_run(&QssConfig { parties: 5, rounds: 4000, ..QssConfig::default() }).unwrap();
        assert_eq!(s.parity_violations, 0);
        assert_eq!(s.honest_key_agreement.value, 1.0);
        let s = qss_run(&QssConfig { parties: 4, rounds: 4000, strategy: Strategy::DelayDiscriminate, variant: Variant::Original, ..QssConfig::default() }).unwrap();
        assert_eq!(s.attacker_solo_accuracy.unwrap().value, 1.0);
    }

    #[test]
    fn deterministic() {
        let a = run(Variant::Modified, Strategy::DelayDiscriminate, 3000);
        let b = run(Variant::Modified, Strategy::DelayDiscriminate, 3000);
        assert_eq!(a, b);
    }

    #[test]
    fn config_errors() {
        for c in [
            QssConfig { rounds: 0, ..QssConfig::default() },
            QssConfig { check_fraction: 0.0, ..QssConfig::default() },
            QssConfig { check_fraction: 1.0, ..QssConfig::default() },
            QssConfig { parties: 2, ..QssConfig::default() },
        ] {
            assert!(qss_run(&c).is_err());
        }
        assert_eq!("delay-discriminate".parse::<Strategy>().unwrap(), Strategy::DelayDiscriminate);
        assert!("sideways".parse::<Variant>().is_err());
    }
}
