//! Regression checks for the headline numbers. Each check recomputes its
//! values from scratch with fixed seeds and reports pass/fail with details.

use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{self, validate, CodeSpec};
use crate::dense::{self, EQUALITY_TOL};
use crate::error::Result;
use crate::gf2::BitVec;
use crate::pauli::PauliOperator;
use crate::protocols::{self, stream_rng, QssConfig, Strategy, Variant};
use crate::report::scan_cyclic;
use crate::stabilizer::Limits;
use crate::undetermined::{self, mixed_pair_n2, mixed_tracedown_check, oracle_sweep, Analysis};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl ClaimResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds
        )
    }
}

/// Collects sub-checks; the claim passes when every one does.
struct Checks {
    passed: bool,
    details: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self { passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.passed &= ok;
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("note {}", what.into()));
    }
}

pub const TITLES: [&str; 12] = [
    "GHZ family is 1-undetermined with every Z_i a logical bit flip",
    "[[4,1,2]] is 2-undetermined; listed operators and oracle agree",
    "[[5,1,3]] has d = D = 3 with a complete weight-3 error cover",
    "cyclic family 7..15 is (n-2)-undetermined",
    "Steane code: {2,3,4} distinguishes, 5-undetermined, minimal D' = d = 3",
    "[[4,2,2]] mixtures have D = 3 while d = 2",
    "Steane trace-down with D' = 2 gives D'' = 3",
    "symbolic and dense verdicts match on every subset (n <= 8)",
    "modified QSS, honest parties",
    "QSS under the delay-and-discriminate attack",
    "bit-commitment sender cheats undetected",
    "algebra, monotonicity, d <= D and centralizer dimension properties",
];

pub fn run_claim(id: usize) -> ClaimResult {
    let started = Instant::now();
    let mut c = Checks::new();
    let outcome = match id {
        1 => ghz_family(&mut c),
        2 => code_412(&mut c),
        3 => code_513(&mut c),
        4 => cyclic_family(&mut c),
        5 => steane(&mut c),
        6 => code_422(&mut c),
        7 => tracedown(&mut c),
        8 => oracle_equivalence(&mut c),
        9 => qss_honest(&mut c),
        10 => qss_attack(&mut c),
        11 => bit_commitment(&mut c),
        12 => properties(&mut c),
        _ => panic!("no claim {id}"),
    };
    if let Err(e) = outcome {
        c.check(false, format!("error: {e}"));
    }
    ClaimResult {
        id,
        title: TITLES[id - 1].to_string(),
        passed: c.passed,
        details: c.details,
        seconds: started.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<ClaimResult> {
    (1..=TITLES.len()).map(run_claim).collect()
}

fn analysis(spec: &CodeSpec) -> Result<Analysis> {
    Analysis::new(spec, Limits::default())
}

fn contains(set: &[PauliOperator], sparse: &str, n: usize) -> Result<bool> {
    let op = PauliOperator::parse_sparse(sparse, n)?;
    Ok(set.iter().any(|x| x.same_up_to_phase(&op)))
}

fn ghz_family(c: &mut Checks) -> Result<()> {
    for n in 3..=15 {
        let a = analysis(&codes::ghz(n)?)?;
        let u = a.unconditional_d();
        let xs = a.x_class()?;
        let mut all_z = true;
        for q in 1..=n {
            all_z &= contains(xs, &format!("Z{q}"), n)?;
        }
        c.check(u.d_min == Some(1) && u.scan_confirms && all_z, format!("ghz_{n}: D_min = {:?}, every Z_i in class: {all_z}", u.d_min));
    }
    Ok(())
}

fn code_412(c: &mut Checks) -> Result<()> {
    let spec = codes::code_412();
    let a = analysis(&spec)?;
    let u = a.unconditional_d();
    c.check(u.d_min == Some(2) && u.scan_confirms, format!("D_min = {:?}", u.d_min));
    let xs = a.x_class()?;
    for s in ["Y1Y2", "Y2Y3", "Y3Y4", "Y4Y1", "Z1Z3", "X2X4"] {
        c.check(contains(xs, s, 4)?, format!("{s} anticommutes with Y1X2Z4 and commutes with the stabilizers"));
    }
    let (r0, r1) = a.dense_pair()?;
    for t in (1..=4).combinations(2) {
        let dist = dense::frobenius_distance(&dense::partial_trace(&r0, 4, &t)?, &dense::partial_trace(&r1, 4, &t)?);
        let symbolic = a.reduced_equal_on(&t)?.equal;
        c.check(symbolic && dist <= EQUALITY_TOL, format!("trace {t:?}: symbolic equal = {symbolic}, oracle distance {dist:.1e}"));
    }
    Ok(())
}

fn code_513(c: &mut Checks) -> Result<()> {
    let spec = codes::code_513();
    let a = analysis(&spec)?;
    let d = undetermined::distance(&a)?;
    let u = a.unconditional_d();
    c.check(d == 3, format!("distance {d}"));
    c.check(u.d_min == Some(3) && u.scan_confirms, format!("D_min = {:?}", u.d_min));
    let listed: Vec<PauliOperator> = ["Y2Y3X5", "X1Z2Z5"]
        .iter()
        .flat_map(|s| {
            let op = PauliOperator::parse_sparse(s, 5).expect("literal");
            (0..5).map(move |k| op.cyclic_shift(k))
        })
        .collect();
    let xs = a.x_class()?;
    let all_members = listed.iter().all(|p| xs.iter().any(|x| x.same_up_to_phase(p)));
    c.check(all_members, "the ten cyclic operators are in the logical class");
    let cover = a.undetected_error_cover(3)?;
    let supports: Vec<Vec<usize>> = listed.iter().map(|p| p.weight_support().1.into_iter().collect()).sorted().dedup().collect();
    let by_listed = (1..=5).combinations(3).all(|s| supports.contains(&s));
    c.check(cover.full && cover.agrees && by_listed, format!("cover of all {} 3-subsets (listed operators alone: {by_listed})", cover.total));
    let e = a.necessary_ed(3)?;
    c.check(e.pass && e.binomial == 10, format!("E_3 = {} >= C(5,3) = {}", e.count, e.binomial));
    Ok(())
}

fn cyclic_family(c: &mut Checks) -> Result<()> {
    let scan = scan_cyclic(7, 15, &Limits::default())?;
    for e in &scan.entries {
        if e.validation.valid {
            c.check(
                e.undetermined_at_n_minus_2 == Some(true),
                format!(
                    "cyclic_{}: pattern {}, w_min = {:?}, D_min = {:?}, d = {:?}",
                    e.n,
                    e.pattern,
                    e.w_min,
                    e.minimal_unconditional_d,
                    e.distance
                ),
            );
        } else {
            let why: Vec<String> = e.validation.failures().map(|f| f.name.clone()).collect();
            c.note(format!("finding: cyclic_{} ({}) fails validation: {}", e.n, e.pattern, why.join(", ")));
        }
    }
    c.check(scan.entries.iter().any(|e| e.validation.valid), "at least one valid n in range");
    Ok(())
}

fn steane(c: &mut Checks) -> Result<()> {
    let spec = codes::steane_713();
    let a = analysis(&spec)?;
    let v = a.reduced_equal_on(&[2, 3, 4])?;
    let (r0, r1) = a.dense_pair()?;
    let dist = dense::frobenius_distance(&dense::partial_trace(&r0, 7, &[2, 3, 4])?, &dense::partial_trace(&r1, 7, &[2, 3, 4])?);
    let witness = v.witness.as_ref().map(|w| w.sparse_string()).unwrap_or_default();
    c.check(!v.equal && dist > 1e-6, format!("trace {{2,3,4}}: witness {witness}, oracle distance {dist:.6}"));
    let u = a.unconditional_d();
    c.check(u.d_min == Some(5) && u.scan_confirms, format!("D_min = {:?}", u.d_min));
    let scan5 = a.conditional_scan(5)?;
    c.check(scan5.all_undetermined() && scan5.total == 21, "all 21 five-qubit traces leave equal reductions");
    let d = undetermined::distance(&a)?;
    let scan3 = a.conditional_scan(3)?;
    let minimal = a.minimal_conditional_d();
    c.check(
        d == 3 && scan3.any_undetermined() && minimal == Some(d),
        format!("d = {d}, {} undetermined 3-subsets, minimal D' = {minimal:?}", scan3.undetermined.len()),
    );
    Ok(())
}

fn code_422(c: &mut Checks) -> Result<()> {
    let spec = codes::code_422();
    let a = analysis(&spec)?;
    let m = mixed_pair_n2(&a)?;
    let d = undetermined::distance(&a)?;
    c.check(m.d_mixed == Some(3) && d == 2, format!("D_mixed = {:?}, d = {d}", m.d_mixed));
    for s in ["Z1X2Y3", "Z2X3Y4", "X1Z3Y4", "X1Z2Y4"] {
        let op = PauliOperator::parse_sparse(s, 4)?;
        let found = m.x12_weight_d.iter().any(|x| x.same_up_to_phase(&op));
        c.check(found, format!("{s} anticommutes with exactly one logical Z"));
    }
    let (r0, r1) = a.dense_pair()?;
    let dist = |t: &[usize]| -> Result<f64> {
        Ok(dense::frobenius_distance(&dense::partial_trace(&r0, 4, t)?, &dense::partial_trace(&r1, 4, t)?))
    };
    let mut worst = 0.0f64;
    for t in (1..=4).combinations(3) {
        worst = worst.max(dist(&t)?);
    }
    c.check(worst <= EQUALITY_TOL, format!("single-qubit reductions equal (max distance {worst:.1e})"));
    let mut unequal = Vec::new();
    for t in (1..=4).combinations(2) {
        if dist(&t)? > EQUALITY_TOL {
            unequal.push(t);
        }
    }
    c.check(!unequal.is_empty(), format!("two-qubit reductions differ after tracing {unequal:?}"));
    Ok(())
}

fn tracedown(c: &mut Checks) -> Result<()> {
    let a = analysis(&codes::steane_713())?;
    let t = mixed_tracedown_check(&a, 2, None)?;
    c.check(
        t.d_double_prime == 3 && t.verdict,
        format!(
            "traced {:?}, {} further 3-subsets all equal (max distance {:.1e})",
            t.traced, t.subsets_tested, t.max_distance
        ),
    );
    Ok(())
}

/// Valid `k = 1` catalog instances with `n ≤ max_n`.
pub fn k1_catalog(max_n: usize) -> Vec<CodeSpec> {
    let mut specs: Vec<CodeSpec> = (2..=max_n).filter_map(|n| codes::ghz(n).ok()).collect();
    specs.extend([codes::code_412(), codes::code_513(), codes::steane_713()].into_iter().filter(|s| s.n <= max_n));
    specs.extend((5..=max_n).filter_map(|n| codes::cyclic(n).ok()).filter(|s| validate(s).valid));
    specs
}

fn oracle_equivalence(c: &mut Checks) -> Result<()> {
    for spec in k1_catalog(8) {
        let sweep = oracle_sweep(&analysis(&spec)?)?;
        c.check(
            sweep.agrees(),
            format!("{}: {} subsets, {} disagreements", spec.name, sweep.subsets_checked, sweep.disagreements.len()),
        );
    }
    Ok(())
}

pub const QSS_SEED: u64 = 20_240_611;

fn qss_honest(c: &mut Checks) -> Result<()> {
    let s = protocols::qss_run(&QssConfig { rounds: 100_000, seed: QSS_SEED, ..QssConfig::default() })?;
    c.check((s.keep_rate.value - 0.5).abs() <= 0.005, format!("keep rate {:.4}", s.keep_rate.value));
    c.check(s.honest_key_agreement.value == 1.0, format!("key agreement {}", s.honest_key_agreement.value));
    c.check(s.check_error_rate.successes == 0, format!("check errors {}", s.check_error_rate.successes));
    c.check(s.parity_violations == 0, format!("parity violations {}", s.parity_violations));
    Ok(())
}

fn qss_attack(c: &mut Checks) -> Result<()> {
    let base = QssConfig { rounds: 100_000, seed: QSS_SEED, strategy: Strategy::DelayDiscriminate, ..QssConfig::default() };
    let m = protocols::qss_run(&base)?;
    let acc = m.attacker_solo_accuracy.map_or(f64::NAN, |r| r.value);
    let det = m.per_forged_round_detection.map_or(f64::NAN, |r| r.value);
    c.check((acc - 0.5).abs() <= 0.01, format!("modified: attacker accuracy {acc:.4} (bound {:.3})", m.attacker_helstrom_bound));
    c.check((det - 0.5).abs() <= 0.01, format!("modified: detection per forged round {det:.4}"));
    let o = protocols::qss_run(&QssConfig { variant: Variant::Original, ..base })?;
    let acc = o.attacker_solo_accuracy.map_or(f64::NAN, |r| r.value);
    c.check(acc >= 0.99, format!("original: attacker accuracy {acc:.4}"));
    Ok(())
}

fn bit_commitment(c: &mut Checks) -> Result<()> {
    let s = protocols::bc_demo(1000, QSS_SEED)?;
    c.check(s.max_reduced_deviation < 1e-10, format!("max receiver deviation {:.1e}", s.max_reduced_deviation));
    c.check(
        s.open_success_bit0.value == 1.0 && s.open_success_bit1.value == 1.0,
        format!("open success {} / {}", s.open_success_bit0.value, s.open_success_bit1.value),
    );
    Ok(())
}

fn all_paulis(n: usize) -> impl Iterator<Item = PauliOperator> {
    (0..4usize.pow(n as u32)).flat_map(move |code| {
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for q in 0..n {
            let l = code >> (2 * q) & 3;
            x.set(q, l & 1 == 1);
            z.set(q, l & 2 == 2);
        }
        (0..4u8).map(move |ph| PauliOperator::from_parts(x.clone(), z.clone(), ph).expect("sizes match"))
    })
}

fn random_pauli(n: usize, rng: &mut impl Rng) -> PauliOperator {
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for q in 0..n {
        x.set(q, rng.random());
        z.set(q, rng.random());
    }
    PauliOperator::from_parts(x, z, rng.random_range(0..4)).expect("sizes match")
}

fn products_match(a: &PauliOperator, b: &PauliOperator) -> bool {
    let (ma, mb) = (dense::pauli_matrix(a), dense::pauli_matrix(b));
    let prod = &ma * &mb;
    let commute = (&prod - &mb * &ma).norm() < 1e-12;
    (dense::pauli_matrix(&(a * b)) - prod).norm() < 1e-12 && commute == a.commutes_with(b).expect("same n")
}

fn properties(c: &mut Checks) -> Result<()> {
    let mut bad = 0usize;
    let mut count = 0usize;
    for n in 1..=2 {
        let ops: Vec<PauliOperator> = all_paulis(n).collect();
        for a in &ops {
            for b in &ops {
                count += 1;
                bad += usize::from(!products_match(a, b));
            }
        }
    }
    c.check(bad == 0, format!("exhaustive 1- and 2-qubit products vs dense: {bad} mismatches of {count}"));

    let mut rng = stream_rng(QSS_SEED, 12);
    let mut bad = 0usize;
    for _ in 0..10_000 {
        let (a, b, d) = (random_pauli(3, &mut rng), random_pauli(3, &mut rng), random_pauli(3, &mut rng));
        let assoc = &(&a * &b) * &d == &a * &(&b * &d);
        let weight = (&a * &b).weight() <= a.weight() + b.weight();
        bad += usize::from(!(assoc && weight && products_match(&a, &b)));
    }
    c.check(bad == 0, format!("10^4 random 3-qubit triples (dense product, associativity, weight bound): {bad} failures"));

    let mut catalog = k1_catalog(10);
    catalog.push(codes::code_422());
    for spec in &catalog {
        let a = analysis(spec)?;
        let n = a.n();
        let all: Vec<bool> = (1..n).map(|d| a.conditional_scan(d).map(|s| s.all_undetermined())).collect::<Result<_>>()?;
        let monotone = all.windows(2).all(|w| !w[0] || w[1]);
        let d = undetermined::distance(&a)?;
        let big_d = a.d_min_formula();
        let d_le = big_d.is_none_or(|bd| d <= bd);
        let group = a.group();
        let basis = group.centralizer_basis();
        let commuting = basis.iter().all(|b| group.generators().iter().all(|g| b.commutes_with(g).unwrap_or(false)));
        let dim = basis.len() == 2 * n - group.rank() && crate::gf2::rank(&basis.iter().map(|b| b.symplectic_row()).collect::<Vec<_>>(), 2 * n) == basis.len();
        let ed = match big_d {
            Some(bd) => a.necessary_ed(bd)?.pass,
            None => true,
        };
        c.check(
            monotone && d_le && commuting && dim && ed,
            format!(
                "{}: monotone {monotone}, d = {d} <= D = {big_d:?}, centralizer dim {} = 2n - r, necessary E_D at D {ed}",
                spec.name,
                basis.len()
            ),
        );
    }
    Ok(())
}
