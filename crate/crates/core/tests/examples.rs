//! Worked examples checked against brute force or dense matrices.

use std::collections::HashSet;

use itertools::Itertools;
use num_complex::Complex64;
use undet_core::codes::{self, validate, CodeSpec};
use undet_core::dense::{self, DenseMatrix, EQUALITY_TOL};
use undet_core::gf2::BitVec;
use undet_core::stabilizer::{code_distance, logical_x_set, Limits, StabilizerGroup};
use undet_core::undetermined::{mixed_tracedown_check, Analysis};
use undet_core::{Error, PauliOperator};

fn p(s: &str) -> PauliOperator {
    PauliOperator::parse_any(s).unwrap()
}

fn sp(s: &str, n: usize) -> PauliOperator {
    PauliOperator::parse_sparse(s, n).unwrap()
}

fn limits() -> Limits {
    Limits::default()
}

/// Every unsigned Pauli on `n` qubits.
fn all_unsigned(n: usize) -> Vec<PauliOperator> {
    (0..4usize.pow(n as u32))
        .map(|code| {
            let mut x = BitVec::zeros(n);
            let mut z = BitVec::zeros(n);
            for q in 0..n {
                x.set(q, code >> (2 * q) & 1 == 1);
                z.set(q, code >> (2 * q + 1) & 1 == 1);
            }
            PauliOperator::unsigned_from_bits(x, z)
        })
        .collect()
}

/// Commutation from dense matrices rather than the symplectic form.
fn dense_commutes(a: &PauliOperator, b: &PauliOperator) -> bool {
    let (ma, mb) = (dense::pauli_matrix(a), dense::pauli_matrix(b));
    (&ma * &mb - &mb * &ma).norm() < 1e-12
}

/// Commutation by counting positions with two different non-identity letters.
fn letter_commutes(a: &PauliOperator, b: &PauliOperator) -> bool {
    let clashes = a
        .letter_string()
        .chars()
        .zip(b.letter_string().chars())
        .filter(|&(x, y)| x != 'I' && y != 'I' && x != y)
        .count();
    clashes % 2 == 0
}

fn brute_centralizer(group: &StabilizerGroup) -> Vec<PauliOperator> {
    all_unsigned(group.n())
        .into_iter()
        .filter(|c| group.generators().iter().all(|g| letter_commutes(c, g)))
        .collect()
}

fn brute_distance(spec: &CodeSpec) -> usize {
    let g = spec.group().unwrap();
    let elements: HashSet<String> = g.elements(&limits()).unwrap().iter().map(|e| e.letter_string()).collect();
    brute_centralizer(&g).iter().filter(|c| !elements.contains(&c.letter_string())).map(|c| c.weight()).min().unwrap()
}

#[test]
fn ghz3_group_elements() {
    let g = codes::ghz(3).unwrap().group().unwrap();
    let got: HashSet<String> = g.elements(&limits()).unwrap().iter().map(|e| e.to_string()).collect();
    let expected: HashSet<String> = ["III", "ZZI", "IZZ", "ZIZ"].iter().map(|s| s.to_string()).collect();
    assert_eq!(got, expected);
}

#[test]
fn group_elements_match_dense_products() {
    for spec in [codes::ghz(4).unwrap(), codes::code_412(), codes::code_513(), codes::code_422(), codes::steane_713()] {
        let g = spec.group().unwrap();
        let gens: Vec<DenseMatrix> = g.generators().iter().map(dense::pauli_matrix).collect();
        let dim = 1usize << spec.n;
        for (m, e) in g.elements(&limits()).unwrap().iter().enumerate() {
            let mut prod = DenseMatrix::identity(dim, dim);
            for (j, gm) in gens.iter().enumerate() {
                if m >> j & 1 == 1 {
                    prod *= gm;
                }
            }
            assert!((dense::pauli_matrix(e) - prod).norm() < 1e-12, "{} element {m}", spec.name);
            assert!(e.is_hermitian());
        }
    }
}

#[test]
fn code_422_contains_xxxx_up_to_sign() {
    let g = codes::code_422().group().unwrap();
    let elements = g.elements(&limits()).unwrap();
    assert_eq!(elements.len(), 4);
    let xxxx = elements.iter().find(|e| e.letter_string() == "XXXX").unwrap();
    let yyyy = dense::pauli_matrix(&p("YYYY"));
    let zzzz = dense::pauli_matrix(&p("ZZZZ"));
    assert!((dense::pauli_matrix(xxxx) - yyyy * zzzz).norm() < 1e-12);
}

#[test]
fn minus_identity_rejected() {
    assert_eq!(StabilizerGroup::new(vec![p("X"), p("-X")]).unwrap_err(), Error::MinusIdentity);
}

#[test]
fn centralizers_match_brute_force() {
    for spec in [codes::ghz(3).unwrap(), codes::code_412(), codes::code_513(), codes::steane_713()] {
        let g = spec.group().unwrap();
        let basis = g.centralizer_basis();
        assert_eq!(basis.len(), 2 * spec.n - g.rank());
        let span: HashSet<String> = undet_core::stabilizer::unsigned_span(&basis, spec.n, &limits())
            .unwrap()
            .iter()
            .map(|e| e.letter_string())
            .collect();
        let brute: HashSet<String> = brute_centralizer(&g).iter().map(|e| e.letter_string()).collect();
        assert_eq!(span, brute, "{}", spec.name);
    }
    let single = StabilizerGroup::new(vec![p("Z")]).unwrap();
    let basis = single.centralizer_basis();
    assert_eq!(basis.len(), 1);
    assert_eq!(basis[0].letter_string(), "Z");
}

#[test]
fn logical_x_sets_match_brute_force() {
    for spec in [codes::ghz(3).unwrap(), codes::code_412(), codes::code_513()] {
        let g = spec.group().unwrap();
        let z = &spec.logical_z_ops().unwrap()[0];
        let got: HashSet<String> = logical_x_set(&g, z, &limits()).unwrap().iter().map(|e| e.letter_string()).collect();
        let brute: HashSet<String> =
            brute_centralizer(&g).iter().filter(|c| !letter_commutes(c, z)).map(|e| e.letter_string()).collect();
        assert_eq!(got, brute, "{}", spec.name);
    }
}

#[test]
fn logical_x_set_rejects_outside_centralizer() {
    let g = codes::code_513().group().unwrap();
    assert!(matches!(logical_x_set(&g, &p("ZIIII"), &limits()), Err(Error::NotInCentralizer(_))));
}

#[test]
fn listed_513_operators_in_class() {
    let g = codes::code_513().group().unwrap();
    let xs = logical_x_set(&g, &p("ZZZZZ"), &limits()).unwrap();
    for base in ["Y2Y3X5", "X1Z2Z5"] {
        for k in 0..5 {
            let op = sp(base, 5).cyclic_shift(k);
            assert!(xs.iter().any(|x| x.same_up_to_phase(&op)), "{op}");
        }
    }
}

#[test]
fn coset_min_weights_by_enumeration() {
    let g = codes::ghz(5).unwrap().group().unwrap();
    let coset = g.coset(&p("XXXXX"), &limits()).unwrap();
    assert_eq!(coset.len(), 16);
    assert!(coset.iter().all(|c| c.weight() == 5));
    assert_eq!(g.coset_min_weight(&p("XXXXX"), &limits()).unwrap().0, 5);
    assert_eq!(g.coset_min_weight(&PauliOperator::identity(5), &limits()).unwrap().0, 0);

    let g = codes::code_513().group().unwrap();
    let (w, _) = g.coset_min_weight(&p("ZZZZZ"), &limits()).unwrap();
    assert_eq!(w, 3);
    let yiiyz = g.coset(&p("ZZZZZ"), &limits()).unwrap().into_iter().find(|c| c.letter_string() == "YIIYZ");
    assert!(yiiyz.is_some());
    assert_eq!(&p("ZZZZZ") * &p("XZZXI"), yiiyz.unwrap());
}

#[test]
fn distances_match_brute_force() {
    for (spec, d) in [
        (codes::code_513(), 3),
        (codes::ghz(4).unwrap(), 1),
        (codes::code_422(), 2),
        (codes::code_412(), 2),
        (codes::steane_713(), 3),
    ] {
        let g = spec.group().unwrap();
        assert_eq!(code_distance(&g, &limits()).unwrap(), d, "{}", spec.name);
        assert_eq!(brute_distance(&spec), d, "{}", spec.name);
    }
}

#[test]
fn catalog_presentations() {
    let g = codes::ghz(3).unwrap();
    assert_eq!(g.stabilizers, vec!["ZZI", "IZZ"]);
    assert_eq!(g.logical_z, vec!["XXX"]);
    let c9 = codes::cyclic(9).unwrap();
    assert_eq!(c9.stabilizers[0], "XXZZZZXXI");
    assert_eq!(c9.stabilizers.len(), 8);
    let five = codes::code_513();
    assert_eq!(five.stabilizers.len(), 4);
    assert_eq!(five.logical_z, vec!["ZZZZZ"]);
    assert_eq!(codes::cyclic(5).unwrap().stabilizers, five.stabilizers);
    assert!(codes::ghz(1).is_err());
    assert!(codes::cyclic(4).is_err());
    assert!(matches!(codes::catalog_by_name("toric", None), Err(Error::UnknownCode(_))));
}

#[test]
fn catalog_entries_validate() {
    for spec in [
        codes::ghz(2).unwrap(),
        codes::ghz(9).unwrap(),
        codes::code_412(),
        codes::code_513(),
        codes::steane_713(),
        codes::code_422(),
    ] {
        let r = validate(&spec);
        assert!(r.valid, "{}: {:?}", spec.name, r.failures().collect::<Vec<_>>());
    }
    assert_eq!(validate(&codes::steane_713()).rank, Some(6));
}

#[test]
fn cyclic_validity_by_n() {
    let valid: Vec<usize> = (7..=15).filter(|&n| validate(&codes::cyclic(n).unwrap()).valid).collect();
    assert_eq!(valid, vec![7, 9, 11, 13, 14]);
}

#[test]
fn noncommuting_spec_fails_validation() {
    let spec = CodeSpec {
        name: "bad".into(),
        n: 2,
        k: 1,
        stabilizers: vec!["XI".into()],
        logical_z: vec!["ZI".into()],
        logical_x: None,
        provenance: None,
    };
    let r = validate(&spec);
    assert!(!r.valid);
    assert!(r.failures().any(|c| c.name.starts_with("logical_z")));
    let one = StabilizerGroup::new(vec![p("X"), p("Z")]);
    assert!(matches!(one, Err(Error::NonCommuting(1, 2))));
}

#[test]
fn spec_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("412.json");
    codes::save_spec(&codes::code_412(), &path).unwrap();
    assert_eq!(codes::load_spec(&path).unwrap(), codes::code_412());

    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/steane_713.json");
    assert_eq!(codes::load_spec(fixture).unwrap(), codes::steane_713());

    let bad = r#"{"name":"x","n":5,"k":1,"stabilizers":["XZZX","IXZZX","XIXZZ","ZXIXZ"],"logical_z":["ZZZZZ"]}"#;
    match CodeSpec::from_json(bad) {
        Err(Error::Schema { field, .. }) => assert_eq!(field, "stabilizers[0] length"),
        other => panic!("{other:?}"),
    }
    let unknown = r#"{"name":"x","n":1,"k":1,"stabilizers":[],"logical_z":["Z"],"colour":1}"#;
    assert!(matches!(CodeSpec::from_json(unknown), Err(Error::Parse { .. })));
    assert!(matches!(CodeSpec::from_json("{\n  \"name\": }"), Err(Error::Parse { line: 2, .. })));
}

#[test]
fn reduced_equality_matches_dense_everywhere() {
    for spec in [codes::ghz(4).unwrap(), codes::code_412(), codes::code_513(), codes::steane_713()] {
        let a = Analysis::new(&spec, limits()).unwrap();
        let r0 = dense::build_density(&spec, 0, &limits()).unwrap();
        let r1 = dense::build_density(&spec, 1, &limits()).unwrap();
        for size in 1..spec.n {
            for t in (1..=spec.n).combinations(size) {
                let d = dense::frobenius_distance(
                    &dense::partial_trace(&r0, spec.n, &t).unwrap(),
                    &dense::partial_trace(&r1, spec.n, &t).unwrap(),
                );
                let v = a.reduced_equal_on(&t).unwrap();
                assert_eq!(v.equal, d <= EQUALITY_TOL, "{} {t:?}", spec.name);
                if let Some(w) = v.witness {
                    let (_, support) = w.weight_support();
                    assert!(support.iter().all(|q| !t.contains(q)));
                    assert!(a.group().coset(a.difference_operator(), &limits()).unwrap().contains(&w));
                }
            }
        }
    }
}

#[test]
fn steane_234_distance_regression() {
    let spec = codes::steane_713();
    let r0 = dense::build_density(&spec, 0, &limits()).unwrap();
    let r1 = dense::build_density(&spec, 1, &limits()).unwrap();
    let d = dense::frobenius_distance(
        &dense::partial_trace(&r0, 7, &[2, 3, 4]).unwrap(),
        &dense::partial_trace(&r1, 7, &[2, 3, 4]).unwrap(),
    );
    // ρ0 - ρ1 reduces to (1/8)·Z5Z6Z7 on the kept qubits: ‖·‖_F = 4/8 · ... over 16 dims
    assert!(d > 0.1);
    assert!((d - 0.5).abs() < 1e-12, "{d}");
}

#[test]
fn density_matches_vector_projector() {
    for spec in [codes::ghz(5).unwrap(), codes::code_412(), codes::code_513(), codes::steane_713()] {
        for bit in 0..2u8 {
            let rho = dense::build_density(&spec, bit, &limits()).unwrap();
            let v = dense::codeword_vector(&spec, &[bit], &limits()).unwrap();
            assert!(dense::frobenius_distance(&rho, &(&v * v.adjoint())) < 1e-10, "{} {bit}", spec.name);
            assert!((rho.trace().re - 1.0).abs() < 1e-9);
            assert!(dense::frobenius_distance(&(&rho * &rho), &rho) < 1e-9);
        }
    }
}

#[test]
fn ghz_densities_and_reduction() {
    let spec = codes::ghz(3).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (bit, sign) in [(0u8, 1.0), (1, -1.0)] {
        let mut v = dense::StateVector::zeros(8);
        v[0] = Complex64::new(h, 0.0);
        v[7] = Complex64::new(sign * h, 0.0);
        let rho = dense::build_density(&spec, bit, &limits()).unwrap();
        assert!(dense::frobenius_distance(&rho, &(&v * v.adjoint())) < 1e-12);
    }
    let rho = dense::build_density(&spec, 0, &limits()).unwrap();
    let red = dense::partial_trace(&rho, 3, &[1]).unwrap();
    let mut expected = DenseMatrix::zeros(4, 4);
    expected[(0, 0)] = Complex64::new(0.5, 0.0);
    expected[(3, 3)] = Complex64::new(0.5, 0.0);
    assert!(dense::frobenius_distance(&red, &expected) < 1e-12);
    let all = dense::partial_trace(&rho, 3, &[1, 2, 3]).unwrap();
    assert_eq!(all.nrows(), 1);
    assert!((all[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn partial_trace_order_independent() {
    let rho = dense::build_density(&codes::code_513(), 1, &limits()).unwrap();
    let joint = dense::partial_trace(&rho, 5, &[2, 4]).unwrap();
    let a = dense::partial_trace(&dense::partial_trace(&rho, 5, &[4]).unwrap(), 4, &[2]).unwrap();
    let b = dense::partial_trace(&dense::partial_trace(&rho, 5, &[2]).unwrap(), 4, &[3]).unwrap();
    assert!(dense::frobenius_distance(&joint, &a) < 1e-12);
    assert!(dense::frobenius_distance(&joint, &b) < 1e-12);
}

#[test]
fn mixed_density_spectrum() {
    let spec = codes::code_422();
    let r0 = dense::build_mixed_density(&spec, 0, &limits()).unwrap();
    let r1 = dense::build_mixed_density(&spec, 1, &limits()).unwrap();
    assert!((r0.trace().re - 1.0).abs() < 1e-12);
    let mut eig: Vec<f64> = r0.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert!((eig[0] - 0.5).abs() < 1e-12 && (eig[1] - 0.5).abs() < 1e-12);
    assert!(eig[2..].iter().all(|e| e.abs() < 1e-12));
    assert!(dense::frobenius_distance(&r0, &r1) > 0.5);
    for t in (1..=4).combinations(3) {
        let d = dense::frobenius_distance(&dense::partial_trace(&r0, 4, &t).unwrap(), &dense::partial_trace(&r1, 4, &t).unwrap());
        assert!(d <= EQUALITY_TOL);
    }
}

#[test]
fn relating_unitaries() {
    let spec = codes::code_513();
    let u = dense::relating_unitary(&spec, &[1, 2, 3], &limits()).unwrap();
    assert_eq!(u.matrix.nrows(), 8);
    assert!(u.residual < 1e-8 && u.unitarity_error < 1e-8);

    // U_T^{-1} U_T′ fixes ψ0 up to phase
    let psi0 = dense::codeword_vector(&spec, &[0], &limits()).unwrap();
    let v = dense::relating_unitary(&spec, &[3, 4, 5], &limits()).unwrap();
    let moved = dense::apply_on_subset(&v.matrix, &psi0, 5, &[3, 4, 5]).unwrap();
    let back = dense::apply_on_subset(&u.matrix.adjoint(), &moved, 5, &[1, 2, 3]).unwrap();
    assert!(dense::phase_residual(&back, &psi0) < 1e-8);
}

#[test]
fn tracedown_with_other_subsets() {
    let a = Analysis::new(&codes::steane_713(), limits()).unwrap();
    for t in (1..=7).combinations(2) {
        let c = mixed_tracedown_check(&a, 2, Some(&t)).unwrap();
        assert!(c.verdict, "{t:?}");
    }
}

#[test]
fn brute_force_weight_one_class_counts() {
    let spec = codes::code_412();
    let g = spec.group().unwrap();
    let z = &spec.logical_z_ops().unwrap()[0];
    let brute = all_unsigned(4)
        .into_iter()
        .filter(|c| c.weight() == 1)
        .filter(|c| g.generators().iter().all(|s| dense_commutes(c, s)) && !dense_commutes(c, z))
        .count();
    assert_eq!(brute, 0);
    let a = Analysis::new(&spec, limits()).unwrap();
    assert_eq!(a.necessary_ed(1).unwrap().count, brute);

    let ghz = codes::ghz(3).unwrap();
    let g = ghz.group().unwrap();
    let z = p("XXX");
    let brute: Vec<String> = all_unsigned(3)
        .into_iter()
        .filter(|c| c.weight() == 1)
        .filter(|c| g.generators().iter().all(|s| dense_commutes(c, s)) && !dense_commutes(c, &z))
        .map(|c| c.letter_string())
        .sorted()
        .collect();
    assert_eq!(brute, vec!["IIZ", "IZI", "ZII"]);
}

#[test]
fn qss_sign_from_dense() {
    // -YYX stabilizes (|000⟩ + |111⟩)/√2
    let spec = codes::ghz(3).unwrap();
    let psi0 = dense::codeword_vector(&spec, &[0], &limits()).unwrap();
    let moved = dense::apply_pauli(&p("-YYX"), &psi0);
    assert!((moved - &psi0).norm() < 1e-12);
}

#[test]
fn phase_family() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re| Complex64::new(re, 0.0);
    assert!(dense::phase_family_check(3, c(h), c(h), std::f64::consts::PI, &limits()).unwrap());
    assert!(dense::phase_family_check(6, c(0.6), c(0.8), 0.3, &limits()).unwrap());
    assert!(dense::phase_family_check(4, c(1.0), c(0.0), 2.0, &limits()).unwrap());
}

#[test]
fn oracle_cap_enforced() {
    let spec = codes::ghz(11).unwrap();
    assert!(matches!(dense::build_density(&spec, 0, &limits()), Err(Error::CapExceeded { .. })));
    let a = Analysis::new(&spec, limits()).unwrap();
    assert!(mixed_tracedown_check(&a, 0, None).is_err());
}
