//! Dense state-vector and density-matrix oracle.
//!
//! Everything here works on explicit `2^n`-dimensional complex arrays and is
//! only meant for small `n` (see [`Limits::oracle_max_n`]). It serves as the
//! independent numeric check of the symbolic coset criterion.
//!
//! Basis ordering: qubit 1 is the most significant bit of a basis index.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::stabilizer::{Limits, StabilizerGroup};

pub type DenseMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

/// Frobenius threshold for calling two oracle matrices equal.
pub const EQUALITY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn i_pow(e: u8) -> Complex64 {
    match e & 3 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(x mask, z mask, i^phase)` with qubit 1 in the top bit.
fn masks(p: &PauliOperator) -> (usize, usize, Complex64) {
    let n = p.n();
    let to_mask = |bits: &crate::gf2::BitVec| bits.ones().fold(0usize, |m, q| m | 1 << (n - 1 - q));
    (to_mask(p.x_bits()), to_mask(p.z_bits()), i_pow(p.phase_exp()))
}

#[inline]
fn parity_sign(v: usize) -> f64 {
    if v.count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// The `2^n × 2^n` matrix of `p`.
pub fn pauli_matrix(p: &PauliOperator) -> DenseMatrix {
    let dim = 1usize << p.n();
    let mut m = DenseMatrix::zeros(dim, dim);
    add_pauli(&mut m, p, ONE);
    m
}

/// `m += scale · p` without materializing `p`.
fn add_pauli(m: &mut DenseMatrix, p: &PauliOperator, scale: Complex64) {
    let (xm, zm, ph) = masks(p);
    let c = ph * scale;
    for j in 0..m.ncols() {
        // X^x Z^z |j> = (-1)^{z·j} |j ⊕ x>
        m[(j ^ xm, j)] += c * parity_sign(zm & j);
    }
}

pub fn apply_pauli(p: &PauliOperator, v: &StateVector) -> StateVector {
    let (xm, zm, ph) = masks(p);
    let mut out = StateVector::zeros(v.len());
    for j in 0..v.len() {
        out[j ^ xm] += ph * parity_sign(zm & j) * v[j];
    }
    out
}

/// Kronecker product `a ⊗ b` (`a` acts on the more significant qubits).
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

/// Signed stabilizer group of a single codeword: stabilizers plus `±Z̄_j`.
fn codeword_group(spec: &CodeSpec, bits: &[u8]) -> Result<StabilizerGroup> {
    let mut gens = spec.stabilizer_ops()?;
    for (z, &b) in spec.logical_z_ops()?.iter().zip(bits) {
        gens.push(if b == 1 { z.negated() } else { z.clone() });
    }
    StabilizerGroup::new(gens)
}

fn projector_from_group(group: &StabilizerGroup) -> Result<DenseMatrix> {
    let n = group.n();
    let dim = 1usize << n;
    let limits = Limits { max_rank: n, ..Limits::default() };
    let mut rho = DenseMatrix::zeros(dim, dim);
    let scale = Complex64::new(1.0 / dim as f64, 0.0);
    for s in group.elements(&limits)? {
        add_pauli(&mut rho, &s, scale);
    }
    Ok(rho)
}

fn check_pure(rho: &DenseMatrix) -> Result<()> {
    let tr = rho.trace();
    let purity = rho.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if (tr - ONE).norm() > 1e-9 || (purity - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!("not a pure state: trace {tr}, purity {purity}")));
    }
    Ok(())
}

fn require_k(spec: &CodeSpec, k: usize) -> Result<()> {
    spec.check_schema()?;
    if spec.k != k {
        return Err(Error::InvalidParams(format!("{} has k = {}, expected {k}", spec.name, spec.k)));
    }
    Ok(())
}

/// `ρ_i = 2^{-n} Σ s` over the `2^n` elements of `⟨g_1..g_{n-1}, (-1)^i Z̄⟩`.
pub fn build_density(spec: &CodeSpec, logical_bit: u8, limits: &Limits) -> Result<DenseMatrix> {
    require_k(spec, 1)?;
    limits.check_oracle_n(spec.n)?;
    let rho = projector_from_group(&codeword_group(spec, &[logical_bit & 1])?)?;
    check_pure(&rho)?;
    Ok(rho)
}

/// Equal mixture of two `k = 2` codeword projectors: `which = 0` mixes
/// `|00⟩, |11⟩`; `which = 1` mixes `|10⟩, |01⟩`.
pub fn build_mixed_density(spec: &CodeSpec, which: u8, limits: &Limits) -> Result<DenseMatrix> {
    require_k(spec, 2)?;
    limits.check_oracle_n(spec.n)?;
    let pairs: [[u8; 2]; 2] = if which & 1 == 0 { [[0, 0], [1, 1]] } else { [[1, 0], [0, 1]] };
    let mut rho = DenseMatrix::zeros(1 << spec.n, 1 << spec.n);
    for bits in pairs {
        let p = projector_from_group(&codeword_group(spec, &bits)?)?;
        check_pure(&p)?;
        rho += p * Complex64::new(0.5, 0.0);
    }
    Ok(rho)
}

/// Codeword vector built by projecting computational basis states with
/// `Π (I + g)/2` and `(I ± Z̄_j)/2`, applied operator by operator.
pub fn codeword_vector(spec: &CodeSpec, bits: &[u8], limits: &Limits) -> Result<StateVector> {
    spec.check_schema()?;
    limits.check_oracle_n(spec.n)?;
    if bits.len() != spec.k {
        return Err(Error::InvalidParams(format!("need {} logical bits", spec.k)));
    }
    let mut projectors = spec.stabilizer_ops()?;
    for (z, &b) in spec.logical_z_ops()?.iter().zip(bits) {
        projectors.push(if b & 1 == 1 { z.negated() } else { z.clone() });
    }
    let dim = 1usize << spec.n;
    for start in 0..dim {
        let mut v = StateVector::from_element(dim, ZERO);
        v[start] = ONE;
        for p in &projectors {
            v = (&v + apply_pauli(p, &v)) * Complex64::new(0.5, 0.0);
        }
        let norm = v.norm();
        if norm > 1e-6 {
            return Ok(v / Complex64::new(norm, 0.0));
        }
    }
    Err(Error::Numerical("codeword projector annihilates every basis state".into()))
}

/// Sorted, 0-based, validated copy of a 1-based qubit set.
pub(crate) fn zero_based_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    let sorted: Vec<usize> = subset.iter().copied().sorted().dedup().collect();
    if sorted.len() != subset.len() || sorted.iter().any(|&q| q == 0 || q > n) {
        return Err(Error::InvalidSubset { subset: subset.to_vec(), n });
    }
    Ok(sorted.into_iter().map(|q| q - 1).collect())
}

/// Index tables: position of every sub-basis index inside the full register,
/// preserving the relative (ascending) order of `qubits`.
fn scatter_table(qubits: &[usize], n: usize) -> Vec<usize> {
    let m = qubits.len();
    (0..1usize << m)
        .map(|local| {
            qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
                let bit = (local >> (m - 1 - pos)) & 1;
                acc | bit << (n - 1 - q)
            })
        })
        .collect()
}

fn complement(qubits: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !qubits.contains(q)).collect()
}

/// Partial trace over the 1-based `traced_out` qubits of an `n`-qubit matrix;
/// the result is ordered by the kept qubits in ascending order.
pub fn partial_trace(m: &DenseMatrix, n: usize, traced_out: &[usize]) -> Result<DenseMatrix> {
    if m.nrows() != 1 << n || m.ncols() != 1 << n {
        return Err(Error::DimensionMismatch { left: 1 << n, right: m.nrows() });
    }
    let traced = zero_based_subset(traced_out, n)?;
    let kept = complement(&traced, n);
    let kt = scatter_table(&kept, n);
    let tt = scatter_table(&traced, n);
    let mut out = DenseMatrix::zeros(kt.len(), kt.len());
    for (r, &kr) in kt.iter().enumerate() {
        for (c, &kc) in kt.iter().enumerate() {
            out[(r, c)] = tt.iter().map(|&t| m[(kr | t, kc | t)]).sum();
        }
    }
    Ok(out)
}

/// Reduced density matrix of a pure state after tracing out `traced_out`.
pub fn reduced_from_vector(psi: &StateVector, n: usize, traced_out: &[usize]) -> Result<DenseMatrix> {
    let traced = zero_based_subset(traced_out, n)?;
    let kept = complement(&traced, n);
    let m = reshape(psi, n, &kept, &traced);
    Ok(&m * m.adjoint())
}

/// `ψ` as a matrix with rows indexed by `rows` qubits and columns by `cols`.
fn reshape(psi: &StateVector, n: usize, rows: &[usize], cols: &[usize]) -> DenseMatrix {
    let rt = scatter_table(rows, n);
    let ct = scatter_table(cols, n);
    DenseMatrix::from_fn(rt.len(), ct.len(), |r, c| psi[rt[r] | ct[c]])
}

pub fn frobenius_distance(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    (a - b).norm()
}

/// `½ ‖a - b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let diff = a - b;
    0.5 * diff.symmetric_eigen().eigenvalues.iter().map(|l| l.abs()).sum::<f64>()
}

/// Applies a `2^|subset|` operator to the 1-based `subset` (ascending order,
/// first qubit most significant) of an `n`-qubit state.
pub fn apply_on_subset(u: &DenseMatrix, psi: &StateVector, n: usize, subset: &[usize]) -> Result<StateVector> {
    let sub = zero_based_subset(subset, n)?;
    if u.nrows() != 1 << sub.len() {
        return Err(Error::DimensionMismatch { left: 1 << sub.len(), right: u.nrows() });
    }
    let rest = complement(&sub, n);
    let m = reshape(psi, n, &sub, &rest);
    let out = u * m;
    let st = scatter_table(&sub, n);
    let rt = scatter_table(&rest, n);
    let mut v = StateVector::zeros(psi.len());
    for (r, &sr) in st.iter().enumerate() {
        for (c, &rc) in rt.iter().enumerate() {
            v[sr | rc] = out[(r, c)];
        }
    }
    Ok(v)
}

/// `min_φ ‖a - e^{iφ} b‖` for unit-norm-ish vectors.
pub fn phase_residual(a: &StateVector, b: &StateVector) -> f64 {
    let overlap = b.dotc(a).norm();
    (a.norm_squared() + b.norm_squared() - 2.0 * overlap).max(0.0).sqrt()
}

/// Gram–Schmidt completion of orthonormal `vectors` to a basis of `C^dim`,
/// drawing candidates from the computational basis in order.
fn complete_basis(mut vectors: Vec<StateVector>, dim: usize) -> Vec<StateVector> {
    for e in 0..dim {
        if vectors.len() == dim {
            break;
        }
        let mut v = StateVector::zeros(dim);
        v[e] = ONE;
        for b in &vectors {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            vectors.push(v / Complex64::new(norm, 0.0));
        }
    }
    vectors
}

#[derive(Debug, Clone)]
pub struct RelatingUnitary {
    /// 1-based qubits the unitary acts on, ascending.
    pub subset: Vec<usize>,
    pub matrix: DenseMatrix,
    /// `min_φ ‖(U ⊗ I)|ψ0⟩ - e^{iφ}|ψ1⟩‖`.
    pub residual: f64,
    /// `‖U†U - I‖_F`.
    pub unitarity_error: f64,
}

/// Schmidt-basis construction of a unitary on `subset` that carries codeword 0
/// to codeword 1. For every nonzero Schmidt coefficient `σ` with vectors
/// `|ℓ⟩ ⊗ |ℓ̃⟩` of `ψ0`, the image `|ℓ̂⟩` is read off from `ψ1` against the same
/// `|ℓ̃⟩`; remaining directions are completed deterministically.
pub fn relating_unitary(spec: &CodeSpec, subset: &[usize], limits: &Limits) -> Result<RelatingUnitary> {
    require_k(spec, 1)?;
    let psi0 = codeword_vector(spec, &[0], limits)?;
    let psi1 = codeword_vector(spec, &[1], limits)?;
    relating_unitary_for(&psi0, &psi1, spec.n, subset)
}

pub fn relating_unitary_for(
    psi0: &StateVector,
    psi1: &StateVector,
    n: usize,
    subset: &[usize],
) -> Result<RelatingUnitary> {
    let sub = zero_based_subset(subset, n)?;
    if sub.is_empty() || sub.len() == n {
        return Err(Error::InvalidSubset { subset: subset.to_vec(), n });
    }
    let rest = complement(&sub, n);
    let m0 = reshape(psi0, n, &sub, &rest);
    let m1 = reshape(psi1, n, &sub, &rest);
    // Equal reductions on the complement ⇔ M0†M0 = M1†M1.
    if frobenius_distance(&(m0.adjoint() * &m0), &(m1.adjoint() * &m1)) > EQUALITY_TOL {
        return Err(Error::NotUndetermined(subset.to_vec()));
    }
    let dim = m0.nrows();
    let svd = m0.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested");
    let v_t = svd.v_t.as_ref().expect("requested");
    let mut domain = Vec::new();
    let mut range = Vec::new();
    for (l, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= 1e-10 {
            continue;
        }
        let w = v_t.row(l).adjoint();
        domain.push(u.column(l).into_owned());
        range.push(&m1 * w / Complex64::new(sigma, 0.0));
    }
    let domain = complete_basis(domain, dim);
    let range = complete_basis(range, dim);
    let mut matrix = DenseMatrix::zeros(dim, dim);
    for (a, b) in domain.iter().zip(&range) {
        matrix += b * a.adjoint();
    }
    let unitarity_error = frobenius_distance(&(matrix.adjoint() * &matrix), &DenseMatrix::identity(dim, dim));
    let moved = apply_on_subset(&matrix, psi0, n, subset)?;
    let residual = phase_residual(&moved, psi1);
    if residual > 1e-8 || unitarity_error > 1e-8 {
        return Err(Error::Numerical(format!(
            "relating unitary check failed: residual {residual:e}, unitarity {unitarity_error:e}"
        )));
    }
    Ok(RelatingUnitary { subset: sub.iter().map(|q| q + 1).collect(), matrix, residual, unitarity_error })
}

/// Whether `α|0^n⟩ + β|1^n⟩` and `α|0^n⟩ + βe^{iθ}|1^n⟩` have equal reductions
/// after tracing out any single qubit.
pub fn phase_family_check(n: usize, alpha: Complex64, beta: Complex64, theta: f64, limits: &Limits) -> Result<bool> {
    limits.check_oracle_n(n)?;
    if n < 2 {
        return Err(Error::InvalidParams("need n >= 2".into()));
    }
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParams(format!("|α|² + |β|² = {norm}")));
    }
    let dim = 1usize << n;
    let mut a = StateVector::zeros(dim);
    let mut b = StateVector::zeros(dim);
    a[0] = alpha;
    b[0] = alpha;
    a[dim - 1] = beta;
    b[dim - 1] = beta * Complex64::from_polar(1.0, theta);
    for q in 1..=n {
        let ra = reduced_from_vector(&a, n, &[q])?;
        let rb = reduced_from_vector(&b, n, &[q])?;
        if frobenius_distance(&ra, &rb) > EQUALITY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
