//! Singlet-based bit commitment and why the sender can cheat.
//!
//! The sender keeps qubit 1 of `(|01⟩ - |10⟩)/√2` and seals qubit 2. Any
//! local unitary on qubit 1 leaves the receiver's marginal at `I/2`, and the
//! singlet's anticorrelation in every common basis lets the sender open either
//! bit value at reveal time.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stream_rng, Rate};
use crate::dense::{self, DenseMatrix, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BcDemoStats {
    pub samples: u64,
    pub seed: u64,
    /// Largest trace distance between the receiver's marginal before and after
    /// the sender's local unitary.
    pub max_reduced_deviation: f64,
    /// Largest trace distance between the receiver's marginal and `I/2`.
    pub max_deviation_from_mixed: f64,
    pub open_success_bit0: Rate,
    pub open_success_bit1: Rate,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn singlet() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_vec(vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)])
}

/// Haar-random `U(2)` element from a uniformly random unit quaternion and phase.
pub fn haar_unitary(rng: &mut impl Rng) -> DenseMatrix {
    let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = c(g[0], g[1]) / norm;
    let b = c(g[2], g[3]) / norm;
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    DenseMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]) * phase
}

fn hadamard() -> DenseMatrix {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DenseMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// Trace distance between the receiver's marginal of the singlet before and
/// after `u` acts on the sender's qubit.
pub fn receiver_deviation(u: &DenseMatrix) -> Result<f64> {
    let psi = singlet();
    let before = dense::reduced_from_vector(&psi, 2, &[1])?;
    let after = dense::reduced_from_vector(&dense::apply_on_subset(u, &psi, 2, &[1])?, 2, &[1])?;
    Ok(dense::trace_distance(&before, &after))
}

fn receiver_vs_mixed(u: &DenseMatrix) -> Result<f64> {
    let after = dense::reduced_from_vector(&dense::apply_on_subset(u, &singlet(), 2, &[1])?, 2, &[1])?;
    Ok(dense::trace_distance(&after, &(DenseMatrix::identity(2, 2) * c(0.5, 0.0))))
}

/// The sender undoes `u`, rotates into the basis of `bit` (Z for 0, X for 1)
/// and announces the opposite of her outcome; the receiver measures the
/// sealed qubit in the same basis.
fn open(u: &DenseMatrix, bit: u8, rng: &mut impl Rng) -> Result<bool> {
    let basis = if bit == 0 { DenseMatrix::identity(2, 2) } else { hadamard() };
    let sealed = dense::apply_on_subset(u, &singlet(), 2, &[1])?;
    let sender_op = &basis * u.adjoint();
    let v = dense::apply_on_subset(&sender_op, &sealed, 2, &[1])?;
    let v = dense::apply_on_subset(&basis, &v, 2, &[2])?;
    let probs: Vec<f64> = v.iter().map(|a| a.norm_sqr()).collect();
    let r: f64 = rng.random();
    let mut acc = 0.0;
    let mut idx = 3;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            idx = k;
            break;
        }
    }
    let sender = idx >> 1 & 1;
    let receiver = idx & 1;
    Ok(1 - sender == receiver)
}

pub fn bc_demo(samples: u64, seed: u64) -> Result<BcDemoStats> {
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    #[derive(Default)]
    struct Tally {
        dev: f64,
        mixed: f64,
        ok: [u64; 2],
    }
    let tally = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<Tally> {
            let mut rng = stream_rng(seed, s);
            let u = haar_unitary(&mut rng);
            let mut ok = [0; 2];
            for bit in 0..2u8 {
                ok[bit as usize] = u64::from(open(&u, bit, &mut rng)?);
            }
            Ok(Tally { dev: receiver_deviation(&u)?, mixed: receiver_vs_mixed(&u)?, ok })
        })
        .try_reduce(Tally::default, |a, b| {
            Ok(Tally { dev: a.dev.max(b.dev), mixed: a.mixed.max(b.mixed), ok: [a.ok[0] + b.ok[0], a.ok[1] + b.ok[1]] })
        })?;
    Ok(BcDemoStats {
        samples,
        seed,
        max_reduced_deviation: tally.dev,
        max_deviation_from_mixed: tally.mixed,
        open_success_bit0: Rate::new(tally.ok[0], samples),
        open_success_bit1: Rate::new(tally.ok[1], samples),
    })
}
