//! Seeded random sampling of states and unitaries.
//!
//! Haar-random pure states come from normalized complex-Gaussian vectors;
//! Haar-random unitaries from the QR decomposition of a complex-Gaussian
//! matrix with the R diagonal phases absorbed into Q.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::Result;
use crate::linalg::{C64, DensityState, PureState, UnitaryOp};
use crate::states::{SourceState, TriangleDecomposition};

/// One standard complex Gaussian sample (real and imaginary parts N(0,1)).
fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    // Box-Muller on uniform draws keeps us independent of distribution crates.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin())
}

fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

/// Haar-random pure state on the given subsystem dimensions.
pub fn haar_pure_state<R: Rng>(rng: &mut R, dims: Vec<usize>) -> Result<PureState> {
    let total: usize = dims.iter().product();
    let v = DVector::from_fn(total, |_, _| gaussian_c64(rng));
    PureState::normalized(v, dims)
}

/// Haar-random unitary of the given dimension.
pub fn haar_unitary<R: Rng>(rng: &mut R, dim: usize) -> UnitaryOp {
    let g = ginibre(rng, dim, dim);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    UnitaryOp::new(u).expect("QR of a Gaussian matrix yields a unitary")
}

/// Random density matrix of the given rank from the Ginibre ensemble.
pub fn random_density<R: Rng>(rng: &mut R, dims: Vec<usize>, rank: usize) -> Result<DensityState> {
    let total: usize = dims.iter().product();
    let rank = rank.clamp(1, total);
    let g = ginibre(rng, total, rank);
    let mut m = &g * g.adjoint();
    let trace = m.trace();
    m /= trace;
    // enforce exact Hermiticity against roundoff
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityState::new(herm, dims)
}

/// Triangle decomposition with Haar-random pure sources and node unitaries.
pub fn random_pure_decomposition<R: Rng>(rng: &mut R, d: usize) -> Result<TriangleDecomposition> {
    TriangleDecomposition::new(
        SourceState::Pure(haar_pure_state(rng, vec![d, d])?),
        SourceState::Pure(haar_pure_state(rng, vec![d, d])?),
        SourceState::Pure(haar_pure_state(rng, vec![d, d])?),
        haar_unitary(rng, d * d),
        haar_unitary(rng, d * d),
        haar_unitary(rng, d * d),
    )
}

/// Triangle decomposition with random mixed sources of uniformly drawn rank
/// and Haar-random node unitaries.
pub fn random_mixed_decomposition<R: Rng>(rng: &mut R, d: usize) -> Result<TriangleDecomposition> {
    let source = |rng: &mut R| -> Result<SourceState> {
        let rank = rng.gen_range(1..=d * d);
        Ok(SourceState::Mixed(random_density(rng, vec![d, d], rank)?))
    };
    TriangleDecomposition::new(
        source(rng)?,
        source(rng)?,
        source(rng)?,
        haar_unitary(rng, d * d),
        haar_unitary(rng, d * d),
        haar_unitary(rng, d * d),
    )
}
