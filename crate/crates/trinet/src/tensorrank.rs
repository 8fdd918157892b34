//! The two-by-two matrix-multiplication tensor and product-decomposition
//! verification.
//!
//! The network state built from three Bell pairs has, as its coefficient
//! tensor, the 4x4x4 matrix-multiplication tensor: eight basis-product
//! terms, yet tensor rank seven. Verifying a supplied decomposition is
//! cheap; computing tensor ranks in general is not attempted here.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{C64, PureState};

/// Dense order-3 complex tensor, row-major over `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Self {
            dims,
            data: vec![C64::new(0.0, 0.0); dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn from_data(dims: [usize; 3], data: Vec<C64>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::NonPositiveDim {
                dims: dims.to_vec(),
            });
        }
        if data.len() != dims[0] * dims[1] * dims[2] {
            return Err(Error::DimsProductMismatch {
                dims: dims.to_vec(),
                product: dims[0] * dims[1] * dims[2],
                size: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, value: C64) {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k] = value;
    }
}

/// One rank-one term `coefficient * u (x) v (x) w`.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub coefficient: C64,
    pub legs: [Vec<C64>; 3],
}

impl ProductTerm {
    /// Real rank-one term with unit coefficient.
    pub fn real(u: &[f64], v: &[f64], w: &[f64]) -> Self {
        let lift = |x: &[f64]| x.iter().map(|&r| C64::new(r, 0.0)).collect();
        Self {
            coefficient: C64::new(1.0, 0.0),
            legs: [lift(u), lift(v), lift(w)],
        }
    }
}

/// The two-by-two matrix-multiplication tensor: entry 1 at positions
/// `(2i+j, 2j+k, 2k+i)` for binary `i, j, k`, else 0.
pub fn matmul_tensor() -> Tensor3 {
    let mut t = Tensor3::zeros([4, 4, 4]);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t.set(2 * i + j, 2 * j + k, 2 * k + i, C64::new(1.0, 0.0));
            }
        }
    }
    t
}

/// True iff the sum of the product terms reconstructs `t` entrywise within
/// 1e-10.
pub fn verify_decomposition(t: &Tensor3, terms: &[ProductTerm]) -> Result<bool> {
    let dims = t.dims();
    for term in terms {
        for (leg, vec) in term.legs.iter().enumerate() {
            if vec.len() != dims[leg] {
                return Err(Error::TermDimMismatch {
                    leg,
                    expected: dims[leg],
                    found: vec.len(),
                });
            }
            if vec.iter().all(|z| z.norm() < 1e-15) {
                return Err(Error::ZeroTermLeg { leg });
            }
        }
    }
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let mut acc = C64::new(0.0, 0.0);
                for term in terms {
                    acc += term.coefficient * term.legs[0][i] * term.legs[1][j] * term.legs[2][k];
                }
                if (acc - t.get(i, j, k)).norm() > 1e-10 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The eight basis-product terms of [`matmul_tensor`].
pub fn canonical_decomposition() -> Vec<ProductTerm> {
    let mut terms = Vec::with_capacity(8);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let basis = |n: usize| {
                    let mut v = [0.0; 4];
                    v[n] = 1.0;
                    v
                };
                terms.push(ProductTerm::real(
                    &basis(2 * i + j),
                    &basis(2 * j + k),
                    &basis(2 * k + i),
                ));
            }
        }
    }
    terms
}

/// The seven-term decomposition of [`matmul_tensor`] underlying fast 2x2
/// matrix multiplication.
///
/// Term `r` encodes, over leg-1 basis `(i,j)`, leg-2 basis `(j,k)` and
/// leg-3 basis `(k,i)`, the classical scheme
/// `M1 = (A11+A22)(B11+B22), ..., C11 = M1+M4-M5+M7, ...`; the third leg
/// holds the transposed placement coefficients.
pub fn strassen_decomposition() -> Vec<ProductTerm> {
    vec![
        // M1 = (A11 + A22)(B11 + B22), enters C11 + C22
        ProductTerm::real(&[1., 0., 0., 1.], &[1., 0., 0., 1.], &[1., 0., 0., 1.]),
        // M2 = (A21 + A22) B11, enters C21, -C22
        ProductTerm::real(&[0., 0., 1., 1.], &[1., 0., 0., 0.], &[0., 1., 0., -1.]),
        // M3 = A11 (B12 - B22), enters C12, C22
        ProductTerm::real(&[1., 0., 0., 0.], &[0., 1., 0., -1.], &[0., 0., 1., 1.]),
        // M4 = A22 (B21 - B11), enters C11, C21
        ProductTerm::real(&[0., 0., 0., 1.], &[-1., 0., 1., 0.], &[1., 1., 0., 0.]),
        // M5 = (A11 + A12) B22, enters -C11, C12
        ProductTerm::real(&[1., 1., 0., 0.], &[0., 0., 0., 1.], &[-1., 0., 1., 0.]),
        // M6 = (A21 - A11)(B11 + B12), enters C22
        ProductTerm::real(&[-1., 0., 1., 0.], &[1., 1., 0., 0.], &[0., 0., 0., 1.]),
        // M7 = (A12 - A22)(B21 + B22), enters C11
        ProductTerm::real(&[0., 1., 0., -1.], &[0., 0., 1., 1.], &[1., 0., 0., 0.]),
    ]
}

/// Normalizes the tensor entries as the amplitudes of a tripartite pure
/// state.
pub fn as_network_state(t: &Tensor3) -> Result<PureState> {
    let dims = t.dims();
    let v = DVector::from_vec(t.data().to_vec());
    PureState::normalized(v, vec![dims[0], dims[1], dims[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{obs1_check, rank_profile_of};
    use crate::states::{SOURCE_TO_NODE_PERM, bell_pair};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matmul_tensor_entries() {
        let t = matmul_tensor();
        assert_eq!(t.get(0, 0, 0), C64::new(1.0, 0.0));
        let ones = t.data().iter().filter(|z| z.norm() > 0.5).count();
        assert_eq!(ones, 8);
        let total: f64 = t.data().iter().map(|z| z.norm_sqr()).sum();
        assert_eq!(total, 8.0);
    }

    #[test]
    fn matmul_tensor_is_the_bell_network_state() {
        // Three Bell sources in node order, no unitaries.
        let sources = bell_pair()
            .tensor_product(&bell_pair())
            .unwrap()
            .tensor_product(&bell_pair())
            .unwrap();
        let node = sources
            .permute_subsystems(&SOURCE_TO_NODE_PERM)
            .unwrap()
            .with_dims(vec![4, 4, 4])
            .unwrap();
        let tensor_state = as_network_state(&matmul_tensor()).unwrap();
        let overlap = node.overlap(&tensor_state).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_and_strassen_decompositions_verify() {
        let t = matmul_tensor();
        assert!(verify_decomposition(&t, &canonical_decomposition()).unwrap());
        let strassen = strassen_decomposition();
        assert_eq!(strassen.len(), 7);
        assert!(verify_decomposition(&t, &strassen).unwrap());
    }

    #[test]
    fn dropping_any_strassen_term_fails() {
        let t = matmul_tensor();
        let strassen = strassen_decomposition();
        for drop in 0..7 {
            let subset: Vec<ProductTerm> = strassen
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, term)| term.clone())
                .collect();
            assert!(
                !verify_decomposition(&t, &subset).unwrap(),
                "six-term subset without term {drop} must not reconstruct"
            );
        }
    }

    #[test]
    fn verification_is_linear_in_the_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..20 {
            let count = rng.gen_range(1..5);
            let mut terms = Vec::new();
            for _ in 0..count {
                let leg = |rng: &mut ChaCha8Rng, n: usize| {
                    (0..n)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect::<Vec<_>>()
                };
                terms.push(ProductTerm {
                    coefficient: C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    legs: [leg(&mut rng, 3), leg(&mut rng, 2), leg(&mut rng, 4)],
                });
            }
            let mut sum = Tensor3::zeros([3, 2, 4]);
            for i in 0..3 {
                for j in 0..2 {
                    for k in 0..4 {
                        let mut acc = C64::new(0.0, 0.0);
                        for term in &terms {
                            acc += term.coefficient
                                * term.legs[0][i]
                                * term.legs[1][j]
                                * term.legs[2][k];
                        }
                        sum.set(i, j, k, acc);
                    }
                }
            }
            assert!(verify_decomposition(&sum, &terms).unwrap());
        }
    }

    #[test]
    fn verification_rejects_bad_terms() {
        let t = matmul_tensor();
        let bad_dims = vec![ProductTerm::real(
            &[1., 0.],
            &[1., 0., 0., 0.],
            &[1., 0., 0., 0.],
        )];
        assert!(matches!(
            verify_decomposition(&t, &bad_dims),
            Err(Error::TermDimMismatch { .. })
        ));
        let zero_leg = vec![ProductTerm::real(
            &[0., 0., 0., 0.],
            &[1., 0., 0., 0.],
            &[1., 0., 0., 0.],
        )];
        assert!(matches!(
            verify_decomposition(&t, &zero_leg),
            Err(Error::ZeroTermLeg { .. })
        ));
    }

    #[test]
    fn network_state_passes_the_criteria_battery() {
        let psi = as_network_state(&matmul_tensor()).unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        let rho = psi.to_density();
        let verdict = obs1_check(&rho).unwrap();
        assert!(!verdict.is_violated());
        let profile = rank_profile_of(&rho).unwrap();
        assert_eq!(
            (
                profile.global_rank,
                profile.rank_bc,
                profile.rank_ac,
                profile.rank_ab,
                profile.rank_a,
                profile.rank_b,
                profile.rank_c
            ),
            (1, 4, 4, 4, 4, 4, 4)
        );
    }

    #[test]
    fn zero_tensor_is_rejected() {
        let t = Tensor3::zeros([2, 2, 2]);
        assert!(matches!(as_network_state(&t), Err(Error::ZeroVector)));
    }
}
