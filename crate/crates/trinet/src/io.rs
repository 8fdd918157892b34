//! JSON file formats for states, tensors, product-term lists and
//! triangle decompositions.
//!
//! A state file is `{"dims": [d1, ..], "kind": "pure"|"mixed", "data":
//! [[re, im], ..]}` where pure data is the amplitude vector and mixed data
//! the row-major matrix. Loading re-runs the type validators, so malformed
//! files fail with a diagnostic naming the violated invariant.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, DensityState, PureState, UnitaryOp};
use crate::states::{SourceState, TriangleDecomposition};
use crate::tensorrank::{ProductTerm, Tensor3};

fn pack(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpack(pair: &[f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    kind: String,
    data: Vec<[f64; 2]>,
}

/// A state loaded from disk, pure or mixed.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityState),
}

impl LoadedState {
    pub fn dims(&self) -> &[usize] {
        match self {
            LoadedState::Pure(p) => p.dims(),
            LoadedState::Mixed(m) => m.dims(),
        }
    }

    pub fn to_density(&self) -> DensityState {
        match self {
            LoadedState::Pure(p) => p.to_density(),
            LoadedState::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            LoadedState::Pure(p) => Some(p),
            LoadedState::Mixed(_) => None,
        }
    }
}

pub fn pure_to_json(s: &PureState) -> serde_json::Value {
    serde_json::to_value(StateFile {
        dims: s.dims().to_vec(),
        kind: "pure".into(),
        data: s.amplitudes().iter().map(pack).collect(),
    })
    .expect("state serialization cannot fail")
}

pub fn density_to_json(s: &DensityState) -> serde_json::Value {
    // row-major matrix entries
    let n = s.total_dim();
    let mut data = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            data.push(pack(&s.matrix()[(r, c)]));
        }
    }
    serde_json::to_value(StateFile {
        dims: s.dims().to_vec(),
        kind: "mixed".into(),
        data,
    })
    .expect("state serialization cannot fail")
}

pub fn state_from_json(value: &serde_json::Value) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_value(value.clone())?;
    let total: usize = file.dims.iter().product();
    match file.kind.as_str() {
        "pure" => {
            if file.data.len() != total {
                return Err(Error::StateFile {
                    field: "data".into(),
                    reason: format!(
                        "pure state on dims {:?} needs {total} amplitudes, found {}",
                        file.dims,
                        file.data.len()
                    ),
                });
            }
            let amp = DVector::from_iterator(total, file.data.iter().map(unpack));
            Ok(LoadedState::Pure(PureState::new(amp, file.dims)?))
        }
        "mixed" => {
            if file.data.len() != total * total {
                return Err(Error::StateFile {
                    field: "data".into(),
                    reason: format!(
                        "mixed state on dims {:?} needs {} row-major entries, found {}",
                        file.dims,
                        total * total,
                        file.data.len()
                    ),
                });
            }
            let m = DMatrix::from_fn(total, total, |r, c| unpack(&file.data[r * total + c]));
            Ok(LoadedState::Mixed(DensityState::new(m, file.dims)?))
        }
        other => Err(Error::StateFile {
            field: "kind".into(),
            reason: format!("expected \"pure\" or \"mixed\", found \"{other}\""),
        }),
    }
}

pub fn save_pure(s: &PureState, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&pure_to_json(s))?)?;
    Ok(())
}

pub fn save_density(s: &DensityState, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&density_to_json(s))?)?;
    Ok(())
}

pub fn load_state(path: impl AsRef<Path>) -> Result<LoadedState> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    state_from_json(&value)
}

// ---------------------------------------------------------------------------
// Tensors and product terms
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TensorFile {
    dims: [usize; 3],
    data: Vec<[f64; 2]>,
}

pub fn save_tensor(t: &Tensor3, path: impl AsRef<Path>) -> Result<()> {
    let file = TensorFile {
        dims: t.dims(),
        data: t.data().iter().map(pack).collect(),
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    let file: TensorFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    Tensor3::from_data(file.dims, file.data.iter().map(unpack).collect())
}

#[derive(Serialize, Deserialize)]
struct TermEntry {
    coefficient: [f64; 2],
    legs: [Vec<[f64; 2]>; 3],
}

#[derive(Serialize, Deserialize)]
struct TermsFile {
    terms: Vec<TermEntry>,
}

pub fn save_terms(terms: &[ProductTerm], path: impl AsRef<Path>) -> Result<()> {
    let file = TermsFile {
        terms: terms
            .iter()
            .map(|t| TermEntry {
                coefficient: pack(&t.coefficient),
                legs: [
                    t.legs[0].iter().map(pack).collect(),
                    t.legs[1].iter().map(pack).collect(),
                    t.legs[2].iter().map(pack).collect(),
                ],
            })
            .collect(),
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn load_terms(path: impl AsRef<Path>) -> Result<Vec<ProductTerm>> {
    let file: TermsFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(file
        .terms
        .iter()
        .map(|t| ProductTerm {
            coefficient: unpack(&t.coefficient),
            legs: [
                t.legs[0].iter().map(unpack).collect(),
                t.legs[1].iter().map(unpack).collect(),
                t.legs[2].iter().map(unpack).collect(),
            ],
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Triangle decompositions
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DecompositionFile {
    d: usize,
    mu_squared: Option<f64>,
    /// Source amplitude vectors alpha, beta, gamma, each of length d^2.
    sources: [Vec<[f64; 2]>; 3],
    /// Row-major node unitaries A, B, C, each d^2 x d^2.
    unitaries: [Vec<[f64; 2]>; 3],
}

/// Writes a pure-source decomposition, optionally with the overlap it
/// achieves.
pub fn save_decomposition(
    t: &TriangleDecomposition,
    mu_squared: Option<f64>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let d = t.local_dim();
    let source_vec = |s: &SourceState| -> Result<Vec<[f64; 2]>> {
        match s.as_pure() {
            Some(p) => Ok(p.amplitudes().iter().map(pack).collect()),
            None => Err(Error::SourcesNotPure),
        }
    };
    let unitary_vec = |u: &UnitaryOp| {
        let n = u.dim();
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(pack(&u.matrix()[(r, c)]));
            }
        }
        data
    };
    let file = DecompositionFile {
        d,
        mu_squared,
        sources: [
            source_vec(&t.source_alpha)?,
            source_vec(&t.source_beta)?,
            source_vec(&t.source_gamma)?,
        ],
        unitaries: [
            unitary_vec(&t.node_a),
            unitary_vec(&t.node_b),
            unitary_vec(&t.node_c),
        ],
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn load_decomposition(
    path: impl AsRef<Path>,
) -> Result<(TriangleDecomposition, Option<f64>)> {
    let file: DecompositionFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let d = file.d;
    let d2 = d * d;
    let mut sources = Vec::new();
    for data in &file.sources {
        let amp = DVector::from_iterator(data.len(), data.iter().map(unpack));
        sources.push(SourceState::Pure(PureState::new(amp, vec![d, d])?));
    }
    let mut unitaries = Vec::new();
    for data in &file.unitaries {
        if data.len() != d2 * d2 {
            return Err(Error::StateFile {
                field: "unitaries".into(),
                reason: format!("expected {} row-major entries, found {}", d2 * d2, data.len()),
            });
        }
        let m = DMatrix::from_fn(d2, d2, |r, c| unpack(&data[r * d2 + c]));
        unitaries.push(UnitaryOp::new(m)?);
    }
    let gamma = sources.pop().expect("three sources");
    let beta = sources.pop().expect("three sources");
    let alpha = sources.pop().expect("three sources");
    let c = unitaries.pop().expect("three unitaries");
    let b = unitaries.pop().expect("three unitaries");
    let a = unitaries.pop().expect("three unitaries");
    Ok((
        TriangleDecomposition::new(alpha, beta, gamma, a, b, c)?,
        file.mu_squared,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_pure_state, random_density};
    use crate::states::{ghz, ghz4_bell_decomposition, itn_pure_state, smolin};
    use crate::tensorrank::{matmul_tensor, strassen_decomposition, verify_decomposition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_state_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let psi = haar_pure_state(&mut rng, vec![2, 3, 2]).unwrap();
        let json = pure_to_json(&psi);
        let back = state_from_json(&json).unwrap();
        let recovered = back.as_pure().unwrap();
        assert_eq!(recovered.dims(), psi.dims());
        assert_eq!(recovered.amplitudes(), psi.amplitudes());
    }

    #[test]
    fn mixed_state_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        let rho = random_density(&mut rng, vec![2, 2], 3).unwrap();
        let json = density_to_json(&rho);
        let back = state_from_json(&json).unwrap();
        assert!(back.as_pure().is_none());
        assert_eq!(back.to_density().matrix(), rho.matrix());
    }

    #[test]
    fn parser_names_the_violated_invariant() {
        // unnormalized pure vector
        let bad = serde_json::json!({
            "dims": [2],
            "kind": "pure",
            "data": [[1.0, 0.0], [1.0, 0.0]],
        });
        let err = state_from_json(&bad).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }), "{err}");

        // non-Hermitian mixed matrix
        let bad = serde_json::json!({
            "dims": [2],
            "kind": "mixed",
            "data": [[0.5, 0.0], [0.4, 0.0], [0.0, 0.0], [0.5, 0.0]],
        });
        let err = state_from_json(&bad).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }), "{err}");

        // unknown kind
        let bad = serde_json::json!({"dims": [2], "kind": "blend", "data": [[1.0, 0.0], [0.0, 0.0]]});
        let err = state_from_json(&bad).unwrap_err();
        assert!(matches!(err, Error::StateFile { .. }), "{err}");

        // wrong data length
        let bad = serde_json::json!({"dims": [2], "kind": "pure", "data": [[1.0, 0.0]]});
        let err = state_from_json(&bad).unwrap_err();
        assert!(matches!(err, Error::StateFile { .. }), "{err}");
    }

    #[test]
    fn file_round_trips() {
        let dir = std::env::temp_dir().join("trinet-io-test");
        fs::create_dir_all(&dir).unwrap();

        let path = dir.join("smolin.json");
        save_density(&smolin(), &path).unwrap();
        let back = load_state(&path).unwrap();
        assert_eq!(back.dims(), &[4, 4, 4]);

        let path = dir.join("ghz.json");
        save_pure(&ghz(4).unwrap(), &path).unwrap();
        assert!(load_state(&path).unwrap().as_pure().is_some());

        let path = dir.join("matmul.json");
        save_tensor(&matmul_tensor(), &path).unwrap();
        let tensor = load_tensor(&path).unwrap();
        assert_eq!(tensor, matmul_tensor());

        let path = dir.join("strassen.json");
        save_terms(&strassen_decomposition(), &path).unwrap();
        let terms = load_terms(&path).unwrap();
        assert!(verify_decomposition(&matmul_tensor(), &terms).unwrap());

        let path = dir.join("decomposition.json");
        let decomposition = ghz4_bell_decomposition();
        save_decomposition(&decomposition, Some(0.5), &path).unwrap();
        let (back, mu) = load_decomposition(&path).unwrap();
        assert_eq!(mu, Some(0.5));
        let lhs = itn_pure_state(&back).unwrap();
        let rhs = itn_pure_state(&decomposition).unwrap();
        assert!((lhs.overlap(&rhs).unwrap().norm() - 1.0).abs() < 1e-12);
    }
}
