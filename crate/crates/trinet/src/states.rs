//! State catalog and triangle-network assembly.
//!
//! The triangle network has nodes `A`, `B`, `C` and bipartite sources
//! `alpha` (B-C), `beta` (A-C), `gamma` (A-B); each node receives one
//! d-dimensional subsystem from each of its two sources and applies a local
//! unitary on the pair.
//!
//! Two subsystem orders appear. Sources emit in pair order
//! `(B_a C_a)(A_b C_b)(A_g B_g)`; the canonical *node order* lists each
//! node's pair as (subsystem shared with the previous node, subsystem shared
//! with the next node) in the cycle A->B->C:
//! `(A_b A_g)(B_g B_a)(C_a C_b)`. [`SOURCE_TO_NODE_PERM`] converts between
//! them, and grouping consecutive pairs turns the six d-dimensional
//! subsystems into three d^2-dimensional nodes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{C64, DensityState, PureState, RANK_REL_TOL, UnitaryOp};

/// Node-order subsystem `i` is source-order subsystem `SOURCE_TO_NODE_PERM[i]`.
pub const SOURCE_TO_NODE_PERM: [usize; 6] = [2, 4, 5, 0, 1, 3];

/// Inverse of [`SOURCE_TO_NODE_PERM`].
pub const NODE_TO_SOURCE_PERM: [usize; 6] = [3, 4, 0, 5, 1, 2];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// ---------------------------------------------------------------------------
// Decomposition types
// ---------------------------------------------------------------------------

/// A bipartite source state, pure or mixed, on two d-dimensional halves.
#[derive(Debug, Clone)]
pub enum SourceState {
    Pure(PureState),
    Mixed(DensityState),
}

impl SourceState {
    /// The local dimension d; source states live on dims `[d, d]`.
    pub fn local_dim(&self) -> Result<usize> {
        let dims = match self {
            SourceState::Pure(p) => p.dims(),
            SourceState::Mixed(m) => m.dims(),
        };
        if dims.len() != 2 || dims[0] != dims[1] {
            return Err(Error::BadSourceDims {
                dims: dims.to_vec(),
            });
        }
        Ok(dims[0])
    }

    pub fn to_density(&self) -> DensityState {
        match self {
            SourceState::Pure(p) => p.to_density(),
            SourceState::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            SourceState::Pure(p) => Some(p),
            SourceState::Mixed(_) => None,
        }
    }

    /// Rank of the source state (1 for pure).
    pub fn rank(&self) -> usize {
        match self {
            SourceState::Pure(_) => 1,
            SourceState::Mixed(m) => m.numerical_rank(RANK_REL_TOL),
        }
    }
}

/// One triangle-network preparation: three sources plus one local unitary
/// per node.
#[derive(Debug, Clone)]
pub struct TriangleDecomposition {
    pub source_alpha: SourceState,
    pub source_beta: SourceState,
    pub source_gamma: SourceState,
    pub node_a: UnitaryOp,
    pub node_b: UnitaryOp,
    pub node_c: UnitaryOp,
}

impl TriangleDecomposition {
    pub fn new(
        source_alpha: SourceState,
        source_beta: SourceState,
        source_gamma: SourceState,
        node_a: UnitaryOp,
        node_b: UnitaryOp,
        node_c: UnitaryOp,
    ) -> Result<Self> {
        let ds = [
            source_alpha.local_dim()?,
            source_beta.local_dim()?,
            source_gamma.local_dim()?,
        ];
        if ds[0] != ds[1] || ds[1] != ds[2] {
            return Err(Error::SourceDimMismatch { found: ds.to_vec() });
        }
        let d2 = ds[0] * ds[0];
        for u in [&node_a, &node_b, &node_c] {
            if u.dim() != d2 {
                return Err(Error::UnitaryDimMismatch {
                    expected: d2,
                    found: u.dim(),
                });
            }
        }
        Ok(Self {
            source_alpha,
            source_beta,
            source_gamma,
            node_a,
            node_b,
            node_c,
        })
    }

    pub fn local_dim(&self) -> usize {
        self.source_alpha
            .local_dim()
            .expect("validated at construction")
    }

    pub fn all_sources_pure(&self) -> bool {
        self.source_alpha.as_pure().is_some()
            && self.source_beta.as_pure().is_some()
            && self.source_gamma.as_pure().is_some()
    }

    fn node_unitary(&self) -> UnitaryOp {
        self.node_a
            .tensor_product(&self.node_b)
            .tensor_product(&self.node_c)
    }
}

/// A convex mixture of triangle decompositions sharing one local dimension.
#[derive(Debug, Clone)]
pub struct CtnMixture {
    weights: Vec<f64>,
    components: Vec<TriangleDecomposition>,
}

impl CtnMixture {
    pub fn new(weights: Vec<f64>, components: Vec<TriangleDecomposition>) -> Result<Self> {
        if components.is_empty() || weights.len() != components.len() {
            return Err(Error::EmptyMixture);
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::NegativeWeight { value: w });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::WeightsNotNormalized { sum, tol: 1e-12 });
        }
        let d0 = components[0].local_dim();
        if let Some(bad) = components.iter().find(|t| t.local_dim() != d0) {
            return Err(Error::SourceDimMismatch {
                found: vec![d0, bad.local_dim()],
            });
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[TriangleDecomposition] {
        &self.components
    }
}

// ---------------------------------------------------------------------------
// Network assembly
// ---------------------------------------------------------------------------

/// The network state of one decomposition: tensor the sources in source
/// order, permute to node order, group nodes, conjugate by the local
/// unitaries. Output dims are `[d^2, d^2, d^2]`.
pub fn itn_state(t: &TriangleDecomposition) -> Result<DensityState> {
    let d = t.local_dim();
    let sources = t
        .source_alpha
        .to_density()
        .tensor_product(&t.source_beta.to_density())?
        .tensor_product(&t.source_gamma.to_density())?;
    let node_ordered = sources
        .permute_subsystems(&SOURCE_TO_NODE_PERM)?
        .with_dims(vec![d * d, d * d, d * d])?;
    t.node_unitary().conjugate(&node_ordered)
}

/// Pure-source variant of [`itn_state`].
pub fn itn_pure_state(t: &TriangleDecomposition) -> Result<PureState> {
    let (alpha, beta, gamma) = match (
        t.source_alpha.as_pure(),
        t.source_beta.as_pure(),
        t.source_gamma.as_pure(),
    ) {
        (Some(a), Some(b), Some(g)) => (a, b, g),
        _ => return Err(Error::SourcesNotPure),
    };
    let d = t.local_dim();
    let sources = alpha.tensor_product(beta)?.tensor_product(gamma)?;
    let node_ordered = sources
        .permute_subsystems(&SOURCE_TO_NODE_PERM)?
        .with_dims(vec![d * d, d * d, d * d])?;
    t.node_unitary().apply(&node_ordered)
}

/// Convex combination of the component network states.
pub fn ctn_state(m: &CtnMixture) -> Result<DensityState> {
    let mut acc: Option<DMatrix<C64>> = None;
    let mut dims = Vec::new();
    for (w, t) in m.weights().iter().zip(m.components()) {
        let rho = itn_state(t)?;
        dims = rho.dims().to_vec();
        let scaled = rho.matrix() * c(*w, 0.0);
        acc = Some(match acc {
            None => scaled,
            Some(a) => a + scaled,
        });
    }
    DensityState::new(acc.expect("mixture is non-empty"), dims)
}

// ---------------------------------------------------------------------------
// State catalog
// ---------------------------------------------------------------------------

/// The two-qubit Bell state (|00> + |11>)/sqrt(2).
pub fn bell_pair() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(
        DVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]),
        vec![2, 2],
    )
    .expect("Bell state is normalized")
}

/// GHZ state of local dimension D: (1/sqrt(D)) sum_j |jjj>.
pub fn ghz(d_local: usize) -> Result<PureState> {
    if d_local < 2 {
        return Err(Error::LocalDimTooSmall { d: d_local });
    }
    let total = d_local * d_local * d_local;
    let amp = 1.0 / (d_local as f64).sqrt();
    let mut v = DVector::zeros(total);
    for j in 0..d_local {
        v[j * (d_local * d_local + d_local + 1)] = c(amp, 0.0);
    }
    PureState::new(v, vec![d_local; 3])
}

/// Classically correlated state (1/k) sum_{j<k} |jjj><jjj| on dims `[D; 3]`.
pub fn classical_corr(k: usize, d_local: usize) -> Result<DensityState> {
    if d_local < 2 {
        return Err(Error::LocalDimTooSmall { d: d_local });
    }
    if k == 0 || k > d_local {
        return Err(Error::KOutOfRange { k, max: d_local });
    }
    let total = d_local * d_local * d_local;
    let mut m = DMatrix::<C64>::zeros(total, total);
    let step = d_local * d_local + d_local + 1;
    for j in 0..k {
        m[(j * step, j * step)] = c(1.0 / k as f64, 0.0);
    }
    DensityState::new(m, vec![d_local; 3])
}

/// Noisy GHZ state V |GHZ><GHZ| + (1-V) 1/D^3.
pub fn noisy_ghz(v: f64, d_local: usize) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::VisibilityOutOfRange { v });
    }
    let pure = ghz(d_local)?.to_density();
    let total = d_local * d_local * d_local;
    let m = pure.matrix() * c(v, 0.0)
        + DMatrix::<C64>::identity(total, total) * c((1.0 - v) / total as f64, 0.0);
    DensityState::new(m, vec![d_local; 3])
}

fn pauli(which: usize) -> DMatrix<C64> {
    match which {
        0 => DMatrix::identity(2, 2),
        1 => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        2 => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        _ => DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    }
}

fn pauli_six(which: usize) -> DMatrix<C64> {
    let p = pauli(which);
    let mut out = p.clone();
    for _ in 1..6 {
        out = out.kronecker(&p);
    }
    out
}

/// Six-qubit Smolin state on three ququarts: the normalized projector onto
/// the joint +1 eigenspace of sigma_x^(x6) and sigma_z^(x6).
///
/// The projector has rank 16, so the state is
/// (1 + sigma_x^(x6) - sigma_y^(x6) + sigma_z^(x6)) / 64.
pub fn smolin() -> DensityState {
    let m = (DMatrix::<C64>::identity(64, 64) + pauli_six(1) - pauli_six(2) + pauli_six(3))
        * c(1.0 / 64.0, 0.0);
    DensityState::new(m, vec![4, 4, 4]).expect("Smolin state satisfies the invariants")
}

/// Three-qubit W state (|001> + |010> + |100>)/sqrt(3).
pub fn w_state() -> PureState {
    let amp = 1.0 / 3.0_f64.sqrt();
    let mut v = DVector::zeros(8);
    v[1] = c(amp, 0.0);
    v[2] = c(amp, 0.0);
    v[4] = c(amp, 0.0);
    PureState::new(v, vec![2, 2, 2]).expect("W state is normalized")
}

/// Totally antisymmetric state on three qutrits.
pub fn antisymmetric_qutrit() -> PureState {
    let amp = 1.0 / 6.0_f64.sqrt();
    let mut v = DVector::zeros(27);
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([1, 0, 2], -1.0),
        ([2, 1, 0], -1.0),
    ];
    for (p, sign) in perms {
        v[p[0] * 9 + p[1] * 3 + p[2]] = c(sign * amp, 0.0);
    }
    PureState::new(v, vec![3, 3, 3]).expect("antisymmetric state is normalized")
}

/// Prism-graph edges on qubits 0..6: two triangles plus a perfect matching.
/// Qubit pairs (0,1), (2,3), (4,5) form the three ququart nodes, so all nine
/// edges cross node boundaries, three per node pair.
const AME_GRAPH_EDGES: [(usize, usize); 9] = [
    (0, 2),
    (2, 4),
    (0, 4),
    (1, 3),
    (3, 5),
    (1, 5),
    (0, 3),
    (1, 4),
    (2, 5),
];

/// Absolutely maximally entangled state of six qubits, grouped into three
/// ququarts.
///
/// Built as the graph state of [`AME_GRAPH_EDGES`]. The defining property —
/// every three-qubit marginal equals 1/8 — is verified exhaustively at
/// construction time.
///
/// # Panics
///
/// Panics if the construction self-check fails.
pub fn ame_six_qubits() -> PureState {
    let mut amp = DVector::from_element(64, c(1.0 / 8.0, 0.0));
    for (i, j) in AME_GRAPH_EDGES {
        let bit_i = 1usize << (5 - i);
        let bit_j = 1usize << (5 - j);
        for b in 0..64 {
            if b & bit_i != 0 && b & bit_j != 0 {
                amp[b] = -amp[b];
            }
        }
    }
    let six = PureState::new(amp, vec![2; 6]).expect("graph state is normalized");
    // Defining self-check: all 20 three-qubit marginals maximally mixed.
    let eye8 = DMatrix::<C64>::identity(8, 8) * c(0.125, 0.0);
    for a in 0..6 {
        for b in (a + 1)..6 {
            for cc in (b + 1)..6 {
                let marginal = six
                    .marginal(&[a, b, cc])
                    .expect("marginal of a valid state");
                let dev = (marginal.matrix() - &eye8)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(
                    dev < 1e-10,
                    "AME self-check failed: marginal ({a},{b},{cc}) deviates by {dev:e}"
                );
            }
        }
    }
    six.with_dims(vec![4, 4, 4])
        .expect("64 = 4*4*4 regrouping")
}

/// Maps amplitudes onto the first basis vectors of each enlarged subsystem.
pub fn embed(s: &PureState, target_dims: &[usize]) -> Result<PureState> {
    if target_dims.len() != s.dims().len() {
        return Err(Error::PartyCount {
            expected: s.dims().len(),
            found: target_dims.len(),
        });
    }
    for (&from, &to) in s.dims().iter().zip(target_dims) {
        if to < from {
            return Err(Error::EmbedShrink { from, to });
        }
    }
    let src_dims = s.dims();
    let src_strides = crate::linalg::strides(src_dims);
    let dst_strides = crate::linalg::strides(target_dims);
    let total: usize = target_dims.iter().product();
    let mut v = DVector::zeros(total);
    for flat in 0..s.total_dim() {
        let mut rem = flat;
        let mut dst = 0usize;
        for (i, &stride) in src_strides.iter().enumerate() {
            let digit = rem / stride;
            rem %= stride;
            dst += digit * dst_strides[i];
        }
        v[dst] = s.amplitudes()[flat];
    }
    PureState::new(v, target_dims.to_vec())
}

/// Controlled-sigma_z on two qubits.
fn cz() -> UnitaryOp {
    let mut m = DMatrix::<C64>::identity(4, 4);
    m[(3, 3)] = c(-1.0, 0.0);
    UnitaryOp::new(m).expect("CZ is unitary")
}

/// Bell states on every source, a controlled-sigma_z at every node.
pub fn ring_cluster_decomposition() -> TriangleDecomposition {
    TriangleDecomposition::new(
        SourceState::Pure(bell_pair()),
        SourceState::Pure(bell_pair()),
        SourceState::Pure(bell_pair()),
        cz(),
        cz(),
        cz(),
    )
    .expect("valid decomposition")
}

/// The ring-cluster network state as a pure state on dims `[4, 4, 4]`.
pub fn ring_cluster() -> PureState {
    itn_pure_state(&ring_cluster_decomposition()).expect("pure sources")
}

/// Swap of two qubits.
fn swap2() -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 2)] = c(1.0, 0.0);
    m[(2, 1)] = c(1.0, 0.0);
    m[(3, 3)] = c(1.0, 0.0);
    m
}

/// |0><0| (x) v0 + |1><1| (x) v1.
fn controlled(v0: &DMatrix<C64>, v1: &DMatrix<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = v0[(i, j)];
            m[(2 + i, 2 + j)] = v1[(i, j)];
        }
    }
    m
}

/// The Bell-pair preparation of the local-dimension-4 GHZ state, reaching
/// squared overlap 1/2.
///
/// Every source is a Bell pair; node B is trivial; nodes A and C apply the
/// controlled rotation |0><0|(1 - i sigma_y)/sqrt(2) + |1><1|(1 + i
/// sigma_y)/sqrt(2), wired so that at node A the control qubit is the one
/// shared with B (incoming pair swapped first) and at node C the control is
/// the qubit shared with B (outgoing pair swapped afterwards).
pub fn ghz4_bell_decomposition() -> TriangleDecomposition {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // (1 - i sigma_y)/sqrt(2) and (1 + i sigma_y)/sqrt(2)
    let v0 = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(-s, 0.0), c(s, 0.0), c(s, 0.0)]);
    let v1 = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(-s, 0.0), c(s, 0.0)]);
    let ctrl = controlled(&v0, &v1);
    let u_a = UnitaryOp::new(&ctrl * swap2()).expect("unitary");
    let u_c = UnitaryOp::new(swap2() * &ctrl).expect("unitary");
    TriangleDecomposition::new(
        SourceState::Pure(bell_pair()),
        SourceState::Pure(bell_pair()),
        SourceState::Pure(bell_pair()),
        u_a,
        UnitaryOp::identity(4),
        u_c,
    )
    .expect("valid decomposition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::random::{random_mixed_decomposition, random_pure_decomposition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn product_decomposition(d: usize) -> TriangleDecomposition {
        let src = || {
            SourceState::Pure(PureState::computational(vec![d, d], &[0, 0]).unwrap())
        };
        TriangleDecomposition::new(
            src(),
            src(),
            src(),
            UnitaryOp::identity(d * d),
            UnitaryOp::identity(d * d),
            UnitaryOp::identity(d * d),
        )
        .unwrap()
    }

    #[test]
    fn itn_of_product_sources_is_basis_projector() {
        let rho = itn_state(&product_decomposition(2)).unwrap();
        assert_eq!(rho.dims(), &[4, 4, 4]);
        let expected = PureState::computational(vec![4, 4, 4], &[0, 0, 0])
            .unwrap()
            .to_density();
        assert!((rho.matrix() - expected.matrix()).norm() < 1e-14);
    }

    #[test]
    fn bell_construction_reaches_half_overlap_with_ghz4() {
        let net = itn_pure_state(&ghz4_bell_decomposition()).unwrap();
        let target = ghz(4).unwrap();
        let mu2 = net.overlap(&target).unwrap().norm_sqr();
        assert!(
            (mu2 - 0.5).abs() < 1e-12,
            "expected squared overlap 1/2, got {mu2}"
        );
    }

    #[test]
    fn ring_cluster_is_pure_with_maximally_mixed_nodes() {
        let psi = ring_cluster();
        assert_eq!(psi.dims(), &[4, 4, 4]);
        for party in 0..3 {
            let marginal = psi.marginal(&[party]).unwrap();
            let expected = DensityState::maximally_mixed(vec![4]).unwrap();
            assert!((marginal.matrix() - expected.matrix()).norm() < 1e-12);
        }
        // matches the mixed-path assembly
        let rho = itn_state(&ring_cluster_decomposition()).unwrap();
        assert!((rho.matrix() - psi.to_density().matrix()).norm() < 1e-12);
    }

    #[test]
    fn ghz_examples() {
        let g2 = ghz(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g2.amplitudes()[0].re - s).abs() < 1e-15);
        assert!((g2.amplitudes()[7].re - s).abs() < 1e-15);

        let g4 = ghz(4).unwrap();
        let entropy = g4.marginal(&[0]).unwrap().von_neumann_entropy().unwrap();
        assert!((entropy - 2.0).abs() < 1e-10);

        let g3 = ghz(3).unwrap();
        let entropy = g3.marginal(&[1]).unwrap().von_neumann_entropy().unwrap();
        assert!((entropy - 3.0_f64.log2()).abs() < 1e-10);

        assert!(matches!(ghz(1), Err(Error::LocalDimTooSmall { .. })));
    }

    #[test]
    fn classical_corr_examples() {
        let product = classical_corr(1, 4).unwrap();
        assert_eq!(product.numerical_rank(RANK_REL_TOL), 1);
        let rho = classical_corr(4, 4).unwrap();
        assert_eq!(rho.numerical_rank(RANK_REL_TOL), 4);
        assert_eq!(classical_corr(3, 4).unwrap().numerical_rank(RANK_REL_TOL), 3);
        let marginal = classical_corr(2, 2).unwrap().partial_trace(&[1, 2]).unwrap();
        // (|00><00| + |11><11|)/2
        assert!((marginal.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((marginal.matrix()[(3, 3)].re - 0.5).abs() < 1e-15);
        assert!(marginal.matrix()[(1, 1)].norm() < 1e-15);
        assert!(matches!(classical_corr(5, 4), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn noisy_ghz_examples() {
        let mixed = noisy_ghz(0.0, 2).unwrap();
        let expected = DensityState::maximally_mixed(vec![2, 2, 2]).unwrap();
        assert!((mixed.matrix() - expected.matrix()).norm() < 1e-15);
        let pure = noisy_ghz(1.0, 2).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        assert!(matches!(
            noisy_ghz(1.5, 2),
            Err(Error::VisibilityOutOfRange { .. })
        ));
    }

    #[test]
    fn smolin_stabilizer_facts() {
        let rho = smolin();
        assert_eq!(rho.dims(), &[4, 4, 4]);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        let g1 = pauli_six(1);
        let g2 = pauli_six(3);
        let e1 = (rho.matrix() * &g1).trace().re;
        let e2 = (rho.matrix() * &g2).trace().re;
        assert!((e1 - 1.0).abs() < 1e-12 && (e2 - 1.0).abs() < 1e-12);

        let eigs = hermitian_eigenvalues(rho.matrix());
        for e in eigs.iter().take(16) {
            assert!((e - 1.0 / 16.0).abs() < 1e-12);
        }
        for e in eigs.iter().skip(16) {
            assert!(e.abs() < 1e-12);
        }
        assert_eq!(rho.numerical_rank(RANK_REL_TOL), 16);
        assert!((rho.von_neumann_entropy().unwrap() - 4.0).abs() < 1e-10);

        // three-vs-three marginals are maximally mixed
        let six = rho.with_dims(vec![2; 6]).unwrap();
        let eye8 = DensityState::maximally_mixed(vec![2, 2, 2]).unwrap();
        for keep in [[0usize, 1, 2], [0, 2, 4], [1, 3, 5], [0, 1, 5]] {
            let marginal = six.partial_trace(&keep).unwrap();
            assert!((marginal.matrix() - eye8.matrix()).norm() < 1e-12);
        }
        // two-qubit marginals are 1/4
        let eye4 = DensityState::maximally_mixed(vec![2, 2]).unwrap();
        let marginal = six.partial_trace(&[1, 4]).unwrap();
        assert!((marginal.matrix() - eye4.matrix()).norm() < 1e-12);
    }

    #[test]
    fn smolin_is_permutation_invariant_on_qubits() {
        let six = smolin().with_dims(vec![2; 6]).unwrap();
        let mut perm = [0usize, 1, 2, 3, 4, 5];
        let mut checked = 0;
        // Heap's algorithm over all 720 qubit permutations
        fn heaps(
            k: usize,
            perm: &mut [usize; 6],
            six: &DensityState,
            checked: &mut usize,
        ) {
            if k == 1 {
                let permuted = six.permute_subsystems(perm).unwrap();
                let dev = (permuted.matrix() - six.matrix())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-12, "permutation {perm:?} deviates by {dev:e}");
                *checked += 1;
                return;
            }
            for i in 0..k {
                heaps(k - 1, perm, six, checked);
                if k.is_multiple_of(2) {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        heaps(6, &mut perm, &six, &mut checked);
        assert_eq!(checked, 720);
    }

    #[test]
    fn w_state_marginals() {
        let w = w_state();
        assert!((w.amplitudes().norm() - 1.0).abs() < 1e-15);
        let eigs = hermitian_eigenvalues(w.marginal(&[0]).unwrap().matrix());
        assert!((eigs[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_state_properties() {
        let psi = antisymmetric_qutrit();
        for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
            let mut perm = [0usize, 1, 2];
            perm.swap(i, j);
            let swapped = psi.permute_subsystems(&perm).unwrap();
            let sum = swapped.amplitudes() + psi.amplitudes();
            assert!(sum.norm() < 1e-14, "swap ({i},{j}) must negate the state");
        }
        let expected = DensityState::maximally_mixed(vec![3]).unwrap();
        for party in 0..3 {
            let marginal = psi.marginal(&[party]).unwrap();
            assert!((marginal.matrix() - expected.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn ame_state_marginals() {
        let ame = ame_six_qubits();
        assert_eq!(ame.dims(), &[4, 4, 4]);
        let expected = DensityState::maximally_mixed(vec![4]).unwrap();
        for party in 0..3 {
            let marginal = ame.marginal(&[party]).unwrap();
            assert!((marginal.matrix() - expected.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn embed_examples() {
        let w = w_state();
        let same = embed(&w, &[2, 2, 2]).unwrap();
        assert_eq!(same.amplitudes(), w.amplitudes());

        let g2 = embed(&ghz(2).unwrap(), &[4, 4, 4]).unwrap();
        assert!((g2.amplitudes().norm() - 1.0).abs() < 1e-15);
        let overlap = g2.overlap(&ghz(4).unwrap()).unwrap().norm();
        assert!((overlap - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let w4 = embed(&w, &[4, 4, 4]).unwrap();
        assert!((w4.amplitudes().norm() - 1.0).abs() < 1e-15);

        assert!(matches!(
            embed(&ghz(4).unwrap(), &[2, 2, 2]),
            Err(Error::EmbedShrink { .. })
        ));
    }

    #[test]
    fn ctn_single_component_equals_itn() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_mixed_decomposition(&mut rng, 2).unwrap();
        let mixture = CtnMixture::new(vec![1.0], vec![t.clone()]).unwrap();
        let lhs = ctn_state(&mixture).unwrap();
        let rhs = itn_state(&t).unwrap();
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12);
    }

    #[test]
    fn ctn_mixture_of_product_projectors() {
        let src0 = || SourceState::Pure(PureState::computational(vec![2, 2], &[0, 0]).unwrap());
        let src1 = || SourceState::Pure(PureState::computational(vec![2, 2], &[1, 1]).unwrap());
        let eye = || UnitaryOp::identity(4);
        let comp0 =
            TriangleDecomposition::new(src0(), src0(), src0(), eye(), eye(), eye()).unwrap();
        let comp1 =
            TriangleDecomposition::new(src1(), src1(), src1(), eye(), eye(), eye()).unwrap();
        let mixture = CtnMixture::new(vec![0.5, 0.5], vec![comp0, comp1]).unwrap();
        let rho = ctn_state(&mixture).unwrap();
        // (|000><000| + |333><333|)/2 on ququarts
        let p0 = PureState::computational(vec![4, 4, 4], &[0, 0, 0]).unwrap();
        let p3 = PureState::computational(vec![4, 4, 4], &[3, 3, 3]).unwrap();
        let expected = (p0.to_density().matrix() + p3.to_density().matrix()) * c(0.5, 0.0);
        assert!((rho.matrix() - expected).norm() < 1e-14);
    }

    #[test]
    fn ctn_validation() {
        let t = product_decomposition(2);
        assert!(matches!(
            CtnMixture::new(vec![], vec![]),
            Err(Error::EmptyMixture)
        ));
        assert!(matches!(
            CtnMixture::new(vec![0.5], vec![t.clone()]),
            Err(Error::WeightsNotNormalized { .. })
        ));
        assert!(matches!(
            CtnMixture::new(vec![-0.5, 1.5], vec![t.clone(), t.clone()]),
            Err(Error::NegativeWeight { .. })
        ));
        let t3 = product_decomposition(3);
        assert!(matches!(
            CtnMixture::new(vec![0.5, 0.5], vec![t, t3]),
            Err(Error::SourceDimMismatch { .. })
        ));
    }

    #[test]
    fn itn_rank_is_product_of_source_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let t = random_mixed_decomposition(&mut rng, 2).unwrap();
            let expected =
                t.source_alpha.rank() * t.source_beta.rank() * t.source_gamma.rank();
            let rho = itn_state(&t).unwrap();
            assert_eq!(rho.numerical_rank(RANK_REL_TOL), expected);
        }
    }

    #[test]
    fn itn_pure_state_matches_density_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let t = random_pure_decomposition(&mut rng, 2).unwrap();
            let psi = itn_pure_state(&t).unwrap();
            let rho = itn_state(&t).unwrap();
            assert!((psi.to_density().matrix() - rho.matrix()).norm() < 1e-10);
        }
        let mixed = random_mixed_decomposition(&mut rng, 2).unwrap();
        assert!(matches!(
            itn_pure_state(&mixed),
            Err(Error::SourcesNotPure)
        ));
    }

    #[test]
    fn source_to_node_permutation_is_involutive_pair() {
        for (i, &p) in SOURCE_TO_NODE_PERM.iter().enumerate() {
            assert_eq!(NODE_TO_SOURCE_PERM[p], i);
        }
    }
}
