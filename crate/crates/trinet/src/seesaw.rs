//! Alternating maximization of the overlap between a target pure state and
//! pure network states.
//!
//! The objective is `|<alpha beta gamma| (U_A x U_B x U_C) |psi>|`. Each
//! source update has the closed form "contract the other two sources into
//! the rotated target and normalize"; each unitary update is the polar phase
//! `V U†` of the singular value decomposition of a partial overlap matrix.
//! Both steps maximize the same functional over their own variable, so the
//! objective never decreases.
//!
//! Restarts are independent: restart `i` seeds its own RNG stream from
//! `(seed, i)`, so results do not depend on the execution schedule.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{C64, PureState, UnitaryOp, permutation_map};
use crate::random::{haar_pure_state, haar_unitary};
use crate::states::{
    NODE_TO_SOURCE_PERM, SOURCE_TO_NODE_PERM, SourceState, TriangleDecomposition, itn_pure_state,
};

/// Which source state a see-saw step updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Alpha,
    Beta,
    Gamma,
}

/// Which node unitary a see-saw step updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    A,
    B,
    C,
}

#[derive(Debug, Clone)]
pub struct SeesawConfig {
    /// Source local dimension; targets live on parties of dimension d^2.
    pub d: usize,
    pub restarts: usize,
    /// Maximum number of full sweeps per restart.
    pub max_iterations: usize,
    /// Sweep-to-sweep absolute objective change below which a restart stops.
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            d: 2,
            restarts: 100,
            max_iterations: 1000,
            convergence_tol: 1e-10,
            seed: 42,
        }
    }
}

/// Per-restart outcome.
#[derive(Debug, Clone)]
pub struct RestartSummary {
    pub mu_squared: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Result of [`optimize_overlap`].
///
/// `best` is a preparation of the best network state found: applying its
/// unitaries to its sources reproduces `mu_squared` as the squared overlap
/// with the target. `trace` holds the objective after every half-step of
/// the best restart, starting from the random initialization.
#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub mu_squared: f64,
    pub best: TriangleDecomposition,
    pub iterations: usize,
    pub trace: Vec<f64>,
    pub converged: bool,
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
}

// ---------------------------------------------------------------------------
// Index helpers on [D, D, D] vectors
// ---------------------------------------------------------------------------

/// Applies a D x D matrix to one party of a vector on dims [D, D, D].
fn apply_party(v: &DVector<C64>, big_d: usize, party: usize, m: &DMatrix<C64>) -> DVector<C64> {
    let strides = [big_d * big_d, big_d, 1];
    let stride = strides[party];
    let mut out = DVector::zeros(v.len());
    // iterate over the two complementary parties
    let (o1, o2) = match party {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for i1 in 0..big_d {
        for i2 in 0..big_d {
            let base = i1 * strides[o1] + i2 * strides[o2];
            for row in 0..big_d {
                let mut acc = C64::new(0.0, 0.0);
                for col in 0..big_d {
                    acc += m[(row, col)] * v[base + col * stride];
                }
                out[base + row * stride] = acc;
            }
        }
    }
    out
}

fn gather(v: &DVector<C64>, map: &[usize]) -> DVector<C64> {
    DVector::from_fn(v.len(), |i, _| v[map[i]])
}

fn kron3(a: &DVector<C64>, b: &DVector<C64>, c: &DVector<C64>) -> DVector<C64> {
    a.kronecker(b).kronecker(c)
}

// ---------------------------------------------------------------------------
// Closed-form updates
// ---------------------------------------------------------------------------

/// Partial inner product of two fixed sources with a source-ordered target.
///
/// With `slot` free, contracts the conjugated fixed sources over the other
/// two source slots. Returns the unnormalized vector.
fn partial_contraction(
    psi_source_order: &DVector<C64>,
    fixed: [&DVector<C64>; 2],
    slot: Slot,
    d2: usize,
) -> DVector<C64> {
    let mut w = DVector::zeros(d2);
    let strides = [d2 * d2, d2, 1];
    let (free, f1, f2) = match slot {
        Slot::Alpha => (0usize, 1usize, 2usize),
        Slot::Beta => (1, 0, 2),
        Slot::Gamma => (2, 0, 1),
    };
    for x in 0..d2 {
        let mut acc = C64::new(0.0, 0.0);
        for y1 in 0..d2 {
            let c1 = fixed[0][y1].conj();
            let base = x * strides[free] + y1 * strides[f1];
            for y2 in 0..d2 {
                acc += c1 * fixed[1][y2].conj() * psi_source_order[base + y2 * strides[f2]];
            }
        }
        w[x] = acc;
    }
    w
}

/// Optimal free source state given the rotated target and the two fixed
/// sources: the normalized partial inner product. The achieved objective is
/// the norm of that vector.
///
/// `rotated_target` is the target with the current node unitaries applied,
/// on node-ordered dims `[d^2, d^2, d^2]`. The fixed states are the other
/// two sources in slot order (beta, gamma for `Slot::Alpha`, and so on).
pub fn optimal_source_state(
    rotated_target: &PureState,
    fixed_first: &PureState,
    fixed_second: &PureState,
    slot: Slot,
) -> Result<PureState> {
    let dims = rotated_target.dims();
    if dims.len() != 3 || dims[0] != dims[1] || dims[1] != dims[2] {
        return Err(Error::UnequalPartyDims {
            dims: dims.to_vec(),
        });
    }
    let d2 = dims[0];
    let mut d = 1usize;
    while d * d < d2 {
        d += 1;
    }
    if d * d != d2 {
        return Err(Error::TargetDimNotSquare {
            dim: d2,
            expected: d * d,
        });
    }
    for f in [fixed_first, fixed_second] {
        if f.total_dim() != d2 {
            return Err(Error::DimensionMismatch {
                left: f.total_dim(),
                right: d2,
            });
        }
    }
    let map = permutation_map(&[d; 6], &NODE_TO_SOURCE_PERM)?;
    let psi_src = gather(rotated_target.amplitudes(), &map);
    let w = partial_contraction(
        &psi_src,
        [fixed_first.amplitudes(), fixed_second.amplitudes()],
        slot,
        d2,
    );
    PureState::normalized(w, vec![d, d])
}

/// Optimal node unitary for a partial overlap matrix `rho`: with the
/// singular value decomposition `rho = U D V†`, returns `V U†` together with
/// the achieved objective `max_U |tr(U rho)| = sum_i s_i(rho)`.
pub fn optimal_unitary(rho: &DMatrix<C64>) -> (UnitaryOp, f64) {
    let svd = rho.clone().svd(true, true);
    let u = svd.u.expect("SVD with u requested");
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let objective: f64 = svd.singular_values.iter().sum();
    let opt = v_t.adjoint() * u.adjoint();
    (
        UnitaryOp::new(opt).expect("product of unitary factors"),
        objective,
    )
}

// ---------------------------------------------------------------------------
// Sweep state
// ---------------------------------------------------------------------------

/// Mutable iterate of one see-saw restart.
pub(crate) struct SweepState {
    d: usize,
    d2: usize,
    target: DVector<C64>,
    sources: [DVector<C64>; 3],
    unitaries: [DMatrix<C64>; 3],
    source_to_node: Vec<usize>,
    node_to_source: Vec<usize>,
}

impl SweepState {
    fn random<R: Rng>(target: &PureState, d: usize, rng: &mut R) -> Result<Self> {
        let d2 = d * d;
        let draw_source = |rng: &mut R| -> Result<DVector<C64>> {
            Ok(haar_pure_state(rng, vec![d, d])?.amplitudes().clone())
        };
        let sources = [draw_source(rng)?, draw_source(rng)?, draw_source(rng)?];
        let unitaries = [
            haar_unitary(rng, d2).matrix().clone(),
            haar_unitary(rng, d2).matrix().clone(),
            haar_unitary(rng, d2).matrix().clone(),
        ];
        Ok(Self {
            d,
            d2,
            target: target.amplitudes().clone(),
            sources,
            unitaries,
            source_to_node: permutation_map(&[d; 6], &SOURCE_TO_NODE_PERM)?,
            node_to_source: permutation_map(&[d; 6], &NODE_TO_SOURCE_PERM)?,
        })
    }

    /// Target with all three node unitaries applied, node order.
    fn rotated_target(&self) -> DVector<C64> {
        let mut v = apply_party(&self.target, self.d2, 0, &self.unitaries[0]);
        v = apply_party(&v, self.d2, 1, &self.unitaries[1]);
        apply_party(&v, self.d2, 2, &self.unitaries[2])
    }

    /// Source product in node order.
    fn source_product_node_order(&self) -> DVector<C64> {
        let phi = kron3(&self.sources[0], &self.sources[1], &self.sources[2]);
        gather(&phi, &self.source_to_node)
    }

    pub(crate) fn objective(&self) -> f64 {
        let psi = self.rotated_target();
        let phi = self.source_product_node_order();
        phi.dotc(&psi).norm()
    }

    /// Replaces the slot's source with the closed-form maximizer; returns
    /// the new objective.
    pub(crate) fn update_source(&mut self, slot: Slot) -> Result<f64> {
        let psi_src = gather(&self.rotated_target(), &self.node_to_source);
        let idx = slot_index(slot);
        let (f1, f2) = match slot {
            Slot::Alpha => (1, 2),
            Slot::Beta => (0, 2),
            Slot::Gamma => (0, 1),
        };
        let w = partial_contraction(
            &psi_src,
            [&self.sources[f1], &self.sources[f2]],
            slot,
            self.d2,
        );
        let norm = w.norm();
        if norm < 1e-14 {
            return Err(Error::ZeroVector);
        }
        self.sources[idx] = w / C64::new(norm, 0.0);
        Ok(norm)
    }

    /// Replaces the node's unitary with the SVD maximizer; returns the new
    /// objective.
    pub(crate) fn update_unitary(&mut self, node: Node) -> f64 {
        let idx = node_index(node);
        let (o1, o2) = match node {
            Node::A => (1, 2),
            Node::B => (0, 2),
            Node::C => (0, 1),
        };
        let mut psi = apply_party(&self.target, self.d2, o1, &self.unitaries[o1]);
        psi = apply_party(&psi, self.d2, o2, &self.unitaries[o2]);
        let phi = self.source_product_node_order();

        // rho[a', a] = sum_rest psi[(a', rest)] conj(phi[(a, rest)])
        let strides = [self.d2 * self.d2, self.d2, 1];
        let stride = strides[idx];
        let mut rho = DMatrix::<C64>::zeros(self.d2, self.d2);
        for r1 in 0..self.d2 {
            for r2 in 0..self.d2 {
                let base = r1 * strides[o1] + r2 * strides[o2];
                for a_row in 0..self.d2 {
                    let psi_val = psi[base + a_row * stride];
                    for a_col in 0..self.d2 {
                        rho[(a_row, a_col)] += psi_val * phi[base + a_col * stride].conj();
                    }
                }
            }
        }
        let (u, objective) = optimal_unitary(&rho);
        self.unitaries[idx] = u.matrix().clone();
        objective
    }

    #[cfg(test)]
    pub(crate) fn sources_are_normalized(&self, tol: f64) -> bool {
        self.sources.iter().all(|s| (s.norm() - 1.0).abs() < tol)
    }

    #[cfg(test)]
    pub(crate) fn unitaries_are_unitary(&self, tol: f64) -> bool {
        self.unitaries.iter().all(|m| {
            let gram = m * m.adjoint();
            let eye = DMatrix::<C64>::identity(self.d2, self.d2);
            (gram - eye).iter().map(|z| z.norm()).fold(0.0, f64::max) < tol
        })
    }

    /// The preparation whose network state realizes the current objective:
    /// sources as they are, node unitaries adjointed (the sweep rotates the
    /// target, preparing rotates the sources).
    fn decomposition(&self) -> TriangleDecomposition {
        let source = |i: usize| {
            SourceState::Pure(
                PureState::new(self.sources[i].clone(), vec![self.d, self.d])
                    .expect("iterates stay normalized"),
            )
        };
        let unitary = |i: usize| {
            UnitaryOp::new(self.unitaries[i].adjoint()).expect("iterates stay unitary")
        };
        TriangleDecomposition::new(
            source(0),
            source(1),
            source(2),
            unitary(0),
            unitary(1),
            unitary(2),
        )
        .expect("dimensions agree by construction")
    }
}

fn slot_index(slot: Slot) -> usize {
    match slot {
        Slot::Alpha => 0,
        Slot::Beta => 1,
        Slot::Gamma => 2,
    }
}

fn node_index(node: Node) -> usize {
    match node {
        Node::A => 0,
        Node::B => 1,
        Node::C => 2,
    }
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct RestartOutcome {
    mu_squared: f64,
    trace: Vec<f64>,
    iterations: usize,
    converged: bool,
    decomposition: TriangleDecomposition,
}

fn run_restart(target: &PureState, cfg: &SeesawConfig, restart: usize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    // A vanishing partial contraction aborts the instance; redraw everything
    // so the recorded trace stays monotone.
    'instance: for _attempt in 0..32 {
        let mut state = SweepState::random(target, cfg.d, &mut rng)?;
        let mut trace = vec![state.objective()];
        let mut converged = false;
        let mut iterations = 0;
        while iterations < cfg.max_iterations {
            let before = *trace.last().expect("trace is non-empty");
            for slot in [Slot::Alpha, Slot::Beta, Slot::Gamma] {
                match state.update_source(slot) {
                    Ok(objective) => trace.push(objective),
                    Err(Error::ZeroVector) => continue 'instance,
                    Err(e) => return Err(e),
                }
            }
            for node in [Node::A, Node::B, Node::C] {
                trace.push(state.update_unitary(node));
            }
            iterations += 1;
            let after = *trace.last().expect("trace is non-empty");
            if (after - before).abs() < cfg.convergence_tol {
                converged = true;
                break;
            }
        }
        let final_objective = *trace.last().expect("trace is non-empty");
        return Ok(RestartOutcome {
            mu_squared: final_objective * final_objective,
            trace,
            iterations,
            converged,
            decomposition: state.decomposition(),
        });
    }
    Err(Error::ZeroVector)
}

/// Runs the see-saw from `cfg.restarts` random initializations and returns
/// the best restart. Deterministic for a fixed config, also across thread
/// schedules; ties in the final objective go to the lowest restart index.
pub fn optimize_overlap(target: &PureState, cfg: &SeesawConfig) -> Result<SeesawResult> {
    if cfg.restarts == 0 || cfg.max_iterations == 0 || !(cfg.convergence_tol > 0.0) || cfg.d < 2 {
        return Err(Error::InvalidConfig {
            detail: "see-saw needs d >= 2, restarts >= 1, max_iterations >= 1, \
                     convergence_tol > 0"
                .into(),
        });
    }
    if target.dims().len() != 3 {
        return Err(Error::PartyCount {
            expected: 3,
            found: target.dims().len(),
        });
    }
    let d2 = cfg.d * cfg.d;
    if let Some(&dim) = target.dims().iter().find(|&&dim| dim != d2) {
        return Err(Error::TargetDimNotSquare { dim, expected: d2 });
    }

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| run_restart(target, cfg, restart))
        .collect::<Result<_>>()?;

    let mut best_restart = 0;
    for (i, outcome) in outcomes.iter().enumerate() {
        if outcome.mu_squared > outcomes[best_restart].mu_squared {
            best_restart = i;
        }
    }
    let restarts = outcomes
        .iter()
        .map(|o| RestartSummary {
            mu_squared: o.mu_squared,
            iterations: o.iterations,
            converged: o.converged,
        })
        .collect();
    let best = &outcomes[best_restart];
    Ok(SeesawResult {
        mu_squared: best.mu_squared,
        best: best.decomposition.clone(),
        iterations: best.iterations,
        trace: best.trace.clone(),
        converged: best.converged,
        best_restart,
        restarts,
    })
}

/// Squared overlap between the network state prepared by `t` and `target`.
pub fn reevaluate(t: &TriangleDecomposition, target: &PureState) -> Result<f64> {
    let network = itn_pure_state(t)?;
    Ok(network.overlap(target)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::random::{haar_pure_state, random_pure_decomposition};
    use crate::states::{antisymmetric_qutrit, bell_pair, embed, ghz, ghz4_bell_decomposition, w_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn optimal_source_state_trivial_target() {
        let target = PureState::computational(vec![4, 4, 4], &[0, 0, 0]).unwrap();
        let fixed = PureState::computational(vec![2, 2], &[0, 0]).unwrap();
        let opt = optimal_source_state(&target, &fixed, &fixed, Slot::Alpha).unwrap();
        let expected = PureState::computational(vec![2, 2], &[0, 0]).unwrap();
        assert!((opt.overlap(&expected).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_source_state_beats_random_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let target = haar_pure_state(&mut rng, vec![4, 4, 4]).unwrap();
        let beta = haar_pure_state(&mut rng, vec![2, 2]).unwrap();
        let gamma = haar_pure_state(&mut rng, vec![2, 2]).unwrap();
        let opt = optimal_source_state(&target, &beta, &gamma, Slot::Alpha).unwrap();

        let map = permutation_map(&[2; 6], &NODE_TO_SOURCE_PERM).unwrap();
        let psi_src = gather(target.amplitudes(), &map);
        let w = partial_contraction(
            &psi_src,
            [beta.amplitudes(), gamma.amplitudes()],
            Slot::Alpha,
            4,
        );
        let objective = |alpha: &PureState| alpha.amplitudes().dotc(&w).norm();
        let best = objective(&opt);
        for _ in 0..10_000 {
            let candidate = haar_pure_state(&mut rng, vec![2, 2]).unwrap();
            assert!(objective(&candidate) <= best + 1e-12);
        }
    }

    #[test]
    fn ghz4_optimum_is_a_fixed_point() {
        // Sweep-side unitaries are the adjoints of the preparing ones.
        let prep = ghz4_bell_decomposition();
        let rotate = prep
            .node_a
            .adjoint()
            .tensor_product(&prep.node_b.adjoint())
            .tensor_product(&prep.node_c.adjoint());
        let rotated = rotate.apply(&ghz(4).unwrap()).unwrap();
        let bell = bell_pair();
        for slot in [Slot::Alpha, Slot::Beta, Slot::Gamma] {
            let opt = optimal_source_state(&rotated, &bell, &bell, slot).unwrap();
            let fidelity = opt.overlap(&bell).unwrap().norm();
            assert!(
                (fidelity - 1.0).abs() < 1e-12,
                "{slot:?}: fixed point drifted, fidelity {fidelity}"
            );
        }
    }

    #[test]
    fn optimal_unitary_on_diagonal_positive_matrix() {
        let rho = DMatrix::<C64>::from_diagonal(&DVector::from_vec(vec![
            C64::new(0.5, 0.0),
            C64::new(0.3, 0.0),
            C64::new(0.15, 0.0),
            C64::new(0.05, 0.0),
        ]));
        let (u, objective) = optimal_unitary(&rho);
        assert!((objective - 1.0).abs() < 1e-12);
        let eye = DMatrix::<C64>::identity(4, 4);
        assert!((u.matrix() - eye).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn optimal_unitary_on_scaled_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let w = haar_unitary(&mut rng, 4);
        let rho = w.matrix() * C64::new(0.25, 0.0);
        let (_, objective) = optimal_unitary(&rho);
        assert!((objective - 1.0).abs() < 1e-10, "all singular values 1/4");
    }

    #[test]
    fn optimal_unitary_objective_matches_singular_value_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..20 {
            let rho = DMatrix::<C64>::from_fn(4, 4, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let (u, objective) = optimal_unitary(&rho);
            // independent route: singular values via the Hermitian eigenvalues
            // of rho rho^dagger
            let gram = &rho * rho.adjoint();
            let expected: f64 = hermitian_eigenvalues(&gram)
                .iter()
                .map(|&v| v.max(0.0).sqrt())
                .sum();
            assert!((objective - expected).abs() < 1e-10);
            // and tr(U rho) realizes it
            let realized = (u.matrix() * &rho).trace();
            assert!((realized.norm() - expected).abs() < 1e-10);
            assert!(realized.im.abs() < 1e-10);
        }
    }

    #[test]
    fn seesaw_recovers_network_member() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let t = random_pure_decomposition(&mut rng, 2).unwrap();
        let target = itn_pure_state(&t).unwrap();
        let cfg = SeesawConfig {
            restarts: 8,
            ..SeesawConfig::default()
        };
        let result = optimize_overlap(&target, &cfg).unwrap();
        assert!(
            (result.mu_squared - 1.0).abs() < 1e-9,
            "network member must be reachable, got {}",
            result.mu_squared
        );
    }

    #[test]
    fn seesaw_finds_ghz4_value() {
        let cfg = SeesawConfig {
            restarts: 12,
            ..SeesawConfig::default()
        };
        let result = optimize_overlap(&ghz(4).unwrap(), &cfg).unwrap();
        assert!(
            (result.mu_squared - 0.5).abs() < 1e-6,
            "got {}",
            result.mu_squared
        );
    }

    #[test]
    fn seesaw_trace_is_monotone_and_reproducible() {
        let cfg = SeesawConfig {
            restarts: 4,
            ..SeesawConfig::default()
        };
        let target = embed(&w_state(), &[4, 4, 4]).unwrap();
        let first = optimize_overlap(&target, &cfg).unwrap();
        let second = optimize_overlap(&target, &cfg).unwrap();
        assert_eq!(first.trace, second.trace, "seed determinism");
        for pair in first.trace.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12, "trace decreased: {pair:?}");
        }
        let reevaluated = reevaluate(&first.best, &target).unwrap();
        assert!((reevaluated - first.mu_squared).abs() < 1e-10);
    }

    #[test]
    fn iterates_stay_valid_during_sweeps() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let target = haar_pure_state(&mut rng, vec![4, 4, 4]).unwrap();
        let mut state = SweepState::random(&target, 2, &mut rng).unwrap();
        for _ in 0..20 {
            for slot in [Slot::Alpha, Slot::Beta, Slot::Gamma] {
                state.update_source(slot).unwrap();
            }
            for node in [Node::A, Node::B, Node::C] {
                state.update_unitary(node);
            }
            assert!(state.sources_are_normalized(1e-10));
            assert!(state.unitaries_are_unitary(1e-10));
        }
    }

    #[test]
    fn reference_targets_converge_within_a_hundred_sweeps() {
        let quart = |s: &PureState| embed(s, &[4, 4, 4]).unwrap();
        let targets = vec![
            quart(&ghz(2).unwrap()),
            quart(&ghz(3).unwrap()),
            ghz(4).unwrap(),
            quart(&w_state()),
            crate::states::ame_six_qubits(),
            quart(&antisymmetric_qutrit()),
        ];
        let cfg = SeesawConfig {
            restarts: 20,
            ..SeesawConfig::default()
        };
        for target in targets {
            let result = optimize_overlap(&target, &cfg).unwrap();
            let mut iterations: Vec<usize> =
                result.restarts.iter().map(|r| r.iterations).collect();
            iterations.sort_unstable();
            let median = iterations[iterations.len() / 2];
            assert!(median <= 100, "median iteration count {median} too high");
        }
    }

    #[test]
    fn antisymmetric_qutrit_overlap_reaches_eight_fifteenths() {
        // Every restart converges to exactly 8/15 for this target; pinned
        // here as the reference value of this implementation (independent
        // gradient-based maximization reproduces it).
        let target = embed(&antisymmetric_qutrit(), &[4, 4, 4]).unwrap();
        let cfg = SeesawConfig {
            restarts: 12,
            ..SeesawConfig::default()
        };
        let result = optimize_overlap(&target, &cfg).unwrap();
        assert!(
            (result.mu_squared - 8.0 / 15.0).abs() < 1e-9,
            "got {}",
            result.mu_squared
        );
    }

    #[test]
    fn seesaw_rejects_bad_targets() {
        let cfg = SeesawConfig::default();
        let wrong_dim = ghz(2).unwrap();
        assert!(matches!(
            optimize_overlap(&wrong_dim, &cfg),
            Err(Error::TargetDimNotSquare { .. })
        ));
        let bad_cfg = SeesawConfig {
            restarts: 0,
            ..SeesawConfig::default()
        };
        assert!(optimize_overlap(&ghz(4).unwrap(), &bad_cfg).is_err());
    }
}
