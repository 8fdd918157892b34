//! Analytical upper bounds on the network overlap from sorted Schmidt
//! coefficients, for qubit sources.
//!
//! A pure network state with pure qubit sources has, across the cut X|YZ,
//! Schmidt coefficients given by the products of the coefficient pairs of
//! the two sources crossing that cut (local unitaries cannot change them).
//! For any two pure states with sorted Schmidt vectors `s` and `t` the
//! squared overlap is at most `(sum_i s_i t_i)^2`, so maximizing the minimum
//! of that expression over the three cuts, over all source Schmidt angles,
//! certifies an upper bound on the best achievable squared overlap.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::PureState;

const QUARTER_PI: f64 = std::f64::consts::FRAC_PI_4;

/// Schmidt angles of the three pure qubit-pair sources; the source with
/// angle `theta` has coefficients `[cos(theta), sin(theta)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceAngles {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SourceAngles {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for angle in [a, b, c] {
            if !(0.0..=QUARTER_PI + 1e-12).contains(&angle) {
                return Err(Error::AngleOutOfRange { angle });
            }
        }
        Ok(Self { a, b, c })
    }
}

/// Search configuration for [`overlap_upper_bound`].
#[derive(Debug, Clone, Copy)]
pub struct BoundConfig {
    /// Grid points per axis, endpoints included.
    pub grid: usize,
    /// Rounds of per-candidate window refinement, each shrinking the grid
    /// step eightfold.
    pub refinements: usize,
    /// Restrict the search to `a >= b >= c` (sound for symmetric targets
    /// only).
    pub symmetric: bool,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            grid: 200,
            refinements: 6,
            symmetric: false,
        }
    }
}

/// Certified bound together with the optimizing angles.
#[derive(Debug, Clone, Copy)]
pub struct BoundResult {
    pub bound: f64,
    pub angles: SourceAngles,
    /// Per-cut squared inner products at the optimum (A|BC, B|AC, C|AB).
    pub cut_values: [f64; 3],
}

fn sort4_descending(v: &mut [f64; 4]) {
    // 5-comparator sorting network
    for (i, j) in [(0, 1), (2, 3), (0, 2), (1, 3), (1, 2)] {
        if v[i] < v[j] {
            v.swap(i, j);
        }
    }
}

fn cut_products(a: f64, b: f64, c: f64, cut: usize) -> [f64; 4] {
    // cut X|YZ is crossed by the two sources not attached between Y and Z:
    // A|BC by beta and gamma, B|AC by alpha and gamma, C|AB by alpha and beta
    let (x, y) = match cut {
        0 => (b, c),
        1 => (a, c),
        _ => (a, b),
    };
    let (cx, sx) = (x.cos(), x.sin());
    let (cy, sy) = (y.cos(), y.sin());
    let mut out = [cx * cy, cx * sy, sx * cy, sx * sy];
    sort4_descending(&mut out);
    out
}

/// Schmidt coefficients of a pure-qubit-source network state across the
/// given cut (0 for A|BC, 1 for B|AC, 2 for C|AB), sorted non-increasing.
pub fn itn_cut_coefficients(angles: &SourceAngles, cut: usize) -> [f64; 4] {
    cut_products(angles.a, angles.b, angles.c, cut.min(2))
}

fn validate_coefficients(v: &[f64]) -> Result<()> {
    let sum: f64 = v.iter().map(|x| x * x).sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedCoefficients { sum, tol: 1e-9 });
    }
    if v.windows(2).any(|w| w[0] < w[1] - 1e-12) {
        return Err(Error::UnsortedCoefficients {
            coeffs: v.to_vec(),
        });
    }
    Ok(())
}

/// `(sum_i s_i t_i)^2` for two sorted Schmidt vectors, the shorter padded
/// with zeros. Bounds the squared overlap of any two pure states carrying
/// those coefficients across a common cut.
pub fn bipartite_overlap_bound(target: &[f64], itn: &[f64]) -> Result<f64> {
    validate_coefficients(target)?;
    validate_coefficients(itn)?;
    let dot: f64 = target.iter().zip(itn.iter()).map(|(t, s)| t * s).sum();
    Ok(dot * dot)
}

/// Target Schmidt coefficients for the three cuts, padded to length 4.
fn target_cut_coefficients(target: &PureState) -> Result<[[f64; 4]; 3]> {
    if target.dims().len() != 3 {
        return Err(Error::PartyCount {
            expected: 3,
            found: target.dims().len(),
        });
    }
    if let Some(&dim) = target.dims().iter().find(|&&dim| dim > 4) {
        return Err(Error::BoundTargetTooLarge { dim });
    }
    let mut out = [[0.0; 4]; 3];
    for cut in 0..3 {
        let data = target.schmidt(&[cut])?;
        for (i, &coeff) in data.coefficients.iter().take(4).enumerate() {
            out[cut][i] = coeff.max(0.0);
        }
    }
    Ok(out)
}

fn min_cut_value(t: &[[f64; 4]; 3], a: f64, b: f64, c: f64) -> f64 {
    let mut worst = f64::INFINITY;
    for (cut, coeffs) in t.iter().enumerate() {
        let s = cut_products(a, b, c, cut);
        let dot: f64 = s.iter().zip(coeffs).map(|(x, y)| x * y).sum();
        worst = worst.min(dot * dot);
    }
    worst
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n < 2 {
        return lo;
    }
    lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
}

/// Maximizes, over the source Schmidt angles, the minimum over the three
/// cuts of [`bipartite_overlap_bound`]: a certified upper bound on the
/// squared overlap between `target` and any network state with pure qubit
/// sources.
///
/// A dense grid locates the near-maximal region. The maximum typically sits
/// where two cut surfaces cross, and whole grid lines can tie exactly when
/// one cut binds, so every tied grid maximizer (up to a cap) is refined
/// independently by repeated one-step window re-gridding before taking the
/// best. Ties break toward smaller angles, independent of the evaluation
/// schedule.
pub fn overlap_upper_bound(target: &PureState, cfg: &BoundConfig) -> Result<BoundResult> {
    let t = target_cut_coefficients(target)?;
    let n = cfg.grid.max(2);
    let step0 = QUARTER_PI / ((n - 1) as f64);
    const CANDIDATE_CAP: usize = 128;
    const NEAR_TIE: f64 = 1e-9;

    // Stage 1: dense grid; per slice, keep the near-maximal points.
    let ordered = |a: f64, b: f64, c: f64| !cfg.symmetric || (a >= b && b >= c);
    let slices: Vec<(f64, Vec<[f64; 3]>)> = (0..n)
        .into_par_iter()
        .map(|ia| {
            let a = axis(0.0, QUARTER_PI, n, ia);
            let mut slice_max = f64::NEG_INFINITY;
            let mut points: Vec<(f64, [f64; 3])> = Vec::new();
            for ib in 0..n {
                let b = axis(0.0, QUARTER_PI, n, ib);
                for ic in 0..n {
                    let c = axis(0.0, QUARTER_PI, n, ic);
                    if !ordered(a, b, c) {
                        continue;
                    }
                    let value = min_cut_value(&t, a, b, c);
                    if value > slice_max {
                        slice_max = value;
                        points.retain(|(v, _)| *v >= slice_max - NEAR_TIE);
                    }
                    if value >= slice_max - NEAR_TIE && points.len() < CANDIDATE_CAP {
                        points.push((value, [a, b, c]));
                    }
                }
            }
            (slice_max, points.into_iter().map(|(_, p)| p).collect())
        })
        .collect();

    let global_max = slices
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut candidates: Vec<[f64; 3]> = Vec::new();
    'collect: for (slice_max, points) in &slices {
        if *slice_max < global_max - NEAR_TIE {
            continue;
        }
        for p in points {
            if min_cut_value(&t, p[0], p[1], p[2]) >= global_max - NEAR_TIE {
                candidates.push(*p);
                if candidates.len() >= CANDIDATE_CAP {
                    break 'collect;
                }
            }
        }
    }

    // Stage 2: refine each candidate; the window spans one step of the
    // previous grid, so each round shrinks the step eightfold.
    let refine = |start: [f64; 3]| -> (f64, [f64; 3]) {
        const M: usize = 17;
        let mut center = start;
        let mut step = step0;
        let mut best = (min_cut_value(&t, start[0], start[1], start[2]), start);
        for _ in 0..cfg.refinements {
            let lo: Vec<f64> = center.iter().map(|x| (x - step).max(0.0)).collect();
            let hi: Vec<f64> = center.iter().map(|x| (x + step).min(QUARTER_PI)).collect();
            for ia in 0..M {
                let a = axis(lo[0], hi[0], M, ia);
                for ib in 0..M {
                    let b = axis(lo[1], hi[1], M, ib);
                    for ic in 0..M {
                        let c = axis(lo[2], hi[2], M, ic);
                        if !ordered(a, b, c) {
                            continue;
                        }
                        let value = min_cut_value(&t, a, b, c);
                        if value > best.0 {
                            best = (value, [a, b, c]);
                        }
                    }
                }
            }
            center = best.1;
            step /= 8.0;
        }
        best
    };
    let refined: Vec<(f64, [f64; 3])> = candidates.par_iter().map(|&p| refine(p)).collect();

    let mut best = (global_max, candidates.first().copied().unwrap_or([0.0; 3]));
    for r in refined {
        if r.0 > best.0 {
            best = r;
        }
    }

    let [a, b, c] = best.1;
    let mut cut_values = [0.0; 3];
    for (cut, slot) in cut_values.iter_mut().enumerate() {
        let s = cut_products(a, b, c, cut);
        let dot: f64 = s.iter().zip(&t[cut]).map(|(x, y)| x * y).sum();
        *slot = dot * dot;
    }
    Ok(BoundResult {
        bound: best.0,
        angles: SourceAngles { a, b, c },
        cut_values,
    })
}
