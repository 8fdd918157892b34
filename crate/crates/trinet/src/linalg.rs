//! Dense complex linear algebra over multipartite quantum states.
//!
//! The three value types ([`DensityState`], [`PureState`], [`UnitaryOp`])
//! validate their defining invariants on construction and are immutable
//! afterwards, so every operation below is a pure function. Subsystems are
//! indexed row-major: for `dims = [d0, d1, ..]` the flat basis index of the
//! tuple `(j0, j1, ..)` is `j0*d1*d2*.. + j1*d2*.. + ..`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Elementwise Hermiticity tolerance for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Trace-one tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Numerical positivity: eigenvalues above `-POSITIVITY_TOL` are accepted.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Norm tolerance for pure-state amplitude vectors.
pub const PURE_NORM_TOL: f64 = 1e-12;
/// Elementwise tolerance on `UU† - 1` for unitaries.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Default relative eigenvalue threshold for numerical ranks.
pub const RANK_REL_TOL: f64 = 1e-8;
/// Hard cap on the total Hilbert-space dimension.
pub const MAX_TOTAL_DIM: usize = 4096;

fn check_dims(dims: &[usize], size: usize) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::EmptyDims);
    }
    if dims.contains(&0) {
        return Err(Error::NonPositiveDim {
            dims: dims.to_vec(),
        });
    }
    let product: usize = dims.iter().product();
    if product > MAX_TOTAL_DIM {
        return Err(Error::TotalDimTooLarge {
            size: product,
            max: MAX_TOTAL_DIM,
        });
    }
    if product != size {
        return Err(Error::DimsProductMismatch {
            dims: dims.to_vec(),
            product,
            size,
        });
    }
    Ok(())
}

/// Row-major strides for the given subsystem dimensions.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn digits(mut flat: usize, dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for (i, &s) in strides.iter().enumerate() {
        out[i] = flat / s;
        flat %= s;
    }
    out
}

/// Gather map realizing a subsystem permutation on flat indices.
///
/// `perm[i]` names the input subsystem that ends up at output position `i`;
/// the output amplitude at flat index `m` is the input amplitude at
/// `map[m]`.
pub fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidPermutation {
            perm: perm.to_vec(),
            count: n,
        });
    }
    let old_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    let total: usize = dims.iter().product();
    let mut map = vec![0usize; total];
    for (m, slot) in map.iter_mut().enumerate() {
        let m_digits = digits(m, &new_dims, &new_strides);
        *slot = m_digits
            .iter()
            .zip(perm)
            .map(|(&digit, &p)| digit * old_strides[p])
            .sum();
    }
    Ok(map)
}

fn validate_subset(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateSubsystem { index: w[0] });
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
        return Err(Error::SubsystemOutOfRange { index: bad, count: n });
    }
    Ok(sorted)
}

/// Flat-index offsets of a subsystem subset within the full index space.
///
/// Returns `(sub_dims, offsets)` where `offsets[k]` is the contribution of
/// the subset's `k`-th joint basis state to the full flat index.
fn subset_offsets(dims: &[usize], subset: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let full_strides = strides(dims);
    let sub_dims: Vec<usize> = subset.iter().map(|&i| dims[i]).collect();
    let sub_strides = strides(&sub_dims);
    let sub_total: usize = sub_dims.iter().product();
    let offsets = (0..sub_total)
        .map(|k| {
            digits(k, &sub_dims, &sub_strides)
                .iter()
                .zip(subset)
                .map(|(&digit, &i)| digit * full_strides[i])
                .sum()
        })
        .collect();
    (sub_dims, offsets)
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
///
/// Cyclic Jacobi iteration. Chosen over the library tridiagonalization
/// solver, which returns NaN on some exactly-sparse projectors in scope
/// here.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    let scale: f64 = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b <= tol {
                    continue;
                }
                // Diagonalize the 2x2 Hermitian block [[alpha, beta], [conj(beta), gamma]]
                // via the phase rotation diag(1, e^{-i phi}) followed by the real
                // Givens rotation built from the explicit top eigenvector.
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let phase = beta / C64::new(b, 0.0);
                let delta = 0.5 * (alpha - gamma);
                let r = (delta * delta + b * b).sqrt();
                let norm = (b * b + (r - delta) * (r - delta)).sqrt();
                let (c, s) = if norm > 0.0 {
                    (b / norm, (r - delta) / norm)
                } else {
                    (1.0, 0.0)
                };
                let cs = C64::new(c, 0.0);
                let s_col = C64::new(s, 0.0) * phase.conj();
                // columns: col_p' = c col_p + s e^{-i phi} col_q; col_q' = -s col_p + c e^{-i phi} col_q
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = cs * aip + s_col * aiq;
                    a[(i, q)] = -C64::new(s, 0.0) * aip + cs * phase.conj() * aiq;
                }
                // rows: row_p' = c row_p + s e^{+i phi} row_q; row_q' = -s row_p + c e^{+i phi} row_q
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = cs * apj + C64::new(s, 0.0) * phase * aqj;
                    a[(q, j)] = -C64::new(s, 0.0) * apj + cs * phase * aqj;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    vals
}

fn max_abs_diff_from_adjoint(m: &DMatrix<C64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// DensityState
// ---------------------------------------------------------------------------

/// A mixed multipartite state: Hermitian, unit-trace, positive semidefinite
/// matrix together with the ordered subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: DMatrix<C64>,
    dims: Vec<usize>,
}

impl DensityState {
    /// Validates all type invariants: square shape, dims product, Hermiticity
    /// within 1e-10, unit trace within 1e-10, min eigenvalue >= -1e-9.
    pub fn new(matrix: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        check_dims(&dims, matrix.nrows())?;
        let deviation = max_abs_diff_from_adjoint(&matrix);
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tol: HERMITICITY_TOL,
            });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace,
                tol: TRACE_TOL,
            });
        }
        let min_eigenvalue = hermitian_eigenvalues(&matrix)
            .last()
            .copied()
            .unwrap_or(f64::INFINITY);
        if min_eigenvalue < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue,
                tol: POSITIVITY_TOL,
            });
        }
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        let m = DMatrix::identity(total, total) * C64::new(1.0 / total as f64, 0.0);
        Self::new(m, dims)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reinterprets the subsystem grouping without touching the data.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.total_dim())?;
        Ok(Self {
            matrix: self.matrix.clone(),
            dims,
        })
    }

    /// Kronecker composition; output dims are the concatenation.
    pub fn tensor_product(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        check_dims(&dims, self.total_dim() * other.total_dim())?;
        Ok(Self {
            matrix: self.matrix.kronecker(&other.matrix),
            dims,
        })
    }

    /// Traces out every subsystem not in `keep`; kept subsystems stay in
    /// increasing index order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let keep = validate_subset(keep, n)?;
        let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        if traced.is_empty() {
            return Ok(self.clone());
        }
        let (keep_dims, keep_offsets) = subset_offsets(&self.dims, &keep);
        let (_, traced_offsets) = subset_offsets(&self.dims, &traced);
        let size: usize = keep_dims.iter().product();
        let mut out = DMatrix::<C64>::zeros(size, size);
        for (r, &row_off) in keep_offsets.iter().enumerate() {
            for (c, &col_off) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &traced_offsets {
                    acc += self.matrix[(row_off + t, col_off + t)];
                }
                out[(r, c)] = acc;
            }
        }
        Self::new(out, keep_dims)
    }

    /// Reorders subsystems; output subsystem `i` is input subsystem `perm[i]`.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let map = permutation_map(&self.dims, perm)?;
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let total = self.total_dim();
        let mut out = DMatrix::<C64>::zeros(total, total);
        for r in 0..total {
            for c in 0..total {
                out[(r, c)] = self.matrix[(map[r], map[c])];
            }
        }
        Ok(Self {
            matrix: out,
            dims: new_dims,
        })
    }

    /// Von Neumann entropy in bits, with eigenvalues in `[-1e-9, 0)` clamped
    /// to zero. Eigenvalues below `-1e-9` signal an invalid state.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let mut entropy = 0.0;
        for lambda in hermitian_eigenvalues(&self.matrix) {
            if lambda < -POSITIVITY_TOL {
                return Err(Error::InvalidEigenvalue {
                    value: lambda,
                    tol: POSITIVITY_TOL,
                });
            }
            if lambda > 0.0 {
                entropy -= lambda * lambda.log2();
            }
        }
        Ok(entropy)
    }

    /// Number of eigenvalues above `rel_tol` times the largest one.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let vals = hermitian_eigenvalues(&self.matrix);
        let largest = vals.first().copied().unwrap_or(0.0).max(0.0);
        if largest == 0.0 {
            return 0;
        }
        vals.iter().filter(|&&v| v > rel_tol * largest).count()
    }

    /// Peres-Horodecki test: true iff the partial transpose over the block
    /// complementary to `left` has min eigenvalue >= -1e-9.
    pub fn ppt_check(&self, left: &[usize]) -> Result<bool> {
        let n = self.dims.len();
        let left = validate_subset(left, n)?;
        if left.len() == n {
            return Err(Error::DegenerateCut);
        }
        let right: Vec<usize> = (0..n).filter(|i| !left.contains(i)).collect();
        let pt = self.partial_transpose(&right)?;
        let min = hermitian_eigenvalues(&pt).last().copied().unwrap_or(0.0);
        Ok(min >= -POSITIVITY_TOL)
    }

    /// Transposes the indices of the given subsystems.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<DMatrix<C64>> {
        let n = self.dims.len();
        let subset = validate_subset(subsystems, n)?;
        let (_, offsets) = subset_offsets(&self.dims, &subset);
        let rest: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
        let rest_offsets = if rest.is_empty() {
            vec![0usize]
        } else {
            subset_offsets(&self.dims, &rest).1
        };
        let total = self.total_dim();
        let mut out = DMatrix::<C64>::zeros(total, total);
        for &r_rest in &rest_offsets {
            for &c_rest in &rest_offsets {
                for &r_sub in &offsets {
                    for &c_sub in &offsets {
                        out[(r_rest + r_sub, c_rest + c_sub)] =
                            self.matrix[(r_rest + c_sub, c_rest + r_sub)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// <psi| rho |psi>.
    pub fn expectation_with(&self, psi: &PureState) -> Result<f64> {
        if psi.total_dim() != self.total_dim() {
            return Err(Error::DimensionMismatch {
                left: psi.total_dim(),
                right: self.total_dim(),
            });
        }
        let v = psi.amplitudes();
        Ok((v.adjoint() * &self.matrix * v)[(0, 0)].re)
    }
}

// ---------------------------------------------------------------------------
// PureState
// ---------------------------------------------------------------------------

/// A normalized amplitude vector with ordered subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Validates the unit norm (within 1e-12) and the dims product.
    pub fn new(amplitudes: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: PURE_NORM_TOL,
            });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalizes a nonzero vector and wraps it.
    pub fn normalized(amplitudes: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-14 {
            return Err(Error::ZeroVector);
        }
        Self::new(amplitudes / C64::new(norm, 0.0), dims)
    }

    /// The computational basis state with the given digit per subsystem.
    pub fn computational(dims: Vec<usize>, digits_per_subsystem: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        let s = strides(&dims);
        if digits_per_subsystem.len() != dims.len()
            || digits_per_subsystem.iter().zip(&dims).any(|(&j, &d)| j >= d)
        {
            return Err(Error::SubsystemOutOfRange {
                index: digits_per_subsystem.len(),
                count: dims.len(),
            });
        }
        let flat: usize = digits_per_subsystem.iter().zip(&s).map(|(&j, &st)| j * st).sum();
        let mut amp = DVector::zeros(total);
        amp[flat] = C64::new(1.0, 0.0);
        Self::new(amp, dims)
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.total_dim())?;
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }

    /// |psi><psi| as a [`DensityState`].
    pub fn to_density(&self) -> DensityState {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityState {
            matrix: m,
            dims: self.dims.clone(),
        }
    }

    pub fn tensor_product(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        check_dims(&dims, self.total_dim() * other.total_dim())?;
        Ok(Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            dims,
        })
    }

    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let map = permutation_map(&self.dims, perm)?;
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let amp = DVector::from_fn(self.total_dim(), |m, _| self.amplitudes[map[m]]);
        Ok(Self {
            amplitudes: amp,
            dims: new_dims,
        })
    }

    /// Inner product <self|other>. Requires equal total dimension.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.total_dim() != other.total_dim() {
            return Err(Error::DimensionMismatch {
                left: self.total_dim(),
                right: other.total_dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Reduced state on the given subsystems.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityState> {
        self.to_density().partial_trace(keep)
    }

    /// Schmidt decomposition across the bipartition `left` vs the rest.
    ///
    /// Coefficients come back sorted non-increasing, including zeros, with
    /// orthonormal bases such that `sum_i c_i |l_i>|r_i>` (subsystems ordered
    /// `[left..., rest...]`) reconstructs the permuted input.
    pub fn schmidt(&self, left: &[usize]) -> Result<SchmidtData> {
        let n = self.dims.len();
        let left = validate_subset(left, n)?;
        if left.len() == n {
            return Err(Error::DegenerateCut);
        }
        let right: Vec<usize> = (0..n).filter(|i| !left.contains(i)).collect();
        let perm: Vec<usize> = left.iter().chain(right.iter()).copied().collect();
        let permuted = self.permute_subsystems(&perm)?;
        let l_dim: usize = left.iter().map(|&i| self.dims[i]).product();
        let r_dim: usize = right.iter().map(|&i| self.dims[i]).product();
        let m = DMatrix::<C64>::from_fn(l_dim, r_dim, |l, r| permuted.amplitudes[l * r_dim + r]);
        let svd = m.svd(true, true);
        let u = svd.u.expect("SVD with u requested");
        let v_t = svd.v_t.expect("SVD with v_t requested");
        let k = svd.singular_values.len();
        let coefficients: Vec<f64> = svd.singular_values.iter().cloned().collect();
        let left_basis = (0..k).map(|i| u.column(i).clone_owned()).collect();
        let right_basis = (0..k).map(|i| v_t.row(i).transpose()).collect();
        Ok(SchmidtData {
            coefficients,
            left_basis,
            right_basis,
        })
    }
}

/// Schmidt data for one bipartition of a pure state.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Non-increasing, non-negative, squares summing to 1.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<DVector<C64>>,
    pub right_basis: Vec<DVector<C64>>,
}

impl SchmidtData {
    /// Number of coefficients above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let largest = self.coefficients.first().copied().unwrap_or(0.0);
        if largest <= 0.0 {
            return 0;
        }
        self.coefficients
            .iter()
            .filter(|&&c| c > rel_tol * largest)
            .count()
    }
}

// ---------------------------------------------------------------------------
// UnitaryOp
// ---------------------------------------------------------------------------

/// A square complex matrix satisfying `UU† = 1` within 1e-10 elementwise.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: DMatrix<C64>,
}

impl UnitaryOp {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let product = &matrix * matrix.adjoint();
        let identity = DMatrix::<C64>::identity(matrix.nrows(), matrix.ncols());
        let deviation = (product - identity).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tol: UNITARITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tensor_product(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// U |psi>.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if self.dim() != psi.total_dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.total_dim(),
            });
        }
        Ok(PureState {
            amplitudes: &self.matrix * psi.amplitudes(),
            dims: psi.dims.to_vec(),
        })
    }

    /// U rho U†.
    pub fn conjugate(&self, rho: &DensityState) -> Result<DensityState> {
        if self.dim() != rho.total_dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rho.total_dim(),
            });
        }
        Ok(DensityState {
            matrix: &self.matrix * rho.matrix() * self.matrix.adjoint(),
            dims: rho.dims.to_vec(),
        })
    }
}
