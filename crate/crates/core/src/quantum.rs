//! State representation and the linear-algebra substrate shared by every measure.
//!
//! Basis ordering: the ket `|a_1 a_2 ... a_n>` lives at flat index
//! `a_1 * d_2 * ... * d_n + a_2 * d_3 * ... * d_n + ... + a_n`, i.e. party 0 is
//! the most significant digit. This ordering is also the on-disk ordering of the
//! JSON state and density-matrix files.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::bipartitions::Bipartition;
use crate::error::{Error, Result};

pub use nalgebra::Complex;

/// Double-precision complex amplitude.
pub type C64 = Complex<f64>;

/// Eigenvalues and squared singular values below this are treated as exact zeros.
pub const ZERO_TOL: f64 = 1e-12;

/// Tolerance for normalisation, Hermiticity and trace checks.
pub const STATE_TOL: f64 = 1e-10;

fn check_dims(local_dims: &[usize]) -> Result<usize> {
    if local_dims.is_empty() {
        return Err(Error::InvalidState("no parties".into()));
    }
    if let Some(d) = local_dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidState(format!("local dimension {d} < 2")));
    }
    local_dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidState("total dimension overflows".into()))
}

/// Digits of `index` in the mixed radix given by `dims`, party 0 first.
pub(crate) fn decode_index(mut index: usize, dims: &[usize], digits: &mut [usize]) {
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

pub(crate) fn encode_index<'a>(
    digits: impl IntoIterator<Item = &'a usize>,
    dims: &[usize],
) -> usize {
    digits
        .into_iter()
        .zip(dims)
        .fold(0, |acc, (&a, &d)| acc * d + a)
}

/// A normalised pure state on a finite tensor product of local spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    local_dims: Vec<usize>,
}

impl PureState {
    /// Validates the shape and unit norm (within [`STATE_TOL`]) of the amplitudes.
    pub fn new(amplitudes: Vec<C64>, local_dims: Vec<usize>) -> Result<Self> {
        let dim = check_dims(&local_dims)?;
        if amplitudes.len() != dim {
            return Err(Error::InvalidState(format!(
                "{} amplitudes for total dimension {dim}",
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self {
            amplitudes,
            local_dims,
        })
    }

    /// Scales `amplitudes` to unit norm before validating.
    pub fn normalized(mut amplitudes: Vec<C64>, local_dims: Vec<usize>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes, local_dims)
    }

    /// Real amplitudes, normalised.
    pub fn from_real(amplitudes: &[f64], local_dims: Vec<usize>) -> Result<Self> {
        Self::normalized(
            amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect(),
            local_dims,
        )
    }

    /// Computational basis state `|digits>`.
    pub fn basis(digits: &[usize], local_dims: Vec<usize>) -> Result<Self> {
        let dim = check_dims(&local_dims)?;
        if digits.len() != local_dims.len() || digits.iter().zip(&local_dims).any(|(a, d)| a >= d) {
            return Err(Error::InvalidArgument(
                "basis digits do not fit the local dims".into(),
            ));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[encode_index(digits, &local_dims)] = C64::new(1.0, 0.0);
        Self::new(amplitudes, local_dims)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn n_parties(&self) -> usize {
        self.local_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.local_dims != other.local_dims {
            return Err(Error::InvalidArgument(
                "states have different shapes".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self><self|`.
    pub fn projector(&self) -> DensityMatrix {
        let v = DVector::from_column_slice(&self.amplitudes);
        DensityMatrix {
            entries: &v * v.adjoint(),
            local_dims: self.local_dims.clone(),
        }
    }

    /// `self ⊗ other`, with `other`'s parties appended after this state's parties.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        let local_dims = self
            .local_dims
            .iter()
            .chain(&other.local_dims)
            .copied()
            .collect();
        PureState {
            amplitudes,
            local_dims,
        }
    }

    /// Applies the `d × d` matrix `unitary` to party `party` (identity elsewhere).
    ///
    /// The result is renormalised, so a slightly non-unitary input only
    /// perturbs the state and never breaks the norm invariant.
    pub fn apply_local(&self, party: usize, unitary: &DMatrix<C64>) -> Result<PureState> {
        let d = *self
            .local_dims
            .get(party)
            .ok_or_else(|| Error::InvalidArgument(format!("party {party} out of range")))?;
        if unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::InvalidArgument(format!(
                "operator is {}x{}, party {party} has dimension {d}",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        let inner: usize = self.local_dims[party + 1..].iter().product();
        let outer: usize = self.local_dims[..party].iter().product();
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for o in 0..outer {
            let base = o * d * inner;
            for row in 0..d {
                for col in 0..d {
                    let u = unitary[(row, col)];
                    if u == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..inner {
                        out[base + row * inner + i] += u * self.amplitudes[base + col * inner + i];
                    }
                }
            }
        }
        PureState::normalized(out, self.local_dims.clone())
    }

    /// Relabels parties: party `j` of the result is party `perm[j]` of `self`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.n_parties();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of {n} parties"
            )));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.local_dims[p]).collect();
        let mut digits = vec![0; n];
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            decode_index(i, &self.local_dims, &mut digits);
            let j = encode_index(perm.iter().map(|&p| &digits[p]), &new_dims);
            out[j] = a;
        }
        Ok(PureState {
            amplitudes: out,
            local_dims: new_dims,
        })
    }

    /// Multiplies by the global phase that makes the first non-negligible amplitude
    /// real and positive.
    pub(crate) fn fix_global_phase(mut self) -> Self {
        if let Some(a) = self.amplitudes.iter().find(|a| a.norm() > 1e-12) {
            let phase = a.conj() / a.norm();
            for x in &mut self.amplitudes {
                *x *= phase;
            }
        }
        self
    }
}

/// Trace distance `‖ |a><a| − |b><b| ‖₁ = 2 sqrt(1 − |<a|b>|²)` of two pure states.
pub fn pure_trace_distance(a: &PureState, b: &PureState) -> Result<f64> {
    let overlap = a.inner(b)?.norm_sqr();
    Ok(2.0 * (1.0 - overlap).max(0.0).sqrt())
}

/// Eigenvalues of a reduced density operator, sorted in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Clamps each value into `[0, 1]`, zeroes values below [`ZERO_TOL`] and sorts.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut values: Vec<f64> = values
            .into_iter()
            .map(|v| if v < ZERO_TOL { 0.0 } else { v.min(1.0) })
            .collect();
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument("NaN in spectrum".into()));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("spectrum sums to {total}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of slots (zeros included), i.e. the dimension the spectrum lives in.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(|&v| v > 0.0)
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }
}

/// Spectrum of the reduced state on `part`'s side `S`.
pub fn reduced_spectrum(state: &PureState, part: &Bipartition) -> Result<Spectrum> {
    if part.n() != state.n_parties() {
        return Err(Error::InvalidPartition(format!(
            "bipartition of {} parties applied to a {}-party state",
            part.n(),
            state.n_parties()
        )));
    }
    reduced_spectrum_on(state, part.parties())
}

/// Spectrum of the reduced state on an arbitrary nonempty proper subset of parties.
///
/// Reshapes the amplitudes into a `dim(S) × dim(S̄)` matrix and squares its
/// singular values; the reduced density operator is never formed.
pub fn reduced_spectrum_on(state: &PureState, side: &[usize]) -> Result<Spectrum> {
    let matrix = split_matrix(state, side)?;
    let sv = matrix.singular_values();
    Spectrum::from_values(sv.iter().map(|s| s * s))
}

/// The amplitude tensor reshaped into rows indexed by `side` and columns by its
/// complement, both in increasing party order.
pub(crate) fn split_matrix(state: &PureState, side: &[usize]) -> Result<DMatrix<C64>> {
    let n = state.n_parties();
    let mut in_side = vec![false; n];
    for &p in side {
        if p >= n || in_side[p] {
            return Err(Error::InvalidPartition(format!(
                "bad party list {side:?} for {n} parties"
            )));
        }
        in_side[p] = true;
    }
    if side.is_empty() || side.len() == n {
        return Err(Error::InvalidPartition(
            "side must be a nonempty proper subset".into(),
        ));
    }
    let dims = state.local_dims();
    let mut row_stride = vec![0usize; n];
    let mut col_stride = vec![0usize; n];
    let (mut rs, mut cs) = (1usize, 1usize);
    for p in (0..n).rev() {
        if in_side[p] {
            row_stride[p] = rs;
            rs *= dims[p];
        } else {
            col_stride[p] = cs;
            cs *= dims[p];
        }
    }
    let (rows, cols) = (rs, cs);
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    let mut digits = vec![0usize; n];
    let (mut r, mut c) = (0usize, 0usize);
    for &a in state.amplitudes() {
        m[(r, c)] = a;
        // odometer increment, last party fastest
        for p in (0..n).rev() {
            digits[p] += 1;
            r += row_stride[p];
            c += col_stride[p];
            if digits[p] < dims[p] {
                break;
            }
            r -= row_stride[p] * dims[p];
            c -= col_stride[p] * dims[p];
            digits[p] = 0;
        }
    }
    Ok(m)
}

/// A density operator on a tensor product of local spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    local_dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (within [`STATE_TOL`]).
    pub fn new(entries: DMatrix<C64>, local_dims: Vec<usize>) -> Result<Self> {
        let dim = check_dims(&local_dims)?;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "{}x{} matrix for total dimension {dim}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let asym = entries
            .iter()
            .zip(entries.adjoint().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if asym > STATE_TOL || asym.is_nan() {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {asym:e})"
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let min_eig = hermitian_eigenvalues(&entries)
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self {
            entries,
            local_dims,
        })
    }

    /// `Σ p_i |ψ_i><ψ_i|`; weights must be nonnegative and sum to one.
    pub fn from_ensemble(members: &[(f64, PureState)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
        let dims = first.1.local_dims().to_vec();
        let dim = first.1.dim();
        let mut entries = DMatrix::<C64>::zeros(dim, dim);
        for (p, psi) in members {
            if psi.local_dims() != dims.as_slice() {
                return Err(Error::InvalidArgument(
                    "ensemble members have different shapes".into(),
                ));
            }
            if *p < 0.0 {
                return Err(Error::InvalidArgument(format!("negative weight {p}")));
            }
            entries += psi.projector().entries * C64::new(*p, 0.0);
        }
        Self::new(entries, dims)
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn n_parties(&self) -> usize {
        self.local_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Traces out every party not in `keep`. The result's parties are the kept
/// ones in their original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_parties();
    let mut kept = vec![false; n];
    for &p in keep {
        if p >= n || kept[p] {
            return Err(Error::InvalidArgument(format!(
                "bad keep set {keep:?} for {n} parties"
            )));
        }
        kept[p] = true;
    }
    if keep.is_empty() || keep.len() == n {
        return Err(Error::InvalidArgument(
            "keep must be a nonempty proper subset of parties".into(),
        ));
    }
    let dims = rho.local_dims();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    let traced: Vec<usize> = (0..n).filter(|p| !kept[*p]).collect();
    let keep_dims: Vec<usize> = keep_sorted.iter().map(|&p| dims[p]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&p| dims[p]).collect();
    let out_dim: usize = keep_dims.iter().product();

    let dim = rho.dim();
    let mut digits = vec![0usize; n];
    let mut keep_idx = vec![0usize; dim];
    let mut trace_idx = vec![0usize; dim];
    for i in 0..dim {
        decode_index(i, dims, &mut digits);
        keep_idx[i] = encode_index(keep_sorted.iter().map(|&p| &digits[p]), &keep_dims);
        trace_idx[i] = encode_index(traced.iter().map(|&p| &digits[p]), &traced_dims);
    }
    let mut out = DMatrix::<C64>::zeros(out_dim, out_dim);
    for i in 0..dim {
        for j in 0..dim {
            if trace_idx[i] == trace_idx[j] {
                out[(keep_idx[i], keep_idx[j])] += rho.entries[(i, j)];
            }
        }
    }
    Ok(DensityMatrix {
        entries: out,
        local_dims: keep_dims,
    })
}

/// `‖ρ − σ‖₁`, the sum of absolute eigenvalues of the Hermitian difference.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff = &rho.entries - &sigma.entries;
    Ok(hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum())
}

/// Eigen-decomposition `ρ = Σ λ_k |e_k><e_k|`, keeping `λ_k > ZERO_TOL`, in
/// decreasing weight order.
pub fn spectral_decomposition(rho: &DensityMatrix) -> Result<Vec<(f64, PureState)>> {
    let h = (&rho.entries + rho.entries.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > ZERO_TOL)
        .collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
        .into_iter()
        .map(|k| {
            let v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            let state = PureState::normalized(v, rho.local_dims.clone())?.fix_global_phase();
            Ok((eig.eigenvalues[k], state))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ghz3() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut a = vec![0.0; 8];
        a[0] = s;
        a[7] = s;
        PureState::from_real(&a, vec![2, 2, 2]).unwrap()
    }

    fn w3() -> PureState {
        let mut a = vec![0.0; 8];
        a[1] = 1.0;
        a[2] = 1.0;
        a[4] = 1.0;
        PureState::from_real(&a, vec![2, 2, 2]).unwrap()
    }

    #[test]
    fn rejects_bad_states() {
        assert!(PureState::new(vec![c(1.0); 3], vec![2, 2]).is_err());
        assert!(PureState::new(vec![c(1.0), c(1.0)], vec![2]).is_err());
        assert!(PureState::new(vec![c(1.0)], vec![1]).is_err());
        assert!(PureState::normalized(vec![c(0.0); 4], vec![2, 2]).is_err());
    }

    #[test]
    fn ghz_and_w_marginals() {
        let s = reduced_spectrum_on(&ghz3(), &[0]).unwrap();
        assert_abs_diff_eq!(s.values()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 0.5, epsilon = 1e-12);
        let s = reduced_spectrum_on(&w3(), &[0]).unwrap();
        assert_abs_diff_eq!(s.values()[0], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn product_state_marginal_is_pure_and_shape_stable() {
        let psi = PureState::basis(&[0, 0, 0], vec![2, 2, 2]).unwrap();
        let s = reduced_spectrum_on(&psi, &[1, 2]).unwrap();
        assert_eq!(s.values(), &[1.0, 0.0]);
    }

    #[test]
    fn split_matrix_handles_non_contiguous_sides() {
        // |010> with side {0,2}: row digit (a0,a2) = (0,0), column a1 = 1
        let psi = PureState::basis(&[0, 1, 0], vec![2, 2, 2]).unwrap();
        let m = split_matrix(&psi, &[0, 2]).unwrap();
        assert_eq!(m.shape(), (4, 2));
        assert_eq!(m[(0, 1)], c(1.0));
        // unequal dims: |2,0,1> in dims [3,2,2], side {2}
        let psi = PureState::basis(&[2, 0, 1], vec![3, 2, 2]).unwrap();
        let m = split_matrix(&psi, &[2]).unwrap();
        assert_eq!(m.shape(), (2, 6));
        assert_eq!(m[(1, 4)], c(1.0));
    }

    #[test]
    fn partial_trace_examples() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0], vec![2, 2]).unwrap();
        let r = partial_trace(&bell.projector(), &[0]).unwrap();
        assert_abs_diff_eq!(r.entries()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entries()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-14);

        let r = partial_trace(&w3().projector(), &[0]).unwrap();
        assert_abs_diff_eq!(r.entries()[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entries()[(1, 1)].re, 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-14);

        assert!(partial_trace(&bell.projector(), &[]).is_err());
        assert!(partial_trace(&bell.projector(), &[0, 1]).is_err());
        assert!(partial_trace(&bell.projector(), &[2]).is_err());
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = PureState::normalized(vec![c(0.6), C64::new(0.0, 0.8)], vec![2]).unwrap();
        let b = PureState::from_real(&[1.0, 2.0, 2.0], vec![3]).unwrap();
        let rho_a = DensityMatrix::from_ensemble(&[
            (0.3, a.clone()),
            (0.7, PureState::basis(&[1], vec![2]).unwrap()),
        ])
        .unwrap();
        let rho_b = b.projector();
        let joint =
            DensityMatrix::new(rho_a.entries().kronecker(rho_b.entries()), vec![2, 3]).unwrap();
        let back = partial_trace(&joint, &[0]).unwrap();
        assert_eq!(back.local_dims(), &[2]);
        assert!((back.entries() - rho_a.entries()).camax() < 1e-14);
        let back = partial_trace(&joint, &[1]).unwrap();
        assert_eq!(back.local_dims(), &[3]);
        assert!((back.entries() - rho_b.entries()).camax() < 1e-14);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = PureState::basis(&[0], vec![2]).unwrap();
        let one = PureState::basis(&[1], vec![2]).unwrap();
        let plus = PureState::from_real(&[1.0, 1.0], vec![2]).unwrap();
        assert_abs_diff_eq!(
            trace_distance(&zero.projector(), &zero.projector()).unwrap(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            trace_distance(&zero.projector(), &one.projector()).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            trace_distance(&zero.projector(), &plus.projector()).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pure_trace_distance(&zero, &plus).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        assert!(trace_distance(&zero.projector(), &ghz3().projector()).is_err());
    }

    #[test]
    fn spectral_decomposition_examples() {
        let pure = spectral_decomposition(&ghz3().projector()).unwrap();
        assert_eq!(pure.len(), 1);
        assert_abs_diff_eq!(pure[0].0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            pure[0].1.inner(&ghz3()).unwrap().norm(),
            1.0,
            epsilon = 1e-12
        );

        let mixed = DensityMatrix::new(DMatrix::identity(2, 2) * c(0.5), vec![2]).unwrap();
        let d = spectral_decomposition(&mixed).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|(w, _)| (w - 0.5).abs() < 1e-12));

        let diag = DensityMatrix::from_ensemble(&[
            (0.5, PureState::basis(&[0, 0, 0], vec![2, 2, 2]).unwrap()),
            (0.5, PureState::basis(&[1, 1, 1], vec![2, 2, 2]).unwrap()),
        ])
        .unwrap();
        let d = spectral_decomposition(&diag).unwrap();
        assert_eq!(d.len(), 2);
        for (w, e) in &d {
            assert_abs_diff_eq!(*w, 0.5, epsilon = 1e-12);
            // product eigenstates: a single nonzero amplitude
            assert_eq!(
                e.amplitudes().iter().filter(|a| a.norm() > 1e-12).count(),
                1
            );
        }
    }

    #[test]
    fn density_validation() {
        let not_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(not_herm, vec![2]).is_err());
        let bad_trace = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.6)]);
        assert!(DensityMatrix::new(bad_trace, vec![2]).is_err());
        let negative = DMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(DensityMatrix::new(negative, vec![2]).is_err());
    }

    #[test]
    fn local_ops_and_permutation() {
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let psi = PureState::basis(&[0, 0, 1], vec![2, 2, 2]).unwrap();
        let flipped = psi.apply_local(1, &x).unwrap();
        assert_eq!(
            flipped,
            PureState::basis(&[0, 1, 1], vec![2, 2, 2]).unwrap()
        );

        let psi = PureState::basis(&[2, 0, 1], vec![3, 2, 2]).unwrap();
        let p = psi.permute_parties(&[2, 0, 1]).unwrap();
        assert_eq!(p, PureState::basis(&[1, 2, 0], vec![2, 3, 2]).unwrap());
        assert!(psi.permute_parties(&[0, 0, 1]).is_err());
    }
}
