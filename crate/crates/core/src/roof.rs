//! Upper-bound estimation of convex-roof extensions.
//!
//! Every pure-state decomposition `{p_j, |ψ_j>}` of a density matrix with
//! spectral decomposition `Σ_k λ_k |e_k><e_k|` has the form
//! `√p_j |ψ_j> = Σ_k U_jk √λ_k |e_k>` for some isometry `U` (`m × r`,
//! `U†U = 1`). The search walks over `U` with random two-row rotations, which
//! keep `U` exactly isometric, and accepts a move only if it lowers the
//! ensemble average. The result is always a valid decomposition, so its
//! average is a certified upper bound on the roof; it is never claimed to be
//! the roof itself.

use std::f64::consts::{FRAC_PI_4, TAU};

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartitions::Bipartition;
use crate::error::{Error, Result};
use crate::measures::{alpha_concurrence, galpha_c, AlphaParam, MeasureSpec};
use crate::quantum::{
    reduced_spectrum, spectral_decomposition, DensityMatrix, PureState, C64, ZERO_TOL,
};
use crate::states::{random_isometry, Seed};

/// Iterations without a `tolerance`-sized improvement before a restart stops.
pub const STALL_WINDOW: usize = 200;
/// Iterations between successive shrinkings of the rotation scale.
const SCHEDULE_PERIOD: usize = 100;
const SCHEDULE_FACTOR: f64 = 0.95;
/// Decades spanned by the random part of each rotation angle.
const ANGLE_DECADES: f64 = 4.0;
/// Unnormalised members below this squared norm carry no weight.
const MEMBER_FLOOR: f64 = 1e-14;

/// Pure-state functional whose convex roof is estimated.
#[derive(Debug, Clone, PartialEq)]
pub enum RoofTarget {
    /// GαC of the whole state.
    GAlphaC(AlphaParam),
    /// α-concurrence across one designated cut.
    CutAlphaConcurrence { alpha: AlphaParam, cut: Bipartition },
}

impl RoofTarget {
    /// Maps a measure id onto a roof target; only GαC is supported.
    pub fn from_measure(measure: &MeasureSpec) -> Result<Self> {
        match measure {
            MeasureSpec::GAlphaC(a) => Ok(RoofTarget::GAlphaC(*a)),
            other => Err(Error::Unsupported(format!(
                "convex roof of {other} (supported: galphac and a single-cut alpha-concurrence)"
            ))),
        }
    }

    pub fn evaluate(&self, state: &PureState) -> Result<f64> {
        match self {
            RoofTarget::GAlphaC(a) => Ok(galpha_c(state, *a)?.aggregate()),
            RoofTarget::CutAlphaConcurrence { alpha, cut } => {
                Ok(alpha_concurrence(&reduced_spectrum(state, cut)?, *alpha).max(0.0))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            RoofTarget::GAlphaC(a) => MeasureSpec::GAlphaC(*a).to_string(),
            RoofTarget::CutAlphaConcurrence { alpha, cut } => {
                format!("alphac(alpha={},cut={cut})", alpha.value())
            }
        }
    }
}

/// A pure-state decomposition `{p_i, |ψ_i>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    members: Vec<PureState>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, members: Vec<PureState>) -> Result<Self> {
        if weights.len() != members.len() || weights.is_empty() {
            return Err(Error::InvalidArgument(
                "weights and members must be nonempty and equally long".into(),
            ));
        }
        if weights.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::InvalidArgument(
                "ensemble weights must be positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "ensemble weights sum to {total}"
            )));
        }
        Ok(Self { weights, members })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[PureState] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_i |ψ_i><ψ_i|` as a raw matrix.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let dim = self.members[0].dim();
        let mut out = DMatrix::zeros(dim, dim);
        for (p, psi) in self.weights.iter().zip(&self.members) {
            out += psi.projector().entries() * C64::new(*p, 0.0);
        }
        out
    }

    /// `Σ p_i f(ψ_i)`.
    pub fn average(&self, target: &RoofTarget) -> Result<f64> {
        self.weights
            .iter()
            .zip(&self.members)
            .map(|(p, psi)| Ok(p * target.evaluate(psi)?))
            .sum()
    }
}

/// Builds the ensemble `√p_j |ψ_j> = Σ_k U_jk √λ_k |e_k>` from a spectral
/// decomposition and an isometry `U` with one column per eigenpair.
pub fn decompose_via_isometry(
    spectral: &[(f64, PureState)],
    isometry: &DMatrix<C64>,
) -> Result<Ensemble> {
    let r = spectral.len();
    if r == 0 {
        return Err(Error::InvalidArgument(
            "empty spectral decomposition".into(),
        ));
    }
    if isometry.ncols() != r || isometry.nrows() < r {
        return Err(Error::InvalidArgument(format!(
            "isometry is {}x{}, need m x {r} with m >= {r}",
            isometry.nrows(),
            isometry.ncols()
        )));
    }
    let deviation = (isometry.adjoint() * isometry - DMatrix::<C64>::identity(r, r))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if deviation > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "columns are not orthonormal (deviation {deviation:e})"
        )));
    }
    let scaled = scaled_eigenvectors(spectral);
    let rows = member_vectors(&scaled, isometry);
    ensemble_from_rows(&rows, spectral[0].1.local_dims())
}

/// Columns `√λ_k |e_k>`.
fn scaled_eigenvectors(spectral: &[(f64, PureState)]) -> Vec<Vec<C64>> {
    spectral
        .iter()
        .map(|(l, e)| e.amplitudes().iter().map(|a| a * l.sqrt()).collect())
        .collect()
}

fn member_vectors(scaled: &[Vec<C64>], isometry: &DMatrix<C64>) -> Vec<Vec<C64>> {
    let dim = scaled[0].len();
    (0..isometry.nrows())
        .map(|j| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            for (k, col) in scaled.iter().enumerate() {
                let u = isometry[(j, k)];
                for (x, e) in v.iter_mut().zip(col) {
                    *x += u * e;
                }
            }
            v
        })
        .collect()
}

fn ensemble_from_rows(rows: &[Vec<C64>], local_dims: &[usize]) -> Result<Ensemble> {
    let mut weights = Vec::new();
    let mut members = Vec::new();
    for v in rows {
        let w: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if w > ZERO_TOL {
            weights.push(w);
            members.push(PureState::normalized(v.clone(), local_dims.to_vec())?);
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ensemble::new(weights, members)
}

/// Search settings. `ensemble_size = None` means `min(2·rank, rank²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoofConfig {
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: Seed,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 20,
            max_iterations: 2000,
            tolerance: 1e-8,
            seed: Seed(0),
        }
    }
}

/// Outcome of one local search.
#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub value: f64,
    pub ensemble: Ensemble,
    pub iterations: usize,
    pub converged: bool,
    /// Best value after each iteration (entry 0 is the starting value).
    pub history: Vec<f64>,
}

/// Best decomposition found over all restarts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoofResult {
    pub measure: String,
    pub upper_bound: f64,
    #[serde(serialize_with = "serialize_ensemble")]
    pub best_ensemble: Ensemble,
    pub iterations_used: usize,
    pub converged: bool,
    pub best_restart: usize,
    pub restarts: usize,
    pub ensemble_size: usize,
    pub seed: u64,
}

fn serialize_ensemble<S: serde::Serializer>(
    e: &Ensemble,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Out<'a> {
        weights: &'a [f64],
        members: Vec<crate::io::StateFile>,
    }
    Out {
        weights: &e.weights,
        members: e
            .members
            .iter()
            .map(crate::io::StateFile::from_state)
            .collect(),
    }
    .serialize(s)
}

/// Search state for one restart: unnormalised member vectors and their values.
struct Walker<'a> {
    target: &'a RoofTarget,
    local_dims: &'a [usize],
    rows: Vec<Vec<C64>>,
    weights: Vec<f64>,
    values: Vec<f64>,
    total: f64,
}

impl<'a> Walker<'a> {
    fn new(target: &'a RoofTarget, local_dims: &'a [usize], rows: Vec<Vec<C64>>) -> Result<Self> {
        let mut walker = Walker {
            target,
            local_dims,
            weights: vec![0.0; rows.len()],
            values: vec![0.0; rows.len()],
            total: 0.0,
            rows,
        };
        for j in 0..walker.rows.len() {
            let (w, f) = walker.score(&walker.rows[j])?;
            walker.weights[j] = w;
            walker.values[j] = f;
        }
        walker.total = walker.weights.iter().sum();
        Ok(walker)
    }

    fn score(&self, v: &[C64]) -> Result<(f64, f64)> {
        let w: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if w < MEMBER_FLOOR {
            return Ok((w, 0.0));
        }
        let psi = PureState::normalized(v.to_vec(), self.local_dims.to_vec())?;
        Ok((w, self.target.evaluate(&psi)?))
    }

    fn average(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.values)
            .map(|(w, f)| w * f)
            .sum::<f64>()
            / self.total
    }

    /// Tries the rotation `(v_a, v_b) ← (c v_a − e^{iφ} s v_b, e^{−iφ} s v_a + c v_b)`
    /// and keeps it if the average strictly decreases.
    fn try_rotation(
        &mut self,
        a: usize,
        b: usize,
        angle: f64,
        phase: f64,
        current: f64,
    ) -> Result<Option<f64>> {
        let (s, c) = angle.sin_cos();
        let e = C64::from_polar(1.0, phase);
        let va: Vec<C64> = self.rows[a]
            .iter()
            .zip(&self.rows[b])
            .map(|(x, y)| x * c - e * s * y)
            .collect();
        let vb: Vec<C64> = self.rows[a]
            .iter()
            .zip(&self.rows[b])
            .map(|(x, y)| e.conj() * s * x + y * c)
            .collect();
        let (wa, fa) = self.score(&va)?;
        let (wb, fb) = self.score(&vb)?;
        let saved = (
            std::mem::replace(&mut self.rows[a], va),
            std::mem::replace(&mut self.rows[b], vb),
            (
                self.weights[a],
                self.values[a],
                self.weights[b],
                self.values[b],
            ),
        );
        (
            self.weights[a],
            self.values[a],
            self.weights[b],
            self.values[b],
        ) = (wa, fa, wb, fb);
        let candidate = self.average();
        if candidate < current {
            return Ok(Some(candidate));
        }
        self.rows[a] = saved.0;
        self.rows[b] = saved.1;
        (
            self.weights[a],
            self.values[a],
            self.weights[b],
            self.values[b],
        ) = saved.2;
        Ok(None)
    }
}

fn ensemble_size(rank: usize, cfg: &RoofConfig) -> Result<usize> {
    let m = cfg
        .ensemble_size
        .unwrap_or_else(|| (2 * rank).min(rank * rank));
    if m < rank {
        return Err(Error::InvalidArgument(format!(
            "ensemble size {m} is below the rank {rank}"
        )));
    }
    Ok(m)
}

fn check_config(cfg: &RoofConfig) -> Result<()> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument(
            "at least one restart is needed".into(),
        ));
    }
    if !(cfg.tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {} is negative",
            cfg.tolerance
        )));
    }
    Ok(())
}

/// Runs restart `index` of the search described by `cfg`.
pub fn run_restart(
    rho: &DensityMatrix,
    target: &RoofTarget,
    cfg: &RoofConfig,
    index: usize,
) -> Result<RestartOutcome> {
    check_config(cfg)?;
    let spectral = spectral_decomposition(rho)?;
    let m = ensemble_size(spectral.len(), cfg)?;
    restart(&spectral, rho.local_dims(), target, cfg, m, index)
}

fn restart(
    spectral: &[(f64, PureState)],
    local_dims: &[usize],
    target: &RoofTarget,
    cfg: &RoofConfig,
    m: usize,
    index: usize,
) -> Result<RestartOutcome> {
    let mut rng = cfg.seed.rng(1000 + index as u64);
    let isometry = random_isometry(m, spectral.len(), &mut rng);
    let rows = member_vectors(&scaled_eigenvectors(spectral), &isometry);
    let mut walker = Walker::new(target, local_dims, rows)?;

    let mut current = walker.average();
    let mut history = vec![current];
    let mut anchor = (current, 0usize);
    let mut converged = m < 2 || current <= 0.0;
    let mut iterations = 0;
    while !converged && iterations < cfg.max_iterations {
        let scale = FRAC_PI_4 * SCHEDULE_FACTOR.powi((iterations / SCHEDULE_PERIOD) as i32);
        let magnitude = scale * 10f64.powf(-ANGLE_DECADES * rng.random::<f64>());
        let angle = if rng.random::<bool>() {
            magnitude
        } else {
            -magnitude
        };
        let phase = TAU * rng.random::<f64>();
        let a = rng.random_range(0..m);
        let b = (a + rng.random_range(1..m)) % m;
        iterations += 1;
        if let Some(next) = walker.try_rotation(a, b, angle, phase, current)? {
            current = next;
        }
        history.push(current);
        if current < anchor.0 - cfg.tolerance {
            anchor = (current, iterations);
        } else if iterations - anchor.1 >= STALL_WINDOW {
            converged = true;
        }
        if current <= 0.0 {
            converged = true;
        }
    }

    let ensemble = ensemble_from_rows(&walker.rows, local_dims)?;
    let value = ensemble.average(target)?;
    Ok(RestartOutcome {
        value,
        ensemble,
        iterations,
        converged,
        history,
    })
}

/// Multi-restart search for the smallest ensemble average of `target` over
/// decompositions of `rho`. Deterministic for a fixed configuration.
pub fn estimate_convex_roof(
    rho: &DensityMatrix,
    target: &RoofTarget,
    cfg: &RoofConfig,
) -> Result<RoofResult> {
    check_config(cfg)?;
    if let RoofTarget::CutAlphaConcurrence { cut, .. } = target {
        if cut.n() != rho.n_parties() {
            return Err(Error::InvalidPartition(format!(
                "cut of {} parties for a {}-party state",
                cut.n(),
                rho.n_parties()
            )));
        }
    }
    if let RoofTarget::GAlphaC(_) = target {
        if rho.n_parties() < 3 {
            return Err(Error::NotMultipartite(rho.n_parties()));
        }
    }
    let spectral = spectral_decomposition(rho)?;
    let m = ensemble_size(spectral.len(), cfg)?;
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| restart(&spectral, rho.local_dims(), target, cfg, m, i))
        .collect::<Result<_>>()?;
    // lowest value wins, earliest restart on ties
    let (best_restart, best) = outcomes
        .into_iter()
        .enumerate()
        .reduce(|acc, cur| if cur.1.value < acc.1.value { cur } else { acc })
        .expect("at least one restart");
    Ok(RoofResult {
        measure: target.label(),
        upper_bound: best.value,
        best_ensemble: best.ensemble,
        iterations_used: best.iterations,
        converged: best.converged,
        best_restart,
        restarts: cfg.restarts,
        ensemble_size: m,
        seed: cfg.seed.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, random_pure_with};
    use approx::assert_abs_diff_eq;

    fn alpha() -> AlphaParam {
        AlphaParam::new(0.5).unwrap()
    }

    fn diagonal_ghz_mixture() -> DensityMatrix {
        DensityMatrix::from_ensemble(&[
            (0.5, PureState::basis(&[0, 0, 0], vec![2; 3]).unwrap()),
            (0.5, PureState::basis(&[1, 1, 1], vec![2; 3]).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn identity_isometry_gives_spectral_ensemble() {
        let rho = diagonal_ghz_mixture();
        let spectral = spectral_decomposition(&rho).unwrap();
        let e = decompose_via_isometry(&spectral, &DMatrix::identity(2, 2)).unwrap();
        assert_eq!(e.len(), 2);
        for ((w, psi), (l, eig)) in e.weights().iter().zip(e.members()).zip(&spectral) {
            assert_abs_diff_eq!(*w, *l, epsilon = 1e-12);
            assert_abs_diff_eq!(psi.inner(eig).unwrap().norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_one_isometry_returns_the_state() {
        let psi = ghz(3).unwrap();
        let spectral = spectral_decomposition(&psi.projector()).unwrap();
        let mut rng = Seed(5).rng(0);
        let u = random_isometry(3, 1, &mut rng);
        let e = decompose_via_isometry(&spectral, &u).unwrap();
        for member in e.members() {
            assert_abs_diff_eq!(member.inner(&psi).unwrap().norm(), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(e.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hadamard_rotation_gives_ghz_pair() {
        let rho = diagonal_ghz_mixture();
        let spectral = spectral_decomposition(&rho).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(-h, 0.0),
            ],
        );
        let e = decompose_via_isometry(&spectral, &u).unwrap();
        assert_eq!(e.weights().len(), 2);
        for (w, member) in e.weights().iter().zip(e.members()) {
            assert_abs_diff_eq!(*w, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(
                member
                    .inner(&PureState::basis(&[0, 0, 0], vec![2; 3]).unwrap())
                    .unwrap()
                    .norm(),
                h,
                epsilon = 1e-12
            );
            let g = galpha_c(member, alpha()).unwrap().aggregate();
            assert_abs_diff_eq!(g, 2f64.sqrt() - 1.0, epsilon = 1e-12);
        }
        assert!((e.reconstruct() - rho.entries()).camax() < 1e-12);
    }

    #[test]
    fn rejects_non_isometries() {
        let rho = diagonal_ghz_mixture();
        let spectral = spectral_decomposition(&rho).unwrap();
        let bad = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(decompose_via_isometry(&spectral, &bad).is_err());
        assert!(decompose_via_isometry(&spectral, &DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn ensemble_validation() {
        let psi = ghz(3).unwrap();
        assert!(Ensemble::new(vec![0.5], vec![psi.clone()]).is_err());
        assert!(Ensemble::new(vec![0.0, 1.0], vec![psi.clone(), psi.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0], vec![psi]).is_ok());
    }

    #[test]
    fn unsupported_targets_and_bad_configs() {
        assert!(matches!(
            RoofTarget::from_measure(&MeasureSpec::Gmc),
            Err(Error::Unsupported(_))
        ));
        let rho = diagonal_ghz_mixture();
        let cfg = RoofConfig {
            ensemble_size: Some(1),
            ..RoofConfig::default()
        };
        assert!(estimate_convex_roof(&rho, &RoofTarget::GAlphaC(alpha()), &cfg).is_err());
        let cfg = RoofConfig {
            restarts: 0,
            ..RoofConfig::default()
        };
        assert!(estimate_convex_roof(&rho, &RoofTarget::GAlphaC(alpha()), &cfg).is_err());
    }

    #[test]
    fn history_is_monotone_and_bound_is_sound() {
        let mut rng = Seed(17).rng(0);
        let a = random_pure_with(&[2, 2, 2], &mut rng).unwrap();
        let b = random_pure_with(&[2, 2, 2], &mut rng).unwrap();
        let rho = DensityMatrix::from_ensemble(&[(0.6, a), (0.4, b)]).unwrap();
        let target = RoofTarget::GAlphaC(alpha());
        let cfg = RoofConfig {
            restarts: 1,
            max_iterations: 400,
            ..RoofConfig::default()
        };
        let out = run_restart(&rho, &target, &cfg, 0).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        assert!((out.ensemble.reconstruct() - rho.entries()).camax() < 1e-8);
        assert_abs_diff_eq!(
            out.value,
            out.ensemble.average(&target).unwrap(),
            epsilon = 1e-10
        );
        assert!(out.value <= out.history[0] + 1e-10);
    }

    #[test]
    fn cut_target_on_bell_mixture() {
        // an equal mixture of the four Bell states is the maximally mixed state:
        // the product decomposition gives zero
        let rho =
            DensityMatrix::new(DMatrix::identity(4, 4) * C64::new(0.25, 0.0), vec![2, 2]).unwrap();
        let target = RoofTarget::CutAlphaConcurrence {
            alpha: alpha(),
            cut: Bipartition::new(&[0], 2).unwrap(),
        };
        let r = estimate_convex_roof(&rho, &target, &RoofConfig::default()).unwrap();
        assert!(r.upper_bound <= 1e-3, "{}", r.upper_bound);
    }
}
