//! Entanglement measure kernels.
//!
//! Spectrum-level kernels (α-concurrence, q-concurrence, concurrence) are
//! evaluated per cut; the state-level measures aggregate them over every
//! canonical bipartition, either by geometric mean (GαC, GqC) or by minimum
//! (GMC, GGM). The three-qubit concurrence fill is the odd one out and is
//! built from the one-vs-rest concurrences only.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bipartitions::{cardinality, class_weight, enumerate_bipartitions, Bipartition};
use crate::error::{Error, Result};
use crate::quantum::{reduced_spectrum, PureState, Spectrum, ZERO_TOL};

/// Cut count above which per-cut spectra are computed on the rayon pool.
const PARALLEL_CUTS: usize = 32;

/// The α of the α-concurrence, `0 ≤ α ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {value} is outside [0, 1/2]"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The q of the q-concurrence, `q ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam(f64);

impl QParam {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 2.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "q = {value} must be at least 2"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `Tr ρ^α − 1` over the nonzero part of the spectrum.
///
/// At `α = 0` this is `rank − 1`, counting only values above [`ZERO_TOL`].
pub fn alpha_concurrence(spec: &Spectrum, alpha: AlphaParam) -> f64 {
    spec.nonzero().map(|p| p.powf(alpha.0)).sum::<f64>() - 1.0
}

/// `1 − Tr ρ^q`.
pub fn q_concurrence(spec: &Spectrum, q: QParam) -> f64 {
    1.0 - spec.nonzero().map(|p| p.powf(q.0)).sum::<f64>()
}

fn purity(spec: &Spectrum) -> f64 {
    spec.nonzero().map(|p| p * p).sum()
}

fn is_pure(spec: &Spectrum) -> bool {
    spec.nonzero().nth(1).is_none()
}

/// `sqrt(2 (1 − Tr ρ²))`.
pub fn concurrence(spec: &Spectrum) -> f64 {
    if is_pure(spec) {
        return 0.0;
    }
    (2.0 * (1.0 - purity(spec))).max(0.0).sqrt()
}

/// `sqrt(d/(d−1) (1 − Tr ρ²))` with `d` the number of spectrum slots, i.e.
/// concurrence rescaled so that a maximally entangled cut of any size scores 1.
/// Equal to [`concurrence`] on qubit cuts.
pub fn normalized_concurrence(spec: &Spectrum) -> f64 {
    let d = spec.len() as f64;
    if is_pure(spec) {
        return 0.0;
    }
    (d / (d - 1.0) * (1.0 - purity(spec))).max(0.0).sqrt()
}

/// Largest α-concurrence a cut of minimal dimension `d` can carry: `d^(1−α) − 1`.
pub fn max_alpha_concurrence(d: usize, alpha: AlphaParam) -> f64 {
    (d as f64).powf(1.0 - alpha.0) - 1.0
}

/// Geometric mean in log space; zero as soon as any value is at or below [`ZERO_TOL`].
pub fn geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|&v| v <= ZERO_TOL) {
        return 0.0;
    }
    let log_sum: f64 = values.iter().map(|v| v.ln()).sum();
    (log_sum / values.len() as f64).exp()
}

/// A measure together with its parameter, as it appears in report headers:
/// `galphac(alpha=0.5)`, `gqc(q=3)`, `gmc`, `ggm`, `fill`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureSpec {
    GAlphaC(AlphaParam),
    GqC(QParam),
    Gmc,
    Ggm,
    Fill,
}

impl MeasureSpec {
    pub fn id(&self) -> &'static str {
        match self {
            MeasureSpec::GAlphaC(_) => "galphac",
            MeasureSpec::GqC(_) => "gqc",
            MeasureSpec::Gmc => "gmc",
            MeasureSpec::Ggm => "ggm",
            MeasureSpec::Fill => "fill",
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match self {
            MeasureSpec::GAlphaC(a) => Some(a.value()),
            MeasureSpec::GqC(q) => Some(q.value()),
            _ => None,
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            MeasureSpec::GAlphaC(_) => "(prod_cuts (Tr rho_S^alpha - 1))^(1/c)",
            MeasureSpec::GqC(_) => "(prod_cuts (1 - Tr rho_S^q))^(1/c)",
            MeasureSpec::Gmc => "min_cuts sqrt(d/(d-1) (1 - Tr rho_S^2)), d = min(dim S, dim S')",
            MeasureSpec::Ggm => "min_cuts (1 - lambda_max(rho_S))",
            MeasureSpec::Fill => {
                "[16/3 Q (Q-x1)(Q-x2)(Q-x3)]^(1/4), x_k = 2(1 - Tr rho_k^2), Q = (x1+x2+x3)/2"
            }
        }
    }

    /// Parses either a full id (`gqc(q=3)`) or a bare id, in which case the
    /// supplied defaults fill in the parameter.
    pub fn parse_with_defaults(text: &str, alpha: f64, q: f64) -> Result<Self> {
        let text = text.trim();
        let (id, param) = match text.split_once('(') {
            Some((id, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {text:?}")))?;
                let (key, value) = inner
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value in {text:?}")))?;
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number in {text:?}")))?;
                (id.trim(), Some((key.trim(), value)))
            }
            None => (text, None),
        };
        let pick = |expected: &str, default: f64| -> Result<f64> {
            match param {
                None => Ok(default),
                Some((k, v)) if k == expected => Ok(v),
                Some((k, _)) => Err(Error::Parse(format!("{id} takes {expected}=, not {k}="))),
            }
        };
        let no_param = |spec: MeasureSpec| -> Result<MeasureSpec> {
            match param {
                None => Ok(spec),
                Some(_) => Err(Error::Parse(format!("{id} takes no parameter"))),
            }
        };
        match id.to_ascii_lowercase().as_str() {
            "galphac" => Ok(MeasureSpec::GAlphaC(AlphaParam::new(pick(
                "alpha", alpha,
            )?)?)),
            "gqc" => Ok(MeasureSpec::GqC(QParam::new(pick("q", q)?)?)),
            "gmc" => no_param(MeasureSpec::Gmc),
            "ggm" => no_param(MeasureSpec::Ggm),
            "fill" => no_param(MeasureSpec::Fill),
            other => Err(Error::Parse(format!("unknown measure {other:?}"))),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::GAlphaC(a) => write!(f, "galphac(alpha={})", a.value()),
            MeasureSpec::GqC(q) => write!(f, "gqc(q={})", q.value()),
            other => f.write_str(other.id()),
        }
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;

    /// Bare `galphac` / `gqc` default to `alpha = 0.5` / `q = 3`.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_defaults(s, 0.5, 3.0)
    }
}

impl Serialize for MeasureSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Value of a measure's kernel on one cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutValue {
    pub cut: Bipartition,
    pub value: f64,
}

/// Per-cut values and the aggregate of one multipartite measure on one state.
#[derive(Debug, Clone, PartialEq)]
pub struct GmeReport {
    measure: MeasureSpec,
    per_cut: Vec<CutValue>,
    aggregate: f64,
    product: Option<f64>,
    upper_limit: f64,
}

impl GmeReport {
    pub fn measure(&self) -> MeasureSpec {
        self.measure
    }

    pub fn per_cut(&self) -> &[CutValue] {
        &self.per_cut
    }

    pub fn aggregate(&self) -> f64 {
        self.aggregate
    }

    /// Product of the per-cut values, recorded for the geometric-mean measures.
    pub fn product(&self) -> Option<f64> {
        self.product
    }

    /// Largest value the measure can take on a state of this shape.
    pub fn upper_limit(&self) -> f64 {
        self.upper_limit
    }
}

impl Serialize for GmeReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cut {
            cut: String,
            value: f64,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            measure: String,
            measure_id: &'a str,
            parameter: Option<f64>,
            formula: &'a str,
            per_cut: Vec<Cut>,
            aggregate: f64,
            product: Option<f64>,
            upper_limit: f64,
        }
        Out {
            measure: self.measure.to_string(),
            measure_id: self.measure.id(),
            parameter: self.measure.parameter(),
            formula: self.measure.formula(),
            per_cut: self
                .per_cut
                .iter()
                .map(|c| Cut {
                    cut: c.cut.to_string(),
                    value: c.value,
                })
                .collect(),
            aggregate: self.aggregate,
            product: self.product,
            upper_limit: self.upper_limit,
        }
        .serialize(serializer)
    }
}

/// Reduced spectra of a state on every canonical cut, computed once and shared
/// by all measures.
#[derive(Debug, Clone)]
pub struct CutSpectra {
    local_dims: Vec<usize>,
    cuts: Vec<(Bipartition, Spectrum)>,
}

impl CutSpectra {
    pub fn compute(state: &PureState) -> Result<Self> {
        let set = enumerate_bipartitions(state.n_parties())?;
        let members = set.members();
        let spectra: Vec<Spectrum> = if members.len() >= PARALLEL_CUTS {
            members
                .par_iter()
                .map(|b| reduced_spectrum(state, b))
                .collect::<Result<_>>()?
        } else {
            members
                .iter()
                .map(|b| reduced_spectrum(state, b))
                .collect::<Result<_>>()?
        };
        Ok(Self {
            local_dims: state.local_dims().to_vec(),
            cuts: members.iter().cloned().zip(spectra).collect(),
        })
    }

    pub fn cuts(&self) -> &[(Bipartition, Spectrum)] {
        &self.cuts
    }

    pub fn n_parties(&self) -> usize {
        self.local_dims.len()
    }

    fn require_multipartite(&self) -> Result<()> {
        if self.n_parties() < 3 {
            return Err(Error::NotMultipartite(self.n_parties()));
        }
        Ok(())
    }

    fn per_cut(&self, kernel: impl Fn(&Spectrum) -> f64) -> Vec<CutValue> {
        self.cuts
            .iter()
            .map(|(cut, spec)| {
                let v = kernel(spec);
                CutValue {
                    cut: cut.clone(),
                    value: if v <= ZERO_TOL { 0.0 } else { v },
                }
            })
            .collect()
    }

    fn geometric_report(
        &self,
        measure: MeasureSpec,
        per_cut: Vec<CutValue>,
        limit: impl Fn(usize) -> f64,
    ) -> GmeReport {
        let values: Vec<f64> = per_cut.iter().map(|c| c.value).collect();
        let limits: Vec<f64> = self
            .cuts
            .iter()
            .map(|(b, _)| limit(b.min_dim(&self.local_dims)))
            .collect();
        GmeReport {
            measure,
            aggregate: geometric_mean(&values),
            product: Some(values.iter().product()),
            upper_limit: geometric_mean(&limits),
            per_cut,
        }
    }

    fn min_report(
        &self,
        measure: MeasureSpec,
        per_cut: Vec<CutValue>,
        limit: impl Fn(usize) -> f64,
    ) -> GmeReport {
        let aggregate = per_cut
            .iter()
            .map(|c| c.value)
            .fold(f64::INFINITY, f64::min);
        let upper_limit = self
            .cuts
            .iter()
            .map(|(b, _)| limit(b.min_dim(&self.local_dims)))
            .fold(f64::INFINITY, f64::min);
        GmeReport {
            measure,
            per_cut,
            aggregate,
            product: None,
            upper_limit,
        }
    }

    pub fn galpha_c(&self, alpha: AlphaParam) -> Result<GmeReport> {
        self.require_multipartite()?;
        let per_cut = self.per_cut(|s| alpha_concurrence(s, alpha));
        Ok(
            self.geometric_report(MeasureSpec::GAlphaC(alpha), per_cut, |d| {
                max_alpha_concurrence(d, alpha)
            }),
        )
    }

    pub fn gqc(&self, q: QParam) -> Result<GmeReport> {
        self.require_multipartite()?;
        let per_cut = self.per_cut(|s| q_concurrence(s, q));
        Ok(self.geometric_report(MeasureSpec::GqC(q), per_cut, |d| {
            1.0 - (d as f64).powf(1.0 - q.value())
        }))
    }

    pub fn gmc(&self) -> Result<GmeReport> {
        self.require_multipartite()?;
        let per_cut = self.per_cut(normalized_concurrence);
        Ok(self.min_report(MeasureSpec::Gmc, per_cut, |_| 1.0))
    }

    pub fn ggm(&self) -> Result<GmeReport> {
        self.require_multipartite()?;
        let per_cut = self.per_cut(|s| 1.0 - s.largest());
        Ok(self.min_report(MeasureSpec::Ggm, per_cut, |d| 1.0 - 1.0 / d as f64))
    }

    /// Concurrence fill; per-cut entries are the squared one-vs-rest concurrences.
    pub fn fill(&self) -> Result<GmeReport> {
        if self.local_dims != [2, 2, 2] {
            return Err(Error::InvalidArgument(format!(
                "concurrence fill needs three qubits, got local dims {:?}",
                self.local_dims
            )));
        }
        let per_cut = self.per_cut(|s| concurrence(s).powi(2));
        let x: Vec<f64> = per_cut.iter().map(|c| c.value).collect();
        Ok(GmeReport {
            measure: MeasureSpec::Fill,
            aggregate: fill_from_sides(x[0], x[1], x[2]),
            per_cut,
            product: None,
            upper_limit: 1.0,
        })
    }

    pub fn report(&self, measure: &MeasureSpec) -> Result<GmeReport> {
        match *measure {
            MeasureSpec::GAlphaC(a) => self.galpha_c(a),
            MeasureSpec::GqC(q) => self.gqc(q),
            MeasureSpec::Gmc => self.gmc(),
            MeasureSpec::Ggm => self.ggm(),
            MeasureSpec::Fill => self.fill(),
        }
    }
}

/// Heron-type area of the concurrence triangle with squared concurrences as sides.
fn fill_from_sides(x1: f64, x2: f64, x3: f64) -> f64 {
    let q = (x1 + x2 + x3) / 2.0;
    let radicand = 16.0 / 3.0 * q * (q - x1) * (q - x2) * (q - x3);
    radicand.max(0.0).powf(0.25)
}

pub fn galpha_c(state: &PureState, alpha: AlphaParam) -> Result<GmeReport> {
    require_multipartite(state)?;
    CutSpectra::compute(state)?.galpha_c(alpha)
}

pub fn gqc(state: &PureState, q: QParam) -> Result<GmeReport> {
    require_multipartite(state)?;
    CutSpectra::compute(state)?.gqc(q)
}

pub fn gmc(state: &PureState) -> Result<GmeReport> {
    require_multipartite(state)?;
    CutSpectra::compute(state)?.gmc()
}

pub fn ggm(state: &PureState) -> Result<GmeReport> {
    require_multipartite(state)?;
    CutSpectra::compute(state)?.ggm()
}

pub fn concurrence_fill(state: &PureState) -> Result<f64> {
    if state.local_dims() != [2, 2, 2] {
        return Err(Error::InvalidArgument(format!(
            "concurrence fill needs three qubits, got local dims {:?}",
            state.local_dims()
        )));
    }
    Ok(CutSpectra::compute(state)?.fill()?.aggregate())
}

/// Evaluates any supported measure on a pure state.
pub fn evaluate(state: &PureState, measure: &MeasureSpec) -> Result<GmeReport> {
    require_multipartite(state)?;
    CutSpectra::compute(state)?.report(measure)
}

fn require_multipartite(state: &PureState) -> Result<()> {
    if state.n_parties() < 3 {
        return Err(Error::NotMultipartite(state.n_parties()));
    }
    Ok(())
}

/// GαC of the n-qubit GHZ state: every cut has spectrum `{1/2, 1/2}`.
pub fn ghz_alpha_c_analytic(n: usize, alpha: AlphaParam) -> Result<f64> {
    if n < 3 {
        return Err(Error::NotMultipartite(n));
    }
    Ok(2f64.powf(1.0 - alpha.value()) - 1.0)
}

/// α-concurrence of the n-qubit W state across a k-vs-rest cut.
pub fn w_cut_alpha_concurrence(n: usize, k: usize, alpha: AlphaParam) -> f64 {
    let a = alpha.value();
    let (n, k) = (n as f64, k as f64);
    (k / n).powf(a) + ((n - k) / n).powf(a) - 1.0
}

/// GαC of the n-qubit W state from its cut classes, accumulated in log space.
pub fn w_alpha_c_analytic(n: usize, alpha: AlphaParam) -> Result<f64> {
    if n < 3 {
        return Err(Error::NotMultipartite(n));
    }
    let c = cardinality(n)? as f64;
    let mut log_sum = 0.0;
    for k in 1..=n / 2 {
        let value = if 2 * k == n {
            2f64.powf(1.0 - alpha.value()) - 1.0
        } else {
            w_cut_alpha_concurrence(n, k, alpha)
        };
        if value <= ZERO_TOL {
            return Ok(0.0);
        }
        log_sum += class_weight(n, k) * value.ln();
    }
    Ok((log_sum / c).exp())
}

/// Upper bound `ε^α d^(1−α)` on the change of α-concurrence between two pure
/// states whose projectors are `ε` apart in trace norm.
pub fn continuity_bound_bipartite(epsilon: f64, d: usize, alpha: AlphaParam) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} is negative"
        )));
    }
    if d < 1 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if epsilon == 0.0 {
        return Ok(0.0);
    }
    Ok(epsilon.powf(alpha.value()) * (d as f64).powf(1.0 - alpha.value()))
}

/// Upper bound `[Σ_k w_k ε^α d_k^(1−α)]^(1/c(β))` on the change of GαC, with
/// one minimal cut dimension `d_k` per cut-size class `k = 1..=n/2` and class
/// weights `C(n, k)` (halved for the middle class when `n` is even).
///
/// The even-`n` weighting mirrors `c(β)`; the bound is only proved for odd `n`.
pub fn continuity_bound_multipartite(
    epsilon: f64,
    n: usize,
    class_min_dims: &[usize],
    alpha: AlphaParam,
) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} is negative"
        )));
    }
    let c = cardinality(n)? as f64;
    if class_min_dims.len() != n / 2 {
        return Err(Error::InvalidArgument(format!(
            "{} class dimensions given, {n} parties have {} cut classes",
            class_min_dims.len(),
            n / 2
        )));
    }
    if epsilon == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = class_min_dims
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            class_weight(n, i + 1)
                * epsilon.powf(alpha.value())
                * (d as f64).powf(1.0 - alpha.value())
        })
        .sum();
    Ok(sum.powf(1.0 / c))
}

/// Per cut-size class, the largest `min(dim S, dim S̄)` over cuts in the class.
/// For equal local dimensions `d` this is `d^k`.
pub fn class_min_dims(local_dims: &[usize]) -> Result<Vec<usize>> {
    let n = local_dims.len();
    let set = enumerate_bipartitions(n)?;
    let mut dims = vec![0usize; n / 2];
    for b in &set {
        let slot = &mut dims[b.size() - 1];
        *slot = (*slot).max(b.min_dim(local_dims));
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{PureState, C64};
    use approx::assert_abs_diff_eq;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::from_values(v.iter().copied()).unwrap()
    }

    fn a(x: f64) -> AlphaParam {
        AlphaParam::new(x).unwrap()
    }

    fn q(x: f64) -> QParam {
        QParam::new(x).unwrap()
    }

    fn ghz3() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], vec![2, 2, 2]).unwrap()
    }

    fn w3() -> PureState {
        PureState::from_real(&[0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0], vec![2, 2, 2]).unwrap()
    }

    fn zero_bell() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0], vec![2, 2, 2]).unwrap()
    }

    #[test]
    fn parameter_ranges() {
        assert!(AlphaParam::new(-0.1).is_err());
        assert!(AlphaParam::new(0.51).is_err());
        assert!(AlphaParam::new(f64::NAN).is_err());
        assert!(AlphaParam::new(0.0).is_ok());
        assert!(QParam::new(1.9).is_err());
        assert!(QParam::new(2.0).is_ok());
    }

    #[test]
    fn spectrum_kernels() {
        let half = spec(&[0.5, 0.5]);
        let w = spec(&[2.0 / 3.0, 1.0 / 3.0]);
        let pure = spec(&[1.0]);
        assert_abs_diff_eq!(alpha_concurrence(&half, a(0.5)), 0.414214, epsilon = 1e-6);
        assert_abs_diff_eq!(alpha_concurrence(&w, a(0.5)), 0.393847, epsilon = 1e-6);
        assert_eq!(alpha_concurrence(&pure, a(0.3)), 0.0);
        assert_abs_diff_eq!(q_concurrence(&half, q(3.0)), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(q_concurrence(&w, q(2.0)), 4.0 / 9.0, epsilon = 1e-12);
        assert_eq!(q_concurrence(&pure, q(5.0)), 0.0);
        assert_abs_diff_eq!(concurrence(&half), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence(&w), 0.942809, epsilon = 1e-6);
        assert_eq!(concurrence(&pure), 0.0);
    }

    #[test]
    fn alpha_zero_counts_rank() {
        assert_eq!(alpha_concurrence(&spec(&[0.5, 0.5, 0.0, 0.0]), a(0.0)), 1.0);
        assert_eq!(alpha_concurrence(&spec(&[0.25; 4]), a(0.0)), 3.0);
    }

    #[test]
    fn normalized_concurrence_matches_on_qubits() {
        let w = spec(&[2.0 / 3.0, 1.0 / 3.0]);
        assert_abs_diff_eq!(normalized_concurrence(&w), concurrence(&w), epsilon = 1e-15);
        assert_abs_diff_eq!(
            normalized_concurrence(&spec(&[0.25; 4])),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn state_measures_on_ghz_w_and_biseparable() {
        assert_abs_diff_eq!(
            galpha_c(&ghz3(), a(0.5)).unwrap().aggregate(),
            2f64.sqrt() - 1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            galpha_c(&w3(), a(0.5)).unwrap().aggregate(),
            0.393847,
            epsilon = 1e-6
        );
        assert_eq!(galpha_c(&zero_bell(), a(0.5)).unwrap().aggregate(), 0.0);

        assert_abs_diff_eq!(
            gqc(&ghz3(), q(3.0)).unwrap().aggregate(),
            0.75,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gqc(&w3(), q(2.0)).unwrap().aggregate(),
            4.0 / 9.0,
            epsilon = 1e-12
        );
        assert_eq!(gqc(&zero_bell(), q(3.0)).unwrap().aggregate(), 0.0);

        assert_abs_diff_eq!(gmc(&ghz3()).unwrap().aggregate(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gmc(&w3()).unwrap().aggregate(), 0.942809, epsilon = 1e-6);
        assert_eq!(gmc(&zero_bell()).unwrap().aggregate(), 0.0);

        assert_abs_diff_eq!(ggm(&ghz3()).unwrap().aggregate(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ggm(&w3()).unwrap().aggregate(), 1.0 / 3.0, epsilon = 1e-12);

        assert_abs_diff_eq!(concurrence_fill(&ghz3()).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_fill(&w3()).unwrap(), 8.0 / 9.0, epsilon = 1e-12);
        assert_eq!(concurrence_fill(&zero_bell()).unwrap(), 0.0);
    }

    #[test]
    fn shape_errors() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0], vec![2, 2]).unwrap();
        assert_eq!(
            galpha_c(&bell, a(0.5)).unwrap_err(),
            Error::NotMultipartite(2)
        );
        assert!(gmc(&bell).is_err());
        let qutrits = PureState::from_real(&[1.0; 27], vec![3, 3, 3]).unwrap();
        assert!(concurrence_fill(&qutrits).is_err());
        assert!(ghz_alpha_c_analytic(2, a(0.5)).is_err());
        assert!(w_alpha_c_analytic(2, a(0.5)).is_err());
    }

    #[test]
    fn product_reconstructs_aggregate() {
        let r = galpha_c(&w3(), a(0.25)).unwrap();
        let c = r.per_cut().len() as f64;
        assert_abs_diff_eq!(
            r.product().unwrap().powf(1.0 / c),
            r.aggregate(),
            epsilon = 1e-12
        );
        assert!(r.aggregate() <= r.upper_limit());
    }

    #[test]
    fn analytic_forms() {
        assert_abs_diff_eq!(
            ghz_alpha_c_analytic(3, a(0.5)).unwrap(),
            0.414214,
            epsilon = 1e-6
        );
        assert_eq!(
            ghz_alpha_c_analytic(7, a(0.5)).unwrap(),
            ghz_alpha_c_analytic(3, a(0.5)).unwrap()
        );
        assert_eq!(ghz_alpha_c_analytic(4, a(0.0)).unwrap(), 1.0);
        assert_abs_diff_eq!(
            w_alpha_c_analytic(3, a(0.5)).unwrap(),
            0.393847,
            epsilon = 1e-6
        );
        // (0.366025^4 * 0.414214^3)^(1/7) = 0.385950
        let oracle = ((0.75f64.sqrt() - 0.5).powi(4) * (2f64.sqrt() - 1.0).powi(3)).powf(1.0 / 7.0);
        assert_abs_diff_eq!(
            w_alpha_c_analytic(4, a(0.5)).unwrap(),
            oracle,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(oracle, 0.385950, epsilon = 1e-6);
    }

    #[test]
    fn continuity_bounds() {
        assert_eq!(continuity_bound_bipartite(0.0, 2, a(0.5)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            continuity_bound_bipartite(0.01, 2, a(0.5)).unwrap(),
            0.141421,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            continuity_bound_bipartite(0.3, 1, a(0.25)).unwrap(),
            0.3f64.powf(0.25),
            epsilon = 1e-15
        );
        assert!(continuity_bound_bipartite(-1e-3, 2, a(0.5)).is_err());

        assert_eq!(
            continuity_bound_multipartite(0.0, 3, &[2], a(0.5)).unwrap(),
            0.0
        );
        let b = continuity_bound_multipartite(0.04, 3, &[2], a(0.5)).unwrap();
        assert_abs_diff_eq!(
            b,
            (3.0 * 0.2 * 2f64.sqrt()).powf(1.0 / 3.0),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(b, 0.947, epsilon = 1e-3);
        assert!(continuity_bound_multipartite(0.1, 4, &[2], a(0.5)).is_err());
        assert!(continuity_bound_multipartite(-0.1, 3, &[2], a(0.5)).is_err());
    }

    #[test]
    fn class_dims() {
        assert_eq!(class_min_dims(&[2, 2, 2, 2]).unwrap(), vec![2, 4]);
        assert_eq!(class_min_dims(&[2, 3, 2]).unwrap(), vec![3]);
    }

    #[test]
    fn measure_ids() {
        assert_eq!(
            MeasureSpec::GAlphaC(a(0.5)).to_string(),
            "galphac(alpha=0.5)"
        );
        assert_eq!(MeasureSpec::GqC(q(3.0)).to_string(), "gqc(q=3)");
        assert_eq!("gmc".parse::<MeasureSpec>().unwrap(), MeasureSpec::Gmc);
        assert_eq!(
            "galphac(alpha=0.25)".parse::<MeasureSpec>().unwrap(),
            MeasureSpec::GAlphaC(a(0.25))
        );
        assert_eq!(
            MeasureSpec::parse_with_defaults("gqc", 0.5, 4.0).unwrap(),
            MeasureSpec::GqC(q(4.0))
        );
        assert!("galphac(q=3)".parse::<MeasureSpec>().is_err());
        assert!("galphac(alpha=0.7)".parse::<MeasureSpec>().is_err());
        assert!("gmc(alpha=1)".parse::<MeasureSpec>().is_err());
        assert!("negativity".parse::<MeasureSpec>().is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = galpha_c(&ghz3(), a(0.5)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["measure"], "galphac(alpha=0.5)");
        assert_eq!(v["per_cut"][0]["cut"], "0|12");
        assert_eq!(v["per_cut"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn complex_phases_do_not_matter() {
        let mut amps: Vec<C64> = ghz3().amplitudes().to_vec();
        amps[7] *= C64::from_polar(1.0, 0.7);
        let psi = PureState::new(amps, vec![2, 2, 2]).unwrap();
        assert_abs_diff_eq!(
            galpha_c(&psi, a(0.5)).unwrap().aggregate(),
            2f64.sqrt() - 1.0,
            epsilon = 1e-12
        );
    }
}
