//! Parameter sweeps, figure data, randomized bound checks and CSV emission.
//!
//! Everything here is deterministic for fixed inputs and seeds: grid points and
//! trials may run on the rayon pool, but results are gathered in grid/trial
//! order before any reduction.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartitions::enumerate_bipartitions;
use crate::error::{Error, Result};
use crate::measures::{
    alpha_concurrence, class_min_dims, continuity_bound_bipartite, continuity_bound_multipartite,
    ghz_alpha_c_analytic, w_alpha_c_analytic, AlphaParam, CutSpectra, MeasureSpec, QParam,
};
use crate::quantum::pure_trace_distance;
use crate::states::{self, perturb_with, random_pure_with, Family, FamilyParam, Seed};

/// Absolute slack on bound comparisons, covering floating-point rounding only.
pub const BOUND_SLACK: f64 = 1e-12;
/// Default θ grid step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Reference peak locations of GqC(q=3), GαC(α=1/2), GMC and GGM on the
/// four-qubit family, and the window they must be reproduced in.
pub const FAM4_REFERENCE_PEAKS: [f64; 4] = [0.843, 0.866, 1.199, 1.271];
pub const PEAK_WINDOW: f64 = 0.005;

/// Result of one qualitative or quantitative claim check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ClaimCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Grid `start, start + step, …`, closed with `end` itself when the steps
/// do not land on it.
pub fn theta_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step {step} must be positive"
        )));
    }
    if !(start <= end) {
        return Err(Error::InvalidArgument(format!(
            "start {start} exceeds end {end}"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count)
        .map(|i| round_grid(start + i as f64 * step))
        .collect();
    if end - grid[count] > 1e-12 {
        grid.push(end);
    }
    Ok(grid)
}

/// A θ sweep of one family.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub theta_start: f64,
    pub theta_end: f64,
    pub theta_step: f64,
    pub measures: Vec<MeasureSpec>,
}

impl SweepSpec {
    /// Full `[0, π/2]` range at the default step.
    pub fn full(family: Family, measures: Vec<MeasureSpec>) -> Self {
        Self {
            family,
            theta_start: 0.0,
            theta_end: FRAC_PI_2,
            theta_step: DEFAULT_STEP,
            measures,
        }
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        FamilyParam::new(self.theta_start)?;
        FamilyParam::new(self.theta_end)?;
        if self.measures.is_empty() {
            return Err(Error::InvalidArgument("no measures requested".into()));
        }
        theta_grid(self.theta_start, self.theta_end, self.theta_step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub theta: f64,
    pub value: f64,
    pub index: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub family: String,
    pub measures: Vec<MeasureSpec>,
    pub rows: Vec<SweepRow>,
    /// Grid maximiser per measure (first on ties).
    pub argmax: Vec<Peak>,
}

impl SweepResult {
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.values[k]).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.theta).collect()
    }

    pub fn write_csv(&self, out: &mut (impl Write + ?Sized), meta: &[String]) -> io::Result<()> {
        FigureData::from_sweep(self, Vec::new()).write_csv(out, meta)
    }
}

fn argmax(values: &[f64], thetas: &[f64]) -> Peak {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    Peak {
        theta: thetas[best],
        value: values[best],
        index: best,
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let grid = spec.grid()?;
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&theta| {
            let state = spec.family.at(FamilyParam::new(theta)?);
            let spectra = CutSpectra::compute(&state)?;
            let values = spec
                .measures
                .iter()
                .map(|m| Ok(spectra.report(m)?.aggregate()))
                .collect::<Result<Vec<f64>>>()?;
            Ok(SweepRow { theta, values })
        })
        .collect::<Result<_>>()?;
    let argmax = (0..spec.measures.len())
        .map(|k| {
            let col: Vec<f64> = rows.iter().map(|r| r.values[k]).collect();
            argmax(&col, &grid)
        })
        .collect();
    Ok(SweepResult {
        family: spec.family.to_string(),
        measures: spec.measures.clone(),
        rows,
        argmax,
    })
}

/// Writes `#`-prefixed metadata, a header line, rows (empty cell for `None`)
/// and `#`-prefixed trailing notes.
pub fn write_csv(
    out: &mut (impl Write + ?Sized),
    meta: &[String],
    header: &[String],
    rows: &[Vec<Option<f64>>],
    footer: &[String],
) -> io::Result<()> {
    for line in meta {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| v.map(|x| x.to_string()).unwrap_or_default())
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    for line in footer {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// Output of a figure reproduction: a CSV table plus the claim checks run on it.
#[derive(Debug, Clone, Serialize)]
pub struct FigureData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub notes: Vec<String>,
    pub checks: Vec<ClaimCheck>,
}

impl FigureData {
    pub fn write_csv(&self, out: &mut (impl Write + ?Sized), meta: &[String]) -> io::Result<()> {
        let mut footer = self.notes.clone();
        footer.extend(self.checks.iter().map(|c| {
            format!(
                "check {} {}: {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            )
        }));
        write_csv(out, meta, &self.header, &self.rows, &footer)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

// ---------------------------------------------------------------- GHZ vs W

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzWRow {
    pub n: usize,
    pub w: f64,
    pub ghz: f64,
    pub ratio: f64,
    /// GαC of the W state evaluated from its amplitudes, when within `numeric_max_n`.
    pub numeric_w: Option<f64>,
}

/// GαC of W_n and GHZ_n and their ratio for each `n`, from the closed forms.
pub fn ghz_w_table(
    alpha: AlphaParam,
    ns: impl IntoIterator<Item = usize>,
    numeric_max_n: usize,
) -> Result<Vec<GhzWRow>> {
    ns.into_iter()
        .map(|n| {
            let w = w_alpha_c_analytic(n, alpha)?;
            let ghz = ghz_alpha_c_analytic(n, alpha)?;
            let numeric_w = if n <= numeric_max_n {
                Some(
                    CutSpectra::compute(&states::w(n)?)?
                        .galpha_c(alpha)?
                        .aggregate(),
                )
            } else {
                None
            };
            Ok(GhzWRow {
                n,
                w,
                ghz,
                ratio: w / ghz,
                numeric_w,
            })
        })
        .collect()
}

/// Ratio below one everywhere and strictly increasing along odd and even `n`.
pub fn check_ghz_w(rows: &[GhzWRow]) -> Vec<ClaimCheck> {
    let below = rows.iter().all(|r| r.ratio < 1.0);
    let max_ratio = rows
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut checks = vec![ClaimCheck::new(
        "ratio-below-one",
        below,
        format!("max ratio {max_ratio:.6} over {} sizes", rows.len()),
    )];
    for (parity, label) in [(1, "odd"), (0, "even")] {
        let seq: Vec<&GhzWRow> = rows.iter().filter(|r| r.n % 2 == parity).collect();
        let increasing = seq.windows(2).all(|p| p[1].ratio > p[0].ratio);
        checks.push(ClaimCheck::new(
            format!("ratio-increasing-{label}-n"),
            increasing,
            format!(
                "{label} n: {}",
                seq.iter()
                    .map(|r| format!("{}:{:.5}", r.n, r.ratio))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        ));
    }
    let worst_numeric = rows
        .iter()
        .filter_map(|r| r.numeric_w.map(|x| (x - r.w).abs()))
        .fold(0.0, f64::max);
    if rows.iter().any(|r| r.numeric_w.is_some()) {
        checks.push(ClaimCheck::new(
            "numeric-matches-closed-form",
            worst_numeric <= 1e-9,
            format!("max |numeric - closed form| = {worst_numeric:.3e}"),
        ));
    }
    checks
}

pub fn figure_ghz_w(numeric_max_n: usize) -> Result<FigureData> {
    let alpha = AlphaParam::new(1.0 / 3.0)?;
    let rows = ghz_w_table(alpha, 5..=21, numeric_max_n)?;
    let checks = check_ghz_w(&rows);
    Ok(FigureData {
        header: ["n", "galphac_w", "galphac_ghz", "ratio", "numeric_w"]
            .map(String::from)
            .to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Some(r.n as f64),
                    Some(r.w),
                    Some(r.ghz),
                    Some(r.ratio),
                    r.numeric_w,
                ]
            })
            .collect(),
        notes: vec![format!("alpha={}", alpha.value())],
        checks,
    })
}

// ---------------------------------------------------------- type A vs type B

/// A measure compared against GαC(α=1/2) along the type-A and type-B families.
#[derive(Debug, Clone)]
pub struct PairedCurves {
    pub reference: MeasureSpec,
    pub thetas: Vec<f64>,
    pub a_reference: Vec<f64>,
    pub a_galphac: Vec<f64>,
    pub b_reference: Vec<f64>,
    pub b_galphac: Vec<f64>,
}

pub fn paired_curves(reference: MeasureSpec, step: f64) -> Result<PairedCurves> {
    let half = MeasureSpec::GAlphaC(AlphaParam::new(0.5)?);
    let measures = vec![reference, half];
    let a = run_sweep(&SweepSpec {
        theta_step: step,
        ..SweepSpec::full(Family::TypeA, measures.clone())
    })?;
    let b = run_sweep(&SweepSpec {
        theta_step: step,
        ..SweepSpec::full(Family::TypeB, measures)
    })?;
    Ok(PairedCurves {
        reference,
        thetas: a.thetas(),
        a_reference: a.column(0),
        a_galphac: a.column(1),
        b_reference: b.column(0),
        b_galphac: b.column(1),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingPair {
    pub theta_a: f64,
    pub theta_b: f64,
    pub reference_a: f64,
    pub reference_b: f64,
    pub galphac_a: f64,
    pub galphac_b: f64,
}

/// Pairs of a type-A and a type-B grid state whose reference measure agrees
/// within `reference_tol` while GαC differs by at least `min_gap`.
pub fn find_crossing_pairs(
    curves: &PairedCurves,
    reference_tol: f64,
    min_gap: f64,
) -> Vec<CrossingPair> {
    let mut order: Vec<usize> = (0..curves.b_reference.len()).collect();
    order.sort_by(|&i, &j| curves.b_reference[i].total_cmp(&curves.b_reference[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| curves.b_reference[i]).collect();
    let mut pairs = Vec::new();
    for (ia, &xa) in curves.a_reference.iter().enumerate() {
        let lo = sorted.partition_point(|&x| x < xa - reference_tol);
        for &ib in order[lo..]
            .iter()
            .take_while(|&&ib| curves.b_reference[ib] <= xa + reference_tol)
        {
            if (curves.a_galphac[ia] - curves.b_galphac[ib]).abs() >= min_gap {
                pairs.push(CrossingPair {
                    theta_a: curves.thetas[ia],
                    theta_b: curves.thetas[ib],
                    reference_a: xa,
                    reference_b: curves.b_reference[ib],
                    galphac_a: curves.a_galphac[ia],
                    galphac_b: curves.b_galphac[ib],
                });
            }
        }
    }
    pairs.sort_by(|p, q| {
        (p.theta_a, p.theta_b)
            .partial_cmp(&(q.theta_a, q.theta_b))
            .unwrap()
    });
    pairs
}

/// Crossing-pair search thresholds.
pub const CROSSING_REFERENCE_TOL: f64 = 1e-4;
pub const CROSSING_MIN_GAP: f64 = 0.01;

pub fn figure_type_ab(reference: MeasureSpec, step: f64) -> Result<FigureData> {
    let curves = paired_curves(reference, step)?;
    let pairs = find_crossing_pairs(&curves, CROSSING_REFERENCE_TOL, CROSSING_MIN_GAP);
    let r = reference.to_string();
    let header = vec![
        "theta".to_string(),
        format!("{r}_typeA"),
        "galphac(alpha=0.5)_typeA".to_string(),
        format!("{r}_typeB"),
        "galphac(alpha=0.5)_typeB".to_string(),
    ];
    let rows = (0..curves.thetas.len())
        .map(|i| {
            vec![
                Some(curves.thetas[i]),
                Some(curves.a_reference[i]),
                Some(curves.a_galphac[i]),
                Some(curves.b_reference[i]),
                Some(curves.b_galphac[i]),
            ]
        })
        .collect();
    let detail = match pairs.iter().max_by(|p, q| {
        (p.galphac_a - p.galphac_b)
            .abs()
            .total_cmp(&(q.galphac_a - q.galphac_b).abs())
    }) {
        Some(p) => format!(
            "{} pairs; widest: typeA theta={} typeB theta={} {r} {:.6}/{:.6} galphac {:.6}/{:.6}",
            pairs.len(),
            p.theta_a,
            p.theta_b,
            p.reference_a,
            p.reference_b,
            p.galphac_a,
            p.galphac_b
        ),
        None => "no pairs".to_string(),
    };
    Ok(FigureData {
        header,
        rows,
        notes: vec![format!(
            "crossing pairs: |{r} difference| <= {CROSSING_REFERENCE_TOL}, |galphac difference| >= {CROSSING_MIN_GAP}"
        )],
        checks: vec![ClaimCheck::new(format!("crossing-pair-{}", reference.id()), !pairs.is_empty(), detail)],
    })
}

// ------------------------------------------------------------- four qubits

pub fn fam4_measures() -> Result<Vec<MeasureSpec>> {
    Ok(vec![
        MeasureSpec::GqC(QParam::new(3.0)?),
        MeasureSpec::GAlphaC(AlphaParam::new(0.5)?),
        MeasureSpec::Gmc,
        MeasureSpec::Ggm,
    ])
}

/// Strict monotonicity of `values` over the grid points strictly inside `(lo, hi)`.
pub fn monotone_on(thetas: &[f64], values: &[f64], lo: f64, hi: f64, increasing: bool) -> bool {
    let inside: Vec<f64> = thetas
        .iter()
        .zip(values)
        .filter(|(t, _)| **t > lo && **t < hi)
        .map(|(_, v)| *v)
        .collect();
    inside.len() >= 2
        && inside
            .windows(2)
            .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// Size of the discrete second difference at a peak relative to its
/// neighbourhood: the largest `|Δ²|` at `index ± 1` over the median `|Δ²|` of
/// the `window` points on either side (excluding `index ± 3`). Large for a kink,
/// near one for a smooth maximum.
pub fn kink_ratio(values: &[f64], index: usize, window: usize) -> f64 {
    let second: Vec<f64> = (1..values.len() - 1)
        .map(|i| (values[i + 1] - 2.0 * values[i] + values[i - 1]).abs())
        .collect();
    // second[i - 1] is centred on values[i]
    let centre = |i: usize| second.get(i.wrapping_sub(1)).copied();
    let at_peak = (index.saturating_sub(1)..=index + 1)
        .filter_map(centre)
        .fold(0.0, f64::max);
    let mut around: Vec<f64> = (index.saturating_sub(window)..=index + window)
        .filter(|&i| i + 3 < index || i > index + 3)
        .filter_map(centre)
        .collect();
    if around.is_empty() {
        return f64::NAN;
    }
    around.sort_by(f64::total_cmp);
    let median = around[around.len() / 2];
    at_peak / median.max(f64::MIN_POSITIVE)
}

/// Kink ratio above which a peak counts as sharp, and below which as smooth.
pub const SHARP_PEAK_RATIO: f64 = 100.0;
pub const SMOOTH_PEAK_RATIO: f64 = 10.0;
const KINK_WINDOW: usize = 20;

pub fn check_fam4(sweep: &SweepResult) -> Vec<ClaimCheck> {
    let thetas = sweep.thetas();
    let mut checks = Vec::new();
    for (k, (peak, reference)) in sweep.argmax.iter().zip(FAM4_REFERENCE_PEAKS).enumerate() {
        let ok = (peak.theta - reference).abs() <= PEAK_WINDOW;
        checks.push(ClaimCheck::new(
            format!("peak-{}", sweep.measures[k]),
            ok,
            format!(
                "argmax theta={} (reference {reference} +/- {PEAK_WINDOW}), value={:.6}",
                peak.theta, peak.value
            ),
        ));
    }
    let col = |k: usize| sweep.column(k);
    let [p_q3, p_half, p_gmc, p_ggm] = FAM4_REFERENCE_PEAKS;
    let intervals = [
        ("gqc3-decreasing", 0, p_q3, p_half, false),
        ("galphac-increasing", 1, p_q3, p_half, true),
        ("galphac-decreasing-to-gmc-peak", 1, p_half, p_gmc, false),
        ("gmc-increasing", 2, p_half, p_gmc, true),
        ("galphac-decreasing-to-ggm-peak", 1, p_half, p_ggm, false),
        ("ggm-increasing", 3, p_half, p_ggm, true),
    ];
    for (name, k, lo, hi, inc) in intervals {
        let ok = monotone_on(&thetas, &col(k), lo, hi, inc);
        checks.push(ClaimCheck::new(
            format!("order-{name}"),
            ok,
            format!(
                "{} strictly {} on ({lo}, {hi})",
                sweep.measures[k],
                if inc { "increasing" } else { "decreasing" }
            ),
        ));
    }
    for (k, peak) in sweep.argmax.iter().enumerate() {
        let ratio = kink_ratio(&col(k), peak.index, KINK_WINDOW);
        let sharp_expected = matches!(sweep.measures[k], MeasureSpec::Gmc | MeasureSpec::Ggm);
        let ok = if sharp_expected {
            ratio > SHARP_PEAK_RATIO
        } else {
            ratio < SMOOTH_PEAK_RATIO
        };
        checks.push(ClaimCheck::new(
            format!("peak-shape-{}", sweep.measures[k]),
            ok,
            format!(
                "second-difference ratio {ratio:.3e} ({} expected)",
                if sharp_expected { "sharp" } else { "smooth" }
            ),
        ));
    }
    checks
}

impl FigureData {
    /// Table form of a sweep: `theta` plus one column per measure, argmax notes.
    pub fn from_sweep(sweep: &SweepResult, checks: Vec<ClaimCheck>) -> Self {
        let mut header = vec!["theta".to_string()];
        header.extend(sweep.measures.iter().map(|m| m.to_string()));
        Self {
            header,
            rows: sweep
                .rows
                .iter()
                .map(|r| {
                    std::iter::once(Some(r.theta))
                        .chain(r.values.iter().map(|&v| Some(v)))
                        .collect()
                })
                .collect(),
            notes: sweep
                .measures
                .iter()
                .zip(&sweep.argmax)
                .map(|(m, p)| format!("argmax {m} theta={} value={}", p.theta, p.value))
                .collect(),
            checks,
        }
    }
}

pub fn figure_fam4(step: f64) -> Result<(SweepResult, Vec<ClaimCheck>)> {
    let sweep = run_sweep(&SweepSpec {
        theta_step: step,
        ..SweepSpec::full(Family::Fam4, fam4_measures()?)
    })?;
    let checks = check_fam4(&sweep);
    Ok((sweep, checks))
}

// --------------------------------------------------------- continuity bounds

#[derive(Debug, Clone)]
pub struct BoundCheckConfig {
    pub trials: usize,
    pub seed: Seed,
    pub local_dims: Vec<usize>,
    pub alphas: Vec<AlphaParam>,
    /// Every `zero_every`-th trial uses ε = 0 (0 disables).
    pub zero_every: usize,
}

impl BoundCheckConfig {
    pub fn new(trials: usize, seed: Seed, local_dims: Vec<usize>, alphas: Vec<AlphaParam>) -> Self {
        Self {
            trials,
            seed,
            local_dims,
            alphas,
            zero_every: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSummary {
    pub alpha: f64,
    pub local_dims: Vec<usize>,
    pub trials: usize,
    pub cut_checks: usize,
    pub cut_violations: usize,
    pub aggregate_checks: usize,
    pub aggregate_violations: usize,
    /// Largest observed/bound ratio.
    pub max_cut_ratio: f64,
    pub max_aggregate_ratio: f64,
    pub max_epsilon: f64,
    pub zero_epsilon_trials: usize,
    pub zero_epsilon_max_diff: f64,
    /// The aggregate bound for even party counts uses the half-weighted middle
    /// class; only the odd case is a proven statement.
    pub aggregate_even_extension: bool,
}

impl BoundSummary {
    pub fn violations(&self) -> usize {
        self.cut_violations + self.aggregate_violations
    }
}

struct TrialOutcome {
    epsilon: f64,
    zero: bool,
    cut_ratios: Vec<(f64, bool)>,
    aggregate_check: Option<(f64, bool)>,
    max_diff: f64,
}

fn ratio(diff: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        diff / bound
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn bound_trial(
    cfg: &BoundCheckConfig,
    alpha: AlphaParam,
    class_dims: &[usize],
    stream: u64,
    zero: bool,
) -> Result<TrialOutcome> {
    let mut rng = cfg.seed.rng(stream);
    let psi = random_pure_with(&cfg.local_dims, &mut rng)?;
    // log-uniform target distance in [1e-6, 2]
    let target = if zero {
        0.0
    } else {
        10f64.powf(rng.random_range(-6.0..2f64.log10()))
    };
    let phi = perturb_with(&psi, target, &mut rng)?;
    let epsilon = pure_trace_distance(&psi, &phi)?;
    let a = CutSpectra::compute(&psi)?;
    let b = CutSpectra::compute(&phi)?;
    let mut cut_ratios = Vec::with_capacity(a.cuts().len());
    let mut max_diff: f64 = 0.0;
    for ((cut, sa), (_, sb)) in a.cuts().iter().zip(b.cuts()) {
        let diff = (alpha_concurrence(sa, alpha) - alpha_concurrence(sb, alpha)).abs();
        max_diff = max_diff.max(diff);
        let bound = continuity_bound_bipartite(epsilon, cut.min_dim(&cfg.local_dims), alpha)?;
        cut_ratios.push((ratio(diff, bound), diff > bound + BOUND_SLACK));
    }
    let aggregate_check = if cfg.local_dims.len() >= 3 {
        let diff = (a.galpha_c(alpha)?.aggregate() - b.galpha_c(alpha)?.aggregate()).abs();
        max_diff = max_diff.max(diff);
        let bound =
            continuity_bound_multipartite(epsilon, cfg.local_dims.len(), class_dims, alpha)?;
        Some((ratio(diff, bound), diff > bound + BOUND_SLACK))
    } else {
        None
    };
    Ok(TrialOutcome {
        epsilon,
        zero,
        cut_ratios,
        aggregate_check,
        max_diff,
    })
}

/// Randomized check of the per-cut and aggregate continuity bounds, one
/// summary per α. Trial `t` draws its state and perturbation from stream `t`.
pub fn bound_check(cfg: &BoundCheckConfig) -> Result<Vec<BoundSummary>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is needed".into(),
        ));
    }
    if cfg.alphas.is_empty() {
        return Err(Error::InvalidArgument("no alpha values given".into()));
    }
    enumerate_bipartitions(cfg.local_dims.len())?;
    let class_dims = class_min_dims(&cfg.local_dims)?;
    cfg.alphas
        .iter()
        .map(|&alpha| {
            let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let zero = cfg.zero_every > 0 && t % cfg.zero_every == 0;
                    bound_trial(cfg, alpha, &class_dims, t as u64, zero)
                })
                .collect::<Result<_>>()?;
            let mut s = BoundSummary {
                alpha: alpha.value(),
                local_dims: cfg.local_dims.clone(),
                trials: cfg.trials,
                cut_checks: 0,
                cut_violations: 0,
                aggregate_checks: 0,
                aggregate_violations: 0,
                max_cut_ratio: 0.0,
                max_aggregate_ratio: 0.0,
                max_epsilon: 0.0,
                zero_epsilon_trials: 0,
                zero_epsilon_max_diff: 0.0,
                aggregate_even_extension: cfg.local_dims.len().is_multiple_of(2),
            };
            for o in &outcomes {
                s.max_epsilon = s.max_epsilon.max(o.epsilon);
                for &(r, violated) in &o.cut_ratios {
                    s.cut_checks += 1;
                    s.cut_violations += violated as usize;
                    s.max_cut_ratio = s.max_cut_ratio.max(r);
                }
                if let Some((r, violated)) = o.aggregate_check {
                    s.aggregate_checks += 1;
                    s.aggregate_violations += violated as usize;
                    s.max_aggregate_ratio = s.max_aggregate_ratio.max(r);
                }
                if o.zero {
                    s.zero_epsilon_trials += 1;
                    s.zero_epsilon_max_diff = s.zero_epsilon_max_diff.max(o.max_diff);
                }
            }
            Ok(s)
        })
        .collect()
}

/// Largest GαC over `samples` Haar-random states of the given shape.
pub fn max_random_galpha_c(
    local_dims: &[usize],
    samples: usize,
    seed: Seed,
    alpha: AlphaParam,
) -> Result<f64> {
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|t| {
            let psi = random_pure_with(local_dims, &mut seed.rng(t as u64))?;
            Ok(CutSpectra::compute(&psi)?.galpha_c(alpha)?.aggregate())
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}
