//! State families, Haar sampling and controlled perturbations.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quantum::{pure_trace_distance, PureState, C64};

/// Slack allowed when a θ grid computed in floating point overshoots `π/2`.
const THETA_SLACK: f64 = 1e-9;

/// Family parameter θ in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FamilyParam(f64);

impl FamilyParam {
    pub fn new(theta: f64) -> Result<Self> {
        if !(-THETA_SLACK..=FRAC_PI_2 + THETA_SLACK).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta = {theta} is outside [0, pi/2]"
            )));
        }
        Ok(Self(theta.clamp(0.0, FRAC_PI_2)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Seed for every random generator in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    /// An independent ChaCha stream of this seed.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn qubits(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 qubits, got {n}"
        )));
    }
    if n > 30 {
        return Err(Error::InvalidArgument(format!(
            "{n} qubits do not fit in memory"
        )));
    }
    Ok(1usize << n)
}

/// `(|0…0> + |1…1>)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    let dim = qubits(n)?;
    let mut amps = vec![c(0.0); dim];
    amps[0] = c(FRAC_1_SQRT_2);
    amps[dim - 1] = c(FRAC_1_SQRT_2);
    PureState::new(amps, vec![2; n])
}

/// Uniform superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<PureState> {
    let dim = qubits(n)?;
    let mut amps = vec![c(0.0); dim];
    let a = 1.0 / (n as f64).sqrt();
    for k in 0..n {
        amps[1 << k] = c(a);
    }
    PureState::new(amps, vec![2; n])
}

/// `(cosθ|000> + sinθ|001>)/√2 + |111>/√2`.
pub fn type_a(theta: FamilyParam) -> PureState {
    let (s, co) = theta.value().sin_cos();
    let mut amps = vec![c(0.0); 8];
    amps[0b000] = c(co * FRAC_1_SQRT_2);
    amps[0b001] = c(s * FRAC_1_SQRT_2);
    amps[0b111] = c(FRAC_1_SQRT_2);
    PureState::normalized(amps, vec![2; 3]).expect("type A state has unit norm")
}

/// `cosθ|000> + sinθ|111>`.
pub fn type_b(theta: FamilyParam) -> PureState {
    let (s, co) = theta.value().sin_cos();
    let mut amps = vec![c(0.0); 8];
    amps[0b000] = c(co);
    amps[0b111] = c(s);
    PureState::normalized(amps, vec![2; 3]).expect("type B state has unit norm")
}

/// `sinθ(cos(3π/5)|0100> + sin(3π/5)|1000>) + cosθ|0011>`.
pub fn four_qubit_family(theta: FamilyParam) -> PureState {
    let (s, co) = theta.value().sin_cos();
    let (s5, c5) = (3.0 * std::f64::consts::PI / 5.0).sin_cos();
    let mut amps = vec![c(0.0); 16];
    amps[0b0100] = c(s * c5);
    amps[0b1000] = c(s * s5);
    amps[0b0011] = c(co);
    PureState::normalized(amps, vec![2; 4]).expect("four-qubit family has unit norm")
}

/// The one-parameter families that can be swept over θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    TypeA,
    TypeB,
    Fam4,
}

impl Family {
    pub fn at(self, theta: FamilyParam) -> PureState {
        match self {
            Family::TypeA => type_a(theta),
            Family::TypeB => type_b(theta),
            Family::Fam4 => four_qubit_family(theta),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Family::TypeA => "typeA",
            Family::TypeB => "typeB",
            Family::Fam4 => "fam4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "typeA" => Ok(Family::TypeA),
            "typeB" => Ok(Family::TypeB),
            "fam4" => Ok(Family::Fam4),
            other => Err(Error::Parse(format!(
                "unknown family {other:?} (expected typeA, typeB or fam4)"
            ))),
        }
    }
}

/// Builds a state from a builtin id: `ghz:<n>`, `w:<n>`, `typeA:<θ>`,
/// `typeB:<θ>`, `fam4:<θ>` or `random:<d1,d2,...>:<seed>`.
pub fn builtin(id: &str) -> Result<PureState> {
    let (kind, rest) = id
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("builtin id {id:?} has no ':'")))?;
    let int = |t: &str| -> Result<usize> {
        t.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {t:?} in {id:?}")))
    };
    let theta = |t: &str| -> Result<FamilyParam> {
        FamilyParam::new(
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad angle {t:?} in {id:?}")))?,
        )
    };
    match kind {
        "ghz" => ghz(int(rest)?),
        "w" => w(int(rest)?),
        "typeA" => Ok(type_a(theta(rest)?)),
        "typeB" => Ok(type_b(theta(rest)?)),
        "fam4" => Ok(four_qubit_family(theta(rest)?)),
        "random" => {
            let (dims, seed) = rest.rsplit_once(':').ok_or_else(|| {
                Error::Parse(format!("expected random:<dims>:<seed>, got {id:?}"))
            })?;
            let dims = dims
                .split([',', 'x'])
                .map(int)
                .collect::<Result<Vec<_>>>()?;
            let seed = seed
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad seed in {id:?}")))?;
            random_pure(&dims, Seed(seed))
        }
        other => Err(Error::Parse(format!("unknown builtin family {other:?}"))),
    }
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vector(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Haar-random pure state: normalised standard complex Gaussian amplitudes.
pub fn random_pure(local_dims: &[usize], seed: Seed) -> Result<PureState> {
    random_pure_with(local_dims, &mut seed.rng(0))
}

pub fn random_pure_with(local_dims: &[usize], rng: &mut impl Rng) -> Result<PureState> {
    let dim = local_dims.iter().product();
    Ok(PureState::normalized(gaussian_vector(dim, rng), local_dims.to_vec())?.fix_global_phase())
}

/// Haar-random `rows × cols` isometry (`rows ≥ cols`) from the QR decomposition
/// of a complex Gaussian matrix, with the phases of `R`'s diagonal divided out.
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let g = DMatrix::from_fn(rows, cols, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random `d × d` unitary.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    random_isometry(d, d, rng)
}

/// Rotates `state` towards a Haar-random orthogonal direction so that the
/// projector trace distance to the original is at most `epsilon`.
///
/// With `|ψ'> = cos t |ψ> + sin t |φ>`, `<ψ|φ> = 0`, the distance is `2 sin t`.
pub fn perturb(state: &PureState, epsilon: f64, seed: Seed) -> Result<PureState> {
    perturb_with(state, epsilon, &mut seed.rng(1))
}

pub fn perturb_with(state: &PureState, epsilon: f64, rng: &mut impl Rng) -> Result<PureState> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} is negative"
        )));
    }
    if epsilon == 0.0 {
        return Ok(state.clone());
    }
    let psi = state.amplitudes();
    let direction = loop {
        let mut v = gaussian_vector(state.dim(), rng);
        let overlap: C64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        for (x, a) in v.iter_mut().zip(psi) {
            *x -= overlap * a;
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            break v.into_iter().map(|x| x / norm).collect::<Vec<_>>();
        }
    };
    let mut angle = (epsilon / 2.0).min(1.0).asin();
    loop {
        let (s, co) = angle.sin_cos();
        let amps = psi
            .iter()
            .zip(&direction)
            .map(|(a, b)| a * co + b * s)
            .collect();
        let out = PureState::normalized(amps, state.local_dims().to_vec())?;
        if pure_trace_distance(state, &out)? <= epsilon {
            return Ok(out);
        }
        angle *= 1.0 - 1e-9;
    }
}
