//! Benchmark pure states and their white-noise families.
//!
//! Basis convention: site 0 is the most significant digit of a
//! computational-basis index, so `|q_0 q_1 … q_{N−1}>` has index
//! `Σ q_i d^(N−1−i)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, checked_pow, DensityMatrix, C64};
use crate::skew::IsotropicSpectrum;

const NORM_TOL: f64 = 1e-12;

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        checked_pow(amplitudes.len(), 1)?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    /// Equal-amplitude superposition of the given basis indices.
    pub fn uniform_superposition(dim: usize, support: &[usize]) -> Result<Self> {
        let mut amps = vec![c(0.0, 0.0); dim];
        for &i in support {
            if i >= dim {
                return Err(Error::IndexOutOfRange { what: "basis", index: i, len: dim });
            }
            amps[i] += c(1.0, 0.0);
        }
        Self::normalized(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(&self.amplitudes)
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PureStateDocument = serde_json::from_str(text)?;
        if doc.amplitudes.len() != doc.dim {
            return Err(Error::DimensionMismatch { expected: doc.dim, found: doc.amplitudes.len() });
        }
        Self::new(doc.amplitudes.into_iter().map(|[re, im]| c(re, im)).collect())
    }

    pub fn to_document(&self) -> PureStateDocument {
        PureStateDocument { dim: self.dim(), amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect() }
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// JSON form of a pure state: `{"dim": D, "amplitudes": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PureStateDocument {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

fn check_sites(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidStateSpec(format!("need at least 2 qubits, got {n}")));
    }
    checked_pow(2, n)
}

/// `(|0…0> + |1…1>)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    let dim = check_sites(n)?;
    PureState::uniform_superposition(dim, &[0, dim - 1])
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    let dim = check_sites(n)?;
    let support: Vec<usize> = (0..n).map(|i| 1usize << i).collect();
    PureState::uniform_superposition(dim, &support)
}

/// Bell pairs `(|00> + |11>)/√2` on sites `(0,1), (2,3), …`.
pub fn bell_pairs(n: usize) -> Result<PureState> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidStateSpec(format!("bell pairs need an even qubit count, got {n}")));
    }
    check_sites(n)?;
    let bell = ghz(2)?;
    Ok((1..n / 2).fold(bell.clone(), |acc, _| acc.tensor(&bell)))
}

/// The three six-qubit network states: three Bell pairs, `GHZ_3 ⊗ GHZ_3`,
/// and `GHZ_4 ⊗ GHZ_2`, all normalized.
pub fn example37_states() -> (PureState, PureState, PureState) {
    let a = bell_pairs(6).expect("six qubits");
    let b = ghz(3).expect("three qubits").tensor(&ghz(3).expect("three qubits"));
    let c = ghz(4).expect("four qubits").tensor(&ghz(2).expect("two qubits"));
    (a, b, c)
}

/// A pure state blended with white noise: `ρ(p) = p|ψ><ψ| + (1−p)𝕀/D`.
#[derive(Clone, Debug)]
pub struct StateFamily {
    base: PureState,
    description: String,
}

impl StateFamily {
    pub fn new(base: PureState, description: impl Into<String>) -> Self {
        Self { base, description: description.into() }
    }

    pub fn base(&self) -> &PureState {
        &self.base
    }

    pub fn total_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// Dense `ρ(p)`.
pub fn isotropic_mixture(family: &StateFamily, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let pure = family.base.density()?;
    let mixed = DensityMatrix::maximally_mixed(family.total_dim())?;
    DensityMatrix::mixture(&[(p, &pure), (1.0 - p, &mixed)])
}

/// Spectrum of `ρ(p)` without diagonalizing.
pub fn spectrum_of(family: &StateFamily, p: f64) -> Result<IsotropicSpectrum> {
    IsotropicSpectrum::from_noise(p, family.total_dim())
}

/// Command-line state specifiers: `ghz:N`, `w:N`, `bellpairs:N`,
/// `example37:a|b|c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateSpec {
    Ghz(usize),
    W(usize),
    BellPairs(usize),
    Example37(char),
}

impl StateSpec {
    pub fn build(&self) -> Result<PureState> {
        match *self {
            StateSpec::Ghz(n) => ghz(n),
            StateSpec::W(n) => w_state(n),
            StateSpec::BellPairs(n) => bell_pairs(n),
            StateSpec::Example37(x) => {
                let (a, b, c) = example37_states();
                Ok(match x {
                    'a' => a,
                    'b' => b,
                    _ => c,
                })
            }
        }
    }

    pub fn family(&self) -> Result<StateFamily> {
        Ok(StateFamily::new(self.build()?, self.to_string()))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Ghz(n) => write!(f, "ghz:{n}"),
            StateSpec::W(n) => write!(f, "w:{n}"),
            StateSpec::BellPairs(n) => write!(f, "bellpairs:{n}"),
            StateSpec::Example37(x) => write!(f, "example37:{x}"),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidStateSpec(s.to_owned());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let count = || arg.parse::<usize>().map_err(|_| bad());
        match kind {
            "ghz" => Ok(StateSpec::Ghz(count()?)),
            "w" => Ok(StateSpec::W(count()?)),
            "bellpairs" => Ok(StateSpec::BellPairs(count()?)),
            "example37" => match arg {
                "a" | "b" | "c" => Ok(StateSpec::Example37(arg.chars().next().unwrap())),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}
