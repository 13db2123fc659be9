//! Randomized trials over GF(2^k) and the replayable certificate record.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::frame::GenericFrame;
use crate::scalar::{Gf2k, Gf2kField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub field: Gf2kField,
    pub seed: u64,
    pub trials: usize,
    /// Fresh draws allowed per trial after a degenerate specialization.
    pub max_resamples: usize,
}

impl TrialConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        Self {
            field: Gf2kField::new(64).expect("GF(2^64) is supported"),
            seed,
            trials,
            max_resamples: 8,
        }
    }

    pub fn with_field(mut self, field: Gf2kField) -> Self {
        self.field = field;
        self
    }

    /// Seed of attempt `attempt` of trial `trial`, drawn from its own
    /// ChaCha stream so trials are independent of each other's resamples.
    pub fn trial_seed(&self, trial: usize, attempt: usize) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng.set_word_pos(2 * attempt as u128);
        rng.next_u64()
    }

    /// Runs `f` for one trial, redrawing on resamplable failures. Returns
    /// the seed that succeeded together with the result.
    pub fn run<T>(&self, trial: usize, mut f: impl FnMut(u64) -> Result<T>) -> Result<(u64, T)> {
        for attempt in 0..=self.max_resamples {
            let seed = self.trial_seed(trial, attempt);
            match f(seed) {
                Ok(t) => return Ok((seed, t)),
                Err(e) if e.is_resamplable() => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::ResampleExhausted(self.max_resamples + 1))
    }
}

/// A random frame together with an auxiliary point, both drawn from one
/// seeded stream.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub seed: u64,
    pub frame: GenericFrame<Gf2k>,
    pub point: Vec<Gf2k>,
}

impl Specialization {
    pub fn draw(vertices: &[VertexId], d: usize, field: Gf2kField, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = vertices
            .iter()
            .map(|&v| (v, (0..d).map(|_| field.random(&mut rng)).collect()))
            .collect();
        let frame = GenericFrame::new(d, coords, crate::frame::FrameMode::Specialized)?;
        let point = (0..d).map(|_| field.random(&mut rng)).collect();
        Ok(Self { seed, frame, point })
    }

    pub fn for_complex(k: &SimplicialComplex, field: Gf2kField, seed: u64) -> Result<Self> {
        Self::draw(k.vertices(), k.pure_rank()?, field, seed)
    }
}

/// Schwartz-Zippel bookkeeping for a claim checked over several trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeBounds {
    /// Total degree bound of the polynomial whose vanishing is tested.
    pub degree: u128,
    pub field_bits: u32,
    /// `log2(degree / 2^k)`: bound on a false pass in one trial. `None`
    /// for nonvanishing claims, which cannot pass falsely.
    pub log2_per_trial: Option<f64>,
    /// Bound for the whole claim (product over trials).
    pub log2_failure_bound: Option<f64>,
}

impl DegreeBounds {
    pub fn new(degree: u128, field_bits: u32, trials: usize) -> Self {
        let per = (degree.max(1) as f64).log2() - field_bits as f64;
        Self {
            degree,
            field_bits,
            log2_per_trial: Some(per),
            log2_failure_bound: Some(per * trials.max(1) as f64),
        }
    }

    pub fn one_sided(field_bits: u32) -> Self {
        Self {
            degree: 0,
            field_bits,
            log2_per_trial: None,
            log2_failure_bound: None,
        }
    }
}

/// The JSON form of every check: `{kind, faces, seeds, degree_bounds,
/// values_hex, passed}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub faces: BTreeMap<String, Vec<VertexId>>,
    pub seeds: Vec<u64>,
    pub degree_bounds: DegreeBounds,
    /// Per-quantity list of per-trial values.
    pub values_hex: BTreeMap<String, Vec<String>>,
    pub passed: bool,
}

impl Certificate {
    pub fn new(kind: &str, degree_bounds: DegreeBounds) -> Self {
        Self {
            kind: kind.into(),
            faces: BTreeMap::new(),
            seeds: Vec::new(),
            degree_bounds,
            values_hex: BTreeMap::new(),
            passed: false,
        }
    }

    pub fn face(mut self, name: &str, face: &Face) -> Self {
        self.faces.insert(name.into(), face.vertices().to_vec());
        self
    }

    pub fn value(&mut self, name: &str, x: &Gf2k) {
        self.values_hex.entry(name.into()).or_default().push(x.to_hex());
    }
}
