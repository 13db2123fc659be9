//! Weak and strong Lefschetz rank checks and the g-vector report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::maps::suspension_lefschetz_element;
use crate::artinian::{ChowClass, ChowRing, Monomial};
use crate::certificate::{Specialization, TrialConfig};
use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Field, Gf2k, Gf2kField};
use crate::volume::VolumeFunctional;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LefschetzMode {
    Weak,
    Strong,
}

/// Where the degree-one element comes from.
#[derive(Clone, Debug)]
pub enum ElementChoice {
    /// Uniform coefficients on a uniform frame.
    Random,
    /// The element induced from a random frame on the suspension.
    Suspension,
    /// A fixed element on a uniform frame.
    Given(ChowClass<Gf2k>),
}

impl ElementChoice {
    pub fn label(&self) -> &'static str {
        match self {
            ElementChoice::Random => "random",
            ElementChoice::Suspension => "suspension",
            ElementChoice::Given(_) => "given",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRank {
    /// Source degree.
    pub m: usize,
    /// Power of the element applied.
    pub power: usize,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LefschetzTrial {
    pub seed: u64,
    pub element: ChowClass<Gf2k>,
    pub dims: Vec<usize>,
    pub ranks: Vec<DegreeRank>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LefschetzReport {
    pub mode: LefschetzMode,
    pub element: &'static str,
    pub trials: Vec<LefschetzTrial>,
    /// Some trial has full rank in every degree.
    pub passed: bool,
}

impl LefschetzReport {
    pub fn seeds(&self) -> Vec<u64> {
        self.trials.iter().map(|t| t.seed).collect()
    }

    /// The first passing trial, else the first trial.
    pub fn witness(&self) -> Option<&LefschetzTrial> {
        self.trials.iter().find(|t| t.passed).or(self.trials.first())
    }
}

/// `sum_v r_v x_v` with uniform `r_v`.
pub fn random_element(vertices: &[VertexId], field: Gf2kField, seed: u64) -> ChowClass<Gf2k> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut out = ChowClass::zero(1);
    for &v in vertices {
        out.add_term(Monomial::var(v), field.random(&mut rng));
    }
    out
}

/// Ranks of `l^power : A^m -> A^{m + power}` for each `(m, power)`.
pub fn power_ranks(ring: &ChowRing<Gf2k>, l: &ChowClass<Gf2k>, maps: &[(usize, usize)]) -> Result<Vec<DegreeRank>> {
    let one = ring.frame().one();
    maps.iter()
        .map(|&(m, power)| {
            let lp = l.pow(power, &one).restrict_to(ring.complex());
            let lp = if lp.is_empty() {
                ChowClass::zero(power)
            } else {
                ring.reduce(&lp)?
            };
            let source_dim = ring.piece(m)?.dim();
            let target_dim = ring.piece(m + power)?.dim();
            let rank = if source_dim == 0 {
                0
            } else {
                linalg::rank(&ring.multiplication_matrix(&lp, m)?)?
            };
            Ok(DegreeRank {
                m,
                power,
                rank,
                source_dim,
                target_dim,
                injective: rank == source_dim,
            })
        })
        .collect()
}

/// `(m, 1)` for `m <= floor((d - 1) / 2)`.
pub fn weak_maps(d: usize) -> Vec<(usize, usize)> {
    (0..=(d.saturating_sub(1)) / 2).map(|m| (m, 1)).collect()
}

/// `(m, d - 2m)` for `m <= floor(d / 2)`.
pub fn strong_maps(d: usize) -> Vec<(usize, usize)> {
    (0..=d / 2).map(|m| (m, d - 2 * m)).collect()
}

fn lefschetz_trial(
    k: &SimplicialComplex,
    choice: &ElementChoice,
    maps: &[(usize, usize)],
    field: Gf2kField,
    seed: u64,
) -> Result<LefschetzTrial> {
    let (frame, element) = match choice {
        ElementChoice::Suspension => {
            let s = suspension_lefschetz_element(k, field, seed)?;
            (s.induced_frame, s.element)
        }
        ElementChoice::Random => (
            Specialization::for_complex(k, field, seed)?.frame,
            random_element(k.vertices(), field, seed),
        ),
        ElementChoice::Given(l) => (Specialization::for_complex(k, field, seed)?.frame, l.clone()),
    };
    if !element.is_empty() && element.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            got: element.degree(),
        });
    }
    let max = maps.iter().map(|&(m, p)| m + p).max().unwrap_or(0);
    let ring = ChowRing::with_max_degree(k, &frame, max)?;
    let ranks = power_ranks(&ring, &element, maps)?;
    Ok(LefschetzTrial {
        seed,
        element,
        dims: ring.dims(),
        passed: ranks.iter().all(|r| r.injective),
        ranks,
    })
}

fn lefschetz_check(
    k: &SimplicialComplex,
    mode: LefschetzMode,
    choice: &ElementChoice,
    cfg: &TrialConfig,
) -> Result<LefschetzReport> {
    let d = k.pure_rank()?;
    let maps = match mode {
        LefschetzMode::Weak => weak_maps(d),
        LefschetzMode::Strong => strong_maps(d),
    };
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let (_, trial) = cfg.run(t, |seed| lefschetz_trial(k, choice, &maps, cfg.field, seed))?;
        trials.push(trial);
    }
    Ok(LefschetzReport {
        mode,
        element: choice.label(),
        passed: trials.iter().any(|t| t.passed),
        trials,
    })
}

/// Injectivity of `l : A^m -> A^{m+1}` for every `m <= floor((d - 1) / 2)`.
pub fn weak_lefschetz_check(
    k: &SimplicialComplex,
    choice: &ElementChoice,
    cfg: &TrialConfig,
) -> Result<LefschetzReport> {
    lefschetz_check(k, LefschetzMode::Weak, choice, cfg)
}

/// Injectivity of `l^{d-2m} : A^m -> A^{d-m}` for every `m <= floor(d / 2)`;
/// with equal dimensions on both sides this is bijectivity.
pub fn strong_lefschetz_check(
    k: &SimplicialComplex,
    choice: &ElementChoice,
    cfg: &TrialConfig,
) -> Result<LefschetzReport> {
    lefschetz_check(k, LefschetzMode::Strong, choice, cfg)
}

/// For even `d` and `a` of degree `m`: whether `Vol((l^{d/2-m} a)^2)` is
/// nonzero and whether `l^{d-2m} a` is nonzero in `A^{d-m}`.
pub fn square_pattern(
    ring: &ChowRing<Gf2k>,
    vol: &VolumeFunctional<Gf2k>,
    l: &ChowClass<Gf2k>,
    a: &ChowClass<Gf2k>,
) -> Result<(bool, bool)> {
    let d = ring.d();
    let m = a.degree();
    if d % 2 == 1 || 2 * m > d {
        return Err(Error::InvalidArgument(format!(
            "degree {m} in even dimension expected, d = {d}"
        )));
    }
    let one = ring.frame().one();
    let k = ring.complex();
    let half = l.pow(d / 2 - m, &one).mul(a).restrict_to(k);
    let squared = vol.class(&half.square().restrict_to(k))?;
    let full = ring.reduce(&l.pow(d - 2 * m, &one).mul(a).restrict_to(k))?;
    Ok((!squared.is_zero(), !full.is_empty()))
}

#[derive(Clone, Debug, Serialize)]
pub struct GReport {
    pub h: Vec<i64>,
    pub g: Vec<i64>,
    /// `h_0 <= h_1 <= .. <= h_{floor(d/2)}`.
    pub increasing: bool,
    pub sphere: bool,
    pub witness: LefschetzReport,
    pub passed: bool,
}

/// The inequality on the h-vector, with weak Lefschetz ranks as witness.
pub fn g_report(k: &SimplicialComplex, cfg: &TrialConfig) -> Result<GReport> {
    let d = k.pure_rank()?;
    let h = k.h_vector()?;
    let g: Vec<i64> = (0..=d / 2).map(|i| h[i] - if i == 0 { 0 } else { h[i - 1] }).collect();
    let increasing = g.iter().all(|&x| x >= 0);
    let witness = weak_lefschetz_check(k, &ElementChoice::Random, cfg)?;
    Ok(GReport {
        passed: increasing && witness.passed,
        sphere: k.is_homology_sphere_f2(),
        h,
        g,
        increasing,
        witness,
    })
}
