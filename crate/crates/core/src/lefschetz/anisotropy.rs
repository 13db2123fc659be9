//! Certificates that a middle-degree class squares to something nonzero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::identity::{general_identity_sides, identity_degree, Split};
use crate::artinian::{monomials_of_degree, ChowClass, GradedPiece, Monomial};
use crate::certificate::{Certificate, DegreeBounds, Specialization, TrialConfig};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::frame::GenericFrame;
use crate::scalar::{Field, Gf2k, Gf2kField};
use crate::volume::VolumeFunctional;

/// Degree `e = floor(d / 2)` of the classes the certificate is about.
pub fn middle_degree(k: &SimplicialComplex) -> Result<usize> {
    Ok(k.pure_rank()? / 2)
}

/// The first split, in face order, whose anchor pairs nontrivially with
/// `u`: a face `eta` of size `d - e` with `Vol(u x_eta) != 0`, then `p` its
/// smallest vertex when `d` is odd, `sigma` the first facet over `eta`.
pub fn find_witness(k: &SimplicialComplex, vol: &VolumeFunctional<Gf2k>, u: &ChowClass<Gf2k>) -> Result<Split> {
    let d = vol.d();
    let e = u.degree();
    for eta in k.faces_of_dim((d - e) as isize - 1) {
        let paired = u.mul_monomial(&Monomial::square_free(&eta));
        if vol.eval_class(&paired)?.is_zero() {
            continue;
        }
        let sigma = k
            .facets_containing(&eta)
            .next()
            .cloned()
            .ok_or_else(|| Error::NotAFace(eta.vertices().to_vec()))?;
        let (gamma, p) = if d % 2 == 1 {
            let p = eta.vertices()[0];
            (eta.without(p), Some(p))
        } else {
            (eta.clone(), None)
        };
        let tau = sigma.minus(&eta);
        return Ok(Split { sigma, gamma, tau, p });
    }
    Err(Error::NoWitnessFace)
}

#[derive(Clone, Debug, Serialize)]
pub struct AnisotropyTrial {
    pub seed: u64,
    /// `d_gamma^tau Vol(x_p u^2)`.
    pub lhs: Gf2k,
    /// `[s] Vol(u x_p x_gamma)^2`.
    pub rhs: Gf2k,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnisotropyCertificate {
    pub u: ChowClass<Gf2k>,
    pub split: Split,
    /// Left side in the first trial.
    pub derivative_value: Gf2k,
    pub trials: Vec<AnisotropyTrial>,
    pub degree_bounds: DegreeBounds,
    pub passed: bool,
}

impl AnisotropyCertificate {
    pub fn certificate(&self) -> Certificate {
        let mut c = self.split.certificate("anisotropy", self.degree_bounds.clone());
        for t in &self.trials {
            c.seeds.push(t.seed);
            c.value("lhs", &t.lhs);
            c.value("rhs", &t.rhs);
        }
        c.passed = self.passed;
        c
    }
}

fn anisotropy_trial(
    k: &SimplicialComplex,
    s: &Specialization,
    split: &Split,
    u: &ChowClass<Gf2k>,
) -> Result<AnisotropyTrial> {
    let sides = general_identity_sides(k, &s.frame, &s.point, split, u)?;
    Ok(AnisotropyTrial {
        seed: s.seed,
        lhs: sides.direct,
        rhs: sides.rhs,
        passed: !sides.direct.is_zero() && sides.direct == sides.rhs,
    })
}

/// Certifies `u^2 != 0` (times `x_p` for odd `d`) through the derivative
/// identity. The witness split is searched at the first trial's
/// specialization and then kept for the remaining trials.
pub fn certify_anisotropy(
    k: &SimplicialComplex,
    u: &ChowClass<Gf2k>,
    cfg: &TrialConfig,
) -> Result<AnisotropyCertificate> {
    let e = middle_degree(k)?;
    if u.is_empty() {
        return Err(Error::ZeroClass);
    }
    if u.degree() != e {
        return Err(Error::DegreeMismatch {
            expected: e,
            got: u.degree(),
        });
    }
    let (_, (split, first)) = cfg.run(0, |seed| {
        let s = Specialization::for_complex(k, cfg.field, seed)?;
        if GradedPiece::build(k, &s.frame, e)?.reduce(u)?.is_empty() {
            return Err(Error::ZeroClass);
        }
        let vol = VolumeFunctional::new(k, &s.frame, s.point.clone())?;
        let split = find_witness(k, &vol, u)?;
        let trial = anisotropy_trial(k, &s, &split, u)?;
        Ok((split, trial))
    })?;
    let mut trials = vec![first];
    for t in 1..cfg.trials {
        let (_, trial) = cfg.run(t, |seed| {
            anisotropy_trial(k, &Specialization::for_complex(k, cfg.field, seed)?, &split, u)
        })?;
        trials.push(trial);
    }
    let d = split.sigma.len();
    Ok(AnisotropyCertificate {
        u: u.clone(),
        derivative_value: trials[0].lhs,
        passed: trials.iter().all(|t| t.passed),
        degree_bounds: DegreeBounds::new(identity_degree(k, &split, d), cfg.field.k(), cfg.trials),
        split,
        trials,
    })
}

/// A random combination of square-free degree-`m` monomials.
pub fn random_class(k: &SimplicialComplex, m: usize, field: Gf2kField, seed: u64) -> ChowClass<Gf2k> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ChowClass::zero(m);
    for mono in monomials_of_degree(k, m) {
        if mono.is_square_free() && rng.gen_bool(0.5) {
            out.add_term(mono, field.random_nonzero(&mut rng));
        }
    }
    out
}

/// A random class that is nonzero at the given frame.
pub fn random_nonzero_class(
    k: &SimplicialComplex,
    frame: &GenericFrame<Gf2k>,
    m: usize,
    seed: u64,
) -> Result<ChowClass<Gf2k>> {
    let piece = GradedPiece::build(k, frame, m)?;
    if piece.dim() == 0 {
        return Err(Error::ZeroClass);
    }
    let field = frame.field();
    for attempt in 0..64u64 {
        let u = random_class(k, m, field, seed.wrapping_add(attempt));
        if !piece.reduce(&u)?.is_empty() {
            return Ok(u);
        }
    }
    Err(Error::ZeroClass)
}

/// `x_face` for a face of the middle degree.
pub fn face_class(face: &Face, field: Gf2kField) -> ChowClass<Gf2k> {
    ChowClass::monomial(Monomial::square_free(face), field.one())
}
