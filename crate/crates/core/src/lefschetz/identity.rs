//! The derivative identities on a facet split.
//!
//! For a facet `s = gamma u tau` (`d` even) or `s = gamma u tau u {p}` (`d`
//! odd), with `gamma` and `tau` ordered increasingly and paired off,
//!
//! ```text
//! d_gamma^tau Vol(x_p x_tau^2) = [s] Vol(x_p x_tau x_gamma)^2
//! d_gamma^tau Vol(x_p x_eta^2) = 0      when eta u gamma u {p} is not a face
//! ```
//!
//! (drop `x_p` and `p` when `d` is even). The general form replaces `x_tau`
//! by an arbitrary class `u` of degree `|tau|`.

use serde::Serialize;

use crate::artinian::{displace, ChowClass, Monomial};
use crate::certificate::{Certificate, DegreeBounds, Specialization, TrialConfig};
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::frame::{FrameFunction, GenericFrame};
use crate::scalar::{Embed, Field, Gf2k};
use crate::volume::{degree_bound, VolumeFunctional, VolumeOf};

/// Parity of the sphere dimension `d - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityKind {
    /// `d` even.
    Odd,
    /// `d` odd; the split carries the leftover vertex `p`.
    Even,
}

/// A facet cut into `gamma`, `tau` and, for odd `d`, one leftover vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub sigma: Face,
    pub gamma: Face,
    pub tau: Face,
    pub p: Option<VertexId>,
}

impl Split {
    pub fn new(k: &SimplicialComplex, sigma: Face, gamma: Face, tau: Face) -> Result<Self> {
        let d = k.pure_rank()?;
        if sigma.len() != d || !k.contains_face(&sigma) {
            return Err(Error::NotAFace(sigma.vertices().to_vec()));
        }
        if !gamma.is_subset(&sigma) || !tau.is_subset(&sigma) || !gamma.is_disjoint(&tau) {
            return Err(Error::InvalidArgument(format!(
                "{gamma:?} and {tau:?} must be disjoint subsets of {sigma:?}"
            )));
        }
        if gamma.len() != d / 2 || tau.len() != d / 2 {
            return Err(Error::InvalidArgument(format!(
                "halves of a facet of size {d} need {} vertices each",
                d / 2
            )));
        }
        let rest = sigma.minus(&gamma.union(&tau));
        let p = rest.vertices().first().copied();
        Ok(Self { sigma, gamma, tau, p })
    }

    /// Every split of every facet, facets and subsets in face order.
    pub fn all(k: &SimplicialComplex) -> Result<Vec<Split>> {
        let d = k.pure_rank()?;
        let mut out = Vec::new();
        for sigma in k.facets() {
            let leftovers: Vec<Option<VertexId>> = if d % 2 == 0 {
                vec![None]
            } else {
                sigma.vertices().iter().map(|&p| Some(p)).collect()
            };
            for p in leftovers {
                let halves = match p {
                    Some(p) => sigma.without(p),
                    None => sigma.clone(),
                };
                for gamma in halves.subsets(d / 2) {
                    let tau = halves.minus(&gamma);
                    out.push(Split {
                        sigma: sigma.clone(),
                        gamma,
                        tau,
                        p,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn kind(&self) -> IdentityKind {
        match self.p {
            None => IdentityKind::Odd,
            Some(_) => IdentityKind::Even,
        }
    }

    /// `(gamma_i, tau_i)`: vertex `gamma_i` moves towards `tau_i`.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.gamma
            .vertices()
            .iter()
            .copied()
            .zip(self.tau.vertices().iter().copied())
            .collect()
    }

    /// `gamma u {p}`.
    pub fn anchor(&self) -> Face {
        match self.p {
            Some(p) => self.gamma.with(p),
            None => self.gamma.clone(),
        }
    }

    fn p_monomial(&self) -> Monomial {
        self.p.map(Monomial::var).unwrap_or_else(Monomial::one)
    }

    /// `x_p x_eta^2`.
    pub fn squared(&self, eta: &Face) -> Monomial {
        let sq = Monomial::from_pairs(eta.vertices().iter().map(|&v| (v, 2)));
        self.p_monomial().mul(&sq)
    }

    /// Faces `eta` of size `|tau|` whose union with the anchor is not a face.
    pub fn vanishing_candidates(&self, k: &SimplicialComplex) -> Vec<Face> {
        let anchor = self.anchor();
        k.faces_of_dim(self.tau.len() as isize - 1)
            .into_iter()
            .filter(|eta| !k.contains_face(&eta.union(&anchor)))
            .collect()
    }

    pub fn certificate(&self, kind: &str, bounds: DegreeBounds) -> Certificate {
        let mut c = Certificate::new(kind, bounds)
            .face("sigma", &self.sigma)
            .face("gamma", &self.gamma)
            .face("tau", &self.tau);
        if let Some(p) = self.p {
            c = c.face("p", &Face::new(vec![p]).expect("single vertex"));
        }
        c
    }
}

/// Both sides of the main identity at one frame and auxiliary point.
pub fn main_identity_sides<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    point: &[F],
    split: &Split,
) -> Result<(F, F)> {
    let lhs = vanishing_value(k, frame, point, split, &split.tau)?;
    let vol = VolumeFunctional::new(k, frame, point.to_vec())?;
    let v = vol.vol_monomial(&Monomial::square_free(&split.sigma))?;
    let rhs = frame.bracket_face(&split.sigma)?.mul(&v.square());
    Ok((lhs, rhs))
}

/// `d_gamma^tau Vol(x_p x_eta^2)`.
pub fn vanishing_value<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    point: &[F],
    split: &Split,
    eta: &Face,
) -> Result<F> {
    let class = ChowClass::monomial(split.squared(eta), frame.one());
    frame.derive_eval(
        &split.pairs(),
        &VolumeOf {
            complex: k,
            class: &class,
            point,
        },
    )
}

/// Schwartz-Zippel degree of `lhs - rhs` as a rational function identity.
pub fn identity_degree(k: &SimplicialComplex, split: &Split, max_exponent: usize) -> u128 {
    let d = split.sigma.len();
    let facets = k.facets().len();
    let lhs = degree_bound(facets, d, max_exponent, split.pairs().len() as u32);
    let rhs = d as u128 + 2 * degree_bound(facets, d, max_exponent, 0);
    lhs + rhs
}

const VANISHING_SAMPLES: usize = 4;

fn spread<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n).map(|i| items[i * items.len() / n].clone()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityTrial {
    pub seed: u64,
    pub lhs: Gf2k,
    pub rhs: Gf2k,
    /// `(eta, d_gamma^tau Vol(x_p x_eta^2))` for the sampled `eta`.
    pub vanishing: Vec<(Face, Gf2k)>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub kind: IdentityKind,
    pub split: Split,
    pub trials: Vec<IdentityTrial>,
    pub degree_bounds: DegreeBounds,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn certificate(&self) -> Certificate {
        let mut c = self.split.certificate("main-identity", self.degree_bounds.clone());
        for t in &self.trials {
            c.seeds.push(t.seed);
            c.value("lhs", &t.lhs);
            c.value("rhs", &t.rhs);
            for (eta, x) in &t.vanishing {
                c.value(&format!("vanishing{eta:?}"), x);
            }
        }
        c.passed = self.passed;
        c
    }
}

/// Checks the main identity and its vanishing clause over `cfg.trials`
/// specializations. Every trial must agree exactly.
pub fn check_main_identity(k: &SimplicialComplex, split: &Split, cfg: &TrialConfig) -> Result<IdentityCheck> {
    let etas = spread(&split.vanishing_candidates(k), VANISHING_SAMPLES);
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let (seed, trial) = cfg.run(t, |seed| {
            let s = Specialization::for_complex(k, cfg.field, seed)?;
            let (lhs, rhs) = main_identity_sides(k, &s.frame, &s.point, split)?;
            let vanishing = etas
                .iter()
                .map(|eta| Ok((eta.clone(), vanishing_value(k, &s.frame, &s.point, split, eta)?)))
                .collect::<Result<Vec<_>>>()?;
            let passed = lhs == rhs && vanishing.iter().all(|(_, x)| x.is_zero());
            Ok(IdentityTrial {
                seed,
                lhs,
                rhs,
                vanishing,
                passed,
            })
        })?;
        debug_assert_eq!(seed, trial.seed);
        trials.push(trial);
    }
    Ok(IdentityCheck {
        kind: split.kind(),
        split: split.clone(),
        passed: trials.iter().all(|t| t.passed),
        degree_bounds: DegreeBounds::new(identity_degree(k, split, 2), cfg.field.k(), cfg.trials),
        trials,
    })
}

/// `Vol(x_p a^2)` where `a` is `u` displaced away from the anchor onto the
/// `tau` side, recomputed from whatever frame it is evaluated at. Under a
/// derivation this differentiates through the displacement coefficients.
struct DisplacedSquare<'a, F> {
    complex: &'a SimplicialComplex,
    split: &'a Split,
    u: &'a ChowClass<F>,
    point: &'a [F],
}

impl<F: Field> FrameFunction<F> for DisplacedSquare<'_, F> {
    fn eval<G: Field + Embed<F>>(&self, frame: &GenericFrame<G>) -> Result<G> {
        let like = frame.one();
        let u = self.u.map(|x| G::embed(x, &like));
        let a = displace(self.complex, frame, &u, &self.split.anchor(), Some(&self.split.tau))?.class;
        let y = self.point.iter().map(|x| G::embed(x, &like)).collect();
        let vol = VolumeFunctional::new(self.complex, frame, y)?;
        vol.eval_class(&a.square().mul_monomial(&self.split.p_monomial()))
    }
}

/// The three evaluations of `d_gamma^tau Vol(x_p u^2)` and the right side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralSides<F> {
    /// Derivation applied to `Vol(x_p u^2)` with `u` held fixed.
    pub direct: F,
    /// Derivation applied through the displacement of `u`.
    pub displaced: F,
    /// `sum lambda_eta^2 d_gamma^tau Vol(x_p x_eta^2)` with `lambda` frozen.
    pub frozen: F,
    /// `[s] Vol(u x_p x_gamma)^2`.
    pub rhs: F,
}

impl<F: Field> GeneralSides<F> {
    pub fn routes_agree(&self) -> bool {
        self.direct == self.displaced && self.direct == self.frozen
    }
}

pub fn general_identity_sides<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    point: &[F],
    split: &Split,
    u: &ChowClass<F>,
) -> Result<GeneralSides<F>> {
    if !u.is_empty() && u.degree() != split.tau.len() {
        return Err(Error::DegreeMismatch {
            expected: split.tau.len(),
            got: u.degree(),
        });
    }
    let pairs = split.pairs();
    let pm = split.p_monomial();
    let target = u.square().mul_monomial(&pm);
    let direct = frame.derive_eval(
        &pairs,
        &VolumeOf {
            complex: k,
            class: &target,
            point,
        },
    )?;
    let displaced = frame.derive_eval(
        &pairs,
        &DisplacedSquare {
            complex: k,
            split,
            u,
            point,
        },
    )?;
    let lambda = displace(k, frame, u, &split.anchor(), Some(&split.tau))?.class;
    let mut frozen = frame.zero();
    for (mono, c) in lambda.terms() {
        let eta = mono.support();
        let term = vanishing_value(k, frame, point, split, &eta)?;
        frozen = frozen.add(&c.square().mul(&term));
    }
    let vol = VolumeFunctional::new(k, frame, point.to_vec())?;
    let paired = u.mul_monomial(&pm.mul(&Monomial::square_free(&split.gamma)));
    let rhs = frame
        .bracket_face(&split.sigma)?
        .mul(&vol.eval_class(&paired)?.square());
    Ok(GeneralSides {
        direct,
        displaced,
        frozen,
        rhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralTrial {
    pub seed: u64,
    pub sides: GeneralSides<Gf2k>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralIdentityCheck {
    pub kind: IdentityKind,
    pub split: Split,
    pub trials: Vec<GeneralTrial>,
    pub degree_bounds: DegreeBounds,
    pub passed: bool,
    /// Some trial where the three evaluations of the left side disagree.
    pub route_mismatch: bool,
}

impl GeneralIdentityCheck {
    pub fn certificate(&self) -> Certificate {
        let mut c = self.split.certificate("general-identity", self.degree_bounds.clone());
        for t in &self.trials {
            c.seeds.push(t.seed);
            c.value("lhs", &t.sides.direct);
            c.value("lhs_displaced", &t.sides.displaced);
            c.value("lhs_frozen", &t.sides.frozen);
            c.value("rhs", &t.sides.rhs);
        }
        c.passed = self.passed;
        c
    }
}

/// The identity with `x_tau` replaced by `u`. Passes when the direct left
/// side equals the right side in every trial; the other two evaluations of
/// the left side are reported through `route_mismatch`.
pub fn check_general_identity(
    k: &SimplicialComplex,
    split: &Split,
    u: &ChowClass<Gf2k>,
    cfg: &TrialConfig,
) -> Result<GeneralIdentityCheck> {
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let (seed, sides) = cfg.run(t, |seed| {
            let s = Specialization::for_complex(k, cfg.field, seed)?;
            general_identity_sides(k, &s.frame, &s.point, split, u)
        })?;
        let passed = sides.direct == sides.rhs;
        trials.push(GeneralTrial { seed, sides, passed });
    }
    let d = split.sigma.len();
    Ok(GeneralIdentityCheck {
        kind: split.kind(),
        split: split.clone(),
        passed: trials.iter().all(|t| t.passed),
        route_mismatch: trials.iter().any(|t| !t.sides.routes_agree()),
        degree_bounds: DegreeBounds::new(identity_degree(k, split, d), cfg.field.k(), cfg.trials),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::frame::FrameMode;
    use crate::scalar::RationalFunction;

    fn face(v: &[u32]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    #[test]
    fn split_validation() {
        let k = corpus::cross_polytope(3);
        let s = Split::new(&k, face(&[1, 3, 5]), face(&[1]), face(&[3])).unwrap();
        assert_eq!(s.p, Some(5));
        assert_eq!(s.kind(), IdentityKind::Even);
        assert_eq!(s.anchor(), face(&[1, 5]));
        assert!(Split::new(&k, face(&[1, 2, 5]), face(&[1]), face(&[2])).is_err());
        assert!(Split::new(&k, face(&[1, 3, 5]), face(&[1]), face(&[1])).is_err());
        // 8 facets, 3 choices of p, 2 ways to cut the rest
        assert_eq!(Split::all(&k).unwrap().len(), 48);
        assert_eq!(Split::all(&corpus::cycle(5)).unwrap().len(), 10);
    }

    #[test]
    fn polygon_identity_and_vanishing() {
        let k = corpus::cycle(6);
        let cfg = TrialConfig::new(11, 3);
        let s = Split::new(&k, face(&[2, 3]), face(&[2]), face(&[3])).unwrap();
        let check = check_main_identity(&k, &s, &cfg).unwrap();
        assert!(check.passed);
        // neighbors of 2 are excluded; 4, 5, 6 are not
        let etas: Vec<Face> = s.vanishing_candidates(&k);
        assert_eq!(etas, vec![face(&[4]), face(&[5]), face(&[6])]);
        assert!(check.trials.iter().all(|t| t.vanishing.len() == 3));
    }

    #[test]
    fn octahedron_identity_every_split() {
        let k = corpus::cross_polytope(3);
        let cfg = TrialConfig::new(3, 2);
        for s in Split::all(&k).unwrap().iter().step_by(5) {
            let c = check_main_identity(&k, s, &cfg).unwrap();
            assert!(c.passed, "{s:?}: {:?}", c.trials);
        }
    }

    #[test]
    fn polygon_identity_exact() {
        let k = corpus::cycle(4);
        let frame = GenericFrame::exact(k.vertices().iter().copied(), 2).unwrap();
        assert_eq!(frame.mode(), FrameMode::Exact);
        let y = frame.aux_point();
        let s = Split::new(&k, face(&[1, 2]), face(&[1]), face(&[2])).unwrap();
        let (lhs, rhs) = main_identity_sides(&k, &frame, &y, &s).unwrap();
        assert!(lhs.add(&rhs).is_zero_rf());
        let far = vanishing_value(&k, &frame, &y, &s, &face(&[3])).unwrap();
        assert!(far.is_zero_rf());
        let _: &RationalFunction = &lhs;
    }

    #[test]
    fn general_identity_reduces_to_main_for_x_tau() {
        let k = corpus::cross_polytope(3);
        let cfg = TrialConfig::new(5, 2);
        let s = Split::new(&k, face(&[1, 3, 5]), face(&[3]), face(&[5])).unwrap();
        let u = ChowClass::monomial(Monomial::var(5), cfg.field.one());
        let g = check_general_identity(&k, &s, &u, &cfg).unwrap();
        assert!(g.passed && !g.route_mismatch);
        let m = check_main_identity(&k, &s, &cfg).unwrap();
        for (a, b) in g.trials.iter().zip(&m.trials) {
            assert_eq!(a.sides.direct, b.lhs);
        }
        let zero = check_general_identity(&k, &s, &ChowClass::zero(1), &cfg).unwrap();
        assert!(zero.passed);
        assert!(zero.trials.iter().all(|t| t.sides.rhs.is_zero()));
    }

    #[test]
    fn general_identity_random_classes() {
        let k = corpus::cross_polytope(3);
        let cfg = TrialConfig::new(8, 3);
        let f = cfg.field;
        let s = Split::new(&k, face(&[2, 4, 6]), face(&[2]), face(&[4])).unwrap();
        let mut u = ChowClass::zero(1);
        for v in 1..=6u32 {
            u.add_term(Monomial::var(v), f.element(v as u128 * 0x9e37 + 1));
        }
        let g = check_general_identity(&k, &s, &u, &cfg).unwrap();
        assert!(g.passed, "{:?}", g.trials);
        assert!(!g.route_mismatch);
        assert!(g.trials.iter().all(|t| !t.sides.rhs.is_zero()));
    }
}
