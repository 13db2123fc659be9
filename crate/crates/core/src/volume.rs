//! The volume map on the top degree, evaluated as a facet sum.
//!
//! On a facet `s`, the Courant function of `v` restricts to the ratio
//! `psi_v = [s_v](y) / [s]` at an auxiliary point `y`. A monomial `z`
//! contributes
//!
//! ```text
//! Vol(z) = sum_{s >= supp z} prod_{v in s} psi_v^{z_v} / (chi_s [s]),   chi_s = prod_{v in s} psi_v
//! ```
//!
//! which is independent of `y` in degree `d`, vanishes in lower degree and
//! equals `[s]^{-1}` on `x_s`. Brackets are determinants in the fixed
//! `e`-basis, which fixes the normalization of `Vol`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artinian::{ChowClass, Monomial};
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::frame::{Courant, FrameFunction, GenericFrame};
use crate::scalar::{Embed, Field, Gf2k, Gf2kField, ScalarError};

#[derive(Clone, Debug)]
struct FacetData<F> {
    face: Face,
    bracket: F,
    bracket_inv: F,
    psi: Vec<F>,
    psi_inv: Vec<F>,
}

/// Precomputed brackets and Courant values for every facet.
#[derive(Clone, Debug)]
pub struct VolumeFunctional<F> {
    d: usize,
    facets: Vec<FacetData<F>>,
    by_vertex: HashMap<VertexId, Vec<usize>>,
    zero: F,
}

/// A uniformly random auxiliary point.
pub fn random_point(field: Gf2kField, d: usize, seed: u64) -> Vec<Gf2k> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d).map(|_| field.random(&mut rng)).collect()
}

impl<F: Field> VolumeFunctional<F> {
    /// Fails with `ZeroBracketCollision` when a facet bracket vanishes and
    /// with `PoleHit` when `y` lies on a hyperplane `[s_v] = 0`.
    pub fn new(k: &SimplicialComplex, frame: &GenericFrame<F>, y: Vec<F>) -> Result<Self> {
        let d = k.pure_rank()?;
        if d != frame.d() || y.len() != d {
            return Err(Error::DegreeMismatch {
                expected: d,
                got: frame.d(),
            });
        }
        let mut facets = Vec::with_capacity(k.facets().len());
        let mut by_vertex: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, face) in k.facets().iter().enumerate() {
            let bracket = frame.bracket_face(face)?;
            if !bracket.is_unit() {
                return Err(Error::ZeroBracketCollision);
            }
            let bracket_inv = bracket.inv()?;
            let mut psi = Vec::with_capacity(d);
            let mut psi_inv = Vec::with_capacity(d);
            for &v in face.vertices() {
                let Courant::Ratio { num, .. } = frame.courant(face, v, &y)? else {
                    unreachable!("v is a vertex of the facet")
                };
                if !num.is_unit() {
                    return Err(ScalarError::PoleHit.into());
                }
                psi.push(num.mul(&bracket_inv));
                psi_inv.push(bracket.mul(&num.inv()?));
                by_vertex.entry(v).or_default().push(i);
            }
            facets.push(FacetData {
                face: face.clone(),
                bracket,
                bracket_inv,
                psi,
                psi_inv,
            });
        }
        Ok(Self {
            d,
            facets,
            by_vertex,
            zero: frame.zero(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// `[s]` for a facet, if `s` is one.
    pub fn bracket(&self, facet: &Face) -> Option<&F> {
        self.facets.iter().find(|f| &f.face == facet).map(|f| &f.bracket)
    }

    fn facets_over(&self, z: &Monomial) -> Vec<usize> {
        let mut pairs = z.pairs().iter();
        let Some(&(first, _)) = pairs.next() else {
            return (0..self.facets.len()).collect();
        };
        let mut out = self.by_vertex.get(&first).cloned().unwrap_or_default();
        for &(v, _) in pairs {
            out.retain(|&i| self.facets[i].face.contains(v));
        }
        out
    }

    /// The facet sum for a monomial of any degree at the stored point: the
    /// volume in degree `d`, zero below it.
    pub fn monomial(&self, z: &Monomial) -> Result<F> {
        let mut acc = self.zero.clone();
        for i in self.facets_over(z) {
            let f = &self.facets[i];
            let mut term = f.bracket_inv.clone();
            for (j, &v) in f.face.vertices().iter().enumerate() {
                term = match z.exponent(v) {
                    0 => term.mul(&f.psi_inv[j]),
                    1 => term,
                    e => term.mul(&f.psi[j].pow(e as u64 - 1)),
                };
            }
            acc = acc.add(&term);
        }
        acc.check()?;
        Ok(acc)
    }

    /// Volume of a degree-`d` monomial.
    pub fn vol_monomial(&self, z: &Monomial) -> Result<F> {
        if z.degree() != self.d {
            return Err(Error::DegreeMismatch {
                expected: self.d,
                got: z.degree(),
            });
        }
        self.monomial(z)
    }

    /// Linear extension of the facet sum to any homogeneous class.
    pub fn eval_class(&self, a: &ChowClass<F>) -> Result<F> {
        let mut acc = self.zero.clone();
        for (m, c) in a.terms() {
            acc = acc.add(&c.mul(&self.monomial(m)?));
        }
        Ok(acc)
    }

    /// Volume of a degree-`d` class.
    pub fn class(&self, a: &ChowClass<F>) -> Result<F> {
        if !a.is_empty() && a.degree() != self.d {
            return Err(Error::DegreeMismatch {
                expected: self.d,
                got: a.degree(),
            });
        }
        self.eval_class(a)
    }
}

/// `Vol(class)` as a function of the frame, for derivations. The class and
/// point are constants.
pub struct VolumeOf<'a, F> {
    pub complex: &'a SimplicialComplex,
    pub class: &'a ChowClass<F>,
    pub point: &'a [F],
}

impl<F: Field> FrameFunction<F> for VolumeOf<'_, F> {
    fn eval<G: Field + Embed<F>>(&self, frame: &GenericFrame<G>) -> Result<G> {
        let like = frame.one();
        let y = self.point.iter().map(|x| G::embed(x, &like)).collect();
        let vol = VolumeFunctional::new(self.complex, frame, y)?;
        vol.eval_class(&self.class.map(|x| G::embed(x, &like)))
    }
}

/// Checks `Vol(l_j z) = 0` for every given degree `d - 1` monomial `z` and
/// every form `l_j`.
pub fn vol_ideal_vanishing<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    vol: &VolumeFunctional<F>,
    samples: &[Monomial],
) -> Result<bool> {
    for z in samples {
        if z.degree() + 1 != vol.d() {
            return Err(Error::DegreeMismatch {
                expected: vol.d() - 1,
                got: z.degree(),
            });
        }
        for j in 0..frame.d() {
            let mut form = ChowClass::zero(1);
            for (v, a) in frame.linear_form(j) {
                form.add_term(Monomial::var(v), a);
            }
            let product = form.mul_monomial(z).restrict_to(k);
            if !vol.class(&product)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Monomials of degree `m` on faces, drawn uniformly from the full list.
pub fn sample_monomials<R: Rng>(k: &SimplicialComplex, m: usize, count: usize, rng: &mut R) -> Vec<Monomial> {
    let all = crate::artinian::monomials_of_degree(k, m);
    (0..count).map(|_| all[rng.gen_range(0..all.len())].clone()).collect()
}

/// Schwartz-Zippel degree bound for a facet-sum evaluation: numerator and
/// denominator of each of `facets` terms have degree at most
/// `d * (max_exponent + d + 1)` in the frame and point coordinates, and each
/// derivation at most doubles the degree of a fraction.
pub fn degree_bound(facets: usize, d: usize, max_exponent: usize, derivations: u32) -> u128 {
    let base = 2 * facets as u128 * d as u128 * (max_exponent + d + 1) as u128;
    base << derivations
}
