//! Cone and star maps, and the Lefschetz element built from a suspension.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::artinian::{ChowClass, ChowRing, Monomial};
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::frame::{FrameMode, GenericFrame};
use crate::linalg;
use crate::scalar::{Field, Gf2k, Gf2kField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeDirection {
    IntoCone,
    OutOfCone,
}

/// The isomorphism `A(S) ~ A(vS)` for a cone with apex `v`.
///
/// The cone carries a frame with `d + 1` forms. With `j0` the first index
/// where `a_{v,j0}` is invertible, the forms `a_{v,j0} l_j + a_{v,j} l_j0`
/// (`j != j0`) have no `x_v` term and give the frame of `S`. In the other
/// direction `x_v` is replaced by `sum_w (a_{w,j0} / a_{v,j0}) x_w`.
#[derive(Clone, Debug)]
pub struct ConeTransfer<F> {
    apex: VertexId,
    j0: usize,
    substitute: ChowClass<F>,
    base: ChowRing<F>,
    cone: ChowRing<F>,
}

impl<F: Field> ConeTransfer<F> {
    pub fn new(base: &SimplicialComplex, apex: VertexId, cone_frame: &GenericFrame<F>) -> Result<Self> {
        let cone = base.cone(apex)?;
        let d = base.pure_rank()?;
        if cone_frame.d() != d + 1 {
            return Err(Error::DegreeMismatch {
                expected: d + 1,
                got: cone_frame.d(),
            });
        }
        let av = cone_frame.coords(apex)?.to_vec();
        let j0 = av
            .iter()
            .position(Field::is_unit)
            .ok_or(Error::ConeParameterDegenerate)?;
        let inv = av[j0].inv()?;
        let mut coords = BTreeMap::new();
        let mut substitute = ChowClass::zero(1);
        for &w in base.vertices() {
            let aw = cone_frame.coords(w)?;
            let induced = (0..=d)
                .filter(|&j| j != j0)
                .map(|j| av[j0].mul(&aw[j]).add(&av[j].mul(&aw[j0])))
                .collect();
            coords.insert(w, induced);
            substitute.add_term(Monomial::var(w), aw[j0].mul(&inv));
        }
        let induced = GenericFrame::new(d, coords, cone_frame.mode())?;
        let cone_frame = cone_frame.restrict(cone.vertices().iter().copied())?;
        Ok(Self {
            apex,
            j0,
            substitute,
            base: ChowRing::new(base, &induced)?,
            cone: ChowRing::new(&cone, &cone_frame)?,
        })
    }

    pub fn apex(&self) -> VertexId {
        self.apex
    }

    pub fn pivot_coordinate(&self) -> usize {
        self.j0
    }

    pub fn base(&self) -> &ChowRing<F> {
        &self.base
    }

    pub fn cone(&self) -> &ChowRing<F> {
        &self.cone
    }

    /// The frame of the base induced from the cone's.
    pub fn induced_frame(&self) -> &GenericFrame<F> {
        self.base.frame()
    }

    /// Image of `x_v` under the map out of the cone.
    pub fn apex_image(&self) -> &ChowClass<F> {
        &self.substitute
    }

    /// `i_v`: a class of the base read in the cone.
    pub fn into_cone(&self, x: &ChowClass<F>) -> Result<ChowClass<F>> {
        self.cone.reduce(&x.restrict_to(self.cone.complex()))
    }

    /// `j_v`: substitutes for `x_v` and reduces in the base.
    pub fn out_of_cone(&self, x: &ChowClass<F>) -> Result<ChowClass<F>> {
        let one = self.base.frame().one();
        let mut out = ChowClass::zero(x.degree());
        for (mono, c) in x.terms() {
            let e = mono.exponent(self.apex) as usize;
            let rest = Monomial::from_pairs(mono.pairs().iter().copied().filter(|&(v, _)| v != self.apex));
            let image = self.substitute.pow(e, &one).mul_monomial(&rest);
            out = out.add(&image.scale(c))?;
        }
        self.base.reduce(&out.restrict_to(self.base.complex()))
    }

    pub fn transfer(&self, direction: ConeDirection, x: &ChowClass<F>) -> Result<ChowClass<F>> {
        match direction {
            ConeDirection::IntoCone => self.into_cone(x),
            ConeDirection::OutOfCone => self.out_of_cone(x),
        }
    }
}

pub fn cone_transfer<F: Field>(
    t: &ConeTransfer<F>,
    direction: ConeDirection,
    x: &ChowClass<F>,
) -> Result<ChowClass<F>> {
    t.transfer(direction, x)
}

#[derive(Clone, Debug, Serialize)]
pub struct StarDegree {
    pub m: usize,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub vertex: VertexId,
    /// Whether the link satisfies the hypothesis of the injectivity claim.
    pub link_is_sphere: bool,
    pub degrees: Vec<StarDegree>,
    pub injective: bool,
}

/// Ranks of `x_v * : A^m(st v) -> A^{m+1}(S)` for `m < d`, the star using
/// the restriction of the frame to its vertices.
pub fn star_multiplication<F: Field>(
    k: &SimplicialComplex,
    v: VertexId,
    frame: &GenericFrame<F>,
) -> Result<StarReport> {
    let d = k.pure_rank()?;
    let vf = Face::new(vec![v])?;
    if !k.contains_face(&vf) {
        return Err(Error::NotAFace(vec![v]));
    }
    let star = k.star(&vf)?;
    let star_ring = ChowRing::with_max_degree(&star, &frame.restrict(star.vertices().iter().copied())?, d - 1)?;
    let ring = ChowRing::new(k, frame)?;
    let xv = Monomial::var(v);
    let mut degrees = Vec::with_capacity(d);
    for m in 0..d {
        let source = star_ring.piece(m)?;
        let rows = source
            .basis()
            .map(|b| ring.coordinates(&ChowClass::monomial(b.mul(&xv), frame.one()).restrict_to(k)))
            .collect::<Result<Vec<_>>>()?;
        let rank = linalg::rank(&rows)?;
        degrees.push(StarDegree {
            m,
            rank,
            source_dim: source.dim(),
            target_dim: ring.piece(m + 1)?.dim(),
            injective: rank == source.dim(),
        });
    }
    Ok(StarReport {
        vertex: v,
        link_is_sphere: k.link(&vf)?.is_homology_sphere_f2(),
        injective: degrees.iter().all(|x| x.injective),
        degrees,
    })
}

/// The suspension `S' = {v+, v-} * S` with `d + 1` coordinates per vertex
/// (indices `0..=d`), the frame `c_{v,j} = a_{v+,0} a_{v,j} + a_{v+,j} a_{v,0}`
/// (`j = 1..d`) it induces on `S` through the star of `v+`, and the element
/// `l = a_{v+,0}^{-1} sum_v a_{v,0} x_v` of `A^1(S)`.
#[derive(Clone, Debug)]
pub struct SuspensionElement {
    pub suspension: SimplicialComplex,
    pub plus: VertexId,
    pub minus: VertexId,
    pub full_frame: GenericFrame<Gf2k>,
    pub induced_frame: GenericFrame<Gf2k>,
    pub element: ChowClass<Gf2k>,
}

pub fn suspension_lefschetz_element(k: &SimplicialComplex, field: Gf2kField, seed: u64) -> Result<SuspensionElement> {
    let d = k.pure_rank()?;
    let top = k.vertices().last().copied().ok_or(Error::EmptyComplex)?;
    let (plus, minus) = (top + 1, top + 2);
    let suspension = k.suspension(plus, minus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: BTreeMap<VertexId, Vec<Gf2k>> = suspension
        .vertices()
        .iter()
        .map(|&v| (v, (0..=d).map(|_| field.random(&mut rng)).collect()))
        .collect();
    let full_frame = GenericFrame::new(d + 1, coords, FrameMode::Specialized)?;
    let ap = full_frame.coords(plus)?.to_vec();
    if ap[0].is_zero() {
        return Err(Error::ConeParameterDegenerate);
    }
    let inv = ap[0].inv()?;
    let mut induced = BTreeMap::new();
    let mut element = ChowClass::zero(1);
    for &v in k.vertices() {
        let av = full_frame.coords(v)?;
        induced.insert(v, (1..=d).map(|j| ap[0] * av[j] + ap[j] * av[0]).collect());
        element.add_term(Monomial::var(v), inv * av[0]);
    }
    Ok(SuspensionElement {
        suspension,
        plus,
        minus,
        induced_frame: GenericFrame::new(d, induced, FrameMode::Specialized)?,
        full_frame,
        element,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Specialization;
    use crate::corpus;
    use crate::lefschetz::random_class;

    fn field() -> Gf2kField {
        Gf2kField::new(64).unwrap()
    }

    fn cone_setup(k: &SimplicialComplex, seed: u64) -> ConeTransfer<Gf2k> {
        let apex = k.vertices().last().unwrap() + 1;
        let mut verts = k.vertices().to_vec();
        verts.push(apex);
        let s = Specialization::draw(&verts, k.pure_rank().unwrap() + 1, field(), seed).unwrap();
        ConeTransfer::new(k, apex, &s.frame).unwrap()
    }

    #[test]
    fn cone_round_trips() {
        for k in [corpus::cycle(5), corpus::cross_polytope(3)] {
            let t = cone_setup(&k, 3);
            assert_eq!(t.base().dims(), t.cone().dims()[..t.base().dims().len()].to_vec());
            let one = t.base().one();
            assert_eq!(t.into_cone(&one).unwrap(), t.cone().one());
            for m in 0..=k.pure_rank().unwrap() {
                let x = t.base().reduce(&random_class(&k, m, field(), m as u64)).unwrap();
                let there = cone_transfer(&t, ConeDirection::IntoCone, &x).unwrap();
                assert_eq!(cone_transfer(&t, ConeDirection::OutOfCone, &there).unwrap(), x);
                let y = t
                    .cone()
                    .reduce(&random_class(t.cone().complex(), m, field(), 9 + m as u64))
                    .unwrap();
                assert_eq!(t.into_cone(&t.out_of_cone(&y).unwrap()).unwrap(), y);
            }
        }
    }

    #[test]
    fn degenerate_apex_rejected() {
        let k = corpus::cycle(4);
        let s = Specialization::draw(&[1, 2, 3, 4], 3, field(), 1).unwrap();
        let frame = s.frame.with_vertex(9, vec![field().zero(); 3]).unwrap();
        assert_eq!(
            ConeTransfer::new(&k, 9, &frame).unwrap_err(),
            Error::ConeParameterDegenerate
        );
    }

    #[test]
    fn star_injective_on_octahedron() {
        let k = corpus::cross_polytope(3);
        let s = Specialization::for_complex(&k, field(), 4).unwrap();
        for v in 1..=6 {
            let r = star_multiplication(&k, v, &s.frame).unwrap();
            assert!(r.link_is_sphere && r.injective, "{r:?}");
            assert_eq!(
                r.degrees.iter().map(|x| x.source_dim).collect::<Vec<_>>(),
                vec![1, 2, 1]
            );
            // top degree: x_tau maps to a facet monomial
            assert_eq!(r.degrees[2].rank, 1);
        }
    }

    #[test]
    fn suspension_element_formulas() {
        let k = corpus::cycle(5);
        let s = suspension_lefschetz_element(&k, field(), 8).unwrap();
        assert_eq!(s.suspension.link(&Face::new(vec![s.plus]).unwrap()).unwrap(), k);
        let ap = s.full_frame.coords(s.plus).unwrap();
        for &v in k.vertices() {
            let av = s.full_frame.coords(v).unwrap();
            assert_eq!(
                *s.element.coeff(&Monomial::var(v)).unwrap(),
                av[0] * ap[0].inv().unwrap()
            );
            for j in 1..=2 {
                assert_eq!(
                    s.induced_frame.coord(v, j - 1).unwrap(),
                    &(ap[0] * av[j] + ap[j] * av[0])
                );
            }
        }
        // the same data comes out of the cone map on the star of v+
        let star = s.suspension.star(&Face::new(vec![s.plus]).unwrap()).unwrap();
        let t = ConeTransfer::new(
            &k,
            s.plus,
            &s.full_frame.restrict(star.vertices().iter().copied()).unwrap(),
        )
        .unwrap();
        assert_eq!(t.pivot_coordinate(), 0);
        assert_eq!(t.induced_frame().coords(1).unwrap(), s.induced_frame.coords(1).unwrap());
        assert_eq!(t.apex_image(), &s.element);
        let full = ChowRing::new(&s.suspension, &s.full_frame).unwrap();
        let h: Vec<usize> = s.suspension.h_vector().unwrap().iter().map(|&x| x as usize).collect();
        assert_eq!(full.dims(), h);
    }
}
