//! Vertex coordinates `a_{v,j}`, bracket calculus and the derivations
//! `d_v^w = sum_j a_{w,j} d/d a_{v,j}`.
//!
//! The parameter space is `M = span(l_1, .., l_d)` with `l_j = sum_v a_{v,j} x_v`,
//! so `e_v(l_j) = a_{v,j}` and vertex `v` sits at `h(v) = sum_j a_{v,j} e_j`.
//! Brackets are determinants in the fixed basis `e_1, .., e_d`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{Face, VertexId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Embed, Field, Gf2k, Gf2kField, Jet, RationalFunction, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameMode {
    /// Every `a_{v,j}` is its own indeterminate.
    Exact,
    Specialized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericFrame<F> {
    d: usize,
    coords: BTreeMap<VertexId, Vec<F>>,
    mode: FrameMode,
}

/// A value computed from a frame by field operations only, so it can be
/// re-run over infinitesimally perturbed coordinates.
pub trait FrameFunction<F: Field> {
    fn eval<G: Field + Embed<F>>(&self, frame: &GenericFrame<G>) -> Result<G>;
}

/// The Courant function of `v` on a facet: zero when `v` is not a vertex of
/// the facet, otherwise the ratio `[sigma_v](y) / [sigma]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Courant<F> {
    Zero,
    Ratio { num: F, den: F },
}

impl<F: Field> GenericFrame<F> {
    pub fn new(d: usize, coords: BTreeMap<VertexId, Vec<F>>, mode: FrameMode) -> Result<Self> {
        if d == 0 || coords.is_empty() {
            return Err(Error::InvalidArgument(
                "a frame needs d >= 1 and at least one vertex".into(),
            ));
        }
        if let Some((v, c)) = coords.iter().find(|(_, c)| c.len() != d) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} has {} coordinates, expected {d}",
                c.len()
            )));
        }
        Ok(Self { d, coords, mode })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> FrameMode {
        self.mode
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.coords.keys().copied()
    }

    pub fn coords(&self, v: VertexId) -> Result<&[F]> {
        self.coords
            .get(&v)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidArgument(format!("vertex {v} has no coordinates")))
    }

    /// `a_{v,j}` with zero-based `j`.
    pub fn coord(&self, v: VertexId, j: usize) -> Result<&F> {
        Ok(&self.coords(v)?[j])
    }

    pub fn zero(&self) -> F {
        self.any().zero_like()
    }

    pub fn one(&self) -> F {
        self.any().one_like()
    }

    fn any(&self) -> &F {
        &self.coords.values().next().expect("nonempty frame")[0]
    }

    pub fn map<G>(&self, mut f: impl FnMut(VertexId, usize, &F) -> G) -> GenericFrame<G> {
        GenericFrame {
            d: self.d,
            coords: self
                .coords
                .iter()
                .map(|(&v, c)| (v, c.iter().enumerate().map(|(j, x)| f(v, j, x)).collect()))
                .collect(),
            mode: self.mode,
        }
    }

    pub fn restrict(&self, vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut coords = BTreeMap::new();
        for v in vertices {
            coords.insert(v, self.coords(v)?.to_vec());
        }
        Self::new(self.d, coords, self.mode)
    }

    /// Replaces (or adds) the coordinates of one vertex.
    pub fn with_vertex(mut self, v: VertexId, coords: Vec<F>) -> Result<Self> {
        if coords.len() != self.d {
            return Err(Error::InvalidArgument(format!("expected {} coordinates", self.d)));
        }
        self.coords.insert(v, coords);
        Ok(self)
    }

    /// Coefficients `e_v(l_j)` of the j-th linear form.
    pub fn linear_form(&self, j: usize) -> BTreeMap<VertexId, F> {
        self.coords.iter().map(|(&v, c)| (v, c[j].clone())).collect()
    }

    /// Determinant of the matrix with columns `h(v_1), .., h(v_d)`.
    pub fn bracket(&self, tuple: &[VertexId]) -> Result<F> {
        let cols = tuple
            .iter()
            .map(|&v| self.coords(v).map(<[F]>::to_vec))
            .collect::<Result<Vec<_>>>()?;
        self.det_of_columns(cols)
    }

    pub fn bracket_face(&self, face: &Face) -> Result<F> {
        self.bracket(face.vertices())
    }

    /// Bracket of the tuple with position `i` replaced by vertex `w`.
    pub fn bracket_sub(&self, tuple: &[VertexId], i: usize, w: VertexId) -> Result<F> {
        let mut t = tuple.to_vec();
        t[i] = w;
        self.bracket(&t)
    }

    /// Bracket of the tuple with position `i` replaced by an arbitrary
    /// point given in `e`-coordinates.
    pub fn bracket_with_point(&self, tuple: &[VertexId], i: usize, y: &[F]) -> Result<F> {
        let mut cols = tuple
            .iter()
            .map(|&v| self.coords(v).map(<[F]>::to_vec))
            .collect::<Result<Vec<_>>>()?;
        cols[i] = y.to_vec();
        self.det_of_columns(cols)
    }

    fn det_of_columns(&self, cols: Vec<Vec<F>>) -> Result<F> {
        if cols.len() != self.d || cols.iter().any(|c| c.len() != self.d) {
            return Err(Error::InvalidArgument(format!(
                "bracket needs {} points of dimension {}",
                self.d, self.d
            )));
        }
        linalg::determinant(&cols)
    }

    /// The Courant function of `v` on the facet `sigma`, at the point `y`.
    pub fn courant(&self, sigma: &Face, v: VertexId, y: &[F]) -> Result<Courant<F>> {
        let Some(i) = sigma.vertices().iter().position(|&u| u == v) else {
            return Ok(Courant::Zero);
        };
        Ok(Courant::Ratio {
            num: self.bracket_with_point(sigma.vertices(), i, y)?,
            den: self.bracket_face(sigma)?,
        })
    }

    /// Lifts to jets with one layer per pair, moving `v_i` by
    /// `eps_i * h(w_i)`. Pairs are applied in order against the already
    /// lifted coordinates, which realizes the composite `d_{v_1}^{w_1} ..
    /// d_{v_k}^{w_k}` with the first pair outermost.
    pub fn lift(&self, pairs: &[(VertexId, VertexId)]) -> Result<GenericFrame<Jet<F>>> {
        let layers = pairs.len() as u32;
        if layers > crate::scalar::MAX_JET_LAYERS {
            return Err(Error::InvalidArgument(format!("{layers} derivations requested")));
        }
        for (i, (v, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|(u, _)| u == v) {
                return Err(Error::InvalidArgument(format!("vertex {v} moved twice")));
            }
        }
        let mut lifted = self.map(|_, _, x| Jet::constant(x.clone(), layers));
        for (layer, &(v, w)) in pairs.iter().enumerate() {
            let target = lifted.coords(w)?.to_vec();
            let eps = Jet::with_slope(self.zero(), self.one(), layers, layer as u32);
            let moved: Vec<Jet<F>> = lifted
                .coords(v)?
                .iter()
                .zip(&target)
                .map(|(a, b)| a.add(&eps.mul(b)))
                .collect();
            lifted.coords.insert(v, moved);
        }
        Ok(lifted)
    }

    /// The iterated derivation `d_{v_1}^{w_1} .. d_{v_k}^{w_k} f` at this frame.
    pub fn derive_eval<Fun: FrameFunction<F>>(&self, pairs: &[(VertexId, VertexId)], f: &Fun) -> Result<F> {
        let lifted = self.lift(pairs)?;
        let value = f.eval(&lifted)?;
        value.check()?;
        Ok(value.top().clone())
    }
}

impl GenericFrame<Gf2k> {
    /// Every `a_{v,j}` uniform in GF(2^k), reproducible from the seed.
    pub fn fresh_specialization(
        vertices: impl IntoIterator<Item = VertexId>,
        d: usize,
        field: Gf2kField,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = vertices
            .into_iter()
            .map(|v| (v, (0..d).map(|_| field.random(&mut rng)).collect()))
            .collect();
        Self::new(d, coords, FrameMode::Specialized)
    }

    pub fn field(&self) -> Gf2kField {
        self.any().field()
    }

    /// Assignment of the exact frame's indeterminates to this frame's
    /// values (and of the auxiliary `y_j` to `aux`).
    pub fn assignment<'a>(&'a self, aux: &'a [Gf2k]) -> impl FnMut(Var) -> Option<Gf2k> + 'a {
        move |var| match var.as_frame() {
            Some((v, j)) => self.coords.get(&v).and_then(|c| c.get(j as usize)).copied(),
            None => aux.get(var.as_aux()? as usize).copied(),
        }
    }
}

impl GenericFrame<RationalFunction> {
    /// The exact frame: `a_{v,j}` is the indeterminate `a_<v>_<j>`.
    pub fn exact(vertices: impl IntoIterator<Item = VertexId>, d: usize) -> Result<Self> {
        let coords = vertices
            .into_iter()
            .map(|v| {
                (
                    v,
                    (0..d).map(|j| RationalFunction::var(Var::frame(v, j as u32))).collect(),
                )
            })
            .collect();
        Self::new(d, coords, FrameMode::Exact)
    }

    /// The auxiliary point `(y_1, .., y_d)` as indeterminates.
    pub fn aux_point(&self) -> Vec<RationalFunction> {
        (0..self.d).map(|j| RationalFunction::var(Var::aux(j as u32))).collect()
    }
}
