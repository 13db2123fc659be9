//! Graded pieces of `A(S) = K[S] / (I_S + M)`, where `M` is spanned by the
//! frame's linear forms, together with displacement to square-free
//! monomials and the pairing into the top degree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::frame::GenericFrame;
use crate::linalg::{self, SparseEchelon};
use crate::scalar::Field;
use crate::volume::VolumeFunctional;

/// A monomial `prod x_v^{e_v}` with positive exponents, sorted by vertex.
///
/// Ordered by support first and exponent vector second.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VertexId, u32)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .map(|p| p.0)
            .cmp(other.0.iter().map(|p| p.0))
            .then_with(|| self.0.iter().map(|p| p.1).cmp(other.0.iter().map(|p| p.1)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, &(v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: VertexId) -> Self {
        Self(vec![(v, 1)])
    }

    /// `x_S`.
    pub fn square_free(face: &Face) -> Self {
        Self(face.vertices().iter().map(|&v| (v, 1)).collect())
    }

    /// Merges repeated vertices; zero exponents are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Self(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(VertexId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|p| p.1 as usize).sum()
    }

    pub fn exponent(&self, v: VertexId) -> u32 {
        self.0.binary_search_by_key(&v, |p| p.0).map_or(0, |i| self.0[i].1)
    }

    pub fn support(&self) -> Face {
        Face::new(self.0.iter().map(|p| p.0).collect()).expect("sorted distinct support")
    }

    fn support_slice(&self) -> Vec<VertexId> {
        self.0.iter().map(|p| p.0).collect()
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|p| p.1 == 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.0.iter().chain(&other.0).copied())
    }

    pub fn mul_var(&self, v: VertexId) -> Monomial {
        self.mul(&Monomial::var(v))
    }

    pub fn div_var(&self, v: VertexId) -> Option<Monomial> {
        let i = self.0.binary_search_by_key(&v, |p| p.0).ok()?;
        let mut out = self.clone();
        if out.0[i].1 == 1 {
            out.0.remove(i);
        } else {
            out.0[i].1 -= 1;
        }
        Some(out)
    }

    /// Whether the support is a face, i.e. the monomial survives in `K[S]`.
    pub fn is_on(&self, k: &SimplicialComplex) -> bool {
        k.is_face(&self.support_slice())
    }

    /// Displacement measure: `sum (e_v - 1) + |supp n gamma|`.
    pub fn delta(&self, gamma: &Face) -> u32 {
        self.0.iter().map(|&(v, e)| e - 1 + gamma.contains(v) as u32).sum()
    }
}

/// A homogeneous element of `K[S]` standing for its class in `A(S)`.
#[derive(Clone, PartialEq)]
pub struct ChowClass<F> {
    degree: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: fmt::Debug> fmt::Debug for ChowClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (degree {})", self.degree);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{m}")?;
        }
        Ok(())
    }
}

/// Serialized as `{"degree": m, "terms": {"x1*x3^2": coeff, ..}}`.
impl<F: serde::Serialize> serde::Serialize for ChowClass<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: BTreeMap<String, &F> = self.terms.iter().map(|(m, c)| (m.to_string(), c)).collect();
        let mut st = s.serialize_struct("ChowClass", 2)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<F: Field> ChowClass<F> {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Monomial, coeff: F) -> Self {
        let mut c = Self::zero(m.degree());
        c.add_term(m, coeff);
        c
    }

    /// Sum of `coeff * monomial`; all monomials must share one degree.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Result<Self> {
        let mut c = Self::zero(degree);
        for (m, x) in terms {
            if m.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: m.degree(),
                });
            }
            c.add_term(m, x);
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&F> {
        self.terms.get(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Zero as a polynomial (not necessarily as a class; see
    /// [`ChowRing::is_zero`]).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, x: F) {
        debug_assert_eq!(m.degree(), self.degree);
        if x.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(y) => {
                *y = y.add(&x);
                if y.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, x);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.degree != self.degree && !other.is_empty() && !self.is_empty() {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = if self.is_empty() {
            Self::zero(other.degree)
        } else {
            self.clone()
        };
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.mul(s));
        }
        out
    }

    /// Polynomial product (non-face monomials are kept).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                out.add_term(m.mul(n), x.mul(y));
            }
        }
        out
    }

    pub fn mul_monomial(&self, n: &Monomial) -> Self {
        let mut out = Self::zero(self.degree + n.degree());
        for (m, x) in &self.terms {
            out.add_term(m.mul(n), x.clone());
        }
        out
    }

    /// Squares coefficientwise (Frobenius: no cross terms in characteristic 2).
    pub fn square(&self) -> Self {
        let mut out = Self::zero(2 * self.degree);
        for (m, x) in &self.terms {
            out.add_term(m.mul(m), x.square());
        }
        out
    }

    pub fn pow(&self, e: usize, one: &F) -> Self {
        let mut acc = Self::monomial(Monomial::one(), one.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drops monomials whose support is not a face of `k`.
    pub fn restrict_to(&self, k: &SimplicialComplex) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.is_on(k))
                .map(|(m, x)| (m.clone(), x.clone()))
                .collect(),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> ChowClass<G> {
        let mut out = ChowClass::zero(self.degree);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), f(x));
        }
        out
    }
}

/// Every degree-`m` monomial supported on a face, in monomial order.
pub fn monomials_of_degree(k: &SimplicialComplex, m: usize) -> Vec<Monomial> {
    if m == 0 {
        return vec![Monomial::one()];
    }
    let mut out = Vec::new();
    for size in 1..=m {
        for face in k.faces_of_dim(size as isize - 1) {
            compositions(m, size, &mut |exps| {
                out.push(Monomial(
                    face.vertices().iter().copied().zip(exps.iter().copied()).collect(),
                ));
            });
        }
    }
    out.sort();
    out
}

/// Calls `f` on every way to write `total` as an ordered sum of `parts`
/// positive integers.
fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(left: usize, parts: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if parts == 1 {
            cur.push(left as u32);
            f(cur);
            cur.pop();
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            cur.push(first as u32);
            rec(left - first, parts - 1, cur, f);
            cur.pop();
        }
    }
    if parts == 0 || parts > total {
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), f);
}

/// `A^m` as the span of the degree-`m` face monomials modulo the relations
/// `l_j * mu` for degree `m - 1` monomials `mu`.
///
/// Elimination prefers pivots on monomials with a repeated vertex, then on
/// later monomials, so the surviving basis is square-free wherever possible.
#[derive(Clone, Debug)]
pub struct GradedPiece<F> {
    m: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    echelon: SparseEchelon<F>,
    basis: Vec<usize>,
    relation_rows: usize,
    zero: F,
}

impl<F: Field> GradedPiece<F> {
    pub fn build(k: &SimplicialComplex, frame: &GenericFrame<F>, m: usize) -> Result<Self> {
        let monomials = monomials_of_degree(k, m);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut echelon = SparseEchelon::new();
        let mut relation_rows = 0;
        if m > 0 {
            let square_free: Vec<bool> = monomials.iter().map(Monomial::is_square_free).collect();
            let priority = |c: usize| (!square_free[c], c);
            let forms: Vec<BTreeMap<VertexId, F>> = (0..frame.d()).map(|j| frame.linear_form(j)).collect();
            for mu in monomials_of_degree(k, m - 1) {
                for form in &forms {
                    let mut row = BTreeMap::new();
                    for (&v, a) in form {
                        if a.is_zero() {
                            continue;
                        }
                        if let Some(&c) = index.get(&mu.mul_var(v)) {
                            row.insert(c, a.clone());
                        }
                    }
                    relation_rows += 1;
                    echelon.insert(row, priority)?;
                }
            }
        }
        let basis = (0..monomials.len()).filter(|&c| !echelon.is_pivot(c)).collect();
        Ok(Self {
            m,
            monomials,
            index,
            echelon,
            basis,
            relation_rows,
            zero: frame.zero(),
        })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn relation_rows(&self) -> usize {
        self.relation_rows
    }

    pub fn spanning_monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn basis(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.basis.iter().map(|&c| &self.monomials[c])
    }

    /// Coordinates in the basis.
    pub fn coordinates(&self, x: &ChowClass<F>) -> Result<Vec<F>> {
        if !x.is_empty() && x.degree() != self.m {
            return Err(Error::DegreeMismatch {
                expected: self.m,
                got: x.degree(),
            });
        }
        let row: BTreeMap<usize, F> = x
            .terms()
            .filter_map(|(m, c)| self.index.get(m).map(|&i| (i, c.clone())))
            .collect();
        let reduced = self.echelon.reduce(row);
        Ok(self
            .basis
            .iter()
            .map(|c| reduced.get(c).cloned().unwrap_or_else(|| self.zero.clone()))
            .collect())
    }

    pub fn from_coordinates(&self, coords: &[F]) -> ChowClass<F> {
        let mut out = ChowClass::zero(self.m);
        for (&c, x) in self.basis.iter().zip(coords) {
            out.add_term(self.monomials[c].clone(), x.clone());
        }
        out
    }

    /// Normal form: the same class written over the basis monomials.
    pub fn reduce(&self, x: &ChowClass<F>) -> Result<ChowClass<F>> {
        if x.is_empty() {
            return Ok(ChowClass::zero(self.m));
        }
        Ok(self.from_coordinates(&self.coordinates(x)?))
    }
}

/// The Artinian reduction with every graded piece up to `max_degree` built.
#[derive(Clone, Debug)]
pub struct ChowRing<F> {
    complex: SimplicialComplex,
    frame: GenericFrame<F>,
    pieces: Vec<GradedPiece<F>>,
}

impl<F: Field> ChowRing<F> {
    /// Pieces `A^0 .. A^d`.
    pub fn new(k: &SimplicialComplex, frame: &GenericFrame<F>) -> Result<Self> {
        Self::with_max_degree(k, frame, frame.d())
    }

    pub fn with_max_degree(k: &SimplicialComplex, frame: &GenericFrame<F>, max: usize) -> Result<Self> {
        let d = k.pure_rank()?;
        if d != frame.d() {
            return Err(Error::DegreeMismatch {
                expected: d,
                got: frame.d(),
            });
        }
        for &v in k.vertices() {
            frame.coords(v)?;
        }
        let pieces = (0..=max)
            .map(|m| GradedPiece::build(k, frame, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            complex: k.clone(),
            frame: frame.clone(),
            pieces,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn frame(&self) -> &GenericFrame<F> {
        &self.frame
    }

    pub fn d(&self) -> usize {
        self.frame.d()
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn piece(&self, m: usize) -> Result<&GradedPiece<F>> {
        self.pieces.get(m).ok_or(Error::DegreeMismatch {
            expected: self.max_degree(),
            got: m,
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(GradedPiece::dim).collect()
    }

    pub fn one(&self) -> ChowClass<F> {
        ChowClass::monomial(Monomial::one(), self.frame.one())
    }

    /// The class of a monomial; its support must be a face.
    pub fn class_of(&self, m: &Monomial) -> Result<ChowClass<F>> {
        if !m.is_on(&self.complex) {
            return Err(Error::NotAFace(m.support_slice()));
        }
        Ok(ChowClass::monomial(m.clone(), self.frame.one()))
    }

    /// `l_j` as a degree-one class.
    pub fn linear_form(&self, j: usize) -> ChowClass<F> {
        let mut out = ChowClass::zero(1);
        for (v, a) in self.frame.linear_form(j) {
            out.add_term(Monomial::var(v), a);
        }
        out
    }

    pub fn coordinates(&self, x: &ChowClass<F>) -> Result<Vec<F>> {
        self.piece(x.degree())?.coordinates(x)
    }

    pub fn reduce(&self, x: &ChowClass<F>) -> Result<ChowClass<F>> {
        self.piece(x.degree())?.reduce(x)
    }

    pub fn is_zero(&self, x: &ChowClass<F>) -> Result<bool> {
        Ok(self.reduce(x)?.is_empty())
    }

    pub fn multiply(&self, a: &ChowClass<F>, b: &ChowClass<F>) -> Result<ChowClass<F>> {
        self.reduce(&a.mul(b).restrict_to(&self.complex))
    }

    /// Matrix of `x * -: A^m -> A^{m + deg x}`, one row per basis element
    /// of `A^m`.
    pub fn multiplication_matrix(&self, x: &ChowClass<F>, m: usize) -> Result<Vec<Vec<F>>> {
        self.piece(m + x.degree())?;
        self.piece(m)?
            .basis()
            .map(|b| self.coordinates(&x.mul_monomial(b).restrict_to(&self.complex)))
            .collect()
    }

    pub fn multiplication_rank(&self, x: &ChowClass<F>, m: usize) -> Result<usize> {
        linalg::rank(&self.multiplication_matrix(x, m)?)
    }

    /// `Vol(b_i c_j)` over the bases of `A^m` and `A^{d-m}`.
    pub fn pairing_matrix(&self, vol: &VolumeFunctional<F>, m: usize) -> Result<Vec<Vec<F>>> {
        let d = self.d();
        if m > d {
            return Err(Error::DegreeMismatch { expected: d, got: m });
        }
        let left: Vec<Monomial> = self.piece(m)?.basis().cloned().collect();
        let right: Vec<Monomial> = self.piece(d - m)?.basis().cloned().collect();
        left.iter()
            .map(|b| right.iter().map(|c| vol.monomial(&b.mul(c))).collect())
            .collect()
    }

    pub fn pairing_nondegenerate(&self, vol: &VolumeFunctional<F>, m: usize) -> Result<bool> {
        let mat = self.pairing_matrix(vol, m)?;
        let (rows, cols) = (self.piece(m)?.dim(), self.piece(self.d() - m)?.dim());
        if rows != cols {
            return Ok(false);
        }
        Ok(rows == 0 || linalg::rank(&mat)? == rows)
    }

    pub fn displace(&self, x: &ChowClass<F>, gamma: &Face, tau: Option<&Face>) -> Result<Displaced<F>> {
        displace(&self.complex, &self.frame, x, gamma, tau)
    }
}

/// Result of [`displace`].
#[derive(Clone, Debug)]
pub struct Displaced<F> {
    pub class: ChowClass<F>,
    /// Rewriting steps spent lowering the displacement measure.
    pub square_free_steps: usize,
    /// Rewriting steps spent walking link facets towards `tau`.
    pub path_steps: usize,
}

/// Rewrites `x` (degree `m`) as a combination of square-free monomials
/// with supports disjoint from `gamma`, `|gamma| = d - m`.
///
/// Each step multiplies `x / x_v` by a form `l` in `M` with `e_v(l) = 1`
/// and `e_u(l) = 0` on the rest of `supp(x) u gamma`. With `tau` in the link
/// of `gamma`, facets of the link are then pushed along a facet path until
/// `tau` is the only one left.
///
/// Generic over the scalar backend, so it also runs over lifted frames.
pub fn displace<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    x: &ChowClass<F>,
    gamma: &Face,
    tau: Option<&Face>,
) -> Result<Displaced<F>> {
    let d = frame.d();
    let m = x.degree();
    if gamma.len() + m != d {
        return Err(Error::DegreeMismatch {
            expected: d - gamma.len().min(d),
            got: m,
        });
    }
    if !k.contains_face(gamma) {
        return Err(Error::NotAFace(gamma.vertices().to_vec()));
    }
    let mut todo = x.restrict_to(k);
    let mut done = ChowClass::zero(m);
    let mut square_free_steps = 0;
    while let Some((mono, c)) = todo.terms.pop_first() {
        if mono.delta(gamma) == 0 {
            done.add_term(mono, c);
            continue;
        }
        for (next, e) in displacement_step(k, frame, &mono, gamma)?.terms {
            todo.add_term(next, c.mul(&e));
        }
        square_free_steps += 1;
    }
    let mut path_steps = 0;
    if let Some(tau) = tau {
        path_steps = walk_to(k, frame, &mut done, gamma, tau)?;
    }
    Ok(Displaced {
        class: done,
        square_free_steps,
        path_steps,
    })
}

/// One rewrite of a monomial with positive displacement measure; every
/// monomial of the result has measure exactly one less.
pub fn displacement_step<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    mono: &Monomial,
    gamma: &Face,
) -> Result<ChowClass<F>> {
    let v = mono
        .pairs()
        .iter()
        .map(|p| p.0)
        .find(|&v| mono.exponent(v) >= 2 || gamma.contains(v))
        .ok_or_else(|| Error::InvalidArgument(format!("{mono} is already displaced")))?;
    let fixed = mono.support().union(gamma);
    let form = solve_form(frame, fixed.vertices(), v)?;
    let rest = mono.div_var(v).expect("v in support");
    let mut out = ChowClass::zero(mono.degree());
    for &u in k.vertices() {
        if fixed.contains(u) {
            continue;
        }
        let e = evaluate_form(frame, &form, u)?;
        let next = rest.mul_var(u);
        if !e.is_zero() && next.is_on(k) {
            out.add_term(next, e);
        }
    }
    Ok(out)
}

/// Coefficients `c` of `l = sum_j c_j l_j` with `e_v(l) = 1` and `e_u(l) = 0`
/// for the other `u` in `fixed`, using only the first `|fixed|` forms.
fn solve_form<F: Field>(frame: &GenericFrame<F>, fixed: &[VertexId], v: VertexId) -> Result<Vec<F>> {
    let n = fixed.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for &u in fixed {
        a.push(frame.coords(u)?[..n].to_vec());
        b.push(if u == v { frame.one() } else { frame.zero() });
    }
    linalg::solve(&a, &b)
}

fn evaluate_form<F: Field>(frame: &GenericFrame<F>, form: &[F], u: VertexId) -> Result<F> {
    let a = frame.coords(u)?;
    Ok(form.iter().zip(a).fold(frame.zero(), |acc, (c, x)| acc.add(&c.mul(x))))
}

fn walk_to<F: Field>(
    k: &SimplicialComplex,
    frame: &GenericFrame<F>,
    x: &mut ChowClass<F>,
    gamma: &Face,
    tau: &Face,
) -> Result<usize> {
    let link = k.link(gamma)?;
    let facets = link.facets();
    let Some(root) = facets.iter().position(|f| f == tau) else {
        return Err(Error::InvalidArgument(format!(
            "{:?} is not a facet of the link of {:?}",
            tau.vertices(),
            gamma.vertices()
        )));
    };
    let parent = link.facet_bfs(root);
    let index: HashMap<&Face, usize> = facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let limit = 64 * (x.len() + 1) * facets.len().max(1);
    let mut steps = 0;
    loop {
        let next = x.terms().filter(|(m, _)| m.is_square_free()).find_map(|(m, c)| {
            let s = m.support();
            index
                .get(&s)
                .filter(|&&i| i != root)
                .map(|&i| (m.clone(), c.clone(), i))
        });
        let Some((mono, c, i)) = next else { break };
        steps += 1;
        if steps > limit {
            return Err(Error::NotNormalPseudomanifold("facet path does not terminate".into()));
        }
        let p = parent[i].ok_or_else(|| {
            Error::NotNormalPseudomanifold(format!("link of {:?} is not strongly connected", gamma.vertices()))
        })?;
        let (minus, plus) = (&facets[i], &facets[p]);
        let kappa = Face::new(minus.vertices().iter().copied().filter(|&v| plus.contains(v)).collect())?;
        let ridge = kappa.union(gamma);
        if k.facets_containing(&ridge).count() != 2 {
            return Err(Error::NotNormalPseudomanifold(format!(
                "ridge {:?} does not lie in exactly two facets",
                ridge.vertices()
            )));
        }
        let v_minus = minus.minus(&kappa).vertices()[0];
        let fixed = ridge.with(v_minus);
        let form = solve_form(frame, fixed.vertices(), v_minus)?;
        x.terms.remove(&mono);
        let base = Monomial::square_free(&kappa);
        for &u in k.vertices() {
            if fixed.contains(u) {
                continue;
            }
            let e = evaluate_form(frame, &form, u)?;
            let next = base.mul_var(u);
            if !e.is_zero() && next.is_on(k) {
                x.add_term(next, c.mul(&e));
            }
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::{Gf2k, Gf2kField};
    use proptest::prelude::*;

    fn field() -> Gf2kField {
        Gf2kField::new(64).unwrap()
    }

    fn ring(k: &SimplicialComplex, seed: u64) -> ChowRing<Gf2k> {
        let d = k.pure_rank().unwrap();
        let fr = GenericFrame::fresh_specialization(k.vertices().iter().copied(), d, field(), seed).unwrap();
        ChowRing::with_max_degree(k, &fr, d + 1).unwrap()
    }

    /// Brute force: every exponent vector over all vertices with the given
    /// total, kept when its support is a face.
    fn brute_force_count(k: &SimplicialComplex, m: usize) -> usize {
        let n = k.vertices().len();
        let mut count = 0;
        let mut exps = vec![0u32; n];
        fn rec(i: usize, left: u32, exps: &mut Vec<u32>, k: &SimplicialComplex, count: &mut usize) {
            if i == exps.len() {
                if left == 0 {
                    let supp: Vec<u32> = exps
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(j, _)| k.vertices()[j])
                        .collect();
                    if k.is_face(&supp) {
                        *count += 1;
                    }
                }
                return;
            }
            for e in 0..=left {
                exps[i] = e;
                rec(i + 1, left - e, exps, k, count);
            }
            exps[i] = 0;
        }
        rec(0, m as u32, &mut exps, k, &mut count);
        count
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(&corpus::cycle(4), 0), vec![Monomial::one()]);
        assert_eq!(monomials_of_degree(&corpus::cycle(4), 2).len(), 8);
        let b3 = corpus::boundary_simplex(3);
        for m in 0..=4 {
            assert_eq!(monomials_of_degree(&b3, m).len(), brute_force_count(&b3, m));
        }
        let ms = monomials_of_degree(&corpus::cross_polytope(3), 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn monomial_order_is_support_then_exponents() {
        let a = Monomial::from_pairs([(1, 2)]);
        let b = Monomial::from_pairs([(1, 1), (2, 1)]);
        let c = Monomial::from_pairs([(2, 2)]);
        assert!(a < b && b < c);
        assert!(Monomial::from_pairs([(1, 1), (2, 2)]) < Monomial::from_pairs([(1, 2), (2, 1)]));
        assert_eq!(format!("{}", Monomial::from_pairs([(3, 2), (1, 1)])), "x1*x3^2");
    }

    #[test]
    fn octahedron_dimensions() {
        let k = corpus::cross_polytope(3);
        let r = ring(&k, 5);
        assert_eq!(r.piece(1).unwrap().spanning_monomials().len(), 6);
        assert_eq!(r.piece(1).unwrap().relation_rows(), 3);
        assert_eq!(r.dims(), vec![1, 3, 3, 1, 0]);
    }

    #[test]
    fn basis_is_square_free() {
        for (_, k) in corpus::sphere_corpus() {
            let r = ring(&k, 8);
            for m in 0..=r.d() {
                assert!(r.piece(m).unwrap().basis().all(Monomial::is_square_free));
            }
        }
    }

    #[test]
    fn reduction_kills_relations_and_keeps_facets() {
        let k = corpus::icosahedron();
        let r = ring(&k, 3);
        let x = r.class_of(&Monomial::from_pairs([(1, 1), (2, 1)])).unwrap();
        for j in 0..3 {
            assert!(r.is_zero(&r.linear_form(j).mul(&x).restrict_to(&k)).unwrap());
        }
        for f in k.facets() {
            assert!(!r.is_zero(&r.class_of(&Monomial::square_free(f)).unwrap()).unwrap());
        }
        let zero = ChowClass::zero(2);
        assert!(r.reduce(&zero).unwrap().is_empty());
        let y = r.class_of(&Monomial::from_pairs([(1, 2)])).unwrap();
        let ny = r.reduce(&y).unwrap();
        assert_eq!(r.reduce(&ny).unwrap(), ny);
    }

    #[test]
    fn multiply_by_one_and_non_faces() {
        let k = corpus::cycle(4);
        let r = ring(&k, 1);
        let x = r.class_of(&Monomial::var(2)).unwrap();
        assert_eq!(r.multiply(&r.one(), &x).unwrap(), r.reduce(&x).unwrap());
        let a = r.class_of(&Monomial::var(1)).unwrap();
        let b = r.class_of(&Monomial::var(3)).unwrap();
        assert!(r.multiply(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn non_face_monomials_are_rejected() {
        let r = ring(&corpus::cycle(4), 1);
        assert!(matches!(
            r.class_of(&Monomial::from_pairs([(1, 1), (3, 1)])),
            Err(Error::NotAFace(_))
        ));
    }

    #[test]
    fn polygon_square_displacement() {
        // x_j^2 = a_{j,1}^{-1} (a_{j-1,1} x_{j-1} x_j + a_{j+1,1} x_j x_{j+1})
        let k = corpus::cycle(5);
        let r = ring(&k, 21);
        let fr = r.frame();
        let (prev, j, next) = (2, 3, 4);
        let x = r.class_of(&Monomial::from_pairs([(j, 2)])).unwrap();
        let out = r.displace(&x, &Face::empty(), None).unwrap().class;
        let inv = fr.coord(j, 0).unwrap().inv().unwrap();
        let expect = ChowClass::from_terms(
            2,
            [
                (
                    Monomial::from_pairs([(prev, 1), (j, 1)]),
                    inv * *fr.coord(prev, 0).unwrap(),
                ),
                (
                    Monomial::from_pairs([(j, 1), (next, 1)]),
                    inv * *fr.coord(next, 0).unwrap(),
                ),
            ],
        )
        .unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn displacement_of_square_free_input_is_identity() {
        let k = corpus::cross_polytope(3);
        let r = ring(&k, 2);
        let x = r.class_of(&Monomial::from_pairs([(1, 1), (3, 1)])).unwrap();
        let gamma = Face::new(vec![5]).unwrap();
        let out = r.displace(&x, &gamma, Some(&Face::new(vec![1, 3]).unwrap())).unwrap();
        assert_eq!(out.class, x);
        assert_eq!(out.square_free_steps + out.path_steps, 0);
    }

    #[test]
    fn displacement_to_a_single_facet() {
        let k = corpus::icosahedron();
        let r = ring(&k, 4);
        let tau = k.facets()[7].clone();
        for mono in monomials_of_degree(&k, 3).iter().step_by(7) {
            let x = r.class_of(mono).unwrap();
            let out = r.displace(&x, &Face::empty(), Some(&tau)).unwrap().class;
            assert!(out.terms().all(|(m, _)| *m == Monomial::square_free(&tau)));
            assert_eq!(r.reduce(&out).unwrap(), r.reduce(&x).unwrap());
        }
    }

    #[test]
    fn link_must_reach_tau() {
        // two triangles sharing a vertex: the link of that vertex is two
        // disjoint edges
        let k = SimplicialComplex::from_facets(vec![vec![1, 2, 3], vec![1, 4, 5]]).unwrap();
        let fr = GenericFrame::fresh_specialization(1..=5, 3, field(), 9).unwrap();
        let x = ChowClass::monomial(Monomial::from_pairs([(4, 1), (5, 1)]), fr.one());
        let gamma = Face::new(vec![1]).unwrap();
        let err = displace(&k, &fr, &x, &gamma, Some(&Face::new(vec![2, 3]).unwrap())).unwrap_err();
        assert!(matches!(err, Error::NotNormalPseudomanifold(_)));
    }

    #[test]
    fn poincare_duality_of_dimensions() {
        for (_, k) in corpus::sphere_corpus() {
            let dims = ring(&k, 6).dims();
            let d = k.pure_rank().unwrap();
            for m in 0..=d {
                assert_eq!(dims[m], dims[d - m]);
            }
            assert_eq!(dims[d + 1], 0);
        }
    }

    #[test]
    fn pairing_matrices() {
        let k = corpus::cross_polytope(3);
        let r = ring(&k, 12);
        let y = crate::volume::random_point(field(), 3, 99);
        let vol = VolumeFunctional::new(&k, r.frame(), y).unwrap();
        assert_eq!(r.pairing_matrix(&vol, 1).unwrap().len(), 3);
        for m in 0..=3 {
            assert!(r.pairing_nondegenerate(&vol, m).unwrap());
        }
    }

    fn random_class(r: &ChowRing<Gf2k>, m: usize, seed: u64) -> ChowClass<Gf2k> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = field();
        let monos = r.piece(m).unwrap().spanning_monomials().to_vec();
        ChowClass::from_terms(m, monos.into_iter().map(|x| (x, f.random(&mut rng)))).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn multiplication_is_associative(seed in any::<u64>()) {
            let k = corpus::cross_polytope(3);
            let r = ring(&k, seed);
            let (a, b, c) = (random_class(&r, 1, seed ^ 1), random_class(&r, 1, seed ^ 2), random_class(&r, 1, seed ^ 3));
            let left = r.multiply(&r.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = r.multiply(&a, &r.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn displacement_preserves_the_class(seed in any::<u64>(), m in 1usize..=3, pick in any::<prop::sample::Index>()) {
            let k = corpus::cross_polytope(3);
            let r = ring(&k, seed);
            let x = random_class(&r, m, seed);
            let gammas = k.faces_of_dim(3 - m as isize - 1);
            let gamma = gammas[pick.index(gammas.len())].clone();
            let link = k.link(&gamma).unwrap();
            let tau = link.facets()[pick.index(link.facets().len())].clone();
            let out = r.displace(&x, &gamma, Some(&tau)).unwrap();
            prop_assert_eq!(r.reduce(&out.class).unwrap(), r.reduce(&x).unwrap());
            for (mono, _) in out.class.terms() {
                prop_assert!(mono.is_square_free());
                prop_assert!(mono.support().is_disjoint(&gamma));
                if mono.support().union(&gamma).len() == 3 && k.contains_face(&mono.support().union(&gamma)) {
                    prop_assert_eq!(&mono.support(), &tau);
                }
            }
        }

        #[test]
        fn displacement_measure_drops_by_one(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
            let k = corpus::icosahedron();
            let fr = GenericFrame::fresh_specialization(k.vertices().iter().copied(), 3, field(), seed).unwrap();
            let monos: Vec<Monomial> = monomials_of_degree(&k, 2).into_iter().filter(|m| !m.is_square_free()).collect();
            let mono = &monos[pick.index(monos.len())];
            let gamma = Face::new(vec![mono.pairs()[0].0 % 12 + 1]).unwrap();
            let step = displacement_step(&k, &fr, mono, &gamma).unwrap();
            for (next, _) in step.terms() {
                prop_assert_eq!(next.delta(&gamma) + 1, mono.delta(&gamma));
            }
        }
    }
}
