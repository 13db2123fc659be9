//! Simplicial complexes stored by their facets.
//!
//! A set of vertices is a face iff it is contained in some facet. Faces of
//! a given dimension are enumerated on demand; a hashed index of all faces
//! is built lazily on the first membership query.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// A face: strictly increasing vertex labels. The empty face has
/// dimension -1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<VertexId>);

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Face {
    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Sorts the labels; fails on repeats.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        let raw = vertices.clone();
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFacet(raw));
        }
        Ok(Face(vertices))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    pub fn union(&self, other: &Face) -> Face {
        let set: BTreeSet<_> = self.0.iter().chain(&other.0).copied().collect();
        Face(set.into_iter().collect())
    }

    pub fn minus(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn with(&self, v: VertexId) -> Face {
        let mut out = self.0.clone();
        if let Err(i) = out.binary_search(&v) {
            out.insert(i, v);
        }
        Face(out)
    }

    pub fn without(&self, v: VertexId) -> Face {
        Face(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// All subsets of size `k`, in lexicographic order.
    pub fn subsets(&self, k: usize) -> Vec<Face> {
        let n = self.0.len();
        if k > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(Face(idx.iter().map(|&i| self.0[i]).collect()));
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return out;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl From<Face> for Vec<VertexId> {
    fn from(f: Face) -> Self {
        f.0
    }
}

#[derive(Clone)]
pub struct SimplicialComplex {
    facets: Vec<Face>,
    vertices: Vec<VertexId>,
    absorbed: usize,
    face_index: OnceLock<HashSet<Face>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("facets", &self.facets)
            .finish()
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds a complex from facet lists. Non-maximal input faces are
    /// absorbed (counted in [`SimplicialComplex::absorbed_facets`]).
    pub fn from_facets<I, F>(facet_lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: Into<Vec<VertexId>>,
    {
        let mut faces = Vec::new();
        for list in facet_lists {
            faces.push(Face::new(list.into())?);
        }
        if faces.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(Self::from_faces(faces))
    }

    pub(crate) fn from_faces(mut faces: Vec<Face>) -> Self {
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let input = faces.len();
        let mut facets: Vec<Face> = Vec::new();
        for f in faces {
            if !facets.iter().any(|g| f.is_subset(g)) {
                facets.push(f);
            }
        }
        let absorbed = input - facets.len();
        facets.sort();
        let vertices: BTreeSet<_> = facets.iter().flat_map(|f| f.0.iter().copied()).collect();
        Self {
            facets,
            vertices: vertices.into_iter().collect(),
            absorbed,
            face_index: OnceLock::new(),
        }
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn absorbed_facets(&self) -> usize {
        self.absorbed
    }

    /// Dimension, i.e. one less than the largest facet size.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(Face::dim).max().unwrap_or(-1)
    }

    /// Facet size `d` of a pure complex.
    pub fn pure_rank(&self) -> Result<usize> {
        let d = self.facets.first().map_or(0, Face::len);
        if self.facets.iter().all(|f| f.len() == d) {
            Ok(d)
        } else {
            Err(Error::NotPure)
        }
    }

    pub fn is_pure(&self) -> bool {
        self.pure_rank().is_ok()
    }

    fn index(&self) -> &HashSet<Face> {
        self.face_index.get_or_init(|| {
            let mut set = HashSet::new();
            for f in &self.facets {
                for k in 0..=f.len() {
                    for s in f.subsets(k) {
                        set.insert(s);
                    }
                }
            }
            set
        })
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        if face.len() <= 1 {
            return face.is_empty() || self.vertices.binary_search(&face.0[0]).is_ok();
        }
        self.index().contains(face)
    }

    /// Membership test for an arbitrary (sorted, duplicate-free) slice.
    pub fn is_face(&self, vertices: &[VertexId]) -> bool {
        self.contains_face(&Face(vertices.to_vec()))
    }

    /// The `k`-dimensional faces, sorted. `k = -1` gives the empty face.
    pub fn faces_of_dim(&self, k: isize) -> Vec<Face> {
        if k < -1 {
            return Vec::new();
        }
        let size = (k + 1) as usize;
        let set: BTreeSet<Face> = self.facets.iter().flat_map(|f| f.subsets(size)).collect();
        set.into_iter().collect()
    }

    /// `(f_{-1}, f_0, .., f_{dim})`.
    pub fn f_vector(&self) -> Vec<u64> {
        (-1..=self.dim()).map(|k| self.faces_of_dim(k).len() as u64).collect()
    }

    /// `h(t) = sum_i f_{i-1} (t-1)^{d-i}`, expanded with exact integers.
    pub fn h_vector(&self) -> Result<Vec<i64>> {
        let d = self.pure_rank()?;
        Ok(h_from_f(&self.f_vector(), d))
    }

    pub fn facets_containing<'a>(&'a self, face: &'a Face) -> impl Iterator<Item = &'a Face> + 'a {
        self.facets.iter().filter(move |f| face.is_subset(f))
    }

    fn check_face(&self, face: &Face) -> Result<()> {
        if self.contains_face(face) {
            Ok(())
        } else {
            Err(Error::NotAFace(face.0.clone()))
        }
    }

    /// `lk(s) = { t : s u t in S, s n t = {} }`. The link of a facet is the
    /// complex whose only face is the empty face.
    pub fn link(&self, face: &Face) -> Result<SimplicialComplex> {
        self.check_face(face)?;
        let faces = self.facets_containing(face).map(|f| f.minus(face)).collect();
        Ok(Self::from_faces(faces))
    }

    /// `st(s) = { t : s u t in S }`, generated by the facets containing `s`.
    pub fn star(&self, face: &Face) -> Result<SimplicialComplex> {
        self.check_face(face)?;
        let faces = self.facets_containing(face).cloned().collect();
        Ok(Self::from_faces(faces))
    }

    pub fn cone(&self, apex: VertexId) -> Result<SimplicialComplex> {
        if self.vertices.contains(&apex) {
            return Err(Error::ApexInComplex(apex));
        }
        Ok(Self::from_faces(self.facets.iter().map(|f| f.with(apex)).collect()))
    }

    pub fn suspension(&self, plus: VertexId, minus: VertexId) -> Result<SimplicialComplex> {
        for v in [plus, minus] {
            if self.vertices.contains(&v) {
                return Err(Error::ApexInComplex(v));
            }
        }
        if plus == minus {
            return Err(Error::ApexInComplex(plus));
        }
        let faces = self.facets.iter().flat_map(|f| [f.with(plus), f.with(minus)]).collect();
        Ok(Self::from_faces(faces))
    }

    /// Join with a complex on disjoint labels.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        if let Some(v) = other.vertices.iter().find(|v| self.vertices.contains(v)) {
            return Err(Error::ApexInComplex(*v));
        }
        let mut faces = Vec::new();
        for f in &self.facets {
            for g in &other.facets {
                faces.push(f.union(g));
            }
        }
        Ok(Self::from_faces(faces))
    }

    /// Same complex with every label shifted by `offset`.
    pub fn relabel(&self, offset: VertexId) -> SimplicialComplex {
        Self::from_faces(
            self.facets
                .iter()
                .map(|f| Face(f.0.iter().map(|v| v + offset).collect()))
                .collect(),
        )
    }

    /// Facet adjacency through shared ridges, indexed like `facets()`.
    fn dual_graph(&self) -> Vec<Vec<usize>> {
        let mut by_ridge: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for &v in &f.0 {
                by_ridge.entry(f.without(v)).or_default().push(i);
            }
        }
        let mut adj = vec![Vec::new(); self.facets.len()];
        for ids in by_ridge.values() {
            for &a in ids {
                for &b in ids {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
        adj
    }

    /// Breadth-first search over the ridge-adjacency graph from facet
    /// `from`; returns parent pointers (`None` for unreached facets).
    pub(crate) fn facet_bfs(&self, from: usize) -> Vec<Option<usize>> {
        let adj = self.dual_graph();
        let mut parent = vec![None; self.facets.len()];
        parent[from] = Some(from);
        let mut queue = VecDeque::from([from]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if parent[b].is_none() {
                    parent[b] = Some(a);
                    queue.push_back(b);
                }
            }
        }
        parent
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.facets.is_empty() || self.facet_bfs(0).iter().all(Option::is_some)
    }

    /// Every ridge lies in exactly two facets and the dual graph is
    /// connected.
    pub fn is_pseudomanifold(&self) -> bool {
        let Ok(d) = self.pure_rank() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        let mut ridge_degree: BTreeMap<Face, usize> = BTreeMap::new();
        for f in &self.facets {
            for &v in &f.0 {
                *ridge_degree.entry(f.without(v)).or_default() += 1;
            }
        }
        ridge_degree.values().all(|&c| c == 2) && self.is_strongly_connected()
    }

    /// Connectivity of the 1-skeleton (a single vertex is connected; the
    /// complex `{{}}` is not).
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.first() else {
            return false;
        };
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for f in &self.facets {
            for &a in &f.0 {
                for &b in &f.0 {
                    if a != b {
                        adj.entry(a).or_default().push(b);
                    }
                }
            }
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &b in adj.get(&a).into_iter().flatten() {
                if seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Ranks of the GF(2) boundary maps; `ranks[k]` is the rank of
    /// `C_k -> C_{k-1}` for `k = 1..=dim` (entry 0 unused, always 0).
    fn boundary_ranks(&self) -> Vec<usize> {
        let dim = self.dim().max(0) as usize;
        let faces: Vec<Vec<Face>> = (0..=dim as isize).map(|k| self.faces_of_dim(k)).collect();
        let mut ranks = vec![0; dim + 2];
        for k in 1..=dim {
            let index: BTreeMap<&Face, usize> = faces[k - 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
            let words = faces[k - 1].len().div_ceil(64);
            let rows: Vec<Vec<u64>> = faces[k]
                .iter()
                .map(|f| {
                    let mut row = vec![0u64; words];
                    for &v in &f.0 {
                        let i = index[&f.without(v)];
                        row[i / 64] ^= 1 << (i % 64);
                    }
                    row
                })
                .collect();
            ranks[k] = gf2_rank(rows);
        }
        ranks
    }

    /// Unreduced GF(2) Betti numbers `b_0..b_dim`.
    pub fn betti_f2(&self) -> Vec<usize> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let dim = self.dim().max(0) as usize;
        let ranks = self.boundary_ranks();
        (0..=dim)
            .map(|k| self.faces_of_dim(k as isize).len() - ranks[k] - ranks[k + 1])
            .collect()
    }

    /// Whether the GF(2) homology is that of a sphere of dimension
    /// `self.dim()`. The complex `{{}}` counts as the (-1)-sphere.
    pub fn has_sphere_homology(&self) -> bool {
        if self.vertices.is_empty() {
            return self.facets.len() == 1 && self.facets[0].is_empty();
        }
        let b = self.betti_f2();
        let n = b.len() - 1;
        if n == 0 {
            return b[0] == 2;
        }
        b.iter().enumerate().all(|(k, &x)| x == usize::from(k == 0 || k == n))
    }

    /// GF(2)-homology sphere: pure, sphere homology globally, and the link
    /// of every nonempty face has the homology of a sphere of dimension
    /// `d - 1 - |face|`.
    pub fn is_homology_sphere_f2(&self) -> bool {
        let Ok(d) = self.pure_rank() else {
            return false;
        };
        if !self.has_sphere_homology() {
            return false;
        }
        for size in 1..d {
            for face in self.faces_of_dim(size as isize - 1) {
                let lk = self.link(&face).expect("face of the complex");
                if lk.dim() != (d - 1 - size) as isize || !lk.is_pure() || !lk.has_sphere_homology() {
                    return false;
                }
            }
        }
        true
    }

    pub fn topology_report(&self) -> TopologyReport {
        let is_pure = self.is_pure();
        let is_pseudomanifold = self.is_pseudomanifold();
        let d = self.pure_rank().unwrap_or(0);
        // links of nonempty faces of codimension >= 2, i.e. |face| <= d - 2
        let mut links_connected = is_pure;
        if is_pure {
            'outer: for size in 1..=d.saturating_sub(2) {
                for face in self.faces_of_dim(size as isize - 1) {
                    if !self.link(&face).expect("face of the complex").is_connected() {
                        links_connected = false;
                        break 'outer;
                    }
                }
            }
        }
        let is_normal = is_pseudomanifold && links_connected;
        let normal_including_empty_face = is_normal && (d < 2 || self.is_connected());
        TopologyReport {
            is_pure,
            is_pseudomanifold,
            is_normal,
            normal_including_empty_face,
            is_orientable_over_f2: is_pseudomanifold,
            betti_f2: self.betti_f2(),
            is_homology_sphere_f2: self.is_homology_sphere_f2(),
            absorbed_facets: self.absorbed,
        }
    }
}

/// Expands `sum_i f_{i-1} (t-1)^{d-i}`; `f[0] = f_{-1}`.
pub fn h_from_f(f: &[u64], d: usize) -> Vec<i64> {
    let mut h = vec![0i64; d + 1];
    for i in 0..=d {
        let fi = *f.get(i).unwrap_or(&0) as i64;
        // (t-1)^{d-i} = sum_k C(d-i,k) t^k (-1)^{d-i-k}
        let n = d - i;
        let mut binom = 1i64;
        for k in 0..=n {
            let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
            h[k] += fi * binom * sign;
            binom = binom * (n - k) as i64 / (k + 1) as i64;
        }
    }
    h
}

/// Inverse transform: `h(t + 1) = sum_i f_{i-1} t^{d-i}`, so
/// `f_{i-1} = sum_k C(k, d-i) h_k`.
pub fn f_from_h(h: &[i64]) -> Vec<i64> {
    let d = h.len() - 1;
    (0..=d)
        .map(|i| (0..=d).map(|k| binomial(k, d - i) * h[k]).sum())
        .collect()
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut b = 1i64;
    for j in 0..k {
        b = b * (n - j) as i64 / (j + 1) as i64;
    }
    b
}

pub fn is_palindromic(h: &[i64]) -> bool {
    h.iter().eq(h.iter().rev())
}

/// Rank of a GF(2) matrix given as bit-packed rows.
fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len) * 64;
    for col in 0..width {
        let (w, b) = (col / 64, col % 64);
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][w] >> b & 1 == 1 {
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub is_pure: bool,
    pub is_pseudomanifold: bool,
    /// Links of nonempty faces of codimension at least two are connected.
    pub is_normal: bool,
    /// As `is_normal`, additionally requiring the link of the empty face
    /// (the complex itself) to be connected.
    pub normal_including_empty_face: bool,
    /// Every pseudomanifold is orientable over GF(2); reported for
    /// completeness.
    pub is_orientable_over_f2: bool,
    pub betti_f2: Vec<usize>,
    pub is_homology_sphere_f2: bool,
    /// Input faces dropped because another input face contained them.
    pub absorbed_facets: usize,
}
