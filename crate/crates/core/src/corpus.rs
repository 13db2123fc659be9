//! Built-in complexes addressable by name:
//!
//! * `cycle:p` - the p-gon, vertices `1..=p`
//! * `boundary-simplex:d` - boundary of the d-simplex, vertices `1..=d+1`
//! * `cross-polytope:d` - boundary of the d-dimensional cross-polytope,
//!   antipodal pairs `(2i-1, 2i)`
//! * `suspension:<name>` - poles get the two labels after the largest one
//! * `join:<name>,<name>` - the second factor is relabelled past the first
//! * `icosahedron`, `torus` (7-vertex torus), `rp2` (6-vertex projective plane)

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

pub const ICOSAHEDRON: [[u32; 3]; 20] = [
    [1, 2, 3],
    [1, 3, 4],
    [1, 4, 5],
    [1, 5, 6],
    [1, 2, 6],
    [2, 3, 8],
    [3, 4, 9],
    [4, 5, 10],
    [5, 6, 11],
    [2, 6, 7],
    [2, 7, 8],
    [3, 8, 9],
    [4, 9, 10],
    [5, 10, 11],
    [6, 7, 11],
    [7, 8, 12],
    [8, 9, 12],
    [9, 10, 12],
    [10, 11, 12],
    [7, 11, 12],
];

/// Möbius' minimal triangulation of the torus: triangles `{i, i+1, i+3}`
/// and `{i, i+2, i+3}` modulo 7.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(vec![i + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1]);
        facets.push(vec![i + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1]);
    }
    SimplicialComplex::from_facets(facets).expect("valid facets")
}

/// The 6-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    SimplicialComplex::from_facets(vec![
        vec![1, 2, 3],
        vec![1, 3, 4],
        vec![1, 4, 5],
        vec![1, 5, 6],
        vec![1, 2, 6],
        vec![2, 3, 5],
        vec![3, 4, 6],
        vec![2, 4, 5],
        vec![3, 5, 6],
        vec![2, 4, 6],
    ])
    .expect("valid facets")
}

pub fn cycle(p: u32) -> SimplicialComplex {
    SimplicialComplex::from_facets((1..=p).map(|i| vec![i, i % p + 1])).expect("valid facets")
}

pub fn boundary_simplex(d: u32) -> SimplicialComplex {
    let all: Vec<u32> = (1..=d + 1).collect();
    SimplicialComplex::from_facets(
        all.iter()
            .map(|&skip| all.iter().copied().filter(|&v| v != skip).collect::<Vec<_>>()),
    )
    .expect("valid facets")
}

pub fn cross_polytope(d: u32) -> SimplicialComplex {
    let mut facets = Vec::new();
    for mask in 0..(1u32 << d) {
        facets.push((0..d).map(|i| 2 * i + 1 + (mask >> i & 1)).collect::<Vec<_>>());
    }
    SimplicialComplex::from_facets(facets).expect("valid facets")
}

pub fn icosahedron() -> SimplicialComplex {
    SimplicialComplex::from_facets(ICOSAHEDRON.iter().map(|f| f.to_vec())).expect("valid facets")
}

fn max_label(k: &SimplicialComplex) -> u32 {
    k.vertices().last().copied().unwrap_or(0)
}

pub fn suspend(k: &SimplicialComplex) -> SimplicialComplex {
    let m = max_label(k);
    k.suspension(m + 1, m + 2).expect("fresh pole labels")
}

pub fn join(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let shift = max_label(a) + 1 - b.vertices().first().copied().unwrap_or(1).min(1);
    a.join(&b.relabel(shift)).expect("disjoint labels")
}

fn bounded(name: &str, arg: &str, lo: u32, hi: u32) -> Result<u32> {
    let n: u32 = arg.parse().map_err(|_| Error::UnknownBuiltin(name.to_string()))?;
    if n < lo || n > hi {
        return Err(Error::UnknownBuiltin(format!(
            "{name} (parameter must lie in {lo}..={hi})"
        )));
    }
    Ok(n)
}

/// Resolves a builtin name. `join:` splits its argument at the first comma.
pub fn builtin(name: &str) -> Result<SimplicialComplex> {
    let name = name.trim();
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    match head {
        "cycle" => Ok(cycle(bounded(name, arg, 3, 64)?)),
        "boundary-simplex" => Ok(boundary_simplex(bounded(name, arg, 2, 8)?)),
        "cross-polytope" => Ok(cross_polytope(bounded(name, arg, 2, 6)?)),
        "suspension" => Ok(suspend(&builtin(arg)?)),
        "join" => {
            let (a, b) = arg
                .split_once(',')
                .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
            Ok(join(&builtin(a)?, &builtin(b)?))
        }
        "icosahedron" if arg.is_empty() => Ok(icosahedron()),
        "torus" if arg.is_empty() => Ok(torus()),
        "rp2" if arg.is_empty() => Ok(rp2()),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Names listed by `glab examples list`.
pub const EXAMPLE_NAMES: &[&str] = &[
    "cycle:5",
    "boundary-simplex:3",
    "cross-polytope:3",
    "cross-polytope:4",
    "icosahedron",
    "suspension:cycle:4",
    "join:cycle:3,cycle:3",
    "torus",
    "rp2",
];

/// The homology spheres used throughout the test suites.
pub fn sphere_corpus() -> Vec<(String, SimplicialComplex)> {
    let mut names: Vec<String> = Vec::new();
    names.extend((3..=9).map(|p| format!("cycle:{p}")));
    names.extend((2..=5).map(|d| format!("boundary-simplex:{d}")));
    names.extend((2..=4).map(|d| format!("cross-polytope:{d}")));
    names.push("icosahedron".into());
    names.push("join:cycle:3,cycle:3".into());
    names.push("suspension:cycle:4".into());
    names
        .into_iter()
        .map(|n| {
            let k = builtin(&n).expect("corpus name");
            (n, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let k = icosahedron();
        assert_eq!(k.f_vector(), vec![1, 12, 30, 20]);
        assert_eq!(k.h_vector().unwrap(), vec![1, 9, 9, 1]);
        assert!(k.is_homology_sphere_f2());
    }

    #[test]
    fn join_of_triangles() {
        let k = builtin("join:cycle:3,cycle:3").unwrap();
        assert_eq!(k.vertices(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(k.facets().len(), 9);
        // h-polynomial multiplies under joins: (1 + t + t^2)^2
        assert_eq!(k.h_vector().unwrap(), vec![1, 2, 3, 2, 1]);
    }

    #[test]
    fn cross_polytopes() {
        assert_eq!(cross_polytope(2).facets().len(), 4);
        assert_eq!(
            cross_polytope(3).h_vector().unwrap(),
            builtin("suspension:cycle:4").unwrap().h_vector().unwrap()
        );
        assert_eq!(cross_polytope(4).h_vector().unwrap(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn boundary_simplices() {
        assert_eq!(boundary_simplex(2), cycle(3));
        for d in 2..=5 {
            assert_eq!(boundary_simplex(d).h_vector().unwrap(), vec![1; d as usize + 1]);
        }
    }

    #[test]
    fn unknown_names() {
        assert!(builtin("cycle:2").is_err());
        assert!(builtin("dodecahedron").is_err());
        assert!(builtin("join:cycle:3").is_err());
    }

    #[test]
    fn torus_and_projective_plane() {
        let t = torus().topology_report();
        assert_eq!(t.betti_f2, vec![1, 2, 1]);
        assert!(t.is_pseudomanifold && !t.is_homology_sphere_f2);
        let p = rp2().topology_report();
        assert_eq!(p.betti_f2, vec![1, 1, 1]);
        assert!(p.is_pseudomanifold && !p.is_homology_sphere_f2);
    }
}
