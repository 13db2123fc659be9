//! Dense and sparse linear algebra over any [`Field`] backend.
//!
//! Pivots are always chosen among units, so the same code runs over
//! fields and over the infinitesimal extensions (where a nonzero value with
//! vanishing constant part is not invertible).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Determinant by elimination. When no unit pivot is available (only
/// possible over infinitesimal extensions) the division-free subset
/// expansion takes over.
pub fn determinant<F: Field>(m: &[Vec<F>]) -> Result<F> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix expected");
    if n == 0 {
        return Err(Error::InvalidArgument("empty determinant".into()));
    }
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut det = a[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c].is_unit()) else {
            if (c..n).all(|r| a[r][c].is_zero()) {
                return Ok(det.zero_like());
            }
            return determinant_division_free(m);
        };
        a.swap(c, p);
        let inv = a[c][c].inv()?;
        det = det.mul(&a[c][c]);
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&inv);
            for k in c..n {
                let t = f.mul(&a[c][k]);
                a[r][k] = a[r][k].add(&t);
            }
        }
    }
    Ok(det)
}

/// `det M = sum_{perm} prod M[r][perm(r)]` (signs vanish in characteristic 2),
/// accumulated over row subsets: `dp[S]` sums the products that assign the
/// rows in `S` to the first `|S|` columns.
pub fn determinant_division_free<F: Field>(m: &[Vec<F>]) -> Result<F> {
    let n = m.len();
    if n == 0 || n > 20 {
        return Err(Error::InvalidArgument(format!("division-free determinant of size {n}")));
    }
    let zero = m[0][0].zero_like();
    let mut dp = vec![zero.clone(); 1 << n];
    dp[0] = zero.one_like();
    for s in 1usize..1 << n {
        let c = s.count_ones() as usize - 1;
        let mut acc = zero.clone();
        let mut bits = s;
        while bits != 0 {
            let r = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = &dp[s & !(1 << r)];
            if !prev.is_zero() && !m[r][c].is_zero() {
                acc = acc.add(&prev.mul(&m[r][c]));
            }
        }
        dp[s] = acc;
    }
    Ok(dp[(1 << n) - 1].clone())
}

/// Solves the square system `a x = b`.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Result<Vec<F>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "square system expected");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| aug[r][c].is_unit()).ok_or(Error::SingularSolve)?;
        aug.swap(c, p);
        let inv = aug[c][c].inv()?;
        for k in c..=n {
            aug[c][k] = aug[c][k].mul(&inv);
        }
        for r in 0..n {
            if r == c || aug[r][c].is_zero() {
                continue;
            }
            let f = aug[r][c].clone();
            for k in c..=n {
                let t = f.mul(&aug[c][k]);
                aug[r][k] = aug[r][k].add(&t);
            }
        }
    }
    Ok(aug
        .into_iter()
        .map(|mut r| r.pop().expect("augmented column"))
        .collect())
}

/// Rank of a dense matrix (rows of equal length).
pub fn rank<F: Field>(rows: &[Vec<F>]) -> Result<usize> {
    let mut ech = SparseEchelon::new();
    for row in rows {
        let sparse: BTreeMap<usize, F> = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        ech.insert(sparse, |c| c)?;
    }
    Ok(ech.rank())
}

/// Reduced row echelon form built incrementally from sparse rows.
///
/// Every stored row has coefficient one at its pivot and no entries in any
/// other pivot column. The pivot of a new row is the unit entry with the
/// largest key under a caller supplied priority.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    rows: BTreeMap<usize, BTreeMap<usize, F>>,
}

impl<F: Field> Default for SparseEchelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> SparseEchelon<F> {
    pub fn new() -> Self {
        Self { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivot_row(&self, col: usize) -> Option<&BTreeMap<usize, F>> {
        self.rows.get(&col)
    }

    /// Eliminates every pivot column from `row`.
    pub fn reduce(&self, mut row: BTreeMap<usize, F>) -> BTreeMap<usize, F> {
        let hits: Vec<usize> = row.keys().copied().filter(|c| self.rows.contains_key(c)).collect();
        for c in hits {
            let Some(f) = row.remove(&c) else { continue };
            for (&k, x) in &self.rows[&c] {
                if k == c {
                    continue;
                }
                axpy(&mut row, k, &f.mul(x));
            }
        }
        row
    }

    /// Adds a row; returns whether it raised the rank.
    pub fn insert<K: Ord>(&mut self, row: BTreeMap<usize, F>, priority: impl Fn(usize) -> K) -> Result<bool> {
        let row = self.reduce(row);
        if row.is_empty() {
            return Ok(false);
        }
        let pivot = row
            .iter()
            .filter(|(_, x)| x.is_unit())
            .map(|(&c, _)| c)
            .max_by_key(|&c| priority(c))
            .ok_or(Error::NoUnitPivot)?;
        let inv = row[&pivot].inv()?;
        let row: BTreeMap<usize, F> = row.into_iter().map(|(c, x)| (c, x.mul(&inv))).collect();
        for other in self.rows.values_mut() {
            if let Some(f) = other.remove(&pivot) {
                for (&k, x) in &row {
                    if k != pivot {
                        axpy(other, k, &f.mul(x));
                    }
                }
            }
        }
        self.rows.insert(pivot, row);
        Ok(true)
    }
}

fn axpy<F: Field>(row: &mut BTreeMap<usize, F>, col: usize, x: &F) {
    if x.is_zero() {
        return;
    }
    match row.get_mut(&col) {
        Some(y) => {
            *y = y.add(x);
            if y.is_zero() {
                row.remove(&col);
            }
        }
        None => {
            row.insert(col, x.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gf2k, Gf2kField, Jet};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> Gf2kField {
        Gf2kField::new(64).unwrap()
    }

    /// Textbook cofactor expansion along the first column.
    fn cofactor<F: Field>(m: &[Vec<F>]) -> F {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = m[0][0].zero_like();
        for r in 0..n {
            let minor: Vec<Vec<F>> = m
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != r)
                .map(|(_, row)| row[1..].to_vec())
                .collect();
            acc = acc.add(&m[r][0].mul(&cofactor(&minor)));
        }
        acc
    }

    fn random_matrix(n: usize, seed: u64) -> Vec<Vec<Gf2k>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = field();
        (0..n).map(|_| (0..n).map(|_| f.random(&mut rng)).collect()).collect()
    }

    #[test]
    fn identity_and_repeated_columns() {
        let f = field();
        let id: Vec<Vec<Gf2k>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        assert_eq!(determinant(&id).unwrap(), f.one());
        let mut m = random_matrix(4, 9);
        for row in &mut m {
            row[3] = row[1];
        }
        assert!(determinant(&m).unwrap().is_zero());
    }

    #[test]
    fn solve_roundtrip() {
        let a = random_matrix(5, 3);
        let f = field();
        let b: Vec<Gf2k> = (1..=5).map(|i| f.element(i)).collect();
        let x = solve(&a, &b).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs = row.iter().zip(&x).fold(f.zero(), |acc, (p, q)| acc + *p * *q);
            assert_eq!(lhs, *rhs);
        }
    }

    #[test]
    fn singular_solve_is_reported() {
        let f = field();
        let a = vec![vec![f.one(), f.one()], vec![f.one(), f.one()]];
        assert_eq!(solve(&a, &[f.one(), f.zero()]), Err(Error::SingularSolve));
    }

    #[test]
    fn jet_determinant_falls_back_without_unit_pivot() {
        let f = field();
        // first column has zero value part everywhere but a nonzero slope
        let eps = Jet::with_slope(f.zero(), f.one(), 1, 0);
        let one = Jet::constant(f.one(), 1);
        let two = Jet::constant(f.element(2), 1);
        let m = vec![vec![eps.clone(), one.clone()], vec![eps.clone(), two.clone()]];
        assert_eq!(determinant(&m).unwrap(), cofactor(&m));
        assert_eq!(determinant(&m).unwrap(), eps.mul(&one.add(&two)));
    }

    #[test]
    fn echelon_prefers_high_priority_pivots() {
        let f = field();
        let mut e = SparseEchelon::new();
        let row: BTreeMap<usize, Gf2k> = [(0, f.one()), (2, f.element(3))].into();
        e.insert(row, |c| c).unwrap();
        assert!(e.is_pivot(2));
        let reduced = e.reduce([(2, f.one())].into());
        assert_eq!(reduced.len(), 1);
        assert!(reduced.contains_key(&0));
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor_expansion(n in 1usize..6, seed in any::<u64>()) {
            let m = random_matrix(n, seed);
            let d = determinant(&m).unwrap();
            prop_assert_eq!(d, cofactor(&m));
            prop_assert_eq!(determinant_division_free(&m).unwrap(), d);
        }

        #[test]
        fn rank_of_product_of_thin_factors(seed in any::<u64>(), k in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = field();
            let a: Vec<Vec<Gf2k>> = (0..5).map(|_| (0..k).map(|_| f.random(&mut rng)).collect()).collect();
            let b: Vec<Vec<Gf2k>> = (0..k).map(|_| (0..5).map(|_| f.random(&mut rng)).collect()).collect();
            let p: Vec<Vec<Gf2k>> = (0..5)
                .map(|i| (0..5).map(|j| (0..k).fold(f.zero(), |acc, t| acc + a[i][t] * b[t][j])).collect())
                .collect();
            prop_assert!(rank(&p).unwrap() <= k);
        }
    }
}
