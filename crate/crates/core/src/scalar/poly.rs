use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Field, ScalarError};

/// An indeterminate. Frame coordinates `a_<v>_<j>` and auxiliary point
/// coordinates `y_<j>` share one ordered namespace.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u64);

const AUX_TAG: u64 = 1 << 63;

impl Var {
    /// The frame coordinate `a_{v,j}`; `coord` is zero-based but printed
    /// one-based, so `Var::frame(3, 0)` is `a_3_1`.
    pub fn frame(vertex: u32, coord: u32) -> Self {
        Var((vertex as u64) << 16 | coord as u64)
    }

    /// Coordinate `j` of the auxiliary evaluation point.
    pub fn aux(coord: u32) -> Self {
        Var(AUX_TAG | coord as u64)
    }

    pub fn as_aux(&self) -> Option<u32> {
        (self.0 & AUX_TAG != 0).then(|| (self.0 & 0xffff) as u32)
    }

    pub fn as_frame(&self) -> Option<(u32, u32)> {
        (self.0 & AUX_TAG == 0).then(|| ((self.0 >> 16) as u32, (self.0 & 0xffff) as u32))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_frame() {
            Some((v, j)) => write!(f, "a_{v}_{}", j + 1),
            None => write!(f, "y_{}", (self.0 & 0xffff) + 1),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A monic monomial over GF(2): variables with positive exponents, sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(Vec<(Var, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Mono(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let f = if j < other.0.len() && other.0[j].0 == v {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            if f > e {
                return None;
            }
            if e > f {
                out.push((v, e - f));
            }
        }
        (j == other.0.len()).then_some(Mono(out))
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exponent(v);
                    (f > 0).then_some((v, e.min(f)))
                })
                .collect(),
        )
    }

    /// Formal partial derivative; `None` when it vanishes (exponent even
    /// or variable absent).
    pub fn partial(&self, v: Var) -> Option<Mono> {
        let e = self.exponent(v);
        if e % 2 == 0 {
            return None;
        }
        let mut pairs = self.0.clone();
        let i = pairs.iter().position(|&(w, _)| w == v)?;
        pairs[i].1 -= 1;
        pairs.retain(|&(_, e)| e > 0);
        Some(Mono(pairs))
    }

    /// Pure lexicographic order with the smallest variable most significant.
    fn lex_cmp(&self, other: &Mono) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal if e != f => return e.cmp(&f),
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over GF(2): the set of monomials with coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: BTreeSet<Mono>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m:?}")?;
        }
        Ok(())
    }
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_mono(Mono::one())
    }

    pub fn var(v: Var) -> Self {
        Self::from_mono(Mono::var(v))
    }

    pub fn from_mono(m: Mono) -> Self {
        Self {
            terms: BTreeSet::from([m]),
        }
    }

    pub fn from_monos(monos: impl IntoIterator<Item = Mono>) -> Self {
        let mut p = Self::zero();
        for m in monos {
            p.toggle(m);
        }
        p
    }

    fn toggle(&mut self, m: Mono) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.first().is_some_and(|m| m.0.is_empty())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Mono> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self.terms.symmetric_difference(&other.terms).cloned().collect();
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Mono, bool> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let e = acc.entry(a.mul(b)).or_insert(false);
                *e = !*e;
            }
        }
        Self {
            terms: acc.into_iter().filter(|&(_, on)| on).map(|(m, _)| m).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Self {
        Self {
            terms: self.terms.iter().map(|t| t.mul(m)).collect(),
        }
    }

    /// Monomial content: the gcd of all terms.
    pub fn content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Mono::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    fn div_mono(&self, m: &Mono) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| t.div(m).expect("monomial does not divide every term"))
                .collect(),
        }
    }

    fn leading(&self) -> Option<&Mono> {
        self.terms.iter().max_by(|a, b| a.lex_cmp(b))
    }

    /// Exact division: `Some(q)` with `q * other == self`, else `None`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let lead = other.leading()?.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let mut steps = 0usize;
        while let Some(lt) = rem.leading().cloned() {
            let q = lt.div(&lead)?;
            rem = rem.add(&other.mul_mono(&q));
            quot.toggle(q);
            steps += 1;
            if steps > 100_000 {
                return None;
            }
        }
        Some(quot)
    }

    pub fn partial(&self, v: Var) -> Self {
        Self::from_monos(self.terms.iter().filter_map(|m| m.partial(v)))
    }

    /// Evaluates with each variable replaced by `assign(v)`.
    pub fn eval<F: Field>(&self, one: &F, assign: &mut impl FnMut(Var) -> Option<F>) -> Option<F> {
        let mut cache: BTreeMap<Var, F> = BTreeMap::new();
        let mut acc = one.zero_like();
        for m in &self.terms {
            let mut t = one.clone();
            for &(v, e) in &m.0 {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assign(v)?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t = t.mul(&x.pow(e as u64));
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }
}

pub const DEFAULT_TERM_BUDGET: usize = 200_000;

/// Element of GF(2)(a_{vj}, y_j) as an unreduced fraction.
///
/// No multivariate gcd is taken; monomial content is cancelled and exact
/// divisibility is detected, which keeps the tiny instances this backend
/// targets manageable. Equality is decided by cross-multiplication. A value
/// whose numerator or denominator outgrows the term budget is poisoned and
/// reports [`ScalarError::TermBudgetExceeded`] from [`Field::check`].
#[derive(Clone)]
pub enum RationalFunction {
    Frac {
        num: SparsePoly,
        den: SparsePoly,
        budget: usize,
    },
    Overflow(usize),
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalFunction::Frac { num, den, .. } if den.is_one() => write!(f, "{num:?}"),
            RationalFunction::Frac { num, den, .. } => write!(f, "({num:?}) / ({den:?})"),
            RationalFunction::Overflow(b) => write!(f, "<overflow: budget {b}>"),
        }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RationalFunction::Frac { num: n1, den: d1, .. }, RationalFunction::Frac { num: n2, den: d2, .. }) => {
                if d1 == d2 {
                    n1 == n2
                } else {
                    n1.mul(d2) == n2.mul(d1)
                }
            }
            _ => false,
        }
    }
}

impl RationalFunction {
    pub fn from_poly(p: SparsePoly) -> Self {
        Self::Frac {
            num: p,
            den: SparsePoly::one(),
            budget: DEFAULT_TERM_BUDGET,
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(SparsePoly::var(v))
    }

    pub fn zero() -> Self {
        Self::from_poly(SparsePoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(SparsePoly::one())
    }

    pub fn with_budget(self, budget: usize) -> Self {
        match self {
            Self::Frac { num, den, .. } => Self::Frac { num, den, budget },
            Self::Overflow(_) => Self::Overflow(budget),
        }
    }

    pub fn budget(&self) -> usize {
        match self {
            Self::Frac { budget, .. } | Self::Overflow(budget) => *budget,
        }
    }

    pub fn fraction(num: SparsePoly, den: SparsePoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(num, den, DEFAULT_TERM_BUDGET))
    }

    pub fn parts(&self) -> Option<(&SparsePoly, &SparsePoly)> {
        match self {
            Self::Frac { num, den, .. } => Some((num, den)),
            Self::Overflow(_) => None,
        }
    }

    fn normalized(num: SparsePoly, den: SparsePoly, budget: usize) -> Self {
        if num.is_zero() {
            return Self::Frac {
                num,
                den: SparsePoly::one(),
                budget,
            };
        }
        let g = num.content().gcd(&den.content());
        let (mut num, mut den) = if g.degree() > 0 {
            (num.div_mono(&g), den.div_mono(&g))
        } else {
            (num, den)
        };
        if !den.is_one() {
            if num == den {
                num = SparsePoly::one();
                den = SparsePoly::one();
            } else if den.len() <= num.len() {
                if let Some(q) = num.div_exact(&den) {
                    num = q;
                    den = SparsePoly::one();
                }
            }
        }
        if num.len() > budget || den.len() > budget {
            return Self::Overflow(budget);
        }
        Self::Frac { num, den, budget }
    }

    pub fn is_zero_rf(&self) -> bool {
        matches!(self, Self::Frac { num, .. } if num.is_zero())
    }

    /// Evaluates at a point of GF(2^k) (or any backend).
    pub fn specialize<F: Field>(&self, one: &F, assign: &mut impl FnMut(Var) -> Option<F>) -> Result<F, ScalarError> {
        let (num, den) = self.parts().ok_or(ScalarError::TermBudgetExceeded(self.budget()))?;
        let n = num.eval(one, assign).ok_or(ScalarError::PoleHit)?;
        let d = den.eval(one, assign).ok_or(ScalarError::PoleHit)?;
        if d.is_zero() {
            return Err(ScalarError::PoleHit);
        }
        Ok(n.div(&d)?)
    }

    /// Formal partial derivative (quotient rule; characteristic 2 drops
    /// the sign).
    pub fn partial(&self, v: Var) -> Self {
        match self {
            Self::Frac { num, den, budget } => {
                let dn = num.partial(v);
                let dd = den.partial(v);
                if dd.is_zero() {
                    return Self::normalized(dn, den.clone(), *budget);
                }
                let top = dn.mul(den).add(&num.mul(&dd));
                Self::normalized(top, den.mul(den), *budget)
            }
            Self::Overflow(b) => Self::Overflow(*b),
        }
    }

    /// The derivation `sum_j a_{w,j} d/d a_{v,j}` over `coords` coordinates.
    pub fn derivation(&self, v: u32, w: u32, coords: u32) -> Self {
        let mut acc = Self::zero().with_budget(self.budget());
        for j in 0..coords {
            let p = self.partial(Var::frame(v, j));
            if !p.is_zero_rf() {
                acc = acc.add(&p.mul(&Self::var(Var::frame(w, j))));
            }
        }
        acc
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Self::Frac { num, den, .. } => num.vars().union(&den.vars()).copied().collect(),
            Self::Overflow(_) => BTreeSet::new(),
        }
    }

    /// Upper bound on the total degree of numerator and denominator.
    pub fn degree_bound(&self) -> u32 {
        match self {
            Self::Frac { num, den, .. } => num.total_degree().max(den.total_degree()),
            Self::Overflow(_) => u32::MAX,
        }
    }
}

impl Field for RationalFunction {
    fn zero_like(&self) -> Self {
        Self::zero().with_budget(self.budget())
    }

    fn one_like(&self) -> Self {
        Self::one().with_budget(self.budget())
    }

    fn is_zero(&self) -> bool {
        self.is_zero_rf()
    }

    fn add(&self, rhs: &Self) -> Self {
        let budget = self.budget().min(rhs.budget());
        match (self, rhs) {
            (Self::Frac { num: n1, den: d1, .. }, Self::Frac { num: n2, den: d2, .. }) => {
                if n1.is_zero() {
                    return rhs.clone().with_budget(budget);
                }
                if n2.is_zero() {
                    return self.clone().with_budget(budget);
                }
                if d1 == d2 {
                    Self::normalized(n1.add(n2), d1.clone(), budget)
                } else {
                    Self::normalized(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2), budget)
                }
            }
            _ => Self::Overflow(budget),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let budget = self.budget().min(rhs.budget());
        match (self, rhs) {
            (Self::Frac { num: n1, den: d1, .. }, Self::Frac { num: n2, den: d2, .. }) => {
                Self::normalized(n1.mul(n2), d1.mul(d2), budget)
            }
            _ => Self::Overflow(budget),
        }
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            Self::Frac { num, den, budget } => {
                if num.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                Ok(Self::normalized(den.clone(), num.clone(), *budget))
            }
            Self::Overflow(b) => Ok(Self::Overflow(*b)),
        }
    }

    fn check(&self) -> Result<(), ScalarError> {
        match self {
            Self::Overflow(b) => Err(ScalarError::TermBudgetExceeded(*b)),
            _ => Ok(()),
        }
    }

    fn encode(&self) -> String {
        format!("{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Gf2kField;

    fn a() -> RationalFunction {
        RationalFunction::var(Var::frame(1, 1))
    }

    fn b() -> RationalFunction {
        RationalFunction::var(Var::frame(2, 1))
    }

    #[test]
    fn fraction_plus_itself_is_zero() {
        let f = a().div(&b()).unwrap();
        assert!(f.add(&f).is_zero());
    }

    #[test]
    fn char_two_cancellation() {
        // (a^2 b)/(a b) + a == 0
        let num = a().square().mul(&b());
        let den = a().mul(&b());
        let f = num.div(&den).unwrap().add(&a());
        assert!(f.is_zero());
    }

    #[test]
    fn all_ones_specialization_of_two_by_two_minor() {
        let (x11, x12, x21, x22) = (Var::frame(1, 1), Var::frame(1, 2), Var::frame(2, 1), Var::frame(2, 2));
        let det = RationalFunction::var(x11)
            .mul(&RationalFunction::var(x22))
            .add(&RationalFunction::var(x12).mul(&RationalFunction::var(x21)));
        let one = Gf2kField::new(64).unwrap().one();
        let v = det.specialize(&one, &mut |_| Some(one)).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn specialization_pole() {
        let f = a().inv().unwrap();
        let zero = Gf2kField::new(64).unwrap().zero();
        assert_eq!(f.specialize(&zero, &mut |_| Some(zero)), Err(ScalarError::PoleHit));
    }

    #[test]
    fn equality_by_cross_multiplication() {
        // a/b == (a^2 + a b)/(a b + b^2) since both reduce to a/b
        let lhs = a().div(&b()).unwrap();
        let num = a().square().add(&a().mul(&b()));
        let den = a().mul(&b()).add(&b().square());
        let rhs = RationalFunction::fraction(num.parts().unwrap().0.clone(), den.parts().unwrap().0.clone()).unwrap();
        assert_eq!(lhs, rhs);
        assert_ne!(lhs, a());
    }

    #[test]
    fn exact_division_detected() {
        let p = a().add(&b()).square(); // a^2 + b^2
        let q = a().add(&b());
        let r = p.div(&q).unwrap();
        assert_eq!(r.parts().unwrap().1, &SparsePoly::one());
        assert_eq!(r, a().add(&b()));
    }

    #[test]
    fn budget_poisons() {
        let x = a().add(&b()).add(&RationalFunction::one()).with_budget(8);
        let big = x.pow(6);
        assert!(big.check().is_err());
        assert!(big.mul(&a()).check().is_err());
    }

    #[test]
    fn quotient_rule() {
        // d/da (1/a) = 1/a^2 in characteristic 2
        let f = a().inv().unwrap();
        let df = f.partial(Var::frame(1, 1));
        assert_eq!(df, a().square().inv().unwrap());
        // d/da (a^2) = 0
        assert!(a().square().partial(Var::frame(1, 1)).is_zero());
    }

    #[test]
    fn var_names() {
        assert_eq!(format!("{:?}", Var::frame(3, 1)), "a_3_2");
        assert_eq!(format!("{:?}", Var::aux(0)), "y_1");
    }
}
