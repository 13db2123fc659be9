use super::{Embed, Field, ScalarError};

/// `value + slope * eps` with `eps^2 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<F> {
    pub value: F,
    pub slope: F,
}

impl<F: Field> Dual<F> {
    pub fn new(value: F, slope: F) -> Self {
        Self { value, slope }
    }

    pub fn constant(value: F) -> Self {
        let slope = value.zero_like();
        Self { value, slope }
    }
}

impl<F: Field> Field for Dual<F> {
    fn zero_like(&self) -> Self {
        Self::constant(self.value.zero_like())
    }

    fn one_like(&self) -> Self {
        Self::constant(self.value.one_like())
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.slope.is_zero()
    }

    fn is_unit(&self) -> bool {
        self.value.is_unit()
    }

    fn add(&self, rhs: &Self) -> Self {
        Self::new(self.value.add(&rhs.value), self.slope.add(&rhs.slope))
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self::new(
            self.value.mul(&rhs.value),
            self.value.mul(&rhs.slope).add(&self.slope.mul(&rhs.value)),
        )
    }

    /// (a + b eps)^-1 = a^-1 + a^-2 b eps; no sign in characteristic 2.
    fn inv(&self) -> Result<Self, ScalarError> {
        let a_inv = self.value.inv().map_err(|_| ScalarError::DerivativeAtPole)?;
        let slope = a_inv.square().mul(&self.slope);
        Ok(Self::new(a_inv, slope))
    }

    fn check(&self) -> Result<(), ScalarError> {
        self.value.check()?;
        self.slope.check()
    }
}

impl<F: Field> Embed<F> for Dual<F> {
    fn embed(x: &F, _like: &Self) -> Self {
        Self::constant(x.clone())
    }
}

/// Truncated multivariate infinitesimal extension F[eps_1, .., eps_m] with
/// every `eps_i^2 = 0`.
///
/// The coefficient of `prod_{i in S} eps_i` lives at index `S` (a bitmask),
/// so a jet over `m` layers holds `2^m` coefficients. Multiplication is
/// subset convolution.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<F> {
    layers: u32,
    coeffs: Vec<F>,
}

/// Jets are never built with more layers than this (16 coefficients per
/// value already covers the derivation orders the identities need up to
/// d = 9).
pub const MAX_JET_LAYERS: u32 = 8;

impl<F: Field> Jet<F> {
    pub fn constant(value: F, layers: u32) -> Self {
        assert!(layers <= MAX_JET_LAYERS, "too many infinitesimal layers");
        let zero = value.zero_like();
        let mut coeffs = vec![zero; 1 << layers];
        coeffs[0] = value;
        Self { layers, coeffs }
    }

    /// `value + slope * eps_layer`.
    pub fn with_slope(value: F, slope: F, layers: u32, layer: u32) -> Self {
        let mut j = Self::constant(value, layers);
        j.coeffs[1 << layer] = slope;
        j
    }

    pub fn layers(&self) -> u32 {
        self.layers
    }

    pub fn value(&self) -> &F {
        &self.coeffs[0]
    }

    pub fn coeff(&self, mask: usize) -> &F {
        &self.coeffs[mask]
    }

    /// Coefficient of `eps_1 * .. * eps_m`.
    pub fn top(&self) -> &F {
        &self.coeffs[self.coeffs.len() - 1]
    }

    fn assert_compatible(&self, rhs: &Self) {
        assert_eq!(self.layers, rhs.layers, "jets over different layer counts");
    }
}

impl<F: Field> Field for Jet<F> {
    fn zero_like(&self) -> Self {
        Self::constant(self.coeffs[0].zero_like(), self.layers)
    }

    fn one_like(&self) -> Self {
        Self::constant(self.coeffs[0].one_like(), self.layers)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Field::is_zero)
    }

    fn is_unit(&self) -> bool {
        self.coeffs[0].is_unit()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        Self {
            layers: self.layers,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let n = self.coeffs.len();
        let mut out = vec![self.coeffs[0].zero_like(); n];
        for (s, slot) in out.iter_mut().enumerate() {
            // iterate submasks a of s, pairing with s ^ a
            let mut a = s;
            loop {
                let x = &self.coeffs[a];
                let y = &rhs.coeffs[s ^ a];
                if !x.is_zero() && !y.is_zero() {
                    *slot = slot.add(&x.mul(y));
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & s;
            }
        }
        Self {
            layers: self.layers,
            coeffs: out,
        }
    }

    /// Solves `self * b = 1` coefficient by coefficient in order of
    /// increasing mask: `c0 * b[S] = sum_{0 != A subset S} c[A] * b[S \ A]`.
    fn inv(&self) -> Result<Self, ScalarError> {
        let c0_inv = self.coeffs[0].inv().map_err(|_| ScalarError::DerivativeAtPole)?;
        let n = self.coeffs.len();
        let mut b = vec![c0_inv.zero_like(); n];
        b[0] = c0_inv.clone();
        for s in 1..n {
            let mut acc = c0_inv.zero_like();
            let mut a = s;
            while a != 0 {
                let x = &self.coeffs[a];
                if !x.is_zero() {
                    acc = acc.add(&x.mul(&b[s ^ a]));
                }
                a = (a - 1) & s;
            }
            b[s] = acc.mul(&c0_inv);
        }
        Ok(Self {
            layers: self.layers,
            coeffs: b,
        })
    }

    fn check(&self) -> Result<(), ScalarError> {
        self.coeffs.iter().try_for_each(Field::check)
    }
}

impl<F: Field> Embed<F> for Jet<F> {
    fn embed(x: &F, like: &Self) -> Self {
        Self::constant(x.clone(), like.layers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gf2k, Gf2kField};
    use proptest::prelude::*;

    fn field() -> Gf2kField {
        Gf2kField::new(64).unwrap()
    }

    fn el(bits: u64) -> Gf2k {
        field().element(bits as u128)
    }

    #[test]
    fn dual_product_rule() {
        let (a, b, c, d) = (el(3), el(5), el(7), el(11));
        let p = Dual::new(a, b).mul(&Dual::new(c, d));
        assert_eq!(p.value, a * c);
        assert_eq!(p.slope, a * d + b * c);
    }

    #[test]
    fn dual_inverse_multiplies_back_to_one() {
        let x = Dual::new(el(0x1234), el(0x77));
        let y = x.inv().unwrap();
        assert_eq!(y.value, el(0x1234).inv().unwrap());
        assert_eq!(y.slope, el(0x1234).inv().unwrap().square() * el(0x77));
        assert_eq!(x.mul(&y), x.one_like());
    }

    #[test]
    fn dual_inverse_at_pole() {
        let x = Dual::new(el(0), el(1));
        assert_eq!(x.inv(), Err(ScalarError::DerivativeAtPole));
    }

    #[test]
    fn squares_have_no_slope() {
        let x = Dual::new(el(0xdead), el(0xbeef));
        let sq = x.square();
        assert_eq!(sq.value, el(0xdead) * el(0xdead));
        assert!(sq.slope.is_zero());
    }

    fn arb_el() -> impl Strategy<Value = Gf2k> {
        any::<u64>().prop_map(el)
    }

    proptest! {
        #[test]
        fn single_layer_jet_matches_dual(a in arb_el(), b in arb_el(), c in arb_el(), d in arb_el()) {
            let x = Dual::new(a, b);
            let y = Dual::new(c, d);
            let jx = Jet::with_slope(a, b, 1, 0);
            let jy = Jet::with_slope(c, d, 1, 0);
            let prod = jx.mul(&jy);
            prop_assert_eq!(prod.coeff(0), &x.mul(&y).value);
            prop_assert_eq!(prod.coeff(1), &x.mul(&y).slope);
            if !a.is_zero() {
                let inv = jx.inv().unwrap();
                prop_assert_eq!(inv.coeff(1), &x.inv().unwrap().slope);
            }
        }

        /// Two jet layers against nested duals Dual<Dual<F>>, where the
        /// inner eps is layer 0 and the outer eps is layer 1.
        #[test]
        fn two_layer_jet_matches_nested_duals(xs in proptest::collection::vec(arb_el(), 8)) {
            let nested = |c: &[Gf2k]| Dual::new(Dual::new(c[0], c[1]), Dual::new(c[2], c[3]));
            let jet = |c: &[Gf2k]| {
                let mut j = Jet::constant(c[0], 2);
                j.coeffs[1] = c[1];
                j.coeffs[2] = c[2];
                j.coeffs[3] = c[3];
                j
            };
            let (p, q) = (&xs[..4], &xs[4..]);
            let np = nested(p).mul(&nested(q));
            let jp = jet(p).mul(&jet(q));
            prop_assert_eq!(&jp.coeffs, &vec![np.value.value, np.value.slope, np.slope.value, np.slope.slope]);
            if !p[0].is_zero() {
                let ni = nested(p).inv().unwrap();
                let ji = jet(p).inv().unwrap();
                prop_assert_eq!(&ji.coeffs, &vec![ni.value.value, ni.value.slope, ni.slope.value, ni.slope.slope]);
            }
        }

        #[test]
        fn jet_squares_are_constant(xs in proptest::collection::vec(arb_el(), 8)) {
            let mut j = Jet::constant(xs[0], 3);
            j.coeffs.clone_from_slice(&xs);
            let sq = j.square();
            prop_assert_eq!(sq.coeff(0), &(xs[0] * xs[0]));
            for m in 1..8 {
                prop_assert!(sq.coeff(m).is_zero());
            }
        }

        #[test]
        fn jet_inverse_roundtrip(xs in proptest::collection::vec(arb_el(), 8)) {
            prop_assume!(!xs[0].is_zero());
            let mut j = Jet::constant(xs[0], 3);
            j.coeffs.clone_from_slice(&xs);
            prop_assert_eq!(j.mul(&j.inv().unwrap()), j.one_like());
        }
    }
}
