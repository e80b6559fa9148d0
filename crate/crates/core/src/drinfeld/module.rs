use std::sync::Arc;

use crate::ffpoly::{is_irreducible, Field, Poly};

use super::skew::{CoeffRing, SkewPoly};
use super::DrinfeldError;

/// A Drinfeld module of rank 1 or 2, given by `phi_T = sum_i g_i tau^i`.
///
/// The operator side is `A = F_r[T]`; the coefficients live in `F_r[w]`,
/// where `w` stands for `theta` (or for `sqrt(theta)` over `A'`), possibly
/// reduced modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModuleSpec {
    ring: Arc<CoeffRing>,
    phi_t: Vec<Poly>,
}

impl DrinfeldModuleSpec {
    pub fn new(ring: &Arc<CoeffRing>, phi_t: Vec<Poly>) -> Result<Self, DrinfeldError> {
        let phi_t: Vec<Poly> = phi_t.into_iter().map(|c| ring.reduce(c)).collect();
        if phi_t.len() < 2 {
            return Err(DrinfeldError::InvalidModule("phi_T needs a tau term".into()));
        }
        if phi_t.last().unwrap().is_zero() {
            return Err(DrinfeldError::InvalidModule("leading coefficient of phi_T vanishes".into()));
        }
        if phi_t.len() > 3 {
            return Err(DrinfeldError::RankUnsupported(phi_t.len() - 1));
        }
        Ok(DrinfeldModuleSpec { ring: ring.clone(), phi_t })
    }

    /// The Carlitz module `C_T = theta + tau` over `F_r[theta]`.
    pub fn carlitz(field: &Field) -> Self {
        Self::new(&CoeffRing::polynomial(field), vec![Poly::x(field), Poly::one(field)]).unwrap()
    }

    /// `phi_T = theta + g1 tau + g2 tau^2` over `F_r[theta]`.
    pub fn rank2(field: &Field, g1: Poly, g2: Poly) -> Result<Self, DrinfeldError> {
        Self::new(&CoeffRing::polynomial(field), vec![Poly::x(field), g1, g2])
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn rank(&self) -> usize {
        self.phi_t.len() - 1
    }

    pub fn phi_t(&self) -> &[Poly] {
        &self.phi_t
    }

    /// `gamma(T)`, the constant term of `phi_T`.
    pub fn gamma(&self) -> &Poly {
        &self.phi_t[0]
    }

    pub fn phi_t_skew(&self) -> SkewPoly {
        SkewPoly::new(&self.ring, self.phi_t.clone())
    }

    /// Discriminant-like leading coefficient `g_rank`.
    pub fn leading(&self) -> &Poly {
        self.phi_t.last().unwrap()
    }

    pub fn describe(&self) -> String {
        self.phi_t_skew().display("theta")
    }
}

/// `phi_a` for `a` in A, by Horner's rule in `phi_T`.
pub fn phi_of(a: &Poly, module: &DrinfeldModuleSpec) -> SkewPoly {
    let ring = module.ring();
    let t = module.phi_t_skew();
    let mut acc = SkewPoly::zero(ring);
    for c in a.coeffs().iter().rev() {
        acc = &acc * &t;
        acc = &acc + &SkewPoly::constant(ring, Poly::constant(module.field(), *c));
    }
    acc
}

/// The powers `phi_{T^0}, ..., phi_{T^n}`.
pub(crate) fn phi_powers(module: &DrinfeldModuleSpec, n: usize) -> Vec<SkewPoly> {
    let t = module.phi_t_skew();
    let mut out = vec![SkewPoly::one(module.ring())];
    for i in 0..n {
        let next = &out[i] * &t;
        out.push(next);
    }
    out
}

/// Coefficient-wise reduction modulo a monic prime `f` of the coefficient ring.
pub fn reduce_mod(module: &DrinfeldModuleSpec, f: &Poly) -> Result<DrinfeldModuleSpec, DrinfeldError> {
    if module.ring().modulus().is_some() {
        return Err(DrinfeldError::InvalidModule("module is already reduced".into()));
    }
    if !f.is_monic() || !is_irreducible(f)? {
        return Err(DrinfeldError::NotIrreducible(f.display("T")));
    }
    let ring = CoeffRing::residue(f);
    if ring.is_zero(module.leading()) {
        return Err(DrinfeldError::BadReduction { prime: f.display("T") });
    }
    DrinfeldModuleSpec::new(&ring, module.phi_t().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;
    use proptest::prelude::*;

    fn f2() -> Field {
        field_make(2, 1, None).unwrap()
    }

    #[test]
    fn carlitz_images() {
        let f = f2();
        let c = DrinfeldModuleSpec::carlitz(&f);
        assert_eq!(phi_of(&Poly::x(&f), &c), c.phi_t_skew());
        assert_eq!(phi_of(&Poly::one(&f), &c), SkewPoly::one(c.ring()));
        let red = reduce_mod(&c, &Poly::from_ints(&f, &[1, 1, 1])).unwrap();
        let g = phi_of(&Poly::from_ints(&f, &[1, 1, 1]), &red);
        assert_eq!(g, SkewPoly::tau_pow(red.ring(), 2));
    }

    #[test]
    fn reductions() {
        let f = f2();
        let t = Poly::x(&f);
        let bad = DrinfeldModuleSpec::rank2(&f, Poly::one(&f), t.clone()).unwrap();
        assert!(matches!(reduce_mod(&bad, &t), Err(DrinfeldError::BadReduction { .. })));
        let good = DrinfeldModuleSpec::rank2(&f, Poly::one(&f), Poly::one(&f)).unwrap();
        for p in crate::ffpoly::monic_primes_up_to(&f, 3) {
            assert_eq!(reduce_mod(&good, &p).unwrap().rank(), 2);
        }
        assert!(matches!(DrinfeldModuleSpec::rank2(&f, t.clone(), Poly::zero(&f)), Err(DrinfeldError::InvalidModule(_))));
    }

    fn arb_poly(r: u32, max_deg: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..r, 0..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn ring_map_law(a in arb_poly(3, 3), b in arb_poly(3, 3), which in 0usize..3) {
            let f3 = field_make(3, 1, None).unwrap();
            let t = Poly::x(&f3);
            let module = match which {
                0 => DrinfeldModuleSpec::carlitz(&f3),
                1 => DrinfeldModuleSpec::rank2(&f3, Poly::one(&f3), Poly::one(&f3)).unwrap(),
                _ => DrinfeldModuleSpec::rank2(&f3, t, Poly::one(&f3)).unwrap(),
            };
            let a = Poly::from_reps(&f3, &a);
            let b = Poly::from_reps(&f3, &b);
            prop_assert_eq!(phi_of(&(&a * &b), &module), &phi_of(&a, &module) * &phi_of(&b, &module));
            prop_assert_eq!(phi_of(&(&a + &b), &module), &phi_of(&a, &module) + &phi_of(&b, &module));
        }
    }
}
