//! The deformed group algebra `ℂ_t[W]` with Hecke `t`-multiplication
//!
//! ```text
//! δ_w δ_s = δ_{ws}                     if d(ws) > d(w)
//!         = t δ_{ws} + (t - 1) δ_w     if d(ws) < d(w)
//! ```
//!
//! Scalars are generic: exact rationals (`t` specialized) or rational
//! functions in the formal variable `t`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coxeter::{CoxeterSystem, GenSet, GroupElement};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Finitely supported `Σ a_w δ_w`; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct HeckeElement<F: Scalar> {
    terms: BTreeMap<GroupElement, F>,
}

/// Which idempotent of a finite parabolic to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdempotentKind {
    /// `p_T = W_T(t)⁻¹ Σ_{w ∈ W_T} δ_w`.
    P,
    /// `h_T = W_T(t⁻¹)⁻¹ Σ_{u ∈ W_T} (-t)^{-d(u)} δ_u`.
    H,
}

impl<F: Scalar> HeckeElement<F> {
    pub fn zero() -> Self {
        HeckeElement { terms: BTreeMap::new() }
    }

    /// `δ_1`, the multiplicative unit.
    pub fn unit() -> Self {
        Self::basis(GroupElement::identity())
    }

    /// `δ_w`.
    pub fn basis(w: GroupElement) -> Self {
        Self::monomial(w, F::one())
    }

    pub fn monomial(w: GroupElement, c: F) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, F)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    /// Adds `c·δ_w` in place.
    pub fn add_term(&mut self, w: GroupElement, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let sum = old.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &GroupElement) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &F)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&F::from_i64(-1)))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a.mul(c))))
    }

    /// Right multiplication by a single generator `δ_s`.
    pub fn mul_generator(&self, system: &CoxeterSystem, s: usize, t: &F) -> Result<Self> {
        let t_minus_one = t.sub(&F::one());
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let (ws, longer) = system.mul_gen(w, s)?;
            if longer {
                out.add_term(ws, c.clone());
            } else {
                out.add_term(ws, c.mul(t));
                out.add_term(w.clone(), c.mul(&t_minus_one));
            }
        }
        Ok(out)
    }

    /// Hecke `t`-product, right-multiplying one generator at a time along
    /// the reduced words of the right factor's support.
    pub fn mul(&self, other: &Self, system: &CoxeterSystem, t: &F) -> Result<Self> {
        let mut out = Self::zero();
        for (v, b) in &other.terms {
            let mut x = self.clone();
            for s in v.letters() {
                x = x.mul_generator(system, s, t)?;
            }
            for (w, c) in x.terms {
                out.add_term(w, c.mul(b));
            }
        }
        Ok(out)
    }

    /// `a* = Σ conj(a_{w⁻¹}) δ_w`.
    pub fn star(&self, system: &CoxeterSystem) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(system.inverse(w)?, c.conj());
        }
        Ok(out)
    }

    /// `⟨a, b⟩_t = Σ a_w conj(b_w) t^{d(w)}`.
    pub fn inner(&self, other: &Self, t: &F) -> F {
        let mut acc = F::zero();
        for (w, a) in &self.terms {
            if let Some(b) = other.terms.get(w) {
                acc = acc.add(&a.mul(&b.conj()).mul(&t.pow(w.len() as u32)));
            }
        }
        acc
    }

    /// `D(Σ a_w δ_w) = Σ (-t)^{d(w)} a_w δ_w`; the result lives in the algebra
    /// at weight `1/t`.
    pub fn dualize(&self, t: &F) -> Self {
        let minus_t = t.neg();
        Self::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a.mul(&minus_t.pow(w.len() as u32)))))
    }

    /// Coefficient of `δ_1`; for a self-adjoint idempotent this is its von
    /// Neumann trace.
    pub fn delta1_coefficient(&self) -> F {
        self.coeff(&GroupElement::identity())
    }

    /// Renders with generator labels, e.g. `1/2*[s u] + 3*[e]`.
    pub fn render(&self, system: &CoxeterSystem) -> String
    where
        F: fmt::Display,
    {
        render_terms(self, |w| system.format_element(w))
    }
}

fn render_terms<F: Scalar + fmt::Display>(e: &HeckeElement<F>, name: impl Fn(&GroupElement) -> String) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.terms.iter().map(|(w, c)| format!("{c}*[{}]", name(w))).collect::<Vec<_>>().join(" + ")
}

impl<F: Scalar + fmt::Display> fmt::Debug for HeckeElement<F> {
    /// `c1*[w1] + c2*[w2] + …` with normal-form words as generator indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = render_terms(self, |w| w.letters().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
        f.write_str(&s)
    }
}

/// `p_T` or `h_T` for a spherical `T`.
pub fn idempotent<F: Scalar>(system: &CoxeterSystem, kind: IdempotentKind, t_set: GenSet, t: &F) -> Result<HeckeElement<F>> {
    if !system.is_spherical(t_set) {
        return Err(Error::NotSpherical(t_set.iter().collect()));
    }
    let growth = system.parabolic_growth(t_set)?;
    let elements = system.parabolic_elements(t_set)?;
    match kind {
        IdempotentKind::P => {
            let norm = growth.eval_in(t).inv().ok_or(Error::Pole)?;
            Ok(HeckeElement::from_terms(elements.into_iter().map(|w| (w, norm.clone()))))
        }
        IdempotentKind::H => {
            let t_inv = t.inv().ok_or_else(|| Error::NonPositiveWeight("t = 0".into()))?;
            let norm = growth.eval_in(&t_inv).inv().ok_or(Error::Pole)?;
            let minus_t_inv = t_inv.neg();
            Ok(HeckeElement::from_terms(
                elements.into_iter().map(|u| {
                    let c = norm.mul(&minus_t_inv.pow(u.len() as u32));
                    (u, c)
                }),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::poly::RationalFunction;
    use crate::scalar::rat;

    type H = HeckeElement<BigRational>;

    fn el(sys: &CoxeterSystem, word: &[usize]) -> GroupElement {
        sys.normal_form(word).unwrap()
    }

    fn random_element(sys: &CoxeterSystem, rng: &mut ChaCha8Rng, radius: usize) -> H {
        let ball: Vec<_> = sys.enumerate_ball(radius).unwrap().iter().cloned().collect();
        let n = rng.gen_range(1..5);
        H::from_terms((0..n).map(|_| {
            let w = ball[rng.gen_range(0..ball.len())].clone();
            (w, rat(rng.gen_range(-4..=4), rng.gen_range(1..4)))
        }))
    }

    fn random_t(rng: &mut ChaCha8Rng) -> BigRational {
        rat(rng.gen_range(1..9), rng.gen_range(1..5))
    }

    #[test]
    fn generator_square() {
        let sys = CoxeterSystem::infinite_dihedral();
        let t = rat(3, 4);
        let s = H::basis(el(&sys, &[0]));
        let expected = H::from_terms([(GroupElement::identity(), t.clone()), (el(&sys, &[0]), rat(-1, 4))]);
        assert_eq!(s.mul(&s, &sys, &t).unwrap(), expected);
    }

    #[test]
    fn t_equal_one_is_the_group_algebra() {
        let sys = CoxeterSystem::dihedral(3);
        let one = rat(1, 1);
        let ball: Vec<_> = sys.enumerate_ball(3).unwrap().iter().cloned().collect();
        for a in &ball {
            for b in &ball {
                let prod = H::basis(a.clone()).mul(&H::basis(b.clone()), &sys, &one).unwrap();
                assert_eq!(prod, H::basis(sys.multiply(a, b).unwrap()));
            }
        }
    }

    #[test]
    fn dinfty_product_by_hand() {
        // δ_su δ_us = δ_s (δ_u δ_u) δ_s = t² δ_1 + t(t-1) δ_s + (t-1) δ_sus
        let sys = CoxeterSystem::infinite_dihedral();
        let t = rat(2, 3);
        let lhs = H::basis(el(&sys, &[0, 1])).mul(&H::basis(el(&sys, &[1, 0])), &sys, &t).unwrap();
        let rhs = H::from_terms([
            (GroupElement::identity(), &t * &t),
            (el(&sys, &[0]), &t * (&t - rat(1, 1))),
            (el(&sys, &[0, 1, 0]), &t - rat(1, 1)),
        ]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_additive_products_concatenate() {
        let sys = CoxeterSystem::right_angled_cycle(4);
        let t = rat(5, 2);
        let ball: Vec<_> = sys.enumerate_ball(2).unwrap().iter().cloned().collect();
        for w in &ball {
            for v in &ball {
                let wv = sys.multiply(w, v).unwrap();
                if wv.len() == w.len() + v.len() {
                    let p = H::basis(w.clone()).mul(&H::basis(v.clone()), &sys, &t).unwrap();
                    assert_eq!(p, H::basis(wv));
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        let sys = CoxeterSystem::infinite_dihedral();
        let a = H::from_terms([(el(&sys, &[0]), rat(2, 1)), (el(&sys, &[0, 1]), rat(3, 1))]);
        let expected = H::from_terms([(el(&sys, &[0]), rat(2, 1)), (el(&sys, &[1, 0]), rat(3, 1))]);
        assert_eq!(a.star(&sys).unwrap(), expected);
        assert_eq!(H::unit().star(&sys).unwrap(), H::unit());
    }

    #[test]
    fn inner_examples() {
        let sys = CoxeterSystem::infinite_dihedral();
        let half = rat(1, 2);
        let su = H::basis(el(&sys, &[0, 1]));
        assert_eq!(su.inner(&su, &half), rat(1, 4));
        assert_eq!(su.inner(&H::basis(el(&sys, &[1, 0])), &half), rat(0, 1));
        assert_eq!(H::unit().inner(&H::unit(), &half), rat(1, 1));
    }

    #[test]
    fn idempotent_examples() {
        let sys = CoxeterSystem::infinite_dihedral();
        let t = rat(3, 1);
        let s = el(&sys, &[0]);
        let p = idempotent(&sys, IdempotentKind::P, GenSet(1), &t).unwrap();
        assert_eq!(p, H::from_terms([(GroupElement::identity(), rat(1, 4)), (s.clone(), rat(1, 4))]));
        let h = idempotent(&sys, IdempotentKind::H, GenSet(1), &t).unwrap();
        // (δ_1 - t⁻¹ δ_s) / (1 + t⁻¹) at t = 3
        assert_eq!(h, H::from_terms([(GroupElement::identity(), rat(3, 4)), (s, rat(-1, 4))]));
        assert_eq!(idempotent(&sys, IdempotentKind::H, GenSet(0), &t).unwrap(), H::unit());
        assert!(idempotent(&sys, IdempotentKind::P, GenSet(3), &t).is_err());
        assert_eq!(p.delta1_coefficient(), rat(1, 4));
        assert_eq!(h.delta1_coefficient(), rat(3, 4));
        assert_eq!(H::basis(el(&sys, &[1])).delta1_coefficient(), rat(0, 1));
    }

    #[test]
    fn dualize_examples() {
        let sys = CoxeterSystem::infinite_dihedral();
        let t = rat(2, 1);
        assert_eq!(H::unit().dualize(&t), H::unit());
        let s = el(&sys, &[0]);
        assert_eq!(H::basis(s.clone()).dualize(&t), H::monomial(s, rat(-2, 1)));
        let a2 = CoxeterSystem::dihedral(3);
        for set in [GenSet(1), GenSet(3)] {
            let p = idempotent(&a2, IdempotentKind::P, set, &t).unwrap();
            let h = idempotent(&a2, IdempotentKind::H, set, &rat(1, 2)).unwrap();
            assert_eq!(p.dualize(&t), h);
        }
    }

    #[test]
    fn traces_of_idempotents_are_parabolic_reciprocals() {
        let sys = CoxeterSystem::dihedral(3);
        let t = rat(2, 5);
        for sub in sys.spherical_subsets().unwrap() {
            let p = idempotent(&sys, IdempotentKind::P, sub.set, &t).unwrap();
            let h = idempotent(&sys, IdempotentKind::H, sub.set, &t).unwrap();
            assert_eq!(p.delta1_coefficient(), sub.growth.eval(&t).recip());
            assert_eq!(h.delta1_coefficient(), sub.growth.eval(&t.recip()).recip());
        }
    }

    fn check_axioms(sys: &CoxeterSystem, seed: u64, cases: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cases {
            let t = random_t(&mut rng);
            let (x, y, z) = (random_element(sys, &mut rng, 3), random_element(sys, &mut rng, 3), random_element(sys, &mut rng, 3));
            let xy = x.mul(&y, sys, &t).unwrap();
            assert_eq!(xy.mul(&z, sys, &t).unwrap(), x.mul(&y.mul(&z, sys, &t).unwrap(), sys, &t).unwrap());
            let (xs, ys) = (x.star(sys).unwrap(), y.star(sys).unwrap());
            assert_eq!(x.inner(&y, &t), ys.inner(&xs, &t));
            assert_eq!(xy.inner(&z, &t), y.inner(&xs.mul(&z, sys, &t).unwrap(), &t));
            assert_eq!(xy.delta1_coefficient(), x.inner(&ys, &t));
            assert_eq!(xy.star(sys).unwrap(), ys.mul(&xs, sys, &t).unwrap());
            let tinv = t.recip();
            assert_eq!(xy.dualize(&t), x.dualize(&t).mul(&y.dualize(&t), sys, &tinv).unwrap());
            assert_eq!(x.dualize(&t).inner(&y.dualize(&t), &tinv), x.inner(&y, &t));
            assert_eq!(x.dualize(&t).dualize(&tinv), x);
        }
    }

    #[test]
    fn algebra_axioms_dinfty() {
        check_axioms(&CoxeterSystem::infinite_dihedral(), 1, 60);
    }

    #[test]
    fn algebra_axioms_square() {
        check_axioms(&CoxeterSystem::right_angled_cycle(4), 2, 60);
    }

    #[test]
    fn algebra_axioms_a2() {
        check_axioms(&CoxeterSystem::dihedral(3), 3, 30);
    }

    #[test]
    fn right_multiplication_by_p_fixes_invariants() {
        for sys in [CoxeterSystem::infinite_dihedral(), CoxeterSystem::dihedral(3)] {
            let t = rat(3, 5);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let ball: Vec<_> = sys.enumerate_ball(3).unwrap().iter().cloned().collect();
            for sub in sys.spherical_subsets().unwrap() {
                let p = idempotent(&sys, IdempotentKind::P, sub.set, &t).unwrap();
                let parabolic = sys.parabolic_elements(sub.set).unwrap();
                for _ in 0..10 {
                    // a right-W_T-invariant element: constant on cosets
                    let mut inv = H::zero();
                    for _ in 0..2 {
                        let w = &ball[rng.gen_range(0..ball.len())];
                        let c = rat(rng.gen_range(1..5), 1);
                        let rep = sys.min_coset_rep(w, sub.set).unwrap();
                        for u in &parabolic {
                            inv.add_term(sys.multiply(&rep, u).unwrap(), c.clone());
                        }
                    }
                    let is_invariant = |x: &H| {
                        x.terms().all(|(w, c)| parabolic.iter().all(|u| &x.coeff(&sys.multiply(w, u).unwrap()) == c))
                    };
                    assert!(is_invariant(&inv));
                    assert_eq!(inv.mul(&p, &sys, &t).unwrap(), inv);
                    let x = random_element(&sys, &mut rng, 3);
                    assert_eq!(x.mul(&p, &sys, &t).unwrap() == x, is_invariant(&x));
                }
            }
        }
    }

    #[test]
    fn h_idempotent_relations() {
        for sys in [CoxeterSystem::infinite_dihedral(), CoxeterSystem::dihedral(3), CoxeterSystem::right_angled_cycle(4)] {
            let t = rat(7, 3);
            let subsets = sys.spherical_subsets().unwrap();
            for sub in &subsets {
                let h = idempotent(&sys, IdempotentKind::H, sub.set, &t).unwrap();
                assert_eq!(h.mul(&h, &sys, &t).unwrap(), h);
                assert_eq!(h.star(&sys).unwrap(), h);
                for s in sub.set.iter() {
                    let ds = H::basis(sys.normal_form(&[s]).unwrap());
                    assert_eq!(ds.mul(&h, &sys, &t).unwrap(), h.scale(&rat(-1, 1)));
                }
                for u in sys.parabolic_elements(sub.set).unwrap() {
                    let sign = rat(if u.len() % 2 == 0 { 1 } else { -1 }, 1);
                    assert_eq!(H::basis(u).mul(&h, &sys, &t).unwrap(), h.scale(&sign));
                }
                for smaller in subsets.iter().filter(|u| u.set.is_subset_of(sub.set)) {
                    let hu = idempotent(&sys, IdempotentKind::H, smaller.set, &t).unwrap();
                    assert_eq!(hu.mul(&h, &sys, &t).unwrap(), h);
                }
                let p = idempotent(&sys, IdempotentKind::P, sub.set, &t).unwrap();
                assert_eq!(p.mul(&p, &sys, &t).unwrap(), p);
            }
        }
    }

    #[test]
    fn formal_mode_matches_specialization() {
        let sys = CoxeterSystem::infinite_dihedral();
        let tf = RationalFunction::t();
        let s = HeckeElement::<RationalFunction>::basis(el(&sys, &[0]));
        let su = HeckeElement::<RationalFunction>::basis(el(&sys, &[0, 1]));
        let prod = s.mul(&su, &sys, &tf).unwrap().mul(&s, &sys, &tf).unwrap();
        let t = rat(5, 7);
        let s_q = H::basis(el(&sys, &[0]));
        let su_q = H::basis(el(&sys, &[0, 1]));
        let prod_q = s_q.mul(&su_q, &sys, &t).unwrap().mul(&s_q, &sys, &t).unwrap();
        for (w, c) in prod.terms() {
            assert_eq!(c.eval(&t).unwrap(), prod_q.coeff(w));
        }
        assert_eq!(prod.len(), prod_q.len());
        let p = idempotent(&sys, IdempotentKind::P, GenSet(1), &tf).unwrap();
        assert_eq!(format!("{}", p.delta1_coefficient()), "1/(1+t)");
    }

    #[test]
    fn debug_serialization() {
        let sys = CoxeterSystem::infinite_dihedral();
        let a = H::from_terms([(el(&sys, &[0, 1]), rat(1, 2)), (GroupElement::identity(), rat(3, 1))]);
        assert_eq!(format!("{a:?}"), "3*[] + 1/2*[0 1]");
        assert_eq!(a.render(&sys), "3*[e] + 1/2*[s u]");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn star_is_an_involution(word in proptest::collection::vec(0usize..4, 0..8), c in -5i64..5) {
            let sys = CoxeterSystem::right_angled_cycle(4);
            let a = H::monomial(sys.normal_form(&word).unwrap(), rat(c, 1)).add(&H::unit());
            prop_assert_eq!(a.star(&sys).unwrap().star(&sys).unwrap(), a);
        }
    }
}
