//! Growth series `W(t) = Σ_w t^{d(w)}` and the radius of convergence.

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::coxeter::{CoxeterSystem, GenSet};
use crate::poly::{identify_root, smallest_positive_root, ExactRoot, Poly, RationalFunction};
use crate::scalar::{format_rational, rat, rational_to_f64, Scalar};
use crate::Result;

/// `W_T(t)` for a spherical `T`.
pub fn finite_parabolic_poly(system: &CoxeterSystem, t: GenSet) -> Result<Poly> {
    system.parabolic_growth(t)
}

/// Exact growth series. Finite groups are enumerated; infinite ones use
/// `1/W(t) = Σ_{T ∈ 𝓕} (-1)^{|T|} / W_T(1/t)`, where palindromicity gives
/// `1/W_T(1/t) = t^{deg} / W_T(t)`.
pub fn growth_series(system: &CoxeterSystem) -> Result<RationalFunction> {
    let all = system.all_generators();
    if system.is_spherical(all) {
        return Ok(RationalFunction::from_poly(system.parabolic_growth(all)?));
    }
    Ok(reciprocal_sum(system)?.recip().expect("1/W(t) is nonzero at t = 0"))
}

/// `Σ_{T ∈ 𝓕} (-1)^{|T|} / W_T(1/t)` as a rational function (equal to
/// `1/W(t)`; for finite `W` this is Solomon's identity).
pub fn reciprocal_sum(system: &CoxeterSystem) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero();
    for sub in system.spherical_subsets()? {
        let deg = sub.longest_length();
        let term = RationalFunction::new(Poly::monomial(BigRational::one(), deg), sub.growth.clone());
        acc = if sub.set.len() % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

/// Exact rational value of the series' rational function at `t`.
pub fn eval_series(series: &RationalFunction, t: &BigRational) -> Result<BigRational> {
    series.eval(t)
}

/// Radius of convergence of a growth series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRadius {
    /// Closed form when the root is rational or quadratic.
    #[serde(skip)]
    pub exact: Option<ExactRoot>,
    /// Isolating interval `(lo, hi]` containing the root (absent for finite groups).
    #[serde(skip)]
    pub interval: Option<(BigRational, BigRational)>,
    pub is_infinite: bool,
    pub approx: f64,
}

impl ConvergenceRadius {
    pub fn infinite() -> Self {
        ConvergenceRadius { exact: None, interval: None, is_infinite: true, approx: f64::INFINITY }
    }

    pub fn value_f64(&self) -> f64 {
        self.approx
    }

    /// Whether `t` lies within `margin` (relative) of `ρ`.
    pub fn is_near(&self, t: f64, margin: f64) -> bool {
        !self.is_infinite && (t - self.approx).abs() <= margin * self.approx
    }
}

impl fmt::Display for ConvergenceRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite {
            return f.write_str("inf");
        }
        match (&self.exact, &self.interval) {
            (Some(e), _) => write!(f, "{e} ≈ {:.12}", self.approx),
            (None, Some((lo, hi))) => write!(f, "in ({:.15}, {:.15}]", rational_to_f64(lo), rational_to_f64(hi)),
            _ => write!(f, "{}", self.approx),
        }
    }
}

/// Isolation width for the root of the denominator.
pub fn rho_width() -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::from(10u64).pow(13))
}

/// Smallest positive real root of the denominator, or `∞` for polynomials.
pub fn rho(series: &RationalFunction) -> ConvergenceRadius {
    if series.is_polynomial() {
        return ConvergenceRadius::infinite();
    }
    let den = series.denominator();
    match smallest_positive_root(den, &rho_width()) {
        None => ConvergenceRadius::infinite(),
        Some((lo, hi)) => {
            let exact = identify_root(den, &lo, &hi);
            let approx = match &exact {
                Some(e) => e.approx(),
                None => rational_to_f64(&((&lo + &hi) / rat(2, 1))),
            };
            ConvergenceRadius { exact, interval: Some((lo, hi)), is_infinite: false, approx }
        }
    }
}

/// Rendering used by the CLI: `P(t) / Q(t)` with coefficient lists.
pub fn describe_series(series: &RationalFunction) -> String {
    let list = |p: &Poly| p.coeffs().iter().map(format_rational).collect::<Vec<_>>().join(", ");
    format!(
        "{}\n  numerator coefficients:   [{}]\n  denominator coefficients: [{}]",
        series.render(),
        list(series.numerator()),
        list(series.denominator())
    )
}

/// `1/W(t)` evaluated exactly (0 at poles of `W`).
pub fn reciprocal_at(series: &RationalFunction, t: &BigRational) -> BigRational {
    let num = series.numerator().eval(t);
    if num.is_zero() {
        // W has a pole here
        return BigRational::zero();
    }
    series.denominator().eval(t) / num
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::INFINITY;

    fn three_free() -> CoxeterSystem {
        CoxeterSystem::right_angled(3, &[]).unwrap()
    }

    fn corpus() -> Vec<CoxeterSystem> {
        vec![
            CoxeterSystem::new(vec!["s".into()], vec![vec![1]]).unwrap(),
            CoxeterSystem::infinite_dihedral(),
            CoxeterSystem::dihedral(3),
            CoxeterSystem::dihedral(5),
            three_free(),
            CoxeterSystem::right_angled_cycle(4),
            CoxeterSystem::right_angled_cycle(5),
            CoxeterSystem::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]],
            )
            .unwrap(),
            CoxeterSystem::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![vec![1, 4, INFINITY], vec![4, 1, 3], vec![INFINITY, 3, 1]],
            )
            .unwrap(),
        ]
    }

    #[test]
    fn parabolic_examples() {
        let a2 = CoxeterSystem::dihedral(3);
        assert_eq!(finite_parabolic_poly(&a2, GenSet(0)).unwrap(), Poly::one());
        assert_eq!(finite_parabolic_poly(&a2, GenSet(1)).unwrap(), Poly::from_ints(&[1, 1]));
        assert_eq!(finite_parabolic_poly(&a2, GenSet(3)).unwrap(), Poly::from_ints(&[1, 2, 2, 1]));
        let dinf = CoxeterSystem::infinite_dihedral();
        assert!(finite_parabolic_poly(&dinf, GenSet(3)).is_err());
    }

    #[test]
    fn series_examples() {
        let z2 = CoxeterSystem::new(vec!["s".into()], vec![vec![1]]).unwrap();
        assert_eq!(growth_series(&z2).unwrap(), RationalFunction::from_poly(Poly::from_ints(&[1, 1])));
        let dinf = growth_series(&CoxeterSystem::infinite_dihedral()).unwrap();
        assert_eq!(dinf, RationalFunction::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[1, -1])));
        assert_eq!(dinf.render(), "(1+t)/(1-t)");
        let free = growth_series(&three_free()).unwrap();
        assert_eq!(free, RationalFunction::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[1, -2])));
    }

    #[test]
    fn rho_examples() {
        let r = rho(&growth_series(&CoxeterSystem::infinite_dihedral()).unwrap());
        assert_eq!(r.exact, Some(ExactRoot::Rational(rat(1, 1))));
        let r = rho(&growth_series(&three_free()).unwrap());
        assert_eq!(r.exact, Some(ExactRoot::Rational(rat(1, 2))));
        assert!(rho(&growth_series(&CoxeterSystem::dihedral(3)).unwrap()).is_infinite);
        let r = rho(&growth_series(&CoxeterSystem::right_angled_cycle(5)).unwrap());
        assert!((r.approx - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(matches!(r.exact, Some(ExactRoot::Quadratic { .. })));
        let (lo, hi) = r.interval.unwrap();
        assert!(&hi - &lo <= rho_width());
    }

    #[test]
    fn eval_examples() {
        let dinf = growth_series(&CoxeterSystem::infinite_dihedral()).unwrap();
        assert_eq!(eval_series(&dinf, &rat(1, 2)).unwrap(), rat(3, 1));
        assert_eq!(eval_series(&dinf, &rat(2, 1)).unwrap(), rat(-3, 1));
        assert_eq!(eval_series(&dinf, &rat(0, 1)).unwrap(), rat(1, 1));
        assert!(eval_series(&dinf, &rat(1, 1)).is_err());
        assert_eq!(reciprocal_at(&dinf, &rat(1, 1)), rat(0, 1));
    }

    #[test]
    fn taylor_coefficients_match_ball_shells() {
        for sys in corpus() {
            let series = growth_series(&sys).unwrap();
            let coeffs = series.taylor(8).unwrap();
            let profile = sys.enumerate_ball(8).unwrap().profile();
            for (k, c) in coeffs.iter().enumerate() {
                let shell = profile.get(k).copied().unwrap_or(0);
                assert_eq!(c, &rat(shell as i64, 1), "degree {k} of {:?}", sys.matrix());
            }
        }
    }

    #[test]
    fn reciprocity_identity_is_exact() {
        for sys in corpus() {
            let lhs = reciprocal_sum(&sys).unwrap();
            let w = growth_series(&sys).unwrap();
            let diff = lhs.sub(&w.recip().unwrap());
            // holds for finite W as well (Solomon's identity)
            assert!(diff.is_zero(), "{:?}", sys.matrix());
        }
    }

    #[test]
    fn infinite_groups_have_rho_at_most_one() {
        for sys in corpus() {
            let r = rho(&growth_series(&sys).unwrap());
            assert_eq!(r.is_infinite, sys.is_spherical(sys.all_generators()));
            if !r.is_infinite {
                assert!(r.approx <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn product_of_systems_multiplies_series() {
        let d = growth_series(&CoxeterSystem::infinite_dihedral()).unwrap();
        let sq = growth_series(&CoxeterSystem::right_angled_cycle(4)).unwrap();
        assert_eq!(sq, d.mul(&d));
    }
}
