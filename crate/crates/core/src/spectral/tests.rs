use super::*;
use crate::growth::growth_series;
use crate::scalar::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn inner_f64(slice: &ComplexSlice, k: usize, f: &[f64], g: &[f64], t: f64) -> f64 {
    slice.cells(k).iter().zip(f.iter().zip(g)).map(|(c, (a, b))| a * b * t.powi(c.weight_exp() as i32)).sum()
}

#[test]
fn formal_euler_characteristic_is_reciprocal_growth() {
    for sys in [
        CoxeterSystem::infinite_dihedral(),
        CoxeterSystem::dihedral(3),
        CoxeterSystem::right_angled_cycle(4),
        CoxeterSystem::right_angled_cycle(5),
    ] {
        let chi = euler_characteristic_formal(&sys).unwrap();
        assert_eq!(chi, growth_series(&sys).unwrap().recip().unwrap());
    }
}

#[test]
fn dual_and_chamber_sums_agree() {
    let sys = CoxeterSystem::right_angled_cycle(5);
    for t in [rat(1, 3), rat(2, 1), rat(7, 5)] {
        assert_eq!(euler_characteristic(&sys, &t).unwrap(), euler_characteristic_dual(&sys, &t).unwrap());
    }
}

#[test]
fn chain_traces_of_infinite_dihedral() {
    let sys = CoxeterSystem::infinite_dihedral();
    let t = rat(1, 2);
    // c^0 = 1 + 2/(1+t); both edges have trivial stabilizer
    assert_eq!(c_i(&sys, 0, &t).unwrap(), rat(7, 3));
    assert_eq!(c_i(&sys, 1, &t).unwrap(), rat(2, 1));
}

#[test]
fn projection_is_idempotent_and_self_adjoint() {
    let sys = CoxeterSystem::right_angled_cycle(4);
    let slice = ComplexSlice::build(&sys, Cellulation::Dual, 4).unwrap();
    let t = rat(1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for scheme in [Scheme::Absolute, Scheme::Interior] {
        let n = slice.num_cells(1);
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let opts = SolverOptions::default();
        let (pu, r) = harmonic_projection(&slice, 1, &t, scheme, &u, opts).unwrap();
        assert!(r < 1e-7, "residual {r}");
        let (ppu, _) = harmonic_projection(&slice, 1, &t, scheme, &pu, opts).unwrap();
        for (a, b) in pu.iter().zip(&ppu) {
            assert!((a - b).abs() < 1e-7);
        }
        let (pv, _) = harmonic_projection(&slice, 1, &t, scheme, &v, opts).unwrap();
        let lhs = inner_f64(&slice, 1, &pu, &v, 0.5);
        let rhs = inner_f64(&slice, 1, &u, &pv, 0.5);
        assert!((lhs - rhs).abs() < 1e-7, "{lhs} vs {rhs}");
    }
}

#[test]
fn estimate_is_orientation_independent() {
    let sys = CoxeterSystem::right_angled_cycle(4);
    let slice = ComplexSlice::build(&sys, Cellulation::Dual, 4).unwrap();
    let flipped = slice.reoriented(5).unwrap();
    let t = rat(1, 2);
    for i in 0..=2 {
        let a = betti_estimate_on_slice(&slice, i, &t, Scheme::Interior, SolverOptions::default()).unwrap();
        let b = betti_estimate_on_slice(&flipped, i, &t, Scheme::Interior, SolverOptions::default()).unwrap();
        assert!((a.value - b.value).abs() < 1e-8);
    }
}

#[test]
fn infinite_dihedral_degree_zero() {
    let sys = CoxeterSystem::infinite_dihedral();
    let est = betti_estimate(&sys, 0, &rat(1, 2), Cellulation::Dual, 12, Scheme::Interior).unwrap();
    assert!((est.value - 1.0 / 3.0).abs() < 1e-2, "{}", est.value);
    let est = betti_estimate(&sys, 0, &rat(2, 1), Cellulation::Dual, 12, Scheme::Interior).unwrap();
    assert!(est.value.abs() < 1e-2, "{}", est.value);
}

#[test]
fn interior_scheme_decreases_with_radius() {
    let sys = CoxeterSystem::infinite_dihedral();
    let t = rat(3, 4);
    let values: Vec<f64> = (2..8)
        .map(|r| betti_estimate(&sys, 0, &t, Cellulation::Dual, r, Scheme::Interior).unwrap().value)
        .collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{values:?}");
    }
}

#[test]
fn rejects_non_positive_weight() {
    let sys = CoxeterSystem::infinite_dihedral();
    assert!(matches!(
        betti_estimate(&sys, 0, &rat(0, 1), Cellulation::Dual, 2, Scheme::Interior),
        Err(Error::NonPositiveWeight(_))
    ));
}

#[test]
fn csv_row_has_header_arity() {
    let sys = CoxeterSystem::infinite_dihedral();
    let est = betti_estimate(&sys, 0, &rat(1, 2), Cellulation::Dual, 3, Scheme::Interior).unwrap();
    let row = csv_row(&sys, &est).unwrap();
    assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
}

#[test]
fn warns_near_rho() {
    let sys = CoxeterSystem::right_angled_cycle(5);
    // ρ = (3 - √5)/2 ≈ 0.382 for the pentagon
    assert!(near_rho_warning(&sys, &rat(38, 100)).unwrap().is_some());
    assert!(near_rho_warning(&sys, &rat(1, 10)).unwrap().is_none());
}
