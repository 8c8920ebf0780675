//! Exact identity suite: Hecke algebra axioms, the idempotents `p_T` and
//! `h_T`, the duality map on the algebra, and the chain-level identities of
//! the Davis complex slices. Everything runs in rational arithmetic; a single
//! mismatch fails the check.

use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::davis::{check_ghd_eligible, poincare_map, theta, Cellulation, ComplexSlice};
use crate::hecke::{idempotent, HeckeElement, IdempotentKind};
use crate::scalar::{format_rational, rat};
use crate::Result;

type H = HeckeElement<BigRational>;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random triples per system for the algebra axioms.
    pub cases: usize,
    /// Radius of the ball the random algebra elements are drawn from.
    pub element_radius: usize,
    /// Radius of the complex slices.
    pub slice_radius: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 2024, cases: 120, element_radius: 4, slice_radius: 4 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub system: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub seconds: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn total_cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }

    /// Cases of the named check summed over systems.
    pub fn cases_of(&self, name: &str) -> usize {
        self.checks.iter().filter(|c| c.name == name).map(|c| c.cases).sum()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            writeln!(f, "{status:6} {:<40} {:<12} {:>5} cases", c.name, c.system, c.cases)?;
            for msg in c.failures.iter().take(3) {
                writeln!(f, "       {msg}")?;
            }
        }
        write!(
            f,
            "{} checks, {} cases, {:.1}s: {}",
            self.checks.len(),
            self.total_cases(),
            self.seconds,
            if self.passed() { "all identities hold" } else { "MISMATCH" }
        )
    }
}

/// The two systems of the default suite: `D_∞` and the right-angled 4-cycle.
pub fn default_corpus() -> Vec<(String, CoxeterSystem)> {
    vec![
        ("D_inf".to_string(), CoxeterSystem::infinite_dihedral()),
        ("4-cycle".to_string(), CoxeterSystem::right_angled_cycle(4)),
    ]
}

struct Recorder<'a> {
    system: &'a str,
    checks: Vec<CheckResult>,
}

impl Recorder<'_> {
    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckResult {
                    name: name.to_string(),
                    system: self.system.to_string(),
                    cases: 0,
                    failures: Vec::new(),
                });
                self.checks.len() - 1
            }
        };
        let check = &mut self.checks[idx];
        check.cases += 1;
        if !ok {
            check.failures.push(detail());
        }
    }
}

fn random_element(ball: &[GroupElement], rng: &mut ChaCha8Rng) -> H {
    let n = rng.gen_range(1..5);
    H::from_terms((0..n).map(|_| {
        let w = ball[rng.gen_range(0..ball.len())].clone();
        (w, rat(rng.gen_range(-4..=4), rng.gen_range(1..4)))
    }))
}

fn random_weight(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(1..9), rng.gen_range(1..5))
}

fn random_cochain(rng: &mut ChaCha8Rng, mask: &[bool]) -> Vec<BigRational> {
    mask.iter().map(|&m| if m { rat(rng.gen_range(-3..=3), rng.gen_range(1..3)) } else { BigRational::zero() }).collect()
}

/// Runs every identity on every system.
pub fn run_identity_suite(corpus: &[(String, CoxeterSystem)], opts: VerifyOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut report = VerifyReport::default();
    for (i, (name, sys)) in corpus.iter().enumerate() {
        let mut rec = Recorder { system: name, checks: Vec::new() };
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        algebra_axioms(sys, &mut rec, &mut rng, opts)?;
        idempotents(sys, &mut rec, &mut rng)?;
        chain_identities(sys, &mut rec, &mut rng, opts)?;
        report.checks.extend(rec.checks);
    }
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn algebra_axioms(sys: &CoxeterSystem, rec: &mut Recorder, rng: &mut ChaCha8Rng, opts: VerifyOptions) -> Result<()> {
    let ball: Vec<GroupElement> = sys.enumerate_ball(opts.element_radius)?.iter().cloned().collect();
    for _ in 0..opts.cases {
        let t = random_weight(rng);
        let tinv = t.recip();
        let (x, y, z) = (random_element(&ball, rng), random_element(&ball, rng), random_element(&ball, rng));
        let ctx = || format!("t={} x={x:?} y={y:?} z={z:?}", format_rational(&t));
        let xy = x.mul(&y, sys, &t)?;
        let (xs, ys) = (x.star(sys)?, y.star(sys)?);

        rec.record("associativity", xy.mul(&z, sys, &t)? == x.mul(&y.mul(&z, sys, &t)?, sys, &t)?, ctx);
        rec.record("unit", x.mul(&H::unit(), sys, &t)? == x && H::unit().mul(&x, sys, &t)? == x, ctx);
        rec.record("star reverses products", xy.star(sys)? == ys.mul(&xs, sys, &t)?, ctx);
        rec.record("star is an involution", xs.star(sys)? == x, ctx);
        rec.record("<x,y> = <y*,x*>", x.inner(&y, &t) == ys.inner(&xs, &t), ctx);
        rec.record("<xy,z> = <y,x*z>", xy.inner(&z, &t) == y.inner(&xs.mul(&z, sys, &t)?, &t), ctx);
        rec.record("delta_1 coefficient of xy = <x,y*>", xy.delta1_coefficient() == x.inner(&ys, &t), ctx);
        rec.record(
            "duality map is multiplicative",
            xy.dualize(&t) == x.dualize(&t).mul(&y.dualize(&t), sys, &tinv)?,
            ctx,
        );
        rec.record("duality map is an isometry", x.dualize(&t).inner(&y.dualize(&t), &tinv) == x.inner(&y, &t), ctx);
    }
    Ok(())
}

fn idempotents(sys: &CoxeterSystem, rec: &mut Recorder, rng: &mut ChaCha8Rng) -> Result<()> {
    let ball: Vec<GroupElement> = sys.enumerate_ball(3)?.iter().cloned().collect();
    let subsets = sys.spherical_subsets()?;
    for sub in &subsets {
        let t = random_weight(rng);
        let set = sub.set;
        let ctx = || format!("T={:?} t={}", set.iter().collect::<Vec<_>>(), format_rational(&t));
        let p = idempotent(sys, IdempotentKind::P, set, &t)?;
        let h = idempotent(sys, IdempotentKind::H, set, &t)?;
        let parabolic = sys.parabolic_elements(set)?;

        rec.record("p_T self-adjoint idempotent", p.mul(&p, sys, &t)? == p && p.star(sys)? == p, ctx);
        // right multiplication by p_T fixes exactly the right-W_T-invariant elements
        let invariant = |x: &H| -> Result<bool> {
            for (w, c) in x.terms() {
                for u in &parabolic {
                    if &x.coeff(&sys.multiply(w, u)?) != c {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        };
        for _ in 0..8 {
            let mut x = random_element(&ball, rng);
            if rng.gen_bool(0.5) {
                // symmetrize over W_T to get an invariant element
                let mut sym = H::zero();
                for (w, c) in x.terms() {
                    let rep = sys.min_coset_rep(w, set)?;
                    for u in &parabolic {
                        sym.add_term(sys.multiply(&rep, u)?, c.clone());
                    }
                }
                x = sym;
            }
            let fixed = x.mul(&p, sys, &t)? == x;
            rec.record("x p_T = x iff x is right-W_T-invariant", fixed == invariant(&x)?, || format!("{} x={x:?}", ctx()));
        }

        rec.record("h_T self-adjoint idempotent", h.mul(&h, sys, &t)? == h && h.star(sys)? == h, ctx);
        for s in set.iter() {
            let ds = H::basis(sys.normal_form(&[s])?);
            rec.record("delta_s h_T = -h_T (s in T)", ds.mul(&h, sys, &t)? == h.scale(&rat(-1, 1)), ctx);
        }
        for u in &parabolic {
            let sign = rat(if u.len() % 2 == 0 { 1 } else { -1 }, 1);
            rec.record("delta_u h_T = (-1)^d(u) h_T", H::basis(u.clone()).mul(&h, sys, &t)? == h.scale(&sign), ctx);
        }
        for smaller in subsets.iter().filter(|u| u.set.is_subset_of(set)) {
            let hu = idempotent(sys, IdempotentKind::H, smaller.set, &t)?;
            rec.record("h_U h_T = h_T (U in T)", hu.mul(&h, sys, &t)? == h, ctx);
        }
    }
    Ok(())
}

fn chain_identities(sys: &CoxeterSystem, rec: &mut Recorder, rng: &mut ChaCha8Rng, opts: VerifyOptions) -> Result<()> {
    let r = opts.slice_radius;
    let mut cellulations = vec![Cellulation::St, Cellulation::Dual];
    let ghd_ok = check_ghd_eligible(sys).is_ok();
    if ghd_ok {
        cellulations.push(Cellulation::Ghd);
    }
    let mut slices = Vec::new();
    for cel in cellulations {
        let s = ComplexSlice::build(sys, cel, r)?;
        let t = random_weight(rng);
        for k in 0..=s.top_dim() {
            for c in 0..s.num_cells(k) {
                let ok = k < 2 || {
                    let mut acc = std::collections::HashMap::<u32, i64>::new();
                    for &(f, s1) in s.faces(k, c) {
                        for &(g, s2) in s.faces(k - 1, f as usize) {
                            *acc.entry(g).or_default() += (s1 * s2) as i64;
                        }
                    }
                    acc.values().all(|&v| v == 0)
                };
                rec.record(&format!("boundary^2 = 0 ({cel})"), ok, || format!("cell {c} of degree {k}"));
            }
            if k + 2 <= s.top_dim() {
                let f = random_cochain(rng, &vec![true; s.num_cells(k)]);
                let ddf = s.coboundary(k + 1, &s.coboundary(k, &f));
                rec.record(&format!("delta^2 = 0 ({cel})"), ddf.iter().all(Zero::is_zero), || format!("degree {k}"));
            }
            if k < s.top_dim() {
                let f = random_cochain(rng, s.interior_mask(k));
                let g = random_cochain(rng, &vec![true; s.num_cells(k + 1)]);
                let lhs = s.inner(k + 1, &s.coboundary(k, &f), &g, &t);
                let rhs = s.inner(k, &f, &s.boundary_t(k + 1, &g, &t), &t);
                rec.record(&format!("<delta f,g> = <f,boundary_t g> ({cel})"), lhs == rhs, || {
                    format!("degree {k}: {} vs {}", format_rational(&lhs), format_rational(&rhs))
                });
            }
        }
        slices.push(s);
    }

    let (st, dual) = (&slices[0], &slices[1]);
    for _ in 0..3 {
        let t = random_weight(rng);
        for k in 1..=dual.top_dim() {
            let f = random_cochain(rng, dual.interior_mask(k));
            let lhs = st.boundary_t(k, &theta(dual, st, k, &f, &t)?, &t);
            let rhs = theta(dual, st, k - 1, &dual.boundary_t(k, &f, &t), &t)?;
            rec.record("theta is a chain map", lhs == rhs, || format!("degree {k}, t={}", format_rational(&t)));
        }
    }

    if ghd_ok {
        let ghd = &slices[2];
        let n = ghd.dimension();
        for _ in 0..3 {
            let t = random_weight(rng);
            let tinv = t.recip();
            for k in 0..=n {
                let mask: Vec<bool> = ghd
                    .cells(k)
                    .iter()
                    .map(|c| dual.find(n - k, &c.rep, &c.chain).is_some_and(|j| dual.is_interior(n - k, j)))
                    .collect();
                let f = random_cochain(rng, &mask);
                let df = poincare_map(ghd, dual, k, &f, &t)?;
                rec.record(
                    "cellular duality map is an isometry",
                    dual.inner(n - k, &df, &df, &tinv) == ghd.inner(k, &f, &f, &t),
                    || format!("degree {k}"),
                );
                if k >= 1 {
                    let lhs = dual.coboundary(n - k, &df);
                    let rhs = poincare_map(ghd, dual, k - 1, &ghd.boundary_t(k, &f, &t), &t)?;
                    rec.record("cellular duality map intertwines delta and boundary_t", lhs == rhs, || format!("degree {k}"));
                }
            }
        }
    }
    Ok(())
}
