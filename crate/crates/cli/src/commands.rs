use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use l2coxeter::building::{building_betti, fiber_counts, sample_cochains, transfer_check};
use l2coxeter::cache::{building_with, slice_with, Cache};
use l2coxeter::davis::Cellulation;
use l2coxeter::growth::{describe_series, growth_series, rho};
use l2coxeter::scalar::{format_rational, parse_rational, rational_to_f64};
use l2coxeter::spectral::{
    betti_estimate_on_slice, betti_sweep, csv_row, duality_report, euler_characteristic, euler_characteristic_formal,
    near_rho_warning, BettiEstimate, SolverOptions, CSV_HEADER,
};
use l2coxeter::verify::{default_corpus, run_identity_suite, VerifyOptions};
use l2coxeter::{CoxeterSystem, Error};
use num_rational::BigRational;

use crate::{Cli, Command, EstimateArgs};

/// 1 for bad input, 2 for solver or resource failures.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_runtime_failure() => 2,
        _ => 1,
    }
}

fn load_system(path: &Path) -> Result<CoxeterSystem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(CoxeterSystem::parse(&text)?)
}

fn parse_weight(text: &str) -> Result<BigRational> {
    let t = parse_rational(text).ok_or_else(|| Error::InvalidArgument(format!("weight {text:?} is not a fraction p/q")))?;
    if t <= BigRational::from_integer(0.into()) {
        return Err(Error::NonPositiveWeight(text.to_string()).into());
    }
    Ok(t)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn warn_near_rho(system: &CoxeterSystem, t: &BigRational) -> Result<()> {
    if let Some(msg) = near_rho_warning(system, t)? {
        eprintln!("warning: {msg}");
    }
    Ok(())
}

fn opts(est: &EstimateArgs) -> SolverOptions {
    SolverOptions { tol: est.tol, ..SolverOptions::default() }
}

fn print_estimate(e: &BettiEstimate, verbose: bool) {
    println!(
        "b^{}_t estimate = {:.6}  (t = {}, cellulation {}, scheme {}, radius {}, residual {:.2e})",
        e.degree, e.value, e.t, e.cellulation, e.scheme, e.radius, e.residual
    );
    if verbose {
        for term in &e.per_base_cell {
            println!("  {:<24} nu = {:.6}  diag = {:.6}  contribution = {:.6}", term.cell, term.nu, term.diagonal, term.contribution);
        }
    }
}

/// Runs one subcommand; `Ok(false)` reports a failed check.
pub fn execute(cli: &Cli) -> Result<bool> {
    let cache = match &cli.cache_dir {
        Some(dir) => Some(Cache::new(dir)?),
        None => Cache::from_env()?,
    };
    let cache = cache.as_ref();

    match &cli.command {
        Command::Growth { system, terms } => {
            let sys = load_system(system)?;
            let series = growth_series(&sys)?;
            println!("W(t) = {}", describe_series(&series));
            if let Some(c) = series.taylor(terms.saturating_sub(1)) {
                println!("taylor: [{}]", c.iter().map(format_rational).collect::<Vec<_>>().join(", "));
            }
            println!("rho = {}", rho(&series));
            Ok(true)
        }
        Command::Euler { system, formal, t } => {
            let sys = load_system(system)?;
            let mut ok = true;
            if *formal || t.is_none() {
                let chi = euler_characteristic_formal(&sys)?;
                println!("chi(t) = {}", chi.render());
                let expected = growth_series(&sys)?.recip().ok_or(Error::Pole)?;
                ok = chi == expected;
                println!("1/W(t) = {}", expected.render());
                println!("identity check: {}", if ok { "PASS" } else { "FAIL" });
            }
            if let Some(t) = t {
                let tv = parse_weight(t)?;
                let chi = euler_characteristic(&sys, &tv)?;
                println!("chi_{} = {} ≈ {:.12}", format_rational(&tv), format_rational(&chi), rational_to_f64(&chi));
            }
            Ok(ok)
        }
        Command::Verify { systems, cases, seed, radius } => {
            let corpus = if systems.is_empty() {
                default_corpus()
            } else {
                systems
                    .iter()
                    .map(|p| Ok((p.display().to_string(), load_system(p)?)))
                    .collect::<Result<Vec<_>>>()?
            };
            let opts = VerifyOptions { seed: *seed, cases: *cases, slice_radius: *radius, ..VerifyOptions::default() };
            let report = run_identity_suite(&corpus, opts)?;
            println!("{report}");
            if !report.passed() {
                eprintln!("error: exact identity mismatch");
            }
            Ok(report.passed())
        }
        Command::Betti { system, est, t, verbose, json } => {
            let sys = load_system(system)?;
            let tv = parse_weight(t)?;
            warn_near_rho(&sys, &tv)?;
            let slice = slice_with(cache, &sys, est.cellulation, est.radius)?;
            let e = betti_estimate_on_slice(&slice, est.i, &tv, est.scheme, opts(est))?;
            print_estimate(&e, *verbose);
            if let Some(path) = json {
                fs::write(path, serde_json::to_string_pretty(&e)?).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(true)
        }
        Command::Sweep { system, est, t, output } => {
            let sys = load_system(system)?;
            let ts = t.iter().map(|s| parse_weight(s)).collect::<Result<Vec<_>>>()?;
            for tv in &ts {
                warn_near_rho(&sys, tv)?;
            }
            let slice = slice_with(cache, &sys, est.cellulation, est.radius)?;
            let rows = betti_sweep(&slice, est.i, &ts, est.scheme, opts(est))?;
            let mut csv = format!("{CSV_HEADER}\n");
            for e in &rows {
                writeln!(csv, "{}", csv_row(&sys, e)?)?;
            }
            write_output(output.as_deref(), &csv)?;
            Ok(true)
        }
        Command::Duality { system, t, radius, scheme } => {
            let sys = load_system(system)?;
            let tv = parse_weight(t)?;
            warn_near_rho(&sys, &tv)?;
            let rows = duality_report(&sys, &tv, *radius, *scheme, SolverOptions::default())?;
            let tinv = format_rational(&tv.recip());
            let n = rows.len().saturating_sub(1);
            for r in &rows {
                println!(
                    "b^{}_{} (ghd) = {:.6}   b^{}_{} (dual) = {:.6}   |diff| = {:.2e}   residuals {:.1e} / {:.1e}",
                    r.i,
                    format_rational(&tv),
                    r.ghd_at_t.value,
                    n - r.i,
                    tinv,
                    r.dual_at_inverse.value,
                    r.difference,
                    r.ghd_at_t.residual,
                    r.dual_at_inverse.residual
                );
            }
            Ok(true)
        }
        Command::Building { system, q, radius, i, output } => building(cache, system, *q, *radius, i, output.as_deref()),
    }
}

fn building(cache: Option<&Cache>, system: &Path, q: u32, radius: usize, degrees: &[usize], output: Option<&Path>) -> Result<bool> {
    let sys = load_system(system)?;
    let b = building_with(cache, &sys, q, radius)?;
    println!("chambers: {}  simplices per dimension: {:?}", b.chambers().len(), b.counts());

    let panels = b.panel_report();
    println!("panels: {} complete, {} irregular", panels.panels_checked, panels.irregular);
    let mut ok = panels.irregular == 0;
    for row in b.shell_report()? {
        let status = if row.found == row.expected { "ok" } else { "MISMATCH" };
        ok &= row.found == row.expected;
        println!("shell d={}: {} chambers (expected {}) {status}", row.d, row.found, row.expected);
    }

    let s_radius = b.safe_radius();
    let slice = slice_with(cache, &sys, Cellulation::St, s_radius)?;
    let fibers = fiber_counts(&b, &slice)?;
    println!(
        "fiber counts within safe radius {}: {} cells, {} mismatches",
        fibers.safe_radius,
        fibers.cells_checked,
        fibers.mismatches.len()
    );
    for m in fibers.mismatches.iter().take(5) {
        println!("  {}: expected {}, found {}", m.cell, m.expected, m.found);
    }
    ok &= fibers.is_exact();

    for k in 0..=slice.top_dim() {
        for (j, f) in sample_cochains(&slice, k, s_radius, 2, 31 + k as u64).iter().enumerate() {
            let r = transfer_check(&b, &slice, k, f)?;
            println!(
                "transfer degree {k} sample {j}: |lift|^2 = {} vs weighted {} ({}), delta commutes on {} cells: {}",
                r.lift_norm_sq,
                r.weighted_norm_sq,
                if r.norm_identity { "equal" } else { "DIFFERENT" },
                r.cells_compared,
                r.delta_commutes
            );
            ok &= r.norm_identity && r.delta_commutes;
        }
    }

    let degrees: Vec<usize> = if degrees.is_empty() { (0..=slice.top_dim()).collect() } else { degrees.to_vec() };
    let t = BigRational::from_integer(q.into());
    let chi = l2coxeter::spectral::euler_characteristic(&sys, &t)?;
    let mut csv = format!("{CSV_HEADER},q\n");
    for &i in &degrees {
        let e = building_betti(&b, i, SolverOptions::default())?;
        println!("L2 b^{i} of the building ≈ {:.6} (radius {radius}, residual {:.2e})", e.value, e.residual);
        let c = l2coxeter::spectral::c_i(&sys, i, &t)?;
        writeln!(
            csv,
            "{},building,{},{},{},{},{:.10},{:.3e},{:.10},{:.10},{q}",
            sys.content_hash(),
            e.scheme,
            radius,
            i,
            format_rational(&t),
            e.value,
            e.residual,
            rational_to_f64(&c),
            rational_to_f64(&chi)
        )?;
    }
    if let Some(path) = output {
        write_output(Some(path), &csv)?;
    }
    if !ok {
        bail!("building structure checks failed");
    }
    Ok(true)
}
