//! Seeded comparison suites for `fermisea verify`.

use std::io::{self, Write};

use fermisea::factorization::factorize;
use fermisea::models::{lll_occupation, DiscretizedDisc};
use fermisea::oracle::{pure_oracle_check, thermal_oracle_check};
use fermisea::random;
use fermisea::thermal::ThermalSystem;
use rand::Rng;
use serde::Serialize;

use crate::output::fmt_g;

pub const PURE_TOLERANCE: f64 = 1e-8;
pub const THERMAL_TOLERANCE: f64 = 1e-7;
pub const DISC_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub suite: &'static str,
    pub case: usize,
    pub dim: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn result(
    suite: &'static str,
    case: usize,
    dim: usize,
    deviation: f64,
    tolerance: f64,
) -> CaseResult {
    CaseResult {
        suite,
        case,
        dim,
        max_deviation: deviation,
        tolerance,
        pass: deviation < tolerance,
    }
}

/// `cases` pure, thermal and disc-discretization comparisons. Each suite
/// draws from its own generator so adding cases never reshuffles earlier ones.
pub fn run(seed: u64, cases: usize, tol: Option<f64>) -> Vec<CaseResult> {
    let mut rows = Vec::with_capacity(3 * cases);

    let mut rng = random::rng(seed);
    for case in 0..cases {
        let dim = rng.random_range(2..=10);
        let n = rng.random_range(1..=dim);
        let orbitals = random::orbitals(&mut rng, dim, n);
        let region = random::region_sites(&mut rng, dim);
        let dev = pure_oracle_check(&orbitals, &region)
            .map(|c| c.max_deviation())
            .unwrap_or(f64::INFINITY);
        rows.push(result(
            "pure",
            case,
            dim,
            dev,
            tol.unwrap_or(PURE_TOLERANCE),
        ));
    }

    let mut rng = random::rng(seed.wrapping_add(1));
    for case in 0..cases {
        let dim = rng.random_range(2..=6);
        let scale = rng.random_range(0.1..4.0);
        let sys = ThermalSystem::new(random::hermitian(&mut rng, dim, scale)).expect("Hermitian");
        let region = random::region_sites(&mut rng, dim);
        let dev = thermal_oracle_check(&sys, &region)
            .map(|c| c.max_deviation())
            .unwrap_or(f64::INFINITY);
        rows.push(result(
            "thermal",
            case,
            dim,
            dev,
            tol.unwrap_or(THERMAL_TOLERANCE),
        ));
    }

    let mut rng = random::rng(seed.wrapping_add(2));
    for case in 0..cases {
        let radius: f64 = rng.random_range(0.5..2.0);
        let kmax = (radius * radius).ceil() as usize + 4;
        let dev = disc_deviation(radius, kmax).unwrap_or(f64::INFINITY);
        rows.push(result(
            "lll-disc",
            case,
            kmax + 1,
            dev,
            tol.unwrap_or(DISC_TOLERANCE),
        ));
    }
    rows
}

fn disc_deviation(radius: f64, kmax: usize) -> fermisea::error::Result<f64> {
    let disc = DiscretizedDisc::new(radius, kmax, kmax + 3)?;
    let f = factorize(&disc.orbitals, &disc.region)?;
    let mut want: Vec<f64> = (0..=kmax).map(|k| lll_occupation(k, radius)).collect();
    want.sort_by(|a, b| b.total_cmp(a));
    Ok(f.occupations()
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

pub fn write_csv(rows: &[CaseResult], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "suite,case,dim,max_deviation,tolerance,pass")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.suite,
            r.case,
            r.dim,
            fmt_g(r.max_deviation),
            fmt_g(r.tolerance),
            r.pass
        )?;
    }
    Ok(())
}
