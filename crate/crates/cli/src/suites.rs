//! Fixed dictionary/target suites for `lsa verify`.

use clap::ValueEnum;
use lsa_core::bounds::{verify_bounds_grid, BoundReport};
use lsa_core::constructions::{
    identity_bad_b, kerdock_dictionary, spikes_and_sines, tight_example, ConstructionBundle,
};
use lsa_core::solvers::{random_unit_vector, SolveOptions};
use lsa_core::{Complex64, Dictionary, DEFAULT_COLUMN_NORM_TOL};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identity,
    TightExample,
    Spikes,
    Kerdock,
    Random,
}

pub const DEFAULT_EPS_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Seeded random targets added to every suite dictionary.
const EXTRA_TARGETS: usize = 5;
const RANDOM_DICTIONARIES: usize = 20;

pub struct SuiteCase {
    pub name: String,
    pub dictionary: Dictionary,
    /// Unit-norm targets.
    pub targets: Vec<DVector<Complex64>>,
    pub ks: Vec<usize>,
}

/// Gaussian `m × n` matrix with normalized columns.
pub fn random_dictionary(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Dictionary {
    let mat = DMatrix::from_fn(m, n, |_, _| Complex64::new(rng.sample(StandardNormal), 0.0));
    Dictionary::new(mat, true, DEFAULT_COLUMN_NORM_TOL).expect("gaussian columns are nonzero")
}

fn case(bundle: ConstructionBundle, ks: Vec<usize>, rng: &mut ChaCha8Rng) -> SuiteCase {
    let dict = bundle.dictionary;
    let mut targets: Vec<DVector<Complex64>> = bundle
        .targets
        .iter()
        .filter(|t| t.vector.norm() > 0.0)
        .map(|t| t.vector.unscale(t.vector.norm()))
        .collect();
    let real = dict.is_real();
    targets.extend((0..EXTRA_TARGETS).map(|_| random_unit_vector(rng, dict.m(), real)));
    let name = format!(
        "{}({})",
        bundle.name,
        bundle
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    SuiteCase {
        name,
        dictionary: dict,
        targets,
        ks,
    }
}

pub fn suite_cases(suite: Suite, seed: u64) -> Result<Vec<SuiteCase>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    match suite {
        Suite::Identity => {
            for m in 4..=8 {
                for k in [2, 3] {
                    let eps = 0.5 * ((m - k) as f64 / m as f64).sqrt();
                    out.push(case(identity_bad_b(m, k, eps)?, vec![k], &mut rng));
                }
            }
        }
        Suite::TightExample => {
            for m in [5, 9, 17] {
                for k in [1, 2] {
                    out.push(case(tight_example(m, k, 0.5)?, vec![k], &mut rng));
                }
            }
        }
        Suite::Spikes => {
            out.push(case(spikes_and_sines(1)?, vec![1, 2], &mut rng));
            out.push(case(spikes_and_sines(2)?, vec![1], &mut rng));
        }
        Suite::Kerdock => {
            out.push(case(kerdock_dictionary(2)?, vec![1, 2], &mut rng));
            out.push(case(kerdock_dictionary(4)?, vec![1], &mut rng));
        }
        Suite::Random => {
            for i in 0..RANDOM_DICTIONARIES {
                let m = rng.gen_range(2..=8);
                let n = rng.gen_range((m + 1).max(4)..=16);
                let dictionary = random_dictionary(&mut rng, m, n);
                let targets = (0..EXTRA_TARGETS).map(|_| random_unit_vector(&mut rng, m, true)).collect();
                out.push(SuiteCase {
                    name: format!("random-{i}(m={m},n={n})"),
                    dictionary,
                    targets,
                    ks: vec![1, 2],
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub dictionary: String,
    #[serde(flatten)]
    pub report: BoundReport,
}

pub fn run_suite(suite: Suite, seed: u64, eps_grid: &[f64], opts: &SolveOptions) -> Result<Vec<SuiteRow>, CliError> {
    let mut rows = Vec::new();
    for case in suite_cases(suite, seed)? {
        for &k in &case.ks {
            for report in verify_bounds_grid(&case.dictionary, &case.targets, k, eps_grid, opts)? {
                rows.push(SuiteRow {
                    dictionary: case.name.clone(),
                    report,
                });
            }
        }
    }
    Ok(rows)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(
        "dictionary,bound_name,target_index,k,eps,mu,mu_k,gamma,precondition_holds,bound_value,measured,violated\n",
    );
    for row in rows {
        let r = &row.report;
        let value = match r.bound_value.real() {
            Some(v) => v.to_string(),
            None => "not_applicable".into(),
        };
        out.push_str(&format!(
            "\"{}\",{},{},{},{},{},{},{},{},{},{},{}\n",
            row.dictionary,
            r.bound_name,
            r.target_index,
            r.inputs.k,
            r.inputs.eps,
            opt(r.inputs.mu),
            opt(r.inputs.mu_k),
            opt(r.inputs.gamma),
            r.precondition_holds,
            value,
            opt(r.measured),
            r.violated
        ));
    }
    out
}
