//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero when an attainable check fails.
//!
//! Criterion 4 bundles a claim that no Kerdock set can satisfy (every block
//! expansion of the picket fence being √n-sparse); its line reports FAIL
//! with the measured census while its remaining checks are still enforced.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use lsa_cli::format::DictionaryFile;
use lsa_cli::pgm::{Pgm, PgmFormat};
use lsa_cli::suites::random_dictionary;
use lsa_core::bounds::verify_bounds_grid;
use lsa_core::constructions::{
    expansion_sparsities, identity_bad_b, kerdock_dictionary, kerdock_multi_solutions, mu_k_tight,
    shifted_picket_solutions, spikes_and_sines, tight_example, equiangular_lines_2d,
};
use lsa_core::invariants::{coherence, generalized_coherence, rank, spark};
use lsa_core::solvers::{
    find_multi_solution_witness, monte_carlo_list_stats, random_unit_vector, restricted_list_size, solve_list_approx,
    solve_list_sparse, ApproxMode, SolveOptions,
};
use lsa_core::subsets::binomial;
use lsa_core::{Budget, Complex64, Dictionary, SupportSet, DEFAULT_RANK_TOL};
use lsa_wavelet::{
    all_antichains, best_basis, compress_class, haar_wpt, inverse_wpt, random_antichain, synthetic_blobs,
    BasisSelection, CompressionClass, Cost, ImageGrid,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    /// False only when a check that can hold fails.
    attainable_pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            attainable_pass: pass,
            detail,
        }
    }
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn count_check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn summarize(failures: &[String]) -> String {
    match failures.len() {
        0 => String::new(),
        n => format!("; {n} failure(s): {}", failures.iter().take(3).cloned().collect::<Vec<_>>().join(" | ")),
    }
}

// Seeded corpus shared by criteria 5, 6 and 8.
struct Corpus {
    dictionaries: Vec<Dictionary>,
    targets: Vec<Vec<DVector<Complex64>>>,
}

fn corpus() -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut dictionaries = Vec::new();
    let mut targets = Vec::new();
    for _ in 0..200 {
        let m = rng.gen_range(2..=8);
        let n = rng.gen_range((m + 1).max(4)..=16);
        dictionaries.push(random_dictionary(&mut rng, m, n));
        targets.push((0..20).map(|_| random_unit_vector(&mut rng, m, true)).collect());
    }
    Corpus { dictionaries, targets }
}

fn c1_identity() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for m in 4..=8 {
        for k in [2, 3] {
            let eps = 0.5 * ((m - k) as f64 / m as f64).sqrt();
            let bundle = identity_bad_b(m, k, eps).unwrap();
            let list = solve_list_approx(&bundle.dictionary, &bundle.targets[0].vector, k, eps, ApproxMode::ExactSize, &opts())
                .unwrap();
            let expected = binomial(m - 1, k - 1) as usize;
            count_check(&mut failures, list.support_count == expected, || {
                format!("m={m} k={k}: {} supports, expected {expected}", list.support_count)
            });
            count_check(&mut failures, list.solutions.iter().all(|s| s.support.contains(0)), || {
                format!("m={m} k={k}: a support misses the first atom")
            });
            count_check(&mut failures, list.solutions.iter().all(|s| s.support.len() == k), || {
                format!("m={m} k={k}: support of wrong size")
            });
            cases += 1;
        }
    }
    Outcome::new(failures.is_empty(), format!("{cases} (m, k) cases, exact counts{}", summarize(&failures)))
}

fn c2_tight() -> Outcome {
    let mut failures = Vec::new();
    let mut packed_all = Vec::new();
    for m in [5, 9, 17] {
        for k in [1, 2] {
            let bundle = tight_example(m, k, 0.5).unwrap();
            let mu = coherence(&bundle.dictionary).unwrap();
            let want = 1.0 / (1.0 + 0.25 * k as f64);
            count_check(&mut failures, (mu - want).abs() <= 1e-12, || format!("m={m} k={k}: μ={mu}, want {want}"));
            let list = solve_list_approx(
                &bundle.dictionary,
                &bundle.targets[0].vector,
                k,
                0.5,
                ApproxMode::MinimalSupports,
                &opts(),
            )
            .unwrap();
            let packed = restricted_list_size(&list.supports(), 1, Budget::unlimited()).unwrap();
            count_check(&mut failures, packed >= (m - 1) / k, || {
                format!("m={m} k={k}: {packed} disjoint supports < {}", (m - 1) / k)
            });
            packed_all.push(format!("{m}/{k}:{packed}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("R=1 sizes [{}]{}", packed_all.join(" "), summarize(&failures)),
    )
}

fn c3_spikes() -> Outcome {
    let mut failures = Vec::new();
    let bundle = spikes_and_sines(2).unwrap();
    let z = &bundle.coefficient_vector("kernel").unwrap();
    let az = bundle.dictionary.apply(&z.coefficients).norm();
    let z0 = z.support().len();
    count_check(&mut failures, az <= 1e-10 && z0 == 8, || format!("‖Az‖={az:e}, ‖z‖₀={z0}"));

    let picket = shifted_picket_solutions(2).unwrap();
    let mut supports: Vec<SupportSet> = Vec::new();
    let mut worst: f64 = 0.0;
    for s in &picket.solutions {
        let r = picket.solution_residual(s).unwrap();
        worst = worst.max(r);
        let support = s.support();
        count_check(&mut failures, (8..=16).contains(&support.len()), || {
            format!("solution sparsity {}", support.len())
        });
        supports.push(support);
    }
    count_check(&mut failures, worst <= 1e-10, || format!("residual {worst:e}"));
    count_check(&mut failures, picket.solutions.len() == 16, || {
        format!("{} solutions", picket.solutions.len())
    });
    supports.sort();
    supports.dedup();
    count_check(&mut failures, supports.len() == 16, || format!("{} distinct supports", supports.len()));
    Outcome::new(
        failures.is_empty(),
        format!("‖Az‖={az:.1e}, ‖z‖₀={z0}, 16 solutions max residual {worst:.1e}{}", summarize(&failures)),
    )
}

fn c4_kerdock() -> Outcome {
    let mut failures = Vec::new();
    let bundle = kerdock_dictionary(4).unwrap();
    let a = bundle.dictionary.matrix();
    let mut worst_unitary: f64 = 0.0;
    for block in 0..16 {
        let u = a.columns(16 * block, 16).into_owned();
        let gram = u.adjoint() * &u - DMatrix::<Complex64>::identity(16, 16);
        worst_unitary = worst_unitary.max(gram.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    count_check(&mut failures, worst_unitary <= 1e-10, || format!("unitarity error {worst_unitary:e}"));
    let mu = coherence(&bundle.dictionary).unwrap();
    count_check(&mut failures, (mu - 0.25).abs() <= 1e-12, || format!("μ={mu}"));

    let pairs = kerdock_multi_solutions(4, 2).unwrap();
    let mut multiplicity: BTreeMap<usize, usize> = BTreeMap::new();
    let mut worst_residual: f64 = 0.0;
    for s in &pairs.solutions {
        worst_residual = worst_residual.max(pairs.solution_residual(s).unwrap());
        for &j in s.support().iter() {
            *multiplicity.entry(j).or_default() += 1;
        }
    }
    count_check(&mut failures, pairs.solutions.len() == 120, || format!("{} solutions", pairs.solutions.len()));
    count_check(&mut failures, worst_residual <= 1e-10, || format!("residual {worst_residual:e}"));
    count_check(&mut failures, multiplicity.values().all(|&c| c == 15), || {
        format!("multiplicities {:?}", multiplicity.values().collect::<std::collections::BTreeSet<_>>())
    });

    let sparsities = expansion_sparsities(&bundle);
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in &sparsities {
        *census.entry(s).or_default() += 1;
    }
    let sparse_ok = sparsities.iter().all(|&s| s == 4);
    let attainable = failures.is_empty();
    let census_text: Vec<String> = census.iter().map(|(s, c)| format!("{c} blocks of sparsity {s}")).collect();
    Outcome {
        pass: attainable && sparse_ok,
        attainable_pass: attainable,
        detail: format!(
            "unitary err {worst_unitary:.1e}, μ={mu}, 120 pair solutions max residual {worst_residual:.1e}, \
             multiplicity 15; x_i census: {} (every-x_i-sparsity-4 is unattainable: at most 4 blocks can be \
             √n-sparse on a subspace picket){}",
            census_text.join(", "),
            summarize(&failures)
        ),
    }
}

fn c5_bounds(corpus: &Corpus) -> Outcome {
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let mut per_bound: BTreeMap<String, usize> = BTreeMap::new();
    for (dict, targets) in corpus.dictionaries.iter().zip(&corpus.targets) {
        for k in [1, 2] {
            for r in verify_bounds_grid(dict, targets, k, &grid, &opts()).unwrap() {
                if r.precondition_holds {
                    checked += 1;
                    *per_bound.entry(r.bound_name.clone()).or_default() += 1;
                }
                if r.violated {
                    violations.push(format!(
                        "{} k={} eps={} bound={:?} measured={:?}",
                        r.bound_name, k, r.inputs.eps, r.bound_value, r.measured
                    ));
                }
            }
        }
    }
    let spread: Vec<String> = per_bound.iter().map(|(n, c)| format!("{n}:{c}")).collect();
    Outcome::new(
        violations.is_empty() && checked > 0,
        format!(
            "{checked} applicable checks [{}], {} violations{}",
            spread.join(" "),
            violations.len(),
            summarize(&violations)
        ),
    )
}

fn c6_mu_k(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let mut saturated = 0;
    let mut near_degenerate = 0;
    for (i, dict) in corpus.dictionaries.iter().enumerate() {
        let mu = coherence(dict).unwrap();
        let sp = spark(dict, DEFAULT_RANK_TOL, Budget::unlimited()).unwrap();
        let mu2 = generalized_coherence(dict, 2, DEFAULT_RANK_TOL).unwrap();
        count_check(&mut failures, mu <= mu2 + 1e-9, || format!("dict {i}: μ1={mu} > μ2={mu2}"));
        for (k, mk) in [(1usize, mu), (2, mu2)] {
            // dependent sets must reach 1 within 1e-9; independent ones only
            // need to stay below 1, since a nearly parallel pair can sit
            // inside that tolerance while the rank test still separates it
            let ok = if sp.exceeds_twice(k) { mk < 1.0 } else { mk >= 1.0 - 1e-9 };
            if sp.exceeds_twice(k) && mk >= 1.0 - 1e-9 {
                near_degenerate += 1;
            }
            saturated += usize::from(!sp.exceeds_twice(k) && k == 2);
            count_check(&mut failures, ok, || format!("dict {i}: μ_{k}={mk} with spark {sp}"));
        }
        if mu < 1.0 {
            let upper = 2.0 * mu / (1.0 - mu);
            count_check(&mut failures, mu2 <= upper + 1e-9, || format!("dict {i}: μ2={mu2} > {upper}"));
        }
        count_check(&mut failures, mu2 <= 3.0 * mu + 1e-9, || format!("dict {i}: μ2={mu2} > 3μ"));
    }
    let mut tight = Vec::new();
    for k in [2usize, 3] {
        for c in [2 * k - 1, 2 * k, 4 * k] {
            let bundle = mu_k_tight(k, c as f64).unwrap();
            let mu = coherence(&bundle.dictionary).unwrap();
            let mk = generalized_coherence(&bundle.dictionary, k, DEFAULT_RANK_TOL).unwrap();
            let kf = k as f64;
            let want = (kf * mu / (1.0 - (kf - 1.0) * mu)).min(1.0);
            count_check(&mut failures, (mk - want).abs() <= 1e-9, || {
                format!("mu_k_tight({k},{c}): μ_k={mk}, want {want}")
            });
            tight.push(format!("({k},{c})→{mk:.4}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "200 corpus dictionaries ({saturated} with μ2=1, {near_degenerate} independent within 1e-9 of 1), \
             tight family {}{}",
            tight.join(" "),
            summarize(&failures)
        ),
    )
}

fn c7_list_sparse() -> Outcome {
    let mut failures = Vec::new();
    let dup = Dictionary::from_real_columns(
        &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
        false,
    )
    .unwrap();
    // a target inside the span of the repeated atom
    let b = lsa_core::dictionary::real_vector(&[1.0, 0.0, 0.0]);
    let dup_finite = solve_list_sparse(&dup, &b, 2, &opts()).unwrap().finite;
    count_check(&mut failures, !dup_finite, || "duplicated column gave a finite list".into());
    let full = Dictionary::new(DMatrix::identity(3, 3), false, 1e-12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut all_finite = true;
    for _ in 0..20 {
        let b = random_unit_vector(&mut rng, 3, true);
        for k in 1..=3 {
            all_finite &= solve_list_sparse(&full, &b, k, &opts()).unwrap().finite;
        }
    }
    count_check(&mut failures, all_finite, || "full-spark dictionary gave an infinite list".into());

    let dict = random_dictionary(&mut ChaCha8Rng::seed_from_u64(21), 4, 7);
    let sp = spark(&dict, DEFAULT_RANK_TOL, Budget::unlimited()).unwrap();
    let rk = rank(&dict, DEFAULT_RANK_TOL);
    let sp_v = sp.value().unwrap_or(usize::MAX);
    let mut mc = Vec::new();
    for k in 1..=7 {
        let stats = monte_carlo_list_stats(&dict, k, 100, 9, &opts()).unwrap();
        if k + 1 < sp_v {
            count_check(&mut failures, stats.unique == 100, || format!("k={k}: {} unique of 100", stats.unique));
        }
        if k <= rk {
            count_check(&mut failures, stats.infinite == 0, || format!("k={k}: {} infinite", stats.infinite));
        } else {
            count_check(&mut failures, stats.infinite == 100, || format!("k={k}: {} infinite of 100", stats.infinite));
        }
        mc.push(format!("k{k}:{}u/{}i", stats.unique, stats.infinite));
    }

    let eq = equiangular_lines_2d(3).unwrap();
    let w1 = find_multi_solution_witness(&eq.dictionary, 1, &opts()).unwrap();
    let check1 = solve_list_sparse(&eq.dictionary, &w1.b, 1, &opts()).unwrap();
    count_check(&mut failures, check1.support_count > 1, || format!("equiangular witness lists {}", check1.support_count));
    let small = random_dictionary(&mut ChaCha8Rng::seed_from_u64(2024), 3, 5);
    let w2 = find_multi_solution_witness(&small, 2, &opts());
    let w2_count = match &w2 {
        Ok(w) => solve_list_sparse(&small, &w.b, 2, &opts()).unwrap().support_count,
        Err(_) => 0,
    };
    count_check(&mut failures, w2_count > 2, || format!("3x5 witness lists {w2_count} ({:?})", w2.as_ref().err()));
    Outcome::new(
        failures.is_empty(),
        format!(
            "spark {sp}, rank {rk}, monte carlo [{}], witnesses {} and {w2_count} optimal solutions{}",
            mc.join(" "),
            check1.support_count,
            summarize(&failures)
        ),
    )
}

fn min_exact_sparsity(dict: &Dictionary, cols: &[usize], b: &DVector<Complex64>) -> usize {
    let sub = Dictionary::new(dict.matrix().select_columns(cols), false, 1e-10).unwrap();
    (1..=cols.len())
        .find(|&k| {
            solve_list_approx(&sub, b, k, 0.0, ApproxMode::MinimalSupports, &opts())
                .map(|l| l.support_count > 0)
                .unwrap_or(false)
        })
        .unwrap_or(usize::MAX)
}

fn c8_uniqueness(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut planted = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (i, (dict, targets)) in corpus.dictionaries.iter().zip(&corpus.targets).enumerate() {
        let mu = coherence(dict).unwrap();
        let sp = spark(dict, DEFAULT_RANK_TOL, Budget::unlimited()).unwrap();
        let n = dict.n_atoms();
        for k in 1..=3usize.min(n) {
            let by_spark = sp.exceeds_twice(k);
            let by_mu = mu * (2.0 * k as f64 - 1.0) < 1.0;
            if !(by_spark || by_mu) {
                continue;
            }
            for b in targets {
                let list = solve_list_approx(dict, b, k, 0.0, ApproxMode::MinimalSupports, &opts()).unwrap();
                checked += 1;
                count_check(&mut failures, list.support_count <= 1, || {
                    format!("dict {i} k={k}: {} minimal supports", list.support_count)
                });
            }
            // an exactly k-sparse target must be recovered uniquely
            let mut idx: Vec<usize> = (0..n).collect();
            for j in 0..k {
                let swap = rng.gen_range(j..n);
                idx.swap(j, swap);
            }
            let mut x = DVector::zeros(n);
            for &j in &idx[..k] {
                x[j] = Complex64::new(rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0);
            }
            let b = dict.apply(&x);
            let list = solve_list_approx(dict, &b, k, 0.0, ApproxMode::MinimalSupports, &opts()).unwrap();
            planted += 1;
            let want = SupportSet::from_unsorted(idx[..k].to_vec());
            count_check(&mut failures, list.support_count == 1 && list.solutions[0].support == want, || {
                format!("dict {i} k={k}: planted support not recovered uniquely ({} listed)", list.support_count)
            });
        }
    }
    let mut uncertainty = Vec::new();
    for d in [1u32, 2] {
        let bundle = spikes_and_sines(d).unwrap();
        let dict = &bundle.dictionary;
        let n = dict.m();
        let mu = coherence(dict).unwrap();
        let b = &bundle.target("picket").unwrap().vector;
        let sines: Vec<usize> = (0..n).collect();
        let spikes: Vec<usize> = (n..2 * n).collect();
        let total = min_exact_sparsity(dict, &sines, b) + min_exact_sparsity(dict, &spikes, b);
        let root = 2.0 * (n as f64).sqrt();
        count_check(&mut failures, total as f64 == root && (2.0 / mu - root).abs() < 1e-9, || {
            format!("n={n}: k_Φ+k_Ψ={total}, 2/μ={}", 2.0 / mu)
        });
        uncertainty.push(format!("n={n}: {total}"));
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{checked} corpus queries, {planted} planted recoveries, k_Φ+k_Ψ [{}]{}",
            uncertainty.join(", "),
            summarize(&failures)
        ),
    )
}

fn c9_wavelet() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_rec: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for _ in 0..50 {
        let img = ImageGrid::new(32, (0..1024).map(|_| rng.gen::<f64>()).collect()).unwrap();
        let energy = img.energy();
        for depth in 1..=5 {
            let tree = haar_wpt(&img, depth).unwrap();
            for level in 0..=depth {
                worst_parseval = worst_parseval.max((tree.level_energy(level) - energy).abs() / energy);
            }
            for nodes in [BasisSelection::leaves(depth), random_antichain(depth, 0.5, &mut rng)] {
                let back = inverse_wpt(32, &tree.restrict(&nodes)).unwrap();
                worst_rec = worst_rec.max(img.relative_error(&back));
            }
        }
    }
    count_check(&mut failures, worst_rec <= 1e-10, || format!("reconstruction {worst_rec:e}"));
    count_check(&mut failures, worst_parseval <= 1e-10, || format!("parseval {worst_parseval:e}"));

    let chains = all_antichains(2);
    for t in 0..20 {
        let img = ImageGrid::new(16, (0..256).map(|_| rng.gen::<f64>()).collect()).unwrap();
        let tree = haar_wpt(&img, 2).unwrap();
        for cost in [Cost::ShannonEntropy, Cost::L1] {
            let dp = best_basis(&tree, cost).cost;
            let best = chains
                .iter()
                .map(|c| BasisSelection::evaluate(&tree, c.clone(), cost).unwrap().cost)
                .fold(f64::INFINITY, f64::min);
            count_check(&mut failures, (dp - best).abs() <= 1e-10 * best.abs().max(1.0), || {
                format!("instance {t} {cost:?}: dp {dp} vs exhaustive {best}")
            });
        }
    }

    let blobs = synthetic_blobs(256, 42).unwrap();
    let mut stats = Vec::new();
    for class in [CompressionClass::class1(42), CompressionClass::class2(), CompressionClass::class3()] {
        let r = compress_class(&blobs, 4, class).unwrap();
        count_check(&mut failures, r.sparsity_fraction <= 0.2, || {
            format!("class {} sparsity {}", r.class, r.sparsity_fraction)
        });
        stats.push(format!("c{}: s={:.3} e={:.2e}", r.class, r.sparsity_fraction, r.relative_error));
    }
    for make in [
        (|f| CompressionClass::TruncatedEntropy { keep_fraction: f }) as fn(f64) -> CompressionClass,
        |f| CompressionClass::TruncatedL1 { keep_fraction: f },
    ] {
        let mut last = f64::INFINITY;
        for step in 1..=20 {
            let r = compress_class(&blobs, 4, make(step as f64 / 20.0)).unwrap();
            count_check(&mut failures, r.relative_error <= last + 1e-12, || {
                format!("class {} error rises at keep {}", r.class, step as f64 / 20.0)
            });
            last = r.relative_error;
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "recon {worst_rec:.1e}, parseval {worst_parseval:.1e}, dp=exhaustive on 20, blobs [{}]{}",
            stats.join(", "),
            summarize(&failures)
        ),
    )
}

fn c10_cli() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut dicts = vec![
        kerdock_dictionary(4).unwrap().dictionary,
        spikes_and_sines(2).unwrap().dictionary,
        tight_example(9, 2, 0.5).unwrap().dictionary,
    ];
    dicts.extend((0..20).map(|_| random_dictionary(&mut rng, 6, 12)));
    for (i, d) in dicts.iter().enumerate() {
        let file = DictionaryFile::from_dictionary(d);
        let text = serde_json::to_string(&file).unwrap();
        let back = serde_json::from_str::<DictionaryFile>(&text).unwrap().to_dictionary().unwrap();
        let exact = back
            .matrix()
            .iter()
            .zip(d.matrix().iter())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        count_check(&mut failures, exact, || format!("dictionary {i} not bit-exact"));
    }
    for format in [PgmFormat::Plain, PgmFormat::Raw] {
        let pgm = Pgm {
            width: 16,
            height: 16,
            maxval: 255,
            samples: (0..256).map(|_| rng.gen_range(0..=255)).collect(),
        };
        let bytes = pgm.encode(format);
        let back = Pgm::parse(&bytes).unwrap();
        let via_grid = Pgm::from_grid(&back.to_grid().unwrap(), 255);
        count_check(&mut failures, back == pgm && via_grid == pgm && back.encode(format) == bytes, || {
            format!("{format:?} pgm round trip")
        });
    }
    let out = Command::new(env!("CARGO_BIN_EXE_lsa"))
        .args(["verify", "--suite", "kerdock", "--seed", "42"])
        .env_remove("LSA_BUDGET")
        .output()
        .unwrap();
    let code = out.status.code();
    count_check(&mut failures, code == Some(0), || {
        format!("verify exited {code:?}: {}", String::from_utf8_lossy(&out.stderr))
    });
    Outcome::new(
        failures.is_empty(),
        format!(
            "{} dictionaries bit-exact, P2/P5 bit-exact, verify kerdock exit {code:?}{}",
            dicts.len(),
            summarize(&failures)
        ),
    )
}

fn main() {
    let mut attainable = true;
    let mut passed = 0;
    let mut run = |id: usize, title: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = limit.map_or(true, |l| elapsed <= l);
        let pass = outcome.pass && in_time;
        attainable &= outcome.attainable_pass && in_time;
        passed += usize::from(pass);
        let budget = limit.map(|l| format!(" of {:.0}s", l.as_secs_f64())).unwrap_or_default();
        println!(
            "{} criterion {id:>2} {title}: {} [{:.2}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
        );
    };
    let secs = |s| Some(Duration::from_secs(s));
    run(1, "identity lower bound", secs(5), &mut c1_identity);
    run(2, "tight example", secs(10), &mut c2_tight);
    run(3, "spikes and sines", secs(1), &mut c3_spikes);
    run(4, "kerdock", secs(10), &mut c4_kerdock);
    let start = Instant::now();
    let corpus = corpus();
    let build = start.elapsed();
    run(5, "bound soundness sweep", Some(Duration::from_secs(300) - build), &mut || c5_bounds(&corpus));
    run(6, "generalized coherence structure", None, &mut || c6_mu_k(&corpus));
    run(7, "list-sparse structure", None, &mut c7_list_sparse);
    run(8, "uniqueness recovery", None, &mut || c8_uniqueness(&corpus));
    run(9, "wavelet subsystem", None, &mut c9_wavelet);
    run(10, "cli round trips", None, &mut c10_cli);
    println!("{passed}/10 criteria pass");
    if !attainable {
        std::process::exit(1);
    }
}
