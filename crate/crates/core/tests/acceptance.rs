//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use hypervol::bipyramid::{
    analyze, count_congruence_classes, cubic_discriminant_sign, globally_rigid_b5_example, pin_bipyramid,
    random_pinned_bipyramid, three_class_b5_example,
};
use hypervol::bounds::{bipyramid_bound, borcea_streinu_bound, catalan_bound, gluing_bounds, ClassBounds, Rule};
use hypervol::framework::random_configuration_with_base;
use hypervol::hypergraph::{
    fan_around, glue_at_hyperedge_with_map, homology_coefficients, is_triangulation_of_s2, link_cycle,
    subdivision_family, vertex_split_2d,
};
use hypervol::oracle::{cross_validation_report, pin_for_oracle, solve_equivalence_system, OracleSettings};
use hypervol::{flex_space, random_generic_configuration, rigidity_matrix, Hypergraph, Rational};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

const CORPUS_N: std::ops::RangeInclusive<usize> = 5..=12;
const CORPUS_PER_N: u64 = 20;

fn corpus_seed(n: usize, i: u64) -> u64 {
    1000 * n as u64 + i
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Triangulations of S² on `n` vertices grown from K4 by random planar
/// vertex splits.
fn random_sphere(n: usize, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = Hypergraph::complete(2, 4).unwrap();
    while theta.n() < n {
        let v = rng.gen_range(1..=theta.n());
        let cycle = link_cycle(&theta, v).expect("sphere links are cycles");
        let start = cycle[rng.gen_range(0..cycle.len())];
        let len = rng.gen_range(1..cycle.len());
        let fan = fan_around(&theta, v, start, len).unwrap();
        if let Ok(next) = vertex_split_2d(&theta, v, &fan) {
            theta = next;
        }
    }
    theta
}

fn rank_formula() -> Outcome {
    let mut checked = 0;
    for n in 4..=10 {
        let mut family: Vec<Hypergraph> = (0..3).map(|k| random_sphere(n, 77 * n as u64 + k)).collect();
        if n >= 5 {
            family.push(Hypergraph::bipyramid(n).unwrap());
        }
        for theta in &family {
            check(is_triangulation_of_s2(theta).map_err(err)?, || format!("split result not a sphere at n={n}"))?;
            let c = homology_coefficients(theta).map_err(err)?;
            let weights: Vec<Rational> = c.coefficients.iter().map(|&x| Rational::from_integer(x.into())).collect();
            for seed in 0..3 {
                let p = random_generic_configuration(2, n, seed, 100).map_err(err)?;
                let r = rigidity_matrix(theta, &p).map_err(err)?;
                let rank = r.rank();
                check(rank == 2 * n - 5, || format!("n={n}: rank {rank} != {}", 2 * n - 5))?;
                check(r.left_mul_vec(&weights).iter().all(Zero::is_zero), || format!("n={n}: c^T R != 0"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (hypergraph, configuration) pairs"))
}

struct CorpusEntry {
    n: usize,
    degree: Option<usize>,
    constant_term_zero: bool,
    classes: usize,
}

fn build_corpus() -> Result<Vec<CorpusEntry>, String> {
    let jobs: Vec<(usize, u64)> = CORPUS_N.flat_map(|n| (0..CORPUS_PER_N).map(move |i| (n, i))).collect();
    jobs.par_iter()
        .map(|&(n, i)| {
            let pinned = random_pinned_bipyramid(n, corpus_seed(n, i)).map_err(err)?;
            let (system, analysis) = analyze(&pinned).map_err(|e| format!("n={n} instance {i}: {e}"))?;
            let f = system.polynomial();
            Ok(CorpusEntry {
                n,
                degree: f.degree(),
                constant_term_zero: f.coefficient(0).is_zero(),
                classes: analysis.classes(),
            })
        })
        .collect()
}

fn degree_law(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        check(e.degree == Some(e.n - 4), || format!("n={}: degree {:?}", e.n, e.degree))?;
        check(e.constant_term_zero, || format!("n={}: f(0) != 0", e.n))?;
    }
    Ok(format!("{} instances, n in 5..=12", corpus.len()))
}

fn worked_examples() -> Outcome {
    let theta = Hypergraph::bipyramid(7).unwrap();
    let settings = OracleSettings::default();
    let mut parts = Vec::new();
    for (name, pinned, sign, classes) in
        [("C(p)", globally_rigid_b5_example(), -1, 1), ("C(q)", three_class_b5_example(), 1, 3)]
    {
        let s = cubic_discriminant_sign(&pinned).map_err(err)?;
        check(s == sign, || format!("{name}: discriminant sign {s}"))?;
        let c = count_congruence_classes(&pinned).map_err(err)?;
        check(c == classes, || format!("{name}: {c} classes"))?;
        let rep = solve_equivalence_system(&theta, &pinned, &settings).map_err(err)?;
        check(rep.count == classes, || format!("{name}: oracle count {}", rep.count))?;
        check(rep.residual_max < 1e-12, || format!("{name}: residual {:e}", rep.residual_max))?;
        parts.push(format!("{name}: sign {s:+}, {c} classes, residual {:.1e}", rep.residual_max));
    }
    Ok(parts.join("; "))
}

fn parity(corpus: &[CorpusEntry]) -> Outcome {
    let subset: Vec<&CorpusEntry> = corpus.iter().filter(|e| [6, 8, 10].contains(&e.n)).collect();
    for e in &subset {
        check(e.classes >= 2, || format!("n={}: only {} class", e.n, e.classes))?;
    }
    Ok(format!("{} instances with n in {{6, 8, 10}}", subset.len()))
}

fn upper_bound(corpus: &[CorpusEntry]) -> Outcome {
    let mut largest = (0, 0);
    for e in corpus {
        let bound = bipyramid_bound(e.n).map_err(err)?;
        check(e.classes <= bound, || format!("n={}: {} classes > {bound}", e.n, e.classes))?;
        let eq1 = borcea_streinu_bound(2, e.n).map_err(err)?;
        check(BigUint::from(e.classes) <= eq1, || format!("n={}: exceeds Eq1", e.n))?;
        largest = largest.max((e.classes, e.n));
    }
    Ok(format!("{} instances; largest count {} at n={}", corpus.len(), largest.0, largest.1))
}

fn subdivision_lower_bound() -> Outcome {
    let jobs: Vec<(usize, u64)> = (3..=8).flat_map(|n| (0..10u64).map(move |i| (n, i))).collect();
    for n in 3..=8 {
        let theta = subdivision_family(2, n).map_err(err)?;
        let p = random_generic_configuration(2, n, n as u64, 100).map_err(err)?;
        let rank = rigidity_matrix(&theta, &p).map_err(err)?.rank();
        check(theta.m() == 2 * n - 5 && rank == 2 * n - 5, || format!("n={n}: m={}, rank={rank}", theta.m()))?;
    }
    let counts: Vec<Result<(usize, usize), String>> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let theta = subdivision_family(2, n).map_err(err)?;
            let p = random_generic_configuration(2, n, 500 + 100 * n as u64 + i, 100).map_err(err)?;
            let pinned = pin_for_oracle(&theta, &p).map_err(err)?;
            let rep = solve_equivalence_system(&theta, &pinned, &OracleSettings::with_seed(i)).map_err(err)?;
            Ok((n, rep.count))
        })
        .collect();
    for c in counts {
        let (n, count) = c?;
        check(count == 1, || format!("n={n}: oracle count {count}"))?;
    }
    Ok(format!("{} frameworks, n in 3..=8", jobs.len()))
}

fn gluing() -> Outcome {
    let k4 = Hypergraph::complete(2, 4).unwrap();
    let oct = Hypergraph::bipyramid(6).unwrap();
    let first = glue_at_hyperedge_with_map(&k4, &[1, 2, 4], &oct, &[1, 2, 3], false).map_err(err)?;
    let second = glue_at_hyperedge_with_map(&first.hypergraph, &[1, 3, 4], &oct, &[1, 2, 3], false).map_err(err)?;
    let theta = second.hypergraph;
    check(theta.n() == 10 && theta.m() == 16, || format!("glued shape n={}, m={}", theta.n(), theta.m()))?;

    let p = random_configuration_with_base(2, 10, 2024, 100, &[1, 2, 3]).map_err(err)?;
    let tetra = 1;
    let oct_a = count_congruence_classes(&pin_bipyramid(&p.project(&first.second_map)).map_err(err)?).map_err(err)?;
    let oct_b = count_congruence_classes(&pin_bipyramid(&p.project(&second.second_map)).map_err(err)?).map_err(err)?;
    let expected = tetra * oct_a * oct_b;
    let product = gluing_bounds(&[
        ClassBounds::exact(tetra, Rule::new("Catalan", &[("n", 4)])),
        ClassBounds::exact(oct_a, Rule::new("Bipyramid", &[("n", 6)])),
        ClassBounds::exact(oct_b, Rule::new("Bipyramid", &[("n", 6)])),
    ])
    .map_err(err)?;
    check(product.lower == BigUint::from(expected), || "gluing product mismatch".into())?;
    check(catalan_bound(4).map_err(err)? == BigUint::from(1u8), || "tetrahedron not globally rigid".into())?;

    let pinned = pin_for_oracle(&theta, &p).map_err(err)?;
    let rep = solve_equivalence_system(&theta, &pinned, &OracleSettings::default()).map_err(err)?;
    check(rep.count == expected && expected == 4, || {
        format!("oracle {} vs product {tetra}·{oct_a}·{oct_b}", rep.count)
    })?;
    Ok(format!("oracle count {} = {tetra}·{oct_a}·{oct_b}", rep.count))
}

fn bound_consistency() -> Outcome {
    for n in 4..=16 {
        let a = borcea_streinu_bound(2, n).map_err(err)?;
        let b = catalan_bound(n).map_err(err)?;
        check(a == b, || format!("n={n}: {a} != {b}"))?;
    }
    Ok(format!("n in 4..=16, Catalan(16) = {}", catalan_bound(16).map_err(err)?))
}

fn flex_dimensions() -> Outcome {
    let oct = Hypergraph::bipyramid(6).unwrap();
    let mut parts = Vec::new();
    for l in [2, 3] {
        for (v, start) in [(1, 2), (6, 3), (2, 1)] {
            let fan = fan_around(&oct, v, start, l).map_err(err)?;
            let theta = oct.without(&fan).map_err(err)?;
            let p = random_generic_configuration(2, 6, 10 * l as u64 + v as u64, 100).map_err(err)?;
            let dim = flex_space(&theta, &p).map_err(err)?.nontrivial_dimension();
            check(dim == l - 1, || format!("l={l}, fan at {v}: dimension {dim}"))?;
        }
        parts.push(format!("l={l}: {}", l - 1));
    }
    Ok(parts.join(", "))
}

fn cross_validation() -> Outcome {
    let jobs: Vec<(usize, u64)> = [(5, 50u64), (6, 50), (7, 20)]
        .iter()
        .flat_map(|&(n, k)| (0..k).map(move |i| (n, 7000 + 100 * n as u64 + i)))
        .collect();
    let results: Vec<Result<(), String>> = jobs
        .par_iter()
        .map(|&(n, seed)| {
            let theta = Hypergraph::bipyramid(n).unwrap();
            let pinned = random_pinned_bipyramid(n, seed).map_err(err)?;
            let settings = OracleSettings::with_seed(seed);
            let cv = cross_validation_report(&theta, &pinned, &settings).map_err(err)?;
            check(cv.passed, || format!("n={n}, seed {seed}: {cv:?}"))?;
            let doubled = OracleSettings { starts: 2 * settings.starts, ..settings };
            let more = solve_equivalence_system(&theta, &pinned, &doubled).map_err(err)?;
            check(more.count == cv.oracle_count, || {
                format!(
                    "n={n}, seed {seed}: {} starts give {}, {} give {}",
                    settings.starts, cv.oracle_count, doubled.starts, more.count
                )
            })
        })
        .collect();
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("{} instances (50 B3, 50 B4, 20 B5), starts 200 and 400", jobs.len()))
}

fn main() -> ExitCode {
    let corpus = build_corpus();
    let with_corpus = |f: fn(&[CorpusEntry]) -> Outcome| -> Outcome {
        match &corpus {
            Ok(c) => f(c),
            Err(e) => Err(format!("corpus: {e}")),
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("rank formula on sphere triangulations", Box::new(rank_formula)),
        ("degree law deg f = n-4, f(0) = 0", Box::new(move || with_corpus(degree_law))),
        ("worked B5 examples", Box::new(worked_examples)),
        ("parity lower bound for even n", Box::new(move || with_corpus(parity))),
        ("bipyramid upper bound n-4", Box::new(move || with_corpus(upper_bound))),
        ("subdivision family minimally and globally rigid", Box::new(subdivision_lower_bound)),
        ("gluing multiplies class counts", Box::new(gluing)),
        ("Eq1 equals Catalan for d = 2", Box::new(bound_consistency)),
        ("flex dimension of octahedron minus a fan", Box::new(flex_dimensions)),
        ("oracle cross-validation and start stability", Box::new(cross_validation)),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
