use hypervol::bipyramid::{pin_bipyramid, random_pinned_bipyramid, report as bipyramid_report};
use hypervol::bounds::{bounds_for_hypergraph, bounds_for_parameters, gluing_bounds, ClassBounds};
use hypervol::hypergraph::{
    glue_at_hyperedge, homology_coefficients, is_triangulation_of_s2, simplex_subdivision_split, vertex_split_2d,
};
use hypervol::oracle::{cross_validation_report, pin_for_oracle, solve_equivalence_system, OracleSettings};
use hypervol::{generic_rank, max_rank, rank_report, Configuration, Framework, Hypergraph};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::io::{parse_vertices, read_json, resolve_seed};
use crate::{Command, Format, OracleArgs};

pub struct Report {
    json: Value,
    text: String,
}

impl Report {
    fn new<T: Serialize>(value: &T, text: String) -> Result<Self, CliError> {
        let json = serde_json::to_value(value).map_err(|e| CliError::internal(e.to_string()))?;
        Ok(Self { json, text })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Text => self.text.clone(),
        }
    }
}

pub fn input_paths(command: &Command) -> Vec<&str> {
    match command {
        Command::Rank { framework } | Command::Oracle { framework, .. } => vec![framework],
        Command::Rigid { hypergraph, .. } | Command::CheckS2 { hypergraph } | Command::Split { hypergraph, .. } => {
            vec![hypergraph]
        }
        Command::Bound { hypergraph, parts, .. } => hypergraph.iter().chain(parts).map(String::as_str).collect(),
        Command::Bipyramid { points, .. } => points.iter().map(String::as_str).collect(),
        Command::Glue { first, second, .. } => vec![first, second],
        Command::CrossValidate { .. } => vec![],
    }
}

pub fn execute(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Rank { framework } => rank(&framework),
        Command::Rigid { hypergraph, random } => rigid(&hypergraph, random.trials, resolve_seed(random.seed)?),
        Command::CheckS2 { hypergraph } => check_s2(&hypergraph),
        Command::Bound { hypergraph, d, n, parts, random } => {
            bound(hypergraph.as_deref(), d.zip(n), &parts, random.trials, resolve_seed(random.seed)?)
        }
        Command::Bipyramid { n, seed, points } => bipyramid(n, seed, points.as_deref()),
        Command::Glue { first, second, at, keep_common } => glue(&first, &second, &at[0], &at[1], keep_common),
        Command::Split { hypergraph, subdivide, vertex, fan } => split(&hypergraph, subdivide.as_deref(), vertex, &fan),
        Command::Oracle { framework, settings } => oracle(&framework, &settings),
        Command::CrossValidate { n, instances, seed, starts } => cross_validate(n, instances, seed, starts),
    }
}

fn rank(path: &str) -> Result<Report, CliError> {
    let f: Framework = read_json(path)?;
    let r = rank_report(&f.hypergraph, &f.configuration)?;
    let text = format!(
        "rank {} of {} (nullity {}, trivial {}, non-trivial flexes {})",
        r.rank, r.max_rank, r.nullity, r.trivial_dim, r.nontrivial_flex_dim
    );
    Report::new(&r, text)
}

#[derive(Serialize)]
struct RigidReport {
    rigid: bool,
    minimally_rigid: bool,
    generic_rank: usize,
    max_rank: usize,
    m: usize,
    trials: usize,
    seed: u64,
}

fn rigid(path: &str, trials: usize, seed: u64) -> Result<Report, CliError> {
    let theta: Hypergraph = read_json(path)?;
    let rank = generic_rank(&theta, trials, seed)?;
    let max = max_rank(theta.d(), theta.n());
    let r = RigidReport {
        rigid: rank == max,
        minimally_rigid: rank == max && theta.m() == max,
        generic_rank: rank,
        max_rank: max,
        m: theta.m(),
        trials,
        seed,
    };
    let verdict = if r.rigid { "generically rigid" } else { "generically flexible" };
    Report::new(&r, format!("{verdict}: generic rank {} of {} ({} trials)", rank, max, trials))
}

fn check_s2(path: &str) -> Result<Report, CliError> {
    let theta: Hypergraph = read_json(path)?;
    let triangulation = is_triangulation_of_s2(&theta)?;
    let homology = if triangulation { Some(homology_coefficients(&theta)?.coefficients) } else { None };
    let text = match &homology {
        Some(c) => {
            let signs: Vec<String> = theta.hyperedges().iter().zip(c).map(|(h, s)| format!("{s:+}·{h}")).collect();
            format!("triangulation of S²\nfundamental cycle: {}", signs.join(" "))
        }
        None => "not a triangulation of S²".into(),
    };
    Report::new(&json!({ "triangulation": triangulation, "homology": homology }), text)
}

fn bound(
    path: Option<&str>,
    params: Option<(usize, usize)>,
    parts: &[String],
    trials: usize,
    seed: u64,
) -> Result<Report, CliError> {
    let mut b = match (path, params) {
        (Some(p), _) => bounds_for_hypergraph(&read_json(p)?, trials, seed)?,
        (None, Some((d, n))) => bounds_for_parameters(d, n)?,
        (None, None) if !parts.is_empty() => ClassBounds::unbounded(),
        (None, None) => return Err(CliError::input("bound needs a hypergraph file, --d and --n, or --part")),
    };
    if !parts.is_empty() {
        let pieces = parts
            .iter()
            .map(|p| Ok(bounds_for_hypergraph(&read_json(p)?, trials, seed)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        b = b.meet(gluing_bounds(&pieces)?)?;
    }
    let upper = b.upper.as_ref().map_or("unbounded".to_string(), ToString::to_string);
    let rules: Vec<String> = b.provenance.iter().map(ToString::to_string).collect();
    let text = format!("{} <= classes <= {upper}\nrules: {}", b.lower, rules.join(", "));
    Report::new(&b, text)
}

fn bipyramid(n: usize, seed: Option<u64>, points: Option<&str>) -> Result<Report, CliError> {
    let pinned = match points {
        Some(path) => {
            let p: Configuration = read_json(path)?;
            if p.n() != n {
                return Err(CliError::input(format!("{path} has {} points, expected {n}", p.n())));
            }
            pin_bipyramid(&p)?
        }
        None => random_pinned_bipyramid(n, resolve_seed(seed)?)?,
    };
    let r = bipyramid_report(&pinned)?;
    let mut text = format!(
        "B_{}: f has degree {}\nf(t) coefficients (constant first): {}\nreal roots {}, classes {}, excluded {}",
        n - 2,
        r.degree,
        r.coefficients.join(" "),
        r.real_roots,
        r.classes,
        r.excluded_roots
    );
    if let Some(s) = r.discriminant_sign {
        text.push_str(&format!("\ndiscriminant sign {s:+}"));
    }
    Report::new(&r, text)
}

fn glue(first: &str, second: &str, h1: &str, h2: &str, keep_common: bool) -> Result<Report, CliError> {
    let a: Hypergraph = read_json(first)?;
    let b: Hypergraph = read_json(second)?;
    let g = glue_at_hyperedge(&a, &parse_vertices(h1)?, &b, &parse_vertices(h2)?, keep_common)?;
    hypergraph_report(&g)
}

fn split(path: &str, subdivide: Option<&str>, vertex: Option<usize>, fan: &[String]) -> Result<Report, CliError> {
    let theta: Hypergraph = read_json(path)?;
    let result = match (subdivide, vertex) {
        (Some(h), _) => simplex_subdivision_split(&theta, &parse_vertices(h)?)?,
        (None, Some(v)) => {
            let fan = fan.iter().map(|h| parse_vertices(h)).collect::<Result<Vec<_>, _>>()?;
            vertex_split_2d(&theta, v, &fan)?
        }
        (None, None) => return Err(CliError::input("split needs --subdivide or --vertex with --fan")),
    };
    hypergraph_report(&result)
}

fn hypergraph_report(theta: &Hypergraph) -> Result<Report, CliError> {
    let edges: Vec<String> = theta.hyperedges().iter().map(ToString::to_string).collect();
    Report::new(theta, format!("d = {}, n = {}, m = {}\n{}", theta.d(), theta.n(), theta.m(), edges.join(" ")))
}

fn oracle_settings(args: &OracleArgs) -> Result<OracleSettings, CliError> {
    let mut s = OracleSettings::with_seed(resolve_seed(args.seed)?);
    if let Some(v) = args.starts {
        s.starts = v;
    }
    if let Some(v) = args.tolerance {
        s.newton_tolerance = v;
    }
    if let Some(v) = args.max_iterations {
        s.max_iterations = v;
    }
    if let Some(v) = args.dedup_distance {
        s.dedup_distance = v;
    }
    if let Some(v) = args.inflation {
        s.inflation = v;
    }
    s.validate()?;
    Ok(s)
}

fn oracle(path: &str, args: &OracleArgs) -> Result<Report, CliError> {
    let f: Framework = read_json(path)?;
    let settings = oracle_settings(args)?;
    let pinned = pin_for_oracle(&f.hypergraph, &f.configuration)?;
    let r = solve_equivalence_system(&f.hypergraph, &pinned, &settings)?;
    let text = format!(
        "{} solution(s); {} of {} starts converged; max scaled residual {:.2e}",
        r.count, r.converged, r.starts, r.residual_max
    );
    Report::new(&r, text)
}

#[derive(Serialize)]
struct InstanceResult {
    seed: u64,
    exact_count: usize,
    oracle_count: usize,
    max_distance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct CrossValidationSummary {
    n: usize,
    instances: u64,
    starts: usize,
    passed: usize,
    failed: usize,
    all_passed: bool,
    results: Vec<InstanceResult>,
}

fn cross_validate(n: usize, instances: u64, seed: Option<u64>, starts: usize) -> Result<Report, CliError> {
    let base = resolve_seed(seed)?;
    let theta = Hypergraph::bipyramid(n)?;
    let mut results = Vec::new();
    for i in 0..instances {
        let seed = base.wrapping_add(i);
        let pinned = random_pinned_bipyramid(n, seed)?;
        let settings = OracleSettings { starts, ..OracleSettings::with_seed(seed) };
        let cv = cross_validation_report(&theta, &pinned, &settings)?;
        results.push(InstanceResult {
            seed,
            exact_count: cv.exact_count,
            oracle_count: cv.oracle_count,
            max_distance: cv.max_distance,
            passed: cv.passed,
        });
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let summary = CrossValidationSummary {
        n,
        instances,
        starts,
        passed,
        failed: results.len() - passed,
        all_passed: passed == results.len(),
        results,
    };
    let text = format!("B_{}: {passed}/{instances} instances agree ({starts} starts)", n - 2);
    Report::new(&summary, text)
}
