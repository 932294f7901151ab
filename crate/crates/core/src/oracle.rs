//! Floating-point multi-start Newton counting of congruence classes, used as
//! an independent check on the exact machinery.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipyramid::analyze;
use crate::error::{Error, Result};
use crate::framework::{measure, standard_pinning, Configuration, PinnedConfiguration};
use crate::hypergraph::{is_triangulation_of_s2, Hyperedge, Hypergraph};
use crate::rational::to_f64;
use crate::rigidity::{is_generically_rigid, DEFAULT_TRIALS};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSettings {
    pub starts: usize,
    /// Bound on `|F_h| / max(1, H_h)`, where `H_h` is the Hadamard bound of
    /// the hyperedge's homogeneous coordinate matrix.
    pub newton_tolerance: f64,
    pub max_iterations: usize,
    pub dedup_distance: f64,
    pub seed: u64,
    /// Half-width multiplier of the sampling box around `p̄`.
    pub inflation: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            starts: 200,
            newton_tolerance: 1e-12,
            max_iterations: 100,
            dedup_distance: 1e-6,
            seed: 0,
            inflation: 3.0,
        }
    }
}

impl OracleSettings {
    pub fn with_seed(seed: u64) -> Self {
        OracleSettings { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.newton_tolerance, self.dedup_distance, self.inflation];
        if self.starts == 0 || self.max_iterations == 0 || positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidParameters(
                "oracle settings need starts >= 1, max_iterations >= 1 and positive finite thresholds".into(),
            ));
        }
        Ok(())
    }
}

/// Deduplicated solutions of the pinned equivalence system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub count: usize,
    pub converged: usize,
    pub starts: usize,
    pub residual_max: f64,
    /// Flattened pinned configurations (`d·n` coordinates, vertex-major) in
    /// the pinned labelling, sorted lexicographically.
    pub solutions: Vec<Vec<f64>>,
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl OracleReport {
    pub fn convergence_rate(&self) -> f64 {
        self.converged as f64 / self.starts as f64
    }
}

/// Pins `p` on the lexicographically first hyperedge of `theta`.
pub fn pin_for_oracle(theta: &Hypergraph, p: &Configuration) -> Result<PinnedConfiguration> {
    let base =
        theta.hyperedges().first().ok_or_else(|| Error::InvalidParameters("hypergraph has no hyperedges".into()))?;
    standard_pinning(theta, p, base.vertices())
}

/// Volume equations in the free coordinates of a pinned configuration.
struct PinnedSystem {
    d: usize,
    n: usize,
    equations: Vec<Hyperedge>,
    targets: Vec<f64>,
    base: Vec<Vec<f64>>,
}

impl PinnedSystem {
    fn unknowns(&self) -> usize {
        self.d * (self.n - self.d - 1)
    }

    fn point<'a>(&'a self, x: &'a [f64], v: usize) -> &'a [f64] {
        if v <= self.d + 1 {
            &self.base[v - 1]
        } else {
            let i = (v - self.d - 2) * self.d;
            &x[i..i + self.d]
        }
    }

    fn homogeneous(&self, x: &[f64], h: &Hyperedge) -> DMatrix<f64> {
        let d = self.d;
        DMatrix::from_fn(d + 1, d + 1, |r, c| if r == 0 { 1.0 } else { self.point(x, h.vertices()[c])[r - 1] })
    }

    /// Scaled residuals `|F_h| / max(1, H_h)`.
    fn scaled_residual(&self, x: &[f64], f: &DVector<f64>) -> f64 {
        self.equations
            .iter()
            .zip(f.iter())
            .map(|(h, r)| {
                let m = self.homogeneous(x, h);
                let hadamard: f64 = m.column_iter().map(|c| c.norm()).product();
                r.abs() / hadamard.max(1.0)
            })
            .fold(0.0, f64::max)
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.equations.len(),
            self.equations.iter().zip(&self.targets).map(|(h, t)| self.homogeneous(x, h).determinant() - t),
        )
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.d;
        let mut j = DMatrix::zeros(self.equations.len(), self.unknowns());
        for (row, h) in self.equations.iter().enumerate() {
            let m = self.homogeneous(x, h);
            for (col, &v) in h.vertices().iter().enumerate() {
                if v <= d + 1 {
                    continue;
                }
                for k in 0..d {
                    let minor = m.clone().remove_row(k + 1).remove_column(col);
                    let s = if (k + 1 + col) % 2 == 0 { 1.0 } else { -1.0 };
                    j[(row, (v - d - 2) * d + k)] = s * minor.determinant();
                }
            }
        }
        j
    }

    /// Damped Gauss-Newton from `x`; returns the point and its scaled
    /// residual when it converges.
    fn solve(&self, mut x: Vec<f64>, settings: &OracleSettings) -> Option<(Vec<f64>, f64)> {
        let mut f = self.residual(&x);
        let mut converged_at = None;
        for it in 0..settings.max_iterations {
            let scaled = self.scaled_residual(&x, &f);
            if scaled <= settings.newton_tolerance {
                converged_at.get_or_insert(it);
                // A few polishing steps bring converged starts onto the same
                // floating-point point before clustering.
                if it >= converged_at.unwrap() + 3 || f.norm() == 0.0 {
                    return Some((x, scaled));
                }
            }
            let jac = self.jacobian(&x);
            let step = jac.svd(true, true).solve(&(-&f), 1e-14).ok()?;
            let norm = f.norm();
            let mut alpha = 1.0;
            loop {
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + alpha * s).collect();
                let ft = self.residual(&trial);
                if ft.norm() < norm || alpha < 1e-6 {
                    if ft.norm() >= norm {
                        // No descent: keep the polished point if we had one.
                        let scaled = self.scaled_residual(&x, &f);
                        return (scaled <= settings.newton_tolerance).then_some((x, scaled));
                    }
                    x = trial;
                    f = ft;
                    break;
                }
                alpha *= 0.5;
            }
            if x.iter().any(|v| !v.is_finite() || v.abs() > 1e12) {
                return None;
            }
        }
        let scaled = self.scaled_residual(&x, &f);
        (scaled <= settings.newton_tolerance).then_some((x, scaled))
    }
}

/// Sorted single-linkage clustering; returns the lowest-residual member of
/// each cluster.
fn cluster(mut points: Vec<(Vec<f64>, f64)>, radius: f64) -> Vec<(Vec<f64>, f64)> {
    points.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.total_cmp(&b.1))
    });
    let k = points.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in i + 1..k {
            let dist: f64 = points[i].0.iter().zip(&points[j].0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if dist < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut best: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        if best[r].is_none_or(|b| points[i].1 < points[b].1) {
            best[r] = Some(i);
        }
    }
    best.into_iter().flatten().map(|i| points[i].clone()).collect()
}

/// Solves `measure(Θ, q̄) = measure(Θ, p̄)` over pinned `q̄` from
/// `settings.starts` initial points (the first being `p̄` itself).
/// Triangulations of the sphere drop their lexicographically last hyperedge,
/// which is determined by the others.
pub fn solve_equivalence_system(
    theta: &Hypergraph,
    pinned: &PinnedConfiguration,
    settings: &OracleSettings,
) -> Result<OracleReport> {
    settings.validate()?;
    if theta.d() != pinned.d() || theta.n() != pinned.n() {
        return Err(Error::InvalidParameters("hypergraph and configuration sizes differ".into()));
    }
    if !is_generically_rigid(theta, DEFAULT_TRIALS, settings.seed)? {
        return Err(Error::FlexibleInput);
    }
    let (d, n) = (pinned.d(), pinned.n());
    let relabelled = pinned.relabel_hypergraph(theta)?;
    let targets_exact = measure(&relabelled, &pinned.config)?;
    let mut rows: Vec<(Hyperedge, f64)> = relabelled
        .hyperedges()
        .iter()
        .cloned()
        .zip(targets_exact.values.iter().map(to_f64))
        .filter(|(h, _)| h.vertices().iter().any(|&v| v > d + 1))
        .collect();
    if d == 2 && is_triangulation_of_s2(&relabelled)? {
        rows.pop();
    }
    let (equations, targets): (Vec<Hyperedge>, Vec<f64>) = rows.into_iter().unzip();
    let base: Vec<Vec<f64>> = pinned.points()[..=d].iter().map(|p| p.iter().map(to_f64).collect()).collect();
    let system = PinnedSystem { d, n, equations, targets, base };
    let flat_p: Vec<f64> = pinned.points().iter().flatten().map(to_f64).collect();

    if system.unknowns() == 0 {
        return Ok(OracleReport {
            count: 1,
            converged: settings.starts,
            starts: settings.starts,
            residual_max: 0.0,
            solutions: vec![flat_p],
            residuals: vec![0.0],
        });
    }
    if system.equations.len() < system.unknowns() {
        return Err(Error::InternalConsistency(format!(
            "pinned system has {} equations for {} unknowns",
            system.equations.len(),
            system.unknowns()
        )));
    }

    let p0: Vec<f64> = flat_p[d * (d + 1)..].to_vec();
    let (lo, hi) = bounding_box(pinned, settings.inflation);
    let results: Vec<Option<(Vec<f64>, f64)>> = (0..settings.starts)
        .into_par_iter()
        .map(|i| {
            let x0 = if i == 0 {
                p0.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
                rng.set_stream(i as u64);
                (0..system.unknowns()).map(|k| sample(&mut rng, lo[k % d], hi[k % d], i % 2 == 1)).collect()
            };
            system.solve(x0, settings)
        })
        .collect();
    let converged: Vec<(Vec<f64>, f64)> = results.into_iter().flatten().collect();
    if converged.is_empty() {
        return Err(Error::NoConvergence);
    }
    let n_converged = converged.len();
    let clusters = cluster(converged, settings.dedup_distance);
    let prefix = &flat_p[..d * (d + 1)];
    let solutions: Vec<Vec<f64>> = clusters.iter().map(|(x, _)| prefix.iter().chain(x).copied().collect()).collect();
    let residuals: Vec<f64> = clusters.iter().map(|c| c.1).collect();
    Ok(OracleReport {
        count: solutions.len(),
        converged: n_converged,
        starts: settings.starts,
        residual_max: residuals.iter().copied().fold(0.0, f64::max),
        solutions,
        residuals,
    })
}

/// Uniform on `[lo, hi]`, or when `heavy` an offset from the centre whose
/// magnitude is log-uniform between 1/100 and 1000 half-widths, reaching
/// solutions far outside the box.
fn sample(rng: &mut ChaCha8Rng, lo: f64, hi: f64, heavy: bool) -> f64 {
    if heavy {
        let magnitude = 10f64.powf(rng.gen_range(-2.0..3.0));
        let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        0.5 * (lo + hi) + side * magnitude * 0.5 * (hi - lo)
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Per-coordinate sampling range: the bounding box of `p̄` scaled about its
/// centre by `inflation`.
fn bounding_box(pinned: &PinnedConfiguration, inflation: f64) -> (Vec<f64>, Vec<f64>) {
    let d = pinned.d();
    let pts = pinned.config.to_f64();
    (0..d)
        .map(|k| {
            let (mn, mx) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[k]), b.max(p[k])));
            let c = 0.5 * (mn + mx);
            let w = (0.5 * (mx - mn)).max(0.5) * inflation;
            (c - w, c + w)
        })
        .unzip()
}

/// Agreement between the oracle and the exact bipyramid solver.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    pub oracle_count: usize,
    pub exact_count: usize,
    /// Largest distance from an oracle solution to its nearest recovery.
    pub max_distance: f64,
    pub passed: bool,
}

pub fn cross_validation_report(
    theta: &Hypergraph,
    pinned: &PinnedConfiguration,
    settings: &OracleSettings,
) -> Result<CrossValidation> {
    if *theta != Hypergraph::bipyramid(pinned.n())? {
        return Err(Error::InvalidParameters("cross-validation expects the standard bipyramid labelling".into()));
    }
    let (_, analysis) = analyze(pinned)?;
    let report = solve_equivalence_system(theta, pinned, settings)?;
    let recoveries: Vec<Vec<f64>> =
        analysis.recoveries.iter().map(|r| r.configuration.points().iter().flatten().map(to_f64).collect()).collect();
    let max_distance = report
        .solutions
        .iter()
        .map(|s| {
            recoveries
                .iter()
                .map(|r| r.iter().zip(s).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let exact_count = analysis.classes();
    Ok(CrossValidation {
        oracle_count: report.count,
        exact_count,
        max_distance,
        passed: report.count == exact_count && max_distance <= settings.dedup_distance,
    })
}

pub fn cross_validate(theta: &Hypergraph, pinned: &PinnedConfiguration, settings: &OracleSettings) -> Result<bool> {
    Ok(cross_validation_report(theta, pinned, settings)?.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipyramid::{random_pinned_bipyramid, three_class_b5_example};
    use crate::framework::random_generic_configuration;
    use crate::hypergraph::subdivision_family;

    fn quick(seed: u64) -> OracleSettings {
        OracleSettings { starts: 60, ..OracleSettings::with_seed(seed) }
    }

    #[test]
    fn k4_minus_one_hyperedge_is_globally_rigid() {
        let theta = Hypergraph::complete(2, 4).unwrap().without(&[vec![2, 3, 4]]).unwrap();
        let p = random_generic_configuration(2, 4, 3, 50).unwrap();
        let pinned = pin_for_oracle(&theta, &p).unwrap();
        let rep = solve_equivalence_system(&theta, &pinned, &quick(1)).unwrap();
        assert_eq!(rep.count, 1);
        assert!(rep.residual_max < 1e-12);
    }

    #[test]
    fn b4_has_two_solutions() {
        let theta = Hypergraph::bipyramid(6).unwrap();
        let pinned = random_pinned_bipyramid(6, 4).unwrap();
        let rep = solve_equivalence_system(&theta, &pinned, &quick(2)).unwrap();
        assert_eq!(rep.count, 2);
        let p: Vec<f64> = pinned.points().iter().flatten().map(to_f64).collect();
        assert!(rep.solutions.iter().any(|s| s.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-9)));
    }

    #[test]
    fn three_class_example_has_three_solutions() {
        let theta = Hypergraph::bipyramid(7).unwrap();
        let rep = solve_equivalence_system(&theta, &three_class_b5_example(), &OracleSettings::default()).unwrap();
        assert_eq!(rep.count, 3);
        assert!(rep.residual_max < 1e-12);
    }

    #[test]
    fn cross_validation_on_small_bipyramids() {
        for (n, seed) in [(5, 0), (6, 1), (7, 2)] {
            let theta = Hypergraph::bipyramid(n).unwrap();
            let pinned = random_pinned_bipyramid(n, seed).unwrap();
            let cv = cross_validation_report(&theta, &pinned, &quick(seed)).unwrap();
            assert!(cv.passed, "{cv:?}");
        }
    }

    #[test]
    fn flexible_and_bad_inputs_are_rejected() {
        let theta = Hypergraph::new(2, 5, [vec![1, 2, 3], vec![1, 2, 4], vec![3, 4, 5]]).unwrap();
        let p = random_generic_configuration(2, 5, 0, 50).unwrap();
        let pinned = pin_for_oracle(&theta, &p).unwrap();
        assert_eq!(solve_equivalence_system(&theta, &pinned, &quick(0)), Err(Error::FlexibleInput));
        let bad = OracleSettings { starts: 0, ..OracleSettings::default() };
        assert!(matches!(solve_equivalence_system(&theta, &pinned, &bad), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn deterministic_and_monotone_in_starts() {
        let theta = subdivision_family(2, 6).unwrap();
        let p = random_generic_configuration(2, 6, 7, 50).unwrap();
        let pinned = pin_for_oracle(&theta, &p).unwrap();
        let a = solve_equivalence_system(&theta, &pinned, &quick(5)).unwrap();
        let b = solve_equivalence_system(&theta, &pinned, &quick(5)).unwrap();
        assert_eq!(a, b);
        let more = OracleSettings { starts: 120, ..quick(5) };
        assert!(solve_equivalence_system(&theta, &pinned, &more).unwrap().count >= a.count);
        assert_eq!(a.count, 1);
    }

    #[test]
    fn single_simplex_has_no_unknowns() {
        let theta = Hypergraph::simplex(2).unwrap();
        let p = random_generic_configuration(2, 3, 1, 50).unwrap();
        let pinned = pin_for_oracle(&theta, &p).unwrap();
        assert_eq!(solve_equivalence_system(&theta, &pinned, &quick(0)).unwrap().count, 1);
    }

    #[test]
    fn clustering_merges_chains() {
        let pts = vec![(vec![0.0], 1e-13), (vec![0.6e-6], 1e-14), (vec![1.2e-6], 1e-13), (vec![1.0], 0.0)];
        let c = cluster(pts, 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 1e-14);
    }
}
