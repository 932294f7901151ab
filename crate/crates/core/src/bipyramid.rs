//! Congruence classes of bipyramid frameworks in the plane.
//!
//! For a pinned bipyramid on `n` vertices (apexes `1` and `n`, equator
//! `2..n-1`, pinned on `123`), every equivalent pinned framework is obtained
//! by sliding vertex 4 vertically by some `t`; the remaining vertices are
//! then rational functions of `t`, and consistency at vertex `n-1` is a
//! polynomial equation `f(t) = 0` of degree `n - 4`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{
    max_abs_difference, measure, random_configuration_with_base, standard_pinning, Configuration, MeasurementVector,
    PinnedConfiguration,
};
use crate::hypergraph::Hypergraph;
use crate::poly::{coefficient_strings, RationalFunction, RealRoot, UnivariatePolynomial};
use crate::rational::{format_rational, int, sign, Rational};

/// Interval width (as a power of two) used when recovering at an irrational
/// root.
pub const RECOVERY_BITS: u32 = 120;

/// Largest measurement discrepancy accepted for a recovery at an irrational
/// root, evaluated at a rational point of its isolating interval.
pub const RECOVERY_TOLERANCE: f64 = 1e-30;

/// Numerator bound for random bipyramid instances.
pub const INSTANCE_BOUND: i64 = 100;

type Point = [RationalFunction; 2];

/// The symbolic solution family of a pinned bipyramid.
#[derive(Clone, Debug)]
pub struct BipyramidSystem {
    n: usize,
    pinned: PinnedConfiguration,
    hypergraph: Hypergraph,
    measurements: MeasurementVector,
    r: RationalFunction,
    s: RationalFunction,
    /// `q̄(4) ..= q̄(n-1)`.
    equator: Vec<Point>,
    apex: Point,
    /// Linear polynomials whose roots make some recurrence step undefined.
    excluded: Vec<UnivariatePolynomial>,
    f: UnivariatePolynomial,
}

fn det2(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn constant(c: &Rational) -> RationalFunction {
    RationalFunction::constant(c.clone())
}

/// Standard pinning of a bipyramid configuration on its base `123`.
pub fn pin_bipyramid(p: &Configuration) -> Result<PinnedConfiguration> {
    let theta = Hypergraph::bipyramid(p.n())?;
    standard_pinning(&theta, p, &[1, 2, 3])
}

/// A seeded random pinned bipyramid instance on `n` vertices.
pub fn random_pinned_bipyramid(n: usize, seed: u64) -> Result<PinnedConfiguration> {
    let p = random_configuration_with_base(2, n, seed, INSTANCE_BOUND, &[1, 2, 3])?;
    pin_bipyramid(&p)
}

pub fn build_system(pinned: &PinnedConfiguration) -> Result<BipyramidSystem> {
    if pinned.d() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, found: pinned.d() });
    }
    let n = pinned.n();
    if n < 5 {
        return Err(Error::InvalidParameters(format!("bipyramid needs n >= 5, got {n}")));
    }
    if !pinned.is_identity_labelling() || pinned.base != [1, 2, 3] {
        return Err(Error::InvalidParameters("bipyramid input must be pinned on 123 without relabelling".into()));
    }
    let p = |v: usize| pinned.config.point(v);
    let one = Rational::one();
    let (p4, pm, pn) = (p(4), p(n - 1), p(n));
    if &p4[0] + &p4[1] == one {
        return Err(Error::DegenerateInput("p(4)_1 + p(4)_2 = 1".into()));
    }
    if &pm[0] + &pm[1] == one {
        return Err(Error::DegenerateInput(format!("p({})_1 + p({})_2 = 1", n - 1, n - 1)));
    }
    if pn[0].is_zero() {
        return Err(Error::DegenerateInput(format!("p({n})_1 = 0")));
    }
    if pn[1].is_zero() {
        return Err(Error::DegenerateInput(format!("p({n})_2 = 0")));
    }

    let t = UnivariatePolynomial::t();
    let l = &one - &p4[0] - &p4[1];
    let slack = &UnivariatePolynomial::constant(l.clone()) - &t;
    let r = RationalFunction::new(t.scale(&pn[0]), slack.clone())?;
    let k = &pm[0] + &pm[1] - &one;
    let s = RationalFunction::new(
        t.scale(&-(&k * &pn[0])),
        UnivariatePolynomial::new(vec![-(&l * &pn[1]), &pn[0] + &pn[1]]),
    )?;
    let apex = [constant(&pn[0]).add(&r), constant(&pn[1]).sub(&r)];

    let mut excluded = vec![slack.clone()];
    let mut equator: Vec<Point> = Vec::with_capacity(n - 4);
    let mut prev: Point = [constant(&Rational::zero()), constant(&one)];
    for i in 4..n {
        let d_prev = det2(p(i - 1), pn);
        let d_i = det2(p(i), pn);
        let a_i = det2(p(i - 1), p(i));
        // (D_{i-1} - r)·(L - t), the cleared denominator of this step.
        let cleared = &slack.scale(&d_prev) - &t.scale(&pn[0]);
        if cleared.is_zero() {
            return Err(Error::DegenerateInput(format!("recurrence denominator at vertex {i} vanishes identically")));
        }
        excluded.push(cleared);
        let den = constant(&d_prev).sub(&r);
        let coef = constant(&d_i).sub(&r);
        let next: Point = [
            coef.mul(&prev[0]).add(&apex[0].scale(&a_i)).div(&den)?,
            coef.mul(&prev[1]).add(&apex[1].scale(&a_i)).div(&den)?,
        ];
        equator.push(next.clone());
        prev = next;
    }

    let start =
        [constant(&p4[0]), RationalFunction::from_polynomial(&t + &UnivariatePolynomial::constant(p4[1].clone()))];
    if equator[0] != start {
        return Err(Error::InternalConsistency("recurrence does not reproduce the vertical slide of vertex 4".into()));
    }

    let last = equator.last().expect("n >= 5");
    let f = last[1].sub(&constant(&pm[1])).numerator().normalized();
    if f.degree() != Some(n - 4) {
        return Err(Error::DegenerateInput(format!(
            "class polynomial has degree {:?}, expected {}",
            f.degree(),
            n - 4
        )));
    }
    if !f.coefficient(0).is_zero() {
        return Err(Error::InternalConsistency("class polynomial does not vanish at t = 0".into()));
    }

    let hypergraph = Hypergraph::bipyramid(n)?;
    let measurements = measure(&hypergraph, &pinned.config)?;
    Ok(BipyramidSystem { n, pinned: pinned.clone(), hypergraph, measurements, r, s, equator, apex, excluded, f })
}

/// An equivalent pinned framework obtained from a root of `f`.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub root: RealRoot,
    pub configuration: PinnedConfiguration,
    /// True when the root is rational and the recovery is exact.
    pub exact: bool,
    /// Largest measurement discrepancy (zero when exact).
    pub residual: Rational,
}

impl BipyramidSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &UnivariatePolynomial {
        &self.f
    }

    pub fn pinned(&self) -> &PinnedConfiguration {
        &self.pinned
    }

    pub fn r(&self) -> &RationalFunction {
        &self.r
    }

    pub fn s(&self) -> &RationalFunction {
        &self.s
    }

    /// Symbolic position of vertex `v` for `4 <= v <= n`.
    pub fn coordinates(&self, v: usize) -> Option<&Point> {
        if v == self.n {
            Some(&self.apex)
        } else {
            self.equator.get(v.checked_sub(4)?)
        }
    }

    pub fn excluded_factors(&self) -> &[UnivariatePolynomial] {
        &self.excluded
    }

    fn is_excluded(&self, t: &Rational) -> bool {
        self.excluded.iter().any(|e| e.eval(t).is_zero())
    }

    /// Evaluates the family at `t`; `None` if some step is undefined.
    fn evaluate(&self, t: &Rational) -> Option<Configuration> {
        let mut points = vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]];
        for q in self.equator.iter().chain(std::iter::once(&self.apex)) {
            points.push(vec![q[0].eval(t)?, q[1].eval(t)?]);
        }
        Configuration::new(2, points).ok()
    }

    /// `q̄(n-1)_1 - p̄(n-1)_1` must equal `s(t)` wherever `s` is defined.
    fn check_slack(&self, q: &Configuration, t: &Rational, tolerance: &Rational) -> Result<()> {
        let m = self.n - 1;
        if let Some(s) = self.s.eval(t) {
            let sigma = &q.point(m)[0] - &self.pinned.config.point(m)[0];
            if (sigma - s).abs() > *tolerance {
                return Err(Error::InternalConsistency(format!("first-coordinate slack mismatch at vertex {m}")));
            }
        }
        Ok(())
    }

    /// Exact recovery at a rational root of `f`.
    pub fn recover_configuration(&self, t0: &Rational) -> Result<PinnedConfiguration> {
        if !self.f.eval(t0).is_zero() {
            return Err(Error::InvalidParameters(format!(
                "{} is not a root of the class polynomial",
                format_rational(t0)
            )));
        }
        if self.is_excluded(t0) {
            return Err(Error::ExcludedRoot(format_rational(t0)));
        }
        let q = self.evaluate(t0).ok_or_else(|| Error::ExcludedRoot(format_rational(t0)))?;
        if measure(&self.hypergraph, &q)? != self.measurements {
            return Err(Error::InternalConsistency(format!(
                "recovery at t = {} is not equivalent",
                format_rational(t0)
            )));
        }
        self.check_slack(&q, t0, &Rational::zero())?;
        PinnedConfiguration::from_pinned(q)
    }

    /// Recovery at an isolated root. Irrational roots are refined to width
    /// `2^-RECOVERY_BITS` and the family is evaluated at the midpoint.
    pub fn recover(&self, root: &RealRoot) -> Result<Recovery> {
        let sf = self.f.square_free_part();
        let width = Rational::new(BigInt::one(), BigInt::one() << RECOVERY_BITS);
        let mut refined = root.refine(&sf, &width);
        // Excluded points are rational, so they cannot be an irrational root;
        // shrink the interval until it avoids them.
        let mut bits = RECOVERY_BITS;
        while let RealRoot::Isolated { lo, hi } = &refined {
            let hit = self.excluded.iter().any(|e| {
                let (a, b) = (e.eval(lo), e.eval(hi));
                sign(&a) * sign(&b) <= 0
            });
            if !hit {
                break;
            }
            bits += 32;
            refined = refined.refine(&sf, &Rational::new(BigInt::one(), BigInt::one() << bits));
        }
        match &refined {
            RealRoot::Exact(t0) => Ok(Recovery {
                root: root.clone(),
                configuration: self.recover_configuration(t0)?,
                exact: true,
                residual: Rational::zero(),
            }),
            RealRoot::Isolated { .. } => {
                let t_mid = refined.midpoint();
                let q = self.evaluate(&t_mid).ok_or_else(|| {
                    Error::InternalConsistency("recurrence undefined inside an isolating interval".into())
                })?;
                let residual = max_abs_difference(&measure(&self.hypergraph, &q)?, &self.measurements);
                let tolerance = Rational::from_float(RECOVERY_TOLERANCE).expect("finite");
                if residual > tolerance {
                    return Err(Error::InternalConsistency(format!(
                        "recovery near t = {:.6e} misses equivalence by {:.3e}",
                        refined.approx(),
                        crate::rational::to_f64(&residual)
                    )));
                }
                self.check_slack(&q, &t_mid, &tolerance)?;
                Ok(Recovery {
                    root: root.clone(),
                    configuration: PinnedConfiguration::from_pinned(q)?,
                    exact: false,
                    residual,
                })
            }
        }
    }

    /// Isolates the distinct real roots of `f` and recovers at each.
    pub fn analyze(&self) -> Result<BipyramidAnalysis> {
        let roots = self.f.isolate_real_roots()?;
        let mut recoveries = Vec::new();
        let mut excluded = Vec::new();
        for root in &roots {
            match self.recover(root) {
                Ok(rec) => recoveries.push(rec),
                Err(Error::ExcludedRoot(_)) => excluded.push(root.clone()),
                Err(e) => return Err(e),
            }
        }
        if !roots.iter().any(|r| r == &RealRoot::Exact(Rational::zero())) {
            return Err(Error::InternalConsistency("t = 0 was not isolated as an exact root".into()));
        }
        if recoveries.len() > self.n - 4 {
            return Err(Error::InternalConsistency("more classes than the degree of f".into()));
        }
        Ok(BipyramidAnalysis { roots, recoveries, excluded })
    }

    /// Sign of `b² - 4ac` for the cubic `at³ + bt² + ct` (`n = 7` only).
    pub fn discriminant_sign(&self) -> Result<i8> {
        if self.n != 7 {
            return Err(Error::InvalidParameters(format!("the discriminant test needs n = 7, got {}", self.n)));
        }
        let (a, b, c) = (self.f.coefficient(3), self.f.coefficient(2), self.f.coefficient(1));
        if a.is_zero() {
            return Err(Error::DegenerateInput("cubic coefficient vanishes".into()));
        }
        Ok(sign(&(&b * &b - int(4) * a * c)))
    }
}

/// Roots of `f` and the recoveries built from them.
#[derive(Clone, Debug)]
pub struct BipyramidAnalysis {
    pub roots: Vec<RealRoot>,
    pub recoveries: Vec<Recovery>,
    /// Real roots at which the recurrence is undefined.
    pub excluded: Vec<RealRoot>,
}

impl BipyramidAnalysis {
    pub fn classes(&self) -> usize {
        self.recoveries.len()
    }
}

/// Summary emitted by the `bipyramid` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipyramidReport {
    pub n: usize,
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub real_roots: usize,
    pub classes: usize,
    pub excluded_roots: usize,
    pub discriminant_sign: Option<i8>,
}

pub fn analyze(pinned: &PinnedConfiguration) -> Result<(BipyramidSystem, BipyramidAnalysis)> {
    let system = build_system(pinned)?;
    let analysis = system.analyze()?;
    Ok((system, analysis))
}

pub fn report(pinned: &PinnedConfiguration) -> Result<BipyramidReport> {
    let (system, analysis) = analyze(pinned)?;
    let f = system.polynomial();
    Ok(BipyramidReport {
        n: system.n(),
        degree: f.degree().unwrap_or(0),
        coefficients: coefficient_strings(f),
        real_roots: analysis.roots.len(),
        classes: analysis.classes(),
        excluded_roots: analysis.excluded.len(),
        discriminant_sign: if system.n() == 7 { Some(system.discriminant_sign()?) } else { None },
    })
}

pub fn count_real_roots(f: &UnivariatePolynomial) -> Result<usize> {
    f.count_real_roots()
}

pub fn count_congruence_classes(pinned: &PinnedConfiguration) -> Result<usize> {
    Ok(analyze(pinned)?.1.classes())
}

pub fn cubic_discriminant_sign(pinned: &PinnedConfiguration) -> Result<i8> {
    build_system(pinned)?.discriminant_sign()
}

/// A pinned 7-vertex instance whose cubic has a negative discriminant.
pub fn globally_rigid_b5_example() -> PinnedConfiguration {
    example([
        [(0, 1), (0, 1)],
        [(1, 1), (0, 1)],
        [(0, 1), (1, 1)],
        [(1, 5), (1, 13)],
        [(1, 7), (1, 19)],
        [(1, 11), (1, 17)],
        [(1, 2), (1, 2)],
    ])
}

/// A pinned 7-vertex instance whose cubic has three real roots.
pub fn three_class_b5_example() -> PinnedConfiguration {
    example([
        [(0, 1), (0, 1)],
        [(1, 1), (0, 1)],
        [(0, 1), (1, 1)],
        [(1, 7), (1, 19)],
        [(1, 5), (1, 17)],
        [(1, 41), (1, 13)],
        [(1, 2), (20, 1)],
    ])
}

fn example(points: [[(i64, i64); 2]; 7]) -> PinnedConfiguration {
    let rows: Vec<&[(i64, i64)]> = points.iter().map(|p| p.as_slice()).collect();
    let config = Configuration::from_ratios(2, &rows).expect("valid points");
    PinnedConfiguration::from_pinned(config).expect("pinned")
}
