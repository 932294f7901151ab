//! Exact-rational frameworks: configurations, the signed-volume measurement
//! map, equivalence and congruence, volume-preserving affine maps and the
//! standard pinning.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::matrix::RationalMatrix;
use crate::rational::{serde_vec, to_f64, Rational};

/// Largest denominator drawn by [`random_generic_configuration`].
pub const MAX_RANDOM_DENOMINATOR: i64 = 997;

/// A point assignment `p : {1..n} → ℚ^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    d: usize,
    points: Vec<Vec<Rational>>,
}

impl Configuration {
    pub fn new(d: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameters("dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::InvalidParameters(format!("point has {} coordinates, expected {d}", p.len())));
        }
        Ok(Self { d, points })
    }

    /// Convenience constructor from `(num, den)` pairs.
    pub fn from_ratios(d: usize, points: &[&[(i64, i64)]]) -> Result<Self> {
        Self::new(d, points.iter().map(|p| p.iter().map(|&(a, b)| crate::rational::rat(a, b)).collect()).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Point of the 1-based vertex `v`.
    pub fn point(&self, v: usize) -> &[Rational] {
        &self.points[v - 1]
    }

    /// `C(p)`: a `(d+1) × n` matrix whose first row is all ones and whose
    /// remaining rows hold the coordinates.
    pub fn configuration_matrix(&self) -> RationalMatrix {
        let mut c = RationalMatrix::zeros(self.d + 1, self.n());
        for (j, p) in self.points.iter().enumerate() {
            c[(0, j)] = Rational::one();
            for (k, x) in p.iter().enumerate() {
                c[(k + 1, j)] = x.clone();
            }
        }
        c
    }

    /// `C(h, p)`: the columns of `C(p)` for the vertices of `h`, in order.
    pub fn simplex_matrix(&self, h: &[usize]) -> RationalMatrix {
        let mut c = RationalMatrix::zeros(self.d + 1, h.len());
        for (j, &v) in h.iter().enumerate() {
            c[(0, j)] = Rational::one();
            for (k, x) in self.point(v).iter().enumerate() {
                c[(k + 1, j)] = x.clone();
            }
        }
        c
    }

    /// `det C(h, p)` for a tuple of `d+1` vertices, taken in the given order.
    pub fn signed_volume(&self, h: &[usize]) -> Rational {
        debug_assert_eq!(h.len(), self.d + 1);
        let base = self.point(h[0]);
        match self.d {
            1 => &self.point(h[1])[0] - &base[0],
            2 => {
                let (a, b) = (self.point(h[1]), self.point(h[2]));
                (&a[0] - &base[0]) * (&b[1] - &base[1]) - (&b[0] - &base[0]) * (&a[1] - &base[1])
            }
            _ => self.edge_matrix(h).determinant(),
        }
    }

    /// `d × d` matrix with columns `p(h_k) − p(h_0)`.
    fn edge_matrix(&self, h: &[usize]) -> RationalMatrix {
        let base = self.point(h[0]);
        let mut m = RationalMatrix::zeros(self.d, self.d);
        for (k, &v) in h[1..].iter().enumerate() {
            for (r, (x, b)) in self.point(v).iter().zip(base).enumerate() {
                m[(r, k)] = x - b;
            }
        }
        m
    }

    /// True when all points lie in a proper affine subspace.
    pub fn is_flat(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let base = &self.points[0];
        let centred: Vec<Vec<Rational>> =
            self.points[1..].iter().map(|p| p.iter().zip(base).map(|(x, b)| x - b).collect()).collect();
        if centred.is_empty() {
            return true;
        }
        RationalMatrix::from_rows(centred).rank() < self.d
    }

    /// Indices (1-based) of `d+1` affinely independent points, if any.
    pub fn affine_frame(&self) -> Option<Vec<usize>> {
        let mut chosen = vec![1];
        let base = self.points.first()?;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for v in 2..=self.n() {
            let diff: Vec<Rational> = self.point(v).iter().zip(base).map(|(x, b)| x - b).collect();
            rows.push(diff);
            if RationalMatrix::from_rows(rows.clone()).rank() == rows.len() {
                chosen.push(v);
                if chosen.len() == self.d + 1 {
                    return Some(chosen);
                }
            } else {
                rows.pop();
            }
        }
        None
    }

    pub fn apply(&self, t: &AffineTransform) -> Result<Self> {
        if t.dimension() != self.d {
            return Err(Error::InvalidParameters("transform dimension mismatch".into()));
        }
        Ok(Self { d: self.d, points: self.points.iter().map(|p| t.apply_point(p)).collect() })
    }

    /// Relabelled copy: new vertex `i` takes the point of old vertex
    /// `order[i - 1]`.
    pub fn reorder(&self, order: &[usize]) -> Self {
        Self { d: self.d, points: order.iter().map(|&v| self.point(v).to_vec()).collect() }
    }

    /// Points restricted to the listed vertices, in that order.
    pub fn project(&self, vertices: &[usize]) -> Self {
        self.reorder(vertices)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.iter().map(to_f64).collect()).collect()
    }
}

/// `f_Θ(p)`: signed volumes indexed parallel to the hyperedge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementVector {
    #[serde(with = "serde_vec")]
    pub values: Vec<Rational>,
}

fn check_sizes(theta: &Hypergraph, p: &Configuration) -> Result<()> {
    if theta.d() != p.d() || theta.n() != p.n() {
        return Err(Error::InvalidParameters(format!(
            "hypergraph (d = {}, n = {}) does not match configuration (d = {}, n = {})",
            theta.d(),
            theta.n(),
            p.d(),
            p.n()
        )));
    }
    Ok(())
}

pub fn measure(theta: &Hypergraph, p: &Configuration) -> Result<MeasurementVector> {
    check_sizes(theta, p)?;
    Ok(MeasurementVector { values: theta.hyperedges().iter().map(|h| p.signed_volume(h.vertices())).collect() })
}

pub fn are_equivalent(theta: &Hypergraph, p: &Configuration, q: &Configuration) -> Result<bool> {
    check_sizes(theta, q)?;
    Ok(measure(theta, p)? == measure(theta, q)?)
}

/// Equal signed volumes on every `(d+1)`-subset of vertices.
pub fn are_congruent(p: &Configuration, q: &Configuration) -> Result<bool> {
    if p.d() != q.d() || p.n() != q.n() {
        return Err(Error::InvalidParameters("configurations differ in size".into()));
    }
    if p.n() < p.d() + 1 {
        return Ok(true);
    }
    let k = Hypergraph::complete(p.d(), p.n())?;
    Ok(k.hyperedges().iter().all(|h| p.signed_volume(h.vertices()) == q.signed_volume(h.vertices())))
}

/// `x ↦ A x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTransform {
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
}

impl AffineTransform {
    pub fn identity(d: usize) -> Self {
        Self { a: RationalMatrix::identity(d), b: vec![Rational::zero(); d] }
    }

    pub fn new(a: RationalMatrix, b: Vec<Rational>) -> Result<Self> {
        if a.rows() != a.cols() || a.rows() != b.len() {
            return Err(Error::InvalidParameters("affine transform shape mismatch".into()));
        }
        Ok(Self { a, b })
    }

    pub fn translation(b: Vec<Rational>) -> Self {
        Self { a: RationalMatrix::identity(b.len()), b }
    }

    pub fn dimension(&self) -> usize {
        self.b.len()
    }

    pub fn determinant(&self) -> Rational {
        self.a.determinant()
    }

    pub fn is_volume_preserving(&self) -> bool {
        self.determinant().is_one()
    }

    pub fn apply_point(&self, x: &[Rational]) -> Vec<Rational> {
        self.a.mul_vec(x).into_iter().zip(&self.b).map(|(y, b)| y + b).collect()
    }
}

/// The volume-preserving affine map carrying `p` to `q`, if one exists.
/// Requires `p` to be non-flat.
pub fn find_congruence_transform(p: &Configuration, q: &Configuration) -> Result<Option<AffineTransform>> {
    if p.d() != q.d() || p.n() != q.n() {
        return Err(Error::InvalidParameters("configurations differ in size".into()));
    }
    let frame = p.affine_frame().ok_or(Error::FlatConfiguration)?;
    let d = p.d();
    let (p0, q0) = (p.point(frame[0]), q.point(frame[0]));
    let mut src = RationalMatrix::zeros(d, d);
    let mut dst = RationalMatrix::zeros(d, d);
    for (k, &v) in frame[1..].iter().enumerate() {
        for r in 0..d {
            src[(r, k)] = &p.point(v)[r] - &p0[r];
            dst[(r, k)] = &q.point(v)[r] - &q0[r];
        }
    }
    // A·src = dst  ⇔  srcᵀ·Aᵀ = dstᵀ
    let at = src
        .transpose()
        .solve(&dst.transpose())
        .ok_or_else(|| Error::InternalConsistency("affine frame is singular".into()))?;
    let a = at.transpose();
    let ap0 = a.mul_vec(p0);
    let b = q0.iter().zip(ap0).map(|(y, x)| y - x).collect();
    let t = AffineTransform { a, b };
    if !t.is_volume_preserving() {
        return Ok(None);
    }
    let maps = (1..=p.n()).all(|v| t.apply_point(p.point(v)) == q.point(v));
    Ok(maps.then_some(t))
}

/// A configuration in standard pinned position: vertex 1 at the origin and
/// vertex `i+1` at the `i`-th unit vector for `1 <= i <= d`.
///
/// The pinned framework is generally *not* congruent to the input (volumes
/// are divided by the base volume). Only its congruence classes correspond
/// one-to-one with those of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedConfiguration {
    /// The base hyperedge in the original labelling, in pinning order.
    pub base: Vec<usize>,
    /// `order[i - 1]` is the original label of pinned vertex `i`.
    pub order: Vec<usize>,
    pub config: Configuration,
}

impl PinnedConfiguration {
    /// Wraps a configuration that is already standard-pinned on `1..=d+1`.
    pub fn from_pinned(config: Configuration) -> Result<Self> {
        if !is_standard_pinned(&config) {
            return Err(Error::InvalidParameters("first d+1 points are not the origin and the unit vectors".into()));
        }
        let d = config.d();
        Ok(Self { base: (1..=d + 1).collect(), order: (1..=config.n()).collect(), config })
    }

    pub fn d(&self) -> usize {
        self.config.d()
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        self.config.points()
    }

    /// `map[old - 1]` = pinned label of `old`.
    pub fn relabel_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.order.len()];
        for (new, &old) in self.order.iter().enumerate() {
            map[old - 1] = new + 1;
        }
        map
    }

    /// The hypergraph in pinned labelling.
    pub fn relabel_hypergraph(&self, theta: &Hypergraph) -> Result<Hypergraph> {
        theta.relabel(&self.relabel_map())
    }

    pub fn is_identity_labelling(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

pub fn is_standard_pinned(p: &Configuration) -> bool {
    let d = p.d();
    p.n() > d
        && (0..=d)
            .all(|i| p.points()[i].iter().enumerate().all(|(k, x)| if i == k + 1 { x.is_one() } else { x.is_zero() }))
}

/// Standard pinning on `base`. Vertices are relabelled so that `base`
/// becomes `1..=d+1` (in the given tuple order) and the rest follow in
/// ascending order; then the unique affine map sending the base to the
/// standard simplex is applied.
pub fn standard_pinning(theta: &Hypergraph, p: &Configuration, base: &[usize]) -> Result<PinnedConfiguration> {
    check_sizes(theta, p)?;
    let d = p.d();
    if base.len() != d + 1 {
        return Err(Error::InvalidParameters(format!("base must have {} vertices", d + 1)));
    }
    if !theta.contains(base) {
        return Err(Error::MissingHyperedge(base.to_vec()));
    }
    let vol = p.signed_volume(base);
    if vol.is_zero() {
        return Err(Error::DegenerateBase(base.to_vec()));
    }
    let mut order = base.to_vec();
    order.extend((1..=p.n()).filter(|v| !base.contains(v)));

    let origin = p.point(base[0]);
    let mut frame = RationalMatrix::zeros(d, d);
    for (k, &v) in base[1..].iter().enumerate() {
        for r in 0..d {
            frame[(r, k)] = &p.point(v)[r] - &origin[r];
        }
    }
    let inv = frame.inverse().ok_or_else(|| Error::InternalConsistency("non-zero volume but singular frame".into()))?;
    let points = order
        .iter()
        .map(|&v| {
            let diff: Vec<Rational> = p.point(v).iter().zip(origin).map(|(x, o)| x - o).collect();
            inv.mul_vec(&diff)
        })
        .collect();
    let config = Configuration::new(d, points)?;
    debug_assert!(is_standard_pinned(&config));
    Ok(PinnedConfiguration { base: base.to_vec(), order, config })
}

/// Deterministic pseudo-random rational configuration. Numerators are
/// uniform in `[-bound, bound]`, denominators uniform in `[1, 997]`.
///
/// Such a point avoids the zero set of any fixed nonzero polynomial with
/// overwhelming probability; it is not certified generic.
pub fn random_generic_configuration(d: usize, n: usize, seed: u64, bound: i64) -> Result<Configuration> {
    if bound < 2 {
        return Err(Error::InvalidParameters(format!("bound must be >= 2, got {bound}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let num = rng.gen_range(-bound..=bound);
                    let den = rng.gen_range(1..=MAX_RANDOM_DENOMINATOR);
                    Rational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect();
    Configuration::new(d, points)
}

/// Random configuration whose `base` simplex has non-zero volume, retrying
/// with derived seeds.
pub fn random_configuration_with_base(
    d: usize,
    n: usize,
    seed: u64,
    bound: i64,
    base: &[usize],
) -> Result<Configuration> {
    for attempt in 0..64u64 {
        let p = random_generic_configuration(d, n, seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9)), bound)?;
        if !p.signed_volume(base).is_zero() {
            return Ok(p);
        }
    }
    Err(Error::DegenerateBase(base.to_vec()))
}

/// A hypergraph together with a configuration.
///
/// JSON layout: `{"d", "n", "hyperedges", "points": [["num/den", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FrameworkRepr", try_from = "FrameworkRepr")]
pub struct Framework {
    pub hypergraph: Hypergraph,
    pub configuration: Configuration,
}

impl Framework {
    pub fn new(hypergraph: Hypergraph, configuration: Configuration) -> Result<Self> {
        check_sizes(&hypergraph, &configuration)?;
        Ok(Self { hypergraph, configuration })
    }
}

#[derive(Serialize, Deserialize)]
struct FrameworkRepr {
    d: usize,
    n: usize,
    hyperedges: Vec<Vec<usize>>,
    points: Vec<PointRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct PointRepr(#[serde(with = "serde_vec")] Vec<Rational>);

impl From<Framework> for FrameworkRepr {
    fn from(f: Framework) -> Self {
        Self {
            d: f.hypergraph.d(),
            n: f.hypergraph.n(),
            hyperedges: f.hypergraph.hyperedges().iter().map(|h| h.vertices().to_vec()).collect(),
            points: f.configuration.points.into_iter().map(PointRepr).collect(),
        }
    }
}

impl TryFrom<FrameworkRepr> for Framework {
    type Error = Error;
    fn try_from(r: FrameworkRepr) -> Result<Self> {
        let hypergraph = Hypergraph::new(r.d, r.n, r.hyperedges)?;
        let configuration = Configuration::new(r.d, r.points.into_iter().map(|p| p.0).collect())?;
        Framework::new(hypergraph, configuration)
    }
}

/// JSON layout for a bare configuration: `{"d": 2, "points": [...]}`;
/// `d` may be omitted and is then read off the first point.
#[derive(Serialize, Deserialize)]
struct ConfigurationRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    points: Vec<PointRepr>,
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigurationRepr { d: Some(self.d), points: self.points.iter().cloned().map(PointRepr).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = ConfigurationRepr::deserialize(de)?;
        let points: Vec<Vec<Rational>> = r.points.into_iter().map(|p| p.0).collect();
        let d = r.d.or_else(|| points.first().map(Vec::len)).unwrap_or(0);
        Configuration::new(d, points).map_err(serde::de::Error::custom)
    }
}

/// Shear `[[1, k], [0, 1]]`, a convenient volume-preserving map for tests
/// and examples.
pub fn shear(k: Rational) -> AffineTransform {
    let mut a = RationalMatrix::identity(2);
    a[(0, 1)] = k;
    AffineTransform { a, b: vec![Rational::zero(); 2] }
}

/// Reflection across the x-axis (determinant −1).
pub fn reflection() -> AffineTransform {
    let mut a = RationalMatrix::identity(2);
    a[(1, 1)] = -Rational::one();
    AffineTransform { a, b: vec![Rational::zero(); 2] }
}

pub(crate) fn max_abs_difference(a: &MeasurementVector, b: &MeasurementVector) -> Rational {
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Rational::zero)
}
