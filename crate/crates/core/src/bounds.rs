//! Closed-form bounds on the number of congruence classes.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::{is_triangulation_of_s2, Hypergraph};
use crate::rational::Rational;
use crate::rigidity::{is_minimally_rigid, max_rank};

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn to_natural(q: Rational, what: &str) -> Result<BigUint> {
    if !q.is_integer() {
        return Err(Error::InternalConsistency(format!("{what} evaluated to the non-integer {q}")));
    }
    q.to_integer()
        .to_biguint()
        .ok_or_else(|| Error::InternalConsistency(format!("{what} evaluated to a negative number")))
}

/// `(d(n-d-1))! · Π_{i<d} i! / (n-d-1+i)!`, the degree bound for minimally
/// rigid hypergraphs.
pub fn borcea_streinu_bound(d: usize, n: usize) -> Result<BigUint> {
    if d == 0 || n < d + 1 {
        return Err(Error::InvalidParameters(format!("need d >= 1 and n >= d + 1, got d = {d}, n = {n}")));
    }
    let k = n - d - 1;
    let mut q = Rational::from_integer(factorial(d * k));
    for i in 0..d {
        q *= Rational::new(factorial(i), factorial(k + i));
    }
    to_natural(q, "Eq1")
}

/// `C(2n-6, n-3) / (n-2)`, the Catalan number `C_{n-3}`.
pub fn catalan_bound(n: usize) -> Result<BigUint> {
    if n < 4 {
        return Err(Error::InvalidParameters(format!("need n >= 4, got {n}")));
    }
    let k = n - 3;
    let binom = Rational::new(factorial(2 * k), factorial(k) * factorial(k));
    to_natural(binom / Rational::from_integer(BigInt::from(n - 2)), "Catalan bound")
}

pub fn bipyramid_bound(n: usize) -> Result<usize> {
    if n < 5 {
        return Err(Error::InvalidParameters(format!("bipyramids need n >= 5, got {n}")));
    }
    Ok(n - 4)
}

/// 2 for even `n`, otherwise the universal lower bound 1.
pub fn parity_lower_bound(n: usize) -> usize {
    if n >= 5 && n % 2 == 0 {
        2
    } else {
        1
    }
}

/// A named bound together with the parameters it was evaluated at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub parameters: Vec<(String, usize)>,
}

impl Rule {
    pub fn new(name: &str, parameters: &[(&str, usize)]) -> Self {
        Rule { name: name.to_string(), parameters: parameters.iter().map(|&(k, v)| (k.to_string(), v)).collect() }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.parameters.is_empty() {
            let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", params.join(", "))?;
        }
        Ok(())
    }
}

/// Lower and upper bounds on a class count. `upper = None` means no finite
/// bound is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassBounds {
    pub lower: BigUint,
    pub upper: Option<BigUint>,
    pub provenance: Vec<Rule>,
}

impl ClassBounds {
    pub fn new(lower: BigUint, upper: Option<BigUint>, provenance: Vec<Rule>) -> Result<Self> {
        if lower.is_zero() {
            return Err(Error::InvalidParameters("lower bound must be at least 1".into()));
        }
        if upper.as_ref().is_some_and(|u| *u < lower) {
            return Err(Error::InvalidParameters("lower bound exceeds upper bound".into()));
        }
        Ok(ClassBounds { lower, upper, provenance })
    }

    pub fn exact(count: usize, rule: Rule) -> Self {
        let c = BigUint::from(count.max(1));
        ClassBounds { lower: c.clone(), upper: Some(c), provenance: vec![rule] }
    }

    pub fn from_range(lower: usize, upper: usize) -> Result<Self> {
        Self::new(lower.into(), Some(upper.into()), Vec::new())
    }

    /// Only the universal bound: at least one class, no upper bound.
    pub fn unbounded() -> Self {
        ClassBounds { lower: BigUint::one(), upper: None, provenance: Vec::new() }
    }

    /// Intersection of two bounds on the same quantity.
    pub fn meet(mut self, other: ClassBounds) -> Result<Self> {
        let lower = self.lower.max(other.lower);
        let upper = match (self.upper, other.upper) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.provenance.extend(other.provenance);
        Self::new(lower, upper, self.provenance)
    }

    pub fn rule_names(&self) -> Vec<String> {
        self.provenance.iter().map(|r| r.name.clone()).collect()
    }
}

impl Serialize for ClassBounds {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClassBounds", 3)?;
        st.serialize_field("lower", &natural_json(&self.lower))?;
        st.serialize_field("upper", &self.upper.as_ref().map(natural_json))?;
        st.serialize_field("rules", &self.rule_names())?;
        st.end()
    }
}

/// JSON integer when it fits in 64 bits, decimal string otherwise.
fn natural_json(x: &BigUint) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

/// Componentwise product of the parts' bounds.
pub fn gluing_bounds(parts: &[ClassBounds]) -> Result<ClassBounds> {
    if parts.is_empty() {
        return Err(Error::InvalidParameters("gluing needs at least one part".into()));
    }
    let lower = parts.iter().fold(BigUint::one(), |acc, p| acc * &p.lower);
    let upper = parts.iter().try_fold(BigUint::one(), |acc, p| p.upper.as_ref().map(|u| acc * u));
    let mut provenance = vec![Rule::new("Gluing", &[("parts", parts.len())])];
    provenance.extend(parts.iter().flat_map(|p| p.provenance.iter().cloned()));
    ClassBounds::new(lower, upper, provenance)
}

/// Bounds that hold for every minimally rigid hypergraph with these
/// parameters and, when `d = 2`, for every triangulation of the sphere.
pub fn bounds_for_parameters(d: usize, n: usize) -> Result<ClassBounds> {
    let eq1 = borcea_streinu_bound(d, n)?;
    let mut b = ClassBounds::new(BigUint::one(), Some(eq1), vec![Rule::new("Eq1", &[("d", d), ("n", n)])])?;
    if d == 2 && n >= 4 {
        let cat = ClassBounds::new(BigUint::one(), Some(catalan_bound(n)?), vec![Rule::new("Catalan", &[("n", n)])])?;
        b = b.meet(cat)?;
    }
    Ok(b)
}

/// True for a sphere triangulation with two non-adjacent vertices each
/// adjacent to every other vertex, i.e. a bipyramid in some labelling.
pub fn is_bipyramid(theta: &Hypergraph) -> Result<bool> {
    let n = theta.n();
    if theta.d() != 2 || n < 5 || !is_triangulation_of_s2(theta)? {
        return Ok(false);
    }
    let edges = theta.edges();
    let mut neighbours = vec![0usize; n + 1];
    for &(a, b) in &edges {
        neighbours[a] += 1;
        neighbours[b] += 1;
    }
    let apexes: Vec<usize> = (1..=n).filter(|&v| neighbours[v] == n - 2).collect();
    Ok(apexes.iter().enumerate().any(|(i, &a)| apexes[i + 1..].iter().any(|&b| !edges.contains(&(a, b)))))
}

/// Every closed-form bound that applies to `theta`. Rigidity is decided
/// with `trials` random configurations.
pub fn bounds_for_hypergraph(theta: &Hypergraph, trials: usize, seed: u64) -> Result<ClassBounds> {
    let (d, n) = (theta.d(), theta.n());
    let mut b = ClassBounds::unbounded();
    if theta.m() == max_rank(d, n) && n > d && is_minimally_rigid(theta, trials, seed)? {
        let eq1 = borcea_streinu_bound(d, n)?;
        b = b.meet(ClassBounds::new(BigUint::one(), Some(eq1), vec![Rule::new("Eq1", &[("d", d), ("n", n)])])?)?;
    }
    if d == 2 && is_triangulation_of_s2(theta)? {
        let cat = catalan_bound(n)?;
        b = b.meet(ClassBounds::new(BigUint::one(), Some(cat), vec![Rule::new("Catalan", &[("n", n)])])?)?;
        if is_bipyramid(theta)? {
            let bip = BigUint::from(bipyramid_bound(n)?);
            b = b.meet(ClassBounds::new(BigUint::one(), Some(bip), vec![Rule::new("Bipyramid", &[("n", n)])])?)?;
            if n % 2 == 0 {
                let par = ClassBounds::new(
                    BigUint::from(parity_lower_bound(n)),
                    None,
                    vec![Rule::new("Parity", &[("n", n)])],
                )?;
                b = b.meet(par)?;
            }
        }
    }
    Ok(b)
}
