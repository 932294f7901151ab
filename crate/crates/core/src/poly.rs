//! Univariate polynomials and rational functions over the rationals, with
//! Sturm-sequence root counting and isolation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, sign, simplest_between, to_f64, Rational};

/// Dense polynomial, constant term first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnivariatePolynomial {
    #[serde(with = "crate::rational::serde_vec")]
    coefficients: Vec<Rational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        UnivariatePolynomial { coefficients }
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coefficients: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coefficients = vec![Rational::zero(); k + 1];
        coefficients[k] = c;
        Self::new(coefficients)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> Rational {
        self.coefficients.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coefficients.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coefficients.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coefficients.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coefficients.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.coefficients.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.coefficients.iter().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * &den / c.denom())));
        self.scale(&Rational::new(den, num))
    }

    /// `primitive()` with the leading coefficient made positive.
    pub fn normalized(&self) -> Self {
        let p = self.primitive();
        if p.leading().is_negative() {
            -p
        } else {
            p
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: the same roots, each simple.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.normalized()
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...` with positive rescaling of
    /// each remainder.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let mut next = self.derivative();
        while !next.is_zero() {
            let (_, r) = seq.last().unwrap().div_rem(&next);
            seq.push(next);
            next = -r.primitive();
        }
        seq
    }

    /// Sign of `p(t)` as `t → +∞` (`positive`) or `t → -∞`.
    fn sign_at_infinity(&self, positive: bool) -> i8 {
        let s = sign(&self.leading());
        if positive || self.degree().unwrap_or(0) % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Upper bound on the absolute value of every real root.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let n = self.coefficients.len();
        let max = self.coefficients[..n.saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        Rational::one() + max
    }

    /// Number of distinct real roots. The zero polynomial is rejected.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::InvalidParameters("the zero polynomial has infinitely many roots".into()));
        }
        let sturm = self.square_free_part().sturm_sequence();
        let at = |pos: bool| variations(sturm.iter().map(|q| q.sign_at_infinity(pos)));
        Ok(at(false) - at(true))
    }

    /// Distinct real roots, each either exact or in a disjoint open interval
    /// `(lo, hi)` containing exactly one root, in increasing order.
    pub fn isolate_real_roots(&self) -> Result<Vec<RealRoot>> {
        if self.is_zero() {
            return Err(Error::InvalidParameters("cannot isolate roots of the zero polynomial".into()));
        }
        let sf = self.square_free_part().primitive();
        let ip = IntPoly::new(&sf);
        let sturm: Vec<IntPoly> = sf.sturm_sequence().iter().map(IntPoly::new).collect();
        // A power of two above the Cauchy bound keeps every bisection point dyadic.
        let c = sf.cauchy_bound();
        let b = Rational::from_integer(BigInt::one() << (c.numer().bits() + 1).saturating_sub(c.denom().bits()));
        let mut roots = Vec::new();
        isolate(&ip, &sturm, -b.clone(), b, &mut roots);
        Ok(roots.into_iter().map(|r| r.try_exact(&sf, &ip)).collect())
    }
}

/// Sign changes in a sequence, ignoring zeros.
fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Integer coefficients of a positive multiple of a polynomial. Signs are
/// evaluated without reducing fractions, which dominates the cost of
/// bisection on large coefficients.
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn new(p: &UnivariatePolynomial) -> Self {
        Self(p.primitive().coefficients.iter().map(|c| c.numer().clone()).collect())
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// `p(u/v) · v^deg` for `v > 0`.
    fn scaled_value(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let Some((last, rest)) = self.0.split_last() else {
            return BigInt::zero();
        };
        let mut acc = last.clone();
        let mut pow = BigInt::one();
        for c in rest.iter().rev() {
            pow *= v;
            acc = acc * u + c * &pow;
        }
        acc
    }

    fn sign_at(&self, t: &Rational) -> i8 {
        sign_of(&self.scaled_value(t.numer(), t.denom()))
    }

    /// `p(a / 2^s) · 2^(s·deg)`.
    fn dyadic_value(&self, a: &BigInt, s: usize) -> BigInt {
        let Some((last, rest)) = self.0.split_last() else {
            return BigInt::zero();
        };
        let mut acc = last.clone();
        for (k, c) in rest.iter().rev().enumerate() {
            acc = acc * a + (c << (s * (k + 1)));
        }
        acc
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

fn variations_at(sturm: &[IntPoly], t: &Rational) -> usize {
    variations(sturm.iter().map(|q| q.sign_at(t)))
}

/// `(a, s)` with `q = a / 2^s`, when the denominator is a power of two.
fn to_dyadic(q: &Rational) -> Option<(BigInt, usize)> {
    let d = q.denom();
    let s = d.bits().checked_sub(1)? as usize;
    (*d == BigInt::one() << s).then(|| (q.numer().clone(), s))
}

fn from_dyadic(a: &BigInt, s: usize) -> Rational {
    Rational::new(a.clone(), BigInt::one() << s)
}

/// Bisection on the half-open interval `(lo, hi]`.
fn isolate(p: &IntPoly, sturm: &[IntPoly], lo: Rational, hi: Rational, out: &mut Vec<RealRoot>) {
    let count = variations_at(sturm, &lo) - variations_at(sturm, &hi);
    match count {
        0 => {}
        1 if p.sign_at(&hi) == 0 => out.push(RealRoot::Exact(hi)),
        // Refinement needs a sign change, so `lo` must not be a root either.
        1 if p.sign_at(&lo) != 0 => out.push(RealRoot::Isolated { lo, hi }),
        _ => {
            let mid = (&lo + &hi) / int(2);
            isolate(p, sturm, lo, mid.clone(), out);
            isolate(p, sturm, mid, hi, out);
        }
    }
}

/// Quadratic interval refinement of a sign change on `(a/2^s, b/2^s)`
/// until the width is at most `2^-target`. A secant step picks one of `N`
/// equal subintervals; on success `N` is squared, otherwise the interval is
/// bisected and `N` shrinks.
fn refine_dyadic(p: &IntPoly, mut a: BigInt, mut b: BigInt, mut s: usize, target: usize) -> RealRoot {
    let n = p.degree();
    let mut va = p.dyadic_value(&a, s);
    let mut vb = p.dyadic_value(&b, s);
    let mut k = 2usize;
    while (&b - &a) << target > BigInt::one() << s {
        let width = &b - &a;
        let j = ((&va << k) / (&va - &vb)).clamp(BigInt::zero(), (BigInt::one() << k) - 1);
        let a2 = (&a << k) + &j * &width;
        let b2 = &a2 + &width;
        let (fa, fb) = (p.dyadic_value(&a2, s + k), p.dyadic_value(&b2, s + k));
        if fa.is_zero() {
            return RealRoot::Exact(from_dyadic(&a2, s + k));
        }
        if fb.is_zero() {
            return RealRoot::Exact(from_dyadic(&b2, s + k));
        }
        if sign_of(&fa) != sign_of(&fb) {
            (a, b, s, va, vb) = (a2, b2, s + k, fa, fb);
            k *= 2;
            continue;
        }
        let m = &a + &b;
        let vm = p.dyadic_value(&m, s + 1);
        if vm.is_zero() {
            return RealRoot::Exact(from_dyadic(&m, s + 1));
        }
        s += 1;
        va <<= n;
        vb <<= n;
        if sign_of(&vm) == sign_of(&va) {
            (a, va) = (m, vm);
            b <<= 1;
        } else {
            (b, vb) = (m, vm);
            a <<= 1;
        }
        k = (k / 2).max(2);
    }
    RealRoot::Isolated { lo: from_dyadic(&a, s), hi: from_dyadic(&b, s) }
}

/// A real root of a square-free polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rational),
    /// An irrational root, the only one in the open interval; the polynomial
    /// changes sign strictly between `lo` and `hi`.
    Isolated {
        lo: Rational,
        hi: Rational,
    },
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        matches!(self, RealRoot::Exact(_))
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn midpoint(&self) -> Rational {
        match self {
            RealRoot::Exact(t) => t.clone(),
            RealRoot::Isolated { lo, hi } => (lo + hi) / int(2),
        }
    }

    /// Width of the enclosing interval (zero when exact).
    pub fn width(&self) -> Rational {
        match self {
            RealRoot::Exact(_) => Rational::zero(),
            RealRoot::Isolated { lo, hi } => hi - lo,
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        match self {
            RealRoot::Exact(x) => x == t,
            RealRoot::Isolated { lo, hi } => lo < t && t < hi,
        }
    }

    /// Narrows the interval until its width is at most `width`, switching to
    /// `Exact` if a test point hits the root. `p` must be the polynomial the
    /// root was isolated from.
    pub fn refine(&self, p: &UnivariatePolynomial, width: &Rational) -> RealRoot {
        let RealRoot::Isolated { lo, hi } = self else {
            return self.clone();
        };
        if &(hi - lo) <= width {
            return self.clone();
        }
        let ip = IntPoly::new(p);
        // 2^-target <= width.
        let target = (width.denom().bits() + 1).saturating_sub(width.numer().bits()) as usize;
        self.refine_bits(&ip, target).unwrap_or_else(|| {
            let (mut lo, mut hi) = (lo.clone(), hi.clone());
            let s_lo = ip.sign_at(&lo);
            while &(&hi - &lo) > width {
                let mid = (&lo + &hi) / int(2);
                match ip.sign_at(&mid) {
                    0 => return RealRoot::Exact(mid),
                    s if s == s_lo => lo = mid,
                    _ => hi = mid,
                }
            }
            RealRoot::Isolated { lo, hi }
        })
    }

    /// Fast path for dyadic endpoints, which is what isolation produces.
    fn refine_bits(&self, p: &IntPoly, target: usize) -> Option<RealRoot> {
        let RealRoot::Isolated { lo, hi } = self else {
            return Some(self.clone());
        };
        let ((a, sa), (b, sb)) = (to_dyadic(lo)?, to_dyadic(hi)?);
        let s = sa.max(sb);
        Some(refine_dyadic(p, a << (s - sa), b << (s - sb), s, target))
    }

    /// Decides whether the root is rational. `p` must have coprime integer
    /// coefficients, so a rational root `a/b` has `b | lead` and any other
    /// rational with denominator at most `|lead|` is at least `1/lead²`
    /// away. Below that width the simplest rational in the interval is the
    /// only candidate.
    fn try_exact(self, p: &UnivariatePolynomial, ip: &IntPoly) -> RealRoot {
        let bits = 2 * p.leading().numer().bits() + 1;
        let root = match self.refine_bits(ip, bits as usize) {
            Some(r) => r,
            None => self.refine(p, &Rational::new(BigInt::one(), BigInt::one() << bits)),
        };
        let RealRoot::Isolated { lo, hi } = &root else {
            return root;
        };
        let candidate = simplest_between(lo, hi);
        if ip.sign_at(&candidate) == 0 {
            RealRoot::Exact(candidate)
        } else {
            root
        }
    }
}

impl fmt::Debug for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnivariatePolynomial({self})")
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let op = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coeff = if abs.is_integer() { abs.numer().to_string() } else { format!("({abs})") };
            match k {
                0 => write!(f, "{op}{coeff}")?,
                _ if abs.is_one() => write!(f, "{op}t")?,
                _ => write!(f, "{op}{coeff}*t")?,
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn add(self, rhs: Self) -> UnivariatePolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        UnivariatePolynomial::new((0..n).map(|k| self.coefficient(k) + rhs.coefficient(k)).collect())
    }
}

impl Sub for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn sub(self, rhs: Self) -> UnivariatePolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        UnivariatePolynomial::new((0..n).map(|k| self.coefficient(k) - rhs.coefficient(k)).collect())
    }
}

impl Mul for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn mul(self, rhs: Self) -> UnivariatePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePolynomial::new(out)
    }
}

impl Neg for UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn neg(self) -> UnivariatePolynomial {
        UnivariatePolynomial { coefficients: self.coefficients.into_iter().map(|c| -c).collect() }
    }
}

impl Neg for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn neg(self) -> UnivariatePolynomial {
        -self.clone()
    }
}

/// A reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: UnivariatePolynomial,
    denominator: UnivariatePolynomial,
}

impl RationalFunction {
    pub fn new(numerator: UnivariatePolynomial, denominator: UnivariatePolynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DegenerateInput("rational function with zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (numerator.div_rem(&g).0, denominator.div_rem(&g).0)
        } else {
            (numerator, denominator)
        };
        let lead = den.leading().recip();
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(RationalFunction { numerator: num, denominator: den })
    }

    pub fn from_polynomial(p: UnivariatePolynomial) -> Self {
        RationalFunction { numerator: p, denominator: UnivariatePolynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_polynomial(UnivariatePolynomial::constant(c))
    }

    pub fn numerator(&self) -> &UnivariatePolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &UnivariatePolynomial {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `None` when the denominator vanishes at `t`.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let den = self.denominator.eval(t);
        (!den.is_zero()).then(|| self.numerator.eval(t) / den)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::constant(Rational::zero());
        }
        RationalFunction { numerator: self.numerator.scale(c), denominator: self.denominator.clone() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.numerator * &rhs.denominator) + &(&rhs.numerator * &self.denominator);
        Self::new(num, &self.denominator * &rhs.denominator).expect("product of nonzero denominators")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(&self.numerator * &rhs.numerator, &self.denominator * &rhs.denominator)
            .expect("product of nonzero denominators")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DegenerateInput("division by the zero rational function".into()));
        }
        Self::new(&self.numerator * &rhs.denominator, &self.denominator * &rhs.numerator)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.degree() == Some(0) {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// Coefficients as `"num/den"` strings, constant term first.
pub fn coefficient_strings(p: &UnivariatePolynomial) -> Vec<String> {
    p.coefficients().iter().map(format_rational).collect()
}
