//! Exact enumeration and counting of primitive lattice points in q-norm
//! balls, split by region.
//!
//! Ball membership is always decided in integers: Σ|x_i|^q ≤ p^q for finite
//! q, max|x_i| ≤ p for q = ∞. Two independent routes produce counts: a
//! direct enumeration and a Möbius sieve over lattice-point counts of
//! shrunken balls.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Result, ZonolatError};
use crate::number_theory::{binomial, gamma_pos, gcd, gcd_all, mobius_sieve};

/// Integer coordinate vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|&c| -c).collect())
    }

    /// The primitive vector pointing in the same direction.
    pub fn primitive_part(&self) -> Option<Self> {
        let g = gcd_all(&self.0);
        (g != 0).then(|| Self(self.0.iter().map(|&c| c / g as i64).collect()))
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The norm defining a ball B_q(d, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QNorm {
    One,
    Two,
    Infinity,
    /// Integer exponent q ≥ 3 (1 and 2 normalize to their named variants).
    Power(u32),
}

impl QNorm {
    pub fn from_exponent(q: u32) -> Result<Self> {
        match q {
            0 => Err(ZonolatError::domain("norm exponent q must be at least 1")),
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            q => Ok(Self::Power(q)),
        }
    }

    /// Finite exponent, or `None` for the max norm.
    pub fn exponent(self) -> Option<u32> {
        match self {
            Self::One => Some(1),
            Self::Two => Some(2),
            Self::Infinity => None,
            Self::Power(q) => Some(q),
        }
    }

    /// Budget for membership in the ball of radius p/m, i.e. m·x ∈ B_q(p).
    fn scaled_budget(self, p: u64, m: u64) -> Budget {
        match self.exponent() {
            None => Budget::MaxAbs(p / m),
            Some(1) => Budget::Sum(p / m),
            Some(q) => {
                let pq = BigUint::from(p).pow(q);
                let mq = BigUint::from(m).pow(q);
                let rem = pq / mq;
                match rem.to_u128() {
                    Some(r) => Budget::Power { q, rem: r },
                    None => Budget::BigPower { q, rem },
                }
            }
        }
    }

    fn budget(self, p: u64) -> Budget {
        self.scaled_budget(p, 1)
    }

    /// |x|_q ≤ p decided exactly.
    pub fn contains(self, v: &[i64], p: u64) -> bool {
        match self.exponent() {
            None => v.iter().all(|c| c.unsigned_abs() <= p),
            Some(q) => {
                let lhs: BigUint = v
                    .iter()
                    .map(|c| BigUint::from(c.unsigned_abs()).pow(q))
                    .sum();
                lhs <= BigUint::from(p).pow(q)
            }
        }
    }
}

impl fmt::Display for QNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "inf"),
        }
    }
}

impl FromStr for QNorm {
    type Err = ZonolatError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "max" => Ok(Self::Infinity),
            "one" => Ok(Self::One),
            "two" => Ok(Self::Two),
            other => other
                .parse::<u32>()
                .map_err(|_| ZonolatError::domain(format!("unrecognized norm '{s}'")))
                .and_then(Self::from_exponent),
        }
    }
}

impl Serialize for QNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.exponent() {
            Some(q) => s.serialize_u32(q),
            None => s.serialize_str("inf"),
        }
    }
}

/// Which part of the ball a count or enumeration ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// First non-zero coordinate positive.
    CanonicalHalf,
    /// Every non-zero point.
    FullBall,
    /// All coordinates ≥ 0, point ≠ 0.
    PositiveOrthant,
    /// All coordinates ≥ 1.
    OrthantInterior,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CanonicalHalf => "canonical_half",
            Self::FullBall => "full_ball",
            Self::PositiveOrthant => "positive_orthant",
            Self::OrthantInterior => "orthant_interior",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = ZonolatError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "canonical_half" | "half" => Ok(Self::CanonicalHalf),
            "full_ball" | "full" => Ok(Self::FullBall),
            "positive_orthant" | "orthant" => Ok(Self::PositiveOrthant),
            "orthant_interior" | "interior" => Ok(Self::OrthantInterior),
            _ => Err(ZonolatError::domain(format!("unrecognized region '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Enumeration,
    Sieve,
}

/// An exact count of primitive points in one region of B_q(d, p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub d: usize,
    pub p: u64,
    pub q: QNorm,
    pub region: Region,
    #[serde(serialize_with = "serialize_biguint")]
    pub count: BigUint,
    pub method: CountMethod,
}

/// Emits a big integer as a bare JSON number rather than a string or limb array.
pub(crate) fn serialize_biguint<S: Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number = v.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

pub(crate) fn serialize_biguint_vec<S: Serializer>(
    v: &[BigUint],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        let n: serde_json::Number = x.to_string().parse().map_err(serde::ser::Error::custom)?;
        seq.serialize_element(&n)?;
    }
    seq.end()
}

/// Guardrail on the number of lattice candidates an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_candidates: u64,
}

pub const DEFAULT_MAX_CANDIDATES: u64 = 100_000_000;

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

/// Remaining norm budget while fixing coordinates one at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Budget {
    Sum(u64),
    MaxAbs(u64),
    Power { q: u32, rem: u128 },
    BigPower { q: u32, rem: BigUint },
}

impl Budget {
    /// Largest a ≥ 0 that can be placed in the next coordinate.
    fn max_abs(&self) -> u64 {
        match self {
            Self::Sum(r) | Self::MaxAbs(r) => *r,
            Self::Power { q, rem } => int_root_u128(*rem, *q),
            Self::BigPower { q, rem } => rem.nth_root(*q).to_u64().unwrap_or(u64::MAX),
        }
    }

    fn consume(&self, a: u64) -> Self {
        match self {
            Self::Sum(r) => Self::Sum(r - a),
            Self::MaxAbs(r) => Self::MaxAbs(*r),
            Self::Power { q, rem } => Self::Power {
                q: *q,
                rem: rem - (a as u128).pow(*q),
            },
            Self::BigPower { q, rem } => Self::BigPower {
                q: *q,
                rem: rem - BigUint::from(a).pow(*q),
            },
        }
    }
}

/// floor(x^{1/q}).
fn int_root_u128(x: u128, q: u32) -> u64 {
    if q == 1 {
        return x.min(u64::MAX as u128) as u64;
    }
    let mut r = (x as f64).powf(1.0 / q as f64) as u128;
    let fits = |r: u128| r.checked_pow(q).is_some_and(|v| v <= x);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r as u64
}

pub fn is_primitive(v: &LatticeVector) -> bool {
    gcd_all(&v.0) == 1
}

/// v or −v, whichever has a positive first non-zero coordinate.
pub fn canonical_sign(v: &LatticeVector) -> Result<LatticeVector> {
    match v.0.iter().find(|&&c| c != 0) {
        None => Err(ZonolatError::domain(
            "the zero vector has no canonical sign",
        )),
        Some(&c) if c > 0 => Ok(v.clone()),
        Some(_) => Ok(v.neg()),
    }
}

pub fn is_canonical(v: &[i64]) -> bool {
    v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(ZonolatError::domain("dimension must be at least 1"))
    } else {
        Ok(())
    }
}

/// Estimated number of lattice candidates the enumeration of B_q(d, p) visits.
pub fn estimated_candidates(d: usize, p: u64, q: QNorm) -> f64 {
    let cube = (2.0 * p as f64 + 1.0).powi(d as i32);
    match q.exponent() {
        None => cube,
        Some(1) => lattice_count_l1(d, p).to_f64().unwrap_or(f64::INFINITY),
        Some(q) => {
            // Volume of the q-ball of radius p + 1 bounds the point count.
            let qf = q as f64;
            let g1 = gamma_pos(1.0 / qf + 1.0).unwrap_or(1.0);
            let gd = gamma_pos(d as f64 / qf + 1.0).unwrap_or(1.0);
            let vol = (2.0 * g1 * (p as f64 + 1.0)).powi(d as i32) / gd;
            vol.min(cube)
        }
    }
}

fn check_cap(d: usize, p: u64, q: QNorm, caps: EnumerationCaps) -> Result<()> {
    let est = estimated_candidates(d, p, q);
    if est > caps.max_candidates as f64 {
        return Err(ZonolatError::resource(format!(
            "enumerating B_{q}({d},{p}) visits about {est:.3e} candidates, above the cap of {} \
             (raise --max-candidates)",
            caps.max_candidates
        )));
    }
    Ok(())
}

/// Inclusive coordinate range allowed at the next position.
fn coord_range(region: Region, all_zero: bool, m: u64) -> (i64, i64) {
    let m = m as i64;
    match region {
        Region::FullBall => (-m, m),
        Region::CanonicalHalf if all_zero => (0, m),
        Region::CanonicalHalf => (-m, m),
        Region::PositiveOrthant => (0, m),
        Region::OrthantInterior => (1, m),
    }
}

/// Serial depth-first walk over one subtree in lexicographic order.
#[allow(clippy::too_many_arguments)]
fn walk<F: FnMut(&[i64])>(
    d: usize,
    coords: &mut Vec<i64>,
    budget: &Budget,
    region: Region,
    all_zero: bool,
    g: u64,
    f: &mut F,
) {
    if coords.len() == d {
        if g == 1 {
            f(coords);
        }
        return;
    }
    let (lo, hi) = coord_range(region, all_zero, budget.max_abs());
    for a in lo..=hi {
        let next = budget.consume(a.unsigned_abs());
        coords.push(a);
        walk(
            d,
            coords,
            &next,
            region,
            all_zero && a == 0,
            gcd(g, a.unsigned_abs()),
            f,
        );
        coords.pop();
    }
}

/// Parallel fold over the primitive points of a region, partitioned on the
/// first coordinate. The result does not depend on the thread count as long
/// as `reduce` is associative and commutative.
#[allow(clippy::too_many_arguments)]
pub fn fold_primitive<T, ID, FOLD, RED>(
    d: usize,
    p: u64,
    q: QNorm,
    region: Region,
    caps: EnumerationCaps,
    identity: ID,
    fold: FOLD,
    reduce: RED,
) -> Result<T>
where
    T: Send,
    ID: Fn() -> T + Sync + Send,
    FOLD: Fn(&mut T, &[i64]) + Sync + Send,
    RED: Fn(T, T) -> T + Sync + Send,
{
    check_dim(d)?;
    check_cap(d, p, q, caps)?;
    let budget = q.budget(p);
    let (lo, hi) = coord_range(region, true, budget.max_abs());
    Ok((lo..=hi)
        .into_par_iter()
        .map(|a| {
            let mut acc = identity();
            let mut coords = Vec::with_capacity(d);
            coords.push(a);
            walk(
                d,
                &mut coords,
                &budget.consume(a.unsigned_abs()),
                region,
                a == 0,
                a.unsigned_abs(),
                &mut |v| fold(&mut acc, v),
            );
            acc
        })
        .reduce(&identity, &reduce))
}

/// Every primitive point of `region` inside B_q(d, p), in lexicographic order.
pub fn enumerate_primitive(
    d: usize,
    p: u64,
    q: QNorm,
    region: Region,
    caps: EnumerationCaps,
) -> Result<Vec<LatticeVector>> {
    check_dim(d)?;
    check_cap(d, p, q, caps)?;
    let budget = q.budget(p);
    let (lo, hi) = coord_range(region, true, budget.max_abs());
    let chunks: Vec<Vec<LatticeVector>> = (lo..=hi)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            let mut coords = Vec::with_capacity(d);
            coords.push(a);
            walk(
                d,
                &mut coords,
                &budget.consume(a.unsigned_abs()),
                region,
                a == 0,
                a.unsigned_abs(),
                &mut |v| out.push(LatticeVector(v.to_vec())),
            );
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Count by direct enumeration (no vectors are materialized).
pub fn count_primitive_enumeration(
    d: usize,
    p: u64,
    q: QNorm,
    region: Region,
    caps: EnumerationCaps,
) -> Result<CountReport> {
    let n = fold_primitive(d, p, q, region, caps, || 0u64, |c, _| *c += 1, |a, b| a + b)?;
    Ok(CountReport {
        d,
        p,
        q,
        region,
        count: BigUint::from(n),
        method: CountMethod::Enumeration,
    })
}

/// Σ_{i=0}^{d} 2^i C(d,i) C(n,i): lattice points of the cross-polytope of radius n.
fn lattice_count_l1(d: usize, n: u64) -> BigUint {
    (0..=d as u64)
        .map(|i| (BigUint::one() << i) * binomial(d as u64, i) * binomial(n, i))
        .sum()
}

/// Points of ℤ^dims whose cost fits in `budget`.
fn lattice_count_budget(dims: usize, budget: &Budget) -> BigUint {
    let m = budget.max_abs();
    if dims == 1 {
        return BigUint::from(2 * m as u128 + 1);
    }
    match budget {
        Budget::MaxAbs(r) => BigUint::from(2 * *r + 1).pow(dims as u32),
        Budget::Sum(r) => lattice_count_l1(dims, *r),
        _ => {
            let mut total = lattice_count_budget(dims - 1, budget);
            for a in 1..=m {
                total += lattice_count_budget(dims - 1, &budget.consume(a)) << 1u32;
            }
            total
        }
    }
}

/// |B_q(d, n) ∩ ℤ^d| exactly.
pub fn lattice_count_ball(d: usize, n: u64, q: QNorm, caps: EnumerationCaps) -> Result<BigUint> {
    check_dim(d)?;
    if matches!(q, QNorm::Two | QNorm::Power(_)) && d > 1 {
        // Nested counting walks every point of the (d−1)-dimensional shadow.
        check_cap(d - 1, n, q, caps)?;
    }
    Ok(lattice_count_budget(d, &q.budget(n)))
}

/// Möbius-sieve count: Σ_m μ(m)·(|{x ∈ ℤ^d : m·x ∈ B_q(d,p)}| − 1).
///
/// Only scale-invariant regions (the full ball and, by ± symmetry, the
/// canonical half) are supported.
pub fn count_primitive_sieve(d: usize, p: u64, q: QNorm, region: Region) -> Result<CountReport> {
    check_dim(d)?;
    if !matches!(region, Region::FullBall | Region::CanonicalHalf) {
        return Err(ZonolatError::domain(format!(
            "the Möbius sieve does not support region {region}; use enumeration"
        )));
    }
    if p == 0 {
        return Ok(CountReport {
            d,
            p,
            q,
            region,
            count: BigUint::zero(),
            method: CountMethod::Sieve,
        });
    }
    let limit = usize::try_from(p)
        .map_err(|_| ZonolatError::resource(format!("radius {p} too large for the sieve")))?;
    let mu = mobius_sieve(limit)?;
    let terms: Vec<BigInt> = (1..=p)
        .into_par_iter()
        .filter(|&m| mu.get(m as usize) != 0)
        .map(|m| {
            let inner = lattice_count_budget(d, &q.scaled_budget(p, m)) - BigUint::one();
            BigInt::from(mu.get(m as usize)) * BigInt::from(inner)
        })
        .collect();
    let full: BigInt = terms.into_iter().sum();
    let full = full
        .to_biguint()
        .ok_or_else(|| ZonolatError::invariant("Möbius sieve produced a negative count"))?;
    let count = match region {
        Region::FullBall => full,
        _ => {
            if (&full % 2u32) != BigUint::zero() {
                return Err(ZonolatError::invariant(
                    "full-ball primitive count is odd; ± pairing broken",
                ));
            }
            full >> 1u32
        }
    };
    Ok(CountReport {
        d,
        p,
        q,
        region,
        count,
        method: CountMethod::Sieve,
    })
}

/// a_q(i, p): primitive points of B_q(i, p) with every coordinate ≥ 1.
pub fn a_coeff(i: usize, p: u64, q: QNorm, caps: EnumerationCaps) -> Result<BigUint> {
    count_primitive_enumeration(i, p, q, Region::OrthantInterior, caps).map(|r| r.count)
}
