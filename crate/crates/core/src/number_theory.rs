//! Number-theoretic primitives: gcd, the Möbius function, ζ(d) for integer
//! d ≥ 2, Γ on the positive reals, and exact power sums.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Result, ZonolatError};

/// Greatest common divisor of two non-negative integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// gcd of the absolute values of a coordinate slice (0 for the zero vector).
pub fn gcd_all(coords: &[i64]) -> u64 {
    coords.iter().fold(
        0u64,
        |g, &c| if g == 1 { 1 } else { gcd(g, c.unsigned_abs()) },
    )
}

/// μ(1)..μ(limit), computed once by a linear sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    limit: usize,
    // values[n] = μ(n); index 0 is unused and holds 0.
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// μ(n) for 1 ≤ n ≤ limit.
    pub fn get(&self, n: usize) -> i8 {
        assert!(
            (1..=self.limit).contains(&n),
            "μ({n}) outside table 1..={}",
            self.limit
        );
        self.values[n]
    }

    /// μ(1), μ(2), …, μ(limit).
    pub fn values(&self) -> &[i8] {
        &self.values[1..]
    }
}

pub fn mobius_sieve(limit: usize) -> Result<MobiusTable> {
    if limit == 0 {
        return Err(ZonolatError::domain(
            "Möbius table limit must be at least 1",
        ));
    }
    let mut values = vec![0i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    values[1] = 1;
    for n in 2..=limit {
        if !composite[n] {
            primes.push(n);
            values[n] = -1;
        }
        for &p in &primes {
            let m = n * p;
            if m > limit {
                break;
            }
            composite[m] = true;
            if n % p == 0 {
                values[m] = 0;
                break;
            }
            values[m] = -values[n];
        }
    }
    Ok(MobiusTable { limit, values })
}

/// Partial sum Σ_{n=1}^{terms} n^{-d}, accumulated from the smallest term up.
fn zeta_partial(d: u32, terms: u64) -> f64 {
    let exp = -(d as f64);
    (1..=terms).rev().map(|n| (n as f64).powf(exp)).sum()
}

/// Bracketing tail: ∫_{N+1}^∞ x^{-d} dx ≤ Σ_{n>N} n^{-d} ≤ ∫_N^∞ x^{-d} dx.
fn zeta_tail_bounds(d: u32, terms: u64) -> (f64, f64) {
    let s = d as f64 - 1.0;
    let lo = ((terms + 1) as f64).powf(-s) / s;
    let hi = (terms as f64).powf(-s) / s;
    (lo, hi)
}

/// Series truncation plus the midpoint of the integral tail bracket.
/// The returned error bound is half the bracket width.
pub fn zeta_with_terms(d: u32, terms: u64) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(ZonolatError::domain(format!(
            "ζ(d) diverges for d = {d}; need d ≥ 2"
        )));
    }
    if terms == 0 {
        return Err(ZonolatError::domain("ζ truncation needs at least one term"));
    }
    let (lo, hi) = zeta_tail_bounds(d, terms);
    Ok((zeta_partial(d, terms) + 0.5 * (lo + hi), 0.5 * (hi - lo)))
}

/// Smallest truncation length whose tail bracket half-width is within `tol`.
pub fn zeta_terms_for(d: u32, tol: f64) -> u64 {
    // Half-width ≈ N^{-d}/2, so N ≈ (2 tol)^{-1/d}; refine upward from there.
    let mut n = ((2.0 * tol).powf(-1.0 / d as f64).floor() as u64).max(1);
    while n > 1 {
        let (lo, hi) = zeta_tail_bounds(d, n - 1);
        if 0.5 * (hi - lo) > tol {
            break;
        }
        n -= 1;
    }
    loop {
        let (lo, hi) = zeta_tail_bounds(d, n);
        if 0.5 * (hi - lo) <= tol {
            return n;
        }
        n += 1 + n / 64;
    }
}

/// ζ(d) with absolute error at most `tol` (plus floating-point rounding of
/// the partial sum, which is far below any tolerance accepted here).
pub fn zeta(d: u32, tol: f64) -> Result<f64> {
    if d < 2 {
        return Err(ZonolatError::domain(format!(
            "ζ(d) diverges for d = {d}; need d ≥ 2"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(ZonolatError::domain("ζ tolerance must be positive"));
    }
    let tol = tol.max(1e-15);
    zeta_with_terms(d, zeta_terms_for(d, tol)).map(|(v, _)| v)
}

/// Default precision used wherever a limit constant needs ζ.
pub const ZETA_TOL: f64 = 1e-13;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0 via the Lanczos approximation (g = 7, 9 terms).
pub fn gamma_pos(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(ZonolatError::domain(format!(
            "Γ is only evaluated on positive finite reals, got {x}"
        )));
    }
    // Lanczos is most accurate for x ≥ 1/2; shift small arguments up once.
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Σ_{i=1}^{p-1} i^d, exactly.
pub fn faulhaber_sum(d: u32, p: u64) -> BigUint {
    let mut total = BigUint::zero();
    for i in 1..p {
        total += BigUint::from(i).pow(d);
    }
    total
}

/// Binomial coefficient C(n, k) as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
