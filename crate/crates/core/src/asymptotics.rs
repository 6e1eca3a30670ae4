//! Limit constants for primitive zonotope growth, the q-ball volume, the
//! known bounds on the largest lattice-polytope diameter in [0,k]^d, and
//! empirical-versus-limit convergence tables.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, ZonolatError};
use crate::number_theory::{gamma_pos, zeta, ZETA_TOL};
use crate::primitive_points::{
    count_primitive_enumeration, count_primitive_sieve, EnumerationCaps, QNorm, Region,
};
use crate::zonotope::primitive_zonotope_metrics;

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        Err(ZonolatError::domain(format!(
            "limit constants need d ≥ 2, got {d}"
        )))
    } else {
        Ok(())
    }
}

fn zeta_d(d: usize) -> Result<f64> {
    zeta(d as u32, ZETA_TOL)
}

/// (Γ(1/q + 1), Γ(d/q + 1)), both 1 for the max norm.
fn gamma_pair(d: usize, q: QNorm) -> Result<(f64, f64)> {
    match q.exponent() {
        None => Ok((1.0, 1.0)),
        Some(q) => {
            let q = q as f64;
            Ok((gamma_pos(1.0 / q + 1.0)?, gamma_pos(d as f64 / q + 1.0)?))
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Volume of B_q(d, p) = (2Γ(1/q+1)p)^d / Γ(d/q+1).
pub fn ball_volume(d: usize, p: f64, q: QNorm) -> Result<f64> {
    if d == 0 || p.is_nan() || p <= 0.0 {
        return Err(ZonolatError::domain("ball volume needs d ≥ 1 and p > 0"));
    }
    let (g1, gd) = gamma_pair(d, q)?;
    Ok((2.0 * g1 * p).powi(d as i32) / gd)
}

/// lim δ(H_q(d,p)) / p^d.
pub fn limit_half_ball(d: usize, q: QNorm) -> Result<f64> {
    check_d(d)?;
    let (g1, gd) = gamma_pair(d, q)?;
    Ok((2.0 * g1).powi(d as i32) / (2.0 * gd * zeta_d(d)?))
}

/// lim δ(H_q⁺(d,p)) / p^d.
pub fn limit_orthant(d: usize, q: QNorm) -> Result<f64> {
    check_d(d)?;
    let (g1, gd) = gamma_pair(d, q)?;
    Ok(g1.powi(d as i32) / (gd * zeta_d(d)?))
}

/// lim k(H_1(d,p)) / p^{d+1} = 2^{d−1} / ((d+1)! ζ(d)).
pub fn limit_cube_growth(d: usize) -> Result<f64> {
    check_d(d)?;
    Ok(2f64.powi(d as i32 - 1) / (factorial(d + 1) * zeta_d(d)?))
}

/// c(d)^{d+1} = 2^d (d+1)^d / (2 d! ζ(d)), the limit of δ^{d+1}/k^d.
pub fn diameter_cube_constant(d: usize) -> Result<f64> {
    check_d(d)?;
    let di = d as i32;
    Ok(2f64.powi(di) * ((d + 1) as f64).powi(di) / (2.0 * factorial(d) * zeta_d(d)?))
}

/// c(d), the constant in δ_z(d,k) ∼ c(d) k^{d/(d+1)}.
pub fn c_of_d(d: usize) -> Result<f64> {
    Ok(diameter_cube_constant(d)?.powf(1.0 / (d as f64 + 1.0)))
}

/// Published bounds on δ(d,k), the largest diameter of a lattice polytope
/// in [0,k]^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KnownBounds {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
    pub exact: Option<i64>,
}

pub fn known_bounds(d: u32, k: u32) -> Result<KnownBounds> {
    if d < 1 || k < 1 {
        return Err(ZonolatError::domain("known bounds need d ≥ 1 and k ≥ 1"));
    }
    let (d, k) = (d as i64, k as i64);
    let exact = match k {
        1 => Some(d),
        2 => Some(3 * d / 2),
        _ => None,
    };
    let upper = (k >= 3).then(|| k * d - (2 * d + 2) / 3 - (k - 3));
    let lower = (k < 2 * d).then(|| (k + 1) * d / 2);
    Ok(KnownBounds {
        lower,
        upper,
        exact,
    })
}

/// Which empirical ratio a convergence table tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ratio {
    /// δ(H_q(d,p)) / p^d
    HalfBall,
    /// δ(H_q⁺(d,p)) / p^d
    Orthant,
    /// k(H_1(d,p)) / p^{d+1}
    CubeGrowth,
    /// δ(H_1(d,p))^{d+1} / k(H_1(d,p))^d
    DiameterCubePower,
    /// δ(H_1(d,p)) / k(H_1(d,p))^{d/(d+1)}
    DiameterScaling,
    /// |B_q(d,p) ∩ ℙ^d| / vol(B_q(d,p)), tending to 1/ζ(d)
    Density,
}

impl Ratio {
    pub const ALL: [Ratio; 6] = [
        Ratio::HalfBall,
        Ratio::Orthant,
        Ratio::CubeGrowth,
        Ratio::DiameterCubePower,
        Ratio::DiameterScaling,
        Ratio::Density,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ratio::HalfBall => "half_ball",
            Ratio::Orthant => "orthant",
            Ratio::CubeGrowth => "cube_growth",
            Ratio::DiameterCubePower => "diameter_cube_power",
            Ratio::DiameterScaling => "diameter_scaling",
            Ratio::Density => "density",
        }
    }

    /// Short command-line alias.
    pub fn alias(self) -> &'static str {
        match self {
            Ratio::HalfBall => "thm21",
            Ratio::Orthant => "thm22",
            Ratio::CubeGrowth => "thm42",
            Ratio::DiameterCubePower => "cor44",
            Ratio::DiameterScaling => "thm11",
            Ratio::Density => "density",
        }
    }

    fn needs_one_norm(self) -> bool {
        matches!(
            self,
            Ratio::CubeGrowth | Ratio::DiameterCubePower | Ratio::DiameterScaling
        )
    }

    pub fn limit(self, d: usize, q: QNorm) -> Result<f64> {
        match self {
            Ratio::HalfBall => limit_half_ball(d, q),
            Ratio::Orthant => limit_orthant(d, q),
            Ratio::CubeGrowth => limit_cube_growth(d),
            Ratio::DiameterCubePower => diameter_cube_constant(d),
            Ratio::DiameterScaling => c_of_d(d),
            Ratio::Density => {
                check_d(d)?;
                Ok(1.0 / zeta_d(d)?)
            }
        }
    }
}

impl FromStr for Ratio {
    type Err = ZonolatError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Ratio::ALL
            .into_iter()
            .find(|r| r.name() == s || r.alias() == s)
            .ok_or_else(|| ZonolatError::domain(format!("unrecognized ratio '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub p: u64,
    pub empirical: f64,
    pub limit: f64,
    pub relative_gap: f64,
}

impl ConvergenceRow {
    pub fn new(p: u64, empirical: f64, limit: f64) -> Self {
        Self {
            p,
            empirical,
            limit,
            relative_gap: (empirical - limit).abs() / limit,
        }
    }
}

fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// One row: exact counts first, a single floating-point division last.
pub fn convergence_row(
    d: usize,
    q: QNorm,
    p: u64,
    which: Ratio,
    caps: EnumerationCaps,
) -> Result<ConvergenceRow> {
    check_d(d)?;
    if p == 0 {
        return Err(ZonolatError::domain("convergence rows need p ≥ 1"));
    }
    if which.needs_one_norm() && q != QNorm::One {
        return Err(ZonolatError::domain(format!(
            "ratio {} is only defined for the 1-norm",
            which.name()
        )));
    }
    let limit = which.limit(d, q)?;
    let pf = p as f64;
    let di = d as i32;
    let empirical = match which {
        Ratio::HalfBall => {
            let n = count_primitive_sieve(d, p, q, Region::CanonicalHalf)?.count;
            to_f64(&n) / pf.powi(di)
        }
        Ratio::Orthant => {
            let n = count_primitive_enumeration(d, p, q, Region::PositiveOrthant, caps)?.count;
            to_f64(&n) / pf.powi(di)
        }
        Ratio::Density => {
            let n = count_primitive_sieve(d, p, q, Region::FullBall)?.count;
            to_f64(&n) / ball_volume(d, pf, q)?
        }
        Ratio::CubeGrowth | Ratio::DiameterCubePower | Ratio::DiameterScaling => {
            let m = primitive_zonotope_metrics(d, p, QNorm::One, false, caps)?;
            let (delta, k) = (to_f64(&m.diameter), to_f64(&m.k));
            let df = d as f64;
            match which {
                Ratio::CubeGrowth => k / pf.powi(di + 1),
                Ratio::DiameterCubePower => ((df + 1.0) * delta.ln() - df * k.ln()).exp(),
                _ => delta / k.powf(df / (df + 1.0)),
            }
        }
    };
    Ok(ConvergenceRow::new(p, empirical, limit))
}

/// Rows for every radius in `p_list`, ordered by p.
pub fn convergence_table(
    d: usize,
    q: QNorm,
    p_list: &[u64],
    which: Ratio,
    caps: EnumerationCaps,
) -> Result<Vec<ConvergenceRow>> {
    let mut ps = p_list.to_vec();
    ps.sort_unstable();
    ps.dedup();
    ps.par_iter()
        .map(|&p| convergence_row(d, q, p, which, caps))
        .collect()
}

/// `x` with 12 significant digits, in plain notation where that is readable.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new leading digit (9.99… → 10.0…).
        let digits = s.chars().filter(char::is_ascii_digit).count();
        let leading_zeros = if exp < 0 { (-exp) as usize } else { 0 };
        if digits - leading_zeros > 12 && decimals > 0 {
            return format!("{x:.prec$}", prec = decimals - 1);
        }
        s
    } else {
        format!("{x:.11e}")
    }
}

fn round_sig12(x: f64) -> f64 {
    format_sig12(x).parse().unwrap_or(x)
}

pub fn rows_to_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("p,empirical,limit,relative_gap\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.p,
            format_sig12(r.empirical),
            format_sig12(r.limit),
            format_sig12(r.relative_gap)
        );
    }
    out
}

/// JSON mirror of the CSV with values rounded to 12 significant digits.
pub fn rows_to_json(rows: &[ConvergenceRow]) -> serde_json::Value {
    let rounded: Vec<ConvergenceRow> = rows
        .iter()
        .map(|r| ConvergenceRow {
            p: r.p,
            empirical: round_sig12(r.empirical),
            limit: round_sig12(r.limit),
            relative_gap: round_sig12(r.relative_gap),
        })
        .collect();
    serde_json::to_value(rounded).expect("rows serialize")
}
