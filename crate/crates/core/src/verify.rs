//! Exact identity suites run over ranges of radii.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Result, ZonolatError};
use crate::number_theory::binomial;
use crate::primitive_points::{
    a_coeff, count_primitive_enumeration, count_primitive_sieve, enumerate_primitive,
    EnumerationCaps, LatticeVector, QNorm, Region,
};
use crate::zonotope::{dominance_check, k_delta_identity, DominanceVerdict, GeneratorSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// k(H_1(d,p))·d = p·δ(H_1(d,p)) − Σ_{i<p} δ(H_1(d,i))
    Lemma41,
    /// δ(H_q⁺(d,p)) = Σ_i C(d,i) a_q(i,p)
    Eq23,
    /// |B_q(d,p) ∩ ℙ^d| = Σ_i 2^i C(d,i) a_q(i,p)
    Eq24,
    /// |B_q(2,p) ∩ ℙ^2| = 4 δ(H_q⁺(2,p)) − 4
    BaseCase,
    /// Random zonotopes never beat H_1(d,p) on both diameter and cube size.
    Dominance,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Lemma41,
        Suite::Eq23,
        Suite::Eq24,
        Suite::BaseCase,
        Suite::Dominance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma41 => "lemma41",
            Suite::Eq23 => "eq23",
            Suite::Eq24 => "eq24",
            Suite::BaseCase => "base-case",
            Suite::Dominance => "dominance",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ZonolatError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ZonolatError::domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: usize,
    pub holding: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            checked: 0,
            holding: 0,
            failures: Vec::new(),
        }
    }

    fn push(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.holding += 1;
        } else {
            self.failures.push(describe());
        }
    }

    pub fn all_hold(&self) -> bool {
        self.holding == self.checked
    }

    pub fn summary(&self) -> String {
        format!("{}/{} identities hold", self.holding, self.checked)
    }
}

pub fn k_delta_suite(d: usize, p_max: u64, caps: EnumerationCaps) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Lemma41);
    for p in 1..=p_max {
        let c = k_delta_identity(d, p, caps)?;
        rep.push(c.equal, || {
            format!("d={d} p={p}: lhs {} ≠ rhs {}", c.lhs, c.rhs)
        });
    }
    Ok(rep)
}

/// Σ_{i=1}^{d} weight(i)·C(d,i)·a_q(i,p).
fn orthant_sum(
    d: usize,
    p: u64,
    q: QNorm,
    caps: EnumerationCaps,
    weight: impl Fn(usize) -> BigUint,
) -> Result<BigUint> {
    let mut total = BigUint::from(0u32);
    for i in 1..=d {
        total += weight(i) * binomial(d as u64, i as u64) * a_coeff(i, p, q, caps)?;
    }
    Ok(total)
}

pub fn orthant_generator_suite(
    d: usize,
    p_max: u64,
    q: QNorm,
    caps: EnumerationCaps,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Eq23);
    for p in 1..=p_max {
        let lhs = count_primitive_enumeration(d, p, q, Region::PositiveOrthant, caps)?.count;
        let rhs = orthant_sum(d, p, q, caps, |_| BigUint::from(1u32))?;
        rep.push(lhs == rhs, || format!("d={d} p={p} q={q}: {lhs} ≠ {rhs}"));
    }
    Ok(rep)
}

pub fn orthant_subdivision_suite(
    d: usize,
    p_max: u64,
    q: QNorm,
    caps: EnumerationCaps,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Eq24);
    for p in 1..=p_max {
        let lhs = count_primitive_sieve(d, p, q, Region::FullBall)?.count;
        let rhs = orthant_sum(d, p, q, caps, |i| BigUint::from(1u32) << i)?;
        rep.push(lhs == rhs, || format!("d={d} p={p} q={q}: {lhs} ≠ {rhs}"));
    }
    Ok(rep)
}

pub fn planar_base_case_suite(p_max: u64, q: QNorm, caps: EnumerationCaps) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::BaseCase);
    for p in 1..=p_max {
        let full = count_primitive_sieve(2, p, q, Region::FullBall)?.count;
        let plus = count_primitive_enumeration(2, p, q, Region::PositiveOrthant, caps)?.count;
        let rhs = plus * 4u32 - 4u32;
        rep.push(full == rhs, || format!("p={p} q={q}: {full} ≠ {rhs}"));
    }
    Ok(rep)
}

/// Distinct canonical primitive vectors of 1-norm ≤ `max_l1`, spanning ℤ^d.
pub fn random_full_dimensional_set<R: Rng>(
    rng: &mut R,
    d: usize,
    max_l1: u64,
    max_generators: usize,
    caps: EnumerationCaps,
) -> Result<GeneratorSet> {
    let pool: Vec<LatticeVector> =
        enumerate_primitive(d, max_l1, QNorm::One, Region::CanonicalHalf, caps)?;
    if pool.len() < d || max_generators < d {
        return Err(ZonolatError::domain(
            "pool too small for a full-dimensional sample",
        ));
    }
    let hi = max_generators.min(pool.len());
    loop {
        let m = rng.gen_range(d..=hi);
        let gens: Vec<LatticeVector> = pool.choose_multiple(rng, m).cloned().collect();
        let z = GeneratorSet::new(d, gens)?;
        if z.is_full_dimensional() {
            return Ok(z);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominanceTally {
    pub strictly_dominated: usize,
    pub equal_diameter_larger_box: usize,
    pub tie_is_translate: usize,
    pub not_applicable: usize,
}

/// `samples` random sets per dimension, each compared against H_1(d,p) for
/// every p ≤ p_max. Any invariant violation is recorded as a failure.
pub fn dominance_suite(
    dims: &[usize],
    samples: usize,
    p_max: u64,
    max_l1: u64,
    max_generators: usize,
    seed: u64,
    caps: EnumerationCaps,
) -> Result<(SuiteReport, DominanceTally)> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(Suite::Dominance);
    let mut tally = DominanceTally {
        strictly_dominated: 0,
        equal_diameter_larger_box: 0,
        tie_is_translate: 0,
        not_applicable: 0,
    };
    for &d in dims {
        for _ in 0..samples {
            let z = random_full_dimensional_set(&mut rng, d, max_l1, max_generators, caps)?;
            for p in 1..=p_max {
                match dominance_check(&z, p, caps) {
                    Ok(v) => {
                        match v {
                            DominanceVerdict::StrictlyDominated => tally.strictly_dominated += 1,
                            DominanceVerdict::EqualDiameterLargerBox => {
                                tally.equal_diameter_larger_box += 1
                            }
                            DominanceVerdict::TieIsTranslate => tally.tie_is_translate += 1,
                            DominanceVerdict::NotApplicable => tally.not_applicable += 1,
                        }
                        rep.push(true, String::new);
                    }
                    Err(ZonolatError::InvariantViolation(msg)) => rep.push(false, || msg),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((rep, tally))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> EnumerationCaps {
        EnumerationCaps::default()
    }

    #[test]
    fn suites_hold_on_small_ranges() {
        assert!(k_delta_suite(2, 8, caps()).unwrap().all_hold());
        for q in [QNorm::One, QNorm::Two, QNorm::Infinity] {
            assert!(orthant_generator_suite(3, 6, q, caps()).unwrap().all_hold());
            assert!(orthant_subdivision_suite(3, 6, q, caps())
                .unwrap()
                .all_hold());
            assert!(planar_base_case_suite(20, q, caps()).unwrap().all_hold());
        }
    }

    #[test]
    fn summary_text() {
        let r = k_delta_suite(2, 5, caps()).unwrap();
        assert_eq!(r.summary(), "5/5 identities hold");
    }

    #[test]
    fn random_sets_are_valid_and_seeded() {
        let mut a = rand::rngs::StdRng::seed_from_u64(7);
        let mut b = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_full_dimensional_set(&mut a, 3, 5, 9, caps()).unwrap();
            let y = random_full_dimensional_set(&mut b, 3, 5, 9, caps()).unwrap();
            assert_eq!(x, y);
            assert!(x.is_full_dimensional());
            assert!(x.generators().iter().all(|g| g.l1_norm() <= 5));
        }
    }

    #[test]
    fn dominance_suite_small() {
        let (rep, tally) = dominance_suite(&[2], 10, 2, 5, 8, 1, caps()).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.checked, 20);
        assert_eq!(
            tally.strictly_dominated
                + tally.equal_diameter_larger_box
                + tally.tie_is_translate
                + tally.not_applicable,
            20
        );
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
