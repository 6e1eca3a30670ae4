//! Primitive zonotopes H_q(d,p) and H_q⁺(d,p) as generator sets, their
//! metrics (diameter, coordinate widths, enclosing cube size k), and the
//! exact identities linking k and the diameter.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZonolatError};
use crate::primitive_points::{
    count_primitive_sieve, enumerate_primitive, fold_primitive, is_canonical, serialize_biguint,
    serialize_biguint_vec, EnumerationCaps, LatticeVector, QNorm, Region,
};

/// Pairwise non-collinear, sign-canonical lattice vectors in ℤ^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    d: usize,
    generators: Vec<LatticeVector>,
}

#[derive(Deserialize)]
struct RawGeneratorSet {
    d: usize,
    generators: Vec<LatticeVector>,
}

impl<'de> Deserialize<'de> for GeneratorSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGeneratorSet::deserialize(de)?;
        GeneratorSet::new(raw.d, raw.generators).map_err(serde::de::Error::custom)
    }
}

impl GeneratorSet {
    /// Validates the generator invariants; generators need not be primitive.
    pub fn new(d: usize, generators: Vec<LatticeVector>) -> Result<Self> {
        if d == 0 {
            return Err(ZonolatError::domain("dimension must be at least 1"));
        }
        let mut directions = HashSet::with_capacity(generators.len());
        for g in &generators {
            if g.dim() != d {
                return Err(ZonolatError::domain(format!(
                    "generator {g} has dimension {}, expected {d}",
                    g.dim()
                )));
            }
            if g.is_zero() {
                return Err(ZonolatError::domain("zero generator"));
            }
            if !is_canonical(g.coords()) {
                return Err(ZonolatError::domain(format!(
                    "generator {g} is not sign-canonical (first non-zero coordinate must be positive)"
                )));
            }
            let dir = g.primitive_part().expect("nonzero");
            if !directions.insert(dir) {
                return Err(ZonolatError::domain(format!(
                    "generator {g} is collinear with another generator"
                )));
            }
        }
        Ok(Self { d, generators })
    }

    /// Canonicalizes signs first, then validates.
    pub fn from_vectors(d: usize, vectors: Vec<LatticeVector>) -> Result<Self> {
        let canon = vectors
            .iter()
            .map(crate::primitive_points::canonical_sign)
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, canon)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators sorted lexicographically, for set comparisons.
    pub fn sorted_generators(&self) -> Vec<LatticeVector> {
        let mut g = self.generators.clone();
        g.sort();
        g
    }

    pub fn same_generators(&self, other: &GeneratorSet) -> bool {
        self.d == other.d && self.sorted_generators() == other.sorted_generators()
    }

    /// Rank of the generator matrix, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| g.coords().iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.d {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let prow = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, px) in row.iter_mut().zip(&prow) {
                    *x = &*x * &prow[col] - &factor * px;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rank() == self.d
    }
}

/// Diameter, per-coordinate widths, and the enclosing cube size k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZonotopeMetrics {
    #[serde(serialize_with = "serialize_biguint")]
    pub diameter: BigUint,
    #[serde(serialize_with = "serialize_biguint_vec")]
    pub widths: Vec<BigUint>,
    #[serde(serialize_with = "serialize_biguint")]
    pub k: BigUint,
}

/// H_q(d, p): all canonical primitive vectors of q-norm at most p.
pub fn build_h(d: usize, p: u64, q: QNorm, caps: EnumerationCaps) -> Result<GeneratorSet> {
    let gens = enumerate_primitive(d, p, q, Region::CanonicalHalf, caps)?;
    Ok(GeneratorSet {
        d,
        generators: gens,
    })
}

/// H_q⁺(d, p): the generators of H_q(d, p) inside the non-negative orthant.
pub fn build_h_plus(d: usize, p: u64, q: QNorm, caps: EnumerationCaps) -> Result<GeneratorSet> {
    let gens = enumerate_primitive(d, p, q, Region::PositiveOrthant, caps)?;
    Ok(GeneratorSet {
        d,
        generators: gens,
    })
}

/// The bounding box of Σ[0, g] has side Σ_g |g_j| in coordinate j and a
/// lattice corner, so k is the widest side.
pub fn metrics(z: &GeneratorSet) -> ZonotopeMetrics {
    let mut widths = vec![0u64; z.d];
    for g in &z.generators {
        for (w, c) in widths.iter_mut().zip(g.coords()) {
            *w += c.unsigned_abs();
        }
    }
    finish_metrics(z.len() as u64, widths)
}

fn finish_metrics(count: u64, widths: Vec<u64>) -> ZonotopeMetrics {
    let k = widths.iter().copied().max().unwrap_or(0);
    ZonotopeMetrics {
        diameter: BigUint::from(count),
        widths: widths.into_iter().map(BigUint::from).collect(),
        k: BigUint::from(k),
    }
}

/// Metrics of H_q(d, p) (or H_q⁺ with `plus`) without materializing the
/// generator list.
pub fn primitive_zonotope_metrics(
    d: usize,
    p: u64,
    q: QNorm,
    plus: bool,
    caps: EnumerationCaps,
) -> Result<ZonotopeMetrics> {
    let region = if plus {
        Region::PositiveOrthant
    } else {
        Region::CanonicalHalf
    };
    let (count, widths) = fold_primitive(
        d,
        p,
        q,
        region,
        caps,
        || (0u64, vec![0u64; d]),
        |(n, w), v| {
            *n += 1;
            for (wj, c) in w.iter_mut().zip(v) {
                *wj += c.unsigned_abs();
            }
        },
        |(n1, mut w1), (n2, w2)| {
            for (a, b) in w1.iter_mut().zip(w2) {
                *a += b;
            }
            (n1 + n2, w1)
        },
    )?;
    Ok(finish_metrics(count, widths))
}

/// δ(H_1(d, i)) via the sieve, with δ(H_1(d, 0)) = 0.
fn delta_h1(d: usize, i: u64) -> Result<BigUint> {
    if i == 0 {
        return Ok(BigUint::zero());
    }
    count_primitive_sieve(d, i, QNorm::One, Region::CanonicalHalf).map(|r| r.count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KDeltaCheck {
    pub d: usize,
    pub p: u64,
    /// k(H_1(d,p))·d from the enumerated widths.
    #[serde(serialize_with = "serialize_biguint")]
    pub lhs: BigUint,
    /// p·δ(H_1(d,p)) − Σ_{i<p} δ(H_1(d,i)) from sieve counts.
    #[serde(serialize_with = "serialize_biguint")]
    pub rhs: BigUint,
    pub equal: bool,
}

/// Checks k(H_1(d,p))·d = p·δ(H_1(d,p)) − Σ_{i=0}^{p−1} δ(H_1(d,i)).
///
/// The left side comes from enumerated coordinate widths, the right from
/// sieve counts, so the two routes share no code beyond the norm test.
pub fn k_delta_identity(d: usize, p: u64, caps: EnumerationCaps) -> Result<KDeltaCheck> {
    if d < 2 || p < 1 {
        return Err(ZonolatError::domain("k–δ identity needs d ≥ 2 and p ≥ 1"));
    }
    let m = primitive_zonotope_metrics(d, p, QNorm::One, false, caps)?;
    if m.widths.iter().any(|w| *w != m.k) {
        return Err(ZonolatError::invariant(format!(
            "H_1({d},{p}) has unequal coordinate widths"
        )));
    }
    let lhs = &m.k * BigUint::from(d);
    let mut rhs = BigInt::from(p) * BigInt::from(delta_h1(d, p)?);
    for i in 0..p {
        rhs -= BigInt::from(delta_h1(d, i)?);
    }
    let rhs = rhs
        .to_biguint()
        .ok_or_else(|| ZonolatError::invariant("negative right-hand side"))?;
    Ok(KDeltaCheck {
        d,
        p,
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    /// δ(H) < δ(Z) and k(H) < k(Z).
    StrictlyDominated,
    /// δ(H) = δ(Z) but k(H) < k(Z).
    EqualDiameterLargerBox,
    /// δ(H) = δ(Z), k(H) = k(Z), and Z has exactly the generators of H.
    TieIsTranslate,
    /// δ(H) > δ(Z): nothing to compare.
    NotApplicable,
}

/// Compares a full-dimensional lattice zonotope against H_1(d, p): more
/// generators can never fit a smaller cube, and a tie in both diameter and
/// cube size forces the same generator set.
pub fn dominance_check(
    z: &GeneratorSet,
    p: u64,
    caps: EnumerationCaps,
) -> Result<DominanceVerdict> {
    if p < 1 {
        return Err(ZonolatError::domain("radius p must be at least 1"));
    }
    if !z.is_full_dimensional() {
        return Err(ZonolatError::domain(format!(
            "zonotope spans rank {} < d = {}; only full-dimensional inputs are compared",
            z.rank(),
            z.d
        )));
    }
    let h = build_h(z.d, p, QNorm::One, caps)?;
    let (mh, mz) = (metrics(&h), metrics(z));
    if mh.diameter > mz.diameter {
        return Ok(DominanceVerdict::NotApplicable);
    }
    let violation = |what: &str| {
        ZonolatError::invariant(format!(
            "{what}: δ(H_1({d},{p})) = {} ≤ δ(Z) = {} but k(H) = {}, k(Z) = {}",
            mh.diameter,
            mz.diameter,
            mh.k,
            mz.k,
            d = z.d
        ))
    };
    if mh.k > mz.k {
        return Err(violation("cube-size dominance fails"));
    }
    if mh.diameter < mz.diameter {
        if mh.k == mz.k {
            return Err(violation("strict diameter gap without strict cube gap"));
        }
        return Ok(DominanceVerdict::StrictlyDominated);
    }
    if mh.k < mz.k {
        return Ok(DominanceVerdict::EqualDiameterLargerBox);
    }
    if !z.same_generators(&h) {
        return Err(violation(
            "equal diameter and cube size with different generators",
        ));
    }
    Ok(DominanceVerdict::TieIsTranslate)
}

/// Smallest lattice translation putting Σ[0, g] inside [0, k]^d: minus the
/// box corner Σ_g min(0, g).
pub fn translation_into_cube(z: &GeneratorSet) -> Vec<i64> {
    let mut corner = vec![0i64; z.d];
    for g in &z.generators {
        for (c, &x) in corner.iter_mut().zip(g.coords()) {
            *c += x.min(0);
        }
    }
    corner.into_iter().map(|c| -c).collect()
}
