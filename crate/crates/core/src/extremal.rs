//! δ_z(d,k), the largest diameter of a lattice zonotope inside [0,k]^d.
//!
//! At k = k(H_1(d,p)) the answer is δ(H_1(d,p)) and the optimum is unique.
//! For tiny (d,k) an exhaustive branch-and-bound provides an independent
//! answer to compare against.

use serde::Serialize;

use crate::error::{Result, ZonolatError};
use crate::number_theory::gcd_all;
use crate::primitive_points::{is_canonical, EnumerationCaps, LatticeVector, QNorm};
use crate::zonotope::{primitive_zonotope_metrics, GeneratorSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecialDeltaZ {
    pub d: usize,
    pub p: u64,
    pub k: u64,
    pub delta_z: u64,
}

/// (k(H_1(d,p)), δ(H_1(d,p))), which is exactly δ_z(d, k) at that k.
pub fn special_delta_z(d: usize, p: u64, caps: EnumerationCaps) -> Result<SpecialDeltaZ> {
    if d < 2 || p < 1 {
        return Err(ZonolatError::domain("special radii need d ≥ 2 and p ≥ 1"));
    }
    let m = primitive_zonotope_metrics(d, p, QNorm::One, false, caps)?;
    let as_u64 = |x: &num_bigint::BigUint| {
        u64::try_from(x).map_err(|_| ZonolatError::resource("metric exceeds 64 bits"))
    };
    Ok(SpecialDeltaZ {
        d,
        p,
        k: as_u64(&m.k)?,
        delta_z: as_u64(&m.diameter)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_d: usize,
    pub max_k: u64,
    pub node_cap: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_d: 2,
            max_k: 9,
            node_cap: 1_000_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    pub d: usize,
    pub k: u64,
    pub best_count: usize,
    pub optimal_sets: Vec<GeneratorSet>,
    pub search_exhaustive: bool,
    pub nodes: u64,
}

impl ExtremalResult {
    pub fn is_unique(&self) -> bool {
        self.optimal_sets.len() == 1
    }
}

/// Canonical primitive vectors with every |coordinate| ≤ k, sorted by
/// 1-norm then lexicographically. Any non-primitive generator can be swapped
/// for its primitive part without shrinking the set or widening any side.
fn candidate_pool(d: usize, k: u64) -> Vec<LatticeVector> {
    let k = k as i64;
    let side = (2 * k + 1) as usize;
    let mut out = Vec::new();
    let mut x = vec![-k; d];
    for _ in 0..side.pow(d as u32) {
        if is_canonical(&x) && gcd_all(&x) == 1 {
            out.push(LatticeVector(x.clone()));
        }
        for c in x.iter_mut().rev() {
            if *c < k {
                *c += 1;
                break;
            }
            *c = -k;
        }
    }
    out.sort_by(|a, b| a.l1_norm().cmp(&b.l1_norm()).then_with(|| a.cmp(b)));
    out
}

struct Search<'a> {
    k: u64,
    pool: &'a [LatticeVector],
    norms: Vec<u64>,
    // prefix[i] = Σ_{j<i} norms[j]
    prefix: Vec<u64>,
    budget: u64,
    widths: Vec<u64>,
    chosen: Vec<usize>,
    used: u64,
    best: usize,
    optima: Vec<Vec<usize>>,
    nodes: u64,
    node_cap: u64,
    aborted: bool,
}

impl Search<'_> {
    /// Most items still addable from index i on: the cheapest ones come first.
    fn bound(&self, i: usize) -> usize {
        let room = self.budget - self.used;
        let base = self.prefix[i];
        // Largest t with prefix[i+t] − prefix[i] ≤ room.
        let end = self.prefix[i..].partition_point(|&s| s - base <= room);
        end.saturating_sub(1)
    }

    fn record(&mut self) {
        let n = self.chosen.len();
        if n > self.best {
            self.best = n;
            self.optima.clear();
        }
        if n == self.best {
            self.optima.push(self.chosen.clone());
        }
    }

    fn fits(&self, idx: usize) -> bool {
        self.widths
            .iter()
            .zip(self.pool[idx].coords())
            .all(|(w, c)| w + c.unsigned_abs() <= self.k)
    }

    fn apply(&mut self, idx: usize, sign: i64) {
        for (w, c) in self.widths.iter_mut().zip(self.pool[idx].coords()) {
            if sign > 0 {
                *w += c.unsigned_abs();
            } else {
                *w -= c.unsigned_abs();
            }
        }
        if sign > 0 {
            self.used += self.norms[idx];
            self.chosen.push(idx);
        } else {
            self.used -= self.norms[idx];
            self.chosen.pop();
        }
    }

    /// Extends the current set with items from index `start` on. Each subset
    /// is recorded exactly once, when its last item is added.
    fn descend(&mut self, start: usize) {
        for idx in start..self.pool.len() {
            if self.aborted {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.node_cap {
                self.aborted = true;
                return;
            }
            // Remaining items from idx on, cheapest first, cannot reach the best.
            if self.chosen.len() + self.bound(idx) < self.best {
                return;
            }
            if self.used + self.norms[idx] > self.budget {
                return;
            }
            if !self.fits(idx) {
                continue;
            }
            self.apply(idx, 1);
            self.record();
            self.descend(idx + 1);
            self.apply(idx, -1);
        }
    }
}

/// Every maximum-cardinality set of pairwise non-collinear lattice vectors
/// whose zonotope fits in [0,k]^d, found by exhaustive branch-and-bound.
///
/// The generator 1-norms sum to the sum of the box widths, so at most k·d;
/// the bound counts how many of the cheapest remaining candidates still fit
/// that total. If the node cap is hit the best sets found so far are
/// returned with `search_exhaustive = false`.
pub fn brute_force_delta_z(d: usize, k: u64, caps: SearchCaps) -> Result<ExtremalResult> {
    if d < 1 || k < 1 {
        return Err(ZonolatError::domain("search needs d ≥ 1 and k ≥ 1"));
    }
    if d > caps.max_d || k > caps.max_k {
        return Err(ZonolatError::resource(format!(
            "search over d = {d}, k = {k} exceeds the caps d ≤ {}, k ≤ {}",
            caps.max_d, caps.max_k
        )));
    }
    let pool = candidate_pool(d, k);
    let norms: Vec<u64> = pool.iter().map(LatticeVector::l1_norm).collect();
    let mut prefix = Vec::with_capacity(norms.len() + 1);
    prefix.push(0);
    for n in &norms {
        prefix.push(prefix.last().unwrap() + n);
    }
    let mut search = Search {
        k,
        pool: &pool,
        norms,
        prefix,
        budget: k * d as u64,
        widths: vec![0; d],
        chosen: Vec::new(),
        used: 0,
        best: 0,
        optima: vec![Vec::new()],
        nodes: 0,
        node_cap: caps.node_cap,
        aborted: false,
    };
    search.descend(0);

    let mut optimal_sets = search
        .optima
        .iter()
        .map(|idxs| {
            let mut gens: Vec<LatticeVector> = idxs.iter().map(|&i| pool[i].clone()).collect();
            gens.sort();
            GeneratorSet::new(d, gens)
        })
        .collect::<Result<Vec<_>>>()?;
    optimal_sets.sort_by(|a, b| a.generators().cmp(b.generators()));
    Ok(ExtremalResult {
        d,
        k,
        best_count: search.best,
        optimal_sets,
        search_exhaustive: !search.aborted,
        nodes: search.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonotope::{build_h, metrics};

    fn set(d: usize, v: &[&[i64]]) -> GeneratorSet {
        let mut g: Vec<LatticeVector> = v.iter().map(|c| LatticeVector(c.to_vec())).collect();
        g.sort();
        GeneratorSet::new(d, g).unwrap()
    }

    #[test]
    fn special_radii() {
        let caps = EnumerationCaps::default();
        let s = |d, p| {
            let r = special_delta_z(d, p, caps).unwrap();
            (r.k, r.delta_z)
        };
        assert_eq!(s(2, 2), (3, 4));
        assert_eq!(s(2, 3), (9, 8));
        assert_eq!(s(3, 2), (5, 9));
    }

    #[test]
    fn brute_force_small_cubes() {
        let r = brute_force_delta_z(2, 1, SearchCaps::default()).unwrap();
        assert_eq!(r.best_count, 2);
        assert_eq!(r.optimal_sets, vec![set(2, &[&[0, 1], &[1, 0]])]);
        assert!(r.search_exhaustive);

        let r = brute_force_delta_z(2, 2, SearchCaps::default()).unwrap();
        assert_eq!(r.best_count, 3);
        assert!(r
            .optimal_sets
            .contains(&set(2, &[&[1, 0], &[0, 1], &[1, 1]])));
        for z in &r.optimal_sets {
            assert!(metrics(z).k <= 2u32.into());
        }

        let r = brute_force_delta_z(2, 3, SearchCaps::default()).unwrap();
        assert_eq!(r.best_count, 4);
        let h = build_h(2, 2, QNorm::One, EnumerationCaps::default()).unwrap();
        assert!(r.is_unique() && r.optimal_sets[0].same_generators(&h));
    }

    #[test]
    fn brute_force_is_monotone_in_k() {
        let mut last = 0;
        for k in 1..=6 {
            let r = brute_force_delta_z(2, k, SearchCaps::default()).unwrap();
            assert!(r.best_count >= last);
            last = r.best_count;
        }
    }

    #[test]
    fn brute_force_matches_plain_enumeration_for_tiny_cubes() {
        // All subsets of the pool, no pruning.
        for k in 1..=3u64 {
            let pool = candidate_pool(2, k);
            let pool: Vec<_> = pool.into_iter().filter(|v| v.l1_norm() <= 2 * k).collect();
            assert!(pool.len() < 24);
            let mut best = 0;
            let mut count_best = 0;
            for mask in 0u32..(1 << pool.len()) {
                let mut w = [0u64; 2];
                for (i, v) in pool.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        w[0] += v.coords()[0].unsigned_abs();
                        w[1] += v.coords()[1].unsigned_abs();
                    }
                }
                if w[0] <= k && w[1] <= k {
                    let n = mask.count_ones();
                    if n > best {
                        best = n;
                        count_best = 0;
                    }
                    if n == best {
                        count_best += 1;
                    }
                }
            }
            let r = brute_force_delta_z(2, k, SearchCaps::default()).unwrap();
            assert_eq!(
                (r.best_count as u32, r.optimal_sets.len()),
                (best, count_best),
                "k={k}"
            );
        }
    }

    #[test]
    fn node_cap_reports_non_exhaustive() {
        let caps = SearchCaps {
            node_cap: 10,
            ..SearchCaps::default()
        };
        let r = brute_force_delta_z(2, 5, caps).unwrap();
        assert!(!r.search_exhaustive);
    }

    #[test]
    fn caps_reject_large_instances() {
        assert!(matches!(
            brute_force_delta_z(3, 2, SearchCaps::default()),
            Err(ZonolatError::Resource(_))
        ));
        assert!(matches!(
            brute_force_delta_z(2, 10, SearchCaps::default()),
            Err(ZonolatError::Resource(_))
        ));
    }

    #[test]
    fn three_dimensional_unit_cube() {
        let caps = SearchCaps {
            max_d: 3,
            ..SearchCaps::default()
        };
        let r = brute_force_delta_z(3, 1, caps).unwrap();
        assert_eq!(r.best_count, 3);
        assert!(r.is_unique());
    }
}
