//! Vertex–edge graph of a small zonotope Σ[0, g_i].
//!
//! Vertices correspond to the sign vectors s for which some direction c
//! satisfies s_i (g_i · c) > 0 for every i; the vertex maximizing c is
//! Σ_{s_i = +} g_i. Two vertices are adjacent exactly when their sign
//! vectors differ in one position. Feasibility of the strict homogeneous
//! system is decided exactly by Fourier–Motzkin elimination over ℤ.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Result, ZonolatError};
use crate::zonotope::GeneratorSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphCaps {
    pub max_generators: usize,
    pub max_dim: usize,
}

impl Default for GraphCaps {
    fn default() -> Self {
        Self {
            max_generators: 12,
            max_dim: 6,
        }
    }
}

/// One of {+, −} per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<bool>);

impl SignVector {
    /// `true` stands for +.
    pub fn new(plus: Vec<bool>) -> Self {
        Self(plus)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_plus(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn antipode(&self) -> Self {
        Self(self.0.iter().map(|s| !s).collect())
    }

    pub fn flip(&self, i: usize) -> Self {
        let mut s = self.0.clone();
        s[i] = !s[i];
        Self(s)
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    pub signs: SignVector,
    pub coords: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZonotopeGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<[usize; 2]>,
}

impl ZonotopeGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn index_of(&self, s: &SignVector) -> Option<usize> {
        self.vertices.iter().position(|v| &v.signs == s)
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        bfs(&self.adjacency(), source)
    }
}

fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Divide a row by the gcd of its entries so duplicates collapse.
fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Does some c satisfy row · c > 0 for every row?
pub fn strictly_feasible(rows: &[Vec<BigInt>]) -> bool {
    let Some(n) = rows.first().map(Vec::len) else {
        return true;
    };
    let mut current: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    let mut seen = HashSet::new();
    for r in rows {
        let mut r = r.clone();
        normalize(&mut r);
        if r.iter().all(Zero::is_zero) {
            return false;
        }
        if seen.insert(r.clone()) {
            current.push(r);
        }
    }
    for var in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in current {
            if r[var].is_positive() {
                pos.push(r);
            } else if r[var].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        // With one-sided coefficients, var can always be pushed far enough.
        if !pos.is_empty() && !neg.is_empty() {
            let mut seen: HashSet<Vec<BigInt>> = rest.iter().cloned().collect();
            for a in &pos {
                for b in &neg {
                    let wa = -&b[var];
                    let wb = &a[var];
                    let mut r: Vec<BigInt> =
                        a.iter().zip(b).map(|(x, y)| x * &wa + y * wb).collect();
                    normalize(&mut r);
                    if r.iter().all(Zero::is_zero) {
                        return false;
                    }
                    if seen.insert(r.clone()) {
                        rest.push(r);
                    }
                }
            }
        }
        current = rest;
    }
    current.is_empty()
}

fn check_caps(z: &GeneratorSet, caps: GraphCaps) -> Result<()> {
    if z.len() > caps.max_generators {
        return Err(ZonolatError::resource(format!(
            "{} generators exceed the graph cap of {}",
            z.len(),
            caps.max_generators
        )));
    }
    if z.d() > caps.max_dim {
        return Err(ZonolatError::resource(format!(
            "dimension {} exceeds the graph cap of {}",
            z.d(),
            caps.max_dim
        )));
    }
    Ok(())
}

/// Feasible sign vectors in lexicographic order (+ before −).
///
/// Infeasible prefixes are pruned: if the first j conditions already have no
/// common solution, no extension does either.
pub fn feasible_sign_vectors(z: &GeneratorSet, caps: GraphCaps) -> Result<Vec<SignVector>> {
    check_caps(z, caps)?;
    let gens: Vec<Vec<BigInt>> = z
        .generators()
        .iter()
        .map(|g| g.coords().iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut out = Vec::new();
    let mut prefix: Vec<bool> = Vec::with_capacity(gens.len());
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(gens.len());
    extend(&gens, &mut prefix, &mut rows, &mut out);
    Ok(out)
}

fn extend(
    gens: &[Vec<BigInt>],
    prefix: &mut Vec<bool>,
    rows: &mut Vec<Vec<BigInt>>,
    out: &mut Vec<SignVector>,
) {
    if prefix.len() == gens.len() {
        out.push(SignVector(prefix.clone()));
        return;
    }
    let g = &gens[prefix.len()];
    for plus in [true, false] {
        let row: Vec<BigInt> = if plus {
            g.clone()
        } else {
            g.iter().map(|x| -x).collect()
        };
        rows.push(row);
        if strictly_feasible(rows) {
            prefix.push(plus);
            extend(gens, prefix, rows, out);
            prefix.pop();
        }
        rows.pop();
    }
}

/// Vertex coordinates Σ_{s_i=+} g_i and Hamming-1 adjacency.
pub fn build_graph(z: &GeneratorSet, caps: GraphCaps) -> Result<ZonotopeGraph> {
    let signs = feasible_sign_vectors(z, caps)?;
    let index: HashMap<&SignVector, usize> =
        signs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut edges = Vec::new();
    for (i, s) in signs.iter().enumerate() {
        for pos in 0..s.len() {
            if let Some(&j) = index.get(&s.flip(pos)) {
                if i < j {
                    edges.push([i, j]);
                }
            }
        }
    }
    edges.sort_unstable();
    let vertices = signs
        .iter()
        .map(|s| {
            let mut coords = vec![0i64; z.d()];
            for (i, g) in z.generators().iter().enumerate() {
                if s.is_plus(i) {
                    for (c, x) in coords.iter_mut().zip(g.coords()) {
                        *c += x;
                    }
                }
            }
            GraphVertex {
                signs: s.clone(),
                coords,
            }
        })
        .collect();
    Ok(ZonotopeGraph { vertices, edges })
}

/// Largest BFS eccentricity; a disconnected graph is an invariant violation.
pub fn graph_diameter(g: &ZonotopeGraph) -> Result<usize> {
    let adj = g.adjacency();
    let mut diameter = 0;
    for source in 0..adj.len() {
        for d in bfs(&adj, source) {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => {
                    return Err(ZonolatError::invariant("zonotope graph is disconnected"));
                }
            }
        }
    }
    Ok(diameter)
}
