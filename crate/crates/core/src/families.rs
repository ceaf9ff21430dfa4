//! Constructors for the named extremal graphs.
//!
//! Vertex numbering is fixed so equitable partitions can be emitted alongside:
//!
//! | family | order |
//! |---|---|
//! | `star(m)` | centre `0`, leaves `1..=m` |
//! | `star_matching(n, k)` | centre `0`, matched leaves `1..=2k` paired `(1,2), (3,4), …`, then free leaves |
//! | `split_star(n, k)` | clique `0..k`, independent set `k..n` |
//! | `pendant_split_star(m, t)` | `v = 0`, `u = 1`, `R = 2..2+|R|`, then `T` |
//! | `theta(p, q, r)` | endpoints `0, 1`, then the interior of each path in turn |
//! | `complete_bipartite(a, b)` | side `A = 0..a`, side `B = a..a+b` |
//! | `double_star(i, j)` | centres `0, 1`, then the `i` leaves of `0`, then the `j` leaves of `1` |
//! | `star_with_path(m)` | hub `0`, path `1 - 2 - 3`, then the `m − 5` plain leaves |
//! | `bipartite_hub(t, s, r, ·)` | `v = 0`, star centre `1`, star leaves `2..2+r`, then `T`, then `S` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::Partition;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

/// `K_{1,m}`: the star with `m` edges.
pub fn star(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(invalid("star needs m >= 1"));
    }
    let edges: Vec<_> = (1..=m).map(|v| (0, v)).collect();
    Graph::from_edge_list(m + 1, &edges)
}

/// Star of order `n` with `k` disjoint edges among its leaves; size `n − 1 + k`.
pub fn star_matching(n: usize, k: usize) -> Result<Graph> {
    if n < 2 * k + 1 || n < 2 {
        return Err(invalid(format!("star_matching needs n >= 2k+1 and n >= 2, got n={n}, k={k}")));
    }
    let mut edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    edges.extend((0..k).map(|i| (2 * i + 1, 2 * i + 2)));
    Graph::from_edge_list(n, &edges)
}

/// `K_k ▽ K̄_{n−k}`: a `k`-clique joined to `n − k` independent vertices.
pub fn split_star(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || k > n {
        return Err(invalid(format!("split_star needs 1 <= k <= n, got n={n}, k={k}")));
    }
    let mut edges = Vec::new();
    for v in 0..k {
        for w in v + 1..n {
            edges.push((v, w));
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Number of `R` vertices of the pendant split star, or an error when `(m, t)`
/// is not a valid parameter pair.
pub fn pendant_split_star_r(m: usize, t: usize) -> Result<usize> {
    if t == 0 {
        return Err(invalid("pendant_split_star needs t >= 1"));
    }
    if m <= t + 1 {
        return Err(invalid(format!("pendant_split_star needs m > t + 1, got m={m}, t={t}")));
    }
    if (m - t).is_multiple_of(2) {
        return Err(invalid(format!("pendant_split_star needs m − t odd, got m={m}, t={t}")));
    }
    Ok((m - t - 1) / 2)
}

/// `F_{m,t}`: `S_{(m−t+3)/2, 2}` with `t` pendant vertices attached to one of
/// its two maximum-degree vertices. Edges `uv`, `v–R`, `u–R`, `v–T`; size `m`.
pub fn pendant_split_star(m: usize, t: usize) -> Result<Graph> {
    let r = pendant_split_star_r(m, t)?;
    let n = 2 + r + t;
    let mut edges = vec![(0, 1)];
    for w in 2..2 + r {
        edges.push((0, w));
        edges.push((1, w));
    }
    edges.extend((2 + r..n).map(|w| (0, w)));
    Graph::from_edge_list(n, &edges)
}

/// The partition `(T, {v}, {u}, R)` of [`pendant_split_star`].
pub fn pendant_split_star_partition(m: usize, t: usize) -> Result<Partition> {
    let r = pendant_split_star_r(m, t)?;
    Partition::new(2 + r + t, vec![(2 + r..2 + r + t).collect(), vec![0], vec![1], (2..2 + r).collect()])
}

/// `θ_{p,q,r}`: two endpoints joined by internally disjoint paths of lengths
/// `p ≤ q ≤ r`, with `q ≥ 2`.
pub fn theta(p: usize, q: usize, r: usize) -> Result<Graph> {
    if p == 0 || p > q || q > r || q < 2 {
        return Err(invalid(format!("theta needs 1 <= p <= q <= r and q >= 2, got ({p},{q},{r})")));
    }
    let n = p + q + r - 1;
    let mut edges = Vec::new();
    let mut next = 2;
    for len in [p, q, r] {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    Graph::from_edge_list(n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(invalid("complete_bipartite needs both sides non-empty"));
    }
    let mut edges = Vec::with_capacity(a * b);
    for x in 0..a {
        for y in a..a + b {
            edges.push((x, y));
        }
    }
    Graph::from_edge_list(a + b, &edges)
}

/// `D_{i,j}`: adjacent centres carrying `i` and `j` pendant leaves.
pub fn double_star(i: usize, j: usize) -> Result<Graph> {
    if i == 0 || j == 0 {
        return Err(invalid("double_star needs i, j >= 1"));
    }
    let mut edges = vec![(0, 1)];
    edges.extend((2..2 + i).map(|w| (0, w)));
    edges.extend((2 + i..2 + i + j).map(|w| (1, w)));
    Graph::from_edge_list(2 + i + j, &edges)
}

/// A star whose hub also sees a path `u₁ − u₂ − u₃` among its neighbours,
/// plus `m − 5` plain leaves. Size `m`, order `m − 1`.
pub fn star_with_path(m: usize) -> Result<Graph> {
    if m < 6 {
        return Err(invalid(format!("star_with_path needs m >= 6, got {m}")));
    }
    let n = m - 1;
    let mut edges: Vec<_> = (1..n).map(|w| (0, w)).collect();
    edges.push((1, 2));
    edges.push((2, 3));
    Graph::from_edge_list(n, &edges)
}

/// The partition `({hub}, {u₁}, {u₂}, {u₃}, leaves)` of [`star_with_path`].
pub fn star_with_path_partition(m: usize) -> Result<Partition> {
    if m < 6 {
        return Err(invalid(format!("star_with_path needs m >= 6, got {m}")));
    }
    Partition::new(m - 1, vec![vec![0], vec![1], vec![2], vec![3], (4..m - 1).collect()])
}

/// `H_{t,s} ∘ K_{1,r}`: a vertex `v` joined to every vertex of `K_{1,r}` and
/// to the `T` side of a bipartite graph between `T` (`t` vertices) and `S`
/// (`s` vertices). `bip_edges` lists `(T-index, S-index)` pairs.
pub fn bipartite_hub(t: usize, s: usize, r: usize, bip_edges: &[(usize, usize)]) -> Result<Graph> {
    if r == 0 || t == 0 {
        return Err(invalid("bipartite_hub needs r >= 1 and t >= 1"));
    }
    let t0 = 2 + r;
    let s0 = t0 + t;
    let n = s0 + s;
    let mut edges = Vec::new();
    for w in 1..2 + r {
        edges.push((0, w));
    }
    for w in 2..2 + r {
        edges.push((1, w));
    }
    for w in t0..s0 {
        edges.push((0, w));
    }
    for &(a, b) in bip_edges {
        if a >= t || b >= s {
            return Err(invalid(format!("bipartite edge ({a},{b}) outside T×S with t={t}, s={s}")));
        }
        edges.push((t0 + a, s0 + b));
    }
    Graph::from_edge_list(n, &edges)
}

/// [`bipartite_hub`] that also requires every `S` vertex to have degree at
/// least two, as the extremal candidates do.
pub fn bipartite_hub_strict(t: usize, s: usize, r: usize, bip_edges: &[(usize, usize)]) -> Result<Graph> {
    let g = bipartite_hub(t, s, r, bip_edges)?;
    let s0 = 2 + r + t;
    if let Some(w) = (s0..s0 + s).find(|&w| g.degree(w) < 2) {
        return Err(invalid(format!("S vertex {} has degree {}", w - s0, g.degree(w))));
    }
    Ok(g)
}

/// Which named family a [`FamilySpec`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "star", alias = "Star")]
    Star,
    #[serde(rename = "star_matching", alias = "StarMatching")]
    StarMatching,
    #[serde(rename = "split_star", alias = "SplitStar")]
    SplitStar,
    #[serde(rename = "F")]
    F,
    #[serde(rename = "theta", alias = "Theta")]
    Theta,
    #[serde(rename = "complete_bipartite", alias = "CompleteBipartite")]
    CompleteBipartite,
    #[serde(rename = "double_star", alias = "DoubleStar")]
    DoubleStar,
    #[serde(rename = "H")]
    StarWithPath,
    #[serde(rename = "Hts", alias = "HtsK1r")]
    BipartiteHub,
}

/// Integer parameters of a family. Only the ones the family uses may be set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
}

/// A family together with its parameters; the JSON form is
/// `{"family": "F", "params": {"m": 23, "t": 2}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: FamilyKind,
    #[serde(default)]
    pub params: FamilyParams,
}

impl FamilySpec {
    pub fn from_json(s: &str) -> Result<FamilySpec> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("FamilySpec serializes")
    }

    fn get(&self, name: &str, v: Option<usize>) -> Result<usize> {
        v.ok_or_else(|| invalid(format!("family {:?} needs parameter `{name}`", self.family)))
    }

    pub fn build(&self) -> Result<Graph> {
        let p = &self.params;
        match self.family {
            FamilyKind::Star => star(self.get("m", p.m)?),
            FamilyKind::StarMatching => star_matching(self.get("n", p.n)?, self.get("k", p.k)?),
            FamilyKind::SplitStar => split_star(self.get("n", p.n)?, self.get("k", p.k)?),
            FamilyKind::F => pendant_split_star(self.get("m", p.m)?, self.get("t", p.t)?),
            FamilyKind::Theta => theta(self.get("p", p.p)?, self.get("q", p.q)?, self.get("r", p.r)?),
            FamilyKind::CompleteBipartite => complete_bipartite(self.get("a", p.a)?, self.get("b", p.b)?),
            FamilyKind::DoubleStar => double_star(self.get("i", p.i)?, self.get("j", p.j)?),
            FamilyKind::StarWithPath => star_with_path(self.get("m", p.m)?),
            FamilyKind::BipartiteHub => bipartite_hub(
                self.get("t", p.t)?,
                p.s.unwrap_or(0),
                self.get("r", p.r)?,
                p.edges.as_deref().unwrap_or(&[]),
            ),
        }
    }

    /// The documented equitable partition of the family, when it has one.
    pub fn partition(&self) -> Result<Option<Partition>> {
        let p = &self.params;
        let part = match self.family {
            FamilyKind::Star => {
                let m = self.get("m", p.m)?;
                Some(Partition::new(m + 1, vec![vec![0], (1..=m).collect()])?)
            }
            FamilyKind::StarMatching => {
                let (n, k) = (self.get("n", p.n)?, self.get("k", p.k)?);
                star_matching(n, k)?;
                let mut blocks = vec![vec![0]];
                if k > 0 {
                    blocks.push((1..=2 * k).collect());
                }
                if 2 * k + 1 < n {
                    blocks.push((2 * k + 1..n).collect());
                }
                Some(Partition::new(n, blocks)?)
            }
            FamilyKind::SplitStar => {
                let (n, k) = (self.get("n", p.n)?, self.get("k", p.k)?);
                split_star(n, k)?;
                let mut blocks = vec![(0..k).collect::<Vec<_>>()];
                if k < n {
                    blocks.push((k..n).collect());
                }
                Some(Partition::new(n, blocks)?)
            }
            FamilyKind::F => Some(pendant_split_star_partition(self.get("m", p.m)?, self.get("t", p.t)?)?),
            FamilyKind::CompleteBipartite => {
                let (a, b) = (self.get("a", p.a)?, self.get("b", p.b)?);
                complete_bipartite(a, b)?;
                Some(Partition::new(a + b, vec![(0..a).collect(), (a..a + b).collect()])?)
            }
            FamilyKind::DoubleStar => {
                let (i, j) = (self.get("i", p.i)?, self.get("j", p.j)?);
                double_star(i, j)?;
                Some(Partition::new(
                    2 + i + j,
                    vec![vec![0], vec![1], (2..2 + i).collect(), (2 + i..2 + i + j).collect()],
                )?)
            }
            FamilyKind::StarWithPath => Some(star_with_path_partition(self.get("m", p.m)?)?),
            FamilyKind::Theta | FamilyKind::BipartiteHub => None,
        };
        Ok(part)
    }
}
