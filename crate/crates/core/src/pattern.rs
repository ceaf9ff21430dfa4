//! Forbidden-subgraph detection (containment as a subgraph, not induced).
//!
//! `K_{2,r+1}` and `θ_{1,2,3}` have dedicated bitset checkers. Anything else
//! goes through [`contains_subgraph`], a backtracking matcher that also serves
//! as the oracle for the dedicated checkers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};
use crate::graph6;

/// A forbidden pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternId {
    /// No restriction; every graph is free.
    None,
    /// `K_{2,r+1}`, with `r ≥ 1`.
    K2R1(usize),
    /// `θ_{1,2,3}`: a 5-cycle plus one chord.
    Theta123,
    /// Any other graph, matched by backtracking.
    Generic(Graph),
}

impl PatternId {
    pub fn k2r1(r: usize) -> Result<PatternId> {
        if r == 0 {
            return Err(Error::Pattern("k2r1:0".into()));
        }
        Ok(PatternId::K2R1(r))
    }

    /// Whether `g` contains the pattern.
    pub fn is_contained_in(&self, g: &Graph) -> bool {
        match self {
            PatternId::None => false,
            PatternId::K2R1(r) => contains_k2r1(g, *r),
            PatternId::Theta123 => contains_theta123(g),
            PatternId::Generic(f) => contains_subgraph(g, f),
        }
    }

    pub fn is_free(&self, g: &Graph) -> bool {
        !self.is_contained_in(g)
    }

    /// The pattern as a graph (`None` for the unrestricted pattern).
    pub fn graph(&self) -> Option<Graph> {
        match self {
            PatternId::None => None,
            PatternId::K2R1(r) => Some(crate::families::complete_bipartite(2, r + 1).expect("r >= 1")),
            PatternId::Theta123 => Some(crate::families::theta(1, 2, 3).expect("valid theta")),
            PatternId::Generic(f) => Some(f.clone()),
        }
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternId::None => f.write_str("none"),
            PatternId::K2R1(r) => write!(f, "k2r1:{r}"),
            PatternId::Theta123 => f.write_str("theta123"),
            PatternId::Generic(g) => f.write_str(&graph6::encode(g)),
        }
    }
}

impl FromStr for PatternId {
    type Err = Error;

    /// Accepts `none`, `k2r1:<r>`, `theta123`, `g6:<graph6>` or a bare graph6 string.
    fn from_str(s: &str) -> Result<PatternId> {
        let s = s.trim();
        if s == "none" {
            return Ok(PatternId::None);
        }
        if s == "theta123" {
            return Ok(PatternId::Theta123);
        }
        if let Some(r) = s.strip_prefix("k2r1:") {
            let r: usize = r.parse().map_err(|_| Error::Pattern(s.into()))?;
            return PatternId::k2r1(r);
        }
        let body = s.strip_prefix("g6:").unwrap_or(s);
        graph6::decode(body).map(PatternId::Generic).map_err(|_| Error::Pattern(s.into()))
    }
}

impl Serialize for PatternId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PatternId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff two distinct vertices share at least `r + 1` neighbours.
pub fn contains_k2r1(g: &Graph, r: usize) -> bool {
    let n = g.n();
    for u in 0..n {
        if g.degree(u) <= r {
            continue;
        }
        for v in u + 1..n {
            if g.common_neighbors(u, v) > r {
                return true;
            }
        }
    }
    false
}

/// True iff `g` contains `θ_{1,2,3}`: an edge `ab`, a common neighbour `w`,
/// and a path `a − x − y − b` avoiding `w`.
pub fn contains_theta123(g: &Graph) -> bool {
    theta_within(g, None)
}

/// Theta search restricted to the vertices in `mask`.
fn theta_within(g: &Graph, mask: Option<&[u64]>) -> bool {
    if g.n() < 5 {
        return false;
    }
    let words = g.row(0).len();
    let mut na = vec![0u64; words];
    let mut nb = vec![0u64; words];
    let mut common = vec![0u64; words];
    let in_mask = |v: usize| mask.is_none_or(|m| bits::contains(m, v));
    for a in 0..g.n() {
        if !in_mask(a) || g.degree(a) < 3 {
            continue;
        }
        na.copy_from_slice(g.row(a));
        if let Some(m) = mask {
            na.iter_mut().zip(m).for_each(|(x, y)| *x &= y);
        }
        for b in bits::ones(g.row(a)).filter(|&b| b > a) {
            if !in_mask(b) || g.degree(b) < 3 {
                continue;
            }
            nb.copy_from_slice(g.row(b));
            if let Some(m) = mask {
                nb.iter_mut().zip(m).for_each(|(x, y)| *x &= y);
            }
            for ((c, x), y) in common.iter_mut().zip(&na).zip(&nb) {
                *c = x & y;
            }
            for w in bits::ones(&common) {
                // x ∈ N(a) ∖ {b, w}; y ∈ N(x) ∩ N(b) ∖ {a, w}
                for x in bits::ones(&na) {
                    if x == b || x == w {
                        continue;
                    }
                    let hit = bits::ones(g.row(x)).any(|y| y != a && y != w && bits::contains(&nb, y));
                    if hit {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// True iff `f` is isomorphic to a (not necessarily induced) subgraph of `g`.
pub fn contains_subgraph(g: &Graph, f: &Graph) -> bool {
    if f.n() > g.n() || f.size() > g.size() {
        return false;
    }
    if f.n() == 0 {
        return true;
    }
    // pattern order: start from a max-degree vertex, then always take the
    // vertex with most already-placed neighbours
    let fd = f.degrees();
    let mut order = Vec::with_capacity(f.n());
    let mut placed = vec![false; f.n()];
    while order.len() < f.n() {
        let next = (0..f.n())
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = order.iter().filter(|&&u| f.has_edge(u, v)).count();
                (back, fd[v], std::cmp::Reverse(v))
            })
            .expect("unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    let back: Vec<Vec<usize>> =
        order.iter().enumerate().map(|(i, &v)| (0..i).filter(|&j| f.has_edge(order[j], v)).collect()).collect();
    let gd = g.degrees();
    let mut sorted_fd: Vec<usize> = fd.clone();
    sorted_fd.sort_unstable_by(|a, b| b.cmp(a));
    let mut sorted_gd = gd.clone();
    sorted_gd.sort_unstable_by(|a, b| b.cmp(a));
    if sorted_fd.iter().zip(&sorted_gd).any(|(a, b)| a > b) {
        return false;
    }
    let mut image = vec![usize::MAX; f.n()];
    let mut used = vec![0u64; bits::words_for(g.n())];
    let mut m = Matcher { g, order: &order, back: &back, fd: &fd, gd: &gd };
    m.extend(0, &mut image, &mut used)
}

struct Matcher<'a> {
    g: &'a Graph,
    order: &'a [usize],
    back: &'a [Vec<usize>],
    fd: &'a [usize],
    gd: &'a [usize],
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize, image: &mut [usize], used: &mut [u64]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let need = self.fd[self.order[depth]];
        let words = used.len();
        let mut cand = vec![!0u64; words];
        match self.g.n() % 64 {
            0 => {}
            e => cand[words - 1] = (1u64 << e) - 1,
        }
        for &j in &self.back[depth] {
            let row = self.g.row(image[j]);
            cand.iter_mut().zip(row).for_each(|(c, r)| *c &= r);
        }
        cand.iter_mut().zip(used.iter()).for_each(|(c, u)| *c &= !u);
        let candidates: Vec<usize> = bits::ones(&cand).filter(|&v| self.gd[v] >= need).collect();
        for v in candidates {
            image[depth] = v;
            bits::set(used, v);
            if self.extend(depth + 1, image, used) {
                return true;
            }
            bits::clear(used, v);
        }
        image[depth] = usize::MAX;
        false
    }
}

/// Whether `g + new_edge` is still free of `pattern`, given that `g` is.
///
/// Only occurrences through the new edge are examined: a `K_{2,r+1}` can only
/// appear on a pair that gained a common neighbour, and any `θ_{1,2,3}` through
/// the edge lies within distance two of both endpoints.
pub fn incremental_free_check(g: &Graph, new_edge: (usize, usize), pattern: &PatternId) -> Result<bool> {
    let (p, q) = new_edge;
    let h = g.with_edge(p, q)?;
    Ok(match pattern {
        PatternId::None => true,
        PatternId::K2R1(r) => {
            let clash = |a: usize, b: usize| h.neighbors(b).filter(|&z| z != a).any(|z| h.common_neighbors(a, z) > *r);
            !clash(p, q) && !clash(q, p)
        }
        PatternId::Theta123 => {
            if h.degree(p) < 2 || h.degree(q) < 2 {
                return Ok(true);
            }
            let ball_p = ball2(&h, p);
            let ball_q = ball2(&h, q);
            let mask: Vec<u64> = ball_p.iter().zip(&ball_q).map(|(a, b)| a & b).collect();
            !theta_within(&h, Some(&mask))
        }
        PatternId::Generic(f) => !contains_subgraph(&h, f),
    })
}

fn ball2(g: &Graph, v: usize) -> Vec<u64> {
    let mut ball = g.row(v).to_vec();
    for w in g.neighbors(v) {
        ball.iter_mut().zip(g.row(w)).for_each(|(b, r)| *b |= r);
    }
    bits::set(&mut ball, v);
    ball
}
