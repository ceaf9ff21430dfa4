//! Extremal search over connected pattern-free graphs with a fixed edge count.
//!
//! [`enumerate_free`] grows graphs one edge at a time from `K_2`. Each step
//! either joins two existing vertices or hangs a pendant vertex, keeps only
//! children that stay pattern-free, and deduplicates by canonical code. Every
//! connected graph with `m + 1` edges has an edge whose removal leaves a
//! connected graph with `m` edges (a non-bridge, or the edge to a leaf), and
//! subgraphs of free graphs are free, so the levels are complete.
//!
//! [`hill_climb`] covers sizes beyond exhaustive reach: it moves one edge at a
//! time and only accepts strict improvements of the spectral radius.

use std::collections::HashSet;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalCode};
use crate::error::{Error, Result};
use crate::families;
use crate::graph::{Graph, MAX_VERTICES};
use crate::graph6;
use crate::pattern::{incremental_free_check, PatternId};
use crate::spectral::{spectral_radius, spectral_radius_from};

/// Edge counts accepted by the exhaustive search.
pub const ENVELOPE: (usize, usize) = (1, 12);
/// Graphs within this distance of the maximum are all reported.
pub const TIE_BAND: f64 = 1e-9;
/// A hill-climbing move must raise ρ by more than this.
pub const MIN_IMPROVEMENT: f64 = 1e-12;
/// Largest edge count accepted by [`hill_climb`].
pub const HILL_CLIMB_MAX_M: usize = 500;
/// Reruns must agree with a cached `max_rho` to this accuracy.
pub const CACHE_TOL: f64 = 1e-12;

/// A graph to leave out of the maximum, given by name or explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// `K_{1,m}`.
    Star,
    /// `K_2 ▽ K̄_{(m−1)/2}`, which has size `m` only for odd `m`.
    SplitStar,
    Graph(Graph),
}

impl Exclusion {
    /// Canonical code of the excluded graph at size `m`, if it has that size.
    pub fn resolve(&self, m: usize) -> Result<Option<CanonicalCode>> {
        let g = match self {
            Exclusion::Star => families::star(m)?,
            Exclusion::SplitStar => {
                if m.is_multiple_of(2) || m < 3 {
                    return Ok(None);
                }
                families::split_star(m.div_ceil(2) + 1, 2)?
            }
            Exclusion::Graph(g) => g.clone(),
        };
        Ok((g.size() == m).then(|| canonical_form(&g)))
    }
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exclusion::Star => f.write_str("star"),
            Exclusion::SplitStar => f.write_str("split-star"),
            Exclusion::Graph(g) => write!(f, "g6:{}", graph6::encode(g)),
        }
    }
}

impl FromStr for Exclusion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Exclusion> {
        match s.trim() {
            "star" => Ok(Exclusion::Star),
            "split-star" => Ok(Exclusion::SplitStar),
            other => match other.strip_prefix("g6:") {
                Some(body) => Ok(Exclusion::Graph(graph6::decode(body)?)),
                None => Err(Error::InvalidParameters(format!("unknown exclusion `{other}`"))),
            },
        }
    }
}

/// Parses a comma-separated exclusion list; `none` (or empty) means no exclusions.
pub fn parse_exclusions(s: &str) -> Result<Vec<Exclusion>> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

/// Resolves exclusions at size `m`, dropping those that do not have `m` edges.
pub fn resolve_exclusions(list: &[Exclusion], m: usize) -> Result<Vec<CanonicalCode>> {
    let mut out = Vec::new();
    for e in list {
        if let Some(code) = e.resolve(m)? {
            out.push(code);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Result of an exhaustive or heuristic extremal search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub m: usize,
    pub pattern: PatternId,
    pub exclusions: Vec<CanonicalCode>,
    /// Exhaustive: isomorphism classes visited, excluded ones included.
    /// Heuristic: distinct local optima reached.
    pub enumerated: usize,
    /// How many of those were in `exclusions`.
    pub excluded: usize,
    pub max_rho: f64,
    /// Canonical graph6 strings within `tie_band` of `max_rho`.
    pub argmax: Vec<String>,
    pub tie_band: f64,
    /// Largest ρ over connected free graphs with fewer edges. A disconnected
    /// free graph with `m` edges has the spectral radius of one of its
    /// components, so the answer over all of them is the larger of this and
    /// `max_rho`. Exhaustive reports only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rho_fewer_edges: Option<f64>,
    pub heuristic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    pub runtime_ms: u64,
}

impl SearchReport {
    pub fn argmax_graphs(&self) -> Result<Vec<Graph>> {
        self.argmax.iter().map(|s| graph6::decode(s)).collect()
    }

    /// Identifies reports that must agree on `max_rho`.
    pub fn cache_key(&self) -> String {
        cache_key(self.m, &self.pattern, &self.exclusions, self.heuristic.then_some((self.seed, self.restarts)))
    }
}

fn cache_key(
    m: usize,
    pattern: &PatternId,
    exclusions: &[CanonicalCode],
    heuristic: Option<(Option<u64>, Option<usize>)>,
) -> String {
    let excl: Vec<&str> = exclusions.iter().map(|c| c.as_graph6()).collect();
    let mut key = serde_json::json!({ "m": m, "pattern": pattern.to_string(), "exclusions": excl });
    if let Some((seed, restarts)) = heuristic {
        key["seed"] = serde_json::json!(seed);
        key["restarts"] = serde_json::json!(restarts);
    }
    key.to_string()
}

fn check_envelope(m: usize) -> Result<()> {
    if m < ENVELOPE.0 || m > ENVELOPE.1 {
        return Err(Error::OutsideEnvelope { m, lo: ENVELOPE.0, hi: ENVELOPE.1 });
    }
    Ok(())
}

/// Canonical codes of the free one-edge extensions of `g`.
fn children(g: &Graph, pattern: &PatternId) -> Vec<CanonicalCode> {
    let n = g.n();
    let mut out = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if !g.has_edge(u, v) && incremental_free_check(g, (u, v), pattern).unwrap_or(false) {
                out.push(canonical_form(&g.with_edge(u, v).expect("non-edge")));
            }
        }
    }
    if n < MAX_VERTICES {
        let h = g.with_vertex().expect("below vertex cap");
        for u in 0..n {
            if incremental_free_check(&h, (u, n), pattern).unwrap_or(false) {
                out.push(canonical_form(&h.with_edge(u, n).expect("new vertex")));
            }
        }
    }
    out
}

/// The sorted canonical codes of every level `1..=m`.
fn levels(m: usize, pattern: &PatternId) -> Vec<Vec<CanonicalCode>> {
    let k2 = Graph::complete(2).expect("K2");
    let mut current = if pattern.is_free(&k2) { vec![canonical_form(&k2)] } else { Vec::new() };
    let mut out = vec![current.clone()];
    for _ in 1..m {
        let seen = current
            .par_iter()
            .fold(HashSet::new, |mut set, code| {
                set.extend(children(&code.to_graph(), pattern));
                set
            })
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            });
        let mut next: Vec<CanonicalCode> = seen.into_iter().collect();
        next.par_sort_unstable();
        current = next;
        out.push(current.clone());
    }
    out
}

/// Canonical codes of every connected `pattern`-free graph with `m` edges, sorted.
pub fn enumerate_free_codes(m: usize, pattern: &PatternId) -> Result<Vec<CanonicalCode>> {
    check_envelope(m)?;
    Ok(levels(m, pattern).pop().unwrap_or_default())
}

/// Visits one canonical representative of each isomorphism class of connected
/// `pattern`-free graphs with `m` edges (so no isolated vertices), in code
/// order, and returns how many there were.
pub fn enumerate_free(m: usize, pattern: &PatternId, mut visitor: impl FnMut(&Graph)) -> Result<usize> {
    let codes = enumerate_free_codes(m, pattern)?;
    for code in &codes {
        visitor(&code.to_graph());
    }
    Ok(codes.len())
}

/// `(ρ, codes within TIE_BAND)` over the given classes, or `None` if empty.
fn best_of(rhos: &[(f64, &CanonicalCode)]) -> Option<(f64, Vec<String>)> {
    let max = rhos.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    if rhos.is_empty() {
        return None;
    }
    let mut arg: Vec<String> =
        rhos.iter().filter(|r| r.0 >= max - TIE_BAND).map(|r| r.1.as_graph6().to_string()).collect();
    arg.sort();
    Some((max, arg))
}

fn rho_of_codes(codes: &[CanonicalCode]) -> Result<Vec<f64>> {
    codes.par_iter().map(|c| Ok(spectral_radius(&c.to_graph())?.rho)).collect()
}

/// Exhaustive maximum of ρ over connected `pattern`-free graphs with `m`
/// edges, leaving out the classes in `exclusions`.
pub fn extremal_search(m: usize, pattern: &PatternId, exclusions: &[CanonicalCode]) -> Result<SearchReport> {
    check_envelope(m)?;
    let start = Instant::now();
    let mut exclusions = exclusions.to_vec();
    exclusions.sort();
    exclusions.dedup();

    let mut levels = levels(m, pattern);
    let top = levels.pop().unwrap_or_default();
    let mut fewer: Option<f64> = None;
    for level in &levels {
        for r in rho_of_codes(level)? {
            fewer = Some(fewer.map_or(r, |f| f.max(r)));
        }
    }

    let rhos = rho_of_codes(&top)?;
    let kept: Vec<(f64, &CanonicalCode)> =
        rhos.iter().copied().zip(&top).filter(|(_, c)| exclusions.binary_search(c).is_err()).collect();
    let (max_rho, argmax) = best_of(&kept).unwrap_or((0.0, Vec::new()));
    Ok(SearchReport {
        m,
        pattern: pattern.clone(),
        excluded: top.len() - kept.len(),
        exclusions,
        enumerated: top.len(),
        max_rho,
        argmax,
        tie_band: TIE_BAND,
        max_rho_fewer_edges: fewer,
        heuristic: false,
        seed: None,
        restarts: None,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Exclusion test that compares degree sequences before canonical codes.
struct Excluded {
    codes: Vec<CanonicalCode>,
    degrees: Vec<Vec<usize>>,
}

impl Excluded {
    fn new(codes: &[CanonicalCode]) -> Excluded {
        Excluded { codes: codes.to_vec(), degrees: codes.iter().map(|c| c.to_graph().degree_sequence()).collect() }
    }

    fn contains(&self, g: &Graph) -> bool {
        let ds = g.degree_sequence();
        if !self.degrees.contains(&ds) {
            return false;
        }
        let code = canonical_form(g);
        self.codes.contains(&code)
    }
}

/// One move: drop an edge, then add a new edge or a pendant vertex.
#[derive(Clone, Copy, Debug)]
enum Move {
    Edge { drop: (usize, usize), add: (usize, usize) },
    Pendant { drop: (usize, usize), at: usize },
}

fn moves(g: &Graph) -> Vec<Move> {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut out = Vec::new();
    for &drop in &edges {
        for v in 1..n {
            for u in 0..v {
                if !g.has_edge(u, v) {
                    out.push(Move::Edge { drop, add: (u, v) });
                }
            }
        }
        for at in 0..n {
            out.push(Move::Pendant { drop, at });
        }
    }
    out
}

/// Applies `mv` if the result is connected and free. Returns the new graph
/// and a positive start vector for its power iteration, built from `x`.
fn apply(g: &Graph, x: &[f64], mv: Move, pattern: &PatternId) -> Option<(Graph, Vec<f64>)> {
    let (base, add, fresh) = match mv {
        Move::Edge { drop, add } => (g.without_edge(drop.0, drop.1).ok()?, add, false),
        Move::Pendant { drop, at } => {
            let h = g.without_edge(drop.0, drop.1).ok()?.with_vertex().ok()?;
            (h, (at, g.n()), true)
        }
    };
    let mut h = base.with_edge(add.0, add.1).ok()?;
    let mut start: Vec<f64> = x.to_vec();
    if fresh {
        start.push(x.iter().copied().fold(f64::INFINITY, f64::min));
    }
    if h.has_isolated_vertices() {
        let keep: Vec<usize> = (0..h.n()).filter(|&v| h.degree(v) > 0).collect();
        start = keep.iter().map(|&v| start[v]).collect();
        h = h.induced_subgraph(&keep).ok()?.graph;
    }
    if !h.is_connected().ok()? {
        return None;
    }
    if !incremental_free_check(&base, add, pattern).ok()? {
        return None;
    }
    Some((h, start))
}

/// ρ of the best accepted neighbour, scanning all moves of `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCheck {
    pub rho: f64,
    /// Largest ρ among valid neighbours, if any exist.
    pub best_neighbour_rho: Option<f64>,
    pub neighbours: usize,
    pub is_local_max: bool,
}

/// Whether no single move from `g` that stays connected, free and outside
/// `exclusions` raises ρ by more than [`MIN_IMPROVEMENT`].
pub fn is_local_maximum(g: &Graph, pattern: &PatternId, exclusions: &[CanonicalCode]) -> Result<LocalCheck> {
    if !g.is_connected()? || g.has_isolated_vertices() {
        return Err(Error::Disconnected);
    }
    let excluded = Excluded::new(exclusions);
    let base = spectral_radius(g)?;
    let x = base.perron.clone().expect("connected graph");
    let results: Vec<Option<f64>> = moves(g)
        .par_iter()
        .map(|&mv| {
            let Some((h, start)) = apply(g, &x, mv, pattern) else {
                return Ok(None);
            };
            if excluded.contains(&h) {
                return Ok(None);
            }
            Ok(Some(spectral_radius_from(&h, &start)?.rho))
        })
        .collect::<Result<_>>()?;
    let valid: Vec<f64> = results.into_iter().flatten().collect();
    let best = valid.iter().copied().reduce(f64::max);
    Ok(LocalCheck {
        rho: base.rho,
        best_neighbour_rho: best,
        neighbours: valid.len(),
        is_local_max: best.is_none_or(|b| b <= base.rho + MIN_IMPROVEMENT),
    })
}

/// First-improvement ascent from `g`. Returns the local optimum and its ρ.
fn climb(mut g: Graph, pattern: &PatternId, excluded: &Excluded, rng: &mut ChaCha8Rng) -> Result<(Graph, f64)> {
    let mut cur = spectral_radius(&g)?;
    'outer: loop {
        let x = cur.perron.clone().expect("connected graph");
        let mut mv = moves(&g);
        mv.shuffle(rng);
        for m in mv {
            let Some((h, start)) = apply(&g, &x, m, pattern) else {
                continue;
            };
            let r = spectral_radius_from(&h, &start)?;
            if r.rho > cur.rho + MIN_IMPROVEMENT && !excluded.contains(&h) {
                g = h;
                cur = r;
                continue 'outer;
            }
        }
        return Ok((g, cur.rho));
    }
}

/// Random connected free graph with `m` edges grown from `K_2`, or `None` if
/// growth gets stuck.
fn random_free_graph(m: usize, pattern: &PatternId, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let mut g = Graph::complete(2).ok()?;
    if !pattern.is_free(&g) {
        return None;
    }
    let p_edge: f64 = rng.gen_range(0.0..1.0);
    while g.size() < m {
        let n = g.n();
        let mut closing: Vec<(usize, usize)> = Vec::new();
        for v in 1..n {
            for u in 0..v {
                if !g.has_edge(u, v) {
                    closing.push((u, v));
                }
            }
        }
        closing.shuffle(rng);
        let mut pendants: Vec<usize> = (0..n).collect();
        pendants.shuffle(rng);
        let closing_first = rng.gen_bool(p_edge);
        let mut next = None;
        let try_closing = |g: &Graph| {
            closing
                .iter()
                .find(|&&e| incremental_free_check(g, e, pattern).unwrap_or(false))
                .map(|&(u, v)| g.with_edge(u, v).expect("non-edge"))
        };
        let try_pendant = |g: &Graph| {
            let h = g.with_vertex().ok()?;
            pendants
                .iter()
                .find(|&&u| incremental_free_check(&h, (u, n), pattern).unwrap_or(false))
                .map(|&u| h.with_edge(u, n).expect("new vertex"))
        };
        if closing_first {
            next = try_closing(&g);
        }
        if next.is_none() {
            next = try_pendant(&g);
        }
        if next.is_none() && !closing_first {
            next = try_closing(&g);
        }
        g = next?;
    }
    Some(g)
}

/// The named family members with `m` edges, in a fixed order.
pub fn family_candidates(m: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut push = |g: Result<Graph>| {
        if let Ok(g) = g {
            if g.size() == m {
                out.push(g);
            }
        }
    };
    push(families::star(m));
    push(families::star_matching(m, 1));
    if m >= 1 {
        push(families::star_matching(m.saturating_sub(1), 2));
    }
    if m >= 3 {
        push(families::double_star(m - 2, 1));
    }
    push(families::star_with_path(m));
    if m % 2 == 1 {
        push(families::split_star(m.div_ceil(2) + 1, 2));
    }
    for t in 1..=4 {
        push(families::pendant_split_star(m, t));
    }
    out
}

/// Seeded local search. Restart `i` uses RNG seed `seed + i`. The first
/// restarts start from the named families of size `m` that are free and not
/// excluded; the rest start from random free graphs.
pub fn hill_climb(
    m: usize,
    pattern: &PatternId,
    exclusions: &[CanonicalCode],
    restarts: usize,
    seed: u64,
) -> Result<SearchReport> {
    if m == 0 || m > HILL_CLIMB_MAX_M {
        return Err(Error::InvalidParameters(format!("hill_climb needs 1 <= m <= {HILL_CLIMB_MAX_M}, got {m}")));
    }
    let start = Instant::now();
    let mut exclusions = exclusions.to_vec();
    exclusions.sort();
    exclusions.dedup();
    let excluded = Excluded::new(&exclusions);
    let seeds: Vec<Graph> =
        family_candidates(m).into_iter().filter(|g| pattern.is_free(g) && !excluded.contains(g)).collect();

    let optima: Vec<Option<(f64, CanonicalCode)>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let initial = match seeds.get(i) {
                Some(g) => Some(g.clone()),
                None => random_free_graph(m, pattern, &mut rng).filter(|g| !excluded.contains(g)),
            };
            let Some(g) = initial else {
                return Ok(None);
            };
            let (g, rho) = climb(g, pattern, &excluded, &mut rng)?;
            Ok(Some((rho, canonical_form(&g))))
        })
        .collect::<Result<_>>()?;

    let mut found: Vec<(f64, CanonicalCode)> = optima.into_iter().flatten().collect();
    found.sort_by(|a, b| a.1.cmp(&b.1));
    found.dedup_by(|a, b| a.1 == b.1);
    let pairs: Vec<(f64, &CanonicalCode)> = found.iter().map(|(r, c)| (*r, c)).collect();
    let (max_rho, argmax) = best_of(&pairs).unwrap_or((0.0, Vec::new()));
    Ok(SearchReport {
        m,
        pattern: pattern.clone(),
        exclusions,
        enumerated: found.len(),
        excluded: 0,
        max_rho,
        argmax,
        tie_band: TIE_BAND,
        max_rho_fewer_edges: None,
        heuristic: true,
        seed: Some(seed),
        restarts: Some(restarts),
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Reads every report from a JSONL cache; a missing file is an empty cache.
pub fn read_cache(path: &Path) -> Result<Vec<SearchReport>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

/// Checks `report` against any cached report with the same key and appends it
/// if there was none. Returns whether the key was already cached.
pub fn record_in_cache(path: &Path, report: &SearchReport) -> Result<bool> {
    let key = report.cache_key();
    if let Some(old) = read_cache(path)?.into_iter().find(|r| r.cache_key() == key) {
        if (old.max_rho - report.max_rho).abs() > CACHE_TOL {
            return Err(Error::CacheMismatch { key, stored: old.max_rho, fresh: report.max_rho });
        }
        return Ok(true);
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{}", serde_json::to_string(report)?)?;
    Ok(false)
}
