//! Numeric checks of the spectral bounds and orderings, each producing a
//! [`Verdict`].
//!
//! Strict inequalities pass only with a margin above [`COMPARE_TOL`]; a margin
//! in `[0, COMPARE_TOL]` is reported as indeterminate. Non-strict bounds pass
//! when the margin is at least `−COMPARE_TOL`. When a claim has a size
//! threshold below which it is not asserted, the check still runs and the
//! verdict is flagged `exploratory`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::families;
use crate::graph::Graph;
use crate::graph6;
use crate::pattern::{contains_k2r1, contains_subgraph, contains_theta123};
use crate::poly::ClosedForm;
use crate::spectral::{rho, spectral_radius, vertex_deletion_bound, COMPARE_TOL};

/// Outcome class of a [`Verdict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A strict inequality whose margin is within rounding of zero.
    Indeterminate,
    /// The input does not satisfy the claim's hypotheses.
    Inapplicable,
}

impl Status {
    fn worst(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (Inapplicable, _) | (_, Inapplicable) => Inapplicable,
            _ => Pass,
        }
    }
}

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim_id: String,
    pub params: Value,
    pub holds: bool,
    pub status: Status,
    /// Smallest slack observed; `None` when inapplicable.
    pub margin: Option<f64>,
    pub exploratory: bool,
    pub details: Value,
}

impl Verdict {
    fn new(
        claim: Claim,
        params: Value,
        status: Status,
        margin: Option<f64>,
        exploratory: bool,
        details: Value,
    ) -> Verdict {
        Verdict {
            claim_id: claim.id().to_string(),
            params,
            holds: status == Status::Pass,
            status,
            margin,
            exploratory,
            details,
        }
    }

    fn inapplicable(claim: Claim, params: Value, reason: &str) -> Verdict {
        Verdict::new(claim, params, Status::Inapplicable, None, false, json!({ "reason": reason }))
    }
}

/// The checks available, by identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// `ρ ≤ √(2m(1 − 1/r))` for `K_{r+1}`-free graphs.
    CliqueBound,
    /// `ρ ≤ √m` for `K_{2,r+1}`-free graphs, with equality only for stars.
    StarBound,
    /// `ρ ≤ (1 + √(4m − 3))/2` for `θ_{1,2,3}`-free graphs, with equality only
    /// for the split star.
    ThetaBound,
    /// The star with one leaf edge beats the double star, the star with two
    /// leaf edges and the star with a leaf path.
    StarOrderings,
    /// Ordering of the pendant split stars in the number of pendants.
    PendantOrderings,
    /// Components of a neighbourhood are isolated vertices, triangles or stars.
    NeighbourhoodStructure,
    /// `ρ(G) ≤ √(ρ²(G − v) + 2d(v) − 1)`.
    VertexDeletion,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::CliqueBound,
        Claim::StarBound,
        Claim::ThetaBound,
        Claim::StarOrderings,
        Claim::PendantOrderings,
        Claim::NeighbourhoodStructure,
        Claim::VertexDeletion,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::CliqueBound => "clique-bound",
            Claim::StarBound => "star-bound",
            Claim::ThetaBound => "theta-bound",
            Claim::StarOrderings => "star-orderings",
            Claim::PendantOrderings => "pendant-orderings",
            Claim::NeighbourhoodStructure => "neighbourhood-structure",
            Claim::VertexDeletion => "vertex-deletion",
        }
    }

    pub fn from_id(s: &str) -> Result<Claim> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown claim `{s}`")))
    }
}

/// Status of a strict inequality with the given margin.
pub fn strict_status(margin: f64) -> Status {
    if margin > COMPARE_TOL {
        Status::Pass
    } else if margin >= 0.0 {
        Status::Indeterminate
    } else {
        Status::Fail
    }
}

/// Status of a non-strict inequality with the given margin.
pub fn weak_status(margin: f64) -> Status {
    if margin >= -COMPARE_TOL {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn graph_params(g: &Graph) -> Value {
    json!({ "graph": graph6::encode(g) })
}

fn is_star(g: &Graph) -> bool {
    let h = g.without_isolated();
    h.n() >= 2 && h.max_degree() == h.size() && h.size() + 1 == h.n()
}

/// Clique-free bound. Inapplicable if `g` contains `K_{r+1}`.
pub fn check_clique_bound(g: &Graph, r: usize) -> Result<Verdict> {
    let claim = Claim::CliqueBound;
    let mut params = graph_params(g);
    params["r"] = json!(r);
    if r == 0 {
        return Err(Error::InvalidParameters("r must be at least 1".into()));
    }
    if contains_subgraph(g, &Graph::complete(r + 1)?) {
        return Ok(Verdict::inapplicable(claim, params, "graph contains K_{r+1}"));
    }
    let m = g.size() as f64;
    let rho = rho(g)?;
    let bound = (2.0 * m * (1.0 - 1.0 / r as f64)).sqrt();
    let margin = bound - rho;
    let details = json!({ "rho": rho, "bound": bound, "equality": margin.abs() <= COMPARE_TOL });
    Ok(Verdict::new(claim, params, weak_status(margin), Some(margin), false, details))
}

/// Star bound for `K_{2,r+1}`-free graphs. Exploratory when `m < 16r²`.
pub fn check_star_bound(g: &Graph, r: usize) -> Result<Verdict> {
    let claim = Claim::StarBound;
    let mut params = graph_params(g);
    params["r"] = json!(r);
    if r == 0 {
        return Err(Error::InvalidParameters("r must be at least 1".into()));
    }
    if contains_k2r1(g, r) {
        return Ok(Verdict::inapplicable(claim, params, "graph contains K_{2,r+1}"));
    }
    let m = g.size();
    let rho = rho(g)?;
    let bound = (m as f64).sqrt();
    let margin = bound - rho;
    let equality = margin.abs() <= COMPARE_TOL;
    let star = is_star(g);
    let mut status = weak_status(margin);
    if equality != star {
        status = Status::Fail;
    }
    let details = json!({
        "rho": rho,
        "bound": bound,
        "equality": equality,
        "is_star": star,
        "threshold_m": 16 * r * r,
    });
    Ok(Verdict::new(claim, params, status, Some(margin), m < 16 * r * r, details))
}

/// Bound for `θ_{1,2,3}`-free graphs with `m ≥ 8` and no isolated vertices.
pub fn check_theta_bound(g: &Graph) -> Result<Verdict> {
    let claim = Claim::ThetaBound;
    let params = graph_params(g);
    let m = g.size();
    if m < 8 {
        return Ok(Verdict::inapplicable(claim, params, "needs m >= 8"));
    }
    if g.has_isolated_vertices() {
        return Ok(Verdict::inapplicable(claim, params, "graph has isolated vertices"));
    }
    if contains_theta123(g) {
        return Ok(Verdict::inapplicable(claim, params, "graph contains theta(1,2,3)"));
    }
    let rho = rho(g)?;
    let bound = (1.0 + ((4 * m - 3) as f64).sqrt()) / 2.0;
    let margin = bound - rho;
    let equality = margin.abs() <= COMPARE_TOL;
    let split = m % 2 == 1 && canonical_form(g) == canonical_form(&families::split_star(m.div_ceil(2) + 1, 2)?);
    let mut status = weak_status(margin);
    if equality != split {
        status = Status::Fail;
    }
    let details = json!({ "rho": rho, "bound": bound, "equality": equality, "is_split_star": split });
    Ok(Verdict::new(claim, params, status, Some(margin), false, details))
}

/// Spectral radius of a closed form by its largest root and of its graph by
/// power iteration, failing if the two disagree.
fn two_routes(form: ClosedForm) -> Result<(f64, f64)> {
    let root = form.largest_real_root()?;
    let g = form.graph()?.ok_or_else(|| Error::InvalidParameters(format!("{form:?} has no graph")))?;
    Ok((root, rho(&g)?))
}

/// One strict comparison `lhs < rhs` computed two ways.
fn ordering(name: &str, lhs: ClosedForm, rhs: ClosedForm) -> Result<(Status, f64, Value)> {
    let (l_root, l_eig) = two_routes(lhs)?;
    let (r_root, r_eig) = two_routes(rhs)?;
    let disagreement = (l_root - l_eig).abs().max((r_root - r_eig).abs());
    let m_root = r_root - l_root;
    let m_eig = r_eig - l_eig;
    let margin = m_root.min(m_eig);
    let mut status = strict_status(margin);
    if disagreement >= COMPARE_TOL {
        status = Status::Fail;
    }
    let details = json!({
        "ordering": name,
        "lhs": { "root": l_root, "eigen": l_eig },
        "rhs": { "root": r_root, "eigen": r_eig },
        "margin_root": m_root,
        "margin_eigen": m_eig,
        "route_disagreement": disagreement,
        "status": status,
    });
    Ok((status, margin, details))
}

/// Orderings against the star with one leaf edge at size `m ≥ 6`, plus
/// `ρ > √(m − 1)`. Exploratory below `m = 18`.
pub fn check_star_orderings(m: usize) -> Result<Verdict> {
    let claim = Claim::StarOrderings;
    let params = json!({ "m": m });
    if m < 6 {
        return Ok(Verdict::inapplicable(claim, params, "needs m >= 6"));
    }
    let top = ClosedForm::StarPlusEdge { m };
    let comparisons = [
        ("double_star < star_plus_edge", ClosedForm::DoubleStar { m }),
        ("star_plus_two_edges < star_plus_edge", ClosedForm::StarPlusTwoEdges { m }),
        ("star_with_path < star_plus_edge", ClosedForm::StarWithPath { m }),
    ];
    let mut status = Status::Pass;
    let mut margin = f64::INFINITY;
    let mut items = Vec::new();
    for (name, lhs) in comparisons {
        let (s, mg, d) = ordering(name, lhs, top)?;
        status = status.worst(s);
        margin = margin.min(mg);
        items.push(d);
    }
    let (root, eig) = two_routes(top)?;
    let star = ((m - 1) as f64).sqrt();
    let mg = root.min(eig) - star;
    let s = if (root - eig).abs() >= COMPARE_TOL { Status::Fail } else { strict_status(mg) };
    status = status.worst(s);
    margin = margin.min(mg);
    items.push(json!({
        "ordering": "star < star_plus_edge",
        "lhs": { "closed_form": star },
        "rhs": { "root": root, "eigen": eig },
        "margin_root": root - star,
        "margin_eigen": eig - star,
        "status": s,
    }));
    Ok(Verdict::new(claim, params, status, Some(margin), m < 18, json!({ "comparisons": items })))
}

/// Pendant count with the same parity as `t` that `t` is compared against.
fn pendant_base(t: usize) -> usize {
    if t % 2 == 1 {
        1
    } else {
        2
    }
}

/// (i) `ρ(F_{m,t}) < ρ(F_{m,1})` for odd `t ≥ 3` and `< ρ(F_{m,2})` for even
/// `t ≥ 4`, over valid `t ≤ t_max`; (ii) `ρ(F_{m,t}) > (1 + √(4m − 7))/2` for
/// the valid `t ∈ {1, 2}`, both by root comparison and by the sign of the
/// quartic at that point. Exploratory below `m = 22`.
pub fn check_pendant_orderings(m: usize, t_max: usize) -> Result<Verdict> {
    let claim = Claim::PendantOrderings;
    let params = json!({ "m": m, "t_max": t_max });
    let mut status = Status::Pass;
    let mut margin = f64::INFINITY;

    let mut ordering_items = Vec::new();
    let mut skipped = Vec::new();
    let mut margins_by_t = Vec::new();
    for t in 3..=t_max {
        if families::pendant_split_star_r(m, t).is_err() {
            skipped.push(t);
            continue;
        }
        let base = pendant_base(t);
        let (s, mg, d) = ordering(
            &format!("t={t} < t={base}"),
            ClosedForm::PendantSplitStar { m, t },
            ClosedForm::PendantSplitStar { m, t: base },
        )?;
        status = status.worst(s);
        margin = margin.min(mg);
        margins_by_t.push(mg);
        ordering_items.push(d);
    }
    let increasing = margins_by_t.windows(2).all(|w| w[1] >= w[0]);

    let point = (1.0 + ((4 * m) as f64 - 7.0).sqrt()) / 2.0;
    let mut lower_items = Vec::new();
    for t in [1, 2] {
        if families::pendant_split_star_r(m, t).is_err() {
            continue;
        }
        let form = ClosedForm::PendantSplitStar { m, t };
        let (root, eig) = two_routes(form)?;
        let poly = form.polynomial()?;
        let value = poly.eval(point);
        let residual = poly.eval(root).abs();
        let mg = (root.min(eig) - point).min(-value);
        let mut s = strict_status(mg);
        if (root - eig).abs() >= COMPARE_TOL {
            s = Status::Fail;
        }
        status = status.worst(s);
        margin = margin.min(mg);
        lower_items.push(json!({
            "t": t,
            "point": point,
            "root": root,
            "eigen": eig,
            "value_at_point": value,
            "root_residual": residual,
            "status": s,
        }));
    }
    if ordering_items.is_empty() && lower_items.is_empty() {
        return Ok(Verdict::inapplicable(claim, params, "no valid t for this m"));
    }
    let details = json!({
        "orderings": ordering_items,
        "lower_bound": lower_items,
        "skipped_t": skipped,
        "margins_increase_with_t": increasing,
    });
    Ok(Verdict::new(claim, params, status, Some(margin), m < 22, details))
}

/// Shape of one component of a neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "leaves", rename_all = "snake_case")]
pub enum ComponentKind {
    Isolated,
    Triangle,
    /// `K_{1,k}`; an edge is `Star(1)`.
    Star(usize),
    Other,
}

pub fn classify_component(g: &Graph) -> ComponentKind {
    let (n, m) = (g.n(), g.size());
    if n == 1 {
        ComponentKind::Isolated
    } else if n == 3 && m == 3 {
        ComponentKind::Triangle
    } else if m + 1 == n && g.max_degree() == m {
        ComponentKind::Star(m)
    } else {
        ComponentKind::Other
    }
}

/// Classifies the components of `G[N(v)]`; holds iff none is `Other`.
pub fn check_neighbourhood_structure(g: &Graph, v: usize) -> Result<Verdict> {
    let claim = Claim::NeighbourhoodStructure;
    let mut params = graph_params(g);
    params["v"] = json!(v);
    let nb = g.induced_neighborhood(v)?.graph;
    let mut kinds = Vec::new();
    for comp in nb.components() {
        kinds.push(classify_component(&nb.induced_subgraph(&comp)?.graph));
    }
    let status = if kinds.contains(&ComponentKind::Other) { Status::Fail } else { Status::Pass };
    Ok(Verdict::new(claim, params, status, None, false, json!({ "components": kinds })))
}

/// [`check_neighbourhood_structure`] at the vertex with the largest Perron entry.
pub fn check_neighbourhood_at_max_entry(g: &Graph) -> Result<Verdict> {
    let r = spectral_radius(g)?;
    let v = r.max_entry_vertex().ok_or(Error::Disconnected)?;
    check_neighbourhood_structure(g, v)
}

/// Vertex-deletion inequality. For connected graphs it also checks that
/// equality happens exactly for complete graphs and for stars at a leaf.
pub fn check_vertex_deletion(g: &Graph, v: usize) -> Result<Verdict> {
    let claim = Claim::VertexDeletion;
    let mut params = graph_params(g);
    params["v"] = json!(v);
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if g.degree(v) == 0 {
        return Ok(Verdict::inapplicable(claim, params, "vertex is isolated"));
    }
    let b = vertex_deletion_bound(g, v)?;
    let connected = g.is_connected()?;
    let expected = g.size() == g.n() * (g.n() - 1) / 2 || (is_star(g) && connected && b.degree == 1);
    let mut status = weak_status(b.slack());
    if connected && b.is_tight() != expected {
        status = Status::Fail;
    }
    let details = json!({
        "rho": b.rho,
        "rho_deleted": b.rho_deleted,
        "degree": b.degree,
        "bound": b.bound,
        "equality": b.is_tight(),
        "equality_expected": expected,
    });
    Ok(Verdict::new(claim, params, status, Some(b.slack()), false, details))
}

/// Runs `check` over every point in parallel, keeping the input order.
pub fn run_batch<P, F>(points: &[P], check: F) -> Result<Vec<Verdict>>
where
    P: Sync,
    F: Fn(&P) -> Result<Verdict> + Sync + Send,
{
    points.par_iter().map(check).collect()
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(mut w: W, verdicts: &[Verdict]) -> Result<()> {
    for v in verdicts {
        writeln!(w, "{}", serde_json::to_string(v)?)?;
    }
    Ok(())
}

/// CSV summary with columns `claim_id, params, holds, status, margin, exploratory`.
pub fn write_csv<W: Write>(w: W, verdicts: &[Verdict]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["claim_id", "params", "holds", "status", "margin", "exploratory"])?;
    for v in verdicts {
        let status = serde_json::to_value(v.status)?;
        out.write_record([
            v.claim_id.clone(),
            v.params.to_string(),
            v.holds.to_string(),
            status.as_str().unwrap_or_default().to_string(),
            v.margin.map(fmt_sig).unwrap_or_default(),
            v.exploratory.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `x` with 15 significant digits, like C's `%.15g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let mantissa =
            if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        format!("{mantissa}e{exp}")
    }
}
