"""Certified extraction of large 4-degenerate induced subgraphs.

The engine alternates two moves on each connected component:

* *collect* everything collectable (degree <= 4), which never raises the
  potential gamma;
* when stuck on a min-degree-5 core, *delete* one vertex chosen so that the
  deletion plus the collection cascade it unlocks removes at least 7
  vertices (1 deleted + >= 6 collected) and provably lowers gamma by at
  least 1.  The candidate is certified by computing the exact gamma drop,
  which dominates any per-configuration bookkeeping: extending a collection
  can only lower gamma further.

Since every deletion pays for itself with a full unit of gamma and
collections are free, the deletion set S satisfies |S| <= gamma(G) exactly.
The search is guided by discharging: hot spots are the ordinary vertices
with positive final charge and the extraordinary vertices with charge >= 2
(they exist on every min-degree-5 plane graph); candidates are drawn from
their closed distance-2 neighbourhoods first, with a full-vertex fallback
that is logged as an anomaly when it fires.

Everything the loop does is recorded in a replayable certificate; an
independent replay validator shares nothing with the forward path but the
Graph type.
"""

import json
from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import kernels
from .cuts import good_subgraph, hotspot_vertices
from .discharging import run_discharging
from .embedding import EmbeddedGraph, build_embedded, embed, is_planar
from .errors import CounterexampleFound, FormatError, InternalInvariantError
from .graphs import Graph, collect_closure, connected_components, gamma_breakdown, graph6_bytes


@dataclass(frozen=True)
class CollectAll:
    """The whole graph collapses by collection alone."""

    order: Tuple[int, ...]


@dataclass(frozen=True)
class Witness:
    """Deleting `deleted` unlocks a collection of at least 6 vertices
    (the first six of the closure order are carried)."""

    deleted: int
    collected: Tuple[int, ...]


@dataclass(frozen=True)
class ReductionStep:
    deleted: int
    collected: Tuple[int, ...]
    gamma_before: Fraction
    gamma_after: Fraction


@dataclass(frozen=True)
class ExtractionCertificate:
    original_gamma: Fraction
    deletions: Tuple[int, ...]
    collection_log: Tuple[Tuple[str, int], ...]


@dataclass
class ExtractReport:
    """Diagnostics accompanying a certificate."""

    steps: List[ReductionStep] = field(default_factory=list)
    fallback_deletions: List[int] = field(default_factory=list)
    budget_trace: List[Tuple[int, Fraction]] = field(default_factory=list)
    cut_analysis_skipped: int = 0


class _Workspace:
    """Dense mutable view of one input graph shared by the whole loop."""

    def __init__(self, g: Graph, k: int = 4):
        self.k = k
        self.verts, self.index, self.indptr, self.indices = g.dense_index()
        n = len(self.verts)
        self.degs = array("i", (self.indptr[i + 1] - self.indptr[i] for i in range(n)))
        self.alive = bytearray(b"\x01" * n)

    def alive_ids(self, among=None):
        if among is None:
            return [self.verts[i] for i in range(len(self.verts)) if self.alive[i]]
        return [v for v in among if self.alive[self.index[v]]]

    def peel_component(self, comp_ids) -> List[int]:
        seeds = [self.index[v] for v in comp_ids]
        order, _ = kernels.peel(self.indptr, self.indices, self.degs, self.alive, self.k, seeds)
        return [self.verts[i] for i in order]

    def evaluate(self, v: int) -> Tuple[int, int]:
        return kernels.evaluate_deletion(
            self.indptr, self.indices, self.degs, self.alive, self.index[v], self.k
        )

    def apply(self, v: int) -> List[int]:
        order, _ = kernels.apply_deletion(
            self.indptr, self.indices, self.degs, self.alive, self.index[v], self.k
        )
        return [self.verts[i] for i in order]

    def live_components(self, among) -> List[List[int]]:
        todo = {v for v in among if self.alive[self.index[v]]}
        out = []
        while todo:
            start = min(todo)
            comp = {start}
            stack = [self.index[start]]
            seen = {self.index[start]}
            while stack:
                i = stack.pop()
                for p in range(self.indptr[i], self.indptr[i + 1]):
                    j = self.indices[p]
                    if self.alive[j] and j not in seen:
                        seen.add(j)
                        comp.add(self.verts[j])
                        stack.append(j)
            todo -= comp
            out.append(sorted(comp))
        return out

    def live_counts(self, comp_ids) -> Tuple[int, int]:
        n = 0
        e2 = 0
        for v in comp_ids:
            i = self.index[v]
            if self.alive[i]:
                n += 1
                e2 += self.degs[i]
        return n, e2 // 2


def theorem2_witness(g: Graph) -> Union[CollectAll, Witness]:
    """Either collect the whole graph, or name one vertex whose deletion
    unlocks at least 6 collections.

    For planar inputs with at least 7 vertices one of the two always exists;
    hitting neither raises CounterexampleFound (a critical report carrying
    the graph), never a silent fallback."""
    res = collect_closure(g, 4)
    if len(res.remainder) == 0:
        return CollectAll(order=res.order)
    ws = _Workspace(g)
    for w in g.vertex_list:
        collected, _ = ws.evaluate(w)
        if collected >= 6:
            order = ws.apply(w)
            return Witness(deleted=w, collected=tuple(order[:6]))
    if len(g) >= 7 and is_planar(g):
        raise CounterexampleFound(
            "planar graph with >= 7 vertices admits no single-deletion witness",
            graph6=graph6_bytes(g).decode(),
        )
    raise ValueError("no witness; input outside the theorem's hypotheses")


def _closed_ball2(g: Graph, centers: Sequence[int]) -> List[int]:
    out = set()
    for h in centers:
        out.add(h)
        for u in g.neighbors(h):
            out.add(u)
            out |= g.neighbors(u)
    return sorted(out)


def _search_candidates(ws: _Workspace, candidates, gamma18_before: int):
    """Best qualifying candidate by (collected desc, gamma drop desc,
    id asc); qualification is collected >= 6 and an exact gamma drop of at
    least one (18 units of 1/18)."""
    best = None
    best_key = None
    for w in candidates:
        collected, removed_edges = ws.evaluate(w)
        if collected < 6:
            continue
        drop18 = removed_edges - (1 + collected)
        if drop18 < 18:
            continue
        key = (-collected, -drop18, w)
        if best_key is None or key < best_key:
            best_key = key
            best = w
    return best


def _reduction_step(ws: _Workspace, w: int, gamma18_before: int) -> ReductionStep:
    _, removed_edges = ws.evaluate(w)
    order = ws.apply(w)
    gamma18_after = gamma18_before - (removed_edges - (1 + len(order)))
    return ReductionStep(
        deleted=w,
        collected=tuple(order),
        gamma_before=Fraction(gamma18_before, 18),
        gamma_after=Fraction(gamma18_after, 18),
    )


def find_reduction(
    g: Graph, eg: Optional[EmbeddedGraph] = None, hotspots: Optional[Sequence[int]] = None
) -> Optional[ReductionStep]:
    """One certified reduction on a connected min-degree-5 graph, or None.

    Candidates come from the closed distance-2 neighbourhoods of the hot
    spots first, then (fallback) from all vertices.  The returned step's
    collected sequence is the full collection closure after the deletion --
    never truncated, since a longer collection only lowers gamma."""
    if len(g) == 0 or min(g.degree(v) for v in g.vertex_list) < 5:
        raise ValueError("find_reduction expects minimum degree 5")
    if hotspots is None:
        hotspots = g.vertex_list
    ws = _Workspace(g)
    gamma18 = g.edge_count - len(g)  # gamma = (E - V)/18 when min degree >= 5
    best = _search_candidates(ws, _closed_ball2(g, hotspots), gamma18)
    if best is None:
        best = _search_candidates(ws, g.vertex_list, gamma18)
    if best is None:
        return None
    return _reduction_step(ws, best, gamma18)


def extract(g: Graph, eg: Optional[EmbeddedGraph] = None) -> ExtractionCertificate:
    """Certificate that deleting at most gamma(G) vertices makes the rest
    collectable.  See extract_with_report for diagnostics."""
    cert, _ = extract_with_report(g, eg)
    return cert


def extract_with_report(
    g: Graph,
    eg: Optional[EmbeddedGraph] = None,
    audit: bool = False,
    cut_analysis_limit: int = 1500,
    strict: bool = True,
) -> Tuple[ExtractionCertificate, ExtractReport]:
    """The full extraction loop.

    Per connected component: collect everything collectable; when a
    min-degree-5 core remains, discharge it, classify its good subgraph
    (components above `cut_analysis_limit` skip the cut analysis and treat
    every positively charged vertex as a hot spot -- the certified gamma
    drop does not depend on the guidance), find a reduction, apply it, and
    re-split.  ``audit=True`` additionally records the exact budget
    invariant (deletions so far) + gamma(current) <= gamma(original) after
    every step."""
    breakdown = gamma_breakdown(g)
    original_gamma = breakdown.gamma
    report = ExtractReport()
    events: List[Tuple[str, int]] = []
    deletions: List[int] = []
    if len(g) == 0:
        return (
            ExtractionCertificate(original_gamma=original_gamma, deletions=(), collection_log=()),
            report,
        )
    rotation = eg.rotation if eg is not None else embed(g)
    ws = _Workspace(g)
    worklist = [sorted(c) for c in connected_components(g)]

    def audit_point():
        if not audit:
            return
        live = ws.alive_ids()
        current = gamma_breakdown(g.induced(live)).gamma if live else Fraction(0)
        report.budget_trace.append((len(deletions), current))
        if len(deletions) + current > original_gamma:
            raise InternalInvariantError(
                f"budget exceeded: {len(deletions)} deletions + gamma {current} "
                f"> {original_gamma}"
            )

    audit_point()
    while worklist:
        comp = worklist.pop()
        for v in ws.peel_component(comp):
            events.append(("collect", v))
        rest = ws.alive_ids(comp)
        if not rest:
            audit_point()
            continue
        pieces = ws.live_components(rest)
        if len(pieces) > 1:
            worklist.extend(pieces)
            continue
        piece = pieces[0]
        sub = g.induced(piece)
        keep = frozenset(piece)
        sub_rot = {v: tuple(u for u in rotation[v] if u in keep) for v in piece}
        sub_eg = build_embedded(sub, sub_rot)
        state = run_discharging(sub_eg, strict=strict, with_ledger=False)
        if len(piece) <= cut_analysis_limit:
            gs = good_subgraph(sub, sub_eg)
            hot = hotspot_vertices(gs, state)
        else:
            report.cut_analysis_skipped += 1
            hot = sorted(v for v, c in state.vertex_scaled.items() if c > 0)
        if not hot:
            hot = piece
        gamma18 = sub.edge_count - len(sub)
        best = _search_candidates(ws, _closed_ball2(sub, hot), gamma18)
        if best is None:
            best = _search_candidates(ws, piece, gamma18)
            if best is not None:
                report.fallback_deletions.append(best)
        if best is None:
            ledger_state = run_discharging(sub_eg, strict=strict, with_ledger=True, check=False)
            raise CounterexampleFound(
                "no reduction on a connected min-degree-5 planar graph",
                graph6=graph6_bytes(sub).decode(),
                details={"ledger": ledger_state.ledger},
            )
        step = _reduction_step(ws, best, gamma18)
        report.steps.append(step)
        deletions.append(best)
        events.append(("delete", best))
        for v in step.collected:
            events.append(("collect", v))
        audit_point()
        remaining = ws.alive_ids(piece)
        if remaining:
            worklist.append(remaining)
    if Fraction(len(deletions)) > original_gamma:
        raise InternalInvariantError(
            f"extraction used {len(deletions)} deletions with budget {original_gamma}"
        )
    return (
        ExtractionCertificate(
            original_gamma=original_gamma,
            deletions=tuple(deletions),
            collection_log=tuple(events),
        ),
        report,
    )


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    reason: str = ""
    position: Optional[int] = None


def verify_certificate(g: Graph, cert: ExtractionCertificate) -> VerificationReport:
    """Replay a certificate from scratch against the original graph.

    Independent of the forward path: plain dict-of-sets surgery, no kernels.
    Checks every certificate invariant: legality of each collect at its
    moment, agreement of delete events with the deletions list, exhaustion
    of the graph, and the budget |deletions| <= gamma(G) with gamma
    recomputed here."""
    adj = {v: set(g.neighbors(v)) for v in g.vertex_list}
    expected_deletions = list(cert.deletions)
    seen_deletions = []
    for pos, (op, v) in enumerate(cert.collection_log):
        if v not in adj:
            return VerificationReport(False, f"event on unknown or removed vertex {v}", pos)
        if op == "collect":
            if len(adj[v]) > 4:
                return VerificationReport(False, f"collect of degree-{len(adj[v])} vertex {v}", pos)
        elif op == "delete":
            seen_deletions.append(v)
        else:
            return VerificationReport(False, f"unknown event {op!r}", pos)
        for u in adj.pop(v):
            adj[u].discard(v)
    if adj:
        return VerificationReport(False, f"{len(adj)} vertices never removed", None)
    if seen_deletions != expected_deletions:
        return VerificationReport(False, "delete events disagree with the deletions list", None)
    recomputed = gamma_breakdown(g).gamma
    if cert.original_gamma != recomputed:
        return VerificationReport(False, f"stored gamma {cert.original_gamma} != {recomputed}", None)
    if Fraction(len(expected_deletions)) > recomputed:
        return VerificationReport(
            False, f"{len(expected_deletions)} deletions exceed gamma {recomputed}", None
        )
    return VerificationReport(True)


# ---------------------------------------------------------------------------
# Reduction bookkeeping audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionAudit:
    """The b-vector bookkeeping for one reduction.

    b counts removed vertices by true degree (5..9, >= 10 pooled); the
    lower-bound inequality delta_phi >= 5 b5 + 7 b6 + 9 b7 + 11 b8 + 13 b9 +
    15 b10 - 2 sigma_e is asserted whenever every removed vertex has degree
    >= 5 (`bound_checked`).  delta_tc is decrease-positive: tc(before) -
    tc(after); "no new tree component" means delta_tc >= 0 and is asserted
    when at most one removed vertex sits at distance 2 from the deleted one
    (`tc_rule_checked`)."""

    b: Tuple[int, int, int, int, int, int]
    sigma_e: int
    delta_phi_bound: int
    delta_tc: int
    delta_v: int
    delta_phi_exact: int
    delta_gamma: Fraction
    bound_checked: bool
    tc_rule_checked: bool


def audit_reduction(g_before: Graph, step: ReductionStep) -> ReductionAudit:
    """Replay one reduction and recompute its removal bookkeeping."""
    adj = {v: set(g_before.neighbors(v)) for v in g_before.vertex_list}
    if step.deleted not in adj:
        raise ValueError(f"deleted vertex {step.deleted} not in the graph")
    removed = [step.deleted] + list(step.collected)
    if len(set(removed)) != len(removed):
        raise ValueError("reduction removes a vertex twice")
    for u in adj.pop(step.deleted):
        adj[u].discard(step.deleted)
    for v in step.collected:
        if v not in adj:
            raise ValueError(f"collected vertex {v} missing")
        if len(adj[v]) > 4:
            raise ValueError(f"collect of degree-{len(adj[v])} vertex {v} is illegal")
        for u in adj.pop(v):
            adj[u].discard(v)
    removed_set = set(removed)
    b = [0] * 6
    low_degree = 0
    for v in removed:
        d = g_before.degree(v)
        if d < 5:
            low_degree += 1
        else:
            b[min(d, 10) - 5] += 1
    sigma_e = sum(
        1 for i, u in enumerate(removed) for v in removed[i + 1 :] if g_before.has_edge(u, v)
    )
    before = gamma_breakdown(g_before)
    after = gamma_breakdown(g_before.induced(g_before.vertices - removed_set))
    delta_phi_exact = before.phi - after.phi
    delta_tc = before.tree_components - after.tree_components
    delta_v = len(removed)
    delta_gamma = before.gamma - after.gamma
    bound = 5 * b[0] + 7 * b[1] + 9 * b[2] + 11 * b[3] + 13 * b[4] + 15 * b[5] - 2 * sigma_e
    bound_checked = low_degree == 0
    if bound_checked and delta_phi_exact < bound:
        raise CounterexampleFound(
            f"delta-phi bound violated: exact {delta_phi_exact} < bound {bound}",
            graph6=graph6_bytes(g_before).decode(),
        )
    dist2 = 0
    nbrs = g_before.neighbors(step.deleted)
    ball1 = set(nbrs) | {step.deleted}
    for v in step.collected:
        if v in ball1:
            continue
        if g_before.neighbors(v) & nbrs:
            dist2 += 1
    tc_rule_checked = dist2 <= 1
    if tc_rule_checked and delta_tc < 0:
        raise CounterexampleFound(
            f"new tree component created despite the distance-2 rule "
            f"(delta_tc = {delta_tc})",
            graph6=graph6_bytes(g_before).decode(),
        )
    return ReductionAudit(
        b=tuple(b),
        sigma_e=sigma_e,
        delta_phi_bound=bound,
        delta_tc=delta_tc,
        delta_v=delta_v,
        delta_phi_exact=delta_phi_exact,
        delta_gamma=delta_gamma,
        bound_checked=bound_checked,
        tc_rule_checked=tc_rule_checked,
    )


# ---------------------------------------------------------------------------
# Certificate serialization
# ---------------------------------------------------------------------------


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_fraction(s: str) -> Fraction:
    num, _, den = s.partition("/")
    try:
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}: {exc}") from None


def certificate_to_json(cert: ExtractionCertificate) -> str:
    """Stable-order JSON: gamma as "p/q", events, deletions."""
    payload = {
        "gamma": _fraction_str(cert.original_gamma),
        "events": [{"op": op, "v": v} for op, v in cert.collection_log],
        "deletions": list(cert.deletions),
    }
    return json.dumps(payload, separators=(",", ":"))


def certificate_from_json(text: str) -> ExtractionCertificate:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"certificate is not valid JSON: {exc}") from None
    try:
        gamma = _parse_fraction(payload["gamma"])
        events = tuple((e["op"], int(e["v"])) for e in payload["events"])
        deletions = tuple(int(v) for v in payload["deletions"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"certificate schema violation: {exc!r}") from None
    return ExtractionCertificate(
        original_gamma=gamma, deletions=deletions, collection_log=events
    )
