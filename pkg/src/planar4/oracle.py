"""Brute-force ground truth for small instances.

`min_deletion_exact` finds the true minimum number of deletions that leaves
a k-collectable graph, by iterative-deepening branch-and-bound.  Branching
is restricted to vertices of the current (k+1)-core: any valid deletion set
must intersect the core, because the core survives every sequence of
low-degree removals.  Children of one node carve the candidate space into
disjoint classes (child i may never delete candidates 0..i-1), so each
deletion set is explored once.  The search is exact; exhausting the node
budget downgrades the result to a greedy upper bound flagged non-optimal.
"""

import time
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Optional

from .errors import CounterexampleFound
from .graphs import Graph, collect_closure, connected_components, gamma_breakdown
from .reduction import CollectAll, ExtractionCertificate, theorem2_witness


@dataclass(frozen=True)
class OracleResult:
    optimum_deletions: int
    witness_set: FrozenSet[int]
    explored: int
    time: float
    optimal: bool


def _greedy_upper_bound(g: Graph, k: int) -> FrozenSet[int]:
    removed = []
    core = collect_closure(g, k).remainder
    while len(core):
        v = max(core.vertex_list, key=lambda u: (core.degree(u), -u))
        removed.append(v)
        core = collect_closure(core.without_vertex(v), k).remainder
    return frozenset(removed)


def min_deletion_exact(g: Graph, k: int = 4, budget: Optional[int] = None) -> OracleResult:
    """Minimum deletions so the rest collects at threshold k.

    Exponential search; intended for |V| <= ~20.  `budget` caps the number
    of explored nodes; when exhausted the result carries a greedy witness
    and optimal=False."""
    t0 = time.perf_counter()
    explored = 0
    exhausted = False

    def dfs(core: Graph, limit: int, forbidden: FrozenSet[int]) -> Optional[FrozenSet[int]]:
        nonlocal explored, exhausted
        if len(core) == 0:
            return frozenset()
        if limit == 0:
            return None
        explored += 1
        if budget is not None and explored > budget:
            exhausted = True
            return None
        if len(connected_components(core)) > limit:
            return None
        candidates = [v for v in core.vertex_list if v not in forbidden]
        banned = set(forbidden)
        for v in candidates:
            child = collect_closure(core.without_vertex(v), k).remainder
            sub = dfs(child, limit - 1, frozenset(banned & child.vertices))
            if sub is not None:
                return sub | {v}
            if exhausted:
                return None
            banned.add(v)
        return None

    core0 = collect_closure(g, k).remainder
    limit = 0
    while True:
        result = dfs(core0, limit, frozenset())
        if result is not None:
            return OracleResult(
                optimum_deletions=len(result),
                witness_set=result,
                explored=explored,
                time=time.perf_counter() - t0,
                optimal=True,
            )
        if exhausted:
            witness = _greedy_upper_bound(g, k)
            return OracleResult(
                optimum_deletions=len(witness),
                witness_set=witness,
                explored=explored,
                time=time.perf_counter() - t0,
                optimal=False,
            )
        limit += 1


@dataclass
class Theorem2Summary:
    collect_all: int = 0
    witness: int = 0
    skipped_nonplanar: int = 0

    @property
    def checked(self) -> int:
        return self.collect_all + self.witness


def verify_theorem2_exhaustive(stream: Iterable) -> Theorem2Summary:
    """Run theorem2_witness over a stream of graphs or StreamRecords.

    Non-planar elements are skipped with a warning.  A counterexample (the
    unreachable error branch) propagates as CounterexampleFound with the
    offending graph serialized -- it is never swallowed."""
    summary = Theorem2Summary()
    for item in stream:
        g = item.graph if hasattr(item, "graph") else item
        planar = item.planar if hasattr(item, "planar") else None
        if planar is None:
            from .embedding import is_planar

            planar = is_planar(g)
        if not planar:
            warnings.warn(f"skipping non-planar stream element with {len(g)} vertices")
            summary.skipped_nonplanar += 1
            continue
        outcome = theorem2_witness(g)
        if isinstance(outcome, CollectAll):
            summary.collect_all += 1
        else:
            summary.witness += 1
    return summary


@dataclass(frozen=True)
class ComparisonReport:
    """The oracle sandwich: optimum <= |S| <= floor(gamma), optimum <= gamma."""

    optimum: int
    extract_size: int
    gamma: Fraction
    ok: bool
    violations: tuple


def compare_extract_to_oracle(
    g: Graph,
    certificate: Optional[ExtractionCertificate] = None,
    oracle: Optional[OracleResult] = None,
) -> ComparisonReport:
    """Assert oracle optimum <= extraction's |S| <= floor(gamma) and
    optimum <= gamma (a strictly stronger probe of the budget theorem)."""
    from .reduction import extract

    if certificate is None:
        certificate = extract(g)
    if oracle is None:
        oracle = min_deletion_exact(g, 4)
    gamma = gamma_breakdown(g).gamma
    s = len(certificate.deletions)
    violations = []
    if oracle.optimum_deletions > s:
        violations.append(f"oracle {oracle.optimum_deletions} > extract {s}")
    if Fraction(s) > gamma:
        violations.append(f"extract {s} > gamma {gamma}")
    if Fraction(oracle.optimum_deletions) > gamma:
        violations.append(f"oracle {oracle.optimum_deletions} > gamma {gamma}")
    return ComparisonReport(
        optimum=oracle.optimum_deletions,
        extract_size=s,
        gamma=gamma,
        ok=not violations,
        violations=tuple(violations),
    )
