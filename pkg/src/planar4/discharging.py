"""The three-step discharging procedure with a complete transfer ledger.

Initial charges: every d-vertex gets 6-d, every l-face gets 2(3-l); the
total is exactly 12 per connected plane component.  Three redistribution
steps follow:

1. face discharging -- every vertex incident (per boundary visit) to a face
   of length >= 4 sends 2/5 if it has degree 6, else 3/5 when both its walk
   neighbours on that visit have degree 6, else 1/2;
2. distance discharging -- 1/5 moves from a 5-vertex across a pair of
   adjacent degree-6 vertices to a receiver of degree >= 7 (see below);
3. final discharging -- every 5-vertex sends to its degree->=6 neighbours,
   in descending order of the per-edge maximum charge given by the type
   table, each send capped by the sender's remaining (non-negative) charge.

Every amount is an integer multiple of 1/180 (the lcm of all rule
denominators), so the whole engine runs in exact integer arithmetic scaled
by 180; the public ChargeState exposes Fractions.

Distance-discharging pattern.  The receiver w (degree >= 7) must have four
consecutive neighbours (v1, v2, v3, v4) in its rotation with degrees
(6+, 6, 6, 6+); the sender x is a 5-vertex adjacent to both v2 and v3; the
six vertices are pairwise distinct.  The *strict* variant (the default)
additionally requires the three corner faces at w and the face on the far
side of the edge v2-v3 to be triangles (x is that triangle's apex), x to be
non-adjacent to v1 and v4, and x to be the only degree-5 neighbour of v2
and of v3.  These facial/uniqueness conditions are what make the
per-receiver inflow cap (at most floor((k-m-1)/3)/5 for a degree-k receiver
with m > 0 five-neighbours, floor(k/3)/5 for m = 0) provable; the *relaxed*
variant drops them and is kept selectable because the minimal pattern is
reconstructed rather than copied from a drawing.  The relaxed variant can
exceed the cap (tests exhibit a fixture), which is why strict is the
default everywhere.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from .embedding import EmbeddedGraph, consecutive_five_neighbours, nontriangular_face_count
from .errors import CounterexampleFound
from .graphs import connected_components, graph6_bytes

SCALE = 180

_MC = {
    "1": 180,
    "9/10": 162,
    "4/5": 144,
    "13/20": 117,
    "1/2": 90,
    "2/5": 72,
    "1/3": 60,
    "0": 0,
}

# (label, degree test, min non-triangular incidences, max 5-neighbours, mc)
# max 5-neighbours: an int cap, None for unbounded, "3c" for exactly three
# consecutive.  First matching row wins.
_TYPE_TABLE = (
    ("10a", lambda d: d >= 10, 0, 3, 180),
    ("10b", lambda d: d >= 10, 0, None, 90),
    ("9a", lambda d: d == 9, 1, 3, 180),
    ("9b", lambda d: d == 9, 0, 2, 180),
    ("9c", lambda d: d == 9, 0, "3c", None),
    ("9d", lambda d: d == 9, 0, None, 90),
    ("8a", lambda d: d == 8, 0, 1, 180),
    ("8b", lambda d: d == 8, 1, 2, 180),
    ("8c", lambda d: d == 8, 2, "3c", None),
    ("8d", lambda d: d == 8, 0, 2, 162),
    ("8e", lambda d: d == 8, 0, None, 90),
    ("7a", lambda d: d == 7, 0, 1, 144),
    ("7b", lambda d: d == 7, 1, 2, 117),
    ("7c", lambda d: d == 7, 0, 2, 72),
    ("7d", lambda d: d == 7, 0, None, 60),
    ("6a", lambda d: d == 6, 1, 1, 72),
    ("6b", lambda d: d == 6, 0, None, 0),
)

STAGES = ("initial", "after_step1", "after_step2", "final")


@dataclass(frozen=True)
class VertexType:
    """Type-table row assigned to a vertex of degree >= 6.

    For the positional rows (9c, 8c) ``mc_scaled`` is None and ``central``
    names the middle of the three consecutive 5-neighbours: the central
    sender may send 1, the flanking two 9/10.
    """

    label: str
    mc_scaled: Optional[int]
    central: Optional[int] = None

    def max_charge_scaled(self, sender: int) -> int:
        if self.mc_scaled is not None:
            return self.mc_scaled
        return 180 if sender == self.central else 162

    def max_charge(self, sender: int) -> Fraction:
        return Fraction(self.max_charge_scaled(sender), SCALE)


@dataclass(frozen=True)
class Transfer:
    source: Tuple[str, int]
    target: Tuple[str, int]
    amount: Fraction
    step: int


@dataclass
class ChargeState:
    """Exact charges per vertex and face plus the transfer ledger."""

    stage: str
    vertex_scaled: Dict[int, int]
    face_scaled: Dict[int, int]
    ledger: List[Transfer] = field(default_factory=list)
    step2_inflow_scaled: Dict[int, int] = field(default_factory=dict)
    fully_discharged: Dict[int, bool] = field(default_factory=dict)

    @property
    def vertex_charge(self) -> Dict[int, Fraction]:
        return {v: Fraction(c, SCALE) for v, c in self.vertex_scaled.items()}

    @property
    def face_charge(self) -> Dict[int, Fraction]:
        return {f: Fraction(c, SCALE) for f, c in self.face_scaled.items()}

    def total(self) -> Fraction:
        return Fraction(sum(self.vertex_scaled.values()) + sum(self.face_scaled.values()), SCALE)

    def copy(self, stage: str) -> "ChargeState":
        return ChargeState(
            stage=stage,
            vertex_scaled=dict(self.vertex_scaled),
            face_scaled=dict(self.face_scaled),
            ledger=list(self.ledger),
            step2_inflow_scaled=dict(self.step2_inflow_scaled),
            fully_discharged=dict(self.fully_discharged),
        )


def _profile_type(degree: int, nontr: int, n5: int, consec_central: Optional[int]) -> VertexType:
    """Pure table lookup: first row whose conditions the profile satisfies."""
    for label, dtest, min_nontr, n5_rule, mc in _TYPE_TABLE:
        if not dtest(degree):
            continue
        if nontr < min_nontr:
            continue
        if n5_rule == "3c":
            if consec_central is None:
                continue
            return VertexType(label=label, mc_scaled=None, central=consec_central)
        if n5_rule is not None and n5 > n5_rule:
            continue
        return VertexType(label=label, mc_scaled=mc)
    raise AssertionError(f"type table has no row for degree {degree}")


def classify_types(eg: EmbeddedGraph) -> Dict[int, VertexType]:
    """Assign every vertex of degree >= 6 its first-matching table type."""
    g = eg.graph
    out = {}
    for v in g.vertex_list:
        d = g.degree(v)
        if d < 6:
            continue
        n5 = sum(1 for u in g.neighbors(v) if g.degree(u) == 5)
        nontr = nontriangular_face_count(eg, v)
        consec, central = consecutive_five_neighbours(eg, v)
        out[v] = _profile_type(d, nontr, n5, central if consec else None)
    return out


def initial_charges(eg: EmbeddedGraph) -> ChargeState:
    """6-d per d-vertex, 2(3-l) per l-face; totals 12 per component."""
    g = eg.graph
    return ChargeState(
        stage="initial",
        vertex_scaled={v: (6 - g.degree(v)) * SCALE for v in g.vertex_list},
        face_scaled={i: 2 * (3 - f.length) * SCALE for i, f in enumerate(eg.faces)},
    )


def _move(state: ChargeState, src, dst, amount: int, step: int, with_ledger: bool) -> None:
    kind_s, id_s = src
    kind_d, id_d = dst
    if kind_s == "v":
        state.vertex_scaled[id_s] -= amount
    else:
        state.face_scaled[id_s] -= amount
    if kind_d == "v":
        state.vertex_scaled[id_d] += amount
    else:
        state.face_scaled[id_d] += amount
    if with_ledger:
        state.ledger.append(Transfer(source=src, target=dst, amount=Fraction(amount, SCALE), step=step))


def step1_face_discharge(state: ChargeState, eg: EmbeddedGraph, with_ledger: bool = True) -> ChargeState:
    """Send 2/5, 3/5 or 1/2 from each vertex into each incident 4+-face,
    once per boundary visit (a cut vertex seen twice on one face sends
    twice)."""
    if state.stage != "initial":
        raise ValueError(f"step 1 expects stage 'initial', got {state.stage!r}")
    out = state.copy("after_step1")
    g = eg.graph
    for v in g.vertex_list:
        dv = g.degree(v)
        for f, a, b in eg.face_incidence[v]:
            if eg.faces[f].length < 4:
                continue
            if dv == 6:
                amt = 72  # 2/5
            elif g.degree(a) == 6 and g.degree(b) == 6:
                amt = 108  # 3/5
            else:
                amt = 90  # 1/2
            _move(out, ("v", v), ("f", f), amt, 1, with_ledger)
    return out


class DistanceDischargeInstance(NamedTuple):
    """One firing of the distance-discharging rule.

    The witness path (v1, v2, v3, v4) is consecutive in the receiver's
    rotation with degrees (6+, 6, 6, 6+); the sender is a 5-vertex adjacent
    to v2 and v3; all six vertices are pairwise distinct."""

    sender: int
    receiver: int
    witness_path: Tuple[int, int, int, int]


def distance_discharge_instances(eg: EmbeddedGraph, strict: bool = True):
    """Yield every firing of the distance-discharging rule (see the module
    docstring for the strict/relaxed pattern)."""
    g = eg.graph
    five_nbrs = {}

    def fives(v: int):
        got = five_nbrs.get(v)
        if got is None:
            got = five_nbrs[v] = [u for u in eg.rotation[v] if g.degree(u) == 5]
        return got

    for w in g.vertex_list:
        k = g.degree(w)
        if k < 7:
            continue
        rot = eg.rotation[w]
        for i in range(k):
            v1 = rot[i]
            v2 = rot[(i + 1) % k]
            v3 = rot[(i + 2) % k]
            v4 = rot[(i + 3) % k]
            if g.degree(v2) != 6 or g.degree(v3) != 6:
                continue
            if g.degree(v1) < 6 or g.degree(v4) < 6:
                continue
            path = (v1, v2, v3, v4)
            if strict:
                if any(
                    eg.faces[eg.face_at_corner(w, (i + t) % k)].length != 3
                    for t in range(3)
                ):
                    continue
                corner_face = eg.face_at_corner(w, (i + 1) % k)
                far = eg.dart_face[(v2, v3)]
                if far == corner_face:
                    far = eg.dart_face[(v3, v2)]
                if eg.faces[far].length != 3:
                    continue
                x = next(u for u, _ in eg.faces[far].boundary if u not in (v2, v3))
                if g.degree(x) != 5 or x == w or x == v1 or x == v4:
                    continue
                if g.has_edge(x, v1) or g.has_edge(x, v4):
                    continue
                if fives(v2) != [x] or fives(v3) != [x]:
                    continue
                yield DistanceDischargeInstance(x, w, path)
            else:
                if not (g.has_edge(v1, v2) and g.has_edge(v2, v3) and g.has_edge(v3, v4)):
                    continue
                for x in sorted(g.neighbors(v2) & g.neighbors(v3)):
                    if g.degree(x) != 5 or x in (w, v1, v4):
                        continue
                    yield DistanceDischargeInstance(x, w, path)


def step2_distance_discharge(
    state: ChargeState, eg: EmbeddedGraph, strict: bool = True, with_ledger: bool = True
) -> ChargeState:
    """1/5 per distance-discharging instance; one sender may fire several
    witness paths (one transfer each)."""
    if state.stage != "after_step1":
        raise ValueError(f"step 2 expects stage 'after_step1', got {state.stage!r}")
    out = state.copy("after_step2")
    for x, w, _path in distance_discharge_instances(eg, strict=strict):
        _move(out, ("v", x), ("v", w), 36, 2, with_ledger)  # 1/5
        out.step2_inflow_scaled[w] = out.step2_inflow_scaled.get(w, 0) + 36
    return out


def step3_final_discharge(
    state: ChargeState,
    eg: EmbeddedGraph,
    types: Dict[int, VertexType],
    with_ledger: bool = True,
) -> ChargeState:
    """Each 5-vertex pays its degree->=6 neighbours in descending max-charge
    order (ties by ascending id), every send capped at the remaining charge,
    clamped at zero (a 5-vertex that went negative in step 1 sends
    nothing)."""
    if state.stage != "after_step2":
        raise ValueError(f"step 3 expects stage 'after_step2', got {state.stage!r}")
    out = state.copy("final")
    g = eg.graph
    for v in g.vertex_list:
        if g.degree(v) != 5:
            continue
        targets = []
        for w in g.neighbors(v):
            t = types.get(w)
            if t is not None:
                targets.append((-t.max_charge_scaled(v), w))
        targets.sort()
        charge = out.vertex_scaled[v]
        for neg_mc, w in targets:
            amt = min(-neg_mc, max(0, charge))
            if amt > 0:
                _move(out, ("v", v), ("v", w), amt, 3, with_ledger)
                charge -= amt
        out.fully_discharged[v] = charge == 0
    return out


def run_discharging(
    eg: EmbeddedGraph,
    strict: bool = True,
    with_ledger: bool = True,
    check: bool = True,
) -> ChargeState:
    """Run the full procedure; verifies conservation after every step and
    the distance-discharging inflow cap on the final state (check=True)."""
    s0 = initial_charges(eg)
    expected = s0.total()
    s1 = step1_face_discharge(s0, eg, with_ledger=with_ledger)
    s2 = step2_distance_discharge(s1, eg, strict=strict, with_ledger=with_ledger)
    s3 = step3_final_discharge(s2, eg, classify_types(eg), with_ledger=with_ledger)
    if check:
        for st in (s1, s2, s3):
            if st.total() != expected:
                raise CounterexampleFound(
                    f"charge not conserved at stage {st.stage}: {st.total()} != {expected}",
                    graph6=graph6_bytes(eg.graph).decode(),
                )
        bad = lemma12_violations(s3, eg)
        if bad:
            raise CounterexampleFound(
                f"distance-discharging inflow cap violated at {bad[0][0]}",
                graph6=graph6_bytes(eg.graph).decode(),
                details=bad,
            )
    return s3


def expected_total(eg: EmbeddedGraph) -> Fraction:
    """12 per connected component (isolated vertices count via their empty
    face)."""
    return Fraction(12 * len(connected_components(eg.graph)), 1)


def lemma12_violations(state: ChargeState, eg: EmbeddedGraph):
    """Receivers whose step-2 inflow exceeds the cap
    floor((k-m-1)/3)/5 (m > 0) resp. floor(k/3)/5 (m = 0)."""
    g = eg.graph
    out = []
    for w, inflow in sorted(state.step2_inflow_scaled.items()):
        k = g.degree(w)
        m = sum(1 for u in g.neighbors(w) if g.degree(u) == 5)
        cap_units = (k - m - 1) // 3 if m > 0 else k // 3
        cap = max(0, cap_units) * 36
        if inflow > cap:
            out.append((w, Fraction(inflow, SCALE), Fraction(cap, SCALE)))
    return out


@dataclass(frozen=True)
class FaceChargeReport:
    """Outcome of the all-faces-nonpositive check (needs min degree 5)."""

    hypothesis_met: bool
    face_violations: Tuple[Tuple[int, Fraction], ...]
    vertex_total: Fraction
    passed: bool


def check_lemma_faces(final: ChargeState, eg: EmbeddedGraph) -> FaceChargeReport:
    """After discharging on a connected min-degree-5 plane graph, no face is
    positive and the vertices retain at least the full 12."""
    g = eg.graph
    if len(g) == 0 or min(g.degree(v) for v in g.vertex_list) < 5:
        return FaceChargeReport(
            hypothesis_met=False,
            face_violations=(),
            vertex_total=Fraction(sum(final.vertex_scaled.values()), SCALE),
            passed=False,
        )
    violations = tuple(
        (f, Fraction(c, SCALE)) for f, c in sorted(final.face_scaled.items()) if c > 0
    )
    vertex_total = Fraction(sum(final.vertex_scaled.values()), SCALE)
    return FaceChargeReport(
        hypothesis_met=True,
        face_violations=violations,
        vertex_total=vertex_total,
        passed=not violations and vertex_total >= 12,
    )


# Types whose non-positivity is unconditional arithmetic (initial charge
# plus capped inflows can never exceed zero); a positive final charge on one
# of these indicates an engine bug, not an interesting graph.
ARITHMETIC_TYPES = frozenset(
    {"10a", "9a", "9b", "9c", "8a", "8b", "8c", "8d", "7a", "7b", "7c", "6a", "6b"}
)


def positive_six_plus(state: ChargeState, eg: EmbeddedGraph, types: Dict[int, VertexType]):
    """Vertices of degree >= 6 with positive final charge, split into
    (arithmetic-type violations, hotspot-type vertices).

    The first list must always be empty (hard invariant); the second list
    (types 10b/9d/8e/7d) is legitimate data for the reduction search."""
    hard = []
    hotspots = []
    for v, c in state.vertex_scaled.items():
        if c <= 0 or eg.graph.degree(v) < 6:
            continue
        label = types[v].label
        if label in ARITHMETIC_TYPES:
            hard.append((v, label, Fraction(c, SCALE)))
        else:
            hotspots.append((v, label, Fraction(c, SCALE)))
    return hard, hotspots


def charge_report_rows(eg: EmbeddedGraph, final: ChargeState, types: Optional[Dict[int, VertexType]] = None):
    """CSV rows: id, kind, degree/length, type, initial charge, per-step
    deltas, final charge.  Rationals are rendered 'p/q' in lowest terms."""
    if types is None:
        types = classify_types(eg)
    delta = {1: {}, 2: {}, 3: {}}
    for t in final.ledger:
        delta[t.step][t.source] = delta[t.step].get(t.source, 0) - t.amount
        delta[t.step][t.target] = delta[t.step].get(t.target, 0) + t.amount

    def frac(x) -> str:
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"

    g = eg.graph
    for v in g.vertex_list:
        key = ("v", v)
        initial = Fraction(6 - g.degree(v), 1)
        yield (
            str(v),
            "vertex",
            str(g.degree(v)),
            types[v].label if v in types else "",
            frac(initial),
            frac(delta[1].get(key, 0)),
            frac(delta[2].get(key, 0)),
            frac(delta[3].get(key, 0)),
            frac(Fraction(final.vertex_scaled[v], SCALE)),
        )
    for i, f in enumerate(eg.faces):
        key = ("f", i)
        initial = Fraction(2 * (3 - f.length), 1)
        yield (
            f"f{i}",
            "face",
            str(f.length),
            "",
            frac(initial),
            frac(delta[1].get(key, 0)),
            frac(delta[2].get(key, 0)),
            frac(delta[3].get(key, 0)),
            frac(Fraction(final.face_scaled[i], SCALE)),
        )
