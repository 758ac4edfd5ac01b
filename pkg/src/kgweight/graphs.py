"""Kontsevich graphs: the data model, builders, rotations and a known-weight table.

Edge order is part of a graph: it fixes the sign of the weight form. All
builders list edges by source vertex in ``typeI`` order, and a vertex's
out-edges by target label (plain string order, so upper-case labels first).
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .errors import GraphFormatError
from .specfun import bernoulli_number, bernoulli_poly

__all__ = [
    "KGraph",
    "SignedGraph",
    "WeightDescriptor",
    "validate",
    "is_lie_graph",
    "build_main_graph",
    "build_bernoulli_graph",
    "build_b_subgraph",
    "build_wheel_graph",
    "cyclic_rotate",
    "gamma_prime_family",
    "known_weight",
    "render",
    "parse",
    "LABEL_PATTERN",
]

LABEL_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class KGraph:
    typeI: tuple[str, ...]
    typeII: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    pinned: str

    def __post_init__(self):
        object.__setattr__(self, "typeI", tuple(self.typeI))
        object.__setattr__(self, "typeII", tuple(self.typeII))
        object.__setattr__(self, "edges", tuple((str(s), str(t)) for s, t in self.edges))

    @property
    def free_interior(self) -> tuple[str, ...]:
        return tuple(v for v in self.typeI if v != self.pinned)

    def out_edges(self, v: str) -> list[tuple[str, str]]:
        return [e for e in self.edges if e[0] == v]

    def in_degree(self, v: str) -> int:
        return sum(1 for _, t in self.edges if t == v)


@dataclass(frozen=True)
class SignedGraph:
    sign: int
    graph: KGraph

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class WeightDescriptor:
    """A closed-form weight from the known-weight table.

    ``kind`` is ``"bernoulli"`` (value depends on the boundary angle x),
    ``"wheel"`` (a rational constant) or ``"two_edge_rational"`` (rational,
    of the form B_p B_q / 2, with p and q not determined structurally).
    """

    kind: str
    text: str
    order: Optional[int] = None
    constant: Optional[Fraction] = None

    def evaluate(self, x: Optional[float] = None):
        if self.kind == "bernoulli":
            if x is None:
                raise ValueError("this weight depends on the boundary angle x")
            return bernoulli_poly(self.order)(x) / _factorial(self.order)
        if self.constant is not None:
            return self.constant
        raise ValueError(f"descriptor {self.text!r} has no single numeric value")

    def __str__(self):
        return self.text


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def validate(g: KGraph) -> list[str]:
    """Every violated structural invariant, as short messages. Empty means ok."""
    problems: list[str] = []
    labels = list(g.typeI) + list(g.typeII)
    counts = Counter(labels)
    for lab, c in counts.items():
        if c > 1:
            problems.append(f"duplicate label: {lab}")
    for lab in labels:
        if not LABEL_PATTERN.match(lab):
            problems.append(f"invalid label: {lab!r}")
    if g.pinned not in g.typeI:
        problems.append(f"pinned vertex not type I: {g.pinned}")
    type1, type2 = set(g.typeI), set(g.typeII)
    for s, t in g.edges:
        if s in type2:
            problems.append(f"edge from type II: ({s},{t})")
        elif s not in type1:
            problems.append(f"unknown edge source: ({s},{t})")
        if t not in type1 and t not in type2:
            problems.append(f"unknown edge target: ({s},{t})")
        if s == t:
            problems.append(f"self-loop: ({s},{t})")
    return problems


def is_lie_graph(g: KGraph) -> bool:
    """Two type II vertices; every type I vertex has two out-edges and at most one in-edge.

    The pinned vertex is exempt from neither condition.
    """
    if validate(g):
        return False
    if len(g.typeII) != 2:
        return False
    for v in g.typeI:
        if len(g.out_edges(v)) != 2 or g.in_degree(v) > 1:
            return False
    return True


def _sorted_out(src: str, targets: list[str]) -> list[tuple[str, str]]:
    return [(src, t) for t in sorted(targets)]


def build_bernoulli_graph(n: int) -> KGraph:
    """Chain graph whose weight at boundary angle x is B_n(x)/n!.

    Vertices z (pinned, no out-edges), a1..an and one boundary vertex P.
    Every ai points at P; the ai form a path a1 -> a2 -> ... -> an -> z.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    chain = [f"a{i}" for i in range(1, n + 1)]
    edges: list[tuple[str, str]] = []
    for i, a in enumerate(chain):
        nxt = chain[i + 1] if i + 1 < n else "z"
        edges += _sorted_out(a, ["P", nxt])
    return KGraph(("z", *chain), ("P",), tuple(edges), "z")


def build_main_graph() -> KGraph:
    """The seven-vertex Lie graph with boundary vertices U, V.

    Core: z -> w, z -> V, w -> b, w -> V, b -> U, b -> V. The a-chain is the
    Bernoulli chain with n = 4 attached to U and ending at z.
    """
    out = {
        "z": ["V", "w"],
        "w": ["V", "b"],
        "b": ["U", "V"],
        "a1": ["U", "a2"],
        "a2": ["U", "a3"],
        "a3": ["U", "a4"],
        "a4": ["U", "z"],
    }
    typeI = ("z", "w", "b", "a1", "a2", "a3", "a4")
    edges = [e for v in typeI for e in _sorted_out(v, out[v])]
    return KGraph(typeI, ("U", "V"), tuple(edges), "z")


def build_b_subgraph() -> KGraph:
    """The part of the main graph that is integrated over b, with w pinned."""
    edges = _sorted_out("w", ["V", "b"]) + _sorted_out("b", ["U", "V"])
    return KGraph(("w", "b"), ("U", "V"), tuple(edges), "w")


def build_wheel_graph(k: int) -> KGraph:
    """Wheel: k type I vertices c1 -> c2 -> ... -> ck -> c1, each with a spoke to P."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cyc = [f"c{i}" for i in range(1, k + 1)]
    edges: list[tuple[str, str]] = []
    for i, c in enumerate(cyc):
        edges += _sorted_out(c, ["P", cyc[(i + 1) % k]]) if k > 1 else [(c, "P")]
    return KGraph(tuple(cyc), ("P",), tuple(edges), cyc[0])


def cyclic_rotate(g: KGraph) -> KGraph:
    """Relabel boundary targets along the cycle typeII[0] -> typeII[1] -> ... -> typeII[0]."""
    n = len(g.typeII)
    if n <= 1:
        return g
    shift = {g.typeII[i]: g.typeII[(i + 1) % n] for i in range(n)}
    edges = tuple((s, shift.get(t, t)) for s, t in g.edges)
    return KGraph(g.typeI, g.typeII, edges, g.pinned)


def gamma_prime_family(g: KGraph, one: Optional[str] = None) -> list[SignedGraph]:
    """All graphs obtained by retargeting any subset of edges to the boundary vertex ``one``.

    Only edges not already ending at ``one`` are candidates. Each member is
    signed by (-1)^(number of its edges ending at ``one``). Subsets are
    enumerated in binary counting order over the candidate edges (the empty
    subset first); duplicates are kept.
    """
    if one is None:
        if not g.typeII:
            raise ValueError("graph has no type II vertex")
        one = g.typeII[0]
    if one not in g.typeII:
        raise ValueError(f"{one} is not a type II vertex")
    candidates = [i for i, (_, t) in enumerate(g.edges) if t != one]
    family = []
    for mask in product((0, 1), repeat=len(candidates)):
        chosen = {candidates[i] for i, bit in enumerate(reversed(mask)) if bit}
        edges = tuple((s, one) if i in chosen else (s, t) for i, (s, t) in enumerate(g.edges))
        h = KGraph(g.typeI, g.typeII, edges, g.pinned)
        family.append(SignedGraph((-1) ** h.in_degree(one), h))
    return family


def _match_bernoulli_chain(g: KGraph) -> Optional[int]:
    if len(g.typeII) != 1:
        return None
    P = g.typeII[0]
    z = g.pinned
    if g.out_edges(z) or g.in_degree(z) != 1:
        return None
    free = g.free_interior
    if not free:
        return None
    nxt: dict[str, str] = {}
    for v in free:
        outs = g.out_edges(v)
        targets = sorted(t for _, t in outs)
        if len(outs) != 2 or targets.count(P) != 1:
            return None
        other = targets[0] if targets[1] == P else targets[1]
        if other == P or other not in g.typeI:
            return None
        nxt[v] = other
    # walk backwards from z: exactly one predecessor each step, covering all vertices
    prev = {t: s for s, t in nxt.items()}
    if len(prev) != len(nxt):
        return None
    seen, cur = 0, z
    while cur in prev:
        cur = prev[cur]
        seen += 1
        if seen > len(free):
            return None
    return seen if seen == len(free) else None


def _match_wheel(g: KGraph) -> Optional[int]:
    if len(g.typeII) != 1 or g.pinned not in g.typeI:
        return None
    P = g.typeII[0]
    verts = list(g.typeI)
    k = len(verts)
    nxt: dict[str, str] = {}
    for v in verts:
        outs = g.out_edges(v)
        spokes = [t for _, t in outs if t == P]
        others = [t for _, t in outs if t != P]
        if len(spokes) != 1:
            return None
        if k == 1:
            if others:
                return None
            continue
        if len(others) != 1 or others[0] not in g.typeI:
            return None
        nxt[v] = others[0]
    if k == 1:
        return 1
    cur, steps = verts[0], 0
    visited = set()
    while cur not in visited:
        visited.add(cur)
        cur = nxt[cur]
        steps += 1
    return k if cur == verts[0] and len(visited) == k else None


def known_weight(g: KGraph) -> Optional[WeightDescriptor]:
    """Closed-form weight when g matches a table entry, else None."""
    if validate(g):
        return None
    n = _match_bernoulli_chain(g)
    if n is not None:
        return WeightDescriptor("bernoulli", f"B_{n}(x)/{_factorial(n)}", order=n)
    k = _match_wheel(g)
    if k is not None:
        const = bernoulli_number(k) / (2 * _factorial(k))
        return WeightDescriptor("wheel", f"B_{k}/(2*{k}!) = {const}", order=k, constant=const)
    if is_lie_graph(g) and any(g.in_degree(t) == 2 for t in g.typeII):
        return WeightDescriptor("two_edge_rational", "rational: B_p*B_q/2 form")
    return None


def render(g: KGraph) -> str:
    """Canonical JSON text of a graph."""
    doc = {
        "typeI": list(g.typeI),
        "typeII": list(g.typeII),
        "edges": [list(e) for e in g.edges],
        "pinned": g.pinned,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False)


_FIELDS = {"typeI", "typeII", "edges", "pinned"}


def parse(text: str) -> KGraph:
    """Parse and validate a graph document; unknown fields and bad labels are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object")
    extra = set(doc) - _FIELDS
    missing = _FIELDS - set(doc)
    if extra:
        raise GraphFormatError(f"unknown fields: {sorted(extra)}")
    if missing:
        raise GraphFormatError(f"missing fields: {sorted(missing)}")

    def labels(key):
        val = doc[key]
        if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
            raise GraphFormatError(f"{key} must be an array of strings")
        return val

    type1, type2 = labels("typeI"), labels("typeII")
    edges = doc["edges"]
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e) for e in edges
    ):
        raise GraphFormatError("edges must be an array of 2-element string arrays")
    if not isinstance(doc["pinned"], str):
        raise GraphFormatError("pinned must be a string")
    for lab in type1 + type2 + [x for e in edges for x in e] + [doc["pinned"]]:
        if not LABEL_PATTERN.match(lab):
            raise GraphFormatError(f"invalid label: {lab!r}")
    g = KGraph(tuple(type1), tuple(type2), tuple(tuple(e) for e in edges), doc["pinned"])
    problems = validate(g)
    if problems:
        raise GraphFormatError("; ".join(problems))
    return g
