"""Hyperbolic propagator on the Poincare disk and Monte Carlo graph weights.

Conventions
-----------
* Boundary vertices are given by normalized angles t in [0, 1), i.e. the
  point exp(2 pi i t).
* kappa(u, v) is the angle at u, measured counterclockwise in units of a full
  turn, from the geodesic towards the boundary point 1 to the geodesic
  towards v.
* Coordinate columns of the weight form: free interior vertices in ``typeI``
  order, each as (x, y), followed (when they are free) by the boundary angles
  in ``typeII`` order. Rows follow the graph's edge order.
* Orientation: the determinant is multiplied by ``ORIENTATION_PER_VERTEX``
  once per free interior vertex. The value -1 is fixed by requiring the
  one-vertex chain graph to have weight x - 1/2 at boundary angle x; with it,
  the two-vertex chain gives +B_2(x)/2 as it should.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import CoincidenceError, DimensionError, DomainError
from .graphs import KGraph

__all__ = [
    "COINCIDENCE_EPS",
    "ORIENTATION_PER_VERTEX",
    "DEFAULT_BATCHES",
    "Configuration",
    "WeightEstimate",
    "boundary_point",
    "mobius_to_origin",
    "hyperbolic_angle",
    "angle_partials",
    "coordinate_columns",
    "weight_form_value",
    "weight_form_values",
    "sample_configuration",
    "mc_weight",
    "batch_generator",
]

COINCIDENCE_EPS = 1e-9
ORIENTATION_PER_VERTEX = -1
DEFAULT_BATCHES = 64
_CHUNK = 8192
_UNIFORM_SHARE = 0.3


@dataclass
class Configuration:
    interior: dict[str, complex]
    boundary: dict[str, float] = field(default_factory=dict)
    ordered: bool = False


@dataclass(frozen=True)
class WeightEstimate:
    value: float
    stderr: float
    samples: int
    seed: int


def boundary_point(t):
    """exp(2 pi i t) for normalized angle(s) t."""
    return np.exp(2j * np.pi * np.asarray(t, dtype=float))


def mobius_to_origin(u, t):
    """(t - u) / (1 - conj(u) t), the disk automorphism sending u to 0."""
    u = np.asarray(u, dtype=complex)
    t = np.asarray(t, dtype=complex)
    if np.any(np.abs(u) >= 1):
        raise DomainError("u must lie in the open unit disk")
    out = (t - u) / (1 - np.conj(u) * t)
    return out[()] if out.ndim == 0 else out


def _as_point(v, boundary: bool):
    return boundary_point(v) if boundary else np.asarray(v, dtype=complex)


def _check(u, p):
    if np.any(np.abs(u) >= 1):
        raise DomainError("interior point must satisfy |u| < 1")
    if np.any(np.abs(p - u) < COINCIDENCE_EPS):
        raise CoincidenceError("points coincide")


def _scalar(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def hyperbolic_angle(u, v, boundary: bool = False):
    """kappa(u, v) in [0, 1). With ``boundary=True`` v is a normalized boundary angle."""
    u = np.asarray(u, dtype=complex)
    p = _as_point(v, boundary)
    _check(u, p)
    ratio = (p - u) * (1 - np.conj(u)) / ((1 - np.conj(u) * p) * (1 - u))
    k = np.angle(ratio) / (2 * np.pi)
    k = np.where(k < 0, k + 1.0, k)
    k = np.where(k >= 1.0, k - 1.0, k)
    return _scalar(k)


def _partials_unchecked(u, p, boundary: bool):
    ub = np.conj(u)
    inv_d = 1 / (p - u)
    inv_q = 1 / (1 - ub * p)
    inv_1u = 1 / (1 - u)
    inv_1ub = 1 / (1 - ub)
    s = 1 / (2 * np.pi)
    du_x = (-inv_d + p * inv_q + inv_1u - inv_1ub).imag * s
    du_y = (-1j * inv_d - 1j * p * inv_q + 1j * inv_1u + 1j * inv_1ub).imag * s
    dv = inv_d + ub * inv_q
    if boundary:
        return du_x, du_y, (2j * np.pi * p * dv).imag * s
    return du_x, du_y, dv.imag * s, (1j * dv).imag * s


def angle_partials(u, v, boundary: bool = False):
    """Gradient of kappa(u, v) in (u_x, u_y, v_x, v_y), or (u_x, u_y, t) for a boundary v.

    Stacked along the last axis.
    """
    u = np.asarray(u, dtype=complex)
    p = _as_point(v, boundary)
    _check(u, p)
    return np.stack(_partials_unchecked(u, p, boundary), axis=-1)


def coordinate_columns(g: KGraph, boundary_free: Optional[bool] = None) -> list[tuple[str, str]]:
    """Column labels: (vertex, 'x'|'y') for free interior, (vertex, 't') for boundary.

    ``boundary_free=None`` decides from the edge count: boundary columns are
    used when E = 2 (#free interior) + #boundary, omitted when E = 2 (#free interior).
    """
    free = g.free_interior
    E, nb = len(g.edges), len(g.typeII)
    if boundary_free is None:
        if E == 2 * len(free) + nb:
            boundary_free = True
        elif E == 2 * len(free):
            boundary_free = False
        else:
            raise DimensionError(
                f"{E} edges but {2 * len(free)} interior and {nb} boundary coordinates"
            )
    cols = [(v, c) for v in free for c in ("x", "y")]
    if boundary_free:
        cols += [(b, "t") for b in g.typeII]
    if len(cols) != E:
        raise DimensionError(f"{E} edges but {len(cols)} free coordinates")
    return cols


def orientation_sign(g: KGraph) -> int:
    return ORIENTATION_PER_VERTEX ** len(g.free_interior)


def weight_form_values(
    g: KGraph,
    interior: Mapping[str, np.ndarray],
    boundary: Mapping[str, np.ndarray],
    boundary_free: Optional[bool] = None,
    check: bool = True,
) -> np.ndarray:
    """Vectorized weight-form density over many configurations.

    ``interior`` maps every type I label (the pinned one may be omitted) to an
    array of points; ``boundary`` maps type II labels to arrays of angles.
    With ``check=False`` coincident or out-of-disk samples give 0 instead of
    raising.
    """
    cols = coordinate_columns(g, boundary_free)
    col_index = {c: i for i, c in enumerate(cols)}
    E = len(cols)
    typeII = set(g.typeII)
    shape = None
    for arr in list(interior.values()) + list(boundary.values()):
        a = np.asarray(arr)
        if a.ndim:
            shape = a.shape
            break
    S = shape[0] if shape else 1
    pos = {v: np.broadcast_to(np.asarray(interior.get(v, 0j), dtype=complex), (S,)) for v in g.typeI}
    pos[g.pinned] = np.zeros(S, dtype=complex)
    bpos = {b: np.broadcast_to(boundary_point(boundary[b]), (S,)) for b in g.typeII}
    bad = np.zeros(S, dtype=bool)
    for v in g.free_interior:
        bad |= np.abs(pos[v]) >= 1
    M = np.zeros((S, E, E))
    for row, (s, t) in enumerate(g.edges):
        u = pos[s]
        on_boundary = t in typeII
        p = bpos[t] if on_boundary else pos[t]
        close = np.abs(p - u) < COINCIDENCE_EPS
        bad |= close
        with np.errstate(all="ignore"):
            parts = _partials_unchecked(u, p, on_boundary)
        if (s, "x") in col_index:
            M[:, row, col_index[(s, "x")]] += parts[0]
            M[:, row, col_index[(s, "y")]] += parts[1]
        if on_boundary:
            if (t, "t") in col_index:
                M[:, row, col_index[(t, "t")]] += parts[2]
        elif (t, "x") in col_index:
            M[:, row, col_index[(t, "x")]] += parts[2]
            M[:, row, col_index[(t, "y")]] += parts[3]
    # all pairs of interior points must be separated too
    labels = list(g.typeI)
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            bad |= np.abs(pos[labels[i]] - pos[labels[j]]) < COINCIDENCE_EPS
    if check and np.any(bad):
        if any(np.any(np.abs(pos[v]) >= 1) for v in g.free_interior):
            raise DomainError("interior point outside the open unit disk")
        raise CoincidenceError("configuration has coinciding points")
    M[bad] = np.eye(E) if E else M[bad]
    dets = np.linalg.det(M) if E else np.ones(S)
    dets = dets * orientation_sign(g)
    dets[bad] = 0.0
    return dets


def weight_form_value(g: KGraph, c: Configuration) -> float:
    """Weight-form density at one configuration (determinant of the angle Jacobian)."""
    if g.pinned in c.interior and c.interior[g.pinned] != 0:
        raise DomainError("pinned vertex must sit at 0")
    interior = {v: np.array([c.interior[v]], dtype=complex) for v in g.free_interior}
    boundary = {b: np.array([c.boundary[b]], dtype=float) for b in g.typeII}
    return float(weight_form_values(g, interior, boundary)[0])


def batch_generator(seed: int, batch: int) -> np.random.Generator:
    """PCG64 stream for one batch, derived from (seed, batch index) via SeedSequence."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(batch,))))


def _uniform_disk(rng: np.random.Generator, n: int) -> np.ndarray:
    r = np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def sample_configuration(g: KGraph, seed: int, ordered: bool = False) -> Configuration:
    """One configuration: interior points uniform on the disk, boundary angles uniform."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    while True:
        interior = {g.pinned: 0j}
        for v in g.free_interior:
            interior[v] = complex(_uniform_disk(rng, 1)[0])
        angles = rng.random(len(g.typeII))
        if ordered:
            angles = np.sort(angles)
        boundary = {b: float(a) for b, a in zip(g.typeII, angles)}
        pts = list(interior.values()) + [complex(boundary_point(a)) for a in boundary.values()]
        if all(
            abs(pts[i] - pts[j]) >= COINCIDENCE_EPS
            for i in range(len(pts))
            for j in range(i + 1, len(pts))
        ):
            return Configuration(interior, boundary, ordered)


def _placement_order(g: KGraph) -> list[str]:
    """Free interior vertices in breadth-first order from the pinned vertex."""
    adj: dict[str, set[str]] = {v: set() for v in list(g.typeI) + list(g.typeII)}
    for s, t in g.edges:
        adj[s].add(t)
        adj[t].add(s)
    order, seen, queue = [], {g.pinned}, [g.pinned]
    while queue:
        cur = queue.pop(0)
        for nb in sorted(adj[cur]):
            if nb not in seen and nb in g.typeI:
                seen.add(nb)
                order.append(nb)
                queue.append(nb)
    order += [v for v in g.free_interior if v not in seen]
    return order


def _draw_chunk(g, rng, n, order, fixed_boundary, ordered, proposal):
    """Draw n samples; return (interior, boundary, log-density) with density w.r.t. Lebesgue."""
    nb = len(g.typeII)
    if fixed_boundary is not None:
        boundary = {b: np.full(n, float(fixed_boundary[b])) for b in g.typeII}
        logp = np.zeros(n)
    else:
        angles = rng.random((n, nb))
        if ordered:
            angles = np.sort(angles, axis=1)
        boundary = {b: angles[:, i] for i, b in enumerate(g.typeII)}
        logp = np.full(n, math.log(math.factorial(nb)) if ordered else 0.0)
    bpts = {b: boundary_point(boundary[b]) for b in g.typeII}
    interior: dict[str, np.ndarray] = {g.pinned: np.zeros(n, dtype=complex)}
    if proposal == "uniform":
        for v in order:
            interior[v] = _uniform_disk(rng, n)
        logp += len(order) * -math.log(math.pi)
        return interior, boundary, logp
    nbrs: dict[str, set[str]] = {v: set() for v in g.typeI}
    for s, t in g.edges:
        nbrs[s].add(t)
        if t in nbrs:
            nbrs[t].add(s)
    placed = {g.pinned}
    for v in order:
        centers = [np.ones(n, dtype=complex)]
        for w in sorted(nbrs[v]):
            if w in placed:
                centers.append(interior[w])
            elif w in bpts:
                centers.append(bpts[w])
        C = np.stack(centers, axis=1)  # (n, k)
        k = C.shape[1]
        R = 1.0 + np.abs(C)
        weights = np.array([_UNIFORM_SHARE] + [(1 - _UNIFORM_SHARE) / k] * k)
        comp = rng.choice(k + 1, size=n, p=weights)
        rho = rng.random(n)
        theta = rng.random(n)
        x = np.sqrt(rho) * np.exp(2j * np.pi * theta)
        rows = np.arange(n)
        ci = np.clip(comp - 1, 0, k - 1)
        c_sel, R_sel = C[rows, ci], R[rows, ci]
        y = c_sel + R_sel * rho * np.exp(2j * np.pi * theta)
        pt = np.where(comp == 0, x, y)
        dens = _UNIFORM_SHARE / math.pi * (np.abs(pt) < 1)
        dist = np.abs(pt[:, None] - C)
        with np.errstate(divide="ignore", invalid="ignore"):
            radial = np.where(dist < R, 1.0 / (2 * np.pi * R * dist), 0.0)
        dens = dens + (1 - _UNIFORM_SHARE) / k * radial.sum(axis=1)
        with np.errstate(divide="ignore"):
            logp += np.log(dens)
        interior[v] = pt
        placed.add(v)
    return interior, boundary, logp


def _run_batch(g, seed, batch, n, order, fixed_boundary, ordered, proposal, boundary_free):
    rng = batch_generator(seed, batch)
    total = 0.0
    parts = []
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        interior, boundary, logp = _draw_chunk(g, rng, m, order, fixed_boundary, ordered, proposal)
        f = weight_form_values(g, interior, boundary, boundary_free, check=False)
        with np.errstate(over="ignore", invalid="ignore"):
            est = np.where(f != 0.0, f * np.exp(-logp), 0.0)
        est[~np.isfinite(est)] = 0.0
        parts.append(math.fsum(est.tolist()))
        done += m
    total = math.fsum(parts)
    return total, n


def mc_weight(
    g: KGraph,
    samples: int,
    seed: int,
    ordered: bool = False,
    *,
    fixed_boundary: Optional[Mapping[str, float]] = None,
    proposal: str = "mixture",
    batches: int = DEFAULT_BATCHES,
    threads: Optional[int] = None,
) -> WeightEstimate:
    """Monte Carlo estimate of the weight of ``g``.

    Boundary angles are integrated over [0, 1) (or the ordered sector when
    ``ordered``) unless ``fixed_boundary`` pins them. ``proposal="uniform"``
    samples interior points uniformly; the default ``"mixture"`` adds radial
    components centred at neighbouring vertices and at the point 1, which
    tames the integrable 1/distance singularities of the density. Samples are
    split into ``batches`` independent streams (at least 16) whose means give
    the standard error; the result depends only on (seed, samples, batches).
    ``threads`` defaults to the GW_THREADS environment variable, else 1.
    """
    if batches < 16:
        raise ValueError("at least 16 batches are required")
    if samples < batches:
        raise ValueError("need at least one sample per batch")
    if proposal not in ("mixture", "uniform"):
        raise ValueError("proposal must be 'mixture' or 'uniform'")
    if fixed_boundary is not None:
        missing = set(g.typeII) - set(fixed_boundary)
        if missing:
            raise ValueError(f"fixed_boundary lacks {sorted(missing)}")
        boundary_free = None
    else:
        boundary_free = True
    coordinate_columns(g, boundary_free)  # raises on dimension mismatch
    if threads is None:
        threads = int(os.environ.get("GW_THREADS", "1") or 1)
    threads = max(1, threads)
    order = _placement_order(g)
    sizes = [samples // batches + (1 if b < samples % batches else 0) for b in range(batches)]

    def job(b):
        return _run_batch(g, seed, b, sizes[b], order, fixed_boundary, ordered, proposal, boundary_free)

    if threads == 1:
        results = [job(b) for b in range(batches)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, range(batches)))
    sums = np.array([s for s, _ in results])
    counts = np.array([c for _, c in results], dtype=float)
    value = math.fsum(sums.tolist()) / samples
    means = sums / counts
    stderr = float(np.std(means, ddof=1) / math.sqrt(batches))
    return WeightEstimate(float(value), stderr, samples, int(seed))
