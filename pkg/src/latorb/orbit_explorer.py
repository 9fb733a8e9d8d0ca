"""Empirical probe of orbit density on the unit hyperboloid in u^⊥.

Walks the orbit of a starting point under the integral stabilizer
generators, recording nearest-approach statistics to a fixed target set.
Distances are coordinate-Euclidean, not form-invariant: on the relevant
topology that detects the same dense subsets, and it is cheap.  The
generator set is only known to generate a subgroup of the full integral
stabilizer, so stagnating statistics never refute anything — the CSV
header repeats that caveat.
"""

import io
import random
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGram, NotIsotropic, NotPositiveNorm, NotPrimitive
from .isometries import gu_lattice_generators, invert
from .lattice_core import (
    QuadLattice,
    inner,
    is_isotropic,
    is_primitive,
    split_hyperbolic,
)

POINT_TOL = 1e-9
DEDUP_TOL = 1e-7
NORM_CAP = 1e6
FRONTIER_CAP = 4096

CSV_CAVEAT = (
    "# caveat: the walk uses a fixed finite generator set which may "
    "generate a proper subgroup of the full integral stabilizer; "
    "stagnating min_dist is NOT evidence against density"
)


@dataclass(frozen=True)
class HyperboloidPoint:
    """Float coordinate vector intended to satisfy (v,v)=1 and (v,u)=0."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(float(x) for x in self.coords)
        )

    def defects(self, L: QuadLattice, u=None):
        """Returns (|(v,v) - 1|, |(v,u)|) under the lattice form."""
        g = np.array([list(r) for r in L.gram], dtype=float)
        v = np.array(self.coords)
        norm_defect = abs(float(v @ g @ v) - 1.0)
        if u is None:
            return norm_defect, 0.0
        return norm_defect, abs(float(v @ g @ np.array(u, dtype=float)))


def check_point(L: QuadLattice, point: HyperboloidPoint, u=None, tol=POINT_TOL):
    norm_defect, pairing_defect = point.defects(L, u)
    return norm_defect <= tol and pairing_defect <= tol


def project_to_hyperboloid(L: QuadLattice, v, u=None) -> HyperboloidPoint:
    """Removes the u-pairing defect, then rescales to unit norm.

    The correction direction is the z-vector of the hyperbolic splitting
    at u, so the moved point stays in the real span of u^⊥ plus the
    defect direction; a nonpositive-norm result cannot be rescaled.
    """
    w = np.array([float(x) for x in v])
    g = np.array([list(r) for r in L.gram], dtype=float)
    if u is not None:
        uv = np.array(u, dtype=float)
        defect = float(w @ g @ uv)
        if defect != 0.0:
            z = np.array(split_hyperbolic(L, tuple(u))[0], dtype=float)
            w = w - defect * z
    norm = float(w @ g @ w)
    if norm <= 0:
        raise NotPositiveNorm("component has nonpositive norm")
    return HyperboloidPoint(tuple(w / norm ** 0.5))


def _reflection_matrix(g, w):
    """Real reflection in the (non-null) vector w, as a matrix."""
    n = float(w @ g @ w)
    return np.eye(len(w)) - 2.0 * np.outer(w, w @ g) / n


def gu_real_transitive_move(L: QuadLattice, u, y, yprime, tol=POINT_TOL):
    """Real form-isometry fixing u and carrying y to yprime.

    A product of two reflections in vectors orthogonal to u: either the
    difference y − y′ (completed by a mirror fixing y′) or, when that
    difference is nearly null, the pair y + y′ and y′.  Transversal
    auxiliary directions are retried over the coordinate basis before
    giving up.
    """
    g = np.array([list(r) for r in L.gram], dtype=float)
    yv = np.array(y.coords if isinstance(y, HyperboloidPoint) else y, dtype=float)
    pv = np.array(
        yprime.coords if isinstance(yprime, HyperboloidPoint) else yprime,
        dtype=float,
    )
    ny = float(yv @ g @ yv)
    np_ = float(pv @ g @ pv)
    if abs(ny - 1.0) > 1e-6 or abs(np_ - 1.0) > 1e-6 or abs(ny - np_) > 1e-6:
        raise ValueError("both vectors must have unit length")
    if u is not None:
        uv = np.array(u, dtype=float)
        if abs(float(yv @ g @ uv)) > 1e-6 or abs(float(pv @ g @ uv)) > 1e-6:
            raise ValueError("both vectors must be orthogonal to u")
    if np.max(np.abs(yv - pv)) <= tol:
        return np.eye(L.rank)
    s = float(yv @ g @ pv)
    diff = yv - pv
    diff_norm = float(diff @ g @ diff)  # 2 - 2s up to roundoff
    if abs(diff_norm) > abs(2.0 + 2.0 * s):
        first = _reflection_matrix(g, diff)
        second = _second_mirror(L, g, u, pv)
    else:
        first = _reflection_matrix(g, yv + pv)
        second = _reflection_matrix(g, pv)
    return second @ first


def _second_mirror(L, g, u, pv):
    """Mirror fixing u and pv, to restore orientation after one reflection."""
    if u is not None:
        uv = np.array(u, dtype=float)
        z = np.array(split_hyperbolic(L, tuple(u))[0], dtype=float)
    best = None
    for i in range(L.rank):
        cand = np.zeros(L.rank)
        cand[i] = 1.0
        if u is not None:
            cand = cand - float(cand @ g @ uv) * z
        cand = cand - float(cand @ g @ pv) * pv
        norm = abs(float(cand @ g @ cand))
        if norm > 1e-8 and (best is None or norm > best[0]):
            best = (norm, cand)
    if best is None:
        raise DegenerateGram("no transversal mirror direction found")
    return _reflection_matrix(g, best[1])


@dataclass(frozen=True)
class DensityRecord:
    depth: int
    target_id: int
    min_dist: float
    orbit_size: int


def explore(
    L: QuadLattice,
    u,
    y0: HyperboloidPoint,
    targets,
    depth,
    seed=0,
    dedup_tol=DEDUP_TOL,
    generators=None,
    norm_cap=NORM_CAP,
    frontier_cap=FRONTIER_CAP,
    point_sink=None,
):
    """Breadth-first orbit walk recording nearest approaches per depth.

    One DensityRecord per (depth, target): the running minimum Euclidean
    coordinate distance over every orbit point seen so far, plus the
    number of distinct points visited.  Deterministic for a fixed seed;
    the seed only drives the subsample used when a frontier exceeds
    frontier_cap.  A list passed as point_sink receives the coordinates
    of every visited point, for callers auditing the walk itself.
    """
    if u is not None:
        u = tuple(int(x) for x in u)
        if not is_isotropic(L, u):
            raise NotIsotropic("u must be isotropic")
        if not is_primitive(L, u):
            raise NotPrimitive("u must be primitive")
    if generators is None:
        generators = gu_lattice_generators(L, u)
    gens = list(generators)
    if not gens:
        raise ValueError("empty generator set")
    mats = []
    seen_mats = set()
    for h in gens:
        for m in (h.matrix, invert(h).matrix):
            if m not in seen_mats:
                seen_mats.add(m)
                mats.append(np.array([list(r) for r in m], dtype=float))
    if not check_point(L, y0, u, tol=1e-6):
        raise ValueError("y0 is not on the hyperboloid")
    target_pts = [
        t.coords if isinstance(t, HyperboloidPoint) else tuple(t)
        for t in targets
    ]
    target_arr = np.array(target_pts, dtype=float)
    rng = random.Random(seed)

    def keys_of(arr):
        grid = np.round(arr / dedup_tol).astype(np.int64)
        return [row.tobytes() for row in grid]

    visited = set()
    frontier = np.array([y0.coords], dtype=float)
    for key in keys_of(frontier):
        visited.add(key)
    if point_sink is not None:
        point_sink.append(tuple(y0.coords))
    best = None  # per-target running minima
    records = []
    orbit_size = 1
    for d in range(depth + 1):
        if frontier.size:
            dists = np.sqrt(
                ((frontier[:, None, :] - target_arr[None, :, :]) ** 2).sum(
                    axis=2
                )
            )
            level_min = dists.min(axis=0)
            best = level_min if best is None else np.minimum(best, level_min)
        for tid in range(len(target_pts)):
            records.append(
                DensityRecord(d, tid, float(best[tid]), orbit_size)
            )
        if d == depth or not frontier.size:
            if d == depth:
                break
            continue
        images = [frontier @ m.T for m in mats]
        stacked = np.concatenate(images, axis=0)
        keep = np.max(np.abs(stacked), axis=1) <= norm_cap
        stacked = stacked[keep]
        fresh_rows = []
        fresh_keys = set()
        for row, key in zip(stacked, keys_of(stacked)):
            if key in visited or key in fresh_keys:
                continue
            fresh_keys.add(key)
            fresh_rows.append(row)
        if len(fresh_rows) > frontier_cap:
            idx = sorted(rng.sample(range(len(fresh_rows)), frontier_cap))
            fresh_rows = [fresh_rows[i] for i in idx]
        for row in fresh_rows:
            visited.add(keys_of(np.array([row]))[0])
            if point_sink is not None:
                point_sink.append(tuple(row))
        orbit_size += len(fresh_rows)
        frontier = (
            np.array(fresh_rows) if fresh_rows else np.empty((0, L.rank))
        )
    return records


def records_to_csv(records):
    """CSV dump: caveat header, column names, 17-significant-digit floats."""
    out = io.StringIO()
    out.write(CSV_CAVEAT + "\n")
    out.write("depth,target_id,min_dist,orbit_size\n")
    for r in records:
        out.write(
            "%d,%d,%.17g,%d\n" % (r.depth, r.target_id, r.min_dist, r.orbit_size)
        )
    return out.getvalue()
