"""Exhaustive searches: lattice polygons by interior count, and PIP triangles.

Both searches work on integer coordinates with numpy and only convert to
exact rational objects for the (few) polygons they report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .geometry import Point2, RationalPolygon, make_polygon

IntPoly = tuple[tuple[int, int], ...]

_SYMMETRIES = (
    (1, 0, 0, 1),
    (-1, 0, 0, 1),
    (1, 0, 0, -1),
    (-1, 0, 0, -1),
    (0, 1, 1, 0),
    (0, -1, 1, 0),
    (0, 1, -1, 0),
    (0, -1, -1, 0),
)


def _hull(points) -> IntPoly:
    pts = sorted(set(points))
    if len(pts) < 3:
        return tuple(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(seq):
        out: list = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    return tuple(chain(pts)[:-1] + chain(pts[::-1])[:-1])


def canonical_form(vertices) -> IntPoly:
    """Least sorted vertex tuple over the square's symmetries, translated to the first quadrant."""
    best = None
    for a, b, c, d in _SYMMETRIES:
        w = [(a * x + b * y, c * x + d * y) for x, y in vertices]
        mx = min(p[0] for p in w)
        my = min(p[1] for p in w)
        t = tuple(sorted((x - mx, y - my) for x, y in w))
        if best is None or t < best:
            best = t
    return best


def lattice_counts(vertices: IntPoly) -> tuple[int, int, int]:
    """(interior, boundary, twice the area) of a CCW integral polygon via Pick."""
    n = len(vertices)
    a2 = b = 0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        a2 += x0 * y1 - x1 * y0
        b += math.gcd(x1 - x0, y1 - y0)
    return (a2 - b + 2) // 2, b, a2


def _unimodular_triangles(grid: int) -> set[IntPoly]:
    r = np.arange(-grid, grid + 1)
    x1, y1, x2, y2 = (a.ravel() for a in np.meshgrid(r, r, r, r, indexing="ij"))
    hit = x1 * y2 - x2 * y1 == 1
    seeds = set()
    for a, b, c, d in zip(x1[hit], y1[hit], x2[hit], y2[hit]):
        t = canonical_form(((0, 0), (int(a), int(b)), (int(c), int(d))))
        if max(max(p) for p in t) <= grid:
            seeds.add(t)
    return seeds


def iter_lattice_polygons(grid: int, max_interior: int) -> Iterator[tuple[IntPoly, int, int]]:
    """Every convex lattice polygon fitting in ``[0, grid]^2`` with at most
    ``max_interior`` interior points, once per class under translations and
    the symmetries of the square.

    Yields ``(ccw_vertices, interior, boundary)``.  Polygons grow one lattice
    point at a time from unimodular triangles; since interior counts only
    increase along the way, pruning at ``max_interior`` loses nothing.
    """
    G = grid
    seeds = _unimodular_triangles(G)
    seen = set(seeds)
    stack = list(seeds)
    gx, gy = np.meshgrid(np.arange(-G, G + 1), np.arange(-G, G + 1), indexing="ij")
    gx, gy = gx.ravel(), gy.ravel()
    while stack:
        P = _hull(stack.pop())
        I, b, a2 = lattice_counts(P)
        yield P, I, b
        V = np.array(P, dtype=np.int64)
        W = np.roll(V, -1, axis=0)
        w, h = int(V[:, 0].max()), int(V[:, 1].max())
        sel = (gx >= w - G) & (gx <= G) & (gy >= h - G) & (gy <= G)
        qx, qy = gx[sel], gy[sel]
        d = W - V
        s = d[:, 0][None, :] * (qy[:, None] - V[:, 1][None, :]) - d[:, 1][None, :] * (
            qx[:, None] - V[:, 0][None, :]
        )
        outside = (s < 0).any(axis=1)
        s, qx, qy = s[outside], qx[outside], qy[outside]
        if len(qx) == 0:
            continue
        # Edges visible from q form one cyclic run [start, end]; the new
        # hull keeps vertices end+1 .. start and inserts q.
        vis = s <= 0
        g = np.gcd(d[:, 0], d[:, 1])
        start = (vis & ~np.roll(vis, 1, axis=1)).argmax(axis=1)
        end = (vis & ~np.roll(vis, -1, axis=1)).argmax(axis=1)
        va, vb = V[start], W[end]
        b_new = (
            b
            - (vis * g[None, :]).sum(axis=1)
            + np.gcd(qx - va[:, 0], qy - va[:, 1])
            + np.gcd(vb[:, 0] - qx, vb[:, 1] - qy)
        )
        a2_new = a2 - (s * vis).sum(axis=1)
        I_new = (a2_new - b_new + 2) // 2
        n = len(P)
        for k in np.nonzero(I_new <= max_interior)[0]:
            keep = []
            j = (int(end[k]) + 1) % n
            while True:
                keep.append(P[j])
                if j == int(start[k]):
                    break
                j = (j + 1) % n
            keep.append((int(qx[k]), int(qy[k])))
            c = canonical_form(keep)
            if c not in seen:
                seen.add(c)
                stack.append(c)


def realizable_pairs(grid: int, max_interior: int) -> dict[tuple[int, int], IntPoly]:
    """Map each realized ``(I, b)`` to one witness polygon."""
    out: dict[tuple[int, int], IntPoly] = {}
    for P, I, b in iter_lattice_polygons(grid, max_interior):
        if (I, b) not in out or P < out[(I, b)]:
            out[(I, b)] = P
    return out


def to_polygon(vertices) -> RationalPolygon:
    return make_polygon([Point2(x, y) for x, y in vertices])


# ---------------------------------------------------------------------------
# PIP triangle scan


@dataclass(frozen=True)
class PipHit:
    interior: int
    boundary: int
    vertices: tuple[Point2, Point2, Point2]

    def csv_row(self) -> str:
        verts = ";".join(f"{v.x} {v.y}" for v in self.vertices)
        return f"{self.interior},{self.boundary},{verts}"


def _grid_triangles(d: int, bound: int):
    """Triangles on the grid ``(1/d) Z^2`` (scaled by ``d``) fitting a translate of
    ``[-bound, bound]^2``, one per class under integer translations: the
    lexicographically least vertex is taken in ``[0, 1)^2``.  Yields arrays of
    scaled vertex coordinates per choice of that vertex.
    """
    S = bound * d
    for x0 in range(d):
        for y0 in range(d):
            X, Y = np.meshgrid(
                np.arange(x0, x0 + 2 * S + 1), np.arange(y0 - 2 * S, y0 + 2 * S + 1), indexing="ij"
            )
            X, Y = X.ravel(), Y.ravel()
            later = (X > x0) | ((X == x0) & (Y > y0))
            X, Y = X[later], Y[later]
            i, j = np.triu_indices(len(X), 1)
            ymin = np.minimum(np.minimum(Y[i], Y[j]), y0)
            ymax = np.maximum(np.maximum(Y[i], Y[j]), y0)
            xmax = np.maximum(X[i], X[j])
            # Some integer shift t must put both [ymin, ymax] and [x0, xmax]
            # inside [-S, S] (in scaled units the shift is t*d).
            fits_y = -((S + ymin) // d) <= (S - ymax) // d
            fits_x = -((S + x0) // d) <= (S - xmax) // d
            cr = (X[i] - x0) * (Y[j] - y0) - (Y[i] - y0) * (X[j] - x0)
            ok = fits_x & fits_y & (cr != 0)
            i, j, cr = i[ok], j[ok], cr[ok]
            # Orient counterclockwise.
            swap = cr < 0
            ai = np.where(swap, j, i)
            bi = np.where(swap, i, j)
            yield (
                np.full(len(ai), x0, dtype=np.int64),
                np.full(len(ai), y0, dtype=np.int64),
                X[ai].astype(np.int64),
                Y[ai].astype(np.int64),
                X[bi].astype(np.int64),
                Y[bi].astype(np.int64),
            )


class _TriangleBatch:
    """Counterclockwise triangles ``v0 A B`` on the (1/d)-grid, ``v0`` lexicographically least.

    Every column of such a triangle is cut below by one or two edges and above
    by one or two edges; vertical edges only bound the column range.  Each
    edge ``p -> q`` keeps the lattice point ``(x, y)`` iff
    ``dx*(d*y - n*py) - dy*(d*x - n*px) >= 0``, which for ``dx != 0`` reads
    ``y >= ceil(.)`` or ``y <= floor(.)`` of one floor division.  Triangles
    are sorted by right-most vertex so that each column only touches a prefix.
    """

    def __init__(self, tri, d: int, dtype=np.int64):
        order = np.argsort(-np.maximum(tri[2], tri[4]), kind="stable")
        self.tri = tuple(a[order].astype(dtype) for a in tri)
        self.d = d
        ax, ay, bx, by, cx, cy = self.tri
        self.x0 = int(ax[0])  # shared by the whole batch
        self.xmax = np.maximum(bx, cx)
        edges = []
        for px, py, qx, qy in ((ax, ay, bx, by), (bx, by, cx, cy), (cx, cy, ax, ay)):
            dx, dy = qx - px, qy - py
            edges.append((dx, dy, px, py))
        e0, e1, e2 = edges
        pos1 = e1[0] > 0
        neg1 = e1[0] < 0
        neg2 = e2[0] < 0

        def pick(mask, first, second):
            return tuple(np.where(mask, f, s) for f, s in zip(first, second))

        self.lower = (e0, pick(pos1, e1, e0))
        upper1 = pick(neg2, e2, e1)
        self.upper = (upper1, pick(neg1, e1, upper1))

    def __len__(self) -> int:
        return len(self.tri[0])

    def counts(self, n: int, strict: bool = False) -> np.ndarray:
        """Lattice points of ``nT`` (``strict``: of its interior) per triangle."""
        d = self.d
        s = 1 if strict else 0
        # Bound for edge (dx, dy, px, py) in column x is floor((A*x + C) / |dx*d|)
        # with A = -dy*d and C = -n*(dx*py - dy*px) - s, negated for lower edges.
        def prep(edge):
            dx, dy, px, py = edge
            return -dy * d, -n * (dx * py - dy * px) - s, np.abs(dx) * d

        lows = [prep(e) for e in self.lower]
        ups = [prep(e) for e in self.upper]
        total = np.zeros(len(self), dtype=self.tri[0].dtype)
        xs_hi = self.xmax * n
        if strict:
            first = n * self.x0 // d + 1
            last_col = (xs_hi + d - 1) // d - 1
        else:
            first = -((-n * self.x0) // d)
            last_col = xs_hi // d
        # last_col is non-increasing along the batch.
        stop = len(self)
        for x in range(first, int(last_col[0]) + 1 if len(self) else first):
            while stop and last_col[stop - 1] < x:
                stop -= 1
            if not stop:
                break
            lo = None
            for A, C, B in lows:
                v = -((A[:stop] * x + C[:stop]) // B[:stop])
                lo = v if lo is None else np.maximum(lo, v)
            hi = None
            for A, C, B in ups:
                v = (A[:stop] * x + C[:stop]) // B[:stop]
                hi = v if hi is None else np.minimum(hi, v)
            total[:stop] += np.maximum(hi - lo + 1, 0)
        return total

    def select(self, mask: np.ndarray) -> _TriangleBatch:
        out = object.__new__(_TriangleBatch)
        out.tri = tuple(a[mask] for a in self.tri)
        out.d = self.d
        out.x0 = self.x0
        out.xmax = self.xmax[mask]
        out.lower = tuple(tuple(a[mask] for a in e) for e in self.lower)
        out.upper = tuple(tuple(a[mask] for a in e) for e in self.upper)
        return out


def _scan_grid(d: int, bound: int, horizon: int) -> list[PipHit]:
    hits = []
    # Largest intermediate is |n (dx py - dy px)| + |dy d x| with n <= N,
    # |dx|, |px| <= 2S + d and |dy|, |py| <= 4S + d in scaled units.
    S = bound * d
    N = max(horizon, 2)
    worst = N * 2 * (2 * S + d) * (4 * S + d) + (4 * S + d) * N * (2 * S + d) + 1
    dtype = np.int32 if worst < 2**30 else np.int64
    for tri in _grid_triangles(d, bound):
        if len(tri[0]) == 0:
            continue
        batch = _TriangleBatch(tri, d, dtype)
        ax, ay, bx, by, cx, cy = batch.tri
        twice_area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)  # scaled by d^2
        L1, L2 = batch.counts(1), batch.counts(2)
        # A PIP has L(n) = A n^2 + c n + 1, so L(2) - 2 L(1) + 1 = 2A.
        keep = d * d * (L2 - 2 * L1 + 1) == twice_area
        if not keep.any():
            continue
        batch = batch.select(keep)
        L1, L2 = L1[keep], L2[keep]
        # That quadratic must then match the count at every n <= horizon.
        alive = np.ones(len(batch), dtype=bool)
        for n in range(3, horizon + 1):
            pred2 = (n - 1) * (n - 2) - 2 * L1 * n * (n - 2) + L2 * n * (n - 1)
            alive &= 2 * batch.counts(n) == pred2
        interior = batch.counts(1, strict=True)
        boundary = L1 - interior
        tri = batch.tri
        for k in np.nonzero(alive)[0]:
            verts = [
                Point2(Fraction(int(tri[2 * m][k]), d), Fraction(int(tri[2 * m + 1][k]), d))
                for m in range(3)
            ]
            hits.append(PipHit(int(interior[k]), int(boundary[k]), _place(verts, bound)))
    return hits


def _place(verts: list[Point2], bound: int) -> tuple[Point2, Point2, Point2]:
    """Translate by the least integer vector that puts the triangle inside ``[-bound, bound]^2``."""
    tx = math.ceil(-bound - min(v.x for v in verts))
    ty = math.ceil(-bound - min(v.y for v in verts))
    shift = Point2(tx, ty)
    return tuple(sorted(v + shift for v in verts))  # type: ignore[return-value]


def pip_scan(max_den: int, bound: int, dilate_bound: int | None = None) -> list[PipHit]:
    """All PIP triangles with vertex denominators dividing some ``d <= max_den``
    that fit, after an integer translation, in ``[-bound, bound]^2``.

    Grids ``(1/d) Z^2`` contained in a larger scanned grid are skipped.  Each
    candidate's count must agree with the quadratic ``A n^2 + c n + 1``
    through ``n = 1, 2`` for every ``n`` up to ``dilate_bound``.  The default,
    ``3d``, samples every residue class of the period three times and makes
    the test exact; a smaller bound is faster but may admit non-PIPs.
    """
    if max_den < 0 or bound < 0:
        raise ValueError("max_den and bound must be non-negative")
    if dilate_bound is not None and dilate_bound < 1:
        raise ValueError("dilate_bound must be positive")
    dens = [d for d in range(1, max_den + 1) if not any(e % d == 0 for e in range(d + 1, max_den + 1))]
    hits: set[PipHit] = set()
    for d in dens:
        hits.update(_scan_grid(d, bound, 3 * d if dilate_bound is None else dilate_bound))
    return sorted(hits, key=lambda h: (h.interior, h.boundary, h.vertices))


PIP_SCAN_HEADER = "I,b,vertices"


def pip_scan_csv(hits: list[PipHit]) -> str:
    return "\n".join([PIP_SCAN_HEADER] + [h.csv_row() for h in hits]) + "\n"
