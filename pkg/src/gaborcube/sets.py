"""Finite descriptions of (possibly infinite) time-frequency sets.

Every set is represented by a small parameter table plus defaults and can be
enumerated exactly inside any bounded half-open box.  Families:

* ``Explicit``       -- a literal point list.
* ``Lattice1D``      -- Z + offset in R (unit-interval tiling of the line).
* ``CubeTiling2D``   -- row/column strip families, the only unit-square
                        tilings of the plane.
* ``Standard``       -- union over a time tiling of per-cell spectra.
* ``PseudoStandard`` -- the recursive product gluing lower-dimensional bases,
                        with coordinates interleaved as (s, t, lambda, nu).
* ``TwoDTheorem``    -- the full two-dimensional family: a partition of the
                        strip indices into overlap-type and tiling-type strips.

All enumeration is pure; instances are immutable after construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import ConstructionError, DomainError
from .stft import EPS_INT

_EMPTY2 = np.empty((0, 2))


@dataclass(frozen=True)
class Box:
    """Axis-aligned half-open box [lo_i, hi_i)."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lo)
        hi = tuple(float(x) for x in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or not lo:
            raise DomainError("box lo/hi must be non-empty and equal length")
        if any(a >= b for a, b in zip(lo, hi)):
            raise DomainError("box requires lo_i < hi_i")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def centered(cls, radius: float, dim: int) -> "Box":
        if radius <= 0:
            raise DomainError("radius must be positive")
        return cls((-radius,) * dim, (radius,) * dim)

    def inflate(self, r: float) -> "Box":
        return Box(tuple(a - r for a in self.lo), tuple(b + r for b in self.hi))

    def shrink(self, r: float) -> "Box":
        return Box(tuple(a + r for a in self.lo), tuple(b - r for b in self.hi))

    def sub(self, idx) -> "Box":
        return Box(tuple(self.lo[i] for i in idx), tuple(self.hi[i] for i in idx))

    def contains(self, points: np.ndarray, eps: float = EPS_INT) -> np.ndarray:
        # Half-open membership with eps snapping of the boundary: points
        # within eps of lo count as inside, points within eps of hi as outside.
        p = np.atleast_2d(points)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return np.all((p >= lo - eps) & (p < hi - eps), axis=1)

    def translate(self, shift) -> "Box":
        s = np.asarray(shift, dtype=float)
        return Box(tuple(np.asarray(self.lo) + s), tuple(np.asarray(self.hi) + s))


def _key(t) -> tuple:
    return tuple(int(v) for v in np.atleast_1d(t))


@dataclass(frozen=True)
class IndexedParam:
    """Finite map from integer tuples to reals, with a default outside."""

    table: Mapping[tuple, float] = field(default_factory=dict)
    default: float = 0.0
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.table).items():
            k = _key(k)
            v = float(v)
            if not (self.lo <= v < self.hi):
                raise ConstructionError(f"parameter {k}={v} outside [{self.lo}, {self.hi})")
            clean[k] = v
        if not (self.lo <= self.default < self.hi):
            raise ConstructionError(f"default {self.default} outside [{self.lo}, {self.hi})")
        object.__setattr__(self, "table", clean)

    def __call__(self, *idx) -> float:
        return self.table.get(tuple(int(i) for i in idx), self.default)


def _ints_with_offset(lo: float, hi: float, offset: float = 0.0) -> np.ndarray:
    """Integers z with z + offset in [lo, hi)."""
    z0 = math.ceil(lo - offset - EPS_INT)
    z1 = math.ceil(hi - offset - EPS_INT)
    return np.arange(z0, z1)


def _sort_rows(points: np.ndarray) -> np.ndarray:
    if len(points) <= 1:
        return points
    order = np.lexsort(points.T[::-1])
    return points[order]


def _dedup_rows(points: np.ndarray, eps: float = EPS_INT) -> np.ndarray:
    if len(points) <= 1:
        return points
    snapped = np.round(points / eps) * eps
    _, idx = np.unique(snapped, axis=0, return_index=True)
    return points[np.sort(idx)]


class PointSet:
    """Base class: a discrete subset of R^n enumerable on bounded boxes."""

    n: int

    def _enumerate(self, box: Box) -> np.ndarray:
        raise NotImplementedError

    def enumerate(self, box: Box, sort: bool = True) -> np.ndarray:
        if box.dim != self.n:
            raise DomainError(f"box dimension {box.dim} != set dimension {self.n}")
        pts = np.asarray(self._enumerate(box), dtype=float)
        if pts.size == 0:
            return np.empty((0, self.n))
        pts = pts[box.contains(pts)]
        if sort:
            pts = _sort_rows(_dedup_rows(pts))
        return pts


@dataclass(frozen=True)
class Explicit(PointSet):
    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.size == 0:
            raise ConstructionError("explicit set needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ConstructionError("explicit points must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def _enumerate(self, box: Box) -> np.ndarray:
        return self.points


@dataclass(frozen=True)
class Lattice1D(PointSet):
    """Z + offset, the unit-interval tilings of the line."""

    offset: float = 0.0
    n = 1

    def _enumerate(self, box: Box) -> np.ndarray:
        zs = _ints_with_offset(box.lo[0], box.hi[0], self.offset % 1.0)
        return (zs + self.offset % 1.0).reshape(-1, 1) if len(zs) else np.empty((0, 1))


@dataclass(frozen=True)
class CubeTiling2D(PointSet):
    """Strip family: origin + (rows (Z+a_k) x {k} or columns {k} x (Z+a_k))."""

    axis: str  # "rows" | "columns"
    offsets: IndexedParam = field(default_factory=IndexedParam)
    origin: tuple = (0.0, 0.0)
    n = 2

    def __post_init__(self):
        if self.axis not in ("rows", "columns"):
            raise ConstructionError(f"axis must be 'rows' or 'columns', got {self.axis!r}")
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))

    def _enumerate(self, box: Box) -> np.ndarray:
        ox, oy = self.origin
        if self.axis == "rows":
            xlo, xhi = box.lo[0] - ox, box.hi[0] - ox
            ylo, yhi = box.lo[1] - oy, box.hi[1] - oy
        else:
            xlo, xhi = box.lo[1] - oy, box.hi[1] - oy
            ylo, yhi = box.lo[0] - ox, box.hi[0] - ox
        ks = _ints_with_offset(ylo, yhi)
        blocks = []
        for k in ks:
            a = self.offsets(k)
            xs = _ints_with_offset(xlo, xhi, a) + a
            if not len(xs):
                continue
            blk = np.empty((len(xs), 2))
            blk[:, 0], blk[:, 1] = xs, float(k)
            blocks.append(blk)
        if not blocks:
            return _EMPTY2
        pts = np.concatenate(blocks)
        if self.axis == "columns":
            pts = pts[:, ::-1]
        return pts + np.asarray(self.origin)


@dataclass(frozen=True)
class Standard(PointSet):
    """Union over a time tiling J of {t} x spectrum_t (time-frequency set)."""

    d: int
    times: PointSet
    spectra: Mapping[tuple, PointSet] = field(default_factory=dict)
    default_spectrum: Optional[PointSet] = None

    def __post_init__(self):
        if self.times.n != self.d:
            raise DomainError(f"time family lives in R^{self.times.n}, need R^{self.d}")
        clean = {}
        for k, v in dict(self.spectra).items():
            if v.n != self.d:
                raise DomainError(f"spectrum for {k} lives in R^{v.n}, need R^{self.d}")
            clean[_key(k)] = v
        object.__setattr__(self, "spectra", clean)
        if self.default_spectrum is not None and self.default_spectrum.n != self.d:
            raise DomainError("default spectrum has wrong dimension")

    @property
    def n(self) -> int:
        return 2 * self.d

    def _spectrum_at(self, t: np.ndarray) -> PointSet:
        k = tuple(int(math.floor(v + EPS_INT)) for v in t)
        spec = self.spectra.get(k, self.default_spectrum)
        if spec is None:
            raise ConstructionError(f"no spectrum declared for time cell {k}")
        return spec

    def _enumerate(self, box: Box) -> np.ndarray:
        d = self.d
        tbox, fbox = box.sub(range(d)), box.sub(range(d, 2 * d))
        blocks = []
        for t in self.times.enumerate(tbox, sort=False):
            freqs = self._spectrum_at(t).enumerate(fbox, sort=False)
            if not len(freqs):
                continue
            blk = np.empty((len(freqs), 2 * d))
            blk[:, :d] = t
            blk[:, d:] = freqs
            blocks.append(blk)
        return np.concatenate(blocks) if blocks else np.empty((0, 2 * d))


@dataclass(frozen=True)
class PseudoStandard(PointSet):
    """Gluing of R^{2n} bases over the points of an R^{2m} base set.

    Coordinates interleave as (s, t, lambda, nu) with (s, lambda) the base
    time-frequency pair and (t, nu) the child pair.
    """

    m: int
    sub: int  # the paper-side n; "sub" avoids clashing with ambient dim n
    base: PointSet
    children: Mapping[tuple, PointSet] = field(default_factory=dict)
    default_child: Optional[PointSet] = None

    def __post_init__(self):
        if self.base.n != 2 * self.m:
            raise DomainError(f"base lives in R^{self.base.n}, need R^{2 * self.m}")
        clean = {}
        for k, v in dict(self.children).items():
            if v.n != 2 * self.sub:
                raise DomainError(f"child for {k} lives in R^{v.n}, need R^{2 * self.sub}")
            clean[_key(k)] = v
        object.__setattr__(self, "children", clean)
        if self.default_child is not None and self.default_child.n != 2 * self.sub:
            raise DomainError("default child has wrong dimension")

    @property
    def d(self) -> int:
        return self.m + self.sub

    @property
    def n(self) -> int:
        return 2 * self.d

    def base_indices(self):
        """Column indices of the base (s, lambda) coordinates in R^{2d}."""
        m, d = self.m, self.d
        return list(range(m)) + list(range(d, d + m))

    def child_indices(self):
        m, d = self.m, self.d
        return list(range(m, d)) + list(range(d + m, 2 * d))

    def child_at(self, base_point: np.ndarray) -> PointSet:
        k = tuple(int(math.floor(v + EPS_INT)) for v in base_point)
        child = self.children.get(k, self.default_child)
        if child is None:
            raise ConstructionError(f"no child declared for base cell {k}")
        return child

    def _enumerate(self, box: Box) -> np.ndarray:
        bi, ci = self.base_indices(), self.child_indices()
        bbox, cbox = box.sub(bi), box.sub(ci)
        blocks = []
        for bp in self.base.enumerate(bbox, sort=False):
            cpts = self.child_at(bp).enumerate(cbox, sort=False)
            if not len(cpts):
                continue
            blk = np.empty((len(cpts), self.n))
            blk[:, bi] = bp
            blk[:, ci] = cpts
            blocks.append(blk)
        return np.concatenate(blocks) if blocks else np.empty((0, self.n))


_SWAP4 = [1, 0, 3, 2]


@dataclass(frozen=True)
class TwoDTheorem(PointSet):
    """The complete d=2 family: strips are overlap-type or tiling-type.

    Horizontal orientation; strip index n is the integer second time
    coordinate.  Overlap strip n contributes points
    (m + t_overlap(n,k), n, j + mu(k,m,n), k + nu_strip(n)); tiling strip n
    contributes {(m + t_tiling(n), n)} x tile_strips[(m, n)].  The vertical
    orientation reuses the same code path through a coordinate swap.
    """

    axis: str  # "horizontal" | "vertical"
    overlap_strips: frozenset = frozenset()
    tiling_strips: frozenset = frozenset()
    default_kind: str = "tiling"  # strip kind outside the declared index range
    t_overlap: IndexedParam = field(default_factory=IndexedParam)  # keyed (n, k)
    mu: IndexedParam = field(default_factory=IndexedParam)  # keyed (k, m, n)
    nu_strip: IndexedParam = field(default_factory=IndexedParam)  # keyed (n,)
    t_tiling: IndexedParam = field(default_factory=IndexedParam)  # keyed (n,)
    tile_strips: Mapping[tuple, PointSet] = field(default_factory=dict)  # keyed (m, n)
    default_tile_strip: Optional[PointSet] = None
    n = 4

    def __post_init__(self):
        if self.axis not in ("horizontal", "vertical"):
            raise ConstructionError(f"axis must be horizontal/vertical, got {self.axis!r}")
        if self.default_kind not in ("tiling", "overlap"):
            raise ConstructionError("default_kind must be 'tiling' or 'overlap'")
        ov = frozenset(int(v) for v in self.overlap_strips)
        ti = frozenset(int(v) for v in self.tiling_strips)
        if ov & ti:
            raise ConstructionError(f"strips {sorted(ov & ti)} declared both overlap and tiling")
        object.__setattr__(self, "overlap_strips", ov)
        object.__setattr__(self, "tiling_strips", ti)
        clean = {}
        for k, v in dict(self.tile_strips).items():
            if v.n != 2:
                raise DomainError("tile-strip spectra must live in R^2")
            clean[_key(k)] = v
        object.__setattr__(self, "tile_strips", clean)
        if self.default_tile_strip is None:
            object.__setattr__(
                self, "default_tile_strip", CubeTiling2D("rows", IndexedParam())
            )

    def strip_kind(self, n: int) -> str:
        if n in self.overlap_strips:
            return "overlap"
        if n in self.tiling_strips:
            return "tiling"
        return self.default_kind

    def tile_strip_at(self, m: int, n: int) -> PointSet:
        return self.tile_strips.get((m, n), self.default_tile_strip)

    def _enumerate(self, box: Box) -> np.ndarray:
        if self.axis == "vertical":
            swapped = Box(tuple(box.lo[i] for i in _SWAP4), tuple(box.hi[i] for i in _SWAP4))
            pts = self._enumerate_horizontal(swapped)
            return pts[:, _SWAP4] if len(pts) else pts
        return self._enumerate_horizontal(box)

    def _enumerate_horizontal(self, box: Box) -> np.ndarray:
        xlo, xhi = box.lo[0], box.hi[0]
        flo0, fhi0 = box.lo[2], box.hi[2]
        flo1, fhi1 = box.lo[3], box.hi[3]
        fbox = Box((flo0, flo1), (fhi0, fhi1))
        blocks = []
        for n in _ints_with_offset(box.lo[1], box.hi[1]):
            n = int(n)
            if self.strip_kind(n) == "overlap":
                nu = self.nu_strip(n)
                for k in _ints_with_offset(flo1, fhi1, nu):
                    t = self.t_overlap(n, k)
                    for m in _ints_with_offset(xlo, xhi, t):
                        mo = self.mu(k, m, n)
                        js = _ints_with_offset(flo0, fhi0, mo)
                        if not len(js):
                            continue
                        blk = np.empty((len(js), 4))
                        blk[:, 0] = m + t
                        blk[:, 1] = float(n)
                        blk[:, 2] = js + mo
                        blk[:, 3] = k + nu
                        blocks.append(blk)
            else:
                t = self.t_tiling(n)
                for m in _ints_with_offset(xlo, xhi, t):
                    freqs = self.tile_strip_at(int(m), n).enumerate(fbox, sort=False)
                    if not len(freqs):
                        continue
                    blk = np.empty((len(freqs), 4))
                    blk[:, 0] = m + t
                    blk[:, 1] = float(n)
                    blk[:, 2:] = freqs
                    blocks.append(blk)
        return np.concatenate(blocks) if blocks else np.empty((0, 4))


def tf_dim(s: PointSet) -> int:
    """Time-frequency dimension d of a set living in R^{2d}."""
    if s.n % 2:
        raise DomainError(f"set in R^{s.n} is not a time-frequency set")
    return s.n // 2


def enumerate_points(s: PointSet, box: Box) -> np.ndarray:
    """All points of the set inside the half-open box, sorted, deduplicated."""
    return s.enumerate(box, sort=True)


def make_standard(d, times, spectra, default_spectrum=None) -> Standard:
    return Standard(d, times, spectra, default_spectrum)


def make_pseudo_standard(m, n, base, children, default_child=None) -> PseudoStandard:
    return PseudoStandard(m, n, base, children, default_child)


def make_2d_theorem(axis, overlap_strips, tiling_strips, *, default_kind="tiling",
                    t_overlap=None, mu=None, nu_strip=None, t_tiling=None,
                    tile_strips=None, default_tile_strip=None) -> TwoDTheorem:
    return TwoDTheorem(
        axis=axis,
        overlap_strips=frozenset(overlap_strips),
        tiling_strips=frozenset(tiling_strips),
        default_kind=default_kind,
        t_overlap=t_overlap or IndexedParam(),
        mu=mu or IndexedParam(),
        nu_strip=nu_strip or IndexedParam(),
        t_tiling=t_tiling or IndexedParam(),
        tile_strips=tile_strips or {},
        default_tile_strip=default_tile_strip,
    )


def difference_samples(s: PointSet, box: Box) -> np.ndarray:
    """All pairwise differences p - q (p != q) of the windowed enumeration."""
    pts = s.enumerate(box)
    if len(pts) < 2:
        return np.empty((0, s.n))
    diffs = (pts[:, None, :] - pts[None, :, :]).reshape(-1, s.n)
    nonzero = np.max(np.abs(diffs), axis=1) > EPS_INT
    return _sort_rows(_dedup_rows(diffs[nonzero]))


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------

def _key_to_str(k: tuple) -> str:
    return "[" + ",".join(str(int(v)) for v in k) + "]"


def _str_to_key(s: str) -> tuple:
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ConstructionError(f"bad table key {s!r}, expected '[k]' or '[k,m]'")
    return tuple(int(part) for part in s[1:-1].split(","))


def _param_to_json(p: IndexedParam) -> dict:
    out = {"default": p.default}
    if p.table:
        out["table"] = {_key_to_str(k): v for k, v in sorted(p.table.items())}
    return out


def _param_from_json(obj) -> IndexedParam:
    if obj is None:
        return IndexedParam()
    table = {_str_to_key(k): float(v) for k, v in obj.get("table", {}).items()}
    return IndexedParam(table=table, default=float(obj.get("default", 0.0)))


def to_json(s: PointSet) -> dict:
    """Canonical JSON description of a structured set."""
    if isinstance(s, Explicit):
        return {"type": "explicit", "points": [[float(v) for v in p] for p in s.points]}
    if isinstance(s, Lattice1D):
        return {"type": "lattice1d", "offset": float(s.offset)}
    if isinstance(s, CubeTiling2D):
        out = {"type": "cube_tiling_2d", "axis": s.axis, "offsets": _param_to_json(s.offsets)}
        if s.origin != (0.0, 0.0):
            out["origin"] = list(s.origin)
        return out
    if isinstance(s, Standard):
        out = {
            "type": "standard",
            "dim": s.d,
            "times": to_json(s.times),
            "spectra": {_key_to_str(k): to_json(v) for k, v in sorted(s.spectra.items())},
        }
        if s.default_spectrum is not None:
            out["default_spectrum"] = to_json(s.default_spectrum)
        return out
    if isinstance(s, PseudoStandard):
        out = {
            "type": "pseudo_standard",
            "m": s.m,
            "n": s.sub,
            "base": to_json(s.base),
            "children": {_key_to_str(k): to_json(v) for k, v in sorted(s.children.items())},
        }
        if s.default_child is not None:
            out["default_child"] = to_json(s.default_child)
        return out
    if isinstance(s, TwoDTheorem):
        return {
            "type": "two_d_theorem",
            "axis": s.axis,
            "overlap_strips": sorted(s.overlap_strips),
            "tiling_strips": sorted(s.tiling_strips),
            "default_kind": s.default_kind,
            "t_overlap": _param_to_json(s.t_overlap),
            "mu": _param_to_json(s.mu),
            "nu": _param_to_json(s.nu_strip),
            "t_tiling": _param_to_json(s.t_tiling),
            "tile_strips": {_key_to_str(k): to_json(v) for k, v in sorted(s.tile_strips.items())},
            "default_tile_strip": to_json(s.default_tile_strip),
        }
    raise ConstructionError(f"cannot serialize {type(s).__name__}")


def from_json(obj) -> PointSet:
    """Parse the canonical JSON description into a structured set."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConstructionError("structured-set JSON must be an object with a 'type' tag")
    kind = obj["type"]
    if kind == "explicit":
        return Explicit(np.asarray(obj["points"], dtype=float))
    if kind == "lattice1d":
        return Lattice1D(float(obj.get("offset", 0.0)))
    if kind == "cube_tiling_2d":
        return CubeTiling2D(
            obj["axis"],
            _param_from_json(obj.get("offsets")),
            tuple(obj.get("origin", (0.0, 0.0))),
        )
    if kind == "standard":
        return Standard(
            int(obj["dim"]),
            from_json(obj["times"]),
            {_str_to_key(k): from_json(v) for k, v in obj.get("spectra", {}).items()},
            from_json(obj["default_spectrum"]) if "default_spectrum" in obj else None,
        )
    if kind == "pseudo_standard":
        return PseudoStandard(
            int(obj["m"]),
            int(obj["n"]),
            from_json(obj["base"]),
            {_str_to_key(k): from_json(v) for k, v in obj.get("children", {}).items()},
            from_json(obj["default_child"]) if "default_child" in obj else None,
        )
    if kind == "two_d_theorem":
        return TwoDTheorem(
            axis=obj["axis"],
            overlap_strips=frozenset(obj.get("overlap_strips", [])),
            tiling_strips=frozenset(obj.get("tiling_strips", [])),
            default_kind=obj.get("default_kind", "tiling"),
            t_overlap=_param_from_json(obj.get("t_overlap")),
            mu=_param_from_json(obj.get("mu")),
            nu_strip=_param_from_json(obj.get("nu")),
            t_tiling=_param_from_json(obj.get("t_tiling")),
            tile_strips={
                _str_to_key(k): from_json(v) for k, v in obj.get("tile_strips", {}).items()
            },
            default_tile_strip=(
                from_json(obj["default_tile_strip"]) if "default_tile_strip" in obj else None
            ),
        )
    raise ConstructionError(f"unknown structured-set type {kind!r}")
