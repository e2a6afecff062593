"""Structure recognition for verified Gabor orthonormal sets.

Given a windowed enumeration of a set that already passed verification,
these routines recover the generating structure: the 1D standard form, the
2D strip classification (overlap-type vs tiling-type strips), and the
pseudo-standard product decomposition.  The slice operators gamma (observed
frequencies over a time region) and t_slice (time points carrying a given
frequency) are the basic probes.

All classifications are windowed: they describe the observed index range
relative to a reported anchor (the lexicographically smallest enumerated
point, translated to the origin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, InvariantViolation, PreconditionError
from .frame import check_onb
from .sets import (
    Box,
    CubeTiling2D,
    IndexedParam,
    Lattice1D,
    PointSet,
    Standard,
    TwoDTheorem,
    _dedup_rows,
    _sort_rows,
    tf_dim,
)
from .stft import EPS_INT, Window
from .tiling import check_tiling, recognize_2d_cube_tiling

_SWAP4 = [1, 0, 3, 2]


def _base_indices(m: int, d: int):
    return list(range(m)) + list(range(d, d + m))


def _child_indices(m: int, d: int):
    return list(range(m, d)) + list(range(d + m, 2 * d))


def _frac(x: float) -> float:
    f = x - math.floor(x + EPS_INT)
    return 0.0 if f > 1.0 - EPS_INT or abs(f) <= EPS_INT else f


def _ifloor(x: float) -> int:
    return int(math.floor(x + EPS_INT))


def gamma(s: PointSet, a: Box, freq_box: Box) -> np.ndarray:
    """Frequencies of points whose time part lies in ``a``, deduplicated."""
    d = tf_dim(s)
    if a.dim != d or freq_box.dim != d:
        raise DomainError("time region and frequency window must live in R^d")
    pts = s.enumerate(Box(a.lo + freq_box.lo, a.hi + freq_box.hi))
    if not len(pts):
        return np.empty((0, d))
    return _sort_rows(_dedup_rows(pts[:, d:]))


def t_slice(s: PointSet, a: Box, lam, expect_unique: bool = False) -> np.ndarray:
    """Time points of ``s`` inside ``a`` carrying the frequency ``lam``.

    With ``expect_unique`` (for a half-open unit cube over a verified ONB)
    more than one match raises ``InvariantViolation``.
    """
    d = tf_dim(s)
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if a.dim != d or lam.shape != (d,):
        raise DomainError("time region and frequency must live in R^d")
    fbox = Box(tuple(lam - 0.5), tuple(lam + 0.5))
    pts = s.enumerate(Box(a.lo + fbox.lo, a.hi + fbox.hi))
    if len(pts):
        pts = pts[np.max(np.abs(pts[:, d:] - lam), axis=1) <= EPS_INT]
    times = _sort_rows(_dedup_rows(pts[:, :d])) if len(pts) else np.empty((0, d))
    if expect_unique and len(times) > 1:
        raise InvariantViolation(
            f"t_slice returned {len(times)} time points over a unit cell at "
            f"frequency {tuple(lam)}; the input cannot be a verified ONB"
        )
    return times


def project_tf(s: PointSet, m: int, box: Box) -> np.ndarray:
    """Windowed image of the set under (s, t, lambda, nu) -> (s, lambda)."""
    d = tf_dim(s)
    if not 1 <= m < d:
        raise DomainError(f"need 1 <= m < {d}, got {m}")
    pts = s.enumerate(box)
    if not len(pts):
        return np.empty((0, 2 * m))
    return _sort_rows(_dedup_rows(pts[:, _base_indices(m, d)]))


def restrict(s: PointSet, m: int, c_lo, child_box: Box) -> np.ndarray:
    """Points (t, nu) with (s, t, lambda, nu) in the set and (s, lambda) in
    the half-open unit cube at ``c_lo``."""
    d = tf_dim(s)
    if not 1 <= m < d:
        raise DomainError(f"need 1 <= m < {d}, got {m}")
    c_lo = np.asarray(c_lo, dtype=float)
    if c_lo.shape != (2 * m,) or child_box.dim != 2 * (d - m):
        raise DomainError("restriction cube/box dimensions do not match the split")
    bi, ci = _base_indices(m, d), _child_indices(m, d)
    lo = np.empty(2 * d)
    hi = np.empty(2 * d)
    lo[bi], hi[bi] = c_lo, c_lo + 1.0
    lo[ci], hi[ci] = child_box.lo, child_box.hi
    pts = s.enumerate(Box(tuple(lo), tuple(hi)))
    if not len(pts):
        return np.empty((0, 2 * (d - m)))
    return _sort_rows(_dedup_rows(pts[:, ci]))


@dataclass(frozen=True)
class ClassifyFailure:
    reason: str
    witness: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "classified": False,
            "reason": self.reason,
            "witness": None if self.witness is None else list(self.witness),
        }


@dataclass(frozen=True)
class Classification1D:
    """Standard form: times Z + time_offset, spectrum offset per time cell.

    Parameters are absolute (fractional parts of the observed coordinates),
    so ``reconstruct`` re-enumerates to the classified window verbatim, and
    classifying the reconstruction is a fixed point.
    """

    time_offset: float
    spectra_offsets: dict  # time cell j = floor(t) -> spectrum offset in [0,1)

    def reconstruct(self) -> Standard:
        spectra = {(k,): Lattice1D(b) for k, b in self.spectra_offsets.items()}
        return Standard(1, Lattice1D(self.time_offset), spectra, Lattice1D(0.0))

    def to_json(self) -> dict:
        from .sets import to_json

        return {
            "classified": True,
            "form": "standard",
            "time_offset": self.time_offset,
            "spectra_offsets": {str(k): v for k, v in sorted(self.spectra_offsets.items())},
            "set": to_json(self.reconstruct()),
        }


def classify_1d(s: PointSet, box: Box):
    """Recognize the standard structure of a 1D Gabor ONB set.

    Caller contract: the set passed ``check_onb`` in d=1 on the box.  The
    time projection must be a lattice Z + c (the only unit-interval tiling
    orientation compatible with orthogonality); the per-cell spectrum
    offsets are then read off as fractional parts.  Returns
    ``Classification1D`` or a ``ClassifyFailure`` carrying the violating
    difference vector.
    """
    if tf_dim(s) != 1:
        raise DomainError("classify_1d needs a set in R^2")
    pts = s.enumerate(box)
    if not len(pts):
        raise PreconditionError("no points in the query box")
    report = check_tiling(pts, box)
    if not report.ok:
        raise PreconditionError(f"input is not a tiling on the box: {report.verdict}")
    c_time = _single_frac(pts[:, 0])
    if c_time is not None:
        # Time-lattice form: each column's spectrum is a unit-interval
        # tiling of the line, hence a lattice with a single offset.
        cells = np.array([_ifloor(x - c_time) for x in pts[:, 0]])
        offsets = {}
        for j in np.unique(cells):
            b = _single_frac(pts[cells == j][:, 1])
            if b is None:
                raise InvariantViolation(
                    f"time cell {int(j)} carries a non-lattice frequency column; "
                    "the input cannot be a verified tiling"
                )
            offsets[int(j)] = b
        return Classification1D(c_time, offsets)
    c_freq = _single_frac(pts[:, 1])
    if c_freq is None:
        raise InvariantViolation(
            "tiling is neither rows- nor columns-form, contradicting the "
            "strip structure of unit-square tilings"
        )
    # Rows form with varying time offsets: impossible for an orthogonal
    # system, since adjacent rows differ by (a_{k+1} - a_k, 1).
    rows = np.array([_ifloor(y - c_freq) for y in pts[:, 1]])
    offs = {int(k): _single_frac(pts[rows == k][:, 0]) for k in np.unique(rows)}
    ks = sorted(offs)
    for k0, k1 in zip(ks[:-1], ks[1:]):
        if offs[k0] is None or offs[k1] is None:
            continue
        delta = offs[k1] - offs[k0]
        if min(abs(delta), 1.0 - abs(delta)) > 10 * EPS_INT:
            return ClassifyFailure(
                "rows-form tiling: adjacent strips with non-integer time offset "
                "difference cannot be mutually orthogonal",
                witness=(delta, float(k1 - k0)),
            )
    return ClassifyFailure("rows-form tiling with inconsistent offsets", None)


@dataclass(frozen=True)
class OverlapStrip:
    nu: dict  # k -> frequency offset of row k (constant for verified inputs)
    t: dict  # k -> time offset t_{n,k}
    mu: dict  # (k, m) -> frequency offset mu_{k,m,n}

    @property
    def nu_constant(self) -> bool:
        vals = sorted(set(round(v / EPS_INT) for v in self.nu.values()))
        return len(vals) <= 1

    def to_json(self) -> dict:
        return {
            "kind": "overlap",
            "nu": {str(k): v for k, v in sorted(self.nu.items())},
            "t": {str(k): v for k, v in sorted(self.t.items())},
            "mu": {f"[{k},{m}]": v for (k, m), v in sorted(self.mu.items())},
        }


@dataclass(frozen=True)
class TilingStrip:
    t: float  # common time offset t_n of the strip
    spectra: dict  # m -> CubeTiling2D for the cell (m, n)

    def to_json(self) -> dict:
        from .sets import to_json

        return {
            "kind": "tiling",
            "t": self.t,
            "spectra": {str(m): to_json(v) for m, v in sorted(self.spectra.items())},
        }


@dataclass(frozen=True)
class Classification2D:
    axis: str  # "horizontal" | "vertical"
    degenerate: bool  # both orientations fit (integer lattice in time)
    anchor: tuple
    overlap: dict = field(default_factory=dict)  # n -> OverlapStrip
    tiling: dict = field(default_factory=dict)  # n -> TilingStrip
    nu_k_dependent: bool = False

    @property
    def also_standard(self) -> bool:
        return not self.overlap

    def reconstruct(self) -> TwoDTheorem:
        t_overlap = {}
        mu = {}
        nu = {}
        for n, strip in self.overlap.items():
            for k, v in strip.t.items():
                t_overlap[(n, k)] = v
            for (k, m), v in strip.mu.items():
                mu[(k, m, n)] = v
            if strip.nu:
                nu[(n,)] = next(iter(sorted(strip.nu.items())))[1]
        t_tiling = {}
        tile_strips = {}
        for n, strip in self.tiling.items():
            t_tiling[(n,)] = strip.t
            for m, fam in strip.spectra.items():
                tile_strips[(m, n)] = fam
        return TwoDTheorem(
            axis=self.axis,
            overlap_strips=frozenset(self.overlap),
            tiling_strips=frozenset(self.tiling),
            default_kind="tiling",
            t_overlap=IndexedParam(t_overlap),
            mu=IndexedParam(mu),
            nu_strip=IndexedParam(nu),
            t_tiling=IndexedParam(t_tiling),
            tile_strips=tile_strips,
        )

    def to_json(self) -> dict:
        from .sets import to_json

        strips = {}
        for n, strip in self.overlap.items():
            strips[str(n)] = strip.to_json()
        for n, strip in self.tiling.items():
            strips[str(n)] = strip.to_json()
        return {
            "classified": True,
            "form": "two_d_theorem",
            "axis": self.axis,
            "degenerate": self.degenerate,
            "also_standard": self.also_standard,
            "anchor": list(self.anchor),
            "strips": strips,
            "nu_k_dependent": self.nu_k_dependent,
            "set": to_json(self.reconstruct()),
        }


def _single_frac(values) -> Optional[float]:
    """The common fractional part of the values, or None if they disagree."""
    fr = [_frac(v) for v in values]
    a = fr[0]
    for f in fr[1:]:
        diff = abs(f - a)
        if min(diff, 1.0 - diff) > 10 * EPS_INT:
            return None
    return a


def _classify_2d_oriented(pts: np.ndarray, box: Box, axis: str, degenerate: bool,
                          anchor: tuple):
    """Extract the strip structure of anchored points (horizontal reading)."""
    strip_idx = np.round(pts[:, 1]).astype(int)
    freq_box = box.sub([2, 3])
    overlap = {}
    tiling = {}
    nu_k_dependent = False
    for n in np.unique(strip_idx):
        n = int(n)
        sub = pts[strip_idx == n]
        xs = sub[:, 0]
        cells = np.array([_ifloor(x) for x in xs])
        is_overlap = False
        for m in np.unique(cells):
            fr = sorted(set(round(_frac(x) / (10 * EPS_INT)) for x in xs[cells == m]))
            if len(fr) > 1:
                is_overlap = True
                break
        if is_overlap:
            nus = {}
            ts = {}
            mus = {}
            ks = np.array([_ifloor(fy) for fy in sub[:, 3]])
            for k in np.unique(ks):
                k = int(k)
                rows = sub[ks == k]
                nu_k = _single_frac(rows[:, 3])
                t_k = _single_frac(rows[:, 0])
                if nu_k is None or t_k is None:
                    return ClassifyFailure(
                        f"strip {n}: inconsistent offsets within frequency row {k}",
                        witness=tuple(rows[0]),
                    )
                nus[k] = nu_k
                ts[k] = t_k
                ms = np.array([_ifloor(x) for x in rows[:, 0]])
                for m in np.unique(ms):
                    m = int(m)
                    mu_km = _single_frac(rows[ms == m][:, 2])
                    if mu_km is None:
                        return ClassifyFailure(
                            f"strip {n}: inconsistent mu offsets in cell (k={k}, m={m})",
                            witness=tuple(rows[ms == m][0]),
                        )
                    mus[(k, m)] = mu_km
            if len(set(round(v / EPS_INT) for v in nus.values())) > 1:
                nu_k_dependent = True
            overlap[n] = OverlapStrip(nus, ts, mus)
        else:
            t_n = _single_frac(xs)
            if t_n is None:
                return ClassifyFailure(
                    f"strip {n}: tiling-type strip with varying time offset",
                    witness=tuple(sub[0]),
                )
            spectra = {}
            for m in np.unique(cells):
                m = int(m)
                freqs = sub[cells == m][:, 2:]
                rec = recognize_2d_cube_tiling(freqs, freq_box)
                if rec is None:
                    return ClassifyFailure(
                        f"strip {n}, cell {m}: frequency set is not a strip-form tiling",
                        witness=tuple(sub[cells == m][0]),
                    )
                fam_axis = "rows" if rec.axis in ("rows", "lattice") else "columns"
                spectra[m] = CubeTiling2D(
                    fam_axis, IndexedParam(dict(rec.offsets)), origin=rec.anchor
                )
            tiling[n] = TilingStrip(t_n, spectra)
    return Classification2D(axis, degenerate, anchor, overlap, tiling, nu_k_dependent)


def classify_2d(s: PointSet, box: Box):
    """Recover the two-strip-kind structure of a verified 2D Gabor ONB set.

    Caller contract: the set passed ``check_onb`` in d=2 on the box.  The
    orientation is decided from the time coordinates (all second coordinates
    integer => horizontal strips), strips are classified overlap-type vs
    tiling-type, parameters extracted, and the result re-enumerated against
    the input as a final consistency check.
    """
    if tf_dim(s) != 2:
        raise DomainError("classify_2d needs a set in R^4")
    pts = s.enumerate(box)
    if not len(pts):
        raise PreconditionError("no points in the query box")
    # Strip heights must be integers in one time coordinate.  Parameters are
    # read off as fractional parts, so only a fractional common strip height
    # needs an anchor shift; the usual case is anchor zero and the
    # reconstruction reproduces the input verbatim.
    c_y = _single_frac(pts[:, 1])
    c_x = _single_frac(pts[:, 0])
    if c_y is None and c_x is None:
        return ClassifyFailure(
            "neither time coordinate has a common fractional part; "
            "no strip structure fits",
            witness=tuple(pts[0]),
        )
    degenerate = c_y is not None and c_x is not None
    if c_y is not None:
        axis = "horizontal"
        anchor = (0.0, c_y, 0.0, 0.0)
    else:
        axis = "vertical"
        anchor = (c_x, 0.0, 0.0, 0.0)
    q = pts - np.asarray(anchor)
    qbox = box.translate(-np.asarray(anchor))
    if axis == "horizontal":
        oriented, obox = q, qbox
    else:
        oriented = _sort_rows(q[:, _SWAP4])
        obox = Box(tuple(qbox.lo[i] for i in _SWAP4), tuple(qbox.hi[i] for i in _SWAP4))
    result = _classify_2d_oriented(oriented, obox, axis, degenerate, anchor)
    if isinstance(result, ClassifyFailure):
        return result
    # Final equality check: the reconstruction must re-enumerate to the input.
    # The vertical variant swaps coordinates internally, so the anchored box
    # in original coordinates is the right query for both orientations.
    if not result.nu_k_dependent:
        rebuilt = result.reconstruct()
        expected = rebuilt.enumerate(qbox)
        if expected.shape != q.shape or not np.allclose(expected, q, atol=100 * EPS_INT):
            first = _first_mismatch(expected, q)
            raise InvariantViolation(
                f"classification does not re-enumerate to the input; first "
                f"differing point (anchored coordinates): {first}"
            )
    return result


def _first_mismatch(a: np.ndarray, b: np.ndarray):
    for i in range(max(len(a), len(b))):
        if i >= len(a):
            return tuple(b[i])
        if i >= len(b):
            return tuple(a[i])
        if not np.allclose(a[i], b[i], atol=100 * EPS_INT):
            return tuple(b[i])
    return None


@dataclass(frozen=True)
class PseudoDecomposition:
    ok: bool
    projection_tiling: object  # CoverageReport of the projected set
    base_points: Optional[np.ndarray] = None
    children: Optional[dict] = None  # base point tuple -> (t, nu) array
    failed_child: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"pseudo_standard": self.ok, "projection": self.projection_tiling.to_json()}
        if self.ok:
            out["base_points"] = [list(p) for p in self.base_points]
            out["children"] = {
                str(list(k)): [list(p) for p in v] for k, v in sorted(self.children.items())
            }
        elif self.failed_child is not None:
            out["failed_child"] = list(self.failed_child)
        return out


def check_pseudo_structure(s: PointSet, m: int, box: Box) -> PseudoDecomposition:
    """Detect the pseudo-standard product structure under the split d = m + n.

    The time-frequency projection to R^{2m} must tile the windowed box with
    unit cubes; if it does, the per-point restrictions are extracted and each
    is verified as a Gabor ONB set in dimension d - m.
    """
    d = tf_dim(s)
    if not 1 <= m < d:
        raise DomainError(f"need 1 <= m < {d}, got {m}")
    n_sub = d - m
    bi, ci = _base_indices(m, d), _child_indices(m, d)
    pts = s.enumerate(box)
    if not len(pts):
        raise PreconditionError("no points in the query box")
    proj_box = box.sub(bi)
    child_box = box.sub(ci)
    proj = _sort_rows(_dedup_rows(pts[:, bi]))
    report = check_tiling(proj, proj_box)
    if not report.ok:
        return PseudoDecomposition(False, report)
    w_child = Window.unit_cube(n_sub)
    children = {}
    from .sets import Explicit

    for bp in proj:
        mask = np.max(np.abs(pts[:, bi] - bp), axis=1) <= EPS_INT
        child_pts = _sort_rows(pts[mask][:, ci])
        verdict = check_onb(Explicit(child_pts), w_child, (), child_box)
        if not verdict.verdict:
            return PseudoDecomposition(False, report, failed_child=tuple(bp))
        children[tuple(bp)] = child_pts
    return PseudoDecomposition(True, report, proj, children)
