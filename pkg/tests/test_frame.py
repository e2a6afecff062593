import math

import numpy as np
import pytest

from gaborcube.errors import DomainError, UnsupportedWindowError
from gaborcube.frame import (
    CubeIndicator,
    GaussianLike,
    check_onb,
    coefficient,
    default_test_functions,
    parseval_shells,
    parseval_sum,
)
from gaborcube.sets import Box, CubeTiling2D, Explicit, IndexedParam, Lattice1D, Standard
from gaborcube.stft import Window

from conftest import load_set

CUBE1 = Window.unit_cube(1)
Z2 = Standard(1, Lattice1D(0.0), {}, Lattice1D(0.0))

# Frozen: sum over Z x (Z cap [-1000,1000]) of |<chi_[0.3,0.8], shift>|^2,
# time window [-1, 1).  Computed once by the streaming sum and pinned.
FROZEN_Z2_PARTIAL = 0.49989867885013134


def test_cube_indicator_norm_and_label():
    f = CubeIndicator((0.3,), (0.8,))
    assert f.norm_sq == pytest.approx(0.5)
    assert "0.3" in f.label
    with pytest.raises(DomainError):
        CubeIndicator((0.5,), (0.5,))


def test_gaussian_like_norm_positive():
    g = GaussianLike((0.5,), 0.2, (-0.5,), (1.5,))
    assert 0 < g.norm_sq < 2.0
    with pytest.raises(DomainError):
        GaussianLike((0.0,), 0.0, (-1.0,), (1.0,))


def test_default_test_functions_cover_both_kinds():
    fns = default_test_functions(2)
    assert any(isinstance(f, CubeIndicator) for f in fns)
    assert any(isinstance(f, GaussianLike) for f in fns)


def test_coefficient_matches_direct_integral():
    # <chi_[0,1], e^{2 pi i lam .} chi_[0,1](. - t)> over the overlap
    f = CubeIndicator((0.0,), (1.0,))
    val = coefficient(f, [0.0], [1.0])
    assert val == pytest.approx(0.0, abs=1e-12)
    val = coefficient(f, [0.5], [0.0])
    assert val == pytest.approx(0.5, abs=1e-12)


def test_coefficient_gaussian_zero_frequency():
    g = GaussianLike((0.5,), 0.2, (-0.5,), (1.5,))
    val = coefficient(g, [0.0], [0.0])
    direct = math.sqrt(2 * math.pi) * 0.2 * math.erf(0.5 / (0.2 * math.sqrt(2)))
    assert val.real == pytest.approx(direct, rel=1e-6)
    assert abs(val.imag) < 1e-10


def test_parseval_sum_frozen_value():
    f = CubeIndicator((0.3,), (0.8,))
    trunc = Box((-1.0, -1000.0), (1.0, 1000.0))
    val = parseval_sum(f, Z2, CUBE1, trunc)
    assert val == pytest.approx(FROZEN_Z2_PARTIAL, abs=1e-12)


def test_parseval_ratio_tail_bound():
    # ratio below 1 by at most the pinned tail 2/(pi^2 * 1000) per coordinate
    f = CubeIndicator((0.3,), (0.8,))
    trunc = Box((-1.0, -1000.0), (1.0, 1000.0))
    ratio = parseval_sum(f, Z2, CUBE1, trunc) / f.norm_sq
    tail = 2.0 / (math.pi ** 2 * 1000)
    assert 1.0 - 2 * tail <= ratio <= 1.0 + 1e-12


def test_parseval_streaming_matches_direct_sum():
    f = CubeIndicator((0.3,), (0.8,))
    trunc = Box((-1.0, -40.0), (1.0, 40.0))
    streamed = parseval_sum(f, Z2, CUBE1, trunc)
    pts = Z2.enumerate(trunc)
    direct = sum(abs(coefficient(f, p[:1], p[1:])) ** 2 for p in pts)
    assert streamed == pytest.approx(direct, abs=1e-12)


def test_parseval_rejects_secant_window():
    f = CubeIndicator((0.3,), (0.8,))
    with pytest.raises(UnsupportedWindowError):
        parseval_sum(f, Z2, Window.hyperbolic_secant(), Box((-1.0, -4.0), (1.0, 4.0)))


def test_parseval_shells_increase():
    f = CubeIndicator((0.3,), (0.8,))
    rows = parseval_shells(f, Z2, CUBE1, Box((-1.0,), (1.0,)), [2, 8, 32, 128])
    values = [v for _, v in rows]
    assert values == sorted(values)
    assert values[-1] <= f.norm_sq + 1e-12


def test_check_onb_accepts_lattice():
    verdict = check_onb(Z2, CUBE1, (), Box((-3.0, -3.0), (3.0, 3.0)))
    assert verdict.verdict
    assert verdict.ortho.verdict and verdict.tiling.ok


def test_check_onb_rejects_non_orthogonal_tiling():
    s = load_set("bad-rows")
    verdict = check_onb(s, CUBE1, (), Box((-3.0, -3.0), (3.0, 3.0)))
    assert not verdict.verdict
    assert verdict.tiling.ok and not verdict.ortho.verdict


def test_check_onb_rejects_incomplete_packing():
    pts = CubeTiling2D("rows", IndexedParam()).enumerate(Box((-3.0, -3.0), (3.0, 3.0)))
    pts = pts[~np.all(pts == 0.0, axis=1)]
    verdict = check_onb(Explicit(pts), CUBE1, (), Box((-3.0, -3.0), (3.0, 3.0)))
    assert not verdict.verdict
    assert verdict.ortho.verdict and not verdict.tiling.ok


def test_check_onb_requires_trunc_for_tests():
    f = CubeIndicator((0.3,), (0.8,))
    with pytest.raises(DomainError):
        check_onb(Z2, CUBE1, (f,), Box((-3.0, -3.0), (3.0, 3.0)))


def test_check_onb_evidence_ratio_near_one():
    f = CubeIndicator((0.3,), (0.8,))
    verdict = check_onb(Z2, CUBE1, (f,), Box((-3.0, -3.0), (3.0, 3.0)),
                        trunc=Box((-1.0, -200.0), (1.0, 200.0)))
    (label, ratio), = verdict.parseval_ratios
    assert label == f.label
    assert ratio == pytest.approx(1.0, abs=2e-3)
