import numpy as np
import pytest

from gaborcube.classify import (
    Classification1D,
    Classification2D,
    ClassifyFailure,
    check_pseudo_structure,
    classify_1d,
    classify_2d,
    gamma,
    project_tf,
    restrict,
    t_slice,
)
from gaborcube.errors import DomainError, InvariantViolation, PreconditionError
from gaborcube.sets import Box, Explicit, Lattice1D, Standard

from conftest import load_set, random_standard_1d, random_theorem_2d

BOX2 = Box((-3.0, -3.0), (3.0, 3.0))
BOX4 = Box((-3.0,) * 4, (3.0,) * 4)

FIXTURES_2D = ["lattice-z4", "standard-2d", "pseudo-standard", "mixed-strips",
               "theorem2d-horizontal", "theorem2d-vertical"]


def roundtrip_points(s, result, box):
    """Enumerate the reconstruction, undoing the anchor shift if any."""
    anchor = np.asarray(getattr(result, "anchor", (0.0,) * box.dim), dtype=float)
    rebuilt = result.reconstruct().enumerate(box.translate(-anchor))
    return rebuilt + anchor


# -- slice operators ---------------------------------------------------------

def test_gamma_collects_frequencies_over_region():
    s = Standard(1, Lattice1D(0.0), {(0,): Lattice1D(0.5)}, Lattice1D(0.0))
    cell = Box((0.0,), (1.0,))
    freqs = gamma(s, cell, Box((-2.0,), (2.0,)))
    assert freqs[:, 0].tolist() == [-1.5, -0.5, 0.5, 1.5]


def test_gamma_dimension_check():
    s = Standard(1, Lattice1D(0.0), {}, Lattice1D(0.0))
    with pytest.raises(DomainError):
        gamma(s, Box((0.0, 0.0), (1.0, 1.0)), Box((0.0,), (1.0,)))


def test_t_slice_unique_time_per_frequency():
    s = Standard(1, Lattice1D(0.0), {(0,): Lattice1D(0.5)}, Lattice1D(0.0))
    times = t_slice(s, Box((0.0,), (1.0,)), [0.5], expect_unique=True)
    assert times.tolist() == [[0.0]]
    empty = t_slice(s, Box((0.0,), (1.0,)), [0.25])
    assert len(empty) == 0


def test_t_slice_flags_duplicate_carriers():
    s = Explicit(np.array([[0.0, 0.5], [0.25, 0.5]]))
    with pytest.raises(InvariantViolation):
        t_slice(s, Box((0.0,), (1.0,)), [0.5], expect_unique=True)


def test_project_and_restrict_split_coordinates():
    # one point (s, t, lambda, nu) = (0, 0.5, 0.25, 0.75)
    s = Explicit(np.array([[0.0, 0.5, 0.25, 0.75]]))
    proj = project_tf(s, 1, BOX4)
    assert proj.tolist() == [[0.0, 0.25]]
    child = restrict(s, 1, [0.0, 0.0], Box((-1.0, -1.0), (1.0, 1.0)))
    assert child.tolist() == [[0.5, 0.75]]
    with pytest.raises(DomainError):
        project_tf(s, 2, BOX4)


# -- 1D classification -------------------------------------------------------

def test_classify_1d_lattice():
    result = classify_1d(load_set("lattice-z2"), BOX2)
    assert isinstance(result, Classification1D)
    assert set(result.spectra_offsets.values()) == {0.0}


def test_classify_1d_varying_offsets_round_trip():
    s = load_set("standard-1d-varying")
    result = classify_1d(s, BOX2)
    assert isinstance(result, Classification1D)
    assert np.allclose(roundtrip_points(s, result, BOX2), s.enumerate(BOX2))


def test_classify_1d_bad_rows_witness():
    result = classify_1d(load_set("bad-rows"), BOX2)
    assert isinstance(result, ClassifyFailure)
    assert result.witness == (0.5, 1.0)


def test_classify_1d_requires_tiling():
    pts = load_set("lattice-z2").enumerate(BOX2)
    pts = pts[~np.all(pts == 0.0, axis=1)]
    with pytest.raises(PreconditionError):
        classify_1d(Explicit(pts), BOX2)


@pytest.mark.parametrize("seed", range(10))
def test_classify_1d_random_round_trips(seed):
    rng = np.random.default_rng(1000 + seed)
    s = random_standard_1d(rng)
    result = classify_1d(s, BOX2)
    assert isinstance(result, Classification1D)
    assert np.allclose(roundtrip_points(s, result, BOX2), s.enumerate(BOX2))


# -- 2D classification -------------------------------------------------------

@pytest.mark.parametrize("name", FIXTURES_2D)
def test_classify_2d_fixture_round_trips(name):
    s = load_set(name)
    result = classify_2d(s, BOX4)
    assert isinstance(result, Classification2D)
    assert np.allclose(roundtrip_points(s, result, BOX4), s.enumerate(BOX4))


def test_classify_2d_mixed_strip_partition():
    result = classify_2d(load_set("mixed-strips"), BOX4)
    assert isinstance(result, Classification2D)
    assert len(result.tiling) == 1
    assert len(result.overlap) == 5
    assert not result.also_standard


def test_classify_2d_pure_tiling_is_also_standard():
    result = classify_2d(load_set("theorem2d-horizontal"), BOX4)
    assert isinstance(result, Classification2D)
    assert result.also_standard
    assert result.axis == "horizontal"


def test_classify_2d_vertical_axis_detected():
    result = classify_2d(load_set("theorem2d-vertical"), BOX4)
    assert isinstance(result, Classification2D)
    assert result.axis == "vertical"
    assert result.overlap and not result.tiling


def test_classify_2d_lattice_is_degenerate():
    result = classify_2d(load_set("lattice-z4"), BOX4)
    assert result.degenerate


@pytest.mark.parametrize("seed", range(10))
def test_classify_2d_random_round_trips(seed):
    rng = np.random.default_rng(2000 + seed)
    s = random_theorem_2d(rng)
    result = classify_2d(s, BOX4)
    assert isinstance(result, Classification2D)
    assert np.allclose(roundtrip_points(s, result, BOX4), s.enumerate(BOX4))
    # strip-kind partition sizes survive the anchor shift
    expected_overlap = sum(
        1 for n in range(-3, 3) if s.strip_kind(n) == "overlap"
    ) if s.axis == "horizontal" else None
    if expected_overlap is not None:
        assert len(result.overlap) == expected_overlap


def test_classify_2d_rejects_inconsistent_time_offsets():
    # time offsets alternating with the cell index m fit neither strip kind
    pts = load_set("lattice-z4").enumerate(BOX4)
    parity = np.floor(pts[:, [0]]) % 2
    shifted = pts + np.array([0.25, 0.0, 0.0, 0.0]) * parity
    result = classify_2d(Explicit(shifted), BOX4)
    assert isinstance(result, ClassifyFailure)


# -- pseudo-standard structure ----------------------------------------------

def test_pseudo_structure_detected_on_fixture():
    dec = check_pseudo_structure(load_set("pseudo-standard"), 1, BOX4)
    assert dec.ok
    assert dec.projection_tiling.ok
    assert len(dec.children) == len(dec.base_points)


def test_pseudo_structure_rejected_on_mixed():
    dec = check_pseudo_structure(load_set("mixed-strips"), 1, BOX4)
    assert not dec.ok
    assert not dec.projection_tiling.ok


def test_pseudo_structure_validates_split():
    with pytest.raises(DomainError):
        check_pseudo_structure(load_set("pseudo-standard"), 2, BOX4)
