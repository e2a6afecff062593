import json
import pathlib

import pytest

from gaborcube.sets import from_json

ROOT = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture
def fixtures_dir():
    return ROOT / "examples"


def load_fixture(name):
    with open(ROOT / "examples" / f"{name}.json") as fh:
        return json.load(fh)


def load_set(name):
    return from_json(load_fixture(name))


def snap64(rng, size=None):
    """Random values on the 1/64 grid in [0, 1)."""
    vals = rng.integers(0, 64, size=size) / 64.0
    return float(vals) if size is None else vals


def random_standard_1d(rng, k_range=range(-6, 7)):
    """Random 1D standard set: times Z, per-cell spectrum offsets on 1/64."""
    from gaborcube.sets import Lattice1D, Standard

    spectra = {(k,): Lattice1D(snap64(rng)) for k in k_range}
    return Standard(1, Lattice1D(0.0), spectra, Lattice1D(0.0))


def random_theorem_2d(rng, n_range=range(-5, 6), k_range=range(-5, 6)):
    """Random 2D strip-structure set with 1/64-snapped parameters.

    Overlap strips are drawn with at least two distinct time offsets over
    the k range so the overlap/tiling dichotomy is unambiguous on any
    window meeting two of the rows.
    """
    from gaborcube.sets import CubeTiling2D, IndexedParam, make_2d_theorem

    axis = "horizontal" if rng.integers(2) else "vertical"
    overlap, tiling = [], []
    t_overlap, mu, nu, t_tiling, tile_strips = {}, {}, {}, {}, {}
    for n in n_range:
        if rng.integers(2):
            overlap.append(n)
            while True:
                ts = {k: snap64(rng) for k in k_range}
                if len(set(ts.values())) >= 2:
                    break
            for k, v in ts.items():
                t_overlap[(n, k)] = v
            nu[(n,)] = snap64(rng)
            for k in k_range:
                for m in range(-5, 6):
                    mu[(k, m, n)] = snap64(rng)
        else:
            tiling.append(n)
            t_tiling[(n,)] = snap64(rng)
            for m in range(-5, 6):
                fam_axis = "rows" if rng.integers(2) else "columns"
                offs = {(k,): snap64(rng) for k in k_range}
                tile_strips[(m, n)] = CubeTiling2D(fam_axis, IndexedParam(offs))
    return make_2d_theorem(
        axis, overlap, tiling, default_kind="tiling",
        t_overlap=IndexedParam(t_overlap), mu=IndexedParam(mu),
        nu_strip=IndexedParam(nu), t_tiling=IndexedParam(t_tiling),
        tile_strips=tile_strips,
    )
