"""Gabor orthonormal bases generated by the unit-cube window.

Construct, enumerate, verify (orthogonality + windowed tiling + Parseval
evidence) and classify the time-frequency sets whose cube-window Gabor
system is an orthonormal basis of L^2(R^d).
"""

from .classify import (
    Classification1D,
    Classification2D,
    ClassifyFailure,
    PseudoDecomposition,
    check_pseudo_structure,
    classify_1d,
    classify_2d,
    gamma,
    project_tf,
    restrict,
    t_slice,
)
from .errors import (
    ConstructionError,
    DomainError,
    InvariantViolation,
    PreconditionError,
    QuadratureError,
    UnsupportedWindowError,
)
from .frame import (
    CubeIndicator,
    GaussianLike,
    OnbVerdict,
    check_onb,
    coefficient,
    default_test_functions,
    parseval_shells,
    parseval_sum,
)
from .ortho import OrthoReport, Violation, check_orthogonality, verify_pair_quadrature
from .sets import (
    Box,
    CubeTiling2D,
    Explicit,
    IndexedParam,
    Lattice1D,
    PointSet,
    PseudoStandard,
    Standard,
    TwoDTheorem,
    difference_samples,
    enumerate_points,
    from_json,
    make_2d_theorem,
    make_pseudo_standard,
    make_standard,
    tf_dim,
    to_json,
)
from .stft import (
    EPS_INT,
    Window,
    WindowKind,
    in_zero_set,
    in_zero_set_many,
    near_integer,
    stft_1d,
    stft_nd,
    stft_quadrature,
)
from .tiling import (
    CoverageReport,
    Recognition2D,
    Witness,
    check_packing,
    check_tiling,
    convolution_oracle,
    estimate_density,
    interior_region,
    oracle_interior_slice,
    recognize_2d_cube_tiling,
)

__version__ = "0.1.0"
