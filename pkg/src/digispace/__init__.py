"""Digital n-surfaces and the explicit parabolic equation on them."""

from .space import (
    DigitalSpace,
    ball,
    connected_components,
    degree,
    induced,
    join,
    make_space,
    rim,
)
from .topology import (
    classify_point,
    euler_characteristic,
    is_n_surface,
    is_orientable,
    is_surface_with_boundary,
    is_zero_sphere,
    surface_report,
    triangles,
)
from .catalog import (
    SearchSpec,
    build_ball,
    build_cycle,
    build_min_sphere,
    build_moebius_12,
    build_square_grid,
    build_tri_grid,
    catalog_selftest,
    find_projective_plane_11,
)
from .parabolic import (
    CoefficientMatrix,
    Field,
    lazy_uniform,
    run,
    spectral_solve,
    stationary,
    step,
)

__version__ = "0.1.0"
