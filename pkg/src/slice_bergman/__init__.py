"""Slice regular Bergman space of the quaternionic unit ball and its
coordinate sphere bundle, with numerical verification suites."""

from ._kernels import backend
from .bergman import (
    DiskQuadrature,
    SliceSampledFunction,
    bergman_inner,
    bergman_inner_closed,
    bergman_norm,
    bergman_norm_closed,
    bergman_project,
    bergman_project_closed,
    disk_integrate,
    kernel_eval,
    kernel_extend,
    kernel_function,
    toeplitz,
    toeplitz_closed,
)
from .bundle import (
    HLElement,
    VerificationReport,
    bundle_isomorphism_check,
    bundle_projection,
    check_projection_continuity,
    check_section_continuity,
    hl_algebra,
    hl_metric,
    pullback_lift,
    pullback_membership,
    rho_metric,
    section,
    transition,
    trivialize,
)
from .quaternion import (
    E1,
    E2,
    E3,
    ONE,
    Frame,
    frame_coords,
    frame_rotate,
    quat,
    quat_conj_norm_inv,
    quat_mul,
    slice_decompose,
)
from .series import (
    SliceRegularSeries,
    SplitPair,
    bullet_product,
    cullen_derivative,
    d_components,
    evaluate,
    extend,
    representation_formula,
    split,
    star_product,
)

__version__ = "0.1.0"

__all__ = [
    "DiskQuadrature",
    "E1",
    "E2",
    "E3",
    "Frame",
    "HLElement",
    "ONE",
    "SliceRegularSeries",
    "SliceSampledFunction",
    "SplitPair",
    "VerificationReport",
    "backend",
    "bergman_inner",
    "bergman_inner_closed",
    "bergman_norm",
    "bergman_norm_closed",
    "bergman_project",
    "bergman_project_closed",
    "bullet_product",
    "bundle_isomorphism_check",
    "bundle_projection",
    "check_projection_continuity",
    "check_section_continuity",
    "cullen_derivative",
    "d_components",
    "disk_integrate",
    "evaluate",
    "extend",
    "frame_coords",
    "frame_rotate",
    "hl_algebra",
    "hl_metric",
    "kernel_eval",
    "kernel_extend",
    "kernel_function",
    "pullback_lift",
    "pullback_membership",
    "quat",
    "quat_conj_norm_inv",
    "quat_mul",
    "representation_formula",
    "rho_metric",
    "section",
    "slice_decompose",
    "split",
    "star_product",
    "toeplitz",
    "toeplitz_closed",
    "transition",
    "trivialize",
]
