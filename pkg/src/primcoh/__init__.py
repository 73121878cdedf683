"""Exact mapping-cone cohomology of cone-flat bundles on finite invariant models."""
from .bundle import (
    BundleData,
    EForm,
    check_cone_flat,
    curvature,
    nabla,
    phi_det_poly,
    tensor_power,
    tensor_product,
)
from .cone import (
    ConeComplex,
    ConeElement,
    apply,
    assemble,
    cohomology_dims,
    contract,
    verify_complex,
)
from .io import builtin_models, load_model, serialize_model
from .linalg import RatMatrix, RatPoly, det, invert, kernel_basis, matmul, rank
from .model import Form, ModelSpec, basis, differential, validate_model, wedge
from .vanishing import SweepRow, render_report, sweep, threshold

__all__ = [
    "BundleData", "EForm", "check_cone_flat", "curvature", "nabla", "phi_det_poly",
    "tensor_power", "tensor_product", "ConeComplex", "ConeElement", "apply", "assemble",
    "cohomology_dims", "contract", "verify_complex", "builtin_models", "load_model",
    "serialize_model", "RatMatrix", "RatPoly", "det", "invert", "kernel_basis", "matmul",
    "rank", "Form", "ModelSpec", "basis", "differential", "validate_model", "wedge",
    "SweepRow", "render_report", "sweep", "threshold",
]
