"""Trivariate semiquadratic APN functions over GF(2^m)^3: construction,
exhaustive verification and S-box export."""

__version__ = "0.1.0"

from ._accel import USE_NUMBA, backend_name
from .family import FamilyParams, Vec3, family_create, family_eval, family_lut
from .gf import ExtCtx, FieldCtx, ext_create, field_create
from .skewpoly import SkewPoly, skew
from .vectfun import Lut, differential_uniformity, image_multiplicity, walsh_spectrum

__all__ = [
    "USE_NUMBA",
    "backend_name",
    "ExtCtx",
    "FamilyParams",
    "FieldCtx",
    "Lut",
    "SkewPoly",
    "Vec3",
    "differential_uniformity",
    "ext_create",
    "family_create",
    "family_eval",
    "family_lut",
    "field_create",
    "image_multiplicity",
    "skew",
    "walsh_spectrum",
]
