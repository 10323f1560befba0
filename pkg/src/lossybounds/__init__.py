"""Rate-distortion and quantization bounds on manifolds and fractals."""
from .kernels import BACKEND
from .regularity import (
    BallProbe,
    DensityBound,
    RegularityCertificate,
    globalize,
    layer_cake,
    product_certificate,
    scale_certificate,
    transfer,
    verify_certificate,
)
from .rd_bounds import (
    MultiLetterQuery,
    RDQuery,
    f_shannon,
    multi_letter_lower,
    rd_dimension_lower,
    rd_lower_explicit,
    rd_slb_numeric,
)
from .quant_bounds import (
    QuantQuery,
    coefficient_bounds,
    dimension_from_sequence,
    lower_bound_ln,
    quant_dimension_bounds,
    upper_bound_un,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BallProbe",
    "DensityBound",
    "RegularityCertificate",
    "globalize",
    "layer_cake",
    "product_certificate",
    "scale_certificate",
    "transfer",
    "verify_certificate",
    "MultiLetterQuery",
    "RDQuery",
    "f_shannon",
    "multi_letter_lower",
    "rd_dimension_lower",
    "rd_lower_explicit",
    "rd_slb_numeric",
    "QuantQuery",
    "coefficient_bounds",
    "dimension_from_sequence",
    "lower_bound_ln",
    "quant_dimension_bounds",
    "upper_bound_un",
]
