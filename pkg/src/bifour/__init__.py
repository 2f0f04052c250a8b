"""Discrete spectral toolkit for bilinear Fourier multipliers on periodic lattices."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BifourError,
    InvalidDimensionError,
    InvalidSizeError,
    LatticeMismatchError,
    NonpositivePeriodError,
    PreconditionError,
    RangeError,
    SymbolError,
    UnknownCheckError,
)
from .lattice import (  # noqa: E402
    Field,
    Lattice,
    ProductField,
    Spectrum,
    make_lattice,
    random_bandlimited,
    read_field,
    spectral_transform,
    write_field,
)
from .symbols import (  # noqa: E402
    BilinearSymbol,
    cone_partition,
    dual_transform,
    dyadic_piece,
    make_window_family,
    parse_symbol,
    symbol_library,
)
from .bilinear import adjoint_pairing, apply_bilinear, estimate_norm  # noqa: E402

__all__ = [
    "__version__",
    "BifourError",
    "InvalidDimensionError",
    "InvalidSizeError",
    "LatticeMismatchError",
    "NonpositivePeriodError",
    "PreconditionError",
    "RangeError",
    "SymbolError",
    "UnknownCheckError",
    "Field",
    "Lattice",
    "ProductField",
    "Spectrum",
    "make_lattice",
    "random_bandlimited",
    "read_field",
    "spectral_transform",
    "write_field",
    "BilinearSymbol",
    "cone_partition",
    "dual_transform",
    "dyadic_piece",
    "make_window_family",
    "parse_symbol",
    "symbol_library",
    "adjoint_pairing",
    "apply_bilinear",
    "estimate_norm",
]
