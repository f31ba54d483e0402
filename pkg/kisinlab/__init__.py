"""
kisinlab
Frobenius modules over k[[u]]: objects of height r, the poset F^r of
phi-stable lattices, its greatest and smallest elements, duality and the
classification of simple objects.
"""

__version__ = "1.0.0"

from .config_manager import ConfigManager, Settings, get_settings, use_settings
from .error_handler import (
    CensusTooLargeError,
    HeightViolationError,
    KisinError,
    NotInSError,
    ParameterMismatchError,
    ParseError,
    PrecisionError,
)
from .field import FieldElement, FieldParams, field_params
from .lattices import (
    FrPoset,
    Lattice,
    enumerate_fr,
    is_maximal,
    is_minimal,
    max_r,
    min_r,
)
from .matrix import SeriesMatrix, smith_normal_form
from .module_file import ModuleFile, emit_module, load_module, parse_module_text
from .phi_module import (
    PhiModule,
    PhiMorphism,
    dual,
    find_isomorphism,
    hom_space,
    validate,
)
from .series import USeries, parse_series
from .simple import SimpleSeq, build_module, max_closed_form, min_closed_form

__all__ = [
    "__version__",
    "CensusTooLargeError",
    "ConfigManager",
    "FieldElement",
    "FieldParams",
    "FrPoset",
    "HeightViolationError",
    "KisinError",
    "Lattice",
    "ModuleFile",
    "NotInSError",
    "ParameterMismatchError",
    "ParseError",
    "PhiModule",
    "PhiMorphism",
    "PrecisionError",
    "SeriesMatrix",
    "Settings",
    "SimpleSeq",
    "USeries",
    "build_module",
    "dual",
    "emit_module",
    "enumerate_fr",
    "field_params",
    "find_isomorphism",
    "get_settings",
    "hom_space",
    "is_maximal",
    "is_minimal",
    "load_module",
    "max_closed_form",
    "max_r",
    "min_closed_form",
    "min_r",
    "parse_module_text",
    "parse_series",
    "smith_normal_form",
    "use_settings",
    "validate",
]
