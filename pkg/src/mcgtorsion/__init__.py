"""Verification workbench for low-genus torsion generation of extended
mapping class groups (polygon-model curve calculus, proof-replay ledger) and
the genus-1 impossibility argument in PGL(2,Z)."""

from .scheme import (PolygonScheme, DartPermutation, build_scheme,
                     UnsupportedGenusError, UnsupportedCurveFamilyError)
from .curves import (CurveClass, tighten, equal, geometric_intersection,
                     homology_class, named_curve, named_catalog, curve_name)
from .action import (MappingWord, MappingClassCertificate, parse_word, apply,
                     is_identity, classes_equal, order_of, homology_rep,
                     dihedral_symmetries)

__all__ = [
    "PolygonScheme", "DartPermutation", "build_scheme",
    "UnsupportedGenusError", "UnsupportedCurveFamilyError",
    "CurveClass", "tighten", "equal", "geometric_intersection",
    "homology_class", "named_curve", "named_catalog", "curve_name",
    "MappingWord", "MappingClassCertificate", "parse_word", "apply",
    "is_identity", "classes_equal", "order_of", "homology_rep",
    "dihedral_symmetries",
]

__version__ = "0.1.0"
