"""Cox rings of normal varieties with a torus action of complexity one.

Three input routes lead to a graded presentation (generators, degrees in
the divisor class group, relations):

* divisorial fans over P^1 (``tcox.pdiv`` and ``tcox.cox_pipeline``),
* Orlik-Wagreich graphs of smooth rational K*-surfaces (``tcox.orlik_wagreich``),
* filtrations of rank-2 toric bundles and tangent bundles (``tcox.klyachko``).
"""
from .cox_pipeline import (ClassGroup, ComplexityOneData, canonical_class, class_group, cox_ring, from_fan,
                           moving_cone, run_fan)
from .errors import (DegeneratePoints, EmptyPolyhedron, GradingUnavailable, InvalidBasis, InvalidBundle, InvalidFan,
                     InvalidGraph, NonCompleteLocus, SchemaError, TailMismatch, TcoxError, UnboundedBelow,
                     UnknownLabel)
from .intlinalg import FGAbelianGroup, GroupElement, IntMatrix, cokernel, snf
from .klyachko import BundleRay, Rank2BundleData, cotangent_cox, projectivization_cox
from .orlik_wagreich import ContractionSpec, OWArm, OWGraph, arm_isotropy, contract, resolution_cox
from .pdiv import DivisorialFanP1, P1Point, PolyhedralDivisorP1, check_fan, graded_piece_dim
from .polyhedra import Cone, SigmaPolyhedron
from .presentation import GradedPresentation, find_renaming, parse_polynomial

__version__ = "0.1.0"
