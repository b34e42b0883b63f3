"""Locally recoverable codes from monomial-Cartesian codes and their subfield-subcodes."""
from __future__ import annotations

from .code import EvaluationDomain, LinearCode, build_domain, encode, mcc, subfield_subcode
from .families import FamilyDescriptor, PredictedProfile, build
from .galois import FieldSpec, field_new, field_of_order
from .grid import DeltaSet, GridSpec
from .locality import LocalityCertificate, certify_locality, recover_line, recover_word
from .verify import DistanceResult, is_mds, min_distance_exact, singleton_defect

__all__ = [
    "DeltaSet", "DistanceResult", "EvaluationDomain", "FamilyDescriptor", "FieldSpec", "GridSpec",
    "LinearCode", "LocalityCertificate", "PredictedProfile", "build", "build_domain", "certify_locality",
    "encode", "field_new", "field_of_order", "is_mds", "mcc", "min_distance_exact", "recover_line",
    "recover_word", "singleton_defect", "subfield_subcode",
]
