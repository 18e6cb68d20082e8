"""Exact counting of perfect matchings and defect matchings on planar graphs,
planar graphs with a few apex vertices, and the reductions between them."""

__version__ = "0.1.0"

from .apex import ApexStats, solve as solve_apex, small_perfmatch
from .brute import brute_defects, brute_matchsum, brute_mu, brute_perfmatch
from .errors import (
    InstanceFormatError,
    InvalidEmbedding,
    InvariantError,
    PromiseViolation,
    SizeCapExceeded,
    ValidationError,
)
from .face_matchsum import FaceMatchSum, defect_spectrum, matchsum_faces
from .fkt import kasteleyn_matrix, kasteleyn_orient, pfaffian, perfmatch_planar
from .gadgets import build_parity_gadget, insert_parity_gadget, signature
from .io import load_instance, parse_instance
from .plane_graph import ApexInstance, Face, Graph, PlaneGraph, faces, validate
from .reductions import apex_to_defect, apex_to_restricted, restricted_to_defect

__all__ = [
    "ApexInstance", "ApexStats", "Face", "FaceMatchSum", "Graph", "InstanceFormatError",
    "InvalidEmbedding", "InvariantError", "PlaneGraph", "PromiseViolation", "SizeCapExceeded",
    "ValidationError", "apex_to_defect", "apex_to_restricted", "brute_defects", "brute_matchsum",
    "brute_mu", "brute_perfmatch", "build_parity_gadget", "defect_spectrum", "faces",
    "insert_parity_gadget", "kasteleyn_matrix", "kasteleyn_orient", "load_instance",
    "matchsum_faces", "parse_instance", "perfmatch_planar", "pfaffian", "restricted_to_defect",
    "signature", "small_perfmatch", "solve_apex", "validate",
]
