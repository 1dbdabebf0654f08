from .decide import CipdDecision, PathFieldDecision, decide_cipd, decide_path_field
from .displacement import (
    Certificate,
    DisplacementMap,
    all_chains,
    build_displacement,
    connected_components,
    induces_identity_on_homology,
    verify_displacement,
)
from .matching import Matching, build_matching, cancel, check_matching, morse_table

__all__ = [
    "CipdDecision",
    "PathFieldDecision",
    "decide_cipd",
    "decide_path_field",
    "Certificate",
    "DisplacementMap",
    "all_chains",
    "build_displacement",
    "connected_components",
    "induces_identity_on_homology",
    "verify_displacement",
    "Matching",
    "build_matching",
    "cancel",
    "check_matching",
    "morse_table",
]
