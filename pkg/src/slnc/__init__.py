"""Secure linear network coding on single-source multicast DAGs.

Build exact-arithmetic linear codes, wrap them with a secrecy-preserving
mixing basis and a one-time-pad key, and verify the information-theoretic
guarantees by exhaustive enumeration.
"""

from . import errors
from .field import FieldSpec, Matrix, ff_op, mat_inverse, mat_rank, spans_intersect_trivially
from .lnc import (
    GlobalCode,
    check_code_validity,
    construct_lnc,
    enumerate_code_wiretap_sets,
    parse_code,
    verify_subset_bound,
    write_code,
)
from .network import (
    Edge,
    Network,
    WiretapCollection,
    c_min,
    enumerate_topology_wiretap_sets,
    min_cut_to_edges,
    min_cut_to_sink,
    parse_network,
    serialize_network,
)
from .oracle import (
    JointDistribution,
    RefutationResult,
    SecurityReport,
    han_profile,
    mutual_information,
    observation_distribution,
    rank_security_criterion,
    refute_key_rate,
    verify_security,
)
from .secure import (
    SecureCodeBundle,
    build_secure_bundle,
    choose_secure_basis,
    decode_at_sink,
    encode_source,
    parse_bundle,
    write_bundle,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "FieldSpec",
    "Matrix",
    "ff_op",
    "mat_rank",
    "mat_inverse",
    "spans_intersect_trivially",
    "Edge",
    "Network",
    "WiretapCollection",
    "parse_network",
    "serialize_network",
    "min_cut_to_sink",
    "min_cut_to_edges",
    "c_min",
    "enumerate_topology_wiretap_sets",
    "GlobalCode",
    "construct_lnc",
    "check_code_validity",
    "enumerate_code_wiretap_sets",
    "verify_subset_bound",
    "write_code",
    "parse_code",
    "SecureCodeBundle",
    "choose_secure_basis",
    "build_secure_bundle",
    "encode_source",
    "decode_at_sink",
    "write_bundle",
    "parse_bundle",
    "JointDistribution",
    "SecurityReport",
    "RefutationResult",
    "observation_distribution",
    "mutual_information",
    "verify_security",
    "rank_security_criterion",
    "refute_key_rate",
    "han_profile",
]
