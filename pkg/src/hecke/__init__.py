"""Satake transforms for spherical and derived Hecke algebras of p-adic groups."""

from .classical import HeckeElem0, LeviDescriptor, TorusElem0, convolve0, satake0
from .derived import (
    CanonicalGenerator,
    HeckeElem1,
    convolve_mixed,
    derived_satake1,
    divisibility_report,
    evaluate_class,
    satake_matrix,
    transfer_abelian,
)
from .padic import PMatrix, PrecisionContext, PScalar
from .root_datum import RootDatum, parse_group
from .session import RunConfig, Session
from .torus_dha import TorusDHAElem

__version__ = "0.1.0"
