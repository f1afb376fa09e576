"""Colour changes along hypercube geodesics: exact engines and verifiers."""
from .colourings import (
    BLUE,
    RED,
    Colouring,
    gen_antipodal_random,
    gen_direction,
    gen_hamming,
    gen_layered,
    gen_random,
    load,
    restrict_subcube,
    save,
)
from .geodesics import antipodal_profile, fc_table, min_geodesic_cc, min_path_cc, witness_geodesic

__version__ = "0.1.0"
