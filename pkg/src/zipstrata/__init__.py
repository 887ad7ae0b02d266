"""Regularity-in-codimension-one of zip strata from root-datum combinatorics.

Submodules: rootdata (root systems and lattices), weyl (group arithmetic and
Bruhat order), zipdatum (frame element, twisted orders, canonical types),
strata (w-sequences, smallness, Xi/pi, the smoothness decision), hasse
(characteristic-zero Hasse feasibility), fq / glnzip (finite-field oracle and
the GL_n catalogs), cli (command-line surface).
"""

from .rootdata import build_generic, build_gl, load_generic_json
from .zipdatum import (
    BasedAutomorphism,
    ZipDatum,
    gl_zip_datum,
    make_zip_datum,
    zip_datum_from_json,
)

__all__ = [
    "BasedAutomorphism",
    "ZipDatum",
    "build_generic",
    "build_gl",
    "gl_zip_datum",
    "load_generic_json",
    "make_zip_datum",
    "zip_datum_from_json",
]

__version__ = "0.1.0"
