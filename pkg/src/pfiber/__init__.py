"""Geometric braids as loops of polynomials, and numerical checks of P-fiberedness."""

from .braidword import BraidWord, Permutation
from .curves import ComponentCurve, ParamBraid, TrigTerm, braid_power, library, satellite, twist
from .fibercheck import FibrationReport, check, companion_power_bound
from .polyloop import CriticalTracks, track
from .wordextract import extract_word

__all__ = [
    "BraidWord", "Permutation", "ComponentCurve", "ParamBraid", "TrigTerm", "braid_power",
    "library", "satellite", "twist", "FibrationReport", "check", "companion_power_bound",
    "CriticalTracks", "track", "extract_word",
]
