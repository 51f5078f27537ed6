"""Photon-pair spectral modelling and dispersion inference (C++ core)."""

import json as _json

from ._core import (
    SPEED_OF_LIGHT_UM_PER_PS,
    DomainError,
    EmptyPosteriorError,
    NoFringeError,
    contour_roots,
    extract_group_indices,
    gamma_from_sinc_matching,
    marginal_spectrum,
    phasematching_bandwidth,
    synthesize_fringes,
    wavelength_to_angular_frequency,
)
from ._core import run_mc as _run_mc

__version__ = "0.1.0"


def run_mc(observations, config):
    """Rejection sampling over an observation set; dict in, posterior dict out."""
    return _json.loads(_run_mc(_json.dumps(observations), _json.dumps(config)))


__all__ = [
    "SPEED_OF_LIGHT_UM_PER_PS",
    "DomainError",
    "EmptyPosteriorError",
    "NoFringeError",
    "contour_roots",
    "extract_group_indices",
    "gamma_from_sinc_matching",
    "marginal_spectrum",
    "phasematching_bandwidth",
    "run_mc",
    "synthesize_fringes",
    "wavelength_to_angular_frequency",
]
