"""Thermal-photon noise budgets, cavity-attenuator design estimates, and
superconducting-qubit coherence analysis."""

from ._cavatten import *  # noqa: F401,F403
from ._cavatten import __version__  # noqa: F401
