"""hyporom: well-balanced finite-volume models for 1D balance laws and
their POD/DEIM reduced-order counterparts with time windowing."""

from . import deim, errors, fom, harness, pod, rom, snapshots
from .fluxes import FluxChoice
from .grid import Grid1D

__version__ = "0.1.0"

__all__ = ["FluxChoice", "Grid1D", "deim", "errors", "fom", "harness", "pod",
           "rom", "snapshots", "__version__"]
