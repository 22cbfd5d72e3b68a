"""Numerical flux choices for the first-order schemes.

The PVM-0 family fixes a constant viscosity coefficient alpha0 per
interface; HLL is the degree-1 member with coefficients (alpha0, alpha1)
built from the fan speeds and is only defined for the shallow-water
system.
"""

from enum import Enum

from .errors import UnsupportedSystem


class FluxChoice(Enum):
    MODIFIED_LAX_FRIEDRICHS = "mlf"
    RUSANOV = "rusanov"
    LAX_FRIEDRICHS = "lf"
    HLL = "hll"


def pvm0_constant(flux: FluxChoice, nu: float, dx: float, dt: float) -> float:
    """alpha0 for the constant-coefficient PVM-0 fluxes (not Rusanov/HLL)."""
    if flux is FluxChoice.MODIFIED_LAX_FRIEDRICHS:
        return nu * dx / dt
    if flux is FluxChoice.LAX_FRIEDRICHS:
        return dx / dt
    raise UnsupportedSystem(f"no constant alpha0 for flux {flux}")
