"""Centralized numeric tolerances and finite-difference settings.

Every tolerance used by the library lives in one frozen record so that
verification sweeps, the CLI overrides and the test suite all agree on the
same numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances shared across the package.

    All values are relative tolerances unless noted otherwise.
    """

    # confluent hypergeometric power series
    series_rtol: float = 1e-15
    series_max_terms: int = 1000

    # contiguous-relation residuals (relative to the largest term)
    contiguous: float = 1e-10

    # Kummer collapse identities and the defining ODE
    kummer: float = 1e-12
    hyp_ode: float = 1e-9

    # PDE kernel residual in the non-compact picture
    pde_residual: float = 1e-6

    # closed-form ladder application vs finite-difference oracle
    ladder_match: float = 1e-8

    # least-squares projection of the Heisenberg action
    lsq_residual: float = 1e-8
    coeff_match: float = 1e-6

    # compact-picture periodicity identity
    periodicity: float = 1e-12

    # group flow derivative vs algebra action
    group_match: float = 1e-5

    # picture isomorphism round trip
    roundtrip: float = 1e-12

    def override(self, **kwargs) -> "Tolerances":
        """Return a copy with some fields replaced."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference stencil settings.

    4th-order central stencils with one Richardson extrapolation level.
    ``base_step`` is scaled by coordinate magnitude and divided by the local
    oscillation rate of the target function (see ``operators.fd_steps``).
    """

    base_step: float = 1e-3
    richardson: bool = True
    min_step: float = 1e-6
    group_step: float = 1e-3


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_FD = FDConfig()
