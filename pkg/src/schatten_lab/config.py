"""Centralized numerical tolerances.

The mathematics being checked is exact; every tolerance below is an artifact
of floating point and of the eigensolver's ~1e-10 accuracy budget.  Functions
take an optional ``Tolerances`` so a campaign can tighten or relax globally.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # type/constructor validation
    herm: float = 1e-12          # relative Hermiticity slack
    psd: float = 1e-10           # relative negative-eigenvalue slack
    recon: float = 1e-10         # eigendecomposition reconstruction slack
    # eigensolver internals
    jacobi_off: float = 1e-13    # off-diagonal stop, relative to ||A||_F
    jacobi_sweeps: int = 60
    # inequality checks
    check_rel: float = 1e-8      # CheckRecord pass threshold, relative to scale
    lemma_rel: float = 1e-9      # lemma checks (2, 3, 4)
    fd_pass: float = 1e-4        # second-derivative check, discretization headroom
    fd_unstable: float = 1e-3    # Richardson level disagreement -> UNSTABLE


DEFAULT_TOLS = Tolerances()
