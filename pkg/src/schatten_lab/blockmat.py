"""2x2 block matrices: positive blocks, general blocks, their samplers and
their scalar summaries.

A positive block is (X, Y, Z) with the assembled matrix [[X, Y], [Y*, Z]]
positive semidefinite; equivalently X, Z >= 0 and Y = X^{1/2} R Z^{1/2} for a
contraction R.  The norm summary of a block is the 2x2 matrix of block
p-norms, the alpha summary its four-block analogue.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from schatten_lab import schatten_core as core
from schatten_lab.config import DEFAULT_TOLS, Tolerances
from schatten_lab.errors import DimensionTooLargeError

SIGN_AVERAGE_MAX_DIM = 12


@dataclass(frozen=True, eq=False)
class PositiveBlock:
    """Blocks of a PSD 2n x 2n matrix [[X, Y], [Y*, Z]]."""

    n: int
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    contraction: Optional[np.ndarray] = None  # R used by the sampler, if any

    def __post_init__(self):
        for name in ("X", "Y", "Z"):
            m = core.as_matrix(getattr(self, name))
            if m.shape != (self.n, self.n):
                raise ValueError(f"block {name} must be {self.n}x{self.n}")
            object.__setattr__(self, name, m)


@dataclass(frozen=True, eq=False)
class GeneralBlock:
    """Blocks of an arbitrary 2n x 2n matrix [[X, Y], [W, Z]]."""

    n: int
    X: np.ndarray
    Y: np.ndarray
    W: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        for name in ("X", "Y", "W", "Z"):
            m = core.as_matrix(getattr(self, name))
            if m.shape != (self.n, self.n):
                raise ValueError(f"block {name} must be {self.n}x{self.n}")
            object.__setattr__(self, name, m)


def assemble(block) -> np.ndarray:
    """Assembled 2n x 2n matrix; bottom-left is Y* for positive blocks."""
    if isinstance(block, PositiveBlock):
        return np.block([[block.X, block.Y], [block.Y.conj().T, block.Z]])
    return np.block([[block.X, block.Y], [block.W, block.Z]])


def validate_positive_block(block: PositiveBlock,
                            tols: Tolerances = DEFAULT_TOLS) -> None:
    """Check the PSD invariant of the assembled matrix; raises ValueError."""
    core.psd_eig(assemble(block), tols)


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Standard complex Gaussian matrix (unit-variance entries)."""
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def wishart(rng: np.random.Generator, n: int, scale: float = 1.0,
            rank: Optional[int] = None) -> np.ndarray:
    """Sample scale * G G* / n with G an n x rank complex Gaussian.

    Full rank almost surely when rank >= n (the default).
    """
    r = n if rank is None else rank
    if r == 0:
        return np.zeros((n, n), dtype=np.complex128)
    g = complex_gaussian(rng, n, r)
    w = scale * (g @ g.conj().T) / n
    return (w + w.conj().T) / 2.0


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian."""
    q, r = np.linalg.qr(complex_gaussian(rng, n, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_contraction(rng: np.random.Generator, n: int,
                       boundary: bool = False) -> np.ndarray:
    """Gaussian matrix rescaled to operator norm <= 1.

    ``boundary=True`` returns a unitary instead (every singular value equal
    to 1), which stresses the equality regions of the inequalities.
    """
    if boundary:
        return random_unitary(rng, n)
    c = complex_gaussian(rng, n, n)
    opn = core.op_norm(c)
    if opn > 1.0:
        c = c / opn
    return c


def sample_positive_block(n: int, rng: np.random.Generator,
                          scale: float = 1.0, mode: str = "default",
                          tols: Tolerances = DEFAULT_TOLS) -> PositiveBlock:
    """Sample a positive block X = scale*GG*/n, Z likewise, Y = X^1/2 R Z^1/2.

    Modes expose the degenerate corners where equality cases live:
      default        Gaussian X, Z and a norm-rescaled Gaussian contraction
      boundary       R unitary (all singular values 1)
      zero_y         R = 0, so M is block diagonal
      identity_r     R = I
      rank_deficient X drops one rank (n > 1)
    """
    if mode not in ("default", "boundary", "zero_y", "identity_r",
                    "rank_deficient"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    x_rank = max(n - 1, 0) if mode == "rank_deficient" else None
    x = wishart(rng, n, scale, rank=x_rank)
    z = wishart(rng, n, scale)
    if mode == "zero_y":
        r = np.zeros((n, n), dtype=np.complex128)
    elif mode == "identity_r":
        r = np.eye(n, dtype=np.complex128)
    else:
        r = sample_contraction(rng, n, boundary=(mode == "boundary"))
    y = core.psd_power(x, 0.5, tols) @ r @ core.psd_power(z, 0.5, tols)
    return PositiveBlock(n, x, y, z, contraction=r)


def sample_hanner_pair(n: int, rng: np.random.Generator,
                       scale: float = 1.0) -> PositiveBlock:
    """Block with X = Z = (P+Q)/2 and Y = (P-Q)/2 for independent Wisharts.

    Then X + Y = P >= 0 and X - Y = Q >= 0, so the assembled matrix is PSD
    and its p-norm splits as ||X+Y||_p^p + ||X-Y||_p^p.
    """
    p = wishart(rng, n, scale)
    q = wishart(rng, n, scale)
    return PositiveBlock(n, (p + q) / 2.0, (p - q) / 2.0, (p + q) / 2.0)


def sample_general_block(n: int, rng: np.random.Generator,
                         scale: float = 1.0) -> GeneralBlock:
    """Four independent complex Gaussian blocks."""
    return GeneralBlock(
        n,
        scale * complex_gaussian(rng, n, n),
        scale * complex_gaussian(rng, n, n),
        scale * complex_gaussian(rng, n, n),
        scale * complex_gaussian(rng, n, n),
    )


def norm_summary(block: PositiveBlock, p,
                 tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """The 2x2 matrix [[||X||_p, ||Y||_p], [||Y||_p, ||Z||_p]].

    For a valid positive block this is itself PSD (the off-diagonal is
    bounded by the geometric mean of the diagonal); that is verified here.
    """
    x = core.schatten_norm(block.X, p, tols)
    y = core.schatten_norm(block.Y, p, tols)
    z = core.schatten_norm(block.Z, p, tols)
    if y > np.sqrt(x * z) + tols.psd * max(1.0, x, z):
        raise ValueError(
            f"norm summary not PSD (||Y||={y:.6e} > sqrt({x:.6e}*{z:.6e})); "
            "input block is likely not positive")
    return np.array([[x, y], [y, z]], dtype=float)


def alpha_summary(block: GeneralBlock, p,
                  tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """2x2 summary with diagonal (||X||_p, ||Z||_p) and off-diagonal
    ((||Y||_p^p + ||W||_p^p)/2)^{1/p}.  Finite p only.
    """
    pv = core._pvalue(p)
    if np.isinf(pv):
        raise ValueError("alpha summary requires finite p")
    x = core.schatten_norm(block.X, pv, tols)
    z = core.schatten_norm(block.Z, pv, tols)
    y = core.schatten_norm(block.Y, pv, tols)
    w = core.schatten_norm(block.W, pv, tols)
    off = (0.5 * y ** pv + 0.5 * w ** pv) ** (1.0 / pv)
    return np.array([[x, off], [off, z]], dtype=float)


def two_by_two_norm_closed_form(m, p) -> float:
    """p-norm of a symmetric PSD 2x2 matrix from its closed-form eigenvalues.

    With u the mean of the diagonal and v = sqrt(((m00-m11)/2)^2 + m01^2) the
    eigenvalues are u +/- v, hence ||m||_p = ((u+v)^p + (u-v)^p)^{1/p}.
    """
    pv = core._pvalue(p)
    if np.isinf(pv):
        raise ValueError("closed form requires finite p")
    mm = np.asarray(m, dtype=float)
    if mm.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    u = (mm[0, 0] + mm[1, 1]) / 2.0
    v = float(np.hypot((mm[0, 0] - mm[1, 1]) / 2.0, mm[0, 1]))
    lo = u - v
    if lo < -1e-12 * max(1.0, u + v):
        raise ValueError(f"matrix is not PSD (eigenvalue {lo:.3e})")
    lo = max(lo, 0.0)
    return float(((u + v) ** pv + lo ** pv) ** (1.0 / pv))


def sign_average_diagonal(a, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Average U A U* over all 2^n diagonal +/-1 sign matrices U.

    The average kills every off-diagonal entry, leaving diag(A); the full
    enumeration is the point (it is the identity being tested), so the
    dimension is capped at 12.
    """
    m = core.as_matrix(a)
    n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("square matrix required")
    if n > SIGN_AVERAGE_MAX_DIM:
        raise DimensionTooLargeError(
            f"sign averaging enumerates 2^n matrices; n={n} exceeds cap "
            f"{SIGN_AVERAGE_MAX_DIM}")
    acc = np.zeros_like(m)
    for bits in range(1 << n):
        s = np.array([1.0 if (bits >> k) & 1 == 0 else -1.0 for k in range(n)])
        acc += (s[:, None] * s[None, :]) * m
    return acc / float(1 << n)


def block_to_json(block) -> dict:
    """Encode a block per the exchange format; W omitted for positive blocks."""
    out = {
        "n": int(block.n),
        "X": core.matrix_to_json(block.X),
        "Y": core.matrix_to_json(block.Y),
        "Z": core.matrix_to_json(block.Z),
    }
    if isinstance(block, GeneralBlock):
        out["W"] = core.matrix_to_json(block.W)
    return out


def block_from_json(obj, tols: Tolerances = DEFAULT_TOLS):
    """Decode a block; absent "W" means a positive block (W = Y*), which is
    validated against the PSD invariant.
    """
    n = int(obj["n"])
    x = core.matrix_from_json(obj["X"])
    y = core.matrix_from_json(obj["Y"])
    z = core.matrix_from_json(obj["Z"])
    if "W" in obj and obj["W"] is not None:
        w = core.matrix_from_json(obj["W"])
        return GeneralBlock(n, x, y, w, z)
    block = PositiveBlock(n, x, y, z)
    validate_positive_block(block, tols)
    return block
