"""Dense complex matrix substrate: Hermitian eigendecomposition, fractional
matrix powers and Schatten p-norms.

Matrices are plain ``numpy.ndarray`` values (complex128); the helpers here
validate shape/finiteness and enforce Hermitian/PSD contracts at the
boundaries.  Eigendecompositions go through the cyclic Jacobi kernel selected
in :mod:`schatten_lab.backend`.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from schatten_lab import backend
from schatten_lab.config import DEFAULT_TOLS, Tolerances
from schatten_lab.errors import ConvergenceError, NearSingularError

INF = math.inf


@dataclass(frozen=True)
class SchattenExponent:
    """A p-norm exponent: a finite real p >= 1 or infinity.

    Infinity is the IEEE value ``math.inf``; code dispatches on it explicitly
    and never evaluates ``x**p`` with a non-finite p.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 1.0:
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @property
    def conjugate(self) -> "SchattenExponent":
        return SchattenExponent(conjugate_exponent(self.value))

    @classmethod
    def parse(cls, token) -> "SchattenExponent":
        """Accepts numbers or the strings 'inf' / 'oo'."""
        if isinstance(token, str):
            tok = token.strip().lower()
            if tok in ("inf", "infty", "infinity", "oo"):
                return cls(INF)
            return cls(float(tok))
        return cls(float(token))

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return "inf" if self.is_inf else repr(self.value)


def _pvalue(p) -> float:
    """Normalize an exponent argument (number or SchattenExponent) to float."""
    v = float(p)
    if math.isnan(v) or v < 1.0:
        raise ValueError(f"p must satisfy 1 <= p <= inf, got {p!r}")
    return v


def conjugate_exponent(p) -> float:
    """q with 1/p + 1/q = 1; conjugate of 1 is inf and vice versa."""
    v = _pvalue(p)
    if v == 1.0:
        return INF
    if math.isinf(v):
        return 1.0
    return v / (v - 1.0)


class Spectrum(NamedTuple):
    """Eigendecomposition: descending eigenvalues, eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite complex128 2-D array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {np.shape(a)}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def max_abs(a) -> float:
    m = np.asarray(a)
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_hermitian(a, tols: Tolerances = DEFAULT_TOLS) -> bool:
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(m - m.conj().T) <= tols.herm * (1.0 + max_abs(m))


def hermitian_part(a, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Validate Hermitian-ness and return the symmetrized matrix (A + A*)/2."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("Hermitian matrix must be square")
    dev = max_abs(m - m.conj().T)
    if dev > tols.herm * (1.0 + max_abs(m)):
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return (m + m.conj().T) / 2.0


def hermitian_eig(a, tols: Tolerances = DEFAULT_TOLS) -> Spectrum:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises ConvergenceError (with the residual off-diagonal norm) if the
    Jacobi sweeps hit the iteration cap without converging.
    """
    h = hermitian_part(a, tols)
    w, v, off, ok = backend.jacobi_eigh(h, tol=tols.jacobi_off,
                                        max_sweeps=tols.jacobi_sweeps)
    if not ok:
        raise ConvergenceError(off, tols.jacobi_sweeps)
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def singular_values(a, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Singular values, descending.

    Hermitian inputs take the |eigenvalue| path directly; general inputs go
    through the Gram matrix A*A (smaller side), reusing the Hermitian solver,
    with negative round-off eigenvalues clipped at zero.
    """
    m = as_matrix(a)
    if m.shape[0] == m.shape[1] and is_hermitian(m, tols):
        w = hermitian_eig(m, tols).values
        return np.sort(np.abs(w))[::-1]
    if m.shape[0] >= m.shape[1]:
        gram = m.conj().T @ m
    else:
        gram = m @ m.conj().T
    w = hermitian_eig(gram, tols).values
    return np.sqrt(np.clip(w, 0.0, None))


def norm_from_singular_values(s, p) -> float:
    """Schatten p-norm given a singular-value vector (descending)."""
    pv = _pvalue(p)
    s = np.asarray(s, dtype=float)
    if math.isinf(pv):
        return float(s[0]) if s.size else 0.0
    if pv == 1.0:
        return float(s.sum())
    if pv == 2.0:
        return float(np.sqrt((s * s).sum()))
    top = float(s[0]) if s.size else 0.0
    if top == 0.0:
        return 0.0
    # factor out the largest singular value to keep x**p in range
    return top * float(((s / top) ** pv).sum()) ** (1.0 / pv)


def schatten_norm(a, p, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Schatten p-norm (sum of p-th powers of singular values, to the 1/p).

    p = inf gives the operator norm, p = 2 the Frobenius norm, p = 1 the
    trace norm.
    """
    return norm_from_singular_values(singular_values(a, tols), p)


def trace_power_from_singular_values(s, p) -> float:
    """Tr |A|^p given the singular values of A (finite p >= 1)."""
    pv = _pvalue(p)
    if math.isinf(pv):
        raise ValueError("trace of |A|^p requires finite p")
    return float((np.asarray(s, dtype=float) ** pv).sum())


def trace_abs_power(a, p, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Tr |A|^p = sum of p-th powers of singular values (finite p >= 1)."""
    return trace_power_from_singular_values(singular_values(a, tols), p)


def op_norm(a, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Operator (spectral) norm."""
    return schatten_norm(a, INF, tols)


def psd_eig(a, tols: Tolerances = DEFAULT_TOLS) -> Spectrum:
    """Eigendecomposition of a PSD matrix with tolerance checking.

    Eigenvalues within -psd_tol * max(1, ||A||_op) of zero are clipped to 0;
    anything more negative raises ValueError.
    """
    spec = hermitian_eig(a, tols)
    w = spec.values
    lo = float(w[-1])
    opn = float(np.max(np.abs(w))) if w.size else 0.0
    if lo < -tols.psd * max(1.0, opn):
        raise ValueError(f"matrix is not PSD (min eigenvalue {lo:.3e})")
    return Spectrum(np.clip(w, 0.0, None), spec.vectors)


def psd_power(a, s: float, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Fractional power A^s of a PSD matrix via its eigendecomposition.

    0^s := 0 for s > 0.  Negative powers require the smallest eigenvalue to
    exceed 1e-12 * ||A||_op, otherwise NearSingularError.
    """
    w, v = psd_eig(a, tols)
    if s < 0:
        opn = float(w[0]) if w.size else 0.0
        if float(w[-1]) <= 1e-12 * opn or opn == 0.0:
            raise NearSingularError(
                f"negative power of near-singular matrix (min eig {w[-1]:.3e})")
    ws = np.where(w > 0.0, w, 0.0) ** s if s > 0 else w ** s
    out = (v * ws) @ v.conj().T
    return (out + out.conj().T) / 2.0


def von_neumann_entropy(eigs) -> float:
    """-sum(x ln x) over a spectrum, with 0 ln 0 := 0 (natural log)."""
    lam = np.clip(np.asarray(eigs, dtype=float), 0.0, None)
    nz = lam[lam > 0.0]
    return float(-(nz * np.log(nz)).sum())


def matrix_to_json(a) -> dict:
    """Encode a matrix as {"rows", "cols", "data": [[re, im], ...]} row-major."""
    m = as_matrix(a)
    data = [[float(z.real), float(z.imag)] for z in m.ravel(order="C")]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def matrix_from_json(obj) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"data length {len(data)} != rows*cols = {rows * cols}")
    flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    return as_matrix(flat.reshape(rows, cols))
