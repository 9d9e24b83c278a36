"""Quantum channels in Kraus form and the optimizers over their outputs.

Provides the depolarizing and antisymmetric-transpose (Werner-Holevo) channel
constructors, tensor products, the maximal output p-norm and minimal output
entropy estimators, and multiplicativity-gap measurement for product
channels.

The maximal p-norm sup_rho ||Phi(rho)||_p is attained on pure states (the map
is affine and the norm convex, so the sup sits at extreme points); both
optimizers therefore search the unit sphere of input vectors with a
multi-start pattern search.  Reported values are certified lower bounds
(feasible evaluations), never global-optimality certificates.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from schatten_lab import schatten_core as core
from schatten_lab.blockmat import complex_gaussian, random_unitary
from schatten_lab.config import DEFAULT_TOLS, Tolerances
from schatten_lab.errors import DimensionMismatchError

MAX_OPT_DIM = 81  # desk-scale eigensolver budget for the sphere search

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map as a stack of Kraus operators (dim_out x dim_in each)."""

    kraus: tuple
    dim_in: int
    dim_out: int
    stack: np.ndarray = field(repr=False, compare=False, default=None)
    product_dims: Optional[tuple] = None  # set by tensor()

    def __post_init__(self):
        if self.stack is None:
            object.__setattr__(self, "stack",
                               np.ascontiguousarray(np.stack(self.kraus)))


def kraus_channel(ops: Sequence, tols: Tolerances = DEFAULT_TOLS,
                  product_dims=None) -> KrausChannel:
    """Validate a Kraus family (trace preservation) and build the channel."""
    mats = [core.as_matrix(k) for k in ops]
    if not mats:
        raise ValueError("at least one Kraus operator required")
    dim_out, dim_in = mats[0].shape
    for k in mats:
        if k.shape != (dim_out, dim_in):
            raise DimensionMismatchError("Kraus operators must share a shape")
    acc = sum(k.conj().T @ k for k in mats)
    dev = float(np.linalg.norm(acc - np.eye(dim_in)))
    if dev > 1e-10 * dim_in:
        raise ValueError(f"Kraus family is not trace preserving "
                         f"(||sum K*K - I||_F = {dev:.3e})")
    return KrausChannel(tuple(mats), dim_in, dim_out,
                        product_dims=product_dims)


def validate_density(rho, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Check unit trace and positivity of a density matrix."""
    m = core.as_matrix(rho)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > 1e-12:
        raise ValueError(f"density matrix must have unit trace, got {tr}")
    core.psd_eig(m, tols)
    return m


def _apply_linear(stack: np.ndarray, mat: np.ndarray) -> np.ndarray:
    return np.einsum("aij,jk,alk->il", stack, mat, stack.conj(), optimize=True)


def _apply_raw(stack: np.ndarray, rho: np.ndarray) -> np.ndarray:
    out = _apply_linear(stack, rho)
    return (out + out.conj().T) / 2.0


def apply(channel: KrausChannel, rho) -> np.ndarray:
    """Channel action sum_i K_i rho K_i* on a density matrix."""
    m = core.as_matrix(rho)
    if m.shape != (channel.dim_in, channel.dim_in):
        raise DimensionMismatchError(
            f"state is {m.shape}, channel expects "
            f"({channel.dim_in}, {channel.dim_in})")
    return _apply_raw(channel.stack, m)


def identity_channel(d: int) -> KrausChannel:
    return kraus_channel([np.eye(d, dtype=np.complex128)])


def depolarizing(lam: float, tols: Tolerances = DEFAULT_TOLS) -> KrausChannel:
    """Qubit map rho -> lam*rho + (1-lam) I/2, via the Pauli Kraus family.

    Weights ((1+3 lam)/4, (1-lam)/4 x3); the constructor cross-checks the
    Kraus action against the affine form on a matrix basis.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    eye = np.eye(2, dtype=np.complex128)
    ops = [math.sqrt((1.0 + 3.0 * lam) / 4.0) * eye]
    ops += [math.sqrt((1.0 - lam) / 4.0) * s
            for s in (PAULI_X, PAULI_Y, PAULI_Z)]
    chan = kraus_channel(ops, tols)
    for i in range(2):
        for j in range(2):
            basis = np.zeros((2, 2), dtype=np.complex128)
            basis[i, j] = 1.0
            want = lam * basis + (1.0 - lam) * np.trace(basis) * eye / 2.0
            got = _apply_linear(chan.stack, basis)
            if core.max_abs(got - want) > 1e-12:
                raise AssertionError("depolarizing Kraus action mismatch")
    return chan


def werner_holevo(d: int, tols: Tolerances = DEFAULT_TOLS) -> KrausChannel:
    """Antisymmetric-transpose channel rho -> (I Tr(rho) - rho^T)/(d-1).

    Kraus family {(|i><j| - |j><i|)/sqrt(d-1) : i < j}; the normalization is
    fixed by trace preservation and is validated here, together with the
    transpose form of the action on a matrix basis.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    ops = []
    for i in range(d):
        for j in range(i + 1, d):
            k = np.zeros((d, d), dtype=np.complex128)
            k[i, j] = 1.0
            k[j, i] = -1.0
            ops.append(k / math.sqrt(d - 1.0))
    chan = kraus_channel(ops, tols)
    eye = np.eye(d, dtype=np.complex128)
    rng = np.random.default_rng(0)
    for _ in range(3):
        g = complex_gaussian(rng, d, d)
        got = _apply_linear(chan.stack, g)
        want = (eye * np.trace(g) - g.T) / (d - 1.0)
        if core.max_abs(got - want) > 1e-10 * (1.0 + core.max_abs(g)):
            raise AssertionError("transpose-form action mismatch")
    return chan


def tensor(chan1: KrausChannel, chan2: KrausChannel) -> KrausChannel:
    """Product channel with Kraus family {K_i (x) L_j}."""
    ops = [np.kron(k, l) for k in chan1.kraus for l in chan2.kraus]
    return kraus_channel(ops, product_dims=(chan1.dim_in, chan2.dim_in))


def channel_from_json(spec) -> KrausChannel:
    """Build a channel from its JSON description.

    Kinds: {"kind": "depolarizing", "lambda": x} |
           {"kind": "werner_holevo", "d": n} |
           {"kind": "kraus", "ops": [matrix, ...]} |
           {"kind": "tensor", "factors": [spec, spec]}.
    """
    kind = spec.get("kind")
    if kind == "depolarizing":
        return depolarizing(float(spec["lambda"]))
    if kind == "werner_holevo":
        return werner_holevo(int(spec["d"]))
    if kind == "kraus":
        return kraus_channel([core.matrix_from_json(m) for m in spec["ops"]])
    if kind == "tensor":
        factors = spec["factors"]
        if len(factors) != 2:
            raise ValueError("tensor spec needs exactly two factors")
        return tensor(channel_from_json(factors[0]),
                      channel_from_json(factors[1]))
    raise ValueError(f"unknown channel kind {kind!r}")


def nu_p_depolarizing(lam: float, p) -> float:
    """Closed-form maximal output p-norm of the depolarizing channel."""
    pv = core._pvalue(p)
    hi = (1.0 + lam) / 2.0
    lo = (1.0 - lam) / 2.0
    if math.isinf(pv):
        return hi
    return (hi ** pv + lo ** pv) ** (1.0 / pv)


def maximally_entangled_state(d: int) -> np.ndarray:
    """Unit vector d^{-1/2} sum_i |ii> in C^{d*d}."""
    v = np.zeros(d * d, dtype=np.complex128)
    for i in range(d):
        v[i * d + i] = 1.0
    return v / math.sqrt(d)


def sample_density(dim: int, rng: np.random.Generator,
                   rank: Optional[int] = None) -> np.ndarray:
    """Random full-rank (by default) density matrix, Wishart-normalized."""
    r = dim if rank is None else rank
    g = complex_gaussian(rng, dim, r)
    w = g @ g.conj().T
    w = (w + w.conj().T) / 2.0
    return w / float(np.trace(w).real)


def random_unital_qubit_channel(rng: np.random.Generator,
                                num_unitaries: int = 3) -> KrausChannel:
    """Random mixture of unitaries: unital and trace preserving."""
    probs = rng.uniform(0.2, 1.0, size=num_unitaries)
    probs /= probs.sum()
    ops = [math.sqrt(p) * random_unitary(rng, 2) for p in probs]
    return kraus_channel(ops)


def random_channel(dim: int, kraus_count: int,
                   rng: np.random.Generator) -> KrausChannel:
    """Generic random CPTP map: a Haar isometry split into Kraus blocks."""
    g = complex_gaussian(rng, kraus_count * dim, dim)
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    ops = [q[i * dim:(i + 1) * dim, :] for i in range(kraus_count)]
    return kraus_channel(ops)


# ---------------------------------------------------------------------------
# sphere optimizers


@dataclass(frozen=True)
class OptConfig:
    restarts: int = 32
    max_iters: int = 200
    tol: float = 1e-6
    seed: int = 0
    step0: float = 0.5
    step_min: float = 1e-7
    structured_starts: bool = True


@dataclass(frozen=True, eq=False)
class OptResult:
    """Best value found, the pure state achieving it, and per-restart bests.

    ``converged`` means the top restarts agreed within tol; it is a stability
    diagnostic, not a global-optimality certificate.
    """

    value: float
    argmax: np.ndarray
    restarts_used: int
    converged: bool
    history: tuple


def _pattern_search(f, v0: np.ndarray, cfg: OptConfig):
    """Coordinate-wise complex perturbations with shrinking step, projected
    back to the unit sphere.  Maximizes f."""
    v = v0 / np.linalg.norm(v0)
    fv = f(v)
    step = cfg.step0
    dim = v.size
    for _ in range(cfg.max_iters):
        if step < cfg.step_min:
            break
        improved = False
        for k in range(dim):
            for delta in (step, -step, 1j * step, -1j * step):
                cand = v.copy()
                cand[k] += delta
                nrm = np.linalg.norm(cand)
                if nrm < 1e-12:
                    continue
                cand /= nrm
                fc = f(cand)
                if fc > fv:
                    v, fv = cand, fc
                    improved = True
        if not improved:
            step *= 0.5
    return v, fv


def _starting_points(channel: KrausChannel, cfg: OptConfig,
                     rng: np.random.Generator) -> list:
    dim = channel.dim_in
    starts = []
    if cfg.structured_starts:
        e0 = np.zeros(dim, dtype=np.complex128)
        e0[0] = 1.0
        starts.append(e0)
        starts.append(np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))
        if channel.product_dims is not None:
            d1, d2 = channel.product_dims
            if d1 == d2 and d1 * d2 == dim:
                starts.append(maximally_entangled_state(d1))
    while len(starts) < cfg.restarts:
        g = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        starts.append(g / np.linalg.norm(g))
    return starts


def _optimize(channel: KrausChannel, objective, cfg: OptConfig,
              maximize: bool) -> OptResult:
    if channel.dim_in > MAX_OPT_DIM:
        raise ValueError(
            f"input dimension {channel.dim_in} exceeds the optimizer cap "
            f"{MAX_OPT_DIM}")
    sign = 1.0 if maximize else -1.0

    def f(v):
        rho = np.outer(v, v.conj())
        return sign * objective(_apply_raw(channel.stack, rho))

    rng = np.random.default_rng(cfg.seed)
    history = []
    best_v, best_f = None, -math.inf
    for start in _starting_points(channel, cfg, rng):
        v, fv = _pattern_search(f, start, cfg)
        history.append(sign * fv)
        if fv > best_f:
            best_v, best_f = v, fv
    top = sorted(history, reverse=maximize)[:3]
    converged = len(top) < 3 or abs(top[0] - top[2]) <= cfg.tol
    return OptResult(
        value=sign * best_f,
        argmax=best_v,
        restarts_used=len(history),
        converged=bool(converged),
        history=tuple(history),
    )


def nu_p(channel: KrausChannel, p, cfg: OptConfig = OptConfig(),
         tols: Tolerances = DEFAULT_TOLS) -> OptResult:
    """Maximal output p-norm over pure input states (a lower bound on the
    supremum over all density matrices, which pure states attain)."""
    pv = core._pvalue(p)

    def objective(out):
        w = np.abs(core.hermitian_eig(out, tols).values)
        if math.isinf(pv):
            return float(w[0]) if w.size else 0.0
        return float((w ** pv).sum()) ** (1.0 / pv)

    return _optimize(channel, objective, cfg, maximize=True)


def s_min(channel: KrausChannel, cfg: OptConfig = OptConfig(),
          tols: Tolerances = DEFAULT_TOLS) -> OptResult:
    """Minimal output von Neumann entropy over pure input states."""

    def objective(out):
        w = core.hermitian_eig(out, tols).values
        return core.von_neumann_entropy(w)

    return _optimize(channel, objective, cfg, maximize=False)


@dataclass(frozen=True)
class GapRecord:
    """Multiplicativity measurement for a product channel at one p."""

    nu_product: float
    nu_joint_lower: float
    gap: float
    converged: bool


def multiplicativity_gap(chan1: KrausChannel, chan2: KrausChannel, p,
                         cfg: OptConfig = OptConfig(),
                         tols: Tolerances = DEFAULT_TOLS) -> GapRecord:
    """Compare nu_p(Phi1 (x) Phi2) against nu_p(Phi1) nu_p(Phi2).

    gap > 0 certifies a multiplicativity violation (the joint value is a
    feasible lower bound that beats the product); gap <= 0 is evidence of
    multiplicativity, not proof.
    """
    r1 = nu_p(chan1, p, cfg, tols)
    r2 = nu_p(chan2, p, cfg, tols)
    joint = nu_p(tensor(chan1, chan2), p, cfg, tols)
    product = r1.value * r2.value
    return GapRecord(
        nu_product=product,
        nu_joint_lower=joint.value,
        gap=joint.value - product,
        converged=r1.converged and r2.converged and joint.converged,
    )


def entangled_lower_bound(chan1: KrausChannel, chan2: KrausChannel, p,
                          tols: Tolerances = DEFAULT_TOLS) -> float:
    """||(Phi1 (x) Phi2)(|psi><psi|)||_p for the maximally entangled psi;
    a deterministic feasible point, hence a lower bound on the joint
    maximal p-norm."""
    if chan1.dim_in != chan2.dim_in:
        raise DimensionMismatchError(
            "the maximally entangled witness needs equal input dimensions")
    d = chan1.dim_in
    psi = maximally_entangled_state(d)
    joint = tensor(chan1, chan2)
    out = _apply_raw(joint.stack, np.outer(psi, psi.conj()))
    return core.schatten_norm(out, p, tols)


def depolarizing_product_bound_check(phi: KrausChannel, lam: float, p,
                                     samples: int, rng: np.random.Generator,
                                     cfg: OptConfig = OptConfig(),
                                     tols: Tolerances = DEFAULT_TOLS) -> float:
    """Worst-case margin of ||(Delta (x) Phi)(rho)||_p <= nu_p(Delta) nu_p(Phi)
    over random bipartite density matrices, for p >= 2.

    Returns min over samples of the (expected nonnegative) margin."""
    pv = core._pvalue(p)
    if pv < 2.0:
        raise ValueError(f"the product bound is claimed for p >= 2, got {pv}")
    delta = depolarizing(lam, tols)
    bound = nu_p_depolarizing(lam, pv) * nu_p(phi, pv, cfg, tols).value
    joint = tensor(delta, phi)
    dim = joint.dim_in
    worst = math.inf
    for _ in range(samples):
        rho = sample_density(dim, rng)
        val = core.schatten_norm(_apply_raw(joint.stack, rho), pv, tols)
        worst = min(worst, bound - val)
    return worst
