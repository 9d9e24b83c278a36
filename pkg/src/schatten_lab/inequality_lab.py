"""Signed-margin evaluation of the block-matrix norm inequalities.

Every check returns a CheckRecord whose margin is oriented so that margin >= 0
means the claimed inequality holds on that instance; a record fails only when
the margin dips below -tol_rel * scale.  The fuzz harness drives the checks
over seeded random inputs and is deterministic per (seed, trial index).
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from schatten_lab import blockmat, schatten_core as core
from schatten_lab.blockmat import GeneralBlock, PositiveBlock
from schatten_lab.config import DEFAULT_TOLS, Tolerances
from schatten_lab.errors import (
    ConvergenceError,
    DimensionTooLargeError,
    InvalidPairError,
    NearSingularError,
    NotPositiveError,
    SchattenLabError,
    UnstableEstimateError,
)

INEQUALITY_IDS = (
    "THM1A", "THM1B", "THM2A", "THM2B", "GROSS", "HANNER_FORM",
    "LEMMA2", "LEMMA3", "LEMMA4", "LEMMA5", "HOLDER_YXZ",
)

FAMILIES = ("thm1", "thm2", "gross", "hanner", "lemma2", "lemma3",
            "lemma4", "lemma5", "holder")

# dense near the p = 2 transition where both theorem directions meet
DEFAULT_P_GRID = (1.0, 1.1, 1.3, 1.5, 1.7, 1.9, 2.0, 2.1, 2.5, 3.0, 4.0,
                  7.0, 10.0, math.inf)

_ERROR_TAGS = {
    NearSingularError: "NEAR_SINGULAR",
    UnstableEstimateError: "UNSTABLE",
    NotPositiveError: "NOT_POSITIVE",
    InvalidPairError: "INVALID_PAIR",
    DimensionTooLargeError: "DIMENSION_TOO_LARGE",
    ConvergenceError: "CONVERGENCE_FAILURE",
}

_MIXED_MODES = ("default", "boundary", "hanner", "zero_y", "identity_r",
                "rank_deficient")
_MIXED_WEIGHTS = (0.60, 0.10, 0.10, 0.05, 0.10, 0.05)


@dataclass(frozen=True)
class CheckRecord:
    """One inequality evaluation: margin >= 0 means the claim held."""

    inequality_id: str
    p: float
    n: int
    lhs: float
    rhs: float
    margin: float
    seed: int
    passed: bool
    scale: float
    error: Optional[str] = None

    def to_json(self) -> dict:
        def num(x):
            return None if (x is None or math.isnan(x)) else x

        return {
            "inequality_id": self.inequality_id,
            "p": "inf" if math.isinf(self.p) else self.p,
            "n": self.n,
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "margin": num(self.margin),
            "seed": self.seed,
            "pass": self.passed,
            "scale": num(self.scale),
            "error": self.error,
        }

    @classmethod
    def from_json(cls, obj) -> "CheckRecord":
        def num(x):
            return math.nan if x is None else float(x)

        return cls(
            inequality_id=obj["inequality_id"],
            p=math.inf if obj["p"] == "inf" else float(obj["p"]),
            n=int(obj["n"]),
            lhs=num(obj["lhs"]),
            rhs=num(obj["rhs"]),
            margin=num(obj["margin"]),
            seed=int(obj["seed"]),
            passed=bool(obj["pass"]),
            scale=num(obj["scale"]),
            error=obj.get("error"),
        )


def _finish(inequality_id, p, n, lhs, rhs, margin, seed, tol_rel) -> CheckRecord:
    scale = max(abs(lhs), abs(rhs), 1.0)
    return CheckRecord(
        inequality_id=inequality_id,
        p=float(p),
        n=int(n),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        seed=int(seed),
        passed=bool(margin >= -tol_rel * scale),
        scale=float(scale),
    )


def _error_record(inequality_id, p, n, seed, exc) -> CheckRecord:
    tag = _ERROR_TAGS.get(type(exc), type(exc).__name__)
    return CheckRecord(
        inequality_id=inequality_id,
        p=float(p),
        n=int(n),
        lhs=math.nan,
        rhs=math.nan,
        margin=math.nan,
        seed=int(seed),
        passed=False,
        scale=math.nan,
        error=f"{tag}: {exc}",
    )


def theorem1_records(block: PositiveBlock, p_values: Sequence[float],
                     tols: Tolerances = DEFAULT_TOLS,
                     seed: int = -1) -> list:
    """||M||_p vs ||m||_p for a positive block: >= for p <= 2, <= for p >= 2.

    Singular values of the four matrices involved are computed once and
    reused across the p grid.
    """
    sv_m = core.singular_values(blockmat.assemble(block), tols)
    sv_x = core.singular_values(block.X, tols)
    sv_y = core.singular_values(block.Y, tols)
    sv_z = core.singular_values(block.Z, tols)
    records = []
    for p in p_values:
        pv = core._pvalue(p)
        lhs = core.norm_from_singular_values(sv_m, pv)
        x = core.norm_from_singular_values(sv_x, pv)
        y = core.norm_from_singular_values(sv_y, pv)
        z = core.norm_from_singular_values(sv_z, pv)
        if y > math.sqrt(x * z) + tols.psd * max(1.0, x, z):
            raise ValueError(
                f"norm summary not PSD at p={pv}; block is likely not positive")
        summary = np.array([[x, y], [y, z]])
        rhs = core.schatten_norm(summary, pv, tols)
        if pv <= 2.0:
            records.append(_finish("THM1A", pv, block.n, lhs, rhs, lhs - rhs,
                                   seed, tols.check_rel))
        else:
            records.append(_finish("THM1B", pv, block.n, lhs, rhs, rhs - lhs,
                                   seed, tols.check_rel))
    return records


def check_theorem1(block: PositiveBlock, p, tols: Tolerances = DEFAULT_TOLS,
                   seed: int = -1) -> CheckRecord:
    return theorem1_records(block, (p,), tols, seed)[0]


def theorem2_records(block: GeneralBlock, p_values: Sequence[float],
                     tols: Tolerances = DEFAULT_TOLS,
                     seed: int = -1) -> list:
    """Four-block norm vs the alpha-summary bound; orientation flips at p = 2.

    Finite p only: the right side diverges as p -> inf unless the summary is
    a multiple of the identity, so no claim is evaluated there.
    """
    sv_j = core.singular_values(blockmat.assemble(block), tols)
    sv = {name: core.singular_values(getattr(block, name), tols)
          for name in ("X", "Y", "W", "Z")}
    records = []
    for p in p_values:
        pv = core._pvalue(p)
        if math.isinf(pv):
            raise ValueError("theorem-2 check is defined for finite p only")
        lhs = core.norm_from_singular_values(sv_j, pv)
        x = core.norm_from_singular_values(sv["X"], pv)
        z = core.norm_from_singular_values(sv["Z"], pv)
        y = core.norm_from_singular_values(sv["Y"], pv)
        w = core.norm_from_singular_values(sv["W"], pv)
        off = (0.5 * y ** pv + 0.5 * w ** pv) ** (1.0 / pv)
        tr = x + z
        tr2 = x * x + z * z + 2.0 * off * off
        bracket = 0.5 * (pv - 1.0) * tr2 + 0.25 * (2.0 - pv) * tr * tr
        rhs = 2.0 ** (1.0 / pv) * math.sqrt(max(bracket, 0.0))
        if pv <= 2.0:
            records.append(_finish("THM2A", pv, block.n, lhs, rhs, lhs - rhs,
                                   seed, tols.check_rel))
        else:
            records.append(_finish("THM2B", pv, block.n, lhs, rhs, rhs - lhs,
                                   seed, tols.check_rel))
    return records


def check_theorem2(block: GeneralBlock, p, tols: Tolerances = DEFAULT_TOLS,
                   seed: int = -1) -> CheckRecord:
    return theorem2_records(block, (p,), tols, seed)[0]


def check_gross(a: float, b: float, p, tols: Tolerances = DEFAULT_TOLS,
                seed: int = -1) -> CheckRecord:
    """Two-point inequality (|a+b|^p + |a-b|^p)^{1/p} >= 2^{1/p} sqrt(a^2 + (p-1)b^2)."""
    pv = core._pvalue(p)
    if pv > 2.0:
        raise ValueError(f"the two-point inequality requires 1 <= p <= 2, got {pv}")
    lhs = (abs(a + b) ** pv + abs(a - b) ** pv) ** (1.0 / pv)
    rhs = 2.0 ** (1.0 / pv) * math.sqrt(a * a + (pv - 1.0) * b * b)
    return _finish("GROSS", pv, 1, lhs, rhs, lhs - rhs, seed, tols.check_rel)


def holder_yxz_records(block: PositiveBlock, p_values: Sequence[float],
                       tols: Tolerances = DEFAULT_TOLS,
                       seed: int = -1) -> list:
    """||Y||_p <= sqrt(||X||_p ||Z||_p) for a positive block."""
    sv_x = core.singular_values(block.X, tols)
    sv_y = core.singular_values(block.Y, tols)
    sv_z = core.singular_values(block.Z, tols)
    records = []
    for p in p_values:
        pv = core._pvalue(p)
        lhs = core.norm_from_singular_values(sv_y, pv)
        rhs = math.sqrt(core.norm_from_singular_values(sv_x, pv)
                        * core.norm_from_singular_values(sv_z, pv))
        records.append(_finish("HOLDER_YXZ", pv, block.n, lhs, rhs, rhs - lhs,
                               seed, tols.check_rel))
    return records


def check_holder_yxz(block: PositiveBlock, p, tols: Tolerances = DEFAULT_TOLS,
                     seed: int = -1) -> CheckRecord:
    return holder_yxz_records(block, (p,), tols, seed)[0]


def hanner_form_records(block: PositiveBlock, p_values: Sequence[float],
                        tols: Tolerances = DEFAULT_TOLS,
                        seed: int = -1) -> list:
    """Identity check for X = Z, Y = Y* blocks:
    ||M||_p^p = ||X+Y||_p^p + ||X-Y||_p^p.

    As an identity the margin is -|lhs - rhs|, so a record passes only when
    the two evaluation routes agree within tolerance.
    """
    scale_ref = 1.0 + core.max_abs(block.X)
    if core.max_abs(block.X - block.Z) > 1e-10 * scale_ref:
        raise InvalidPairError("split form needs X = Z")
    if core.max_abs(block.Y - block.Y.conj().T) > 1e-10 * scale_ref:
        raise InvalidPairError("split form needs Hermitian Y")
    sv_m = core.singular_values(blockmat.assemble(block), tols)
    sv_plus = core.singular_values(block.X + block.Y, tols)
    sv_minus = core.singular_values(block.X - block.Y, tols)
    records = []
    for p in p_values:
        pv = core._pvalue(p)
        direct = core.norm_from_singular_values(sv_m, pv)
        if math.isinf(pv):
            form = max(core.norm_from_singular_values(sv_plus, pv),
                       core.norm_from_singular_values(sv_minus, pv))
        else:
            form = (core.trace_power_from_singular_values(sv_plus, pv)
                    + core.trace_power_from_singular_values(sv_minus, pv)
                    ) ** (1.0 / pv)
        records.append(_finish("HANNER_FORM", pv, block.n, form, direct,
                               -abs(form - direct), seed, tols.check_rel))
    return records


def check_hanner_form(block: PositiveBlock, p, tols: Tolerances = DEFAULT_TOLS,
                      seed: int = -1) -> CheckRecord:
    return hanner_form_records(block, (p,), tols, seed)[0]


def lemma2_records(block_a: PositiveBlock, block_b: PositiveBlock,
                   p_values: Sequence[float], lam: float,
                   tols: Tolerances = DEFAULT_TOLS, seed: int = -1) -> list:
    """Joint convexity of (X, Z) -> Tr M^p - Tr X^p - Tr Z^p at fixed Y,
    1 <= p <= 2, tested as the segment inequality at weight lam.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if core.max_abs(block_a.Y - block_b.Y) > 1e-12 * (1.0 + core.max_abs(block_a.Y)):
        raise InvalidPairError("blocks must share the off-diagonal block Y")
    mixed = PositiveBlock(
        block_a.n,
        lam * block_a.X + (1.0 - lam) * block_b.X,
        block_a.Y,
        lam * block_a.Z + (1.0 - lam) * block_b.Z,
    )
    svs = [(core.singular_values(blockmat.assemble(blk), tols),
            core.singular_values(blk.X, tols),
            core.singular_values(blk.Z, tols))
           for blk in (block_a, block_b, mixed)]
    records = []
    for p in p_values:
        pv = core._pvalue(p)
        if pv > 2.0:
            raise ValueError(f"convexity is claimed for 1 <= p <= 2, got {pv}")
        fa, fb, fmix = (
            core.trace_power_from_singular_values(sv_m, pv)
            - core.trace_power_from_singular_values(sv_x, pv)
            - core.trace_power_from_singular_values(sv_z, pv)
            for sv_m, sv_x, sv_z in svs)
        lhs = lam * fa + (1.0 - lam) * fb
        rhs = fmix
        records.append(_finish("LEMMA2", pv, block_a.n, lhs, rhs, lhs - rhs,
                               seed, tols.lemma_rel))
    return records


def check_lemma2(block_a: PositiveBlock, block_b: PositiveBlock, p,
                 lam: float, tols: Tolerances = DEFAULT_TOLS,
                 seed: int = -1) -> CheckRecord:
    return lemma2_records(block_a, block_b, (p,), lam, tols, seed)[0]


def _entrywise_root_trace_power(m2: np.ndarray, p: float,
                                tols: Tolerances) -> float:
    """g(A) = Tr [[a^{1/p}, c^{1/p}], [c^{1/p}, b^{1/p}]]^p for 2x2 A >= 0."""
    rooted = np.power(m2, 1.0 / p)
    return core.trace_abs_power(rooted, p, tols)


def _validate_lemma34_matrix(m, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.shape != (2, 2):
        raise ValueError(f"{name} must be a 2x2 matrix")
    if abs(a[0, 1] - a[1, 0]) > 1e-12 * (1.0 + np.max(np.abs(a))):
        raise ValueError(f"{name} must be symmetric")
    if np.any(a < 0.0):
        raise NotPositiveError(f"{name} needs nonnegative entries")
    if a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0] <= 0.0:
        raise NotPositiveError(f"{name} must be positive definite (det > 0)")
    return a


def check_lemma3(mat_a, mat_b, p, tols: Tolerances = DEFAULT_TOLS,
                 seed: int = -1) -> CheckRecord:
    """Subadditivity g(A+B) <= g(A) + g(B) of the entrywise-root trace power
    on positive 2x2 matrices with nonnegative entries, 1 <= p <= 2.

    Also exercises the homogeneity g(kA) = k g(A) that upgrades
    subadditivity to convexity.
    """
    pv = core._pvalue(p)
    if pv > 2.0:
        raise ValueError(f"subadditivity is claimed for 1 <= p <= 2, got {pv}")
    a = _validate_lemma34_matrix(mat_a, "A")
    b = _validate_lemma34_matrix(mat_b, "B")
    ga = _entrywise_root_trace_power(a, pv, tols)
    gb = _entrywise_root_trace_power(b, pv, tols)
    gab = _entrywise_root_trace_power(a + b, pv, tols)
    for k in (0.5, 2.0):
        gk = _entrywise_root_trace_power(k * a, pv, tols)
        if abs(gk - k * ga) > 1e-10 * max(1.0, abs(k * ga)):
            raise ValueError(
                f"homogeneity self-test failed: g({k}A)={gk}, {k}g(A)={k * ga}")
    lhs = ga + gb
    rhs = gab
    return _finish("LEMMA3", pv, 2, lhs, rhs, lhs - rhs, seed, tols.lemma_rel)


def check_lemma4(a: float, b: float, c: float, p, delta: float,
                 tols: Tolerances = DEFAULT_TOLS, seed: int = -1) -> CheckRecord:
    """Monotonicity: (a, b) -> Tr A^p - a^p - b^p decreases in a and b at
    fixed c, for 1 <= p <= 2.  Checked in both coordinates with step delta.
    """
    pv = core._pvalue(p)
    if pv > 2.0:
        raise ValueError(f"monotonicity is claimed for 1 <= p <= 2, got {pv}")
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    _validate_lemma34_matrix(np.array([[a, c], [c, b]]), "A")

    def h(aa: float, bb: float) -> float:
        m = np.array([[aa, c], [c, bb]], dtype=float)
        return core.trace_abs_power(m, pv, tols) - aa ** pv - bb ** pv

    base = h(a, b)
    bumped = max(h(a + delta, b), h(a, b + delta))
    return _finish("LEMMA4", pv, 2, base, bumped, base - bumped, seed,
                   tols.lemma_rel)


DEFAULT_H_STEPS = (1e-2, 5e-3, 2.5e-3)


def check_lemma5(a_mat, b_mat, p, h_steps: Sequence[float] = DEFAULT_H_STEPS,
                 tols: Tolerances = DEFAULT_TOLS, seed: int = -1) -> CheckRecord:
    """Second-derivative bound at r = 0 of r -> (Tr|A + rB|^p)^{2/p}:
    the curvature is at least 2(p-1)(Tr|B|^p)^{2/p} for 1 < p <= 2.

    The derivative is estimated by central differences extrapolated to h -> 0
    (Neville in h^2); disagreement between the last two extrapolation levels
    raises UnstableEstimateError rather than guessing.
    """
    pv = core._pvalue(p)
    if not 1.0 < pv <= 2.0:
        raise ValueError(f"the curvature bound needs 1 < p <= 2, got {pv}")
    hs = [float(h) for h in h_steps]
    if len(hs) < 2 or any(h <= 0 for h in hs) or any(
            hs[i] <= hs[i + 1] for i in range(len(hs) - 1)):
        raise ValueError("h_steps must be a descending positive sequence")
    a = core.hermitian_part(a_mat, tols)
    b = core.hermitian_part(b_mat, tols)
    n = a.shape[0]
    wa = np.abs(core.hermitian_eig(a, tols).values)
    if wa.size and wa.min() < 1e-6 * wa.max():
        raise NearSingularError(
            f"min |eigenvalue| of A is {wa.min():.3e} (< 1e-6 * ||A||_op)")

    def phi(r: float) -> float:
        w = core.hermitian_eig(a + r * b, tols).values
        return float((np.abs(w) ** pv).sum()) ** (2.0 / pv)

    phi0 = phi(0.0)
    diffs = [(phi(h) - 2.0 * phi0 + phi(-h)) / (h * h) for h in hs]

    # Neville extrapolation in h^2 down to h = 0
    tableau = [list(diffs)]
    for k in range(1, len(hs)):
        row = []
        for i in range(len(hs) - k):
            ratio = (hs[i] / hs[i + k]) ** 2
            prev_lo = tableau[k - 1][i]
            prev_hi = tableau[k - 1][i + 1]
            row.append(prev_hi + (prev_hi - prev_lo) / (ratio - 1.0))
        tableau.append(row)
    estimate = tableau[-1][0]
    previous = tableau[-2][-1]

    wb = np.abs(core.hermitian_eig(b, tols).values)
    rhs = 2.0 * (pv - 1.0) * float((wb ** pv).sum()) ** (2.0 / pv)
    scale = max(abs(estimate), abs(previous), abs(rhs), 1.0)
    spread = abs(estimate - previous)
    if spread > tols.fd_unstable * scale:
        raise UnstableEstimateError(spread, scale)
    return _finish("LEMMA5", pv, n, estimate, rhs, estimate - rhs, seed,
                   tols.fd_pass)


# ---------------------------------------------------------------------------
# fuzzing


@dataclass(frozen=True)
class FuzzSpec:
    """A fuzz campaign: which inequality family, how many trials, over what
    dimensions and p values.  Deterministic for a fixed seed."""

    inequality: str
    trials: int
    dims: Sequence[int] = (2, 3, 4)
    p_grid: Sequence[float] = DEFAULT_P_GRID
    seed: int = 0
    sampler_mode: str = "mixed"
    tol_rel: Optional[float] = None

    def __post_init__(self):
        fam = self.inequality.lower()
        if fam not in FAMILIES:
            raise ValueError(
                f"unknown inequality family {self.inequality!r}; "
                f"choose from {FAMILIES}")
        object.__setattr__(self, "inequality", fam)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))


def family_p_grid(family: str, grid: Sequence[float]) -> tuple:
    """Restrict a p-grid to the range where the family's claim applies."""
    fam = family.lower()
    if fam in ("thm1", "hanner", "holder"):
        return tuple(grid)
    if fam == "thm2":
        return tuple(p for p in grid if not math.isinf(p))
    if fam == "lemma5":
        return tuple(p for p in grid if 1.0 < p <= 2.0)
    # gross, lemma2, lemma3, lemma4: claims live on [1, 2]
    return tuple(p for p in grid if p <= 2.0)


def trial_seed(base_seed: int, index: int) -> int:
    """Composite per-trial seed; recorded so any trial can be replayed."""
    return (int(base_seed) << 32) + int(index)


def _sample_thm1_block(n: int, mode: str, rng: np.random.Generator,
                       tols: Tolerances) -> PositiveBlock:
    if mode == "mixed":
        mode = _MIXED_MODES[rng.choice(len(_MIXED_MODES), p=_MIXED_WEIGHTS)]
    if mode == "hanner":
        return blockmat.sample_hanner_pair(n, rng)
    return blockmat.sample_positive_block(n, rng, mode=mode, tols=tols)


def run_trial(family: str, n: int, p_values: Sequence[float], mode: str,
              seed: int, tols: Tolerances = DEFAULT_TOLS,
              tol_rel: Optional[float] = None) -> list:
    """Sample one instance and evaluate it at every p in p_values.

    The sampling consumes the generator identically regardless of p_values,
    so a single (seed, n) pair replays any record it produced.
    """
    fam = family.lower()
    rng = np.random.default_rng(seed)
    use_tols = tols if tol_rel is None else replace(
        tols, check_rel=tol_rel, lemma_rel=tol_rel, fd_pass=tol_rel)
    records = []

    def guard(check, ineq_id, p):
        try:
            records.append(check())
        except (SchattenLabError, ValueError, ArithmeticError) as exc:
            records.append(_error_record(ineq_id, p, n, seed, exc))

    def guard_batch(batch, id_for_p):
        try:
            records.extend(batch())
        except (SchattenLabError, ValueError, ArithmeticError) as exc:
            records.extend(_error_record(id_for_p(p), p, n, seed, exc)
                           for p in p_values)

    if fam == "thm1":
        block = _sample_thm1_block(n, mode, rng, tols)
        guard_batch(lambda: theorem1_records(block, p_values, use_tols, seed),
                    lambda p: "THM1A" if p <= 2.0 else "THM1B")
    elif fam == "holder":
        block = _sample_thm1_block(n, mode, rng, tols)
        guard_batch(lambda: holder_yxz_records(block, p_values, use_tols, seed),
                    lambda p: "HOLDER_YXZ")
    elif fam == "thm2":
        block = blockmat.sample_general_block(n, rng)
        guard_batch(lambda: theorem2_records(block, p_values, use_tols, seed),
                    lambda p: "THM2A" if p <= 2.0 else "THM2B")
    elif fam == "hanner":
        block = blockmat.sample_hanner_pair(n, rng)
        guard_batch(lambda: hanner_form_records(block, p_values, use_tols, seed),
                    lambda p: "HANNER_FORM")
    elif fam == "gross":
        a, b = rng.uniform(-10.0, 10.0, size=2)
        for p in p_values:
            guard(lambda p=p: check_gross(a, b, p, use_tols, seed), "GROSS", p)
    elif fam == "lemma2":
        base = blockmat.sample_positive_block(n, rng, tols=tols)
        pert_x = blockmat.wishart(rng, n, 0.5)
        pert_z = blockmat.wishart(rng, n, 0.5)
        lam = float(rng.uniform())
        other = PositiveBlock(n, base.X + pert_x, base.Y, base.Z + pert_z)
        guard_batch(lambda: lemma2_records(base, other, p_values, lam,
                                           use_tols, seed),
                    lambda p: "LEMMA2")
    elif fam == "lemma3":
        mats = []
        for _ in range(2):
            a, b = rng.uniform(0.05, 4.0, size=2)
            c = float(rng.uniform(0.0, 0.999)) * math.sqrt(a * b)
            mats.append(np.array([[a, c], [c, b]]))
        for p in p_values:
            guard(lambda p=p: check_lemma3(mats[0], mats[1], p, use_tols, seed),
                  "LEMMA3", p)
    elif fam == "lemma4":
        a, b = rng.uniform(0.05, 4.0, size=2)
        c = float(rng.uniform(0.0, 0.999)) * math.sqrt(a * b)
        delta = float(rng.uniform(0.01, 10.0))
        for p in p_values:
            guard(lambda p=p: check_lemma4(a, b, c, p, delta, use_tols, seed),
                  "LEMMA4", p)
    elif fam == "lemma5":
        a = None
        for _ in range(100):
            g = blockmat.complex_gaussian(rng, n, n)
            cand = (g + g.conj().T) / 2.0
            w = np.abs(core.hermitian_eig(cand, tols).values)
            if w.min() >= 1e-6 * w.max():
                a = cand
                break
        g = blockmat.complex_gaussian(rng, n, n)
        b = (g + g.conj().T) / 2.0
        if a is None:
            records.extend(_error_record("LEMMA5", p, n, seed,
                                         NearSingularError("no well-conditioned A found"))
                           for p in p_values)
        else:
            for p in p_values:
                guard(lambda p=p: check_lemma5(a, b, p, tols=use_tols, seed=seed),
                      "LEMMA5", p)
    else:
        raise ValueError(f"unknown inequality family {family!r}")
    return records


def _run_chunk(args):
    spec, indices, tols = args
    grid = family_p_grid(spec.inequality, spec.p_grid)
    out = []
    for idx in indices:
        n = spec.dims[idx % len(spec.dims)]
        seed = trial_seed(spec.seed, idx)
        out.append((idx, run_trial(spec.inequality, n, grid, spec.sampler_mode,
                                   seed, tols, spec.tol_rel)))
    return out


def fuzz_suite(spec: FuzzSpec, tols: Tolerances = DEFAULT_TOLS,
               jobs: int = 1) -> list:
    """Run the campaign; deterministic under a fixed spec, failures first."""
    grid = family_p_grid(spec.inequality, spec.p_grid)
    indexed = []
    if jobs > 1:
        chunks = [(spec, list(range(lo, min(lo + 64, spec.trials))), tols)
                  for lo in range(0, spec.trials, 64)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_run_chunk, chunks):
                indexed.extend(part)
    else:
        for idx in range(spec.trials):
            n = spec.dims[idx % len(spec.dims)]
            seed = trial_seed(spec.seed, idx)
            indexed.append((idx, run_trial(spec.inequality, n, grid,
                                           spec.sampler_mode, seed, tols,
                                           spec.tol_rel)))
    indexed.sort(key=lambda pair: pair[0])
    ordered = [rec for _, recs in indexed for rec in recs]
    failures = [r for r in ordered if not r.passed]
    passes = [r for r in ordered if r.passed]
    return failures + passes


def replay_record(spec: FuzzSpec, record: CheckRecord,
                  tols: Tolerances = DEFAULT_TOLS) -> CheckRecord:
    """Recompute a record from its seed; must reproduce lhs/rhs exactly."""
    recs = run_trial(spec.inequality, record.n, (record.p,), spec.sampler_mode,
                     record.seed, tols, spec.tol_rel)
    return recs[0]


def summarize(records: Sequence[CheckRecord], spec: FuzzSpec) -> dict:
    margins = [r.margin for r in records if not math.isnan(r.margin)]
    return {
        "inequality_id": spec.inequality,
        "trials": spec.trials,
        "failures": sum(1 for r in records if not r.passed),
        "min_margin": min(margins) if margins else None,
        "p_grid": ["inf" if math.isinf(p) else p
                   for p in family_p_grid(spec.inequality, spec.p_grid)],
    }
