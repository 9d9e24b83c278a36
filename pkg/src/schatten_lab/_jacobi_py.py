"""Pure-Python twin of the compiled cyclic Jacobi kernel.

Same rotation formulas, skip threshold and stopping rule as ``_jacobi.pyx``,
written with vectorized row/column updates.  Used automatically when the
compiled extension is unavailable, or when SCHATTEN_LAB_BACKEND=python.
"""

import numpy as np


def jacobi_eigh(a, tol=1e-13, max_sweeps=60):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, V, off, converged)``; see the compiled kernel for the
    contract.
    """
    A = np.array(a, dtype=np.complex128, order="C", copy=True)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValueError("square matrix required")
    V = np.eye(n, dtype=np.complex128)

    fro = float(np.linalg.norm(A))
    stop = tol * max(fro, 1e-300)
    small = stop / (2.0 * n) if n > 0 else 0.0
    converged = False
    off = 0.0

    def _off():
        return float(np.sqrt(2.0) * np.linalg.norm(A[np.triu_indices(n, 1)]))

    for _sweep in range(max_sweeps):
        off = _off()
        if off <= stop:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                wpq = A[p, q]
                r = abs(wpq)
                if r <= small:
                    continue
                ph = wpq / r
                tau = (A[p, p].real - A[q, q].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sp = s * ph
                spc = s * np.conj(ph)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp + spc * colq
                A[:, q] = c * colq - sp * colp
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp + sp * rowq
                A[q, :] = c * rowq - spc * rowp
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp + spc * vq
                V[:, q] = c * vq - sp * vp

    if not converged and n > 0:
        off = _off()
        converged = off <= stop

    w = np.diag(A).real.copy()
    return w, V, off, bool(converged)
