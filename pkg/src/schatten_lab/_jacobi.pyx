# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

Compiled hot kernel.  The algorithm (rotation formulas, skip threshold,
stopping rule) must stay in lockstep with the pure-Python twin in
``_jacobi_py``; the test suite cross-checks the two.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

ctypedef double complex cplx


def jacobi_eigh(object a, double tol=1e-13, int max_sweeps=60):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, V, off, converged)`` with unsorted eigenvalues ``w``,
    eigenvector columns ``V``, the final off-diagonal Frobenius norm and a
    convergence flag.  The input is assumed Hermitian; only its Hermitian
    part influences the result.
    """
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] A = np.array(
        a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("square matrix required")
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] V = np.eye(n, dtype=np.complex128)
    cdef cnp.ndarray[double, ndim=1] w = np.empty(n, dtype=np.float64)

    cdef Py_ssize_t i, j, p, q, k, sweep
    cdef double fro = 0.0, off2, off = 0.0, stop, small
    cdef double r, tau, t, c, s, app, aqq
    cdef cplx wpq, ph, phc, sp, spc, akp, akq, apk, aqk, vkp, vkq
    cdef bint converged = False

    for i in range(n):
        for j in range(n):
            fro += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
    fro = sqrt(fro)
    stop = tol * (fro if fro > 1e-300 else 1e-300)
    small = stop / (2.0 * n) if n > 0 else 0.0

    for sweep in range(max_sweeps):
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
        off = sqrt(2.0 * off2)
        if off <= stop:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                wpq = A[p, q]
                r = sqrt(wpq.real * wpq.real + wpq.imag * wpq.imag)
                if r <= small:
                    continue
                ph = wpq / r
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (app - aqq) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()
                sp = s * ph
                spc = s * phc
                # A <- G^H A G: columns first, then rows
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp + spc * akq
                    A[k, q] = c * akq - sp * akp
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk + sp * aqk
                    A[q, k] = c * aqk - spc * apk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp + spc * vkq
                    V[k, q] = c * vkq - sp * vkp

    if not converged and n > 0:
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
        off = sqrt(2.0 * off2)
        if off <= stop:
            converged = True

    for i in range(n):
        w[i] = A[i, i].real
    return w, V, off, bool(converged)
