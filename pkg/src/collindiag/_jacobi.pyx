# Compiled cyclic Jacobi sweep; mirrors _jacobi_py.jacobi operation for operation.
from libc.math cimport sqrt, fabs


cdef double _off_norm(double[:, ::1] a, Py_ssize_t k) noexcept nogil:
    cdef double total = 0.0
    cdef Py_ssize_t i, j
    for i in range(k):
        for j in range(k):
            if i != j:
                total += a[i, j] * a[i, j]
    return sqrt(total)


def jacobi(double[:, ::1] a, double[:, ::1] v, double rel_tol, int max_sweeps):
    """Diagonalise ``a`` in place, accumulating rotations into ``v``.

    Returns the number of sweeps, or -1 if ``max_sweeps`` ran out.
    """
    cdef Py_ssize_t k = a.shape[0]
    cdef Py_ssize_t p, q, r, i, j
    cdef double total = 0.0, tol
    cdef double apq, app, aqq, theta, t, c, s, tau
    cdef double arp, arq, nrp, nrq, vrp, vrq
    cdef int sweeps = 0
    cdef bint converged = False

    if a.shape[1] != k or v.shape[0] != k or v.shape[1] != k:
        raise ValueError("a and v must be square and of equal order")

    with nogil:
        for i in range(k):
            for j in range(k):
                total += a[i, j] * a[i, j]
        tol = rel_tol * sqrt(total)

        while True:
            if _off_norm(a, k) <= tol:
                converged = True
                break
            if sweeps == max_sweeps:
                break
            sweeps += 1
            for p in range(k - 1):
                for q in range(p + 1, k):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    tau = s / (1.0 + c)
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for r in range(k):
                        if r == p or r == q:
                            continue
                        arp = a[r, p]
                        arq = a[r, q]
                        nrp = arp - s * (arq + tau * arp)
                        nrq = arq + s * (arp - tau * arq)
                        a[r, p] = nrp
                        a[p, r] = nrp
                        a[r, q] = nrq
                        a[q, r] = nrq
                    for r in range(k):
                        vrp = v[r, p]
                        vrq = v[r, q]
                        v[r, p] = vrp - s * (vrq + tau * vrp)
                        v[r, q] = vrq + s * (vrp - tau * vrq)

    return sweeps if converged else -1
