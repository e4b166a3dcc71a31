"""Pure-Python cyclic Jacobi sweep.

Same arithmetic, same operation order as ``_jacobi.pyx`` so both backends
return identical bits on the same input.
"""
from math import sqrt


def _off_norm(a, k):
    total = 0.0
    for i in range(k):
        row = a[i]
        for j in range(k):
            if i != j:
                total += row[j] * row[j]
    return sqrt(total)


def jacobi(a_arr, v_arr, rel_tol, max_sweeps):
    """Diagonalise the symmetric matrix ``a_arr`` in place.

    ``v_arr`` must enter as the identity; on return its columns are the
    eigenvectors and the diagonal of ``a_arr`` holds the eigenvalues.
    Returns the number of sweeps used, or -1 if ``max_sweeps`` ran out.
    """
    k = a_arr.shape[0]
    a = a_arr.tolist()
    v = v_arr.tolist()

    total = 0.0
    for i in range(k):
        for j in range(k):
            total += a[i][j] * a[i][j]
    tol = rel_tol * sqrt(total)

    sweeps = 0
    converged = False
    while True:
        if _off_norm(a, k) <= tol:
            converged = True
            break
        if sweeps == max_sweeps:
            break
        sweeps += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                app = a[p][p]
                aqq = a[q][q]
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p][p] = app - t * apq
                a[q][q] = aqq + t * apq
                a[p][q] = 0.0
                a[q][p] = 0.0
                for r in range(k):
                    if r == p or r == q:
                        continue
                    arp = a[r][p]
                    arq = a[r][q]
                    nrp = arp - s * (arq + tau * arp)
                    nrq = arq + s * (arp - tau * arq)
                    a[r][p] = nrp
                    a[p][r] = nrp
                    a[r][q] = nrq
                    a[q][r] = nrq
                for r in range(k):
                    vrp = v[r][p]
                    vrq = v[r][q]
                    v[r][p] = vrp - s * (vrq + tau * vrp)
                    v[r][q] = vrq + s * (vrp - tau * vrq)

    for i in range(k):
        for j in range(k):
            a_arr[i, j] = a[i][j]
            v_arr[i, j] = v[i][j]
    return sweeps if converged else -1
