"""Reference implementations used only by the tests.

Everything here deliberately uses different algorithms than the package:
adaptive ODE integration instead of exact piecewise exponentials,
forward-nested quadrature instead of backward sweeps, Taylor series
with step doubling instead of Pade exponentials, and basis-column
assembly instead of Kronecker products. Agreement with the package is
therefore a meaningful cross-check, not a tautology.
"""

import math

import numpy as np
from scipy.integrate import solve_ivp


def apply_master_equation(rho, h, collapse):
    """Right-hand side -i[H, rho] + sum_j D[L_j] rho, acting on a matrix."""
    out = -1j * (h @ rho - rho @ h)
    for lop in collapse:
        ldl = lop.conj().T @ lop
        out = out + lop @ rho @ lop.conj().T - 0.5 * (ldl @ rho + rho @ ldl)
    return out


def generator_matrix(h, collapse):
    """Column-stacked generator assembled column by column (no kron)."""
    d = h.shape[0]
    cols = []
    for j in range(d * d):
        basis = np.zeros((d, d), dtype=complex)
        basis[j % d, j // d] = 1.0
        cols.append(apply_master_equation(basis, h, collapse).reshape(-1, order="F"))
    return np.column_stack(cols)


def mirror_qubit_ops(gamma, phi, delta=0.0, alpha=0.0, gamma_nr=0.0):
    """(H, collapse list) of the phase-tunable qubit, assembled afresh."""
    sm = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    geff = gamma * (1.0 + math.cos(phi))
    lop = math.sqrt(geff) * np.exp(1j * phi / 2.0) * sm
    h = ((delta - (gamma / 2.0) * math.sin(phi)) / 2.0) * sz
    if alpha != 0:
        x = alpha * np.exp(1j * phi) * lop.conj().T
        h = h + (-1j) * (x - x.conj().T)
    collapse = [lop]
    if gamma_nr > 0:
        collapse.append(math.sqrt(gamma_nr) * sm)
    return h, collapse


def ode_propagator(pieces, dim, rtol=1e-11, atol=1e-13):
    """Adaptive-step propagator over [(t0, t1, generator matrix), ...].

    Integrates the full matrix ODE dP/dt = L(t) P with an embedded
    Runge-Kutta method, chaining the pieces in order.
    """
    d2 = dim * dim
    p = np.eye(d2, dtype=complex)
    for a, b, gen in pieces:
        def rhs(t, y, gen=gen):
            return (gen @ y.reshape(d2, d2)).reshape(-1)

        sol = solve_ivp(rhs, (a, b), p.reshape(-1), method="DOP853",
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise RuntimeError(f"ODE integration failed on ({a}, {b})")
        p = sol.y[:, -1].reshape(d2, d2)
    return p


def naive_counting_moments(times, steps, ops, states, mmax=3):
    """Ordered counting integrals by explicit forward-nested trapezoids.

    O(n^m) and meant for coarse grids only. `steps[k]` maps grid point k
    to k+1, `ops[k]` is the counting operator at point k, `states[k]`
    the column-stacked state.
    """
    t = np.asarray(times, dtype=float)
    n = len(t)
    d2 = states[0].shape[0]
    d = int(round(math.sqrt(d2)))
    js = [np.kron(m.conj(), m) for m in ops]
    tr = np.zeros(d2, dtype=complex)
    tr[:: d + 1] = 1.0
    jrows = [tr @ j for j in js]

    f1 = np.array([(jrows[i] @ states[i]).real for i in range(n)])
    out = [float(np.trapezoid(f1, t))]
    if mmax < 2:
        return out

    f2 = np.empty(n)
    for i in range(n):
        y = js[i] @ states[i]
        vals = np.empty(n - i)
        vals[0] = (jrows[i] @ y).real
        yk = y
        for k in range(i + 1, n):
            yk = steps[k - 1] @ yk
            vals[k - i] = (jrows[k] @ yk).real
        f2[i] = np.trapezoid(vals, t[i:])
    out.append(float(np.trapezoid(f2, t)))
    if mmax < 3:
        return out

    f3 = np.empty(n)
    for i in range(n):
        yj = js[i] @ states[i]
        g = np.empty(n - i)
        for jj in range(i, n):
            if jj > i:
                yj = steps[jj - 1] @ yj
            z = js[jj] @ yj
            vals = np.empty(n - jj)
            vals[0] = (jrows[jj] @ z).real
            zk = z
            for k in range(jj + 1, n):
                zk = steps[k - 1] @ zk
                vals[k - jj] = (jrows[k] @ zk).real
            g[jj - i] = np.trapezoid(vals, t[jj:])
        f3[i] = np.trapezoid(g, t[i:])
    out.append(float(np.trapezoid(f3, t)))
    return out


def forward_binomial_moments(probs, mmax):
    """N_m = sum_n C(n, m) P_n, the exact moment map of a finite P vector."""
    return [
        sum(math.comb(nn, m) * p for nn, p in enumerate(probs))
        for m in range(1, mmax + 1)
    ]


def poisson_moments(lam, mmax):
    """Ordered counting moments of a Poisson field: lam^m / m!."""
    return [lam ** m / math.factorial(m) for m in range(1, mmax + 1)]


def expm_series(mat, t):
    """exp(mat * t) by scaling, Taylor summation, and repeated squaring."""
    a = np.asarray(mat, dtype=complex) * t
    k = 0
    while np.linalg.norm(a, np.inf) > 0.25:
        a = a / 2.0
        k += 1
    d = a.shape[0]
    out = np.eye(d, dtype=complex)
    term = np.eye(d, dtype=complex)
    for j in range(1, 60):
        term = term @ a / j
        out = out + term
        if np.linalg.norm(term, np.inf) < 1e-20:
            break
    for _ in range(k):
        out = out @ out
    return out
