"""Dense finite-difference cantilever model and a tensor Gauss-Legendre oracle.

Independent of the C++ banded assembly: builds the moment field w = E u''
as an explicit matrix product D2(E) * D2, then applies the second difference
again, with the ghost-node closures written out directly.
"""
import numpy as np


def stiffness_at_nodes(m, n, length=1.0, breaks=(1 / 3, 2 / 3)):
    x = np.linspace(0.0, length, n)
    region = np.array([sum(xi > b * length for b in breaks) for xi in x])
    return np.exp(np.asarray(m)[region])


def deflection(m, n=31, length=1.0, load=1.0):
    h = length / (n - 1)
    e = stiffness_at_nodes(m, n, length)
    # curvature operator on u_0..u_{n-1}, rows j = 0..n-2, ghost u_{-1} = u_1
    c = np.zeros((n - 1, n))
    for j in range(n - 1):
        if j == 0:
            c[0, 0], c[0, 1] = -2.0, 2.0
        else:
            c[j, j - 1:j + 2] = (1.0, -2.0, 1.0)
    w = np.diag(e[: n - 1]) @ c / h**2          # w_0..w_{n-2}; w_{n-1} = 0
    wfull = np.vstack([w, np.zeros((1, n)), w[n - 2]])  # w_n = w_{n-2}
    k = np.zeros((n, n))
    k[0, 0] = 1.0
    for i in range(1, n):
        k[i] = (wfull[i - 1] - 2 * wfull[i] + wfull[i + 1]) / h**2
    g = np.full(n, load)
    g[0] = 0.0
    return np.linalg.solve(k, g)


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    u = deflection([1.1, 1.1, 1.1])
    print("u(1.1,1.1,1.1) tip:", repr(u[-1]), " u[15]:", repr(u[15]))
    x = np.linspace(0, 1, 31)
    exact = x**2 * (x**2 - 4 * x + 6) / 24 / np.exp(1.1)
    print("max err vs analytic:", np.abs(u - exact).max())
    nodes, weights = np.polynomial.legendre.leggauss(16)
    t = 1.1 + 0.1 * nodes
    wts = weights / 2
    tip = 0.0
    mean = np.zeros(31)
    for a, wa in zip(t, wts):
        for b, wb in zip(t, wts):
            for c, wc in zip(t, wts):
                ui = deflection([a, b, c])
                mean += wa * wb * wc * ui
    print("expected tip (GL 16^3):", repr(mean[-1]))
    print("expected u[10], u[20]:", repr(mean[10]), repr(mean[20]))
