"""Independent high-precision references (mpmath), sharing no code with the package."""

import mpmath


def mp_orbit(a, terms, z0, w0, n, dps=60):
    with mpmath.workdps(dps):
        z, w = mpmath.mpc(z0), mpmath.mpc(w0)
        out = [(z, w)]
        for _ in range(n):
            fz = sum(A * mpmath.exp(-k * z) for A, k in terms) if terms else mpmath.mpc(0)
            z, w = a * w + fz, z
            out.append((z, w))
        return out


def mp_k_sums(a, terms, z0, w0, N=200, dps=60):
    """k1, k2 summed to N terms in high precision."""
    with mpmath.workdps(dps):
        orbit = mp_orbit(a, terms, z0, w0, 2 * N, dps)

        def f(z):
            return sum(A * mpmath.exp(-k * z) for A, k in terms) if terms else mpmath.mpc(0)

        a = mpmath.mpf(a)
        k1 = sum(a ** (-j) * f(orbit[2 * j - 1][0]) for j in range(1, N + 1))
        k2 = sum(a ** (-j) * f(orbit[2 * j - 2][0]) for j in range(1, N + 1))
        return complex(k1), complex(k2)


def mp_h(a, terms, z0, w0, N=200):
    k1, k2 = mp_k_sums(a, terms, z0, w0, N)
    with mpmath.workdps(60):
        h1 = (mpmath.mpc(z0) + k1) / (mpmath.mpc(w0) + k2)
        return complex(h1), complex(a / h1)
