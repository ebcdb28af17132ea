"""Closed-form CP^2 / CP^3 Veronese matrices used as reference values."""

import numpy as np

S2, S3 = np.sqrt(2.0), np.sqrt(3.0)


def p1_cp2(xi):
    z, zb = xi, np.conj(xi)
    r = abs(xi) ** 2
    m = np.array(
        [
            [2 * r, S2 * (r - 1) * zb, -2 * zb**2],
            [S2 * (r - 1) * z, (r - 1) ** 2, -S2 * (r - 1) * zb],
            [-2 * z**2, -S2 * (r - 1) * z, 2 * r],
        ]
    )
    return m / (r + 1) ** 2


def x0_cp2(xi):
    z, zb = xi, np.conj(xi)
    r = abs(xi) ** 2
    m = 1j * np.array(
        [
            [1, S2 * zb, zb**2],
            [S2 * z, 2 * r, S2 * r * zb],
            [z**2, S2 * r * z, r**2],
        ]
    )
    return 1j / 3 * np.eye(3) - m / (r + 1) ** 2


def x1_cp2(xi):
    # prefactor 1/(|xi|^2+1); the squared form does not give a traceless matrix
    z, zb = xi, np.conj(xi)
    r = abs(xi) ** 2
    m = 1j * np.array([[2, S2 * zb, 0], [S2 * z, r + 1, S2 * zb], [0, S2 * z, 2 * r]])
    return 1j * np.eye(3) - m / (r + 1)


def psi0_cp3(xi, lam):
    f = np.array([1, S3 * xi, S3 * xi**2, xi**3])
    r = abs(xi) ** 2
    return 2 * (1 - lam) / (r + 1) ** 3 * np.outer(f, np.conj(f))


def psi1_cp3(xi, lam):
    z, zb = xi, np.conj(xi)
    r = abs(xi) ** 2
    l = lam
    a12 = S3 * (2 * (l - 1) * r + l + 1)
    a13 = S3 * ((l - 1) * r + 2)
    a23 = 2 * (l - 1) * r**2 + (l + 5) * r + 2 * (l - 1)
    a24 = S3 * (2 * r + l - 1)
    a34 = S3 * r * ((l + 1) * r + 2 * (l - 1))
    m = np.array(
        [
            [3 * (l - 1) * r + 2 * l, a12 * zb, a13 * zb**2, (3 - l) * zb**3],
            [a12 * z, 4 * (l - 1) * r**2 + 2 * (l + 2) * r + l - 1, a23 * zb, a24 * zb**2],
            [a13 * z**2, a23 * z, r * ((l - 1) * r**2 + 2 * (l + 2) * r + 4 * (l - 1)), a34 * zb],
            [(3 - l) * z**3, a24 * z**2, a34 * z, r**2 * ((2 * r + 3) * l - 3)],
        ]
    )
    return -2 / (r + 1) ** 3 * m
