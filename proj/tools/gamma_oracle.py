#!/usr/bin/env python3
"""High-precision reference for disk-basis eigenvalues.

usage: gamma_oracle.py C M NMAX
Prints one line per n: n, chi_{M,n}(C), gamma_{M,n}(C) (sign arbitrary).
The Galerkin matrix is built at 50 digits and gamma is taken from the
least-squares ratio with mpmath Bessel functions.
"""
import sys

import mpmath as mp

mp.mp.dps = 50


def zern(m, J, r):
    t = 2 * r * r - 1
    b = mp.mpf(m)
    P = []
    for j in range(J):
        if j == 0:
            pj = mp.mpf(1)
        elif j == 1:
            pj = 1 + (b + 2) * (t - 1) / 2
        else:
            s = 2 * j + b
            c1 = 2 * j * (j + b) * (s - 2)
            c2 = (s - 1) * (-b * b)
            c3 = (s - 2) * (s - 1) * s
            c4 = 2 * (j - 1) * (j + b - 1) * s
            pj = ((c2 + c3 * t) * P[-1] - c4 * P[-2]) / c1
        P.append(pj)
    return [mp.sqrt(2 * (m + 2 * j + 1)) * r**m * P[j] for j in range(J)]


def main():
    c = mp.mpf(sys.argv[1])
    m = int(sys.argv[2])
    nmax = int(sys.argv[3])
    J = 2 * nmax + int(mp.ceil(c)) + 10
    X, W = mp.gauss_quadrature(J + m + 10, "legendre")
    T = mp.zeros(J, J)
    for x, w in zip(X, W):
        t = (x + 1) / 2
        ww = w / 2
        z = zern(m, J, mp.sqrt(t))
        for j in range(J):
            T[j, j] += c * c * ww * t * z[j] ** 2 / 2
            if j + 1 < J:
                v = c * c * ww * t * z[j] * z[j + 1] / 2
                T[j, j + 1] += v
                T[j + 1, j] += v
    for j in range(J):
        T[j, j] += (m + 2 * j) * (m + 2 * j + 2)
    E, Q = mp.eigsy(T)
    idx = sorted(range(J), key=lambda i: E[i])
    X2, W2 = mp.gauss_quadrature(J + 40, "legendre")
    for n in range(nmax + 1):
        k = idx[n]
        a = [Q[j, k] for j in range(J)]
        num = den = 0
        for x, w in zip(X2, W2):
            r = (x + 1) / 2
            ww = w / 2
            z = zern(m, J, r)
            R = sum(a[j] * z[j] for j in range(J))
            KR = mp.sqrt(c) * sum(
                a[j] * mp.sqrt(2 * (m + 2 * j + 1)) * (-1) ** j * mp.besselj(m + 2 * j + 1, c * r) / (c * r)
                for j in range(J)
            )
            num += ww * r * R * KR
            den += ww * r * R * R
        print(n, mp.nstr(E[k], 17), mp.nstr(num / den, 17))


if __name__ == "__main__":
    main()
