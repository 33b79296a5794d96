"""Slow, obviously-correct reference implementations used by the tests."""
import itertools

import numpy as np


def clmul_mod(a, b, m, poly):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return r


def cofactor_det(f, A):
    A = [list(map(int, row)) for row in A]
    n = len(A)
    if n == 0:
        return 1
    if n == 1:
        return A[0][0]
    d = 0
    for c in range(n):
        if A[0][c]:
            sub = [row[:c] + row[c + 1:] for row in A[1:]]
            d ^= f.mul(A[0][c], cofactor_det(f, sub))
    return d


def matvec(f, A, x):
    out = np.zeros(A.shape[0], dtype=np.int64)
    for i in range(A.shape[0]):
        acc = 0
        for j in range(A.shape[1]):
            acc ^= f.mul(int(A[i, j]), int(x[j]))
        out[i] = acc
    return out


def rank_by_minors(f, A):
    r, c = A.shape
    for s in range(min(r, c), 0, -1):
        for rows in itertools.combinations(range(r), s):
            for cols in itertools.combinations(range(c), s):
                if cofactor_det(f, A[np.ix_(rows, cols)]):
                    return s
    return 0


def all_vectors(q, length):
    return itertools.product(range(q), repeat=length)
