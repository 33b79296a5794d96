"""Column distances, free distance, and the MDP / superregularity criteria.

Index conventions are 0-based throughout: the block-column of a truncated
parity-check matrix for time s covers columns ``s*n .. s*n+n-1``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Literal

import numpy as np

from . import gf, kernels
from .codec import CodeError, ConvCode, code_from_parity
from .errors import BudgetExceeded
from .gf import Field
from .polymat import PolyMatrix, truncate

DEFAULT_MINOR_BUDGET = 10 ** 7
DEFAULT_NODE_BUDGET = 1 << 28


@dataclass(frozen=True)
class ColumnDistanceProfile:
    n: int
    k: int
    values: tuple[int, ...]

    def __post_init__(self):
        for j, d in enumerate(self.values):
            if d > self.bound(j):
                raise AssertionError(f"d_{j} = {d} exceeds (n-k)(j+1)+1")
            if j and d < self.values[j - 1]:
                raise AssertionError("column distances must be non-decreasing")
        flags = [d == self.bound(j) for j, d in enumerate(self.values)]
        if any(b and not a for a, b in zip(flags, flags[1:])):
            raise AssertionError("a maximal column distance follows a non-maximal one")

    def bound(self, j: int) -> int:
        return (self.n - self.k) * (j + 1) + 1

    @property
    def maximal_up_to(self) -> int:
        """Largest j with a maximal column distance, -1 if none."""
        best = -1
        for j, d in enumerate(self.values):
            if d == self.bound(j):
                best = j
        return best


@dataclass(frozen=True)
class MdpCertificate:
    level: int
    verdict: Literal["MDP", "not-MDP", "undecided"]
    minors_checked: int
    qualifying: int
    witness: tuple[int, ...] | None = None   # column indices of a vanishing minor

    @property
    def is_mdp(self) -> bool:
        return self.verdict == "MDP"


@dataclass(frozen=True)
class FreeDistance:
    value: int
    status: Literal["exact", "lower-bound"]
    witness: np.ndarray = dc_field(repr=False)   # message blocks of a minimum-weight word
    nodes: int = 0


# ---------------------------------------------------------------------------
# qualifying column sets for the full-size minor criterion
# ---------------------------------------------------------------------------

def _limits(n: int, p: int, j: int) -> list[int]:
    """Max 0-based column for each chosen position: the (s*p)-th pick <= s*n - 1."""
    r = (j + 1) * p
    lim = [(j + 1) * n - 1] * r
    for s in range(1, j + 1):
        lim[s * p - 1] = s * n - 1
    # tighten backwards so that each limit leaves room for the strictly larger ones
    for i in range(r - 2, -1, -1):
        lim[i] = min(lim[i], lim[i + 1] - 1)
    return lim


def count_qualifying_sets(n: int, k: int, j: int) -> int:
    """Number of column index sets the level-j minor criterion ranges over."""
    p = n - k
    lim = _limits(n, p, j)
    width = (j + 1) * n
    # ways[v] = number of valid prefixes whose last pick is v
    ways = [1 if v <= lim[0] else 0 for v in range(width)]
    for i in range(1, len(lim)):
        acc = 0
        nxt = [0] * width
        for v in range(width):
            if v <= lim[i]:
                nxt[v] = acc
            acc += ways[v]
        ways = nxt
    return sum(ways)


def qualifying_sets(n: int, k: int, j: int) -> Iterator[tuple[int, ...]]:
    """Lexicographic enumeration of the column sets of the minor criterion."""
    p = n - k
    lim = _limits(n, p, j)
    r = len(lim)
    chosen = [0] * r

    def rec(i: int, start: int):
        if i == r:
            yield tuple(chosen)
            return
        for v in range(start, lim[i] + 1):
            chosen[i] = v
            yield from rec(i + 1, v + 1)

    yield from rec(0, 0)


def minor_criterion(code: ConvCode, j: int, budget: int = DEFAULT_MINOR_BUDGET) -> MdpCertificate:
    """Check that every qualifying full-size minor of the level-j truncation is nonzero.

    True exactly when the j-th column distance is maximal.  Reports the
    lexicographically first vanishing minor as witness.
    """
    n, k = code.n, code.k
    total = count_qualifying_sets(n, k, j)
    if total > budget:
        return MdpCertificate(j, "undecided", 0, total)
    Hj = truncate(code.H, j)
    f = code.field
    rows = (j + 1) * (n - k)
    checked = 0
    for cols in qualifying_sets(n, k, j):
        checked += 1
        sub = np.ascontiguousarray(Hj[:, cols])
        r, _ = kernels.rref(sub, rows, *f.kargs)
        if r < rows:
            return MdpCertificate(j, "not-MDP", checked, total, cols)
    return MdpCertificate(j, "MDP", checked, total)


def is_mdp(code: ConvCode, budget: int = DEFAULT_MINOR_BUDGET) -> MdpCertificate:
    return minor_criterion(code, code.L, budget)


# ---------------------------------------------------------------------------
# column distances
# ---------------------------------------------------------------------------

def _column_distance_minors(code: ConvCode, j: int, budget: int) -> int:
    """Smallest d such that a first-block column lies in the span of d-1 others."""
    f = code.field
    Hj = truncate(code.H, j)
    width = Hj.shape[1]
    n = code.n
    checks = 0
    for size in range(width):
        for c in range(n):
            others = [x for x in range(width) if x != c]
            for T in itertools.combinations(others, size):
                checks += 1
                if checks > budget:
                    raise BudgetExceeded(f"column-span search exceeded {budget} checks")
                if size == 0:
                    if not Hj[:, c].any():
                        return 1
                    continue
                sol = gf.rank_and_solve(f, Hj[:, list(T)], Hj[:, c])
                if sol.x is not None:
                    return size + 1
    raise CodeError("no first-block column is dependent on the others")


def _column_distance_enumerate(code: ConvCode, j: int, budget: int) -> int:
    f = code.field
    if f.m * code.k > 62:
        raise BudgetExceeded("message alphabet too large to enumerate")
    best_init = code.n * (j + 1) + 1
    best, _, _, _, nodes = kernels.min_weight_search(
        code.Gs, j + 1, False, best_init, budget, *f.kargs)
    if nodes < 0:
        raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
    if best >= best_init:
        raise CodeError("no truncated codeword with nonzero first block")
    return int(best)


def column_distance(code: ConvCode, j: int, method: Literal["minors", "enumerate"] = "minors",
                    budget: int | None = None) -> int:
    """j-th column distance, by span analysis of H_j or by exhaustive search.

    The enumeration walks message prefixes with a branch-and-bound on the
    truncated weight (exact; prefixes whose weight already reaches the best
    found are cut).
    """
    if j < 0:
        raise ValueError("level must be >= 0")
    if method == "minors":
        return _column_distance_minors(code, j, budget or DEFAULT_MINOR_BUDGET)
    if method == "enumerate":
        return _column_distance_enumerate(code, j, budget or DEFAULT_NODE_BUDGET)
    raise ValueError(f"unknown method {method!r}")


def column_distance_profile(code: ConvCode, J: int | None = None, method="minors",
                            budget: int | None = None) -> ColumnDistanceProfile:
    J = code.L if J is None else J
    vals = tuple(column_distance(code, j, method, budget) for j in range(J + 1))
    return ColumnDistanceProfile(code.n, code.k, vals)


def free_distance(code: ConvCode, search_depth: int, budget: int = DEFAULT_NODE_BUDGET) -> FreeDistance:
    """Minimum weight over terminated codewords of at most ``search_depth`` message blocks.

    Reported as exact only when every message prefix of full depth already
    has truncated weight at least the minimum found, which bounds the weight
    of every longer codeword as well.
    """
    if search_depth < code.L + 1:
        raise ValueError(f"search depth must be at least L+1 = {code.L + 1}")
    f = code.field
    if f.m * code.k > 62:
        raise BudgetExceeded("message alphabet too large to enumerate")
    best_init = code.n * (search_depth + code.memory) + 1
    best, wit, wlen, min_full, nodes = kernels.min_weight_search(
        code.Gs, search_depth, True, best_init, budget, *f.kargs)
    if nodes < 0:
        raise BudgetExceeded(f"free-distance search exceeded {budget} nodes")
    status = "exact" if min_full >= best else "lower-bound"
    return FreeDistance(int(best), status, np.array(wit[:wlen]), int(nodes))


# ---------------------------------------------------------------------------
# superregular Toeplitz matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperregularResult:
    verdict: Literal["superregular", "not-superregular", "undecided"]
    checked: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def toeplitz(entries) -> np.ndarray:
    """Lower-triangular Toeplitz matrix with first column ``entries``."""
    t = np.asarray(entries, dtype=np.int64)
    N = t.size
    T = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        T[i, : i + 1] = t[i::-1]
    return T


def _proper_columns(rows: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    r = len(rows)
    chosen = [0] * r

    def rec(s: int, start: int):
        if s == r:
            yield tuple(chosen)
            return
        for v in range(start, rows[s] + 1):
            chosen[s] = v
            yield from rec(s + 1, v + 1)

    yield from rec(0, 0)


def is_superregular(field: Field, T, budget: int = DEFAULT_MINOR_BUDGET) -> SuperregularResult:
    """Check every proper minor (column index j_s <= row index i_s) is nonzero."""
    T = np.asarray(T, dtype=np.int64)
    N = T.shape[0]
    if T.shape != (N, N):
        raise ValueError("superregularity is defined for square matrices")
    if np.triu(T, 1).any() or any(len(set(np.diagonal(T, -d))) > 1 for d in range(N)):
        raise ValueError("expected a lower-triangular Toeplitz matrix")
    checked = 0
    for r in range(1, N + 1):
        for rows in itertools.combinations(range(N), r):
            for cols in _proper_columns(rows):
                checked += 1
                if checked > budget:
                    return SuperregularResult("undecided", checked - 1)
                if not gf.minor_nonzero(field, T, rows, cols):
                    return SuperregularResult("not-superregular", checked, (rows, cols))
    return SuperregularResult("superregular", checked)


def systematic_series(code: ConvCode, terms: int) -> list[int]:
    """Power series t(z) with v_2 = t(z) v_1 for a rate-1/2 code, H = [h1, h2]."""
    if (code.n, code.k) != (2, 1):
        raise ValueError("systematic series is defined here for (2,1) codes")
    f = code.field
    h1 = [int(x) for x in code.H.coeffs[:, 0, 0]]
    h2 = [int(x) for x in code.H.coeffs[:, 0, 1]]
    if h2[0] == 0:
        raise CodeError("h2(0) = 0: no systematic power-series form")
    inv0 = f.inv(h2[0])
    t = []
    for i in range(terms):
        acc = h1[i] if i < len(h1) else 0
        for s in range(1, min(i, len(h2) - 1) + 1):
            acc ^= f.mul(h2[s], t[i - s])
        t.append(f.mul(acc, inv0))
    return t


# ---------------------------------------------------------------------------
# randomized search
# ---------------------------------------------------------------------------

def parity_row_degrees(n: int, k: int, delta: int) -> list[int]:
    p = n - k
    base, extra = divmod(delta, p)
    return [base + 1] * extra + [base] * (p - extra)


def random_parity_check(field: Field, n: int, k: int, delta: int,
                        rng: np.random.Generator) -> PolyMatrix | None:
    """Draw H with row degrees summing to delta; None if H_0 or the leading
    row-coefficient matrix is singular."""
    p = n - k
    degs = parity_row_degrees(n, k, delta)
    nu = max(degs)
    c = field.random(rng, (nu + 1, p, n))
    for r, d in enumerate(degs):
        c[d + 1:, r, :] = 0
    lead = np.array([c[d, r] for r, d in enumerate(degs)])
    if gf.rank(field, c[0]) < p or gf.rank(field, lead) < p:
        return None
    return PolyMatrix(field, c)


def search_mdp(n: int, k: int, delta: int, field: Field, attempts: int, rng_seed: int,
               budget: int = DEFAULT_MINOR_BUDGET, certify: bool = True) -> ConvCode | None:
    """First random code (by attempt index) passing the MDP minor criterion.

    With ``certify=False`` the first valid (n, k, delta) code is returned
    unchecked.
    """
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    total = count_qualifying_sets(n, k, delta // k + delta // (n - k))
    if certify and total > budget:
        raise BudgetExceeded(f"{total} minors per candidate exceeds budget {budget}")
    rng = np.random.default_rng(rng_seed)
    for _ in range(attempts):
        H = random_parity_check(field, n, k, delta, rng)
        if H is None:
            continue
        try:
            code = code_from_parity(H, delta)
        except CodeError:
            continue
        if not certify or is_mdp(code, budget).is_mdp:
            return code
    return None


def binomial_budget_note(n: int, k: int, delta: int) -> str:
    L = delta // k + delta // (n - k)
    return (f"level L={L}: {count_qualifying_sets(n, k, L)} qualifying minors out of "
            f"C({(L + 1) * n},{(L + 1) * (n - k)}) = {math.comb((L + 1) * n, (L + 1) * (n - k))}")
