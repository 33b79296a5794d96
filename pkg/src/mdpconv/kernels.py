"""Hot loops over GF(2^m).

Every kernel takes the field as ``(exp, log, m, poly)``: for m <= 12 ``exp`` is
the antilog table doubled to length 2(q-1) and ``log`` the log table; for
larger m both are empty and multiplication falls back to shift-and-reduce.

With numba enabled the loops below are compiled with ``@njit``.  With
``MDPCONV_NO_NUMBA=1`` they run as Python, and the elimination routine is
swapped for a row-vectorised numpy version.
"""
import numpy as np

from ._accel import USE_NUMBA, njit


# ---------------------------------------------------------------------------
# scalar field arithmetic
# ---------------------------------------------------------------------------

@njit
def gf_mul(a, b, exp, log, m, poly):
    if a == 0 or b == 0:
        return 0
    if log.shape[0] > 0:
        return exp[log[a] + log[b]]
    r = 0
    top = 1 << m
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


@njit
def gf_inv(a, exp, log, m, poly):
    q1 = (1 << m) - 1
    if log.shape[0] > 0:
        return exp[q1 - log[a]]
    # a^(q-2) by square-and-multiply
    e = q1 - 1
    r = 1
    base = a
    while e:
        if e & 1:
            r = gf_mul(r, base, exp, log, m, poly)
        base = gf_mul(base, base, exp, log, m, poly)
        e >>= 1
    return r


def vmul(a, b, exp, log, m, poly):
    """Elementwise product of integer arrays (broadcasting)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if log.shape[0] > 0:
        a, b = np.broadcast_arrays(a, b)
        out = exp[log[a] + log[b]]
        out[(a == 0) | (b == 0)] = 0
        return out
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    r = np.zeros_like(a)
    top = 1 << m
    for _ in range(m):
        r ^= np.where(b & 1, a, 0)
        b >>= 1
        a <<= 1
        a ^= np.where(a & top, poly, 0)
    return r


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

@njit
def _rref_loops(M, ncols, exp, log, m, poly):
    rows = M.shape[0]
    width = M.shape[1]
    pivots = np.empty(min(rows, ncols), np.int64)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        p = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for x in range(c, width):
                tmp = M[r, x]
                M[r, x] = M[p, x]
                M[p, x] = tmp
        inv = gf_inv(M[r, c], exp, log, m, poly)
        if inv != 1:
            for x in range(c, width):
                M[r, x] = gf_mul(M[r, x], inv, exp, log, m, poly)
        for i in range(rows):
            f = M[i, c]
            if i == r or f == 0:
                continue
            for x in range(c, width):
                y = M[r, x]
                if y != 0:
                    M[i, x] ^= gf_mul(f, y, exp, log, m, poly)
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def _rref_vec(M, ncols, exp, log, m, poly):
    rows = M.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        inv = gf_inv(int(M[r, c]), exp, log, m, poly)
        if inv != 1:
            M[r, c:] = vmul(M[r, c:], inv, exp, log, m, poly)
        col = M[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            M[idx, c:] ^= vmul(col[idx, None], M[r, c:][None, :], exp, log, m, poly)
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


rref_numpy = _rref_vec
rref = _rref_loops if USE_NUMBA else _rref_vec


@njit
def determined_columns(M, rank, pivots, ncols):
    """Mask of unknowns whose value is the same in every solution (M in RREF)."""
    det = np.zeros(ncols, np.bool_)
    for i in range(rank):
        c = pivots[i]
        ok = True
        for x in range(ncols):
            if x != c and M[i, x] != 0:
                ok = False
                break
        det[c] = ok
    return det


@njit
def consistent(M, rank, ncols):
    for i in range(rank, M.shape[0]):
        if M[i, ncols] != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

@njit
def conv_encode(Gs, u, n_out, exp, log, m, poly):
    """v_t = sum_i G_i u_{t-i} for t < n_out; u has shape (blocks, k)."""
    deg = Gs.shape[0] - 1
    n = Gs.shape[1]
    k = Gs.shape[2]
    nu_blocks = u.shape[0]
    v = np.zeros((n_out, n), np.int64)
    for t in range(n_out):
        for lag in range(deg + 1):
            s = t - lag
            if s < 0:
                break
            if s >= nu_blocks:
                continue
            for c in range(n):
                acc = 0
                for i in range(k):
                    acc ^= gf_mul(Gs[lag, c, i], u[s, i], exp, log, m, poly)
                v[t, c] ^= acc
    return v


# ---------------------------------------------------------------------------
# sliding-window parity-check decoding
# ---------------------------------------------------------------------------

@njit
def _block_known(known, t, n):
    for x in range(t * n, (t + 1) * n):
        if not known[x]:
            return False
    return True


@njit
def _count_unknown(known, lo, hi):
    c = 0
    for x in range(lo, hi):
        if not known[x]:
            c += 1
    return c


@njit
def parity_window(Hs, vals, known, t, jj, n, commit, exp, log, m, poly):
    """Solve the staircase over blocks t..t+jj given everything before t.

    Returns (status, unknowns, rank, committed, block_t_resolved) where status
    is -1 on an inconsistent system.
    """
    nu = Hs.shape[0] - 1
    p = Hs.shape[1]
    base = t * n
    width = (jj + 1) * n
    col_of = np.full(width, -1, np.int64)
    unk_pos = np.empty(width, np.int64)
    nunk = 0
    for x in range(width):
        if not known[base + x]:
            col_of[x] = nunk
            unk_pos[nunk] = base + x
            nunk += 1
    rows = (jj + 1) * p
    M = np.zeros((rows, nunk + 1), np.int64)
    for rb in range(jj + 1):
        tr = t + rb
        for lag in range(nu + 1):
            tc = tr - lag
            if tc < 0:
                break
            for c in range(n):
                pos = tc * n + c
                kn = known[pos]
                val = vals[pos]
                if kn and val == 0:
                    continue
                for r in range(p):
                    h = Hs[lag, r, c]
                    if h == 0:
                        continue
                    if kn:
                        M[rb * p + r, nunk] ^= gf_mul(h, val, exp, log, m, poly)
                    else:
                        M[rb * p + r, col_of[pos - base]] = h
    rank, piv = rref(M, nunk, exp, log, m, poly)
    if not consistent(M, rank, nunk):
        return -1, nunk, rank, 0, False
    det = determined_columns(M, rank, piv, nunk)
    first_ok = True
    for x in range(nunk):
        if unk_pos[x] < base + n and not det[x]:
            first_ok = False
    committed = 0
    if commit:
        for i in range(rank):
            c = piv[i]
            if det[c]:
                pos = unk_pos[c]
                vals[pos] = M[i, nunk]
                known[pos] = True
                committed += 1
    return 0, nunk, rank, committed, first_ok


@njit
def _log_window(wlog, nwin, t, jj, nunk, rank, committed):
    if nwin < wlog.shape[0]:
        wlog[nwin, 0] = t
        wlog[nwin, 1] = jj + 1
        wlog[nwin, 2] = nunk
        wlog[nwin, 3] = rank
        wlog[nwin, 4] = committed
    return nwin + 1


@njit
def sliding_decode(Hs, vals, known, nblocks, n, jmin, jmax, bisect,
                   exp, log, m, poly, block_win, block_lost, wlog, rlog):
    """Sequential sliding-window erasure decoding, in place on vals/known.

    Returns (error_block, windows_logged, resyncs_logged); error_block is -1
    unless some window was inconsistent.
    """
    nu = Hs.shape[0] - 1
    p = Hs.shape[1]
    nwin = 0
    nres = 0
    t = 0
    while t < nblocks:
        if _block_known(known, t, n):
            t += 1
            continue
        jcap = min(jmax, nblocks - 1 - t)
        j0 = min(jmin, jcap)
        resolved = -1
        if bisect:
            st, nunk, rank, com, ok = parity_window(Hs, vals, known, t, jcap, n, False,
                                                    exp, log, m, poly)
            nwin = _log_window(wlog, nwin, t, jcap, nunk, rank, com)
            if st < 0:
                return t, nwin, nres
            if ok:
                lo = j0
                hi = jcap
                while lo < hi:
                    mid = (lo + hi) // 2
                    st, nunk, rank, com, ok = parity_window(Hs, vals, known, t, mid, n, False,
                                                            exp, log, m, poly)
                    nwin = _log_window(wlog, nwin, t, mid, nunk, rank, com)
                    if ok:
                        hi = mid
                    else:
                        lo = mid + 1
                resolved = hi
            jfinal = resolved if resolved >= 0 else jcap
            st, nunk, rank, com, ok = parity_window(Hs, vals, known, t, jfinal, n, True,
                                                    exp, log, m, poly)
            nwin = _log_window(wlog, nwin, t, jfinal, nunk, rank, com)
            if st < 0:
                return t, nwin, nres
        else:
            for j in range(j0, jcap + 1):
                if j < jcap and _count_unknown(known, t * n, (t + j + 1) * n) > (j + 1) * p:
                    continue
                st, nunk, rank, com, ok = parity_window(Hs, vals, known, t, j, n, True,
                                                        exp, log, m, poly)
                nwin = _log_window(wlog, nwin, t, j, nunk, rank, com)
                if st < 0:
                    return t, nwin, nres
                if ok:
                    resolved = j
                    break
        if resolved >= 0:
            block_win[t] = resolved
            t += 1
            continue
        # block t cannot be resolved: mark it and look for nu clean blocks
        block_lost[t] = 1
        s = t + 1
        while True:
            if s + nu > nblocks:
                s = -1
                break
            good = True
            for b in range(s, s + nu):
                if not _block_known(known, b, n):
                    good = False
                    break
            if good:
                break
            s += 1
        stop = nblocks if s < 0 else s
        for b in range(t + 1, stop):
            if not _block_known(known, b, n):
                block_lost[b] = 1
        if s < 0:
            break
        if nres < rlog.shape[0]:
            rlog[nres] = s + nu
        nres += 1
        t = s + nu
    return -1, nwin, nres


# ---------------------------------------------------------------------------
# generator-matrix decoding
# ---------------------------------------------------------------------------

@njit
def generator_window(Gs, vals, known, u, uknown, t, jj, n, k, commit,
                     exp, log, m, poly):
    """Solve for message blocks max(0,t-deg)..t+jj from received blocks t..t+jj.

    Returns (status, unknowns, rank, committed, block_t_resolved).
    """
    deg = Gs.shape[0] - 1
    ulo = max(0, t - deg)
    ubase = ulo * k
    width = (t + jj + 1 - ulo) * k
    col_of = np.full(width, -1, np.int64)
    unk_pos = np.empty(width, np.int64)
    nunk = 0
    for x in range(width):
        if not uknown[ubase + x]:
            col_of[x] = nunk
            unk_pos[nunk] = ubase + x
            nunk += 1
    rows = 0
    for x in range(t * n, (t + jj + 1) * n):
        if known[x]:
            rows += 1
    M = np.zeros((rows, nunk + 1), np.int64)
    row = 0
    for rb in range(jj + 1):
        tr = t + rb
        for c in range(n):
            pos = tr * n + c
            if not known[pos]:
                continue
            M[row, nunk] = vals[pos]
            for lag in range(deg + 1):
                s = tr - lag
                if s < 0:
                    break
                for i in range(k):
                    g = Gs[lag, c, i]
                    if g == 0:
                        continue
                    up = s * k + i
                    if uknown[up]:
                        M[row, nunk] ^= gf_mul(g, u[up], exp, log, m, poly)
                    else:
                        M[row, col_of[up - ubase]] = g
            row += 1
    rank, piv = rref(M, nunk, exp, log, m, poly)
    if not consistent(M, rank, nunk):
        return -1, nunk, rank, 0, False
    det = determined_columns(M, rank, piv, nunk)
    first_ok = True
    for x in range(nunk):
        up = unk_pos[x]
        if up >= t * k and up < (t + 1) * k and not det[x]:
            first_ok = False
    committed = 0
    if commit:
        for i in range(rank):
            c = piv[i]
            if det[c]:
                up = unk_pos[c]
                u[up] = M[i, nunk]
                uknown[up] = True
                committed += 1
    return 0, nunk, rank, committed, first_ok


@njit
def generator_decode(Gs, vals, known, u, uknown, nblocks, n, k, jmin, jmax,
                     exp, log, m, poly, block_win, block_lost, wlog):
    """Recover message blocks directly; lost history stays as unknowns."""
    nwin = 0
    t = 0
    while t < nblocks:
        if _block_known(uknown, t, k):
            t += 1
            continue
        jcap = min(jmax, nblocks - 1 - t)
        j0 = min(jmin, jcap)
        resolved = -1
        for j in range(j0, jcap + 1):
            if j < jcap:
                eqs = (j + 1) * n - _count_unknown(known, t * n, (t + j + 1) * n)
                if eqs < (j + 1) * k:
                    continue
            st, nunk, rank, com, ok = generator_window(Gs, vals, known, u, uknown, t, j, n, k,
                                                       True, exp, log, m, poly)
            nwin = _log_window(wlog, nwin, t, j, nunk, rank, com)
            if st < 0:
                return t, nwin
            if ok:
                resolved = j
                break
        if resolved >= 0:
            block_win[t] = resolved
        else:
            block_lost[t] = 1
        t += 1
    return -1, nwin


# ---------------------------------------------------------------------------
# minimum-weight search (column distance / free distance)
# ---------------------------------------------------------------------------

@njit
def _block_out(Gs, u, d, out, exp, log, m, poly):
    """out <- v_d for the message prefix u[0..d] (entries beyond d treated as zero)."""
    deg = Gs.shape[0] - 1
    n = Gs.shape[1]
    k = Gs.shape[2]
    w = 0
    for c in range(n):
        acc = 0
        for lag in range(deg + 1):
            s = d - lag
            if s < 0:
                break
            for i in range(k):
                acc ^= gf_mul(Gs[lag, c, i], u[s, i], exp, log, m, poly)
        out[c] = acc
        if acc != 0:
            w += 1
    return w


@njit
def min_weight_search(Gs, depth, terminated, best_init, budget, exp, log, m, poly):
    """Branch-and-bound over message prefixes u_0..u_{depth-1} with u_0 != 0.

    u_0 is normalised so its first nonzero entry is 1 (weights are invariant
    under scaling).  Without ``terminated`` the minimum is taken over the
    weight of v_0..v_{depth-1} with v_0 != 0.  With ``terminated`` each prefix
    is also closed with zero message blocks and the full codeword weight is
    minimised; ``min_full`` then reports the least depth-level truncated
    weight that was not pruned (a lower bound certificate).

    Returns (best, witness, witness_len, min_full, nodes); nodes = -1 when
    the budget is exhausted.
    """
    deg = Gs.shape[0] - 1
    n = Gs.shape[1]
    k = Gs.shape[2]
    q1 = (1 << m) - 1
    Q = np.int64(1) << (m * k)
    tail_len = deg if terminated else 0
    u = np.zeros((depth + tail_len + 1, k), np.int64)
    out = np.zeros(n, np.int64)
    wsum = np.zeros(depth + 1, np.int64)
    cand = np.zeros(depth, np.int64)
    witness = np.zeros((depth, k), np.int64)
    wlen = 0
    best = best_init
    min_full = np.int64(1) << 60
    nodes = 0
    d = 0
    cand[0] = 1
    while d >= 0:
        if cand[d] >= Q:
            for i in range(k):
                u[d, i] = 0
            d -= 1
            continue
        c = cand[d]
        cand[d] += 1
        for i in range(k):
            u[d, i] = (c >> (m * i)) & q1
        if d == 0:
            lead = 0
            for i in range(k):
                if u[0, i] != 0:
                    lead = u[0, i]
                    break
            if lead != 1:
                continue
        nodes += 1
        if nodes > budget:
            return best, witness, wlen, min_full, -1
        wt = _block_out(Gs, u, d, out, exp, log, m, poly)
        if d == 0 and wt == 0 and not terminated:
            continue
        nw = wsum[d] + wt
        if nw >= best:
            continue
        if terminated:
            tail = 0
            for r in range(d + 1, d + tail_len + 1):
                tail += _block_out(Gs, u, r, out, exp, log, m, poly)
                if nw + tail >= best:
                    break
            if nw + tail < best:
                best = nw + tail
                wlen = d + 1
                for s in range(d + 1):
                    for i in range(k):
                        witness[s, i] = u[s, i]
            if d == depth - 1:
                if nw < min_full:
                    min_full = nw
                continue
        elif d == depth - 1:
            best = nw
            wlen = depth
            for s in range(depth):
                for i in range(k):
                    witness[s, i] = u[s, i]
            continue
        if d < depth - 1:
            wsum[d + 1] = nw
            d += 1
            cand[d] = 0
    return best, witness, wlen, min_full, nodes


# ---------------------------------------------------------------------------
# channel samplers (uniform draws are supplied by the caller's Generator)
# ---------------------------------------------------------------------------

@njit
def windowed_sample(draws, p, e, w):
    """Sequentially erase with probability p unless the window already holds e."""
    length = draws.shape[0]
    mask = np.zeros(length, np.bool_)
    count = 0
    for i in range(length):
        if i >= w and mask[i - w]:
            count -= 1
        if count < e and draws[i] < p:
            mask[i] = True
            count += 1
    return mask


@njit
def gilbert_elliott_sample(draws_state, draws_loss, p_gb, p_bg, p_good, p_bad):
    length = draws_state.shape[0]
    mask = np.zeros(length, np.bool_)
    bad = False
    for i in range(length):
        pl = p_bad if bad else p_good
        mask[i] = draws_loss[i] < pl
        if bad:
            if draws_state[i] < p_bg:
                bad = False
        elif draws_state[i] < p_gb:
            bad = True
    return mask


@njit
def max_window_count(mask, w):
    """Largest number of True entries in any length-w window (partial windows included)."""
    best = 0
    count = 0
    for i in range(mask.shape[0]):
        if mask[i]:
            count += 1
        if i >= w and mask[i - w]:
            count -= 1
        if count > best:
            best = count
    return best
