"""Hot inner loops, each in a numba flavour (``*_nb``) and a numpy flavour (``*_np``).

The unsuffixed names are bound to one flavour at import time according to
:data:`sqapn._accel.USE_NUMBA`. Both flavours are always importable so tests
and the benchmark can compare them directly.

Luts are passed as contiguous int64 arrays.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# ddt status codes
DDT_OK = 0
DDT_ABORTED = 1
DDT_ODD = 2
DDT_ROWSUM = 3


# --------------------------------------------------------------------------
# difference distribution table, streamed row by row


@njit(nogil=True, cache=True)
def ddt_rows_nb(lut, u_lo, u_hi, abort_above):
    n_items = lut.shape[0]
    counts = np.zeros(n_items, dtype=np.int32)
    hist = np.zeros(n_items + 1, dtype=np.int64)
    best = 0
    for u in range(u_lo, u_hi):
        counts[:] = 0
        for x in range(n_items):
            counts[lut[x] ^ lut[x ^ u]] += 1
        total = 0
        for v in range(n_items):
            c = counts[v]
            total += c
            hist[c] += 1
            if c > best:
                best = c
            if c & 1:
                return best, hist, DDT_ODD, u
        if total != n_items:
            return best, hist, DDT_ROWSUM, u
        if abort_above >= 0 and best > abort_above:
            return best, hist, DDT_ABORTED, u
    return best, hist, DDT_OK, -1


def ddt_rows_np(lut, u_lo, u_hi, abort_above):
    n_items = lut.shape[0]
    xs = np.arange(n_items, dtype=np.int64)
    hist = np.zeros(n_items + 1, dtype=np.int64)
    best = 0
    for u in range(u_lo, u_hi):
        counts = np.bincount(lut ^ lut[xs ^ u], minlength=n_items)
        hist += np.bincount(counts, minlength=n_items + 1)
        best = max(best, int(counts.max()))
        if np.any(counts & 1):
            return best, hist, DDT_ODD, u
        if int(counts.sum()) != n_items:
            return best, hist, DDT_ROWSUM, u
        if abort_above >= 0 and best > abort_above:
            return best, hist, DDT_ABORTED, u
    return best, hist, DDT_OK, -1


# --------------------------------------------------------------------------
# Walsh transform of the component v.F


@njit(nogil=True, cache=True)
def fwht_nb(a):
    n_items = a.shape[0]
    h = 1
    while h < n_items:
        for i in range(0, n_items, 2 * h):
            for j in range(i, i + h):
                s = a[j]
                t = a[j + h]
                a[j] = s + t
                a[j + h] = s - t
        h *= 2
    return a


def fwht_np(a):
    n_items = a.shape[0]
    h = 1
    while h < n_items:
        b = a.reshape(-1, 2, h)
        s = b[:, 0, :].copy()
        b[:, 0, :] += b[:, 1, :]
        b[:, 1, :] = s - b[:, 1, :]
        h *= 2
    return a


@njit(nogil=True, cache=True)
def walsh_rows_nb(lut, masks):
    n_items = lut.shape[0]
    out = np.empty((masks.shape[0], n_items), dtype=np.int64)
    for r in range(masks.shape[0]):
        v = masks[r]
        row = out[r]
        for x in range(n_items):
            w = v & lut[x]
            par = 0
            while w:
                par ^= 1
                w &= w - 1
            row[x] = 1 - 2 * par
        fwht_nb(row)
    return out


def walsh_rows_np(lut, masks):
    n_items = lut.shape[0]
    out = np.empty((len(masks), n_items), dtype=np.int64)
    for r, v in enumerate(masks):
        par = np.bitwise_count(lut & int(v)) & 1
        out[r] = 1 - 2 * par.astype(np.int64)
        fwht_np(out[r])
    return out


# --------------------------------------------------------------------------
# derivative maps L_y(x) = F(x+y) + F(x) + F(y)


@njit(nogil=True, cache=True)
def kernel_sizes_nb(lut, ys):
    n_items = lut.shape[0]
    out = np.zeros(ys.shape[0], dtype=np.int64)
    for r in range(ys.shape[0]):
        y = ys[r]
        fy = lut[y]
        c = 0
        for x in range(n_items):
            if lut[x ^ y] ^ lut[x] ^ fy == 0:
                c += 1
        out[r] = c
    return out


def kernel_sizes_np(lut, ys):
    xs = np.arange(lut.shape[0], dtype=np.int64)
    return np.array([int(np.count_nonzero((lut[xs ^ y] ^ lut ^ lut[y]) == 0)) for y in ys], dtype=np.int64)


@njit(nogil=True, cache=True)
def scalar_commutes_nb(lut, smap, ys):
    """True iff L_y(s x) == s L_y(x) for every y in ys and every x."""
    n_items = lut.shape[0]
    for r in range(ys.shape[0]):
        y = ys[r]
        fy = lut[y]
        for x in range(n_items):
            sx = smap[x]
            if lut[sx ^ y] ^ lut[sx] ^ fy != smap[lut[x ^ y] ^ lut[x] ^ fy]:
                return False
    return True


def scalar_commutes_np(lut, smap, ys):
    xs = np.arange(lut.shape[0], dtype=np.int64)
    sx = smap[xs]
    for y in ys:
        fy = lut[y]
        if not np.array_equal(lut[sx ^ y] ^ lut[sx] ^ fy, smap[lut[xs ^ y] ^ lut ^ fy]):
            return False
    return True


# --------------------------------------------------------------------------
# family table materialisation
#
#   F1 = x^(s+1) + a y^s z + b x^s y + c x^s z
#   F2 = a y^(s+1) + z^s x + b z^s y + c x^s y
#   F3 = z^(s+1) + x^s y


@njit(nogil=True, cache=True)
def family_table_nb(mt, fr, m, a, b, c):
    q = fr.shape[0]
    out = np.empty(q * q * q, dtype=np.int64)
    for z in range(q):
        zs = fr[z]
        z1 = mt[z, zs]
        for y in range(q):
            ys = fr[y]
            y1 = mt[y, ys]
            ay1 = mt[a, y1]
            ays = mt[a, ys]
            bzs_y = mt[mt[b, zs], y]
            for x in range(q):
                xs = fr[x]
                f1 = mt[x, xs] ^ mt[ays, z] ^ mt[mt[b, xs], y] ^ mt[mt[c, xs], z]
                f2 = ay1 ^ mt[zs, x] ^ bzs_y ^ mt[mt[c, xs], y]
                f3 = z1 ^ mt[xs, y]
                out[x | (y << m) | (z << (2 * m))] = f1 | (f2 << m) | (f3 << (2 * m))
    return out


def family_eval_np(mt, fr, a, b, c, x, y, z):
    """Vectorised evaluation on coordinate arrays; returns (F1, F2, F3)."""
    xs, ys, zs = fr[x], fr[y], fr[z]
    f1 = mt[x, xs] ^ mt[mt[a, ys], z] ^ mt[mt[b, xs], y] ^ mt[mt[c, xs], z]
    f2 = mt[a, mt[y, ys]] ^ mt[zs, x] ^ mt[mt[b, zs], y] ^ mt[mt[c, xs], y]
    f3 = mt[z, zs] ^ mt[xs, y]
    return f1, f2, f3


def family_table_np(mt, fr, m, a, b, c):
    q = fr.shape[0]
    idx = np.arange(q ** 3, dtype=np.int64)
    mask = q - 1
    x, y, z = idx & mask, (idx >> m) & mask, idx >> (2 * m)
    f1, f2, f3 = family_eval_np(mt, fr, a, b, c, x, y, z)
    return (f1 | (f2 << m) | (f3 << (2 * m))).astype(np.int64)


if USE_NUMBA:
    ddt_rows = ddt_rows_nb
    fwht = fwht_nb
    walsh_rows = walsh_rows_nb
    kernel_sizes = kernel_sizes_nb
    scalar_commutes = scalar_commutes_nb
    family_table = family_table_nb
else:
    ddt_rows = ddt_rows_np
    fwht = fwht_np
    walsh_rows = walsh_rows_np
    kernel_sizes = kernel_sizes_np
    scalar_commutes = scalar_commutes_np
    family_table = family_table_np
