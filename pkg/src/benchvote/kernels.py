"""Array kernels for the combinatorial hot loops.

Three operations dominate runtime: enumerating candidate axes over all
permutations of the model set, counting ranking inversions, and accumulating
pairwise win counts. Each ships in two versions: a numba ``@njit`` kernel
(``nb_*``) and a pure-numpy fallback (``np_*``). The public names dispatch to
the numba versions when numba is importable; set ``BENCHVOTE_NO_NUMBA=1`` to
force the numpy path. ``BACKEND`` records which path is active.

Conventions: rankings are encoded over model indices ``0..k-1``. A *sequence*
matrix ``seq`` has shape ``(n, k)`` with ``seq[r, t]`` the model index at rank
``t`` (0 = most preferred) of ranking ``r``. A *position* matrix ``pos`` is its
rowwise inverse: ``pos[r, m]`` is the rank of model ``m`` in ranking ``r``.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_ENV_FLAG = "BENCHVOTE_NO_NUMBA"

# Axis enumeration allocates an output buffer of 2**(k-1) rows (the number of
# axes a single ranking admits); callers cap k well below this.
_MAX_AXIS_MODELS = 16


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "0") not in ("", "0")


# ---------------------------------------------------------------------------
# pure-numpy fallbacks
# ---------------------------------------------------------------------------

def np_pairwise_above_counts(pos: np.ndarray) -> np.ndarray:
    """counts[a, b] = number of rankings placing model a strictly above b."""
    pos = np.asarray(pos, dtype=np.int64)
    above = pos[:, :, None] < pos[:, None, :]
    return above.sum(axis=0, dtype=np.int64)


def np_count_inversions(values: np.ndarray) -> int:
    """Number of pairs i < j with values[i] > values[j] (merge/searchsorted)."""
    a = np.asarray(values, dtype=np.int64)
    if a.size < 2:
        return 0
    mid = a.size // 2
    left, right = a[:mid], a[mid:]
    inv = np_count_inversions(left) + np_count_inversions(right)
    sorted_left = np.sort(left)
    inv += int(np.sum(sorted_left.size - np.searchsorted(sorted_left, right, side="right")))
    return inv


def _axis_positions(perm: tuple[int, ...] | np.ndarray, k: int) -> np.ndarray:
    apos = np.empty(k, dtype=np.int64)
    apos[list(perm)] = np.arange(k)
    return apos


def np_enumerate_axes(seq: np.ndarray, stop_after_first: bool = False) -> np.ndarray:
    """All axes (canonical orientation) on which every ranking is single-peaked.

    Walks permutations of 0..k-1 in lexicographic order, skipping the reversal
    twin of each axis (only perms with first entry < last entry are tested, the
    lexicographically smaller of the pair). A ranking is single-peaked on an
    axis iff each of its prefixes occupies a contiguous axis interval.
    """
    seq = np.asarray(seq, dtype=np.int64)
    n, k = seq.shape
    target = np.arange(k)
    hits: list[tuple[int, ...]] = []
    for perm in itertools.permutations(range(k)):
        if perm[0] > perm[-1]:
            continue
        x = _axis_positions(perm, k)[seq]
        spans = np.maximum.accumulate(x, axis=1) - np.minimum.accumulate(x, axis=1)
        if (spans == target).all():
            hits.append(perm)
            if stop_after_first:
                break
    return np.array(hits, dtype=np.int64).reshape(len(hits), k)


# ---------------------------------------------------------------------------
# numba kernels (compiled lazily on first call)
# ---------------------------------------------------------------------------

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_pairwise_above_counts(pos):
        n, k = pos.shape
        counts = np.zeros((k, k), dtype=np.int64)
        for r in range(n):
            for a in range(k):
                pa = pos[r, a]
                for b in range(k):
                    if pa < pos[r, b]:
                        counts[a, b] += 1
        return counts

    @njit(cache=True, nogil=True)
    def _nb_count_inversions(values):
        n = values.size
        arr = values.astype(np.int64)
        buf = np.empty(n, dtype=np.int64)
        inv = 0
        width = 1
        while width < n:
            for lo in range(0, n, 2 * width):
                mid = min(lo + width, n)
                hi = min(lo + 2 * width, n)
                i, j, t = lo, mid, lo
                while i < mid and j < hi:
                    if arr[i] <= arr[j]:
                        buf[t] = arr[i]
                        i += 1
                    else:
                        buf[t] = arr[j]
                        j += 1
                        inv += mid - i
                    t += 1
                while i < mid:
                    buf[t] = arr[i]
                    i += 1
                    t += 1
                while j < hi:
                    buf[t] = arr[j]
                    j += 1
                    t += 1
            arr, buf = buf, arr
            width *= 2
        return inv

    @njit(cache=True, nogil=True)
    def _nb_enumerate_axes(seq, stop_after_first):
        n, k = seq.shape
        out = np.empty((1 << (k - 1), k), dtype=np.int64)
        found = 0
        perm = np.arange(k)
        apos = np.empty(k, dtype=np.int64)
        while True:
            if perm[0] < perm[k - 1]:
                for i in range(k):
                    apos[perm[i]] = i
                ok = True
                for r in range(n):
                    lo = apos[seq[r, 0]]
                    hi = lo
                    for t in range(1, k):
                        p = apos[seq[r, t]]
                        if p < lo:
                            lo = p
                        elif p > hi:
                            hi = p
                        if hi - lo != t:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    out[found] = perm
                    found += 1
                    if stop_after_first:
                        break
            # advance to the next permutation in lexicographic order
            i = k - 2
            while i >= 0 and perm[i] >= perm[i + 1]:
                i -= 1
            if i < 0:
                break
            j = k - 1
            while perm[j] <= perm[i]:
                j -= 1
            perm[i], perm[j] = perm[j], perm[i]
            lo2, hi2 = i + 1, k - 1
            while lo2 < hi2:
                perm[lo2], perm[hi2] = perm[hi2], perm[lo2]
                lo2 += 1
                hi2 -= 1
        return out[:found].copy()

    def nb_pairwise_above_counts(pos: np.ndarray) -> np.ndarray:
        return _nb_pairwise_above_counts(np.ascontiguousarray(pos, dtype=np.int64))

    def nb_count_inversions(values: np.ndarray) -> int:
        return int(_nb_count_inversions(np.ascontiguousarray(values, dtype=np.int64)))

    def nb_enumerate_axes(seq: np.ndarray, stop_after_first: bool = False) -> np.ndarray:
        seq = np.ascontiguousarray(seq, dtype=np.int64)
        if seq.shape[1] > _MAX_AXIS_MODELS:
            raise ValueError(f"axis enumeration limited to {_MAX_AXIS_MODELS} models")
        return _nb_enumerate_axes(seq, stop_after_first)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if _HAVE_NUMBA and not _numba_disabled():
    BACKEND = "numba"
    pairwise_above_counts = nb_pairwise_above_counts
    count_inversions = nb_count_inversions
    enumerate_axes = nb_enumerate_axes
else:
    BACKEND = "numpy"
    pairwise_above_counts = np_pairwise_above_counts
    count_inversions = np_count_inversions
    enumerate_axes = np_enumerate_axes


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs so later calls are steady-state."""
    seq = np.array([[0, 1, 2]], dtype=np.int64)
    pairwise_above_counts(seq)
    count_inversions(np.array([1, 0, 2], dtype=np.int64))
    enumerate_axes(seq)
