"""Kernel-level checks: numpy/numba parity and agreement with brute force."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from benchvote import kernels
from oracles import brute_inversions

numba_active = pytest.mark.skipif(
    kernels.BACKEND != "numba", reason="numba backend disabled in this run"
)


@st.composite
def position_matrices(draw):
    k = draw(st.integers(min_value=1, max_value=7))
    n = draw(st.integers(min_value=1, max_value=6))
    rows = [draw(st.permutations(range(k))) for _ in range(n)]
    return np.array(rows, dtype=np.int64)


@st.composite
def sequence_matrices(draw):
    k = draw(st.integers(min_value=3, max_value=6))
    n = draw(st.integers(min_value=1, max_value=4))
    rows = [draw(st.permutations(range(k))) for _ in range(n)]
    return np.array(rows, dtype=np.int64)


def counts_by_loop(pos):
    n, k = pos.shape
    out = np.zeros((k, k), dtype=np.int64)
    for r in range(n):
        for a in range(k):
            for b in range(k):
                if pos[r, a] < pos[r, b]:
                    out[a, b] += 1
    return out


@given(position_matrices())
def test_pairwise_counts_match_loop(pos):
    assert np.array_equal(kernels.np_pairwise_above_counts(pos), counts_by_loop(pos))


@numba_active
@given(position_matrices())
@settings(deadline=None)
def test_pairwise_counts_backends_agree(pos):
    assert np.array_equal(
        kernels.nb_pairwise_above_counts(pos), kernels.np_pairwise_above_counts(pos)
    )


@given(st.lists(st.integers(min_value=0, max_value=5), max_size=40))
def test_inversions_match_bruteforce(values):
    arr = np.array(values, dtype=np.int64)
    assert kernels.np_count_inversions(arr) == brute_inversions(values)


@numba_active
@given(st.lists(st.integers(min_value=-3, max_value=9), max_size=60))
@settings(deadline=None)
def test_inversions_backends_agree(values):
    arr = np.array(values, dtype=np.int64)
    assert kernels.nb_count_inversions(arr) == kernels.np_count_inversions(arr)


def test_inversion_examples():
    assert kernels.count_inversions(np.arange(8)) == 0
    assert kernels.count_inversions(np.arange(7)[::-1].copy()) == 21
    assert kernels.count_inversions(np.array([2, 1, 2, 0])) == 4
    assert kernels.count_inversions(np.array([], dtype=np.int64)) == 0


def axis_ok_by_peak(seq_row, perm):
    """Literal single-peakedness: within a side, closer to the peak wins."""
    k = len(perm)
    slot = {m: i for i, m in enumerate(perm)}
    rank = {m: i for i, m in enumerate(seq_row)}
    peak = slot[seq_row[0]]
    for i in range(k):
        for j in range(k):
            if (i < j <= peak) or (peak <= j < i):
                if rank[perm[j]] > rank[perm[i]]:
                    return False
    return True


def axes_by_filter(seq):
    k = seq.shape[1]
    out = []
    for perm in itertools.permutations(range(k)):
        if perm[0] > perm[-1]:
            continue
        if all(axis_ok_by_peak(tuple(row), perm) for row in seq):
            out.append(perm)
    return out


@given(sequence_matrices())
@settings(deadline=None, max_examples=60)
def test_enumerate_axes_matches_permutation_filter(seq):
    got = [tuple(row) for row in kernels.enumerate_axes(seq)]
    assert got == axes_by_filter(seq)


@given(st.integers(min_value=3, max_value=8), st.integers(min_value=0, max_value=1000))
@settings(deadline=None, max_examples=25)
def test_single_ranking_axis_count(k, seed):
    # One strict ranking admits exactly 2**(k-2) canonical axes: the top model
    # splits the axis, and each remaining model extends one of the two arms,
    # with the final choice fixed by canonical orientation.
    rng = np.random.default_rng(seed)
    seq = rng.permutation(k).reshape(1, k)
    assert kernels.enumerate_axes(seq).shape[0] == 2 ** (k - 2)


def test_stop_after_first_returns_lex_first_axis():
    rng = np.random.default_rng(3)
    seq = np.array([rng.permutation(5), rng.permutation(5)])
    full = kernels.enumerate_axes(seq)
    first = kernels.enumerate_axes(seq, stop_after_first=True)
    if full.shape[0] == 0:
        assert first.shape[0] == 0
    else:
        assert first.shape == (1, 5)
        assert np.array_equal(first[0], full[0])


def test_stop_after_first_on_unpeaked_profile():
    condorcet = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert kernels.enumerate_axes(condorcet).shape[0] == 0
    assert kernels.enumerate_axes(condorcet, stop_after_first=True).shape[0] == 0


@numba_active
def test_numba_axis_cap():
    seq = np.arange(17).reshape(1, 17)
    with pytest.raises(ValueError):
        kernels.nb_enumerate_axes(seq)


def test_backend_reflects_environment():
    expected = "numpy" if os.environ.get("BENCHVOTE_NO_NUMBA", "0") not in ("", "0") else "numba"
    assert kernels.BACKEND == expected


def test_numpy_fallback_subprocess():
    code = (
        "import numpy as np\n"
        "from benchvote import kernels\n"
        "assert kernels.BACKEND == 'numpy', kernels.BACKEND\n"
        "pos = np.array([[0, 1, 2], [2, 0, 1]])\n"
        "print(kernels.pairwise_above_counts(pos).tolist())\n"
        "print(kernels.count_inversions(np.array([3, 1, 2, 0])).__int__())\n"
        "print(kernels.enumerate_axes(np.array([[0, 1, 2]])).tolist())\n"
    )
    env = dict(os.environ, BENCHVOTE_NO_NUMBA="1")
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.strip().splitlines()
    pos = np.array([[0, 1, 2], [2, 0, 1]])
    assert lines[0] == str(kernels.pairwise_above_counts(pos).tolist())
    assert lines[1] == str(int(kernels.count_inversions(np.array([3, 1, 2, 0]))))
    assert lines[2] == str(kernels.enumerate_axes(np.array([[0, 1, 2]])).tolist())
