"""
Brute-force reference implementations used to check the optimized engines.

Only usable on tiny inputs.
"""

import itertools
from functools import lru_cache
from typing import List, Sequence, Tuple

Interval = Tuple[float, float]


def lev(ref: Sequence[str], hyp: Sequence[str]) -> int:
    ref, hyp = tuple(ref), tuple(hyp)

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j - 1) + (ref[i - 1] != hyp[j - 1]),
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
        )

    return d(len(ref), len(hyp))


def tc_lev(
    ref: Sequence[str], ref_times: Sequence[Interval],
    hyp: Sequence[str], hyp_times: Sequence[Interval],
    collar: float,
) -> int:
    """Full-matrix time-constrained distance: a match needs the intervals within ``collar``."""
    n, m = len(ref), len(hyp)
    big = n + m + 1
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 or j == 0:
                table[i][j] = i + j
                continue
            (rb, re), (hb, he) = ref_times[i - 1], hyp_times[j - 1]
            allowed = hb < re + collar and rb < he + collar
            diagonal = table[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1]) if allowed else big
            table[i][j] = min(diagonal, table[i - 1][j] + 1, table[i][j - 1] + 1)
    return table[n][m]


def cp_distance(refs: Sequence[Sequence[str]], hyps: Sequence[Sequence[str]]) -> int:
    """Minimum over all permutations of the padded speaker/stream lists."""
    size = max(len(refs), len(hyps), 1)
    refs = list(refs) + [[]] * (size - len(refs))
    hyps = list(hyps) + [[]] * (size - len(hyps))
    return min(
        sum(lev(refs[k], hyps[perm[k]]) for k in range(size))
        for perm in itertools.permutations(range(size))
    )


def _interleavings(speakers: Sequence[Sequence[Sequence[str]]]):
    """Every global emission order that keeps each speaker's utterance order."""
    labels = [k for k, utterances in enumerate(speakers) for _ in utterances]
    for order in sorted(set(itertools.permutations(labels))):
        taken = [0] * len(speakers)
        emitted = []
        for k in order:
            emitted.append(speakers[k][taken[k]])
            taken[k] += 1
        yield emitted


def _best_over_streams(utterances: List[Sequence[str]], streams: Sequence[Sequence[str]]) -> int:
    best = None
    for choice in itertools.product(range(len(streams)), repeat=len(utterances)):
        concatenated = [[] for _ in streams]
        for utterance, c in zip(utterances, choice):
            concatenated[c].extend(utterance)
        total = sum(lev(words, stream) for words, stream in zip(concatenated, streams))
        best = total if best is None else min(best, total)
    return best


def mimo_distance(speakers: Sequence[Sequence[Sequence[str]]], streams: Sequence[Sequence[str]]) -> int:
    """All cross-speaker interleavings times all stream choices per utterance."""
    return min(_best_over_streams(order, streams) for order in _interleavings(speakers))


def orc_distance(utterances: Sequence[Sequence[str]], streams: Sequence[Sequence[str]]) -> int:
    """All stream choices with the global utterance order kept."""
    return _best_over_streams(list(utterances), streams)
