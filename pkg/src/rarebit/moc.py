"""Maximum order complexity of binary sequences.

M(S, N) is the least M such that, inside the first N terms, every block of
M consecutive terms determines the next term.  Over {0, 1} that is the same
as 1 + the length of the longest factor w for which both w0 and w1 occur in
the prefix (0 if no such w exists).  The constant-prefix clause of the
definition agrees with this reformulation, but both engines still apply it
verbatim first.

``moc_naive`` checks the definition directly and serves as the oracle for
``moc_fast``, which reads the value off an online suffix automaton.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import AlphabetError, PreconditionError
from .sequences import Sequence


@dataclass(frozen=True)
class MocResult:
    N: int
    M: int
    # positions (i, j), i < j: equal blocks of length M-1, different successors
    witness: Optional[tuple[int, int]] = None


def _symbols(S) -> np.ndarray:
    if isinstance(S, Sequence):
        if S.m != 2:
            raise AlphabetError(f"maximum order complexity needs a binary sequence, got alphabet size {S.m}")
        return S.symbols
    arr = np.asarray(S, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise AlphabetError("maximum order complexity needs a binary sequence")
    return arr.astype(np.uint8)


def _check_length(N: int, available: int) -> None:
    if not 2 <= N <= available:
        raise PreconditionError(f"N must satisfy 2 <= N <= {available}, got {N}")


def _degenerate(s, N: int) -> Optional[MocResult]:
    head = s[: N - 1]
    a = head[0]
    if (head == a).all():
        # a^(N-1) b: the blocks at 0 and 1 agree on N-2 symbols, then differ
        return MocResult(N, 0) if s[N - 1] == a else MocResult(N, N - 1, (0, 1))
    return None


def moc_naive(S, N: int) -> MocResult:
    s = _symbols(S)
    _check_length(N, len(s))
    deg = _degenerate(s, N)
    if deg is not None:
        return deg
    bits = s[:N].tobytes()
    previous = None
    for M in range(0, N):
        seen: dict[bytes, tuple[int, int]] = {}
        clash = None
        for i in range(N - M):
            block = bits[i:i + M]
            nxt = bits[i + M]
            hit = seen.get(block)
            if hit is None:
                seen[block] = (i, nxt)
            elif hit[1] != nxt:
                clash = (hit[0], i)
                break
        if clash is None:
            # M = 0 cannot pass here: a non-degenerate prefix holds both symbols
            return MocResult(N, M, previous)
        previous = clash
    raise AssertionError("unreachable: M = N - 1 always satisfies the definition")


class SuffixAutomaton:
    """Online suffix automaton over {0, 1} that tracks right-special factors.

    After feeding n symbols, ``longest_special`` is the length of the longest
    factor of the prefix followed by both 0 and 1 (or -1 if none), and
    ``special_witness`` gives two start positions of that factor with
    different successors.
    """

    def __init__(self):
        self.length = [0]
        self.link = [-1]
        self.next0 = [-1]
        self.next1 = [-1]
        self.firstpos = [-1]
        self.last = 0
        self.size = 0
        self.longest_special = -1
        self.special_witness: Optional[tuple[int, int]] = None

    def _new_state(self, length, link, n0, n1, firstpos):
        self.length.append(length)
        self.link.append(link)
        self.next0.append(n0)
        self.next1.append(n1)
        self.firstpos.append(firstpos)
        return len(self.length) - 1

    def extend(self, c: int) -> None:
        pos = self.size
        length, link, firstpos = self.length, self.link, self.firstpos
        nxt, other = (self.next1, self.next0) if c else (self.next0, self.next1)

        cur = self._new_state(length[self.last] + 1, -1, -1, -1, pos)
        p = self.last
        while p != -1 and nxt[p] == -1:
            nxt[p] = cur
            o = other[p]
            if o != -1 and length[p] > self.longest_special:
                # w = longest string of p: followed by c here, and by 1-c where o was first seen
                L = length[p]
                j = pos - L
                i = firstpos[o] - L
                self.longest_special = L
                self.special_witness = (min(i, j), max(i, j))
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = nxt[p]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = self._new_state(length[p] + 1, link[q], self.next0[q], self.next1[q], firstpos[q])
                while p != -1 and nxt[p] == q:
                    nxt[p] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        self.last = cur
        self.size += 1

    def feed(self, symbols: Iterable[int]) -> None:
        for c in symbols:
            self.extend(int(c))

    @property
    def n_states(self) -> int:
        return len(self.length)

    def count_distinct_factors(self) -> int:
        """Number of distinct non-empty factors of the text fed so far."""
        return sum(self.length[v] - self.length[self.link[v]] for v in range(1, self.n_states))


def _result_from(sam: SuffixAutomaton, s, N: int) -> MocResult:
    deg = _degenerate(s, N)
    if deg is not None:
        return deg
    return MocResult(N, sam.longest_special + 1, sam.special_witness if sam.longest_special >= 0 else None)


def moc_fast(S, N: int) -> MocResult:
    s = _symbols(S)
    _check_length(N, len(s))
    sam = SuffixAutomaton()
    sam.feed(s[:N].tolist())
    return _result_from(sam, s, N)


def moc_profile(S, checkpoints: Iterable[int]) -> list[MocResult]:
    """M(S, N) at each checkpoint, from one incremental automaton pass."""
    s = _symbols(S)
    cps = list(checkpoints)
    if any(b < a for a, b in zip(cps, cps[1:])):
        raise PreconditionError("checkpoints must be sorted ascending")
    for N in cps:
        _check_length(N, len(s))
    sam = SuffixAutomaton()
    out = []
    data = s.tolist()
    for N in cps:
        while sam.size < N:
            sam.extend(data[sam.size])
        out.append(_result_from(sam, s, N))
    return out


def moc_all(S, N_max: int) -> np.ndarray:
    """Array whose entry N is M(S, N) for 2 <= N <= N_max (entries 0, 1 unused)."""
    s = _symbols(S)
    _check_length(N_max, len(s))
    out = np.zeros(N_max + 1, dtype=np.int64)
    sam = SuffixAutomaton()
    data = s[:N_max].tolist()
    # constant-prefix clause holds only while s[0..N-2] is constant
    run = 1
    while run < N_max and data[run] == data[0]:
        run += 1
    for N in range(1, N_max + 1):
        sam.extend(data[N - 1])
        if N < 2:
            continue
        if N - 1 <= run:
            out[N] = 0 if data[N - 1] == data[0] else N - 1
        else:
            out[N] = sam.longest_special + 1
    return out


def check_witness(S, result: MocResult) -> bool:
    """True if the witness shows that M - 1 does not suffice."""
    if result.witness is None:
        return False
    s = _symbols(S)
    i, j = result.witness
    L = result.M - 1
    N = result.N
    if not (0 <= i < j and j + L < N):
        return False
    return bool((s[i:i + L] == s[j:j + L]).all() and s[i + L] != s[j + L])
