"""Blow-up combinatorics: division chains, Dloussky sequences, dual graphs.

A Dloussky sequence lists the negated self-intersections of the rational
curves in order of creation; it is a concatenation of simple segments, one
per simple-type factor of the germ.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .germ import ContractingGerm, decompose

__all__ = [
    "DivisionChain",
    "DlousskySequence",
    "DualGraph",
    "InvalidSequence",
    "division_chain",
    "chain_to_pair",
    "simple_dls",
    "dloussky_sequence",
    "dual_graph",
    "intersection_matrix",
    "integer_det",
    "det_check",
    "parse_dls",
    "canonical_rotation",
]


class InvalidSequence(ValueError):
    """Raised when a list is not a concatenation of simple Dloussky segments."""


@dataclass(frozen=True)
class DivisionChain:
    alphas: tuple[int, ...]
    betas: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.alphas) - 1


def division_chain(k: int, j: int) -> DivisionChain:
    """Euclid on (k, j): k = a1*j + b1, j = a2*b1 + b2, ... down to remainder 0."""
    if not k > j >= 1:
        raise ValueError(f"need k > j >= 1, got k={k}, j={j}")
    if math.gcd(k, j) != 1:
        raise ValueError(f"need gcd(k, j) = 1, got gcd({k}, {j}) = {math.gcd(k, j)}")
    alphas, betas = [], []
    a, b = k, j
    while b:
        alphas.append(a // b)
        betas.append(a % b)
        a, b = b, a % b
    return DivisionChain(tuple(alphas), tuple(betas))


def chain_to_pair(alphas) -> tuple[int, int]:
    """Rebuild (k, j) from the quotients of the division chain."""
    num, den = 1, 0
    for a in reversed(alphas):
        num, den = a * num + den, num
    return num, den


@dataclass(frozen=True)
class DlousskySequence:
    entries: tuple[int, ...]
    segment_bounds: tuple[int, ...]

    @property
    def b2(self) -> int:
        return len(self.entries)

    @property
    def segments(self) -> list[tuple[int, ...]]:
        bounds = (0, *self.segment_bounds)
        return [self.entries[a:b] for a, b in zip(bounds, bounds[1:])]

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.entries) + "]"


def simple_dls(k: int, j: int, s: int) -> DlousskySequence:
    if not 0 < j < k or j > s:
        raise ValueError(f"need 0 < j < k and j <= s, got k={k}, j={j}, s={s}")
    alphas = division_chain(k, j).alphas
    out = []
    for a in alphas[:-1]:
        out += [a + 2] + [2] * (a - 1)
    last = alphas[-1]
    out += [last + 1] + [2] * (last - 2) + [2] * (s - j + 1)
    return DlousskySequence(tuple(out), (len(out),))


def dloussky_sequence(g: ContractingGerm) -> DlousskySequence:
    """Concatenate the simple sequences of the canonical factors of g."""
    entries, bounds = [], []
    for f in decompose(g):
        entries += simple_dls(f.k, f.j, f.s).entries
        bounds.append(len(entries))
    return DlousskySequence(tuple(entries), tuple(bounds))


@dataclass(frozen=True)
class DualGraph:
    labels: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def b2(self) -> int:
        return len(self.labels)

    @property
    def cyclic_order(self) -> tuple[int, ...]:
        return tuple(range(len(self.labels)))

    def degree(self, i: int) -> int:
        # a loop contributes 2, as for any multigraph
        return sum((a == i) + (b == i) for a, b in self.edges)

    def edge_multiset(self) -> Counter:
        return Counter(self.edges)


def dual_graph(d) -> DualGraph:
    """Node i is joined to the node entries[i]-1 places after it, cyclically."""
    entries = tuple(d.entries if isinstance(d, DlousskySequence) else d)
    if not entries:
        raise ValueError("empty sequence")
    n = len(entries)
    edges = []
    for i, a in enumerate(entries):
        other = (i + a - 1) % n
        edges.append((min(i, other), max(i, other)))
    return DualGraph(tuple(-a for a in entries), tuple(edges))


def intersection_matrix(gph: DualGraph) -> list[list[int]]:
    """Symmetric matrix with diagonal -a_i and edge multiplicities off the diagonal.

    A loop marks a nodal curve; its self-intersection is -a_i + 2.
    """
    n = gph.b2
    m = [[0] * n for _ in range(n)]
    for i, w in enumerate(gph.labels):
        m[i][i] = w
    for a, b in gph.edges:
        if a == b:
            m[a][a] += 2
        else:
            m[a][b] += 1
            m[b][a] += 1
    return m


def integer_det(matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[-1][-1]


def det_check(gph: DualGraph, k: int) -> bool:
    return abs(integer_det(intersection_matrix(gph))) == (k - 1) ** 2


def _blocks(entries):
    """Split into (value, number of following twos) blocks."""
    blocks = []
    i = 0
    while i < len(entries):
        v = entries[i]
        if v < 3:
            raise InvalidSequence(f"expected an entry >= 3 at position {i}, found {v}")
        c = 0
        i += 1
        while i < len(entries) and entries[i] == 2:
            c += 1
            i += 1
        blocks.append((v, c))
    return blocks


@dataclass(frozen=True)
class ParsedSegment:
    entries: tuple[int, ...]
    k: int
    j: int
    s: int


def parse_dls(seq) -> list[ParsedSegment]:
    """Recover the simple segments and their (k, j, s) from a raw sequence.

    A block "v followed by c twos" with c = v-3 is an inner block of a
    segment; c >= v-2 closes the segment.  Any other shape is rejected.
    """
    entries = [int(x) for x in seq]
    if not entries:
        raise InvalidSequence("empty sequence")
    if any(x < 2 for x in entries):
        raise InvalidSequence("entries must be integers >= 2")
    out = []
    alphas = []
    start = pos = 0
    for v, c in _blocks(entries):
        pos += 1 + c
        if c == v - 3:
            alphas.append(v - 2)
        elif c >= v - 2:
            last = v - 1
            alphas.append(last)
            tail = c - (last - 2)
            k, j = chain_to_pair(alphas)
            out.append(ParsedSegment(tuple(entries[start:pos]), k, j, j + tail - 1))
            alphas = []
            start = pos
        else:
            raise InvalidSequence(
                f"not a valid Dloussky concatenation: entry {v} followed by {c} twos"
            )
    if alphas:
        raise InvalidSequence("not a valid Dloussky concatenation: last segment is not closed")
    return out


def canonical_rotation(d) -> tuple[int, ...]:
    """Lexicographically least rotation of the sequence by whole segments."""
    if isinstance(d, DlousskySequence):
        segs = d.segments
    else:
        segs = [p.entries for p in parse_dls(d)]
    rots = []
    for i in range(len(segs)):
        rot = segs[i:] + segs[:i]
        rots.append(tuple(x for seg in rot for x in seg))
    return min(rots)
