"""Pairings, client graphs and labelled trees.

A pairing is the set of user pairs scheduled in the uplink phases.  Its
client graph has one vertex per user and one edge per distinct pair; a
pairing with N-1 pairs lets every user decode every message exactly when
the client graph is a spanning tree.

Vertex labels are canonical user labels ``1..n``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

DEFAULT_ENUMERATION_CAP = 9


class InfeasiblePairingError(ValueError):
    """Raised when a rate is requested for a pairing that is not a tree."""


class EnumerationCapError(ValueError):
    """Raised when exhaustive tree enumeration would be too large."""


@dataclass(frozen=True)
class Pairing:
    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 users, got {self.n}")
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if a == b:
                raise ValueError(f"pair {a}-{b} repeats a user")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"pair {a}-{b} out of range 1..{self.n}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def m(self) -> int:
        return len(self.pairs)

    def edge_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(p) for p in self.pairs)

    @cached_property
    def _canonical(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted({(min(a, b), max(a, b)) for a, b in self.pairs}))

    @cached_property
    def _is_tree(self) -> bool:
        edges = self._canonical
        return len(edges) == self.n - 1 and _connected(self.n, edges)

    def canonical(self) -> tuple[tuple[int, int], ...]:
        """Sorted distinct edges, each as ``(low, high)``; handy for comparisons."""
        return self._canonical

    def __str__(self):
        return format_pairing(self)


def parse_pairing(text: str, n: int | None = None) -> Pairing:
    """Parse ``"1-2, 2-3,3-4"``.  ``n`` defaults to the largest label seen."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            a, b = (int(x) for x in chunk.split("-"))
        except ValueError:
            raise ValueError(f"bad pair {chunk!r}; expected e.g. '1-2'") from None
        pairs.append((a, b))
    if not pairs:
        raise ValueError("empty pairing")
    if n is None:
        n = max(max(p) for p in pairs)
    return Pairing(n, tuple(pairs))


def format_pairing(pairing: Pairing) -> str:
    return ",".join(f"{a}-{b}" for a, b in pairing.pairs)


@dataclass(frozen=True, eq=False)
class ClientGraph:
    n: int
    adjacency: np.ndarray
    degrees: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "ClientGraph":
        adj = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            adj[a - 1, b - 1] = adj[b - 1, a - 1] = True
        deg = adj.sum(axis=1)
        adj.setflags(write=False)
        deg.setflags(write=False)
        return cls(n, adj, deg)

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency))
        return [(int(a) + 1, int(b) + 1) for a, b in zip(rows, cols)]

    def neighbors(self, v: int) -> list[int]:
        return [int(u) + 1 for u in np.flatnonzero(self.adjacency[v - 1])]

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adjacency[a - 1, b - 1])

    def to_pairing(self) -> Pairing:
        return Pairing(self.n, tuple(self.edges()))

    def is_tree(self) -> bool:
        return len(self.edges()) == self.n - 1 and _connected(self.n, self.edges())

    def __eq__(self, other):
        if not isinstance(other, ClientGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash((self.n, self.adjacency.tobytes()))


def graph_of(pairing: Pairing) -> ClientGraph:
    return ClientGraph.from_edges(pairing.n, pairing.pairs)


def _connected(n: int, edges) -> bool:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            components -= 1
    return components == 1


def is_feasible(pairing: Pairing) -> bool:
    """True iff the client graph is a spanning tree (connected, n-1 distinct edges)."""
    return pairing._is_tree


def require_tree(pairing: Pairing) -> None:
    if not is_feasible(pairing):
        raise InfeasiblePairingError(
            f"pairing is not a tree: {format_pairing(pairing)} on {pairing.n} users")


# -- GF(2) decodability oracle ---------------------------------------------
#
# Rows are bitmasks (bit k <-> user k+1).  Kept independent from the graph
# code above so the two feasibility tests can check each other.

def _gf2_reduce(vec: int, basis: dict[int, int]) -> int:
    while vec:
        top = vec.bit_length() - 1
        row = basis.get(top)
        if row is None:
            return vec
        vec ^= row
    return 0


def _gf2_basis(rows: Sequence[int]) -> dict[int, int]:
    basis: dict[int, int] = {}
    for r in rows:
        r = _gf2_reduce(r, basis)
        if r:
            basis[r.bit_length() - 1] = r
    return basis


def incidence_rows(pairing: Pairing) -> list[int]:
    """Rows of the M x N incidence matrix over GF(2), as bitmasks."""
    return [(1 << (a - 1)) | (1 << (b - 1)) for a, b in pairing.pairs]


def gf2_rank(rows: Sequence[int]) -> int:
    return len(_gf2_basis(rows))


def feasible_by_rank(pairing: Pairing, user: int) -> bool:
    """Can ``user`` recover every other message from the relay's broadcasts?

    Each broadcast is ``X_a + X_b``; knowing its own ``X_user`` the user
    recovers ``X_j`` iff ``e_user + e_j`` lies in the row space of the
    incidence matrix.
    """
    if not 1 <= user <= pairing.n:
        raise ValueError(f"user {user} out of range 1..{pairing.n}")
    basis = _gf2_basis(incidence_rows(pairing))
    own = 1 << (user - 1)
    return all(_gf2_reduce(own | (1 << (j - 1)), basis) == 0
               for j in range(1, pairing.n + 1) if j != user)


# -- Pruefer codec -----------------------------------------------------------

def prufer_decode(seq: Sequence[int], n: int | None = None) -> Pairing:
    """Tree on ``len(seq) + 2`` vertices encoded by ``seq`` (labels 1..n)."""
    seq = [int(x) for x in seq]
    if n is None:
        n = len(seq) + 2
    if len(seq) != n - 2:
        raise ValueError(f"Pruefer sequence for n={n} must have length {n - 2}")
    if any(not 1 <= x <= n for x in seq):
        raise ValueError(f"Pruefer entries must lie in 1..{n}")
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    pairs = []
    for x in seq:
        leaf = next(v for v in range(1, n + 1) if degree[v] == 1)
        pairs.append((leaf, x))
        degree[leaf] = 0
        degree[x] -= 1
    u, v = (w for w in range(1, n + 1) if degree[w] == 1)
    pairs.append((u, v))
    return Pairing(n, tuple(pairs))


def prufer_encode(pairing: Pairing) -> tuple[int, ...]:
    require_tree(pairing)
    n = pairing.n
    nbrs: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for a, b in pairing.canonical():
        nbrs[a].add(b)
        nbrs[b].add(a)
    seq = []
    for _ in range(n - 2):
        leaf = min(v for v, s in nbrs.items() if len(s) == 1)
        (parent,) = nbrs.pop(leaf)
        nbrs[parent].discard(leaf)
        seq.append(parent)
    return tuple(seq)


def prufer_decode_batch(seqs: np.ndarray, n: int) -> np.ndarray:
    """Decode many sequences at once.

    ``seqs`` has shape ``(T, n-2)`` with labels 1..n.  Returns 0-based edge
    endpoints of shape ``(T, n-1, 2)``, edge order matching
    :func:`prufer_decode`.
    """
    seqs = np.asarray(seqs, dtype=np.int64).reshape(-1, n - 2) - 1
    t = seqs.shape[0]
    rows = np.arange(t)
    degree = np.ones((t, n), dtype=np.int64)
    for k in range(n - 2):
        np.add.at(degree, (rows, seqs[:, k]), 1)
    edges = np.empty((t, n - 1, 2), dtype=np.int64)
    for k in range(n - 2):
        leaf = np.argmax(degree == 1, axis=1)
        edges[:, k, 0] = leaf
        edges[:, k, 1] = seqs[:, k]
        degree[rows, leaf] = 0
        degree[rows, seqs[:, k]] -= 1
    ones = degree == 1
    first = np.argmax(ones, axis=1)
    last = n - 1 - np.argmax(ones[:, ::-1], axis=1)
    edges[:, n - 2, 0] = first
    edges[:, n - 2, 1] = last
    return edges


def _check_cap(n: int, cap: int) -> None:
    if n < 2:
        raise ValueError(f"need at least 2 users, got {n}")
    if n > cap:
        raise EnumerationCapError(
            f"n={n} exceeds the enumeration cap {cap}: {n}^{n - 2} trees is too "
            "many for brute force; use the closed-form optimum instead")


def prufer_sequences(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[tuple[int, ...]]:
    _check_cap(n, cap)
    return itertools.product(range(1, n + 1), repeat=n - 2)


def enumerate_trees(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Pairing]:
    """All n^(n-2) labelled trees, in lexicographic Pruefer order."""
    for seq in prufer_sequences(n, cap):
        yield prufer_decode(seq, n)


def prufer_blocks(n: int, cap: int = DEFAULT_ENUMERATION_CAP):
    """Lexicographic Pruefer sequences as arrays, one block per leading symbol.

    Yields ``(seqs, edges)`` with ``seqs`` of shape ``(n^(n-3), n-2)`` (a
    single block for n <= 3) and ``edges`` from :func:`prufer_decode_batch`.
    """
    _check_cap(n, cap)
    if n == 2:
        yield np.zeros((1, 0), dtype=np.int64), np.array([[[0, 1]]])
        return
    tail = n - 3
    if tail == 0:
        seqs = np.arange(1, n + 1).reshape(-1, 1)
        yield seqs, prufer_decode_batch(seqs, n)
        return
    rest = np.indices((n,) * tail).reshape(tail, -1).T + 1
    for head in range(1, n + 1):
        seqs = np.hstack([np.full((rest.shape[0], 1), head), rest])
        yield seqs, prufer_decode_batch(seqs, n)


def random_prufer(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 2:
        raise ValueError(f"need at least 2 users, got {n}")
    return rng.integers(1, n + 1, size=n - 2)


def random_tree(n: int, rng: np.random.Generator) -> Pairing:
    """Uniformly random labelled tree on n vertices."""
    return prufer_decode(random_prufer(n, rng), n)


def v_transform(g: ClientGraph, i: int, j: int, k: int) -> ClientGraph:
    """Move neighbour ``k`` of ``i`` onto ``j``: drop edge i-k, add j-k."""
    if j == k:
        raise ValueError("j and k must differ")
    if not (g.has_edge(i, j) and g.has_edge(i, k)):
        raise ValueError(f"v_transform needs edges {i}-{j} and {i}-{k}")
    adj = g.adjacency.copy()
    adj[i - 1, k - 1] = adj[k - 1, i - 1] = False
    adj[j - 1, k - 1] = adj[k - 1, j - 1] = True
    rows, cols = np.nonzero(np.triu(adj))
    return ClientGraph.from_edges(g.n, zip(rows + 1, cols + 1))
