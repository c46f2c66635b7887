"""Reference implementations kept deliberately independent of the package.

Plain Python loops, no vectorisation and no shared helpers, so agreement with
the library is evidence rather than tautology.
"""
import heapq
import itertools
import math


def pair_rate(gi, gj, m):
    return max(0.0, math.log2(gi / (gi + gj) + gi)) / (2 * m)


def decode(seq, n):
    """Textbook Pruefer decoding with a min-heap of current leaves."""
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def all_trees(n):
    """Every labelled tree on 1..n as an edge list."""
    if n == 2:
        yield [(1, 2)]
        return
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        yield decode(seq, n)


def tree_rates(edges, gamma, m, gamma_d=None):
    """Per-user rates on a tree over the users that appear in ``edges``."""
    best = {}
    for a, b in edges:
        best[a] = max(best.get(a, 0.0), gamma[b - 1])
        best[b] = max(best.get(b, 0.0), gamma[a - 1])
    out = {}
    for u, partner in best.items():
        r = pair_rate(gamma[u - 1], partner, m)
        if gamma_d is not None:
            r = min(r, math.log2(1 + gamma_d) / (2 * m))
        out[u] = r
    return out


def best_common(gamma, gamma_d=None):
    n = len(gamma)
    return max(min(tree_rates(t, gamma, n - 1, gamma_d).values()) for t in all_trees(n))


def best_sum(gamma):
    n = len(gamma)
    return max(sum(tree_rates(t, gamma, n - 1).values()) for t in all_trees(n))


def all_sums(gamma):
    n = len(gamma)
    return [sum(tree_rates(t, gamma, n - 1).values()) for t in all_trees(n)]


def _relabelled_trees(active):
    k = len(active)
    for t in all_trees(k):
        yield [(active[a - 1], active[b - 1]) for a, b in t]


def best_with_silencing(gamma):
    """Best sum rate over every active subset of size >= 2.

    All users active uses N-1 phases; with a proper subset A active, |A|
    phases.  Proper subsets whose weakest/strongest pair would need clamping
    are excluded, mirroring the precondition of the closed form.
    """
    n = len(gamma)
    users = list(range(1, n + 1))
    best = -math.inf
    for size in range(2, n + 1):
        for active in itertools.combinations(users, size):
            g = [gamma[u - 1] for u in active]
            lo, hi = min(g), max(g)
            full = size == n
            if not full and lo / (lo + hi) + lo < 1:
                continue
            m = n - 1 if full else size
            for t in _relabelled_trees(list(active)):
                best = max(best, sum(tree_rates(t, gamma, m).values()))
    return best


def is_tree(n, edges):
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return len(edges) == n - 1
