"""Unrooted trees: parsing, rooting, enumeration, canonical forms.

Trees live on vertices 0..n-1 and are stored as normalized edge lists.
Free trees (one representative per isomorphism class) are enumerated by
the level-sequence successor method of Wright, Richmond, Odlyzko and
McKay (WROM), which streams each class exactly once in a fixed order
with constant amortized work per tree.

``canonical_form`` is an independent isomorphism oracle: it roots a tree
at its centroid and encodes subtrees recursively with sorted child
encodings, so two trees are isomorphic iff their canonical level
sequences are equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator


class TreeParseError(ValueError):
    """An edge-list document is syntactically malformed."""


class TreeStructureError(ValueError):
    """An edge set violates a tree invariant."""


def _is_connected(n: int, edges: list[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            components -= 1
    return components == 1


@dataclass(frozen=True)
class Tree:
    """Unrooted tree on vertices 0..n-1 given by its n-1 undirected edges.

    Edges are normalized to sorted (min, max) pairs, so two values compare
    equal iff they are the same labeled tree.  Construction validates every
    invariant: edge count, vertex range, no self-loops or duplicates, and
    connectivity (which, with n-1 edges, is equivalent to acyclicity).
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise TreeStructureError("vertex count must be a positive integer")
        norm = []
        for e in self.edges:
            u, v = e
            if u == v:
                raise TreeStructureError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise TreeStructureError(f"edge {e!r} out of range for n={self.n}")
            norm.append((u, v) if u < v else (v, u))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise TreeStructureError(f"duplicate edge {a!r}")
        if len(norm) != self.n - 1:
            raise TreeStructureError(
                f"expected {self.n - 1} edges for n={self.n}, got {len(norm)}"
            )
        if self.n > 1 and not _is_connected(self.n, norm):
            raise TreeStructureError("edges do not form a connected acyclic graph")
        object.__setattr__(self, "edges", tuple(norm))

    def adjacency(self) -> list[list[int]]:
        """Adjacency lists with neighbors in ascending order."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(sorted(deg, reverse=True))


def parse_tree(text: str) -> Tree:
    """Parse the edge-list document format: first line n, then n-1 lines "u v"."""
    lines = text.split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TreeParseError("line 1: empty document, expected a vertex count")
    try:
        n = int(lines[0])
    except ValueError:
        raise TreeParseError(f"line 1: expected a vertex count, got {lines[0]!r}") from None
    if n < 1:
        raise TreeParseError(f"line 1: vertex count must be >= 1, got {n}")
    if len(lines) - 1 != n - 1:
        raise TreeParseError(
            f"expected {n - 1} edge lines after the header, found {len(lines) - 1}"
        )
    edges = []
    for idx, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise TreeParseError(f"line {idx}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise TreeParseError(f"line {idx}: expected two integers, got {line!r}") from None
        edges.append((u, v))
    return Tree(n, tuple(edges))


def serialize_tree(t: Tree) -> str:
    """Inverse of parse_tree; LF line endings, edges in normalized order."""
    out = [str(t.n)]
    out.extend(f"{u} {v}" for u, v in t.edges)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class RootedView:
    """A tree with a chosen root and parent pointers (the root's parent is -1)."""

    tree: Tree
    root: int
    parent: tuple[int, ...]

    def __post_init__(self):
        n = self.tree.n
        if not (0 <= self.root < n):
            raise ValueError(f"root {self.root} out of range for n={n}")
        if len(self.parent) != n or self.parent[self.root] != -1:
            raise ValueError("parent array does not match the chosen root")
        encoded = []
        for v, p in enumerate(self.parent):
            if v == self.root:
                continue
            if not (0 <= p < n):
                raise ValueError(f"vertex {v} has invalid parent {p}")
            encoded.append((v, p) if v < p else (p, v))
        if tuple(sorted(encoded)) != self.tree.edges:
            raise ValueError("parent array does not encode the tree's edge set")

    def children_lists(self) -> list[list[int]]:
        """Children of every vertex, each list in ascending order."""
        kids: list[list[int]] = [[] for _ in range(self.tree.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        for k in kids:
            k.sort()
        return kids


def root_at(t: Tree, v: int) -> RootedView:
    """Root the tree at v; parent pointers from a traversal with sorted children."""
    if not (0 <= v < t.n):
        raise ValueError(f"root {v} out of range for n={t.n}")
    adj = t.adjacency()
    parent = [-1] * t.n
    seen = [False] * t.n
    seen[v] = True
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                queue.append(w)
    return RootedView(t, v, tuple(parent))


def child_subtrees(rv: RootedView, v: int) -> list[tuple[int, frozenset[int]]]:
    """For each child of v, the vertex set of the component hanging below it.

    Deleting the edge {v, child} splits off exactly the child's subtree; the
    returned components are ordered by ascending child index.
    """
    if not (0 <= v < rv.tree.n):
        raise ValueError(f"vertex {v} out of range for n={rv.tree.n}")
    kids = rv.children_lists()
    out = []
    for child in kids[v]:
        comp = {child}
        stack = [child]
        while stack:
            u = stack.pop()
            for w in kids[u]:
                comp.add(w)
                stack.append(w)
        out.append((child, frozenset(comp)))
    return out


@dataclass(frozen=True)
class LevelSequence:
    """Depths of a preorder walk over a rooted tree; the enumeration's wire format."""

    seq: tuple[int, ...]

    def __post_init__(self):
        if not self.seq:
            raise ValueError("level sequence must be nonempty")
        if self.seq[0] != 0:
            raise ValueError("level sequence must start at depth 0")
        prev = 0
        for d in self.seq[1:]:
            if not (1 <= d <= prev + 1):
                raise ValueError(f"depth {d} cannot follow depth {prev}")
            prev = d

    def __len__(self) -> int:
        return len(self.seq)

    def to_text(self) -> str:
        return " ".join(map(str, self.seq))

    @classmethod
    def from_text(cls, line: str) -> "LevelSequence":
        try:
            seq = tuple(int(x) for x in line.split())
        except ValueError:
            raise ValueError(f"malformed level sequence {line!r}") from None
        return cls(seq)


def tree_from_level_sequence(ls: LevelSequence) -> Tree:
    """Decode a level sequence; vertex i is the i-th vertex of the preorder walk."""
    seq = ls.seq
    n = len(seq)
    edges = []
    last_at_depth = [0] * n
    for i in range(1, n):
        d = seq[i]
        edges.append((last_at_depth[d - 1], i))
        last_at_depth[d] = i
    return Tree(n, tuple(edges))


# ---------------------------------------------------------------------------
# Free-tree enumeration (WROM successor method on level sequences).
# ---------------------------------------------------------------------------


def _split_layout(layout: list[int]) -> tuple[list[int], list[int]]:
    # Left = root's first subtree (depths shifted down by 1); rest = tree minus it.
    second_one = None
    found = False
    for i, d in enumerate(layout):
        if d == 1:
            if found:
                second_one = i
                break
            found = True
    m = second_one if second_one is not None else len(layout)
    left = [layout[i] - 1 for i in range(1, m)]
    rest = [0] + layout[m:]
    return left, rest


def _next_rooted(layout: list[int], p: int | None = None) -> list[int] | None:
    # Beyer-Hedetniemi successor for rooted level sequences.
    if p is None:
        p = len(layout) - 1
        while layout[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while layout[q] != layout[p] - 1:
        q -= 1
    result = list(layout)
    for i in range(p, len(result)):
        result[i] = result[i - p + q]
    return result


def _next_free(candidate: list[int]) -> list[int] | None:
    # Accept the candidate if it is the canonical rooted form of a free tree:
    # the first root subtree must be no higher than the rest, and on equal
    # height it must not be bigger, nor lexicographically later.
    left, rest = _split_layout(candidate)
    left_height = max(left)
    rest_height = max(rest)
    valid = rest_height >= left_height
    if valid and rest_height == left_height:
        if len(left) > len(rest):
            valid = False
        elif len(left) == len(rest) and left > rest:
            valid = False
    if valid:
        return candidate
    p = len(left)
    succ = _next_rooted(candidate, p)
    if candidate[p] > 2:
        new_left, _ = _split_layout(succ)
        suffix = range(1, max(new_left) + 2)
        succ[-len(suffix):] = suffix
    return succ


def enumerate_free_trees(n: int) -> Iterator[LevelSequence]:
    """Stream one canonical level sequence per isomorphism class of n-vertex trees.

    Deterministic order; successor generation is constant amortized time.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        yield LevelSequence((0,))
        return
    # Start from the path rooted at its center, the first canonical layout.
    layout: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while layout is not None:
        layout = _next_free(layout)
        if layout is not None:
            yield LevelSequence(tuple(layout))
            layout = _next_rooted(layout)


# ---------------------------------------------------------------------------
# Canonical form (centroid-rooted, sorted child encodings).
# ---------------------------------------------------------------------------


def _parents_and_order(adj: list[list[int]], root: int) -> tuple[list[int], list[int]]:
    # DFS parents plus a preorder walk, with no per-view validation overhead.
    parent = [-2] * len(adj)
    parent[root] = -1
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if parent[w] == -2:
                parent[w] = v
                order.append(w)
                stack.append(w)
    return parent, order


def _centroids_from_adjacency(adj: list[list[int]]) -> list[int]:
    n = len(adj)
    if n == 1:
        return [0]
    parent, order = _parents_and_order(adj, 0)
    size = [1] * n
    heaviest = [0] * n
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            size[p] += size[v]
            if size[v] > heaviest[p]:
                heaviest[p] = size[v]
    best = n
    cents: list[int] = []
    for v in range(n):
        h = max(heaviest[v], n - size[v])
        if h < best:
            best = h
            cents = [v]
        elif h == best:
            cents.append(v)
    return cents


def _rooted_encoding(adj: list[list[int]], root: int) -> tuple[int, ...]:
    # Nested-tuple encoding with sorted children, then linearized to depths.
    parent, order = _parents_and_order(adj, root)
    enc: list[tuple] = [()] * len(adj)
    for v in reversed(order):
        kids = [w for w in adj[v] if parent[w] == v]
        enc[v] = tuple(sorted(enc[w] for w in kids))
    depths: list[int] = []
    walk: list[tuple[tuple, int]] = [(enc[root], 0)]
    while walk:
        node, d = walk.pop()
        depths.append(d)
        for child in reversed(node):
            walk.append((child, d + 1))
    return tuple(depths)


def canonical_form(t: Tree) -> LevelSequence:
    """Canonical level sequence: equal for isomorphic trees, distinct otherwise.

    Roots at the centroid; when there are two centroids, the lexicographically
    smaller of the two rooted encodings wins.
    """
    adj = t.adjacency()
    best = min(_rooted_encoding(adj, c) for c in _centroids_from_adjacency(adj))
    return LevelSequence(best)


# ---------------------------------------------------------------------------
# Tree families and random trees (used by demos and test sweeps).
# ---------------------------------------------------------------------------


def path_tree(n: int) -> Tree:
    return Tree(n, tuple((i, i + 1) for i in range(n - 1)))


def star_tree(n: int) -> Tree:
    return Tree(n, tuple((0, i) for i in range(1, n)))


def caterpillar_tree(n: int) -> Tree:
    """A path spine of ceil(n/2) vertices with the remaining leaves attached round-robin."""
    spine = (n + 1) // 2
    edges = [(i, i + 1) for i in range(spine - 1)]
    for leaf in range(spine, n):
        edges.append(((leaf - spine) % spine, leaf))
    return Tree(n, tuple(edges))


def tree_from_prufer(seq: tuple[int, ...]) -> Tree:
    """Decode a Pruefer sequence over [0, n) into the labeled tree it encodes."""
    n = len(seq) + 2
    degree = [1] * n
    for x in seq:
        if not (0 <= x < n):
            raise ValueError(f"sequence entry {x} out of range for n={n}")
        degree[x] += 1
    edges = []
    ptr = 0
    leaf = -1
    for s in seq:
        if leaf < 0:
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
            ptr += 1
        edges.append((leaf, s))
        degree[leaf] = 0
        degree[s] -= 1
        leaf = s if (degree[s] == 1 and s < ptr) else -1
    tail = [v for v in range(n) if degree[v] == 1]
    edges.append((tail[0], tail[1]))
    return Tree(n, tuple(edges))


def random_tree(n: int, rng) -> Tree:
    """Uniform random labeled tree on n vertices (random Pruefer sequence)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Tree(1, ())
    if n == 2:
        return Tree(2, ((0, 1),))
    return tree_from_prufer(tuple(rng.below(n) for _ in range(n - 2)))


def relabel(t: Tree, perm: list[int]) -> Tree:
    """Apply the vertex permutation perm (old index -> new index)."""
    if sorted(perm) != list(range(t.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    return Tree(t.n, tuple((perm[u], perm[v]) for u, v in t.edges))
