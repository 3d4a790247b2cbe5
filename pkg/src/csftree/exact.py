"""Exact chromatic symmetric functions of trees in the power-sum basis.

Two independent computation paths:

* ``compute_csf`` runs a rooted recursion.  For every subtree it keeps
  the sequence (F_1, ..., F_d) of power-sum polynomials that carries the
  colorings of the subtree graded by how many vertices share the root's
  color; child sequences merge into the parent by convolution.  The
  tree's CSF is then the dot product of the root sequence with the
  generators p_1, ..., p_n.

* ``csf_oracle`` expands over all 2^(n-1) edge subsets instead: each
  subset contributes its component-size partition with sign (-1)^|S|.
  It is exponential and guarded, existing to cross-check the recursion.

``truncate_csf`` drops every term with a part larger than k, and
``truncated_csf_oracle`` produces the same polynomial directly from the
subset expansion restricted to subsets whose components all have at
most k vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ppoly import PPoly
from .trees import RootedView, Tree, root_at

# 2^(n-1) subsets are enumerated explicitly; past this the oracle refuses.
SUBSET_ORACLE_LIMIT = 24


@dataclass(frozen=True)
class SFS:
    """Per-root sequence of power-sum polynomials, one entry per grading.

    For a subtree on m vertices the sequence has m entries and entry i is
    homogeneous of degree m - i.
    """

    entries: tuple[PPoly, ...]

    def assemble_csf(self) -> PPoly:
        """Dot product with the generators: sum of p_i * entries[i-1]."""
        total = PPoly.zero()
        for i, f in enumerate(self.entries, start=1):
            total = total + f.scale_by_p(i)
        return total


def compute_sfs(rv: RootedView) -> SFS:
    """Sequence for the whole tree seen from rv.root.

    Iterative post-order with an explicit stack, so deep path-like trees do
    not hit the interpreter recursion limit.  Children merge in ascending
    vertex order: each child's sequence (G_1, ..., G_m) becomes the window
    (G_0, -G_1, ..., -G_m) with G_0 = sum of p_j * G_j (the child subtree's
    own CSF), and the accumulator is convolved with that window.
    """
    n = rv.tree.n
    children = rv.children_lists()
    order = [rv.root]
    stack = [rv.root]
    while stack:
        v = stack.pop()
        for c in children[v]:
            order.append(c)
            stack.append(c)
    seqs: list[list[PPoly] | None] = [None] * n
    for v in reversed(order):
        acc = [PPoly.one()]
        for u in children[v]:
            g = seqs[u]
            seqs[u] = None
            g0 = PPoly.zero()
            for j, gj in enumerate(g, start=1):
                g0 = g0 + gj.scale_by_p(j)
            window = [g0] + [-gj for gj in g]
            out = [PPoly.zero()] * (len(acc) + len(g))
            for jj, t in enumerate(acc):
                if t:
                    for pp, w in enumerate(window):
                        if w:
                            out[jj + pp] = out[jj + pp] + t * w
            acc = out
        seqs[v] = acc
    return SFS(tuple(seqs[rv.root]))


def compute_csf(t: Tree) -> PPoly:
    """The tree's chromatic symmetric function in the power-sum basis.

    Rooted at vertex 0 for reproducibility; the result is root-independent.
    """
    return compute_sfs(root_at(t, 0)).assemble_csf()


def _subset_expansion(t: Tree, max_part: int | None) -> PPoly:
    n = t.n
    edges = t.edges
    m = n - 1
    acc: dict[tuple[int, ...], int] = {}
    for mask in range(1 << m):
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rest = mask
        while rest:
            bit = rest & -rest
            u, v = edges[bit.bit_length() - 1]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
            rest ^= bit
        sizes: dict[int, int] = {}
        for x in range(n):
            r = find(x)
            sizes[r] = sizes.get(r, 0) + 1
        lam = tuple(sorted(sizes.values(), reverse=True))
        if max_part is not None and lam[0] > max_part:
            continue
        sign = -1 if mask.bit_count() & 1 else 1
        acc[lam] = acc.get(lam, 0) + sign
    return PPoly._raw({k: v for k, v in acc.items() if v})


def _check_oracle_guard(t: Tree, force: bool) -> None:
    if t.n > SUBSET_ORACLE_LIMIT and not force:
        raise ValueError(
            f"subset expansion over 2^{t.n - 1} edge subsets refused for "
            f"n={t.n} > {SUBSET_ORACLE_LIMIT}; pass force=True to override"
        )


def csf_oracle(t: Tree, *, force: bool = False) -> PPoly:
    """CSF by signed expansion over all edge subsets (independent of compute_csf)."""
    _check_oracle_guard(t, force)
    return _subset_expansion(t, None)


def truncated_csf_oracle(t: Tree, k: int, *, force: bool = False) -> PPoly:
    """Subset expansion restricted to subsets whose components have <= k vertices."""
    if k < 1:
        raise ValueError("truncation level must be >= 1")
    _check_oracle_guard(t, force)
    return _subset_expansion(t, k)


def truncate_csf(x: PPoly, k: int) -> PPoly:
    """Drop every term whose partition has a part > k; identity when k >= weight."""
    if k < 1:
        raise ValueError("truncation level must be >= 1")
    return PPoly._raw(
        {parts: c for parts, c in x.terms.items() if not parts or parts[0] <= k}
    )
