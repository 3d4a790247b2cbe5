"""Modular fingerprints of chromatic symmetric functions.

A CSF in the power-sum basis can have as many terms as there are
partitions of n, so comparing trees through explicit CSFs gets expensive
fast.  Substituting a fixed residue C_i for each generator p_i and
reducing mod a prime q is a ring homomorphism to Z/qZ, so it can be
pushed through the same rooted convolution recursion that the exact path
uses, operating on plain residues throughout.  Equal CSFs always map to
equal residues; unequal residues therefore certify unequal CSFs.

Every modular addition, multiplication and reduction performed by the
sequence evaluation is tallied into ``ResidueSeq.opcount``; the tally is
the basis for the quadratic operation-bound checks in the test suite.

When the residue tuple is zero beyond index k (``EvalSpec.trunc``), only
sequence prefixes of length k ever matter, and the truncated evaluation
path keeps just those, dropping the per-tree cost from quadratic to
linear in n for fixed k.
"""

from __future__ import annotations

from dataclasses import dataclass

from .trees import RootedView, Tree, root_at


def is_prime(m: int) -> bool:
    """Primality by trial division."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class EvalSpec:
    """A prime modulus q and a residue tuple defining one evaluation.

    Residues are reduced mod q on construction.  ``trunc=k`` declares that
    every residue beyond index k is zero (enforced), which licenses the
    truncated evaluation path.
    """

    q: int
    c: tuple[int, ...]
    trunc: int | None = None

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"modulus {self.q} is not prime")
        object.__setattr__(self, "c", tuple(x % self.q for x in self.c))
        if self.trunc is not None:
            if self.trunc < 1:
                raise ValueError("truncation level must be >= 1")
            if any(self.c[self.trunc:]):
                raise ValueError(
                    f"residues beyond index {self.trunc} must be zero under truncation"
                )

    def to_text(self) -> str:
        return f"{self.q};{','.join(map(str, self.c))}"

    @classmethod
    def from_text(cls, text: str, trunc: int | None = None) -> "EvalSpec":
        q_s, sep, c_s = text.strip().partition(";")
        if not sep:
            raise ValueError(f"malformed evaluation spec {text!r}")
        try:
            q = int(q_s)
            c = tuple(int(x) for x in c_s.split(",")) if c_s else ()
        except ValueError:
            raise ValueError(f"malformed evaluation spec {text!r}") from None
        return cls(q, c, trunc)


@dataclass(frozen=True)
class ResidueSeq:
    """Evaluated sequence for one rooted tree plus the modular-operation tally."""

    r: tuple[int, ...]
    opcount: int


def eval_sfs(rv: RootedView, spec: EvalSpec, limit: int | None = None) -> ResidueSeq:
    """Evaluate the root sequence mod spec.q without materializing polynomials.

    Entry i equals the exact sequence entry F_i evaluated at spec.  With
    ``limit=k`` only the first k entries are computed and propagated (sound
    when the residues beyond index k are zero, per EvalSpec.trunc).
    """
    tree = rv.tree
    n = tree.n
    c = spec.c
    q = spec.q
    if len(c) < n:
        raise ValueError(f"residue tuple of length {len(c)} is shorter than n={n}")
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    cap = n if limit is None else min(limit, n)

    children = rv.children_lists()
    order = [rv.root]
    stack = [rv.root]
    while stack:
        v = stack.pop()
        for child in children[v]:
            order.append(child)
            stack.append(child)

    seqs: list[list[int] | None] = [None] * n
    ops = 0
    for v in reversed(order):
        kids = children[v]
        if not kids:
            seqs[v] = [1]
            continue
        acc = [1]
        for u in kids:
            s = seqs[u]
            seqs[u] = None
            # Child subtree's own fingerprint: dot product of its sequence with c.
            s0 = 0
            for j, sj in enumerate(s):
                cj = c[j]
                if sj and cj:
                    s0 = (s0 + cj * sj) % q
                    ops += 3
            # Convolution window (s0, -s1, ..., -sm), clipped to the cap.
            window = [s0]
            for x in s[: cap - 1]:
                if x:
                    window.append((q - x) % q)
                    ops += 2
                else:
                    window.append(0)
            d = len(acc)
            out = [0] * min(d + len(s), cap)
            out_len = len(out)
            for jj in range(d):
                t = acc[jj]
                if t:
                    hi = min(len(window), out_len - jj)
                    for pp in range(hi):
                        w = window[pp]
                        if w:
                            out[jj + pp] = (out[jj + pp] + t * w) % q
                            ops += 3
            acc = out
        seqs[v] = acc
    return ResidueSeq(tuple(seqs[rv.root]), ops)


def eval_csf(t: Tree, spec: EvalSpec) -> int:
    """Fingerprint of the tree's CSF: equals the exact CSF evaluated at spec."""
    seq = eval_sfs(root_at(t, 0), spec)
    q = spec.q
    total = 0
    for i, r in enumerate(seq.r):
        total = (total + spec.c[i] * r) % q
    return total


def eval_csf_truncated(t: Tree, spec: EvalSpec) -> int:
    """Same residue as eval_csf, computed with sequence prefixes of length trunc.

    Requires spec.trunc; the zero tail of the residue tuple guarantees the
    discarded entries could never contribute.
    """
    if spec.trunc is None:
        raise ValueError("eval_csf_truncated requires a spec with trunc set")
    seq = eval_sfs(root_at(t, 0), spec, limit=spec.trunc)
    q = spec.q
    total = 0
    for i, r in enumerate(seq.r):
        total = (total + spec.c[i] * r) % q
    return total


def count_ops(rv: RootedView, spec: EvalSpec) -> int:
    """Modular-operation tally of one full sequence evaluation."""
    return eval_sfs(rv, spec).opcount
