"""Probabilistic proofs that two trees have different CSFs.

``show_distinct`` walks primes q = n^2, n^2+1, ... found by trial
division; for each prime it draws random residue tuples and compares the
two trees' fingerprints.  A single differing pair of residues is a
complete, independently checkable proof of distinct CSFs (the witness is
recorded in a DistinctnessCertificate).  Equal fingerprints on every
trial prove nothing, so that outcome is reported as inconclusive.

For trees with distinct CSFs the difference polynomial has degree at
most n, so one random tuple mod q collides with probability at most n/q
< 1/n; with floor(k / log2(n)) trials per prime the overall failure
probability is at most 2^-k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fingerprint import EvalSpec, eval_csf, is_prime
from .rng import SplitMix64
from .trees import Tree

VERDICT_PROVED = "proved-distinct"
VERDICT_INCONCLUSIVE = "inconclusive"


def gen_primes(n: int, count: int) -> list[int]:
    """The first `count` primes >= n^2, ascending, by trial division.

    Every candidate from n^2 upward is tested, even candidates included
    (they are rejected after one division).
    """
    if n < 1 or count < 1:
        raise ValueError("n and count must be >= 1")
    primes: list[int] = []
    q = n * n
    while len(primes) < count:
        if is_prime(q):
            primes.append(q)
        q += 1
    return primes


def sample_tuple(n: int, q: int, rng: SplitMix64) -> tuple[int, ...]:
    """n independent uniform residues in [0, q)."""
    return tuple(rng.below(q) for _ in range(n))


@dataclass(frozen=True)
class DistinctnessCertificate:
    """Outcome of one distinctness run; when proved, (q, c) is the witness.

    A proved certificate re-verifies from scratch: evaluating both trees at
    (q, c) must reproduce r_s and r_t, and they must differ.
    """

    n: int
    verdict: str
    seed: int
    trials_used: int
    q: int | None = None
    c: tuple[int, ...] | None = None
    r_s: int | None = None
    r_t: int | None = None
    trial_index: int | None = None

    @property
    def proved(self) -> bool:
        return self.verdict == VERDICT_PROVED

    def to_text(self) -> str:
        """One line: n q seed trial_index C_1,...,C_n rS rT verdict."""
        if not self.proved:
            raise ValueError("only proved certificates serialize")
        c = ",".join(map(str, self.c))
        return f"{self.n} {self.q} {self.seed} {self.trial_index} {c} {self.r_s} {self.r_t} {self.verdict}"

    @classmethod
    def from_text(cls, line: str) -> "DistinctnessCertificate":
        fields = line.split()
        if len(fields) != 8:
            raise ValueError(f"malformed certificate line: expected 8 fields, got {len(fields)}")
        try:
            n, q, seed, trial_index = (int(x) for x in fields[:4])
            c = tuple(int(x) for x in fields[4].split(","))
            r_s, r_t = int(fields[5]), int(fields[6])
        except ValueError:
            raise ValueError(f"malformed certificate line {line!r}") from None
        verdict = fields[7]
        if verdict != VERDICT_PROVED:
            raise ValueError(f"malformed certificate verdict {verdict!r}")
        if len(c) != n:
            raise ValueError(f"certificate tuple has {len(c)} residues, expected {n}")
        return cls(
            n=n,
            verdict=verdict,
            seed=seed,
            trials_used=trial_index,
            q=q,
            c=c,
            r_s=r_s,
            r_t=r_t,
            trial_index=trial_index,
        )


def trials_per_prime(n: int, k: int) -> int:
    """floor(k / log2(n)), clamped so n <= 2 and small k still run one trial."""
    return max(1, math.floor(k / math.log2(max(n, 2))))


def show_distinct(s: Tree, t: Tree, k: int, seed: int = 0) -> DistinctnessCertificate:
    """Try to prove the two trees' CSFs differ; never wrong when it succeeds.

    Walks n primes starting from n^2; for each, runs trials_per_prime(n, k)
    random-tuple comparisons, returning on the first differing pair.  For
    genuinely distinct CSFs the success probability is at least 1 - 2^-k.
    """
    if s.n != t.n:
        raise ValueError(f"trees must have the same vertex count ({s.n} vs {t.n})")
    if k < 1:
        raise ValueError("accuracy parameter must be >= 1")
    n = s.n
    if n == 1:
        # Both trees are the single vertex: equal CSFs, nothing to prove.
        return DistinctnessCertificate(
            n=1, verdict=VERDICT_INCONCLUSIVE, seed=seed, trials_used=0
        )
    rng = SplitMix64(seed)
    per_prime = trials_per_prime(n, k)
    trial = 0
    for q in gen_primes(n, n):
        for _ in range(per_prime):
            trial += 1
            c = sample_tuple(n, q, rng)
            spec = EvalSpec(q, c)
            r_s = eval_csf(s, spec)
            r_t = eval_csf(t, spec)
            if r_s != r_t:
                return DistinctnessCertificate(
                    n=n,
                    verdict=VERDICT_PROVED,
                    seed=seed,
                    trials_used=trial,
                    q=q,
                    c=c,
                    r_s=r_s,
                    r_t=r_t,
                    trial_index=trial,
                )
    return DistinctnessCertificate(
        n=n, verdict=VERDICT_INCONCLUSIVE, seed=seed, trials_used=trial
    )


def verify_certificate(s: Tree, t: Tree, cert: DistinctnessCertificate) -> bool:
    """Recompute both residues at the certificate's (q, c) witness.

    True iff the recomputed residues match the recorded ones and differ.
    """
    if not cert.proved or cert.q is None or cert.c is None:
        raise ValueError("certificate does not record a distinctness witness")
    if cert.n != s.n or cert.n != t.n:
        raise ValueError("certificate vertex count does not match the trees")
    spec = EvalSpec(cert.q, cert.c)
    r_s = eval_csf(s, spec)
    r_t = eval_csf(t, spec)
    return r_s == cert.r_s and r_t == cert.r_t and r_s != r_t
