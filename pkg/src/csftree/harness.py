"""Exhaustive fingerprint refinement over all free trees of a given order.

The pipeline streams every isomorphism class of n-vertex trees, computes
a truncated fingerprint for each under a round-specific (q, C), and
buckets trees by their residue chains.  Classes that still hold more
than one tree after a round get refined again with a fresh (q, C);
the run stops when every class is a singleton (certifying pairwise
distinct truncated CSFs, hence pairwise distinct CSFs) or when the round
budget runs out.

Round specs derive deterministically from (n, k, seed): round i uses the
((i-1) mod n)-th prime >= n^2 and a residue tuple drawn from a generator
seeded with the i-th output of the master seed's stream, zero beyond
index k.  Progress persists to a checksummed table file, so interrupted
runs resume to byte-identical reports.
"""

from __future__ import annotations

import os
import zlib
from dataclasses import dataclass, field

from .distinguish import gen_primes
from .exact import compute_csf, truncate_csf
from .fingerprint import EvalSpec, eval_csf_truncated
from .rng import SplitMix64
from .trees import LevelSequence, Tree, enumerate_free_trees, tree_from_level_sequence

STATUS_SINGLETONS = "all-singletons"
STATUS_UNRESOLVED = "unresolved"

KIND_GENUINE = "genuine-equality"
KIND_COINCIDENCE = "fingerprint-coincidence"
KIND_UNVERIFIABLE = "unverifiable"

# Largest n for which the audit is willing to build exact truncated CSFs.
AUDIT_EXACT_LIMIT = 30

_TABLE_VERSION = "csfv1"
_CHUNK = 512


class CapExceededError(RuntimeError):
    """The enumeration produced more trees than the configured cap."""


class TableFormatError(ValueError):
    """A fingerprint table file is malformed, truncated, or corrupted."""


@dataclass(frozen=True)
class RoundSpec:
    """One refinement round: a 1-based index and its evaluation spec."""

    index: int
    spec: EvalSpec


@dataclass
class FingerprintTable:
    """Residue chains per enumerated tree id, plus the specs that produced them.

    Chains may have different lengths: a tree stops collecting residues once
    its class becomes a singleton.  Level sequences are not stored; ids are
    positions in the deterministic enumeration order and trees are recovered
    by re-enumeration.
    """

    n: int
    k: int
    seed: int
    rounds: list[RoundSpec] = field(default_factory=list)
    chains: dict[int, list[int]] = field(default_factory=dict)


@dataclass(frozen=True)
class RefinementReport:
    """Outcome of a run: per-round class-size histograms and the final status."""

    n: int
    k: int
    seed: int
    tree_count: int
    rounds_used: int
    round_specs: tuple[RoundSpec, ...]
    # Per round: ((class_size, how_many_classes), ...) with sizes ascending.
    classes_by_round: tuple[tuple[tuple[int, int], ...], ...]
    status: str
    unresolved: tuple[tuple[int, ...], ...]

    def to_text(self) -> str:
        """Deterministic rendering: a human summary plus a key=value block."""
        human = [
            f"Fingerprint refinement of all free trees on {self.n} vertices "
            f"(truncation k={self.k}, seed={self.seed})",
            f"{self.tree_count} trees enumerated",
        ]
        for rspec, hist in zip(self.round_specs, self.classes_by_round):
            classes = sum(cnt for _, cnt in hist)
            colliding = sum(cnt for size, cnt in hist if size > 1)
            human.append(
                f"round {rspec.index}: q={rspec.spec.q} -> {classes} classes, "
                f"{colliding} with collisions"
            )
        if self.status == STATUS_SINGLETONS:
            human.append(
                f"all classes are singletons after {self.rounds_used} round(s): "
                "pairwise distinct truncated CSFs"
            )
        else:
            human.append(
                f"unresolved after {self.rounds_used} round(s): "
                f"{len(self.unresolved)} colliding class(es)"
            )

        block = [
            f"status={self.status}",
            f"n={self.n}",
            f"k={self.k}",
            f"seed={self.seed}",
            f"trees={self.tree_count}",
            f"rounds_used={self.rounds_used}",
        ]
        for rspec, hist in zip(self.round_specs, self.classes_by_round):
            i = rspec.index
            block.append(f"round.{i}.q={rspec.spec.q}")
            block.append(f"round.{i}.c={','.join(map(str, rspec.spec.c))}")
            block.append(f"round.{i}.classes={sum(cnt for _, cnt in hist)}")
            block.append(
                f"round.{i}.hist={','.join(f'{size}:{cnt}' for size, cnt in hist)}"
            )
        if self.status == STATUS_UNRESOLVED:
            block.append(
                "unresolved="
                + ";".join("+".join(map(str, cls)) for cls in self.unresolved)
            )
        return "\n".join(human) + "\n\n" + "\n".join(block) + "\n"


@dataclass(frozen=True)
class AuditFinding:
    """Classification of one unresolved class by the exact truncated CSFs."""

    ids: tuple[int, ...]
    kind: str


def derive_round_spec(
    n: int, k: int, seed: int, index: int, primes: list[int] | None = None
) -> RoundSpec:
    """Deterministic spec for round `index` (1-based) of a (n, k, seed) run.

    Primes cycle with period n; the residue tuple comes from a sub-generator
    seeded with the index-th output of the master stream, so any round can be
    re-derived in isolation (what makes resumption exact).
    """
    if index < 1:
        raise ValueError("round index must be >= 1")
    if primes is None:
        primes = gen_primes(n, n)
    q = primes[(index - 1) % len(primes)]
    master = SplitMix64(seed)
    sub_seed = 0
    for _ in range(index):
        sub_seed = master.next_u64()
    rng = SplitMix64(sub_seed)
    c = [0] * n
    for j in range(min(k, n)):
        c[j] = rng.below(q)
    return RoundSpec(index, EvalSpec(q, tuple(c), trunc=k))


# ---------------------------------------------------------------------------
# Fingerprinting workers (batched for the optional process pool).
# ---------------------------------------------------------------------------


def _fingerprint_batch(args: tuple[int, tuple[int, ...], int, list[tuple[int, ...]]]) -> list[int]:
    q, c, k, seqs = args
    spec = EvalSpec(q, c, trunc=k)
    return [
        eval_csf_truncated(tree_from_level_sequence(LevelSequence(seq)), spec)
        for seq in seqs
    ]


def _residues_all(
    n: int, spec: EvalSpec, threads: int, cap: int | None
) -> list[int]:
    """Residues for every enumerated tree, indexed by enumeration id."""

    def checked(stream):
        for i, ls in enumerate(stream):
            if cap is not None and i >= cap:
                raise CapExceededError(
                    f"more than {cap} trees on {n} vertices; raise the cap to proceed"
                )
            yield ls

    if threads <= 1:
        return [
            eval_csf_truncated(tree_from_level_sequence(ls), spec)
            for ls in checked(enumerate_free_trees(n))
        ]

    from concurrent.futures import ProcessPoolExecutor

    def chunked_args():
        chunk: list[tuple[int, ...]] = []
        for ls in checked(enumerate_free_trees(n)):
            chunk.append(ls.seq)
            if len(chunk) >= _CHUNK:
                yield (spec.q, spec.c, spec.trunc, chunk)
                chunk = []
        if chunk:
            yield (spec.q, spec.c, spec.trunc, chunk)

    residues: list[int] = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for batch in pool.map(_fingerprint_batch, chunked_args()):
            residues.extend(batch)
    return residues


def _residues_for_ids(
    n: int, spec: EvalSpec, ids: set[int], threads: int
) -> dict[int, int]:
    """Residues for the requested enumeration ids (one streaming pass)."""
    if not ids:
        return {}
    needed = len(ids)
    if threads <= 1:
        out: dict[int, int] = {}
        for i, ls in enumerate(enumerate_free_trees(n)):
            if i in ids:
                out[i] = eval_csf_truncated(tree_from_level_sequence(ls), spec)
                if len(out) == needed:
                    break
        if len(out) != needed:
            raise ValueError(f"unknown tree ids for n={n}: {sorted(ids - out.keys())}")
        return out

    from concurrent.futures import ProcessPoolExecutor

    id_chunks: list[list[int]] = []

    def chunked_args():
        chunk_ids: list[int] = []
        chunk: list[tuple[int, ...]] = []
        found = 0
        for i, ls in enumerate(enumerate_free_trees(n)):
            if i not in ids:
                continue
            chunk_ids.append(i)
            chunk.append(ls.seq)
            found += 1
            if len(chunk) >= _CHUNK:
                id_chunks.append(chunk_ids)
                yield (spec.q, spec.c, spec.trunc, chunk)
                chunk_ids, chunk = [], []
            if found == needed:
                break
        if chunk:
            id_chunks.append(chunk_ids)
            yield (spec.q, spec.c, spec.trunc, chunk)

    out = {}
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for chunk_ids, batch in zip(id_chunks, pool.map(_fingerprint_batch, chunked_args())):
            out.update(zip(chunk_ids, batch))
    if len(out) != needed:
        raise ValueError(f"unknown tree ids for n={n}: {sorted(ids - out.keys())}")
    return out


# ---------------------------------------------------------------------------
# Refinement.
# ---------------------------------------------------------------------------


def _split_by_residue(cls: list[int], residues: dict[int, int]) -> list[list[int]]:
    sub: dict[int, list[int]] = {}
    for i in cls:
        sub.setdefault(residues[i], []).append(i)
    return sorted((sorted(v) for v in sub.values()), key=lambda c: c[0])


def refine_class(
    cls: list[int],
    table: FingerprintTable,
    rspec: RoundSpec,
    trees: dict[int, Tree] | None = None,
) -> list[list[int]]:
    """Split one colliding class by a fresh fingerprint, recording the residues.

    The class must have at least two members, all present in the table.  Trees
    are recovered by re-enumeration unless an explicit id -> Tree mapping is
    given (test fixtures).  Round bookkeeping (table.rounds) is the caller's.
    """
    if len(cls) < 2:
        raise ValueError("refine_class requires a class of size >= 2")
    unknown = [i for i in cls if i not in table.chains]
    if unknown:
        raise ValueError(f"unknown tree ids: {unknown}")
    if trees is not None:
        residues = {i: eval_csf_truncated(trees[i], rspec.spec) for i in cls}
    else:
        residues = _residues_for_ids(table.n, rspec.spec, set(cls), threads=1)
    for i in cls:
        table.chains[i].append(residues[i])
    return _split_by_residue(list(cls), residues)


def _histogram(singletons: int, pending: list[list[int]]) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    if singletons:
        counts[1] = singletons
    for cls in pending:
        counts[len(cls)] = counts.get(len(cls), 0) + 1
    return tuple(sorted(counts.items()))


def _histograms_from_chains(
    chains: dict[int, list[int]], rounds_done: int
) -> list[tuple[tuple[int, int], ...]]:
    hists = []
    for r in range(1, rounds_done + 1):
        groups: dict[tuple[int, ...], int] = {}
        for ch in chains.values():
            key = tuple(ch[:r])
            groups[key] = groups.get(key, 0) + 1
        counts: dict[int, int] = {}
        for size in groups.values():
            counts[size] = counts.get(size, 0) + 1
        hists.append(tuple(sorted(counts.items())))
    return hists


def run_verification(
    n: int,
    k: int = 3,
    seed: int = 0,
    max_rounds: int = 64,
    *,
    table_path: str | os.PathLike | None = None,
    resume: bool = False,
    threads: int = 1,
    tree_cap: int | None = None,
) -> RefinementReport:
    """Refine all free trees on n vertices until every class is a singleton.

    Returns a deterministic report; identical (n, k, seed) always reproduce
    it byte for byte, including across interrupt/resume with a table file.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (1 <= k <= n):
        raise ValueError(f"truncation level must satisfy 1 <= k <= n, got k={k}")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    if threads < 1:
        raise ValueError("threads must be >= 1")

    # A lone isomorphism class needs no fingerprinting at all.
    stream = enumerate_free_trees(n)
    next(stream)
    if next(stream, None) is None:
        table = FingerprintTable(n, k, seed, rounds=[], chains={0: []})
        if table_path is not None and not resume:
            save_table(table, table_path)
        return RefinementReport(
            n=n,
            k=k,
            seed=seed,
            tree_count=1,
            rounds_used=0,
            round_specs=(),
            classes_by_round=(),
            status=STATUS_SINGLETONS,
            unresolved=(),
        )

    primes = gen_primes(n, n)

    if resume:
        if table_path is None:
            raise ValueError("resume requires a table path")
        table = load_table(table_path)
        if (table.n, table.k, table.seed) != (n, k, seed):
            raise TableFormatError(
                f"table header (n={table.n}, k={table.k}, seed={table.seed}) does not "
                f"match the requested run (n={n}, k={k}, seed={seed})"
            )
        for stored in table.rounds:
            derived = derive_round_spec(n, k, seed, stored.index, primes)
            if stored != derived:
                raise TableFormatError(
                    f"stored round {stored.index} is inconsistent with seed {seed}"
                )
        count = len(table.chains)
        rounds_done = len(table.rounds)
        hists = _histograms_from_chains(table.chains, rounds_done)
        groups: dict[tuple[int, ...], list[int]] = {}
        for i in sorted(table.chains):
            groups.setdefault(tuple(table.chains[i]), []).append(i)
        pending = sorted((v for v in groups.values() if len(v) > 1), key=lambda c: c[0])
        singletons = count - sum(len(c) for c in pending)
    else:
        table = FingerprintTable(n, k, seed)
        rspec = derive_round_spec(n, k, seed, 1, primes)
        table.rounds.append(rspec)
        residues = _residues_all(n, rspec.spec, threads, tree_cap)
        count = len(residues)
        buckets: dict[int, list[int]] = {}
        for i, r in enumerate(residues):
            table.chains[i] = [r]
            buckets.setdefault(r, []).append(i)
        classes = sorted(buckets.values(), key=lambda c: c[0])
        pending = [c for c in classes if len(c) > 1]
        singletons = count - sum(len(c) for c in pending)
        hists = [_histogram(singletons, pending)]
        rounds_done = 1
        if table_path is not None:
            save_table(table, table_path)

    while pending and rounds_done < max_rounds:
        rounds_done += 1
        rspec = derive_round_spec(n, k, seed, rounds_done, primes)
        table.rounds.append(rspec)
        needed = {i for cls in pending for i in cls}
        residues_by_id = _residues_for_ids(n, rspec.spec, needed, threads)
        new_pending: list[list[int]] = []
        for cls in pending:
            for i in cls:
                table.chains[i].append(residues_by_id[i])
            for sub in _split_by_residue(cls, residues_by_id):
                if len(sub) > 1:
                    new_pending.append(sub)
                else:
                    singletons += 1
        pending = new_pending
        hists.append(_histogram(singletons, pending))
        if table_path is not None:
            save_table(table, table_path)

    return RefinementReport(
        n=n,
        k=k,
        seed=seed,
        tree_count=count,
        rounds_used=rounds_done,
        round_specs=tuple(table.rounds),
        classes_by_round=tuple(hists),
        status=STATUS_SINGLETONS if not pending else STATUS_UNRESOLVED,
        unresolved=tuple(tuple(cls) for cls in pending),
    )


# ---------------------------------------------------------------------------
# Persistence.
# ---------------------------------------------------------------------------


def _table_body(table: FingerprintTable) -> str:
    lines = [
        _TABLE_VERSION,
        f"n={table.n}",
        f"k={table.k}",
        f"seed={table.seed}",
    ]
    for rspec in table.rounds:
        c = ",".join(map(str, rspec.spec.c))
        lines.append(f"round={rspec.index} q={rspec.spec.q} C={c}")
    for i in sorted(table.chains):
        chain = table.chains[i]
        lines.append(f"{i} {' '.join(map(str, chain))}".rstrip())
    return "\n".join(lines) + "\n"


def save_table(table: FingerprintTable, path: str | os.PathLike) -> None:
    """Write the table with a trailing crc line; the write is atomic."""
    body = _table_body(table)
    crc = zlib.crc32(body.encode("ascii"))
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "w", encoding="ascii", newline="") as fh:
        fh.write(body)
        fh.write(f"crc={crc}\n")
    os.replace(tmp, path)


def _parse_header_line(lines: list[str], idx: int, key: str) -> int:
    if idx >= len(lines) or not lines[idx].startswith(f"{key}="):
        raise TableFormatError(f"line {idx + 1}: expected '{key}=...'")
    try:
        return int(lines[idx][len(key) + 1 :])
    except ValueError:
        raise TableFormatError(f"line {idx + 1}: malformed {key} value") from None


def load_table(path: str | os.PathLike) -> FingerprintTable:
    """Read and validate a table file (version, structure, checksum)."""
    with open(path, "r", encoding="ascii", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != _TABLE_VERSION:
        raise TableFormatError(
            f"unsupported table version {lines[0]!r}" if lines else "empty table file"
        )
    if not lines[-1].startswith("crc="):
        raise TableFormatError("truncated table file: missing crc line")
    body = "\n".join(lines[:-1]) + "\n"
    try:
        stored_crc = int(lines[-1][4:])
    except ValueError:
        raise TableFormatError("malformed crc line") from None
    actual_crc = zlib.crc32(body.encode("ascii"))
    if stored_crc != actual_crc:
        raise TableFormatError(
            f"checksum failure: stored crc={stored_crc}, computed crc={actual_crc}"
        )

    n = _parse_header_line(lines, 1, "n")
    k = _parse_header_line(lines, 2, "k")
    seed = _parse_header_line(lines, 3, "seed")
    table = FingerprintTable(n, k, seed)

    idx = 4
    while idx < len(lines) - 1 and lines[idx].startswith("round="):
        fields = lines[idx].split(" ")
        if len(fields) != 3 or not fields[1].startswith("q=") or not fields[2].startswith("C="):
            raise TableFormatError(f"line {idx + 1}: malformed round line")
        try:
            rindex = int(fields[0][6:])
            q = int(fields[1][2:])
            c = tuple(int(x) for x in fields[2][2:].split(","))
        except ValueError:
            raise TableFormatError(f"line {idx + 1}: malformed round line") from None
        if rindex != len(table.rounds) + 1:
            raise TableFormatError(f"line {idx + 1}: round indices must be sequential")
        if len(c) != n:
            raise TableFormatError(f"line {idx + 1}: round tuple has {len(c)} residues, expected {n}")
        try:
            spec = EvalSpec(q, c, trunc=k)
        except ValueError as err:
            raise TableFormatError(f"line {idx + 1}: {err}") from None
        table.rounds.append(RoundSpec(rindex, spec))
        idx += 1

    expected_id = 0
    for line_no in range(idx, len(lines) - 1):
        fields = lines[line_no].split(" ")
        try:
            tree_id = int(fields[0])
            chain = [int(x) for x in fields[1:]]
        except ValueError:
            raise TableFormatError(f"line {line_no + 1}: malformed tree line") from None
        if tree_id != expected_id:
            raise TableFormatError(
                f"line {line_no + 1}: tree ids must be contiguous from 0, got {tree_id}"
            )
        if len(chain) > len(table.rounds):
            raise TableFormatError(
                f"line {line_no + 1}: chain longer than the number of rounds"
            )
        for r, residue in enumerate(chain):
            if not (0 <= residue < table.rounds[r].spec.q):
                raise TableFormatError(
                    f"line {line_no + 1}: residue {residue} out of range for round {r + 1}"
                )
        table.chains[tree_id] = chain
        expected_id += 1
    if expected_id == 0:
        raise TableFormatError("table contains no tree lines")
    return table


# ---------------------------------------------------------------------------
# Collision audit.
# ---------------------------------------------------------------------------


def collision_audit(
    report: RefinementReport,
    table: FingerprintTable,
    trees: dict[int, Tree] | None = None,
) -> list[AuditFinding]:
    """Classify surviving collisions with the exact truncated CSFs.

    A class whose members share one truncated CSF is a genuine equality; one
    whose members differ collided by fingerprint coincidence (further rounds
    would split it).  Classes too large to check exactly are reported as
    unverifiable and left for external study.
    """
    if report.status != STATUS_UNRESOLVED or not report.unresolved:
        return []
    if trees is None:
        needed = {i for cls in report.unresolved for i in cls}
        trees = {}
        for i, ls in enumerate(enumerate_free_trees(table.n)):
            if i in needed:
                trees[i] = tree_from_level_sequence(ls)
                if len(trees) == len(needed):
                    break
        if len(trees) != len(needed):
            raise ValueError(f"unknown tree ids for n={table.n}")
    findings = []
    for cls in report.unresolved:
        if table.n > AUDIT_EXACT_LIMIT:
            findings.append(AuditFinding(cls, KIND_UNVERIFIABLE))
            continue
        exact = [truncate_csf(compute_csf(trees[i]), table.k) for i in cls]
        genuine = all(x == exact[0] for x in exact[1:])
        findings.append(AuditFinding(cls, KIND_GENUINE if genuine else KIND_COINCIDENCE))
    return findings
