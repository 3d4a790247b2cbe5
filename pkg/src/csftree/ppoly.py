"""Sparse integer polynomials in the power-sum generators p_1, p_2, ...

A term is keyed by an integer partition, stored as a weakly decreasing
tuple of positive parts: the key (3, 1, 1) stands for the monomial
p_3 * p_1 * p_1, and the empty key () is the constant monomial 1.
Multiplying two monomials is multiset union of their parts.

Coefficients are plain Python ints (arbitrary precision); zero
coefficients are never stored, so the zero polynomial has no terms.
"""

from __future__ import annotations

from typing import Iterable, Mapping

Partition = tuple[int, ...]


def term_order_key(parts: Partition) -> tuple[int, ...]:
    """Canonical term order: compare partitions by their reversed part tuples.

    For weight 4 this lists (1,1,1,1), (2,1,1), (3,1), (2,2), (4) in that
    order, which is the order used by the text serialization.
    """
    return tuple(reversed(parts))


def _validate_partition(parts) -> Partition:
    parts = tuple(parts)
    prev = None
    for p in parts:
        if not isinstance(p, int) or p < 1:
            raise ValueError(f"partition part {p!r} must be a positive integer")
        if prev is not None and p > prev:
            raise ValueError(f"partition {parts!r} is not weakly decreasing")
        prev = p
    return parts


class PPoly:
    """Sparse polynomial over the power-sum generators, keyed by partition."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Partition, int] | Iterable[tuple[Partition, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Partition, int] = {}
        for parts, coeff in items:
            parts = _validate_partition(parts)
            if not isinstance(coeff, int):
                raise ValueError(f"coefficient {coeff!r} must be an int")
            if parts in clean:
                raise ValueError(f"duplicate partition key {parts!r}")
            if coeff != 0:
                clean[parts] = coeff
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Partition, int]) -> "PPoly":
        # Internal constructor: trusts keys normalized and coefficients nonzero.
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls) -> "PPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "PPoly":
        return cls._raw({(): 1})

    @classmethod
    def p(cls, i: int) -> "PPoly":
        """The generator p_i."""
        if i < 1:
            raise ValueError("generator index must be >= 1")
        return cls._raw({(i,): 1})

    @classmethod
    def const(cls, c: int) -> "PPoly":
        return cls._raw({(): c} if c else {})

    # -- ring structure ----------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = PPoly.const(other)
        if not isinstance(other, PPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # mutable term map

    def __add__(self, other) -> "PPoly":
        if isinstance(other, int):
            other = PPoly.const(other)
        if not isinstance(other, PPoly):
            return NotImplemented
        out = dict(self.terms)
        for parts, coeff in other.terms.items():
            s = out.get(parts, 0) + coeff
            if s:
                out[parts] = s
            else:
                out.pop(parts, None)
        return PPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "PPoly":
        return PPoly._raw({parts: -c for parts, c in self.terms.items()})

    def __sub__(self, other) -> "PPoly":
        return self + (-other if isinstance(other, PPoly) else -PPoly.const(other))

    def __rsub__(self, other) -> "PPoly":
        return PPoly.const(other) - self

    def __mul__(self, other) -> "PPoly":
        if isinstance(other, int):
            if other == 0:
                return PPoly.zero()
            return PPoly._raw({parts: c * other for parts, c in self.terms.items()})
        if not isinstance(other, PPoly):
            return NotImplemented
        out: dict[Partition, int] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                key = tuple(sorted(ka + kb, reverse=True))
                s = out.get(key, 0) + va * vb
                if s:
                    out[key] = s
                else:
                    del out[key]
        return PPoly._raw(out)

    __rmul__ = __mul__

    def scale_by_p(self, i: int) -> "PPoly":
        """Multiply by the single generator p_i (inserts i into every key)."""
        if i < 1:
            raise ValueError("generator index must be >= 1")
        out: dict[Partition, int] = {}
        for parts, c in self.terms.items():
            out[tuple(sorted(parts + (i,), reverse=True))] = c
        return PPoly._raw(out)

    # -- evaluation ----------------------------------------------------------

    def eval_mod(self, spec) -> int:
        """Substitute spec.c[i-1] for p_i and reduce mod spec.q.

        Raises ValueError when a part exceeds the length of the residue tuple.
        """
        q = spec.q
        c = spec.c
        total = 0
        for parts, coeff in self.terms.items():
            v = coeff % q
            for part in parts:
                if part > len(c):
                    raise ValueError(
                        f"generator p_{part} has no residue in a tuple of length {len(c)}"
                    )
                v = (v * c[part - 1]) % q
            total = (total + v) % q
        return total

    # -- serialization ---------------------------------------------------------

    def to_text(self) -> str:
        """One term per line, "COEFF<TAB>part1,part2,...", in canonical order."""
        if not self.terms:
            return "0"
        lines = []
        for parts in sorted(self.terms, key=term_order_key):
            lines.append(f"{self.terms[parts]}\t{','.join(map(str, parts))}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "PPoly":
        body = text.rstrip("\n")
        if body == "0":
            return cls.zero()
        terms: dict[Partition, int] = {}
        for idx, line in enumerate(body.split("\n"), start=1):
            coeff_s, sep, parts_s = line.partition("\t")
            if not sep:
                raise ValueError(f"term line {idx}: missing tab separator in {line!r}")
            try:
                coeff = int(coeff_s)
                parts = tuple(int(x) for x in parts_s.split(",")) if parts_s else ()
            except ValueError:
                raise ValueError(f"term line {idx}: malformed term {line!r}") from None
            parts = _validate_partition(parts)
            if parts in terms:
                raise ValueError(f"term line {idx}: duplicate partition {parts!r}")
            if coeff:
                terms[parts] = coeff
        return cls._raw(terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "PPoly(0)"
        bits = []
        for parts in sorted(self.terms, key=term_order_key):
            bits.append(f"{self.terms[parts]}*p{list(parts)}")
        return f"PPoly({' + '.join(bits)})"
