"""Arithmetic progressions, their finite unions, and natural density.

An :class:`ArithClass` is the exact set ``{offset + modulus*t : t >= 0}``.
A :class:`ClassUnion` is a finite union of residue classes modulo a common
modulus. Unions are stored in canonical form: residues reduced below the
modulus and the modulus shrunk to the minimal period of the set. Two unions
compare equal exactly when the sets they denote differ by at most finitely
many elements, which is the equivalence natural density cannot see.

Counting windows follow ``[1, m]``; offsets may be zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from sympy import primefactors

from .errors import NotConvergent
from .numeric import as_nat


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> Optional[tuple[int, int]]:
    """Solve ``x = r1 (mod m1)``, ``x = r2 (mod m2)``.

    Returns ``(x0, lcm)`` with ``0 <= x0 < lcm``, or ``None`` when the
    congruences are incompatible.
    """
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    if m1 == g:
        # m1 | m2: the second congruence already pins x
        return r2 % lcm, lcm
    k = ((r2 - r1) // g) * pow(m1 // g, -1, m2 // g) % (m2 // g)
    return (r1 + m1 * k) % lcm, lcm


@dataclass(frozen=True, order=True)
class ArithClass:
    """The progression ``offset + modulus * N0``."""

    offset: int
    modulus: int

    def __post_init__(self):
        as_nat(self.offset, "offset")
        as_nat(self.modulus, "modulus", 1)

    def __contains__(self, k: int) -> bool:
        return k >= self.offset and (k - self.offset) % self.modulus == 0

    def __str__(self) -> str:
        head = "N" if self.modulus == 1 else f"{self.modulus}N"
        return head if self.offset == 0 else f"{head}+{self.offset}"

    @property
    def residue(self) -> int:
        return self.offset % self.modulus

    def density(self) -> Fraction:
        return Fraction(1, self.modulus)

    def reduced(self) -> "ArithClass":
        """The residue class containing this progression (finitely larger)."""
        return ArithClass(self.residue, self.modulus)

    def shift(self, k: int) -> "ArithClass":
        """Translate by ``k``; elements that would become negative are dropped."""
        start = self.offset + k
        if start < 0:
            start += self.modulus * (-(start // self.modulus))
        return ArithClass(start, self.modulus)

    def intersect(self, other: "ArithClass") -> Optional["ArithClass"]:
        """Exact intersection via CRT, or ``None`` when empty."""
        sol = crt_pair(self.offset, self.modulus, other.offset, other.modulus)
        if sol is None:
            return None
        x0, lcm = sol
        floor = max(self.offset, other.offset)
        if x0 < floor:
            x0 += lcm * (-((x0 - floor) // lcm))
        return ArithClass(x0, lcm)


@dataclass(frozen=True)
class ClassUnion:
    """A finite union of residue classes with a common modulus, canonical form."""

    modulus: int
    residues: tuple[int, ...] = field(default=())

    def __post_init__(self):
        as_nat(self.modulus, "modulus", 1)
        res = tuple(sorted({r % self.modulus for r in self.residues}))
        mod, res = _minimal_period(self.modulus, res)
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "residues", res)

    # construction

    @classmethod
    def of(cls, *classes: ArithClass | tuple[int, int]) -> "ClassUnion":
        """Union of the given progressions ``(offset, modulus)`` (overlaps allowed)."""
        items = [c if isinstance(c, ArithClass) else ArithClass(*c) for c in classes]
        if not items:
            return cls.empty()
        mod = 1
        for c in items:
            mod = _lcm(mod, c.modulus)
        res = set()
        for c in items:
            res.update(range(c.residue, mod, c.modulus))
        return cls(mod, tuple(res))

    @classmethod
    def residue_class(cls, residue: int, modulus: int) -> "ClassUnion":
        return cls(modulus, (residue,))

    @classmethod
    def empty(cls) -> "ClassUnion":
        return cls(1, ())

    @classmethod
    def everything(cls) -> "ClassUnion":
        return cls(1, (0,))

    # views

    @property
    def common_modulus(self) -> int:
        return self.modulus

    @property
    def classes(self) -> list[ArithClass]:
        return [ArithClass(r, self.modulus) for r in self.residues]

    def __len__(self) -> int:
        return len(self.residues)

    def __bool__(self) -> bool:
        return bool(self.residues)

    def __contains__(self, k: int) -> bool:
        """Residue membership (the canonical form forgets finite boundary sets)."""
        return k % self.modulus in self._residue_set

    @property
    def _residue_set(self) -> frozenset[int]:
        try:
            return self.__dict__["_rs"]
        except KeyError:
            rs = frozenset(self.residues)
            object.__setattr__(self, "_rs", rs)
            return rs

    def __str__(self) -> str:
        if not self.residues:
            return "{}"
        return " u ".join(str(c) for c in self.classes)

    def lifted(self, modulus: int) -> set[int]:
        """Residues of this set modulo a multiple of the canonical modulus."""
        if modulus % self.modulus:
            raise ValueError(f"{modulus} is not a multiple of {self.modulus}")
        return {r + j * self.modulus for r in self.residues for j in range(modulus // self.modulus)}

    # set algebra

    def _binary(self, other: "ClassUnion", op: Callable[[set, set], set]) -> "ClassUnion":
        mod = _lcm(self.modulus, other.modulus)
        return ClassUnion(mod, tuple(op(self.lifted(mod), other.lifted(mod))))

    def intersect(self, other: "ClassUnion") -> "ClassUnion":
        return self._binary(other, set.__and__)

    def union(self, other: "ClassUnion") -> "ClassUnion":
        return self._binary(other, set.__or__)

    def difference(self, other: "ClassUnion") -> "ClassUnion":
        return self._binary(other, set.__sub__)

    def complement(self) -> "ClassUnion":
        return ClassUnion.everything().difference(self)

    def isdisjoint(self, other: "ClassUnion") -> bool:
        return not self.intersect(other)

    __and__ = intersect
    __or__ = union
    __sub__ = difference

    def shift(self, k: int) -> "ClassUnion":
        return ClassUnion(self.modulus, tuple(r + k for r in self.residues))

    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.modulus)

    # wire format

    def to_json(self) -> list[dict]:
        return [{"offset": str(c.offset), "modulus": str(c.modulus)} for c in self.classes]

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> "ClassUnion":
        return cls.of(*(ArithClass(int(d["offset"]), int(d["modulus"])) for d in items))


def _minimal_period(modulus: int, residues: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    if not residues:
        return 1, ()
    if len(residues) == modulus:
        return 1, (0,)
    res = set(residues)
    changed = True
    while changed and modulus > 1:
        changed = False
        for p in primefactors(modulus):
            sub = modulus // p
            # invariant under +sub means the set is periodic with period sub
            if len(res) % p == 0 and all((r + sub) % modulus in res for r in res):
                res = {r for r in res if r < sub}
                modulus = sub
                changed = True
                break
    return modulus, tuple(sorted(res))


def density(u: ClassUnion) -> Fraction:
    """Natural density, which equals any shift-invariant probability of ``u``."""
    return u.density()


def intersect(a: ClassUnion, b: ClassUnion) -> ClassUnion:
    return a.intersect(b)


def shift(u: ClassUnion, k: int) -> ClassUnion:
    return u.shift(k)


def count_up_to(u: ClassUnion, m: int) -> int:
    """``#([1, m] & u)`` by the counting formula, no enumeration."""
    as_nat(m, "m")
    total = 0
    for r in u.residues:
        total += (m - r) // u.modulus + (0 if r == 0 else 1)
    return total


def empirical_density(u: ClassUnion, m: int) -> Fraction:
    """``#([1, m] & u) / m``."""
    as_nat(m, "m", 1)
    return Fraction(count_up_to(u, m), m)


def eventually_periodic_density(preperiod: Sequence[int], period: Sequence[int]) -> Fraction:
    """Density of the index set of an eventually periodic 0/1 sequence.

    The preperiod only affects finitely many indices and is ignored.
    """
    if not period:
        raise ValueError("period must be non-empty")
    return Fraction(sum(1 for b in period if b), len(period))


# Convergent-sequence descriptors. The limit is always declared, never guessed.


@dataclass(frozen=True)
class ConvergentSequence:
    """Descriptor for a sequence with a declared exact limit.

    ``tag`` records why the limit holds (a closed-form family or eventual
    constancy); ``term`` optionally evaluates the sequence.
    """

    limit: Optional[Fraction]
    tag: str
    term: Optional[Callable[[int], Fraction]] = None

    def __call__(self, n: int) -> Fraction:
        if self.term is None:
            raise ValueError(f"descriptor {self.tag!r} has no term evaluator")
        return self.term(n)


def geometric_tail(limit: Fraction, coefficient: Fraction, ratio: Fraction) -> ConvergentSequence:
    """``f(n) = limit + coefficient * ratio**n``; converges only for ``|ratio| < 1``."""
    limit, coefficient, ratio = Fraction(limit), Fraction(coefficient), Fraction(ratio)
    term = lambda n: limit + coefficient * ratio**n  # noqa: E731
    if abs(ratio) >= 1 and coefficient != 0:
        return ConvergentSequence(None, f"geometric ratio {ratio}", term)
    return ConvergentSequence(limit, "geometric-tail", term)


def eventually_constant(value: Fraction, prefix: Sequence[Fraction] = ()) -> ConvergentSequence:
    value = Fraction(value)
    prefix = tuple(Fraction(x) for x in prefix)
    term = lambda n: prefix[n] if n < len(prefix) else value  # noqa: E731
    return ConvergentSequence(value, "eventually-constant", term)


def integral_of_convergent(f: ConvergentSequence) -> Fraction:
    """Integral against a shift-invariant probability: the limit of ``f``.

    Finite initial segments are null for such measures, so only the tail
    matters and the integral is the declared limit.
    """
    if f.limit is None:
        raise NotConvergent(f"descriptor {f.tag!r} declares no limit")
    return f.limit


def partition_pieces(u: ClassUnion) -> Iterable[ClassUnion]:
    """Split ``u`` into its single-residue pieces (pairwise disjoint)."""
    for r in u.residues:
        yield ClassUnion.residue_class(r, u.modulus)
