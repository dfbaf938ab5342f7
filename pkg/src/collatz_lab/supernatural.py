"""Finitely described supernatural (Steinitz) numbers.

A supernatural number is a formal product of prime powers whose exponents
lie in ``{0, 1, 2, ...} | {inf}``. Only products with finitely many primes
are representable here, which covers ``p**inf`` and ``Omega(S)`` for finite
prime sets ``S`` but not ``Omega`` itself.

Addition does not exist natively. :func:`sn_oplus` transports vector
addition back through an injection into finitely supported sequences; the
default injection sends ``n`` to ``n*e1`` and every non-natural number to a
unit vector of its own, so the operation is total on naturals and undefined
elsewhere.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from sympy import factorint, isprime

from .errors import NotEven, PlusUndefined, PreconditionFailed
from .numeric import as_nat

INF = math.inf
Exponent = Union[int, float]  # positive int, or INF


def _check_exponent(e) -> Exponent:
    if e == INF:
        return INF
    if isinstance(e, bool) or not isinstance(e, int) or e < 0:
        raise ValueError(f"exponent must be a non-negative int or inf, got {e!r}")
    return e


@dataclass(frozen=True)
class Supernatural:
    """Immutable map prime -> exponent (zeros dropped, sorted by prime)."""

    factors: tuple[tuple[int, Exponent], ...] = ()

    def __post_init__(self):
        merged: dict[int, Exponent] = {}
        for p, e in self.factors:
            as_nat(p, "prime", 2)
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            e = _check_exponent(e)
            if e:
                merged[p] = merged.get(p, 0) + e
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @classmethod
    def from_map(cls, factors: Mapping[int, Exponent]) -> "Supernatural":
        return cls(tuple(factors.items()))

    @classmethod
    def from_int(cls, n: int) -> "Supernatural":
        as_nat(n, "n", 1)
        return cls(tuple(factorint(n).items()))

    @classmethod
    def omega_of(cls, primes: Iterable[int]) -> "Supernatural":
        """``prod p**inf`` over a finite set of primes."""
        return cls(tuple((p, INF) for p in primes))

    @classmethod
    def parse(cls, text: str) -> "Supernatural":
        """Parse products like ``"2^inf*5"``, ``"2^3*3"`` or ``"12"``."""
        text = text.replace(" ", "").replace("**", "^")
        if not text:
            raise ValueError("empty supernatural expression")
        result = ONE
        for part in text.split("*"):
            m = re.fullmatch(r"(\d+)(?:\^(\d+|inf|oo|∞))?", part)
            if not m:
                raise ValueError(f"cannot parse factor {part!r}")
            base = int(m.group(1))
            exp_text = m.group(2)
            if exp_text is None:
                result = sn_mul(result, cls.from_int(base))
            elif exp_text in ("inf", "oo", "∞"):
                if not isprime(base):
                    raise ValueError(f"infinite exponent needs a prime base, got {base}")
                result = sn_mul(result, cls(((base, INF),)))
            else:
                result = sn_mul(result, sn_pow(cls.from_int(base), int(exp_text)))
        return result

    def exponent(self, p: int) -> Exponent:
        return dict(self.factors).get(p, 0)

    @property
    def is_natural(self) -> bool:
        return all(e != INF for _, e in self.factors)

    def to_int(self) -> int:
        if not self.is_natural:
            raise ValueError(f"{self} is not a natural number")
        return math.prod(p**e for p, e in self.factors)

    @property
    def is_even(self) -> bool:
        return self.exponent(2) != 0

    def __str__(self) -> str:
        if self.is_natural:
            return str(self.to_int())
        return "*".join(
            str(p) if e == 1 else f"{p}^{'inf' if e == INF else e}" for p, e in self.factors
        )

    def __mul__(self, other: "Supernatural") -> "Supernatural":
        return sn_mul(self, other)

    def to_json(self) -> dict:
        return {"factors": [{"p": str(p), "e": "inf" if e == INF else str(e)} for p, e in self.factors]}

    @classmethod
    def from_json(cls, obj: dict) -> "Supernatural":
        return cls(tuple(
            (int(f["p"]), INF if f["e"] == "inf" else int(f["e"])) for f in obj["factors"]
        ))


ONE = Supernatural()
TWO_INF = Supernatural(((2, INF),))


def sn_mul(a: Supernatural, b: Supernatural) -> Supernatural:
    """Exponent-wise sum; ``inf`` absorbs."""
    return Supernatural(a.factors + b.factors)


def sn_pow(a: Supernatural, k: int) -> Supernatural:
    as_nat(k, "k")
    return Supernatural(tuple((p, e * k if e != INF else (INF if k else 0)) for p, e in a.factors))


def sn_divides(a: Supernatural, b: Supernatural) -> bool:
    """``a | b``: every exponent of ``a`` is at most that of ``b``."""
    return all(e <= b.exponent(p) for p, e in a.factors)


def sn_partition(n: Supernatural) -> tuple[frozenset[int], frozenset[int]]:
    """Primes with infinite exponent and primes with finite positive exponent."""
    inf = frozenset(p for p, e in n.factors if e == INF)
    fin = frozenset(p for p, e in n.factors if e != INF)
    return inf, fin


def sn_halve(n: Supernatural) -> Supernatural:
    e = n.exponent(2)
    if e == 0:
        raise NotEven(f"{n} is odd")
    if e == INF:
        return n
    rest = tuple((p, x) for p, x in n.factors if p != 2)
    return Supernatural(rest + ((2, e - 1),))


# finitely supported vectors and the default injection

VecDescriptor = dict  # coordinate (>= 1) -> Fraction, zeros omitted


def vec_add(u: VecDescriptor, v: VecDescriptor) -> VecDescriptor:
    out = dict(u)
    for k, x in v.items():
        out[k] = out.get(k, Fraction(0)) + x
        if out[k] == 0:
            del out[k]
    return out


class Injection:
    """One-to-one map from representable supernaturals to vectors.

    Must send each natural ``n`` to ``{1: n}``. ``decode`` returns ``None``
    for vectors outside the image.
    """

    def encode(self, x: Supernatural) -> VecDescriptor:
        raise NotImplementedError

    def decode(self, v: VecDescriptor) -> Optional[Supernatural]:
        raise NotImplementedError


def _code(x: Supernatural) -> int:
    # canonical text is unique per value and starts with a nonzero byte
    return int.from_bytes(str(x).encode("ascii"), "big")


def _uncode(k: int) -> Optional[Supernatural]:
    try:
        raw = k.to_bytes((k.bit_length() + 7) // 8, "big").decode("ascii")
        x = Supernatural.parse(raw)
    except (ValueError, UnicodeDecodeError):
        return None
    return x if str(x) == raw else None


class DefaultInjection(Injection):
    """Naturals ``n -> n*e1``; other values to a unit vector at ``code(x) + 2``."""

    def encode(self, x: Supernatural) -> VecDescriptor:
        if x.is_natural:
            return {1: Fraction(x.to_int())}
        return {_code(x) + 2: Fraction(1)}

    def decode(self, v: VecDescriptor) -> Optional[Supernatural]:
        if len(v) != 1:
            return None
        ((k, x),) = v.items()
        if k == 1:
            if x.denominator == 1 and x >= 1:
                return Supernatural.from_int(int(x))
            return None
        if x != 1 or k < 3:
            return None
        y = _uncode(k - 2)
        if y is None or y.is_natural:
            return None
        return y


DEFAULT_INJECTION = DefaultInjection()


def sn_oplus(a: Supernatural, b: Supernatural, injection: Injection = DEFAULT_INJECTION) -> Supernatural:
    """``s^-1(s(a) + s(b))`` when the sum lies in the image of ``s``."""
    total = vec_add(injection.encode(a), injection.encode(b))
    out = injection.decode(total)
    if out is None:
        raise PlusUndefined(f"{a} (+) {b} is not in the image of the injection")
    return out


THREE = Supernatural.from_int(3)


def sn_collatz_step(n: Supernatural, injection: Injection = DEFAULT_INJECTION) -> Supernatural:
    """Halve when even, else ``3n (+) 1``."""
    if n.is_even:
        return sn_halve(n)
    return sn_oplus(sn_mul(THREE, n), ONE, injection)


@dataclass(frozen=True)
class FixedPointVerdict:
    start: Supernatural
    steps: int
    stationary: bool
    differs_from_one: bool

    @property
    def never_reaches_one(self) -> bool:
        return self.stationary and self.differs_from_one

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "steps": self.steps,
            "stationary": self.stationary,
            "differs_from_one": self.differs_from_one,
            "never_reaches_one": self.never_reaches_one,
        }


def check_two_inf_fixed_point(
    n: Supernatural, steps: int = 100, injection: Injection = DEFAULT_INJECTION
) -> FixedPointVerdict:
    """Iterate from a multiple of ``2**inf`` and confirm the orbit is stationary."""
    if not sn_divides(TWO_INF, n):
        raise PreconditionFailed(f"2^inf does not divide {n}")
    as_nat(steps, "steps")
    cur, stationary = n, True
    for _ in range(steps):
        cur = sn_collatz_step(cur, injection)
        if cur != n:
            stationary = False
            break
    return FixedPointVerdict(n, steps, stationary, n != ONE)


@dataclass(frozen=True)
class RemarkReport:
    two_times_2inf_is_2inf: bool
    three_times_2inf_is_2inf: bool
    three_times_2inf_exponent_of_3: Exponent

    @property
    def no_repeated_sum_plus(self) -> bool:
        """True when the two facts rule out ``m (+) ... (+) m = k*m``."""
        return self.two_times_2inf_is_2inf and not self.three_times_2inf_is_2inf

    def to_json(self) -> dict:
        return {
            "2*2^inf == 2^inf": self.two_times_2inf_is_2inf,
            "3*2^inf == 2^inf": self.three_times_2inf_is_2inf,
            "exponent of 3 in 3*2^inf": str(self.three_times_2inf_exponent_of_3),
            "no plus operation makes n-fold sums equal multiplication": self.no_repeated_sum_plus,
        }


def check_plus_incompatibility() -> RemarkReport:
    """Check the two products behind the impossibility of a multiplicative-compatible plus.

    If ``m (+) m = 2m`` and ``m (+) m (+) m = 3m`` held for ``m = 2^inf``,
    then ``3 * 2^inf = (2 * 2^inf) (+) 2^inf = 2^inf (+) 2^inf = 2^inf``.
    """
    two = sn_mul(Supernatural.from_int(2), TWO_INF)
    three = sn_mul(THREE, TWO_INF)
    return RemarkReport(two == TWO_INF, three == TWO_INF, three.exponent(3))
