"""Two-state homogeneous Markov chains over exact rationals.

Includes the closed form for matrix powers of a 2x2 stochastic matrix, its
limit, and the two concrete chains for the Collatz map: parity (state 0 =
even) and the mod-3 lumping (state 0 = "= 1 mod 3", state 1 = otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import flow
from .errors import DerivationMismatch, InvalidChain, NoMixingLimit
from .numeric import as_nat, rat_from_json, rat_to_json
from .residue import ClassUnion

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

IDENTITY: Matrix2 = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def _check_prob(x: Fraction, name: str) -> None:
    if not 0 <= x <= 1:
        raise InvalidChain(f"{name}={x} is outside [0, 1]")


@dataclass(frozen=True)
class DistVec2:
    m0: Fraction
    m1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m0", Fraction(self.m0))
        object.__setattr__(self, "m1", Fraction(self.m1))
        _check_prob(self.m0, "m0")
        _check_prob(self.m1, "m1")
        if self.m0 + self.m1 != 1:
            raise InvalidChain(f"distribution ({self.m0}, {self.m1}) does not sum to 1")

    def __iter__(self):
        return iter((self.m0, self.m1))

    def to_json(self) -> dict:
        return {"m0": rat_to_json(self.m0), "m1": rat_to_json(self.m1)}

    @classmethod
    def from_json(cls, obj: dict) -> "DistVec2":
        return cls(rat_from_json(obj["m0"]), rat_from_json(obj["m1"]))


@dataclass(frozen=True)
class Chain2:
    """Row-stochastic 2x2 transition matrix plus initial distribution."""

    p00: Fraction
    p01: Fraction
    p10: Fraction
    p11: Fraction
    init0: Fraction
    init1: Fraction

    def __post_init__(self):
        for name in ("p00", "p01", "p10", "p11", "init0", "init1"):
            value = Fraction(getattr(self, name))
            _check_prob(value, name)
            object.__setattr__(self, name, value)
        if self.p00 + self.p01 != 1 or self.p10 + self.p11 != 1:
            raise InvalidChain("rows must sum to 1")
        if self.init0 + self.init1 != 1:
            raise InvalidChain("initial distribution must sum to 1")

    @classmethod
    def from_rows(cls, row0, row1, init) -> "Chain2":
        return cls(row0[0], row0[1], row1[0], row1[1], init[0], init[1])

    @property
    def matrix(self) -> Matrix2:
        return ((self.p00, self.p01), (self.p10, self.p11))

    @property
    def init(self) -> DistVec2:
        return DistVec2(self.init0, self.init1)

    @property
    def eigen_ratio(self) -> Fraction:
        """The non-unit eigenvalue ``p00 + p11 - 1``."""
        return self.p00 + self.p11 - 1

    def to_json(self) -> dict:
        return {
            "matrix": [[rat_to_json(x) for x in row] for row in self.matrix],
            "init": [rat_to_json(self.init0), rat_to_json(self.init1)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Chain2":
        (a, b), (c, d) = ([rat_from_json(x) for x in row] for row in obj["matrix"])
        i0, i1 = (rat_from_json(x) for x in obj["init"])
        return cls(a, b, c, d, i0, i1)


def mat_mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(2)), Fraction(0)) for j in range(2))
        for i in range(2)
    )


def power_by_multiplication(c: Chain2, n: int) -> Matrix2:
    """``n``-fold product, one multiplication per step."""
    as_nat(n, "n")
    result = IDENTITY
    for _ in range(n):
        result = mat_mul(result, c.matrix)
    return result


def power_closed_form(c: Chain2, n: int) -> Matrix2:
    """n-th power via the two-state spectral decomposition.

    ``P^n = (1/s) [[1-p11, 1-p00], [1-p11, 1-p00]]
           + (lam^n/s) [[1-p00, -(1-p00)], [-(1-p11), 1-p11]]``
    with ``s = 2 - p00 - p11`` and ``lam = p00 + p11 - 1``. When ``s = 0``
    the matrix is the identity and the product is used instead.
    """
    as_nat(n, "n")
    s = 2 - c.p00 - c.p11
    if s == 0:
        return power_by_multiplication(c, n)
    a, b = 1 - c.p11, 1 - c.p00
    w = c.eigen_ratio**n
    return (
        ((a + w * b) / s, (b - w * b) / s),
        ((a - w * a) / s, (b + w * a) / s),
    )


def distribution_after(c: Chain2, n: int) -> DistVec2:
    """Initial row vector times the n-th power."""
    (a, b), (d, e) = power_closed_form(c, n)
    return DistVec2(c.init0 * a + c.init1 * d, c.init0 * b + c.init1 * e)


def limit_distribution(c: Chain2) -> DistVec2:
    lam = c.eigen_ratio
    if not abs(lam) < 1:
        raise NoMixingLimit(f"|p00 + p11 - 1| = {abs(lam)} is not below 1")
    s = 2 - c.p00 - c.p11
    return DistVec2((1 - c.p11) / s, (1 - c.p00) / s)


PARITY_CHAIN = Chain2(Fraction(1, 2), Fraction(1, 2), Fraction(1), Fraction(0), Fraction(1, 2), Fraction(1, 2))
MOD3_CHAIN = Chain2(
    Fraction(1, 2), Fraction(1, 2), Fraction(3, 4), Fraction(1, 4), Fraction(1, 3), Fraction(2, 3)
)


def parity_closed_form(n: int) -> DistVec2:
    """Even/odd frequencies among n-th iterates predicted by the parity chain."""
    as_nat(n, "n")
    tail = Fraction((-1) ** (n + 1), 3 * 2 ** (n + 1))
    return DistVec2(Fraction(2, 3) + tail, Fraction(1, 3) - tail)


def mod3_closed_form(n: int) -> DistVec2:
    """Frequency of ``= 1 (mod 3)`` among n-th iterates under the mod-3 chain.

    Defined for ``n >= 1``; at ``n = 0`` the expression does not reduce to
    the initial vector, so use :func:`distribution_after` there.
    """
    as_nat(n, "n", 1)
    tail = Fraction((-1) ** (n + 1), 15 * 4 ** (n - 1))
    return DistVec2(Fraction(3, 5) + tail, Fraction(2, 5) - tail)


EVEN = ClassUnion.residue_class(0, 2)
ODD = ClassUnion.residue_class(1, 2)
ONE_MOD_3 = ClassUnion.residue_class(1, 3)
NOT_ONE_MOD_3 = ONE_MOD_3.complement()


def chain_from_states(state0: ClassUnion, state1: ClassUnion) -> Chain2:
    """Build a two-state chain from one-step conditional densities of the map.

    The initial vector is the density of each state set.
    """
    states = (state0, state1)
    p = [[flow.one_step_conditional(src, dst) for dst in states] for src in states]
    return Chain2(p[0][0], p[0][1], p[1][0], p[1][1], state0.density(), state1.density())


def derive_collatz_chains() -> tuple[Chain2, Chain2]:
    """Derive the parity and mod-3 chains from exact densities and check them."""
    parity = chain_from_states(EVEN, ODD)
    mod3 = chain_from_states(ONE_MOD_3, NOT_ONE_MOD_3)
    for name, got, want in (("parity", parity, PARITY_CHAIN), ("mod3", mod3, MOD3_CHAIN)):
        if got != want:
            raise DerivationMismatch(f"{name} chain derived as {got}, expected {want}")
    return parity, mod3


def is_fixed_point(c: Chain2, v: DistVec2) -> bool:
    (a, b), (d, e) = c.matrix
    return v.m0 * a + v.m1 * d == v.m0 and v.m0 * b + v.m1 * e == v.m1
