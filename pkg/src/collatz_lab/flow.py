"""Exact symbolic propagation of the Collatz map over affine branches.

After ``n`` steps the positive integers split into finitely many
progressions ``a + M*t`` (``M`` a power of two) on each of which the n-fold
iterate is an affine function ``c + d*t`` of the class parameter ``t``. A
branch is split only when its values have mixed parity (``d`` odd), so the
branches correspond exactly to the distinguishable parity histories.

Everything downstream (residue distributions of the n-th iterate, preimages
of residue classes, one-step conditional densities) is read off the branch
list without enumerating integers.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BranchBudgetExceeded, ConditionOnNull
from .numeric import as_nat
from .residue import ArithClass, ClassUnion

DEFAULT_MAX_STEPS = 24


def collatz_step_value(w: int) -> int:
    """``w/2`` for even ``w``, ``3w+1`` for odd ``w``."""
    as_nat(w, "w", 1)
    return w >> 1 if w % 2 == 0 else 3 * w + 1


@dataclass(frozen=True)
class AffineBranch:
    """Domain ``dom_offset + dom_modulus*t``; value ``val_c + val_d*t``."""

    dom_offset: int
    dom_modulus: int
    val_c: int
    val_d: int

    def value(self, t: int) -> int:
        return self.val_c + self.val_d * t

    def element(self, t: int) -> int:
        return self.dom_offset + self.dom_modulus * t

    def covers(self, k: int) -> bool:
        return k >= self.dom_offset and (k - self.dom_offset) % self.dom_modulus == 0

    def value_at(self, k: int) -> int:
        """Value of the iterate at the domain element ``k``."""
        t, rem = divmod(k - self.dom_offset, self.dom_modulus)
        if rem or t < 0:
            raise ValueError(f"{k} is not in the branch domain {self.domain}")
        return self.value(t)

    @property
    def domain(self) -> ArithClass:
        return ArithClass(self.dom_offset, self.dom_modulus)

    @property
    def parity_fixed(self) -> bool:
        return self.val_d % 2 == 0

    def split(self) -> tuple["AffineBranch", "AffineBranch"]:
        """Re-parameterize over ``t = 2s`` and ``t = 2s + 1``."""
        a, m, c, d = self.dom_offset, self.dom_modulus, self.val_c, self.val_d
        return (
            AffineBranch(a, 2 * m, c, 2 * d),
            AffineBranch(a + m, 2 * m, c + d, 2 * d),
        )

    def apply_step(self) -> "AffineBranch":
        if not self.parity_fixed:
            raise ValueError("branch has mixed parity; split it first")
        a, m, c, d = self.dom_offset, self.dom_modulus, self.val_c, self.val_d
        if c % 2 == 0:
            return AffineBranch(a, m, c // 2, d // 2)
        return AffineBranch(a, m, 3 * c + 1, 3 * d)

    def to_json(self) -> dict:
        return {
            "dom_offset": str(self.dom_offset),
            "dom_modulus": str(self.dom_modulus),
            "val_c": str(self.val_c),
            "val_d": str(self.val_d),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AffineBranch":
        return cls(int(obj["dom_offset"]), int(obj["dom_modulus"]), int(obj["val_c"]), int(obj["val_d"]))


@dataclass(frozen=True)
class BranchSystem:
    """Complete description of the n-th iterate on the positive integers."""

    step_index: int
    branches: tuple[AffineBranch, ...]

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    def domain_mass(self) -> Fraction:
        return sum((Fraction(1, b.dom_modulus) for b in self.branches), Fraction(0))

    def _index(self) -> dict[int, dict[int, AffineBranch]]:
        try:
            return self.__dict__["_idx"]
        except KeyError:
            idx: dict[int, dict[int, AffineBranch]] = defaultdict(dict)
            for b in self.branches:
                idx[b.dom_modulus][b.dom_offset % b.dom_modulus] = b
            object.__setattr__(self, "_idx", dict(idx))
            return self.__dict__["_idx"]

    def branch_for(self, k: int) -> AffineBranch:
        as_nat(k, "k", 1)
        for m, by_res in self._index().items():
            b = by_res.get(k % m)
            if b is not None and k >= b.dom_offset:
                return b
        raise LookupError(f"no branch covers {k}")

    def evaluate(self, k: int) -> int:
        """The n-th iterate of ``k`` read from its branch."""
        return self.branch_for(k).value_at(k)

    def to_json(self) -> dict:
        return {"step": self.step_index, "branches": [b.to_json() for b in self.branches]}

    @classmethod
    def from_json(cls, obj: dict) -> "BranchSystem":
        return cls(int(obj["step"]), tuple(AffineBranch.from_json(b) for b in obj["branches"]))


def initial_system() -> BranchSystem:
    """The identity on ``{1, 2, ...}``: one branch ``1 + t``."""
    return BranchSystem(0, (AffineBranch(1, 1, 1, 1),))


def step(s: BranchSystem) -> BranchSystem:
    out = []
    for b in s.branches:
        if b.parity_fixed:
            out.append(b.apply_step())
        else:
            out.extend(child.apply_step() for child in b.split())
    return BranchSystem(s.step_index + 1, tuple(out))


def system_after(n: int, max_steps: int = DEFAULT_MAX_STEPS) -> BranchSystem:
    """Branch system of the n-th iterate; cached."""
    as_nat(n, "n")
    if n > max_steps:
        raise BranchBudgetExceeded(f"{n} steps requested, budget is {max_steps}")
    return _system_after(n)


@lru_cache(maxsize=None)
def _system_after(n: int) -> BranchSystem:
    if n == 0:
        return initial_system()
    return step(_system_after(n - 1))


def residue_distribution(s: BranchSystem, q: int) -> dict[int, Fraction]:
    """Exact density of ``{k : xi_n(k) = j (mod q)}`` for each ``j``.

    On a branch the residues of ``c + d*t`` cycle with period ``q/gcd(d, q)``,
    so one period per branch gives the exact weight.
    """
    as_nat(q, "q", 2)
    # branches sharing (M, c mod q, d mod q) contribute identically
    groups: dict[tuple[int, int, int], int] = defaultdict(int)
    for b in s.branches:
        groups[(b.dom_modulus, b.val_c % q, b.val_d % q)] += 1
    by_den: dict[int, list[int]] = {}
    for (m, c, d), mult in sorted(groups.items()):
        period = q // math.gcd(d, q)
        counts = by_den.setdefault(m * period, [0] * q)
        for t in range(period):
            counts[(c + d * t) % q] += mult
    dist = {j: Fraction(0) for j in range(q)}
    for den, counts in by_den.items():
        for j, cnt in enumerate(counts):
            if cnt:
                dist[j] += Fraction(cnt, den)
    return dist


def preimage_union(s: BranchSystem, target: ClassUnion) -> ClassUnion:
    """``{k >= 1 : xi_n(k) in target}`` as a canonical union."""
    q = target.modulus
    modulus = 1
    per_branch = []
    for b in s.branches:
        period = q // math.gcd(b.val_d, q)
        good = [t for t in range(period) if (b.val_c + b.val_d * t) % q in target]
        per_branch.append((b, period, good))
        modulus = math.lcm(modulus, b.dom_modulus * period)
    residues = []
    for b, period, good in per_branch:
        step_k = b.dom_modulus * period
        for t in good:
            r = (b.dom_offset + b.dom_modulus * t) % step_k
            residues.extend(range(r, modulus, step_k))
    return ClassUnion(modulus, tuple(residues))


def one_step_conditional(pre_set: ClassUnion, post_set: ClassUnion) -> Fraction:
    """``d(xi^{-1}(post) & pre) / d(pre)``."""
    mass = pre_set.density()
    if mass == 0:
        raise ConditionOnNull(f"conditioning set {pre_set} has density zero")
    joint = preimage_union(system_after(1), post_set).intersect(pre_set)
    return joint.density() / mass


def transition_at(n: int, from_set: ClassUnion, to_set: ClassUnion) -> Fraction:
    """``d(xi_n in from & xi_{n+1} in to) / d(xi_n in from)``.

    A homogeneous chain model needs this to be independent of ``n``.
    """
    now = preimage_union(system_after(n), from_set)
    mass = now.density()
    if mass == 0:
        raise ConditionOnNull(f"xi_{n} never lands in {from_set}")
    nxt = preimage_union(system_after(n + 1), to_set)
    return now.intersect(nxt).density() / mass


@dataclass(frozen=True)
class ImageIdentity:
    label: str
    pieces: tuple[tuple[ArithClass, ArithClass], ...]  # (domain, computed image)
    expected: tuple[ArithClass, ...]
    holds: bool


def image_of_class(cls: ArithClass) -> ArithClass:
    """Image of a progression of constant parity under one Collatz step."""
    if cls.modulus % 2:
        raise ValueError(f"{cls} has mixed parity")
    if cls.offset % 2 == 0:
        return ArithClass(cls.offset // 2, cls.modulus // 2)
    return ArithClass(3 * cls.offset + 1, 3 * cls.modulus)


# the mod-6 image identities used to derive the mod-3 transition densities
_IMAGE_IDENTITIES = (
    ("xi(3N)", ((3, 6), (0, 6)), ((10, 18), (0, 3))),
    ("xi(3N+1)", ((4, 6), (1, 6)), ((2, 3), (4, 18))),
    ("xi(3N+2)", ((5, 6), (2, 6)), ((16, 18), (1, 3))),
)


def image_identity_check() -> list[ImageIdentity]:
    report = []
    for label, domains, expected in _IMAGE_IDENTITIES:
        pieces = tuple((ArithClass(*d), image_of_class(ArithClass(*d))) for d in domains)
        exp = tuple(ArithClass(*e) for e in expected)
        report.append(ImageIdentity(label, pieces, exp, tuple(img for _, img in pieces) == exp))
    return report
