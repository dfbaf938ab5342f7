"""Repeated integrals of residue indicators and the mixing contradiction.

All integrals here are against a shift-invariant finitely additive
probability on the naturals. They are evaluated symbolically: an inner
integral is either a convergent closed form (integrated to its limit) or the
density of an eventually periodic index set. Nothing is approximated by
quadrature. Every result that relies on the Collatz conjecture lists it in
``assumptions``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .chain import MOD3_CHAIN, PARITY_CHAIN, limit_distribution, mod3_closed_form, parity_closed_form
from .errors import AssumptionRequired, TrajectoryBudgetExceeded
from .numeric import rat_to_json
from .residue import (
    ConvergentSequence,
    eventually_constant,
    eventually_periodic_density,
    geometric_tail,
    integral_of_convergent,
)
from .trajectory import TRIVIAL_CYCLE, Budget, Orbit, _phase_values, triple_blocks

CONJECTURE = "Collatz conjecture"
PHASE_VALUES = (1, 2, 4)
INNER_ORDERS = ("omega1", "omega2")


def parity_frequency_sequence() -> ConvergentSequence:
    """n -> density of even n-th iterates: ``2/3 + (-1/6) * (-1/2)**n``."""
    return geometric_tail(Fraction(2, 3), Fraction(-1, 6), Fraction(-1, 2))


def mod3_frequency_sequence() -> ConvergentSequence:
    """n -> mod-3 chain frequency of ``= 1``: ``3/5 + (-4/15) * (-1/4)**n`` (n >= 1)."""
    return geometric_tail(Fraction(3, 5), Fraction(-4, 15), Fraction(-1, 4))


@dataclass(frozen=True)
class RepeatedIntegralReport:
    function_tag: str
    inner_over: str
    value: Fraction
    assumptions: tuple[str, ...]
    basis: str

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"integral value {self.value} outside [0, 1]")

    def to_json(self) -> dict:
        return {
            "function": self.function_tag,
            "inner_over": self.inner_over,
            "value": rat_to_json(self.value),
            "assumptions": list(self.assumptions),
            "basis": self.basis,
        }


def _cycle_indicator(residue_test) -> list[int]:
    return [1 if residue_test(w) else 0 for w in TRIVIAL_CYCLE]


def _repeated_integral(tag, inner_over, assume_conjecture, ensemble, ensemble_basis, residue_test, cycle_basis):
    if inner_over not in INNER_ORDERS:
        raise ValueError(f"inner_over must be one of {INNER_ORDERS}, got {inner_over!r}")
    if inner_over == "omega2":
        # inner over starting points: the ensemble frequency of the n-th
        # iterate, n = omega1; outer over omega1 integrates to its limit
        return RepeatedIntegralReport(tag, inner_over, integral_of_convergent(ensemble), (), ensemble_basis)
    if not assume_conjecture:
        raise AssumptionRequired(
            "integrating over the step index first needs every orbit to reach (4, 2, 1)"
        )
    # inner over the step index along one orbit: under the conjecture the
    # indicator sequence is eventually periodic with the trivial cycle's pattern
    per_orbit = eventually_periodic_density((), _cycle_indicator(residue_test))
    value = integral_of_convergent(eventually_constant(per_orbit))
    return RepeatedIntegralReport(tag, inner_over, value, (CONJECTURE,), cycle_basis)


def repeated_integral_g(inner_over: str, assume_conjecture: bool = False) -> RepeatedIntegralReport:
    """Repeated integral of ``g(n, k) = [xi_n(k) even]``."""
    return _repeated_integral(
        "g", inner_over, assume_conjecture,
        parity_frequency_sequence(), "parity chain closed form (exact density)",
        lambda w: w % 2 == 0, "parity pattern of the cycle (4, 2, 1)",
    )


def repeated_integral_h(inner_over: str, assume_conjecture: bool = False) -> RepeatedIntegralReport:
    """Repeated integral of ``h(n, k) = [xi_n(k) = 1 (mod 3)]``."""
    return _repeated_integral(
        "h", inner_over, assume_conjecture,
        mod3_frequency_sequence(), "mod-3 chain closed form (model prediction)",
        lambda w: w % 3 == 1, "mod-3 pattern of the cycle (4, 2, 1)",
    )


@dataclass(frozen=True)
class ClassGVerdict:
    function_tag: str
    inner_omega2: RepeatedIntegralReport
    inner_omega1: RepeatedIntegralReport

    @property
    def in_class(self) -> bool:
        return self.inner_omega2.value == self.inner_omega1.value


def class_g_membership(tag: str) -> ClassGVerdict:
    """Compare both integration orders (assuming the conjecture)."""
    fn = {"g": repeated_integral_g, "h": repeated_integral_h}[tag]
    return ClassGVerdict(tag, fn("omega2", True), fn("omega1", True))


# Tychonoff metric on sequences of triples


def _sqrt_bracket(s: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(s) <= hi``; equal when ``s`` is a rational square."""
    a, b = s.numerator, s.denominator
    r = math.isqrt(a * b)
    if r * r == a * b:
        exact = Fraction(r, b)
        return exact, exact
    scale = 1 << bits
    lo_num = math.isqrt(a * b * scale * scale)
    return Fraction(lo_num, b * scale), Fraction(lo_num + 1, b * scale)


def tychonoff_distance(
    x: Sequence[Sequence[Fraction]],
    y: Sequence[Sequence[Fraction]],
    terms: int,
    precision_bits: int = 96,
) -> tuple[Fraction, Fraction]:
    """Bracket ``sum_n |x_n - y_n| / (2**(n+1) (1 + |x_n - y_n|))``.

    Uses the Euclidean norm on triples. The first ``terms`` summands are
    bracketed exactly; the tail contributes at most ``2**-terms`` to the
    upper bound.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if len(x) < terms or len(y) < terms:
        raise ValueError(f"need at least {terms} triples in each sequence")
    lower = upper = Fraction(0)
    for n in range(terms):
        sq = sum((Fraction(a) - Fraction(b)) ** 2 for a, b in zip(x[n], y[n]))
        lo, hi = _sqrt_bracket(sq, precision_bits)
        weight = Fraction(1, 2 ** (n + 1))
        # v / (1 + v) is increasing, so brackets carry through
        lower += weight * lo / (1 + lo)
        upper += weight * hi / (1 + hi)
    return lower, upper + Fraction(1, 2**terms)


def triple_block_encoding(start: int, blocks: int, budget: Budget = Budget()) -> list[tuple[int, int, int]]:
    return triple_blocks(start, blocks, budget)


# phase-limit frequencies


@dataclass(frozen=True)
class NuTable:
    """Empirical counts of phase limits over starts ``1..max_k``."""

    max_k: int
    counts: tuple[tuple[int, int, int], ...]  # counts[i] over PHASE_VALUES
    excluded: tuple[int, ...] = ()

    @property
    def sample_size(self) -> int:
        return self.max_k - len(self.excluded)

    def nu(self, i: int, v: int) -> Fraction:
        return Fraction(self.counts[i][PHASE_VALUES.index(v)], self.sample_size)

    def as_dict(self) -> dict[int, dict[int, Fraction]]:
        return {i: {v: self.nu(i, v) for v in PHASE_VALUES} for i in range(3)}


def nu_table(max_k: int, budget: Budget = Budget()) -> NuTable:
    counts = [[0, 0, 0] for _ in range(3)]
    excluded = []
    for k in range(1, max_k + 1):
        try:
            limits = _phase_values(Orbit(k, budget))
        except TrajectoryBudgetExceeded:
            excluded.append(k)
            continue
        for i, v in enumerate(limits):
            counts[i][PHASE_VALUES.index(v)] += 1
    return NuTable(max_k, tuple(tuple(c) for c in counts), tuple(excluded))


def empirical_nu(i: int, v: int, max_k: int, budget: Budget = Budget()) -> Fraction:
    """Fraction of starts ``k <= max_k`` whose phase-``i`` limit is ``v``."""
    if i not in (0, 1, 2) or v not in PHASE_VALUES:
        raise ValueError(f"invalid phase/value pair ({i}, {v})")
    return nu_table(max_k, budget).nu(i, v)


# cells forced equal by rotation of the phase limits along (4, 2, 1)
ROTATION_ORBITS = (
    ((0, 4), (1, 2), (2, 1)),
    ((0, 2), (1, 1), (2, 4)),
    ((0, 1), (1, 4), (2, 2)),
)


def rotation_relations_hold(table: dict[int, dict[int, Fraction]]) -> bool:
    return all(len({table[i][v] for i, v in cells}) == 1 for cells in ROTATION_ORBITS)


def forced_table(odd_limit: Fraction) -> dict[int, dict[int, Fraction]]:
    """Propagate ``nu_i(1) = odd_limit`` (every phase) through the rotation relations."""
    known = {(i, 1): odd_limit for i in range(3)}
    table: dict[int, dict[int, Fraction]] = {i: {} for i in range(3)}
    for cells in ROTATION_ORBITS:
        values = {known[c] for c in cells if c in known}
        if len(values) != 1:
            raise ValueError(f"rotation orbit {cells} is not pinned by a single value")
        (value,) = values
        for i, v in cells:
            table[i][v] = value
    return table


CONSEQUENCE_TEXT = "If h is in G then the Collatz conjecture fails."


@dataclass(frozen=True)
class MixingReport:
    forced_nu: dict[int, dict[int, Fraction]]
    contradiction_gap: tuple[Fraction, Fraction]
    odd_limit: Fraction
    mod3_limit: Fraction
    nu: Optional[dict[int, dict[int, Fraction]]] = None
    sample_size: int = 0
    excluded: tuple[int, ...] = ()
    rotation_relations_ok: Optional[bool] = None
    lumped_nu0_14: Optional[Fraction] = None
    assumptions: tuple[str, ...] = (CONJECTURE, "asymptotic mixing property (mod 3)")
    notes: tuple[str, ...] = field(default=())

    @property
    def contradiction(self) -> bool:
        return self.contradiction_gap[0] != self.contradiction_gap[1]

    def to_json(self) -> dict:
        def table_json(t):
            return {str(i): {str(v): rat_to_json(t[i][v]) for v in PHASE_VALUES} for i in range(3)}

        out = {
            "symbolic": {
                "odd_limit": rat_to_json(self.odd_limit),
                "mod3_limit": rat_to_json(self.mod3_limit),
                "forced_nu": table_json(self.forced_nu),
                "contradiction_gap": [rat_to_json(x) for x in self.contradiction_gap],
                "contradiction": self.contradiction,
                "assumptions": list(self.assumptions),
            },
            "notes": list(self.notes),
        }
        if self.nu is not None:
            out["empirical"] = {
                "nu": table_json(self.nu),
                "sample_size": self.sample_size,
                "excluded": [str(k) for k in self.excluded],
                "rotation_relations_ok": self.rotation_relations_ok,
                "lumped_nu0_14": rat_to_json(self.lumped_nu0_14),
            }
        return out


def contradiction_report(max_k: Optional[int] = None, budget: Budget = Budget()) -> MixingReport:
    """Rebuild the mixing contradiction and optionally attach empirical tables.

    Symbolic part: the parity chain's odd limit forces ``nu_i(1) = 1/3``;
    rotation makes every cell 1/3; then ``nu_0(1) + nu_0(4) = 2/3`` while the
    mod-3 chain's limit requires ``nu_0({1, 4}) = 3/5``.
    """
    odd_limit = limit_distribution(PARITY_CHAIN).m1
    mod3_limit = limit_distribution(MOD3_CHAIN).m0
    forced = forced_table(odd_limit)
    gap = (mod3_limit, forced[0][1] + forced[0][4])
    notes = [CONSEQUENCE_TEXT]
    kwargs = {}
    if max_k is not None:
        table = nu_table(max_k, budget)
        nu = table.as_dict()
        kwargs = dict(
            nu=nu,
            sample_size=table.sample_size,
            excluded=table.excluded,
            rotation_relations_ok=rotation_relations_hold(nu),
            lumped_nu0_14=nu[0][1] + nu[0][4],
        )
        notes.append("empirical tables are finite-sample frequencies, not densities")
    return MixingReport(forced, gap, odd_limit, mod3_limit, notes=tuple(notes), **kwargs)


def closed_form_matches_descriptor(n_max: int = 32) -> bool:
    """The integrand descriptors agree with the chain closed forms term by term."""
    par, m3 = parity_frequency_sequence(), mod3_frequency_sequence()
    return all(par(n) == parity_closed_form(n).m0 for n in range(n_max + 1)) and all(
        m3(n) == mod3_closed_form(n).m0 for n in range(1, n_max + 1)
    )
