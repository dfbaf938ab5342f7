"""Concrete orbits of the Collatz map on big integers.

Orbits are indexed from zero: ``values[0]`` is the start and ``values[i]``
is the i-th iterate. Running out of budget raises
:class:`TrajectoryBudgetExceeded`, which means "undecided", not "divergent".
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import NotEventuallyConstant, TrajectoryBudgetExceeded
from .flow import collatz_step_value
from .numeric import as_nat

Predicate = Callable[[int], bool]
StepFn = Callable[[int], int]

DEFAULT_MAX_STEPS = 100_000
DEFAULT_MAX_BITS = 1_000_000


@dataclass(frozen=True)
class Budget:
    max_steps: int = DEFAULT_MAX_STEPS
    max_bits: int = DEFAULT_MAX_BITS

    @classmethod
    def from_env(cls, var: str = "COLLATZ_LAB_BUDGET") -> "Budget":
        """Read overrides like ``steps=200000,bits=4000000`` from the environment."""
        raw = os.environ.get(var, "").strip()
        if not raw:
            return cls()
        values = parse_budget(raw)
        return cls(values.get("steps", DEFAULT_MAX_STEPS), values.get("bits", DEFAULT_MAX_BITS))


def parse_budget(raw: str) -> dict[str, int]:
    out = {}
    for part in raw.split(","):
        if not part.strip():
            continue
        key, _, value = part.partition("=")
        if not value:
            raise ValueError(f"malformed budget entry {part!r}; expected key=value")
        out[key.strip()] = int(value)
    return out


def is_even(w: int) -> bool:
    return w % 2 == 0


def residue_predicate(q: int, r: int) -> Predicate:
    def pred(w: int) -> bool:
        return w % q == r

    pred.__name__ = f"is_{r}_mod_{q}"
    return pred


@dataclass
class Orbit:
    """Lazily extended orbit with a value index for cycle detection.

    ``step_fn`` defaults to the Collatz map; tests may inject another map.
    """

    start: int
    budget: Budget = field(default_factory=Budget)
    step_fn: StepFn = collatz_step_value
    values: list[int] = field(init=False)
    _seen: dict[int, int] = field(init=False, repr=False)
    cycle_start: Optional[int] = field(init=False, default=None)
    cycle_length: Optional[int] = field(init=False, default=None)

    def __post_init__(self):
        as_nat(self.start, "start", 1)
        self.values = [self.start]
        self._seen = {self.start: 0}

    def _advance(self) -> None:
        if len(self.values) > self.budget.max_steps:
            raise TrajectoryBudgetExceeded(
                f"orbit of {self.start} exceeded {self.budget.max_steps} steps"
            )
        nxt = self.step_fn(self.values[-1])
        if nxt.bit_length() > self.budget.max_bits:
            raise TrajectoryBudgetExceeded(
                f"orbit of {self.start} exceeded {self.budget.max_bits} bits"
            )
        i = len(self.values)
        self.values.append(nxt)
        if self.cycle_start is None:
            prev = self._seen.get(nxt)
            if prev is None:
                self._seen[nxt] = i
            else:
                self.cycle_start, self.cycle_length = prev, i - prev

    def extend_to(self, n: int) -> None:
        while len(self.values) <= n:
            self._advance()

    def __getitem__(self, i: int) -> int:
        if self.cycle_start is not None and i >= len(self.values):
            # periodic from cycle_start on
            i = self.cycle_start + (i - self.cycle_start) % self.cycle_length
        else:
            self.extend_to(i)
        return self.values[i]

    def find_cycle(self) -> tuple[int, int]:
        """Return ``(first index on the cycle, cycle length)``."""
        while self.cycle_start is None:
            self._advance()
        return self.cycle_start, self.cycle_length


def iterate(start: int, n: int, budget: Budget = Budget()) -> int:
    """The n-th iterate of ``start``."""
    as_nat(start, "start", 1)
    as_nat(n, "n")
    if n > budget.max_steps:
        raise TrajectoryBudgetExceeded(f"{n} steps requested, budget is {budget.max_steps}")
    w = start
    for _ in range(n):
        w = collatz_step_value(w)
        if w.bit_length() > budget.max_bits:
            raise TrajectoryBudgetExceeded(f"iterate of {start} exceeded {budget.max_bits} bits")
    return w


@dataclass(frozen=True)
class CycleInfo:
    """Cycle reached by an orbit.

    ``cycle`` is rotated to begin at its largest element and ``entry_index``
    is the first orbit index carrying that element, so an orbit reaching the
    trivial cycle reports ``(4, 2, 1)``. ``tail_length`` is the number of
    values strictly before the orbit is periodic; ``detected_at`` is the
    index of the first repeated value.
    """

    start: int
    entry_index: int
    cycle: tuple[int, ...]
    tail_length: int
    detected_at: int

    @property
    def first_repeated(self) -> int:
        return self.cycle[0]


TRIVIAL_CYCLE = (4, 2, 1)


def detect_cycle(start: int, budget: Budget = Budget(), step_fn: StepFn = collatz_step_value) -> CycleInfo:
    orbit = Orbit(start, budget, step_fn)
    return _cycle_info(orbit)


def _cycle_info(orbit: Orbit) -> CycleInfo:
    mu, lam = orbit.find_cycle()
    block = orbit.values[mu : mu + lam]
    top = block.index(max(block))
    return CycleInfo(orbit.start, mu + top, tuple(block[top:] + block[:top]), mu, mu + lam)


def steps_to_one(start: int, budget: Budget = Budget()) -> int:
    w, steps = start, 0
    while w != 1:
        if steps >= budget.max_steps:
            raise TrajectoryBudgetExceeded(f"{start} did not reach 1 within {budget.max_steps} steps")
        w = collatz_step_value(w)
        steps += 1
    return steps


def cesaro_frequency(start: int, predicate: Predicate, window: int, budget: Budget = Budget()) -> Fraction:
    """Fraction of indices ``i < window`` with ``predicate(xi_i(start))``."""
    as_nat(window, "window", 1)
    orbit = Orbit(start, budget)
    return Fraction(sum(1 for i in range(window) if predicate(orbit[i])), window)


def asymptotic_frequency(
    start: int,
    predicate: Predicate,
    budget: Budget = Budget(),
    step_fn: StepFn = collatz_step_value,
) -> Fraction:
    """Cesaro limit of the predicate along the orbit: its frequency on the cycle."""
    orbit = Orbit(start, budget, step_fn)
    mu, lam = orbit.find_cycle()
    block = orbit.values[mu : mu + lam]
    return Fraction(sum(1 for w in block if predicate(w)), lam)


def _phase_values(orbit: Orbit) -> tuple[int, int, int]:
    mu, lam = orbit.find_cycle()
    if 3 % lam:
        raise NotEventuallyConstant(f"cycle length {lam} does not divide 3")
    # first index >= mu in each residue class mod 3
    return tuple(orbit[mu + (i - mu) % 3] for i in range(3))


def phase_limit(start: int, i: int, budget: Budget = Budget(), step_fn: StepFn = collatz_step_value) -> int:
    """Eventual value of the orbit along indices ``i, i+3, i+6, ...``."""
    if i not in (0, 1, 2):
        raise ValueError(f"phase must be 0, 1 or 2, got {i}")
    return _phase_values(Orbit(start, budget, step_fn))[i]


def phase_limits(start: int, budget: Budget = Budget()) -> tuple[int, int, int]:
    return _phase_values(Orbit(start, budget))


def triple_blocks(start: int, blocks: int, budget: Budget = Budget()) -> list[tuple[int, int, int]]:
    """The orbit regrouped as consecutive triples ``(xi_{3m}, xi_{3m+1}, xi_{3m+2})``."""
    as_nat(blocks, "blocks")
    orbit = Orbit(start, budget)
    return [(orbit[3 * m], orbit[3 * m + 1], orbit[3 * m + 2]) for m in range(blocks)]


@dataclass(frozen=True)
class TrajectoryStats:
    window: int
    even_count: int
    mod3_1_count: int

    def __post_init__(self):
        if self.even_count > self.window or self.mod3_1_count > self.window:
            raise ValueError("counts cannot exceed the window")


def trajectory_stats(start: int, window: int, budget: Budget = Budget()) -> TrajectoryStats:
    orbit = Orbit(start, budget)
    vals = [orbit[i] for i in range(window)]
    return TrajectoryStats(window, sum(v % 2 == 0 for v in vals), sum(v % 3 == 1 for v in vals))


@dataclass(frozen=True)
class TrajectoryRow:
    start: int
    steps_to_1: int
    phase_limits: tuple[int, int, int]
    even_frequency: Fraction

    TSV_HEADER = (
        "start", "steps_to_1", "phase_limit_0", "phase_limit_1", "phase_limit_2",
        "even_frequency_num", "even_frequency_den",
    )

    def tsv_fields(self) -> list[str]:
        return [
            str(self.start), str(self.steps_to_1), *map(str, self.phase_limits),
            str(self.even_frequency.numerator), str(self.even_frequency.denominator),
        ]


def trajectory_row(start: int, budget: Budget = Budget()) -> TrajectoryRow:
    orbit = Orbit(start, budget)
    limits = _phase_values(orbit)
    mu, lam = orbit.find_cycle()
    block = orbit.values[mu : mu + lam]
    even = Fraction(sum(1 for w in block if w % 2 == 0), lam)
    try:
        to_one = orbit.values.index(1)
    except ValueError:
        raise TrajectoryBudgetExceeded(f"orbit of {start} cycles without reaching 1") from None
    return TrajectoryRow(start, to_one, limits, even)


def empirical_residue_counts(n_max: int, q: int, max_k: int) -> list[list[int]]:
    """Brute-force ``#{k <= max_k : xi_n(k) = j (mod q)}`` for ``n = 0..n_max``.

    Vectorized over ``k``; values are bounded by ``(max_k + 1) * 3**n`` so
    int64 is used while that bound fits and Python ints otherwise.
    """
    as_nat(max_k, "max_k", 1)
    as_nat(q, "q", 2)
    fits = (max_k + 1) * 3**n_max < 2**62
    w = np.arange(1, max_k + 1, dtype=np.int64 if fits else object)
    rows = []
    for n in range(n_max + 1):
        if n:
            odd = (w % 2) == 1
            w = np.where(odd, 3 * w + 1, w // 2)
        rows.append(np.bincount((w % q).astype(np.int64), minlength=q).tolist())
    return rows
