"""Command-line reports.

Exit codes: 0 success, 2 usage error, 3 budget exceeded, 4 internal
invariant violation. Rationals are printed as ``num/den`` (TSV) or
``{"num", "den"}`` (JSON); floats only appear in the optional ``approx``
column.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import chain, flow, mixing, supernatural, trajectory
from .errors import (
    BranchBudgetExceeded,
    CollatzLabError,
    DerivationMismatch,
    NotEven,
    PlusUndefined,
    PreconditionFailed,
    TrajectoryBudgetExceeded,
)
from .numeric import rat_str, rat_to_json

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4
BUDGET_ENV = "COLLATZ_LAB_BUDGET"


class InvariantViolation(CollatzLabError):
    pass


@dataclass
class ReportEnvelope:
    command: str
    parameters: dict
    results: Any
    assumptions: list = field(default_factory=list)
    provenance: list = field(default_factory=list)
    # TSV rendering: header + rows of strings
    columns: Optional[list] = None
    rows: Optional[list] = None
    text: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "assumptions": self.assumptions,
            "provenance": self.provenance,
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        lines = [f"# command: {self.command}"]
        lines.append("# assumptions: " + (", ".join(self.assumptions) or "none"))
        if self.text:
            lines.append(self.text.rstrip("\n"))
        if self.columns:
            lines.append("\t".join(self.columns))
            lines.extend("\t".join(r) for r in self.rows)
        return "\n".join(lines) + "\n"


def _budgets() -> tuple[int, trajectory.Budget]:
    raw = os.environ.get(BUDGET_ENV, "").strip()
    values = trajectory.parse_budget(raw) if raw else {}
    flow_steps = values.get("flow_steps", flow.DEFAULT_MAX_STEPS)
    budget = trajectory.Budget(
        values.get("steps", trajectory.DEFAULT_MAX_STEPS), values.get("bits", trajectory.DEFAULT_MAX_BITS)
    )
    return flow_steps, budget


def _approx(q: Fraction) -> str:
    return f"{float(q):.12g}"


# commands


def cmd_densities(args) -> ReportEnvelope:
    flow_steps, _ = _budgets()
    q = args.mod
    results, rows = [], []
    for n in range(args.steps + 1):
        dist = flow.residue_distribution(flow.system_after(n, flow_steps), q)
        if sum(dist.values()) != 1:
            raise InvariantViolation(f"densities at n={n} do not sum to 1")
        results.append({"n": n, "densities": {str(j): rat_to_json(v) for j, v in dist.items()}})
        for j, v in dist.items():
            row = [str(n), str(j), rat_str(v)]
            if args.approx:
                row.append(_approx(v))
            rows.append(row)
    cols = ["n", "residue", "density"] + (["approx"] if args.approx else [])
    return ReportEnvelope(
        "densities", {"mod": q, "steps": args.steps}, results,
        provenance=["flow.residue_distribution"], columns=cols, rows=rows,
    )


CHAINS = {"parity": chain.PARITY_CHAIN, "mod3": chain.MOD3_CHAIN}


def _closed_form(name: str, n: int) -> Optional[chain.DistVec2]:
    if name == "parity":
        return chain.parity_closed_form(n)
    return chain.mod3_closed_form(n) if n >= 1 else None


def cmd_model(args) -> ReportEnvelope:
    c = CHAINS[args.chain]
    results, rows = [], []
    for n in range(args.steps + 1):
        closed = _closed_form(args.chain, n)
        (a, b), (d, e) = chain.power_by_multiplication(c, n)
        power = chain.DistVec2(c.init0 * a + c.init1 * d, c.init0 * b + c.init1 * e)
        equal = closed is None or closed == power
        if closed is not None and not equal:
            raise InvariantViolation(f"closed form and matrix power disagree at n={n}")
        results.append({
            "n": n,
            "closed_form": closed.to_json() if closed else None,
            "matrix_power": power.to_json(),
            "equal": equal,
        })
        rows.append([
            str(n),
            rat_str(closed.m0) if closed else "NA", rat_str(closed.m1) if closed else "NA",
            rat_str(power.m0), rat_str(power.m1), "true" if equal else "false",
        ])
    lim = chain.limit_distribution(c)
    if not chain.is_fixed_point(c, lim):
        raise InvariantViolation("limit distribution is not stationary")
    results.append({"n": "limit", "limit": lim.to_json()})
    rows.append(["limit", rat_str(lim.m0), rat_str(lim.m1), rat_str(lim.m0), rat_str(lim.m1), "true"])
    return ReportEnvelope(
        "model", {"chain": args.chain, "steps": args.steps}, results,
        provenance=["chain.power_closed_form", "chain.power_by_multiplication", "chain.limit_distribution"],
        columns=["n", "closed_m0", "closed_m1", "power_m0", "power_m1", "equal"], rows=rows,
    )


# state 0 of each chain, as a residue
TRACKED = {2: ("parity", 0), 3: ("mod3", 1)}


def compare_rows(q: int, steps: int, max_k: int, flow_steps: int = flow.DEFAULT_MAX_STEPS) -> list[dict]:
    """Model prediction, exact density and brute-force frequency of the tracked residue."""
    name, residue = TRACKED[q]
    c = CHAINS[name]
    counts = trajectory.empirical_residue_counts(steps, q, max_k) if max_k else None
    out = []
    for n in range(steps + 1):
        model = chain.distribution_after(c, n).m0
        exact = flow.residue_distribution(flow.system_after(n, flow_steps), q)[residue]
        empirical = Fraction(counts[n][residue], max_k) if counts else None
        out.append({"n": n, "model": model, "exact": exact, "empirical": empirical, "divergence": model - exact})
    return out


def cmd_compare(args) -> ReportEnvelope:
    flow_steps, _ = _budgets()
    data = compare_rows(args.mod, args.steps, args.max_k, flow_steps)
    results, rows = [], []
    for r in data:
        results.append({
            "n": r["n"],
            "model": rat_to_json(r["model"]),
            "exact": rat_to_json(r["exact"]),
            "empirical": {"value": rat_to_json(r["empirical"]), "empirical": True, "max_k": args.max_k}
            if r["empirical"] is not None else None,
            "divergence": rat_to_json(r["divergence"]),
        })
        row = [
            str(r["n"]), rat_str(r["model"]), rat_str(r["exact"]),
            rat_str(r["empirical"]) if r["empirical"] is not None else "NA", rat_str(r["divergence"]),
        ]
        if args.approx:
            row += [_approx(r["model"]), _approx(r["exact"])]
        rows.append(row)
    name, residue = TRACKED[args.mod]
    cols = ["n", "model", "exact", "empirical", "divergence"] + (
        ["model_approx", "exact_approx"] if args.approx else []
    )
    return ReportEnvelope(
        "compare", {"mod": args.mod, "residue": residue, "steps": args.steps, "max_k": args.max_k}, results,
        provenance=["chain.distribution_after", "flow.residue_distribution", "trajectory.empirical_residue_counts"],
        columns=cols, rows=rows,
        text=f"# tracked residue {residue} mod {args.mod}; model = {name} chain; empirical over k <= {args.max_k}",
    )


def _table_text(title: str, table: dict) -> list[str]:
    lines = [title, "i\tnu(1)\tnu(2)\tnu(4)"]
    for i in range(3):
        lines.append(f"{i}\t" + "\t".join(rat_str(table[i][v]) for v in mixing.PHASE_VALUES))
    return lines


def cmd_mixing(args) -> ReportEnvelope:
    _, budget = _budgets()
    report = mixing.contradiction_report(args.max_k, budget)
    verdicts = {t: mixing.class_g_membership(t) for t in ("g", "h")}
    results = report.to_json()
    results["repeated_integrals"] = {
        t: {
            "inner_omega2": v.inner_omega2.to_json(),
            "inner_omega1": v.inner_omega1.to_json(),
            "in_class": v.in_class,
        }
        for t, v in verdicts.items()
    }
    lines = ["# repeated integrals (both orders)"]
    for t, v in verdicts.items():
        lines.append(
            f"{t}\tinner_omega2={rat_str(v.inner_omega2.value)}\tinner_omega1={rat_str(v.inner_omega1.value)}"
            f"\tin_class={'true' if v.in_class else 'false'}"
        )
    lines += _table_text("# forced phase-limit frequencies (symbolic)", report.forced_nu)
    a, b = report.contradiction_gap
    lines.append(f"# contradiction gap: nu_0({{1,4}}) = {rat_str(a)} vs nu_0(1) + nu_0(4) = {rat_str(b)}")
    if report.nu is not None:
        lines += _table_text(f"# empirical phase-limit frequencies over k <= {args.max_k} (empirical)", report.nu)
        lines.append(f"# rotation relations hold: {'true' if report.rotation_relations_ok else 'false'}")
        lines.append(f"# empirical nu_0(1) + nu_0(4) = {rat_str(report.lumped_nu0_14)}")
    lines.append("# " + mixing.CONSEQUENCE_TEXT)
    return ReportEnvelope(
        "mixing", {"max_k": args.max_k}, results, assumptions=list(report.assumptions),
        provenance=["mixing.contradiction_report", "mixing.class_g_membership"], text="\n".join(lines),
    )


def cmd_trajectory(args) -> ReportEnvelope:
    _, budget = _budgets()
    rows, results = [], []
    for k in range(args.start, args.start + args.count):
        row = trajectory.trajectory_row(k, budget)
        rows.append(row.tsv_fields())
        results.append(dict(zip(trajectory.TrajectoryRow.TSV_HEADER, row.tsv_fields())))
    return ReportEnvelope(
        "trajectory", {"start": args.start, "count": args.count}, results,
        provenance=["trajectory.trajectory_row"], columns=list(trajectory.TrajectoryRow.TSV_HEADER), rows=rows,
    )


def cmd_supernatural(args) -> ReportEnvelope:
    sn = supernatural
    if args.action == "fixed-point":
        n = sn.Supernatural.parse(args.n)
        verdict = sn.check_two_inf_fixed_point(n, args.steps)
        text = (
            f"start\t{n}\nsteps\t{args.steps}\nstationary\t{str(verdict.stationary).lower()}\n"
            f"never_reaches_one\t{str(verdict.never_reaches_one).lower()}"
        )
        return ReportEnvelope(
            "supernatural fixed-point", {"n": str(n), "steps": args.steps}, verdict.to_json(),
            provenance=["supernatural.check_two_inf_fixed_point"], text=text,
        )
    if args.action == "remark":
        rep = sn.check_plus_incompatibility()
        text = "\n".join(f"{k}\t{str(v).lower()}" for k, v in rep.to_json().items())
        return ReportEnvelope(
            "supernatural remark", {}, rep.to_json(), provenance=["supernatural.check_plus_incompatibility"], text=text,
        )
    if args.action == "step":
        n = sn.Supernatural.parse(args.n)
        out = sn.sn_collatz_step(n)
        return ReportEnvelope(
            "supernatural step", {"n": str(n)}, out.to_json(),
            provenance=["supernatural.sn_collatz_step"], text=f"{n}\t->\t{out}",
        )
    # oplus
    a, b = sn.Supernatural.parse(args.a), sn.Supernatural.parse(args.b)
    out = sn.sn_oplus(a, b)
    return ReportEnvelope(
        "supernatural oplus", {"a": str(a), "b": str(b)}, out.to_json(),
        provenance=["supernatural.sn_oplus"], text=f"{a} (+) {b}\t=\t{out}",
    )


def cmd_derive(args) -> ReportEnvelope:
    parity, mod3 = chain.derive_collatz_chains()
    identities = flow.image_identity_check()
    results = {
        "parity": parity.to_json(),
        "mod3": mod3.to_json(),
        "image_identities": [{"label": i.label, "holds": i.holds} for i in identities],
    }
    lines = []
    for name, c in (("parity", parity), ("mod3", mod3)):
        lines.append(
            f"{name}\tp00={rat_str(c.p00)}\tp01={rat_str(c.p01)}\tp10={rat_str(c.p10)}"
            f"\tp11={rat_str(c.p11)}\tinit=({rat_str(c.init0)}, {rat_str(c.init1)})"
        )
    for i in identities:
        images = " u ".join(str(img) for _, img in i.pieces)
        lines.append(f"{i.label}\t{images}\t{'ok' if i.holds else 'MISMATCH'}")
    if not all(i.holds for i in identities):
        raise InvariantViolation("an image identity failed")
    return ReportEnvelope(
        "derive", {}, results, provenance=["chain.derive_collatz_chains", "flow.image_identity_check"],
        text="\n".join(lines),
    )


# argument parsing


def _positive(min_value: int):
    def conv(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < min_value:
            raise argparse.ArgumentTypeError(f"must be >= {min_value}, got {value}")
        return value

    return conv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collatz-lab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--out", help="write the report to FILE instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("densities", parents=[common], help="exact residue densities of the n-th iterate")
    p.add_argument("--mod", type=_positive(2), required=True)
    p.add_argument("--steps", type=_positive(0), required=True)
    p.add_argument("--approx", action="store_true", help="add a float convenience column")
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("model", parents=[common], help="chain closed forms against matrix powers")
    p.add_argument("--chain", choices=sorted(CHAINS), required=True)
    p.add_argument("--steps", type=_positive(0), required=True)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("compare", parents=[common], help="model vs exact vs empirical densities")
    p.add_argument("--mod", type=int, choices=sorted(TRACKED), required=True)
    p.add_argument("--steps", type=_positive(0), required=True)
    p.add_argument("--max-k", type=_positive(0), default=10**6, help="brute-force window (0 disables)")
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("mixing", parents=[common], help="repeated integrals and the mixing contradiction")
    p.add_argument("--max-k", type=_positive(1), default=None, help="add empirical phase-limit tables")
    p.set_defaults(func=cmd_mixing)

    p = sub.add_parser("trajectory", parents=[common], help="orbit summaries")
    p.add_argument("--start", type=_positive(1), required=True)
    p.add_argument("--count", type=_positive(1), default=1)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("supernatural", parents=[common], help="supernatural-number checks")
    p.add_argument("action", choices=("fixed-point", "remark", "step", "oplus"))
    p.add_argument("--n", default="2^inf")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--steps", type=_positive(0), default=100)
    p.set_defaults(func=cmd_supernatural)

    p = sub.add_parser("derive", parents=[common], help="derive both chains from exact densities")
    p.set_defaults(func=cmd_derive)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "supernatural" and args.action == "oplus" and (args.a is None or args.b is None):
        parser.error("oplus needs --a and --b")
    try:
        envelope = args.func(args)
    except (BranchBudgetExceeded, TrajectoryBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvariantViolation, DerivationMismatch) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (PreconditionFailed, PlusUndefined, NotEven, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = envelope.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
