"""Three-valued comparison tables encoding norms, and universal axiom checkers.

A weight function assigns each (element, threshold) pair one of "<", "=", ">".
A pseudo-norm induces one by exact comparison, and is recovered as the least
threshold carrying "<" or "=" (None when every row entry is ">", the
above-all-thresholds marker).

``check_axioms`` evaluates the universal schemas of three theories over the
finite threshold fragment:

* T_W      the weight-function conditions (monotonicity in the threshold,
           the zero row, inverse symmetry)
* T_IPMG   T_W plus the triangle schema and the invariance schema
* T_IMG    T_IPMG plus the norm axiom (zero row only at the identity)

Triangle instances with q + q' outside the threshold set are not expressible
in the fragment; they are skipped and accounted for in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .norms import NormTable

Symbol = str  # one of "<", "=", ">"

THEORIES = ("T_W", "T_IPMG", "T_IMG")


@dataclass(frozen=True)
class WeightFn:
    group: object  # anything with mul/inv/conj/identity_index/__len__
    thresholds: tuple[Fraction, ...]  # sorted, distinct
    rows: tuple[tuple[Symbol, ...], ...]  # rows[element][threshold index]

    def symbol(self, element: int, qi: int) -> Symbol:
        return self.rows[element][qi]

    def to_json(self) -> dict:
        return {
            "thresholds": [f"{q.numerator}/{q.denominator}" for q in self.thresholds],
            "rows": {str(i): list(row) for i, row in enumerate(self.rows)},
        }

    @staticmethod
    def from_json(group: object, doc: Mapping) -> "WeightFn":
        thresholds = tuple(Fraction(q) for q in doc["thresholds"])
        n = len(group)  # type: ignore[arg-type]
        rows: list[tuple[Symbol, ...]] = [()] * n
        for key, row in doc["rows"].items():
            rows[int(key)] = tuple(row)
        return WeightFn(group, thresholds, tuple(rows))


def _sign(value, q) -> Symbol:
    if value < q:
        return "<"
    if value == q:
        return "="
    return ">"


def from_norm(table: NormTable, thresholds: Sequence[Fraction | int]) -> WeightFn:
    """Comparison table of a norm against a finite threshold set (0 required)."""
    qs = tuple(sorted({Fraction(q) for q in thresholds}))
    if Fraction(0) not in qs:
        raise ValueError("threshold set must contain 0")
    rows = tuple(
        tuple(_sign(v, q) for q in qs) for v in table.values
    )
    return WeightFn(table.group, qs, rows)


def w_of(f: WeightFn) -> list[Fraction | None]:
    """Per element, the least threshold with symbol in {<, =}; None if none."""
    out: list[Fraction | None] = []
    for row in f.rows:
        value = None
        for q, sym in zip(f.thresholds, row):
            if sym in ("<", "="):
                value = q
                break
        out.append(value)
    return out


@dataclass
class AxiomReport:
    theory: str
    ok: bool
    violations: list[dict] = field(default_factory=list)
    evaluated: dict = field(default_factory=dict)
    skipped_triangle_pairs: list[tuple[str, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "theory": self.theory,
            "ok": self.ok,
            "violations": self.violations,
            "evaluated": self.evaluated,
            "skipped_triangle_pairs": [list(p) for p in self.skipped_triangle_pairs],
        }


def _fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def check_axioms(f: WeightFn, theory: str) -> AxiomReport:
    """Exhaustively evaluate every schema instance expressible over the
    thresholds; each violation carries a witness."""
    if theory not in THEORIES:
        raise ValueError(f"theory must be one of {THEORIES}")
    group = f.group
    n = len(group)  # type: ignore[arg-type]
    qs = f.thresholds
    report = AxiomReport(theory, True)
    violations = report.violations

    # T_W (1)/(2): threshold monotonicity
    checked = 0
    for g in range(n):
        row = f.rows[g]
        for a in range(len(qs)):
            for b in range(a + 1, len(qs)):
                checked += 1
                if row[a] in ("<", "=") and row[b] not in ("<", "="):
                    violations.append(
                        {"axiom": "W1", "g": g, "q": _fmt_q(qs[a]), "q2": _fmt_q(qs[b])}
                    )
                if row[b] in (">", "=") and row[a] not in (">", "="):
                    violations.append(
                        {"axiom": "W2", "g": g, "q": _fmt_q(qs[a]), "q2": _fmt_q(qs[b])}
                    )
    report.evaluated["monotonicity_instances"] = checked

    # T_W (3): the zero row
    zero_idx = qs.index(Fraction(0))
    ident = group.identity_index  # type: ignore[attr-defined]
    if f.rows[ident][zero_idx] != "=":
        violations.append({"axiom": "W3", "g": ident})
    for g in range(n):
        if f.rows[g][zero_idx] == "<":
            violations.append({"axiom": "W3", "g": g})

    # T_W (4): inverse symmetry
    for g in range(n):
        gi = group.inv(g)  # type: ignore[attr-defined]
        if f.rows[g] != f.rows[gi]:
            violations.append({"axiom": "W4", "g": g, "g_inv": gi})
    report.evaluated["inverse_instances"] = n

    if theory in ("T_IPMG", "T_IMG"):
        q_index = {q: i for i, q in enumerate(qs)}
        tri_checked = 0
        for a, qa in enumerate(qs):
            for b, qb in enumerate(qs):
                total = qa + qb
                if total not in q_index:
                    report.skipped_triangle_pairs.append((_fmt_q(qa), _fmt_q(qb)))
                    continue
                ti = q_index[total]
                for g in range(n):
                    if f.rows[g][a] not in ("<", "="):
                        continue
                    for h in range(n):
                        if f.rows[h][b] not in ("<", "="):
                            continue
                        tri_checked += 1
                        gh = group.mul(g, h)  # type: ignore[attr-defined]
                        if f.rows[gh][ti] not in ("<", "="):
                            violations.append(
                                {
                                    "axiom": "TRI",
                                    "g": g,
                                    "h": h,
                                    "q": _fmt_q(qa),
                                    "q2": _fmt_q(qb),
                                }
                            )
        report.evaluated["triangle_instances"] = tri_checked

        inv_checked = 0
        for g in range(n):
            for y in range(n):
                conj = group.conj(g, y)  # type: ignore[attr-defined]
                inv_checked += 1
                if f.rows[conj] != f.rows[g]:
                    violations.append({"axiom": "INV", "g": g, "y": y})
        report.evaluated["invariance_instances"] = inv_checked

    if theory == "T_IMG":
        for g in range(n):
            if g != ident and f.rows[g][zero_idx] in ("<", "="):
                violations.append({"axiom": "NORM", "g": g})

    report.ok = not violations
    return report
