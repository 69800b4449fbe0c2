"""Closed-form invariant word norm on the shift extension, and its finite images.

The norm is taken over the conjugacy closure of (copies of the base group at
each index) together with the shift generator and its inverse.  Its value
depends only on the shift and on cheap predicates of the torsion part:

    0            identity
    1            single support, shift 0
    2            weight 2, shift 0
    2            shift 0 and a mixed commutator
    3            shift 0, weight 3, not a mixed commutator
    1            shift +-1 with telescoping torsion (the element lies in T+-)
    2            shift +-1 otherwise
    |m|          |shift| = |m| > 1

The same case table evaluates on truncations with cyclic predicates.  Windows
of size >= 7 with a base satisfying S1-S4 run in "theory" mode, mirroring the
window margins of the almost-homomorphism construction; smaller windows run in
"oracle" mode where the value is advisory and breadth-first search over the
actual Cayley graph is authoritative.  Full-support torsion in oracle mode is
decided by capped exhaustive search over factor pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product
from typing import Callable, Iterable, Sequence

from .commutators import (
    SolverError,
    build_2_commutator,
    build_pm1_decomposition,
    build_pm_commutator,
    factor_minus,
    factor_plus,
    is_pm_commutator,
)
from .groups import CapExceededError, FiniteGroup
from .lamp import LampElem, in_Sbar, in_Tminus, in_Tplus
from .props import require_statements, satisfies_s_conditions, xi

RESOLVED_XI_VARIANT = "direct"
"""Argument variant of xi used in the weight-3 branch.

The direct variant xi(h1, h2, h3) and the inverted variant
xi(h1^-1, h2^-1, h3) coincide on bases whose classes are inverse-closed; the
exhaustive small-window equivalence test over a cyclic base separates them
and confirms the direct one.
"""

PM_SEARCH_CAP = 2_000_000


def _torsion(g: LampElem) -> LampElem:
    return LampElem.make(g.base, dict(g.support), 0, g.window)


def norm_gz(g: LampElem, variant: str = RESOLVED_XI_VARIANT) -> int:
    """Exact word norm in the infinite-mode group (base must satisfy S1-S4)."""
    if g.window is not None:
        raise ValueError("norm_gz expects infinite mode; see norm_truncated")
    require_statements(g.base, ("S1", "S2", "S3", "S4"))
    m, w = g.shift, g.weight()
    if m == 0:
        if w == 0:
            return 0
        if w == 1:
            return 1
        if w == 2:
            return 2
        return 2 if is_pm_commutator(_torsion(g), variant) else 3
    if abs(m) == 1:
        return 1 if (in_Tplus(g) or in_Tminus(g)) else 2
    return abs(m)


def norm_truncated(
    g: LampElem, mode: str = "auto", variant: str = RESOLVED_XI_VARIANT
) -> int:
    """Case-table norm on a truncation, with cyclic predicates.

    ``mode`` is "theory" (window >= 7, base satisfying S1-S4: the value is the
    exact norm for elements within the window margins of the truncation map),
    "oracle" (advisory; BFS is authoritative), or "auto" to pick by window
    size.
    """
    if g.window is None:
        raise ValueError("norm_truncated expects a truncated element")
    width = 2 * g.window + 1
    if mode == "auto":
        mode = "theory" if width >= 7 and satisfies_s_conditions(g.base) else "oracle"
    if mode == "theory":
        if width < 7:
            raise ValueError("theory mode needs window size >= 7")
        require_statements(g.base, ("S1", "S2", "S3", "S4"))
    elif mode != "oracle":
        raise ValueError("mode must be 'auto', 'theory' or 'oracle'")
    m, w = g.shift, g.weight()
    if m == 0:
        if w == 0:
            return 0
        if w == 1:
            return 1
        if w == 2:
            return 2
        return 2 if pm_commutator_truncated(_torsion(g), variant) else 3
    if abs(m) == 1:
        return 1 if (in_Tplus(g) or in_Tminus(g)) else 2
    return abs(m)


def pm_commutator_truncated(
    h: LampElem, variant: str = RESOLVED_XI_VARIANT, cap: int = PM_SEARCH_CAP
) -> bool:
    """Mixed-commutator test with cyclic index arithmetic.

    With a gap in the support the circle can be cut there and the acyclic
    decision applies (the class-product predicate is invariant under cyclic
    rotation of its arguments, so the cut position does not matter).  With
    full support the question wraps; weight >= 4 over an S3 base is always
    yes, and everything else falls back to capped exhaustive search over
    factor pairs.
    """
    if h.window is None or h.shift != 0:
        raise ValueError("expects a shift-0 truncated element")
    base = h.base
    width = 2 * h.window + 1
    w = h.weight()
    if w == 0:
        return True
    if w == 1:
        return False
    if w == 2:
        v1, v2 = h.support_values()
        return base.first_conjugator(base.inv(v1), v2) is not None
    if w < width:
        if w == 3:
            v1, v2, v3 = h.support_values()
            if variant == "direct":
                return xi(base, v1, v2, v3)
            return xi(base, base.inv(v1), base.inv(v2), v3)
        if _has_s3(base):
            return True
        return _pm_cyclic_exhaustive(h, cap) is not None
    if w >= 4 and _has_s3(base):
        return True
    return _pm_cyclic_exhaustive(h, cap) is not None


def _has_s3(base: FiniteGroup) -> bool:
    try:
        require_statements(base, ("S3",))
        return True
    except ValueError:
        return False


def _pm_cyclic_exhaustive(
    h: LampElem, cap: int = PM_SEARCH_CAP
) -> tuple[str, LampElem, LampElem] | None:
    """Search factor pairs u, v with h = u.v pointwise, for both sign orders.

    A "-+" pair needs the decreasing cyclic product of u and the increasing
    cyclic product of v to vanish; "+-" mirrors this.  Returns (order, u, v)
    for the first hit in lexicographic order over the free digits, or None.
    """
    base = h.base
    n = h.window
    assert n is not None
    width = 2 * n + 1
    total = len(base) ** (width - 1)
    if total > cap:
        raise CapExceededError(f"cyclic factor search would visit {total} states")
    positions = list(range(-n, n + 1))
    hvals = [h.value_at(i) for i in positions]
    ident = base.identity_index
    for order in ("-+", "+-"):
        for choice in iter_product(range(len(base)), repeat=width - 1):
            u_vals = list(choice)
            if order == "-+":
                # close the decreasing product u_n ... u_{-n} to the identity
                u_vals.append(base.inv(base.mul_many(reversed(u_vals))))
            else:
                u_vals.append(base.inv(base.mul_many(u_vals)))
            v_vals = [base.mul(base.inv(a), b) for a, b in zip(u_vals, hvals)]
            if order == "-+":
                ok = base.mul_many(v_vals) == ident
            else:
                ok = base.mul_many(reversed(v_vals)) == ident
            if ok:
                u_elem = LampElem.make(base, dict(zip(positions, u_vals)), 0, n)
                v_elem = LampElem.make(base, dict(zip(positions, v_vals)), 0, n)
                return order, u_elem, v_elem
    return None


# -- geodesics -----------------------------------------------------------------


@dataclass(frozen=True)
class Geodesic:
    """A factorization of the target into generating-set members.

    Invariants (re-checked by :func:`check_geodesic`): every factor satisfies
    the membership predicate, the factors multiply to the target, the length
    equals the case-table norm, and in infinite mode each factor's support
    stays within two steps of the target's support.
    """

    target: LampElem
    factors: tuple[LampElem, ...]

    def __len__(self) -> int:
        return len(self.factors)


def geodesic(g: LampElem, variant: str = RESOLVED_XI_VARIANT) -> Geodesic:
    """Geodesic factorization realizing the case-table norm."""
    base = g.base
    window = g.window
    t = LampElem.t_power(base, 1, window)
    t_inv = LampElem.t_power(base, -1, window)
    m, w = g.shift, g.weight()
    if window is None:
        norm = norm_gz(g, variant)
    else:
        norm = norm_truncated(g, variant=variant)
    if norm == 0:
        return Geodesic(g, ())
    if norm == 1:
        return Geodesic(g, (g,))
    torsion = _torsion(g)
    if m == 0:
        if w == 2:
            singles = tuple(
                LampElem.make(base, {i: v}, 0, window) for i, v in g.support
            )
            return Geodesic(g, singles)
        if norm == 2:
            order, u, v = _pm_witness_factors(torsion, variant)
            if order == "-+":
                s1 = u.mul(t_inv)
                s2 = v.alpha(1).mul(t)
            else:
                s1 = u.mul(t)
                s2 = v.alpha(-1).mul(t_inv)
            return Geodesic(g, (s1, s2))
        if w > 3:
            raise ValueError(
                "no length-3 factorization for a non-mixed element of weight > 3"
            )
        singles = tuple(
            LampElem.make(base, {i: v}, 0, window) for i, v in g.support
        )
        return Geodesic(g, singles)
    if m == 1:
        witness, residual = build_pm1_decomposition(torsion, 1)
        s1 = factor_plus(witness.vectors[0]).mul(t)
        return Geodesic(g, (s1, residual.alpha(-1)))
    if m == -1:
        witness, residual = build_pm1_decomposition(torsion, -1)
        s1 = factor_minus(witness.vectors[0]).mul(t_inv)
        return Geodesic(g, (s1, residual.alpha(1)))
    if window is not None and g.support:
        # the two-factor construction writes one index above the support (and
        # may pad one below) and must not wrap; truncation-map images always
        # leave this margin
        lo, hi = g.support_indices()[0], g.support_indices()[-1]
        lo -= (hi - lo + 1) % 2
        if hi + 1 > window or lo < -window:
            raise ValueError("torsion too wide for a geodesic in this window")
    if m > 1:
        w2 = build_2_commutator(torsion, 1)
        s1 = factor_plus(w2.vectors[0]).mul(t)
        s2 = factor_plus(w2.vectors[1]).alpha(-1).mul(t)
        return Geodesic(g, (s1, s2) + (t,) * (m - 2))
    w2 = build_2_commutator(torsion, -1)
    s1 = factor_minus(w2.vectors[0]).mul(t_inv)
    s2 = factor_minus(w2.vectors[1]).alpha(1).mul(t_inv)
    return Geodesic(g, (s1, s2) + (t_inv,) * (-m - 2))


def _pm_witness_factors(
    h: LampElem, variant: str
) -> tuple[str, LampElem, LampElem]:
    """Factor pair (order, u, v) with h = u*v pointwise.

    For order "-+" the vector u has vanishing decreasing product (it feeds a
    t^-1 conjugate) and v vanishing increasing product; "+-" mirrors this.
    Only called when the corresponding norm branch already decided the element
    is a mixed commutator.
    """
    if h.window is None:
        witness = build_pm_commutator(h, "-+")
        g1, g2 = witness.vectors
        return "-+", factor_minus(g1), factor_plus(g2)
    n = h.window
    if h.weight() == 2 * n + 1:
        found = _pm_cyclic_exhaustive(h)
        if found is None:
            raise SolverError("not a mixed commutator (cyclic search exhausted)")
        return found
    # Rotate a free position onto the window top so the acyclic construction
    # has one spare index, build there, and rotate back.
    free = next(q for q in range(-n, n + 1) if h.value_at(q) == h.base.identity_index)
    r = free - n
    rotated = h.alpha(r)
    infinite = LampElem.make(h.base, dict(rotated.support), 0, None)
    witness = build_pm_commutator(infinite, "-+")
    g1, g2 = (
        LampElem.make(h.base, dict(vec.support), 0, n).alpha(-r)
        for vec in witness.vectors
    )
    return "-+", factor_minus(g1), factor_plus(g2)


def check_geodesic(geo: Geodesic, expect_support_bounds: bool = True) -> bool:
    g = geo.target
    acc = LampElem.identity(g.base, g.window)
    for s in geo.factors:
        if not in_Sbar(s):
            return False
        acc = acc.mul(s)
    if acc != g:
        return False
    if expect_support_bounds and g.window is None and g.support:
        lo = g.support_indices()[0] - 2
        hi = g.support_indices()[-1] + 2
        for s in geo.factors:
            if s.support and (
                s.support_indices()[0] < lo or s.support_indices()[-1] > hi
            ):
                return False
    return True


# -- the truncation almost-homomorphism ----------------------------------------


def truncate_map(g: LampElem, window: int, bound: int) -> LampElem:
    """Send g to the window-truncation if its extent is within bound, else 1."""
    if g.window is not None:
        raise ValueError("truncate_map applies to infinite-mode elements")
    if g.stats().n_value <= bound:
        return LampElem.make(g.base, dict(g.support), g.shift, window)
    return LampElem.identity(g.base, window)


def phi(g: LampElem, big_n: int) -> LampElem:
    """The standard almost-homomorphism into the window-(2N+3) truncation."""
    return truncate_map(g, 2 * big_n + 3, 2 * big_n + 2)


def max_extent(elems: Iterable[LampElem]) -> int:
    return max((e.stats().n_value for e in elems), default=0)


@dataclass
class AlmostHomReport:
    injective_on_k: bool
    multiplicative_ok: bool
    comparisons: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.injective_on_k and self.multiplicative_ok and not any(
            not row["ok"] for row in self.comparisons
        )

    def to_json(self) -> dict:
        return {
            "injective_on_K": self.injective_on_k,
            "multiplicative_triples_ok": self.multiplicative_ok,
            "comparisons": self.comparisons,
            "failures": self.failures,
            "ok": self.ok,
        }


def _symbol(value, q) -> str:
    if value < q:
        return "<"
    if value == q:
        return "="
    return ">"


def verify_KQ_almost_hom(
    phi_map: Callable[[LampElem], LampElem],
    k_set: Sequence[LampElem],
    q_set: Sequence[Fraction | int],
    ell_source: Callable[[LampElem], Fraction | int],
    ell_target: Callable[[LampElem], Fraction | int],
) -> AlmostHomReport:
    """Check injectivity on K, multiplicativity on triples in K, and that all
    comparisons of the two norms against the thresholds in Q agree."""
    qs = [Fraction(q) for q in q_set]
    if Fraction(0) not in qs:
        raise ValueError("Q must contain 0")
    k_list = list(dict.fromkeys(k_set))
    images = [phi_map(g) for g in k_list]
    report = AlmostHomReport(True, True)
    if len(set(images)) != len(images):
        report.injective_on_k = False
        report.failures.append({"kind": "injectivity"})
    k_index = {g: i for i, g in enumerate(k_list)}
    for a_i, a in enumerate(k_list):
        for b_i, b in enumerate(k_list):
            c = a.mul(b)
            if c in k_index:
                if phi_map(c) != images[a_i].mul(images[b_i]):
                    report.multiplicative_ok = False
                    report.failures.append(
                        {"kind": "multiplicativity", "h": a_i, "g": b_i}
                    )
    for g_i, (g, image) in enumerate(zip(k_list, images)):
        src_val = ell_source(g)
        tgt_val = ell_target(image)
        for q in qs:
            src, tgt = _symbol(src_val, q), _symbol(tgt_val, q)
            row = {
                "g": g_i,
                "q": f"{q.numerator}/{q.denominator}",
                "source": src,
                "target": tgt,
                "ok": src == tgt,
            }
            report.comparisons.append(row)
            if src != tgt:
                report.failures.append({"kind": "comparison", **row})
    return report
