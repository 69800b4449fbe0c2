"""Torsion-part factorizations through the shift generator: deciders + witnesses.

A shift-0 element h is a k-fold plus-commutator (k > 0) if it is a product of
k factors of the shape  F+(g) = g . alpha(g^-1),  a k-fold minus-commutator
(k < 0) if a product of |k| factors  F-(g) = alpha(g) . g^-1,  and a mixed
commutator if one factor of each shape, in either order.  Since
``F-(g) == F+(g)^-1`` regardless of commutativity, minus-side builders reduce
to plus-side builders on the inverse element.

Every builder returns a :class:`CommWitness` whose defining product is checked
by :func:`verify_witness` through plain element multiplication; nothing
downstream trusts a builder without that check.

Decision procedure for the mixed case, by support weight w (after compressing
the support to consecutive indices, which is harmless in both directions):

* w = 0: trivially yes;  w = 1: never (the two telescoping factor conditions
  force the single remaining value to cancel);
* w = 2: yes iff the second value is conjugate to the inverse of the first;
* w = 3: yes iff the class-product predicate xi holds on the value triple
  (argument variant switchable, see ``XI_VARIANTS``);
* w >= 4: always, provided the base group satisfies S3.

Two candidate argument conventions exist for the weight-3 test,
xi(h1, h2, h3) ("direct") and xi(h1^-1, h2^-1, h3) ("inverted"); both sit
behind ``variant``.  They agree on any group whose classes are closed under
inversion (A5, S3) and are separated by cyclic base groups; exhaustive
small-window searches pin "direct" as the correct one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .groups import FiniteGroup
from .lamp import LampElem
from .props import SolverError, require_statements, solve_S1_instance, solve_S2_instance, solve_S3_instance, xi

XI_VARIANTS = ("direct", "inverted")
PmOrder = Literal["+-", "-+"]


@dataclass(frozen=True)
class CommWitness:
    """Certificate that an element factors through shift-conjugate generators.

    ``kind`` is ``("k", k)`` with k != 0, or ``("pm", "+-")`` / ``("pm", "-+")``
    for the mixed forms.  ``vectors`` are the shift-0 elements fed to the
    factor maps.
    """

    kind: tuple[str, int] | tuple[str, str]
    vectors: tuple[LampElem, ...]

    def to_json(self) -> dict:
        tag, val = self.kind
        head = {"k": val} if tag == "k" else {"pm": val}
        return {"kind": head, "vectors": [v.to_json() for v in self.vectors]}

    @staticmethod
    def from_json(base: FiniteGroup, doc: dict) -> "CommWitness":
        head = doc["kind"]
        kind = ("k", int(head["k"])) if "k" in head else ("pm", str(head["pm"]))
        vectors = tuple(LampElem.from_json(base, v) for v in doc["vectors"])
        return CommWitness(kind, vectors)


def factor_plus(g: LampElem) -> LampElem:
    """g . alpha(g^-1), the conjugate-of-t torsion factor."""
    return g.mul(g.inverse().alpha(1))


def factor_minus(g: LampElem) -> LampElem:
    """alpha(g) . g^-1 == factor_plus(g)^-1."""
    return g.alpha(1).mul(g.inverse())


def evaluate_witness(w: CommWitness) -> LampElem:
    if not w.vectors:
        raise ValueError("witness needs at least one vector")
    for v in w.vectors:
        if v.shift != 0:
            raise ValueError("witness vectors must have shift 0")
    tag, val = w.kind
    if tag == "k":
        k = int(val)
        if abs(k) != len(w.vectors) or k == 0:
            raise ValueError("vector count must match |k|")
        fac = factor_plus if k > 0 else factor_minus
        parts = [fac(v) for v in w.vectors]
    else:
        if len(w.vectors) != 2:
            raise ValueError("mixed witnesses take exactly two vectors")
        g1, g2 = w.vectors
        if val == "+-":
            parts = [factor_plus(g1), factor_minus(g2)]
        elif val == "-+":
            parts = [factor_minus(g1), factor_plus(g2)]
        else:
            raise ValueError(f"unknown mixed order {val!r}")
    acc = parts[0]
    for p in parts[1:]:
        acc = acc.mul(p)
    return acc


def verify_witness(h: LampElem, w: CommWitness) -> bool:
    """True iff the witness's defining product multiplies out to h."""
    if h.shift != 0:
        return False
    return evaluate_witness(w) == h


# -- support compression / transport ------------------------------------------


class TransportError(RuntimeError):
    """Transported witness failed re-verification."""


def _pullback(vec: LampElem, old: Sequence[int], new: Sequence[int]) -> LampElem:
    """Re-index a witness vector along the anchor map old -> new.

    Each new coordinate pulls its value from the nearest old anchor at or
    above it, with rigid translation outside the anchor range.  This is the
    partial-shift composite in closed form.
    """
    base = vec.base
    support = {}
    for y in _relevant_positions(vec, old, new):
        v = vec.value_at(_sigma(y, old, new))
        if v != base.identity_index:
            support[y] = v
    return LampElem.make(base, support, 0, vec.window)


def _sigma(y: int, old: Sequence[int], new: Sequence[int]) -> int:
    # Positions between anchors attach rigidly above the lower anchor and the
    # spread slack replicates the upper anchor's value, clamped so interior
    # gap blocks of the old window travel unchanged.
    if y <= new[0]:
        return old[0] + (y - new[0])
    for j in range(1, len(new)):
        if y <= new[j]:
            return min(old[j - 1] + (y - new[j - 1]), old[j])
    return old[-1] + (y - new[-1])


def _relevant_positions(
    vec: LampElem, old: Sequence[int], new: Sequence[int]
) -> range:
    if not vec.support:
        return range(0)
    v_lo = vec.support_indices()[0]
    v_hi = vec.support_indices()[-1]
    lo = min(new[0] - (old[0] - v_lo), new[0])
    hi = max(new[-1] + (v_hi - old[-1]), new[-1])
    return range(lo, hi + 1)


def transport(
    w: CommWitness, old_indices: Sequence[int], new_indices: Sequence[int]
) -> CommWitness:
    """Carry a witness from an element supported on old_indices to new_indices.

    The target's values are re-placed at the new indices; the returned witness
    is re-verified against that element and a :class:`TransportError` is
    raised if the index maps cannot carry this particular witness (possible
    only when compressing a witness that is not constant between anchors).
    """
    old = list(old_indices)
    new = list(new_indices)
    if len(old) != len(new):
        raise ValueError("index sequences must have equal length")
    if any(a >= b for a, b in zip(old, old[1:])) or any(
        a >= b for a, b in zip(new, new[1:])
    ):
        raise ValueError("index sequences must be strictly increasing")
    product = evaluate_witness(w)
    if not set(product.support_indices()) <= set(old):
        raise ValueError("witness product is not supported on old_indices")
    base = product.base
    target = LampElem.make(
        base,
        {n: product.value_at(o) for o, n in zip(old, new)},
        0,
        product.window,
    )
    moved = CommWitness(w.kind, tuple(_pullback(v, old, new) for v in w.vectors))
    if evaluate_witness(moved) != target:
        raise TransportError("witness does not survive this re-indexing")
    return moved


# -- single-sign decompositions ------------------------------------------------


def build_pm1_decomposition(
    h: LampElem, sign: int
) -> tuple[CommWitness, LampElem]:
    """Split h (shift 0) as (single-factor witness) * residual single support.

    The residual sits at the top support index; for the identity both parts
    are trivial.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if h.shift != 0:
        raise ValueError("decomposition applies to shift-0 elements")
    base = h.base
    if not h.support:
        return (
            CommWitness(("k", sign), (LampElem.identity(base, h.window),)),
            LampElem.identity(base, h.window),
        )
    lo = h.support_indices()[0]
    hi = h.support_indices()[-1]
    values = [h.value_at(i) for i in range(lo, hi + 1)]
    g: dict[int, int] = {}
    prev = base.identity_index
    for j, v in enumerate(values[:-1], start=1):
        # plus:  g_{j+1} = v_j^-1 g_j ;  minus:  g_{j+1} = v_j g_j
        prev = base.mul(base.inv(v), prev) if sign == 1 else base.mul(v, prev)
        g[lo + j] = prev
    top = values[-1]
    residual_val = (
        base.mul(base.inv(prev), top) if sign == 1 else base.mul(prev, top)
    )
    witness = CommWitness(("k", sign), (LampElem.make(base, g, 0, h.window),))
    residual = LampElem.make(base, {hi: residual_val}, 0, h.window)
    return witness, residual


def build_2_commutator(h: LampElem, sign: int) -> CommWitness:
    """Express any shift-0 h with two factors of one sign (needs S1 and S2)."""
    if sign == -1:
        w = build_2_commutator(h.inverse(), 1)
        return CommWitness(("k", -2), (w.vectors[1], w.vectors[0]))
    if sign != 1:
        raise ValueError("sign must be +1 or -1")
    if h.shift != 0:
        raise ValueError("2-commutator builders apply to shift-0 elements")
    base = h.base
    require_statements(base, ("S1", "S2"))
    if not h.support:
        ident = LampElem.identity(base, h.window)
        return CommWitness(("k", 2), (ident, ident))
    lo = h.support_indices()[0]
    hi = h.support_indices()[-1]
    values = [h.value_at(i) for i in range(lo, hi + 1)]
    if len(values) % 2:
        # pad below so the factors stay within one step of the support
        values.insert(0, base.identity_index)
        lo -= 1
    g1: dict[int, int] = {}
    g2: dict[int, int] = {}
    x, y = solve_S1_instance(base, values[0], values[1])
    g1[lo + 1] = base.mul(base.inv(x), base.inv(values[0]))
    g1[lo + 2] = base.inv(y)
    g2[lo + 1] = x
    g2[lo + 2] = y
    carry = y
    for j in range(2, len(values), 2):
        z, u, v = solve_S2_instance(base, values[j], values[j + 1], carry)
        g1[lo + j + 1] = base.inv(z)
        g1[lo + j + 2] = base.inv(v)
        g2[lo + j + 1] = base.inv(u)
        g2[lo + j + 2] = v
        carry = v
    return CommWitness(
        ("k", 2),
        (
            LampElem.make(base, g1, 0, h.window),
            LampElem.make(base, g2, 0, h.window),
        ),
    )


# -- the mixed-commutator decision --------------------------------------------


def is_pm_commutator(h: LampElem, variant: str = "direct") -> bool:
    """Decide the mixed-commutator property from the ordered support values."""
    if variant not in XI_VARIANTS:
        raise ValueError(f"variant must be one of {XI_VARIANTS}")
    if h.shift != 0:
        raise ValueError("the mixed-commutator property applies at shift 0")
    base = h.base
    values = h.support_values()
    w = len(values)
    if w == 0:
        return True
    if w == 1:
        return False
    if w == 2:
        v1, v2 = values
        return base.first_conjugator(base.inv(v1), v2) is not None
    if w == 3:
        return _xi_variant(base, values, variant)
    require_statements(base, ("S3",))
    return True


def _xi_variant(base: FiniteGroup, values: Sequence[int], variant: str) -> bool:
    v1, v2, v3 = values
    if variant == "direct":
        return xi(base, v1, v2, v3)
    return xi(base, base.inv(v1), base.inv(v2), v3)


def reverse_element(x: LampElem, about: int = 0) -> LampElem:
    """Pointwise index reversal i -> about - i (values untouched).

    Reversal is multiplicative on shift-0 elements and swaps the two factor
    shapes: reversing a minus-factor about c gives the plus-factor of the
    vector reversed about c + 1.
    """
    if x.shift != 0:
        raise ValueError("reversal applies to shift-0 elements")
    return LampElem.make(
        x.base, {about - i: v for i, v in x.support}, 0, x.window
    )


def build_pm_commutator(h: LampElem, order: PmOrder = "-+") -> CommWitness:
    """Construct a verifying mixed witness; raises SolverError when h has none.

    All construction happens on the compressed support 1..w and is transported
    back, so the emitted vectors live within one step of the support of h.
    Only the "-+" order is built directly; "+-" comes from index reversal,
    which exchanges the factor shapes.
    """
    if order == "+-":
        w = build_pm_commutator(reverse_element(h, 0), "-+")
        g1, g2 = w.vectors
        return CommWitness(
            ("pm", "+-"), (reverse_element(g1, 1), reverse_element(g2, 1))
        )
    if order != "-+":
        raise ValueError("order must be '+-' or '-+'")
    if h.shift != 0:
        raise ValueError("mixed commutators have shift 0")
    base = h.base
    indices = list(h.support_indices())
    values = list(h.support_values())
    w = len(values)
    if w == 0:
        ident = LampElem.identity(base, h.window)
        return CommWitness(("pm", "-+"), (ident, ident))
    if w == 1:
        raise SolverError("single supports are never mixed commutators")
    compact = list(range(1, w + 1))
    witness = _build_pm_compressed(base, values, h.window)
    if indices != compact:
        witness = transport(witness, compact, indices)
    return witness


def _build_pm_compressed(
    base: FiniteGroup, values: Sequence[int], window: int | None
) -> CommWitness:
    if len(values) == 2:
        v1, v2 = values
        c = base.first_conjugator(base.inv(v1), v2)
        if c is None:
            raise SolverError("weight-2 instance fails the conjugacy condition")
        g1 = LampElem.make(base, {2: base.mul(v1, c)}, 0, window)
        g2 = LampElem.make(base, {2: c}, 0, window)
        return CommWitness(("pm", "-+"), (g1, g2))
    if len(values) == 3:
        return _build_pm_weight3(base, values, window)
    return _build_pm_weight4plus(base, values, window)


def _build_pm_weight3(
    base: FiniteGroup, values: Sequence[int], window: int | None
) -> CommWitness:
    v1, v2, v3 = values
    iv1, iv2 = base.inv(v1), base.inv(v2)
    solution = None
    for x in range(len(base)):
        target = base.mul(base.inv(base.conj(iv2, x)), v3)
        y = base.first_conjugator(iv1, target)
        if y is not None:
            solution = (x, y)
            break
    if solution is None:
        raise SolverError("weight-3 instance fails the class-product condition")
    x, y = solution
    a, b = y, x
    c = base.mul(iv1, a)
    d = base.mul_many((iv2, b, base.inv(a), iv1, a))
    g1 = LampElem.make(base, {2: a, 3: b}, 0, window)
    g2 = LampElem.make(base, {2: c, 3: d}, 0, window)
    return CommWitness(("pm", "-+"), (g1, g2))


def _build_pm_weight4plus(
    base: FiniteGroup, values: Sequence[int], window: int | None
) -> CommWitness:
    require_statements(base, ("S3",))
    n = len(values)
    ident = base.identity_index
    if any(v == ident for v in values):
        raise ValueError("compressed support values must be non-trivial")
    target = values[-1]
    picks: dict[int, int] = {}
    for m in range(n, 4, -1):
        chosen = None
        for a in range(len(base)):
            nxt = base.mul(base.conj(values[m - 2], a), target)
            if nxt != ident:
                chosen = (a, nxt)
                break
        if chosen is None:
            raise SolverError("cannot keep the reduction target non-trivial")
        picks[m], target = chosen
    x, y, z = solve_S3_instance(
        base,
        base.inv(values[2]),
        base.inv(values[1]),
        base.inv(values[0]),
        target,
    )
    a_of = {2: z, 3: y, 4: x, **picks}
    g1 = {j: a_of[j] for j in range(2, n + 1)}
    g2: dict[int, int] = {}
    carry = base.conj(base.inv(values[0]), a_of[2])  # c_2
    g2[2] = base.mul(a_of[2], carry)
    for j in range(3, n + 1):
        carry = base.mul(base.conj(base.inv(values[j - 2]), a_of[j]), carry)
        g2[j] = base.mul(a_of[j], carry)
    if carry != values[-1]:
        raise SolverError("chain reduction failed to close")
    return CommWitness(
        ("pm", "-+"),
        (
            LampElem.make(base, g1, 0, window),
            LampElem.make(base, g2, 0, window),
        ),
    )


def extend_witness(w: CommWitness) -> CommWitness:
    """Append a trivial vector: a [k,t]-witness becomes a [k+sign,t]-witness."""
    tag, val = w.kind
    if tag != "k":
        raise ValueError("only k-witnesses extend")
    k = int(val)
    ident = LampElem.identity(w.vectors[0].base, w.vectors[0].window)
    new_k = k + 1 if k > 0 else k - 1
    return CommWitness(("k", new_k), w.vectors + (ident,))
