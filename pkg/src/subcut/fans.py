"""Upper and lower fans and their compilation into quadratic gadgets.

An upper fan is determined by a family of pairwise incomparable subsets of the
variables whose pairwise unions all coincide; its table takes the value -2 on
points above the union of the family, -1 on points above some single member,
and 0 elsewhere.  Lower fans are the 0/1-exchanged duals.  Every fan can be
expressed as a projection (minimisation over hidden variables) of a quadratic
submodular polynomial; ``fan_gadget`` builds that polynomial with at most
``1 + floor(m/2)`` hidden variables, where m is the degree of the fan's
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from . import pb_core
from .pb_core import (
    CostTable,
    PseudoBooleanFunction,
    polynomial_from_json,
    polynomial_to_json,
    vars_to_mask,
)
from .rational import format_fraction, parse_fraction

UPPER = "upper"
LOWER = "lower"


def _canon_family(family: Iterable[Iterable[int]]) -> Tuple[FrozenSet[int], ...]:
    members = [frozenset(m) for m in family]
    return tuple(sorted(members, key=lambda s: (len(s), sorted(s))))


@dataclass(frozen=True)
class FanSpec:
    """Defining data of a fan: orientation plus the member family."""

    orientation: str
    arity: int
    family: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        if self.orientation not in (UPPER, LOWER):
            raise ValueError(f"orientation must be 'upper' or 'lower', got {self.orientation!r}")
        if not (1 <= self.arity <= pb_core.MAX_ARITY):
            raise ValueError(f"bad fan arity {self.arity}")
        object.__setattr__(self, "family", _canon_family(self.family))
        for member in self.family:
            for v in member:
                if not (1 <= v <= self.arity):
                    raise ValueError(f"family member uses variable {v} beyond arity {self.arity}")
        if len(set(self.family)) != len(self.family):
            raise ValueError("family members must be distinct")

    @property
    def support(self) -> FrozenSet[int]:
        """Union of the family (the variables the fan actually depends on)."""
        out: FrozenSet[int] = frozenset()
        for member in self.family:
            out |= member
        return out


@dataclass(frozen=True)
class Gadget:
    """A quadratic submodular polynomial over visible + hidden variables.

    Minimising ``quadratic`` over the hidden variables and adding ``kappa``
    reproduces the target table exactly.
    """

    quadratic: PseudoBooleanFunction
    hidden: Tuple[int, ...]
    kappa: Fraction

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(self.hidden))
        object.__setattr__(self, "kappa", Fraction(self.kappa))

    @property
    def visible_arity(self) -> int:
        return self.quadratic.arity - len(self.hidden)

    def projection(self) -> CostTable:
        """The expressed table: project over hidden variables, add kappa."""
        if self.hidden:
            base = pb_core.project(self.quadratic, self.hidden)
        else:
            base = pb_core.zeta(self.quadratic)
        return CostTable(base.arity, tuple(v + self.kappa for v in base.values))


def validate_fan(spec: FanSpec) -> bool:
    """Check pairwise incomparability and the equal-joins/meets condition."""
    family = spec.family
    for a, b in combinations(family, 2):
        if a <= b or b <= a:
            return False
    if len(family) >= 2:
        if spec.orientation == UPPER:
            union = spec.support
            for a, b in combinations(family, 2):
                if a | b != union:
                    return False
        else:
            meet = frozenset.intersection(*family)
            for a, b in combinations(family, 2):
                if a & b != meet:
                    return False
    return True


def mirror_fan(spec: FanSpec) -> FanSpec:
    """The 0/1-exchanged twin: complement every member, flip orientation."""
    ground = frozenset(range(1, spec.arity + 1))
    return FanSpec(
        LOWER if spec.orientation == UPPER else UPPER,
        spec.arity,
        tuple(ground - m for m in spec.family),
    )


def fan_table(spec: FanSpec) -> CostTable:
    """Tabulate the fan's -2 / -1 / 0 case definition."""
    if not validate_fan(spec):
        raise ValueError(f"invalid fan {spec}")
    n = spec.arity
    values = []
    if spec.orientation == UPPER:
        top = spec.support
        for x in range(1 << n):
            ones = frozenset(v for v in range(1, n + 1) if x & (1 << (n - v)))
            if top <= ones:
                values.append(Fraction(-2))
            elif any(m <= ones for m in spec.family):
                values.append(Fraction(-1))
            else:
                values.append(Fraction(0))
    else:
        if spec.family:
            bottom = frozenset.intersection(*spec.family)
        else:
            bottom = frozenset(range(1, n + 1))
        for x in range(1 << n):
            ones = frozenset(v for v in range(1, n + 1) if x & (1 << (n - v)))
            if ones <= bottom:
                values.append(Fraction(-2))
            elif any(ones <= m for m in spec.family):
                values.append(Fraction(-1))
            else:
                values.append(Fraction(0))
    return CostTable(n, tuple(values))


def fan_polynomial(spec: FanSpec) -> PseudoBooleanFunction:
    """Polynomial form: (r-2) * prod over the support minus one monomial per
    member.  Lower fans are obtained by dualising the mirrored upper fan."""
    if not validate_fan(spec):
        raise ValueError(f"invalid fan {spec}")
    if spec.orientation == LOWER:
        return pb_core.dual(fan_polynomial(mirror_fan(spec)))
    r = len(spec.family)
    terms: Dict[int, Fraction] = {}
    top_mask = vars_to_mask(spec.support)
    terms[top_mask] = Fraction(r - 2)
    for member in spec.family:
        mask = vars_to_mask(member)
        terms[mask] = terms.get(mask, Fraction(0)) - 1
    return PseudoBooleanFunction(spec.arity, terms)


def merge_equivalence_classes(
    spec: FanSpec,
) -> Tuple[FanSpec, Tuple[FrozenSet[int], ...]]:
    """Group support elements with identical membership patterns.

    Only meaningful for upper fans with at least two members; the reduced
    family over one representative per class has every member of size
    ``m' - 1`` where m' is the number of classes.
    """
    if spec.orientation != UPPER:
        raise ValueError("merging applies to upper fans (mirror lower fans first)")
    if len(spec.family) < 2:
        raise ValueError("merging needs a family with at least two members")
    if not validate_fan(spec):
        raise ValueError(f"invalid fan {spec}")
    pattern: Dict[FrozenSet[int], List[int]] = {}
    for v in sorted(spec.support):
        key = frozenset(i for i, member in enumerate(spec.family) if v in member)
        pattern.setdefault(key, []).append(v)
    classes = tuple(sorted((frozenset(g) for g in pattern.values()), key=min))
    rep = {cls: min(cls) for cls in classes}
    reduced_family = []
    for member in spec.family:
        reduced_family.append(frozenset(rep[cls] for cls in classes if cls <= member))
    reduced = FanSpec(UPPER, spec.arity, tuple(reduced_family))
    return reduced, classes


def negative_monomial_gadget(variables: Iterable[int], weight, arity: int | None = None) -> Gadget:
    """Express -w * prod(x_i) with one hidden variable y:
    min_y  w*y*((|I|-1) - sum x_i)."""
    members = sorted(set(variables))
    if not members:
        raise ValueError("monomial needs at least one variable")
    w = Fraction(weight)
    if w <= 0:
        raise ValueError(f"weight must be positive, got {w}")
    n = arity if arity is not None else max(members)
    if max(members) > n:
        raise ValueError("variable index beyond arity")
    y = n + 1
    terms: Dict[int, Fraction] = {vars_to_mask([y]): w * (len(members) - 1)}
    for v in members:
        terms[vars_to_mask([y, v])] = -w
    return Gadget(PseudoBooleanFunction(n + 1, terms), (y,), Fraction(0))


def fan_gadget(spec: FanSpec) -> Gadget:
    """Quadratic gadget for a fan, using at most 1 + floor(m/2) hidden
    variables.

    Construction for upper fans: a single-member family is a scaled negative
    monomial; otherwise merge equivalent support elements, realise the merged
    fan as ``min_y y(2(m'-1) - |L| - sum_L z - 2 sum_K z)``, then substitute
    each merged variable by its class product, expanding every resulting
    higher-order monomial with one more hidden variable.  Lower fans compile
    through the mirrored upper fan and a final dualisation of everything,
    hidden variables included.
    """
    if not validate_fan(spec):
        raise ValueError(f"invalid fan {spec}")
    if spec.orientation == LOWER:
        g = fan_gadget(mirror_fan(spec))
        return Gadget(pb_core.dual(g.quadratic), g.hidden, g.kappa)
    n = spec.arity
    r = len(spec.family)
    if r == 0:
        return Gadget(PseudoBooleanFunction.constant(n, -2), (), Fraction(0))
    if r == 1:
        (member,) = spec.family
        if not member:
            # family {emptyset}: the fan is constant -2
            return Gadget(PseudoBooleanFunction.constant(n, -2), (), Fraction(0))
        return negative_monomial_gadget(member, 2, arity=n)

    reduced, classes = merge_equivalence_classes(spec)
    reps = [min(cls) for cls in classes]
    in_all = {rep for rep in reps if all(rep in member for member in reduced.family)}
    num_l = len(reps) - len(in_all)
    m_prime = len(reps)

    y = n + 1
    hidden = [y]
    terms: Dict[int, Fraction] = {}
    y_mask = vars_to_mask([y])
    terms[y_mask] = Fraction(2 * (m_prime - 1) - num_l)
    next_hidden = n + 2
    for cls in classes:
        w = Fraction(2) if min(cls) in in_all else Fraction(1)
        if len(cls) == 1:
            (v,) = cls
            terms[vars_to_mask([y, v])] = terms.get(vars_to_mask([y, v]), Fraction(0)) - w
        else:
            # -w * y * prod(cls): one extra variable per merged class
            z = next_hidden
            next_hidden += 1
            hidden.append(z)
            z_mask = vars_to_mask([z])
            terms[z_mask] = terms.get(z_mask, Fraction(0)) + w * len(cls)
            terms[vars_to_mask([z, y])] = -w
            for v in sorted(cls):
                terms[vars_to_mask([z, v])] = -w
    quadratic = PseudoBooleanFunction(next_hidden - 1, terms)
    return Gadget(quadratic, tuple(hidden), Fraction(0))


def two_monotone_gadget(a_set: Iterable[int], b_set: Iterable[int], arity: int) -> Gadget:
    """Gadget for the 0/1 cost function that is 0 exactly when all of A is
    assigned 1 or everything outside B is assigned 0.

    Realised as min_y of y*(1 + phi_A/2) + (1-y)*(1 + phi_B/2), where extending
    the upper fan {A} by y and the lower fan {B} by the absent y again gives
    fans over the enlarged variable set; both halves compile via fan_gadget.
    """
    a = frozenset(a_set)
    b = frozenset(b_set)
    for v in a | b:
        if not (1 <= v <= arity):
            raise ValueError(f"index {v} beyond arity {arity}")
    y = arity + 1
    upper = FanSpec(UPPER, arity + 1, (a | {y},))
    lower = FanSpec(LOWER, arity + 1, (b,))
    g_up = fan_gadget(upper)
    g_lo = fan_gadget(lower)
    # keep hidden variables of the two halves disjoint
    offset = len(g_up.hidden)
    mapping = {v: v for v in range(1, arity + 2)}
    for h in g_lo.hidden:
        mapping[h] = h + offset
    lo_quadratic = pb_core.remap_variables(
        g_lo.quadratic, mapping, g_lo.quadratic.arity + offset
    )
    quadratic = pb_core.combine(
        [(Fraction(1, 2), g_up.quadratic), (Fraction(1, 2), lo_quadratic)]
    )
    hidden = (y, *g_up.hidden, *(h + offset for h in g_lo.hidden))
    kappa = Fraction(1) + Fraction(1, 2) * (g_up.kappa + g_lo.kappa)
    return Gadget(quadratic, hidden, kappa)


def two_monotone_table(a_set: Iterable[int], b_set: Iterable[int], arity: int) -> CostTable:
    """Direct tabulation of the 2-monotone 0/1 function (testing oracle)."""
    a = frozenset(a_set)
    b = frozenset(b_set)
    values = []
    for x in range(1 << arity):
        ones = frozenset(v for v in range(1, arity + 1) if x & (1 << (arity - v)))
        values.append(Fraction(0) if a <= ones or ones <= b else Fraction(1))
    return CostTable(arity, tuple(values))


def _set_partitions(items: Sequence[int]):
    """All partitions of ``items`` into nonempty blocks (deterministic order)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def _all_families(n: int):
    """Every valid upper-fan family over subsets of {1..n}.

    r = 0 and r = 1 families are unrestricted; a family with r >= 2 members is
    exactly {U - C : C in blocks} for some U and some collection of at least
    two disjoint nonempty subsets (blocks) of U.
    """
    yield ()
    for mask in range(1 << n):
        yield (frozenset(pb_core.mask_to_vars(mask)),)
    for u_mask in range(1 << n):
        if u_mask.bit_count() < 2:
            continue
        u_set = frozenset(pb_core.mask_to_vars(u_mask))
        # iterate nonempty covered subsets J of U with |J| >= 2
        j_mask = u_mask
        while j_mask:
            if j_mask.bit_count() >= 2:
                j_items = sorted(pb_core.mask_to_vars(j_mask))
                for blocks in _set_partitions(j_items):
                    if len(blocks) < 2:
                        continue
                    yield _canon_family(u_set - frozenset(block) for block in blocks)
            j_mask = (j_mask - 1) & u_mask


def enumerate_fans(n: int) -> List[FanSpec]:
    """All fans over variables {1..n}, deduplicated by their tables.

    Fans touching only a subset of the variables are included (padded to
    arity n).  When an upper and a lower spec define the same function (the
    constant -2), only the upper representative is kept.
    """
    if n > 4:
        raise ValueError("fan enumeration is supported for arity <= 4")
    if n < 1:
        raise ValueError("arity must be at least 1")
    seen = {}
    order = []
    for orientation in (UPPER, LOWER):
        for family in _all_families(n):
            if orientation == UPPER:
                spec = FanSpec(UPPER, n, family)
            else:
                spec = mirror_fan(FanSpec(UPPER, n, family))
            if not validate_fan(spec):
                continue
            key = fan_table(spec).values
            if key not in seen:
                seen[key] = spec
                order.append(spec)
    return order


def parse_family(text: str) -> Tuple[FrozenSet[int], ...]:
    """Parse the CLI family syntax '1,2;1,3' into member sets."""
    text = text.strip()
    if not text:
        return ()
    members = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty family member (stray ';')")
        members.append(frozenset(int(tok) for tok in chunk.split(",")))
    return _canon_family(members)


def format_family(family: Sequence[FrozenSet[int]]) -> str:
    return ";".join(",".join(str(v) for v in sorted(m)) for m in family)


def gadget_to_json(g: Gadget) -> dict:
    obj = polynomial_to_json(g.quadratic)
    obj["hidden"] = list(g.hidden)
    obj["kappa"] = format_fraction(g.kappa)
    return obj


def gadget_from_json(obj: dict) -> Gadget:
    quadratic = polynomial_from_json(obj)
    try:
        hidden = tuple(int(h) for h in obj.get("hidden", []))
        kappa = parse_fraction(obj.get("kappa", 0))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed gadget JSON: {exc}") from exc
    return Gadget(quadratic, hidden, kappa)
