"""Exact finite-valued Boolean cost functions: polynomials and value tables.

Two interchangeable representations are used throughout the package:

* ``PseudoBooleanFunction`` -- the unique multilinear polynomial of a cost
  function, stored sparsely as a mapping from variable subsets to nonzero
  rational coefficients.  A subset is an int bitmask in which bit ``i-1``
  stands for variable ``i`` (variables are 1-based).
* ``CostTable`` -- the dense table of all ``2**n`` values.  The table index
  packs an assignment with variable 1 as the *most significant* bit, so for
  arity 2 the order is 00, 01, 10, 11.

The zeta transform turns a polynomial into its table, the Moebius transform
inverts it; both are exact.  Tables may contain ``INF``, polynomials never do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .rational import INF, Cost, Infinity, cost_add, is_finite

MAX_ARITY = 16

ZERO = Fraction(0)


def vars_to_mask(variables: Iterable[int]) -> int:
    mask = 0
    for v in variables:
        mask |= 1 << (v - 1)
    return mask


def mask_to_vars(mask: int) -> Tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def assignment_to_index(x: Sequence[int], arity: int) -> int:
    """Pack an assignment tuple into a table index (variable 1 = MSB)."""
    if len(x) != arity:
        raise ValueError(f"assignment length {len(x)} != arity {arity}")
    idx = 0
    for bit in x:
        if bit not in (0, 1):
            raise ValueError(f"non-Boolean value {bit!r} in assignment")
        idx = (idx << 1) | bit
    return idx


def index_to_assignment(idx: int, arity: int) -> Tuple[int, ...]:
    return tuple((idx >> (arity - i)) & 1 for i in range(1, arity + 1))


class PseudoBooleanFunction:
    """Sparse multilinear polynomial over Boolean variables, exact rationals.

    ``terms`` maps a variable-subset bitmask to its nonzero coefficient; the
    empty subset (mask 0) holds the constant term.  Instances are immutable.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[int, Fraction]):
        if not (1 <= arity <= MAX_ARITY):
            raise ValueError(f"arity must be in 1..{MAX_ARITY}, got {arity}")
        clean: Dict[int, Fraction] = {}
        limit = 1 << arity
        for mask, coef in terms.items():
            if not (0 <= mask < limit):
                raise ValueError(f"term {mask:#x} uses variables beyond arity {arity}")
            coef = Fraction(coef)
            if coef != 0:
                clean[mask] = coef
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PseudoBooleanFunction is immutable")

    def __eq__(self, other):
        if not isinstance(other, PseudoBooleanFunction):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return f"PBF(arity={self.arity}, 0)"
        parts = []
        for mask in sorted(self.terms):
            coef = self.terms[mask]
            mono = "*".join(f"x{v}" for v in mask_to_vars(mask)) or "1"
            parts.append(f"{coef}*{mono}")
        return f"PBF(arity={self.arity}, {' + '.join(parts)})"

    def coefficient(self, variables: Iterable[int]) -> Fraction:
        return self.terms.get(vars_to_mask(variables), ZERO)

    def degree(self) -> int:
        return max((mask.bit_count() for mask in self.terms), default=0)

    @staticmethod
    def zero(arity: int) -> "PseudoBooleanFunction":
        return PseudoBooleanFunction(arity, {})

    @staticmethod
    def constant(arity: int, value) -> "PseudoBooleanFunction":
        return PseudoBooleanFunction(arity, {0: Fraction(value)})

    @staticmethod
    def from_subsets(arity: int, subsets: Mapping[Tuple[int, ...], object]) -> "PseudoBooleanFunction":
        """Build from {variable tuple: coefficient}, e.g. {(1, 2): -1}."""
        terms = {}
        for vs, coef in subsets.items():
            mask = vars_to_mask(vs)
            terms[mask] = terms.get(mask, ZERO) + Fraction(coef)
        return PseudoBooleanFunction(arity, terms)


@dataclass(frozen=True)
class CostTable:
    """Dense table of extended costs; index packs variable 1 as the MSB."""

    arity: int
    values: Tuple[Cost, ...]

    def __post_init__(self):
        if not (0 <= self.arity <= MAX_ARITY):
            raise ValueError(f"arity must be in 0..{MAX_ARITY}, got {self.arity}")
        if len(self.values) != 1 << self.arity:
            raise ValueError(
                f"table of arity {self.arity} needs {1 << self.arity} values, got {len(self.values)}"
            )
        object.__setattr__(
            self,
            "values",
            tuple(v if isinstance(v, Infinity) else Fraction(v) for v in self.values),
        )

    def value(self, x: Sequence[int]) -> Cost:
        return self.values[assignment_to_index(x, self.arity)]

    @property
    def is_finite(self) -> bool:
        return all(is_finite(v) for v in self.values)

    def assignments(self):
        return product((0, 1), repeat=self.arity)


def evaluate(p: PseudoBooleanFunction, x: Sequence[int]) -> Fraction:
    """Evaluate the polynomial at a Boolean point."""
    if len(x) != p.arity:
        raise ValueError(f"point has length {len(x)}, polynomial arity is {p.arity}")
    ones = 0
    for i, bit in enumerate(x, start=1):
        if bit not in (0, 1):
            raise ValueError(f"non-Boolean value {bit!r}")
        if bit:
            ones |= 1 << (i - 1)
    total = ZERO
    for mask, coef in p.terms.items():
        if mask & ones == mask:
            total += coef
    return total


def _term_mask_to_index_mask(mask: int, arity: int) -> int:
    """Map a variable-subset bitmask to the table-index bitmask (var 1 = MSB)."""
    out = 0
    for v in mask_to_vars(mask):
        out |= 1 << (arity - v)
    return out


def _index_mask_to_term_mask(idx: int, arity: int) -> int:
    out = 0
    for pos in range(arity):
        if idx & (1 << pos):
            out |= 1 << (arity - 1 - pos)
    return out


def zeta(p: PseudoBooleanFunction) -> CostTable:
    """Tabulate the polynomial at all points (inverse of ``moebius``)."""
    n = p.arity
    arr = [ZERO] * (1 << n)
    for mask, coef in p.terms.items():
        arr[_term_mask_to_index_mask(mask, n)] = coef
    for b in range(n):
        bit = 1 << b
        for idx in range(1 << n):
            if idx & bit:
                arr[idx] += arr[idx ^ bit]
    return CostTable(n, tuple(arr))


def moebius(t: CostTable) -> PseudoBooleanFunction:
    """Coefficients of the unique multilinear polynomial of a finite table."""
    if not t.is_finite:
        raise ValueError("cannot take the polynomial of a table with infinite entries")
    n = t.arity
    arr = list(t.values)
    for b in range(n):
        bit = 1 << b
        for idx in range(1 << n):
            if idx & bit:
                arr[idx] -= arr[idx ^ bit]
    terms = {}
    for idx, coef in enumerate(arr):
        if coef != 0:
            terms[_index_mask_to_term_mask(idx, n)] = coef
    return PseudoBooleanFunction(n, terms)


def second_derivative(
    p: PseudoBooleanFunction, i: int, j: int, context: Sequence[int]
) -> Fraction:
    """Discrete second derivative in directions i, j at a context over the rest.

    The context lists values for the remaining variables in ascending
    variable order.
    """
    n = p.arity
    if i == j:
        raise ValueError("derivative indices must differ")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"indices ({i}, {j}) out of range for arity {n}")
    rest = [v for v in range(1, n + 1) if v != i and v != j]
    if len(context) != len(rest):
        raise ValueError(f"context length {len(context)} != {len(rest)}")
    base = dict(zip(rest, context))

    def point(xi, xj):
        base[i], base[j] = xi, xj
        return tuple(base[v] for v in range(1, n + 1))

    return (
        evaluate(p, point(1, 1))
        - evaluate(p, point(1, 0))
        - evaluate(p, point(0, 1))
        + evaluate(p, point(0, 0))
    )


def is_submodular(p: PseudoBooleanFunction) -> bool:
    """All second derivatives nonpositive; for quadratics this reduces to
    nonpositive pair coefficients."""
    if p.degree() <= 2:
        return all(coef <= 0 for mask, coef in p.terms.items() if mask.bit_count() == 2)
    return table_is_submodular(zeta(p))


def table_is_submodular(t: CostTable) -> bool:
    """Submodularity check directly on a table; handles infinite entries."""
    n = t.arity
    if n <= 1:
        return True
    vals = t.values
    if t.is_finite:
        for i, j in combinations(range(n), 2):
            bi, bj = 1 << (n - 1 - i), 1 << (n - 1 - j)
            for idx in range(1 << n):
                if idx & bi or idx & bj:
                    continue
                if vals[idx | bi | bj] + vals[idx] > vals[idx | bi] + vals[idx | bj]:
                    return False
        return True
    # With infinities, fall back to the pairwise meet/join inequality.
    for u in range(1 << n):
        for v in range(u + 1, 1 << n):
            lhs = cost_add(vals[u & v], vals[u | v])
            rhs = cost_add(vals[u], vals[v])
            if rhs < lhs:
                return False
    return True


def dual(p: PseudoBooleanFunction) -> PseudoBooleanFunction:
    """Exchange the roles of 0 and 1: substitute 1-x for every variable x."""
    terms: Dict[int, Fraction] = {}
    for mask, coef in p.terms.items():
        # expand coef * prod_{i in mask} (1 - x_i) over all submasks
        sub = mask
        while True:
            sign = -1 if sub.bit_count() & 1 else 1
            terms[sub] = terms.get(sub, ZERO) + sign * coef
            if sub == 0:
                break
            sub = (sub - 1) & mask
    return PseudoBooleanFunction(p.arity, terms)


def combine(
    items: Iterable[Tuple[object, PseudoBooleanFunction]]
) -> PseudoBooleanFunction:
    """Nonnegative combination sum(w_i * p_i); smaller arities are padded."""
    items = [(Fraction(w), p) for w, p in items]
    if not items:
        raise ValueError("combine needs at least one item")
    for w, _ in items:
        if w < 0:
            raise ValueError(f"negative weight {w}")
    arity = max(p.arity for _, p in items)
    terms: Dict[int, Fraction] = {}
    for w, p in items:
        if w == 0:
            continue
        for mask, coef in p.terms.items():
            terms[mask] = terms.get(mask, ZERO) + w * coef
    return PseudoBooleanFunction(arity, terms)


def scale(p: PseudoBooleanFunction, w) -> PseudoBooleanFunction:
    w = Fraction(w)
    return PseudoBooleanFunction(p.arity, {m: w * c for m, c in p.terms.items()})


def add(p: PseudoBooleanFunction, q: PseudoBooleanFunction) -> PseudoBooleanFunction:
    arity = max(p.arity, q.arity)
    terms = dict(p.terms)
    for mask, coef in q.terms.items():
        terms[mask] = terms.get(mask, ZERO) + coef
    return PseudoBooleanFunction(arity, terms)


def with_arity(p: PseudoBooleanFunction, arity: int) -> PseudoBooleanFunction:
    """View the polynomial over a larger variable set (pad with dummies)."""
    if arity < p.arity:
        used = 0
        for mask in p.terms:
            used |= mask
        if used >> arity:
            raise ValueError(f"cannot shrink arity below used variables")
    return PseudoBooleanFunction(arity, dict(p.terms))


def remap_variables(
    p: PseudoBooleanFunction, mapping: Mapping[int, int], arity: int
) -> PseudoBooleanFunction:
    """Relabel variables through an injective old->new index mapping."""
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("variable mapping must be injective")
    terms: Dict[int, Fraction] = {}
    for mask, coef in p.terms.items():
        new_mask = vars_to_mask(mapping[v] for v in mask_to_vars(mask))
        terms[new_mask] = terms.get(new_mask, ZERO) + coef
    return PseudoBooleanFunction(arity, terms)


def min_brute_force(t: CostTable) -> Tuple[Cost, Tuple[int, ...]]:
    """Exact minimum and the lexicographically smallest minimiser."""
    best: Cost = INF
    best_idx = None
    for idx, v in enumerate(t.values):
        if is_finite(v) and (best_idx is None or v < best):
            best, best_idx = v, idx
    if best_idx is None:
        raise ValueError("table has no finite entry")
    # indices in increasing order are already lexicographic in the assignment
    return best, index_to_assignment(best_idx, t.arity)


def project(p: PseudoBooleanFunction, hidden: Iterable[int]) -> CostTable:
    """Minimise the polynomial over a set of hidden variables.

    Returns the table, over the remaining variables in ascending original
    order, of ``min over hidden assignments`` of ``p``.
    """
    hidden = sorted(set(hidden))
    n = p.arity
    for h in hidden:
        if not (1 <= h <= n):
            raise ValueError(f"hidden index {h} out of range for arity {n}")
    kept = [v for v in range(1, n + 1) if v not in set(hidden)]
    if not kept:
        raise ValueError("projection must keep at least one variable")
    if n > 20:
        raise ValueError(f"projection over arity {n} is too large to enumerate")
    full = zeta(p).values
    j = len(hidden)
    out = []
    for kept_idx in range(1 << len(kept)):
        kept_bits = index_to_assignment(kept_idx, len(kept))
        best = None
        for hid_idx in range(1 << j):
            hid_bits = index_to_assignment(hid_idx, j)
            point = [0] * n
            for v, bit in zip(kept, kept_bits):
                point[v - 1] = bit
            for v, bit in zip(hidden, hid_bits):
                point[v - 1] = bit
            val = full[assignment_to_index(point, n)]
            if best is None or val < best:
                best = val
        out.append(best)
    return CostTable(len(kept), tuple(out))


def pad_table(t: CostTable, arity: int) -> CostTable:
    """Extend a table with dummy (ignored) trailing variables."""
    if arity < t.arity:
        raise ValueError("cannot pad to a smaller arity")
    extra = arity - t.arity
    values = []
    for v in t.values:
        values.extend([v] * (1 << extra))
    return CostTable(arity, tuple(values))


def table_from_values(arity: int, values: Sequence) -> CostTable:
    return CostTable(arity, tuple(values))


# --- JSON forms -------------------------------------------------------------

from .rational import format_cost, format_fraction, parse_cost, parse_fraction


def polynomial_to_json(p: PseudoBooleanFunction) -> dict:
    terms = [
        {"vars": list(mask_to_vars(mask)), "coef": format_fraction(coef)}
        for mask, coef in sorted(p.terms.items())
    ]
    return {"arity": p.arity, "terms": terms}


def polynomial_from_json(obj: dict) -> PseudoBooleanFunction:
    try:
        arity = int(obj["arity"])
        terms: Dict[int, Fraction] = {}
        for entry in obj["terms"]:
            mask = vars_to_mask(int(v) for v in entry["vars"])
            terms[mask] = terms.get(mask, ZERO) + parse_fraction(entry["coef"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial JSON: {exc}") from exc
    return PseudoBooleanFunction(arity, terms)


def table_to_json(t: CostTable) -> dict:
    return {"arity": t.arity, "values": [format_cost(v) for v in t.values]}


def table_from_json(obj: dict) -> CostTable:
    try:
        arity = int(obj["arity"])
        values = tuple(parse_cost(v) for v in obj["values"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed table JSON: {exc}") from exc
    return CostTable(arity, values)
