"""Upper bounds on the size of mutually unbiased weighing-matrix sets.

All arithmetic is exact (``fractions.Fraction``); floors are taken once, at
the end.  The weighing-matrix bounds come from the bi-angular line-set
bounds: the normalised rows of ``k`` mutually unbiased UW(n, w), together
with the rows of the identity, form ``(k + 1) n`` lines with inner products
in ``{0, 1/sqrt(w)}``, so ``k <= lines/n - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor, isqrt

from . import constructions as C
from .errors import InvalidArgument, Unsupported

COMPLEX = "complex"
REAL = "real"


def _setting(setting: str) -> str:
    if setting not in (COMPLEX, REAL):
        raise InvalidArgument(f"setting must be 'complex' or 'real', got {setting!r}")
    return setting


def line_set_bound(n: int, alpha_sq, setting: str = COMPLEX) -> tuple[int, Fraction | None]:
    """Largest bi-angular line set in dimension ``n`` with angles {0, alpha}.

    Returns ``(absolute, special)``; ``special`` is None when its
    denominator is not positive.
    """
    _setting(setting)
    a = Fraction(alpha_sq)
    if not 0 < a < 1:
        raise InvalidArgument(f"alpha_sq must lie in (0, 1), got {a}")
    if n < 1:
        raise InvalidArgument(f"dimension must be positive, got {n}")
    if setting == COMPLEX:
        absolute = n * comb(n + 1, 2)
        den = 2 - (n + 1) * a
        special = n * (n + 1) * (1 - a) / den if den > 0 else None
    else:
        absolute = comb(n + 2, 3)
        den = 3 - (n + 2) * a
        special = n * (n + 2) * (1 - a) / den if den > 0 else None
    return absolute, special


def real_pair_feasible(w: int) -> bool:
    """A pair of unbiased real UW(n, w) needs ``w`` to be a perfect square."""
    return w >= 0 and isqrt(w) ** 2 == w


def weight_specific_bound(n: int, w: int) -> int | None:
    """Sharper bounds known for weights 2 and 3; None for other weights."""
    if w == 2:
        return 0 if n % 2 else 2
    if w == 3:
        if n < 3 or n == 5:
            return 0
        return 9 if n % 4 == 0 else 3
    return None


@dataclass(frozen=True)
class BoundReport:
    n: int
    w: int
    setting: str
    absolute_bound: int
    special_bound: Fraction | None
    weight_specific: int | None
    effective: int
    # the same bound recomputed through line_set_bound and the identity-append step
    via_line_sets: Fraction
    # absolute_bound before flooring; fractional in the real setting
    absolute_exact: Fraction

    @property
    def special_floor(self) -> int | None:
        return None if self.special_bound is None else floor(self.special_bound)

    @property
    def closed_form(self) -> Fraction:
        """min(absolute, special), unfloored."""
        if self.special_bound is None:
            return self.absolute_exact
        return min(self.absolute_exact, self.special_bound)


def muw_upper_bound(n: int, w: int, setting: str = COMPLEX) -> BoundReport:
    _setting(setting)
    if not 1 <= w <= n:
        raise InvalidArgument(f"need 1 <= w <= n, got n={n}, w={w}")
    if setting == COMPLEX:
        absolute = Fraction((n - 1) * (n + 2), 2)
        den = 2 * w - (n + 1)
    else:
        absolute = Fraction((n - 1) * (n + 4), 6)
        den = 3 * w - (n + 2)
    special = Fraction(w * (n - 1), den) if den > 0 else None

    if w == 1:
        via = absolute if special is None else min(absolute, special)
    else:
        la, ls = line_set_bound(n, Fraction(1, w), setting)
        lines = Fraction(la) if ls is None else min(Fraction(la), ls)
        via = lines / n - 1

    candidates = [absolute] if special is None else [absolute, special]
    ws = weight_specific_bound(n, w)
    if ws is not None:
        candidates.append(Fraction(ws))
    if setting == REAL and not real_pair_feasible(w):
        candidates.append(Fraction(1))
    return BoundReport(n, w, setting, floor(absolute), special, ws,
                       floor(min(candidates)), via, absolute)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    w: int
    setting: str
    closed_form: Fraction
    smallest: int
    smallest_source: str
    largest_known: int
    root_of_unity: int | None
    reproduced: int | None = None
    reproduced_source: str | None = None


# (n, w) -> (smallest bound, its source, largest known set, root of unity)
_NONEXISTENCE = "nonexistence-of-UW(n,w) (prior classification)"
KNOWN_RESULTS: dict[tuple[int, int], tuple[int, str, int, int | None]] = {
    (2, 2): (2, "line-set bound", 2, 4),
    (3, 2): (0, _NONEXISTENCE, 0, None),
    (3, 3): (3, "line-set bound", 3, 3),
    (4, 2): (2, "weight-2 bound", 2, 4),
    (4, 3): (9, "line-set bound", 9, 6),
    (4, 4): (4, "line-set bound", 4, 4),
    (5, 2): (0, _NONEXISTENCE, 0, None),
    (5, 3): (0, _NONEXISTENCE, 0, None),
    (5, 4): (5, "exhaustive search over UW(5,4) with W5 fixed", 5, 6),
    (5, 5): (5, "line-set bound", 5, 5),
    (6, 2): (2, "weight-2 bound", 2, 4),
    (6, 3): (3, "weight-3 bound", 3, 3),
    (6, 4): (20, "line-set bound", 20, 6),
    (6, 5): (8, "line-set bound (floor)", 2, 12),
    (6, 6): (6, "line-set bound", 2, 12),
    (7, 2): (0, _NONEXISTENCE, 0, None),
    (7, 3): (3, "weight-3 bound", 3, 6),
    (7, 4): (8, "exhaustive real search over W(7,4)", 8, 2),
    (7, 5): (0, _NONEXISTENCE, 0, None),
    (7, 6): (9, "line-set bound", 0, None),
    (7, 7): (7, "line-set bound", 7, 7),
}
KNOWN_RESULTS_REAL = {(8, 4): (14, "real line-set bound", 14, 2)}
# rows where the best bound and the largest known set do not meet
OPEN_ROWS = frozenset({(6, 5), (6, 6), (7, 6)})


def _reproduce(n: int, w: int) -> tuple[int | None, str | None]:
    datasets = {(4, 3): "UW4_3", (5, 4): "UW5_4", (6, 4): "UW6_4", (7, 4): "W7_4", (8, 4): "W8_4"}
    if (n, w) in datasets:
        key = datasets[(n, w)]
        s = C.load_dataset(key)
        return (len(s), f"dataset {key}") if s.verify() else (None, f"dataset {key} failed")
    if n == w and C.is_prime(n):
        return len(C.prime_muhm(n)), f"prime_muhm({n})"
    if w == 3 and (n in (3, 4) or n >= 6):
        return len(C.weight3_tight_family(n)), f"weight3_tight_family({n})"
    if w == 2 and n % 2 == 0:
        return len(C.weight2_pair(n)), f"weight2_pair({n})"
    searches = {(4, 4): 4, (3, 2): 4, (5, 2): 4, (5, 3): 6, (7, 2): 4}
    if (n, w) in searches:
        from .search import SearchConfig, search_max_muw  # search depends on this module

        m = searches[(n, w)]
        r = search_max_muw(SearchConfig(n, w, m, symmetry="classes"))
        tag = "exhaustive" if r.exhaustive else "budgeted"
        return r.size, f"{tag} search over {m}th roots"
    return None, None


def table1_report(n: int, w: int, reproduce: bool = False) -> ComparisonRow:
    """One row of the comparison table: closed-form bound, best bound, best example.

    With ``reproduce=True`` the example size is also rebuilt from bundled
    data or constructions where that is cheap.
    """
    if (n, w) in KNOWN_RESULTS:
        setting = COMPLEX
        smallest, src, largest, root = KNOWN_RESULTS[(n, w)]
    elif (n, w) in KNOWN_RESULTS_REAL:
        setting = REAL
        smallest, src, largest, root = KNOWN_RESULTS_REAL[(n, w)]
    else:
        raise Unsupported(f"(n, w) = ({n}, {w}) is outside the tabulated range")
    rep = muw_upper_bound(n, w, setting)
    reproduced = source = None
    if reproduce:
        reproduced, source = _reproduce(n, w)
    return ComparisonRow(n, w, setting, rep.closed_form, smallest, src, largest, root, reproduced, source)


def comparison_rows(reproduce: bool = False) -> list[ComparisonRow]:
    return [table1_report(n, w, reproduce) for (n, w) in sorted(KNOWN_RESULTS)]
