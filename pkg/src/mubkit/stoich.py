"""Integer bookkeeping of full complements.

Every full complement must distribute its p^n + 1 bases over the named types
so that the per-column n-body totals come out right. That gives a small
linear system over nonnegative integers; this module builds the profile
tables, enumerates and extremizes the solutions, reduces the system to the
quoted equation forms, and splits type counts into per-variant counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd

from .errors import InfeasibleError, MubkitError
from .zplinalg import SystemParams

# exact solution counts of the full (P4 allowed) systems, frozen after
# computation; re-derived by the solver in the test suite
P3_N4_FULL_SOLUTION_COUNT = 6005
P5_N4_FULL_SOLUTION_COUNT = 198379


@dataclass
class ProfileTable:
    """Per type n-body rows, complement-wide column totals, and class count."""

    params: SystemParams
    labels: tuple[str, ...]
    rows: dict[str, tuple[int, ...]]
    totals: tuple[int, ...]
    total_count: int


def profile_table(params: SystemParams, include_p4: bool | None = None) -> ProfileTable:
    """Closed form n-body profiles of the named types, 1 to 4 qupits.

    include_p4 defaults to p >= 3; asking for it at p = 2 is an error since
    no 4-qubit group has the zero 1- and 2-body profile.
    """
    p, n = params.p, params.n
    r = p - 1
    q = p * p - 1
    if include_p4 is None:
        include_p4 = p >= 3
    elif include_p4 and p == 2:
        raise ValueError("the P4 profile requires p >= 3")
    if n == 1:
        rows = {"PI": (r,)}
    elif n == 2:
        rows = {"PI": (2 * r, r * r), "B": (0, q)}
    elif n == 3:
        rows = {
            "PI": (3 * r, 3 * r * r, r ** 3),
            "SB": (r, q, r * q),
            "G3": (0, 3 * r, r * r * (p + 2)),
        }
    elif n == 4:
        rows = {
            "PI": (4 * r, 6 * r * r, 4 * r ** 3, r ** 4),
            "S2B": (2 * r, 2 * p * r, 2 * r * q, r ** 3 * (p + 1)),
            "SG3": (r, 3 * r, r * r * (p + 5), r ** 3 * (p + 2)),
            "BB": (0, 2 * q, 0, q * q),
            "G4": (0, 6 * r, 4 * r * (p - 2), p ** 4 - 4 * p * p + 6 * p - 3),
            "C4": (0, 2 * r, 4 * p * r, p ** 4 - 4 * p * p + 2 * p + 1),
            "P4": (0, 0, 4 * q, p ** 4 - 4 * p * p + 3),
        }
        if not include_p4:
            del rows["P4"]
    else:
        raise ValueError(f"profile tables cover 1 to 4 qupits, got n={n}")
    totals = tuple(comb(n, k) * q ** k for k in range(1, n + 1))
    return ProfileTable(params, tuple(rows), rows, totals, p ** n + 1)


# ---------------------------------------------------------------------------
# solution enumeration


def _system(table: ProfileTable, forbid: tuple[str, ...]):
    for lab in forbid:
        if lab not in table.labels:
            raise ValueError(f"cannot forbid unknown label {lab!r}")
    labels = [l for l in table.labels if l not in forbid]
    coeffs = [[table.rows[l][c] for l in labels] for c in range(table.params.n)]
    coeffs.append([1] * len(labels))
    rhs = list(table.totals) + [table.total_count]
    return labels, coeffs, rhs


def _iter_solutions(table: ProfileTable, forbid: tuple[str, ...] = (),
                    fixes: dict[str, int] | None = None):
    """DFS in the canonical label order with budget pruning.

    Whenever no later label can still feed an equation, that equation pins the
    current label exactly, so trailing variables are determined, not searched.
    """
    labels, coeffs, rhs = _system(table, tuple(forbid))
    fixes = dict(fixes or {})
    for lab, v in fixes.items():
        if lab not in labels:
            raise ValueError(f"cannot fix label {lab!r}")
        if v < 0:
            raise ValueError(f"fixed count for {lab} must be nonnegative")
    m = len(labels)
    neq = len(coeffs)
    later_pos = [[any(coeffs[e][j] > 0 for j in range(i + 1, m))
                  for i in range(m)] for e in range(neq)]
    acc = [0] * m

    def rec(i: int, residuals: list[int]):
        if i == m:
            if all(v == 0 for v in residuals):
                yield dict(zip(labels, acc))
            return
        hi: int | None = None
        forced: int | None = None
        for e in range(neq):
            ce = coeffs[e][i]
            if ce > 0:
                b = residuals[e] // ce
                hi = b if hi is None else min(hi, b)
            if not later_pos[e][i]:
                if ce == 0:
                    if residuals[e]:
                        return
                elif residuals[e] % ce:
                    return
                else:
                    v = residuals[e] // ce
                    if forced is None:
                        forced = v
                    elif forced != v:
                        return
        fixed = fixes.get(labels[i])
        if fixed is not None:
            if forced is not None and forced != fixed:
                return
            forced = fixed
        if forced is not None:
            candidates = (forced,)
        else:
            candidates = range((hi if hi is not None else 0) + 1)
        for v in candidates:
            if v < 0 or (hi is not None and v > hi):
                continue
            nxt = [residuals[e] - coeffs[e][i] * v for e in range(neq)]
            if any(x < 0 for x in nxt):
                continue
            acc[i] = v
            yield from rec(i + 1, nxt)
        acc[i] = 0

    yield from rec(0, rhs)


def enumerate_solutions(table: ProfileTable, forbid: tuple[str, ...] = (),
                        fixes: dict[str, int] | None = None) -> list[dict[str, int]]:
    """All nonnegative integer solutions, lexicographic in the label order."""
    return list(_iter_solutions(table, forbid, fixes))


def count_solutions(table: ProfileTable, forbid: tuple[str, ...] = (),
                    fixes: dict[str, int] | None = None) -> int:
    return sum(1 for _ in _iter_solutions(table, forbid, fixes))


def extremize(table: ProfileTable, label: str, direction: str = "min",
              forbid: tuple[str, ...] = (),
              fixes: dict[str, int] | None = None) -> dict[str, int]:
    """The first solution attaining the extreme count of one label."""
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be min or max, got {direction!r}")
    if label in forbid:
        raise ValueError(f"label {label!r} is forbidden")
    best: dict[str, int] | None = None
    for sol in _iter_solutions(table, forbid, fixes):
        if label not in sol:
            raise ValueError(f"unknown label {label!r}")
        if best is None:
            best = sol
        elif direction == "min" and sol[label] < best[label]:
            best = sol
        elif direction == "max" and sol[label] > best[label]:
            best = sol
    if best is None:
        raise InfeasibleError(
            f"no distribution satisfies the constraints (forbid={list(forbid)}, fixes={fixes})")
    return best


# ---------------------------------------------------------------------------
# reduced equations


@dataclass(frozen=True)
class DerivedEquation:
    """An integer linear identity that every distribution must satisfy."""

    name: str
    coeffs: tuple[tuple[str, int], ...]  # zero coefficients omitted
    rhs: int

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)


def _make_eq(name: str, labels, coeff_list, rhs) -> DerivedEquation:
    ints = [int(c) for c in coeff_list]
    if any(Fraction(c) != ic for c, ic in zip(coeff_list, ints)) or Fraction(rhs) != int(rhs):
        raise MubkitError(f"equation {name} did not reduce to integers")
    g = 0
    for c in ints + [int(rhs)]:
        g = gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
        rhs = int(rhs) // g
    pairs = tuple((lab, c) for lab, c in zip(labels, ints) if c)
    return DerivedEquation(name, pairs, int(rhs))


def _frac_rref(mat: list[list[Fraction]]):
    work = [row[:] for row in mat]
    pivots = []
    r = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        hit = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if hit is None:
            continue
        work[r], work[hit] = work[hit], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def _primitive(vec: list[Fraction]) -> list[int]:
    denom = 1
    for v in vec:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in vec]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    # orient so the largest magnitude coefficient is positive
    lead = max(ints, key=abs)
    if lead < 0:
        ints = [-c for c in ints]
    return ints

# column combinations quoted for the reduced 4 qupit systems: each entry maps
# column index (0 based) to its multiplier, with a common divisor
_REDUCTION_COMBOS = {
    2: (("separable-sum", {0: 1, 2: 1}, 8), ("total", {0: -1, 1: 2, 2: 1}, 12)),
    3: (("two-body-reduced", {0: -3, 1: 1}, 4), ("total", {0: -6, 1: 2, 2: 1}, 32)),
    5: (("two-body-reduced", {0: -64, 1: 8, 2: 1}, 48), ("total", {0: -22, 1: 2, 2: 1}, 96)),
}


def derived_equations(params: SystemParams) -> tuple[DerivedEquation, ...]:
    """Reduce the column system to the standard quoted identities.

    For n = 3 this includes the exchange rule, the single lattice direction
    of the solution set (one product basis plus two GHZ bases trade for three
    separable-Bell bases). For n = 4 and p in {2, 3, 5} the quoted column
    combinations are evaluated and the final balance laws derived from them.
    """
    table = profile_table(params)
    p, n = params.p, params.n
    labels = list(table.labels)
    cols = [[table.rows[l][c] for l in labels] for c in range(n)]
    out: list[DerivedEquation] = []
    g1 = 0
    for c in cols[0]:
        g1 = gcd(g1, c)
    g1 = gcd(g1, table.totals[0])
    out.append(_make_eq("one-body", labels, [Fraction(c, g1) for c in cols[0]],
                        Fraction(table.totals[0], g1)))
    if n == 3:
        # homogeneous directions of [columns; total] give the exchange rule
        full = [[Fraction(v) for v in col] for col in cols]
        full.append([Fraction(1)] * len(labels))
        red, pivots = _frac_rref(full)
        free = [c for c in range(len(labels)) if c not in pivots]
        if len(free) != 1:
            raise MubkitError("the 3 qupit system should have one exchange direction")
        f = free[0]
        vec = [Fraction(0)] * len(labels)
        vec[f] = Fraction(1)
        for row, c in zip(red, pivots):
            vec[c] = -row[f]
        ints = _primitive(vec)
        out.append(DerivedEquation(
            "exchange", tuple((lab, c) for lab, c in zip(labels, ints) if c), 0))
    if n == 4 and p in _REDUCTION_COMBOS:
        derived: dict[str, DerivedEquation] = {}
        for name, combo, divisor in _REDUCTION_COMBOS[p]:
            coeffs = [Fraction(sum(combo.get(e, 0) * cols[e][i] for e in range(n)), divisor)
                      for i in range(len(labels))]
            rhs = Fraction(sum(combo.get(e, 0) * table.totals[e] for e in range(n)), divisor)
            eq = _make_eq(name, labels, coeffs, rhs)
            derived[name] = eq
            out.append(eq)
        total = derived["total"]
        if total.as_dict() != {lab: 1 for lab in labels} or total.rhs != table.total_count:
            raise MubkitError("the total combination did not reduce to the class count")
        if p == 2:
            sep = derived["separable-sum"].as_dict()
            coeffs = [Fraction(1 - sep.get(lab, 0)) for lab in labels]
            out.append(_make_eq("paired-remainder", labels, coeffs,
                                Fraction(total.rhs - derived["separable-sum"].rhs)))
        else:
            # eliminate C4 between the 2-body reduction and the total count
            two = derived["two-body-reduced"].as_dict()
            c4 = two.get("C4", 0)
            coeffs = [Fraction(c4 * 1 - two.get(lab, 0)) for lab in labels]
            rhs = Fraction(c4 * total.rhs - derived["two-body-reduced"].rhs)
            if coeffs[labels.index("P4")] < 0:
                coeffs = [-c for c in coeffs]
                rhs = -rhs
            out.append(_make_eq("p4-balance", labels, coeffs, rhs))
    return tuple(out)


# ---------------------------------------------------------------------------
# variants


def _compositions(total: int, k: int):
    """All k part compositions of total, lexicographic."""
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _pattern(blocks) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def variant_assignment(params: SystemParams, solution: dict[str, int]) -> dict:
    """Split type counts into per-variant counts so every qupit is pure in
    exactly p + 1 bases. Returns {label: {pattern: count}}; raises when no
    split exists."""
    p, n = params.p, params.n
    target = p + 1
    get = lambda lab: solution.get(lab, 0)
    if n == 2:
        if get("PI") != target:
            raise InfeasibleError(f"PI count must be {target} on 2 qupits")
        return {"PI": {_pattern([[0], [1]]): get("PI")},
                "B": {_pattern([[0, 1]]): get("B")}}
    if n == 3:
        per = target - get("PI")
        if per < 0 or get("SB") != 3 * per:
            raise InfeasibleError(
                f"SB count {get('SB')} incompatible with PI={get('PI')}")
        sb = {}
        for i in range(3):
            rest = [j for j in range(3) if j != i]
            sb[_pattern([[i], rest])] = per
        return {"PI": {_pattern([[0], [1], [2]]): get("PI")},
                "SB": sb,
                "G3": {_pattern([[0, 1, 2]]): get("G3")}}
    if n == 4:
        pairs = list(combinations(range(4), 2))
        for split in _compositions(get("S2B"), 6):
            sg3 = []
            ok = True
            for i in range(4):
                from_s2b = sum(split[qi] for qi, q in enumerate(pairs) if i not in q)
                v = target - get("PI") - from_s2b
                if v < 0:
                    ok = False
                    break
                sg3.append(v)
            if not ok or sum(sg3) != get("SG3"):
                continue
            s2b = {}
            for qi, q in enumerate(pairs):
                rest = [j for j in range(4) if j not in q]
                s2b[_pattern([[rest[0]], [rest[1]], list(q)])] = split[qi]
            sg3_map = {}
            for i in range(4):
                rest = [j for j in range(4) if j != i]
                sg3_map[_pattern([[i], rest])] = sg3[i]
            pairings = ([(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)])
            bb = {_pattern([list(a), list(b)]): 0 for a, b in pairings}
            bb[_pattern([[0, 1], [2, 3]])] = get("BB")  # purity blind, any split works
            out = {"PI": {_pattern([[0], [1], [2], [3]]): get("PI")},
                   "S2B": s2b, "SG3": sg3_map, "BB": bb}
            whole = _pattern([[0, 1, 2, 3]])
            for lab in ("G4", "C4", "P4"):
                if lab in solution:
                    out[lab] = {whole: get(lab)}
            return out
        raise InfeasibleError(
            "no per-variant split keeps every qupit pure exactly p + 1 times")
    raise ValueError(f"variants cover 2 to 4 qupits, got n={n}")
