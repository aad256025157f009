"""Full complements of mutually unbiased bases at the symplectic level.

A full complement in dimension p^n is a set of p^n + 1 compatibility groups
whose nonzero vectors partition Z_p^2n, i.e. a Lagrangian spread. The field
construction produces one directly from GF(p^n); the search enumerates all
Lagrangians and solves the exact cover problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

import numpy as np

from .errors import CensusViolationError, GuardExceededError, MubkitError
from .groups import (CompatGroup, MubType, classify_basis,
                     qupit_factor_distribution)
from .zplinalg import ExtField, Mat, SystemParams, Vec, rref, solve_affine

FIELD_DIM_GUARD = 625
LAGRANGIAN_GUARD = 100_000


@dataclass(frozen=True)
class Complement:
    params: SystemParams
    classes: tuple[CompatGroup, ...]


def _canonical_key(matrix: Mat) -> tuple[int, ...]:
    """Row-major reading of the rref matrix; base-p numeral order."""
    return tuple(v for row in matrix for v in row)


def _sorted_complement(params: SystemParams, matrices: list[Mat]) -> Complement:
    matrices = sorted(matrices, key=_canonical_key)
    return Complement(params, tuple(CompatGroup(params, m) for m in matrices))


def field_spread(params: SystemParams) -> Complement:
    """The standard spread from GF(p^n): the vertical class {(0|z)} plus one
    graph class {(x | S_a x)} per field element a, with S_a the trace Gram
    matrix of multiplication by a in the polynomial basis."""
    p, n = params.p, params.n
    if params.dim > FIELD_DIM_GUARD:
        raise GuardExceededError(
            f"field construction capped at dimension {FIELD_DIM_GUARD}, got {params.dim}")
    field = ExtField(p, n)
    basis = [field.element(p ** i) for i in range(n)]  # 1, x, ..., x^(n-1)
    pair_products = [[field.mul(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    matrices: list[Mat] = []
    vertical = tuple(
        tuple(1 if c == n + r else 0 for c in range(2 * n)) for r in range(n))
    matrices.append(vertical)
    for a in field.elements():
        gram = [[field.trace(field.mul(a, pair_products[i][j])) for j in range(n)]
                for i in range(n)]
        rows = []
        for i in range(n):
            left = tuple(1 if c == i else 0 for c in range(n))
            rows.append(left + tuple(gram[i]))
        matrices.append(tuple(rows))
    return _sorted_complement(params, matrices)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SpreadReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_spread(c: Complement) -> SpreadReport:
    """Symplectic verification: class count, each class Lagrangian, and the
    nonzero vectors exactly covered. Returns a report instead of raising."""
    p, n = c.params.p, c.params.n
    checks: list[CheckResult] = []
    want = p ** n + 1
    checks.append(CheckResult(
        "class count", len(c.classes) == want,
        f"{len(c.classes)} classes, expected {want}"))
    bad = None
    for idx, cls in enumerate(c.classes):
        rows = cls.matrix
        red, pivots = rref(rows, p)
        if len(rows) != n or len(pivots) != n:
            bad = (idx, "rank")
            break
        if red != rows:
            bad = (idx, "not in canonical rref form")
            break
        iso = all(
            _form(rows[i], rows[j], n, p) == 0
            for i in range(n) for j in range(i + 1, n))
        if not iso:
            bad = (idx, "not isotropic")
            break
    checks.append(CheckResult(
        "classes Lagrangian", bad is None,
        "all classes rank n and isotropic" if bad is None else
        f"class {bad[0]}: {bad[1]}"))
    seen: dict[int, int] = {}
    collision = None
    for idx, cls in enumerate(c.classes):
        for key in cls.member_keys:
            if key == 0:
                continue
            other = seen.setdefault(key, idx)
            if other != idx:
                collision = (other, idx, key)
                break
        if collision:
            break
    universe = p ** (2 * n) - 1
    covered = len(seen)
    checks.append(CheckResult(
        "pairwise disjoint", collision is None,
        "no shared nonzero vectors" if collision is None else
        f"classes {collision[0]} and {collision[1]} share vector key {collision[2]}"))
    checks.append(CheckResult(
        "exact cover", collision is None and covered == universe,
        f"{covered} of {universe} nonzero vectors covered"))
    return SpreadReport(tuple(checks))


def _form(a: Vec, b: Vec, n: int, p: int) -> int:
    return sum(a[i] * b[n + i] - a[n + i] * b[i] for i in range(n)) % p


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class PurityCensus:
    """Per qupit counts of classes where the qupit is pure or entangled."""

    pure: tuple[int, ...]
    entangled: tuple[int, ...]
    identity_tally: tuple[int, ...]  # non-identity classes' identity factors per qupit


def purity_census(c: Complement) -> PurityCensus:
    """Count pure and entangled classes per qupit and check the census:
    each qupit pure in exactly p + 1 classes, entangled in p^n - p, with the
    identity factor tally balancing to p^(2n-2) - 1."""
    p, n = c.params.p, c.params.n
    pure = [0] * n
    entangled = [0] * n
    tally = [0] * n
    for cls in c.classes:
        m = cls.members
        for i in range(n):
            dist = qupit_factor_distribution(cls, i)
            if dist.kind == "pure":
                pure[i] += 1
            else:
                entangled[i] += 1
            idents = int(np.sum((m[:, i] == 0) & (m[:, n + i] == 0)))
            tally[i] += idents - 1  # the group identity does not count
    want_pure = p + 1
    want_ent = p ** n - p
    want_tally = p ** (2 * n - 2) - 1
    for i in range(n):
        if pure[i] != want_pure or entangled[i] != want_ent:
            raise CensusViolationError(
                f"qupit {i}: pure in {pure[i]} classes, entangled in {entangled[i]}, "
                f"expected {want_pure} and {want_ent}")
        if tally[i] != want_tally:
            raise CensusViolationError(
                f"qupit {i}: identity factor tally {tally[i]}, expected {want_tally}")
    return PurityCensus(tuple(pure), tuple(entangled), tuple(tally))


def average_purity(c: Complement, qupit: int) -> Fraction:
    """Exact average of the qupit's purity over all classes of the complement."""
    census = purity_census(c)
    return Fraction(census.pure[qupit], len(c.classes))


# ---------------------------------------------------------------------------
# distribution


@dataclass(frozen=True)
class Distribution:
    counts: dict[str, int]
    per_basis: tuple[MubType, ...]


def complement_distribution(c: Complement) -> Distribution:
    per_basis = tuple(classify_basis(cls) for cls in c.classes)
    counts: dict[str, int] = {}
    for t in per_basis:
        counts[t.label] = counts.get(t.label, 0) + 1
    return Distribution(counts, per_basis)


# ---------------------------------------------------------------------------
# Lagrangian enumeration and spread search


def lagrangian_count(params: SystemParams) -> int:
    total = 1
    for i in range(1, params.n + 1):
        total *= params.p ** i + 1
    return total


def enumerate_lagrangians(params: SystemParams, guard: int = LAGRANGIAN_GUARD) -> list[Mat]:
    """All Lagrangian subspaces of Z_p^2n in canonical order.

    Each isotropic subspace is generated exactly once: a node in rref form is
    only extended by rows that become the last pivot row of the child's rref,
    so no deduplication is ever needed.
    """
    p, n = params.p, params.n
    total = lagrangian_count(params)
    if total > guard:
        raise GuardExceededError(
            f"{total} Lagrangians exceeds the enumeration guard {guard}")
    dim = 2 * n
    out: list[Mat] = []

    def extend(rows: list[Vec], last_pivot: int) -> None:
        if len(rows) == n:
            out.append(tuple(rows))
            return
        for c in range(last_pivot + 1, dim):
            if any(r[c] for r in rows):
                continue  # rref of the child would disturb the parent rows
            # unknown tail w[c+1:], with w zero before c and 1 at c;
            # isotropy against each existing row is linear in the tail
            free = dim - c - 1
            if len(rows) == 0:
                for tail in product(range(p), repeat=free):
                    w = (0,) * c + (1,) + tail
                    extend([w], c)
                continue
            coeff_rows = []
            rhs = []
            for r in rows:
                srow = [r[n + j] if j < n else -r[j - n] for j in range(dim)]
                coeff_rows.append([srow[j] % p for j in range(c + 1, dim)])
                rhs.append((-srow[c]) % p)
            part, null = solve_affine(coeff_rows, rhs, free, p)
            if part is None:
                continue
            for combo in product(range(p), repeat=len(null)):
                tail = list(part)
                for k, basis_vec in zip(combo, null):
                    if k:
                        tail = [(t + k * b) % p for t, b in zip(tail, basis_vec)]
                w = (0,) * c + (1,) + tuple(tail)
                extend(rows + [w], c)

    extend([], -1)
    out.sort(key=_canonical_key)
    return out


def search_spreads(params: SystemParams,
                   limit: int | None = None,
                   dist_filter: dict[str, int] | None = None,
                   symmetry_breaking: bool = True,
                   guard: int = LAGRANGIAN_GUARD) -> Iterator[Complement]:
    """Exact cover search over all Lagrangians, in canonical order.

    Either mode visits every spread exactly once. With symmetry_breaking the
    classes of a spread are picked as an increasing chain of canonical
    indices, so the lex-first spread comes out first; without it the search
    branches on the least uncovered vector, which reaches varied
    distributions sooner and suits filtered searches.
    """
    p, n = params.p, params.n
    lagrangians = enumerate_lagrangians(params, guard)
    members = [frozenset(k for k in CompatGroup(params, m).member_keys if k)
               for m in lagrangians]
    universe = p ** (2 * n) - 1
    containing: dict[int, list[int]] = {}
    for ci, keys in enumerate(members):
        for k in keys:
            containing.setdefault(k, []).append(ci)
    need = p ** n + 1
    covered: set[int] = set()
    chosen: list[int] = []
    emitted = 0

    def matches(c: Complement) -> bool:
        if not dist_filter:
            return True
        counts = complement_distribution(c).counts
        return all(counts.get(k, 0) == v for k, v in dist_filter.items())

    def emit() -> Iterator[Complement]:
        nonlocal emitted
        comp = _sorted_complement(params, [lagrangians[i] for i in chosen])
        if matches(comp):
            emitted += 1
            yield comp

    def least_uncovered(scan_from: int) -> int:
        v = scan_from
        while v <= universe and v in covered:
            v += 1
        return v

    def dfs_vector(scan_from: int) -> Iterator[Complement]:
        # each spread has a unique class covering the branching vector
        if limit is not None and emitted >= limit:
            return
        if len(chosen) == need:
            yield from emit()
            return
        v = least_uncovered(scan_from)
        if v > universe:
            return
        for ci in containing.get(v, ()):
            keys = members[ci]
            if not covered.isdisjoint(keys):
                continue
            chosen.append(ci)
            covered.update(keys)
            yield from dfs_vector(v + 1)
            covered.difference_update(keys)
            chosen.pop()
            if limit is not None and emitted >= limit:
                return

    def dfs_chain(start: int, scan_from: int) -> Iterator[Complement]:
        # increasing-index chains; some later class must cover the least
        # uncovered vector or the branch is dead
        if limit is not None and emitted >= limit:
            return
        if len(chosen) == need:
            yield from emit()
            return
        v = least_uncovered(scan_from)
        if v > universe:
            return
        if not any(ci >= start and covered.isdisjoint(members[ci])
                   for ci in containing.get(v, ())):
            return
        for ci in range(start, len(lagrangians)):
            keys = members[ci]
            if not covered.isdisjoint(keys):
                continue
            chosen.append(ci)
            covered.update(keys)
            yield from dfs_chain(ci + 1, scan_from)
            covered.difference_update(keys)
            chosen.pop()
            if limit is not None and emitted >= limit:
                return

    if symmetry_breaking:
        yield from dfs_chain(0, 1)
    else:
        yield from dfs_vector(1)


# ---------------------------------------------------------------------------
# serialization


def to_json_dict(c: Complement) -> dict:
    classes = []
    for cls in c.classes:
        gens = [{"x": list(row[:c.params.n]), "z": list(row[c.params.n:])}
                for row in cls.matrix]
        classes.append({"gens": gens})
    return {"p": c.params.p, "n": c.params.n, "classes": classes}


def from_json_dict(data: dict) -> Complement:
    try:
        params = SystemParams(int(data["p"]), int(data["n"]))
        matrices = []
        for entry in data["classes"]:
            rows = []
            for gen in entry["gens"]:
                x = [int(v) for v in gen["x"]]
                z = [int(v) for v in gen["z"]]
                if len(x) != params.n or len(z) != params.n:
                    raise ValueError("generator length mismatch")
                if any(not 0 <= v < params.p for v in x + z):
                    raise ValueError("exponent out of range")
                rows.append(tuple(x) + tuple(z))
            if len(rows) != params.n:
                raise ValueError("wrong generator count")
            matrices.append(tuple(rows))
    except (KeyError, TypeError, ValueError) as exc:
        raise MubkitError(f"malformed complement data: {exc}") from exc
    return Complement(params, tuple(CompatGroup(params, m) for m in matrices))


def dumps(c: Complement) -> str:
    return json.dumps(to_json_dict(c), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Complement:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MubkitError(f"malformed complement JSON: {exc}") from exc
    return from_json_dict(data)


def distribution_json_dict(dist: Distribution) -> dict:
    per_basis = [{"label": t.label,
                  "variant": [[q + 1 for q in block] for block in t.pattern]}
                 for t in dist.per_basis]
    return {"counts": dict(sorted(dist.counts.items())), "per_basis": per_basis}
