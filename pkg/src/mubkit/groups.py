"""Compatibility groups of commuting Pauli operators and their taxonomy.

A compatibility group on n qupits is an abelian group of p^n Pauli operators,
equivalently a Lagrangian (n dimensional totally isotropic) subspace of
Z_p^2n. Each group fixes one orthonormal basis; the functions here read off
everything that basis does at the level of exponent vectors: n-body content,
per qupit factor structure, separability, and the named basis types.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

import numpy as np

from .errors import (DependentGeneratorsError, NonCommutingError,
                     TheoremViolationError)
from .pauli import PauliOp, from_vector, symplectic_form, symplectic_form_vec
from .zplinalg import Mat, SystemParams, Vec, reduce_vector, rref

MUB_LABELS = ("PI", "B", "SB", "G3", "S2B", "SG3", "BB", "G4", "C4", "P4", "OTHER")


@dataclass(frozen=True)
class CompatGroup:
    """A compatibility group, identified by its canonical rref generator matrix."""

    params: SystemParams
    matrix: Mat

    @cached_property
    def members(self) -> np.ndarray:
        """All p^n member vectors, lexicographic in the exponent tuple."""
        p, n = self.params.p, self.params.n
        gens = np.array(self.matrix, dtype=np.int64).reshape(n, 2 * n)
        coeffs = np.array(list(product(range(p), repeat=n)), dtype=np.int64)
        return (coeffs @ gens) % p

    @cached_property
    def member_keys(self) -> frozenset[int]:
        p, n = self.params.p, self.params.n
        powers = p ** np.arange(2 * n, dtype=np.int64)
        return frozenset(int(k) for k in self.members @ powers)

    def operators(self) -> tuple[PauliOp, ...]:
        return tuple(from_vector(tuple(int(v) for v in row)) for row in self.members)


def validate_generators(params: SystemParams, gens: list[PauliOp] | tuple[PauliOp, ...]) -> Mat:
    """Check pairwise commutation and independence; return the canonical rref matrix."""
    for (i, a), (j, b) in combinations(enumerate(gens), 2):
        if symplectic_form(a, b, params.p):
            raise NonCommutingError(i, j)
    mat, pivots = rref([g.vector() for g in gens], params.p)
    if len(pivots) < len(gens):
        raise DependentGeneratorsError(
            f"{len(gens)} generators span only {len(pivots)} dimensions")
    return mat


def group_from_generators(params: SystemParams, gens: list[PauliOp] | tuple[PauliOp, ...]) -> CompatGroup:
    if len(gens) != params.n:
        raise DependentGeneratorsError(
            f"a compatibility group on {params.n} qupits needs {params.n} generators, got {len(gens)}")
    return CompatGroup(params, validate_generators(params, gens))


def enumerate_group(group: CompatGroup) -> tuple[PauliOp, ...]:
    """All p^n members as operators, identity first."""
    return group.operators()


def nbody_profile(group: CompatGroup) -> tuple[int, ...]:
    """Counts of members acting on exactly 1..n qupits; the identity is excluded."""
    n = group.params.n
    m = group.members
    bodies = ((m[:, :n] != 0) | (m[:, n:] != 0)).sum(axis=1)
    counts = np.bincount(bodies, minlength=n + 1)
    return tuple(int(c) for c in counts[1:])


@dataclass(frozen=True)
class FactorDistribution:
    """What one qupit's local factors look like across a whole group."""

    kind: str  # "pure" or "entangled"
    local: tuple[int, int] | None  # primitive local (x, z) for the pure case
    multiplicity: int


def qupit_factor_distribution(group: CompatGroup, qupit: int) -> FactorDistribution:
    """The local factor tally at one qupit: a single operator line, each power
    p^(n-1) times, or all p^2 local classes, each p^(n-2) times."""
    p, n = group.params.p, group.params.n
    m = group.members
    codes = m[:, qupit] * p + m[:, n + qupit]
    tally = np.bincount(codes, minlength=p * p)
    present = {int(c) for c in np.nonzero(tally)[0]}
    if len(present) == p * p and n >= 2:
        want = p ** (n - 2)
        if all(int(tally[c]) == want for c in range(p * p)):
            return FactorDistribution("entangled", None, want)
    if len(present) == p:
        a, b = next((c // p, c % p) for c in sorted(present) if c)
        scale = pow(a if a else b, p - 2, p)  # make the first nonzero exponent 1
        prim = ((a * scale) % p, (b * scale) % p)
        line = {((k * prim[0]) % p) * p + (k * prim[1]) % p for k in range(p)}
        want = p ** (n - 1)
        if present == line and all(int(tally[c]) == want for c in line):
            return FactorDistribution("pure", prim, want)
    raise TheoremViolationError(
        f"qupit {qupit} shows {len(present)} local classes with tallies "
        f"{sorted(set(int(t) for t in tally if t))}")


def _support_dim(group: CompatGroup, subset: frozenset[int]) -> int:
    """Dimension of the subgroup supported entirely inside the given qupits."""
    p, n = group.params.p, group.params.n
    outside = [i for i in range(n) if i not in subset]
    cols = outside + [n + i for i in outside]
    count = int(np.all(group.members[:, cols] == 0, axis=1).sum())
    dim = 0
    while count > 1:
        count //= p
        dim += 1
    return dim


def separation_pattern(group: CompatGroup) -> tuple[tuple[int, ...], ...]:
    """Finest partition of the qupits over which the group factorizes.

    A subset S splits the group iff the members supported inside S and those
    supported inside its complement together span all n dimensions.
    """
    n = group.params.n
    blocks = [frozenset(range(n))]
    for mask in range(1, 1 << (n - 1)):
        subset = frozenset(i for i in range(n) if (mask >> i) & 1)
        rest = frozenset(range(n)) - subset
        if _support_dim(group, subset) + _support_dim(group, rest) != n:
            continue
        refined = []
        for b in blocks:
            for part in (b & subset, b & rest):
                if part:
                    refined.append(part)
        blocks = refined
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@dataclass(frozen=True)
class MubType:
    label: str
    pattern: tuple[tuple[int, ...], ...]
    profile: tuple[int, ...]


def classify_basis(group: CompatGroup) -> MubType:
    """Named basis type from the separation pattern, falling back on the
    n-body profile of a nonseparable 4 qupit block."""
    p, n = group.params.p, group.params.n
    pattern = separation_pattern(group)
    profile = nbody_profile(group)
    sizes = sorted(len(b) for b in pattern)
    if n > 4:
        label = "OTHER"
    elif sizes == [1] * n:
        label = "PI"
    elif n == 2:
        label = "B"
    elif n == 3:
        label = "SB" if sizes == [1, 2] else "G3"
    elif sizes == [1, 1, 2]:
        label = "S2B"
    elif sizes == [1, 3]:
        label = "SG3"
    elif sizes == [2, 2]:
        label = "BB"
    else:
        two_body, three_body = profile[1], profile[2]
        if two_body == 6 * (p - 1):
            label = "G4"
        elif two_body == 2 * (p - 1):
            label = "C4"
        elif two_body == 0 and three_body == 4 * (p * p - 1):
            label = "P4"
        else:
            label = "OTHER"
    return MubType(label, pattern, profile)


def random_lagrangian(params: SystemParams, rng: random.Random) -> CompatGroup:
    """A random compatibility group, by rejection sampled isotropic extension."""
    p, n = params.p, params.n
    rows: list[Vec] = []
    mat: Mat = ()
    pivots: Vec = ()
    zero = (0,) * (2 * n)
    while len(rows) < n:
        v = tuple(rng.randrange(p) for _ in range(2 * n))
        if reduce_vector(v, mat, pivots, p) == zero:
            continue
        if any(symplectic_form_vec(v, r, p) for r in rows):
            continue
        rows.append(v)
        mat, pivots = rref(rows, p)
    return CompatGroup(params, mat)
