"""Exact linear algebra over Z_p and small extension fields GF(p^N).

Everything here is integer arithmetic, no floats. Matrices are tuples of
tuples of ints reduced mod p; field elements are coefficient tuples in the
polynomial basis, low degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class SystemParams:
    """A system of n qupits, each of prime dimension p."""

    p: int
    n: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")

    @property
    def dim(self) -> int:
        return self.p ** self.n


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0")
    return pow(a, p - 2, p)


def rref(rows: Iterable[Sequence[int]], p: int) -> tuple[Mat, Vec]:
    """Reduced row echelon form over Z_p.

    Returns (rows, pivot_columns) with zero rows dropped, pivot entries 1,
    and pivot columns cleared above and below.
    """
    work = [[x % p for x in row] for row in rows]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        hit = next((i for i in range(r, len(work)) if work[i][c]), None)
        if hit is None:
            continue
        work[r], work[hit] = work[hit], work[r]
        inv = inv_mod(work[r][c], p)
        work[r] = [(x * inv) % p for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def reduce_vector(vec: Sequence[int], mat: Mat, pivots: Vec, p: int) -> Vec:
    """Reduce vec against an rref matrix; the result is 0 iff vec is in the span."""
    v = [x % p for x in vec]
    for row, c in zip(mat, pivots):
        f = v[c]
        if f:
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return tuple(v)


def nullspace(rows: Iterable[Sequence[int]], ncols: int, p: int) -> Mat:
    """Basis of the right nullspace {v : rows @ v = 0 mod p}."""
    red, pivots = rref(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(red, pivots):
            v[c] = (-row[f]) % p
        basis.append(tuple(v))
    return tuple(basis)


def solve_affine(rows: Iterable[Sequence[int]], rhs: Sequence[int], ncols: int,
                 p: int) -> tuple[Vec | None, Mat]:
    """Solve rows @ v = rhs mod p.

    Returns (particular_solution_or_None, nullspace_basis); the solution set
    is particular + span(basis).
    """
    aug = [list(row) + [b % p] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug, p)
    if ncols in pivots:
        return None, ()
    part = [0] * ncols
    for row, c in zip(red, pivots):
        part[c] = row[ncols]
    return tuple(part), nullspace([r[:ncols] for r in red], ncols, p)


# ---------------------------------------------------------------------------
# extension fields


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = num[:]
    dd = len(den) - 1
    inv = inv_mod(den[dd], p)
    quot = [0] * max(len(num) - dd, 0)
    for i in range(len(num) - 1, dd - 1, -1):
        f = (num[i] * inv) % p
        if f:
            quot[i - dd] = f
            for j, c in enumerate(den):
                num[i - dd + j] = (num[i - dd + j] - f * c) % p
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    # monic poly given as full coefficient list, low degree first;
    # trial division by every monic polynomial of degree 1 .. deg//2
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            den = list(tail) + [1]
            _, rem = _poly_divmod(coeffs[:], den, p)
            if rem == [0]:
                return False
    return True


class ExtField:
    """GF(p^degree) in the polynomial basis {1, x, ..., x^(degree-1)}.

    The modulus is the first monic irreducible polynomial in the scan that
    varies the low degree coefficients fastest, so it is the lexicographically
    smallest with coefficients compared from the constant term up.
    """

    def __init__(self, p: int, degree: int, modulus: Vec | None = None):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if degree < 1:
            raise ValueError(f"degree must be >= 1, got {degree}")
        self.p = p
        self.degree = degree
        self.order = p ** degree
        if modulus is None:
            modulus = self._find_modulus(p, degree)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != degree:
                raise ValueError("modulus must list the non-leading coefficients")
        self.modulus = modulus
        # x^(degree+j) mod m, reduced to coefficient tuples, for j = 0..degree-2
        self._reductions: list[Vec] = []
        red = [(-c) % p for c in modulus]  # x^degree
        self._reductions.append(tuple(red))
        for _ in range(degree - 2):
            red = self._shift_reduce(red)
            self._reductions.append(tuple(red))
        self.zero = (0,) * degree
        self.one = tuple([1] + [0] * (degree - 1))

    def _shift_reduce(self, red: list[int]) -> list[int]:
        p = self.p
        top = red[-1]
        out = [0] + red[:-1]
        if top:
            base = self._reductions[0]
            out = [(a + top * b) % p for a, b in zip(out, base)]
        return out

    @staticmethod
    def _find_modulus(p: int, degree: int) -> Vec:
        for k in range(p ** degree):
            coeffs = []
            kk = k
            for _ in range(degree):
                coeffs.append(kk % p)
                kk //= p
            if _is_irreducible(coeffs + [1], p):
                return tuple(coeffs)
        raise RuntimeError("unreachable: irreducible polynomials exist for every degree")

    # elements are coefficient tuples of length degree, low degree first

    def element(self, index: int) -> Vec:
        """The index-th element, digits of index base p, constant coefficient first."""
        coeffs = []
        for _ in range(self.degree):
            coeffs.append(index % self.p)
            index //= self.p
        return tuple(coeffs)

    def index(self, a: Vec) -> int:
        k = 0
        for c in reversed(a):
            k = k * self.p + c
        return k

    def elements(self) -> Iterable[Vec]:
        for k in range(self.order):
            yield self.element(k)

    def add(self, a: Vec, b: Vec) -> Vec:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Vec, b: Vec) -> Vec:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a: Vec, b: Vec) -> Vec:
        p, d = self.p, self.degree
        prod_coeffs = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_coeffs[i + j] = (prod_coeffs[i + j] + x * y) % p
        out = prod_coeffs[:d]
        for j in range(d, 2 * d - 1):
            c = prod_coeffs[j]
            if c:
                red = self._reductions[j - d]
                out = [(u + c * v) % p for u, v in zip(out, red)]
        return tuple(out)

    def pow(self, a: Vec, e: int) -> Vec:
        out = self.one
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: Vec) -> Vec:
        if a == self.zero:
            raise ZeroDivisionError("no inverse of 0")
        return self.pow(a, self.order - 2)

    def frobenius(self, a: Vec) -> Vec:
        return self.pow(a, self.p)

    def trace(self, a: Vec) -> int:
        """Tr(a) = a + a^p + ... + a^(p^(degree-1)), an element of Z_p."""
        acc = self.zero
        cur = a
        for _ in range(self.degree):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur)
        if any(acc[1:]):
            raise ArithmeticError("trace left the prime field")
        return acc[0]


def field_make(p: int, degree: int) -> ExtField:
    return ExtField(p, degree)


def field_trace(field: ExtField, a: Vec) -> int:
    return field.trace(a)
