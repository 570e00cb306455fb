"""Arithmetic in GF(2^m) with elements stored as integer bit-vectors.

An element is an ``int`` in ``range(q)``; bit ``k`` is the coefficient of
``x**k`` in the polynomial basis. Index 0 is the zero element, index 1 is one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

DEFAULT_IRREDUCIBLE = {
    1: 0b10,  # x
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
}


def poly_mod(a: int, b: int) -> int:
    """Remainder of GF(2)[x] polynomial division of ``a`` by ``b``."""
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, divisor) == 0:
                return False
    return True


def default_irreducible(m: int) -> int:
    if m in DEFAULT_IRREDUCIBLE:
        return DEFAULT_IRREDUCIBLE[m]
    # smallest irreducible by integer value keeps outputs reproducible
    for poly in range(1 << m, 1 << (m + 1)):
        if is_irreducible(poly):
            return poly
    raise AssertionError("unreachable: irreducibles exist in every degree")


@dataclass(frozen=True)
class FieldSpec:
    """Presentation of GF(2^m) as GF(2)[x] / (irr)."""

    m: int
    irr: int = 0
    q: int = field(init=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if self.irr == 0:
            object.__setattr__(self, "irr", default_irreducible(self.m))
        if self.irr.bit_length() - 1 != self.m:
            raise ValueError(f"irr {self.irr:#b} does not have degree {self.m}")
        if not is_irreducible(self.irr):
            raise ValueError(f"irr {self.irr:#b} is reducible over GF(2)")
        object.__setattr__(self, "q", 1 << self.m)

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        return gf_add(a, b)

    def mul(self, a: int, b: int) -> int:
        return gf_mul(self, a, b)

    def describe(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "irr": format(self.irr, "b"),
            "basis": "polynomial basis, bit k = coefficient of x^k",
        }


def gf_add(a: int, b: int) -> int:
    return a ^ b


def gf_mul(spec: FieldSpec, a: int, b: int) -> int:
    """Shift-and-add product reduced modulo ``spec.irr``."""
    result = 0
    top = 1 << spec.m
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= spec.irr
    return result


def gf_inv(spec: FieldSpec, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    for b in spec.nonzero:
        if gf_mul(spec, a, b) == 1:
            return b
    raise AssertionError("irr is irreducible, so inverses exist")


def gh_table(spec: FieldSpec) -> np.ndarray:
    """Multiplication table of the field, a generalized Hadamard matrix GH(q, 1)."""
    q = spec.q
    table = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            table[a, b] = gf_mul(spec, a, b)
    return table


def verify_gh(table, g: int, lam: int) -> bool:
    """Check the generalized Hadamard property over the elementary abelian group of order ``g``.

    Group elements are ints in ``range(g)`` and subtraction is XOR, so ``g``
    must be a power of two.
    """
    table = np.asarray(table)
    if g < 1 or g & (g - 1):
        raise ValueError(f"group order {g} is not a power of two")
    n = g * lam
    if table.ndim != 2 or table.shape != (n, n):
        raise ValueError(f"table has shape {table.shape}, expected ({n}, {n})")
    if table.min() < 0 or table.max() >= g:
        raise ValueError("table entries are not elements of the group")
    for i, k in itertools.combinations(range(n), 2):
        counts = np.bincount(table[i] ^ table[k], minlength=g)
        if np.any(counts != lam):
            return False
    return True


def inner_product(a: int, b: int) -> int:
    return (a & b).bit_count() & 1


def character(beta: int, alpha: int) -> int:
    """chi_beta(alpha) = (-1)^<alpha, beta>."""
    return -1 if inner_product(alpha, beta) else 1


def character_table(spec: FieldSpec) -> np.ndarray:
    """Table K with K[alpha, beta] = chi_beta(alpha)."""
    q = spec.q
    idx = np.arange(q)
    anded = idx[:, None] & idx[None, :]
    parity = np.zeros_like(anded)
    for k in range(spec.m):
        parity ^= (anded >> k) & 1
    table = 1 - 2 * parity
    if not np.array_equal(table @ table.T, q * np.eye(q, dtype=table.dtype)):
        raise AssertionError("character table is not a Hadamard matrix")
    return table.astype(np.int64)


def sylvester(m: int) -> np.ndarray:
    """m-fold tensor power of [[1, 1], [1, -1]]."""
    h = np.array([[1]], dtype=np.int64)
    base = np.array([[1, 1], [1, -1]], dtype=np.int64)
    for _ in range(m):
        h = np.kron(h, base)
    return h


def paut_partner(spec: FieldSpec, sigma) -> tuple[int, ...] | None:
    """Return the unique tau with chi_tau(b)(sigma(a)) == chi_b(a) for all a, b, or None.

    Row lookup: the character beta composed with sigma^-1 must itself be a
    row of the character table; characters are distinct, so the match is unique.
    """
    q = spec.q
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(q)):
        raise ValueError(f"sigma {sigma} is not a permutation of range({q})")
    table = character_table(spec)
    rows = {tuple(table[:, b]): b for b in range(q)}
    inverse = [0] * q
    for a, s in enumerate(sigma):
        inverse[s] = a
    tau = []
    for beta in range(q):
        # alpha' -> chi_beta(sigma^-1(alpha'))
        key = tuple(table[inverse[a2], beta] for a2 in range(q))
        match = rows.get(key)
        if match is None:
            return None
        tau.append(match)
    return tuple(tau)


def is_paut_pair(spec: FieldSpec, sigma, tau) -> bool:
    table = character_table(spec)
    s = np.asarray(sigma)
    t = np.asarray(tau)
    return bool(np.array_equal(table[np.ix_(s, t)], table))


def parse_permutation(text: str, q: int) -> tuple[int, ...]:
    """Parse an image list such as ``"0,2,1,3"`` into a permutation of ``range(q)``."""
    try:
        images = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse permutation {text!r}") from exc
    if sorted(images) != list(range(q)):
        raise ValueError(f"{text!r} is not a permutation of {q} elements")
    return images
