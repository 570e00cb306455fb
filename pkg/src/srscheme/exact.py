"""Exact dense integer and shared-denominator rational matrices.

Integer matrices are plain ``numpy.int64`` arrays. Every kernel bounds its
largest possible intermediate before computing and raises ``OverflowError``
rather than wrapping around.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

INT64_MAX = np.iinfo(np.int64).max
# every integer of magnitude <= 2**53 is exact in float64, and so is every
# partial sum of a dot product whose terms are bounded that way
FLOAT_EXACT = 2**53

DEFAULT_TILE = 512


def as_int(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype != np.int64:
        if a.dtype.kind == "f" and not np.array_equal(a, np.round(a)):
            raise ValueError("matrix has non-integer entries")
        a = a.astype(np.int64)
    return a


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(a.max())), abs(int(a.min())))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def ones(n: int, k: int | None = None) -> np.ndarray:
    return np.ones((n, n if k is None else k), dtype=np.int64)


def zeros(n: int, k: int | None = None) -> np.ndarray:
    return np.zeros((n, n if k is None else k), dtype=np.int64)


def product_bound(a: np.ndarray, b: np.ndarray) -> int:
    """Largest magnitude any partial sum of ``a @ b`` can reach."""
    return _absmax(a) * _absmax(b) * a.shape[1]


def naive_matmul(a, b) -> np.ndarray:
    """Triple-loop reference product over Python ints."""
    a = as_int(a).tolist()
    b = as_int(b).tolist()
    n, inner, k = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError("dimension mismatch")
    out = [[0] * k for _ in range(n)]
    for i in range(n):
        row = a[i]
        for j in range(k):
            s = 0
            for t in range(inner):
                s += row[t] * b[t][j]
            out[i][j] = s
    result = np.array(out, dtype=object).reshape(n, k)
    if result.size and max(abs(int(x)) for x in result.flat) > INT64_MAX:
        raise OverflowError("product exceeds int64")
    return result.astype(np.int64)


def mat_mul(a, b, *, tile: int = DEFAULT_TILE, threads: int = 1) -> np.ndarray:
    """Exact integer product computed over output tiles.

    Tiles go through float64 BLAS when the bound on every partial sum is
    below 2**53, otherwise through numpy's int64 loop. Either way the result
    is exact, so it does not depend on ``tile`` or ``threads``.
    """
    a = as_int(a)
    b = as_int(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    bound = product_bound(a, b)
    if bound > INT64_MAX:
        raise OverflowError(f"product bound {bound} exceeds int64")
    use_float = bound < FLOAT_EXACT
    if use_float:
        a_k = a.astype(np.float64)
        b_k = b.astype(np.float64)
    else:
        a_k, b_k = a, b

    n, k = a.shape[0], b.shape[1]
    out = np.empty((n, k), dtype=np.int64)
    tile = max(1, int(tile))
    jobs = [(i, j) for i in range(0, n, tile) for j in range(0, k, tile)]

    def run(job):
        i, j = job
        block = a_k[i : i + tile] @ b_k[:, j : j + tile]
        out[i : i + tile, j : j + tile] = block

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, jobs))
    else:
        for job in jobs:
            run(job)
    return out


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) is ``a[i, j] * b``."""
    a = as_int(a)
    b = as_int(b)
    if _absmax(a) * _absmax(b) > INT64_MAX:
        raise OverflowError("kron entries exceed int64")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > INT64_MAX:
        raise OverflowError("kron dimensions overflow")
    return np.kron(a, b)


def kron_add(out: np.ndarray, a, b) -> np.ndarray:
    """In-place ``out += kron(a, b)`` that skips zero blocks of ``a``."""
    a = as_int(a)
    b = as_int(b)
    r, c = b.shape
    if out.shape != (a.shape[0] * r, a.shape[1] * c):
        raise ValueError("output shape does not match kron(a, b)")
    for i, j in zip(*np.nonzero(a)):
        block = out[i * r : (i + 1) * r, j * c : (j + 1) * c]
        block += a[i, j] * b
    return out


def hadamard(a, b) -> np.ndarray:
    """Entrywise product."""
    a = as_int(a)
    b = as_int(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if _absmax(a) * _absmax(b) > INT64_MAX:
        raise OverflowError("entrywise product exceeds int64")
    return a * b


def checked_add(a, b) -> np.ndarray:
    a = as_int(a)
    b = as_int(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if _absmax(a) + _absmax(b) > INT64_MAX:
        raise OverflowError("sum exceeds int64")
    return a + b


def checked_scale(a, c: int) -> np.ndarray:
    a = as_int(a)
    if _absmax(a) * abs(int(c)) > INT64_MAX:
        raise OverflowError("scaled matrix exceeds int64")
    return a * int(c)


@dataclass(frozen=True, eq=False)
class ScaledMatrix:
    """Rational matrix ``num / den`` with one positive shared denominator, kept gcd-reduced."""

    num: np.ndarray
    den: int = 1

    def __post_init__(self):
        num = as_int(self.num)
        den = int(self.den)
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(int(np.gcd.reduce(num, axis=None)) if num.size else 0, den)
        if g > 1:
            num = num // g
            den //= g
        num.setflags(write=False)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, a, den: int = 1) -> ScaledMatrix:
        return cls(as_int(a), den)

    @property
    def shape(self):
        return self.num.shape

    def _common(self, other: ScaledMatrix):
        l = math.lcm(self.den, other.den)
        return checked_scale(self.num, l // self.den), checked_scale(other.num, l // other.den), l

    def __add__(self, other: ScaledMatrix) -> ScaledMatrix:
        x, y, l = self._common(other)
        return ScaledMatrix(checked_add(x, y), l)

    def __sub__(self, other: ScaledMatrix) -> ScaledMatrix:
        x, y, l = self._common(other)
        return ScaledMatrix(checked_add(x, -y), l)

    def __neg__(self) -> ScaledMatrix:
        return ScaledMatrix(-self.num, self.den)

    def matmul(self, other: ScaledMatrix, **kw) -> ScaledMatrix:
        return ScaledMatrix(mat_mul(self.num, other.num, **kw), self.den * other.den)

    __matmul__ = matmul

    def hadamard(self, other: ScaledMatrix) -> ScaledMatrix:
        return ScaledMatrix(hadamard(self.num, other.num), self.den * other.den)

    def scale(self, c) -> ScaledMatrix:
        c = Fraction(c)
        return ScaledMatrix(checked_scale(self.num, c.numerator), self.den * c.denominator)

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.num)), self.den)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def equals(self, other: ScaledMatrix) -> bool:
        # canonical forms are unique
        return self.den == other.den and np.array_equal(self.num, other.num)

    def is_zero(self) -> bool:
        return not self.num.any()

    def is_idempotent(self, **kw) -> bool:
        return self.matmul(self, **kw).equals(self)

    def to_fraction_array(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for idx, x in np.ndenumerate(self.num):
            out[idx] = Fraction(int(x), self.den)
        return out


def scaled_sum(terms, shape) -> ScaledMatrix:
    """Sum of ``(coefficient, int matrix)`` pairs with rational coefficients."""
    coeffs = [Fraction(c) for c, _ in terms]
    den = math.lcm(*[c.denominator for c in coeffs]) if coeffs else 1
    acc = np.zeros(shape, dtype=np.int64)
    for c, (_, mat) in zip(coeffs, terms):
        acc = checked_add(acc, checked_scale(mat, c.numerator * (den // c.denominator)))
    return ScaledMatrix(acc, den)


# text formats


def write_dense(path, mat) -> None:
    """Header ``rows cols denominator`` then row-major numerators."""
    if isinstance(mat, ScaledMatrix):
        num, den = mat.num, mat.den
    else:
        num, den = as_int(mat), 1
    rows, cols = num.shape
    with open(path, "w") as fh:
        fh.write(f"{rows} {cols} {den}\n")
        for row in num:
            fh.write(" ".join(str(int(x)) for x in row))
            fh.write("\n")


def read_dense(path) -> ScaledMatrix:
    tokens = Path(path).read_text().split()
    rows, cols, den = (int(t) for t in tokens[:3])
    data = np.array([int(t) for t in tokens[3:]], dtype=np.int64)
    if data.size != rows * cols:
        raise ValueError(f"{path}: expected {rows * cols} entries, found {data.size}")
    return ScaledMatrix(data.reshape(rows, cols), den)


def write_coo(path, mat) -> None:
    """0/1 matrix as a ``# rows cols`` header then one ``row col`` line per 1."""
    mat = as_int(mat)
    if not np.isin(mat, (0, 1)).all():
        raise ValueError("coordinate export needs a 0/1 matrix")
    rows, cols = mat.shape
    with open(path, "w") as fh:
        fh.write(f"# {rows} {cols}\n")
        np.savetxt(fh, np.argwhere(mat), fmt="%d")


def read_coo(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().split()
        if not header or header[0] != "#":
            raise ValueError(f"{path}: missing '# rows cols' header")
        rows, cols = int(header[1]), int(header[2])
        body = fh.read()
    out = np.zeros((rows, cols), dtype=np.int64)
    if body.strip():
        coords = np.loadtxt(body.splitlines(), dtype=np.int64, ndmin=2)
        out[coords[:, 0], coords[:, 1]] = 1
    return out
