"""Symmetric Latin squares with constant diagonal from a round-robin 1-factorization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldSpec

X = "x"
Y = "y"


def one_factorization(n: int) -> list[list[tuple[int, int]]]:
    """Circle method: n - 1 perfect matchings that partition the edges of K_n.

    Vertex ``n - 1`` is the fixed point; in round ``r`` it meets ``r`` and the
    remaining vertices pair up as ``r + i`` with ``r - i`` (mod ``n - 1``).
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be an even integer >= 2, got {n}")
    k = n - 1
    rounds = []
    for r in range(k):
        matching = [(k, r)]
        for i in range(1, (n - 2) // 2 + 1):
            matching.append(((r + i) % k, (r - i) % k))
        rounds.append(matching)
    return rounds


@dataclass(frozen=True, eq=False)
class LatinSquare:
    """Symbols are coded as ints: field elements ``0..q-1``, then ``x = q``, ``y = q + 1``."""

    q: int
    codes: np.ndarray

    @property
    def n(self) -> int:
        return self.q + 2

    @property
    def x(self) -> int:
        return self.q

    @property
    def y(self) -> int:
        return self.q + 1

    def symbol(self, code: int):
        if code == self.x:
            return X
        if code == self.y:
            return Y
        return int(code)

    def code(self, symbol) -> int:
        if symbol == X:
            return self.x
        if symbol == Y:
            return self.y
        symbol = int(symbol)
        if not 0 <= symbol < self.q:
            raise ValueError(f"{symbol} is not a symbol of this square")
        return symbol

    def __getitem__(self, rc):
        return self.symbol(int(self.codes[rc]))

    def symbols(self) -> list:
        return [*range(self.q), X, Y]

    def to_text(self) -> str:
        lines = [" ".join(str(self.symbol(int(c))) for c in row) for row in self.codes]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> LatinSquare:
        rows = [line.split() for line in text.strip().splitlines()]
        n = len(rows)
        q = n - 2
        codes = np.empty((n, n), dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} symbols, expected {n}")
            for j, tok in enumerate(row):
                codes[i, j] = q if tok == X else q + 1 if tok == Y else int(tok)
        return cls(q, codes)


def latin_violations(L: LatinSquare) -> list[str]:
    """Names of violated invariants: latin rows/columns, symmetry, constant diagonal."""
    bad = []
    full = list(range(L.n))
    if any(sorted(row) != full for row in L.codes.tolist()):
        bad.append("row is not a permutation of the symbols")
    if any(sorted(col) != full for col in L.codes.T.tolist()):
        bad.append("column is not a permutation of the symbols")
    if not np.array_equal(L.codes, L.codes.T):
        bad.append("not symmetric")
    if np.any(np.diag(L.codes) != L.x):
        bad.append("diagonal is not constantly x")
    return bad


def build_latin(spec: FieldSpec, relabel=None) -> LatinSquare:
    """Symmetric Latin square of order q + 2 with diagonal x.

    Round ``r`` of the circle method carries the ``r``-th field element and the
    last round carries y. ``relabel`` is an optional permutation of
    ``range(q + 1)`` that reassigns round ``r`` to label ``relabel[r]``
    (label ``q`` meaning y).
    """
    q = spec.q
    n = q + 2
    labels = list(range(q + 1)) if relabel is None else [int(r) for r in relabel]
    if sorted(labels) != list(range(q + 1)):
        raise ValueError(f"relabel must be a permutation of range({q + 1})")
    codes = np.full((n, n), q, dtype=np.int64)
    for r, matching in enumerate(one_factorization(n)):
        code = q + 1 if labels[r] == q else labels[r]
        for a, b in matching:
            codes[a, b] = codes[b, a] = code
    L = LatinSquare(q, codes)
    bad = latin_violations(L)
    if bad:
        raise AssertionError(f"circle method produced an invalid square: {bad}")
    return L


def factor_set(L: LatinSquare) -> dict:
    """Symbol -> permutation matrix P_a with (P_a)[b, b'] = 1 iff L(b, b') = a."""
    return {L.symbol(c): (L.codes == c).astype(np.int64) for c in range(L.n)}
