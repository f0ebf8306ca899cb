"""Square Boolean matrices backed by per-row Python int bitmasks.

Rows are arbitrary-precision ints, so elementwise AND/OR/NOT and the
Boolean matrix product run word-parallel. Bit j of ``rows[i]`` is the
(i, j) entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set-bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class BoolMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        if any(r & ~full for r in self.rows):
            raise ValueError("row has bits outside the matrix dimension")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "BoolMatrix":
        return cls(n, (0,) * n)

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "BoolMatrix":
        rows = [0] * n
        for i, j in pairs:
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    # -- element access ----------------------------------------------------

    def get(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """All (i, j) with entry 1, in row-major order."""
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                yield (i, j)

    def count(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def any(self) -> bool:
        return any(self.rows)

    # -- elementwise algebra -----------------------------------------------

    def __and__(self, other: "BoolMatrix") -> "BoolMatrix":
        self._check_dim(other)
        return BoolMatrix(self.n, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __or__(self, other: "BoolMatrix") -> "BoolMatrix":
        self._check_dim(other)
        return BoolMatrix(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __invert__(self) -> "BoolMatrix":
        full = (1 << self.n) - 1
        return BoolMatrix(self.n, tuple(~r & full for r in self.rows))

    def transpose(self) -> "BoolMatrix":
        cols = [0] * self.n
        for i, row in enumerate(self.rows):
            bit = 1 << i
            for j in iter_bits(row):
                cols[j] |= bit
        return BoolMatrix(self.n, tuple(cols))

    def _check_dim(self, other: "BoolMatrix") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    # -- graph-algebra products --------------------------------------------

    def matmul(self, other: "BoolMatrix") -> "BoolMatrix":
        """Boolean matrix product: (AB)_ij = OR_k (A_ik AND B_kj)."""
        self._check_dim(other)
        out = []
        for row in self.rows:
            acc = 0
            for k in iter_bits(row):
                acc |= other.rows[k]
            out.append(acc)
        return BoolMatrix(self.n, tuple(out))

    def maxplus(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Max-plus product with a vector: out_i = max_k (A_ik * vec_k).

        Entries with A_ik = 0 contribute 0, so the result is never below
        zero even for an empty row.
        """
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        out = []
        for row in self.rows:
            best = 0
            for k in iter_bits(row):
                if vec[k] > best:
                    best = vec[k]
            out.append(best)
        return tuple(out)

    # -- debugging ----------------------------------------------------------

    def to_ascii(self) -> str:
        """Render as an n-line grid of 0/1 characters (row i on line i)."""
        return "\n".join(
            "".join("1" if (row >> j) & 1 else "0" for j in range(self.n))
            for row in self.rows
        )
