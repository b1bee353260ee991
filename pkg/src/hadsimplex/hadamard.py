"""Hadamard matrices: construction, verification, equivalence operations and I/O.

Matrices are stored as tuples of rows of +1/-1 ints, so they are hashable and
immutable.  Arithmetic goes through numpy int64, which is exact here because
every scalar product is bounded by the order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    CapacityError,
    InvalidParameterError,
    MalformedMatrixError,
    MatrixParseError,
)

MAX_SYLVESTER_K = 24

OP_KINDS = ("negate-row", "negate-col", "swap-rows", "swap-cols")


@dataclass(frozen=True)
class HadamardMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        _check_signs(rows)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_array(cls, a) -> "HadamardMatrix":
        return cls(tuple(map(tuple, np.asarray(a).tolist())))

    @property
    def order(self) -> int:
        return len(self.rows)

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.order, self.order)

    def last_column(self) -> tuple:
        return tuple(r[-1] for r in self.rows)

    def __str__(self):
        return serialize_matrix(self)


@dataclass(frozen=True)
class EquivalenceOp:
    """One elementary equivalence operation; indices are 1-based."""

    kind: str
    indices: tuple

    def __post_init__(self):
        if self.kind not in OP_KINDS:
            raise InvalidParameterError(f"unknown operation kind {self.kind!r}")
        idx = tuple(int(i) for i in self.indices)
        want = 2 if self.kind.startswith("swap") else 1
        if len(idx) != want:
            raise InvalidParameterError(f"{self.kind} takes {want} index(es), got {len(idx)}")
        if want == 2 and idx[0] == idx[1]:
            raise InvalidParameterError("swap indices must be distinct")
        object.__setattr__(self, "indices", idx)


def _check_signs(rows) -> None:
    m = len(rows)
    for i, r in enumerate(rows):
        if len(r) != m:
            raise MalformedMatrixError(f"row {i + 1} has length {len(r)}, expected {m}")
        for v in r:
            if v != 1 and v != -1:
                raise MalformedMatrixError(f"row {i + 1} contains {v}; entries must be +1 or -1")


def _as_array(H) -> np.ndarray:
    if isinstance(H, HadamardMatrix):
        return H.to_array()
    a = np.asarray(H)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MalformedMatrixError(f"expected a square matrix, got shape {a.shape}")
    if not np.all((a == 1) | (a == -1)):
        raise MalformedMatrixError("entries must be +1 or -1")
    return a.astype(np.int64)


def verify(H) -> bool:
    """True iff ``H @ H.T == m * I`` in exact integer arithmetic."""
    a = _as_array(H)
    m = a.shape[0]
    return bool(np.array_equal(a @ a.T, m * np.eye(m, dtype=np.int64)))


def sylvester(k: int) -> HadamardMatrix:
    """Order-``2**k`` matrix by repeated doubling ``[[H, H], [H, -H]]``."""
    if k < 0:
        raise InvalidParameterError("k must be non-negative")
    if k > MAX_SYLVESTER_K:
        raise CapacityError(f"sylvester order 2**{k} exceeds the 2**{MAX_SYLVESTER_K} cap")
    h = np.ones((1, 1), dtype=np.int8)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return HadamardMatrix.from_array(h)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def paley_I(q: int) -> HadamardMatrix:
    """Order-``q+1`` matrix from quadratic residues mod a prime ``q = 3 (mod 4)``.

    With the Jacobsthal matrix ``Q[i, j] = chi(j - i)`` the result is
    ``I + [[0, 1^T], [-1, Q]]``.
    """
    if not is_prime(q) or q % 4 != 3:
        raise InvalidParameterError(f"paley_I needs a prime q = 3 (mod 4), got {q}")
    residues = {(x * x) % q for x in range(1, q)}
    chi = np.array([0] + [1 if d in residues else -1 for d in range(1, q)], dtype=np.int64)
    idx = np.arange(q)
    jac = chi[(idx[None, :] - idx[:, None]) % q]
    m = q + 1
    h = np.zeros((m, m), dtype=np.int64)
    h[0, 1:] = 1
    h[1:, 0] = -1
    h[1:, 1:] = jac
    h += np.eye(m, dtype=np.int64)
    return HadamardMatrix.from_array(h)


def apply_op(H: HadamardMatrix, op: EquivalenceOp) -> HadamardMatrix:
    m = H.order
    for i in op.indices:
        if not 1 <= i <= m:
            raise InvalidParameterError(f"index {i} out of range [1, {m}]")
    a = H.to_array()
    idx = [i - 1 for i in op.indices]
    if op.kind == "negate-row":
        a[idx[0], :] *= -1
    elif op.kind == "negate-col":
        a[:, idx[0]] *= -1
    elif op.kind == "swap-rows":
        a[[idx[0], idx[1]], :] = a[[idx[1], idx[0]], :]
    else:
        a[:, [idx[0], idx[1]]] = a[:, [idx[1], idx[0]]]
    return HadamardMatrix.from_array(a)


def apply_ops(H: HadamardMatrix, ops: Iterable[EquivalenceOp]) -> HadamardMatrix:
    for op in ops:
        H = apply_op(H, op)
    return H


def normalize_last_column(H: HadamardMatrix) -> HadamardMatrix:
    """Negate every row whose last entry is -1."""
    a = H.to_array()
    a[a[:, -1] == -1, :] *= -1
    return HadamardMatrix.from_array(a)


def parse_matrix(text: str) -> HadamardMatrix:
    """Parse rows of ``+``/``-`` characters.  Blank lines and whitespace are ignored.

    Only the shape is checked here; orthogonality is left to :func:`verify`.
    """
    rows = []
    width = None
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = "".join(raw.split())
        if not line:
            continue
        last_line = lineno
        bad = set(line) - {"+", "-"}
        if bad:
            raise MatrixParseError(f"illegal character(s) {''.join(sorted(bad))!r}", lineno)
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise MatrixParseError(f"row has {len(line)} entries, expected {width}", lineno)
        rows.append(tuple(1 if c == "+" else -1 for c in line))
    if not rows:
        raise MatrixParseError("no matrix rows found")
    if len(rows) != width:
        raise MatrixParseError(f"matrix is {len(rows)}x{width}, not square", last_line)
    return HadamardMatrix(tuple(rows))


def serialize_matrix(H: HadamardMatrix) -> str:
    return "".join("".join("+" if v == 1 else "-" for v in r) + "\n" for r in H.rows)


def read_matrix(path) -> HadamardMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def generate(order: int, method: str) -> HadamardMatrix:
    """Build an order-``order`` matrix with the named construction."""
    if method == "sylvester":
        if order < 1 or order & (order - 1):
            raise InvalidParameterError(f"sylvester needs a power-of-two order, got {order}")
        return sylvester(order.bit_length() - 1)
    if method == "paley":
        return paley_I(order - 1)
    raise InvalidParameterError(f"unknown method {method!r}")


def constructible(order: int) -> HadamardMatrix | None:
    """Some matrix of the given order from the built-in constructions, or None."""
    if order >= 1 and order & (order - 1) == 0:
        return sylvester(order.bit_length() - 1)
    if is_prime(order - 1) and (order - 1) % 4 == 3:
        return paley_I(order - 1)
    return None

