"""Exact dense matrices over checked 64-bit integers or a prime field.

Two element domains are supported, both integral domains, which is what makes
a random fingerprint informative:

* ``int64``: ordinary integers restricted to the signed 64-bit range.  Any
  operation whose true result leaves that range raises ``IntegerOverflow``
  naming the offending entry; results never wrap or get promoted silently.
* ``zp``: integers modulo a prime ``p``.  Entries are kept canonical in
  ``[0, p)`` and every operation reduces its result.

Storage is a read-only numpy ``int64`` array.  The fast paths stay in numpy
only when an a-priori magnitude bound proves that no intermediate (including
partial sums, which grow monotonically in magnitude bound) can overflow;
otherwise the code falls back to exact Python integers and checks every step.

``scalar_multiplies()`` exposes a process-wide count of ring multiplications
performed by ``matmul``, ``mat_vec`` and ``outer``.  The count is derived from
operand shapes (the schoolbook cost), not timed, so it is exact and
deterministic regardless of which internal path ran.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    IntegerOverflow,
    InvalidEntry,
    InvalidRing,
    RingMismatch,
)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

INT64 = "int64"
PRIME_FIELD = "zp"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """Element domain of a matrix: ``int64`` or ``zp`` with a prime modulus."""

    kind: str
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind == INT64:
            if self.modulus is not None:
                raise InvalidRing("int64 ring takes no modulus")
        elif self.kind == PRIME_FIELD:
            if self.modulus is None:
                raise InvalidRing("prime-field ring needs a modulus")
            if self.modulus > INT64_MAX:
                raise InvalidRing("modulus too large for 64-bit storage")
            # Trial division is plenty: moduli here are small by design.
            if not _is_prime(self.modulus):
                raise InvalidRing(f"modulus {self.modulus} is not prime")
        else:
            raise InvalidRing(f"unknown ring kind {self.kind!r}")

    @staticmethod
    def int64() -> "RingSpec":
        return RingSpec(INT64)

    @staticmethod
    def prime_field(p: int) -> "RingSpec":
        return RingSpec(PRIME_FIELD, p)

    def __str__(self) -> str:
        return INT64 if self.kind == INT64 else f"zp {self.modulus}"


def parse_ring(text: str) -> RingSpec:
    """Parse ``"int64"`` or ``"zp <p>"`` into a ring."""
    parts = text.split()
    if parts == [INT64]:
        return RingSpec.int64()
    if len(parts) == 2 and parts[0] == PRIME_FIELD:
        try:
            p = int(parts[1])
        except ValueError:
            raise InvalidRing(f"bad modulus {parts[1]!r}") from None
        return RingSpec.prime_field(p)
    raise InvalidRing(f"bad ring {text!r}; expected 'int64' or 'zp <p>'")


def _coerce_entries(data, shape: tuple[int, ...], ring: RingSpec) -> np.ndarray:
    try:
        arr = np.asarray(data)
    except ValueError:
        raise DimensionMismatch("ragged data cannot fill a matrix") from None
    size = 1
    for d in shape:
        size *= d
    if arr.ndim == 1 and len(shape) == 2 and arr.size == size:
        arr = arr.reshape(shape)
    if arr.shape != shape:
        raise DimensionMismatch(f"data of shape {arr.shape} does not fill {shape}")
    if np.issubdtype(arr.dtype, np.integer):
        if arr.dtype == np.uint64 and arr.size and int(arr.max()) > INT64_MAX:
            raise InvalidEntry("entry exceeds the signed 64-bit range")
        out = arr.astype(np.int64, copy=True)
    else:
        # Mixed, object or non-integer input: vet each value exactly.
        vals = []
        for v in arr.ravel().tolist():
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidEntry(f"non-integer entry {v!r}")
            if v < INT64_MIN or v > INT64_MAX:
                raise InvalidEntry(f"entry {v} outside the signed 64-bit range")
            vals.append(v)
        out = np.array(vals, dtype=np.int64).reshape(shape)
    if ring.kind == PRIME_FIELD:
        p = ring.modulus
        bad = (out < 0) | (out >= p)
        if bad.any():
            pos = np.argwhere(bad)[0]
            raise InvalidEntry(
                f"entry {out[tuple(pos)]} at {tuple(int(i) for i in pos)} "
                f"is not reduced mod {p}"
            )
    return out


class Matrix:
    """Immutable dense matrix with row-major entries in a fixed ring."""

    __slots__ = ("ring", "_a")

    def __init__(self, rows: int, cols: int, ring: RingSpec, data) -> None:
        if rows < 1 or cols < 1:
            raise DimensionMismatch("matrix needs at least one row and one column")
        arr = _coerce_entries(data, (rows, cols), ring)
        arr.flags.writeable = False
        self.ring = ring
        self._a = arr

    @staticmethod
    def _wrap(arr: np.ndarray, ring: RingSpec) -> "Matrix":
        # Internal constructor for arrays the callee already validated.
        m = Matrix.__new__(Matrix)
        a = np.ascontiguousarray(arr, dtype=np.int64)
        a.flags.writeable = False
        m.ring = ring
        m._a = a
        return m

    @classmethod
    def from_rows(cls, rows, ring: RingSpec) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix needs at least one row and one column")
        return cls(len(rows), len(rows[0]), ring, rows)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def data(self) -> np.ndarray:
        """Read-only (rows, cols) int64 view of the entries."""
        return self._a

    def __getitem__(self, key) -> int:
        return int(self._a[key])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and np.array_equal(self._a, other._a)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {self.ring})"


class Vector:
    """Immutable vector with entries in a fixed ring."""

    __slots__ = ("ring", "_a")

    def __init__(self, ring: RingSpec, data) -> None:
        arr = np.asarray(data)
        if arr.ndim != 1 or arr.size < 1:
            raise DimensionMismatch("vector needs a one-dimensional, nonempty sequence")
        arr = _coerce_entries(data, (arr.size,), ring)
        arr.flags.writeable = False
        self.ring = ring
        self._a = arr

    @staticmethod
    def _wrap(arr: np.ndarray, ring: RingSpec) -> "Vector":
        v = Vector.__new__(Vector)
        a = np.ascontiguousarray(arr, dtype=np.int64)
        a.flags.writeable = False
        v.ring = ring
        v._a = a
        return v

    @property
    def data(self) -> np.ndarray:
        """Read-only (n,) int64 view of the entries."""
        return self._a

    def __len__(self) -> int:
        return self._a.shape[0]

    def __getitem__(self, i) -> int:
        return int(self._a[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self.ring == other.ring and np.array_equal(self._a, other._a)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Vector({len(self)}, {self.ring})"


def identity(n: int, ring: RingSpec) -> Matrix:
    return Matrix._wrap(np.eye(n, dtype=np.int64), ring)


class _OpCounter:
    __slots__ = ("multiplies",)

    def __init__(self) -> None:
        self.multiplies = 0


_ops = _OpCounter()


def reset_scalar_multiplies() -> None:
    _ops.multiplies = 0


def scalar_multiplies() -> int:
    return _ops.multiplies


def _same_ring(x, y) -> None:
    if x.ring != y.ring:
        raise RingMismatch(f"operands use different rings: {x.ring} vs {y.ring}")


def _max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return max(abs(int(arr.min())), abs(int(arr.max())))


def _matmul_checked(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Exact fallback: Python integers, checking each elementary product and
    # each partial sum (accumulated in ascending inner index) against int64.
    rows = a.tolist()
    cols = b.T.tolist()
    out = np.empty((a.shape[0], b.shape[1]), dtype=np.int64)
    for i, ai in enumerate(rows):
        for j, bj in enumerate(cols):
            acc = 0
            for x, y in zip(ai, bj):
                term = x * y
                if term < INT64_MIN or term > INT64_MAX:
                    raise IntegerOverflow(
                        f"product term at entry ({i}, {j}) leaves the 64-bit range"
                    )
                acc += term
                if acc < INT64_MIN or acc > INT64_MAX:
                    raise IntegerOverflow(
                        f"partial sum at entry ({i}, {j}) leaves the 64-bit range"
                    )
            out[i, j] = acc
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Exact schoolbook product; the Theta(n^3) deterministic baseline."""
    _same_ring(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}"
        )
    inner = a.cols
    ring = a.ring
    if ring.kind == PRIME_FIELD:
        p = ring.modulus
        if inner * (p - 1) * (p - 1) <= INT64_MAX:
            out = np.einsum("ik,jk->ij", a.data, np.ascontiguousarray(b.data.T)) % p
        else:
            out = ((a.data.astype(object) @ b.data.astype(object)) % p).astype(np.int64)
    else:
        if inner * _max_abs(a.data) * _max_abs(b.data) <= INT64_MAX:
            # einsum over a transposed contiguous copy keeps both operands
            # walking rows, which keeps the doubling ratio near the ideal 8
            # where plain integer matmul falls off a cache cliff.
            out = np.einsum("ik,jk->ij", a.data, np.ascontiguousarray(b.data.T))
        else:
            out = _matmul_checked(a.data, b.data)
    _ops.multiplies += a.rows * inner * b.cols
    return Matrix._wrap(out, ring)


def _mat_vec_checked(x: np.ndarray, r: np.ndarray) -> np.ndarray:
    rows = x.tolist()
    rv = r.tolist()
    out = np.empty(x.shape[0], dtype=np.int64)
    for i, xi in enumerate(rows):
        acc = 0
        for a, b in zip(xi, rv):
            term = a * b
            if term < INT64_MIN or term > INT64_MAX:
                raise IntegerOverflow(f"product term in row {i} leaves the 64-bit range")
            acc += term
            if acc < INT64_MIN or acc > INT64_MAX:
                raise IntegerOverflow(f"partial sum in row {i} leaves the 64-bit range")
        out[i] = acc
    return out


def mat_vec(x: Matrix, r: Vector) -> Vector:
    """Matrix-vector product in Theta(rows * cols)."""
    _same_ring(x, r)
    if x.cols != len(r):
        raise DimensionMismatch(f"cannot apply {x.rows}x{x.cols} to length-{len(r)} vector")
    ring = x.ring
    if ring.kind == PRIME_FIELD:
        p = ring.modulus
        if x.cols * (p - 1) * (p - 1) <= INT64_MAX:
            out = (x.data @ r.data) % p
        else:
            out = ((x.data.astype(object) @ r.data.astype(object)) % p).astype(np.int64)
    else:
        if x.cols * _max_abs(x.data) * _max_abs(r.data) <= INT64_MAX:
            out = x.data @ r.data
        else:
            out = _mat_vec_checked(x.data, r.data)
    _ops.multiplies += x.rows * x.cols
    return Vector._wrap(out, ring)


def mats_equal(a: Matrix, b: Matrix) -> bool:
    """Entrywise equality; needs matching shapes and rings."""
    _same_ring(a, b)
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionMismatch(
            f"cannot compare {a.rows}x{a.cols} with {b.rows}x{b.cols}"
        )
    return bool(np.array_equal(a.data, b.data))


def column(x: Matrix, i: int) -> Vector:
    """Column ``i`` as a vector; valid indices are 0 <= i < cols."""
    if not 0 <= i < x.cols:
        raise IndexOutOfRange(f"column {i} outside [0, {x.cols})")
    return Vector._wrap(x.data[:, i].copy(), x.ring)


def _add_sub(a: Matrix, b: Matrix, sign: int) -> Matrix:
    _same_ring(a, b)
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionMismatch(
            f"cannot combine {a.rows}x{a.cols} with {b.rows}x{b.cols}"
        )
    ring = a.ring
    if ring.kind == PRIME_FIELD:
        p = ring.modulus
        if 2 * (p - 1) <= INT64_MAX:
            out = (a.data + sign * b.data) % p
        else:
            out = ((a.data.astype(object) + sign * b.data.astype(object)) % p).astype(np.int64)
    else:
        if _max_abs(a.data) + _max_abs(b.data) <= INT64_MAX:
            out = a.data + sign * b.data
        else:
            av = a.data.tolist()
            bv = b.data.tolist()
            out = np.empty((a.rows, a.cols), dtype=np.int64)
            for i in range(a.rows):
                for j in range(a.cols):
                    v = av[i][j] + sign * bv[i][j]
                    if v < INT64_MIN or v > INT64_MAX:
                        raise IntegerOverflow(
                            f"entry ({i}, {j}) leaves the 64-bit range"
                        )
                    out[i, j] = v
    return Matrix._wrap(out, ring)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    """Entrywise sum with the same overflow discipline as ``matmul``."""
    return _add_sub(a, b, 1)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    """Entrywise difference with the same overflow discipline as ``matmul``."""
    return _add_sub(a, b, -1)


def outer(u: Vector, v: Vector) -> Matrix:
    """Rank-one product u v^T."""
    _same_ring(u, v)
    ring = u.ring
    if ring.kind == PRIME_FIELD:
        p = ring.modulus
        if (p - 1) * (p - 1) <= INT64_MAX:
            out = (u.data[:, None] * v.data[None, :]) % p
        else:
            out = ((u.data.astype(object)[:, None] * v.data.astype(object)[None, :]) % p).astype(np.int64)
    else:
        if _max_abs(u.data) * _max_abs(v.data) <= INT64_MAX:
            out = u.data[:, None] * v.data[None, :]
        else:
            uv = u.data.tolist()
            vv = v.data.tolist()
            out = np.empty((len(uv), len(vv)), dtype=np.int64)
            for i, x in enumerate(uv):
                for j, y in enumerate(vv):
                    t = x * y
                    if t < INT64_MIN or t > INT64_MAX:
                        raise IntegerOverflow(f"entry ({i}, {j}) leaves the 64-bit range")
                    out[i, j] = t
    _ops.multiplies += len(u) * len(v)
    return Matrix._wrap(out, ring)
