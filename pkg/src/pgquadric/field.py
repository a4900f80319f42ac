"""Exact arithmetic in GF(p^h) and dense linear algebra over it.

Elements are plain integers in ``[0, q)``: the base-p digits of an index are
the coefficients (lowest degree first) of a polynomial residue modulo the
field's defining polynomial.  Every arithmetic method accepts either Python
ints or integer numpy arrays and broadcasts like numpy does.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

DEFAULT_ORDER_BOUND = 2**20
_TABLE_BOUND = 1024  # full q x q add/mul tables below this order
_INV_TABLE_BOUND = 2**16


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``p**h`` with ``p`` prime; raise FieldError otherwise."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    h, rest = 0, q
    while rest % p == 0:
        rest //= p
        h += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, h


# -- polynomials over GF(p), coefficient lists lowest degree first -----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return quot, a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            _, rem = _poly_divmod(poly, list(low) + [1], p)
            if not rem:
                return False
    return True


def smallest_irreducible(p: int, h: int) -> tuple[int, ...]:
    """Monic irreducible of degree h whose lower coefficients, read as a
    base-p index, are smallest.  Returns coefficients lowest degree first."""
    for code in range(p**h):
        low = [(code // p**k) % p for k in range(h)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {h} over GF({p})")  # pragma: no cover


class FieldSpec:
    """The finite field GF(p^h) with a fixed defining polynomial."""

    def __init__(self, p: int, h: int, modulus: Sequence[int], order_bound: int = DEFAULT_ORDER_BOUND):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if h < 1:
            raise FieldError("degree must be positive")
        q = p**h
        if q > order_bound:
            raise FieldError(f"field order {q} exceeds bound {order_bound}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != h + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree h")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.h = h
        self.q = q
        self.modulus = modulus
        self._pw = np.array([p**k for k in range(h)], dtype=np.int64)
        self._build_log_tables()
        if q <= _TABLE_BOUND:
            a = np.arange(q)
            self._add_table = self._add_digits(a[:, None], a[None, :])
            self._mul_table = self._mul_logs(a[:, None], a[None, :])
        else:
            self._add_table = self._mul_table = None
        if q <= _INV_TABLE_BOUND:
            inv = np.zeros(q, dtype=np.int64)
            nz = np.arange(1, q)
            inv[1:] = self._exp[(-self._log[nz]) % (q - 1)]
            self._inv_table = inv
        else:
            self._inv_table = None

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, h={self.h}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.h, self.modulus) == (
            other.p, other.h, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.h, self.modulus))

    @property
    def is_even(self) -> bool:
        return self.p == 2

    # -- element encoding -----------------------------------------------------

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**k) % self.p for k in range(self.h)]

    def from_digits(self, digits: Sequence[int]) -> int:
        return sum((int(d) % self.p) * self.p**k for k, d in enumerate(digits))

    def _mul_by_x(self, a: np.ndarray) -> np.ndarray:
        """Multiply every residue in ``a`` by the class of x."""
        p, h = self.p, self.h
        top = (a // self._pw[-1]) % p
        shifted = (a % self._pw[-1]) * p  # digits moved up one place
        # subtract top * (modulus - x^h)
        out = shifted
        for k in range(h):
            c = self.modulus[k]
            if c:
                out = self._add_digits(out, ((-c * top) % p) * self._pw[k])
        return out

    def _build_log_tables(self) -> None:
        q, p, h = self.q, self.p, self.h
        if q == 2:
            self._exp = np.array([1], dtype=np.int64)
            self._log = np.array([0, 0], dtype=np.int64)
            self.primitive_element = 1
            return
        elems = np.arange(q, dtype=np.int64)
        xpow = [elems]
        for _ in range(h - 1):
            xpow.append(self._mul_by_x(xpow[-1]))
        for g in range(2, q) if h == 1 else range(p, q):
            # mul_by_g[a] = sum_k g_k * x^k * a
            mul_g = np.zeros(q, dtype=np.int64)
            for k, gk in enumerate(self.digits(g)):
                if gk:
                    mul_g = self._add_digits(mul_g, self._scale_digits(xpow[k], gk))
            exp = np.empty(q - 1, dtype=np.int64)
            cur = 1
            table = mul_g.tolist()
            for k in range(q - 1):
                exp[k] = cur
                cur = table[cur]
                if cur == 1 and k < q - 2:
                    break
            else:
                log = np.zeros(q, dtype=np.int64)
                log[exp] = np.arange(q - 1)
                self._exp, self._log = exp, log
                self.primitive_element = g
                return
        raise FieldError("no primitive element found")  # pragma: no cover

    # -- arithmetic -------------------------------------------------------------

    def _add_digits(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.h == 1:
            return (a + b) % self.p
        out = 0
        for w in self._pw.tolist():
            out = out + (((a // w) % self.p + (b // w) % self.p) % self.p) * w
        return out

    def _scale_digits(self, a, c: int):
        """Multiply by a prime-subfield scalar c, digit by digit."""
        if self.h == 1:
            return (a * c) % self.p
        out = 0
        for w in self._pw.tolist():
            out = out + (((a // w) % self.p) * c % self.p) * w
        return out

    def _mul_logs(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.q == 2:
            return a & b
        prod = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    @staticmethod
    def _out(result, *args):
        if all(isinstance(x, (int, np.integer)) for x in args):
            return int(result)
        return np.asarray(result, dtype=np.int64)

    def add(self, a, b):
        if self._add_table is not None:
            return self._out(self._add_table[a, b], a, b)
        return self._out(self._add_digits(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)), a, b)

    def neg(self, a):
        if self.p == 2:
            return self._out(np.asarray(a), a)
        return self._out(self._scale_digits(np.asarray(a, dtype=np.int64), self.p - 1), a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul_table is not None:
            return self._out(self._mul_table[a, b], a, b)
        return self._out(self._mul_logs(a, b), a, b)

    def inv(self, a):
        arr = np.asarray(a)
        if np.any(arr == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self._inv_table is not None:
            return self._out(self._inv_table[a], a)
        if arr.ndim == 0:
            return self._inv_euclid(int(a))
        return np.vectorize(self._inv_euclid, otypes=[np.int64])(arr)

    def _inv_euclid(self, a: int) -> int:
        """Extended Euclid on polynomials; used when no inverse table exists."""
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.digits(a))
        s0, s1 = [], [1]
        while r1:
            quot, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1, p), p)
        # r0 is a nonzero constant
        c = pow(r0[0], p - 2, p)
        coeffs = [x * c % p for x in s0]
        return self.from_digits(coeffs + [0] * (self.h - len(coeffs)))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a_arr = np.asarray(a, dtype=np.int64)
        if e == 0:
            return self._out(np.ones_like(a_arr), a)
        if self.q == 2:
            return self._out(a_arr, a)
        if e < 0:
            a_arr = np.asarray(self.inv(a_arr), dtype=np.int64)
            e = -e
        res = self._exp[(self._log[a_arr] * e) % (self.q - 1)]
        return self._out(np.where(a_arr == 0, 0, res), a)

    def trace(self, a):
        """Absolute trace a + a^p + ... + a^(p^(h-1)), an element of GF(p)."""
        return self._out(self.trace_table[a], a)

    @cached_property
    def trace_table(self) -> np.ndarray:
        elems = np.arange(self.q, dtype=np.int64)
        total = np.zeros(self.q, dtype=np.int64)
        cur = elems
        for _ in range(self.h):
            total = np.asarray(self.add(total, cur))
            cur = np.asarray(self.pow(cur, self.p))
        return total

    @cached_property
    def square_mask(self) -> np.ndarray:
        """Boolean mask of nonzero squares."""
        mask = np.zeros(self.q, dtype=bool)
        mask[np.asarray(self.mul(np.arange(1, self.q), np.arange(1, self.q)))] = True
        return mask

    def is_square(self, a: int) -> bool:
        return a == 0 or bool(self.square_mask[a])

    def elements(self) -> range:
        return range(self.q)


def field_make(p: int, h: int = 1, order_bound: int = DEFAULT_ORDER_BOUND) -> FieldSpec:
    """GF(p^h) with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if h < 1:
        raise FieldError("degree must be positive")
    if p**h > order_bound:
        raise FieldError(f"field order {p**h} exceeds bound {order_bound}")
    return FieldSpec(p, h, smallest_irreducible(p, h), order_bound)


def field_of_order(q: int, order_bound: int = DEFAULT_ORDER_BOUND) -> FieldSpec:
    p, h = prime_power(q)
    return field_make(p, h, order_bound)


# -- linear algebra -------------------------------------------------------------

def rref(F: FieldSpec, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``M`` and its pivot columns."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = F.mul(R[r], F.inv(int(R[r, c])))
        col = R[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            R[others] = F.sub(R[others], F.mul(col[others, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: FieldSpec, M) -> int:
    return len(rref(F, M)[1])


def kernel_basis(F: FieldSpec, M) -> np.ndarray:
    """Canonical basis (rows, in reduced echelon form) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    cols = M.shape[1]
    R, pivots = rref(F, M)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = F.neg(int(R[row, f]))
    if len(free) == 0:
        return basis
    return rref(F, basis)[0]


def solve(F: FieldSpec, M, rhs) -> np.ndarray | None:
    """One solution x of M x = rhs, or None when the system is inconsistent."""
    M = np.asarray(M, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64).reshape(-1)
    if M.ndim != 2 or rhs.shape[0] != M.shape[0]:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug = np.concatenate([M, rhs[:, None]], axis=1)
    R, pivots = rref(F, aug)
    cols = M.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, cols]
    return x


def matmul(F: FieldSpec, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise ValueError("dimension mismatch")
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for k in range(A.shape[-1]):
        out = F.add(out, F.mul(A[..., k, None], B[k]))
    return np.asarray(out, dtype=np.int64)


def dot(F: FieldSpec, x, y) -> np.ndarray:
    """Field dot product along the last axis (broadcasting)."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    prod = F.mul(x, y)
    prod = np.asarray(prod)
    out = prod[..., 0]
    for k in range(1, prod.shape[-1]):
        out = F.add(out, prod[..., k])
    return out
