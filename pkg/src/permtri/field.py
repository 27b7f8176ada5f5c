"""Table-driven arithmetic in F_{q^2}, q = p^n, with F_q as the Frobenius-fixed subfield.

Elements are plain ints: the encoding sum(c_i * p**i) of the power-basis
coefficients modulo the defining polynomial.  Prime-field constants therefore
encode as themselves (``k mod p``).  The defining polynomial is the monic
primitive polynomial of degree 2n with the smallest such encoding, so every
encoding is reproducible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Largest q^2 for which exp/log/Zech tables are built.
TABLE_BUDGET = 1 << 22


class FieldError(ValueError):
    """Invalid field parameters or an operand outside the required domain."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**n; raise FieldError if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = prime_factors(q)
    if len(p) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = p[0]
    n = 0
    while q > 1:
        q //= p
        n += 1
    return p, n


# -- polynomials over F_p, coefficient lists low degree first ---------------

def _poly_mulmod(a, b, mod, p):
    m = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # mod is monic
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * mod[j]) % p
    prod = prod[:m] + [0] * (m - len(prod))
    return prod


def _poly_powmod(base, e, mod, p):
    result = [1] + [0] * (len(mod) - 2)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _x_power(k, mod, p):
    m = len(mod) - 1
    x = [0, 1] if m > 1 else [(-mod[0]) % p]
    return _poly_powmod(x, k, mod, p)


def is_primitive(mod: list[int], p: int) -> bool:
    """True iff the monic polynomial ``mod`` (low degree first) is primitive over F_p.

    The residue of x has order p^m - 1 exactly when the quotient ring is a
    field and x generates its unit group, so no separate irreducibility test
    is needed.
    """
    m = len(mod) - 1
    if m < 1 or mod[-1] != 1 or mod[0] % p == 0:
        return False
    order = p**m - 1
    one = [1] + [0] * (m - 1)
    if _x_power(order, mod, p) != one:
        return False
    return all(_x_power(order // r, mod, p) != one for r in prime_factors(order))


def find_primitive_modulus(p: int, m: int) -> list[int]:
    """Monic primitive polynomial of degree m over F_p with the smallest encoding."""
    for low in range(p**m):
        coeffs = [(low // p**i) % p for i in range(m)] + [1]
        if is_primitive(coeffs, p):
            return coeffs
    raise FieldError(f"no primitive polynomial of degree {m} over F_{p}")  # pragma: no cover


def _build_exp_digits(mod, p):
    """Digit rows of g^0, ..., g^(Q-2) by repeated doubling with linear maps."""
    m = len(mod) - 1
    size = p**m - 1
    digits = np.zeros((size, m), dtype=np.int64)
    digits[0, 0] = 1
    filled = 1
    while filled < size:
        step = min(filled, size - filled)
        # row j of the map: coordinates of x^j * x^filled
        mat = np.array([_x_power(j + filled, mod, p) for j in range(m)], dtype=np.int64)
        digits[filled:filled + step] = (digits[:step] @ mat) % p
        filled += step
    return digits


class FieldCtx:
    """F_{q^2} with q = p^n, backed by exp/log/Zech tables.

    Immutable after construction; safe to share between threads, and cheap to
    rebuild in worker processes from ``(p, n)``.
    """

    def __init__(self, p: int, n: int, budget: int = TABLE_BUDGET):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree n={n} must be >= 1")
        if p ** (2 * n) > budget:
            raise FieldError(
                f"q^2 = {p}^{2 * n} exceeds the table budget of {budget} elements"
            )
        self.p = p
        self.n = n
        self.q = p**n
        self.q2 = self.q * self.q
        self.order = self.q2 - 1
        self.modulus = tuple(find_primitive_modulus(p, 2 * n))

        weights = p ** np.arange(2 * n, dtype=np.int64)
        self._weights = weights
        digits = _build_exp_digits(list(self.modulus), p)
        exp = digits @ weights
        log = np.full(self.q2, -1, dtype=np.int64)
        log[exp] = np.arange(self.order, dtype=np.int64)
        if np.count_nonzero(log >= 0) != self.order:
            raise FieldError("generator does not have full order")  # pragma: no cover
        self.exp_table = exp
        self.log_table = log
        self._exp = exp.tolist()
        self._log = log.tolist()
        # zech[k] = log(1 + g^k), -1 where 1 + g^k = 0
        one_plus = self.vadd(np.ones(self.order, dtype=np.int64), exp)
        zech = np.where(one_plus == 0, -1, log[one_plus])
        self._zech = zech.tolist()
        self.minus_one = (p - 1) % p if p != 2 else 1

        for arr in (self.exp_table, self.log_table, self._weights):
            arr.setflags(write=False)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (build_context, (self.p, self.n))

    def describe(self) -> dict:
        return {"p": self.p, "n": self.n, "q": self.q, "modulus": list(self.modulus)}

    # -- element helpers ---------------------------------------------------

    @property
    def gen(self) -> int:
        return self._exp[1 % self.order]

    def check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.q2:
            raise FieldError(f"{x!r} is not an element encoding of F_{self.q2}")
        return int(x)

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime field."""
        return k % self.p

    def elements(self) -> range:
        return range(self.q2)

    def subfield_elements(self) -> list[int]:
        """F_q in ascending encoding order."""
        step = self.q + 1
        return sorted([0] + [self._exp[k * step] for k in range(self.q - 1)])

    # -- scalar arithmetic -------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if x == 0:
            return y
        if y == 0:
            return x
        if self.p == 2:
            return x ^ y
        lx = self._log[x]
        k = self._log[y] - lx
        if k < 0:
            k += self.order
        z = self._zech[k]
        if z < 0:
            return 0
        z += lx
        if z >= self.order:
            z -= self.order
        return self._exp[z]

    def neg(self, x: int) -> int:
        if x == 0 or self.p == 2:
            return x
        k = self._log[x] + self.order // 2
        if k >= self.order:
            k -= self.order
        return self._exp[k]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        k = self._log[x] + self._log[y]
        if k >= self.order:
            k -= self.order
        return self._exp[k]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[-self._log[x] % self.order]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[x] * k) % self.order]

    def sum(self, xs) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def prod(self, xs) -> int:
        acc = 1
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def log(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("log of zero")
        return self._log[x]

    # -- subfield structure ------------------------------------------------

    def frobenius(self, x: int) -> int:
        """x -> x^q."""
        return self.pow(x, self.q)

    def is_in_subfield(self, x: int) -> bool:
        return self.frobenius(x) == x

    def norm(self, x: int) -> int:
        return self.pow(x, self.q + 1)

    def trace(self, x: int) -> int:
        """Relative trace x + x^q into F_q."""
        return self.add(x, self.frobenius(x))

    def is_square_fq(self, c: int) -> bool:
        """Quadratic character on F_q^* (q odd)."""
        if self.p == 2:
            raise FieldError("is_square_fq needs odd q")
        if c == 0:
            raise FieldError("is_square_fq is undefined at 0")
        if not self.is_in_subfield(c):
            raise FieldError(f"{c} is not in F_{self.q}")
        return self.pow(c, (self.q - 1) // 2) == 1

    def is_nonzero_square_fq(self, c: int) -> bool:
        """True iff c is a square of F_q^*; False for 0 and for c outside F_q."""
        if c == 0 or not self.is_in_subfield(c):
            return False
        return self.pow(c, (self.q - 1) // 2) == 1

    def abs_trace(self, e: int) -> int:
        """Tr_{q/2}(e) for q = 2^n, returned as 0 or 1."""
        if self.p != 2:
            raise FieldError("abs_trace needs even q")
        if not self.is_in_subfield(e):
            raise FieldError(f"{e} is not in F_{self.q}")
        acc, t = 0, e
        for _ in range(self.n):
            acc ^= t
            t = self.mul(t, t)
        return acc

    # -- vectorised arithmetic over numpy int arrays ----------------------

    def vadd(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        p = self.p
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        for w in self._weights.tolist():
            out += ((x // w + y // w) % p) * w
        return out

    def vneg(self, x):
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return x
        out = np.zeros_like(x)
        for w in self._weights.tolist():
            out += ((-(x // w)) % self.p) * w
        return out

    def vmul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        k = (self.log_table[x] + self.log_table[y]) % self.order
        return np.where((x == 0) | (y == 0), 0, self.exp_table[k])

    def vinv(self, x):
        """Elementwise inverse; zero entries map to 0 and must be masked by the caller."""
        x = np.asarray(x, dtype=np.int64)
        return np.where(x == 0, 0, self.exp_table[(-self.log_table[x]) % self.order])

    def vpow(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        e = (self.log_table[x] * (k % self.order)) % self.order
        nonzero = self.exp_table[e]
        if k == 0:
            return np.ones_like(x)
        if k < 0 and np.any(x == 0):
            raise ZeroDivisionError("negative power of zero")
        return np.where(x == 0, 0, nonzero)

    def vsum(self, x) -> int:
        """Field sum of every entry of x."""
        x = np.asarray(x, dtype=np.int64).ravel()
        if self.p == 2:
            return int(np.bitwise_xor.reduce(x)) if x.size else 0
        total = 0
        for w in self._weights.tolist():
            total += int(((x // w) % self.p).sum() % self.p) * w
        return total


@lru_cache(maxsize=32)
def build_context(p: int, n: int) -> FieldCtx:
    """Shared, cached context for F_{(p^n)^2}."""
    return FieldCtx(p, n)


def context_for_q(q: int) -> FieldCtx:
    p, n = prime_power(q)
    return build_context(p, n)


_UNARY = {"neg", "inv"}
_BINARY = {"add", "sub", "mul", "div", "pow"}


def arith(ctx: FieldCtx, op: str, *operands: int) -> int:
    """Dispatch a named field operation; ``pow`` takes (base, integer exponent)."""
    if op in _UNARY:
        (x,) = operands
        return getattr(ctx, op)(ctx.check(x))
    if op in _BINARY:
        x, y = operands
        if op == "pow":
            return ctx.pow(ctx.check(x), int(y))
        return getattr(ctx, op)(ctx.check(x), ctx.check(y))
    raise FieldError(f"unknown operation {op!r}")
