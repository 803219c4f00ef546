"""Truncated p-adic arithmetic over Q_p extended by a formal branch parameter.

Scalars live in Q_p[L], polynomials in a formal variable L standing for the
undetermined value of log(p) (equivalently log(pi), since the uniformizer is
fixed to p throughout). The Iwasawa logarithm of z decomposes as

    log(z) = log(<u>) + v(z) * L,      u = z / p^v(z),

with <u> the 1-unit part of u after splitting off the Teichmueller root of
unity. Differentiating in L and evaluating at L = 0 therefore recovers the
valuation v(z) exactly; that identity is the backbone of everything downstream.

Values are immutable; every operation returns a fresh object and tracks
precision explicitly: a nonzero number is known modulo p^(val + prec) and
arithmetic never claims more digits than its inputs support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import LambdaDegreeOverflow, PreconditionError

DEFAULT_PRECISION = 20
DEFAULT_LAMBDA_CAP = 4


def _is_prime(n: int) -> bool:
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


def _vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True, eq=False)
class PadicNumber:
    """p^val * unit known modulo p^(val + prec); unit == 0 encodes the
    distinguished exact zero (valuation +infinity by convention)."""

    p: int
    val: int
    unit: int
    prec: int

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def valuation(self):
        """Valuation with the infinite sentinel on the distinguished zero."""
        return math.inf if self.unit == 0 else self.val

    @property
    def abs_prec(self):
        """Absolute precision: the value is known modulo p^abs_prec."""
        return math.inf if self.unit == 0 else self.val + self.prec

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def zero(p: int, prec: int = DEFAULT_PRECISION) -> "PadicNumber":
        return PadicNumber(p, 0, 0, prec)

    def _check(self, other: "PadicNumber"):
        if self.p != other.p:
            raise PreconditionError(
                f"mixed primes {self.p} and {other.p} in one operation"
            )

    def _coerce(self, other, rel_prec=None, abs_prec=None):
        """Lift an exact int/Fraction to this prime at the requested precision."""
        if isinstance(other, PadicNumber):
            return other
        if isinstance(other, int):
            other = Fraction(other)
        if not isinstance(other, Fraction):
            return None
        if rel_prec is not None:
            return from_fraction(self.p, other, rel_prec)
        if other == 0:
            return PadicNumber.zero(self.p, self.prec)
        v = _vp(other.numerator, self.p) - _vp(other.denominator, self.p)
        rel = abs_prec - v
        if rel <= 0:
            # negligible at this absolute precision
            return PadicNumber.zero(self.p, max(1, abs_prec))
        return from_fraction(self.p, other, rel)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        ref = self.prec if self.is_zero else self.abs_prec
        other = self._coerce(other, abs_prec=ref)
        if other is None:
            return NotImplemented
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        m = min(self.abs_prec, other.abs_prec)
        v0 = min(self.val, other.val)
        k = m - v0
        pk = self.p**k
        r = (
            self.unit * self.p ** (self.val - v0)
            + other.unit * self.p ** (other.val - v0)
        ) % pk
        if r == 0:
            return PadicNumber.zero(self.p, k)
        w = _vp(r, self.p)
        val = v0 + w
        return PadicNumber(self.p, val, r // self.p**w, m - val)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.val, self.p**self.prec - self.unit, self.prec)

    def __sub__(self, other):
        ref = self.prec if self.is_zero else self.abs_prec
        other = self._coerce(other, abs_prec=ref)
        if other is None:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other, rel_prec=self.prec)
        if other is None:
            return NotImplemented
        self._check(other)
        if self.is_zero or other.is_zero:
            return PadicNumber.zero(self.p, min(self.prec, other.prec))
        prec = min(self.prec, other.prec)
        return PadicNumber(
            self.p,
            self.val + other.val,
            (self.unit * other.unit) % self.p**prec,
            prec,
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = self._coerce(other, rel_prec=self.prec)
        if other is None:
            return NotImplemented
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the distinguished p-adic zero")
        if self.is_zero:
            return PadicNumber.zero(self.p, min(self.prec, other.prec))
        prec = min(self.prec, other.prec)
        inv = pow(other.unit, -1, self.p**prec)
        return PadicNumber(
            self.p,
            self.val - other.val,
            (self.unit * inv) % self.p**prec,
            prec,
        )

    def __rtruediv__(self, other):
        lifted = self._coerce(other, rel_prec=self.prec)
        if lifted is None:
            return NotImplemented
        return lifted.__truediv__(self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if self.is_zero:
            if k <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return self
        unit = pow(self.unit, k, self.p**self.prec)
        return PadicNumber(self.p, self.val * k, unit, self.prec)

    def scale_p_power(self, k: int) -> "PadicNumber":
        """Exact multiplication by p^k (k of either sign): shifts the valuation."""
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.val + k, self.unit, self.prec)

    def __eq__(self, other):
        ref = self.prec if self.is_zero else self.abs_prec
        other = self._coerce(other, abs_prec=ref)
        if other is None:
            return NotImplemented
        if self.p != other.p:
            return False
        if self.is_zero and other.is_zero:
            return True
        if self.is_zero or other.is_zero:
            return False
        m = min(self.abs_prec, other.abs_prec)
        if self.val != other.val:
            # values of different valuation can still agree mod p^m
            return self.val >= m and other.val >= m
        return (self.unit - other.unit) % self.p ** (m - self.val) == 0

    __hash__ = None

    def lift(self) -> Fraction:
        """Canonical rational representative p^val * unit."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def __repr__(self):
        if self.is_zero:
            return f"O({self.p}^inf)"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.val + self.prec})"


def make_padic(p: int, numerator: int, denominator: int, precision: int) -> PadicNumber:
    """p-adic expansion of numerator/denominator to `precision` relative digits."""
    if not _is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if denominator == 0:
        raise PreconditionError("zero denominator")
    if precision < 1:
        raise PreconditionError("precision must be at least 1")
    if numerator == 0:
        return PadicNumber.zero(p, precision)
    return from_fraction(p, Fraction(numerator, denominator), precision)


def from_fraction(p: int, q: Fraction, precision: int) -> PadicNumber:
    """Same as make_padic but assumes p prime and q in lowest terms."""
    if q == 0:
        return PadicNumber.zero(p, precision)
    a = _vp(q.numerator, p)
    b = _vp(q.denominator, p)
    num_unit = q.numerator // p**a
    den_unit = q.denominator // p**b
    modulus = p**precision
    unit = num_unit * pow(den_unit, -1, modulus) % modulus
    return PadicNumber(p, a - b, unit, precision)


def from_fraction_abs(p: int, q: Fraction, abs_precision: int) -> PadicNumber:
    """Fraction to p-adic with value known modulo p^abs_precision."""
    if q == 0:
        return PadicNumber.zero(p, max(1, abs_precision))
    v = _vp(q.numerator, p) - _vp(q.denominator, p)
    if v >= abs_precision:
        return PadicNumber.zero(p, max(1, abs_precision))
    return from_fraction(p, q, abs_precision - v)


# ---------------------------------------------------------------------------
# Polynomials in the branch parameter
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UniversalScalar:
    """Element of Q_p[L]: coeffs[i] multiplies L^i, L the formal log(p).

    Degree is capped (default 4): running past the cap raises rather than
    silently truncating. Dropping all L-terms is a ring homomorphism to
    PadicNumber; d/dL followed by evaluation at L = 0 is `derive_at_zero`.
    """

    coeffs: tuple
    cap: int = DEFAULT_LAMBDA_CAP

    @property
    def p(self) -> int:
        return self.coeffs[0].p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    @staticmethod
    def of(coeffs, cap: int = DEFAULT_LAMBDA_CAP) -> "UniversalScalar":
        coeffs = list(coeffs)
        if not coeffs:
            raise PreconditionError("a scalar needs at least one coefficient")
        p = coeffs[0].p
        for c in coeffs:
            if c.p != p:
                raise PreconditionError("mixed primes inside one scalar")
        while len(coeffs) > 1 and coeffs[-1].is_zero:
            coeffs.pop()
        if len(coeffs) - 1 > cap:
            raise LambdaDegreeOverflow(len(coeffs) - 1, cap)
        return UniversalScalar(tuple(coeffs), cap)

    @staticmethod
    def constant(c: PadicNumber, cap: int = DEFAULT_LAMBDA_CAP) -> "UniversalScalar":
        return UniversalScalar.of([c], cap)

    def _ref_prec(self) -> int:
        precs = [c.prec for c in self.coeffs if not c.is_zero]
        return max(precs) if precs else self.coeffs[0].prec

    def _coerce(self, other):
        if isinstance(other, UniversalScalar):
            return other
        if isinstance(other, PadicNumber):
            return UniversalScalar.of([other], self.cap)
        if isinstance(other, (int, Fraction)):
            return UniversalScalar.of(
                [from_fraction(self.p, Fraction(other), self._ref_prec())], self.cap
            )
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        z = PadicNumber.zero(self.p, 1)
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return UniversalScalar.of(
            [x + y for x, y in zip(a, b)], min(self.cap, other.cap)
        )

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return UniversalScalar.of([-c for c in self.coeffs], self.cap)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = min(self.cap, other.cap)
        p = self.p
        out = [PadicNumber.zero(p, 1) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniversalScalar.of(out, cap)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        """Division by a constant (int, Fraction, or PadicNumber)."""
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            if other == 0:
                raise ZeroDivisionError("division of a scalar by zero")
            return self * (1 / other)
        if isinstance(other, PadicNumber):
            return UniversalScalar.of([c / other for c in self.coeffs], self.cap)
        return NotImplemented

    def scale_p_power(self, k: int) -> "UniversalScalar":
        return UniversalScalar.of([c.scale_p_power(k) for c in self.coeffs], self.cap)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        z = PadicNumber.zero(self.p, 1)
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return all(x == y for x, y in zip(a, b))

    __hash__ = None

    def constant_term(self) -> PadicNumber:
        """Evaluation at L = 0 (drop all branch terms)."""
        return self.coeffs[0]

    def derivative(self) -> "UniversalScalar":
        """Formal d/dL."""
        if len(self.coeffs) == 1:
            return UniversalScalar.of([PadicNumber.zero(self.p, self.coeffs[0].prec)], self.cap)
        return UniversalScalar.of(
            [i * c for i, c in enumerate(self.coeffs) if i >= 1], self.cap
        )

    def derive_at_zero(self) -> PadicNumber:
        """Coefficient of L^1: the branch derivative evaluated at L = 0."""
        if len(self.coeffs) > 1:
            return self.coeffs[1]
        return PadicNumber.zero(self.p, self.coeffs[0].prec)

    def specialize(self, c: PadicNumber) -> PadicNumber:
        """Evaluate at L = c; a ring homomorphism for fixed c."""
        acc = self.coeffs[-1]
        for k in range(len(self.coeffs) - 2, -1, -1):
            acc = acc * c + self.coeffs[k]
        return acc

    def __repr__(self):
        return "US[" + ", ".join(repr(c) for c in self.coeffs) + "]"


def derive_at_zero(x: UniversalScalar) -> PadicNumber:
    """Branch derivative at the reference branch; for x = iwasawa_log(z) this
    is exactly the valuation of z as a p-adic integer."""
    return x.derive_at_zero()


def lambda_scalar(p: int, prec: int = DEFAULT_PRECISION, cap: int = DEFAULT_LAMBDA_CAP) -> UniversalScalar:
    """The formal branch parameter L itself."""
    return UniversalScalar.of(
        [PadicNumber.zero(p, prec), make_padic(p, 1, 1, prec)], cap
    )


def _teichmuller(p: int, unit: int, prec: int) -> int:
    """The (p-1)-st root of unity congruent to `unit` mod p, mod p^prec."""
    if p == 2:
        return 1
    return pow(unit, p ** (prec - 1), p**prec)


def _one_unit_log(p: int, one_unit: int, abs_prec: int) -> PadicNumber:
    """log of a 1-unit via the alternating series, exact mod p^abs_prec.

    Truncation: the k-th term x^k/k has valuation >= k*v(x) - v_p(k); since
    v_p(k) <= log_p(k) the tail past the chosen k_stop sits above abs_prec.
    Representative error in x (known mod p^abs_prec) perturbs term k by
    valuation >= abs_prec + (k-1)*v(x) - v_p(k) >= abs_prec, so summing exact
    fractions of the representative is sound.
    """
    x = (one_unit - 1) % p**abs_prec
    if x == 0:
        return PadicNumber.zero(p, abs_prec)
    vx = _vp(x, p)
    k_stop = 1
    while k_stop * vx - math.log(k_stop + 1, p) < abs_prec + 1:
        k_stop += 1
    total = Fraction(0)
    power = 1
    for k in range(1, k_stop + 1):
        power *= x
        term = Fraction(power, k)
        total += term if k % 2 == 1 else -term
    return from_fraction_abs(p, total, abs_prec)


def iwasawa_log(z: PadicNumber, cap: int = DEFAULT_LAMBDA_CAP) -> UniversalScalar:
    """Universal-branch logarithm: log(<u>) + v(z) * L for z = p^v(z) u.

    The Teichmueller root of unity is split off (its log is 0), the 1-unit
    series is summed to the working precision, and the branch dependence sits
    entirely in the exact degree-1 coefficient v(z).
    """
    if z.is_zero:
        raise PreconditionError("logarithm of zero")
    constant = _one_unit_log(
        z.p, z.unit * pow(_teichmuller(z.p, z.unit, z.prec), -1, z.p**z.prec) % z.p**z.prec, z.prec
    )
    return UniversalScalar.of(
        [constant, make_padic(z.p, z.val, 1, z.prec)], cap
    )


# ---------------------------------------------------------------------------
# Shared configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicContext:
    """Working prime, precision, and branch-degree cap for one computation."""

    p: int
    prec: int = DEFAULT_PRECISION
    lambda_cap: int = DEFAULT_LAMBDA_CAP

    def padic(self, num: int, den: int = 1) -> PadicNumber:
        return make_padic(self.p, num, den, self.prec)

    def zero(self) -> PadicNumber:
        return PadicNumber.zero(self.p, self.prec)

    def scalar(self, *coeff_fractions) -> UniversalScalar:
        """Scalar from exact rational coefficients, constant term first."""
        return UniversalScalar.of(
            [from_fraction(self.p, Fraction(c), self.prec) for c in coeff_fractions],
            self.lambda_cap,
        )

    def zero_scalar(self) -> UniversalScalar:
        return UniversalScalar.of([self.zero()], self.lambda_cap)

    def lam(self) -> UniversalScalar:
        return lambda_scalar(self.p, self.prec, self.lambda_cap)


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------


def padic_to_json(x: PadicNumber) -> dict:
    return {"p": x.p, "val": x.val, "unit": str(x.unit), "prec": x.prec}


def padic_from_json(obj: dict) -> PadicNumber:
    p, val, unit, prec = int(obj["p"]), int(obj["val"]), int(obj["unit"]), int(obj["prec"])
    if unit == 0:
        return PadicNumber.zero(p, prec)
    if prec < 1 or unit % p == 0 or not 0 < unit < p**prec:
        raise PreconditionError(f"malformed p-adic JSON value {obj!r}")
    return PadicNumber(p, val, unit, prec)


def scalar_to_json(x: UniversalScalar) -> dict:
    return {"coeffs": [padic_to_json(c) for c in x.coeffs]}


def scalar_from_json(obj: dict, cap: int = DEFAULT_LAMBDA_CAP) -> UniversalScalar:
    return UniversalScalar.of([padic_from_json(c) for c in obj["coeffs"]], cap)
