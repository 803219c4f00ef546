"""Laurent series with log(z) terms on an oriented annulus.

A 1-form is written against dz/z, so an AnnulusForm is the coefficient family
a_k of sum a_k z^k dz/z on the window [-M, M]; its residue is a_0.
Primitives live in LogLaurentFunction: finitely many monomials z^k log(z)^n
with branch-polynomial coefficients. Only the formal series structure is
kept; no radii arithmetic (the annulus is normalized to |pi| < |z| < 1).

The extended residue is defined by exactness reduction: z^k log^n z dz/z is
exact for n >= 1 (reduce via d(z^k log^n z / k), or d(log^{n+1} z/(n+1)) when
k = 0) and for n = 0, k != 0, so the residue functional reads off the (0, 0)
coefficient after the reduction and vanishes on every exact form. That makes
the local index <F, G> = res(F dG) antisymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LogDegreeOverflow, PreconditionError, WindowTruncation
from .padic import PadicContext, UniversalScalar

DEFAULT_WINDOW = 12
DEFAULT_LOG_CAP = 4


@dataclass(frozen=True)
class AnnulusForm:
    """sum a_k z^k dz/z with finite support inside [-window, window]."""

    ctx: PadicContext
    coeffs: dict
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        clean = {}
        for k, a in self.coeffs.items():
            if abs(k) > self.window:
                raise PreconditionError(
                    f"coefficient at z^{k} outside the window [-{self.window}, {self.window}]"
                )
            if a.p != self.ctx.p:
                raise PreconditionError("coefficient prime differs from the context")
            if not a.is_zero:
                clean[k] = a
        object.__setattr__(self, "coeffs", clean)

    def coeff(self, k: int) -> UniversalScalar:
        return self.coeffs.get(k, self.ctx.zero_scalar())

    @property
    def residue(self) -> UniversalScalar:
        return self.coeff(0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, a in other.coeffs.items():
            out[k] = out[k] + a if k in out else a
        return AnnulusForm(self.ctx, out, min(self.window, other.window))

    def __eq__(self, other):
        if not isinstance(other, AnnulusForm):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    __hash__ = None


@dataclass(frozen=True)
class LogLaurentFunction:
    """Finite sum of c_{k,n} z^k log(z)^n, c in the branch-polynomial ring.

    `truncated` records that a multiplication dropped terms outside the
    Laurent window, in which coefficients other than those actually retained
    can no longer be trusted.
    """

    ctx: PadicContext
    terms: dict
    window: int = DEFAULT_WINDOW
    log_cap: int = DEFAULT_LOG_CAP
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for (k, n), c in self.terms.items():
            if abs(k) > self.window:
                raise PreconditionError(
                    f"term z^{k} outside the window [-{self.window}, {self.window}]"
                )
            if n > self.log_cap:
                raise LogDegreeOverflow(n, self.log_cap)
            if n < 0:
                raise PreconditionError("negative log-degree")
            if c.p != self.ctx.p:
                raise PreconditionError("coefficient prime differs from the context")
            if not c.is_zero:
                clean[(k, n)] = c
        object.__setattr__(self, "terms", clean)

    def coeff(self, k: int, n: int) -> UniversalScalar:
        return self.terms.get((k, n), self.ctx.zero_scalar())

    def _config(self, other):
        if self.window != other.window or self.log_cap != other.log_cap:
            raise PreconditionError("mismatched window or log-cap configuration")
        return min

    def __add__(self, other):
        self._config(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return LogLaurentFunction(
            self.ctx, out, self.window, self.log_cap, self.truncated or other.truncated
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s) -> "LogLaurentFunction":
        return LogLaurentFunction(
            self.ctx,
            {key: c * s for key, c in self.terms.items()},
            self.window,
            self.log_cap,
            self.truncated,
        )

    def __mul__(self, other):
        self._config(other)
        out = {}
        dropped = False
        for (k1, n1), c1 in self.terms.items():
            for (k2, n2), c2 in other.terms.items():
                k, n = k1 + k2, n1 + n2
                if abs(k) > self.window:
                    dropped = True
                    continue
                if n > self.log_cap:
                    raise LogDegreeOverflow(n, self.log_cap)
                prod = c1 * c2
                out[(k, n)] = out[(k, n)] + prod if (k, n) in out else prod
        return LogLaurentFunction(
            self.ctx,
            out,
            self.window,
            self.log_cap,
            self.truncated or other.truncated or dropped,
        )

    def __eq__(self, other):
        if not isinstance(other, LogLaurentFunction):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.coeff(*key) == other.coeff(*key) for key in keys)

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return not self.terms


def integrate(omega: AnnulusForm, constant: UniversalScalar, window=None, log_cap=DEFAULT_LOG_CAP) -> LogLaurentFunction:
    """Term-by-term primitive: sum_{k != 0} (a_k / k) z^k + a_0 log z + C.

    Dividing a_k by k costs v_p(k) digits of absolute precision in that
    coefficient; the precision fields record the loss.
    """
    window = omega.window if window is None else window
    terms = {}
    for k, a in omega.coeffs.items():
        if k == 0:
            terms[(0, 1)] = a
        else:
            terms[(k, 0)] = a / k
    if not constant.is_zero:
        terms[(0, 0)] = terms.get((0, 0), omega.ctx.zero_scalar()) + constant
    return LogLaurentFunction(omega.ctx, terms, window, log_cap)


def differential(f: LogLaurentFunction) -> LogLaurentFunction:
    """dF divided by dz/z: z^k log^n z contributes k z^k log^n + n z^k log^{n-1}."""
    out = {}

    def bump(key, c):
        if key in out:
            out[key] = out[key] + c
        else:
            out[key] = c

    for (k, n), c in f.terms.items():
        if k != 0:
            bump((k, n), c * k)
        if n != 0:
            bump((k, n - 1), c * n)
    return LogLaurentFunction(f.ctx, out, f.window, f.log_cap, f.truncated)


def as_form(f: LogLaurentFunction) -> AnnulusForm:
    """Reinterpret a log-free function as the dz/z-coefficient family."""
    coeffs = {}
    for (k, n), c in f.terms.items():
        if n != 0:
            raise PreconditionError("log terms have no AnnulusForm counterpart")
        coeffs[k] = c
    return AnnulusForm(f.ctx, coeffs, f.window)


def form_as_function(omega: AnnulusForm, log_cap=DEFAULT_LOG_CAP) -> LogLaurentFunction:
    return LogLaurentFunction(
        omega.ctx, {(k, 0): a for k, a in omega.coeffs.items()}, omega.window, log_cap
    )


def extended_residue(eta: LogLaurentFunction) -> UniversalScalar:
    """Residue of eta dz/z extended to kill every exact form.

    Iteratively rewrites each (k, n != 0) term: for k != 0 it differs from an
    exact form by -(n/k) z^k log^{n-1} z dz/z; for k = 0 it is exact outright.
    What remains is a plain Laurent form whose residue is the (0, 0)
    coefficient.
    """
    work = dict(eta.terms)
    while True:
        key = next((key for key in work if key[1] != 0), None)
        if key is None:
            break
        k, n = key
        c = work.pop(key)
        if k == 0:
            continue  # d(log^{n+1} z / (n+1)) - exact, no residue
        lower = (k, n - 1)
        adj = c * Fraction(-n, k)
        work[lower] = work[lower] + adj if lower in work else adj
    return work.get((0, 0), eta.ctx.zero_scalar())


def local_index(f: LogLaurentFunction, g: LogLaurentFunction) -> UniversalScalar:
    """Pairing res(F dG) of two annulus primitives.

    local_index(F, G) + local_index(G, F) equals the z^0 log(z)-coefficient
    of F*G, so the pairing is antisymmetric exactly when the constant terms
    of F and G do not meet the other's log coefficients (for instance on
    primitives with zero constant term, or whenever log terms sit at Laurent
    slots with no opposite-degree partner). That residual term is not a
    defect: pairing a constant C against G gives C * res(dG), which is what
    branch-derivative computations consume.

    Products falling outside the Laurent window never carry k = 0, so the
    residue survives internal truncation; inputs that were themselves already
    truncated are rejected because their missing terms could contribute.
    """
    if f.truncated or g.truncated:
        raise WindowTruncation(
            "confidence in the k = 0 coefficient lost: input already truncated"
        )
    return extended_residue(f * differential(g))


def flip_coordinate(omega: AnnulusForm) -> AnnulusForm:
    """Rewrite in the opposite orientation via z = p/w: negates the residue.

    a_k z^k dz/z becomes -a_k p^k w^{-k} dw/w; powers of p shift valuations
    exactly, no precision is spent.
    """
    out = {}
    for k, a in omega.coeffs.items():
        out[-k] = (-a).scale_p_power(k)
    return AnnulusForm(omega.ctx, out, omega.window)


# -- JSON ---------------------------------------------------------------------


def function_to_json(f: LogLaurentFunction) -> dict:
    from .padic import scalar_to_json

    return {
        "terms": [
            {"k": k, "n": n, "coeff": scalar_to_json(c)}
            for (k, n), c in sorted(f.terms.items())
        ],
        "window": f.window,
        "log_cap": f.log_cap,
        "truncated": f.truncated,
    }


def function_from_json(ctx: PadicContext, obj: dict) -> LogLaurentFunction:
    from .padic import scalar_from_json

    terms = {
        (int(t["k"]), int(t["n"])): scalar_from_json(t["coeff"], ctx.lambda_cap)
        for t in obj["terms"]
    }
    return LogLaurentFunction(
        ctx,
        terms,
        int(obj.get("window", DEFAULT_WINDOW)),
        int(obj.get("log_cap", DEFAULT_LOG_CAP)),
        bool(obj.get("truncated", False)),
    )


def form_to_json(omega: AnnulusForm) -> dict:
    from .padic import scalar_to_json

    return {
        "window": omega.window,
        "coeffs": {str(k): scalar_to_json(a) for k, a in sorted(omega.coeffs.items())},
    }


def form_from_json(ctx: PadicContext, obj: dict) -> AnnulusForm:
    from .padic import scalar_from_json

    coeffs = {
        int(k): scalar_from_json(v, ctx.lambda_cap)
        for k, v in obj.get("coeffs", {}).items()
    }
    return AnnulusForm(ctx, coeffs, int(obj.get("window", DEFAULT_WINDOW)))


def cross_annulus_jump(
    omega: AnnulusForm, c1: UniversalScalar, c2: UniversalScalar
) -> UniversalScalar:
    """Difference of the two one-sided primitives across the annulus.

    C1 is the constant of the primitive continued from the outer (|z| -> 1)
    side, C2 from the inner side; the mismatch is C1 - C2 + a_0 * L with L
    the branch parameter, because the two sides disagree exactly by
    a_0 * (log z + log w) = a_0 * log p.
    """
    lam = omega.ctx.lam()
    return c1 - c2 + omega.residue * lam
