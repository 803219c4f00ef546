"""Filtered Frobenius-monodromy modules over Q_p and their extension classes.

A module D carries a linear Frobenius phi, a nilpotent monodromy N with
N phi = p phi N, a basis-aligned weight grading (N lowers weight by 2, phi
preserves it, phi - 1 invertible away from weight 0), an F^0 subspace of the
filtered side D_K, and the comparison map I between the two sides at the
reference uniformizer p. Changing uniformizer composes I with exp(l N),
l the logarithm of the ratio.

An extension class of the unit object by D is a cocycle triple (x, y, z)
with N x + (1 - p phi) y = 0, x, y in D, z in D_K modulo F^0, taken up to
the differential w -> ((phi - 1) w, N w, -I w). Normalizing kills x and
splits the class into a filtration-valued component beta (the z after
normalization) and a discrete component rho (the weight -2 part of the
normalized y). The headline identity, checked by synderi_check, is that
the branch derivative of beta is -I(rho).

All linear algebra is exact over Fraction; triples may carry p-adic entries
in the z slot (the matrices stay rational), which is how arithmetic data
flows in from the logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import PreconditionError
from .linalg import (
    gauss_solve,
    identity,
    is_invertible,
    mat_mul,
    mat_vec,
    reduce_mod_span,
    row_echelon_basis,
)
from .padic import PadicNumber, iwasawa_log, make_padic


def _frac_matrix(rows):
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _frac_vector(v):
    return tuple(Fraction(x) if isinstance(x, (int, str)) else x for x in v)


@dataclass(frozen=True)
class FpnModule:
    """Dimension-n module: matrices act on column vectors in the weight basis."""

    p: int
    phi: tuple
    N: tuple
    weights: tuple
    f0: tuple
    iso: tuple

    @property
    def dim(self) -> int:
        return len(self.weights)

    def weight_indices(self, k: int):
        return [i for i, w in enumerate(self.weights) if w == k]

    def weight_set(self):
        return sorted(set(self.weights))

    def project_weight(self, vec, k: int):
        return tuple(
            vec[i] if self.weights[i] == k else _zero_like(vec[i]) for i in range(self.dim)
        )

    def f0_echelon(self):
        if not self.f0:
            return [], []
        return row_echelon_basis(self.f0)

    def reduce_mod_f0(self, vec):
        """Canonical coset representative in D_K / F^0."""
        rows, pivots = self.f0_echelon()
        return reduce_mod_span(tuple(vec), rows, pivots)

    def nilpotency_index(self) -> int:
        power = identity(self.dim)
        for m in range(self.dim + 1):
            if all(all(v == 0 for v in row) for row in power):
                return m
            power = mat_mul(self.N, power)
        raise PreconditionError("monodromy operator is not nilpotent")


def _zero_like(x):
    if isinstance(x, PadicNumber):
        return PadicNumber.zero(x.p, x.prec)
    return Fraction(0)


def module(p, phi, N, weights, f0=(), iso=None) -> FpnModule:
    n = len(weights)
    iso = identity(n) if iso is None else _frac_matrix(iso)
    return FpnModule(
        p,
        _frac_matrix(phi),
        _frac_matrix(N),
        tuple(int(w) for w in weights),
        tuple(_frac_vector(v) for v in f0),
        iso,
    )


def validate(M: FpnModule):
    """Check the structural identities; None if all hold, else the first
    violation with indices."""
    n = M.dim
    p = M.p
    nphi = mat_mul(M.N, M.phi)
    pphin = tuple(tuple(p * v for v in row) for row in mat_mul(M.phi, M.N))
    for i in range(n):
        for j in range(n):
            if nphi[i][j] != pphin[i][j]:
                return (
                    f"monodromy-Frobenius relation fails at entry ({i}, {j}): "
                    f"(N phi) = {nphi[i][j]}, p (phi N) = {pphin[i][j]}"
                )
    for j in range(n):
        for i in range(n):
            if M.N[i][j] != 0 and M.weights[i] != M.weights[j] - 2:
                return (
                    f"monodromy does not lower weight by 2 at entry ({i}, {j}): "
                    f"maps weight {M.weights[j]} into weight {M.weights[i]}"
                )
    for j in range(n):
        for i in range(n):
            if M.phi[i][j] != 0 and M.weights[i] != M.weights[j]:
                return (
                    f"Frobenius does not preserve the weight grading at ({i}, {j})"
                )
    for k in M.weight_set():
        if k == 0:
            continue
        idx = M.weight_indices(k)
        block = [[M.phi[i][j] - (1 if i == j else 0) for j in idx] for i in idx]
        if not is_invertible(block):
            return f"phi - 1 is singular on the weight-{k} summand"
    power = identity(n)
    for _ in range(n):
        power = mat_mul(M.N, power)
    if any(any(v != 0 for v in row) for row in power):
        return "monodromy operator is not nilpotent"
    if not is_invertible(M.phi):
        return "Frobenius is singular"
    if not is_invertible(M.iso):
        return "comparison map is singular"
    return None


@dataclass(frozen=True)
class StTriple:
    """Cocycle representative (x, y, z); z is a coset representative mod F^0."""

    x: tuple
    y: tuple
    z: tuple


def check_cocycle(M: FpnModule, t: StTriple):
    lhs = mat_vec(M.N, t.x)
    y_part = [t.y[i] - M.p * v for i, v in enumerate(mat_vec(M.phi, t.y))]
    for i in range(M.dim):
        if lhs[i] + y_part[i] != 0:
            raise PreconditionError(
                f"cocycle condition fails in coordinate {i}: N x + (1 - p phi) y != 0"
            )


def first_differential(M: FpnModule, w) -> StTriple:
    """Image of w in D under the first differential ((phi-1)w, Nw, -Iw)."""
    w = tuple(w)
    phiw = mat_vec(M.phi, w)
    return StTriple(
        tuple(phiw[i] - w[i] for i in range(M.dim)),
        mat_vec(M.N, w),
        M.reduce_mod_f0(tuple(-v for v in mat_vec(M.iso, w))),
    )


def add_triples(M: FpnModule, a: StTriple, b: StTriple, sign=1) -> StTriple:
    return StTriple(
        tuple(x + sign * y for x, y in zip(a.x, b.x)),
        tuple(x + sign * y for x, y in zip(a.y, b.y)),
        M.reduce_mod_f0(tuple(x + sign * y for x, y in zip(a.z, b.z))),
    )


# ---------------------------------------------------------------------------
# Extensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FpnExtension:
    """Extension module D' of the unit object by base, in a basis whose first
    n coordinates span the base and whose last coordinate maps to 1."""

    base: FpnModule
    phi: tuple
    N: tuple
    iso: tuple
    f0: tuple

    def __post_init__(self):
        n = self.base.dim
        for name, big, small, last in (
            ("phi", self.phi, self.base.phi, 1),
            ("N", self.N, self.base.N, 0),
            ("iso", self.iso, self.base.iso, 1),
        ):
            if len(big) != n + 1:
                raise PreconditionError(f"extension {name} has wrong dimension")
            for j in range(n):
                if big[n][j] != 0:
                    raise PreconditionError(
                        f"extension {name} does not kill the base in the quotient row"
                    )
                for i in range(n):
                    if big[i][j] != small[i][j]:
                        raise PreconditionError(
                            f"extension {name} does not restrict to the base at ({i}, {j})"
                        )
            if big[n][n] != last:
                raise PreconditionError(
                    f"extension {name} acts on the quotient by {big[n][n]}, expected {last}"
                )


def extension(base: FpnModule, phi, N, iso=None, f0=()) -> FpnExtension:
    iso = identity(base.dim + 1) if iso is None else _frac_matrix(iso)
    return FpnExtension(
        base,
        _frac_matrix(phi),
        _frac_matrix(N),
        iso,
        tuple(_frac_vector(v) for v in f0),
    )


def ext_to_triple(ext: FpnExtension, A, B) -> StTriple:
    """Cocycle of an extension from lifts A (of 1 in D') and B (of 1 in F^0 D'_K):
    ((phi - 1) A, N A, B - I A), projected to the base coordinates.

    Changing A by a base vector w moves the result by the first differential
    of w; that identity is asserted on a probe vector before returning.
    """
    base = ext.base
    n = base.dim
    A = _frac_vector(A)
    B = _frac_vector(B)
    if A[n] != 1:
        raise PreconditionError("A does not lift 1 in the quotient")
    if B[n] != 1:
        raise PreconditionError("B does not lift 1 in the quotient")
    if ext.f0:
        rows, pivots = row_echelon_basis(ext.f0)
        if any(v != 0 for v in reduce_mod_span(B, rows, pivots)):
            raise PreconditionError("B is not in F^0 of the extension")
    elif any(v != 0 for v in B):
        raise PreconditionError("B is not in F^0 of the extension")

    def triple_for(lift):
        phiA = mat_vec(ext.phi, lift)
        x = tuple(phiA[i] - lift[i] for i in range(n))
        y = mat_vec(ext.N, lift)[:n]
        ia = mat_vec(ext.iso, lift)
        z = tuple(B[i] - ia[i] for i in range(n))
        return StTriple(x, tuple(y), base.reduce_mod_f0(z))

    result = triple_for(A)
    probe = tuple(Fraction(1) for _ in range(n)) + (Fraction(0),)
    shifted = triple_for(tuple(a + w for a, w in zip(A, probe)))
    expected = add_triples(base, result, first_differential(base, probe[:n]))
    if not (shifted.x == expected.x and shifted.y == expected.y and shifted.z == expected.z):
        raise PreconditionError(
            "extension data is inconsistent: shifting the lift does not act by the differential"
        )
    check_cocycle(base, result)
    return result


# ---------------------------------------------------------------------------
# Normal forms and the derivative identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    triple: StTriple
    beta: tuple
    rho: tuple
    w: tuple
    case: int


def _solve_weight_blocks(M: FpnModule, x):
    """w with (phi - 1) w = x blockwise on the nonzero weights; the weight-0
    component of x must vanish (callers guarantee it by case analysis)."""
    w = [Fraction(0)] * M.dim
    for k in M.weight_set():
        idx = M.weight_indices(k)
        xs = [x[i] for i in idx]
        if k == 0:
            continue
        block = [[M.phi[i][j] - (1 if i == j else 0) for j in idx] for i in idx]
        if not is_invertible(block):
            raise PreconditionError(f"phi - 1 is singular on the weight-{k} summand")
        sol = gauss_solve(block, xs)
        for i, v in zip(idx, sol):
            w[i] = v
    return tuple(w)


def normalize_class(M: FpnModule, t: StTriple) -> NormalForm:
    """Reduce a cocycle to x = 0 and split off (beta, rho).

    Case 1 (no weight-0 summand): subtract the differential of
    w = sum over k != 0 of (phi - 1)^{-1} x_k; beta is the resulting z,
    rho the weight -2 projection of the resulting y.

    Case 2 (N iso from weight 0 to weight -2): additionally kill y through a
    weight-0 preimage; the cocycle condition then forces x = 0 and y = 0, so
    rho = 0 and beta is the resulting z.

    Both components are constant on cohomology classes: adding a differential
    moves (w, y, z) coherently.
    """
    check_cocycle(M, t)
    idx0 = M.weight_indices(0)
    case = 1 if not idx0 else 2
    if case == 2:
        idx2 = M.weight_indices(-2)
        n_block = [[M.N[i][j] for j in idx0] for i in idx2]
        if len(idx0) != len(idx2) or not is_invertible(n_block):
            raise PreconditionError(
                "unsupported module: weight-0 part nonzero and monodromy is not an "
                "isomorphism onto weight -2"
            )
    w = list(_solve_weight_blocks(M, t.x))
    if case == 2:
        # current y after the first correction
        nw = mat_vec(M.N, tuple(w))
        y_cur = tuple(t.y[i] - nw[i] for i in range(M.dim))
        idx2 = M.weight_indices(-2)
        y2 = [y_cur[i] for i in idx2]
        n_block = [[M.N[i][j] for j in idx0] for i in idx2]
        sol = gauss_solve(n_block, y2)
        for i, v in zip(idx0, sol):
            w[i] = w[i] + v
    w = tuple(w)
    norm = add_triples(M, t, first_differential(M, w), sign=-1)
    if any(v != 0 for v in norm.x):
        raise PreconditionError("normalization failed to kill the x component")
    if case == 2 and any(v != 0 for v in norm.y):
        raise PreconditionError(
            "cocycle not reducible: y survives the weight-0 correction"
        )
    rho = (
        M.project_weight(norm.y, -2)
        if case == 1
        else tuple(Fraction(0) for _ in range(M.dim))
    )
    return NormalForm(norm, norm.z, rho, w, case)


def change_uniformizer_class(t: StTriple, ell, M: FpnModule) -> StTriple:
    """Effect on a triple of moving the comparison map to I o exp(ell N):
    z picks up -sum_{j >= 1} ell^j / j! * I N^{j-1} y; the exponential
    truncates at the nilpotency index, so this is exact."""
    ell = Fraction(ell)
    z = list(t.z)
    current = tuple(t.y)
    j = 1
    while any(_nonzero(v) for v in current):
        iv = mat_vec(M.iso, current)
        coeff = ell**j / factorial(j)
        for i in range(M.dim):
            z[i] = z[i] - coeff * iv[i]
        current = mat_vec(M.N, current)
        j += 1
        if j > M.dim + 1:
            break
    return StTriple(t.x, t.y, M.reduce_mod_f0(tuple(z)))


def _nonzero(v) -> bool:
    if isinstance(v, PadicNumber):
        return not v.is_zero
    return v != 0


def twist_uniformizer(M: FpnModule, ell) -> FpnModule:
    """The same module with the comparison map at the shifted uniformizer."""
    ell = Fraction(ell)
    n = M.dim
    exp = identity(n)
    power = identity(n)
    for j in range(1, n + 1):
        power = mat_mul(power, M.N)
        coeff = ell**j / factorial(j)
        exp = tuple(
            tuple(exp[i][k] + coeff * power[i][k] for k in range(n)) for i in range(n)
        )
    return FpnModule(M.p, M.phi, M.N, M.weights, M.f0, mat_mul(M.iso, exp))


@dataclass(frozen=True)
class SynderiWitness:
    ok: bool
    derivative: tuple
    minus_iso_rho: tuple
    beta_poly: tuple


def synderi_check(M: FpnModule, t: StTriple) -> SynderiWitness:
    """Branch derivative of the filtration component against -I(rho).

    beta of the uniformizer-shifted class is a polynomial in the shift
    parameter: coefficient j >= 1 is (-1/j!) I N^{j-1} applied to the
    normalized y, reduced mod F^0 (both the triple and the normalizing
    differential move, and their shifts combine into the normalized y). The
    check compares the degree-1 coefficient with -I(rho) and returns both,
    plus the whole polynomial for inspection.
    """
    nf = normalize_class(M, t)
    y_norm = nf.triple.y
    coeffs = [nf.beta]
    current = tuple(y_norm)
    for j in range(1, M.nilpotency_index() + 1):
        iv = mat_vec(M.iso, current)
        coeffs.append(
            M.reduce_mod_f0(tuple(Fraction(-1, factorial(j)) * v for v in iv))
        )
        current = mat_vec(M.N, current)
    while len(coeffs) > 1 and all(v == 0 for v in coeffs[-1]):
        coeffs.pop()
    if len(coeffs) == 1:
        derivative = tuple(Fraction(0) for _ in range(M.dim))
    else:
        derivative = coeffs[1]
    minus_iso_rho = M.reduce_mod_f0(tuple(-v for v in mat_vec(M.iso, nf.rho)))
    ok = all(a == b for a, b in zip(derivative, minus_iso_rho))
    return SynderiWitness(ok, derivative, minus_iso_rho, tuple(coeffs))


# ---------------------------------------------------------------------------
# The multiplicative-group model
# ---------------------------------------------------------------------------


def kummer_module(p: int) -> FpnModule:
    """One-dimensional weight -2 module with phi = 1/p: the home of classes
    of units under (log, valuation)."""
    return module(p, [[Fraction(1, p)]], [[0]], [-2])


def kummer_extension(p: int, beta, nu: int) -> tuple:
    """Extension encoding an element of valuation nu and logarithm beta,
    with the lifts (A, B) realizing it; feed to ext_to_triple."""
    beta = Fraction(beta)
    base = kummer_module(p)
    ext = extension(
        base,
        phi=[[Fraction(1, p), 0], [0, 1]],
        N=[[0, nu], [0, 0]],
        f0=[[beta, 1]],
    )
    A = (Fraction(0), Fraction(1))
    B = (beta, Fraction(1))
    return ext, A, B


def kummer_class_from_value(p: int, num: int, den: int, prec: int) -> tuple:
    """Module and cocycle for an actual nonzero rational value in Q_p: the
    filtration slot carries the reference-branch logarithm as a p-adic
    number, the discrete slot the valuation."""
    value = make_padic(p, num, den, prec)
    log_value = iwasawa_log(value)
    base = kummer_module(p)
    t = StTriple(
        (Fraction(0),),
        (Fraction(value.val),),
        (log_value.constant_term(),),
    )
    return base, t


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _frac_str(v) -> str:
    return str(Fraction(v))


def module_to_json(M: FpnModule) -> dict:
    return {
        "p": M.p,
        "weights": list(M.weights),
        "phi": [[_frac_str(v) for v in row] for row in M.phi],
        "N": [[_frac_str(v) for v in row] for row in M.N],
        "iso": [[_frac_str(v) for v in row] for row in M.iso],
        "f0": [[_frac_str(v) for v in vec] for vec in M.f0],
    }


def module_from_json(obj: dict) -> FpnModule:
    return module(
        int(obj["p"]),
        [[Fraction(v) for v in row] for row in obj["phi"]],
        [[Fraction(v) for v in row] for row in obj["N"]],
        obj["weights"],
        [[Fraction(v) for v in vec] for vec in obj.get("f0", [])],
        [[Fraction(v) for v in row] for row in obj["iso"]] if "iso" in obj else None,
    )


def triple_to_json(t: StTriple) -> dict:
    return {
        "x": [_frac_str(v) for v in t.x],
        "y": [_frac_str(v) for v in t.y],
        "z": [_frac_str(v) for v in t.z],
    }


def triple_from_json(obj: dict) -> StTriple:
    return StTriple(
        tuple(Fraction(v) for v in obj["x"]),
        tuple(Fraction(v) for v in obj["y"]),
        tuple(Fraction(v) for v in obj["z"]),
    )
