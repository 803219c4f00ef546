import random
from fractions import Fraction

import pytest

from vologcalc.errors import PreconditionError
from vologcalc.fpnmod import (
    FpnModule,
    StTriple,
    add_triples,
    change_uniformizer_class,
    check_cocycle,
    ext_to_triple,
    extension,
    first_differential,
    kummer_class_from_value,
    kummer_extension,
    kummer_module,
    module,
    module_from_json,
    module_to_json,
    normalize_class,
    synderi_check,
    triple_from_json,
    triple_to_json,
    twist_uniformizer,
    validate,
)
from vologcalc.linalg import is_invertible, mat_vec
from vologcalc.padic import iwasawa_log, make_padic


def F(*args):
    return Fraction(*args)


# ---------------------------------------------------------------------------
# randomized generator for valid modules and cocycles
# ---------------------------------------------------------------------------


def _random_invertible(rng, d, avoid_eigene=()):
    """Small integer matrix, invertible, with m - c*I invertible for each c."""
    while True:
        m = [[F(rng.randint(-3, 3)) for _ in range(d)] for _ in range(d)]
        if not is_invertible(m):
            continue
        ok = True
        for c in avoid_eigene:
            shifted = [[m[i][j] - (c if i == j else 0) for j in range(d)] for i in range(d)]
            if not is_invertible(shifted):
                ok = False
                break
        if ok:
            return m


def random_case1_module(rng, p=5, max_dim=8):
    """Weights exclude 0; weight -2 carries phi = (1/p) * identity so the
    kernel of 1 - p phi is the whole -2 block; an odd chain supplies nonzero
    monodromy. (p phi - 1) is kept invertible away from -2 so normalized y
    lands in weight -2 exactly."""
    d2 = rng.randint(1, 2)
    chain_len = rng.randint(0, 2)
    chain_dim = rng.randint(1, 2) if chain_len else 0
    total = d2 + chain_len * chain_dim
    while total > max_dim:
        chain_len -= 1
        total = d2 + chain_len * chain_dim
    weights = [-2] * d2
    phi_blocks = [[[F(1, p) if i == j else F(0) for j in range(d2)] for i in range(d2)]]
    n_entries = []
    top = _random_invertible(rng, chain_dim, avoid_eigene=(1, F(1, p))) if chain_len else None
    chain_phis = []
    offset = d2
    for level in range(chain_len):
        w = 1 - 2 * level  # 1, -1, -3, ... all nonzero, never -2... (level 1 -> -1)
        weights.extend([w] * chain_dim)
        if level == 0:
            blk = top
        else:
            prev = chain_phis[-1]
            blk = [[v / p for v in row] for row in prev]
            # N is the identity between consecutive chain levels
            for i in range(chain_dim):
                n_entries.append((offset + i, offset - chain_dim + i))
        chain_phis.append(blk)
        phi_blocks.append(blk)
        offset += chain_dim
    n = len(weights)
    phi = [[F(0)] * n for _ in range(n)]
    pos = 0
    for blk in phi_blocks:
        d = len(blk)
        for i in range(d):
            for j in range(d):
                phi[pos + i][pos + j] = blk[i][j]
        pos += d
    N = [[F(0)] * n for _ in range(n)]
    for i, j in n_entries:
        N[i][j] = F(1)
    f0 = []
    if rng.random() < 0.6:
        f0 = [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(rng.randint(1, max(1, n // 2)))]
        f0 = [v for v in f0 if any(x != 0 for x in v)]
    iso = _random_invertible(rng, n)
    return module(p, phi, N, weights, f0, iso)


def random_cocycle(rng, M: FpnModule) -> StTriple:
    """x random; y solved blockwise from the cocycle condition, plus a free
    kernel element supported in weight -2."""
    n, p = M.dim, M.p
    x = [F(rng.randint(-4, 4)) for _ in range(n)]
    nx = mat_vec(M.N, tuple(x))
    y = [F(0)] * n
    for k in M.weight_set():
        idx = M.weight_indices(k)
        rhs = [-nx[i] for i in idx]
        block = [
            [(1 if i == j else 0) - p * M.phi[i][j] for j in idx] for i in idx
        ]
        if is_invertible(block):
            from vologcalc.linalg import gauss_solve

            sol = gauss_solve(block, rhs)
            for i, v in zip(idx, sol):
                y[i] = v
        else:
            # 1 - p phi vanishes identically on the -2 block by construction
            assert k == -2 and all(v == 0 for v in rhs)
            for i in idx:
                y[i] = F(rng.randint(-4, 4))
    z = tuple(F(rng.randint(-4, 4)) for _ in range(n))
    t = StTriple(tuple(x), tuple(y), M.reduce_mod_f0(z))
    check_cocycle(M, t)
    return t


def random_case2_module(rng, p=5):
    """Weights {0, -2} with N an isomorphism between them."""
    d = rng.randint(1, 3)
    while True:
        phi0 = _random_invertible(rng, d, avoid_eigene=(1, F(1, p), F(p)))
        nblk = _random_invertible(rng, d)
        # phi on weight -2 forced by the commutation rule
        from vologcalc.linalg import gauss_solve, mat_mul

        ninv = [gauss_solve(nblk, [F(1) if i == j else F(0) for i in range(d)]) for j in range(d)]
        ninv = [list(col) for col in zip(*ninv)]
        phi2 = [[v / p for v in row] for row in mat_mul(mat_mul(nblk, phi0), ninv)]
        shifted = [[phi2[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)]
        if is_invertible(shifted):
            break
    n = 2 * d
    weights = [0] * d + [-2] * d
    phi = [[F(0)] * n for _ in range(n)]
    N = [[F(0)] * n for _ in range(n)]
    for i in range(d):
        for j in range(d):
            phi[i][j] = phi0[i][j]
            phi[d + i][d + j] = phi2[i][j]
            N[d + i][j] = nblk[i][j]
    iso = _random_invertible(rng, n)
    f0 = [[F(rng.randint(-2, 2)) for _ in range(n)]] if rng.random() < 0.5 else []
    f0 = [v for v in f0 if any(x != 0 for x in v)]
    return module(p, phi, N, weights, f0, iso)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def test_validate_examples():
    p = 5
    ok1 = module(p, [[F(1, p)]], [[0]], [-2])
    assert validate(ok1) is None

    ok2 = module(p, [[1, 0], [0, F(1, p)]], [[0, 0], [1, 0]], [0, -2])
    assert validate(ok2) is None

    bad = module(p, [[1, 0], [0, 1]], [[0, 0], [1, 0]], [0, -2])
    report = validate(bad)
    assert report is not None and "monodromy-Frobenius" in report


def test_validate_mutation_catches_each_invariant():
    rng = random.Random(4)
    for _ in range(20):
        M = random_case1_module(rng)
        assert validate(M) is None
        n = M.dim
        # perturb one phi entry off the weight grading if possible
        i = rng.randrange(n)
        j = rng.randrange(n)
        phi = [list(row) for row in M.phi]
        phi[i][j] += 1
        mutated = module(M.p, phi, M.N, M.weights, M.f0, M.iso)
        if M.weights[i] != M.weights[j]:
            assert validate(mutated) is not None


def test_validate_rejects_weight_shift_violation():
    # N raises weight here while still satisfying the commutation identity
    M = module(5, [[F(1, 25), 0], [0, F(1, 5)]], [[0, 1], [0, 0]], [0, -2])
    report = validate(M)
    assert report is not None and "weight" in report


def test_validate_rejects_non_nilpotent():
    M = module(5, [[F(1, 5)]], [[1]], [-2])
    report = validate(M)
    assert report is not None


# ---------------------------------------------------------------------------
# extensions and triples
# ---------------------------------------------------------------------------


def test_ext_to_triple_split_extension():
    base = kummer_module(5)
    ext = extension(
        base, phi=[[F(1, 5), 0], [0, 1]], N=[[0, 0], [0, 0]], f0=[[0, 1]]
    )
    t = ext_to_triple(ext, (0, 1), (0, 1))
    assert t.x == (0,) and t.y == (0,) and t.z == (0,)


def test_ext_to_triple_kummer_model():
    ext, A, B = kummer_extension(5, beta=F(7, 2), nu=1)
    t = ext_to_triple(ext, A, B)
    assert t.x == (0,)
    assert t.y == (1,)
    assert t.z == (F(7, 2),)


def test_ext_to_triple_shift_by_w():
    # changing the lift moves the triple by the first differential
    ext, A, B = kummer_extension(5, beta=F(1), nu=2)
    base = ext.base
    t = ext_to_triple(ext, A, B)
    shifted = ext_to_triple(ext, (F(1), F(1)), B)
    diff = first_differential(base, (F(1),))
    assert diff.x == (F(1, 5) - 1,)
    assert diff.y == (0,)
    assert diff.z == (-1,)
    combined = add_triples(base, t, diff)
    assert shifted.x == combined.x and shifted.y == combined.y and shifted.z == combined.z


def test_ext_to_triple_rejects_bad_lifts():
    ext, A, B = kummer_extension(5, beta=F(0), nu=1)
    with pytest.raises(PreconditionError):
        ext_to_triple(ext, (0, 2), B)
    with pytest.raises(PreconditionError):
        ext_to_triple(ext, A, (5, 1))  # not in F^0


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------


def test_normalize_kummer_model():
    ext, A, B = kummer_extension(7, beta=F(9, 4), nu=3)
    t = ext_to_triple(ext, A, B)
    nf = normalize_class(ext.base, t)
    assert nf.case == 1
    assert nf.beta == (F(9, 4),)
    assert nf.rho == (3,)


def test_normalize_kills_coboundaries():
    rng = random.Random(11)
    for _ in range(25):
        M = random_case1_module(rng)
        w = tuple(F(rng.randint(-4, 4)) for _ in range(M.dim))
        nf = normalize_class(M, first_differential(M, w))
        assert all(v == 0 for v in nf.beta)
        assert all(v == 0 for v in nf.rho)


def test_beta_rho_linear_and_class_invariant():
    rng = random.Random(13)
    for _ in range(25):
        M = random_case1_module(rng)
        t = random_cocycle(rng, M)
        w = tuple(F(rng.randint(-3, 3)) for _ in range(M.dim))
        moved = add_triples(M, t, first_differential(M, w))
        a, b = normalize_class(M, t), normalize_class(M, moved)
        assert a.beta == b.beta and a.rho == b.rho
        # additivity
        s = random_cocycle(rng, M)
        both = add_triples(M, t, s)
        nf_sum = normalize_class(M, both)
        nf_t, nf_s = normalize_class(M, t), normalize_class(M, s)
        assert nf_sum.beta == tuple(
            x + y for x, y in zip(nf_t.beta, nf_s.beta)
        ) or nf_sum.beta == M.reduce_mod_f0(tuple(x + y for x, y in zip(nf_t.beta, nf_s.beta)))
        assert nf_sum.rho == tuple(x + y for x, y in zip(nf_t.rho, nf_s.rho))


def test_normalize_case2():
    rng = random.Random(17)
    for _ in range(20):
        M = random_case2_module(rng)
        assert validate(M) is None
        t = random_cocycle(rng, M)
        nf = normalize_class(M, t)
        assert nf.case == 2
        assert all(v == 0 for v in nf.rho)
        assert all(v == 0 for v in nf.triple.x)
        assert all(v == 0 for v in nf.triple.y)


def test_normalize_unsupported_module():
    # weight 0 present but N not an isomorphism onto weight -2
    M = module(5, [[2, 0], [0, F(1, 5)]], [[0, 0], [0, 0]], [0, -2])
    assert validate(M) is None
    t = StTriple((F(0), F(0)), (F(0), F(0)), (F(0), F(0)))
    with pytest.raises(PreconditionError):
        normalize_class(M, t)


# ---------------------------------------------------------------------------
# uniformizer change and the derivative identity
# ---------------------------------------------------------------------------


def test_change_uniformizer_examples():
    ext, A, B = kummer_extension(5, beta=F(4), nu=1)
    t = ext_to_triple(ext, A, B)
    assert change_uniformizer_class(t, 0, ext.base) == t
    moved = change_uniformizer_class(t, F(3), ext.base)
    assert moved.z == (F(1),)  # beta - ell * nu
    # y = 0 leaves the triple alone
    still = StTriple((F(0),), (F(0),), (F(2),))
    assert change_uniformizer_class(still, F(9), ext.base) == still


def test_rho_is_branch_independent():
    rng = random.Random(23)
    for _ in range(15):
        M = random_case1_module(rng)
        t = random_cocycle(rng, M)
        moved = change_uniformizer_class(t, F(rng.randint(-3, 3)), M)
        assert normalize_class(M, moved).rho == normalize_class(M, t).rho


def test_synderi_kummer():
    ext, A, B = kummer_extension(5, beta=F(5, 3), nu=1)
    t = ext_to_triple(ext, A, B)
    witness = synderi_check(ext.base, t)
    assert witness.ok
    assert witness.derivative == (-1,)
    assert witness.minus_iso_rho == (-1,)


def test_synderi_on_coboundaries():
    rng = random.Random(29)
    M = random_case1_module(rng)
    w = tuple(F(rng.randint(-3, 3)) for _ in range(M.dim))
    witness = synderi_check(M, first_differential(M, w))
    assert witness.ok
    assert all(v == 0 for v in witness.derivative)


def test_synderi_randomized_case1():
    rng = random.Random(31)
    for _ in range(30):
        M = random_case1_module(rng)
        assert validate(M) is None
        t = random_cocycle(rng, M)
        assert synderi_check(M, t).ok


def test_synderi_case2_beta_branch_independent():
    rng = random.Random(37)
    for _ in range(15):
        M = random_case2_module(rng)
        t = random_cocycle(rng, M)
        witness = synderi_check(M, t)
        assert witness.ok
        assert all(all(v == 0 for v in c) for c in witness.beta_poly[1:])


def test_beta_poly_matches_twisted_normalization():
    # second route: numerically shift the uniformizer, renormalize inside
    # the twisted module, compare with the polynomial evaluation
    rng = random.Random(41)
    for _ in range(10):
        M = random_case1_module(rng)
        t = random_cocycle(rng, M)
        witness = synderi_check(M, t)
        for ell in (F(1), F(2), F(-1, 2)):
            twisted = twist_uniformizer(M, ell)
            moved = change_uniformizer_class(t, ell, M)
            beta_ell = normalize_class(twisted, moved).beta
            poly_val = [Fraction(0)] * M.dim
            for j, coeff in enumerate(witness.beta_poly):
                for i in range(M.dim):
                    poly_val[i] += coeff[i] * ell**j
            assert M.reduce_mod_f0(tuple(poly_val)) == tuple(beta_ell)


def test_regulator_shape_round_trip():
    # an actual value in Q_p: (beta, rho) = (reference-branch log, valuation)
    p = 5
    for num, den in ((50, 7), (3, 1), (7, 125), (-2, 5)):
        M, t = kummer_class_from_value(p, num, den, 16)
        nf = normalize_class(M, t)
        value = make_padic(p, num, den, 16)
        assert nf.rho == (Fraction(value.val),)
        assert nf.beta[0] == iwasawa_log(value).constant_term()
        assert synderi_check(M, t).ok


def test_module_json_round_trip():
    rng = random.Random(43)
    M = random_case1_module(rng)
    M2 = module_from_json(module_to_json(M))
    assert M2 == M
    t = random_cocycle(rng, M)
    t2 = triple_from_json(triple_to_json(t))
    assert t2 == t
