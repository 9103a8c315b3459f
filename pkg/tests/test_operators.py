import random

import pytest

from sympdirac.linalg import matrix_of
from sympdirac.operators import (
    ActionKind,
    ElementaryAction,
    EulerScalar,
    LinearOperator,
    OperatorTerm,
    SingularEulerDenominator,
    apply_op,
    catalog,
    commutator,
    compose,
    der_,
    extremal_projector_apply,
    identity_op,
    mul_,
    nilpotency_order,
    operators_equal_on,
    op_scale,
    op_sub,
    sp_labels,
    zero_op,
)
from sympdirac.polys import (
    Block,
    TriDegree,
    monomial_basis,
    multiply_by,
    poly_mul,
    poly_scale,
    poly_sub,
    random_poly,
    render_poly,
    x_,
    y_,
    z_,
)
from sympdirac.rationals import QQ

M = 6


@pytest.fixture(scope="module")
def cat():
    return catalog(M)


def mono(**powers):
    """Monomial from names like x1=2, z3=1."""
    exps = [0] * (3 * M)
    makers = {"x": x_, "y": y_, "z": z_}
    for name, e in powers.items():
        exps[makers[name[0]](int(name[1:])).flat(M)] = e
    return tuple(exps)


def test_heisenberg_single_pair():
    d = LinearOperator("d_x1", [OperatorTerm(EulerScalar(1), (der_(x_(1)),))])
    x = LinearOperator("x1", [OperatorTerm(EulerScalar(1), (mul_(x_(1)),))])
    one = {mono(): QQ(1)}
    assert apply_op(commutator(d, x), one) == one


def test_dirac_down_kills_z_only_polys(cat):
    rng = random.Random(1)
    for _ in range(10):
        p = {}
        for _ in range(4):
            exps = [0] * (3 * M)
            for _ in range(rng.randint(0, 4)):
                exps[12 + rng.randrange(M)] += 1
            p[tuple(exps)] = QQ(rng.randint(1, 5))
        assert apply_op(cat["D_s"], p) == {}


def test_dirac_up_on_constants(cat):
    img = apply_op(cat["D_s_dag"], {mono(): QQ(1)})
    expect = {}
    for j in range(1, M + 1):
        expect[mono(**{f"x{j}": 1, f"z{j}": 1})] = QQ(1)
    assert img == expect
    assert render_poly(img) == "x1*z1 + x2*z2 + x3*z3 + x4*z4 + x5*z5 + x6*z6"


def test_lowering_kills_x_times_harmonic(cat):
    h = {mono(z1=1, z2=1): QQ(1)}  # z-harmonic
    p = multiply_by(h, x_(1))
    assert apply_op(cat["L"], p) == {}


def test_bracket_of_R_and_L_is_script_E(cat):
    # measured orientation: [R, L] = E_script, so [L, R] acts as -E_script
    blk = Block(M, [TriDegree(1, 0, 2)])
    assert operators_equal_on(commutator(cat["R"], cat["L"]), cat["E_script"], blk)
    assert operators_equal_on(
        commutator(cat["L"], cat["R"]), op_scale(cat["E_script"], -1), blk
    )
    mixed = Block(M, [TriDegree(1, 1, 1), TriDegree(0, 0, 3)])
    assert operators_equal_on(commutator(cat["R"], cat["L"]), cat["E_script"], mixed)


def test_dirac_bracket_matches_sl_c_cartan(cat):
    # [D_s, D_s_dag] = -(E + m); equivalently [sl_c_X, sl_c_Y] = sl_c_H
    from sympdirac.operators import euler_op

    target = euler_op("minus_E_minus_m", (-1, -1, 0, -M))
    for degs in ([(0, 0, 1)], [(1, 0, 1), (0, 1, 0)], [(1, 1, 0), (2, 0, 2)]):
        blk = Block(M, [TriDegree(*d) for d in degs])
        assert operators_equal_on(commutator(cat["D_s"], cat["D_s_dag"]), target, blk)
        assert operators_equal_on(
            commutator(cat["sl_c_X"], cat["sl_c_Y"]), cat["sl_c_H"], blk
        )


@pytest.mark.parametrize("name", ["sl_h", "sl_s", "sl_c", "sl_d"])
def test_sl2_triples_on_small_blocks(cat, name):
    X, Y, H = cat[f"{name}_X"], cat[f"{name}_Y"], cat[f"{name}_H"]
    blk = Block(M, [TriDegree(1, 0, 2), TriDegree(0, 1, 0), TriDegree(1, 1, 1)])
    assert operators_equal_on(commutator(H, X), op_scale(X, 2), blk)
    assert operators_equal_on(commutator(H, Y), op_scale(Y, -2), blk)
    assert operators_equal_on(commutator(X, Y), H, blk)


def test_sp_generator_count(cat):
    labels = sp_labels(M)
    assert len(labels) == 2 * M * M + M == 78
    assert len(set(labels)) == 78
    for lab in labels:
        assert lab in cat


def test_sp_generators_commute_with_dirac_sample(cat):
    blk = Block(M, [TriDegree(1, 0, 1), TriDegree(0, 1, 0), TriDegree(0, 0, 2)])
    zero = zero_op()
    for lab in ["X_1_2", "X_3_3", "Y_1_1", "Y_2_5", "Z_1_1", "Z_4_6"]:
        for target in ["D_s", "D_s_dag", "E"]:
            assert operators_equal_on(commutator(cat[lab], cat[target]), zero, blk)


def test_rotations_commute_with_pair_generators(cat):
    blk = Block(M, [TriDegree(1, 0, 2)])
    zero = zero_op()
    for rot in ["L_1_2", "L_2_3", "L_5_6"]:
        for target in ["L", "R", "E_script", "D_s", "D_s_dag"]:
            assert operators_equal_on(commutator(cat[rot], cat[target]), zero, blk)


def test_pair_generators_commute_with_dirac(cat):
    blk = Block(M, [TriDegree(1, 0, 1), TriDegree(0, 1, 0)])
    zero = zero_op()
    for a in ["R", "L"]:
        for b in ["D_s", "D_s_dag"]:
            assert operators_equal_on(commutator(cat[a], cat[b]), zero, blk)


def test_casimir_brute_force_eigenvalues(cat):
    # the sign convention is fixed by these measurements
    pz1 = {mono(z1=1): QQ(1)}
    assert apply_op(cat["Casimir"], pz1) == poly_scale(pz1, 5)
    pz1z2 = {mono(z1=1, z2=1): QQ(1)}
    assert apply_op(cat["Casimir"], pz1z2) == poly_scale(pz1z2, 12)
    wedge = {mono(x1=1, z2=1): QQ(1), mono(x2=1, z1=1): QQ(-1)}
    assert apply_op(cat["Casimir"], wedge) == poly_scale(wedge, 8)
    # degree-0 harmonics: eigenvalue 0
    assert apply_op(cat["Casimir"], {mono(): QQ(1)}) == {}


def test_projector_on_y_times_harmonic(cat):
    z2 = {}
    for j in range(1, M + 1):
        z2[mono(**{f"z{j}": 2})] = QQ(1)
    for a, h in [(1, {mono(z1=1): QQ(1)}), (2, {mono(z1=1, z2=1): QQ(1)})]:
        p = multiply_by(h, y_(1))
        got = apply_op(cat["Pi_L"], p)
        expect = poly_scale(p, QQ(2 * a + M, 2 * a + M - 2))
        tail = poly_scale(multiply_by(poly_mul(z2, h), x_(1)), QQ(1, 2 * a + M - 2))
        for k, v in tail.items():
            expect[k] = expect.get(k, QQ(0)) + v
        assert got == expect
        # the projected vector is killed by L
        assert apply_op(cat["L"], got) == {}


def test_projector_idempotent_on_span(cat):
    p = multiply_by({mono(z1=1, z2=1): QQ(1)}, y_(3))
    once = apply_op(cat["Pi_L"], p)
    twice = apply_op(cat["Pi_L"], once)
    assert once == twice


def test_transvector_C_on_constants_and_harmonics(cat):
    one = {mono(): QQ(1)}
    got = apply_op(cat["C_xz"], one)
    assert got == apply_op(cat["D_s_dag"], one) == {
        mono(**{f"x{j}": 1, f"z{j}": 1}): QQ(1) for j in range(1, M + 1)
    }
    # C_xz on H_1 = z1: <x,z>z1 - (1/(2a+m-4))|z|^2 x1 with a = 2
    h = {mono(z1=1): QQ(1)}
    got = apply_op(cat["C_xz"], h)
    xz = {mono(**{f"x{j}": 1, f"z{j}": 1}): QQ(1) for j in range(1, M + 1)}
    expect = poly_mul(xz, h)
    z2 = {mono(**{f"z{j}": 2}): QQ(1) for j in range(1, M + 1)}
    corr = poly_scale(multiply_by(z2, x_(1)), QQ(-1, 2 * 2 + M - 4))
    for k, v in corr.items():
        expect[k] = expect.get(k, QQ(0)) + v
        if not expect[k]:
            del expect[k]
    assert got == expect


def test_transvector_S_on_z_harmonics(cat):
    h = {mono(z1=1, z2=1): QQ(1)}
    got = apply_op(cat["S_yz"], h)
    expect = {mono(y1=1, z2=1): QQ(1), mono(y2=1, z1=1): QQ(1)}
    assert got == expect
    assert apply_op(cat["S_yz"], {mono(): QQ(1)}) == {}


def test_compose_matches_sequential_application(cat):
    rng = random.Random(9)
    ops = [cat[k] for k in ["D_s", "D_s_dag", "L", "R", "E_script", "S_xz", "Pi_L"]]
    for _ in range(12):
        a, b = rng.choice(ops), rng.choice(ops)
        p = random_poly(rng, M, max_degree=3, terms=4)
        assert apply_op(compose(a, b), p) == apply_op(a, apply_op(b, p))


def test_euler_scalar_shift_and_singularity():
    s = EulerScalar(1, (), ((0, 0, 1, 0),))  # 1/E_z
    op = LinearOperator("bad", [OperatorTerm(s, (mul_(x_(1)),))])
    with pytest.raises(SingularEulerDenominator):
        apply_op(op, {mono(): QQ(1)})
    assert apply_op(op, {mono(z1=2): QQ(1)}) == {mono(x1=1, z1=2): QQ(1, 2)}
    shifted = s.shifted(0, 0, 3)
    assert shifted.evaluate(TriDegree(0, 0, 0)) == QQ(1, 3)


def test_degree_shift_and_script_E_preservation(cat):
    blk = Block(M, [TriDegree(1, 0, 1), TriDegree(0, 1, 2)])
    zero = zero_op()
    for op_name in ["D_s", "D_s_dag"]:
        assert operators_equal_on(commutator(cat["E_script"], cat[op_name]), zero, blk)
    # D_s on (1,0,1): every image term sits in (0,0,0) + nothing else
    img = apply_op(cat["D_s"], {mono(x1=1, z1=1): QQ(1)})
    assert img == {mono(): QQ(-1)}


def test_general_projector_agrees_and_annihilates(cat):
    # on k=1 blocks with nilpotency order <= 2 the series stops where the
    # pinned truncation does
    p = multiply_by({mono(z1=1, z2=1): QQ(1)}, y_(2))
    assert extremal_projector_apply(cat, p) == apply_op(cat["Pi_L"], p)
    # deeper block: apply to everything in (0,1,4) and check L kills it
    rng = random.Random(4)
    blk = Block(M, [TriDegree(0, 1, 4)])
    for _ in range(5):
        p = {blk.basis[rng.randrange(blk.dim)]: QQ(rng.randint(1, 7)) for _ in range(3)}
        proj = extremal_projector_apply(cat, p)
        assert apply_op(cat["L"], proj) == {}
    # and Pi annihilates R-images (the other extremal property)
    q = {mono(x2=1, z3=1): QQ(2)}
    assert extremal_projector_apply(cat, apply_op(cat["R"], q)) == {}


def test_nilpotency_order_examples():
    assert nilpotency_order(M, [TriDegree(1, 0, 0)]) == 1
    assert nilpotency_order(M, [TriDegree(1, 0, 1)]) == 1
    assert nilpotency_order(M, [TriDegree(1, 0, 2), TriDegree(0, 1, 0)]) == 2
    assert nilpotency_order(M, [TriDegree(0, 0, 5)]) == 3
    assert nilpotency_order(M, [TriDegree(0, 1, 4)]) == 4


def test_matrix_of_examples(cat):
    from sympdirac.operators import euler_op

    dom = Block(M, [TriDegree(0, 0, 2)])
    cod = Block(M, [TriDegree(0, 0, 0)])
    lap = op_scale(cat["sl_h_Y"], -2, label="Delta_z")
    mat = matrix_of(lap, dom, cod)
    assert mat.nrows == 1 and mat.ncols == 21
    squares = {mono(**{f"z{j}": 2}) for j in range(1, M + 1)}
    for idx, basis_mono in enumerate(dom.basis):
        expect = QQ(2) if basis_mono in squares else QQ(0)
        assert mat.entry(0, idx) == expect
    assert mat.rank() == 1
    assert mat.nullspace().dim == 20

    dom2 = Block(M, [TriDegree(1, 0, 1)])
    mat2 = matrix_of(cat["D_s"], dom2, cod)
    assert mat2.rank() == 1

    ident = matrix_of(cat["Id"], dom, dom)
    assert all(ident.entry(i, i) == 1 for i in range(dom.dim))
    assert sum(len(c) for c in ident.columns) == dom.dim


def test_matrix_of_rejects_escaping_images(cat):
    from sympdirac.linalg import ImageOutsideCodomain

    dom = Block(M, [TriDegree(0, 0, 2)])
    with pytest.raises(ImageOutsideCodomain):
        matrix_of(cat["D_s_dag"], dom, dom)
