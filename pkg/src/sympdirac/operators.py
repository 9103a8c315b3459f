"""Operators on P(R^{m x 3}) as finite sums of elementary terms.

An elementary term is an ordered word of single-variable actions (multiply
by a variable, or differentiate by one), applied left to right, times a
scalar that may depend rationally on the Euler degrees (Ex, Ey, Ez) of the
block the term is applied to. Scalars are always evaluated on the input
tri-degree of the term; operators whose written form divides by an Euler
expression *after* an inner action (the B^{-1} A fraction notation for
transvector generators) are stored with the scalar pre-shifted to input
form, so application stays single-pass.

Composition is lazy: term lists are concatenated and scalars get degree
shifts; identities between operators are checked extensionally on blocks,
never by symbolic normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import factorial
from typing import Dict, Iterable, List, Sequence, Tuple

from .rationals import QQ
from .polys import (
    Monomial,
    Poly,
    TriDegree,
    VariableId,
    VarBlock,
    monomial_m,
    poly_add_term,
    tri_degree_components,
    tri_degree_of,
    x_,
    y_,
    z_,
)


class SingularEulerDenominator(Exception):
    """An Euler-scalar denominator vanished on the block it was applied to."""

    def __init__(self, label: str, d: TriDegree):
        super().__init__(f"operator {label!r} has a singular Euler denominator on tri-degree {d}")
        self.label = label
        self.tri_degree = d


# a linear form a*Ex + b*Ey + c*Ez + d
LinForm = Tuple[object, object, object, object]


def _eval_form(f: LinForm, d: TriDegree):
    a, b, c, const = f
    return a * d.kx + b * d.ky + c * d.kz + const


def _shift_form(f: LinForm, dx: int, dy: int, dz: int) -> LinForm:
    a, b, c, const = f
    return (a, b, c, const + a * dx + b * dy + c * dz)


@dataclass(frozen=True)
class EulerScalar:
    """coeff * prod(num forms) / prod(den forms), evaluated at a tri-degree.

    Every scalar arising here is a product of linear forms in the Euler
    degrees, so the factored shape is kept; it makes singularity detection
    a per-factor test and degree shifts a constant adjustment.
    """

    coeff: object = 1
    num: Tuple[LinForm, ...] = ()
    den: Tuple[LinForm, ...] = ()

    def evaluate(self, d: TriDegree, label: str = "?"):
        val = QQ(self.coeff)
        for f in self.num:
            val = val * _eval_form(f, d)
        for f in self.den:
            dv = _eval_form(f, d)
            if dv == 0:
                raise SingularEulerDenominator(label, d)
            val = val / dv
        return val

    def shifted(self, dx: int, dy: int, dz: int) -> "EulerScalar":
        """Scalar s' with s'(k) = s(kx+dx, ky+dy, kz+dz)."""
        if dx == 0 and dy == 0 and dz == 0:
            return self
        return EulerScalar(
            self.coeff,
            tuple(_shift_form(f, dx, dy, dz) for f in self.num),
            tuple(_shift_form(f, dx, dy, dz) for f in self.den),
        )

    def times(self, other: "EulerScalar") -> "EulerScalar":
        return EulerScalar(
            QQ(self.coeff) * QQ(other.coeff),
            self.num + other.num,
            self.den + other.den,
        )


CONST_ONE = EulerScalar()


class ActionKind(Enum):
    MultiplyVar = "mul"
    DeriveVar = "d"


@dataclass(frozen=True)
class ElementaryAction:
    kind: ActionKind
    var: VariableId


def mul_(v: VariableId) -> ElementaryAction:
    return ElementaryAction(ActionKind.MultiplyVar, v)


def der_(v: VariableId) -> ElementaryAction:
    return ElementaryAction(ActionKind.DeriveVar, v)


_BLOCK_AXIS = {VarBlock.X: 0, VarBlock.Y: 1, VarBlock.Z: 2}


@dataclass(frozen=True)
class OperatorTerm:
    scalar: EulerScalar
    actions: Tuple[ElementaryAction, ...]

    def shift(self) -> Tuple[int, int, int]:
        s = [0, 0, 0]
        for act in self.actions:
            s[_BLOCK_AXIS[act.var.block]] += 1 if act.kind is ActionKind.MultiplyVar else -1
        return tuple(s)


class LinearOperator:
    def __init__(self, label: str, terms: Iterable[OperatorTerm]):
        self.label = label
        self.terms: Tuple[OperatorTerm, ...] = tuple(terms)

    def relabel(self, label: str) -> "LinearOperator":
        return LinearOperator(label, self.terms)

    def __repr__(self) -> str:
        return f"LinearOperator({self.label!r}, {len(self.terms)} terms)"


def _apply_term_to_monomial(term: OperatorTerm, mono: Monomial, m: int):
    """Returns (output monomial, integer factor) or None if annihilated."""
    exps = list(mono)
    factor = 1
    for act in term.actions:
        i = act.var.flat(m)
        if act.kind is ActionKind.DeriveVar:
            e = exps[i]
            if e == 0:
                return None
            factor *= e
            exps[i] = e - 1
        else:
            exps[i] += 1
    return tuple(exps), factor


def apply_op(op: LinearOperator, p: Poly) -> Poly:
    """Exact image of p. Scalars are evaluated lazily: a term that
    annihilates a monomial never evaluates its scalar, which is what lets
    auto-truncated projector series stop exactly at the nilpotency order."""
    out: Poly = {}
    for term in op.terms:
        scalar_cache: Dict[TriDegree, object] = {}
        for mono, c in p.items():
            hit = _apply_term_to_monomial(term, mono, monomial_m(mono))
            if hit is None:
                continue
            new_mono, factor = hit
            d = tri_degree_of(mono)
            s = scalar_cache.get(d)
            if s is None:
                s = term.scalar.evaluate(d, op.label)
                scalar_cache[d] = s
            if s:
                poly_add_term(out, new_mono, c * factor * s)
    return out


def op_add(a: LinearOperator, b: LinearOperator, label: str = "") -> LinearOperator:
    return LinearOperator(label or f"({a.label}+{b.label})", a.terms + b.terms)


def op_scale(a: LinearOperator, c, label: str = "") -> LinearOperator:
    cc = QQ(c)
    terms = [OperatorTerm(EulerScalar(QQ(t.scalar.coeff) * cc, t.scalar.num, t.scalar.den), t.actions) for t in a.terms]
    return LinearOperator(label or f"{c}*{a.label}", terms)


def op_sub(a: LinearOperator, b: LinearOperator, label: str = "") -> LinearOperator:
    return op_add(a, op_scale(b, -1, label=b.label), label or f"({a.label}-{b.label})")


def op_scale_by_euler(a: LinearOperator, s: EulerScalar, label: str = "") -> LinearOperator:
    """Left multiplication by a blockwise scalar: on each term the scalar is
    evaluated on the term's output, hence stored shifted to input form."""
    terms = []
    for t in a.terms:
        dx, dy, dz = t.shift()
        terms.append(OperatorTerm(t.scalar.times(s.shifted(dx, dy, dz)), t.actions))
    return LinearOperator(label or f"s*{a.label}", terms)


def compose(a: LinearOperator, b: LinearOperator, label: str = "") -> LinearOperator:
    """compose(a, b) applied to p equals apply(a, apply(b, p))."""
    terms = []
    for tb in b.terms:
        dx, dy, dz = tb.shift()
        for ta in a.terms:
            terms.append(OperatorTerm(tb.scalar.times(ta.scalar.shifted(dx, dy, dz)), tb.actions + ta.actions))
    return LinearOperator(label or f"({a.label}*{b.label})", terms)


def commutator(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    return op_sub(compose(a, b), compose(b, a), label=f"[{a.label},{b.label}]")


def operators_equal_on(a: LinearOperator, b: LinearOperator, blk) -> bool:
    """Extensional equality on a block: same image for every basis monomial."""
    for mono in blk.basis:
        p = {mono: QQ(1)}
        if apply_op(a, p) != apply_op(b, p):
            return False
    return True


def zero_op(label: str = "0") -> LinearOperator:
    return LinearOperator(label, ())


def identity_op(label: str = "Id") -> LinearOperator:
    return LinearOperator(label, (OperatorTerm(CONST_ONE, ()),))


def euler_op(label: str, form: LinForm) -> LinearOperator:
    return LinearOperator(label, (OperatorTerm(EulerScalar(1, (form,)), ()),))


# ---------------------------------------------------------------------------
# building blocks for the catalog


def _pairing_terms(outer, inner, m: int, sign=1) -> List[OperatorTerm]:
    """sum_j outer_j inner_j as terms; each factor is ('mul'|'der', maker)."""
    out = []
    for j in range(1, m + 1):
        actions = []
        for kind, maker in (inner, outer):
            actions.append(mul_(maker(j)) if kind == "mul" else der_(maker(j)))
        out.append(OperatorTerm(EulerScalar(sign), tuple(actions)))
    return out


def inner_mul_der(u, w, m: int, sign=1) -> List[OperatorTerm]:
    """<u, d_w> = sum_j u_j d/d w_j (derivative acts first)."""
    return _pairing_terms(("mul", u), ("der", w), m, sign)


def inner_mul_mul(u, w, m: int, sign=1) -> List[OperatorTerm]:
    """<u, w> multiplication."""
    return _pairing_terms(("mul", u), ("mul", w), m, sign)


def inner_der_der(u, w, m: int, sign=1) -> List[OperatorTerm]:
    """<d_u, d_w>."""
    return _pairing_terms(("der", u), ("der", w), m, sign)


def _single(scalar: EulerScalar, *actions: ElementaryAction) -> OperatorTerm:
    return OperatorTerm(scalar, tuple(actions))


def dirac_down(m: int, label: str = "D_s") -> LinearOperator:
    """D_s = <z, d_y> - <d_x, d_z>."""
    return LinearOperator(label, inner_mul_der(z_, y_, m) + inner_der_der(x_, z_, m, sign=-1))


def dirac_up(m: int, label: str = "D_s_dag") -> LinearOperator:
    """D_s_dag = <y, d_z> + <x, z>."""
    return LinearOperator(label, inner_mul_der(y_, z_, m) + inner_mul_mul(x_, z_, m))


def lowering_L(m: int) -> LinearOperator:
    """L = <x, d_y> - (1/2) Delta_z."""
    terms = inner_mul_der(x_, y_, m)
    for j in range(1, m + 1):
        terms.append(_single(EulerScalar(QQ(-1, 2)), der_(z_(j)), der_(z_(j))))
    return LinearOperator("L", terms)


def raising_R(m: int) -> LinearOperator:
    """R = <y, d_x> + (1/2) |z|^2."""
    terms = inner_mul_der(y_, x_, m)
    for j in range(1, m + 1):
        terms.append(_single(EulerScalar(QQ(1, 2)), mul_(z_(j)), mul_(z_(j))))
    return LinearOperator("R", terms)


def _sp_generators(m: int) -> Dict[str, LinearOperator]:
    """The 2m^2 + m generators realized on P(R^{m x 3})."""
    gens: Dict[str, LinearOperator] = {}
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            terms = [
                _single(EulerScalar(1), der_(x_(k)), mul_(x_(j))),
                _single(EulerScalar(-1), der_(y_(j)), mul_(y_(k))),
                _single(EulerScalar(-1), der_(z_(j)), mul_(z_(k))),
            ]
            if j == k:
                terms.append(_single(EulerScalar(QQ(-1, 2))))
            gens[f"X_{j}_{k}"] = LinearOperator(f"X_{j}_{k}", terms)
    for j in range(1, m + 1):
        for k in range(j, m + 1):
            if j == k:
                terms = [
                    _single(EulerScalar(1), der_(y_(j)), mul_(x_(j))),
                    _single(EulerScalar(QQ(-1, 2)), der_(z_(j)), der_(z_(j))),
                ]
            else:
                terms = [
                    _single(EulerScalar(1), der_(y_(k)), mul_(x_(j))),
                    _single(EulerScalar(1), der_(y_(j)), mul_(x_(k))),
                    _single(EulerScalar(-1), der_(z_(j)), der_(z_(k))),
                ]
            gens[f"Y_{j}_{k}"] = LinearOperator(f"Y_{j}_{k}", terms)
    for j in range(1, m + 1):
        for k in range(j, m + 1):
            if j == k:
                terms = [
                    _single(EulerScalar(1), der_(x_(j)), mul_(y_(j))),
                    _single(EulerScalar(QQ(1, 2)), mul_(z_(j)), mul_(z_(j))),
                ]
            else:
                terms = [
                    _single(EulerScalar(1), der_(x_(k)), mul_(y_(j))),
                    _single(EulerScalar(1), der_(x_(j)), mul_(y_(k))),
                    _single(EulerScalar(1), mul_(z_(j)), mul_(z_(k))),
                ]
            gens[f"Z_{j}_{k}"] = LinearOperator(f"Z_{j}_{k}", terms)
    return gens


def sp_labels(m: int) -> List[str]:
    labels = [f"X_{j}_{k}" for j in range(1, m + 1) for k in range(1, m + 1)]
    labels += [f"Y_{j}_{k}" for j in range(1, m + 1) for k in range(j, m + 1)]
    labels += [f"Z_{j}_{k}" for j in range(1, m + 1) for k in range(j, m + 1)]
    return labels


def _rotation(m: int, a: int, b: int) -> LinearOperator:
    """L_ab = sum over the three blocks of u_a d_{u_b} - u_b d_{u_a}."""
    terms = []
    for maker in (x_, y_, z_):
        terms.append(_single(EulerScalar(1), der_(maker(b)), mul_(maker(a))))
        terms.append(_single(EulerScalar(-1), der_(maker(a)), mul_(maker(b))))
    return LinearOperator(f"L_{a}_{b}", terms)


def _transvector_S(m: int, u, udeg_slot: int) -> List[OperatorTerm]:
    """S_uz = <u, d_z> - (2E_u + m - 4)^{-1} |u|^2 <d_u, d_z>, with the
    denominator read on the output of the inner word (so stored input form
    is 2E_u + m - 2)."""
    terms = inner_mul_der(u, z_, m)
    den_form = [0, 0, 0, m - 2]
    den_form[udeg_slot] = 2
    scal = EulerScalar(-1, (), (tuple(den_form),))
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            terms.append(_single(scal, der_(u(k)), der_(z_(k)), mul_(u(j)), mul_(u(j))))
    return terms


def _transvector_C(m: int, u, udeg_slot: int) -> List[OperatorTerm]:
    """C_uz = <u,z> - (2E_u+m-4)^{-1}|u|^2<z,d_u> - (2E_z+m-4)^{-1}|z|^2<u,d_z>
    + ((2E_u+m-4)(2E_z+m-4))^{-1}|u|^2|z|^2<d_u,d_z>, denominators read on
    the output of their inner word (input forms have m-2)."""
    u_form = [0, 0, 0, m - 2]
    u_form[udeg_slot] = 2
    u_form = tuple(u_form)
    z_form = (0, 0, 2, m - 2)
    terms = inner_mul_mul(u, z_, m)
    s_u = EulerScalar(-1, (), (u_form,))
    s_z = EulerScalar(-1, (), (z_form,))
    s_uz = EulerScalar(1, (), (u_form, z_form))
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            terms.append(_single(s_u, der_(u(k)), mul_(z_(k)), mul_(u(j)), mul_(u(j))))
            terms.append(_single(s_z, der_(z_(k)), mul_(u(k)), mul_(z_(j)), mul_(z_(j))))
            for l in range(1, m + 1):
                terms.append(
                    _single(s_uz, der_(u(k)), der_(z_(k)), mul_(u(j)), mul_(u(j)), mul_(z_(l)), mul_(z_(l)))
                )
    return terms


def script_E_form(m: int) -> LinForm:
    """The Cartan element of the sl_d pair: E_y - E_x + E_z + m/2."""
    return (-1, 1, 1, QQ(m, 2))


def catalog(m: int) -> Dict[str, LinearOperator]:
    """All named operators at a given m (>= 6, the stable range)."""
    if m < 6:
        raise ValueError(f"m must be >= 6 (stable range), got {m}")
    cat: Dict[str, LinearOperator] = {}
    cat["Id"] = identity_op()
    cat["E_x"] = euler_op("E_x", (1, 0, 0, 0))
    cat["E_y"] = euler_op("E_y", (0, 1, 0, 0))
    cat["E_z"] = euler_op("E_z", (0, 0, 1, 0))
    cat["E"] = euler_op("E", (1, 1, 0, 0))
    cat["E_script"] = euler_op("E_script", script_E_form(m))
    cat["D_s"] = dirac_down(m)
    cat["D_s_dag"] = dirac_up(m)
    cat["L"] = lowering_L(m)
    cat["R"] = raising_R(m)

    # hidden sl(2) on the z-variables
    half_z2 = LinearOperator("half_z2", [_single(EulerScalar(QQ(1, 2)), mul_(z_(j)), mul_(z_(j))) for j in range(1, m + 1)])
    half_lap = LinearOperator("neg_half_Delta_z", [_single(EulerScalar(QQ(-1, 2)), der_(z_(j)), der_(z_(j))) for j in range(1, m + 1)])
    cat["sl_h_X"] = half_z2.relabel("sl_h_X")
    cat["sl_h_Y"] = half_lap.relabel("sl_h_Y")
    cat["sl_h_H"] = euler_op("sl_h_H", (0, 0, 1, QQ(m, 2)))

    # skew pair exchanging x and y
    cat["sl_s_X"] = LinearOperator("sl_s_X", inner_mul_der(y_, x_, m))
    cat["sl_s_Y"] = LinearOperator("sl_s_Y", inner_mul_der(x_, y_, m))
    cat["sl_s_H"] = euler_op("sl_s_H", (-1, 1, 0, 0))

    # the pair generated by the Dirac operators; the plain bracket
    # [D_s_dag, D_s] closes on E + m with weight 1, so one side is doubled
    cat["sl_c_X"] = op_scale(cat["D_s_dag"], 2, label="sl_c_X")
    cat["sl_c_Y"] = cat["D_s"].relabel("sl_c_Y")
    cat["sl_c_H"] = euler_op("sl_c_H", (2, 2, 0, 2 * m))

    # the pair used for the projector
    cat["sl_d_X"] = cat["R"].relabel("sl_d_X")
    cat["sl_d_Y"] = cat["L"].relabel("sl_d_Y")
    cat["sl_d_H"] = cat["E_script"].relabel("sl_d_H")

    cat.update(_sp_generators(m))

    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            cat[f"L_{a}_{b}"] = _rotation(m, a, b)

    # so(m) Casimir, sign fixed so that eigenvalues on spherical harmonics
    # come out as sum_i lambda_i (lambda_i + m - 2i) >= 0
    cas_terms: List[OperatorTerm] = []
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            rot = cat[f"L_{a}_{b}"]
            cas_terms.extend(op_scale(compose(rot, rot), -1).terms)
    cat["Casimir"] = LinearOperator("Casimir", cas_terms)

    cat["S_xz"] = LinearOperator("S_xz", _transvector_S(m, x_, 0))
    cat["S_yz"] = LinearOperator("S_yz", _transvector_S(m, y_, 1))
    szx_terms = inner_mul_der(z_, x_, m)
    szx_scal = EulerScalar(-1, (), ((0, 0, 2, m - 2),))
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            szx_terms.append(_single(szx_scal, der_(x_(k)), der_(z_(k)), mul_(z_(j)), mul_(z_(j))))
    cat["S_zx"] = LinearOperator("S_zx", szx_terms)
    cat["A_xz"] = LinearOperator("A_xz", inner_der_der(x_, z_, m))
    cat["C_xz"] = LinearOperator("C_xz", _transvector_C(m, x_, 0))
    cat["C_yz"] = LinearOperator("C_yz", _transvector_C(m, y_, 1))

    rl = compose(cat["R"], cat["L"])
    proj_term = op_scale_by_euler(rl, EulerScalar(1, (), ((-1, 1, 1, QQ(m, 2) - 2),)))
    cat["Pi_L"] = op_add(identity_op(), proj_term, label="Pi_L").relabel("Pi_L")

    return cat


# ---------------------------------------------------------------------------
# the general extremal projector, auto-truncated per block


def nilpotency_order(m: int, tri_degrees: Sequence[TriDegree]) -> int:
    """Smallest j such that L^j is identically zero on the span of the given
    tri-degrees, bounded through the reachable-degree chain (L either moves
    a y to an x or removes two z's; when no valid target tri-degree is left
    the power is zero)."""
    current = {TriDegree(*d) for d in tri_degrees}
    order = 0
    while current:
        nxt = set()
        for d in current:
            if d.ky >= 1:
                nxt.add(TriDegree(d.kx + 1, d.ky - 1, d.kz))
            if d.kz >= 2:
                nxt.add(TriDegree(d.kx, d.ky, d.kz - 2))
        current = nxt
        order += 1
    return order


def extremal_projector_apply(cat: Dict[str, LinearOperator], p: Poly) -> Poly:
    """Apply the full extremal projector of the (R, L, E_script) pair,
    truncated at the nilpotency order of each tri-homogeneous component.

    The series is 1 + sum_{j>=1} R^j L^j / (j! (Es-2)(Es-3)...(Es-j-1))
    with Es the script-E eigenvalue of the component; the truncation order
    is computed from the degree chain before any scalar is formed, so no
    singular denominator is ever touched.
    """
    m = None
    for mono in p:
        m = monomial_m(mono)
        break
    if m is None:
        return {}
    op_L = cat["L"]
    op_R = cat["R"]
    es_form = script_E_form(m)
    out: Poly = dict(p)
    for d, comp in tri_degree_components(p).items():
        order = nilpotency_order(m, [d])
        powers = []
        cur = comp
        for _ in range(order - 1):
            cur = apply_op(op_L, cur)
            if not cur:
                break
            powers.append(cur)
        es = _eval_form(es_form, d)
        denom = QQ(1)
        for j, lj in enumerate(powers, start=1):
            dv = es - 1 - j
            if dv == 0:
                raise SingularEulerDenominator("Pi", d)
            denom = denom * dv
            lifted = lj
            for _ in range(j):
                lifted = apply_op(op_R, lifted)
            coeff = QQ(1) / (factorial(j) * denom)
            for mono, c in lifted.items():
                poly_add_term(out, mono, c * coeff)
    return out


# ---------------------------------------------------------------------------
# Weyl-algebra normal form
#
# Operators whose coefficients are polynomial (no Euler denominators) can
# be reduced to a canonical normal form: every term becomes a word with
# all derivatives applied before all multiplications, and like words are
# combined. The zero normal form is then equivalent to the operator
# vanishing on every graded block at once, which is how the big batches
# of commutation relations are certified without touching any basis.

def _var_key(v: VariableId):
    return (v.block.value, v.index)


def plain_words(op: LinearOperator, m: int) -> List[Tuple[object, List[ElementaryAction]]]:
    """Expand an operator into (coefficient, action word) pairs.

    Euler numerator factors are expanded into explicit sums of
    derivative-then-multiply words (they count the output degree, so they
    are appended after the term's own actions). Euler denominators have
    no polynomial expansion and raise.
    """
    words: List[Tuple[object, List[ElementaryAction]]] = []
    for term in op.terms:
        s = term.scalar
        if s.den:
            raise ValueError(f"{op.label}: Euler denominators have no polynomial normal form")
        base = [(QQ(s.coeff), list(term.actions))]
        for form in s.num:
            a, b, c, d = form
            grown: List[Tuple[object, List[ElementaryAction]]] = []
            for coeff, word in base:
                for cf, mk in ((a, x_), (b, y_), (c, z_)):
                    if cf:
                        for i in range(1, m + 1):
                            grown.append((coeff * QQ(cf), word + [der_(mk(i)), mul_(mk(i))]))
                if d:
                    grown.append((coeff * QQ(d), list(word)))
            base = grown
        words.extend((coeff, word) for coeff, word in base if coeff)
    return words


NormalForm = Dict[Tuple[Tuple[VariableId, ...], Tuple[VariableId, ...]], object]


def normal_form(op: LinearOperator, m: int) -> NormalForm:
    """Canonical {(derivatives, multiplications): coefficient} table.

    Words are rewritten with [d_v, v] = 1 until every derivative precedes
    every multiplication in application order; the result is empty exactly
    when the operator is zero on all of P(R^{m x 3})."""
    out: NormalForm = {}
    for coeff, word in plain_words(op, m):
        stack = [(coeff, word)]
        while stack:
            c, w = stack.pop()
            viol = -1
            for i in range(len(w) - 1):
                if w[i].kind is ActionKind.MultiplyVar and w[i + 1].kind is ActionKind.DeriveVar:
                    viol = i
                    break
            if viol < 0:
                ders = tuple(sorted((a.var for a in w if a.kind is ActionKind.DeriveVar), key=_var_key))
                muls = tuple(sorted((a.var for a in w if a.kind is ActionKind.MultiplyVar), key=_var_key))
                key = (ders, muls)
                v = out.get(key, QQ(0)) + c
                if v:
                    out[key] = v
                elif key in out:
                    del out[key]
            else:
                i = viol
                swapped = w[:i] + [w[i + 1], w[i]] + w[i + 2:]
                stack.append((c, swapped))
                if w[i].var == w[i + 1].var:
                    stack.append((c, w[:i] + w[i + 2:]))
    return out


def normal_form_op(nf: NormalForm, label: str = "nf") -> LinearOperator:
    """Rebuild an operator from a normal form (for spot checks)."""
    terms = []
    for (ders, muls), coeff in sorted(nf.items(), key=lambda kv: (tuple(map(_var_key, kv[0][0])), tuple(map(_var_key, kv[0][1])))):
        actions = tuple([der_(v) for v in ders] + [mul_(v) for v in muls])
        terms.append(OperatorTerm(EulerScalar(coeff), actions))
    return LinearOperator(label, terms)
