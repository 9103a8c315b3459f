"""Weights, dimensions and module bookkeeping for so(m) inside sp(2m).

Highest weights here always have at most two rows (lambda1, lambda2);
that is all the branching of the degree-one symplectic monogenics ever
produces. Dimensions come from three independent routes: the binomial
formula for spherical harmonics, the elimination-of-harmonics formula
for hook weights (lambda2 = 1), and the Weyl product over the positive
roots of so(m), which covers everything and cross-checks the other two.

Verma modules enter only through their lowest weight; the sl(2) raising
and lowering bookkeeping is checked against measured structure constants
on explicit polynomial realizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .rationals import QQ, qq_str
from .polys import (
    Block,
    Poly,
    TriDegree,
    monomial_sort_key,
    poly_scale,
    render_poly,
    tri_degree_of,
    x_,
    y_,
    z_,
    _compositions,
)
from .linalg import RationalMatrix, Subspace, matrix_of, stack_matrices
from .operators import LinearOperator, apply_op, inner_der_der, inner_mul_der


class NonDominantWeight(Exception):
    """Weight outside the dominant cone lambda1 >= lambda2 >= 0."""


class NotLowestWeight(Exception):
    """Vector not annihilated by the lowering operator, or not an
    eigenvector of the grading element."""


@dataclass(frozen=True)
class HighestWeightSO:
    """A dominant so(m) highest weight with at most two nonzero rows."""

    l1: int
    l2: int = 0

    def __post_init__(self):
        if not (self.l1 >= self.l2 >= 0):
            raise NonDominantWeight(f"({self.l1}, {self.l2}) is not dominant")

    def __str__(self) -> str:
        return f"({self.l1},{self.l2})" if self.l2 else f"({self.l1})"


@dataclass(frozen=True)
class VermaLabel:
    """Lowest weight of an sl(2) Verma module for the (R, L) pair."""

    lowest_weight: QQ

    def offset(self, m: int) -> int:
        t = QQ(self.lowest_weight) - QQ(m, 2)
        if t.denominator != 1:
            raise ValueError(f"label {self.lowest_weight} is not m/2 + integer at m={m}")
        return int(t)

    def describe(self, m: int) -> str:
        t = self.offset(m)
        if t == 0:
            return "m/2"
        return f"m/2+{t}" if t > 0 else f"m/2-{-t}"


@dataclass(frozen=True)
class BranchingLine:
    """One line of the degree-one branching table, parametrized by a.

    The so(m) weight is (a, second); the Verma lowest weight is
    m/2 + a + verma_offset; the line is admitted for a >= min_a.
    """

    second: int
    verma_offset: int
    min_a: int

    def weight_at(self, a: int) -> HighestWeightSO:
        return HighestWeightSO(a, self.second)

    def verma_at(self, m: int, a: int) -> VermaLabel:
        return VermaLabel(QQ(m, 2) + a + self.verma_offset)

    def json_row(self) -> Dict[str, object]:
        c = self.verma_offset
        verma = "m/2+a" if c == 0 else (f"m/2+a+{c}" if c > 0 else f"m/2+a-{-c}")
        return {
            "weight": ["a", self.second],
            "verma": verma,
            "range": f"a>={self.min_a}",
        }


# the five lines of the branching table for the degree-one monogenics,
# in display order
BRANCHING_TABLE: Tuple[BranchingLine, ...] = (
    BranchingLine(second=0, verma_offset=-2, min_a=1),
    BranchingLine(second=1, verma_offset=-1, min_a=1),
    BranchingLine(second=0, verma_offset=0, min_a=1),
    BranchingLine(second=1, verma_offset=1, min_a=1),
    BranchingLine(second=0, verma_offset=2, min_a=0),
)


def branching_table_rows() -> List[Dict[str, object]]:
    return [line.json_row() for line in BRANCHING_TABLE]


def components_at_level(t: int) -> List[Tuple[BranchingLine, int, HighestWeightSO]]:
    """Admitted (line, a, weight) triples whose Verma label is m/2 + t."""
    out = []
    for line in BRANCHING_TABLE:
        a = t - line.verma_offset
        if a >= line.min_a:
            out.append((line, a, line.weight_at(a)))
    return out


# ---------------------------------------------------------------------------
# dimensions

def harmonic_dim(m: int, a: int) -> int:
    """dim H_a(R^m), zero for a < 0."""
    if a < 0:
        return 0
    return comb(a + m - 1, m - 1) - comb(a + m - 3, m - 1)


def weyl_dim_so(m: int, l1: int, l2: int = 0) -> int:
    """Weyl dimension product for so(m), weight (l1, l2, 0, ..., 0)."""
    if m < 3:
        raise ValueError(f"need m >= 3, got {m}")
    HighestWeightSO(l1, l2)
    r = m // 2
    if r < 2 and l2 > 0:
        raise ValueError(f"so({m}) has rank {r}, two-row weights need rank >= 2")
    lam = [l1, l2] + [0] * (r - 2) if r >= 2 else [l1]
    rho = [Fraction(m - 2 * i, 2) for i in range(1, r + 1)]
    num = Fraction(1)
    den = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            num *= (lam[i] + rho[i]) - (lam[j] + rho[j])
            den *= rho[i] - rho[j]
            num *= (lam[i] + rho[i]) + (lam[j] + rho[j])
            den *= rho[i] + rho[j]
        if m % 2 == 1:
            num *= lam[i] + rho[i]
            den *= rho[i]
    val = num / den
    if val.denominator != 1:
        raise ArithmeticError(f"Weyl product not integral for ({l1},{l2}) at m={m}")
    return int(val)


def dim_weight(m: int, w: HighestWeightSO) -> int:
    """Dimension of the so(m) module of highest weight w.

    Closed forms for one-row and hook weights; the Weyl product otherwise.
    """
    if w.l2 == 0:
        return harmonic_dim(m, w.l1)
    if w.l2 == 1:
        return m * harmonic_dim(m, w.l1) - harmonic_dim(m, w.l1 + 1) - harmonic_dim(m, w.l1 - 1)
    return weyl_dim_so(m, w.l1, w.l2)


def casimir_scalar(m: int, w: HighestWeightSO) -> QQ:
    """Eigenvalue of the so(m) Casimir on the module of highest weight w."""
    return QQ(w.l1 * (w.l1 + m - 2) + w.l2 * (w.l2 + m - 4))


# ---------------------------------------------------------------------------
# harmonics in a single vector variable, any m >= 2

@lru_cache(maxsize=None)
def zonly_basis(m: int, d: int) -> Tuple[Tuple[int, ...], ...]:
    """Canonically ordered monomial exponents of degree d in m variables."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if d < 0:
        return ()
    return tuple(sorted(_compositions(d, m), key=monomial_sort_key))


@lru_cache(maxsize=None)
def harmonic_space(m: int, a: int) -> Subspace:
    """Kernel of the Laplacian on degree-a polynomials in m variables,
    as a subspace in the coordinates of zonly_basis(m, a).

    Works below the stable range too (m >= 2); the full graded machinery
    is bypassed on purpose so small-m sanity checks stay possible.
    """
    basis = zonly_basis(m, a)
    if a < 2:
        return Subspace.full(len(basis))
    codo = zonly_basis(m, a - 2)
    codo_index = {mono: i for i, mono in enumerate(codo)}
    columns = []
    for mono in basis:
        col: Dict[int, QQ] = {}
        for i, e in enumerate(mono):
            if e >= 2:
                tgt = mono[:i] + (e - 2,) + mono[i + 1:]
                col[codo_index[tgt]] = QQ(e * (e - 1))
        columns.append(col)
    mat = RationalMatrix(len(codo), len(basis), columns)
    return mat.nullspace()


def harmonic_polys(m: int, a: int) -> List[Dict[Tuple[int, ...], QQ]]:
    """Basis of H_a(R^m) as polynomials keyed by exponent tuples."""
    basis = zonly_basis(m, a)
    return [{basis[i]: c for i, c in row.items()} for row in harmonic_space(m, a).rows]


def embed_z(m: int, zpoly: Dict[Tuple[int, ...], QQ]) -> Poly:
    """A polynomial in m variables, reread as a z-only element of P(R^{m x 3})."""
    pad = (0,) * (2 * m)
    return {pad + mono: c for mono, c in zpoly.items()}


@lru_cache(maxsize=None)
def harmonic_polys_embedded(m: int, a: int) -> Tuple[Poly, ...]:
    return tuple(embed_z(m, p) for p in harmonic_polys(m, a))


# ---------------------------------------------------------------------------
# simplicial harmonics in two vector variables, realized in P(R^{m x 3})

_SLOT = {"x": 0, "y": 1, "z": 2}
_MAKER = {"x": x_, "y": y_, "z": z_}


@lru_cache(maxsize=None)
def simplicial_harmonics(m: int, k: int, l: int, first: str = "z", second: str = "x") -> Tuple[Block, Subspace]:
    """H_{k,l}(first; second): degree k in the first variable, l in the
    second, killed by both Laplacians, the mixed Laplacian and the skew
    Euler operator <first, d_second>. Returns the graded block and the
    kernel inside it.
    """
    if first not in _SLOT or second not in _SLOT or first == second:
        raise ValueError(f"bad variable pair ({first!r}, {second!r})")
    if not k >= l >= 0:
        raise NonDominantWeight(f"({k}, {l}) is not dominant")
    deg = [0, 0, 0]
    deg[_SLOT[first]] = k
    deg[_SLOT[second]] = l
    domain = Block(m, [TriDegree(*deg)])
    f, s = _MAKER[first], _MAKER[second]

    constraints = []
    if k >= 2:
        shift = list(deg)
        shift[_SLOT[first]] -= 2
        constraints.append((LinearOperator("lap_first", inner_der_der(f, f, m)), shift))
    if l >= 2:
        shift = list(deg)
        shift[_SLOT[second]] -= 2
        constraints.append((LinearOperator("lap_second", inner_der_der(s, s, m)), shift))
    if k >= 1 and l >= 1:
        shift = list(deg)
        shift[_SLOT[first]] -= 1
        shift[_SLOT[second]] -= 1
        constraints.append((LinearOperator("lap_mixed", inner_der_der(f, s, m)), shift))
    if l >= 1:
        shift = list(deg)
        shift[_SLOT[first]] += 1
        shift[_SLOT[second]] -= 1
        constraints.append((LinearOperator("skew_euler", inner_mul_der(f, s, m)), shift))

    if not constraints:
        return domain, Subspace.full(domain.dim)
    mats = [matrix_of(op, domain, Block(m, [TriDegree(*sh)])) for op, sh in constraints]
    return domain, stack_matrices(mats).nullspace()


# ---------------------------------------------------------------------------
# tensor product decomposition (stable range)

def klimyk_decompose(m: int, a: int, b: int) -> Tuple[Tuple[HighestWeightSO, ...], int]:
    """(a) x (b) as a sum of two-row weights: candidates (a-i+j, b-i-j)
    over 0 <= i <= b, 0 <= j <= b-i; non-dominant candidates are dropped
    and counted. Multiplicity-free in the stable range m >= 6.
    """
    if m < 6:
        raise ValueError(f"stable range needs m >= 6, got {m}")
    if a < 0 or b < 0:
        raise NonDominantWeight(f"({a}), ({b}) must both be dominant")
    kept: List[HighestWeightSO] = []
    dropped = 0
    for i in range(b + 1):
        for j in range(b - i + 1):
            l1, l2 = a - i + j, b - i - j
            if l1 >= l2 >= 0:
                kept.append(HighestWeightSO(l1, l2))
            else:
                dropped += 1
    kept.sort(key=lambda w: (-w.l1, -w.l2))
    return tuple(kept), dropped


# ---------------------------------------------------------------------------
# Casimir certification

_CASIMIR_MATRICES: Dict[Tuple[int, Tuple[TriDegree, ...]], RationalMatrix] = {}


def casimir_matrix(cat: Dict[str, LinearOperator], block: Block) -> RationalMatrix:
    key = (block.m, tuple(block.tri_degrees))
    mat = _CASIMIR_MATRICES.get(key)
    if mat is None:
        mat = matrix_of(cat["Casimir"], block, block)
        _CASIMIR_MATRICES[key] = mat
    return mat


@dataclass
class CasimirCheck:
    ok: bool
    expected: QQ
    offending: Optional[Poly] = None

    def __bool__(self) -> bool:
        return self.ok


def casimir_eigencheck(cat: Dict[str, LinearOperator], block: Block, sub: Subspace, w: HighestWeightSO) -> CasimirCheck:
    """True iff the Casimir acts on every vector of sub as the scalar of
    weight w; on failure the first offending vector rides along."""
    expected = casimir_scalar(block.m, w)
    mat = casimir_matrix(cat, block)
    for row in sub.rows:
        out = mat.mul_vec(row)
        residual = dict(out)
        for c, v in row.items():
            r = residual.get(c, 0) - expected * v
            if r:
                residual[c] = r
            elif c in residual:
                del residual[c]
        if residual:
            from .linalg import vec_to_poly

            return CasimirCheck(False, expected, vec_to_poly(row, block))
    return CasimirCheck(True, expected)


# ---------------------------------------------------------------------------
# Verma module bookkeeping for the (R, L) pair

@dataclass
class VermaCheckResult:
    label: VermaLabel
    rows: List[Dict[str, object]]
    ok: bool


def verma_action_check(cat: Dict[str, LinearOperator], v: Poly, n_max: int) -> VermaCheckResult:
    """Check the raising tower over a lowest weight vector v.

    v must satisfy L v = 0 and script-E v = lambda v; then for each
    n <= n_max the measured relations are
        script-E (R^n v) = (lambda + 2n) R^n v
        L (R^n v)        = -n (lambda + n - 1) R^{n-1} v.
    """
    if not v:
        raise NotLowestWeight("zero vector")
    if apply_op(cat["L"], v):
        raise NotLowestWeight(f"L does not annihilate {render_poly(v)}")
    es = cat["E_script"]
    eigs = set()
    some = next(iter(v))
    mval = len(some) // 3
    for mono in v:
        d = tri_degree_of(mono)
        eigs.add(QQ(d.ky - d.kx + d.kz) + QQ(mval, 2))
    if len(eigs) != 1:
        raise NotLowestWeight(f"{render_poly(v)} mixes script-E eigenvalues {sorted(map(str, eigs))}")
    lam = eigs.pop()
    if apply_op(es, v) != poly_scale(v, lam):
        raise NotLowestWeight(f"script-E is not scalar on {render_poly(v)}")

    rows: List[Dict[str, object]] = []
    ok = True
    prev = v
    cur = v
    for n in range(1, n_max + 1):
        prev = cur
        cur = apply_op(cat["R"], cur)
        e_const = lam + 2 * n
        l_const = -QQ(n) * (lam + n - 1)
        ok_e = apply_op(es, cur) == poly_scale(cur, e_const)
        ok_l = apply_op(cat["L"], cur) == poly_scale(prev, l_const)
        rows.append({
            "n": n,
            "scriptE_constant": qq_str(e_const),
            "L_constant": qq_str(l_const),
            "scriptE_ok": ok_e,
            "L_ok": ok_l,
        })
        ok = ok and ok_e and ok_l
    return VermaCheckResult(VermaLabel(lam), rows, ok)
