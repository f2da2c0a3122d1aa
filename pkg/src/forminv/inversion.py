"""Formal inversion of canonical maps F = z - H, o(H) >= 2.

Five independent algorithms compute the inverse G (F(G) = G(F) = z):

* ``fixed``     - fixed-point iteration of G = z + H(G); the reference
                  oracle, needing nothing but composition.
* ``recurrent`` - graded layers N_[1] = H,
                  N_[m] = 1/(m-1) * sum_{k+l=m} JN_[k] . N_[l],
                  G = z + sum_m N_[m].
* ``homog``     - differential-free recurrence through the symmetric
                  d-linear form B with B(z,...,z) = H; homogeneous H only.
* ``ag``        - the residue-free derivative expansion
                  G_i = sum_m (D^m / m!) (z_i j(F) H^m).
* ``bcw``       - the rooted-tree expansion G = z + sum_T P_T.

plus two coefficient-at-a-time formulas (``jacobi`` via formal residues,
``lagrange`` via the product form, applicable when z_i | H_i).

Truncation cutoffs are finite consequences of the order estimates
o(N_[m]) >= m+1, o(P_T) >= |T|+1 and o(H^m) >= 2|m|; each method states its
cutoff next to the loop that applies it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import (
    DimensionMismatch,
    DivisibilityError,
    HomogeneityError,
    MethodDisagreement,
    TruncationError,
)
from .laurent import laurent_inv_power, residue
from .rat import ONE, Rat, ZERO
from .series import (
    INF,
    MapF,
    MSeries,
    PolyMap,
    first_difference,
    jacobian_det,
    mat_vec,
    series_det,
    unit_inverse,
)
from .trees import TreePolyCache, enumerate_trees


# -- fixed-point oracle --------------------------------------------------------


def invert_fixed_point(f: MapF, degree: int) -> PolyMap:
    """Inverse through `degree` by iterating G <- z + H(G); each pass fixes
    one more degree layer since o(H) >= 2, so at most `degree` passes."""
    ident = PolyMap.identity(f.n, trunc=INF)
    g = PolyMap.identity(f.n, trunc=degree)
    for _ in range(degree):
        nxt = (ident + f.h.compose(g, cap=degree)).truncate(degree)
        if all(a.terms == b.terms for a, b in zip(nxt.components, g.components)):
            return nxt
        g = nxt
    return g


# -- graded layers -------------------------------------------------------------


@dataclass(frozen=True)
class GradedInverse:
    """Layers N_[1], ..., N_[M] with o(N_[m]) >= m+1 and, for polynomial H,
    deg N_[m] <= (deg H - 1)m + 1.  Summing the layers on top of z gives the
    inverse."""

    h: PolyMap
    layers: tuple
    trunc: float

    def layer(self, m: int) -> PolyMap:
        """1-based layer access; layers beyond the computed range are zero
        through the certified truncation."""
        if m < 1:
            raise IndexError("layers are indexed from 1")
        if m <= len(self.layers):
            return self.layers[m - 1]
        return PolyMap.zero(self.h.n, self.trunc)

    def inverse_map(self) -> PolyMap:
        g = PolyMap.identity(self.h.n, trunc=self.trunc)
        for layer in self.layers:
            g = g + layer
        return g.truncate(self.trunc)


def recurrent_layers(h: PolyMap, count: int, cap=None) -> list[PolyMap]:
    """N_[1] = H; N_[m] = 1/(m-1) sum_{k+l=m, k,l>=1} JN_[k] . N_[l].

    With cap=None and polynomial H the layers are exact polynomials."""
    if count < 1:
        return []
    first = h if cap is None else h.truncate(cap)
    layers = [first]
    jacs = [first.jacobian()]
    for m in range(2, count + 1):
        acc: Optional[PolyMap] = None
        for k in range(1, m):
            l = m - k
            term = PolyMap(mat_vec(jacs[k - 1], layers[l - 1].components, cap=cap))
            acc = term if acc is None else acc + term
        layer = acc.scale(Rat(1, m - 1))
        layers.append(layer)
        jacs.append(layer.jacobian())
    return layers


def invert_recurrent(f: MapF, degree: int) -> GradedInverse:
    """Layers m <= degree-1 suffice: o(N_[m]) >= m+1, so later layers sit
    entirely above the working degree."""
    layers = recurrent_layers(f.h, degree - 1, cap=degree)
    return GradedInverse(f.h, tuple(layers), degree)


# -- homogeneous recurrence via the symmetric multilinear form ------------------


class BForm:
    """The symmetric d-linear form of a homogeneous degree-d map H,
    normalized so that B(z, ..., z) = H(z).

    Evaluation is by polarization coefficient extraction: the coefficient
    of the multilinear term in H(lambda_1 U^1 + ... + lambda_d U^d) equals
    d! B(U^1, ..., U^d), extracted with the inclusion-exclusion identity
    d! B = sum over nonempty S of (-1)^{d-|S|} H(sum_{j in S} U^j).
    """

    def __init__(self, h: PolyMap):
        d = h.homogeneous_degree()
        if d is None or d < 2:
            raise HomogeneityError(
                "the multilinear form needs a homogeneous map of degree >= 2"
            )
        self.h = h
        self.d = d
        self.n = h.n
        self._dfact = math.factorial(d)

    def apply(self, args: Sequence[PolyMap], cap=None) -> PolyMap:
        if len(args) != self.d:
            raise DimensionMismatch(
                f"form of arity {self.d} applied to {len(args)} arguments"
            )
        total: Optional[PolyMap] = None
        for mask in range(1, 1 << self.d):
            u: Optional[PolyMap] = None
            for j in range(self.d):
                if mask >> j & 1:
                    u = args[j] if u is None else u + args[j]
            val = self.h.compose(u, cap=cap)
            if (self.d - mask.bit_count()) % 2:
                val = -val
            total = val if total is None else total + val
        return total.scale(Rat(1, self._dfact))


def b_form_apply(form: BForm, args: Sequence[PolyMap], cap=None) -> PolyMap:
    return form.apply(args, cap=cap)


def _partitions_into(parts: int, total: int):
    """Non-decreasing tuples of `parts` non-negative ints summing to total."""

    def rec(remaining, slots, minimum):
        if slots == 1:
            if remaining >= minimum:
                yield (remaining,)
            return
        for first in range(minimum, remaining // slots + 1):
            for rest in rec(remaining - first, slots - 1, first):
                yield (first,) + rest

    yield from rec(total, parts, 0)


def invert_homogeneous(
    f: MapF, layer_count: Optional[int] = None, degree: Optional[int] = None
) -> GradedInverse:
    """Differential-free recurrence for homogeneous H of degree d >= 2:
    N_[0] = z, N_[1] = H,
    N_[m+1] = sum over d-tuples k_1 + ... + k_d = m of B(N_[k_1], ..., N_[k_d]).

    Layer m is homogeneous of degree (d-1)m + 1, so for a working degree D
    only layers with (d-1)m + 1 <= D are needed.  Tuples are grouped by
    sorted multiset (the form is symmetric) with multinomial multiplicity.
    """
    form = BForm(f.h)
    d = form.d
    if layer_count is None:
        if degree is None:
            raise ValueError("provide layer_count or degree")
        layer_count = max((degree - 1) // (d - 1), 1)
    by_index = [PolyMap.identity(f.n, trunc=INF), f.h]  # N_[0], N_[1]
    for m in range(1, layer_count):
        acc: Optional[PolyMap] = None
        for multiset in _partitions_into(d, m):
            mult = math.factorial(d)
            for _, run in _run_lengths(multiset):
                mult //= math.factorial(run)
            val = form.apply([by_index[k] for k in multiset]).scale(mult)
            acc = val if acc is None else acc + val
        by_index.append(acc)
    trunc = degree if degree is not None else (d - 1) * (layer_count + 1)
    return GradedInverse(f.h, tuple(by_index[1:]), trunc)


def _run_lengths(values):
    out = []
    for v in values:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return [(v, r) for v, r in out]


# -- derivative expansion --------------------------------------------------------


def _graded_exponents(n, max_total):
    def of_degree(vars_left, total):
        if vars_left == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in of_degree(vars_left - 1, total - first):
                yield (first,) + rest

    for total in range(max_total + 1):
        yield from of_degree(n, total)


def invert_abhyankar_gurjar(f: MapF, degree: int) -> PolyMap:
    """G_i = sum over multi-indices m of (D^m / m!) (z_i j(F) H^m).

    Since o(H^m) >= 2|m| and each derivative lowers degree by one, indices
    with |m| > degree contribute nothing through the working degree; the
    sum is cut there.  H^m and j(F) H^m are built incrementally in graded
    order, each power certified one degree beyond its own cutoff.
    """
    n = f.n
    jf = jacobian_det(f.map)
    acc = [MSeries.zero(n, degree) for _ in range(n)]
    powers = {(0,) * n: MSeries.const(n, ONE)}
    for m in _graded_exponents(n, degree):
        total = sum(m)
        if total:
            i = next(j for j, k in enumerate(m) if k)
            prev = m[:i] + (m[i] - 1,) + m[i + 1 :]
            base = powers.get(prev)
            powers[m] = (
                base.mul(f.h.components[i], cap=degree + total)
                if base is not None and not base.is_zero()
                else MSeries.zero(n, degree + total)
            )
        hpow = powers[m]
        if hpow.is_zero():
            continue
        q = jf.mul(hpow, cap=degree + total)
        if q.is_zero():
            continue
        inv_mfact = Rat(1, math.prod(math.factorial(k) for k in m))
        for i in range(n):
            term = q.mul_monomial(_unit_exp(n, i))
            for axis, reps in enumerate(m):
                for _ in range(reps):
                    term = term.diff(axis)
            acc[i] = acc[i] + term.scale(inv_mfact).truncate(degree)
    return PolyMap(acc).truncate(degree)


def _unit_exp(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


# -- rooted-tree expansion ---------------------------------------------------------


def invert_bcw(f: MapF, degree: int) -> PolyMap:
    """G = z + sum over trees of P_T; since o(P_T) >= |T| + 1, only trees
    with at most degree-1 vertices contribute.  Isomorphic subtrees share
    their labeled sums through a common cache."""
    n = f.n
    acc = [MSeries.zero(n, degree) for _ in range(n)]
    if degree >= 2:
        cache = TreePolyCache(f.h, cap=degree)
        by_size = enumerate_trees(degree - 1)
        for size in range(1, degree):
            for tree in by_size[size]:
                w = Rat(1, tree.aut)
                for i in range(n):
                    q = cache.labeled_root_sum(tree, i)
                    if q.is_zero():
                        continue
                    acc[i] = acc[i] + q.scale(w)
    ident = PolyMap.identity(n, trunc=degree)
    return (ident + PolyMap(acc)).truncate(degree)


# -- coefficient formulas -----------------------------------------------------------


def jacobi_coefficient(f: MapF, i: int, k: Sequence[int]) -> Rat:
    """[z^k] G_i as the formal residue of j(F) F^{-k-1} z_i."""
    n = f.n
    k = tuple(k)
    if len(k) != n or any(x < 0 for x in k):
        raise DimensionMismatch(f"bad coefficient index {k} for n={n}")
    if not 0 <= i < n:
        raise DimensionMismatch(f"component {i} out of range")
    weight = jacobian_det(f.map).mul_monomial(_unit_exp(n, i))
    total = sum(k)
    if weight.trunc < total:
        raise TruncationError(
            f"need j(F) z_i through degree {total}, certified {weight.trunc}"
        )
    expansion = laurent_inv_power(f, k, window=-n - 1)
    product = expansion.mul_series(weight, window=-n)
    return residue(product)


def _quotient_by_variable(h: MSeries, i: int) -> MSeries:
    out = {}
    for e, c in h.terms.items():
        if e[i] < 1:
            raise DivisibilityError(
                f"H_{i+1} has a term {e} not divisible by z_{i+1}; "
                "the product-form coefficient formula does not apply "
                "(use jacobi_coefficient)"
            )
        out[e[:i] + (e[i] - 1,) + e[i + 1 :]] = c
    trunc = h.trunc if h.trunc == INF else h.trunc - 1
    return MSeries(h.n, trunc, out, h.nparams)


def lagrange_coefficient(f: MapF, i: int, k: Sequence[int]) -> Rat:
    """[z^k] G_i by the product-form coefficient formula, for maps whose
    components satisfy z_i | H_i.  With h_i = H_i / z_i and
    f_i = 1/(1 - h_i):

        [z^k] G_i = [w^k] det(delta_ij - w_i f_i dh_i/dw_j) w_i f^k
    """
    n = f.n
    k = tuple(k)
    if len(k) != n or any(x < 0 for x in k):
        raise DimensionMismatch(f"bad coefficient index {k} for n={n}")
    if not 0 <= i < n:
        raise DimensionMismatch(f"component {i} out of range")
    work = sum(k)
    hs = [_quotient_by_variable(f.h.components[j], j) for j in range(n)]
    one = MSeries.const(n, ONE)
    fs = [unit_inverse((one - h).truncate(max(work, 0)), work) for h in hs]
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            entry = MSeries.const(n, ONE if r == c else ZERO)
            corr = fs[r].mul(hs[r].diff(c), cap=work).mul_monomial(_unit_exp(n, r))
            row.append(entry - corr.truncate(work))
        rows.append(row)
    det = series_det(rows, cap=work)
    expr = det.mul_monomial(_unit_exp(n, i))
    for j in range(n):
        for _ in range(k[j]):
            expr = expr.mul(fs[j], cap=work)
    return expr.terms.get(k, ZERO)


# -- registry and cross-checking -----------------------------------------------------


def _assemble_from_coefficients(f: MapF, degree: int, coeff: Callable) -> PolyMap:
    n = f.n
    comps = []
    for i in range(n):
        terms = {}
        for k in _graded_exponents(n, degree):
            c = coeff(f, i, k)
            if c:
                terms[k] = c
        comps.append(MSeries(n, degree, terms))
    return PolyMap(comps)


METHODS: dict[str, Callable[[MapF, int], PolyMap]] = {
    "fixed": invert_fixed_point,
    "recurrent": lambda f, d: invert_recurrent(f, d).inverse_map(),
    "homog": lambda f, d: invert_homogeneous(f, degree=d).inverse_map(),
    "ag": invert_abhyankar_gurjar,
    "bcw": invert_bcw,
    "jacobi": lambda f, d: _assemble_from_coefficients(f, d, jacobi_coefficient),
    "lagrange": lambda f, d: _assemble_from_coefficients(f, d, lagrange_coefficient),
}

# methods that return the whole inverse map at comparable cost; the
# coefficient formulas are opt-in since they recompute per coefficient
MAP_METHODS = ("fixed", "recurrent", "homog", "ag", "bcw")


def applicable_methods(f: MapF, names: Optional[Sequence[str]] = None) -> list[str]:
    """Filter a requested method list down to those whose preconditions the
    map satisfies (homogeneity for `homog`, divisibility for `lagrange`)."""
    names = list(names) if names is not None else list(MAP_METHODS)
    out = []
    d = f.h.homogeneous_degree()
    for name in names:
        if name not in METHODS:
            raise KeyError(f"unknown method {name!r}")
        if name == "homog" and (d is None or d < 2):
            continue
        if name == "lagrange" and not _lagrange_applicable(f):
            continue
        out.append(name)
    return out


def _lagrange_applicable(f: MapF) -> bool:
    return all(
        e[j] >= 1
        for j, comp in enumerate(f.h.components)
        for e in comp.terms
    )


@dataclass
class MethodRun:
    name: str
    millis: float
    terms: int


@dataclass
class CrossCheckReport:
    degree: int
    runs: list[MethodRun] = field(default_factory=list)
    inverse: Optional[PolyMap] = None

    def method_names(self):
        return [r.name for r in self.runs]

    def to_text(self) -> str:
        lines = [f"cross-check through degree {self.degree}:"]
        for r in self.runs:
            lines.append(f"  {r.name:10s} {r.millis:10.2f} ms  {r.terms} terms")
        lines.append(f"  methods agree: {', '.join(self.method_names())}")
        return "\n".join(lines)


def cross_check(
    f: MapF, degree: int, methods: Optional[Sequence[str]] = None
) -> CrossCheckReport:
    """Run the selected methods (default: every applicable whole-map
    method), require bit-identical inverses through `degree`, and verify
    F(G) = G(F) = z.  Raises MethodDisagreement naming the first differing
    coefficient otherwise."""
    names = applicable_methods(f, methods)
    if not names:
        raise ValueError("no applicable methods selected")
    report = CrossCheckReport(degree=degree)
    results: list[PolyMap] = []
    for name in names:
        start = time.perf_counter()
        g = METHODS[name](f, degree).truncate(degree)
        elapsed = (time.perf_counter() - start) * 1000.0
        report.runs.append(
            MethodRun(name, elapsed, sum(len(c.terms) for c in g.components))
        )
        results.append(g)
    base = results[0]
    for name, g in zip(names[1:], results[1:]):
        _require_equal(base, g, degree, names[0], name)
    fg = f.map.compose(base, cap=degree)
    if not fg.is_identity_through(degree):
        raise MethodDisagreement(
            f"F(G) differs from the identity through degree {degree}"
        )
    gf = base.compose(f.map, cap=degree)
    if not gf.is_identity_through(degree):
        raise MethodDisagreement(
            f"G(F) differs from the identity through degree {degree}"
        )
    report.inverse = base
    return report


def _require_equal(a: PolyMap, b: PolyMap, degree, name_a, name_b):
    for i, (ca, cb) in enumerate(zip(a.components, b.components)):
        diff = first_difference(ca, cb, through=degree)
        if diff is not None:
            exp, va, vb = diff
            raise MethodDisagreement(
                f"methods {name_a!r} and {name_b!r} disagree at component "
                f"{i + 1}, exponent {exp}: {va} vs {vb}"
            )
