"""Inverting a formal map, five ways.

A formal map F(z) = z - H(z) with H of order >= 2 always has a formal
inverse G with F(G(z)) = G(F(z)) = z.  This walkthrough inverts the
classic one-variable map F = z - z^2 (whose inverse is the Catalan
generating series) and a two-variable map, and cross-checks every
algorithm against every other.

Run:  python demos/01_inverting_a_map.py
"""

from forminv import (
    MapF,
    MSeries,
    PolyMap,
    cross_check,
    invert_recurrent,
    jacobi_coefficient,
    lagrange_coefficient,
)

# ---------------------------------------------------------------------------
# One variable: F = z - z^2
# ---------------------------------------------------------------------------
h = PolyMap([MSeries.monomial(1, (2,), 1)])
f = MapF(h)
print("F(z) =", f.map.format())

# `cross_check` runs every applicable whole-map method, times them, and
# insists the results are bit-identical before handing one back.
report = cross_check(f, degree=10)
print(report.to_text())
print()
print("G(z) =", report.inverse.format())
print("(the coefficients 1, 1, 2, 5, 14, ... are the Catalan numbers)")
print()

# The layered recurrence exposes the graded pieces N_[m] individually:
# N_[1] = H and each later layer is a convolution of Jacobians of the
# earlier ones.  o(N_[m]) >= m+1, so finitely many layers matter.
graded = invert_recurrent(f, 6)
for m in range(1, 5):
    print(f"  N_[{m}] =", graded.layer(m).components[0].format())
print()

# Single coefficients are available without computing the whole series:
# a formal-residue formula (always), and a product-form formula when
# every H_i is divisible by z_i.
print("[z^9] G  via residue formula: ", jacobi_coefficient(f, 0, (9,)))
print("[z^9] G  via product formula: ", lagrange_coefficient(f, 0, (9,)))
print()

# ---------------------------------------------------------------------------
# Two variables: H = (z2^2, z1 z2 / 2)
# ---------------------------------------------------------------------------
h2 = PolyMap(
    [
        MSeries.monomial(2, (0, 2), 1),
        MSeries.monomial(2, (1, 1), "1/2"),
    ]
)
f2 = MapF(h2)
print("two-variable example, F =")
print(f2.map.format())
report2 = cross_check(f2, degree=6)
print()
print("inverse through degree 6:")
print(report2.inverse.format())
