"""The deformation z - tH, its transport PDE, and the formal flow.

Writing the inverse of F_t = z - tH as z + t N_t, the family N_t solves

    dN_t/dt = JN_t . N_t,      N_0 = H,

exactly as formal series - a cousin of the inviscid Burgers equation
(and literally that equation when JH is symmetric).  Everything here is
verified symbolically in t: coefficients are polynomials in t, compared
coefficient by coefficient.

Run:  python demos/03_deformation_and_flow.py
"""

from forminv import (
    MapF,
    MSeries,
    PolyMap,
    check_newp,
    deformation_inverse,
    formal_flow,
    pde_residual,
    power_map,
    symmetry_detector,
)

h = PolyMap([MSeries.monomial(1, (2,), 1)])
f = MapF(h)

# ---------------------------------------------------------------------------
# The deformed inverse and its residual
# ---------------------------------------------------------------------------
dinv = deformation_inverse(f, 7)
print("N_t =", dinv.n_t.components[0].format())
res = pde_residual(dinv)
print(
    "transport residual dN/dt - JN.N is zero through degree",
    res.trunc,
    ":",
    all(c.is_zero_through(res.trunc) for c in res.components),
)
print()

# ---------------------------------------------------------------------------
# The formal flow: one series, all integer powers
# ---------------------------------------------------------------------------
fl = formal_flow(f, 6)
print("F(z; t) =", fl.map.components[0].format(param_names=["t"]))
print()
print("specializations of the flow:")
print("  t = 1   ->", fl.at(1).format(), "   (F itself)")
print("  t = -1  ->", fl.at(-1).format(), "   (the inverse)")
print("  t = 2   ->", fl.at(2).format())
print("  F o F   ->", power_map(f, 2, 6).format())
print()

# group law at integer points: flow(a) o flow(b) = flow(a+b)
lhs = fl.at(2).compose(fl.at(-1), cap=6)
print("flow(2) o flow(-1) == flow(1):", lhs.eq_through(fl.at(1), 6))
print()

# ---------------------------------------------------------------------------
# When is the inverse just z + H?  Exactly when JH.H = 0.
# ---------------------------------------------------------------------------
shear = PolyMap([MSeries.monomial(2, (0, 2), 1), MSeries.zero(2)])
print(check_newp(shear, 6).to_text())
print()

# ---------------------------------------------------------------------------
# Gradient maps: symmetric JH makes the transport PDE the Burgers system
# ---------------------------------------------------------------------------
gradient = PolyMap(
    [MSeries.monomial(2, (1, 1), 2), MSeries.monomial(2, (2, 0), 1)]
)
for name, candidate in (("grad(z1^2 z2)", gradient), ("shear", shear)):
    symmetric, note = symmetry_detector(candidate)
    print(f"{name}: symmetric = {symmetric}")
    print(f"   {note}")
