"""
An orthogonal collection on a cubic surface, numerically
========================================================

The toric surface X with rays (49,-9), (-5,1), (-5,-9) has three class T
points.  Splitting each into Wahl points gives a surface Z0 with nine
singular points; a sequence of divisors on Z0 satisfies the hypotheses of the
existence theorem one point at a time, and the resulting Chern class ledgers
have Euler pairings forming identity matrices block by block.
"""

from orthocoll import (
    Fan2,
    MBlock,
    QDivisor,
    SurfaceNumerics,
    canonical_class,
    check_main_hypotheses,
    chi_matrix,
    classify_fan,
    m_resolve_fan,
    make_block_ledgers,
    minimal_resolution,
    mumford_intersect,
    normalize_divisor,
    stability_residue,
)

X = Fan2(((49, -9), (-5, 1), (-5, -9)), ("rho1", "rho2", "rho4"))
for cone, s, t in classify_fan(X):
    print(cone, s, t)

mr = m_resolve_fan(X)
print("inserted rays:", [v for _, v in mr.inserted])

# Name the refined rays rho1..rho9 in counterclockwise order.
Z0 = Fan2(mr.fan.rays, tuple(f"rho{i}" for i in range(1, 10)))
ren = dict(zip(mr.fan.names, Z0.names))
s = minimal_resolution(Z0)
K = canonical_class(s)
print("K^2 =", mumford_intersect(s, K, K))

# D_1 = 81 rho1, D_k = D_{k-1} + rho_k.
D = [QDivisor({"rho1": 81})]
for k in range(2, 10):
    D.append(D[-1] + QDivisor.curve(f"rho{k}"))
for k, Dk in enumerate(D, start=1):
    h = check_main_hypotheses(s, Dk)
    print(f"D_{k}:", " ".join(h.label(c) for c in range(9)))

num = SurfaceNumerics.from_model(s)
for b in mr.blocks:
    block = MBlock(b.cone, b.t, tuple(ren[r] for r in b.rays), b.cones)
    N = normalize_divisor(s, D[block.cones[0]], block)
    L = make_block_ledgers(s, N.divisor, block)
    print(f"block (d,n,a)=({b.t.d},{b.t.n},{b.t.a}): m={N.m}, chi =", chi_matrix(L, num))
    print("   stability residues:", [stability_residue(s, x, b.t) for x in L])
