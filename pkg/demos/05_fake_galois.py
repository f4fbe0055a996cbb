"""A fake m-th Galois action on IBr(SL2(3)) inside SL2(3) x| C2, in characteristic 7.

For each m coprime to |N| the recipe picks theta or its complex conjugate according
to m mod r_theta; every orbit then gets a pair of projective representations that is
checked entry by entry.  Here r_theta = exp(Z(SL2(3))) = 2 and every admissible m is
odd, so the map is the identity throughout; the content is in the witnesses.
"""

import math

from brauertriples.builtins import builtin
from brauertriples.fakegal import CandidateRecipe, FakeGaloisContext, verify_fake_galois

inst = builtin("SL23_semi_C2")
G, N = inst.group, inst.subgroups["SL23"]
ctx = FakeGaloisContext(G, N, 7)
print(f"IBr(N) has {len(ctx.ibr)} members in {len(ctx.orbits)} G-orbits")

for m in [m for m in range(1, 48) if math.gcd(m, N.order) == 1]:
    res = verify_fake_galois(G, N, 7, m, context=ctx)
    alphas = sorted({o.witness.alpha_order for o in res.orbits})
    print(f"m = {m:2d}: {type(res).__name__}, map {res.perm}, factor set orders {alphas}")

# a table that swaps a stable character with a moved one cannot be equivariant
stable = next(i for i, t in enumerate(ctx.ibr) if len(next(o for o in ctx.orbits if i in o)) == 1)
moved = next(i for o in ctx.orbits if len(o) > 1 for i in o)
table = list(range(len(ctx.ibr)))
table[stable], table[moved] = moved, stable
bad = verify_fake_galois(G, N, 7, 5, CandidateRecipe("table", table=dict(enumerate(table))), context=ctx)
print("scrambled table:", bad.reason)
