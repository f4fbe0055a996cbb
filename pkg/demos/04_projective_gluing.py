"""Projective representations attached to character triples, and gluing along G = H1 H2.

The glued factor set is alpha(h1 h2, h1' h2') = lambda_h2(h1') alpha2(h2, h2').  The
variant with alpha2 inverted agrees only when alpha2 has order at most 2, which the
last column makes visible.
"""

from brauertriples.cases import glue_cases, two_step_glue

for case in glue_cases():
    r = case.run()
    print(f"{case.name:24s} |alpha| = {r.alpha.order()}  |alpha2| = {r.alpha2.order()}  "
          f"cocycle {r.alpha.verify_cocycle()}  formula {r.formula_holds}  inverted variant {r.stated_formula_holds}")

steps = two_step_glue()
final = steps[-1].P.factor_set
print(f"two-step gluing on a group of order {final.group.order}: alpha order {final.order()}, "
      f"alpha^4 trivial {final.power(4).is_trivial()}")
