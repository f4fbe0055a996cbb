"""Every subgroup of S4 x Ca as G2 x| H1, and where that description breaks.

The audit decomposes each subgroup U by Goursat's lemma and looks for an explicit
isomorphism U = G2 x| H1.  For a in {2, 4, 6} some cyclic subgroups have
G1 = C4, G2 = C2 and H1/H2 = C2; a cyclic group is never a semidirect product of
two groups of even order, so these are genuine exceptions.
"""

from brauertriples.goursat import check_corollary_s4

for a in range(1, 7):
    rep = check_corollary_s4(a)
    print(f"a = {a}: {rep.subgroups} subgroups, {len(rep.failures)} exceptions, "
          f"V4 normal whenever A4 <= G1: {not rep.v4_failures}")
    for f in rep.failures:
        print(f"    U #{f['subgroup']} of order {f['order']}: G1 = {f['G1']}, G2 = {f['G2']}, "
              f"|H1| = {f['H1']}, |H2| = {f['H2']}")
