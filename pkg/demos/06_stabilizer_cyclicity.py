"""Stabilisers of linear characters of an abelian group under a group of automorphisms."""

from brauertriples.builtins import d8_on_c3sq, s3_on_v4
from brauertriples.fakegal import orbit_stabilizer_cyclicity

for label, (Z, auts) in [("S3 on C2^2", s3_on_v4()), ("D8 on C3^2", d8_on_c3sq())]:
    rep = orbit_stabilizer_cyclicity(Z, auts)
    orders = sorted(r.stabilizer_order for r in rep.rows if not r.trivial)
    print(f"{label}: acting group of order {rep.acting_order}, nontrivial stabiliser orders {orders}, "
          f"all cyclic {rep.nontrivial_all_cyclic}")
