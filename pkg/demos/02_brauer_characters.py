"""Irreducible Brauer characters and decomposition matrices for a few small groups."""

from brauertriples.builtins import builtin
from brauertriples.modrep import decomposition_matrix, irr_brauer, regular_classes

for name, ell in [("A5", 2), ("A5", 3), ("SL23", 2), ("SL25", 5), ("GL23", 3)]:
    G = builtin(name).group
    ibr = irr_brauer(G, ell)
    print(f"{name} mod {ell}: {len(regular_classes(G, ell))} regular classes, degrees {sorted(b.degree for b in ibr)}")

# rows are ordinary characters, columns Brauer characters
print("decomposition matrix of A5 mod 2:")
print(decomposition_matrix(builtin("A5").group, 2))
