"""Finite fields on Conway polynomials and the lift of l'-roots of unity to C."""

from brauertriples.gf import LiftConvention, conway_polynomial, field_of, root_order

for p, d in [(2, 4), (3, 2), (7, 2)]:
    F = field_of(p, d)
    print(f"{F}: Conway polynomial {conway_polynomial(p, d)}, generator order {root_order(F.element(F.generator))}")

# the chosen primitive 3rd root in F_4 embeds to the chosen one in F_16
small, big = field_of(2, 2), field_of(2, 4)
print("embedding respects chosen roots:", big.embed(small, small.root_of_unity(3)) == big.root_of_unity(3))

# lifting is a group homomorphism onto complex roots of unity
conv = LiftConvention(7)
F = field_of(7, 2)
x = F.element(F.root_of_unity(48))
print("lift of a primitive 48th root:", conv.lift(x), "=", complex(conv.lift(x)))
print("lift(x^5) == lift(x)^5:", conv.lift(x ** 5) == conv.lift(x) ** 5)
