"""Normal pairs (G, N) shared by the test modules."""

from functools import lru_cache

from brauertriples.builtins import builtin, dihedral_group, quaternion_group, symmetric_group, alternating_group
from brauertriples.cases import _even_classes, _sub


def _q8_in_sl23():
    SL = builtin("SL23").group
    Q8 = SL.subgroup_from_members([g for g in range(SL.order) if SL.element_orders[g] in (1, 2, 4)], name="Q8")
    return SL, Q8


def _a4_in_s4():
    S4 = symmetric_group(4)
    return S4, _sub(S4, lambda g: S4.class_of[g] in _even_classes(S4), "A4")


def _v4_in_a4():
    A4 = alternating_group(4)
    return A4, A4.subgroup_from_members([g for g in range(A4.order) if A4.element_orders[g] in (1, 2)], name="V4")


def _semi(p):
    inst = builtin(f"SL2{p}_semi_C2")
    return inst.group, inst.subgroups[f"SL2{p}"]


@lru_cache(maxsize=None)
def small_quotient_pairs():
    """(name, G, N) with |G/N| <= 4."""
    D8 = dihedral_group(8)
    Q8 = quaternion_group()
    GL = builtin("GL23").group
    out = [("D8/Z", D8, D8.center()), ("Q8/Z", Q8, Q8.center()), ("SL23/Q8",) + _q8_in_sl23(),
           ("S4/A4",) + _a4_in_s4(), ("A4/V4",) + _v4_in_a4(), ("GL23/SL23", GL, GL.derived_subgroup()),
           ("SL23:C2/SL23",) + _semi(3)]
    D8c4 = D8.subgroup([D8.gens[0]], name="C4")
    out.append(("D8/C4", D8, D8c4))
    return out


@lru_cache(maxsize=None)
def abelian_quotient_pairs():
    """(name, G, N) with G/N abelian."""
    out = list(small_quotient_pairs())
    out.append(("SL25:C2/SL25",) + _semi(5))
    S4xC2 = builtin("S4xC2").group
    out.append(("S4xC2/S4xC2'", S4xC2, S4xC2.derived_subgroup()))
    for name in ("C2^2:S3", "C3^2:D8"):
        inst = builtin(name)
        G = inst.group
        out.append((f"{name}/derived", G, G.derived_subgroup()))
    return out
