"""Named desk-scale groups and the subgroup/action instances used throughout."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .grp import (FiniteGroup, GroupMap, StructureError, conjugation_on_subgroup, direct_product,
                  perm_from_cycles, semidirect_product)


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return FiniteGroup(1, [(0,)], name="S1")
    gens = [perm_from_cycles(n, (1, 2))]
    if n > 2:
        gens.append(perm_from_cycles(n, tuple(range(1, n + 1))))
    return FiniteGroup(n, gens, name=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n < 3:
        return FiniteGroup(max(n, 1), [tuple(range(max(n, 1)))], name=f"A{n}")
    gens = [perm_from_cycles(n, (i, i + 1, i + 2)) for i in range(1, n - 1)]
    return FiniteGroup(n, gens, name=f"A{n}")


def cyclic_group(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup(1, [(0,)], name="C1")
    return FiniteGroup(n, [tuple((i + 1) % n for i in range(n))], name=f"C{n}")


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given order acting on order/2 points."""
    k = order // 2
    rot = tuple((i + 1) % k for i in range(k))
    refl = tuple((-i) % k for i in range(k))
    return FiniteGroup(k, [rot, refl], name=f"D{order}")


def klein_four() -> FiniteGroup:
    return FiniteGroup(4, [perm_from_cycles(4, (1, 2), (3, 4)), perm_from_cycles(4, (1, 3), (2, 4))], name="V4")


def quaternion_group() -> FiniteGroup:
    # right regular action of Q8 = {+-1, +-i, +-j, +-k}
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    table = {("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1", ("i", "j"): "k", ("j", "k"): "i",
             ("k", "i"): "j", ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}

    def mul(a, b):
        sa = a.startswith("-")
        sb = b.startswith("-")
        a0, b0 = a.lstrip("-"), b.lstrip("-")
        if a0 == "1":
            r = b0
        elif b0 == "1":
            r = a0
        else:
            r = table[(a0, b0)]
        neg = sa ^ sb ^ r.startswith("-")
        r = r.lstrip("-")
        return ("-" + r) if neg else r

    gens = [tuple(names.index(mul(x, g)) for x in names) for g in ("i", "j")]
    return FiniteGroup(8, gens, name="Q8")


def matrix_group(p: int, mats, name: str = "") -> FiniteGroup:
    """Matrix group over F_p (p prime) acting on nonzero row vectors, v -> v M."""
    n = len(mats[0])
    vecs = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    index = {v: i for i, v in enumerate(vecs)}
    gens = []
    for M in mats:
        M = np.asarray(M, dtype=np.int64) % p
        gens.append(tuple(index[tuple(int(x) for x in (np.array(v) @ M) % p)] for v in vecs))
    return FiniteGroup(len(vecs), gens, name=name)


def sl2(p: int) -> FiniteGroup:
    return matrix_group(p, [[[1, 1], [0, 1]], [[0, 1], [p - 1, 0]]], name=f"SL2({p})")


def gl2(p: int) -> FiniteGroup:
    nonsq = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1) if p > 2 else 1
    return matrix_group(p, [[[1, 1], [0, 1]], [[0, 1], [p - 1, 0]], [[nonsq, 0], [0, 1]]], name=f"GL2({p})")


def _matrix_conjugation_automorphism(p: int, G: FiniteGroup, M) -> GroupMap:
    """Automorphism x -> M^-1 x M of a matrix group G given on nonzero vectors of F_p^2."""
    n = 2
    vecs = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    index = {v: i for i, v in enumerate(vecs)}
    M = np.asarray(M, dtype=np.int64) % p
    perm_M = np.array([index[tuple(int(x) for x in (np.array(v) @ M) % p)] for v in vecs])
    inv_M = np.empty_like(perm_M)
    inv_M[perm_M] = np.arange(len(perm_M))
    images = []
    for g in G.gens:
        x = G.perms[g].astype(np.int64)
        # apply M^-1, then x, then M
        conj = perm_M[x[inv_M]]
        images.append(G.index(conj))
    return GroupMap(G, G, images)


def sl2_semi_c2(p: int):
    """SL2(p) x| C2 with C2 acting by conjugation with an outer diagonal-type involution."""
    X = sl2(p)
    C2 = cyclic_group(2)
    if p == 3:
        M = [[p - 1, 0], [0, 1]]
    else:
        nonsq = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1)
        M = [[0, 1], [nonsq, 0]]
    phi = _matrix_conjugation_automorphism(p, X, M)
    G, emb_X, emb_C = semidirect_product(X, C2, [phi], name=f"SL2{p}_semi_C2")
    N = G.subgroup_from_members(emb_X.table, name=f"SL2{p}")
    return G, N


def s4_times_ca(a: int) -> FiniteGroup:
    P = direct_product(symmetric_group(4), cyclic_group(a), name=f"S4xC{a}")
    return P


def s3_on_v4():
    """S3 = GL2(2) acting faithfully on C2 x C2, as a list of automorphisms of V4."""
    Z = FiniteGroup(4, [perm_from_cycles(4, (1, 2), (3, 4)), perm_from_cycles(4, (1, 3), (2, 4))], name="C2^2")
    # automorphisms of order 2 and 3 permuting the three involutions
    a, b = Z.gens
    c = int(Z.mul(a, b))
    swap = GroupMap(Z, Z, [b, a])
    rot = GroupMap(Z, Z, [b, c])
    return Z, [swap, rot]


def d8_on_c3sq():
    """Monomial D8 inside GL2(3) acting faithfully on C3 x C3."""
    Z = FiniteGroup(6, [(1, 2, 0, 3, 4, 5), (0, 1, 2, 4, 5, 3)], name="C3^2")
    x, y = Z.gens
    # swap coordinates, and negate the first coordinate
    swap = GroupMap(Z, Z, [y, x])
    neg = GroupMap(Z, Z, [int(Z.inv[x]), y])
    return Z, [swap, neg]


# ---------------------------------------------------------------------------


@dataclass
class Instance:
    """A named group with designated subgroups."""

    name: str
    group: FiniteGroup
    subgroups: dict = field(default_factory=dict)
    notes: str = ""
    automorphisms: list = field(default_factory=list)  # GroupMaps of ``group``


def _with_center(G: FiniteGroup):
    return {"Z": G.center()}


@lru_cache(maxsize=None)
def builtin(name: str) -> Instance:
    """Look up a builtin instance by name (see :func:`builtin_names`)."""
    if name.startswith("C") and name[1:].isdigit():
        return Instance(name, cyclic_group(int(name[1:])))
    if name.startswith("S4xC") and name[4:].isdigit():
        a = int(name[4:])
        G = s4_times_ca(a)
        return Instance(name, G)
    if name.startswith("S") and name[1:].isdigit():
        return Instance(name, symmetric_group(int(name[1:])))
    if name.startswith("A") and name[1:].isdigit():
        return Instance(name, alternating_group(int(name[1:])))
    makers = {
        "V4": lambda: Instance("V4", klein_four()),
        "Q8": lambda: Instance("Q8", quaternion_group()),
        "D8": lambda: Instance("D8", dihedral_group(8)),
        "SL23": lambda: Instance("SL23", sl2(3)),
        "SL25": lambda: Instance("SL25", sl2(5)),
        "GL23": lambda: Instance("GL23", gl2(3)),
        "SL23_semi_C2": lambda: _semi(3),
        "SL25_semi_C2": lambda: _semi(5),
        "C2^2:S3": _s3_v4_instance,
        "C3^2:D8": _d8_c3sq_instance,
        "S3_on_C2^2": lambda: Instance("S3_on_C2^2", *_action(s3_on_v4())),
        "D8_on_C3^2": lambda: Instance("D8_on_C3^2", *_action(d8_on_c3sq())),
    }
    if name not in makers:
        raise KeyError(f"unknown builtin group {name!r}")
    inst = makers[name]()
    inst.name = name
    inst.group.name = name
    return inst


def _action(pair):
    Z, auts = pair
    return Z, {}, "", auts


def _semi(p):
    G, N = sl2_semi_c2(p)
    return Instance(f"SL2{p}_semi_C2", G, {f"SL2{p}": N})


def _action_semidirect(Z, auts, name):
    from .grp import FiniteGroup as _FG

    # the acting group as permutations of Z's elements
    perms = [tuple(int(x) for x in a.table) for a in auts]
    H = _FG(Z.order, perms, name="Out")
    action = [GroupMap(Z, Z, [int(H.perms[h][s]) for s in Z.gens]) for h in H.gens]
    G, emb_Z, _ = semidirect_product(Z, H, action, name=name)
    return Instance(name, G, {"Z": G.subgroup_from_members(emb_Z.table, name="Z")})


def _s3_v4_instance():
    Z, auts = s3_on_v4()
    return _action_semidirect(Z, auts, "C2^2:S3")


def _d8_c3sq_instance():
    Z, auts = d8_on_c3sq()
    return _action_semidirect(Z, auts, "C3^2:D8")


def builtin_names() -> list[str]:
    names = [f"C{n}" for n in range(1, 13)] + ["S3", "S4", "A4", "A5", "V4", "Q8", "D8", "SL23", "SL25",
                                                "GL23", "SL23_semi_C2", "SL25_semi_C2"]
    names += [f"S4xC{a}" for a in range(1, 7)] + ["C2^2:S3", "C3^2:D8", "S3_on_C2^2", "D8_on_C3^2"]
    return names


def group_suite() -> list[str]:
    """The builtin groups used by suite-wide tests (small enough for every pipeline stage)."""
    return ["C1", "C2", "C3", "C4", "C6", "S3", "S4", "A4", "A5", "V4", "Q8", "D8", "SL23", "SL25",
            "GL23", "SL23_semi_C2", "SL25_semi_C2", "S4xC2", "S4xC3", "C2^2:S3", "C3^2:D8"]
