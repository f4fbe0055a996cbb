"""Finite permutation groups with enumerated elements.

Elements of a group are indexed ``0..|G|-1`` in lexicographic order of their
permutation images, so index 0 is always the identity.  Permutations are
composed left to right: ``g*h`` applies ``g`` first, i.e. ``(g*h)[i] = h[g[i]]``.
Conjugation is the right action ``x^g = g^-1 x g``.

A subgroup is itself a :class:`FiniteGroup` whose ``parent`` is set; because the
element order is inherited, ``sub.embed`` is an increasing index map into the
parent.
"""

from __future__ import annotations

import math
import os
import threading
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class StructureError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


DEFAULT_MAX_ORDER = 10_000
SUBGROUP_BOUND = 200
ISOMORPHISM_BOUND = 200
_MULT_TABLE_BOUND = 3000


def max_order() -> int:
    return int(os.environ.get("BT_MAX_ORDER", DEFAULT_MAX_ORDER))


def _compose(p, q):
    """Apply p then q."""
    return q[p]


def _invert(p):
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def perm_from_cycles(n: int, *cycles) -> tuple[int, ...]:
    """Permutation of 0..n-1 from 1-based cycles, e.g. perm_from_cycles(4, (1, 2, 3))."""
    p = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a - 1] = b - 1
    return tuple(p)


# ---------------------------------------------------------------------------
# Schreier-Sims (deterministic), used for the order of a permutation group


def schreier_sims_order(degree: int, gens) -> int:
    """Order of the group generated by ``gens`` via a deterministic Schreier-Sims chain."""
    ident = np.arange(degree, dtype=np.int64)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    gens = [g for g in gens if not np.array_equal(g, ident)]
    if not gens:
        return 1
    base: list[int] = []
    strong: list[list[np.ndarray]] = []
    trans: list[dict] = []

    def moved_point(h):
        return int(np.nonzero(h != ident)[0][0])

    def sift(g, start):
        for level in range(start, len(base)):
            img = int(g[base[level]])
            if img not in trans[level]:
                return g, level
            g = _compose(g, _invert(trans[level][img]))
        return g, len(base)

    def add_strong(h, start):
        _, j = sift(h, start)
        if j == len(base):
            base.append(moved_point(h))
            strong.append([])
            trans.append({})
        for k in range(start, j + 1):
            strong[k].append(h)
            trans[k] = _orbit_transversal(base[k], strong[k], ident)

    add_strong(gens[0], 0)
    for g in gens[1:]:
        h, j = sift(g, 0)
        if not np.array_equal(h, ident):
            add_strong(h, 0)
    changed = True
    while changed:
        changed = False
        for k in reversed(range(len(base))):
            for u in list(trans[k].values()):
                for s in list(strong[k]):
                    us = _compose(u, s)
                    sch = _compose(us, _invert(trans[k][int(us[base[k]])]))
                    h, j = sift(sch, k + 1)
                    if not np.array_equal(h, ident):
                        add_strong(h, k + 1)
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    order = 1
    for t in trans:
        order *= len(t)
    return order


def _orbit_transversal(b, strong, ident):
    trans = {b: ident}
    queue = deque([b])
    while queue:
        pt = queue.popleft()
        for s in strong:
            img = int(s[pt])
            if img not in trans:
                trans[img] = _compose(trans[pt], s)
                queue.append(img)
    return trans


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyClass:
    index: int
    representative: int
    size: int
    element_order: int


class FiniteGroup:
    """A permutation group with all elements enumerated."""

    def __init__(self, degree: int, generators, name: str = "", parent: "FiniteGroup | None" = None,
                 _elements=None):
        self.degree = int(degree)
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != self.degree or sorted(g) != list(range(self.degree)):
                raise StructureError(f"{g} is not a permutation of {self.degree} points")
        self.name = name
        self.parent = parent
        self._lock = threading.RLock()
        if _elements is None:
            _elements = self._enumerate(gens)
        order_idx = np.lexsort(_elements.T[::-1])
        self.perms = np.ascontiguousarray(_elements[order_idx])
        self.order = len(self.perms)
        self._lookup = {row.tobytes(): i for i, row in enumerate(self.perms)}
        # drop identity generators but keep at least the given ones
        self.generator_perms = gens
        self.gens = [self._lookup[np.asarray(g, dtype=self.perms.dtype).tobytes()] for g in gens]
        self.gens = [g for g in self.gens if g != 0] or []
        if parent is not None:
            self.embed = np.array([parent.index(p) for p in self.perms], dtype=np.int64)
        else:
            self.embed = None

    def _enumerate(self, gens):
        dtype = np.int16 if self.degree < 2**15 else np.int32
        ident = np.arange(self.degree, dtype=dtype)
        gl = [np.asarray(g, dtype=dtype) for g in gens]
        seen = {ident.tobytes(): ident}
        frontier = [ident]
        bound = max_order()
        while frontier:
            nxt = []
            for p in frontier:
                for g in gl:
                    q = g[p]
                    k = q.tobytes()
                    if k not in seen:
                        seen[k] = q
                        nxt.append(q)
                        if len(seen) > bound:
                            raise ResourceError(f"group order exceeds the bound {bound} (BT_MAX_ORDER)")
            frontier = nxt
        return np.array(list(seen.values()), dtype=dtype)

    # -- basics
    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order}, degree={self.degree})"

    def __len__(self):
        return self.order

    def index(self, perm) -> int:
        key = np.asarray(perm, dtype=self.perms.dtype).tobytes()
        try:
            return self._lookup[key]
        except KeyError:
            raise StructureError(f"{tuple(perm)} is not an element of {self!r}") from None

    def contains_perm(self, perm) -> bool:
        return np.asarray(perm, dtype=self.perms.dtype).tobytes() in self._lookup

    def perm(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.perms[i])

    @cached_property
    def mult_table(self):
        if self.order > _MULT_TABLE_BOUND:
            return None
        n = self.order
        dt = np.int16 if n < 2**15 else np.int32
        T = np.empty((n, n), dtype=dt)
        keys = self._lookup
        P = self.perms
        for i in range(n):
            prods = P[i][P]  # row j: P[j] then P[i], i.e. j*i
            T[:, i] = [keys[r.tobytes()] for r in prods]
        return T

    def mul(self, i, j):
        T = self.mult_table
        if T is not None:
            return T[i, j]
        if np.ndim(i) == 0 and np.ndim(j) == 0:
            return self._lookup[self.perms[j][self.perms[i]].tobytes()]
        i, j = np.broadcast_arrays(np.asarray(i), np.asarray(j))
        out = np.empty(i.shape, dtype=np.int64)
        for pos in np.ndindex(i.shape):
            out[pos] = self._lookup[self.perms[j[pos]][self.perms[i[pos]]].tobytes()]
        return out

    @cached_property
    def inv(self):
        return np.array([self._lookup[_invert(p).tobytes()] for p in self.perms], dtype=np.int64)

    def conj(self, x, g):
        """x^g = g^-1 x g (arrays allowed)."""
        return self.mul(self.mul(self.inv[g], x), g)

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x = int(self.inv[x])
            k = -k
        r, b = 0, x
        while k:
            if k & 1:
                r = int(self.mul(r, b))
            b = int(self.mul(b, b))
            k >>= 1
        return r

    @cached_property
    def element_orders(self):
        orders = np.zeros(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        k = 1
        remaining = np.ones(self.order, dtype=bool)
        while remaining.any():
            done = remaining & (cur == 0)
            orders[done] = k
            remaining &= ~done
            cur = np.asarray(self.mul(cur, np.arange(self.order)))
            k += 1
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders)) if self.order > 1 else 1

    def is_abelian(self) -> bool:
        gs = self.gens
        return all(self.mul(a, b) == self.mul(b, a) for a in gs for b in gs)

    def chain_order(self) -> int:
        """Order from a stabiliser chain (independent of the enumeration)."""
        return schreier_sims_order(self.degree, [np.array(g) for g in self.generator_perms])

    # -- conjugation
    @cached_property
    def _conj_maps(self):
        idx = np.arange(self.order)
        return [np.asarray(self.conj(idx, g)) for g in self.gens]

    @cached_property
    def _class_data(self):
        if self.order > max_order():
            raise ResourceError(f"group order {self.order} exceeds bound {max_order()}")
        label = -np.ones(self.order, dtype=np.int64)
        raw = []
        for x in range(self.order):
            if label[x] >= 0:
                continue
            orbit = [x]
            label[x] = len(raw)
            i = 0
            while i < len(orbit):
                y = orbit[i]
                for cm in self._conj_maps:
                    z = int(cm[y])
                    if label[z] < 0:
                        label[z] = len(raw)
                        orbit.append(z)
                i += 1
            raw.append(orbit)
        eo = self.element_orders
        keyed = sorted(range(len(raw)), key=lambda c: (int(eo[raw[c][0]]), len(raw[c]), min(raw[c])))
        remap = np.empty(len(raw), dtype=np.int64)
        classes = []
        members = []
        for new, old in enumerate(keyed):
            remap[old] = new
            orb = sorted(raw[old])
            classes.append(ConjugacyClass(new, orb[0], len(orb), int(eo[orb[0]])))
            members.append(np.array(orb, dtype=np.int64))
        return classes, remap[label], members

    @property
    def classes(self) -> list[ConjugacyClass]:
        return self._class_data[0]

    @property
    def class_of(self):
        return self._class_data[1]

    def class_members(self, c: int):
        return self._class_data[2][c]

    @cached_property
    def centralizer_orders(self):
        return np.array([self.order // c.size for c in self.classes], dtype=np.int64)

    def power_map(self, k: int):
        """Class index of x^k for each class."""
        return np.array([self.class_of[self.power(c.representative, k)] for c in self.classes], dtype=np.int64)

    # -- subgroups
    def closure(self, elems) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``elems``."""
        gens = np.unique(np.asarray(list(elems), dtype=np.int64))
        gens = gens[gens != 0]
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        if gens.size == 0:
            return np.array([0], dtype=np.int64)
        while frontier.size:
            prods = np.asarray(self.mul(frontier[:, None], gens[None, :])).ravel()
            new = np.unique(prods[~mask[prods]])
            mask[new] = True
            frontier = new
        return np.nonzero(mask)[0]

    def subgroup(self, elems, name: str = "") -> "FiniteGroup":
        """Subgroup generated by element indices ``elems``."""
        elems = [int(e) for e in elems]
        members = self.closure(elems)
        gens = [self.perms[e] for e in elems] or [self.perms[0]]
        return FiniteGroup(self.degree, gens, name=name, parent=self, _elements=self.perms[members])

    def subgroup_from_members(self, members, name: str = "") -> "FiniteGroup":
        members = np.asarray(sorted(int(m) for m in members), dtype=np.int64)
        gens = minimal_generators(self, members)
        if len(self.closure(gens)) != len(members):
            raise StructureError("members do not form a subgroup")
        return FiniteGroup(self.degree, [self.perms[g] for g in gens] or [self.perms[0]], name=name,
                           parent=self, _elements=self.perms[members])

    def whole(self) -> "FiniteGroup":
        return self.subgroup(self.gens, name=self.name)

    def trivial_subgroup(self) -> "FiniteGroup":
        return self.subgroup([], name="1")

    def is_normal_in(self, G: "FiniteGroup") -> bool:
        """Normality of self (a subgroup of G) under G's generators."""
        emb = self.embedding_into(G)
        mask = np.zeros(G.order, dtype=bool)
        mask[emb] = True
        sg = [emb[g] for g in self.gens]
        return all(mask[G.conj(s, g)] for s in sg for g in G.gens)

    def embedding_into(self, G: "FiniteGroup") -> np.ndarray:
        """Indices in G of this group's elements (G must be an ancestor or share the permutations)."""
        if G is self:
            return np.arange(self.order)
        if self.parent is G:
            return self.embed
        if self.parent is not None:
            try:
                return self.parent.embedding_into(G)[self.embed]
            except StructureError:
                pass
        return np.array([G.index(p) for p in self.perms], dtype=np.int64)

    def member_mask(self, G: "FiniteGroup") -> np.ndarray:
        mask = np.zeros(G.order, dtype=bool)
        mask[self.embedding_into(G)] = True
        return mask

    def center(self) -> "FiniteGroup":
        return self.centralizer(self.gens, name=f"Z({self.name})")

    def centralizer(self, S, name: str = "") -> "FiniteGroup":
        idx = np.arange(self.order)
        mask = np.ones(self.order, dtype=bool)
        for s in S:
            mask &= np.asarray(self.mul(idx, s)) == np.asarray(self.mul(s, idx))
        return self.subgroup_from_members(np.nonzero(mask)[0], name=name)

    def normalizer_contains(self, sub: "FiniteGroup", g: int) -> bool:
        mask = sub.member_mask(self)
        return bool(all(mask[self.conj(s, g)] for s in sub.embedding_into(self)[sub.gens]))

    def stabilizer_in_action(self, action, point, name: str = "") -> "FiniteGroup":
        """Stabiliser of ``point`` for a right action ``action(point, g_index)``."""
        stab = [g for g in range(self.order) if action(point, g) == point]
        return self.subgroup_from_members(stab, name=name)

    def derived_subgroup(self) -> "FiniteGroup":
        idx = np.arange(self.order)
        comms = set()
        for g in range(self.order):
            c = self.mul(self.mul(self.inv[idx], self.inv[g]), self.mul(idx, g))
            comms.update(int(x) for x in np.atleast_1d(c))
        members = self.closure(comms)
        return self.subgroup_from_members(members, name=f"[{self.name},{self.name}]")

    def cosets(self, N: "FiniteGroup"):
        return CosetTransversal(self, N)


# ---------------------------------------------------------------------------


def minimal_generators(G: FiniteGroup, members=None) -> list[int]:
    """A short generating set (greedy, deterministic) of the subgroup with given members."""
    if members is None:
        members = np.arange(G.order)
    members = np.asarray(members, dtype=np.int64)
    if members.size <= 1:
        return []
    eo = G.element_orders
    cand = sorted(members[members != 0].tolist(), key=lambda x: (-int(eo[x]), x))
    gens: list[int] = []
    cur = np.array([0])
    target = members.size
    for c in cand:
        if cur.size == target:
            break
        if np.searchsorted(cur, c) < cur.size and cur[np.searchsorted(cur, c)] == c:
            continue
        gens.append(c)
        cur = G.closure(gens)
    return gens


class CosetTransversal:
    """Right cosets N g of a normal subgroup; representatives are the minimal index, identity first."""

    def __init__(self, G: FiniteGroup, N: FiniteGroup):
        self.G = G
        self.N = N
        emb = N.embedding_into(G)
        self.n_members = emb
        label = -np.ones(G.order, dtype=np.int64)
        reps = []
        for g in range(G.order):
            if label[g] >= 0:
                continue
            coset = np.asarray(G.mul(emb, g))
            label[coset] = len(reps)
            reps.append(g)
        self.reps = np.array(reps, dtype=np.int64)
        self.coset_of = label
        # n-part: g = rep * n  =>  n = rep^-1 g
        self.n_part_parent = np.asarray(G.mul(G.inv[self.reps[label]], np.arange(G.order)))
        lookup = -np.ones(G.order, dtype=np.int64)
        lookup[emb] = np.arange(N.order)
        self.n_part = lookup[self.n_part_parent]
        if np.any(self.n_part < 0):
            raise StructureError("transversal failure: N is not a subgroup of G")

    def __len__(self):
        return len(self.reps)

    def rep_of(self, g: int) -> int:
        return int(self.reps[self.coset_of[g]])


def is_normal(N: FiniteGroup, G: FiniteGroup) -> bool:
    return N.is_normal_in(G)


def quotient(G: FiniteGroup, N: FiniteGroup, name: str = ""):
    """G/N as a permutation group on the cosets, plus the projection as a GroupMap."""
    if not N.is_normal_in(G):
        raise StructureError(f"{N.name or 'N'} is not normal in {G.name or 'G'}")
    T = CosetTransversal(G, N)
    k = len(T)
    gens = []
    for g in G.gens:
        img = T.coset_of[np.asarray(G.mul(T.reps, g))]
        gens.append(tuple(int(x) for x in img))
    if not gens:
        gens = [tuple(range(k))]
    Q = FiniteGroup(k, gens, name=name or f"{G.name}/{N.name}")
    images = [Q.index(gp) for gp in gens] if G.gens else []
    proj = GroupMap(G, Q, images)
    return Q, proj


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> "DirectProduct":
    return DirectProduct(G, H, name=name)


class DirectProduct(FiniteGroup):
    """G x H acting on the disjoint union of the point sets."""

    def __init__(self, G: FiniteGroup, H: FiniteGroup, name: str = ""):
        n1, n2 = G.degree, H.degree
        gens = []
        for g in G.gens:
            gens.append(tuple(G.perm(g)) + tuple(range(n1, n1 + n2)))
        for h in H.gens:
            gens.append(tuple(range(n1)) + tuple(n1 + x for x in H.perm(h)))
        if not gens:
            gens = [tuple(range(n1 + n2))]
        super().__init__(n1 + n2, gens, name=name or f"{G.name}x{H.name}")
        self.factors = (G, H)
        P = self.perms.astype(np.int64)
        self.first = np.array([G.index(row[:n1]) for row in P], dtype=np.int64)
        self.second = np.array([H.index(row[n1:] - n1) for row in P], dtype=np.int64)
        self._pair = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(self.first, self.second))}

    def pair(self, g: int, h: int) -> int:
        return self._pair[(g, h)]


def semidirect_product(K: FiniteGroup, H: FiniteGroup, action, name: str = ""):
    """K x| H where generator H.gens[i] acts on K by the automorphism ``action[i]``.

    ``action`` is a list of GroupMaps K -> K (one per generator of H, in order) and
    the action is on the right: k^h = action_h(k).  The result acts on |K| + |H|
    points (K by right multiplication and automorphisms, H regularly).  Returns the
    group and the two embeddings (K normal, H complement).
    """
    if len(action) != len(H.gens):
        raise StructureError("one automorphism per generator of H is required")
    for phi in action:
        if phi.domain is not K or phi.codomain is not K or not phi.is_bijective():
            raise StructureError("action images must be automorphisms of K")
    nK, nH = K.order, H.order
    gens = []
    kidx = np.arange(nK)
    for k in K.gens:
        img = np.asarray(K.mul(kidx, k))
        gens.append(tuple(int(x) for x in img) + tuple(range(nK, nK + nH)))
    for h, phi in zip(H.gens, action):
        img = phi.table
        himg = np.asarray(H.mul(np.arange(nH), h))
        gens.append(tuple(int(x) for x in img) + tuple(nK + int(x) for x in himg))
    if not gens:
        gens = [tuple(range(nK + nH))]
    G = FiniteGroup(nK + nH, gens, name=name or f"{K.name}:{H.name}")
    if G.order != nK * nH:
        raise StructureError("generator automorphisms do not define an action of H")
    kimgs = [G.index(gens[i]) for i in range(len(K.gens))]
    himgs = [G.index(gens[len(K.gens) + i]) for i in range(len(H.gens))]
    emb_K = GroupMap(K, G, kimgs)
    emb_H = GroupMap(H, G, himgs)
    return G, emb_K, emb_H


class GroupMap:
    """Homomorphism given by generator images; the full table is built and checked."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, gen_images):
        self.domain = domain
        self.codomain = codomain
        self.gen_images = [int(x) for x in gen_images]
        if len(self.gen_images) != len(domain.gens):
            raise StructureError("need one image per domain generator")
        self.table = self._build()

    def _build(self):
        D, C = self.domain, self.codomain
        table = -np.ones(D.order, dtype=np.int64)
        table[0] = 0
        queue = deque([0])
        while queue:
            g = queue.popleft()
            for s, fs in zip(D.gens, self.gen_images):
                gs = int(D.mul(g, s))
                img = int(C.mul(int(table[g]), fs))
                if table[gs] < 0:
                    table[gs] = img
                    queue.append(gs)
                elif table[gs] != img:
                    raise StructureError("generator images do not define a homomorphism")
        return table

    def __call__(self, g):
        return self.table[g]

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and len(np.unique(self.table)) == self.domain.order

    def is_automorphism(self) -> bool:
        return self.domain is self.codomain and self.is_bijective()

    def kernel(self) -> FiniteGroup:
        return self.domain.subgroup_from_members(np.nonzero(self.table == 0)[0], name="ker")

    def image_members(self):
        return np.unique(self.table)

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self then other."""
        return GroupMap(self.domain, other.codomain, [other.table[self.table[g]] for g in self.domain.gens])

    def inverse(self) -> "GroupMap":
        if not self.is_bijective():
            raise StructureError("map is not bijective")
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(len(self.table))
        return GroupMap(self.codomain, self.domain, [inv[c] for c in self.codomain.gens])


def inner_automorphism(G: FiniteGroup, g: int) -> GroupMap:
    """x -> x^g."""
    return GroupMap(G, G, [int(G.conj(s, g)) for s in G.gens])


def conjugation_on_subgroup(G: FiniteGroup, N: FiniteGroup, g: int) -> GroupMap:
    """Automorphism n -> n^g of a normal subgroup N of G."""
    emb = N.embedding_into(G)
    lookup = -np.ones(G.order, dtype=np.int64)
    lookup[emb] = np.arange(N.order)
    imgs = [int(lookup[G.conj(emb[s], g)]) for s in N.gens]
    if min(imgs, default=0) < 0:
        raise StructureError("element does not normalise the subgroup")
    return GroupMap(N, N, imgs)


# ---------------------------------------------------------------------------
# subgroup lattice and isomorphism


def subgroups_up_to(G: FiniteGroup, bound: int = SUBGROUP_BOUND) -> list[FiniteGroup]:
    """All subgroups of G (|G| <= bound), ordered by (order, member list)."""
    if G.order > bound:
        raise ResourceError(f"|G| = {G.order} exceeds the subgroup-listing bound {bound}")
    return [G.subgroup_from_members(m) for m in subgroup_member_lists(G)]


def subgroup_member_lists(G: FiniteGroup) -> list[np.ndarray]:
    def key(members):
        mask = np.zeros(G.order, dtype=bool)
        mask[members] = True
        return np.packbits(mask).tobytes()

    cyclic = {}
    for x in range(G.order):
        m = G.closure([x])
        cyclic.setdefault(key(m), (m, x))
    cyc_list = list(cyclic.values())
    found = {k: m for k, (m, _) in cyclic.items()}
    frontier = [m for m, _ in cyc_list]
    while frontier:
        nxt = []
        for H in frontier:
            hmask = np.zeros(G.order, dtype=bool)
            hmask[H] = True
            hgens = minimal_generators(G, H)
            for C, x in cyc_list:
                if hmask[x]:
                    continue
                J = G.closure(hgens + [x])
                k = key(J)
                if k not in found:
                    found[k] = J
                    nxt.append(J)
        frontier = nxt
    out = list(found.values())
    out.sort(key=lambda m: (len(m), m.tolist()))
    return out


def order_statistics(G: FiniteGroup):
    return (G.order, tuple(sorted(Counter(G.element_orders.tolist()).items())),
            tuple(sorted(c.size for c in G.classes)) if G.order <= max_order() else ())


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, bound: int = ISOMORPHISM_BOUND) -> GroupMap | None:
    """Brute-force isomorphism G -> H via generator images (|G| <= bound)."""
    if G.order != H.order:
        return None
    if G.order > bound:
        raise ResourceError(f"isomorphism testing is limited to order {bound}")
    if order_statistics(G) != order_statistics(H):
        return None
    if G.order == 1:
        return GroupMap(G, H, [])
    gens = minimal_generators(G)
    Gg = G.subgroup(gens)  # same elements; generators = gens
    eo_G, eo_H = G.element_orders, H.element_orders
    cand = [np.nonzero(eo_H == eo_G[g])[0].tolist() for g in gens]

    def attempt(images):
        try:
            f = GroupMap(Gg, H, images)
        except StructureError:
            return None
        return f if f.is_bijective() else None

    def backtrack(i, images):
        if i == len(gens):
            return attempt(images)
        for c in cand[i]:
            f = backtrack(i + 1, images + [c])
            if f is not None:
                return f
        return None

    f = backtrack(0, [])
    if f is None:
        return None
    # re-express on G's own generators
    return GroupMap(G, H, [f.table[Gg.index(G.perms[g])] for g in G.gens])


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Elementary-divisor invariants (prime powers, sorted) of G/[G,G]."""
    D = G.derived_subgroup()
    Q, _ = quotient(G, D)
    inv: list[int] = []
    orders = Q.element_orders
    n = Q.order
    from sympy import factorint

    for p, e in factorint(n).items():
        # number of cyclic factors of order >= p^k is log_p(|Q[p^k]|/|Q[p^(k-1)]|)
        counts = [int(np.sum(np.gcd(orders, p**k) == orders)) for k in range(e + 1)]
        ranks = [round(math.log(counts[k] // counts[k - 1], p)) for k in range(1, e + 1)]
        for k in range(1, e + 1):
            nxt = ranks[k] if k < e else 0
            inv += [p**k] * (ranks[k - 1] - nxt)
    return tuple(sorted(inv))


def element_order(G: FiniteGroup, g: int) -> int:
    return int(G.element_orders[g])


def core_mask(G: FiniteGroup, members) -> np.ndarray:
    """Mask of the normal core of the subgroup with the given members.

    The core is the set of elements whose whole conjugacy class lies in the subgroup.
    """
    hmask = np.zeros(G.order, dtype=bool)
    hmask[np.asarray(members)] = True
    k = len(G.classes)
    inside = np.bincount(G.class_of[hmask], minlength=k)
    sizes = np.array([c.size for c in G.classes])
    full = inside == sizes
    return full[G.class_of]


def large_core_free_subgroup(G: FiniteGroup, pool: int = 40) -> np.ndarray:
    """Members of a core-free subgroup of large order (cyclic subgroups and pairwise joins)."""
    cyc = {}
    for x in range(G.order):
        m = G.closure([x])
        cyc.setdefault(m.tobytes(), m)
    cands = sorted(cyc.values(), key=lambda m: -len(m))
    best = np.array([0], dtype=np.int64)

    def consider(m):
        nonlocal best
        if len(m) > len(best) and G.order % len(m) == 0 and core_mask(G, m).sum() == 1:
            best = m

    for m in cands:
        consider(m)
    top = cands[:pool]
    gens = [minimal_generators(G, m) for m in top]
    for i in range(len(top)):
        for j in range(i + 1, len(top)):
            if len(top[i]) * len(top[j]) <= len(best):
                continue
            consider(G.closure(gens[i] + gens[j]))
    return best


def coset_action(G: FiniteGroup, members):
    """Permutations of the right cosets H x induced by each generator of G."""
    members = np.asarray(members, dtype=np.int64)
    label = -np.ones(G.order, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if label[g] >= 0:
            continue
        label[np.asarray(G.mul(members, g))] = len(reps)
        reps.append(g)
    reps = np.array(reps)
    return [tuple(int(x) for x in label[np.asarray(G.mul(reps, s))]) for s in G.gens]
