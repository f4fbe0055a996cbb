"""Group descriptions in the versioned JSON format "v1" and the loader used by the command line.

Schema::

    {"format": "brauertriples-group", "version": "v1",
     "name": str, "degree": n,
     "generators": [[images of 0..n-1], ...],
     "normal_subgroups": {name: [[images], ...], ...},      # optional, by generators
     "automorphisms": [[image of each generator as a permutation], ...]}   # optional

Points are 0-based.  An automorphism is given by the images of the group's generators.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .builtins import Instance, builtin
from .grp import FiniteGroup, GroupMap, StructureError

FORMAT = "brauertriples-group"
VERSION = "v1"


class GroupFormatError(ValueError):
    pass


def _perm(G: FiniteGroup, i: int) -> list[int]:
    return [int(x) for x in G.perms[i]]


def instance_to_json(inst: Instance) -> dict:
    G = inst.group
    out = {"format": FORMAT, "version": VERSION, "name": inst.name, "degree": G.degree,
           "generators": [list(g) for g in G.generator_perms]}
    subs = {}
    for name, H in inst.subgroups.items():
        emb = H.embedding_into(G)
        subs[name] = [_perm(G, int(emb[g])) for g in H.gens]
    if subs:
        out["normal_subgroups"] = subs
    if inst.automorphisms:
        out["automorphisms"] = [[_perm(G, int(a.table[g])) for g in G.gens] for a in inst.automorphisms]
    return out


def instance_from_json(obj: dict) -> Instance:
    if not isinstance(obj, dict):
        raise GroupFormatError("a group description must be a JSON object")
    if obj.get("version", VERSION) != VERSION:
        raise GroupFormatError(f"unsupported group format version {obj.get('version')!r}")
    for key in ("degree", "generators"):
        if key not in obj:
            raise GroupFormatError(f"missing key {key!r}")
    try:
        G = FiniteGroup(int(obj["degree"]), obj["generators"], name=str(obj.get("name", "")))
        subs = {}
        for name, gens in obj.get("normal_subgroups", {}).items():
            subs[name] = G.subgroup([G.index(np.asarray(g)) for g in gens], name=name)
        auts = []
        for images in obj.get("automorphisms", []):
            a = GroupMap(G, G, [G.index(np.asarray(p)) for p in images])
            if not a.is_automorphism():
                raise GroupFormatError("an automorphism entry is not bijective")
            auts.append(a)
    except (KeyError, TypeError) as exc:
        raise GroupFormatError(f"malformed group description: {exc}") from exc
    return Instance(G.name, G, subs, "", auts)


def same_instance(a: Instance, b: Instance) -> bool:
    """Equality of the described objects (elements, named subgroups, automorphisms)."""
    A, B = a.group, b.group
    if a.name != b.name or A.degree != B.degree or not np.array_equal(A.perms, B.perms):
        return False
    if set(a.subgroups) != set(b.subgroups):
        return False
    for k in a.subgroups:
        if not np.array_equal(np.sort(a.subgroups[k].embedding_into(A)), np.sort(b.subgroups[k].embedding_into(B))):
            return False
    return [list(x.table) for x in a.automorphisms] == [list(x.table) for x in b.automorphisms]


def load_source(src: str) -> Instance:
    """``builtin:NAME`` or a path to a v1 JSON file."""
    if src.startswith("builtin:"):
        name = src.split(":", 1)[1]
        try:
            return builtin(name)
        except KeyError as exc:
            raise GroupFormatError(str(exc)) from exc
    text = Path(src).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupFormatError(f"malformed JSON in {src} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return instance_from_json(obj)


def resolve_subgroup(inst: Instance, name: str) -> FiniteGroup:
    """A named subgroup of the instance; also ``Z`` (centre), ``derived`` and ``whole``."""
    G = inst.group
    if name in inst.subgroups:
        H = inst.subgroups[name]
        return H if H.parent is G else G.subgroup_from_members(H.embedding_into(G), name=name)
    if name in ("Z", "center", "centre"):
        return G.center()
    if name == "derived":
        return G.derived_subgroup()
    if name == "whole":
        return G.whole()
    raise StructureError(f"unknown subgroup {name!r}; known: {sorted(inst.subgroups) + ['Z', 'derived', 'whole']}")
