"""Independent path-semantics model of feature structures.

A structure is described by three things: the set of paths that exist, the
partition of those paths into co-referring classes, and the atoms found at
paths.  Unification, subsumption and generalization are defined directly
on these descriptions, with no graph code shared with the package.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Sem:
    paths: frozenset
    classes: frozenset  # frozenset of frozensets of paths
    values: tuple  # sorted (path, atom) pairs

    @property
    def value_map(self):
        return dict(self.values)

    def class_of(self, path):
        for c in self.classes:
            if path in c:
                return c
        raise KeyError(path)


def semantics(fs) -> Sem:
    """Describe a package FeatureStructure by its paths (test-side only)."""
    by_node: dict[int, set] = {}
    values = {}
    stack = [((), 0)]
    while stack:
        path, node = stack.pop()
        by_node.setdefault(node, set()).add(path)
        n = fs.nodes[node]
        if isinstance(n, str):
            values[path] = n
        else:
            for f, child in n:
                stack.append((path + (f,), child))
    paths = frozenset(p for ps in by_node.values() for p in ps)
    classes = frozenset(frozenset(ps) for ps in by_node.values())
    return Sem(paths, classes, tuple(sorted(values.items())))


class _UF:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)
            return True
        return False


def sem_unify(a: Sem, b: Sem, max_depth: int | None = None):
    """Closure of the union of two descriptions; None on clash or cycle.

    A cycle shows up as a path landing in the same class as one of its own
    proper prefixes; ``max_depth`` is a backstop on path growth.
    """
    if max_depth is None:
        max_depth = len(a.classes) + len(b.classes) + 2
    uf = _UF()
    paths = set(a.paths | b.paths)
    for p in paths:
        uf.add(p)
    for cls in list(a.classes) + list(b.classes):
        cls = sorted(cls)
        for p in cls[1:]:
            uf.union(cls[0], p)
    while True:
        changed = False
        groups: dict = {}
        for p in paths:
            groups.setdefault(uf.find(p), set()).add(p)
        members_of = {p: groups[uf.find(p)] for p in paths}
        for p in sorted(paths, key=lambda q: (len(q), q)):
            if not p:
                continue
            parent, f = p[:-1], p[-1]
            for q in members_of[parent]:
                ext = q + (f,)
                if len(ext) > max_depth:
                    return None
                if ext not in paths:
                    paths.add(ext)
                    uf.add(ext)
                    changed = True
                if uf.union(p, ext):
                    changed = True
        for p in paths:
            root = uf.find(p)
            if any(uf.find(p[:i]) == root for i in range(len(p))):
                return None
        if not changed:
            break
    groups = {}
    for p in paths:
        groups.setdefault(uf.find(p), set()).add(p)
    values = {}
    for members in groups.values():
        atoms = {v for m in members for v in (a.value_map.get(m), b.value_map.get(m)) if v is not None}
        if len(atoms) > 1:
            return None
        if atoms:
            has_ext = any(p[:-1] in members for p in paths if p)
            if has_ext:
                return None
            atom = atoms.pop()
            for m in members:
                values[m] = atom
    return Sem(frozenset(paths), frozenset(frozenset(g) for g in groups.values()), tuple(sorted(values.items())))


def sem_subsumes(a: Sem, b: Sem) -> bool:
    if not a.paths <= b.paths:
        return False
    for cls in a.classes:
        target = b.class_of(next(iter(cls)))
        if not cls <= target:
            return False
    bv = b.value_map
    return all(bv.get(p) == v for p, v in a.values)


def sem_generalize(a: Sem, b: Sem) -> Sem:
    paths = a.paths & b.paths
    groups: dict = {}
    for p in paths:
        key = (a.class_of(p), b.class_of(p))
        groups.setdefault(key, set()).add(p)
    av, bv = a.value_map, b.value_map
    values = {p: av[p] for p in paths if p in av and bv.get(p) == av[p]}
    return Sem(frozenset(paths), frozenset(frozenset(g) for g in groups.values()), tuple(sorted(values.items())))


def sem_restrict(s: Sem, coindex, value) -> Sem:
    """Restriction read off the path description.

    An arc ``f`` leaving a node survives when some route ``q`` to that node
    has ``q + f`` among the coindex prefixes.  Atoms survive on nodes that
    some value path reaches.
    """
    prefixes = {p[:i] for p in coindex for i in range(len(p) + 1)}
    kept = set()
    for p in sorted(s.paths, key=len):
        if not p:
            kept.add(p)
            continue
        parent = p[:-1]
        if parent not in kept:
            continue
        f = p[-1]
        if any(q + (f,) in prefixes for q in s.class_of(parent)):
            kept.add(p)
    classes = set()
    for c in s.classes:
        inter = frozenset(c & kept)
        if inter:
            classes.add(inter)
    vals = {}
    value = set(value)
    for p, v in s.values:
        if p in kept and any(q in value for q in s.class_of(p)):
            vals[p] = v
    return Sem(frozenset(kept), frozenset(classes), tuple(sorted(vals.items())))


def brute_count(lines, segment, tag):
    """Plain dict recount of tag sequences, ranked by count then first sight."""
    counts, first = {}, {}
    for line in lines:
        for seg in segment(line):
            seq = tag(seg)
            if seq not in counts:
                counts[seq] = 0
                first[seq] = len(first)
            counts[seq] += 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], first[kv[0]]))
