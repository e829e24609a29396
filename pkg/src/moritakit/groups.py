"""Finite groups as explicit multiplication tables.

Elements are opaque strings; all internal work is on indices into the
element tuple.  ``table[i][j]`` is the index of ``elements[i] * elements[j]``.
Isotropy groups, automorphism groups and Picard groups all come back in
this form, so the brute-force isomorphism test here is the workhorse for
cross-checking group-valued invariants.
"""
from __future__ import annotations

from itertools import product

from .report import ValidationReport


class FiniteGroup:
    """A finite group given by a total composition table.

    The identity and the inverse map are located on construction when they
    exist; when they do not, they are ``None`` and ``validate_group``
    reports the violated axioms with witnesses.

    ``payload`` optionally carries one structured object per element
    (e.g. the automorphism a group element stands for).  It never takes
    part in equality or validation.
    """

    def __init__(self, elements, table, payload=None):
        self.elements = tuple(str(e) for e in elements)
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        self.payload = tuple(payload) if payload is not None else None
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate element ids")
        n = len(self.elements)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("table shape does not match element count")
        if self.payload is not None and len(self.payload) != n:
            raise ValueError("payload length does not match element count")
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.identity = self._locate_identity()
        self.inverse = self._locate_inverses()

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.elements == other.elements and self.table == other.table

    def __hash__(self):
        return hash((self.elements, self.table))

    def __repr__(self):
        return f"FiniteGroup(order={len(self)})"

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def _locate_identity(self):
        n = len(self.elements)
        for e in range(n):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(n)):
                return e
        return None

    def _locate_inverses(self):
        if self.identity is None:
            return None
        n = len(self.elements)
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == self.identity == self.table[b][a]:
                    inv[a] = b
                    break
        return None if any(v is None for v in inv) else tuple(inv)

    def element_order(self, i: int) -> int:
        e, x, k = self.identity, i, 1
        while x != e:
            x = self.table[x][i]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = len(self.elements)
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i))

    def center(self) -> tuple[int, ...]:
        n = len(self.elements)
        return tuple(z for z in range(n)
                     if all(self.table[z][x] == self.table[x][z] for x in range(n)))

    def order_profile(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_order(i) for i in range(len(self))))

    def as_dict(self):
        d = {"elements": list(self.elements), "table": [list(r) for r in self.table]}
        if self.identity is not None:
            d["identity"] = self.elements[self.identity]
        return d


def validate_group(g: FiniteGroup) -> ValidationReport:
    report = ValidationReport()
    n = len(g.elements)
    names = g.elements
    for i, row in enumerate(g.table):
        for j, v in enumerate(row):
            if not 0 <= v < n:
                report.add("closure", names[i], names[j])
    if report.violations:
        return report
    for i, j, k in product(range(n), repeat=3):
        if g.table[g.table[i][j]][k] != g.table[i][g.table[j][k]]:
            report.add("associativity", names[i], names[j], names[k])
    if g.identity is None:
        report.add("identity")
    elif g.inverse is None:
        for a in range(n):
            if not any(g.table[a][b] == g.identity == g.table[b][a] for b in range(n)):
                report.add("inverses", names[a])
    return report


# ---------------------------------------------------------------------------
# constructions

def trivial_group() -> FiniteGroup:
    return FiniteGroup(["e"], [[0]])


def cyclic_group(n: int) -> FiniteGroup:
    elements = [f"c{i}" for i in range(n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(elements, table)


def symmetric_group(n: int) -> FiniteGroup:
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # product = "apply right, then left", matching the composition convention
    table = [[index[tuple(p[q[k]] for k in range(n))] for q in perms] for p in perms]
    names = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(names, table)


def dihedral_group(n: int) -> FiniteGroup:
    # elements r^i and r^i s with s r s = r^-1
    names = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]

    def mul(a, b):
        i, p = a % n, a // n
        j, q = b % n, b // n
        # (r^i s^p)(r^j s^q) = r^(i + j or i - j) s^(p+q)
        k = (i + j) % n if p == 0 else (i - j) % n
        return k + n * ((p + q) % 2)

    table = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    return FiniteGroup(names, table)


def quaternion_group() -> FiniteGroup:
    # unit quaternions; "z" stands for -1, so "zi" is -i etc.
    axes = ["e", "i", "j", "k"]
    names = []
    for s in (1, -1):
        for a in axes:
            names.append(a if s == 1 else f"z{a}" if a != "e" else "ze")
    # reorder so the identity sorts first and signs pair up per axis
    names = ["e", "ze", "i", "zi", "j", "zj", "k", "zk"]

    def unpack(idx):
        return idx // 2, 1 if idx % 2 == 0 else -1  # (axis, sign)

    def pack(axis, sign):
        return 2 * axis + (0 if sign == 1 else 1)

    mul_axis = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    table = []
    for a in range(8):
        row = []
        for b in range(8):
            (ax, sa), (bx, sb) = unpack(a), unpack(b)
            cx, sc = mul_axis[(ax, bx)]
            row.append(pack(cx, sa * sb * sc))
        table.append(row)
    return FiniteGroup(names, table)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    names, table = [], []
    nb = len(b)
    for ea in a.elements:
        for eb in b.elements:
            names.append(f"({ea},{eb})")
    for i in range(len(a)):
        for j in range(nb):
            row = []
            for k in range(len(a)):
                for l in range(nb):
                    row.append(a.table[i][k] * nb + b.table[j][l])
            table.append(row)
    return FiniteGroup(names, table)


def klein_four_group() -> FiniteGroup:
    return direct_product(cyclic_group(2), cyclic_group(2))


def subgroup(g: FiniteGroup, indices) -> FiniteGroup:
    """Subgroup on a closed subset, keeping element names (and payload)."""
    idx = sorted(set(indices))
    pos = {v: i for i, v in enumerate(idx)}
    table = []
    for a in idx:
        row = []
        for b in idx:
            v = g.table[a][b]
            if v not in pos:
                raise ValueError("subset is not closed under the product")
            row.append(pos[v])
        table.append(row)
    payload = [g.payload[a] for a in idx] if g.payload is not None else None
    return FiniteGroup([g.elements[a] for a in idx], table, payload)


def generated_closure(g: FiniteGroup, seed) -> set[int]:
    done = {g.identity} | set(seed)
    frontier = list(done)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(done):
                for c in (g.table[a][b], g.table[b][a]):
                    if c not in done:
                        done.add(c)
                        nxt.append(c)
        frontier = nxt
    return done


def quotient_group(g: FiniteGroup, normal) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Quotient by a normal subgroup (given as a set of indices).

    Normality is verified.  Returns the coset group together with the
    chosen coset representatives (the smallest index in each coset);
    cosets are named ``[rep]``.
    """
    normal = frozenset(normal)
    for a in range(len(g)):
        ai = g.inv(a)
        for n in normal:
            if g.table[g.table[a][n]][ai] not in normal:
                raise ValueError("subgroup is not normal")
    seen, cosets = {}, []
    for a in range(len(g)):
        if a in seen:
            continue
        coset = frozenset(g.table[a][x] for x in normal)
        rep = min(coset)
        for b in coset:
            seen[b] = len(cosets)
        cosets.append((rep, coset))
    cosets.sort(key=lambda rc: rc[0])
    coset_of = {}
    for i, (_, coset) in enumerate(cosets):
        for b in coset:
            coset_of[b] = i
    reps = tuple(rep for rep, _ in cosets)
    table = [[coset_of[g.table[ra][rb]] for rb in reps] for ra in reps]
    names = [f"[{g.elements[r]}]" for r in reps]
    return FiniteGroup(names, table), reps


# ---------------------------------------------------------------------------
# homomorphisms and isomorphisms (brute force with invariant pruning)

def _generating_sequence(g: FiniteGroup) -> list[int]:
    gens, closure = [], {g.identity}
    for x in range(len(g)):
        if x not in closure:
            gens.append(x)
            closure = generated_closure(g, gens)
    return gens


def _words(g: FiniteGroup, gens) -> list[tuple[int, ...]]:
    """A word over ``gens`` for every element, found by BFS."""
    words = {g.identity: ()}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for gidx in gens:
                y = g.table[x][gidx]
                if y not in words:
                    words[y] = words[x] + (gidx,)
                    nxt.append(y)
        frontier = nxt
    if len(words) != len(g):
        raise ValueError("generators do not generate")
    return [words[x] for x in range(len(g))]


def _extend_map(g: FiniteGroup, h: FiniteGroup, gens, words, images):
    """Total map induced by generator images, or None if inconsistent."""
    img = {gens[i]: images[i] for i in range(len(gens))}
    out = []
    for word in words:
        v = h.identity
        for gidx in word:
            v = h.table[v][img[gidx]]
        out.append(v)
    for i, j in product(range(len(g)), repeat=2):
        if out[g.table[i][j]] != h.table[out[i]][out[j]]:
            return None
    return tuple(out)


def group_homomorphisms(g: FiniteGroup, h: FiniteGroup) -> list[tuple[int, ...]]:
    """All homomorphisms g -> h, each as a tuple of target indices."""
    gens = _generating_sequence(g)
    if not gens:
        return [tuple(h.identity for _ in range(len(g)))]
    words = _words(g, gens)
    h_orders = [h.element_order(i) for i in range(len(h))]
    candidates = []
    for gidx in gens:
        o = g.element_order(gidx)
        candidates.append([i for i in range(len(h)) if o % h_orders[i] == 0])
    homs = []
    for images in product(*candidates):
        out = _extend_map(g, h, gens, words, images)
        if out is not None:
            homs.append(out)
    return homs


def group_isomorphisms(g: FiniteGroup, h: FiniteGroup, first_only: bool = False):
    """All isomorphisms g -> h (or at most one if ``first_only``)."""
    if len(g) != len(h) or g.order_profile() != h.order_profile():
        return []
    gens = _generating_sequence(g)
    if not gens:
        return [tuple(h.identity for _ in range(len(g)))]
    words = _words(g, gens)
    h_orders = [h.element_order(i) for i in range(len(h))]
    candidates = []
    for gidx in gens:
        o = g.element_order(gidx)
        candidates.append([i for i in range(len(h)) if h_orders[i] == o])
    isos = []
    for images in product(*candidates):
        out = _extend_map(g, h, gens, words, images)
        if out is not None and len(set(out)) == len(g):
            isos.append(out)
            if first_only:
                return isos
    return isos


def group_isomorphic(g: FiniteGroup, h: FiniteGroup):
    isos = group_isomorphisms(g, h, first_only=True)
    return isos[0] if isos else None


def automorphism_group(g: FiniteGroup) -> FiniteGroup:
    """Aut(g), with the permutation tuples as payload."""
    perms = sorted(group_isomorphisms(g, g))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(len(g)))] for q in perms] for p in perms]
    names = [f"a{i:03d}" for i in range(len(perms))]
    return FiniteGroup(names, table, payload=perms)


def inner_automorphism_group(g: FiniteGroup, aut: FiniteGroup | None = None) -> FiniteGroup:
    """Inn(g) as a subgroup of Aut(g) (names stay aligned with Aut)."""
    if aut is None:
        aut = automorphism_group(g)
    inner = set()
    for a in range(len(g)):
        ai = g.inv(a)
        inner.add(tuple(g.table[g.table[a][x]][ai] for x in range(len(g))))
    idx = [i for i, p in enumerate(aut.payload) if p in inner]
    return subgroup(aut, idx)


def outer_automorphism_group(g: FiniteGroup) -> FiniteGroup:
    """Out(g) = Aut(g)/Inn(g), coset representatives as payload."""
    aut = automorphism_group(g)
    inn = inner_automorphism_group(g, aut)
    normal = {aut.index[e] for e in inn.elements}
    quot, reps = quotient_group(aut, normal)
    return FiniteGroup(quot.elements, quot.table, payload=[aut.payload[r] for r in reps])
