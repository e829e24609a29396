"""Finite groupoids: explicit arrow tables over a finite object set.

Conventions, shared by every module downstream:

* ``comp(g, h)`` is defined exactly when ``src(g) == tgt(h)`` and means
  "h, then g"; so ``src(gh) == src(h)`` and ``tgt(gh) == tgt(g)``.
* Object and arrow ids are opaque strings.  The constructor sorts them
  lexicographically and all iteration follows that order, so searches are
  deterministic and quotient representatives are the smallest members.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InvalidAction, NotPrincipal
from .groups import FiniteGroup, group_homomorphisms, group_isomorphisms
from .report import ValidationReport


class FiniteGroupoid:
    """Arrows over a finite object set with a partial composition table.

    The constructor only checks that the structure maps are total and refer
    to known ids; the groupoid axioms themselves are checked by
    ``validate``, which reports witnesses instead of raising, so malformed
    tables remain inspectable values.
    """

    def __init__(self, objects, arrows, src, tgt, unit, inv, comp):
        self.objects = tuple(sorted(str(x) for x in objects))
        self.arrows = tuple(sorted(str(a) for a in arrows))
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object ids")
        if len(set(self.arrows)) != len(self.arrows):
            raise ValueError("duplicate arrow ids")
        self.obj_index = {x: i for i, x in enumerate(self.objects)}
        self.arr_index = {a: i for i, a in enumerate(self.arrows)}

        def oi(x):
            try:
                return self.obj_index[x]
            except KeyError:
                raise ValueError(f"unknown object id {x!r}") from None

        def ai(a):
            try:
                return self.arr_index[a]
            except KeyError:
                raise ValueError(f"unknown arrow id {a!r}") from None

        try:
            self.src = tuple(oi(src[a]) for a in self.arrows)
            self.tgt = tuple(oi(tgt[a]) for a in self.arrows)
            self.unit = tuple(ai(unit[x]) for x in self.objects)
            self.inv = tuple(ai(inv[a]) for a in self.arrows)
        except KeyError as exc:
            raise ValueError(f"structure map missing entry: {exc}") from None
        self.comp = {(ai(g), ai(h)): ai(k) for (g, h), k in comp.items()}

        self._hom = {}
        for i in range(len(self.arrows)):
            self._hom.setdefault((self.src[i], self.tgt[i]), []).append(i)
        self._s_fiber = [[] for _ in self.objects]
        self._t_fiber = [[] for _ in self.objects]
        for i in range(len(self.arrows)):
            self._s_fiber[self.src[i]].append(i)
            self._t_fiber[self.tgt[i]].append(i)
        self._orbits = None

    # -- basic accessors ----------------------------------------------------

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_arrows(self):
        return len(self.arrows)

    def compose(self, g: int, h: int):
        """Composite of arrow indices (h then g), or None if undefined."""
        return self.comp.get((g, h))

    def hom(self, x: int, y: int) -> list[int]:
        """Arrows with src x and tgt y."""
        return self._hom.get((x, y), [])

    def s_fiber(self, x: int) -> list[int]:
        return self._s_fiber[x]

    def t_fiber(self, x: int) -> list[int]:
        return self._t_fiber[x]

    def isotropy_arrows(self, x: int) -> list[int]:
        return self.hom(x, x)

    def _key(self):
        return (self.objects, self.arrows, self.src, self.tgt, self.unit,
                self.inv, tuple(sorted(self.comp.items())))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FiniteGroupoid(objects={self.n_objects}, arrows={self.n_arrows})"


# ---------------------------------------------------------------------------
# validation

def validate(g: FiniteGroupoid) -> ValidationReport:
    """Check every groupoid axiom, reporting id-level witnesses."""
    report = ValidationReport()
    A, O = g.arrows, g.objects
    m = len(A)
    for i, j in product(range(m), repeat=2):
        defined = (i, j) in g.comp
        composable = g.src[i] == g.tgt[j]
        if defined != composable:
            report.add("composability", A[i], A[j])
        if defined and composable:
            k = g.comp[(i, j)]
            if g.src[k] != g.src[j] or g.tgt[k] != g.tgt[i]:
                report.add("composite-endpoints", A[i], A[j], A[k])
    for i in range(m):
        for j in g.t_fiber(g.src[i]):
            ij = g.comp.get((i, j))
            if ij is None:
                continue
            for k in g.t_fiber(g.src[j]):
                jk = g.comp.get((j, k))
                if jk is None or (ij, k) not in g.comp or (i, jk) not in g.comp:
                    continue
                if g.comp[(ij, k)] != g.comp[(i, jk)]:
                    report.add("associativity", A[i], A[j], A[k])
    for x in range(len(O)):
        u = g.unit[x]
        if g.src[u] != x or g.tgt[u] != x:
            report.add("unit-endpoints", O[x], A[u])
    for i in range(m):
        u_t, u_s = g.unit[g.tgt[i]], g.unit[g.src[i]]
        if g.comp.get((u_t, i)) != i or g.comp.get((i, u_s)) != i:
            report.add("unit-law", A[i])
    for i in range(m):
        j = g.inv[i]
        if g.src[j] != g.tgt[i] or g.tgt[j] != g.src[i]:
            report.add("inverse-endpoints", A[i], A[j])
            continue
        if (g.comp.get((j, i)) != g.unit[g.src[i]]
                or g.comp.get((i, j)) != g.unit[g.tgt[i]]):
            report.add("inverse-law", A[i], A[j])
    return report


# ---------------------------------------------------------------------------
# orbits and isotropy

def orbit_partition(g: FiniteGroupoid) -> tuple[tuple[int, ...], ...]:
    """Orbit blocks as sorted index tuples, ordered by smallest member."""
    if g._orbits is not None:
        return g._orbits
    parent = list(range(g.n_objects))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(g.n_arrows):
        a, b = find(g.src[i]), find(g.tgt[i])
        if a != b:
            parent[max(a, b)] = min(a, b)
    blocks = {}
    for x in range(g.n_objects):
        blocks.setdefault(find(x), []).append(x)
    g._orbits = tuple(tuple(blocks[root]) for root in sorted(blocks))
    return g._orbits


def orbits(g: FiniteGroupoid) -> tuple[tuple[str, ...], ...]:
    """Partition of the object set induced by the arrows."""
    return tuple(tuple(g.objects[i] for i in block) for block in orbit_partition(g))


def isotropy(g: FiniteGroupoid, x: str) -> FiniteGroup:
    """The group of arrows from x to itself, as a composition table."""
    xi = g.obj_index[x]
    loops = g.isotropy_arrows(xi)
    pos = {a: i for i, a in enumerate(loops)}
    table = [[pos[g.comp[(a, b)]] for b in loops] for a in loops]
    return FiniteGroup([g.arrows[a] for a in loops], table)


def is_transitive(g: FiniteGroupoid) -> bool:
    return len(orbit_partition(g)) == 1


# ---------------------------------------------------------------------------
# constructions

def pair_groupoid(n: int) -> FiniteGroupoid:
    """One arrow (x,y) per ordered pair, with tgt x and src y."""
    if n < 1:
        raise ValueError("need at least one object")
    width = len(str(n))
    objs = [f"{i:0{width}d}" if n > 9 else str(i) for i in range(1, n + 1)]
    arrows = {}
    for x in objs:
        for y in objs:
            arrows[(x, y)] = f"({x},{y})"
    src = {a: y for (x, y), a in arrows.items()}
    tgt = {a: x for (x, y), a in arrows.items()}
    unit = {x: arrows[(x, x)] for x in objs}
    inv = {a: arrows[(y, x)] for (x, y), a in arrows.items()}
    comp = {}
    for x in objs:
        for y in objs:
            for z in objs:
                comp[(arrows[(x, y)], arrows[(y, z)])] = arrows[(x, z)]
    return FiniteGroupoid(objs, arrows.values(), src, tgt, unit, inv, comp)


def group_as_groupoid(h: FiniteGroup, obj: str = "pt") -> FiniteGroupoid:
    """A group regarded as a groupoid over a single object."""
    src = {e: obj for e in h.elements}
    tgt = dict(src)
    unit = {obj: h.elements[h.identity]}
    inv = {h.elements[i]: h.elements[h.inv(i)] for i in range(len(h))}
    comp = {}
    for i, a in enumerate(h.elements):
        for j, b in enumerate(h.elements):
            comp[(a, b)] = h.elements[h.mul(i, j)]
    return FiniteGroupoid([obj], h.elements, src, tgt, unit, inv, comp)


def action_groupoid(group: FiniteGroup, objects, act) -> FiniteGroupoid:
    """Action groupoid of a left group action on a finite set.

    ``act`` maps pairs ``(element id, object id)`` to object ids; it must
    satisfy the action axioms, otherwise ``InvalidAction`` is raised.
    """
    objs = sorted(str(x) for x in objects)
    if callable(act):
        act = {(e, x): act(e, x) for e in group.elements for x in objs}
    for e in group.elements:
        for x in objs:
            if (e, x) not in act or act[(e, x)] not in objs:
                raise InvalidAction(f"action undefined or out of range at ({e}, {x})")
    ident = group.elements[group.identity]
    for x in objs:
        if act[(ident, x)] != x:
            raise InvalidAction(f"identity moves {x}")
    for i, gname in enumerate(group.elements):
        for j, hname in enumerate(group.elements):
            gh = group.elements[group.mul(i, j)]
            for x in objs:
                if act[(gname, act[(hname, x)])] != act[(gh, x)]:
                    raise InvalidAction(f"compatibility fails at ({gname}, {hname}, {x})")

    def name(e, x):
        return f"({e}@{x})"

    arrows = [name(e, x) for e in group.elements for x in objs]
    src = {name(e, x): x for e in group.elements for x in objs}
    tgt = {name(e, x): act[(e, x)] for e in group.elements for x in objs}
    unit = {x: name(ident, x) for x in objs}
    inv = {}
    for i, e in enumerate(group.elements):
        einv = group.elements[group.inv(i)]
        for x in objs:
            inv[name(e, x)] = name(einv, act[(e, x)])
    comp = {}
    for i, gname in enumerate(group.elements):
        for j, hname in enumerate(group.elements):
            gh = group.elements[group.mul(i, j)]
            for x in objs:
                comp[(name(gname, act[(hname, x)]), name(hname, x))] = name(gh, x)
    return FiniteGroupoid(objs, arrows, src, tgt, unit, inv, comp)


@dataclass(frozen=True)
class PrincipalBundleData:
    """A finite principal bundle: free fibre-transitive right group action."""

    total: tuple[str, ...]
    base: tuple[str, ...]
    projection: dict
    group: FiniteGroup
    action: dict  # (total id, element id) -> total id

    def check(self) -> None:
        E, B, G = self.total, self.base, self.group
        ident = G.elements[G.identity]
        if set(self.projection.values()) != set(B):
            raise NotPrincipal("projection is not surjective")
        for e in E:
            for a in G.elements:
                if (e, a) not in self.action:
                    raise NotPrincipal(f"action undefined at ({e}, {a})")
            if self.action[(e, ident)] != e:
                raise NotPrincipal(f"identity moves {e}")
        for e in E:
            for i, a in enumerate(G.elements):
                ea = self.action[(e, a)]
                if self.projection[ea] != self.projection[e]:
                    raise NotPrincipal(f"action does not preserve fibres at ({e}, {a})")
                for j, b in enumerate(G.elements):
                    ab = G.elements[G.mul(i, j)]
                    if self.action[(ea, b)] != self.action[(e, ab)]:
                        raise NotPrincipal(f"action axiom fails at ({e}, {a}, {b})")
                if ea == e and a != ident:
                    raise NotPrincipal(f"action is not free at ({e}, {a})")
        for e in E:
            for f in E:
                if self.projection[e] == self.projection[f]:
                    if not any(self.action[(e, a)] == f for a in G.elements):
                        raise NotPrincipal(f"action is not fibre-transitive at ({e}, {f})")


def gauge_groupoid(data: PrincipalBundleData) -> FiniteGroupoid:
    """Quotient of the pair groupoid of the total space by the group.

    Arrows are the diagonal-action classes ``[(x, y)]`` with tgt ``p(x)``
    and src ``p(y)``; representatives are the lexicographically smallest
    pairs, and the arrow id spells the representative.
    """
    data.check()
    E, G = sorted(data.total), data.group

    def rep(x, y):
        return min((data.action[(x, a)], data.action[(y, a)]) for a in G.elements)

    classes = {}
    for x in E:
        for y in E:
            classes[(x, y)] = rep(x, y)
    reps = sorted(set(classes.values()))

    def name(r):
        return f"[{r[0]},{r[1]}]"

    arrows = [name(r) for r in reps]
    src = {name((x, y)): data.projection[y] for (x, y) in reps}
    tgt = {name((x, y)): data.projection[x] for (x, y) in reps}
    by_base = {}
    for e in E:
        by_base.setdefault(data.projection[e], []).append(e)
    unit = {b: name(classes[(fib[0], fib[0])]) for b, fib in by_base.items()}
    inv = {name((x, y)): name(classes[(y, x)]) for (x, y) in reps}
    comp = {}
    for (x1, y1) in reps:
        for (x2, y2) in reps:
            if data.projection[y1] != data.projection[x2]:
                continue
            # slide the second representative so that its x matches y1
            a = next(a for a in G.elements if data.action[(x2, a)] == y1)
            comp[(name((x1, y1)), name((x2, y2)))] = name(classes[(x1, data.action[(y2, a)])])
    return FiniteGroupoid(sorted(set(data.base)), arrows, src, tgt, unit, inv, comp)


def bundle_of_groups(fibres: dict) -> FiniteGroupoid:
    """Groupoid with src == tgt: one group sitting over each object."""
    objs = sorted(fibres)
    arrows, src, tgt, unit, inv, comp = [], {}, {}, {}, {}, {}
    for x in objs:
        h = fibres[x]

        def name(e, x=x):
            return f"({x}:{e})"

        for e in h.elements:
            arrows.append(name(e))
            src[name(e)] = x
            tgt[name(e)] = x
        unit[x] = name(h.elements[h.identity])
        for i, e in enumerate(h.elements):
            inv[name(e)] = name(h.elements[h.inv(i)])
            for j, f in enumerate(h.elements):
                comp[(name(e), name(f))] = name(h.elements[h.mul(i, j)])
    return FiniteGroupoid(objs, arrows, src, tgt, unit, inv, comp)


def disjoint_union(*groupoids: FiniteGroupoid, prefixes=None) -> FiniteGroupoid:
    """Disjoint union, with ids kept apart by per-summand prefixes."""
    if prefixes is None:
        prefixes = [f"u{i}:" for i in range(len(groupoids))]
    objs, arrows, src, tgt, unit, inv, comp = [], [], {}, {}, {}, {}, {}
    for g, pre in zip(groupoids, prefixes):
        objs.extend(pre + x for x in g.objects)
        arrows.extend(pre + a for a in g.arrows)
        for i, a in enumerate(g.arrows):
            src[pre + a] = pre + g.objects[g.src[i]]
            tgt[pre + a] = pre + g.objects[g.tgt[i]]
            inv[pre + a] = pre + g.arrows[g.inv[i]]
        for x in range(g.n_objects):
            unit[pre + g.objects[x]] = pre + g.arrows[g.unit[x]]
        for (i, j), k in g.comp.items():
            comp[(pre + g.arrows[i], pre + g.arrows[j])] = pre + g.arrows[k]
    return FiniteGroupoid(objs, arrows, src, tgt, unit, inv, comp)


# ---------------------------------------------------------------------------
# homomorphisms (functors)

@dataclass(frozen=True)
class GroupoidHom:
    """A functor between finite groupoids, as index maps."""

    source: FiniteGroupoid
    target: FiniteGroupoid
    obj_map: tuple[int, ...]
    arr_map: tuple[int, ...]

    def key(self):
        return (self.obj_map, self.arr_map)

    def apply_obj(self, x: str) -> str:
        return self.target.objects[self.obj_map[self.source.obj_index[x]]]

    def apply_arr(self, a: str) -> str:
        return self.target.arrows[self.arr_map[self.source.arr_index[a]]]

    def is_functor(self) -> bool:
        s, t = self.source, self.target
        for i in range(s.n_arrows):
            j = self.arr_map[i]
            if t.src[j] != self.obj_map[s.src[i]] or t.tgt[j] != self.obj_map[s.tgt[i]]:
                return False
        for x in range(s.n_objects):
            if self.arr_map[s.unit[x]] != t.unit[self.obj_map[x]]:
                return False
        for (i, j), k in s.comp.items():
            if t.comp.get((self.arr_map[i], self.arr_map[j])) != self.arr_map[k]:
                return False
        return True

    def is_bijective(self) -> bool:
        return (len(set(self.obj_map)) == self.target.n_objects
                and len(set(self.arr_map)) == self.target.n_arrows
                and self.source.n_objects == self.target.n_objects
                and self.source.n_arrows == self.target.n_arrows)

    def then(self, other: "GroupoidHom") -> "GroupoidHom":
        """Composite other . self (self first)."""
        if self.target is not other.source and self.target != other.source:
            raise ValueError("homomorphisms not composable")
        return GroupoidHom(
            self.source, other.target,
            tuple(other.obj_map[v] for v in self.obj_map),
            tuple(other.arr_map[v] for v in self.arr_map))

    def inverse(self) -> "GroupoidHom":
        if not self.is_bijective():
            raise ValueError("homomorphism is not invertible")
        obj = [0] * self.target.n_objects
        arr = [0] * self.target.n_arrows
        for i, v in enumerate(self.obj_map):
            obj[v] = i
        for i, v in enumerate(self.arr_map):
            arr[v] = i
        return GroupoidHom(self.target, self.source, tuple(obj), tuple(arr))

    def as_dict(self):
        return {
            "objects": {x: self.apply_obj(x) for x in self.source.objects},
            "arrows": {a: self.apply_arr(a) for a in self.source.arrows},
        }


def identity_hom(g: FiniteGroupoid) -> GroupoidHom:
    return GroupoidHom(g, g, tuple(range(g.n_objects)), tuple(range(g.n_arrows)))


def hom_from_maps(source: FiniteGroupoid, target: FiniteGroupoid,
                  obj_map: dict, arr_map: dict) -> GroupoidHom:
    """Build a GroupoidHom from id-level maps (no functor check)."""
    om = tuple(target.obj_index[obj_map[x]] for x in source.objects)
    am = tuple(target.arr_index[arr_map[a]] for a in source.arrows)
    return GroupoidHom(source, target, om, am)


# ---------------------------------------------------------------------------
# frames: spanning data used to enumerate functors and isomorphisms

class _Frame:
    """Per-orbit spanning data: root, tree arrows root->x, isotropy group."""

    def __init__(self, g: FiniteGroupoid, block: tuple[int, ...]):
        self.root = block[0]
        self.block = block
        tree = {self.root: g.unit[self.root]}
        frontier = [self.root]
        while frontier:
            nxt = []
            for x in frontier:
                for a in g.s_fiber(x):
                    y = g.tgt[a]
                    if y not in tree:
                        # a : x -> y composed with tree[x] : root -> x
                        tree[y] = g.comp[(a, tree[x])]
                        nxt.append(y)
            frontier = nxt
        self.tree = tree  # object -> arrow root -> object
        self.iso_arrows = g.isotropy_arrows(self.root)
        pos = {a: i for i, a in enumerate(self.iso_arrows)}
        table = [[pos[g.comp[(a, b)]] for b in self.iso_arrows] for a in self.iso_arrows]
        self.iso_group = FiniteGroup([g.arrows[a] for a in self.iso_arrows], table)
        self.iso_pos = pos

    def decompose(self, g: FiniteGroupoid, arrow: int) -> tuple[int, int, int]:
        """Write arrow x->y as tree[y] . h . tree[x]^-1 with h isotropic."""
        x, y = g.src[arrow], g.tgt[arrow]
        h = g.comp[(g.comp[(g.inv[self.tree[y]], arrow)], self.tree[x])]
        return x, y, self.iso_pos[h]


def _frames(g: FiniteGroupoid) -> list[_Frame]:
    return [_Frame(g, block) for block in orbit_partition(g)]


def _assemble_hom(g1: FiniteGroupoid, g2: FiniteGroupoid, frames, choices) -> GroupoidHom:
    """Build the functor determined by per-orbit frame choices.

    ``choices[k] = (root_image, phi, b)`` where ``phi`` maps isotropy
    element positions into the isotropy of ``root_image`` and ``b[x]`` is
    the arrow image of the tree arrow to object ``x``.
    """
    obj_map = [None] * g1.n_objects
    arr_map = [None] * g1.n_arrows
    frame_of = {}
    for k, frame in enumerate(frames):
        for x in frame.block:
            frame_of[x] = k
    for frame, (root_img, phi, b) in zip(frames, choices):
        for x in frame.block:
            obj_map[x] = g2.tgt[b[x]]
    for i in range(g1.n_arrows):
        k = frame_of[g1.src[i]]
        frame = frames[k]
        root_img, phi, b = choices[k]
        x, y, hpos = frame.decompose(g1, i)
        h_img = g2.isotropy_arrows(root_img)[phi[hpos]]
        arr_map[i] = g2.comp[(g2.comp[(b[y], h_img)], g2.inv[b[x]])]
    return GroupoidHom(g1, g2, tuple(obj_map), tuple(arr_map))


def enumerate_functors(g1: FiniteGroupoid, g2: FiniteGroupoid):
    """Yield every functor g1 -> g2, in a fixed deterministic order.

    A functor is determined freely by, per orbit of g1: an image object
    for the root, a group homomorphism on the root isotropy, and an
    arbitrary image arrow (starting at the root image) for each spanning
    tree arrow.
    """
    frames = _frames(g1)
    per_orbit = []
    for frame in frames:
        local = []
        for root_img in range(g2.n_objects):
            iso2_arrows = g2.isotropy_arrows(root_img)
            pos2 = {a: i for i, a in enumerate(iso2_arrows)}
            table2 = [[pos2[g2.comp[(a, b)]] for b in iso2_arrows] for a in iso2_arrows]
            iso2 = FiniteGroup([g2.arrows[a] for a in iso2_arrows], table2)
            homs = group_homomorphisms(frame.iso_group, iso2)
            fiber = g2.s_fiber(root_img)
            nonroots = [x for x in frame.block if x != frame.root]
            for phi in homs:
                for combo in product(fiber, repeat=len(nonroots)):
                    b = {frame.root: g2.unit[root_img]}
                    for x, a in zip(nonroots, combo):
                        b[x] = a
                    local.append((root_img, phi, b))
        per_orbit.append(local)
    for choices in product(*per_orbit):
        yield _assemble_hom(g1, g2, frames, choices)


def groupoid_isomorphisms(g1: FiniteGroupoid, g2: FiniteGroupoid,
                          first_only: bool = False) -> list[GroupoidHom]:
    """All invertible functors g1 -> g2 (or the first one found)."""
    if g1.n_objects != g2.n_objects or g1.n_arrows != g2.n_arrows:
        return []
    blocks1, blocks2 = orbit_partition(g1), orbit_partition(g2)
    if sorted(map(len, blocks1)) != sorted(map(len, blocks2)):
        return []
    frames1 = _frames(g1)
    frames2 = _frames(g2)
    results = []

    def match_orbits(k, used, matching):
        if k == len(frames1):
            expand(matching)
            return
        f1 = frames1[k]
        for m, f2 in enumerate(frames2):
            if m in used:
                continue
            if len(f1.block) != len(f2.block):
                continue
            if len(f1.iso_group) != len(f2.iso_group):
                continue
            match_orbits(k + 1, used | {m}, matching + [f2])
            if results and first_only:
                return

    def expand(matching):
        per_orbit = []
        for f1, f2 in zip(frames1, matching):
            local = []
            for root_img in f2.block:
                iso2_arrows = g2.isotropy_arrows(root_img)
                pos2 = {a: i for i, a in enumerate(iso2_arrows)}
                table2 = [[pos2[g2.comp[(a, b)]] for b in iso2_arrows] for a in iso2_arrows]
                iso2 = FiniteGroup([g2.arrows[a] for a in iso2_arrows], table2)
                isos = group_isomorphisms(f1.iso_group, iso2)
                if not isos:
                    continue
                nonroots = [x for x in f1.block if x != f1.root]
                targets = [z for z in f2.block if z != root_img]
                for phi in isos:
                    for assign in _bijections(nonroots, targets):
                        arrow_choices = [g2.hom(root_img, assign[x]) for x in nonroots]
                        for combo in product(*arrow_choices):
                            b = {f1.root: g2.unit[root_img]}
                            for x, a in zip(nonroots, combo):
                                b[x] = a
                            local.append((root_img, phi, b))
            if not local:
                return
            per_orbit.append(local)
        for choices in product(*per_orbit):
            hom = _assemble_hom(g1, g2, frames1, choices)
            results.append(hom)
            if first_only:
                return

    match_orbits(0, frozenset(), [])
    results.sort(key=lambda h: h.key())
    return results


def _bijections(xs, ys):
    from itertools import permutations

    if len(xs) != len(ys):
        return
    for perm in permutations(ys):
        yield dict(zip(xs, perm))


def groupoid_isomorphic(g1: FiniteGroupoid, g2: FiniteGroupoid) -> GroupoidHom | None:
    """An isomorphism g1 -> g2 if one exists, found by exhaustive search."""
    found = groupoid_isomorphisms(g1, g2, first_only=True)
    return found[0] if found else None
