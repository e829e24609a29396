"""Automorphisms, bisections, Picard groups, and exact-sequence checks.

The Picard group of a finite groupoid is computed two ways:

* ``enumerate``: every endofunctor is enumerated, turned into its
  associated bibundle, filtered by biprincipality, and deduplicated by
  explicit bibundle isomorphism; the group table is then built from
  actual tensor products.  Every biprincipal self-bibundle of a finite
  groupoid is equivariantly isomorphic to the bibundle of some
  endofunctor (choose a point in each fibre of the right moment and
  divide), so the sweep is exhaustive.
* ``formula``: closed forms for transitive groupoids (outer automorphisms
  of an isotropy group) and for bundles of abelian groups over a finite
  discrete base (automorphisms of the groupoid; every torsor over a
  finite discrete base is trivial).

``auto`` runs the enumeration and cross-checks the formula whenever the
formula applies.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bibundles import (Bibundle, bibundle_isomorphic, from_homomorphism,
                        identity_bibundle, orbit_permutation, principality,
                        tensor)
from .errors import FormulaInapplicable, MoritaKitError
from .groups import (FiniteGroup, group_isomorphic, outer_automorphism_group,
                     quotient_group, subgroup)
from .groupoids import (FiniteGroupoid, GroupoidHom, enumerate_functors,
                        groupoid_isomorphisms, identity_hom, isotropy,
                        is_transitive, orbit_partition)


# ---------------------------------------------------------------------------
# automorphisms and bisections

def automorphisms(g: FiniteGroupoid) -> FiniteGroup:
    """The group of groupoid automorphisms; payload holds the functors."""
    homs = groupoid_isomorphisms(g, g)
    index = {h.key(): i for i, h in enumerate(homs)}
    n = len(homs)
    table = [[index[homs[j].then(homs[i]).key()] for j in range(n)] for i in range(n)]
    names = [f"a{i:03d}" for i in range(n)]
    return FiniteGroup(names, table, payload=homs)


@dataclass(frozen=True)
class Bisection:
    """A section of src whose target restriction is also a bijection."""

    groupoid: FiniteGroupoid
    arrows: tuple[int, ...]  # arrows[x] has src x; x -> tgt(arrows[x]) bijective

    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(self.groupoid.arrows[a] for a in self.arrows)

    def name(self) -> str:
        return "{" + ";".join(self.arrow_ids()) + "}"


def bisections(g: FiniteGroupoid) -> FiniteGroup:
    """All bisections, as a group under setwise product; payload holds them."""
    found = []

    def extend(x, chosen, used_targets):
        if x == g.n_objects:
            found.append(tuple(chosen))
            return
        for a in g.s_fiber(x):
            t = g.tgt[a]
            if t in used_targets:
                continue
            chosen.append(a)
            extend(x + 1, chosen, used_targets | {t})
            chosen.pop()

    extend(0, [], frozenset())
    found.sort()
    sections = [Bisection(g, arrows) for arrows in found]
    index = {b.arrows: i for i, b in enumerate(sections)}

    def product_arrows(n_arr, m_arr):
        out = []
        for x in range(g.n_objects):
            m = m_arr[x]
            out.append(g.comp[(n_arr[g.tgt[m]], m)])
        return tuple(out)

    table = [[index[product_arrows(a.arrows, b.arrows)] for b in sections]
             for a in sections]
    names = [f"b{i:03d}" for i in range(len(sections))]
    return FiniteGroup(names, table, payload=sections)


def inner_automorphism(g: FiniteGroupoid, n: Bisection) -> GroupoidHom:
    """Two-sided sliding along a bisection: g -> N(t(g)) . g . N(s(g))^-1."""
    obj_map = tuple(g.tgt[n.arrows[x]] for x in range(g.n_objects))
    arr_map = []
    for i in range(g.n_arrows):
        a = n.arrows[g.tgt[i]]
        c = n.arrows[g.src[i]]
        arr_map.append(g.comp[(g.comp[(a, i)], g.inv[c])])
    return GroupoidHom(g, g, obj_map, tuple(arr_map))


def inaut(g: FiniteGroupoid, aut: FiniteGroup | None = None,
          bis: FiniteGroup | None = None) -> FiniteGroup:
    """Inner automorphisms, as a subgroup of ``automorphisms(g)``."""
    if aut is None:
        aut = automorphisms(g)
    if bis is None:
        bis = bisections(g)
    keys = {inner_automorphism(g, n).key() for n in bis.payload}
    idx = [i for i, h in enumerate(aut.payload) if h.key() in keys]
    return subgroup(aut, idx)


def outaut(g: FiniteGroupoid, aut: FiniteGroup | None = None) -> FiniteGroup:
    """Outer automorphism group Aut/Inaut with coset representatives."""
    if aut is None:
        aut = automorphisms(g)
    inn = inaut(g, aut)
    normal = {aut.index[e] for e in inn.elements}
    quot, reps = quotient_group(aut, normal)
    return FiniteGroup(quot.elements, quot.table,
                       payload=[aut.payload[r] for r in reps])


def ciso_bisections(g: FiniteGroupoid, bis: FiniteGroup | None = None) -> FiniteGroup:
    """Bisections inducing the trivial inner automorphism.

    These take values in the centers of the isotropy groups and are
    invariant under conjugation along arrows; the implementation takes the
    kernel of the sliding map directly.
    """
    if bis is None:
        bis = bisections(g)
    ident = identity_hom(g).key()
    idx = [i for i, n in enumerate(bis.payload)
           if inner_automorphism(g, n).key() == ident]
    return subgroup(bis, idx)


# ---------------------------------------------------------------------------
# Picard group

@dataclass
class PicardGroup:
    """Isomorphism classes of biprincipal self-bibundles under tensor."""

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    method: str
    representatives: tuple[Bibundle, ...] | None = None
    cross_checked: tuple[str, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.elements)

    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.elements, self.table)

    def as_dict(self):
        return {"elements": list(self.elements),
                "table": [list(r) for r in self.table],
                "method": self.method}


def _classify(reps, s: Bibundle) -> int:
    for i, r in enumerate(reps):
        if bibundle_isomorphic(r, s) is not None:
            return i
    raise MoritaKitError("bibundle does not match any enumerated class")


def _enumerate_picard(g: FiniteGroupoid) -> PicardGroup:
    reps: list[Bibundle] = []
    for hom in enumerate_functors(g, g):
        s = from_homomorphism(hom)
        if not principality(s).biprincipal:
            continue
        if not any(bibundle_isomorphic(r, s) is not None for r in reps):
            reps.append(s)
    if not reps:
        raise MoritaKitError("no biprincipal self-bibundle found (invalid groupoid?)")
    identity = _classify(reps, identity_bibundle(g))
    n = len(reps)
    table = [[_classify(reps, tensor(reps[i], reps[j])) for j in range(n)]
             for i in range(n)]
    names = [f"pic{i:03d}" for i in range(n)]
    return PicardGroup(tuple(names), tuple(map(tuple, table)), identity,
                       "enumeration", tuple(reps))


def _formula_picard(g: FiniteGroupoid) -> PicardGroup:
    if is_transitive(g):
        h = isotropy(g, g.objects[0])
        out = outer_automorphism_group(h)
        return PicardGroup(out.elements, out.table, out.identity,
                           "transitive-formula")
    if all(g.src[i] == g.tgt[i] for i in range(g.n_arrows)):
        fibres = [isotropy(g, x) for x in g.objects]
        if not all(h.is_abelian() for h in fibres):
            raise FormulaInapplicable(
                "bundle-of-groups formula requires abelian fibres")
        aut = automorphisms(g)
        return PicardGroup(aut.elements, aut.table, aut.identity,
                           "bundle-of-groups-formula")
    raise FormulaInapplicable(
        "formula needs a transitive groupoid or a bundle of abelian groups")


def picard_group(g: FiniteGroupoid, method: str = "auto") -> PicardGroup:
    """Picard group of g; see the module docstring for the two routes."""
    if method == "enumerate":
        return _enumerate_picard(g)
    if method == "formula":
        return _formula_picard(g)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    pic = _enumerate_picard(g)
    try:
        closed = _formula_picard(g)
    except FormulaInapplicable:
        return pic
    if group_isomorphic(pic.as_group(), closed.as_group()) is None:
        raise MoritaKitError(
            "enumeration and formula disagree on the Picard group")
    pic.cross_checked = (closed.method,)
    return pic


def j_homomorphism(g: FiniteGroupoid, phi: GroupoidHom,
                   pic: PicardGroup | None = None) -> int:
    """Index of the Picard class of the bibundle attached to an automorphism."""
    if pic is None:
        pic = picard_group(g, "enumerate")
    if pic.representatives is None:
        raise ValueError("need an enumeration-based Picard group")
    return _classify(pic.representatives, from_homomorphism(phi))


def center_map(g: FiniteGroupoid, x: Bibundle) -> tuple[int, ...]:
    """Permutation of the orbit blocks induced by a biprincipal self-bibundle."""
    if not principality(x).biprincipal:
        raise ValueError("center map needs a biprincipal bibundle")
    return orbit_permutation(x)


def static_picard(g: FiniteGroupoid, pic: PicardGroup | None = None) -> PicardGroup:
    """Kernel of the orbit-space action: classes moving no orbit."""
    if pic is None:
        pic = picard_group(g, "enumerate")
    if pic.representatives is None:
        raise ValueError("need an enumeration-based Picard group")
    ident = tuple(range(len(orbit_partition(g))))
    idx = [i for i, r in enumerate(pic.representatives)
           if orbit_permutation(r) == ident]
    pos = {v: k for k, v in enumerate(idx)}
    table = []
    for i in idx:
        row = []
        for j in idx:
            v = pic.table[i][j]
            if v not in pos:
                raise MoritaKitError("static classes are not closed under tensor")
            row.append(pos[v])
        table.append(row)
    return PicardGroup(tuple(pic.elements[i] for i in idx),
                       tuple(map(tuple, table)), pos[pic.identity], pic.method,
                       tuple(pic.representatives[i] for i in idx))


def lemma_section_check(s: Bibundle):
    """Section-based reduction of a biprincipal self-bibundle to an automorphism.

    Searches for a section sigma of the right moment whose composite with
    the left moment is a bijection of objects; when one exists the bibundle
    is isomorphic to the bibundle of the returned automorphism.  Returns
    ``(sigma, phi)`` with sigma a dict object id -> carrier id, or None.
    """
    if s.left != s.right:
        raise ValueError("need a self-bibundle")
    g = s.left
    if not principality(s).biprincipal:
        raise ValueError("need a biprincipal bibundle")
    n_obj = g.n_objects
    fibers = []
    for p in range(n_obj):
        fiber = s.j2_fiber(p)
        fiber.sort(key=lambda x: (0 if s.j1[x] == p else 1, x))
        fibers.append(fiber)

    sigma = [None] * n_obj

    def search(p, used):
        if p == n_obj:
            return True
        for x in fibers[p]:
            if s.j1[x] in used:
                continue
            sigma[p] = x
            if search(p + 1, used | {s.j1[x]}):
                return True
        sigma[p] = None
        return False

    if not search(0, frozenset()):
        return None

    obj_map = tuple(s.j1[sigma[p]] for p in range(n_obj))
    arr_map = []
    for h in range(g.n_arrows):
        target = s.right_act[(sigma[g.tgt[h]], h)]
        base = sigma[g.src[h]]
        image = None
        for cand in g.s_fiber(s.j1[base]):
            if s.left_act.get((cand, base)) == target:
                image = cand
                break
        if image is None:
            raise MoritaKitError("left action is not transitive along the section")
        arr_map.append(image)
    phi = GroupoidHom(g, g, obj_map, tuple(arr_map))
    if not phi.is_functor() or not phi.is_bijective():
        raise MoritaKitError("section did not induce an automorphism")
    sigma_ids = {g.objects[p]: s.carrier[sigma[p]] for p in range(n_obj)}
    return sigma_ids, phi


# ---------------------------------------------------------------------------
# exact sequences

@dataclass
class ExactnessReport:
    checks: dict
    orders: dict

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def as_dict(self):
        return {"ok": self.ok, "orders": dict(self.orders),
                "checks": {k: dict(v) for k, v in self.checks.items()}}


def verify_exact_sequences(g: FiniteGroupoid) -> ExactnessReport:
    """Machine-check the three exact sequences around Aut, Bis and Pic.

    (a) the kernel of j : Aut -> Pic is exactly the inner automorphisms;
    (b) 1 -> CIsoBis -> Bis -> Inaut -> 1 (sliding is onto with that kernel);
    (c) 1 -> static Pic -> Pic -> orbit permutations is exact, with the
        orbit action a group homomorphism.
    """
    aut = automorphisms(g)
    bis = bisections(g)
    inn = inaut(g, aut, bis)
    out = outaut(g, aut)
    ciso = ciso_bisections(g, bis)
    pic = picard_group(g, "enumerate")

    checks = {}

    inner_keys = {h.key() for h in inn.payload}
    witnesses = []
    for name, hom in zip(aut.elements, aut.payload):
        in_kernel = j_homomorphism(g, hom, pic) == pic.identity
        if in_kernel != (hom.key() in inner_keys):
            witnesses.append(name)
    checks["j-kernel"] = {"ok": not witnesses, "witnesses": witnesses}

    sample = min(len(aut), 8)
    witnesses = []
    for i in range(sample):
        for j in range(sample):
            composed = aut.payload[j].then(aut.payload[i])
            lhs = j_homomorphism(g, composed, pic)
            rhs = pic.table[j_homomorphism(g, aut.payload[i], pic)][
                j_homomorphism(g, aut.payload[j], pic)]
            if lhs != rhs:
                witnesses.append((aut.elements[i], aut.elements[j]))
    checks["j-homomorphism"] = {"ok": not witnesses, "witnesses": witnesses}

    slide = [inner_automorphism(g, n).key() for n in bis.payload]
    aut_index = {h.key(): i for i, h in enumerate(aut.payload)}
    witnesses = []
    for i in range(len(bis)):
        for j in range(len(bis)):
            prod = bis.table[i][j]
            composed = aut.payload[aut_index[slide[j]]].then(
                aut.payload[aut_index[slide[i]]])
            if slide[prod] != composed.key():
                witnesses.append((bis.elements[i], bis.elements[j]))
    surjective = set(slide) == inner_keys
    kernel = {bis.elements[i] for i, k in enumerate(slide)
              if k == identity_hom(g).key()}
    exact_kernel = kernel == set(ciso.elements)
    counted = len(bis) == len(ciso) * len(inn)
    checks["bisection-sequence"] = {
        "ok": not witnesses and surjective and exact_kernel and counted,
        "witnesses": witnesses,
        "sliding-surjective": surjective,
        "kernel-is-ciso": exact_kernel,
        "order-product": counted,
    }

    perms = [orbit_permutation(r) for r in pic.representatives]
    witnesses = []
    for i in range(len(pic)):
        for j in range(len(pic)):
            composed = tuple(perms[i][v] for v in perms[j])
            if perms[pic.table[i][j]] != composed:
                witnesses.append((pic.elements[i], pic.elements[j]))
    ident = tuple(range(len(orbit_partition(g))))
    kernel_idx = {i for i, p in enumerate(perms) if p == ident}
    static = static_picard(g, pic)
    static_idx = {pic.elements.index(e) for e in static.elements}
    checks["static-sequence"] = {
        "ok": not witnesses and kernel_idx == static_idx,
        "witnesses": witnesses,
        "kernel-is-static": kernel_idx == static_idx,
    }

    orders = {"aut": len(aut), "inaut": len(inn), "outaut": len(out),
              "bis": len(bis), "ciso": len(ciso), "pic": len(pic),
              "static-pic": len(static)}
    return ExactnessReport(checks, orders)
