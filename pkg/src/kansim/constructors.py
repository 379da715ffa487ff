"""Builders for the complexes the library works with.

Standard simplices and their boundary/horn subcomplexes, products and
coproducts, quotients, cones, path and loop spaces, truncation to a
skeleton, and the canonical completion that fills every cycle of a skeleton
with exactly one new simplex.
"""

from __future__ import annotations

import itertools

from .core import (
    Skeleton,
    SimplexRef,
    SimplicialMap,
    SubcomplexMask,
    TruncatedSimplicialSet,
    subcomplex_closure,
)


class BudgetExceeded(RuntimeError):
    def __init__(self, dimension, count, budget):
        super().__init__(
            f"level budget exceeded at dimension {dimension}: {count} > {budget}"
        )
        self.dimension = dimension
        self.count = count
        self.budget = budget


DEFAULT_LEVEL_BUDGET = 200_000


def _tuple_label(t):
    return ".".join(str(x) for x in t)


def _nondecreasing_tuples(n, length):
    return list(itertools.combinations_with_replacement(range(n + 1), length))


def _tuple_complex(name, cap, keep, basepoint_tuple=None):
    """Complex of nondecreasing tuples passing `keep`, with omit/repeat operators."""
    per_level = []
    index = []
    for k in range(cap + 1):
        tuples = [t for t in _nondecreasing_tuples(keep.bound, k + 1) if keep(t)]
        per_level.append(tuples)
        index.append({t: i for i, t in enumerate(tuples)})
    levels = [[_tuple_label(t) for t in tuples] for tuples in per_level]
    faces = [()]
    for k in range(1, cap + 1):
        faces.append(tuple(
            tuple(index[k - 1][t[:i] + t[i + 1:]] for t in per_level[k])
            for i in range(k + 1)
        ))
    degens = []
    for k in range(cap):
        degens.append(tuple(
            tuple(index[k + 1][t[: i + 1] + t[i:]] for t in per_level[k])
            for i in range(k + 1)
        ))
    degens.append(())
    basepoint = None
    if basepoint_tuple is not None and keep(basepoint_tuple):
        basepoint = index[0][basepoint_tuple]
    return TruncatedSimplicialSet(name, cap, levels, faces, degens, basepoint=basepoint)


class _Keep:
    def __init__(self, bound, fn):
        self.bound = bound
        self.fn = fn

    def __call__(self, t):
        return self.fn(t)


def standard_simplex(n, cap) -> TruncatedSimplicialSet:
    """The standard n-simplex: level k is the nondecreasing (k+1)-tuples in [0,n]."""
    if n < 0 or cap < 0:
        raise ValueError("n and cap must be nonnegative")
    return _tuple_complex(f"delta-{n}", cap, _Keep(n, lambda t: True), basepoint_tuple=(0,))


def point(cap) -> TruncatedSimplicialSet:
    k = standard_simplex(0, cap)
    out = TruncatedSimplicialSet("point", cap, k.levels, k.faces, k.degens, basepoint=0)
    return out


def boundary_complex(n, cap) -> TruncatedSimplicialSet:
    """The boundary of the n-simplex: tuples that are not onto [0,n]."""
    if n < 0 or cap < 0:
        raise ValueError("n and cap must be nonnegative")
    keep = _Keep(n, lambda t: len(set(t)) < n + 1)
    return _tuple_complex(f"boundary-{n}", cap, keep, basepoint_tuple=(0,))


def horn_complex(n, k, cap) -> TruncatedSimplicialSet:
    """The (n,k)-horn: tuples whose image does not contain [0,n] minus {k}."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    required = set(range(n + 1)) - {k}
    keep = _Keep(n, lambda t: not required <= set(t))
    return _tuple_complex(f"horn-{n}-{k}", cap, keep, basepoint_tuple=(0,))


def product(a: TruncatedSimplicialSet, b: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Levelwise cartesian product with diagonal operators."""
    if a.cap != b.cap:
        raise ValueError("cap mismatch in product")
    cap = a.cap
    pairs = [
        list(itertools.product(range(a.level_size(k)), range(b.level_size(k))))
        for k in range(cap + 1)
    ]
    index = [{p: i for i, p in enumerate(ps)} for ps in pairs]
    levels = [
        [f"({a.levels[k][x]},{b.levels[k][y]})" for x, y in pairs[k]]
        for k in range(cap + 1)
    ]
    faces = [()]
    for k in range(1, cap + 1):
        faces.append(tuple(
            tuple(index[k - 1][(a.faces[k][i][x], b.faces[k][i][y])] for x, y in pairs[k])
            for i in range(k + 1)
        ))
    degens = []
    for k in range(cap):
        degens.append(tuple(
            tuple(index[k + 1][(a.degens[k][i][x], b.degens[k][i][y])] for x, y in pairs[k])
            for i in range(k + 1)
        ))
    degens.append(())
    basepoint = None
    if a.basepoint is not None and b.basepoint is not None:
        basepoint = index[0][(a.basepoint, b.basepoint)]
    out = TruncatedSimplicialSet(
        f"({a.name}x{b.name})", cap, levels, faces, degens, basepoint=basepoint
    )
    out.product_factors = (a, b)
    out.product_pairs = pairs
    return out


def product_projections(p: TruncatedSimplicialSet):
    """The two projection maps of a complex built by product()."""
    a, b = p.product_factors
    t1 = [tuple(x for x, _ in p.product_pairs[k]) for k in range(p.cap + 1)]
    t2 = [tuple(y for _, y in p.product_pairs[k]) for k in range(p.cap + 1)]
    return SimplicialMap(p, a, t1), SimplicialMap(p, b, t2)


def coproduct(a: TruncatedSimplicialSet, b: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Levelwise disjoint union; both factors embed as subcomplexes."""
    if a.cap != b.cap:
        raise ValueError("cap mismatch in coproduct")
    cap = a.cap
    levels = [
        [f"0:{lab}" for lab in a.levels[k]] + [f"1:{lab}" for lab in b.levels[k]]
        for k in range(cap + 1)
    ]
    off = [a.level_size(k) for k in range(cap + 1)]
    faces = [()]
    for k in range(1, cap + 1):
        faces.append(tuple(
            tuple(a.faces[k][i]) + tuple(v + off[k - 1] for v in b.faces[k][i])
            for i in range(k + 1)
        ))
    degens = []
    for k in range(cap):
        degens.append(tuple(
            tuple(a.degens[k][i]) + tuple(v + off[k + 1] for v in b.degens[k][i])
            for i in range(k + 1)
        ))
    degens.append(())
    basepoint = a.basepoint if a.basepoint is not None else None
    out = TruncatedSimplicialSet(
        f"({a.name}+{b.name})", cap, levels, faces, degens, basepoint=basepoint
    )
    return out


def quotient(k: TruncatedSimplicialSet, mask: SubcomplexMask):
    """Collapse the mask to a single simplex per level.

    Returns (quotient complex, projection map).  The collapsed simplex at
    level d is labeled "⋆d"; a collision with a surviving label is an error.
    """
    if mask.parent is not k:
        raise ValueError("mask belongs to a different complex")
    for d in range(k.cap + 1):
        if not mask.members[d]:
            raise ValueError(f"mask level {d} is empty; no collapsed representative")
    survivors = [
        [i for i in range(k.level_size(d)) if i not in mask.members[d]]
        for d in range(k.cap + 1)
    ]
    levels = []
    for d in range(k.cap + 1):
        labs = [k.levels[d][i] for i in survivors[d]]
        star = f"⋆{d}"
        if star in labs:
            raise ValueError(f"label {star!r} collides with a surviving simplex")
        levels.append(labs + [star])
    new_index = []
    for d in range(k.cap + 1):
        m = {old: new for new, old in enumerate(survivors[d])}
        new_index.append(m)
    star_at = [len(survivors[d]) for d in range(k.cap + 1)]

    def image(d, old):
        return new_index[d].get(old, star_at[d])

    faces = [()]
    for d in range(1, k.cap + 1):
        per_i = []
        for i in range(d + 1):
            table = [image(d - 1, k.faces[d][i][old]) for old in survivors[d]]
            table.append(star_at[d - 1])
            per_i.append(tuple(table))
        faces.append(tuple(per_i))
    degens = []
    for d in range(k.cap):
        per_i = []
        for i in range(d + 1):
            table = [image(d + 1, k.degens[d][i][old]) for old in survivors[d]]
            table.append(star_at[d + 1])
            per_i.append(tuple(table))
        degens.append(tuple(per_i))
    degens.append(())
    q = TruncatedSimplicialSet(
        f"{k.name}/~", k.cap, levels, faces, degens, basepoint=star_at[0]
    )
    proj_table = [
        tuple(image(d, old) for old in range(k.level_size(d)))
        for d in range(k.cap + 1)
    ]
    return q, SimplicialMap(k, q, proj_table)


def cone(k: TruncatedSimplicialSet):
    """The cone: K x Delta^1 with K x (vertex 1) collapsed to the basepoint.

    Returns (cone complex, inclusion of K at the vertex-0 end).
    """
    if k.cap < 1:
        raise ValueError("cone needs cap >= 1")
    seg = standard_simplex(1, k.cap)
    prod = product(k, seg)
    ones = [seg.ref_of(d, _tuple_label((1,) * (d + 1))).index for d in range(k.cap + 1)]
    zeros = [seg.ref_of(d, _tuple_label((0,) * (d + 1))).index for d in range(k.cap + 1)]
    pair_index = [
        {p: i for i, p in enumerate(prod.product_pairs[d])} for d in range(k.cap + 1)
    ]
    members = [
        {pair_index[d][(x, ones[d])] for x in range(k.level_size(d))}
        for d in range(k.cap + 1)
    ]
    mask = SubcomplexMask(prod, members)
    c, proj = quotient(prod, mask)
    c.name = f"cone({k.name})"
    include_table = [
        tuple(proj.table[d][pair_index[d][(x, zeros[d])]] for x in range(k.level_size(d)))
        for d in range(k.cap + 1)
    ]
    include = SimplicialMap(k, c, include_table)
    c.cone_of = k
    c.cone_projection = proj
    c.cone_pair_index = pair_index
    return c, include


def cone_mask(c: TruncatedSimplicialSet, sub: SubcomplexMask) -> SubcomplexMask:
    """The image of cone(L) inside cone(K) for a subcomplex L of K.

    This is the projection of L x Delta^1 together with the cone point
    closure (the cone of an empty subcomplex is just the cone point).
    """
    k = c.cone_of
    if sub.parent is not k:
        raise ValueError("mask belongs to a different complex")
    proj = c.cone_projection
    pair_index = c.cone_pair_index
    star = subcomplex_closure(c, [SimplexRef(0, c.basepoint)])
    members = [set(star.members[d]) for d in range(k.cap + 1)]
    for d in range(k.cap + 1):
        for x in sub.members[d]:
            for y in range(d + 2):
                members[d].add(proj.table[d][pair_index[d][(x, y)]])
    return SubcomplexMask(c, members)


def path_space(k: TruncatedSimplicialSet):
    """Simplices whose final vertex is the basepoint, truncated one lower.

    Returns (P, end_map) where end_map sends a path simplex to its missing
    last face inside the truncation of K.
    """
    if k.basepoint is None:
        raise ValueError("path space needs a pointed complex")
    if k.cap < 1:
        raise ValueError("path space needs cap >= 1")
    star0 = k.basepoint

    def final_vertex(ref: SimplexRef) -> int:
        while ref.dim > 0:
            ref = k.face(ref, ref.dim - 1)
        return ref.index

    cap = k.cap - 1
    chosen = [
        [i for i in range(k.level_size(d + 1)) if final_vertex(SimplexRef(d + 1, i)) == star0]
        for d in range(cap + 1)
    ]
    back = [{old: new for new, old in enumerate(ch)} for ch in chosen]
    levels = [[k.levels[d + 1][i] for i in chosen[d]] for d in range(cap + 1)]
    faces = [()]
    for d in range(1, cap + 1):
        faces.append(tuple(
            tuple(back[d - 1][k.faces[d + 1][i][old]] for old in chosen[d])
            for i in range(d + 1)
        ))
    degens = []
    for d in range(cap):
        degens.append(tuple(
            tuple(back[d + 1][k.degens[d + 1][i][old]] for old in chosen[d])
            for i in range(d + 1)
        ))
    degens.append(())
    basepoint = back[0][k.degen(SimplexRef(0, star0), 0).index]
    p = TruncatedSimplicialSet(
        f"P({k.name})", cap, levels, faces, degens, basepoint=basepoint
    )
    target = truncate_complex(k, cap)
    end_table = [
        tuple(k.faces[d + 1][d + 1][old] for old in chosen[d]) for d in range(cap + 1)
    ]
    end_map = SimplicialMap(p, target, end_table)
    return p, end_map


def loop_space(k: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Preimage of the basepoint closure under the path-space end map."""
    p, end_map = path_space(k)
    target = end_map.target
    star = subcomplex_closure(target, [target.basepoint_ref(0)])
    members = [
        {i for i in range(p.level_size(d)) if end_map.table[d][i] in star.members[d]}
        for d in range(p.cap + 1)
    ]
    mask = SubcomplexMask(p, members)
    from .core import materialize

    loops, _ = materialize(mask, name=f"loops({k.name})")
    return loops


def truncate_complex(k: TruncatedSimplicialSet, n) -> TruncatedSimplicialSet:
    if n > k.cap:
        raise ValueError("cannot truncate above the cap")
    degens = [k.degens[d] for d in range(n)] + [()]
    return TruncatedSimplicialSet(
        k.name if n == k.cap else f"{k.name}|{n}",
        n,
        [k.levels[d] for d in range(n + 1)],
        [k.faces[d] for d in range(n + 1)],
        degens,
        basepoint=k.basepoint,
        em_meta=k.em_meta,
    )


def truncate(k: TruncatedSimplicialSet, n) -> Skeleton:
    """Forget all levels above n; the result is an n-skeleton."""
    t = truncate_complex(k, n)
    return Skeleton(t.name, n, t.levels, t.faces, t.degens, basepoint=t.basepoint,
                    em_meta=t.em_meta)


def as_skeleton(k: TruncatedSimplicialSet) -> Skeleton:
    return truncate(k, k.cap)


def enumerate_cycles(k: TruncatedSimplicialSet, dim, brute_force=False):
    """All (dim)-cycles: compatible (dim+2)-tuples of dim-simplices, as index tuples.

    The default search places entries left to right; the compatibility
    equations determine faces 0..j-1 of entry j outright, so candidates come
    from a prefix-of-faces index.  The brute-force path filters the full
    product and is kept as an oracle for tests.
    """
    size = k.level_size(dim)
    width = dim + 2
    if brute_force:
        out = []
        for tup in itertools.product(range(size), repeat=width):
            if _compatible(k, dim, tup):
                out.append(tup)
        return out
    if dim == 0:
        return [(x, y) for x in range(size) for y in range(size)]
    prefix_maps = _prefix_maps(k, dim)
    out = []
    chosen = [0] * width

    def extend(j):
        if j == width:
            out.append(tuple(chosen))
            return
        want = tuple(k.faces[dim][j - 1][chosen[i]] for i in range(j))
        for cand in prefix_maps[j].get(want, ()):
            chosen[j] = cand
            extend(j + 1)

    for first in range(size):
        chosen[0] = first
        extend(1)
    return out


def _prefix_maps(k, dim):
    """prefix_maps[p] maps (d_0 x, ..., d_{p-1} x) to the sorted list of x."""
    maps = {0: None}
    tables = [k.faces[dim][i] for i in range(dim + 1)]
    for p in range(1, dim + 2):
        per = {}
        for x in range(k.level_size(dim)):
            key = tuple(tables[i][x] for i in range(min(p, dim + 1)))
            per.setdefault(key, []).append(x)
        maps[p] = per
    return maps


def _compatible(k, dim, tup):
    for j in range(1, len(tup)):
        for i in range(j):
            if k.face(SimplexRef(dim, tup[j]), i) != k.face(SimplexRef(dim, tup[i]), j - 1):
                return False
    return True


def complete(s: Skeleton, cap, level_budget=DEFAULT_LEVEL_BUDGET) -> TruncatedSimplicialSet:
    """Extend a skeleton by making every level above it the set of cycles below.

    Face i of a new simplex is the i-th entry of its cycle tuple; the
    degeneracy of any simplex at or above the skeleton top is the tuple
    (s_{i-1}d_0 x, ..., s_{i-1}d_{i-1} x, x, x, s_i d_{i+1} x, ..., s_i d_k x),
    taking the empty segments literally at i = 0 and i = k.
    """
    n = s.cap
    if cap < n:
        raise ValueError("completion cap below the skeleton dimension")
    if level_budget <= 0:
        raise ValueError("level budget must be positive")
    levels = [list(lv) for lv in s.levels]
    faces = [tuple(per) for per in s.faces]
    degens = [tuple(s.degens[d]) for d in range(n)]

    current = Skeleton(s.name, n, levels, faces, degens + [()], basepoint=s.basepoint)
    for k in range(n + 1, cap + 1):
        cycles = enumerate_cycles(current, k - 1)
        if len(cycles) > level_budget:
            raise BudgetExceeded(k, len(cycles), level_budget)
        cycle_index = {c: i for i, c in enumerate(cycles)}
        levels.append([f"c{k}.{i}" for i in range(len(cycles))])
        faces.append(tuple(
            tuple(c[i] for c in cycles) for i in range(k + 1)
        ))
        # degeneracies from level k-1 into the new level
        new_degens = []
        for i in range(k):
            table = []
            for x in range(len(levels[k - 1])):
                ref = SimplexRef(k - 1, x)
                tup = _degeneracy_tuple(current, ref, i)
                target = cycle_index.get(tup)
                if target is None:
                    raise AssertionError(
                        f"degeneracy tuple of {current.levels[k - 1][x]!r} is not a cycle"
                    )
                table.append(target)
            new_degens.append(tuple(table))
        degens.append(tuple(new_degens))
        current = Skeleton(
            s.name, k, levels, faces, degens + [()], basepoint=s.basepoint
        )
    out = TruncatedSimplicialSet(
        f"{s.name}^", cap, levels, faces, degens + [()], basepoint=s.basepoint,
        em_meta=s.em_meta,
    )
    return out


def _degeneracy_tuple(k, ref: SimplexRef, i):
    """The face tuple of s_i(ref) written with the operators one level down."""
    d = ref.dim
    entries = []
    for j in range(i):
        entries.append(k.degen(k.face(ref, j), i - 1).index)
    entries.append(ref.index)
    entries.append(ref.index)
    for j in range(i + 1, d + 1):
        entries.append(k.degen(k.face(ref, j), i).index)
    return tuple(entries)


def enumerate_maps(source, target, budget=DEFAULT_LEVEL_BUDGET):
    """All simplicial maps source -> target (equal caps), found bottom-up.

    Nondegenerate simplices are assigned level by level; a candidate image
    must have exactly the already-determined boundary, which is a single
    lookup in the target's boundary index.  Degenerate simplices are forced.
    Every returned table is re-validated.
    """
    from .core import validate_map

    if source.cap != target.cap:
        raise ValueError("cap mismatch")
    cap = source.cap
    nondeg = [source.nondegenerate_indices(d) for d in range(cap + 1)]
    results = []

    tables = [[None] * source.level_size(d) for d in range(cap + 1)]

    def fill_degenerate(d):
        """Forced values for degenerate simplices at level d; False on clash."""
        for x in range(source.level_size(d)):
            if tables[d][x] is not None:
                continue
            isdeg, wit = source.is_degenerate(SimplexRef(d, x))
            if not isdeg:
                return False
            i, y = wit
            img = tables[d - 1][y.index]
            if img is None:
                return False
            tables[d][x] = target.degens[d - 1][i][img]
        return True

    def assign(d, pos):
        if len(results) >= budget:
            raise BudgetExceeded(d, len(results), budget)
        if d > cap:
            candidate = [tuple(t) for t in tables]
            f = SimplicialMap(source, target, candidate)
            if validate_map(f).ok:
                results.append(f)
            return
        if pos == len(nondeg[d]):
            saved = list(tables[d])
            if fill_degenerate(d):
                assign(d + 1, 0)
            tables[d][:] = saved
            return
        x = nondeg[d][pos]
        if d == 0:
            for img in range(target.level_size(0)):
                tables[0][x] = img
                assign(d, pos + 1)
                tables[0][x] = None
        else:
            want = tuple(tables[d - 1][source.faces[d][i][x]] for i in range(d + 1))
            for img in target.boundary_index(d).get(want, ()):
                tables[d][x] = img
                assign(d, pos + 1)
                tables[d][x] = None

    assign(0, 0)
    return results


def completion_adjunction_check(k, s: Skeleton, cap=None, budget=DEFAULT_LEVEL_BUDGET):
    """Verify Hom(K, completion(S)) matches skeleton maps R_n K -> S.

    Both hom-sets are enumerated; the extension rule f(x) := (f(d_0 x), ...,
    f(d_{m} x)) must send each skeleton map to a valid full map, and
    restriction must invert it.  Returns a report dict.
    """
    n = s.cap
    if k.cap < n:
        raise ValueError("K must have cap at least the skeleton dimension")
    shat = complete(s, k.cap, level_budget=budget)
    full_maps = enumerate_maps(k, shat, budget)
    rk = truncate(k, n)
    skel_maps = enumerate_maps(rk, s, budget)

    restricted = {tuple(f.table[: n + 1]) for f in full_maps}
    skel_set = {tuple(g.table) for g in skel_maps}
    extensions_ok = True
    extended = set()
    for g in skel_maps:
        table = [list(t) for t in g.table]
        ok = True
        for d in range(n + 1, k.cap + 1):
            table.append([None] * k.level_size(d))
            for x in range(k.level_size(d)):
                tup = tuple(table[d - 1][k.faces[d][i][x]] for i in range(d + 1))
                hits = shat.boundary_index(d).get(tup, ())
                if len(hits) != 1:
                    ok = False
                    break
                table[d][x] = hits[0]
            if not ok:
                break
        if not ok:
            extensions_ok = False
            continue
        f = SimplicialMap(k, shat, [tuple(t) for t in table])
        from .core import validate_map

        if not validate_map(f).ok:
            extensions_ok = False
            continue
        extended.add(tuple(f.table))
    full_set = {tuple(f.table) for f in full_maps}
    bijection = (
        extensions_ok
        and restricted == skel_set
        and extended == full_set
        and len(full_maps) == len(skel_maps)
    )
    return {
        "full_map_count": len(full_maps),
        "skeleton_map_count": len(skel_maps),
        "bijection": bijection,
    }
