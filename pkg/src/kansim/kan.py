"""Cycles, horns, fillings and the homotopy machinery built on them.

Conventions: an n-cycle is a compatible (n+2)-tuple of n-simplices, filled
by an (n+1)-simplex whose face tuple it is.  An (n,k)-horn is such a tuple
with position k unspecified; a completion supplies the missing n-simplex, a
filling fills the completed cycle.  Horn and cycle enumeration backtrack
left to right: the compatibility equations pin down faces of later entries,
so candidates come from face-value indexes rather than a full product scan.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import Skeleton, SimplexRef, SimplicialMap, SubcomplexMask, TruncatedSimplicialSet


class CapInsufficientError(RuntimeError):
    """The question needs simplices above the truncation cap; answer unknowable."""


class InsufficientKanError(RuntimeError):
    """A required horn filling or product witness does not exist within cap."""


@dataclass(frozen=True)
class SimplexCycle:
    dim: int
    entries: tuple[SimplexRef, ...]

    def __post_init__(self):
        if len(self.entries) != self.dim + 2:
            raise ValueError("an n-cycle has n+2 entries")
        if any(e.dim != self.dim for e in self.entries):
            raise ValueError("cycle entries must be dimension-homogeneous")


@dataclass(frozen=True)
class SimplexHorn:
    dim: int
    gap: int
    entries: tuple[SimplexRef | None, ...]

    def __post_init__(self):
        if len(self.entries) != self.dim + 2:
            raise ValueError("an (n,k)-horn has n+2 positions")
        if not 0 <= self.gap <= self.dim + 1:
            raise ValueError("gap out of range")
        if self.entries[self.gap] is not None:
            raise ValueError("gap position must be unspecified")
        for pos, e in enumerate(self.entries):
            if pos != self.gap and (e is None or e.dim != self.dim):
                raise ValueError("non-gap entries must be simplices of the horn dimension")


@dataclass(frozen=True)
class HomotopyWitness:
    h: SimplexRef
    kind: str  # "absolute" | "relative"
    h_l: SimplexRef | None = None


def is_cycle(k: TruncatedSimplicialSet, entries):
    """Exact compatibility check; returns (ok, first violated (i, j) or None)."""
    entries = tuple(entries)
    dims = {e.dim for e in entries}
    if len(dims) != 1:
        raise ValueError("entries must be dimension-homogeneous")
    dim = dims.pop()
    if dim == 0:
        return True, None
    for j in range(1, len(entries)):
        for i in range(j):
            if k.face(entries[j], i) != k.face(entries[i], j - 1):
                return False, (i, j)
    return True, None


def is_horn(k: TruncatedSimplicialSet, entries, gap):
    """Compatibility among the specified entries of a horn."""
    entries = list(entries)
    specified = [e for pos, e in enumerate(entries) if pos != gap]
    dims = {e.dim for e in specified}
    if len(dims) != 1:
        raise ValueError("entries must be dimension-homogeneous")
    dim = dims.pop()
    if dim == 0:
        return True
    for j in range(1, len(entries)):
        if j == gap:
            continue
        for i in range(j):
            if i == gap:
                continue
            if k.face(entries[j], i) != k.face(entries[i], j - 1):
                return False
    return True


def _candidates_with_faces(k, dim, constraints):
    """Sorted level indices x at `dim` with d_i x = v for every (i, v) given."""
    if not constraints:
        return list(range(k.level_size(dim)))
    fvi = k.face_value_index(dim)
    smallest = None
    for i, v in constraints.items():
        lst = fvi[i].get(v)
        if not lst:
            return []
        if smallest is None or len(lst) < len(smallest[1]):
            smallest = (i, lst)
    out = []
    for x in smallest[1]:
        if all(k.faces[dim][i][x] == v for i, v in constraints.items()):
            out.append(x)
    return out


def find_filling(k: TruncatedSimplicialSet, cycle: SimplexCycle):
    """The minimal (n+1)-simplex whose face tuple is the cycle, or None."""
    if cycle.dim + 1 > k.cap:
        raise CapInsufficientError(
            f"fillings of a {cycle.dim}-cycle live at dimension {cycle.dim + 1}, above cap {k.cap}"
        )
    key = tuple(e.index for e in cycle.entries)
    hits = k.boundary_index(cycle.dim + 1).get(key)
    if not hits:
        return None
    return SimplexRef(cycle.dim + 1, hits[0])


def find_completions(k: TruncatedSimplicialSet, horn: SimplexHorn):
    """All (completion, filling) pairs for the horn, in canonical order."""
    n = horn.dim
    if n + 1 > k.cap:
        raise CapInsufficientError(
            f"fillings of a {n}-horn live at dimension {n + 1}, above cap {k.cap}"
        )
    constraints = {
        pos: e.index for pos, e in enumerate(horn.entries) if pos != horn.gap
    }
    out = []
    for z in _candidates_with_faces(k, n + 1, constraints):
        completion = SimplexRef(n, k.faces[n + 1][horn.gap][z])
        out.append((completion, SimplexRef(n + 1, z)))
    return out


def enumerate_horns(k: TruncatedSimplicialSet, dim, gap, brute_force=False):
    """All (dim, gap)-horns as tuples of level indices with None at the gap."""
    size = k.level_size(dim)
    width = dim + 2
    positions = [p for p in range(width) if p != gap]
    if brute_force:
        out = []
        for combo in itertools.product(range(size), repeat=width - 1):
            entries = [None] * width
            for p, v in zip(positions, combo):
                entries[p] = v
            if _horn_compatible(k, dim, entries, gap):
                out.append(tuple(entries))
        return out
    if dim == 0:
        out = []
        for v in range(size):
            entries = [None, None]
            entries[positions[0]] = v
            out.append(tuple(entries))
        return out
    out = []
    entries = [None] * width

    def extend(idx):
        if idx == len(positions):
            out.append(tuple(entries))
            return
        j = positions[idx]
        constraints = {}
        for i in range(j):
            if i == gap or entries[i] is None:
                continue
            constraints[i] = k.faces[dim][j - 1][entries[i]]
        for cand in _candidates_with_faces(k, dim, constraints):
            entries[j] = cand
            extend(idx + 1)
            entries[j] = None

    extend(0)
    return out


def _horn_compatible(k, dim, entries, gap):
    if dim == 0:
        return True
    for j in range(len(entries)):
        if j == gap:
            continue
        for i in range(j):
            if i == gap:
                continue
            a = k.faces[dim][i][entries[j]]
            b = k.faces[dim][j - 1][entries[i]]
            if a != b:
                return False
    return True


@dataclass(frozen=True)
class KanReport:
    passed: bool
    up_to_dim: int
    cap: int
    counterexample: SimplexHorn | None = None

    def describe(self) -> str:
        if self.passed:
            return f"Kan property holds for horns up to dimension {self.up_to_dim} (within cap {self.cap})"
        h = self.counterexample
        return (
            f"unfillable ({h.dim},{h.gap})-horn found; verdict within cap {self.cap}"
        )

    def to_json(self, k=None):
        out = {"passed": self.passed, "up_to_dim": self.up_to_dim, "within_cap": self.cap}
        if self.counterexample is not None:
            h = self.counterexample
            out["counterexample"] = {
                "dim": h.dim,
                "gap": h.gap,
                "entries": [
                    None if e is None else (k.label(e) if k else e.index)
                    for e in h.entries
                ],
            }
        return out


def kan_check(k: TruncatedSimplicialSet, up_to_dim) -> KanReport:
    """Search every (n,gap)-horn for n <= up_to_dim for a filling.

    Fillings of n-horns live at dimension n+1, so the verdict is only
    meaningful for up_to_dim + 1 <= cap.
    """
    if up_to_dim + 1 > k.cap:
        raise CapInsufficientError("kan_check needs fillings within cap; lower up_to_dim")
    for n in range(up_to_dim + 1):
        for gap in range(n + 2):
            for entries in enumerate_horns(k, n, gap):
                constraints = {
                    pos: v for pos, v in enumerate(entries) if pos != gap
                }
                if not _candidates_with_faces(k, n + 1, constraints):
                    horn = SimplexHorn(
                        n, gap,
                        tuple(None if v is None else SimplexRef(n, v) for v in entries),
                    )
                    return KanReport(False, up_to_dim, k.cap, horn)
    return KanReport(True, up_to_dim, k.cap)


@dataclass(frozen=True)
class SkeletonKanReport:
    passed: bool
    dim: int
    failure: str | None = None

    def describe(self) -> str:
        return "skeleton Kan property holds" if self.passed else self.failure


def kan_skeleton_check(s: Skeleton) -> SkeletonKanReport:
    """Horns below the top dimension must fill; top horns must complete to cycles."""
    n = s.cap
    for m in range(n):
        for gap in range(m + 2):
            for entries in enumerate_horns(s, m, gap):
                constraints = {pos: v for pos, v in enumerate(entries) if pos != gap}
                if not _candidates_with_faces(s, m + 1, constraints):
                    return SkeletonKanReport(
                        False, n, f"unfillable ({m},{gap})-horn in the skeleton"
                    )
    for gap in range(n + 2):
        for entries in enumerate_horns(s, n, gap):
            if n == 0:
                if s.level_size(0) == 0:
                    return SkeletonKanReport(False, n, "no vertex completes a 0-horn")
                continue
            constraints = {}
            ok = True
            for i, v in enumerate(entries):
                if i == gap or v is None:
                    continue
                if i < gap:
                    constraints[i] = s.faces[n][gap - 1][v]
                else:
                    constraints[i - 1] = s.faces[n][gap][v]
            if not _candidates_with_faces(s, n, constraints):
                return SkeletonKanReport(
                    False, n, f"({n},{gap})-horn cannot be completed to a cycle"
                )
    return SkeletonKanReport(True, n)


@dataclass(frozen=True)
class MinimalReport:
    passed: bool
    failure: tuple | None = None
    note: str | None = None

    def describe(self) -> str:
        if self.passed:
            return "minimal" + (f" ({self.note})" if self.note else "")
        dim, a, b = self.failure
        return f"distinct homotopic simplices with equal boundary at dimension {dim}: {a!r} ~ {b!r}"


def minimal_check(k: TruncatedSimplicialSet) -> MinimalReport:
    """No two distinct simplices with equal boundary may be homotopic.

    For a skeleton the top level instead requires boundary-injectivity.
    Homotopy at the top level of a plain complex is not decidable within
    cap; the report carries a note for that case.
    """
    is_skeleton = isinstance(k, Skeleton)
    top = k.cap
    for dim in range(top):
        groups = {}
        if dim == 0:
            groups[()] = list(range(k.level_size(0)))
        else:
            for x in range(k.level_size(dim)):
                key = tuple(k.faces[dim][i][x] for i in range(dim + 1))
                groups.setdefault(key, []).append(x)
        for members in groups.values():
            for a, b in itertools.combinations(members, 2):
                w = homotopic(k, SimplexRef(dim, a), SimplexRef(dim, b))
                if w is not None:
                    return MinimalReport(
                        False, (dim, k.levels[dim][a], k.levels[dim][b])
                    )
    if is_skeleton and top >= 1:
        seen = {}
        for x in range(k.level_size(top)):
            key = tuple(k.faces[top][i][x] for i in range(top + 1))
            if key in seen:
                return MinimalReport(
                    False, (top, k.levels[top][seen[key]], k.levels[top][x])
                )
            seen[key] = x
        return MinimalReport(True)
    return MinimalReport(True, note=f"homotopy at dimension {top} not decidable within cap")


def matrix_lemma_solve(k: TruncatedSimplicialSet, cycles, gap) -> SimplexRef:
    """Fill cycle `gap` of a compatible cycle tuple whose other members fill.

    Fillings of the other cycles form a horn; any completion of that horn
    has the missing cycle as its boundary, which is verified before
    returning.
    """
    cycles = [c if isinstance(c, SimplexCycle) else SimplexCycle(c[0].dim, tuple(c)) for c in cycles]
    n = len(cycles) - 2
    if n < 1:
        raise ValueError("need at least three cycles")
    for c in cycles:
        if c.dim != n - 1:
            raise ValueError(f"expected ({n - 1})-cycles for a {n + 2}-tuple")
    for j in range(len(cycles)):
        for i in range(j):
            if cycles[j].entries[i] != cycles[i].entries[j - 1]:
                raise ValueError(
                    f"cycle tuple not compatible: entry {i} of cycle {j} "
                    f"differs from entry {j - 1} of cycle {i}"
                )
    fillings = {}
    for i, c in enumerate(cycles):
        if i == gap:
            continue
        y = find_filling(k, c)
        if y is None:
            raise InsufficientKanError(f"prerequisite cycle {i} has no filling")
        fillings[i] = y
    entries = tuple(
        None if i == gap else fillings[i] for i in range(len(cycles))
    )
    horn = SimplexHorn(n, gap, entries)
    completions = find_completions(k, horn)
    if not completions:
        raise InsufficientKanError("the filling horn has no completion; complex not Kan enough")
    y_gap = completions[0][0]
    if k.boundary_tuple(y_gap) != cycles[gap].entries:
        raise AssertionError("completion does not bound the requested cycle")
    return y_gap


def homotopic(k: TruncatedSimplicialSet, x: SimplexRef, y: SimplexRef):
    """Witness for x ~ y (equal boundaries required), or None.

    The defining cycle is (s_{n-1}d_0 x, ..., s_{n-1}d_{n-1} x, x, y); at
    dimension 0 it degenerates to the pair (x, y).
    """
    if x.dim != y.dim:
        raise ValueError("dimensions differ")
    n = x.dim
    if n + 1 > k.cap:
        raise CapInsufficientError("homotopy needs one dimension of headroom")
    if n >= 1 and k.boundary_tuple(x) != k.boundary_tuple(y):
        raise ValueError("homotopy requires equal boundaries")
    if n == 0:
        key = (x.index, y.index)
    else:
        key = tuple(
            k.degen(k.face(x, i), n - 1).index for i in range(n)
        ) + (x.index, y.index)
    hits = k.boundary_index(n + 1).get(key)
    if not hits:
        return None
    return HomotopyWitness(SimplexRef(n + 1, hits[0]), "absolute")


def homotopic_rel(k: TruncatedSimplicialSet, sub: SubcomplexMask, x: SimplexRef, y: SimplexRef):
    """Witness for x ~ y relative to the subcomplex, or None.

    Requires d_i x = d_i y for i >= 1 and d_0 x, d_0 y in the subcomplex;
    the filling's 0th face is the subcomplex part of the witness.
    """
    if sub.parent is not k:
        raise ValueError("mask belongs to a different complex")
    if x.dim != y.dim:
        raise ValueError("dimensions differ")
    n = x.dim
    if n < 1:
        raise ValueError("relative homotopy starts at dimension 1")
    if n + 1 > k.cap:
        raise CapInsufficientError("relative homotopy needs one dimension of headroom")
    for i in range(1, n + 1):
        if k.face(x, i) != k.face(y, i):
            raise ValueError(f"d_{i} differs between the simplices")
    if not sub.contains(k.face(x, 0)) or not sub.contains(k.face(y, 0)):
        raise ValueError("d_0 of both simplices must lie in the subcomplex")
    constraints = {n: x.index, n + 1: y.index}
    for i in range(1, n):
        constraints[i] = k.degen(k.face(x, i), n - 1).index
    for h in _candidates_with_faces(k, n + 1, constraints):
        h_l = k.faces[n + 1][0][h]
        if h_l in sub.members[n]:
            return HomotopyWitness(
                SimplexRef(n + 1, h), "relative", SimplexRef(n, h_l)
            )
    return None


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class HomotopyGroupTable:
    """Homotopy classes at a fixed dimension with their composition table.

    mult/inverse are None at dimension 0 (and for relative dimension 1),
    where only the pointed set is defined.  Class indices are canonical:
    classes are sorted by their smallest member.
    """

    complex: TruncatedSimplicialSet
    dim: int
    classes: tuple[tuple[int, ...], ...]
    identity_class: int
    mult: tuple[tuple[int, ...], ...] | None
    inverse: tuple[int, ...] | None
    abelian: bool | None
    warnings: tuple[str, ...] = ()
    relative: bool = False

    def order(self) -> int:
        return len(self.classes)

    @property
    def is_trivial(self) -> bool:
        return len(self.classes) == 1

    def class_of(self, ref: SimplexRef) -> int:
        for ci, members in enumerate(self.classes):
            if ref.index in members:
                return ci
        raise KeyError(f"{ref} is not an eligible simplex")

    def representative(self, ci) -> SimplexRef:
        return SimplexRef(self.dim, self.classes[ci][0])

    def to_json(self):
        k = self.complex
        return {
            "dim": self.dim,
            "relative": self.relative,
            "classes": [
                [k.levels[self.dim][i] for i in members] for members in self.classes
            ],
            "identity_class": self.identity_class,
            "mult": None if self.mult is None else [list(r) for r in self.mult],
            "inverse": None if self.inverse is None else list(self.inverse),
            "abelian": self.abelian,
            "warnings": list(self.warnings),
        }


def _closure_classes(eligible, related):
    uf = _UnionFind(eligible)
    for a, b in related:
        uf.union(a, b)
    buckets = {}
    for x in eligible:
        buckets.setdefault(uf.find(x), []).append(x)
    classes = sorted((tuple(sorted(v)) for v in buckets.values()), key=lambda c: c[0])
    return classes


def _relation_warnings(eligible, witness):
    """Check the raw relation is already an equivalence; list anomalies."""
    warnings = []
    rel = {(a, b) for a in eligible for b in eligible if a != b and witness(a, b)}
    for a, b in rel:
        if (b, a) not in rel:
            warnings.append("raw homotopy relation is not symmetric before closure")
            break
    pairs = set(rel)
    for a, b in rel:
        for c in eligible:
            if c not in (a, b) and (b, c) in pairs and (a, c) not in pairs:
                warnings.append("raw homotopy relation is not transitive before closure")
                return warnings, rel
    return warnings, rel


def homotopy_group(k: TruncatedSimplicialSet, n, basepoint=None) -> HomotopyGroupTable:
    """Classes of n-simplices with boundary at the basepoint, with composition.

    Composition [x][y] fills the cycle (*, ..., *, y, xy, x); the first
    completing simplex in canonical order is taken, which is well defined up
    to homotopy on Kan-passing complexes.  A failed product search raises
    InsufficientKanError.
    """
    if basepoint is None:
        if k.basepoint is None:
            raise ValueError("complex has no basepoint")
        basepoint = SimplexRef(0, k.basepoint)
    if n + 1 > k.cap:
        raise CapInsufficientError(f"homotopy group at {n} needs cap >= {n + 1}")
    warnings = []
    kan = kan_check(k, n)
    if not kan.passed:
        warnings.append(
            f"kan_check failed through dimension {n}; classes may not compose"
        )

    star = [basepoint]
    for d in range(1, n + 2):
        if d <= k.cap:
            star.append(k.degen(star[-1], 0))
    star_n = star[n]

    if n == 0:
        eligible = list(range(k.level_size(0)))
    else:
        want = tuple(star[n - 1].index for _ in range(n + 1))
        eligible = sorted(k.boundary_index(n).get(want, ()))

    pair_witness = {}

    def witness(a, b):
        key = (a, b)
        if key not in pair_witness:
            pair_witness[key] = homotopic(k, SimplexRef(n, a), SimplexRef(n, b))
        return pair_witness[key]

    rel_warnings, rel = _relation_warnings(eligible, witness)
    warnings.extend(rel_warnings)
    classes = _closure_classes(eligible, rel)
    class_index = {x: ci for ci, members in enumerate(classes) for x in members}
    identity_class = class_index[star_n.index]

    if n == 0:
        return HomotopyGroupTable(
            k, 0, tuple(classes), identity_class, None, None, None, tuple(warnings)
        )

    def compose_classes(ca, cb):
        x = SimplexRef(n, classes[ca][0])
        y = SimplexRef(n, classes[cb][0])
        constraints = {n - 1: y.index, n + 1: x.index}
        for i in range(n - 1):
            constraints[i] = star_n.index
        hs = _candidates_with_faces(k, n + 1, constraints)
        zs = sorted({k.faces[n + 1][n][h] for h in hs})
        for z in zs:
            if z in class_index:
                return class_index[z]
        raise InsufficientKanError(
            f"no composite found for classes {ca} * {cb} at dimension {n}"
        )

    size = len(classes)
    mult = tuple(
        tuple(compose_classes(ca, cb) for cb in range(size)) for ca in range(size)
    )
    _check_group_axioms(mult, identity_class)
    inverse = tuple(
        next(b for b in range(size) if mult[a][b] == identity_class) for a in range(size)
    )
    abelian = all(mult[a][b] == mult[b][a] for a in range(size) for b in range(size))
    return HomotopyGroupTable(
        k, n, tuple(classes), identity_class, mult, inverse, abelian, tuple(warnings)
    )


def _check_group_axioms(mult, e):
    size = len(mult)
    for a in range(size):
        if mult[a][e] != a or mult[e][a] != a:
            raise AssertionError("identity axiom fails in the class table")
    for a in range(size):
        if not any(mult[a][b] == e for b in range(size)):
            raise AssertionError("an element has no inverse in the class table")
        if not any(mult[b][a] == e for b in range(size)):
            raise AssertionError("an element has no left inverse in the class table")
    for a in range(size):
        for b in range(size):
            for c in range(size):
                if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
                    raise AssertionError("associativity fails in the class table")


def relative_homotopy_group(
    k: TruncatedSimplicialSet, sub: SubcomplexMask, n, basepoint=None
) -> HomotopyGroupTable:
    """Classes of n-simplices with boundary (l, *, ..., *), l in the subcomplex.

    Composition is defined for n >= 2 by filling (h, *, ..., *, y, xy, x)
    with the 0th face ranging over the subcomplex; at n = 1 only the
    pointed set is returned.
    """
    if sub.parent is not k:
        raise ValueError("mask belongs to a different complex")
    if n < 1:
        raise ValueError("relative homotopy groups start at dimension 1")
    if basepoint is None:
        if k.basepoint is None:
            raise ValueError("complex has no basepoint")
        basepoint = SimplexRef(0, k.basepoint)
    if k.basepoint is not None and k.basepoint not in sub.members[0]:
        raise ValueError("basepoint must lie in the subcomplex")
    if n + 1 > k.cap:
        raise CapInsufficientError(f"relative group at {n} needs cap >= {n + 1}")

    warnings = []
    kan = kan_check(k, n)
    if not kan.passed:
        warnings.append(f"kan_check failed through dimension {n}")

    star = [basepoint]
    for d in range(1, n + 2):
        if d <= k.cap:
            star.append(k.degen(star[-1], 0))
    star_n = star[n]

    eligible = []
    for x in range(k.level_size(n)):
        faces = [k.faces[n][i][x] for i in range(n + 1)]
        if faces[0] in sub.members[n - 1] and all(
            v == star[n - 1].index for v in faces[1:]
        ):
            eligible.append(x)

    pair_witness = {}

    def witness(a, b):
        key = (a, b)
        if key not in pair_witness:
            pair_witness[key] = homotopic_rel(
                k, sub, SimplexRef(n, a), SimplexRef(n, b)
            )
        return pair_witness[key]

    rel_warnings, rel = _relation_warnings(eligible, witness)
    warnings.extend(rel_warnings)
    classes = _closure_classes(eligible, rel)
    class_index = {x: ci for ci, members in enumerate(classes) for x in members}
    identity_class = class_index[star_n.index]

    if n == 1:
        return HomotopyGroupTable(
            k, 1, tuple(classes), identity_class, None, None, None, tuple(warnings),
            relative=True,
        )

    def compose_classes(ca, cb):
        x = SimplexRef(n, classes[ca][0])
        y = SimplexRef(n, classes[cb][0])
        constraints = {n - 1: y.index, n + 1: x.index}
        for i in range(1, n - 1):
            constraints[i] = star_n.index
        for h in _candidates_with_faces(k, n + 1, constraints):
            if k.faces[n + 1][0][h] not in sub.members[n]:
                continue
            z = k.faces[n + 1][n][h]
            if z in class_index:
                return class_index[z]
        raise InsufficientKanError(
            f"no relative composite found for classes {ca} * {cb}"
        )

    size = len(classes)
    mult = tuple(
        tuple(compose_classes(ca, cb) for cb in range(size)) for ca in range(size)
    )
    _check_group_axioms(mult, identity_class)
    inverse = tuple(
        next(b for b in range(size) if mult[a][b] == identity_class)
        for a in range(size)
    )
    abelian = all(mult[a][b] == mult[b][a] for a in range(size) for b in range(size))
    return HomotopyGroupTable(
        k, n, tuple(classes), identity_class, mult, inverse, abelian, tuple(warnings),
        relative=True,
    )


@dataclass(frozen=True)
class ClassMap:
    """A map of homotopy class tables with its verification results."""

    source: HomotopyGroupTable
    target: HomotopyGroupTable
    mapping: tuple[int, ...]
    well_defined: bool
    homomorphism: bool | None  # None when either side lacks a product

    def image(self):
        return sorted(set(self.mapping))

    def kernel(self):
        base = self.target.identity_class
        return sorted(ci for ci, img in enumerate(self.mapping) if img == base)


def class_map(source: HomotopyGroupTable, target: HomotopyGroupTable, simplex_map) -> ClassMap:
    """Build [x] -> [simplex_map(x)] and verify it is well defined.

    simplex_map takes a source level index and returns a target level index;
    every member of every class must land in one target class.
    """
    mapping = []
    well = True
    for members in source.classes:
        images = {simplex_map(x) for x in members}
        try:
            image_classes = {target.class_of(SimplexRef(target.dim, i)) for i in images}
        except KeyError:
            well = False
            image_classes = set()
        if len(image_classes) != 1:
            well = False
            mapping.append(-1)
        else:
            mapping.append(image_classes.pop())
    hom = None
    if well and source.mult is not None and target.mult is not None:
        hom = all(
            mapping[source.mult[a][b]] == target.mult[mapping[a]][mapping[b]]
            for a in range(len(source.classes))
            for b in range(len(source.classes))
        )
    return ClassMap(source, target, tuple(mapping), well, hom)


def induced_homomorphism(f: SimplicialMap, n, src_table=None, tgt_table=None) -> ClassMap:
    """The map on homotopy classes induced by a pointed simplicial map."""
    src_table = src_table or homotopy_group(f.source, n)
    tgt_table = tgt_table or homotopy_group(f.target, n)
    return class_map(src_table, tgt_table, lambda x: f.table[n][x])


def boundary_homomorphism(
    k: TruncatedSimplicialSet, sub: SubcomplexMask, n,
    rel_table=None, sub_table=None, sub_complex=None, sub_back=None,
) -> ClassMap:
    """The connecting map [x] -> [d_0 x] from relative classes at n to the
    subcomplex classes at n-1."""
    from .core import materialize

    if sub_complex is None:
        sub_complex, to_parent = materialize(sub)
        sub_back = [{v: i for i, v in enumerate(tp)} for tp in to_parent]
    rel_table = rel_table or relative_homotopy_group(k, sub, n)
    sub_table = sub_table or homotopy_group(sub_complex, n - 1)
    return class_map(
        rel_table, sub_table, lambda x: sub_back[n - 1][k.faces[n][0][x]]
    )


@dataclass(frozen=True)
class ExactnessReport:
    nodes: tuple[dict, ...]
    passed: bool

    def to_json(self):
        return {"passed": self.passed, "nodes": list(self.nodes)}


def exactness_check(k: TruncatedSimplicialSet, sub: SubcomplexMask, up_to) -> ExactnessReport:
    """Verify im = ker at every computable node of the pair sequence.

    The sequence runs ... -> pi_n(L) -> pi_n(K) -> pi_n(K,L) -> pi_{n-1}(L)
    -> ... -> pi_0(L) -> pi_0(K) -> pi_0(K)/pi_0(L); the tail quotient
    collapses the image of pi_0(L) to the base class.
    """
    from .core import materialize

    if up_to + 1 > k.cap:
        raise CapInsufficientError(f"exactness up to {up_to} needs cap >= {up_to + 1}")
    sub_complex, to_parent = materialize(sub)
    sub_back = [{v: i for i, v in enumerate(tp)} for tp in to_parent]
    pi_k = {m: homotopy_group(k, m) for m in range(up_to + 1)}
    pi_l = {m: homotopy_group(sub_complex, m) for m in range(up_to + 1)}
    pi_rel = {m: relative_homotopy_group(k, sub, m) for m in range(1, up_to + 1)}

    def inclusion(m):
        return class_map(pi_l[m], pi_k[m], lambda x: to_parent[m][x])

    def project(m):
        return class_map(pi_k[m], pi_rel[m], lambda x: x)

    def connect(m):
        return class_map(
            pi_rel[m], pi_l[m - 1], lambda x: sub_back[m - 1][k.faces[m][0][x]]
        )

    nodes = []
    passed = True

    def record(name, im, ker, maps_ok):
        nonlocal passed
        ok = maps_ok and sorted(im) == sorted(ker)
        passed = passed and ok
        nodes.append({"node": name, "image": sorted(im), "kernel": sorted(ker), "exact": ok})

    for m in range(up_to, 0, -1):
        inc, proj = inclusion(m), project(m)
        con = connect(m)
        record(
            f"pi_{m}(K)", inc.image(), proj.kernel(),
            inc.well_defined and proj.well_defined,
        )
        record(
            f"pi_{m}(K,L)", proj.image(), con.kernel(),
            proj.well_defined and con.well_defined,
        )
        if m - 1 >= 0:
            inc_below = inclusion(m - 1)
            record(
                f"pi_{m - 1}(L)", con.image(), inc_below.kernel(),
                con.well_defined and inc_below.well_defined,
            )
    # tail: pi_0(K) -> pi_0(K)/pi_0(L)
    inc0 = inclusion(0)
    quotient_kernel = sorted(set(inc0.mapping) | {pi_k[0].identity_class})
    record(f"pi_0(K)", sorted(set(inc0.mapping) | {pi_k[0].identity_class}), quotient_kernel, inc0.well_defined)
    return ExactnessReport(tuple(nodes), passed)


def pair_bijection_check(k: TruncatedSimplicialSet, n) -> dict:
    """pi_n(K, *) vs pi_n(K, *-closure, *): the canonical map must be a bijection."""
    from .core import basepoint_mask

    sub = basepoint_mask(k)
    absolute = homotopy_group(k, n)
    relative = relative_homotopy_group(k, sub, n)
    cm = class_map(absolute, relative, lambda x: x)
    bijective = (
        cm.well_defined
        and len(set(cm.mapping)) == len(cm.mapping)
        and set(cm.mapping) == set(range(len(relative.classes)))
    )
    return {
        "n": n,
        "absolute_classes": len(absolute.classes),
        "relative_classes": len(relative.classes),
        "bijective": bijective,
    }
