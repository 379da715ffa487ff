"""Finite, dimension-truncated simplicial sets with validated operator tables.

A complex stores one finite level of simplices per dimension up to a cap N,
total face tables d_i for 1 <= k <= N and degeneracy tables s_i for
0 <= k < N.  Everything is index-based internally; labels are opaque text
used for serialization and reporting.  All values are immutable after
construction; the private caches are lazy lookup structures only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple


class SimplexRef(NamedTuple):
    dim: int
    index: int


IDENTITY_TEXT = {
    1: "d_i d_j = d_{j-1} d_i",
    2: "s_i s_j = s_{j+1} s_i",
    3: "d_i s_j = s_{j-1} d_i",
    4: "d_i s_i = id = d_{i+1} s_i",
    5: "d_i s_j = s_j d_{i-1}",
}


@dataclass(frozen=True)
class Violation:
    identity: int
    k: int
    i: int
    j: int
    simplex: str

    def describe(self) -> str:
        return (
            f"identity ({self.identity}) [{IDENTITY_TEXT[self.identity]}] fails at "
            f"level {self.k}, i={self.i}, j={self.j}, simplex {self.simplex!r}"
        )


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    structural: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations and not self.structural

    def describe(self) -> str:
        if self.ok:
            return "valid"
        lines = list(self.structural) + [v.describe() for v in self.violations]
        return "\n".join(lines)

    def to_json(self):
        return {
            "ok": self.ok,
            "structural": list(self.structural),
            "violations": [
                {
                    "identity": v.identity,
                    "rule": IDENTITY_TEXT[v.identity],
                    "level": v.k,
                    "i": v.i,
                    "j": v.j,
                    "simplex": v.simplex,
                }
                for v in self.violations
            ],
        }


class ParseError(ValueError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(report.describe())
        self.report = report


class TruncatedSimplicialSet:
    """Levelwise finite simplicial set truncated at dimension `cap`.

    levels[k]   -- tuple of simplex labels at dimension k
    faces[k][i] -- tuple mapping index j at level k to an index at level k-1
                   (defined for 1 <= k <= cap, 0 <= i <= k)
    degens[k][i]-- same shape one dimension up (0 <= k < cap, 0 <= i <= k)
    """

    def __init__(self, name, cap, levels, faces, degens, basepoint=None,
                 subcomplexes=None, em_meta=None):
        self.name = str(name)
        self.cap = int(cap)
        self.levels = tuple(tuple(str(x) for x in lv) for lv in levels)
        self.faces = tuple(tuple(tuple(t) for t in per_k) for per_k in faces)
        self.degens = tuple(tuple(tuple(t) for t in per_k) for per_k in degens)
        self.basepoint = basepoint
        self.subcomplex_names = dict(subcomplexes or {})
        self.em_meta = em_meta
        self._structural_check()
        self._label_cache = {}
        self._boundary_cache = {}
        self._face_value_cache = {}
        self._degen_witness_cache = {}

    # -- structure ---------------------------------------------------------

    def _structural_check(self):
        if self.cap < 0:
            raise ValueError("cap must be nonnegative")
        if len(self.levels) != self.cap + 1:
            raise ValueError("levels length must be cap + 1")
        for k, lv in enumerate(self.levels):
            if len(set(lv)) != len(lv):
                raise ValueError(f"duplicate labels at level {k}")
        if len(self.faces) != self.cap + 1 or len(self.degens) != self.cap + 1:
            raise ValueError("operator tables must be indexed 0..cap")
        if self.faces[0] != ():
            raise ValueError("faces[0] must be empty")
        for k in range(1, self.cap + 1):
            if len(self.faces[k]) != k + 1:
                raise ValueError(f"need {k + 1} face operators at level {k}")
            for i, table in enumerate(self.faces[k]):
                if len(table) != len(self.levels[k]):
                    raise ValueError(f"face table d_{i} at level {k} has wrong length")
                for v in table:
                    if not 0 <= v < len(self.levels[k - 1]):
                        raise ValueError(f"face d_{i} at level {k} maps outside level {k - 1}")
        for k in range(self.cap):
            if len(self.degens[k]) != k + 1:
                raise ValueError(f"need {k + 1} degeneracy operators at level {k}")
            for i, table in enumerate(self.degens[k]):
                if len(table) != len(self.levels[k]):
                    raise ValueError(f"degeneracy table s_{i} at level {k} has wrong length")
                for v in table:
                    if not 0 <= v < len(self.levels[k + 1]):
                        raise ValueError(f"degeneracy s_{i} at level {k} maps outside level {k + 1}")
        if self.degens[self.cap] != ():
            raise ValueError("degens[cap] must be empty")
        if self.basepoint is not None:
            if not self.levels[0]:
                raise ValueError("basepoint in an empty level 0")
            if not 0 <= self.basepoint < len(self.levels[0]):
                raise ValueError("basepoint index out of range")

    # -- basic access ------------------------------------------------------

    def level_size(self, k) -> int:
        return len(self.levels[k])

    def label(self, ref: SimplexRef) -> str:
        return self.levels[ref.dim][ref.index]

    def ref_of(self, dim, label) -> SimplexRef:
        cache = self._label_cache.get(dim)
        if cache is None:
            cache = {lab: idx for idx, lab in enumerate(self.levels[dim])}
            self._label_cache[dim] = cache
        return SimplexRef(dim, cache[label])

    def refs(self, dim):
        return [SimplexRef(dim, i) for i in range(len(self.levels[dim]))]

    def face(self, ref: SimplexRef, i) -> SimplexRef:
        return SimplexRef(ref.dim - 1, self.faces[ref.dim][i][ref.index])

    def degen(self, ref: SimplexRef, i) -> SimplexRef:
        return SimplexRef(ref.dim + 1, self.degens[ref.dim][i][ref.index])

    def boundary_tuple(self, ref: SimplexRef):
        """The face tuple (d_0 x, ..., d_n x); defined for dim >= 1."""
        if ref.dim < 1:
            raise ValueError("boundary of a vertex is undefined")
        row = ref.index
        return tuple(
            SimplexRef(ref.dim - 1, self.faces[ref.dim][i][row])
            for i in range(ref.dim + 1)
        )

    def basepoint_ref(self, dim=0) -> SimplexRef:
        """The iterated degeneracy of the basepoint at the given level."""
        if self.basepoint is None:
            raise ValueError(f"complex {self.name!r} has no basepoint")
        ref = SimplexRef(0, self.basepoint)
        for _ in range(dim):
            ref = self.degen(ref, 0)
        return ref

    def is_degenerate(self, ref: SimplexRef):
        """True plus a witness (i, y) with s_i y = x when x is degenerate."""
        if ref.dim == 0:
            return False, None
        witnesses = self._degen_witnesses(ref.dim)
        w = witnesses.get(ref.index)
        if w is None:
            return False, None
        i, y = w
        return True, (i, SimplexRef(ref.dim - 1, y))

    def nondegenerate_indices(self, dim):
        if dim == 0:
            return list(range(self.level_size(0)))
        witnesses = self._degen_witnesses(dim)
        return [i for i in range(self.level_size(dim)) if i not in witnesses]

    def _degen_witnesses(self, dim):
        cache = self._degen_witness_cache.get(dim)
        if cache is None:
            cache = {}
            for i, table in enumerate(self.degens[dim - 1]):
                for src, img in enumerate(table):
                    if img not in cache:
                        cache[img] = (i, src)
                    else:
                        cache[img] = min(cache[img], (i, src))
            self._degen_witness_cache[dim] = cache
        return cache

    # -- lookup indexes for search -----------------------------------------

    def boundary_index(self, dim):
        """Map from face-index tuple to the list of simplices with that boundary."""
        cache = self._boundary_cache.get(dim)
        if cache is None:
            cache = {}
            tables = [self.faces[dim][i] for i in range(dim + 1)]
            for j in range(self.level_size(dim)):
                key = tuple(t[j] for t in tables)
                cache.setdefault(key, []).append(j)
            self._boundary_cache[dim] = cache
        return cache

    def face_value_index(self, dim):
        """face_value_index(dim)[i][v] = sorted indices x with d_i x = v."""
        cache = self._face_value_cache.get(dim)
        if cache is None:
            cache = []
            for i in range(dim + 1):
                per = {}
                for j, v in enumerate(self.faces[dim][i]):
                    per.setdefault(v, []).append(j)
                cache.append(per)
            self._face_value_cache[dim] = cache
        return cache

    def __repr__(self):
        sizes = ",".join(str(len(lv)) for lv in self.levels)
        return f"<{type(self).__name__} {self.name!r} cap={self.cap} levels=[{sizes}]>"


class Skeleton(TruncatedSimplicialSet):
    """A complex regarded as an n-skeleton; its dimension is its cap."""

    @property
    def dim(self):
        return self.cap


def validate(k: TruncatedSimplicialSet) -> ValidationReport:
    """Check all five operator identities wherever both sides are defined."""
    out = []
    cap = k.cap
    for n in range(cap + 1):
        size = k.level_size(n)
        for x in range(size):
            label = k.levels[n][x]
            # (1) d_i d_j = d_{j-1} d_i for i < j, needs n >= 2
            if n >= 2:
                for j in range(n + 1):
                    dj = k.faces[n][j][x]
                    for i in range(j):
                        lhs = k.faces[n - 1][i][dj]
                        rhs = k.faces[n - 1][j - 1][k.faces[n][i][x]]
                        if lhs != rhs:
                            out.append(Violation(1, n, i, j, label))
            # identities involving s_j: K_n -> K_{n+1}, need n < cap
            if n < cap:
                for j in range(n + 1):
                    sj = k.degens[n][j][x]
                    # (2) s_i s_j = s_{j+1} s_i for i <= j, needs n + 2 <= cap
                    if n + 2 <= cap:
                        for i in range(j + 1):
                            lhs = k.degens[n + 1][i][sj]
                            rhs = k.degens[n + 1][j + 1][k.degens[n][i][x]]
                            if lhs != rhs:
                                out.append(Violation(2, n, i, j, label))
                    for i in range(n + 2):
                        img = k.faces[n + 1][i][sj]
                        if i < j:
                            # (3) d_i s_j = s_{j-1} d_i
                            rhs = k.degens[n - 1][j - 1][k.faces[n][i][x]]
                            if img != rhs:
                                out.append(Violation(3, n, i, j, label))
                        elif i in (j, j + 1):
                            # (4) d_i s_i = id = d_{i+1} s_i
                            if img != x:
                                out.append(Violation(4, n, min(i, j), j, label))
                        else:
                            # (5) d_i s_j = s_j d_{i-1} for i > j + 1
                            rhs = k.degens[n - 1][j][k.faces[n][i - 1][x]]
                            if img != rhs:
                                out.append(Violation(5, n, i, j, label))
    return ValidationReport(tuple(out))


class SimplicialMap:
    """A levelwise function between two complexes with equal caps."""

    def __init__(self, source, target, table):
        if source.cap != target.cap:
            raise ValueError("cap mismatch between source and target")
        self.source = source
        self.target = target
        self.table = tuple(tuple(t) for t in table)
        if len(self.table) != source.cap + 1:
            raise ValueError("map table must cover every level")
        for k, t in enumerate(self.table):
            if len(t) != source.level_size(k):
                raise ValueError(f"level-size mismatch in table at level {k}")
            for v in t:
                if not 0 <= v < target.level_size(k):
                    raise ValueError(f"table at level {k} maps outside the target level")

    def apply(self, ref: SimplexRef) -> SimplexRef:
        return SimplexRef(ref.dim, self.table[ref.dim][ref.index])

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialMap)
            and self.source is other.source
            and self.target is other.target
            and self.table == other.table
        )

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.table))

    def __repr__(self):
        return f"<SimplicialMap {self.source.name!r} -> {self.target.name!r}>"


@dataclass(frozen=True)
class MapViolation:
    kind: str  # "face" or "degeneracy"
    k: int
    i: int
    simplex: str

    def describe(self) -> str:
        op = "d" if self.kind == "face" else "s"
        return f"map does not commute with {op}_{self.i} at level {self.k} on {self.simplex!r}"


@dataclass(frozen=True)
class MapReport:
    violations: tuple[MapViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        return "valid map" if self.ok else "\n".join(v.describe() for v in self.violations)


def validate_map(f: SimplicialMap) -> MapReport:
    """List every operator-commutation failure f d_i != d_i f or f s_i != s_i f."""
    out = []
    src, tgt = f.source, f.target
    for k in range(1, src.cap + 1):
        for i in range(k + 1):
            ft, st = f.table[k], f.table[k - 1]
            sface, tface = src.faces[k][i], tgt.faces[k][i]
            for x in range(src.level_size(k)):
                if st[sface[x]] != tface[ft[x]]:
                    out.append(MapViolation("face", k, i, src.levels[k][x]))
    for k in range(src.cap):
        for i in range(k + 1):
            ft, st = f.table[k], f.table[k + 1]
            sdeg, tdeg = src.degens[k][i], tgt.degens[k][i]
            for x in range(src.level_size(k)):
                if st[sdeg[x]] != tdeg[ft[x]]:
                    out.append(MapViolation("degeneracy", k, i, src.levels[k][x]))
    return MapReport(tuple(out))


def compose(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """The composite f after g; requires target(g) = source(f)."""
    if g.target is not f.source:
        raise ValueError("compose requires target(g) = source(f)")
    table = [
        tuple(f.table[k][v] for v in g.table[k])
        for k in range(g.source.cap + 1)
    ]
    return SimplicialMap(g.source, f.target, table)


def identity_map(k: TruncatedSimplicialSet) -> SimplicialMap:
    return SimplicialMap(k, k, [tuple(range(k.level_size(d))) for d in range(k.cap + 1)])


def is_pointed_map(f: SimplicialMap) -> bool:
    if f.source.basepoint is None or f.target.basepoint is None:
        return False
    return f.table[0][f.source.basepoint] == f.target.basepoint


def carries_mask(f: SimplicialMap, src_mask: "SubcomplexMask", tgt_mask: "SubcomplexMask") -> bool:
    """Whether f maps the source mask into the target mask (a pair map)."""
    for k in range(f.source.cap + 1):
        for x in src_mask.members[k]:
            if f.table[k][x] not in tgt_mask.members[k]:
                return False
    return True


class SubcomplexMask:
    """A per-level subset of a complex, closed under faces and degeneracies."""

    def __init__(self, parent, members):
        self.parent = parent
        self.members = tuple(frozenset(m) for m in members)
        if len(self.members) != parent.cap + 1:
            raise ValueError("mask must cover every level")
        for k, m in enumerate(self.members):
            for x in m:
                if not 0 <= x < parent.level_size(k):
                    raise ValueError(f"mask index out of range at level {k}")
        self._closure_check()

    def _closure_check(self):
        p = self.parent
        for k in range(1, p.cap + 1):
            for x in self.members[k]:
                for i in range(k + 1):
                    if p.faces[k][i][x] not in self.members[k - 1]:
                        raise ValueError(f"mask not closed under d_{i} at level {k}")
        for k in range(p.cap):
            for x in self.members[k]:
                for i in range(k + 1):
                    if p.degens[k][i][x] not in self.members[k + 1]:
                        raise ValueError(f"mask not closed under s_{i} at level {k}")

    def contains(self, ref: SimplexRef) -> bool:
        return ref.index in self.members[ref.dim]

    def level_sizes(self):
        return [len(m) for m in self.members]

    def is_full(self) -> bool:
        return all(len(m) == self.parent.level_size(k) for k, m in enumerate(self.members))

    def __eq__(self, other):
        return (
            isinstance(other, SubcomplexMask)
            and self.parent is other.parent
            and self.members == other.members
        )


def empty_mask(k: TruncatedSimplicialSet) -> SubcomplexMask:
    return SubcomplexMask(k, [frozenset() for _ in range(k.cap + 1)])


def full_mask(k: TruncatedSimplicialSet) -> SubcomplexMask:
    return SubcomplexMask(k, [frozenset(range(k.level_size(d))) for d in range(k.cap + 1)])


def subcomplex_closure(k: TruncatedSimplicialSet, seeds) -> SubcomplexMask:
    """Smallest mask containing the seed refs, closed under all operators."""
    members = [set() for _ in range(k.cap + 1)]
    stack = []
    for ref in seeds:
        if ref.index not in members[ref.dim]:
            members[ref.dim].add(ref.index)
            stack.append(ref)
    while stack:
        ref = stack.pop()
        dim, x = ref
        if dim >= 1:
            for i in range(dim + 1):
                img = k.faces[dim][i][x]
                if img not in members[dim - 1]:
                    members[dim - 1].add(img)
                    stack.append(SimplexRef(dim - 1, img))
        if dim < k.cap:
            for i in range(dim + 1):
                img = k.degens[dim][i][x]
                if img not in members[dim + 1]:
                    members[dim + 1].add(img)
                    stack.append(SimplexRef(dim + 1, img))
    return SubcomplexMask(k, members)


def basepoint_mask(k: TruncatedSimplicialSet) -> SubcomplexMask:
    return subcomplex_closure(k, [k.basepoint_ref(0)])


def materialize(mask: SubcomplexMask, name=None):
    """The mask as a standalone complex plus per-level index maps into the parent.

    Returns (complex, to_parent) where to_parent[k][i] is the parent index of
    the i-th simplex of level k.
    """
    p = mask.parent
    to_parent = [sorted(mask.members[k]) for k in range(p.cap + 1)]
    back = [{v: i for i, v in enumerate(tp)} for tp in to_parent]
    levels = [[p.levels[k][v] for v in to_parent[k]] for k in range(p.cap + 1)]
    faces = [()]
    for k in range(1, p.cap + 1):
        faces.append(tuple(
            tuple(back[k - 1][p.faces[k][i][v]] for v in to_parent[k])
            for i in range(k + 1)
        ))
    degens = []
    for k in range(p.cap):
        degens.append(tuple(
            tuple(back[k + 1][p.degens[k][i][v]] for v in to_parent[k])
            for i in range(k + 1)
        ))
    degens.append(())
    basepoint = None
    if p.basepoint is not None and p.basepoint in mask.members[0]:
        basepoint = back[0][p.basepoint]
    out = TruncatedSimplicialSet(
        name or f"{p.name}|sub", p.cap, levels, faces, degens, basepoint=basepoint
    )
    return out, to_parent


def inclusion_map(mask: SubcomplexMask, name=None):
    """The materialized subcomplex together with its inclusion into the parent."""
    sub, to_parent = materialize(mask, name)
    return sub, SimplicialMap(sub, mask.parent, [tuple(tp) for tp in to_parent])


# -- disk format ------------------------------------------------------------

_KNOWN_FIELDS = {"name", "cap", "levels", "faces", "degeneracies", "basepoint", "subcomplexes", "em"}


def _canonical_document(k: TruncatedSimplicialSet):
    order = [
        sorted(range(len(k.levels[d])), key=lambda i: k.levels[d][i])
        for d in range(k.cap + 1)
    ]
    levels = [[k.levels[d][i] for i in order[d]] for d in range(k.cap + 1)]
    faces = []
    for d in range(1, k.cap + 1):
        per_i = []
        for i in range(d + 1):
            table = k.faces[d][i]
            per_i.append([k.levels[d - 1][table[j]] for j in order[d]])
        faces.append(per_i)
    degens = []
    for d in range(k.cap):
        per_i = []
        for i in range(d + 1):
            table = k.degens[d][i]
            per_i.append([k.levels[d + 1][table[j]] for j in order[d]])
        degens.append(per_i)
    doc = {"name": k.name, "cap": k.cap, "levels": levels, "faces": faces,
           "degeneracies": degens}
    if k.basepoint is not None:
        doc["basepoint"] = k.levels[0][k.basepoint]
    if k.subcomplex_names:
        doc["subcomplexes"] = {
            sub_name: [sorted(k.levels[d][i] for i in mask.members[d]) for d in range(k.cap + 1)]
            for sub_name, mask in sorted(k.subcomplex_names.items())
        }
    if k.em_meta is not None:
        doc["em"] = {"group": k.em_meta[0], "n": k.em_meta[1]}
    return doc


def dumps(k: TruncatedSimplicialSet) -> str:
    """Canonical serialization: levels sorted lexicographically, fixed layout."""
    return json.dumps(_canonical_document(k), indent=1, ensure_ascii=False) + "\n"


def save(k: TruncatedSimplicialSet, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(k))


def loads(text: str) -> TruncatedSimplicialSet:
    """Parse a complex document, then validate it; invalid complexes are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    unknown = set(doc) - _KNOWN_FIELDS
    if unknown:
        raise ParseError(f"unknown fields: {sorted(unknown)}", field=sorted(unknown)[0])
    for field in ("name", "cap", "levels", "faces", "degeneracies"):
        if field not in doc:
            raise ParseError(f"missing field {field!r}", field=field)
    name, cap = doc["name"], doc["cap"]
    if not isinstance(cap, int) or cap < 0:
        raise ParseError("cap must be a nonnegative integer", field="cap")
    levels = doc["levels"]
    if not isinstance(levels, list) or len(levels) != cap + 1:
        raise ParseError("levels must list cap + 1 dimensions", field="levels")
    for d, lv in enumerate(levels):
        if not isinstance(lv, list) or any(not isinstance(x, str) for x in lv):
            raise ParseError(f"levels[{d}] must be a list of labels", field="levels")
        if len(set(lv)) != len(lv):
            raise ParseError(f"duplicate labels in levels[{d}]", field="levels")
    index = [{lab: i for i, lab in enumerate(lv)} for lv in levels]

    def read_tables(raw, what, n_dims, dim_of, target_of):
        if not isinstance(raw, list) or len(raw) != n_dims:
            raise ParseError(f"{what} must list {n_dims} dimensions", field=what)
        out = []
        for pos, per_i in enumerate(raw):
            d = dim_of(pos)
            if not isinstance(per_i, list) or len(per_i) != d + 1:
                raise ParseError(f"{what}[{pos}] must list {d + 1} operators", field=what)
            tables = []
            for i, table in enumerate(per_i):
                if not isinstance(table, list) or len(table) != len(levels[d]):
                    raise ParseError(
                        f"{what}[{pos}][{i}] must map every simplex of level {d}",
                        field=f"{what}[{pos}][{i}]",
                    )
                row = []
                for j, lab in enumerate(table):
                    t = target_of(pos)
                    if lab not in index[t]:
                        raise ParseError(
                            f"{what}[{pos}][{i}][{j}] references unknown label {lab!r}",
                            field=f"{what}[{pos}][{i}]",
                        )
                    row.append(index[t][lab])
                tables.append(tuple(row))
            out.append(tuple(tables))
        return out

    face_tables = [()] + read_tables(doc["faces"], "faces", cap, lambda p: p + 1, lambda p: p)
    degen_tables = read_tables(
        doc["degeneracies"], "degeneracies", cap, lambda p: p, lambda p: p + 1
    )
    degen_tables.append(())

    basepoint = None
    if "basepoint" in doc:
        lab = doc["basepoint"]
        if lab not in index[0]:
            raise ParseError(f"basepoint label {lab!r} not in level 0", field="basepoint")
        basepoint = index[0][lab]

    em_meta = None
    if "em" in doc:
        em = doc["em"]
        if not isinstance(em, dict) or set(em) != {"group", "n"}:
            raise ParseError("em metadata must have fields group and n", field="em")
        em_meta = (em["group"], em["n"])

    try:
        k = TruncatedSimplicialSet(
            name, cap, levels, face_tables, degen_tables, basepoint=basepoint, em_meta=em_meta
        )
    except ValueError as e:
        raise ParseError(str(e)) from e

    report = validate(k)
    if not report.ok:
        raise ValidationError(report)

    if "subcomplexes" in doc:
        subs = doc["subcomplexes"]
        if not isinstance(subs, dict):
            raise ParseError("subcomplexes must be an object", field="subcomplexes")
        masks = {}
        for sub_name, per_level in subs.items():
            if not isinstance(per_level, list) or len(per_level) != cap + 1:
                raise ParseError(
                    f"subcomplex {sub_name!r} must list cap + 1 levels", field="subcomplexes"
                )
            members = []
            for d, labs in enumerate(per_level):
                try:
                    members.append({index[d][lab] for lab in labs})
                except KeyError as e:
                    raise ParseError(
                        f"subcomplex {sub_name!r} references unknown label at level {d}",
                        field="subcomplexes",
                    ) from e
            try:
                masks[sub_name] = SubcomplexMask(k, members)
            except ValueError as e:
                raise ParseError(f"subcomplex {sub_name!r}: {e}", field="subcomplexes") from e
        k.subcomplex_names.update(masks)
    return k


def load(path) -> TruncatedSimplicialSet:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
