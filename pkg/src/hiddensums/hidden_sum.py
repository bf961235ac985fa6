"""Alternative group structures on (F_2)^d induced by regular affine actions.

An abelian group of affine permutations that acts regularly on the space
induces a second sum on it: x # y is "translate x by the element that
moves 0 to y".  This module builds such groups from generators, exposes
the induced sum together with its linear parts, the subspace where it
agrees with XOR, and the associated nilpotent ring product, and decides
membership of arbitrary permutations in the affine group of the new sum.
A bounded search enumerates all such sums compatible with a given set of
round functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .gf2 import BinMatrix, Subspace, vec_from_str, vec_to_str


class NotAbelianError(ValueError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"generators do not commute: {pair[0]!r} vs {pair[1]!r}")


class NotRegularError(ValueError):
    pass


class ClosureOverflowError(ValueError):
    pass


class NotElementaryAbelianError(ValueError):
    pass


class BasisError(ValueError):
    pass


class AffineMap:
    """x |-> x*matrix + translation in the row-vector convention."""

    __slots__ = ("matrix", "translation")

    def __init__(self, matrix: BinMatrix, translation: int):
        if translation < 0 or translation >> matrix.size:
            raise ValueError("translation does not fit the matrix width")
        self.matrix = matrix
        self.translation = translation

    @classmethod
    def identity(cls, width: int) -> AffineMap:
        return cls(BinMatrix.identity(width), 0)

    @classmethod
    def translation_by(cls, width: int, t: int) -> AffineMap:
        return cls(BinMatrix.identity(width), t)

    @property
    def width(self) -> int:
        return self.matrix.size

    def apply(self, x: int) -> int:
        return self.matrix.apply(x) ^ self.translation

    def then(self, other: AffineMap) -> AffineMap:
        """Composition: apply self first, then other."""
        return AffineMap(
            self.matrix @ other.matrix,
            other.matrix.apply(self.translation) ^ other.translation,
        )

    def inverse(self) -> AffineMap:
        minv = self.matrix.inverse()
        return AffineMap(minv, minv.apply(self.translation))

    def is_involution(self) -> bool:
        return self.then(self) == AffineMap.identity(self.width)

    def encode(self) -> tuple:
        return (self.matrix.rows, self.translation)

    def table(self) -> list[int]:
        return [self.apply(x) for x in range(1 << self.width)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AffineMap) and self.encode() == other.encode()

    def __hash__(self) -> int:
        return hash(self.encode())

    def __repr__(self) -> str:
        return f"AffineMap(matrix={self.matrix!r}, translation={self.translation})"


def xor_translation_table(width: int, t: int) -> list[int]:
    return [x ^ t for x in range(1 << width)]


class RegularGroup:
    """An abelian group of affine maps acting regularly on (F_2)^width.

    elements[v] is the unique group element sending 0 to v.  The plain
    constructor trusts its input; RegularGroup.build closes a generator
    set and verifies everything.
    """

    __slots__ = ("width", "generators", "elements")

    def __init__(
        self,
        width: int,
        generators: Sequence[AffineMap],
        elements: Sequence[AffineMap],
    ):
        if len(elements) != 1 << width:
            raise NotRegularError(
                f"need {1 << width} elements, got {len(elements)}"
            )
        self.width = width
        self.generators = tuple(generators)
        self.elements = tuple(elements)

    @classmethod
    def build(cls, generators: Sequence[AffineMap]) -> RegularGroup:
        """Close the generators under composition and verify the result is
        abelian and regular."""
        if not generators:
            raise ValueError("need at least one generator")
        width = generators[0].width
        if any(g.width != width for g in generators):
            raise ValueError("generators have mixed widths")
        for g, h in itertools.combinations(generators, 2):
            if g.then(h) != h.then(g):
                raise NotAbelianError((g, h))
        cap = 1 << width
        seen = {AffineMap.identity(width)}
        frontier = list(seen)
        while frontier:
            fresh = []
            for g in frontier:
                for gen in generators:
                    h = g.then(gen)
                    if h not in seen:
                        seen.add(h)
                        if len(seen) > cap:
                            raise ClosureOverflowError(
                                f"closure exceeds {cap} elements; "
                                "generators cannot lie in a regular group"
                            )
                        fresh.append(h)
            frontier = fresh
        by_image: dict[int, AffineMap] = {}
        for g in seen:
            v = g.translation  # g(0)
            if v in by_image:
                raise NotRegularError(
                    f"two elements send 0 to {v}; the action is not free"
                )
            by_image[v] = g
        if len(by_image) != cap:
            raise NotRegularError(
                f"orbit of 0 has {len(by_image)} points, expected {cap}"
            )
        return cls(width, generators, [by_image[v] for v in range(cap)])

    @classmethod
    def translations(cls, width: int) -> RegularGroup:
        """The ordinary translation group, whose induced sum is XOR."""
        gens = [AffineMap.translation_by(width, 1 << i) for i in range(width)]
        return cls.build(gens)

    def encode(self) -> tuple:
        return tuple(e.encode() for e in self.elements)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RegularGroup) and self.encode() == other.encode()

    def __hash__(self) -> int:
        return hash(self.encode())


def build_group(generators: Sequence[AffineMap]) -> RegularGroup:
    return RegularGroup.build(generators)


class HiddenSum:
    """The group operation on (F_2)^d induced by a regular group action.

    op(x, y) applies the element sending 0 to y.  Scope is limited to
    sums where every element is an involution; construction fails loudly
    on anything else.
    """

    __slots__ = ("group", "width", "_sigma", "_neg")

    is_xor = False

    def __init__(self, group: RegularGroup):
        self.group = group
        self.width = group.width
        n = 1 << self.width
        if group.elements[0] != AffineMap.identity(self.width):
            raise NotRegularError("element indexed by 0 is not the identity")
        self._sigma = [group.elements[y].table() for y in range(n)]
        for x in range(n):
            if self._sigma[x][x] != 0:
                raise NotElementaryAbelianError(
                    f"element moving 0 to {x} is not an involution"
                )
        self._neg = [group.elements[x].inverse().apply(0) for x in range(n)]

    def op(self, x: int, y: int) -> int:
        return self._sigma[y][x]

    def neg(self, x: int) -> int:
        return self._neg[x]

    def op_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(row) for row in self._sigma)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HiddenSum) and self.op_table() == other.op_table()

    def __hash__(self) -> int:
        return hash(self.op_table())

    def __repr__(self) -> str:
        return f"HiddenSum(width={self.width})"


def hidden_op(hs: HiddenSum, x: int, y: int) -> int:
    return hs.op(x, y)


def hidden_neg(hs: HiddenSum, x: int) -> int:
    return hs.neg(x)


def kappa(hs: HiddenSum, y: int) -> BinMatrix:
    """Linear part of the translation that moves 0 to y."""
    return hs.group.elements[y].matrix


@dataclass(frozen=True)
class KappaCheck:
    ok: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_kappa_homomorphism(hs: HiddenSum) -> KappaCheck:
    """Exhaustively verify that the linear parts compose along the sum,
    kappa(x # y) = kappa(x) * kappa(y), and that negation inverts them."""
    n = 1 << hs.width
    mats = [kappa(hs, y) for y in range(n)]
    for x in range(n):
        for y in range(n):
            if mats[hs.op(x, y)] != mats[x] @ mats[y]:
                return KappaCheck(False, (x, y))
    for y in range(n):
        if mats[hs.neg(y)] != mats[y].inverse():
            return KappaCheck(False, (y, hs.neg(y)))
    return KappaCheck(True)


def compute_U(hs: HiddenSum) -> Subspace:
    """The subspace of y where the hidden translation is a pure XOR
    translation, i.e. x # y = x + y for all x.  Never trivial."""
    ident = BinMatrix.identity(hs.width)
    members = [y for y in range(1 << hs.width) if kappa(hs, y) == ident]
    space = Subspace(members, hs.width)
    if len(space) != len(members):
        raise RuntimeError("agreement set is not a subspace; group table corrupt")
    if len(members) < 2:
        raise RuntimeError("hidden sum with trivial agreement subspace")
    return space


def ring_product(hs: HiddenSum, x: int, y: int) -> int:
    """Product of the nilpotent ring carried by the hidden sum:
    x*y = x + y + (x # y)."""
    return x ^ y ^ hs.op(x, y)


@dataclass(frozen=True)
class RingReport:
    commutative: bool
    associative: bool
    distributive: bool
    nilpotent: bool
    nilpotency_index: int | None

    @property
    def ok(self) -> bool:
        return self.commutative and self.associative and self.distributive and self.nilpotent


def check_ring_axioms(hs: HiddenSum) -> RingReport:
    """Exhaustive check of the ring axioms and nilpotency (iterated
    products of the whole space reach {0})."""
    n = 1 << hs.width
    prod = [[ring_product(hs, x, y) for y in range(n)] for x in range(n)]
    commutative = all(prod[x][y] == prod[y][x] for x in range(n) for y in range(n))
    associative = all(
        prod[prod[x][y]][z] == prod[x][prod[y][z]]
        for x in range(n)
        for y in range(n)
        for z in range(n)
    )
    distributive = all(
        prod[x][y ^ z] == prod[x][y] ^ prod[x][z]
        for x in range(n)
        for y in range(n)
        for z in range(n)
    )
    level = set(range(n))
    index = 1
    nilpotent = False
    while index <= hs.width + 1:
        if level == {0}:
            nilpotent = True
            break
        level = {prod[x][s] for x in range(n) for s in level}
        index += 1
    return RingReport(
        commutative, associative, distributive, nilpotent, index if nilpotent else None
    )


def check_uV_subgroup(hs: HiddenSum, u: int) -> bool:
    """Whether u*V is closed under both XOR and the hidden sum."""
    n = 1 << hs.width
    uv = {ring_product(hs, u, v) for v in range(n)}
    return all(
        a ^ b in uv and hs.op(a, b) in uv for a in uv for b in uv
    )


def agl_membership(g_table: Sequence[int], hs: HiddenSum) -> bool:
    """Whether the permutation is affine for the hidden sum.

    g is affine iff x |-> g(x) # (-g(0)) is additive for the sum; this is
    verified over all 2^(2d) pairs.
    """
    n = 1 << hs.width
    if len(g_table) != n or len(set(g_table)) != n:
        raise ValueError("membership test requires a bijective table on the space")
    sigma = hs._sigma
    shift = sigma[hs.neg(g_table[0])]
    h = [shift[y] for y in g_table]
    for x in range(n):
        hx = h[x]
        row = sigma[hx]
        sx = sigma[x]
        for y in range(n):
            if h[sx[y]] != row[h[y]]:
                return False
    return True


def product_sum(parts: Sequence[HiddenSum]) -> HiddenSum:
    """Brick-parallel sum acting on the concatenation of the parts."""
    widths = [p.width for p in parts]
    total = sum(widths)
    offsets = [sum(widths[:i]) for i in range(len(parts))]

    def embed(maps: Sequence[AffineMap]) -> AffineMap:
        rows = []
        translation = 0
        for part_map, off, w in zip(maps, offsets, widths):
            rows += [r << off for r in part_map.matrix.rows]
            translation |= part_map.translation << off
        return AffineMap(BinMatrix(rows), translation)

    elements = []
    for v in range(1 << total):
        parts_of_v = [
            (v >> off) & ((1 << w) - 1) for off, w in zip(offsets, widths)
        ]
        elements.append(
            embed([p.group.elements[vi] for p, vi in zip(parts, parts_of_v)])
        )
    generators = []
    for i, p in enumerate(parts):
        for g in p.group.generators:
            pieces = [
                g if j == i else AffineMap.identity(widths[j])
                for j in range(len(parts))
            ]
            generators.append(embed(pieces))
    return HiddenSum(RegularGroup(total, generators, elements))


class CoordinateMap:
    """Coefficients of elements with respect to a basis of the hidden sum.

    Every x decomposes uniquely as the hidden-sum combination of basis
    elements selected by a coefficient vector; because the sum is
    elementary abelian this map is a group isomorphism onto XOR.
    """

    __slots__ = ("hs", "basis", "_by_coeff", "_by_element")

    def __init__(self, hs: HiddenSum, basis: Sequence[int]):
        if len(basis) != hs.width:
            raise BasisError(f"need exactly {hs.width} basis vectors")
        self.hs = hs
        self.basis = tuple(basis)
        n = 1 << hs.width
        by_coeff = []
        for c in range(n):
            x = 0
            for i in range(hs.width):
                if (c >> i) & 1:
                    x = hs.op(x, self.basis[i])
            by_coeff.append(x)
        if len(set(by_coeff)) != n:
            raise BasisError("vectors do not freely generate the hidden sum")
        by_element = [0] * n
        for c, x in enumerate(by_coeff):
            by_element[x] = c
        self._by_coeff = by_coeff
        self._by_element = by_element

    def coords(self, x: int) -> int:
        return self._by_element[x]

    def element(self, coeffs: int) -> int:
        return self._by_coeff[coeffs]


def coordinates(hs: HiddenSum, basis: Sequence[int], x: int) -> int:
    return CoordinateMap(hs, basis).coords(x)


# ---------------------------------------------------------------------------
# Enumeration and search
# ---------------------------------------------------------------------------

MAX_BRICK_WIDTH = 4


@lru_cache(maxsize=None)
def enumerate_regular_groups(width: int) -> tuple[RegularGroup, ...]:
    """All regular groups of affine involutions on (F_2)^width.

    Every non-identity element of such a group is an affine involution
    whose translation part is a nonzero fixed vector of its (unipotent)
    matrix part, so growing commuting independent sets from that pool is
    exhaustive.  Duplicate discovery is pruned by requiring each new
    generator to be the pool-minimal element of the coset it adds, with
    surviving repeats removed by element-table equality.  Returned in a
    canonical order; width 4 takes a few seconds and is cached.
    """
    if width > MAX_BRICK_WIDTH:
        raise ValueError(
            f"regular-group enumeration is exhaustive only up to width {MAX_BRICK_WIDTH}"
        )
    n = 1 << width
    ident = BinMatrix.identity(width)
    pool_maps = []
    for rows in itertools.product(range(n), repeat=width):
        m = BinMatrix(rows)
        if m @ m == ident:
            pool_maps += [AffineMap(m, t) for t in range(1, n) if m.apply(t) == t]
    pool_maps.sort(key=AffineMap.encode)
    pool = [tuple(g.table()) for g in pool_maps]
    index_of = {table: i for i, table in enumerate(pool)}
    units = [0] + [1 << i for i in range(width)]
    all_mask = (1 << len(pool)) - 1

    commute_cache: dict[int, int] = {}

    def commute_row(i: int) -> int:
        # affine maps agree iff they agree at 0 and the unit vectors
        row = commute_cache.get(i)
        if row is None:
            gi = pool[i]
            row = 0
            for j, gj in enumerate(pool):
                if all(gi[gj[p]] == gj[gi[p]] for p in units):
                    row |= 1 << j
            commute_cache[i] = row
        return row

    found: dict[tuple, RegularGroup] = {}

    def record(chosen: list[int], elements: dict[int, tuple[int, ...]]) -> None:
        by_image = {}
        for table in elements.values():
            t = table[0]
            rows = [table[1 << i] ^ t for i in range(width)]
            by_image[t] = AffineMap(BinMatrix(rows), t)
        group = RegularGroup(
            width, [pool_maps[i] for i in chosen], [by_image[v] for v in range(n)]
        )
        found.setdefault(group.encode(), group)

    def grow(chosen: list[int], elements: dict[int, tuple[int, ...]], candidates: int):
        if len(chosen) == width:
            record(chosen, elements)
            return
        mask = candidates
        while mask:
            idx = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            g = pool[idx]
            if g[0] in elements:
                continue
            coset = {}
            minimal = True
            for img, e in elements.items():
                h = tuple(g[e[x]] for x in range(n))
                if h[0] in elements or h[0] in coset:
                    coset = None
                    break
                # visit each group through one generator chain only: the
                # new generator must be the pool-minimal coset member
                if index_of[h] < idx:
                    minimal = False
                    break
                coset[h[0]] = h
            if coset is None or not minimal:
                continue
            grow(
                chosen + [idx],
                {**elements, **coset},
                candidates & commute_row(idx) & ~((2 << idx) - 1),
            )

    grow([], {0: tuple(range(n))}, all_mask)
    return tuple(found[k] for k in sorted(found))


@lru_cache(maxsize=None)
def translation_compatible_sums(width: int) -> tuple[HiddenSum, ...]:
    """Hidden sums on one brick for which all XOR translations are affine."""
    keep = []
    for group in enumerate_regular_groups(width):
        hs = HiddenSum(group)
        if all(
            agl_membership(xor_translation_table(width, 1 << i), hs)
            for i in range(width)
        ):
            keep.append(hs)
    return tuple(keep)


def find_hidden_sums(
    round_generators: Sequence[Sequence[int]], brick_widths: Sequence[int]
) -> list[HiddenSum]:
    """All brick-parallel hidden sums for which the given round functions
    and every XOR translation are affine.

    Per-brick candidates come from the exhaustive enumeration above,
    pre-filtered by translation membership brick by brick (translations
    act brickwise, so this is equivalent to the full-width test).  The
    supplied generators are then tested at full width, and survivors get
    a final full-width translation re-check.
    """
    total = sum(brick_widths)
    n = 1 << total
    for table in round_generators:
        if len(table) != n or len(set(table)) != n:
            raise ValueError("round generators must be bijective tables on the space")
    per_brick = [translation_compatible_sums(w) for w in brick_widths]
    results = []
    for combo in itertools.product(*per_brick):
        hs = product_sum(list(combo))
        if not all(agl_membership(t, hs) for t in round_generators):
            continue
        if not all(
            agl_membership(xor_translation_table(total, 1 << i), hs)
            for i in range(total)
        ):
            continue
        results.append(hs)
    results.sort(key=HiddenSum.op_table)
    return results


# ---------------------------------------------------------------------------
# Group spec files and verification reports
# ---------------------------------------------------------------------------


def parse_group_spec(text: str) -> list[AffineMap]:
    """Parse the generator file format: width on the first line, then one
    'matrix-rows-concatenated|translation' line per generator."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    try:
        width = int(lines[0])
    except (IndexError, ValueError) as exc:
        raise ValueError("first line must be the width") from exc
    gens = []
    for ln in lines[1:]:
        try:
            mat_part, trans_part = ln.split("|")
        except ValueError as exc:
            raise ValueError(f"generator line {ln!r} lacks the '|' separator") from exc
        if len(mat_part) != width * width or len(trans_part) != width:
            raise ValueError(f"generator line {ln!r} has wrong field lengths")
        rows = [
            vec_from_str(mat_part[i * width : (i + 1) * width]) for i in range(width)
        ]
        gens.append(AffineMap(BinMatrix(rows), vec_from_str(trans_part)))
    if not gens:
        raise ValueError("no generators in group spec")
    return gens


def dump_group_spec(generators: Sequence[AffineMap]) -> str:
    width = generators[0].width
    lines = [str(width)]
    for g in generators:
        mat = "".join(vec_to_str(r, width) for r in g.matrix.rows)
        lines.append(f"{mat}|{vec_to_str(g.translation, width)}")
    return "\n".join(lines) + "\n"


def hidden_sum_report(generators: Sequence[AffineMap]) -> dict:
    """Build and fully verify a hidden sum, reporting each check."""
    report: dict = {
        "abelian": True,
        "regular": True,
        "elementary_abelian": True,
        "kappa_homomorphism": None,
        "U_basis": None,
        "ring_axioms": None,
        "nilpotency_index": None,
    }
    try:
        group = RegularGroup.build(generators)
    except NotAbelianError:
        report["abelian"] = False
        report["regular"] = None
        report["elementary_abelian"] = None
        return report
    except (NotRegularError, ClosureOverflowError):
        report["regular"] = False
        report["elementary_abelian"] = None
        return report
    try:
        hs = HiddenSum(group)
    except NotElementaryAbelianError:
        report["elementary_abelian"] = False
        return report
    report["kappa_homomorphism"] = bool(check_kappa_homomorphism(hs))
    u = compute_U(hs)
    report["U_basis"] = [vec_to_str(b, hs.width) for b in u.basis]
    ring = check_ring_axioms(hs)
    report["ring_axioms"] = ring.ok
    report["nilpotency_index"] = ring.nilpotency_index
    return report
