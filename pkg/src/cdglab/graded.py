"""Graded vector spaces and homogeneous maps.

A :class:`GradedSpace` records only the dimension in each degree.  Bases are
implicit: the ``j``-th basis vector of degree ``i`` is simply index ``j``.
A :class:`GradedMap` of shift ``s`` stores one matrix per source degree,
sending degree ``i`` to degree ``i + s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .errors import UsageError
from .scalars import FieldSpec, Matrix, QQ


@dataclass(frozen=True)
class Grading:
    group: str = "Z"

    def __post_init__(self):
        if self.group not in ("Z", "Z2"):
            raise UsageError(f"unknown grading group {self.group!r}")

    @property
    def is_z2(self) -> bool:
        return self.group == "Z2"

    def norm(self, d: int) -> int:
        return d % 2 if self.is_z2 else d

    def sign(self, d: int) -> int:
        return -1 if d % 2 else 1

    def __str__(self):
        return self.group


Z = Grading("Z")
Z2 = Grading("Z2")


class GradedSpace:
    """Finitely supported graded vector space, recorded by its dimensions."""

    __slots__ = ("grading", "_dims")

    def __init__(self, grading: Grading, dims: Mapping[int, int] | None = None):
        self.grading = grading
        clean = {}
        for d, n in (dims or {}).items():
            if n < 0:
                raise UsageError("negative dimension")
            if n:
                k = grading.norm(int(d))
                clean[k] = clean.get(k, 0) + n
        self._dims = dict(sorted(clean.items()))

    @property
    def dims(self) -> dict[int, int]:
        return dict(self._dims)

    def dim(self, d: int) -> int:
        return self._dims.get(self.grading.norm(d), 0)

    def degrees(self) -> list[int]:
        return list(self._dims)

    def total(self) -> int:
        return sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims

    def support_range(self) -> tuple[int, int] | None:
        if not self._dims:
            return None
        return min(self._dims), max(self._dims)

    def shift(self, n: int) -> "GradedSpace":
        """M[n]: degree i holds M^{i+n}."""
        return GradedSpace(self.grading, {d - n: k for d, k in self._dims.items()})

    def __add__(self, other: "GradedSpace") -> "GradedSpace":
        if self.grading != other.grading:
            raise UsageError("grading mismatch")
        dims = dict(self._dims)
        for d, k in other._dims.items():
            dims[d] = dims.get(d, 0) + k
        return GradedSpace(self.grading, dims)

    def collapse_to_z2(self) -> "GradedSpace":
        return GradedSpace(Z2, self._dims)

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.grading == other.grading and self._dims == other._dims

    def __hash__(self):
        return hash((self.grading, tuple(self._dims.items())))

    def __repr__(self):
        return f"GradedSpace({self.grading}, {self._dims})"

    def to_json(self) -> dict:
        return {"grading": self.grading.group, "dims": {str(d): n for d, n in self._dims.items()}}

    @classmethod
    def from_json(cls, data: dict) -> "GradedSpace":
        return cls(Grading(data["grading"]), {int(d): int(n) for d, n in data["dims"].items()})


def space(dims: Mapping[int, int], grading: Grading = Z) -> GradedSpace:
    return GradedSpace(grading, dims)


class GradedMap:
    """Homogeneous linear map ``source -> target`` raising degree by ``shift``."""

    __slots__ = ("source", "target", "shift", "field", "_blocks")

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int,
                 blocks: Mapping[int, Matrix] | None = None, field: FieldSpec = QQ):
        if source.grading != target.grading:
            raise UsageError("grading mismatch between source and target")
        g = source.grading
        self.source = source
        self.target = target
        self.shift = g.norm(shift)
        self.field = field
        clean = {}
        for d, m in (blocks or {}).items():
            d = g.norm(int(d))
            want = (target.dim(d + self.shift), source.dim(d))
            if m.shape != want:
                raise UsageError(f"block at degree {d} has shape {m.shape}, expected {want}")
            if m.field != field:
                raise UsageError("block over the wrong field")
            if not m.is_zero():
                clean[d] = m
        self._blocks = clean

    @property
    def grading(self) -> Grading:
        return self.source.grading

    def block(self, d: int) -> Matrix:
        d = self.grading.norm(d)
        m = self._blocks.get(d)
        if m is None:
            return Matrix.zeros(self.target.dim(d + self.shift), self.source.dim(d), self.field)
        return m

    def blocks(self) -> dict[int, Matrix]:
        return dict(self._blocks)

    def is_zero(self) -> bool:
        return not self._blocks

    @classmethod
    def zero(cls, source, target, shift=0, field: FieldSpec = QQ) -> "GradedMap":
        return cls(source, target, shift, {}, field)

    @classmethod
    def identity(cls, sp: GradedSpace, field: FieldSpec = QQ) -> "GradedMap":
        return cls(sp, sp, 0, {d: Matrix.identity(n, field) for d, n in sp.dims.items()}, field)

    @classmethod
    def scalar(cls, sp: GradedSpace, s, field: FieldSpec = QQ) -> "GradedMap":
        return cls.identity(sp, field).scale(s)

    def _check_parallel(self, other: "GradedMap"):
        if not isinstance(other, GradedMap):
            raise UsageError("expected a GradedMap")
        if self.source != other.source or self.target != other.target:
            raise UsageError("maps have different source or target")
        if self.shift != other.shift:
            raise UsageError(f"shift mismatch {self.shift} vs {other.shift}")
        if self.field != other.field:
            raise UsageError("field mismatch")

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check_parallel(other)
        degs = set(self._blocks) | set(other._blocks)
        return GradedMap(self.source, self.target, self.shift,
                         {d: self.block(d) + other.block(d) for d in degs}, self.field)

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def scale(self, s) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift,
                         {d: m.scale(s) for d, m in self._blocks.items()}, self.field)

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise UsageError("cannot compose: target of inner map is not the source of outer map")
        if inner.field != self.field:
            raise UsageError("field mismatch")
        blocks = {}
        for d, m in inner._blocks.items():
            outer = self._blocks.get(self.grading.norm(d + inner.shift))
            if outer is not None:
                blocks[d] = outer @ m
        return GradedMap(inner.source, self.target, self.shift + inner.shift, blocks, self.field)

    def __matmul__(self, inner: "GradedMap") -> "GradedMap":
        return self.compose(inner)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.shift == other.shift and self._blocks == other._blocks)

    def __hash__(self):
        return hash((self.source, self.target, self.shift))

    def __repr__(self):
        return f"GradedMap(shift={self.shift}, blocks={self._blocks})"

    def restrict_blocks(self, degrees: Iterable[int]) -> dict[int, Matrix]:
        return {d: self.block(d) for d in degrees}

    def agrees_on(self, other: "GradedMap", degrees: Iterable[int] | None) -> bool:
        """Blockwise equality, optionally only at the given source degrees."""
        self._check_parallel(other)
        if degrees is None:
            return self._blocks == other._blocks
        return all(self.block(d) == other.block(d) for d in degrees)

    def apply(self, d: int, vec: Sequence) -> list:
        return self.block(d).apply(vec)

    def collapse_to_z2(self) -> "GradedMap":
        src, tgt = self.source.collapse_to_z2(), self.target.collapse_to_z2()
        if self.grading.is_z2:
            return self
        # blocks of equal parity are stacked in increasing degree order
        return _collapse(self, src, tgt)

    def to_json(self) -> dict:
        return {"shift": self.shift,
                "blocks": {str(d): [[self.field.format(x) for x in row] for row in m.to_rows()]
                           for d, m in self._blocks.items()}}

    @classmethod
    def from_json(cls, data: dict, source: GradedSpace, target: GradedSpace,
                  field: FieldSpec = QQ) -> "GradedMap":
        shift = int(data["shift"])
        blocks = {}
        for d, rows in data.get("blocks", {}).items():
            d = int(d)
            blocks[d] = Matrix.from_rows([[field.parse(x) for x in r] for r in rows], field,
                                         cols=source.dim(d))
        return cls(source, target, shift, blocks, field)


def _collapse(f: GradedMap, src: GradedSpace, tgt: GradedSpace) -> GradedMap:
    def offsets(sp: GradedSpace):
        off, run = {}, {0: 0, 1: 0}
        for d in sp.degrees():
            off[d] = run[d % 2]
            run[d % 2] += sp.dim(d)
        return off

    so, to = offsets(f.source), offsets(f.target)
    entries = {0: {}, 1: {}}
    for d, m in f.blocks().items():
        t = d + f.shift
        for (r, c), v in m.items():
            entries[d % 2][(to[t] + r, so[d] + c)] = v
    blocks = {p: Matrix(tgt.dim(p + f.shift), src.dim(p), f.field, entries[p]) for p in (0, 1)}
    return GradedMap(src, tgt, f.shift, blocks, f.field)


# ---------------------------------------------------------------------------
# shifts and sums


def shift_space(M: GradedSpace, n: int) -> GradedSpace:
    return M.shift(n)


def shift_map(f: GradedMap, n: int, sign: int = 1) -> GradedMap:
    """``f[n]`` between the shifted spaces, each block multiplied by ``sign``.

    Pass ``sign=(-1)**n`` for a predifferential; the default keeps the
    blocks, as for ordinary maps.
    """
    g = f.grading
    blocks = {g.norm(d - n): (m if sign == 1 else m.scale(sign)) for d, m in f.blocks().items()}
    return GradedMap(f.source.shift(n), f.target.shift(n), f.shift, blocks, f.field)


def direct_sum_spaces(spaces: Sequence[GradedSpace]) -> GradedSpace:
    if not spaces:
        raise UsageError("empty direct sum")
    out = spaces[0]
    for s in spaces[1:]:
        out = out + s
    return out


def block_map(rows: Sequence[Sequence[GradedMap | None]], targets: Sequence[GradedSpace],
              sources: Sequence[GradedSpace], shift: int, field: FieldSpec = QQ) -> GradedMap:
    """Assemble a map ``⊕ sources -> ⊕ targets`` from a grid of component maps.

    ``rows[a][b]`` goes from ``sources[b]`` to ``targets[a]``; ``None`` is zero.
    Within each degree the basis of a direct sum lists summands in order.
    """
    src, tgt = direct_sum_spaces(sources), direct_sum_spaces(targets)
    g = src.grading
    blocks = {}
    for d in src.degrees():
        t = d + shift
        grid = []
        for a, row in enumerate(rows):
            line = []
            for b, comp in enumerate(row):
                if comp is None:
                    line.append(None)
                    continue
                if comp.source != sources[b] or comp.target != targets[a]:
                    raise UsageError(f"component ({a},{b}) has the wrong source or target")
                if comp.shift != g.norm(shift):
                    raise UsageError(f"component ({a},{b}) has shift {comp.shift}, expected {shift}")
                line.append(comp.block(d))
            grid.append(line)
        blocks[d] = Matrix.block(grid, [T.dim(t) for T in targets], [S.dim(d) for S in sources], field)
    return GradedMap(src, tgt, shift, blocks, field)


def direct_sum_maps(maps: Sequence[GradedMap]) -> GradedMap:
    n = len(maps)
    rows = [[maps[a] if a == b else None for b in range(n)] for a in range(n)]
    return block_map(rows, [f.target for f in maps], [f.source for f in maps],
                     maps[0].shift, maps[0].field)


def summand_inclusion(spaces: Sequence[GradedSpace], k: int, field: FieldSpec = QQ) -> GradedMap:
    rows = [[(GradedMap.identity(spaces[k], field) if a == k else GradedMap.zero(spaces[k], spaces[a], 0, field))]
            for a in range(len(spaces))]
    return block_map(rows, spaces, [spaces[k]], 0, field)


def summand_projection(spaces: Sequence[GradedSpace], k: int, field: FieldSpec = QQ) -> GradedMap:
    row = [GradedMap.identity(spaces[k], field) if b == k else GradedMap.zero(spaces[b], spaces[k], 0, field)
           for b in range(len(spaces))]
    return block_map([row], [spaces[k]], spaces, 0, field)
