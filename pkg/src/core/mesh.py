"""
网格模块

Cauchy 曲面 Σ 用有序顶点的半单纯（Δ）复形表示；时间轴是一维路径复形；
时空是两者上链复形的张量积，胞腔分为 type-1（时间顶点 ⊗ Σ 胞腔）
和 type-2（时间边 ⊗ Σ 胞腔）。
"""
import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from sympy.polys.matrices.sdm import SDM

from src.core import linalg
from src.core.errors import ComplexError, DescriptorError
from src.core.report import CheckResult, check
from src.utils.log import get_logger

logger = get_logger(__name__)

DEGREE_NAMES = ('vertices', 'edges', 'triangles', 'tetrahedra')

# (符号, a 的胞腔下标, b 的胞腔下标)
CupTerm = Tuple[int, int, int]


def degree_name(k: int) -> str:
    return DEGREE_NAMES[k] if k < len(DEGREE_NAMES) else f"{k}-cells"


def _sign(i: int) -> int:
    return -1 if i % 2 else 1


@dataclass(frozen=True, eq=False)
class CellComplex:
    """有序顶点的定向 Δ-复形

    faces[k][j][i] 是第 j 个 k-胞腔删去第 i 个顶点得到的面，关联符号 (−1)^i。
    spatial_end[k] 是空间端领子中的 k-胞腔下标（子复形）。
    """
    name: str
    dimension: int
    cells: Tuple[Tuple[Any, ...], ...]
    vertices: Tuple[Tuple[Tuple[int, ...], ...], ...]
    faces: Tuple[Tuple[Tuple[int, ...], ...], ...]
    orientation: Tuple[int, ...]
    spatial_end: Tuple[FrozenSet[int], ...]
    closed: bool

    is_product = False

    def count(self, k: int) -> int:
        if k < 0 or k > self.dimension:
            return 0
        return len(self.cells[k])

    def counts(self) -> Tuple[int, ...]:
        return tuple(self.count(k) for k in range(self.dimension + 1))

    @cached_property
    def _coboundaries(self) -> Tuple[SDM, ...]:
        mats = []
        for k in range(self.dimension):
            entries = []
            for j, fs in enumerate(self.faces[k + 1]):
                for i, f in enumerate(fs):
                    entries.append((j, f, linalg.to_q(_sign(i))))
            mats.append(linalg.matrix_from_entries(entries, (self.count(k + 1), self.count(k))))
        return tuple(mats)

    def coboundary_matrix(self, k: int) -> SDM:
        """d_k：k-上链 → (k+1)-上链，行是 (k+1)-胞腔"""
        if 0 <= k < self.dimension:
            return self._coboundaries[k]
        return SDM({}, (self.count(k + 1), self.count(k)), linalg.QQ)

    def excluded(self, k: int, temporal: bool = False, spatial: bool = False) -> FrozenSet[int]:
        """支撑条件要求为零的 k-胞腔；Σ 上没有时间领子"""
        if spatial and 0 <= k <= self.dimension:
            return self.spatial_end[k]
        return frozenset()

    def fundamental_class(self) -> List[Tuple[int, int]]:
        return [(j, s) for j, s in enumerate(self.orientation)]

    def front_face(self, k: int, j: int, p: int) -> int:
        """前 p-面：反复删去最后一个顶点"""
        while k > p:
            j = self.faces[k][j][k]
            k -= 1
        return j

    def back_face(self, k: int, j: int, q: int) -> int:
        """后 q-面：反复删去第一个顶点"""
        while k > q:
            j = self.faces[k][j][0]
            k -= 1
        return j

    def cup_terms(self, k: int, j: int, p: int) -> List[CupTerm]:
        if p < 0 or p > k:
            return []
        return [(1, self.front_face(k, j, p), self.back_face(k, j, k - p))]

    @cached_property
    def vertex_distances(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.count(0)
        adjacency: List[List[int]] = [[] for _ in range(n)]
        if self.dimension >= 1:
            for a, b in self.vertices[1]:
                if a != b:
                    adjacency[a].append(b)
                    adjacency[b].append(a)
        table = []
        for source in range(n):
            dist = [-1] * n
            dist[source] = 0
            queue = deque([source])
            while queue:
                v = queue.popleft()
                for w in adjacency[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        queue.append(w)
            table.append(tuple(dist))
        return tuple(table)

    def _vertex_gap(self, a: int, b: int) -> int:
        d = self.vertex_distances[a][b]
        return d if d >= 0 else self.count(0)

    def cell_distance(self, k1: int, i: int, k2: int, j: int) -> int:
        """两胞腔顶点集之间的 Hausdorff 图距离（是度量，可用于因果锥判定）"""
        left, right = self.vertices[k1][i], self.vertices[k2][j]
        forward = max(min(self._vertex_gap(a, b) for b in right) for a in left)
        backward = max(min(self._vertex_gap(a, b) for a in left) for b in right)
        return max(forward, backward)

    def describe(self) -> str:
        counts = ", ".join(f"{self.count(k)} {degree_name(k)}" for k in range(self.dimension + 1))
        ends = sum(len(s) for s in self.spatial_end)
        end_text = "no ends" if ends == 0 else "spatial end: " + ", ".join(
            f"{len(self.spatial_end[k])} {degree_name(k)}" for k in range(self.dimension + 1) if self.spatial_end[k])
        shape = "closed" if self.closed else "with boundary"
        return f"{self.name}: {counts}; {end_text}; {shape}"


@dataclass(frozen=True)
class TimeAxis:
    """离散时间轴：顶点 0..N−1，边 n = [n, n+1]，时间向下标增大方向"""
    n_slices: int
    collar_width: int = 1
    base_slice: Optional[int] = None

    def __post_init__(self):
        n, c = self.n_slices, self.collar_width
        if n < 3:
            raise DescriptorError(f"时间轴至少需要 3 个时间片: {n}")
        if c < 1 or 2 * c >= n:
            raise DescriptorError(f"时间领子宽度不合法: collar={c}, slices={n}")
        if self.base_slice is None:
            object.__setattr__(self, 'base_slice', n // 2)
        elif not (c <= self.base_slice <= n - 1 - c):
            raise DescriptorError(f"基准时间片 {self.base_slice} 落在时间领子内")

    @property
    def n_edges(self) -> int:
        return self.n_slices - 1

    def collar_vertex(self, n: int) -> bool:
        return n < self.collar_width or n >= self.n_slices - self.collar_width

    def collar_edge(self, n: int) -> bool:
        return self.collar_vertex(n) and self.collar_vertex(n + 1)

    def interior_edges(self) -> List[int]:
        return [n for n in range(self.n_edges) if not self.collar_edge(n)]

    def with_base(self, base_slice: int) -> 'TimeAxis':
        return TimeAxis(self.n_slices, self.collar_width, base_slice)


@dataclass(frozen=True, eq=False)
class ProductSpacetime:
    """Time × Σ；k 次胞腔先排 type-1 (n, σ∈Σ_k)，再排 type-2 (n, σ∈Σ_{k−1})"""
    time: TimeAxis
    sigma: CellComplex

    is_product = True

    @property
    def dimension(self) -> int:
        return self.sigma.dimension + 1

    @property
    def name(self) -> str:
        return f"time({self.time.n_slices},{self.time.collar_width})x{self.sigma.name}"

    def type1_count(self, k: int) -> int:
        return self.time.n_slices * self.sigma.count(k)

    def count(self, k: int) -> int:
        if k < 0 or k > self.dimension:
            return 0
        return self.type1_count(k) + self.time.n_edges * self.sigma.count(k - 1)

    def counts(self) -> Tuple[int, ...]:
        return tuple(self.count(k) for k in range(self.dimension + 1))

    def index(self, k: int, kind: int, n: int, j: int) -> int:
        if kind == 1:
            return n * self.sigma.count(k) + j
        return self.type1_count(k) + n * self.sigma.count(k - 1) + j

    def cell(self, k: int, idx: int) -> Tuple[int, int, int]:
        """(kind, 时间下标, Σ 胞腔下标)"""
        split = self.type1_count(k)
        if idx < split:
            n, j = divmod(idx, self.sigma.count(k))
            return 1, n, j
        n, j = divmod(idx - split, self.sigma.count(k - 1))
        return 2, n, j

    def iter_cells(self, k: int) -> Iterator[Tuple[int, int, int, int]]:
        for idx in range(self.count(k)):
            kind, n, j = self.cell(k, idx)
            yield idx, kind, n, j

    def sigma_cell(self, k: int, idx: int) -> Tuple[int, int]:
        kind, _, j = self.cell(k, idx)
        return (k, j) if kind == 1 else (k - 1, j)

    def lower_key(self, k: int, idx: int) -> int:
        return self.cell(k, idx)[1]

    def upper_key(self, k: int, idx: int) -> int:
        kind, n, _ = self.cell(k, idx)
        return n if kind == 1 else n + 1

    @cached_property
    def _coboundaries(self) -> Tuple[SDM, ...]:
        sigma = self.sigma
        one, minus = linalg.to_q(1), linalg.to_q(-1)
        mats = []
        for k in range(self.dimension):
            entries = []
            for n in range(self.time.n_slices):
                for big_j in range(sigma.count(k + 1)):
                    for i, f in enumerate(sigma.faces[k + 1][big_j]):
                        entries.append((self.index(k + 1, 1, n, big_j), self.index(k, 1, n, f), linalg.to_q(_sign(i))))
            for n in range(self.time.n_edges):
                for big_j in range(sigma.count(k)):
                    r = self.index(k + 1, 2, n, big_j)
                    entries.append((r, self.index(k, 1, n + 1, big_j), one))
                    entries.append((r, self.index(k, 1, n, big_j), minus))
                    if k >= 1:
                        for i, f in enumerate(sigma.faces[k][big_j]):
                            entries.append((r, self.index(k, 2, n, f), linalg.to_q(-_sign(i))))
            mats.append(linalg.matrix_from_entries(entries, (self.count(k + 1), self.count(k))))
        return tuple(mats)

    def coboundary_matrix(self, k: int) -> SDM:
        if 0 <= k < self.dimension:
            return self._coboundaries[k]
        return SDM({}, (self.count(k + 1), self.count(k)), linalg.QQ)

    @cached_property
    def _exclusions(self) -> Dict[Tuple[int, bool, bool], FrozenSet[int]]:
        return {}

    def excluded(self, k: int, temporal: bool = False, spatial: bool = False) -> FrozenSet[int]:
        if not (temporal or spatial) or k < 0 or k > self.dimension:
            return frozenset()
        key = (k, temporal, spatial)
        if key not in self._exclusions:
            self._exclusions[key] = self._collect_excluded(k, temporal, spatial)
        return self._exclusions[key]

    def _collect_excluded(self, k: int, temporal: bool, spatial: bool) -> FrozenSet[int]:
        out = set()
        end_k = self.sigma.spatial_end[k] if k <= self.sigma.dimension else frozenset()
        end_km1 = self.sigma.spatial_end[k - 1] if k >= 1 else frozenset()
        for idx, kind, n, j in self.iter_cells(k):
            if kind == 1:
                if (temporal and self.time.collar_vertex(n)) or (spatial and j in end_k):
                    out.add(idx)
            elif (temporal and self.time.collar_edge(n)) or (spatial and j in end_km1):
                out.add(idx)
        return frozenset(out)

    def fundamental_class(self) -> List[Tuple[int, int]]:
        return [(self.index(self.dimension, 2, n, j), s)
                for n in range(self.time.n_edges)
                for j, s in enumerate(self.sigma.orientation)]

    def cup_terms(self, k: int, idx: int, p: int) -> List[CupTerm]:
        """乘积胞腔上的 Alexander–Whitney 展开，符号 (−1)^{|a₂||b₁|}"""
        q = k - p
        if p < 0 or q < 0:
            return []
        sigma = self.sigma
        kind, n, j = self.cell(k, idx)
        if kind == 1:
            if p > k:
                return []
            return [(1, self.index(p, 1, n, sigma.front_face(k, j, p)),
                     self.index(q, 1, n, sigma.back_face(k, j, q)))]
        s = k - 1
        terms = []
        # a 在时间顶点 n，b 在时间边 n
        if p <= s and q >= 1:
            terms.append((_sign(p), self.index(p, 1, n, sigma.front_face(s, j, p)),
                          self.index(q, 2, n, sigma.back_face(s, j, q - 1))))
        # a 在时间边 n，b 在时间顶点 n+1
        if p >= 1 and q <= s:
            terms.append((1, self.index(p, 2, n, sigma.front_face(s, j, p - 1)),
                          self.index(q, 1, n + 1, sigma.back_face(s, j, q))))
        return terms

    def cell_distance(self, k1: int, i: int, k2: int, j: int) -> int:
        d1, a = self.sigma_cell(k1, i)
        d2, b = self.sigma_cell(k2, j)
        return self.sigma.cell_distance(d1, a, d2, b)

    def with_base(self, base_slice: int) -> 'ProductSpacetime':
        return ProductSpacetime(self.time.with_base(base_slice), self.sigma)

    def window(self, start: int, stop: int, collar_width: int) -> 'ProductSpacetime':
        """时间片 [start, stop) 构成的子时空"""
        return ProductSpacetime(TimeAxis(stop - start, collar_width), self.sigma)

    def shift_index(self, k: int, idx: int, target: 'ProductSpacetime', offset: int) -> int:
        """把本时空的胞腔映射到 target 中时间平移 offset 后的同一胞腔"""
        kind, n, j = self.cell(k, idx)
        return target.index(k, kind, n + offset, j)

    def describe(self) -> str:
        counts = ", ".join(f"{self.count(k)} {k}-cells" for k in range(self.dimension + 1))
        t = self.time
        return (f"{self.name}: {counts}; time slices {t.n_slices}, collar {t.collar_width} per end, "
                f"base slice {t.base_slice}; sigma = {self.sigma.describe()}")


Complex = Any  # CellComplex | ProductSpacetime


def dump_complex(X: Complex) -> str:
    """行格式：cell / incidence (胞腔, 面, 符号) / orientation / end"""
    lines = [f"# complex {X.name} dim {X.dimension}"]
    for k in range(X.dimension + 1):
        for idx in range(X.count(k)):
            if X.is_product:
                kind, n, j = X.cell(k, idx)
                lines.append(f"cell {k} {idx} type{kind} {n} {j}")
            else:
                lines.append(f"cell {k} {idx} " + " ".join(str(v) for v in X.vertices[k][idx]))
    for k in range(X.dimension):
        mat = X.coboundary_matrix(k)
        for r in sorted(mat):
            for c in sorted(mat[r]):
                lines.append(f"incidence {k + 1} {r} {c} {linalg.fmt_q(mat[r][c])}")
    for idx, s in X.fundamental_class():
        lines.append(f"orientation {idx} {s}")
    for k in range(X.dimension + 1):
        for idx in sorted(X.excluded(k, spatial=True)):
            lines.append(f"end {k} {idx}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- 构造器

def _orient(name: str, dimension: int, top_faces: Sequence[Tuple[int, ...]], n_faces: int) -> Tuple[Tuple[int, ...], bool]:
    """沿共享余维 1 面传播定向；返回 (每个顶胞腔的符号, 是否闭流形)"""
    occurrences: List[List[Tuple[int, int]]] = [[] for _ in range(n_faces)]
    for t, fs in enumerate(top_faces):
        for i, f in enumerate(fs):
            occurrences[f].append((t, _sign(i)))
    for f, occ in enumerate(occurrences):
        if len(occ) > 2:
            raise ComplexError(f"{name}: 余维 1 胞腔 {f} 属于 {len(occ)} 个顶胞腔，不是流形", {'face': f})
    neighbours: List[List[Tuple[int, int, int]]] = [[] for _ in top_faces]
    for f, occ in enumerate(occurrences):
        if len(occ) == 2:
            (t1, e1), (t2, e2) = occ
            neighbours[t1].append((t2, e1, e2))
            neighbours[t2].append((t1, e2, e1))
    orientation = [0] * len(top_faces)
    for start in range(len(top_faces)):
        if orientation[start]:
            continue
        orientation[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for other, e_here, e_there in neighbours[t]:
                wanted = -orientation[t] * e_here * e_there
                if orientation[other] == 0:
                    orientation[other] = wanted
                    queue.append(other)
                elif orientation[other] != wanted:
                    raise ComplexError(f"{name}: 复形不可定向", {'top_cell': other})
    closed = all(len(occ) == 2 for occ in occurrences)
    return tuple(orientation), closed


def _assemble(name: str, cells: List[List[Any]], vertices: List[List[Tuple[int, ...]]],
              faces: List[List[Tuple[int, ...]]], end_vertices: FrozenSet[int]) -> CellComplex:
    dimension = len(cells) - 1
    if dimension >= 1:
        orientation, closed = _orient(name, dimension, faces[dimension], len(cells[dimension - 1]))
    else:
        orientation, closed = tuple(1 for _ in cells[0]), True
    spatial_end = tuple(
        frozenset(j for j, vs in enumerate(vertices[k]) if all(v in end_vertices for v in vs))
        for k in range(dimension + 1))
    complex_ = CellComplex(
        name=name,
        dimension=dimension,
        cells=tuple(tuple(c) for c in cells),
        vertices=tuple(tuple(v) for v in vertices),
        faces=tuple(tuple(f) for f in faces),
        orientation=orientation,
        spatial_end=spatial_end,
        closed=closed,
    )
    logger.debug(f"🔧 构造复形 {name}: {complex_.counts()}")
    return complex_


def simplicial_complex(name: str, tops: Sequence[Sequence[int]], end_vertices: Sequence[int] = ()) -> CellComplex:
    """由顶单形列表构造单纯复形，胞腔键为排序后的顶点元组"""
    top_tuples = [tuple(sorted(t)) for t in tops]
    dimension = len(top_tuples[0]) - 1
    if any(len(t) != dimension + 1 for t in top_tuples):
        raise ComplexError(f"{name}: 顶单形维数不一致")
    buckets: List[set] = [set() for _ in range(dimension + 1)]
    for t in top_tuples:
        for k in range(dimension + 1):
            buckets[k].update(itertools.combinations(t, k + 1))
    cells = [sorted(b) for b in buckets]
    if [c[0] for c in cells[0]] != list(range(len(cells[0]))):
        raise ComplexError(f"{name}: 顶点编号必须是 0..n-1")
    index = [{c: i for i, c in enumerate(level)} for level in cells]
    faces: List[List[Tuple[int, ...]]] = [[() for _ in cells[0]]]
    for k in range(1, dimension + 1):
        faces.append([tuple(index[k - 1][c[:i] + c[i + 1:]] for i in range(k + 1)) for c in cells[k]])
    return _assemble(name, cells, cells, faces, frozenset(end_vertices))


def _step_sequences(axes: int, length: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """长度为 length 的两两不交非空坐标轴子集序列"""
    subsets = [tuple(c) for r in range(1, axes + 1) for c in itertools.combinations(range(axes), r)]
    out = []

    def extend(prefix, used):
        if len(prefix) == length:
            out.append(tuple(prefix))
            return
        for s in subsets:
            if not used.intersection(s):
                extend(prefix + [s], used | set(s))

    extend([], set())
    return sorted(out)


def freudenthal_torus(name: str, sizes: Sequence[int]) -> CellComplex:
    """Freudenthal（格路）三角剖分按平移商掉得到的 d 维环面 Δ-复形"""
    d = len(sizes)
    bases = list(itertools.product(*(range(s) for s in sizes)))

    def vid(point):
        v = 0
        for p, s in zip(point, sizes):
            v = v * s + p
        return v

    def shift(point, axes):
        return tuple((p + (1 if i in axes else 0)) % s for i, (p, s) in enumerate(zip(point, sizes)))

    cells, vertices, faces = [], [], []
    index: List[Dict[Any, int]] = []
    for k in range(d + 1):
        keys = sorted((b, steps) for b in bases for steps in _step_sequences(d, k))
        cells.append(keys)
        index.append({key: i for i, key in enumerate(keys)})
        verts = []
        for base, steps in keys:
            chain = [base]
            for s in steps:
                chain.append(shift(chain[-1], s))
            verts.append(tuple(vid(p) for p in chain))
        vertices.append(verts)
    for k in range(d + 1):
        level = []
        for base, steps in cells[k]:
            if k == 0:
                level.append(())
                continue
            fs = []
            for i in range(k + 1):
                if i == 0:
                    key = (shift(base, steps[0]), steps[1:])
                elif i == k:
                    key = (base, steps[:-1])
                else:
                    merged = tuple(sorted(steps[i - 1] + steps[i]))
                    key = (base, steps[:i - 1] + (merged,) + steps[i + 1:])
                fs.append(index[k - 1][key])
            level.append(tuple(fs))
        faces.append(level)
    return _assemble(name, cells, vertices, faces, frozenset())


def staircase_product(tops_a: Sequence[Sequence[int]], tops_b: Sequence[Sequence[int]], nb: int) -> List[Tuple[int, ...]]:
    """两个有序单纯复形的阶梯三角剖分，顶点 (a, b) 编号为 a·nb + b"""
    out = []
    for ta in tops_a:
        ta = sorted(ta)
        for tb in tops_b:
            tb = sorted(tb)
            p, q = len(ta) - 1, len(tb) - 1
            for moves in set(itertools.permutations([0] * p + [1] * q)):
                i = j = 0
                chain = [ta[0] * nb + tb[0]]
                for m in moves:
                    if m == 0:
                        i += 1
                    else:
                        j += 1
                    chain.append(ta[i] * nb + tb[j])
                out.append(tuple(chain))
    return sorted(set(out))


# ---------------------------------------------------------------- 描述符目录

_DESCRIPTOR = re.compile(r'^\s*([a-z][a-z0-9_]*)\s*(?:\(\s*(.*?)\s*\))?\s*$')

_END_MODES = {'both', 'left', 'right', 'none', 'ends'}


def parse_descriptor(text: str) -> Tuple[str, List[Any]]:
    match = _DESCRIPTOR.match(text or "")
    if not match:
        raise DescriptorError(f"无法解析曲面描述符: {text!r}")
    kind, raw = match.group(1), match.group(2)
    args: List[Any] = []
    if raw:
        for part in raw.split(','):
            part = part.strip()
            if re.fullmatch(r'-?\d+', part):
                args.append(int(part))
            elif part in _END_MODES:
                args.append(part)
            else:
                raise DescriptorError(f"描述符参数不合法: {part!r} in {text!r}")
    return kind, args


def _ints(kind: str, args: List[Any], count: int, minimum: int) -> List[int]:
    nums = [a for a in args if isinstance(a, int)]
    if len(nums) != count:
        raise DescriptorError(f"{kind} 需要 {count} 个整数参数，实际 {nums}")
    for v in nums:
        if v < minimum:
            raise DescriptorError(f"{kind} 的参数 {v} 太小，无法三角剖分（至少 {minimum}）")
    return nums


def _end_mode(args: List[Any], default: str = 'both') -> str:
    words = [a for a in args if isinstance(a, str)]
    mode = words[0] if words else default
    return 'both' if mode == 'ends' else mode


def _path_tops(n: int) -> List[Tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _circle_tops(n: int) -> List[Tuple[int, int]]:
    return _path_tops(n) + [(0, n - 1)]


_OCTAHEDRON = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]


def build_sigma(descriptor: str) -> CellComplex:
    """按目录描述符构造 Cauchy 曲面"""
    kind, args = parse_descriptor(descriptor)
    name = descriptor.strip().replace(' ', '')
    if kind == 'circle':
        (n,) = _ints(kind, args, 1, 3)
        return simplicial_complex(name, _circle_tops(n))
    if kind == 'path':
        (n,) = _ints(kind, args, 1, 2)
        mode = _end_mode(args)
        ends = {'both': [0, n - 1], 'left': [0], 'right': [n - 1], 'none': []}[mode]
        return simplicial_complex(name, _path_tops(n), ends)
    if kind == 'torus2':
        sizes = _ints(kind, args, 2, 2)
        return freudenthal_torus(name, sizes)
    if kind == 'torus3':
        sizes = _ints(kind, args, 3, 2)
        return freudenthal_torus(name, sizes)
    if kind == 'sphere2':
        _ints(kind, args, 0, 0)
        return simplicial_complex(name, _OCTAHEDRON)
    if kind == 'sphere3':
        _ints(kind, args, 0, 0)
        return simplicial_complex(name, list(itertools.combinations(range(5), 4)))
    if kind == 'cylinder':
        n, m = _ints(kind, args, 2, 2)
        if n < 3:
            raise DescriptorError(f"cylinder 的圆周至少需要 3 个顶点: {n}")
        tops = staircase_product(_circle_tops(n), _path_tops(m), m)
        ends = [a * m for a in range(n)] + [a * m + m - 1 for a in range(n)]
        return simplicial_complex(name, tops, ends)
    if kind == 'disk':
        (n,) = _ints(kind, args, 1, 3)
        tops = [(a, b, n) for a, b in _circle_tops(n)]
        return simplicial_complex(name, tops, range(n))
    if kind == 'line_times_sphere2':
        (n,) = _ints(kind, args, 1, 2)
        tops = staircase_product(_path_tops(n), _OCTAHEDRON, 6)
        ends = [v for v in range(6)] + [(n - 1) * 6 + v for v in range(6)]
        return simplicial_complex(name, tops, ends)
    raise DescriptorError(f"未知的曲面描述符: {descriptor!r}")


def build_product(time: TimeAxis, sigma: CellComplex) -> ProductSpacetime:
    spacetime = ProductSpacetime(time, sigma)
    logger.debug(f"🔧 构造乘积时空 {spacetime.name}: {spacetime.counts()}")
    return spacetime


# ---------------------------------------------------------------- 不变量检查

def _incidence_defects(X: Complex) -> List[int]:
    """d_{k+1}·d_k 非零的次数 k"""
    bad = []
    for k in range(X.dimension - 1):
        product = X.coboundary_matrix(k + 1).matmul(X.coboundary_matrix(k))
        if any(v for r in product.values() for v in r.values()):
            bad.append(k)
    return bad


def _boundary_of_orientation(X: Complex) -> FrozenSet[int]:
    """基本类的边界落在哪些余维 1 胞腔上"""
    top = X.dimension
    if top == 0:
        return frozenset()
    o = {idx: linalg.to_q(s) for idx, s in X.fundamental_class()}
    return frozenset(linalg.apply_transpose(X.coboundary_matrix(top - 1), o))


def _collar_leaks(X: Complex, temporal: bool, spatial: bool) -> List[Dict[str, int]]:
    leaks = []
    for k in range(1, X.dimension + 1):
        lower = X.excluded(k - 1, temporal, spatial)
        faces = X.coboundary_matrix(k - 1)
        for idx in sorted(X.excluded(k, temporal, spatial)):
            for f in faces.get(idx, {}):
                if f not in lower:
                    leaks.append({'degree': k, 'cell': idx, 'face': f})
    return leaks


def verify_complex(X: Complex, rebuilt: Optional[Complex] = None) -> CheckResult:
    """∂∂ = 0、定向相容、领子是子复形、两次构造逐行一致"""
    failures: Dict[str, Any] = {}
    bad = _incidence_defects(X)
    if bad:
        failures['incidence'] = {'degrees': bad}
    closed = X.sigma.closed if X.is_product else X.closed
    allowed = X.excluded(X.dimension - 1, temporal=True, spatial=True)
    stray = sorted(_boundary_of_orientation(X) - allowed)
    if closed and stray:
        failures['orientation'] = {'faces': stray[:10]}
    for flags in ((False, True), (True, False), (True, True)):
        leaks = _collar_leaks(X, *flags)
        if leaks:
            failures['collar'] = {'temporal': flags[0], 'spatial': flags[1], **leaks[0]}
            break
    deterministic = rebuilt is None or dump_complex(X) == dump_complex(rebuilt)
    if not deterministic:
        failures['determinism'] = {'name': X.name}
    logger.info(f"🔍 {X.name}: 不变量检查 {'通过' if not failures else '失败 ' + ', '.join(failures)}")
    details = {'counts': list(X.counts()), 'deterministic': deterministic,
               'closed': closed, 'boundary_outside_collar': len(stray)}
    witness = {key: failures[key] for key in sorted(failures)[:1]} if failures else None
    return check('complex_invariants', not failures, X.name, details, witness=witness)
