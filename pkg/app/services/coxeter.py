# app/services/coxeter.py
"""
Finite Coxeter groups from Coxeter-Dynkin diagrams, coset machinery, and
the spherical Coxeter complex C(Gamma).

Generators are indexed 0..n-1 internally and named s1..sn (type B) or
t1..tn (type A). Vertex types are 1-based: type i is the coset of the
maximal parabolic that omits generator i.
"""

import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
import sympy
from sympy import ImmutableMatrix

from app.core import config
from app.core.console import status
from app.core.errors import GroupCapExceededError, UnknownDiagramError, UnknownGeneratorError
from app.services.sphere_geom import SpherePoint, b3_constants


class CoxeterDiagram:
    """Ordered generator names with edge labels m(s, t); absent edges mean 2"""

    def __init__(self, name: str, generators: Sequence[str], labels: Dict[Tuple[int, int], int]):
        self.name = name
        self.generators = tuple(generators)
        n = len(self.generators)
        self._m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        for (i, j), value in labels.items():
            if i == j or value < 2:
                raise UnknownDiagramError(f"Invalid label m({i},{j}) = {value} in {name}")
            self._m[i][j] = value
            self._m[j][i] = value

    @property
    def rank(self) -> int:
        return len(self.generators)

    def m(self, i: int, j: int) -> int:
        return self._m[i][j]

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownGeneratorError(f"Generator {name!r} is not in diagram {self.name}")

    @property
    def simply_laced(self) -> bool:
        return all(self._m[i][j] <= 3 for i in range(self.rank) for j in range(self.rank))

    @classmethod
    def type_a(cls, n: int) -> "CoxeterDiagram":
        if n < 1:
            raise UnknownDiagramError(f"A{n} is not a diagram")
        return cls(f"A{n}", [f"t{i}" for i in range(1, n + 1)], {(i, i + 1): 3 for i in range(n - 1)})

    @classmethod
    def type_b(cls, n: int) -> "CoxeterDiagram":
        if n < 2:
            raise UnknownDiagramError(f"B{n} is not a diagram (use A1)")
        labels = {(i, i + 1): 3 for i in range(n - 2)}
        labels[(n - 2, n - 1)] = 4
        return cls(f"B{n}", [f"s{i}" for i in range(1, n + 1)], labels)

    @classmethod
    def from_name(cls, name: str) -> "CoxeterDiagram":
        match = re.fullmatch(r"([AB])(\d+)", name.strip())
        if not match:
            raise UnknownDiagramError(f"Unknown diagram {name!r}; built-in families are A_n and B_n")
        family, n = match.group(1), int(match.group(2))
        return cls.type_a(n) if family == "A" else cls.type_b(n)

    def __eq__(self, other):
        return isinstance(other, CoxeterDiagram) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"CoxeterDiagram({self.name})"


@dataclass(frozen=True)
class ParabolicHandle:
    """Standard parabolic W(Lambda); `deleted` is set for maximal ones"""

    generators: FrozenSet[int]
    deleted: Optional[int] = None

    @classmethod
    def maximal(cls, diagram: CoxeterDiagram, vertex_type: int) -> "ParabolicHandle":
        if not 1 <= vertex_type <= diagram.rank:
            raise UnknownGeneratorError(f"Vertex type {vertex_type} out of range for {diagram.name}")
        gone = vertex_type - 1
        return cls(frozenset(i for i in range(diagram.rank) if i != gone), gone)

    def __contains__(self, index: int) -> bool:
        return index in self.generators


def _bilinear_form(diagram: CoxeterDiagram) -> List[List[sympy.Expr]]:
    n = diagram.rank
    return [[-sympy.cos(sympy.pi / diagram.m(i, j)) for j in range(n)] for i in range(n)]


class CoxeterGroup:
    """Breadth-first enumeration of W(Gamma) with index tables"""

    def __init__(self, diagram: CoxeterDiagram, cap: int = None):
        self.diagram = diagram
        self.rank = diagram.rank
        cap = config.GROUP_CAP if cap is None else cap
        n = self.rank

        form = _bilinear_form(diagram)
        generators = []
        for s in range(n):
            rows = [[(1 if j == k else 0) - (2 * form[s][k] if j == s else 0) for k in range(n)] for j in range(n)]
            generators.append(ImmutableMatrix(rows))
        expand = not diagram.simply_laced

        identity = ImmutableMatrix.eye(n)
        lookup: Dict[ImmutableMatrix, int] = {identity: 0}
        self.matrices: List[ImmutableMatrix] = [identity]
        self.words: List[Tuple[int, ...]] = [()]
        self._right: List[List[int]] = [[-1] * n]

        queue = deque([0])
        while queue:
            current = queue.popleft()
            for s in range(n):
                product = self.matrices[current] * generators[s]
                if expand:
                    product = product.applyfunc(sympy.expand)
                target = lookup.get(product)
                if target is None:
                    if len(self.matrices) >= cap:
                        raise GroupCapExceededError(
                            f"{diagram.name} exceeds the enumeration cap of {cap} elements"
                        )
                    target = len(self.matrices)
                    lookup[product] = target
                    self.matrices.append(product)
                    self.words.append(self.words[current] + (s,))
                    self._right.append([-1] * n)
                    queue.append(target)
                self._right[current][s] = target

        self.order = len(self.matrices)
        self.lengths = [len(w) for w in self.words]
        self.identity = 0
        self._inverse = [self._follow(0, tuple(reversed(w))) for w in self.words]
        self._left = [[self._inverse[self._right[self._inverse[x]][s]] for x in range(self.order)] for s in range(n)]
        self.longest = max(range(self.order), key=lambda x: self.lengths[x])
        self._mul_cache: Dict[Tuple[int, int], int] = {}
        self._right_descents = [
            frozenset(s for s in range(n) if self.lengths[self._right[x][s]] < self.lengths[x])
            for x in range(self.order)
        ]
        self._left_descents = [
            frozenset(s for s in range(n) if self.lengths[self._left[s][x]] < self.lengths[x])
            for x in range(self.order)
        ]

    def _follow(self, x: int, word: Sequence[int]) -> int:
        for s in word:
            x = self._right[x][s]
        return x

    # index-level arithmetic

    def right_mult(self, x: int, s: int) -> int:
        return self._right[x][s]

    def left_mult(self, s: int, x: int) -> int:
        return self._left[s][x]

    def mul(self, x: int, y: int) -> int:
        key = (x, y)
        cached = self._mul_cache.get(key)
        if cached is None:
            cached = self._follow(x, self.words[y])
            self._mul_cache[key] = cached
        return cached

    def inverse(self, x: int) -> int:
        return self._inverse[x]

    def from_word(self, word: Sequence[int]) -> int:
        return self._follow(self.identity, word)

    def right_descents(self, x: int) -> FrozenSet[int]:
        return self._right_descents[x]

    def left_descents(self, x: int) -> FrozenSet[int]:
        return self._left_descents[x]

    def word_names(self, x: int) -> List[str]:
        return [self.diagram.generators[s] for s in self.words[x]]

    def support(self, x: int) -> FrozenSet[int]:
        return frozenset(self.words[x])

    def conjugate_by_longest(self, x: int) -> int:
        return self.mul(self.mul(self.longest, x), self.longest)

    def element(self, x: int) -> "CoxeterElement":
        return CoxeterElement(self, x)

    def elements(self) -> List["CoxeterElement"]:
        return [CoxeterElement(self, x) for x in range(self.order)]

    def generator(self, name: str) -> "CoxeterElement":
        return CoxeterElement(self, self.from_word([self.diagram.index(name)]))

    def parse(self, names: Sequence[str]) -> "CoxeterElement":
        return CoxeterElement(self, self.from_word([self.diagram.index(n) for n in names]))

    # order-theoretic helpers on indices

    def min_coset_rep(self, x: int, parabolic: ParabolicHandle) -> int:
        while True:
            movable = self._right_descents[x] & parabolic.generators
            if not movable:
                return x
            x = self._right[x][min(movable)]

    def prefix_leq(self, a: int, b: int) -> bool:
        return self.lengths[a] + self.lengths[self.mul(self._inverse[a], b)] == self.lengths[b]

    def meet(self, a: int, b: int) -> int:
        prefix = self.identity
        while True:
            common = self._left_descents[a] & self._left_descents[b]
            if not common:
                return prefix
            s = min(common)
            prefix = self._right[prefix][s]
            a = self._left[s][a]
            b = self._left[s][b]

    def join(self, a: int, b: int) -> int:
        bounds = [c for c in range(self.order) if self.prefix_leq(a, c) and self.prefix_leq(b, c)]
        return min(bounds, key=lambda c: self.lengths[c])

    def relations_hold(self) -> bool:
        """(st)^m(s,t) = 1 for every pair of generators"""
        for s in range(self.rank):
            for t in range(self.rank):
                if s == t:
                    if self.from_word([s, s]) != self.identity:
                        return False
                    continue
                word = [s, t] * self.diagram.m(s, t)
                if self.from_word(word) != self.identity:
                    return False
        return True


@lru_cache(maxsize=None)
def group_for(name: str) -> CoxeterGroup:
    diagram = CoxeterDiagram.from_name(name)
    group = CoxeterGroup(diagram)
    status(f"Enumerated W({name}): {group.order} elements", "stats")
    return group


class CoxeterElement:
    """An element of an enumerated finite Coxeter group"""

    __slots__ = ("group", "index")

    def __init__(self, group: CoxeterGroup, index: int):
        self.group = group
        self.index = index

    @property
    def matrix(self) -> ImmutableMatrix:
        return self.group.matrices[self.index]

    @property
    def length(self) -> int:
        return self.group.lengths[self.index]

    @property
    def word(self) -> List[str]:
        return self.group.word_names(self.index)

    @property
    def left_descents(self) -> Set[str]:
        return {self.group.diagram.generators[s] for s in self.group.left_descents(self.index)}

    @property
    def right_descents(self) -> Set[str]:
        return {self.group.diagram.generators[s] for s in self.group.right_descents(self.index)}

    @property
    def is_identity(self) -> bool:
        return self.index == self.group.identity

    def inverse(self) -> "CoxeterElement":
        return CoxeterElement(self.group, self.group.inverse(self.index))

    def __mul__(self, other: "CoxeterElement") -> "CoxeterElement":
        return CoxeterElement(self.group, self.group.mul(self.index, other.index))

    def __eq__(self, other):
        return (
            isinstance(other, CoxeterElement)
            and other.group.diagram == self.group.diagram
            and other.index == self.index
        )

    def __hash__(self):
        return hash((self.group.diagram.name, self.index))

    def __repr__(self):
        return f"CoxeterElement({self.group.diagram.name}, {''.join(self.word) or 'e'})"


def enumerate_group(diagram: CoxeterDiagram) -> Set[CoxeterElement]:
    group = CoxeterGroup(diagram)
    return set(group.elements())


def min_coset_rep(g: CoxeterElement, parabolic: ParabolicHandle) -> CoxeterElement:
    return CoxeterElement(g.group, g.group.min_coset_rep(g.index, parabolic))


def weak_order_leq(a: CoxeterElement, b: CoxeterElement) -> bool:
    """a left-divides b: l(a) + l(a^-1 b) = l(b)"""
    return a.group.prefix_leq(a.index, b.index)


def lattice_meet(a: CoxeterElement, b: CoxeterElement) -> CoxeterElement:
    return CoxeterElement(a.group, a.group.meet(a.index, b.index))


def lattice_join(a: CoxeterElement, b: CoxeterElement) -> CoxeterElement:
    return CoxeterElement(a.group, a.group.join(a.index, b.index))


# =================
# COXETER COMPLEX
# =================


def vertex_id(group: CoxeterGroup, x: int, vertex_type: int) -> str:
    rep = group.min_coset_rep(x, ParabolicHandle.maximal(group.diagram, vertex_type))
    word = ".".join(group.word_names(rep)) or "e"
    return f"v{vertex_type}_{word}"


@dataclass
class CoxeterComplex:
    """C(Gamma): vertex ids typed 1..rank, one chamber per group element"""

    diagram: CoxeterDiagram
    group: CoxeterGroup
    vertex_types: Dict[str, int]
    chambers: List[Tuple[str, ...]]
    coordinates: Optional[Dict[str, SpherePoint]] = None
    reflections: List[np.ndarray] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return self.diagram.rank

    def chamber_of(self, element: CoxeterElement) -> Tuple[str, ...]:
        return self.chambers[element.index]

    def skeleton(self) -> nx.Graph:
        graph = nx.Graph()
        for vid, vtype in sorted(self.vertex_types.items()):
            graph.add_node(vid, vtype=vtype)
        for chamber in self.chambers:
            for i, u in enumerate(chamber):
                for w in chamber[i + 1:]:
                    graph.add_edge(u, w)
        return graph

    def to_typed_complex(self):
        from app.services.typed_complex import TypedComplex

        if self.rank == 3:
            return TypedComplex(self.vertex_types, self.chambers)
        return TypedComplex(self.vertex_types, [], edges=self.chambers)

    def reflect(self, element: CoxeterElement) -> np.ndarray:
        """Orthogonal matrix of `element` acting on the sphere (B3 only)"""
        matrix = np.eye(3)
        for s in element.group.words[element.index]:
            matrix = matrix @ self.reflections[s]
        return matrix


def b3_fundamental_points() -> Dict[int, np.ndarray]:
    """Vertices of the fundamental chamber; the type-2 vertex sits at the north pole"""
    shape = b3_constants()
    alpha, delta = shape.alpha, shape.delta
    return {
        1: np.array([np.sin(delta), 0.0, np.cos(delta)]),
        2: np.array([0.0, 0.0, 1.0]),
        3: np.array([0.0, np.sin(alpha), np.cos(alpha)]),
    }


def _b3_reflections(points: Dict[int, np.ndarray]) -> List[np.ndarray]:
    # generator i fixes every fundamental vertex except the one of type i
    reflections = []
    for s in range(3):
        a, b = [points[t] for t in (1, 2, 3) if t != s + 1]
        normal = np.cross(a, b)
        normal = normal / np.linalg.norm(normal)
        reflections.append(np.eye(3) - 2.0 * np.outer(normal, normal))
    return reflections


def build_coxeter_complex(diagram: CoxeterDiagram) -> CoxeterComplex:
    if diagram.rank not in (2, 3):
        raise UnknownDiagramError(
            f"Coxeter complex output supports rank 2 and 3 diagrams, not {diagram.name}"
        )
    group = group_for(diagram.name)
    types = range(1, diagram.rank + 1)

    vertex_types: Dict[str, int] = {}
    chambers: List[Tuple[str, ...]] = []
    for x in range(group.order):
        chamber = tuple(vertex_id(group, x, t) for t in types)
        for t, vid in zip(types, chamber):
            vertex_types[vid] = t
        chambers.append(chamber)

    complex_ = CoxeterComplex(diagram, group, vertex_types, chambers)
    if diagram.name == "B3":
        points = b3_fundamental_points()
        complex_.reflections = _b3_reflections(points)
        coordinates = {}
        for x in range(group.order):
            matrix = complex_.reflect(group.element(x))
            for t, vid in zip(types, chambers[x]):
                if vid not in coordinates:
                    coordinates[vid] = SpherePoint.from_vector(matrix @ points[t])
        complex_.coordinates = coordinates
    return complex_


@lru_cache(maxsize=None)
def coxeter_b3() -> CoxeterComplex:
    return build_coxeter_complex(CoxeterDiagram.type_b(3))
