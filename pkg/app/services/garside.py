# app/services/garside.py
"""
Garside arithmetic for the spherical Artin groups A(B3) and A(A5).

Positive elements are stored in left-greedy normal form as tuples of simple
indices (indices into the enumerated Coxeter group). A group element is kept
as Delta^-k * p with k >= 0, p a positive normal form, and p not starting
with Delta when k > 0; this form is unique. The reduced right fraction a*b^-1
is derived from it on demand.
"""

import random
import re
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from app.core.console import status
from app.core.errors import InjectivityViolationError, UnknownGeneratorError
from app.schemas import InjectivityReport
from app.services.coxeter import CoxeterElement, CoxeterGroup, ParabolicHandle, group_for

Factors = Tuple[int, ...]

_TOKEN = re.compile(r"^([A-Za-z]\w*?)(?:\^(-?\d+))?$")


class ArtinGroup:
    """Artin group sharing its simples with the Coxeter group of the same diagram"""

    def __init__(self, name: str):
        self.name = name
        self.coxeter: CoxeterGroup = group_for(name)
        self.diagram = self.coxeter.diagram
        self.rank = self.diagram.rank
        W = self.coxeter
        self.e = W.identity
        self.delta = W.longest
        self._tau = [W.conjugate_by_longest(x) for x in range(W.order)]
        # Delta = lc(x) x = x rc(x)
        self._lc = [W.mul(self.delta, W.inverse(x)) for x in range(W.order)]
        self._rc = [W.mul(W.inverse(x), self.delta) for x in range(W.order)]
        self._renorm: Dict[Tuple[int, int], Tuple[int, int]] = {}
        self._fractions: Dict[Tuple[int, Factors], Tuple[Factors, Factors]] = {}
        self._flip: Optional[List[int]] = None

    def __repr__(self):
        return f"ArtinGroup({self.name})"

    # ---- simple-level tables

    def renorm(self, x: int, y: int) -> Tuple[int, int]:
        """Move the largest possible prefix of y onto x"""
        key = (x, y)
        cached = self._renorm.get(key)
        if cached is None:
            W = self.coxeter
            t = W.meet(self._rc[x], y)
            cached = (W.mul(x, t), W.mul(W.inverse(t), y))
            self._renorm[key] = cached
        return cached

    def is_left_weighted(self, x: int, y: int) -> bool:
        return self.renorm(x, y) == (x, y)

    def normalize(self, factors: Iterable[int]) -> Factors:
        seq = [f for f in factors if f != self.e]
        changed = True
        while changed:
            changed = False
            for i in range(len(seq) - 1):
                pair = self.renorm(seq[i], seq[i + 1])
                if pair != (seq[i], seq[i + 1]):
                    seq[i], seq[i + 1] = pair
                    changed = True
            if changed:
                seq = [f for f in seq if f != self.e]
        return tuple(seq)

    def tau(self, factors: Factors, power: int = 1) -> Factors:
        # conjugation by Delta is an involution for the supported diagrams
        if power % 2 == 0:
            return factors
        return tuple(self._tau[f] for f in factors)

    def reverse(self, factors: Factors) -> Factors:
        """Image under the anti-automorphism that reverses words"""
        W = self.coxeter
        return self.normalize(W.inverse(f) for f in reversed(factors))

    def _divide_simple(self, factors: Factors, m: int) -> Factors:
        W = self.coxeter
        return self.normalize((W.mul(W.inverse(m), factors[0]),) + factors[1:])

    def left_divide(self, factors: Factors, divisor: Factors) -> Factors:
        for m in divisor:
            factors = self._divide_simple(factors, m)
        return factors

    def left_gcd(self, p: Factors, q: Factors) -> Factors:
        common = []
        while p and q:
            m = self.coxeter.meet(p[0], q[0])
            if m == self.e:
                break
            common.append(m)
            p = self._divide_simple(p, m)
            q = self._divide_simple(q, m)
        return self.normalize(common)

    def right_gcd(self, p: Factors, q: Factors) -> Factors:
        return self.reverse(self.left_gcd(self.reverse(p), self.reverse(q)))

    def right_divide(self, factors: Factors, divisor: Factors) -> Factors:
        return self.reverse(self.left_divide(self.reverse(factors), self.reverse(divisor)))

    # ---- constructors

    def positive(self, factors: Iterable[int]) -> "PositiveElement":
        return PositiveElement(self, self.normalize(factors))

    def make(self, delta_power: int, factors: Factors) -> "GroupElement":
        """Canonical Delta^-k * p from an already normalized p"""
        if delta_power < 0:
            return self.make(0, (self.delta,) * (-delta_power) + factors)
        lead = 0
        while lead < len(factors) and factors[lead] == self.delta:
            lead += 1
        strip = min(lead, delta_power)
        return GroupElement(self, delta_power - strip, factors[strip:])

    def identity(self) -> "GroupElement":
        return GroupElement(self, 0, ())

    def generator_index(self, name: str) -> int:
        return self.diagram.index(name)

    def generator(self, name: str, exponent: int = 1) -> "GroupElement":
        s = self.generator_index(name)
        simple = self.coxeter.from_word([s])
        base = GroupElement(self, 0, (simple,))
        result = self.identity()
        step = base if exponent >= 0 else base.inverse()
        for _ in range(abs(exponent)):
            result = result * step
        return result

    def from_tokens(self, tokens: Sequence[Tuple[str, int]]) -> "GroupElement":
        result = self.identity()
        run: List[int] = []
        for name, exponent in tokens:
            s = self.generator_index(name)
            if exponent > 0:
                run.extend([s] * exponent)
                continue
            if run:
                result = result * GroupElement(self, 0, self._word_to_factors(run))
                run = []
            if exponent < 0:
                result = result * self.generator(name, exponent)
        if run:
            result = result * GroupElement(self, 0, self._word_to_factors(run))
        return result

    def parse(self, text: str) -> "GroupElement":
        return self.from_tokens(parse_tokens(text))

    def _word_to_factors(self, letters: Sequence[int]) -> Factors:
        simples = [self.coxeter.from_word([s]) for s in letters]
        return self.normalize(simples)

    def project(self, element: "GroupElement") -> int:
        """Image in the Coxeter group"""
        W = self.coxeter
        x = self.delta if element.delta_power % 2 else self.e
        for f in element.factors:
            x = W.mul(x, f)
        return x

    def flip_table(self) -> List[int]:
        """Diagram flip t_i -> t_(n+1-i) on simples (type A only)"""
        if self._flip is None:
            if not self.name.startswith("A"):
                raise UnknownGeneratorError(f"The diagram flip is defined for type A, not {self.name}")
            W = self.coxeter
            top = self.rank - 1
            self._flip = [W.from_word([top - s for s in W.words[x]]) for x in range(W.order)]
        return self._flip

    # ---- fractions

    def fraction(self, element: "GroupElement") -> Tuple[Factors, Factors]:
        key = (element.delta_power, element.factors)
        cached = self._fractions.get(key)
        if cached is None:
            k = element.delta_power
            numerator = self.tau(element.factors, k)
            denominator = (self.delta,) * k
            if k:
                common = self.right_gcd(numerator, denominator)
                if common:
                    numerator = self.right_divide(numerator, common)
                    denominator = self.right_divide(denominator, common)
            cached = (numerator, denominator)
            self._fractions[key] = cached
        return cached


@lru_cache(maxsize=None)
def artin_group(name: str) -> ArtinGroup:
    group = ArtinGroup(name)
    status(f"Artin group {name} ready with {group.coxeter.order} simples", "stats")
    return group


class PositiveElement:
    """Left-greedy normal form: a tuple of non-identity simples"""

    __slots__ = ("group", "factors")

    def __init__(self, group: ArtinGroup, factors: Factors):
        self.group = group
        self.factors = tuple(factors)

    @property
    def simples(self) -> List[CoxeterElement]:
        return [self.group.coxeter.element(f) for f in self.factors]

    @property
    def letters(self) -> List[int]:
        W = self.group.coxeter
        return [s for f in self.factors for s in W.words[f]]

    @property
    def word(self) -> List[str]:
        return [self.group.diagram.generators[s] for s in self.letters]

    @property
    def length(self) -> int:
        return sum(self.group.coxeter.lengths[f] for f in self.factors)

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def support(self) -> FrozenSet[int]:
        W = self.group.coxeter
        found: Set[int] = set()
        for f in self.factors:
            found.update(W.support(f))
        return frozenset(found)

    def to_group(self) -> "GroupElement":
        return self.group.make(0, self.factors)

    def __mul__(self, other: "PositiveElement") -> "PositiveElement":
        return self.group.positive(self.factors + other.factors)

    def __eq__(self, other):
        return (
            isinstance(other, PositiveElement)
            and other.group.name == self.group.name
            and other.factors == self.factors
        )

    def __hash__(self):
        return hash((self.group.name, self.factors))

    def __repr__(self):
        W = self.group.coxeter
        parts = ["[" + "".join(W.word_names(f)) + "]" for f in self.factors]
        return f"PositiveElement({self.group.name}, {''.join(parts) or 'e'})"


class GroupElement:
    """Delta^-delta_power * factors, in canonical form"""

    __slots__ = ("group", "delta_power", "factors")

    def __init__(self, group: ArtinGroup, delta_power: int, factors: Factors):
        self.group = group
        self.delta_power = delta_power
        self.factors = tuple(factors)

    @property
    def numerator(self) -> PositiveElement:
        return PositiveElement(self.group, self.group.fraction(self)[0])

    @property
    def denominator(self) -> PositiveElement:
        return PositiveElement(self.group, self.group.fraction(self)[1])

    @property
    def is_identity(self) -> bool:
        return self.delta_power == 0 and not self.factors

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        g = self.group
        combined = g.normalize(g.tau(self.factors, other.delta_power) + other.factors)
        return g.make(self.delta_power + other.delta_power, combined)

    def inverse(self) -> "GroupElement":
        g = self.group
        n = len(self.factors)
        pieces = [g.tau((g._lc[self.factors[n - 1 - j]],), n - 1 - j)[0] for j in range(n)]
        body = g.normalize(g.tau(tuple(pieces), self.delta_power))
        return g.make(n - self.delta_power, body)

    def support(self) -> FrozenSet[int]:
        return self.numerator.support() | self.denominator.support()

    def tokens(self) -> List[Tuple[str, int]]:
        names = self.group.diagram.generators
        top = [(names[s], 1) for s in self.numerator.letters]
        bottom = [(names[s], -1) for s in reversed(self.denominator.letters)]
        return top + bottom

    def __str__(self):
        parts = [name if e == 1 else f"{name}^-1" for name, e in self.tokens()]
        return " ".join(parts) or "e"

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and other.group.name == self.group.name
            and other.delta_power == self.delta_power
            and other.factors == self.factors
        )

    def __hash__(self):
        return hash((self.group.name, self.delta_power, self.factors))

    def __repr__(self):
        return f"GroupElement({self.group.name}, {self})"


# =================
# MODULE-LEVEL OPERATIONS
# =================


def parse_tokens(text: str) -> List[Tuple[str, int]]:
    """'s1 s2 s3^-1' -> [('s1', 1), ('s2', 1), ('s3', -1)]"""
    tokens = []
    for raw in text.replace(",", " ").split():
        match = _TOKEN.match(raw)
        if not match:
            raise UnknownGeneratorError(f"Cannot parse word token {raw!r}")
        exponent = int(match.group(2)) if match.group(2) is not None else 1
        tokens.append((match.group(1), exponent))
    return tokens


def normal_form(word: Union[str, Sequence[str]], group: Union[str, ArtinGroup] = "B3") -> PositiveElement:
    group = artin_group(group) if isinstance(group, str) else group
    if isinstance(word, str):
        word = word.split()
    W = group.coxeter
    return group.positive(W.from_word([group.generator_index(name)]) for name in word)


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    return g1 * g2


def inverse(g: GroupElement) -> GroupElement:
    return g.inverse()


def equals(g1: GroupElement, g2: GroupElement) -> bool:
    return g1 == g2


def support(p: Union[PositiveElement, GroupElement]) -> Set[str]:
    names = p.group.diagram.generators
    return {names[s] for s in p.support()}


def parabolic_membership(g: GroupElement, parabolic: Union[ParabolicHandle, Iterable[str]]) -> bool:
    """Both parts of the reduced fraction use only generators of the parabolic"""
    if isinstance(parabolic, ParabolicHandle):
        allowed = parabolic.generators
    else:
        allowed = frozenset(g.group.generator_index(name) for name in parabolic)
    return g.support() <= allowed


def maximal_parabolic(group: ArtinGroup, vertex_type: int) -> ParabolicHandle:
    return ParabolicHandle.maximal(group.diagram, vertex_type)


def word_ball(group: ArtinGroup, radius: int, generators: Iterable[int] = None) -> Dict[GroupElement, int]:
    """Elements of word length <= radius over `generators` (all by default), with their lengths"""
    indices = range(group.rank) if generators is None else sorted(generators)
    steps = []
    for s in indices:
        gen = group.generator(group.diagram.generators[s])
        steps.extend([gen, gen.inverse()])
    seen = {group.identity(): 0}
    frontier = [group.identity()]
    for depth in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for x in steps:
                h = g * x
                if h not in seen:
                    seen[h] = depth
                    nxt.append(h)
        frontier = nxt
    return seen


def membership_discrepancies(group: ArtinGroup, radius: int) -> int:
    """Ball elements where the support test and the parabolic's own ball disagree, over maximal parabolics"""
    everything = word_ball(group, radius)
    mismatches = 0
    for vertex_type in range(1, group.rank + 1):
        handle = maximal_parabolic(group, vertex_type)
        inside = word_ball(group, radius, handle.generators)
        for g in everything:
            if parabolic_membership(g, handle) != (g in inside):
                mismatches += 1
    return mismatches


def phi_letters(n: int) -> Dict[str, List[str]]:
    """s_i -> t_i t_(2n-i) for i < n, s_n -> t_n"""
    images = {f"s{i}": [f"t{i}", f"t{2 * n - i}"] for i in range(1, n)}
    images[f"s{n}"] = [f"t{n}"]
    return images


def _phi_positive(p: PositiveElement, target: ArtinGroup, images: Dict[str, List[str]]) -> Factors:
    letters = [t for name in p.word for t in images[name]]
    return normal_form(letters, target).factors


def phi(g: GroupElement) -> GroupElement:
    """The homomorphism A(B_n) -> A(A_(2n-1))"""
    if not g.group.name.startswith("B"):
        raise UnknownGeneratorError(f"phi is defined on type B groups, not {g.group.name}")
    n = g.group.rank
    target = artin_group(f"A{2 * n - 1}")
    images = phi_letters(n)
    top = target.make(0, _phi_positive(g.numerator, target, images))
    bottom = target.make(0, _phi_positive(g.denominator, target, images))
    return top * bottom.inverse()


def sigma(g: GroupElement) -> GroupElement:
    """The involution t_i -> t_(2n-i) of A(A_(2n-1))"""
    flip = g.group.flip_table()
    return g.group.make(g.delta_power, tuple(flip[f] for f in g.factors))


def random_tokens(group: ArtinGroup, length: int, rng: random.Random) -> List[Tuple[str, int]]:
    names = group.diagram.generators
    return [(rng.choice(names), rng.choice((1, -1))) for _ in range(length)]


def positive_words(group: ArtinGroup, max_len: int) -> Iterable[Tuple[str, ...]]:
    names = group.diagram.generators
    for length in range(max_len + 1):
        yield from product(names, repeat=length)


def injectivity_sample(max_len: int = 4, group: Union[str, ArtinGroup] = "B3") -> InjectivityReport:
    """Distinct a*b^-1 (a, b positive of length <= max_len) have distinct phi-images"""
    group = artin_group(group) if isinstance(group, str) else group
    positives = sorted(
        {normal_form(list(w), group) for w in positive_words(group, max_len)},
        key=lambda p: (p.length, p.factors),
    )
    elements = {}
    for a in positives:
        for b in positives:
            g = a.to_group() * b.to_group().inverse()
            elements.setdefault(g, (a, b))
    images: Dict[GroupElement, GroupElement] = {}
    for g in sorted(elements, key=lambda x: (x.delta_power, x.factors)):
        image = phi(g)
        if image in images:
            raise InjectivityViolationError(f"phi({images[image]}) = phi({g}) = {image}")
        images[image] = g
    return InjectivityReport(
        max_len=max_len,
        positive_elements=len(positives),
        elements=len(elements),
        images=len(images),
        collisions=len(elements) - len(images),
    )


# =================
# REWRITING ORACLE
# =================


def braid_relations(group: ArtinGroup) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    relations = []
    for i in range(group.rank):
        for j in range(i + 1, group.rank):
            m = group.diagram.m(i, j)
            left = tuple((i, j)[k % 2] for k in range(m))
            right = tuple((j, i)[k % 2] for k in range(m))
            relations.append((left, right))
    return relations


def rewriting_classes(group: ArtinGroup, length: int) -> Dict[Tuple[int, ...], int]:
    """Class label of every positive word of `length` under the braid relations"""
    words = list(product(range(group.rank), repeat=length))
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    relations = braid_relations(group)
    for w in words:
        for left, right in relations:
            size = len(left)
            for pos in range(length - size + 1):
                chunk = w[pos:pos + size]
                for src, dst in ((left, right), (right, left)):
                    if chunk == src:
                        other = w[:pos] + dst + w[pos + size:]
                        ra, rb = find(w), find(other)
                        if ra != rb:
                            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(w) for w in words})
    label = {r: i for i, r in enumerate(roots)}
    return {w: label[find(w)] for w in words}


def oracle_discrepancies(group: ArtinGroup, max_len: int) -> int:
    """Pairs of equal-length words where rewriting and normal forms disagree"""
    W = group.coxeter
    mismatches = 0
    for length in range(max_len + 1):
        classes = rewriting_classes(group, length)
        by_class: Dict[int, Set[Factors]] = {}
        by_form: Dict[Factors, Set[int]] = {}
        for w, label in classes.items():
            form = group.normalize(W.from_word([s]) for s in w)
            by_class.setdefault(label, set()).add(form)
            by_form.setdefault(form, set()).add(label)
        mismatches += sum(len(forms) - 1 for forms in by_class.values())
        mismatches += sum(len(labels) - 1 for labels in by_form.values())
    return mismatches
