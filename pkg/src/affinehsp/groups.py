"""The affine group A_p and the q-hedral groups Z_q x| Z_p.

Elements are pairs ``(a, b)`` acting on Z_p as ``x -> a*x + b``; the
product is composition, ``(a1, b1)(a2, b2) = (a1*a2, b1 + a1*b2)``.
A q-hedral group is realised as the normal subgroup N_q of A_p whose
multiplicative parts lie in the order-q subgroup <a> of Z_p^*.

Subgroups are described symbolically (:class:`SubgroupDesc`) because the
whole subgroup lattice has a closed form:

* ``trivial``;
* ``normal(n)`` = N_n, all ``(x, y)`` with ``x**n == 1``, size ``n*p``
  (``full`` is N_q);
* ``conjugate(a', b)`` = ``(1, b) <(a', 0)> (1, -b)``, the elements
  ``(a'**t, (1 - a'**t) * b)``, size ``order(a')``.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
import json
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, NamedTuple

import numpy as np

from . import numtheory as nt

ENUMERATION_CAP = 10**6


class PromiseViolation(RuntimeError):
    """The oracle is not constant-and-distinct on the cosets of any subgroup."""


class GroupElement(NamedTuple):
    a: int
    b: int

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


IDENTITY = GroupElement(1, 0)


@dataclass(frozen=True)
class GroupSpec:
    """Prime p, divisor q of p-1, generator gamma of Z_p^*, and a of order q."""

    p: int
    q: int
    gamma: int
    a: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 3 or not nt.is_prime(p):
            raise ValueError(f"p={p} must be an odd prime")
        if q < 1 or (p - 1) % q:
            raise ValueError(f"q={q} must divide p-1={p - 1}")
        if not nt.is_generator(self.gamma, p):
            raise ValueError(f"gamma={self.gamma} does not generate Z_{p}^*")
        if self.a % p == 0 or nt.multiplicative_order(self.a, p) != q:
            raise ValueError(f"a={self.a} does not have order {q} mod {p}")

    @classmethod
    def affine(cls, p: int, gamma: int | None = None) -> "GroupSpec":
        gamma = nt.primitive_root(p) if gamma is None else gamma
        return cls(p, p - 1, gamma, gamma % p)

    @classmethod
    def qhedral(cls, p: int, q: int, gamma: int | None = None,
                a: int | None = None) -> "GroupSpec":
        gamma = nt.primitive_root(p) if gamma is None else gamma
        if (p - 1) % q:
            raise ValueError(f"q={q} must divide p-1={p - 1}")
        a = pow(gamma, (p - 1) // q, p) if a is None else a
        return cls(p, q, gamma, a % p)

    @property
    def kind(self) -> str:
        return "affine" if self.q == self.p - 1 else "qhedral"

    @property
    def order(self) -> int:
        return self.q * self.p

    @property
    def index(self) -> int:
        """Index r = (p-1)/q of <a> in Z_p^*."""
        return (self.p - 1) // self.q

    def ambient(self) -> "GroupSpec":
        """The affine group A_p that contains this group."""
        if self.kind == "affine":
            return self
        return GroupSpec.affine(self.p, self.gamma)

    def element_of_order(self, n: int) -> int:
        """The canonical element gamma**((p-1)/n) of order n (n must divide q)."""
        if n < 1 or self.q % n:
            raise ValueError(f"order {n} does not divide q={self.q}")
        return pow(self.gamma, (self.p - 1) // n, self.p)

    @cached_property
    def mult_powers(self) -> np.ndarray:
        """The multiplicative parts <a>, in exponent order a**0, a**1, ..."""
        return nt.subgroup_powers(self.a, self.p)

    def contains(self, g) -> bool:
        x, y = g
        return (0 < x < self.p and 0 <= y < self.p
                and (self.q == self.p - 1 or pow(x, self.q, self.p) == 1))

    def check(self, g) -> GroupElement:
        if not self.contains(g):
            raise ValueError(f"{tuple(g)} is not an element of {self}")
        return GroupElement(int(g[0]), int(g[1]))

    def elements(self) -> Iterator[GroupElement]:
        if self.order > ENUMERATION_CAP:
            raise ValueError(f"|G|={self.order} exceeds enumeration cap")
        for x in sorted(int(v) for v in self.mult_powers):
            for y in range(self.p):
                yield GroupElement(x, y)

    def random_element(self, rng: np.random.Generator) -> GroupElement:
        x = int(self.mult_powers[rng.integers(self.q)])
        return GroupElement(x, int(rng.integers(self.p)))

    def exponent(self, x: int) -> int:
        """u with a**u == x, for x in <a>."""
        return nt.discrete_log(x, self.a, self.p)

    def log(self, x: int) -> int:
        """Discrete log to base gamma."""
        return nt.discrete_log(x, self.gamma, self.p)

    def to_dict(self) -> dict[str, Any]:
        return {"p": self.p, "q": self.q, "gamma": self.gamma, "a": self.a}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GroupSpec":
        return cls(int(d["p"]), int(d["q"]), int(d["gamma"]), int(d["a"]))

    def __str__(self) -> str:
        if self.kind == "affine":
            return f"A_{self.p}"
        return f"Z_{self.q} x| Z_{self.p}"


def multiply(x, y, spec: GroupSpec) -> GroupElement:
    x, y = spec.check(x), spec.check(y)
    return _mul(x, y, spec.p)


def _mul(x, y, p: int) -> GroupElement:
    return GroupElement(x[0] * y[0] % p, (x[1] + x[0] * y[1]) % p)


def inverse(x, spec: GroupSpec) -> GroupElement:
    x = spec.check(x)
    return _inv(x, spec.p)


def _inv(x, p: int) -> GroupElement:
    ainv = pow(x[0], -1, p)
    return GroupElement(ainv, (-ainv * x[1]) % p)


def power(x, n: int, spec: GroupSpec) -> GroupElement:
    x = spec.check(x)
    if n < 0:
        x, n = _inv(x, spec.p), -n
    result = IDENTITY
    while n:
        if n & 1:
            result = _mul(result, x, spec.p)
        x = _mul(x, x, spec.p)
        n >>= 1
    return result


def element_order(x, spec: GroupSpec) -> int:
    x = spec.check(x)
    if x[0] == 1:
        return 1 if x[1] == 0 else spec.p
    return nt.multiplicative_order(x[0], spec.p)


@dataclass(frozen=True)
class SubgroupDesc:
    """Symbolic subgroup of A_p or Z_q x| Z_p.

    ``n`` is the order of the multiplicative projection: 1 for trivial,
    q' for ``normal(q')`` and order(a') for ``conjugate(a', b)``.
    """

    kind: str
    n: int = 1
    a: int = 1
    b: int = 0

    KINDS = ("trivial", "full", "normal", "conjugate")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown subgroup kind {self.kind!r}")

    @classmethod
    def trivial(cls) -> "SubgroupDesc":
        return cls("trivial")

    @classmethod
    def full(cls) -> "SubgroupDesc":
        return cls("full")

    @classmethod
    def normal(cls, n: int) -> "SubgroupDesc":
        return cls("normal", n=int(n))

    @classmethod
    def conjugate(cls, a: int, b: int, spec: GroupSpec) -> "SubgroupDesc":
        a, b = int(a) % spec.p, int(b) % spec.p
        if not spec.contains((a, 0)):
            raise ValueError(f"a={a} is not in the multiplicative part of {spec}")
        n = nt.multiplicative_order(a, spec.p)
        if n == 1:
            return cls.trivial()
        return cls("conjugate", n=n, a=a, b=b)

    def canonical(self, spec: GroupSpec) -> "SubgroupDesc":
        """Normal form: full -> normal(q); conjugate uses gamma**((p-1)/n)."""
        if self.kind == "full" or (self.kind == "normal" and self.n == spec.q):
            return SubgroupDesc("normal", n=spec.q)
        if self.kind == "conjugate":
            return SubgroupDesc("conjugate", n=self.n,
                                a=spec.element_of_order(self.n), b=self.b % spec.p)
        return self

    def same_as(self, other: "SubgroupDesc", spec: GroupSpec) -> bool:
        return self.canonical(spec) == other.canonical(spec)

    def mult_order(self, spec: GroupSpec) -> int:
        if self.kind == "full":
            return spec.q
        return self.n

    def size(self, spec: GroupSpec) -> int:
        if self.kind == "trivial":
            return 1
        if self.kind == "conjugate":
            return self.n
        return self.mult_order(spec) * spec.p

    def contains_translations(self) -> bool:
        return self.kind in ("normal", "full")

    def is_normal(self, spec: GroupSpec) -> bool:
        return self.kind != "conjugate"

    def validate(self, spec: GroupSpec) -> "SubgroupDesc":
        if self.kind == "normal" and (self.n < 1 or spec.q % self.n):
            raise ValueError(f"normal subgroup order {self.n} does not divide q={spec.q}")
        if self.kind == "conjugate" and not spec.contains((self.a, self.b)):
            raise ValueError(f"{self} is not a subgroup of {spec}")
        return self

    def _gen(self, spec: GroupSpec) -> int:
        # generator of the multiplicative projection
        if self.kind == "conjugate":
            return self.a
        return spec.element_of_order(self.mult_order(spec)) if self.kind != "trivial" else 1

    def contains(self, g, spec: GroupSpec) -> bool:
        x, y = int(g[0]) % spec.p, int(g[1]) % spec.p
        if self.kind == "trivial":
            return (x, y) == (1, 0)
        n = self.mult_order(spec)
        if pow(x, n, spec.p) != 1:
            return False
        if self.kind == "conjugate":
            return y == (1 - x) * self.b % spec.p
        return True

    def elements(self, spec: GroupSpec) -> list[GroupElement]:
        size = self.size(spec)
        if size > ENUMERATION_CAP:
            raise ValueError(f"|H|={size} exceeds enumeration cap")
        p = spec.p
        if self.kind == "trivial":
            return [IDENTITY]
        powers = nt.subgroup_powers(self._gen(spec), p)
        if self.kind == "conjugate":
            return [GroupElement(int(x), int((1 - x) * self.b % p)) for x in powers]
        return [GroupElement(int(x), y) for x in powers for y in range(p)]

    def random_element(self, spec: GroupSpec, rng: np.random.Generator) -> GroupElement:
        p = spec.p
        if self.kind == "trivial":
            return IDENTITY
        powers = nt.subgroup_powers(self._gen(spec), p)
        x = int(powers[rng.integers(len(powers))])
        if self.kind == "conjugate":
            return GroupElement(x, (1 - x) * self.b % p)
        return GroupElement(x, int(rng.integers(p)))

    def generators(self, spec: GroupSpec) -> list[GroupElement]:
        p = spec.p
        if self.kind == "trivial":
            return []
        if self.kind == "conjugate":
            return [GroupElement(self.a, (1 - self.a) * self.b % p)]
        gens = [GroupElement(1, 1)]
        g = self._gen(spec)
        if g != 1:
            gens.append(GroupElement(g, 0))
        return gens

    def coset_label(self, g, spec: GroupSpec) -> GroupElement:
        """Lexicographically minimal element of the left coset gH."""
        p = spec.p
        x, y = int(g[0]) % p, int(g[1]) % p
        if self.kind == "trivial":
            return GroupElement(x, y)
        powers = nt.subgroup_powers(self._gen(spec), p)
        xs = (x * powers) % p
        t = int(np.argmin(xs))
        if self.kind == "conjugate":
            # g * (a'^t, (1 - a'^t) b)
            at = int(powers[t])
            return GroupElement(int(xs[t]), (y + x * (1 - at) * self.b) % p)
        return GroupElement(int(xs[t]), 0)

    def coset_representatives(self, spec: GroupSpec) -> list[GroupElement]:
        """Canonical (minimal) representative of every left coset."""
        count = spec.order // self.size(spec)
        if count > ENUMERATION_CAP:
            raise ValueError(f"{count} cosets exceed enumeration cap")
        p = spec.p
        if self.kind == "trivial":
            return list(spec.elements())
        n = self.mult_order(spec)
        # coset minima of the order-n subgroup inside <a>
        sub = nt.subgroup_powers(self._gen(spec), p)
        amb = np.sort(spec.mult_powers)
        seen = np.zeros(p, dtype=bool)
        mins = []
        for x in amb:
            if not seen[x]:
                mins.append(int(x))
                seen[(int(x) * sub) % p] = True
        assert len(mins) * n == spec.q
        if self.kind == "conjugate":
            return [GroupElement(x, y) for x in mins for y in range(p)]
        return [GroupElement(x, 0) for x in mins]

    def intersect_normal(self, m: int, spec: GroupSpec) -> "SubgroupDesc":
        """H intersected with {(x, y): x**m == 1}, for m dividing q."""
        from math import gcd
        if self.kind == "trivial":
            return self
        g = gcd(self.mult_order(spec), m)
        if self.kind == "conjugate":
            if g == 1:
                return SubgroupDesc.trivial()
            return SubgroupDesc.conjugate(pow(self.a, self.n // g, spec.p), self.b, spec)
        return SubgroupDesc.normal(g)

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "conjugate":
            return {"kind": "conjugate", "a": self.a, "b": self.b}
        if self.kind == "normal":
            return {"kind": "normal", "order": self.n}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, d: dict[str, Any], spec: GroupSpec) -> "SubgroupDesc":
        kind = d["kind"]
        if kind == "conjugate":
            return cls.conjugate(int(d["a"]), int(d["b"]), spec)
        if kind == "normal":
            return cls.normal(int(d["order"])).validate(spec)
        return cls(kind)

    def describe(self, spec: GroupSpec) -> str:
        if self.kind == "conjugate":
            return f"H_{self.a}^{self.b} (order {self.n})"
        if self.kind == "normal":
            return f"N_{self.n} (order {self.size(spec)})"
        return self.kind


def all_subgroups(spec: GroupSpec) -> list[SubgroupDesc]:
    """Every subgroup of the group, each exactly once."""
    subs = [SubgroupDesc.trivial()]
    for n in nt.divisors(spec.q):
        subs.append(SubgroupDesc.normal(n).canonical(spec))
        if n > 1:
            a = spec.element_of_order(n)
            subs.extend(SubgroupDesc("conjugate", n=n, a=a, b=b) for b in range(spec.p))
    return subs


def subgroup_from_elements(elements: Iterable, spec: GroupSpec) -> SubgroupDesc:
    """Identify an explicitly listed subgroup with its symbolic description."""
    elems = {GroupElement(int(x) % spec.p, int(y) % spec.p) for x, y in elements}
    if IDENTITY not in elems:
        raise ValueError("not a subgroup: identity missing")
    size = len(elems)
    if size == 1:
        desc = SubgroupDesc.trivial()
    elif any(x == 1 and y != 0 for x, y in elems):
        if size % spec.p:
            raise ValueError("not a subgroup")
        desc = SubgroupDesc.normal(size // spec.p).canonical(spec)
    else:
        x, y = max(elems, key=lambda g: nt.multiplicative_order(g[0], spec.p))
        b = y * pow(1 - x, -1, spec.p) % spec.p
        desc = SubgroupDesc.conjugate(x, b, spec)
    if desc.size(spec) != size or not all(desc.contains(g, spec) for g in elems):
        raise ValueError("element set is not a subgroup")
    return desc


def group_json(spec: GroupSpec, h: SubgroupDesc | None = None) -> str:
    d = spec.to_dict()
    if h is not None:
        d["subgroup"] = h.to_dict()
    return json.dumps(d)


def parse_group_json(text: str) -> tuple[GroupSpec, SubgroupDesc | None]:
    d = json.loads(text)
    spec = GroupSpec.from_dict(d)
    sub = d.get("subgroup")
    return spec, (SubgroupDesc.from_dict(sub, spec) if sub is not None else None)


# -- oracles -----------------------------------------------------------------

_uncharged = contextvars.ContextVar("uncharged", default=False)


@contextlib.contextmanager
def uncharged():
    """Evaluate oracles without touching their query counters.

    Used by the simulated quantum device, which sees the whole function at
    once and bills a single superposition query through :meth:`charge`.
    """
    token = _uncharged.set(True)
    try:
        yield
    finally:
        _uncharged.reset(token)


class HiddenOracle:
    """Black-box function constant and distinct on the left cosets of a subgroup.

    ``truth`` is the hidden subgroup when the harness knows it. Solvers must
    not read it; only the simulated sampling device does, standing in for
    the superposition query. ``parent``/``cost`` describe derived oracles:
    one query here costs ``cost`` queries to ``parent``.
    """

    def __init__(self, fn: Callable[[Any], Any], spec: GroupSpec | None = None,
                 truth: SubgroupDesc | None = None, *, parent: "HiddenOracle | None" = None,
                 cost: int = 1, name: str = "f"):
        self._fn = fn
        self.spec = spec
        self.truth = truth
        self.parent = parent
        self.cost = cost
        self.name = name
        self._lock = threading.Lock()
        self._classical = 0
        self._quantum = 0

    def __call__(self, g):
        if not _uncharged.get():
            with self._lock:
                self._classical += 1
        return self._fn(g)

    def peek(self, g):
        with uncharged():
            return self._fn(g)

    def charge(self, n: int = 1) -> None:
        """Bill n superposition queries (propagated to the parent oracle)."""
        with self._lock:
            self._quantum += n
        if self.parent is not None:
            self.parent.charge(n * self.cost)

    @property
    def queries(self) -> int:
        return self._classical + self._quantum

    @property
    def classical_queries(self) -> int:
        return self._classical

    @property
    def quantum_queries(self) -> int:
        return self._quantum

    def __repr__(self) -> str:
        return f"HiddenOracle({self.name}, queries={self.queries})"


def make_subgroup_oracle(h: SubgroupDesc, spec: GroupSpec) -> HiddenOracle:
    """Oracle whose value at g is the canonical label of the coset gH."""
    h = h.validate(spec)

    def fn(g):
        return h.coset_label(spec.check(g), spec)

    return HiddenOracle(fn, spec, truth=h, name=f"coset[{h.describe(spec)}]")


def coset_representatives(h: SubgroupDesc, spec: GroupSpec) -> list[GroupElement]:
    return h.coset_representatives(spec)


def enumerate_subgroup(h: SubgroupDesc, spec: GroupSpec) -> list[GroupElement]:
    return h.elements(spec)


def level_sets(oracle: HiddenOracle, elements: Iterable) -> list[frozenset]:
    """Partition ``elements`` by oracle value (uncharged)."""
    groups: dict[Any, set] = {}
    with uncharged():
        for g in elements:
            groups.setdefault(oracle(g), set()).add(g)
    return sorted((frozenset(s) for s in groups.values()), key=min)


def left_cosets(h: SubgroupDesc, spec: GroupSpec) -> list[frozenset]:
    hs = h.elements(spec)
    return sorted((frozenset(_mul(c, x, spec.p) for x in hs)
                   for c in h.coset_representatives(spec)), key=min)


def hidden_subgroup_by_enumeration(oracle: HiddenOracle, spec: GroupSpec) -> SubgroupDesc:
    """Recover the subgroup an oracle hides by evaluating it everywhere (uncharged).

    This is what the simulated quantum device does when no ground truth is
    attached; it is only possible for enumerable groups.
    """
    with uncharged():
        values = {g: oracle(g) for g in spec.elements()}
    target = values[IDENTITY]
    h = subgroup_from_elements([g for g, v in values.items() if v == target], spec)
    # the promise: constant on each left coset, distinct across cosets
    labels: dict = {}
    for g, v in values.items():
        lab = h.coset_label(g, spec)
        if labels.setdefault(lab, v) != v:
            raise ValueError(f"oracle is not constant on the coset of {lab}")
    if len(set(labels.values())) != len(labels):
        raise ValueError("oracle repeats a value on distinct cosets")
    return h


def product_pairs(elements: list) -> Iterator[tuple]:
    return itertools.product(elements, repeat=2)
