"""Hidden subgroups in extensions: G with a small normal K and G/K = H.

Given a solver for H, a hidden subgroup L of G is found in three steps:
query f on all of K to get L cap K; solve the HSP on H for the oracle
h -> multiset {f(g) : g in t(h) K}, whose hidden subgroup is LK/K; lift
each generator h of that subgroup by scanning t(h) K for an element of L.

G is given by a multiplication table, so this works for non-split
extensions too; only a transversal t: H -> G is needed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .groups import GroupElement, GroupSpec, HiddenOracle, PromiseViolation, SubgroupDesc, uncharged
from .groups import _mul as _affine_mul
from .sampling import AbelianSubgroup, abelian_sample_distribution, trial_rng

TABLE_CAP = 10**5
STREAM_ABELIAN = 21


# -- small group types -----------------------------------------------------------------

class AbelianGroup:
    """Z_{n1} x ... x Z_{nk}, elements are int tuples."""

    def __init__(self, moduli: Sequence[int]):
        self.moduli = tuple(int(n) for n in moduli)
        if not self.moduli or any(n < 1 for n in self.moduli):
            raise ValueError(f"bad moduli {moduli}")

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def identity(self) -> tuple:
        return tuple(0 for _ in self.moduli)

    def elements(self) -> list[tuple]:
        return [tuple(int(v) for v in idx) for idx in np.ndindex(*self.moduli)]

    def mul(self, x, y) -> tuple:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.moduli))

    def normalize(self, x) -> tuple:
        return tuple(int(a) % n for a, n in zip(x, self.moduli))

    def to_dict(self) -> dict:
        return {"moduli": list(self.moduli)}

    def __repr__(self) -> str:
        return " x ".join(f"Z_{n}" for n in self.moduli)


class SpecGroup:
    """A_p or Z_q x| Z_p as a quotient group (elements are GroupElement pairs)."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec

    @property
    def order(self) -> int:
        return self.spec.order

    @property
    def identity(self) -> GroupElement:
        return GroupElement(1, 0)

    def elements(self) -> list[GroupElement]:
        return list(self.spec.elements())

    def mul(self, x, y) -> GroupElement:
        return _affine_mul(x, y, self.spec.p)

    def normalize(self, x) -> GroupElement:
        return self.spec.check(x)

    def to_dict(self) -> dict:
        return {"group": self.spec.to_dict()}

    def __repr__(self) -> str:
        return str(self.spec)


@dataclass
class TableGroup:
    """Finite group given by element labels and a multiplication table of indices."""

    labels: list[str]
    table: np.ndarray

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        n = len(self.labels)
        if n > TABLE_CAP:
            raise ValueError(f"|G|={n} exceeds table cap {TABLE_CAP}")
        if self.table.shape != (n, n) or self.table.min() < 0 or self.table.max() >= n:
            raise ValueError("multiplication table has the wrong shape or entries")
        ident = [i for i in range(n) if np.array_equal(self.table[i], np.arange(n))]
        if len(ident) != 1 or not np.array_equal(self.table[:, ident[0]], np.arange(n)):
            raise ValueError("no two-sided identity")
        self.identity = ident[0]
        inv = np.argmax(self.table == self.identity, axis=1)
        if not np.all(self.table[np.arange(n), inv] == self.identity):
            raise ValueError("not every element is invertible")
        self.inverse = inv
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        gens = [int(g) for g in gens]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def left_coset(self, g: int, sub: Iterable[int]) -> frozenset[int]:
        return frozenset(int(self.table[g, h]) for h in sub)


def incremental_generators(elements: Iterable, generate: Callable[[list], set]) -> list:
    """Greedy generating set: keep an element only if it enlarges the span."""
    gens: list = []
    span = generate(gens)
    for x in elements:
        if x not in span:
            gens.append(x)
            span = generate(gens)
    return gens


def abelian_span(group: AbelianGroup, gens: Sequence[tuple]) -> set:
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def spec_span(group: SpecGroup, gens: Sequence) -> set:
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def span(group, gens) -> set:
    if isinstance(group, AbelianGroup):
        return abelian_span(group, gens)
    return spec_span(group, gens)


# -- the extension --------------------------------------------------------------------

@dataclass
class ExtensionGroup:
    """G (table), normal K <= G, quotient H = G/K and a transversal t: H -> G."""

    group: TableGroup
    kernel: tuple[int, ...]
    quotient: Any
    transversal: dict
    name: str = "G"
    projection: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        g = self.group
        self.kernel = tuple(sorted(int(k) for k in self.kernel))
        kset = frozenset(self.kernel)
        if g.identity not in kset:
            raise ValueError("K must contain the identity")
        if g.generated(self.kernel) != kset:
            raise ValueError("K is not a subgroup")
        for x in range(g.order):
            conj = {int(g.table[g.table[x, k], g.inverse[x]]) for k in self.kernel}
            if conj != kset:
                raise ValueError(f"K is not normal (conjugation by {g.labels[x]})")
        hs = self.quotient.elements()
        if len(hs) * len(self.kernel) != g.order:
            raise ValueError("|H| |K| != |G|")
        proj: dict[int, Any] = {}
        for h in hs:
            if h not in self.transversal:
                raise ValueError(f"transversal misses {h}")
            for x in g.left_coset(self.transversal[h], self.kernel):
                if x in proj:
                    raise ValueError("transversal cosets overlap")
                proj[x] = h
        self.projection = proj
        self._check_homomorphism()

    def _check_homomorphism(self):
        g = self.group
        n = g.order
        if n <= 2000:
            pairs = ((x, y) for x in range(n) for y in range(n))
        else:
            rng = np.random.default_rng(0)
            pairs = zip(rng.integers(n, size=10**4).tolist(), rng.integers(n, size=10**4).tolist())
        mul = self.quotient.mul
        for x, y in pairs:
            if self.projection[int(g.table[x, y])] != mul(self.projection[x], self.projection[y]):
                raise ValueError("the quotient map is not a homomorphism")

    @property
    def k_order(self) -> int:
        return len(self.kernel)

    def coset(self, h) -> list[int]:
        """t(h) K, in K order."""
        t = self.transversal[h]
        return [int(self.group.table[t, k]) for k in self.kernel]

    def to_dict(self) -> dict:
        g = self.group
        q = self.quotient
        return {
            "name": self.name,
            "elements": list(g.labels),
            "mult_table": g.table.tolist(),
            "K": [g.labels[k] for k in self.kernel],
            "quotient": q.to_dict(),
            "transversal": [[list(h), g.labels[t]] for h, t in self.transversal.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ExtensionGroup":
        g = TableGroup(list(d["elements"]), np.asarray(d["mult_table"]))
        qd = d.get("quotient")
        if qd is None:
            # infer Z_{n1} x ... from the integer transversal keys; validated below
            keys = [h if isinstance(h, list) else [h] for h, _ in d["transversal"]]
            quotient = AbelianGroup([max(col) + 1 for col in zip(*keys)])
        elif "moduli" in qd:
            quotient = AbelianGroup(qd["moduli"])
        else:
            quotient = SpecGroup(GroupSpec.from_dict(qd["group"]))
        trans = {}
        for h, lab in d["transversal"]:
            trans[quotient.normalize(h if isinstance(h, list) else [h])] = g.index[lab]
        return cls(g, tuple(g.index[lab] for lab in d["K"]), quotient, trans, d.get("name", "G"))

    @classmethod
    def from_json(cls, text: str) -> "ExtensionGroup":
        return cls.from_dict(json.loads(text))


# -- concrete extensions ------------------------------------------------------------------

_Q8_UNITS = ["1", "i", "j", "k"]
# unit products: (x, y) -> (sign, unit) for x, y in {1, i, j, k}
_Q8_RULES = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}
Q8 = [(s, u) for s in (1, -1) for u in _Q8_UNITS]


def q8_mul(x, y):
    s, u = _Q8_RULES[(x[1], y[1])]
    return (x[0] * y[0] * s, u)


def q8_label(x) -> str:
    return ("" if x[0] == 1 else "-") + x[1]


def quaternion_product(n: int) -> ExtensionGroup:
    """Q8 x Z_n as an extension of K = Q8 by H = Z_n."""
    elems = [(x, z) for x in Q8 for z in range(n)]
    idx = {e: i for i, e in enumerate(elems)}
    table = np.empty((len(elems), len(elems)), dtype=np.int64)
    for i, (x, z) in enumerate(elems):
        for j, (y, w) in enumerate(elems):
            table[i, j] = idx[(q8_mul(x, y), (z + w) % n)]
    labels = [f"({q8_label(x)},{z})" for x, z in elems]
    g = TableGroup(labels, table)
    kernel = tuple(idx[(x, 0)] for x in Q8)
    quotient = AbelianGroup((n,))
    trans = {(z,): idx[((1, "1"), z)] for z in range(n)}
    return ExtensionGroup(g, kernel, quotient, trans, name=f"Q8 x Z_{n}")


def quaternion_central() -> ExtensionGroup:
    """Q8 as a non-split extension of K = {1, -1} by H = Z_2 x Z_2."""
    idx = {e: i for i, e in enumerate(Q8)}
    table = np.array([[idx[q8_mul(x, y)] for y in Q8] for x in Q8], dtype=np.int64)
    g = TableGroup([q8_label(x) for x in Q8], table)
    kernel = (idx[(1, "1")], idx[(-1, "1")])
    trans = {(0, 0): idx[(1, "1")], (1, 0): idx[(1, "i")], (0, 1): idx[(1, "j")],
             (1, 1): idx[(1, "k")]}
    return ExtensionGroup(g, kernel, AbelianGroup((2, 2)), trans, name="Q8")


def qhedral_extension(p: int, q: int) -> tuple[ExtensionGroup, GroupSpec]:
    """Z_q x| Z_p as an extension of K = Z_p (translations) by H = Z_q."""
    spec = GroupSpec.qhedral(p, q)
    elems = list(spec.elements())
    idx = {e: i for i, e in enumerate(elems)}
    table = np.array([[idx[_affine_mul(x, y, p)] for y in elems] for x in elems], dtype=np.int64)
    g = TableGroup([f"({x},{y})" for x, y in elems], table)
    kernel = tuple(idx[GroupElement(1, y)] for y in range(p))
    trans = {(u,): idx[GroupElement(pow(spec.a, u, p), 0)] for u in range(q)}
    return ExtensionGroup(g, kernel, AbelianGroup((q,)), trans, name=str(spec)), spec


def cyclic_times_qhedral(n: int, p: int, q: int) -> tuple[ExtensionGroup, GroupSpec]:
    """Z_n x (Z_q x| Z_p) as an extension of K = Z_n by the q-hedral group."""
    spec = GroupSpec.qhedral(p, q)
    inner = list(spec.elements())
    elems = [(z, g) for z in range(n) for g in inner]
    idx = {e: i for i, e in enumerate(elems)}
    table = np.empty((len(elems), len(elems)), dtype=np.int64)
    for i, (z, x) in enumerate(elems):
        for j, (w, y) in enumerate(elems):
            table[i, j] = idx[((z + w) % n, _affine_mul(x, y, p))]
    g = TableGroup([f"({z},{x[0]},{x[1]})" for z, x in elems], table)
    kernel = tuple(idx[(z, GroupElement(1, 0))] for z in range(n))
    trans = {x: idx[(0, x)] for x in inner}
    return ExtensionGroup(g, kernel, SpecGroup(spec), trans, name=f"Z_{n} x {spec}"), spec


# -- oracles ----------------------------------------------------------------------------------

def make_table_oracle(ext: ExtensionGroup, hidden: Iterable[int]) -> HiddenOracle:
    """f(g) = smallest index in the left coset g L."""
    g = ext.group
    sub = sorted(frozenset(int(x) for x in hidden))
    if g.generated(sub) != frozenset(sub):
        raise ValueError("hidden set is not a subgroup")
    labels = np.array([min(int(g.table[x, h]) for h in sub) for x in range(g.order)])
    o = HiddenOracle(lambda x: int(labels[int(x)]), None, None, name=f"coset[{ext.name}]")
    o.hidden_elements = frozenset(sub)
    return o


def _canonical_multiset(values: list) -> tuple:
    try:
        return tuple(sorted(values))
    except TypeError:
        return tuple(sorted(values, key=repr))


def multiset_oracle(oracle: HiddenOracle, ext: ExtensionGroup) -> HiddenOracle:
    """h -> sorted tuple of f over t(h) K; one call costs |K| calls to f."""

    def fn(h):
        return _canonical_multiset([oracle(g) for g in ext.coset(ext.quotient.normalize(h))])

    return HiddenOracle(fn, None, None, parent=oracle, cost=ext.k_order, name=f"multiset[{oracle.name}]")


# -- abelian HSP ------------------------------------------------------------------------------

def _hidden_abelian(oracle: HiddenOracle, group: AbelianGroup) -> AbelianSubgroup:
    elems = group.elements()
    with uncharged():
        f0 = oracle(group.identity)
        members = tuple(e for e in elems if oracle(e) == f0)
    return AbelianSubgroup(group.moduli, members)


def abelian_hsp_solver(oracle: HiddenOracle, moduli: Sequence[int], seed: int = 0,
                       max_samples: int | None = None, detail: bool = False):
    """Generators of the subgroup hidden by ``oracle`` on Z_{n1} x ... x Z_{nk}.

    Each sample is a character chi drawn from the exact coset-state law
    (uniform on the annihilator of L). The candidate is the common kernel
    of the characters seen so far; it always contains L, so it equals L as
    soon as its generators all map to f(0), which is checked classically
    whenever the candidate shrinks.
    """
    group = AbelianGroup(moduli)
    if group.order > 10**6:
        raise ValueError("|H| exceeds 10^6")
    n_lcm = math.lcm(*group.moduli)
    elems = np.array(group.elements(), dtype=np.int64).reshape(group.order, len(group.moduli))
    scale = np.array([n_lcm // n for n in group.moduli], dtype=np.int64)
    max_samples = max_samples or 4 * math.ceil(math.log2(max(group.order, 2))) + 16
    dist = abelian_sample_distribution(_hidden_abelian(oracle, group))
    f0 = oracle(group.identity)
    mask = np.ones(group.order, dtype=bool)
    last_checked = -1
    observed = []
    for i in range(max_samples + 1):
        size = int(mask.sum())
        if size != last_checked:
            last_checked = size
            cand = [tuple(int(v) for v in row) for row in elems[mask]]
            gens = incremental_generators(cand, lambda gs: abelian_span(group, gs))
            if all(oracle(g) == f0 for g in gens):
                return (gens, observed) if detail else gens
        if i == max_samples:
            break
        oracle.charge(1)
        chi = dist.sample(trial_rng(seed, STREAM_ABELIAN, i))
        observed.append(chi)
        mask &= ((elems * (np.array(chi) * scale)).sum(axis=1) % n_lcm) == 0
    raise RuntimeError("sample budget exhausted")


def make_abelian_solver(seed: int = 0) -> Callable:
    def solver(oracle: HiddenOracle, group: AbelianGroup) -> list:
        return abelian_hsp_solver(oracle, group.moduli, seed)
    return solver


def make_qhedral_solver(seed: int = 0, max_trials: int = 200) -> Callable:
    """Adapter: the q-hedral reconstruction as an H-solver."""
    from .reconstruction import solve_hsp_qhedral

    def solver(oracle: HiddenOracle, group: SpecGroup) -> list:
        spec = group.spec
        o = HiddenOracle(oracle, spec, None, parent=oracle, cost=1, name="H-view")
        res = solve_hsp_qhedral(o, spec, seed, max_trials=max_trials)
        if not res.verified:
            raise RuntimeError("q-hedral solver failed")
        return res.subgroup.generators(spec)
    return solver


# -- closure under extensions --------------------------------------------------------------

@dataclass
class SubgroupTriple:
    S: list[int]          # generators of L cap K (indices into G)
    T: list               # generators of L_H (elements of H)
    eta: dict             # h in T -> some g in L over h
    queries: dict = field(default_factory=dict)

    def generators(self) -> list[int]:
        return list(self.S) + [self.eta[h] for h in self.T]

    def generated(self, ext: ExtensionGroup) -> frozenset[int]:
        return ext.group.generated(self.generators())

    def to_dict(self, ext: ExtensionGroup) -> dict:
        lab = ext.group.labels
        return {
            "S": [lab[g] for g in self.S],
            "T": [list(h) for h in self.T],
            "eta": [[list(h), lab[g]] for h, g in self.eta.items()],
            "order": len(self.generated(ext)),
            "queries": self.queries,
        }


def solve_extension_hsp(oracle: HiddenOracle, ext: ExtensionGroup,
                        h_solver: Callable) -> SubgroupTriple:
    """Reconstruct L from S (L cap K), T (generators of LK/K) and lifts eta(T)."""
    g = ext.group
    q0 = oracle.queries
    values = {k: oracle(k) for k in ext.kernel}
    f1 = values[g.identity]
    in_k = [k for k in ext.kernel if values[k] == f1]
    S = incremental_generators(in_k, lambda gs: g.generated(gs))
    step1 = oracle.queries - q0
    fprime = multiset_oracle(oracle, ext)
    T = h_solver(fprime, ext.quotient)
    T = [ext.quotient.normalize(h) for h in T]
    step2 = oracle.queries - q0 - step1
    eta = {}
    for h in T:
        for x in ext.coset(h):
            if oracle(x) == f1:
                eta[h] = x
                break
        else:
            raise PromiseViolation(f"no element of the hidden subgroup lies over {h}")
    step3 = oracle.queries - q0 - step1 - step2
    queries = {"kernel_scan": step1, "quotient_solver": step2, "lift": step3,
               "fprime_queries": fprime.queries, "total": oracle.queries - q0}
    return SubgroupTriple(S, T, eta, queries)


def level_sets_match(oracle: HiddenOracle, ext: ExtensionGroup, sub: frozenset[int]) -> bool:
    """Exhaustive: f(x) = f(y) iff x, y lie in the same left coset of ``sub``."""
    g = ext.group
    inv = g.inverse
    with uncharged():
        vals = [oracle(x) for x in range(g.order)]
    for x in range(g.order):
        for y in range(g.order):
            same = int(g.table[inv[x], y]) in sub
            if same != (vals[x] == vals[y]):
                return False
    return True


def random_subgroup(ext: ExtensionGroup, rng: np.random.Generator, max_gens: int = 2) -> frozenset[int]:
    k = int(rng.integers(1, max_gens + 1))
    gens = [int(x) for x in rng.integers(ext.group.order, size=k)]
    return ext.group.generated(gens)
