"""Exact finite probability distributions over structured outcomes."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

NORM_TOL = 1e-9
CLAMP_TOL = 1e-12


class MismatchedSpaces(ValueError):
    pass


@dataclass
class OutcomeDistribution:
    """Outcomes are tuples whose components are named by ``fields``.

    Tiny negative probabilities (>= -1e-12, rounding) are clamped to zero;
    anything else that is not a probability vector summing to one is an error.
    """

    fields: tuple[str, ...]
    outcomes: list[tuple]
    probs: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.fields = tuple(self.fields)
        self.outcomes = [tuple(o) for o in self.outcomes]
        probs = np.asarray(self.probs, dtype=np.float64).copy()
        if probs.shape != (len(self.outcomes),):
            raise ValueError("one probability per outcome required")
        if probs.size and probs.min() < -CLAMP_TOL:
            raise ValueError(f"negative probability {probs.min():.3g}")
        probs[probs < 0] = 0.0
        total = probs.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}")
        for o in self.outcomes:
            if len(o) != len(self.fields):
                raise ValueError(f"outcome {o} does not match fields {self.fields}")
        self.probs = probs
        self._index = None

    @classmethod
    def from_dict(cls, fields: Sequence[str], mapping: dict, meta: dict | None = None,
                  drop_zeros: bool = False) -> "OutcomeDistribution":
        items = [(k if isinstance(k, tuple) else (k,), v) for k, v in mapping.items()]
        if drop_zeros:
            items = [(k, v) for k, v in items if v > CLAMP_TOL]
        outcomes = [k for k, _ in items]
        probs = np.array([v for _, v in items], dtype=np.float64)
        return cls(tuple(fields), outcomes, probs, dict(meta or {}))

    @classmethod
    def uniform(cls, fields: Sequence[str], outcomes: Iterable, meta: dict | None = None):
        outcomes = [tuple(o) if isinstance(o, tuple) else (o,) for o in outcomes]
        n = len(outcomes)
        return cls(tuple(fields), outcomes, np.full(n, 1.0 / n), dict(meta or {}))

    def __len__(self) -> int:
        return len(self.outcomes)

    def _lookup(self) -> dict:
        if self._index is None:
            self._index = {o: i for i, o in enumerate(self.outcomes)}
        return self._index

    def prob(self, outcome) -> float:
        outcome = outcome if isinstance(outcome, tuple) else (outcome,)
        i = self._lookup().get(outcome)
        return 0.0 if i is None else float(self.probs[i])

    def as_dict(self) -> dict[tuple, float]:
        return {o: float(p) for o, p in zip(self.outcomes, self.probs)}

    def support(self, tol: float = CLAMP_TOL) -> list[tuple]:
        return [o for o, p in zip(self.outcomes, self.probs) if p > tol]

    def _field_idx(self, names) -> list[int]:
        if isinstance(names, str):
            names = [names]
        try:
            return [self.fields.index(n) for n in names]
        except ValueError:
            raise KeyError(f"unknown field in {names}; have {self.fields}") from None

    def marginal(self, names) -> "OutcomeDistribution":
        idx = self._field_idx(names)
        acc: dict[tuple, float] = {}
        for o, p in zip(self.outcomes, self.probs):
            key = tuple(o[i] for i in idx)
            acc[key] = acc.get(key, 0.0) + p
        return OutcomeDistribution.from_dict([self.fields[i] for i in idx], acc, self.meta)

    def condition(self, name: str, predicate) -> "OutcomeDistribution":
        """Condition on ``predicate(value_of_field)`` (or equality if not callable)."""
        (i,) = self._field_idx(name)
        test = predicate if callable(predicate) else (lambda v: v == predicate)
        keep = [j for j, o in enumerate(self.outcomes) if test(o[i])]
        mass = self.probs[keep].sum()
        if mass <= 0:
            raise ValueError(f"conditioning event {name}={predicate!r} has probability 0")
        meta = dict(self.meta, conditioned_on=f"{name}")
        return OutcomeDistribution(self.fields, [self.outcomes[j] for j in keep],
                                   self.probs[keep] / mass, meta)

    def event_probability(self, name: str, predicate) -> float:
        (i,) = self._field_idx(name)
        test = predicate if callable(predicate) else (lambda v: v == predicate)
        return float(sum(p for o, p in zip(self.outcomes, self.probs) if test(o[i])))

    def aligned(self, other: "OutcomeDistribution") -> tuple[np.ndarray, np.ndarray]:
        if self.fields != other.fields:
            raise MismatchedSpaces(f"{self.fields} vs {other.fields}")
        keys = list(self.outcomes)
        seen = set(keys)
        keys.extend(o for o in other.outcomes if o not in seen)
        a = np.array([self.prob(k) for k in keys])
        b = np.array([other.prob(k) for k in keys])
        return a, b

    def l1(self, other: "OutcomeDistribution") -> float:
        a, b = self.aligned(other)
        return float(np.abs(a - b).sum())

    def total_variation(self, other: "OutcomeDistribution") -> float:
        return 0.5 * self.l1(other)

    def max_abs_diff(self, other: "OutcomeDistribution") -> float:
        a, b = self.aligned(other)
        return float(np.abs(a - b).max()) if a.size else 0.0

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw outcome(s) using ``rng``; a single tuple when ``size`` is None."""
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        if size is None:
            return self.outcomes[int(idx)]
        return [self.outcomes[int(i)] for i in idx]

    def map(self, fn, fields: Sequence[str]) -> "OutcomeDistribution":
        acc: dict[tuple, float] = {}
        for o, p in zip(self.outcomes, self.probs):
            key = tuple(fn(o))
            acc[key] = acc.get(key, 0.0) + p
        return OutcomeDistribution.from_dict(fields, acc, self.meta)

    def sorted(self) -> "OutcomeDistribution":
        order = sorted(range(len(self.outcomes)), key=lambda i: _sort_key(self.outcomes[i]))
        return OutcomeDistribution(self.fields, [self.outcomes[i] for i in order],
                                   self.probs[order], self.meta)

    def to_csv(self, fh=None, header_meta: bool = True) -> str:
        """RFC-4180 CSV; metadata as leading ``#`` comment lines."""
        buf = io.StringIO(newline="")
        if header_meta and self.meta:
            for k in sorted(self.meta):
                buf.write(f"# {k}: {json.dumps(self.meta[k], sort_keys=True, default=str)}\r\n")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(list(self.fields) + ["probability"])
        for o, p in zip(self.outcomes, self.probs):
            w.writerow([_cell(v) for v in o] + [repr(float(p))])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "meta": self.meta,
            "fields": list(self.fields),
            "outcomes": [[_cell(v) for v in o] for o in self.outcomes],
            "probabilities": [float(p) for p in self.probs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, default=str)


def _cell(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def _sort_key(o):
    return tuple((0, v) if isinstance(v, (int, np.integer)) else (1, str(v)) for v in o)


def total_variation(d1: OutcomeDistribution, d2: OutcomeDistribution) -> float:
    """Half the L1 distance between two distributions on the same field space."""
    return d1.total_variation(d2)


def l1_distance(d1: OutcomeDistribution, d2: OutcomeDistribution) -> float:
    return d1.l1(d2)


def mixture(dists: Sequence[OutcomeDistribution], weights=None,
            meta: dict | None = None) -> OutcomeDistribution:
    if not dists:
        raise ValueError("empty mixture")
    fields = dists[0].fields
    w = np.full(len(dists), 1.0 / len(dists)) if weights is None else np.asarray(weights, float)
    acc: dict[tuple, float] = {}
    for d, wi in zip(dists, w):
        if d.fields != fields:
            raise MismatchedSpaces(f"{d.fields} vs {fields}")
        for o, p in zip(d.outcomes, d.probs):
            acc[o] = acc.get(o, 0.0) + wi * p
    return OutcomeDistribution.from_dict(fields, acc, meta if meta is not None else dists[0].meta)
