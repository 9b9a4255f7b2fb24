"""Command-line front end: one subcommand per experiment.

Every artifact carries ``schema: 1`` and the full run configuration.
Output is deterministic for fixed flags; wall-clock time is only
recorded with ``--timing``.

Exit codes: 0 success, 1 solver failure or promise violation, 2 bad flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import kernels
from . import numtheory as nt
from .distributions import OutcomeDistribution
from .groups import GroupSpec, PromiseViolation, SubgroupDesc, make_subgroup_oracle

SCHEMA = 1


class FlagError(ValueError):
    """Parameter combination rejected before any computation."""


class SolverFailure(RuntimeError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    output: str | None = None
    format: str = "json"

    def as_dict(self) -> dict:
        return asdict(self)


# -- emission ------------------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (set, frozenset)):
        return sorted(v)
    if hasattr(v, "to_dict"):
        return v.to_dict()
    raise TypeError(f"not serialisable: {type(v).__name__}")


def render_json(cfg: RunConfig, payload: dict) -> str:
    doc = {"schema": SCHEMA, "config": cfg.as_dict(), **payload}
    return json.dumps(doc, sort_keys=True, indent=2, default=_jsonable) + "\n"


def render_csv(cfg: RunConfig, header: Sequence[str], rows: Sequence[Sequence[Any]],
               meta: dict | None = None) -> str:
    buf = io.StringIO(newline="")
    lines = {"schema": SCHEMA, "config": cfg.as_dict(), **(meta or {})}
    for k in sorted(lines):
        buf.write(f"# {k}: {json.dumps(lines[k], sort_keys=True, default=_jsonable)}\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else _jsonable_cell(v)
                    for v in row])
    return buf.getvalue()


def _jsonable_cell(v):
    return int(v) if isinstance(v, np.integer) else v


def render_distribution(cfg: RunConfig, dist: OutcomeDistribution, extra: dict | None = None) -> str:
    if cfg.format == "json":
        return render_json(cfg, {"distribution": dist.to_json_obj(), **(extra or {})})
    rows = [list(o) + [float(p)] for o, p in zip(dist.outcomes, dist.probs)]
    meta = {"meta": dist.meta, **(extra or {})}
    return render_csv(cfg, list(dist.fields) + ["probability"], rows, meta)


def write_output(text: str, path: str | None) -> None:
    if path in (None, "-"):
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:  # e.g. piped into head
            sys.stdout = None
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# -- validation helpers ---------------------------------------------------------------------

def _prime(p: int) -> int:
    if p < 3 or not nt.is_prime(p):
        raise FlagError(f"--p {p} must be an odd prime")
    return p


def _order_param(p: int, q: int | None, a: int | None, default_q: int | None = None) -> tuple[int, int]:
    """Resolve (q, a): q | p-1 and order(a) = q."""
    q = default_q if q is None else q
    if q is None and a is None:
        q = p - 1
    if a is not None:
        if not 1 <= a % p:
            raise FlagError(f"--a {a} must be a unit mod p")
        oa = nt.multiplicative_order(a % p, p)
        if q is not None and oa != q:
            raise FlagError(f"--a {a} has order {oa}, not --q {q}")
        return oa, a % p
    if q < 1 or (p - 1) % q:
        raise FlagError(f"--q {q} must divide p-1 = {p - 1}")
    return q, GroupSpec.affine(p).element_of_order(q)


def _require_seed(args) -> int:
    if args.seed is None:
        raise FlagError("--seed is required for this subcommand")
    return args.seed


def _parallel_map(fn: Callable, items: list, threads: int) -> list:
    """Map in input order; results do not depend on the thread count."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# -- subcommands ----------------------------------------------------------------------------

def cmd_dist(args, cfg: RunConfig) -> tuple[str, int]:
    from .reps import observe_rep_distribution
    from .sampling import (MeasurementBasis, abelian_sample_distribution,
                           coset_averaged_distribution, info_measurement_distribution,
                           row_fourier_distribution)

    p = _prime(args.p)
    spec = GroupSpec.affine(p)
    q, a = _order_param(p, args.q, args.a)
    h = SubgroupDesc.trivial() if q == 1 else SubgroupDesc.conjugate(a, args.b, spec)
    cfg.params.update(p=p, q=q, a=a, b=args.b % p, kind=args.kind, basis=args.basis)
    if args.kind == "weak":
        dist = observe_rep_distribution(h, spec)
    elif args.kind == "strong":
        if spec.order > 2000:
            raise FlagError("strong distributions are enumerated; need p(p-1) <= 2000")
        if args.basis == "random":
            basis = MeasurementBasis.random(_require_seed(args))
        else:
            basis = MeasurementBasis.adapted()
        dist = coset_averaged_distribution(h, basis, spec)
    elif args.kind == "row":
        dist = row_fourier_distribution(h, spec, joint=args.joint)
    elif args.kind == "info":
        if q < 2:
            raise FlagError("the info measurement needs q >= 2")
        dist = info_measurement_distribution(h, spec, a)
    else:
        dist = abelian_sample_distribution(h, spec)
    total = float(np.sum(dist.probs))
    return render_distribution(cfg, dist, {"total_probability": total}), 0


def cmd_hcp(args, cfg: RunConfig) -> tuple[str, int]:
    from .reconstruction import solve_hcp_affine

    p = _prime(args.p)
    seed = _require_seed(args)
    q, a = _order_param(p, args.q, args.a)
    if q < 2:
        raise FlagError("the hidden subgroup must be non-normal (q >= 2)")
    spec = GroupSpec.affine(p)
    bs = [args.b % p] if args.b is not None else \
        [int(v) for v in np.random.default_rng([seed, 99]).integers(p, size=args.runs)]
    cfg.params.update(p=p, q=q, a=a, b=args.b, runs=len(bs), trials=args.trials)

    def one(item):
        i, b = item
        h = SubgroupDesc.conjugate(a, b, spec)
        oracle = make_subgroup_oracle(h, spec)
        t0 = time.perf_counter()
        res = solve_hcp_affine(oracle, a, spec, seed=seed + i, max_trials=args.trials)
        row = {"b": b, "recovered": res.info.get("b"), "verified": res.verified,
               "correct": bool(res.verified and res.subgroup.same_as(h, spec)),
               "trials": res.trials, "queries": res.queries}
        if args.timing:
            row["seconds"] = time.perf_counter() - t0
        return row

    rows = _parallel_map(one, list(enumerate(bs)), args.threads)
    ok = all(r["correct"] for r in rows)
    if len(rows) == 1:
        payload = dict(rows[0])
    else:
        payload = {"runs": rows, "recoveries": sum(r["correct"] for r in rows)}
    return render_json(cfg, payload), 0 if ok else 1


def _parse_hidden(text: str, spec: GroupSpec) -> SubgroupDesc:
    """trivial | normal:n | conjugate:n:b (n the order of the subgroup's multiplicative part)."""
    parts = text.split(":")
    try:
        if parts[0] == "trivial" and len(parts) == 1:
            return SubgroupDesc.trivial()
        if parts[0] == "normal" and len(parts) == 2:
            return SubgroupDesc.normal(int(parts[1])).validate(spec)
        if parts[0] == "conjugate" and len(parts) == 3:
            n, b = int(parts[1]), int(parts[2])
            if n < 2:
                raise ValueError("conjugate subgroups need order >= 2")
            return SubgroupDesc.conjugate(spec.element_of_order(n), b, spec)
    except ValueError as exc:
        raise FlagError(f"--hidden {text}: {exc}") from exc
    raise FlagError(f"--hidden {text}: expected trivial, normal:n or conjugate:n:b")


def cmd_hsp(args, cfg: RunConfig) -> tuple[str, int]:
    from .reconstruction import solve_hsp_qhedral

    p = _prime(args.p)
    seed = _require_seed(args)
    q = args.q if args.q is not None else p - 1
    if q < 2 or (p - 1) % q:
        raise FlagError(f"--q {q} must be >= 2 and divide p-1")
    spec = GroupSpec.affine(p) if q == p - 1 else GroupSpec.qhedral(p, q)
    h = _parse_hidden(args.hidden, spec)
    cfg.params.update(p=p, q=q, hidden=h.to_dict(), trials=args.trials)
    oracle = make_subgroup_oracle(h, spec)
    t0 = time.perf_counter()
    res = solve_hsp_qhedral(oracle, spec, seed, max_trials=args.trials)
    payload = res.to_dict(spec)
    payload.pop("transcript", None)
    payload["correct"] = bool(res.verified and res.subgroup is not None and res.subgroup.same_as(h, spec))
    if args.timing:
        payload["seconds"] = time.perf_counter() - t0
    return render_json(cfg, payload), 0 if payload["correct"] else 1


def cmd_info(args, cfg: RunConfig) -> tuple[str, int]:
    from .reconstruction import determine_subgroup_order, info_reconstruct_subgroup
    from .sampling import info_measurement_distribution

    p = _prime(args.p)
    spec = GroupSpec.affine(p)
    if args.mode == "distribution":
        q, a = _order_param(p, args.q, args.a)
        if q < 2:
            raise FlagError("the info measurement needs q >= 2")
        cfg.params.update(p=p, q=q, a=a, b=args.b % p, mode=args.mode)
        h = SubgroupDesc.conjugate(a, args.b, spec)
        return render_distribution(cfg, info_measurement_distribution(h, spec, a)), 0
    seed = _require_seed(args)
    h = _parse_hidden(args.hidden, spec)
    cfg.params.update(p=p, hidden=h.to_dict(), mode=args.mode, samples=args.samples)
    oracle = make_subgroup_oracle(h, spec)
    t0 = time.perf_counter()
    if args.mode == "order":
        if h.kind == "normal":
            raise FlagError("order finding assumes a non-normal hidden subgroup")
        n, steps = determine_subgroup_order(oracle, spec, seed, args.samples, detail=True)
        payload = {"order": n, "steps": steps, "correct": n == h.size(spec),
                   "queries": oracle.queries}
    else:
        res = info_reconstruct_subgroup(oracle, spec, seed, args.samples)
        payload = res.to_dict(spec)
        payload.pop("transcript", None)
        payload["correct"] = bool(res.verified and res.subgroup.same_as(h, spec))
    if args.timing:
        payload["seconds"] = time.perf_counter() - t0
    return render_json(cfg, payload), 0 if payload["correct"] else 1


def cmd_random_basis(args, cfg: RunConfig) -> tuple[str, int]:
    from .distributions import total_variation
    from .sampling import info_measurement_distribution, random_basis_distribution

    p = _prime(args.p)
    seed = _require_seed(args)
    q, a = _order_param(p, args.q, args.a)
    if q < 2:
        raise FlagError("need a non-normal subgroup (q >= 2)")
    spec = GroupSpec.affine(p)
    b, b2 = args.b % p, (args.b2 if args.b2 is not None else args.b + 1) % p
    d = p - 1
    rank = d // q
    delta = args.A * math.sqrt(math.log(d) / rank)
    cfg.params.update(p=p, q=q, a=a, b=b, b2=b2, A=args.A, bases=args.bases)
    rows = []
    for i in range(args.bases):
        s = seed + i
        P1 = random_basis_distribution(SubgroupDesc.conjugate(a, b, spec), s, spec)
        P2 = random_basis_distribution(SubgroupDesc.conjugate(a, b2, spec), s, spec)
        l1u = float(np.abs(np.asarray(P1.probs) - 1 / d).sum())
        rows.append([s, l1u, float(np.abs(np.asarray(P1.probs) - np.asarray(P2.probs)).sum()),
                     l1u <= delta])
    tv = total_variation(info_measurement_distribution(SubgroupDesc.conjugate(a, b, spec), spec, a),
                         info_measurement_distribution(SubgroupDesc.conjugate(a, b2, spec), spec, a))
    meta = {"delta": delta, "rank": rank, "dim": d, "adapted_tv": tv}
    header = ["basis_seed", "l1_to_uniform", "l1_between_shifts", "within_delta"]
    if cfg.format == "csv":
        return render_csv(cfg, header, rows, meta), 0
    return render_json(cfg, {**meta, "rows": [dict(zip(header, r)) for r in rows]}), 0


def cmd_abelian_fail(args, cfg: RunConfig) -> tuple[str, int]:
    from .sampling import abelian_sample_distribution

    p = _prime(args.p)
    spec = GroupSpec.affine(p)
    q, a = _order_param(p, args.q, args.a)
    if q < 2:
        raise FlagError("need a non-normal subgroup (q >= 2)")
    cfg.params.update(p=p, q=q, a=a, b=args.b % p)
    dist = abelian_sample_distribution(SubgroupDesc.conjugate(a, args.b, spec), spec)
    extra = {}
    if q == p - 1:
        n = p - 1
        expect = {"(0,0)": 1 / p, "(0,l!=0)": 1 / (p * n * n), "(k!=0,0)": 0.0,
                  "(k!=0,l!=0)": 1 / (n * n)}
        arr = np.zeros((n, p))
        for (k, l), v in zip(dist.outcomes, dist.probs):
            arr[k, l] = v
        got = {"(0,0)": arr[0, 0], "(0,l!=0)": arr[0, 1:], "(k!=0,0)": arr[1:, 0],
               "(k!=0,l!=0)": arr[1:, 1:]}
        extra["max_deviation"] = {k: float(np.max(np.abs(np.asarray(got[k]) - expect[k])))
                                  for k in expect}
    return render_distribution(cfg, dist, extra), 0


def cmd_shift(args, cfg: RunConfig) -> tuple[str, int]:
    from .hidden_shift import make_shift_instance, solve_hidden_shift

    p = _prime(args.p)
    seed = _require_seed(args)
    if args.r < 2 or (p - 1) % args.r:
        raise FlagError(f"--r {args.r} must be >= 2 and divide p-1")
    ss = [args.s % p] if args.s is not None else \
        [int(v) for v in np.random.default_rng([seed, 98]).integers(p, size=args.runs)]
    cfg.params.update(p=p, r=args.r, s=args.s, runs=len(ss), trials=args.trials)

    def one(item):
        i, s = item
        inst = make_shift_instance(p, args.r, s, seed=seed + i)
        t0 = time.perf_counter()
        res = solve_hidden_shift(inst, None, seed + i, max_trials=args.trials)
        row = {"s": s, "recovered": res.info.get("s"), "verified": res.verified,
               "correct": bool(res.verified and res.info.get("s") == s),
               "queries": res.queries, "trials": res.trials}
        if args.timing:
            row["seconds"] = time.perf_counter() - t0
        return row

    rows = _parallel_map(one, list(enumerate(ss)), args.threads)
    ok = all(r["correct"] for r in rows)
    payload = dict(rows[0]) if len(rows) == 1 else \
        {"runs": rows, "recoveries": sum(r["correct"] for r in rows)}
    return render_json(cfg, payload), 0 if ok else 1


def cmd_extension(args, cfg: RunConfig) -> tuple[str, int]:
    from .extension import (AbelianGroup, ExtensionGroup, level_sets_match, make_abelian_solver,
                            make_table_oracle, qhedral_extension, quaternion_central,
                            quaternion_product, random_subgroup, solve_extension_hsp)

    seed = _require_seed(args)
    if args.table:
        try:
            with open(args.table) as fh:
                ext = ExtensionGroup.from_json(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise FlagError(f"--table: {exc}") from exc
    elif args.group == "q8xz":
        ext = quaternion_product(args.n)
    elif args.group == "q8":
        ext = quaternion_central()
    else:
        _prime(args.p)
        if args.q is None or args.q < 2 or (args.p - 1) % args.q:
            raise FlagError("--q must be >= 2 and divide p-1")
        ext = qhedral_extension(args.p, args.q)[0]
    if not isinstance(ext.quotient, AbelianGroup):
        raise FlagError("the command-line solver needs an abelian quotient")
    g = ext.group
    if args.hidden:
        try:
            gens = [g.index[lab.strip()] for lab in args.hidden.split(";") if lab.strip()]
        except KeyError as exc:
            raise FlagError(f"--hidden: unknown element {exc}") from exc
        L = g.generated(gens)
    else:
        L = random_subgroup(ext, np.random.default_rng([seed, 97]))
    cfg.params.update(group=ext.name, table=args.table, hidden=args.hidden,
                      hidden_order=len(L))
    oracle = make_table_oracle(ext, L)
    tri = solve_extension_hsp(oracle, ext, make_abelian_solver(seed))
    got = tri.generated(ext)
    correct = got == L and level_sets_match(oracle, ext, got)
    bound = ext.k_order * (1 + len(tri.T) + tri.queries["fprime_queries"])
    payload = {"triple": tri.to_dict(ext), "correct": bool(correct),
               "query_bound": bound, "f_queries": oracle.queries,
               "hidden": sorted(g.labels[x] for x in L)}
    return render_json(cfg, payload), 0 if correct else 1


def cmd_gauss(args, cfg: RunConfig) -> tuple[str, int]:
    from .expsums import gauss_degenerate_value, gauss_table, incomplete_sum_profile

    p = _prime(args.p)
    g = nt.primitive_root(p) if args.g is None else args.g
    if not nt.is_generator(g % p, p):
        raise FlagError(f"--g {g} does not generate Z_{p}^*")
    cfg.params.update(p=p, g=g, incomplete=args.incomplete)
    if args.incomplete:
        rows = [incomplete_sum_profile(p, q) for q in nt.divisors(p - 1) if q > 1]
        if cfg.format == "csv":
            header = list(rows[0])
            return render_csv(cfg, header, [[r[k] for k in header] for r in rows]), 0
        return render_json(cfg, {"profiles": rows}), 0
    G = gauss_table(p, g)
    rows = []
    for s in range(p):
        for t in range(p - 1):
            v = complex(G[s, t])
            rows.append([s, t, v.real, v.imag, abs(v), gauss_degenerate_value(p, s, t)])
    header = ["s", "t", "re", "im", "abs", "degenerate_value"]
    meta = {"sqrt_p": math.sqrt(p)}
    if cfg.format == "csv":
        return render_csv(cfg, header, [[x if x is not None else "" for x in r] for r in rows], meta), 0
    return render_json(cfg, {**meta, "rows": [dict(zip(header, r)) for r in rows]}), 0


def cmd_acceptance(args, cfg: RunConfig) -> tuple[str, int]:
    from .acceptance import CRITERIA, format_line

    nums = sorted(set(args.criteria)) if args.criteria else sorted(CRITERIA)
    bad = [n for n in nums if n not in CRITERIA]
    if bad:
        raise FlagError(f"unknown criteria {bad}")
    cfg.params.update(criteria=nums)
    results = []
    for n in nums:
        r = CRITERIA[n]()
        if not args.quiet:
            print(format_line(r), file=sys.stderr, flush=True)
        d = r.as_dict()
        if not args.timing:
            d.pop("seconds")
        results.append(d)
    ok = all(d["passed"] for d in results)
    payload = {"results": results, "passed": sum(d["passed"] for d in results), "total": len(results)}
    return render_json(cfg, payload), 0 if ok else 1


# -- parser ---------------------------------------------------------------------------------

def _common(sp: argparse.ArgumentParser, fmt: str = "json"):
    sp.add_argument("--seed", type=int, default=None, help="PRNG seed (required for stochastic runs)")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default=fmt)
    sp.add_argument("--threads", type=int, default=1, help="parallel runs; output is unaffected")
    sp.add_argument("--timing", action="store_true", help="record wall-clock seconds")
    sp.add_argument("--backend", choices=("auto", "python", "cython"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="affinehsp",
                                 description="Fourier sampling experiments on affine and q-hedral groups")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dist", help="weak / strong / row / info / abelian distributions")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, help="order of the hidden subgroup (divides p-1)")
    sp.add_argument("--a", type=int, help="generator of the hidden subgroup's multiplicative part")
    sp.add_argument("--b", type=int, default=0)
    sp.add_argument("--kind", choices=("weak", "strong", "row", "info", "abelian"), default="weak")
    sp.add_argument("--basis", choices=("adapted", "random"), default="adapted")
    sp.add_argument("--joint", action="store_true", help="row: keep the block label k")
    _common(sp, "csv")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("hcp", help="hidden conjugate in A_p by row-Fourier sampling")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int, help="hidden shift (default: --runs random shifts)")
    sp.add_argument("--runs", type=int, default=1)
    sp.add_argument("--trials", type=int, default=200)
    _common(sp)
    sp.set_defaults(func=cmd_hcp)

    sp = sub.add_parser("hsp", help="any hidden subgroup of Z_q x| Z_p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--hidden", required=True, help="trivial | normal:n | conjugate:n:b")
    sp.add_argument("--trials", type=int, default=200)
    _common(sp)
    sp.set_defaults(func=cmd_hsp)

    sp = sub.add_parser("info", help="information-theoretic measurement and order finding")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--mode", choices=("distribution", "reconstruct", "order"), default="reconstruct")
    sp.add_argument("--q", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int, default=0)
    sp.add_argument("--hidden", default="trivial", help="trivial | normal:n | conjugate:n:b")
    sp.add_argument("--samples", type=int, default=None)
    _common(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("random-basis", help="strong sampling in Haar-random bases")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int, default=1)
    sp.add_argument("--b2", type=int)
    sp.add_argument("--bases", type=int, default=10)
    sp.add_argument("--A", type=float, default=8.0)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_random_basis)

    sp = sub.add_parser("abelian-fail", help="forgetful abelian sampling on A_p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int, default=1)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_abelian_fail)

    sp = sub.add_parser("shift", help="hidden shift of a multiplicative coset function")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, help="hidden shift (default: --runs random shifts)")
    sp.add_argument("--runs", type=int, default=1)
    sp.add_argument("--trials", type=int, default=200)
    _common(sp)
    sp.set_defaults(func=cmd_shift)

    sp = sub.add_parser("extension", help="hidden subgroups of an extension G of K by H")
    sp.add_argument("--group", choices=("q8xz", "q8", "qhedral"), default="q8xz")
    sp.add_argument("--n", type=int, default=15, help="q8xz: the cyclic factor")
    sp.add_argument("--p", type=int, default=7)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--table", help="JSON file {elements, mult_table, K, transversal[, quotient]}")
    sp.add_argument("--hidden", help="';'-separated generator labels (default: random subgroup)")
    _common(sp)
    sp.set_defaults(func=cmd_extension)

    sp = sub.add_parser("gauss", help="Gauss sums and incomplete sums")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--g", type=int, help="generator for the multiplicative characters")
    sp.add_argument("--incomplete", action="store_true", help="max |incomplete sum| per subgroup order")
    _common(sp, "csv")
    sp.set_defaults(func=cmd_gauss)

    sp = sub.add_parser("acceptance", help="run the acceptance suite")
    sp.add_argument("--criteria", type=int, nargs="*")
    sp.add_argument("--quiet", action="store_true")
    _common(sp)
    sp.set_defaults(func=cmd_acceptance)
    return ap


def _params(args) -> dict:
    skip = {"func", "command", "seed", "out", "format", "threads", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    cfg = RunConfig(args.command, {"flags": _params(args)}, args.seed, args.out, args.format)
    try:
        if args.backend != "auto":
            try:
                kernels.use_backend(args.backend)
            except ValueError as exc:
                raise FlagError(str(exc)) from exc
        text, code = args.func(args, cfg)
    except FlagError as exc:
        parser.error(str(exc))
    except (PromiseViolation, SolverFailure, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    write_output(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
