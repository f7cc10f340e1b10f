"""Build, verify and export shard intersection orders of types A, B and D.

    shardlat build  --type A --n 4 --format json --out s4.json
    shardlat verify el --type D --n 4 --jobs 4
    shardlat mobius --type A --n 4
    shardlat gamma  --n 4
    shardlat export --type A --n 3 --format dot

`verify` prints JSON lines {suite, instance, status, witness} and exits 0
exactly when no record has status "fail".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Iterator, Optional

from .elements import (TYPES, descent_count, element_cap, enumerate as enumerate_elements,
                       format_element, group_order, one_descent_elements, parse_element)
from .lattice import (CHAIN_CAP, PosetError, SearchBudgetExceeded, find_sbd, is_lattice, join,
                      maximal_chains, mobius, to_dot, to_json, verify_sbd, weyl_poset)

SUITES = ("el", "sbd", "shards", "cones", "lattice", "nc")
SBD_SEARCH_BUDGET = 2_000_000


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    type_tag: str = "A"
    n: int = 3
    out: Optional[str] = None
    format: str = "json"
    max_elements: int = 0
    max_chains: int = CHAIN_CAP
    jobs: int = 1
    suite: Optional[str] = None
    lo: Optional[str] = None
    hi: Optional[str] = None
    classes: bool = False

    def __post_init__(self):
        if self.type_tag not in TYPES:
            raise UsageError(f"unknown type {self.type_tag!r}")
        lowest = 2 if self.type_tag == "D" else 1
        if self.n < lowest:
            raise UsageError(f"type {self.type_tag} needs n >= {lowest}")
        if self.max_elements <= 0 or self.max_chains <= 0 or self.jobs <= 0:
            raise UsageError("caps and --jobs must be positive")


def record(suite: str, instance: str, ok: Optional[bool], witness=None) -> dict:
    status = "skip" if ok is None else "pass" if ok else "fail"
    return {"suite": suite, "instance": instance, "status": status, "witness": witness}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _poset(cfg: RunConfig):
    size = group_order(cfg.type_tag, cfg.n)
    if size > cfg.max_elements:
        raise PosetError(f"{cfg.type_tag}_{cfg.n} has {size} elements, "
                         f"above the element cap {cfg.max_elements}")
    return weyl_poset(cfg.type_tag, cfg.n, cap=cfg.max_elements)


def _text(p) -> str:
    lines = []
    for r in range(p.rank_max + 1):
        lines.append(f"rank {r}: " + " ".join(p.labels[x] for x in range(len(p)) if p.rank[x] == r))
    return "\n".join(lines) + "\n"


def _render(p, fmt: str, groups=None) -> str:
    if fmt == "dot":
        return to_dot(p, groups)
    if fmt == "text":
        return _text(p)
    return to_json(p)


# ------------------------------------------------------------------ commands

def cmd_build(cfg: RunConfig) -> int:
    p = _poset(cfg)
    _emit(_render(p, cfg.format), cfg.out)
    summary = (f"{cfg.type_tag}_{cfg.n}: {len(p)} elements, "
               f"rank profile {' '.join(map(str, p.rank_profile()))}")
    print(summary, file=sys.stderr if cfg.out is None else sys.stdout)
    return 0


def cmd_export(cfg: RunConfig) -> int:
    p = _poset(cfg)
    groups = None
    if cfg.classes:
        if cfg.type_tag != "A":
            raise UsageError("hop classes exist only for type A")
        from .sbd import sbd_of_symmetric_group

        d = sbd_of_symmetric_group(cfg.n, p)
        groups = [0] * len(p)
        for ci, cls in enumerate(d.classes):
            for x in cls.members:
                groups[x] = ci
    _emit(_render(p, cfg.format, groups), cfg.out)
    return 0


def cmd_mobius(cfg: RunConfig) -> int:
    from .shelling import chain_labels

    p = _poset(cfg)
    lo = p.bottom if cfg.lo is None else p.index(parse_element(cfg.lo, cfg.type_tag))
    hi = p.top if cfg.hi is None else p.index(parse_element(cfg.hi, cfg.type_tag))
    if not p.leq[lo, hi]:
        raise UsageError(f"{p.labels[lo]} is not below {p.labels[hi]}")
    mu = mobius(p, lo, hi)
    out = {"lo": p.labels[lo], "hi": p.labels[hi], "mobius": mu, "abs": abs(mu)}
    try:
        chains = maximal_chains(p, lo, hi, cap=cfg.max_chains)
    except PosetError:
        out["chains"] = out["falling"] = None
    else:
        labels = [chain_labels(tuple(p.payloads[x] for x in c)) for c in chains]
        out["chains"] = len(chains)
        out["falling"] = sum(1 for lab in labels if all(a > b for a, b in zip(lab, lab[1:])))
    _emit(json.dumps(out) + "\n", cfg.out)
    return 0


def cmd_gamma(cfg: RunConfig) -> int:
    from .sbd import gamma_vector

    _emit(" ".join(map(str, gamma_vector(cfg.n))) + "\n", cfg.out)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.suite or "all"
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    chosen = SUITES if suite == "all" else (suite,)
    records = []
    for name in chosen:
        records.extend(sorted(SUITE_RUNNERS[name](cfg), key=lambda r: r["instance"]))
    _emit("".join(json.dumps(r, sort_keys=True) + "\n" for r in records), cfg.out)
    return 1 if any(r["status"] == "fail" for r in records) else 0


# -------------------------------------------------------------------- suites

def _tag(cfg) -> str:
    return f"{cfg.type_tag}_{cfg.n}"


def suite_shards(cfg) -> Iterator[dict]:
    from .shards import enumerate_shards, shard_count_formula, shard_index

    kind, n = cfg.type_tag, cfg.n
    shards = enumerate_shards(kind, n)
    formula = shard_count_formula(kind, n)
    atoms = one_descent_elements(kind, n)
    counts = {"shards": len(shards), "formula": formula, "one_descent": len(atoms)}
    yield record("shards", f"{_tag(cfg)}:count", len(set(counts.values())) == 1, counts)
    try:
        index = shard_index(kind, n)
        ok = set(index) == set(atoms)
        yield record("shards", f"{_tag(cfg)}:bijection", ok,
                     None if ok else "shard elements differ from one-descent elements")
    except ValueError as exc:
        yield record("shards", f"{_tag(cfg)}:bijection", False, str(exc))
    if group_order(kind, n) <= cfg.max_elements:
        from .shards import decompose_into_shards, join_of_shards

        bad = [format_element(w) for w in enumerate_elements(kind, n)
               if join_of_shards(decompose_into_shards(w), kind, n) != w]
        yield record("shards", f"{_tag(cfg)}:decomposition", not bad, bad[:5] or None)


def suite_cones(cfg) -> Iterator[dict]:
    from .cones import closure, cone_of, dimension_law_holds, element_of_closure
    from .preorders import leq

    elements = enumerate_elements(cfg.type_tag, cfg.n)
    if len(elements) > cfg.max_elements:
        raise PosetError(f"{_tag(cfg)} has {len(elements)} elements, above the element cap")
    cones = [closure(cone_of(w)) for w in elements]
    bad = []
    for a, u in enumerate(elements):
        for b, v in enumerate(elements):
            if leq(u, v) != cones[b].implies(cones[a]) and len(bad) < 5:
                bad.append([format_element(u), format_element(v)])
    yield record("cones", f"{_tag(cfg)}:leq-vs-containment", not bad, bad or None)
    dims = [format_element(w) for w in elements if not dimension_law_holds(w)]
    yield record("cones", f"{_tag(cfg)}:dimension", not dims, dims[:5] or None)
    trips = [format_element(w) for w, c in zip(elements, cones) if element_of_closure(c) != w]
    yield record("cones", f"{_tag(cfg)}:read-off", not trips, trips[:5] or None)


def suite_lattice(cfg) -> Iterator[dict]:
    from .preorders import join_direct

    p = _poset(cfg)
    hist = [0] * (p.rank_max + 1)
    for w in p.payloads:
        hist[descent_count(w)] += 1
    yield record("lattice", f"{_tag(cfg)}:grading", tuple(hist) == p.rank_profile(),
                 {"profile": list(p.rank_profile())})
    check = is_lattice(p)
    wit = None if check else [p.labels[check.witness[0]], p.labels[check.witness[1]],
                              check.witness[2]]
    yield record("lattice", f"{_tag(cfg)}:is-lattice", check.ok, wit)
    bad = []
    for u in range(len(p)):
        for v in range(u + 1, len(p)):
            z = join(p, u, v)
            if z is None or join_direct(p.payloads[u], p.payloads[v]) != p.payloads[z]:
                bad.append([p.labels[u], p.labels[v]])
                if len(bad) >= 5:
                    break
        if len(bad) >= 5:
            break
    yield record("lattice", f"{_tag(cfg)}:join-direct", not bad, bad or None)


def suite_el(cfg) -> Iterator[dict]:
    from .shelling import verify_el

    p = _poset(cfg)
    report = verify_el(p, jobs=cfg.jobs).to_json(p)
    yield record("el", f"{_tag(cfg)}:intervals", report["ok"],
                 {"intervals": report["intervals"], "violations": len(report["violations"])})
    for v in report["violations"]:
        yield record("el", f"{_tag(cfg)}:[{v['lo']},{v['hi']}]", False, v["witness"])


def suite_sbd(cfg) -> Iterator[dict]:
    if cfg.type_tag == "A":
        from .sbd import gamma_identity_holds, hop_classes, sbd_of_symmetric_group

        p = _poset(cfg)
        report = verify_sbd(p, sbd_of_symmetric_group(cfg.n, p))
        yield record("sbd", f"{_tag(cfg)}:hop-classes", report.ok,
                     {"gamma": list(report.gamma), "classes": len(hop_classes(cfg.n)),
                      "violations": report.violations[:5]})
        yield record("sbd", f"{_tag(cfg)}:gamma-identity", gamma_identity_holds(cfg.n),
                     {"gamma": list(report.gamma)})
        return
    # no decomposition is known in types B and D; search small cases
    p = _poset(cfg)
    try:
        d = find_sbd(p, budget=SBD_SEARCH_BUDGET)
    except SearchBudgetExceeded as exc:
        yield record("sbd", f"{_tag(cfg)}:search", None, str(exc))
        return
    if d is None:
        yield record("sbd", f"{_tag(cfg)}:search", None, "no symmetric boolean decomposition exists")
        return
    report = verify_sbd(p, d)
    yield record("sbd", f"{_tag(cfg)}:search", report.ok,
                 {"gamma": list(report.gamma), "violations": report.violations[:5]})


def suite_nc(cfg) -> Iterator[dict]:
    from .sbd import (hop_closed_on_231, nc_poset, noncrossing_partitions, phi, phi_inv,
                      sbd_of_nc, verify_nc_sublattice)

    if cfg.type_tag != "A":
        yield record("nc", f"{_tag(cfg)}", None, "noncrossing partitions are checked in type A only")
        return
    n = cfg.n
    bad = hop_closed_on_231(n)
    yield record("nc", f"NC({n}):231-closure", not bad, bad[:5] or None)
    trips = [str(pi) for pi in noncrossing_partitions(n) if phi(phi_inv(pi)) != pi]
    yield record("nc", f"NC({n}):phi-round-trip", not trips, trips[:5] or None)
    rep = verify_nc_sublattice(n, _poset(cfg))
    yield record("nc", f"NC({n}):sublattice", rep.ok, rep.to_json())
    q = nc_poset(n)
    report = verify_sbd(q, sbd_of_nc(n, q))
    yield record("nc", f"NC({n}):sbd", report.ok, report.to_json())


SUITE_RUNNERS = {"el": suite_el, "sbd": suite_sbd, "shards": suite_shards,
                 "cones": suite_cones, "lattice": suite_lattice, "nc": suite_nc}


# ------------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="type_tag", choices=TYPES, default="A")
    common.add_argument("--n", type=int, default=3)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--out", default=None)
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--max-chains", type=int, default=CHAIN_CAP)
    common.add_argument("--max-elements", type=int, default=None,
                        help="element cap (default from SHARDLAT_CAP_ELEMENTS or 10000)")

    parser = argparse.ArgumentParser(prog="shardlat", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="materialise a shard intersection order")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite_pos", nargs="?", metavar="SUITE", help=", ".join(SUITES + ("all",)))
    v.add_argument("--suite", default=None)
    m = sub.add_parser("mobius", parents=[common], help="Möbius value of an interval")
    m.add_argument("--lo", default=None)
    m.add_argument("--hi", default=None)
    sub.add_parser("gamma", parents=[common], help="gamma vector of the symmetric group")
    e = sub.add_parser("export", parents=[common], help="export the Hasse diagram")
    e.add_argument("--classes", action="store_true", help="colour hop classes (type A)")
    return parser


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "mobius": cmd_mobius,
            "gamma": cmd_gamma, "export": cmd_export}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        suite = None
        if args.command == "verify":
            if args.suite_pos and args.suite and args.suite_pos != args.suite:
                raise UsageError("conflicting suite names")
            suite = args.suite or args.suite_pos
        cap = args.max_elements if args.max_elements is not None else element_cap()
        cfg = RunConfig(args.command, args.type_tag, args.n, args.out, args.format, cap,
                        args.max_chains, args.jobs, suite, getattr(args, "lo", None),
                        getattr(args, "hi", None), getattr(args, "classes", False))
        return COMMANDS[cfg.command](cfg)
    except (UsageError, PosetError, ValueError, OSError) as exc:
        print(f"shardlat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
