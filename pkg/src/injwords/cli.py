"""Command-line front end.

    injwords homology --n 3 --labels 1
    injwords spectral --n 3 --labels 1 --letter 3
    injwords wreath   --group cyclic:2 --n 2
    injwords verify   --max-n 4 --max-labels 2

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or validation
error, 3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from .cache import SnfCache
from .complex import build_complex, verify_dd_zero
from .filtration import (
    check_null_homotopy,
    d1_top,
    decomposition_iso,
    e1_page,
    preserves_filtration,
    vanishing_lines,
)
from .homology import betti_table, euler_characteristic
from .words import Alphabet, enumerate_generators, face
from .wreath import (
    BudgetError,
    FiniteGroup,
    GroupTableError,
    act_on_point,
    act_on_word,
    basepoint,
    conjugation_check,
    derangement_formula,
    elements,
    fixed_point_condition_count,
    fixed_point_free_count,
    group_order,
    inclusion_exclusion_total,
    intersection_count_check,
    orbit,
    stabilizer,
    wreath_multiply,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
HARD_MAX_N = 6
DEFAULT_BUDGET = 50_000


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 3
    labels: int = 1
    group: Optional[str] = None
    letter: Optional[int] = None
    fmt: str = "text"
    cache: Optional[str] = None
    budget: int = DEFAULT_BUDGET
    max_n: int = 4
    max_labels: int = 2


@dataclass
class Report:
    command: str
    params: dict
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, name: str, expected: Any, actual: Any, passed: Optional[bool] = None) -> bool:
        ok = (expected == actual) if passed is None else bool(passed)
        self.checks.append({"name": name, "expected": expected, "actual": actual, "pass": ok})
        return ok

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append({**c, "name": prefix + c["name"]})

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        return {"command": self.command, "params": self.params, "checks": self.checks, **self.data}

    def render_text(self) -> str:
        lines = [f"== {self.command} " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        for key, value in self.data.items():
            if isinstance(value, (list, dict)) and len(json.dumps(value)) > 300:
                continue
            lines.append(f"  {key}: {value}")
        for c in self.checks:
            tag = "PASS" if c["pass"] else "FAIL"
            lines.append(f"  {tag}  {c['name']}: expected {c['expected']}, got {c['actual']}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def check_budget(n: int, labels: int, budget: int):
    if n > HARD_MAX_N:
        raise BudgetError(f"n = {n} exceeds the hard cap n <= {HARD_MAX_N}")
    total = sum(Alphabet(n, labels).count(r) for r in range(n + 1))
    if total > budget:
        raise BudgetError(
            f"complex for n={n}, labels={labels} has {total} generators, budget is {budget}"
        )


def _snf_provider(cfg: RunConfig, n: int, labels: int):
    return SnfCache(cfg.cache, n, labels) if cfg.cache else None


def _labels_of(cfg: RunConfig) -> tuple[int, Optional[FiniteGroup]]:
    if cfg.group:
        G = FiniteGroup.parse(cfg.group)
        return G.order, G
    return cfg.labels, None


def homology_report(n: int, labels: int, cfg: RunConfig) -> Report:
    check_budget(n, labels, cfg.budget)
    rep = Report("homology", {"n": n, "labels": labels})
    c = build_complex(Alphabet(n, labels))
    table = betti_table(c, _snf_provider(cfg, n, labels))
    chi = euler_characteristic(c)
    d = derangement_formula(labels, n)
    rep.data["betti"] = [str(h) for h in table]
    rep.data["basis_sizes"] = [c.rank(r) for r in c.degrees]
    rep.data["euler_characteristic"] = chi
    rep.data["d(l)_n"] = d
    rep.check("d o d = 0", True, verify_dd_zero(c))
    for r in range(n):
        rep.check(f"vanishing below top degree: H_{r}", "0", str(table[r]))
    top = table[n]
    rep.check(f"H_{n} torsion-free", [], list(top.torsion))
    rep.check(f"rank H_{n} = d(l)_n", d, top.free_rank)
    rep.check("d(l)_n = (-1)^n * euler characteristic", d, (-1) ** n * chi)
    return rep


def spectral_report(n: int, labels: int, letter: Optional[int], cfg: RunConfig) -> Report:
    if n < 1:
        raise UsageError("spectral needs n >= 1")
    a = n if letter is None else letter
    if not 1 <= a <= n:
        raise UsageError(f"letter {a} is not in 1..{n}")
    check_budget(n, labels, cfg.budget)
    alpha = Alphabet(n, labels)
    c = build_complex(alpha)
    rep = Report("spectral", {"n": n, "labels": labels, "letter": a})
    rep.check("d preserves the filtration", True, preserves_filtration(c, a))
    decomp = [decomposition_iso(c, a, p) for p in range(1, n + 1)]
    rep.data["decomposition"] = [d.to_json() for d in decomp]
    for d in decomp:
        rep.check(
            f"graded quotient p={d.p} splits into {d.expected_summand_count} shifted summands",
            True,
            d.verified,
        )
    page = e1_page(c, a)
    rep.data["e1"] = [e.to_json() for e in page if not e.group.is_zero]
    col0, rest = vanishing_lines(page, n)
    rep.check("E1_{0,q} = 0 for q < n-1", True, col0)
    rep.check("E1_{p,q} = 0 for p >= 1, p+q < n", True, rest)
    d1 = d1_top(c, a)
    rep.data["d1"] = d1.to_json()
    rep.check("lifted cycles form a basis of E1_{1,n-1}", True, d1.spans_e1)
    rep.check("d1 is the identity on each label summand", True, d1.blocks_identity)
    rep.check("d1 surjective, E2_{0,n-1} = 0", "0", str(d1.cokernel))
    hom = check_null_homotopy(alpha, a)
    rep.data["null_homotopy_per_degree"] = {str(k): v for k, v in hom.per_degree.items()}
    rep.check("d s + s d = inclusion in every degree", True, all(hom.per_degree.values()))
    rep.check("inclusion is zero on homology", True, hom.inclusion_zero_on_homology)
    return rep


def wreath_report(G: FiniteGroup, n: int, cfg: RunConfig) -> Report:
    if group_order(G, n) > cfg.budget:
        raise BudgetError(f"|G_{n}| = {group_order(G, n)} exceeds budget {cfg.budget}")
    ell = G.order
    rep = Report("wreath", {"group": G.name, "n": n})
    count = fixed_point_free_count(G, n, cfg.budget)
    d = derangement_formula(ell, n)
    rep.data["fixed_point_free"] = count
    rep.data["d(l)_n"] = d
    rep.check("fixed-point-free count = d(l)_n", d, count)
    rep.check("label condition count = d(l)_n", d, fixed_point_condition_count(ell, n))
    rep.check("inclusion-exclusion total = d(l)_n", d, inclusion_exclusion_total(ell, n))
    subsets = [
        s for i in range(1, n + 1) for s in itertools.combinations(range(1, n + 1), i)
    ]
    if n > 4:
        subsets = [s for s in subsets if len(s) in (1, n)]
    bad = [s for s in subsets if not intersection_count_check(ell, n, s)]
    rep.check("intersection sizes (n-i)! l^(n-i)", [], [list(s) for s in bad])
    order = group_order(G, n)
    for r in range(n + 1):
        x = basepoint(n, r)
        orb = orbit(G, n, x)
        rep.check(f"transitive on degree {r}", True, orb == set(enumerate_generators(Alphabet(n, ell), r)))
        st = stabilizer(G, n, r)
        rep.check(f"Stab(x_{r}) = G_{n - r}", True, st.ok)
        rep.check(f"orbit-stabilizer r={r}", order, len(orb) * len(st.elements))
    bad_conj = []
    for r in range(1, n + 1):
        for i in range(1, r + 1):
            res = conjugation_check(G, n, r, i)
            if not res.ok:
                bad_conj.append([r, i, str(res.witness)])
    rep.check("t.y = x_{r-1} and t centralizes Stab(x_r)", [], bad_conj)
    return rep


def action_laws(G: FiniteGroup, n: int) -> Report:
    """Left-action law, identity and face equivariance, exhaustively."""
    rep = Report("action", {"group": G.name, "n": n})
    alpha = Alphabet(n, G.order)
    els = list(elements(G, n))
    words = [w for r in range(n + 1) for w in enumerate_generators(alpha, r)]
    points = [(a, x) for a in range(1, n + 1) for x in range(G.order)]
    law = all(
        act_on_point(G, wreath_multiply(G, u, v), p) == act_on_point(G, u, act_on_point(G, v, p))
        for u in els
        for v in els
        for p in points
    )
    rep.check("(uv).p = u.(v.p)", True, law)
    word_law = all(
        act_on_word(G, wreath_multiply(G, u, v), w) == act_on_word(G, u, act_on_word(G, v, w))
        for u in els
        for v in els
        for w in words[: 1 + 2 * n]
    )
    rep.check("(uv).w = u.(v.w)", True, word_law)
    equiv = all(
        act_on_word(G, u, face(w, j)) == face(act_on_word(G, u, w), j)
        for u in els
        for w in words
        for j in range(len(w))
    )
    rep.check("faces are equivariant", True, equiv)
    return rep


def semi_simplicial_report(n: int, labels: int) -> Report:
    rep = Report("faces", {"n": n, "labels": labels})
    alpha = Alphabet(n, labels)
    bad = []
    for r in range(2, min(n, 4) + 1):
        for w in enumerate_generators(alpha, r):
            for j in range(r):
                for i in range(j):
                    if face(face(w, j), i) != face(face(w, i), j - 1):
                        bad.append([str(w), i, j])
    rep.check("face_i face_j = face_{j-1} face_i for i < j", [], bad[:5])
    return rep


def verify_report(cfg: RunConfig) -> Report:
    rep = Report("verify", {"max_n": cfg.max_n, "max_labels": cfg.max_labels})
    t0 = time.perf_counter()
    for n in range(0, cfg.max_n + 1):
        for ell in range(1, cfg.max_labels + 1):
            tag = f"[n={n} l={ell}] "
            rep.extend(semi_simplicial_report(n, ell), tag)
            rep.extend(homology_report(n, ell, cfg), tag)
            for a in range(1, n + 1):
                rep.extend(spectral_report(n, ell, a, cfg), f"[n={n} l={ell} a={a}] ")
            G = FiniteGroup.cyclic(ell)
            if group_order(G, n) <= cfg.budget:
                rep.extend(wreath_report(G, n, cfg), tag)
                if n <= 3 and ell <= 2:
                    rep.extend(action_laws(G, n), tag)
    rep.data["runtime_seconds"] = round(time.perf_counter() - t0, 3)
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="alphabet size")
    common.add_argument("--labels", type=int, default=1, help="number of labels")
    common.add_argument("--group", help="cyclic:k or file:PATH (overrides --labels)")
    common.add_argument("--letter", type=int, help="distinguished letter (default n)")
    common.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    common.add_argument("--cache", help="directory for cached Smith forms")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of generators (or group elements)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="injwords", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("homology", parents=[common], help="Betti table and top rank")
    sub.add_parser("spectral", parents=[common], help="filtration, E1 page and d1")
    sub.add_parser("wreath", parents=[common], help="wreath product and derangement checks")
    v = sub.add_parser("verify", parents=[common], help="run every check over a grid")
    v.add_argument("--max-n", type=int, default=4)
    v.add_argument("--max-labels", type=int, default=2)
    return parser


def run(cfg: RunConfig) -> Report:
    if cfg.command == "homology":
        labels, _ = _labels_of(cfg)
        return homology_report(cfg.n, labels, cfg)
    if cfg.command == "spectral":
        labels, _ = _labels_of(cfg)
        return spectral_report(cfg.n, labels, cfg.letter, cfg)
    if cfg.command == "wreath":
        G = FiniteGroup.parse(cfg.group) if cfg.group else FiniteGroup.cyclic(cfg.labels)
        return wreath_report(G, cfg.n, cfg)
    if cfg.command == "verify":
        return verify_report(cfg)
    raise UsageError(f"unknown command {cfg.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        labels=args.labels,
        group=args.group,
        letter=args.letter,
        fmt=args.fmt,
        cache=args.cache,
        budget=args.budget,
        max_n=getattr(args, "max_n", 4),
        max_labels=getattr(args, "max_labels", 2),
    )
    if cfg.n < 0 or cfg.labels < 1:
        parser.error("need --n >= 0 and --labels >= 1")
    try:
        rep = run(cfg)
    except BudgetError as exc:
        print(f"injwords: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GroupTableError as exc:
        print(f"injwords: invalid group table: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, OSError) as exc:
        print(f"injwords: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.fmt == "json":
        print(json.dumps(rep.to_json(), indent=2, default=str))
    elif cfg.command == "verify":
        failures = [c for c in rep.checks if not c["pass"]]
        print(f"{len(rep.checks)} checks, {len(failures)} failed, "
              f"{rep.data['runtime_seconds']}s")
        for c in failures[:1]:
            print(f"FAIL {c['name']}: expected {c['expected']}, got {c['actual']}")
        print("PASS" if rep.passed else "FAIL")
    else:
        print(rep.render_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
