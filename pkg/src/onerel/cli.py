"""Command-line front end.

    onerel normalize "<a,b; a^-1 b a^-1 b^-1 a>"
    onerel magnus-tree "<a,b; a^2 b^-3>" --format dot
    onerel ends "<a,b; a^2>" --radius 5

Reports go to stdout, diagnostics to stderr.  Exit status is 1 for parse or
validation errors and 2 for inconclusive results under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .cayley import (
    DEFAULT_STATES,
    EndsClass,
    OracleBudget,
    ProbeStatus,
    cayley_ball,
    count_ends,
    complex_ball,
    freiheitssatz_probe,
)
from .complex import euler_characteristic, fundamental_presentation, homology, standard_complex
from .errors import DepthLimitExceeded, OneRelError
from .magnus import build_hierarchy
from .presentation import abelian_invariants, normalize_relator, parse_presentation
from .towers import ball_filtration, pro_pi1, ray_bases, semistability_report, telescopic_check
from .verdict import Verdict

COMMANDS = ("parse", "normalize", "magnus-tree", "complex", "ball", "ends",
            "freiheitssatz", "pro-pi1", "semistable")

# JSON schema shipped for each command's output
SCHEMA_FOR = {"parse": "parse", "normalize": "normalize", "magnus-tree": "magnus",
              "complex": "complex", "ball": "ball", "ends": "ends", "freiheitssatz": "probe",
              "pro-pi1": "tower", "semistable": "semistability"}


def load_schema(command: str) -> dict:
    name = SCHEMA_FOR.get(command, command)
    return json.loads(resources.files("onerel").joinpath("schemas", f"{name}.json").read_text())


class Inconclusive(Exception):
    """Raised under --strict when a report contains an Unknown verdict."""


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _radii(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    env_states = os.environ.get("MAGNUS_BUDGET_STATES")
    default_states = int(env_states) if env_states else DEFAULT_STATES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("presentation", help="presentation like '<a,b; a^2>' or a file containing one")
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--radius", type=_positive, default=None)
    common.add_argument("--budget-states", type=_positive, default=default_states,
                        help="words visited per equality query (env MAGNUS_BUDGET_STATES)")
    common.add_argument("--budget-length", type=_positive, default=None,
                        help="longest intermediate word in the insertion search")
    common.add_argument("--depth-limit", type=_positive, default=64)
    common.add_argument("--strict", action="store_true",
                        help="exit 2 if any verdict is Unknown or inconclusive")
    common.add_argument("--seed", type=int, default=0,
                        help="recorded in reports; every command is deterministic")

    ap = argparse.ArgumentParser(prog="onerel", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("parse", parents=[common], help="parse and echo a presentation")
    sub.add_parser("normalize", parents=[common], help="cyclic core, primitive root, abelianization")
    p = sub.add_parser("magnus-tree", parents=[common], help="rewriting hierarchy down to base cases")
    p.add_argument("--pivot", default=None, help="generator name to pivot on at the root")
    sub.add_parser("complex", parents=[common], help="standard 2-complex and its invariants")
    sub.add_parser("ball", parents=[common], help="ball in the Cayley graph")
    p = sub.add_parser("ends", parents=[common], help="estimate the number of ends")
    p.add_argument("--inner", type=_positive, default=1, help="first inner radius of the sweep")
    p = sub.add_parser("freiheitssatz", parents=[common], help="forest check for a generator subset")
    p.add_argument("--subset", required=True, help="comma-separated generator names")
    p = sub.add_parser("pro-pi1", parents=[common], help="complement tower of concentric balls")
    p.add_argument("--radii", type=_radii, default=[2, 3, 4, 5], help="e.g. 2,3,4 or 2..5")
    p.add_argument("--ray", choices=("max", "min"), default="max")
    p = sub.add_parser("semistable", parents=[common], help="per-component bond surjectivity")
    p.add_argument("--radii", type=_radii, default=[2, 3, 4, 5], help="e.g. 2,3,4 or 2..5")
    return ap


def _read_presentation(arg: str):
    text = arg
    if not arg.lstrip().startswith("<") and Path(arg).is_file():
        text = Path(arg).read_text()
    return parse_presentation(text.strip())


def _budget(args) -> OracleBudget:
    return OracleBudget(max_length=args.budget_length, max_states=args.budget_states)


def _emit(args, payload: dict, text: str, dot: str | None = None) -> None:
    if args.format == "dot":
        if dot is None:
            raise OneRelError(f"{args.command} has no DOT output")
        print(dot)
    elif args.format == "text":
        print(text)
    else:
        payload = dict(payload)
        payload["command"] = args.command
        payload["seed"] = args.seed
        print(json.dumps(payload, indent=2))


def _check(args, ok: bool, what: str) -> None:
    if args.strict and not ok:
        raise Inconclusive(what)


def cmd_parse(args, P):
    data = P.to_json()
    data["text"] = str(P)
    _emit(args, data, str(P))


def cmd_normalize(args, P):
    nr = normalize_relator(P)
    inv = abelian_invariants(P)
    data = {"presentation": str(P), "core": P.format(nr.core), "root": P.format(nr.root),
            "s": nr.s, "conjugator": P.format(nr.conjugator),
            "abelianization": {"free_rank": inv.free_rank, "torsion": list(inv.torsion)}}
    text = (f"core        {data['core']}\nroot        {data['root']}\ns           {nr.s}\n"
            f"conjugator  {data['conjugator']}\nabelian     {inv}")
    _emit(args, data, text)


def cmd_magnus(args, P):
    pivot = P.index(args.pivot) if args.pivot else None
    try:
        H = build_hierarchy(P, args.depth_limit, pivot)
    except DepthLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.partial is not None:
            _emit(args, exc.partial.to_json(), str(exc), exc.partial.to_dot())
        raise
    lines = []
    for n in H.nodes():
        N = n.presentation
        lines.append(f"{'  ' * n.depth}{n.tag.kind}: {N.format(n.relator.core)}"
                     + (f"  (s={n.relator.s})" if n.relator.s > 1 else ""))
    _emit(args, H.to_json(), "\n".join(lines), H.to_dot())


def cmd_complex(args, P):
    K = standard_complex(P)
    H = homology(K)
    data = K.to_json()
    data.update(euler_characteristic=euler_characteristic(K), betti=list(H.betti),
                torsion=list(H.torsion), fundamental_presentation=str(fundamental_presentation(K)))
    text = (f"cells  {K.counts()}\nchi    {data['euler_characteristic']}\n"
            f"betti  {H.betti}  torsion {H.torsion}")
    labels = {g + 1: name for g, name in enumerate(P.generators)}
    _emit(args, data, text, K.to_dot(labels))


def cmd_ball(args, P):
    B = cayley_ball(P, args.radius or 3, _budget(args))
    sizes = [len(B.sphere(k)) for k in range(B.radius + 1)]
    text = (f"radius {B.radius}: {len(B.vertices)} vertices, {len(B.edges)} edges, "
            f"spheres {sizes}, complete={B.complete}, stabilized={B.stabilized}")
    _emit(args, B.to_json(), text, B.to_dot())
    _check(args, B.complete, "ball has undecided equality queries")


def cmd_ends(args, P):
    radius = args.radius or 6
    r_outer = radius - 2
    if r_outer <= args.inner:
        raise OneRelError(f"--radius must exceed --inner + 2 (got {radius})")
    est = count_ends(P, args.inner, r_outer, _budget(args))
    text = f"{est.classification}  " + " ".join(f"[{a},{b}]:{c}" for a, b, c in est.evidence)
    _emit(args, est.to_json(), text)
    _check(args, est.classification is not EndsClass.INCONCLUSIVE, "ends estimate inconclusive")


def cmd_freiheitssatz(args, P):
    subset = [s.strip() for s in args.subset.split(",") if s.strip()]
    res = freiheitssatz_probe(P, subset, args.radius or 4, _budget(args))
    text = f"{res.status}  ({res.vertices} vertices, {res.edges} edges, {res.components} components)"
    _emit(args, res.to_json(), text)
    _check(args, res.status is not ProbeStatus.UNKNOWN, "probe inconclusive")


def cmd_pro_pi1(args, P):
    radii = args.radii
    C, ball = complex_ball(P, max(radii) + 2, _budget(args))
    F = ball_filtration(C, ball.vertices, radii)
    T = pro_pi1(C, F, ray_bases(ball.vertices, radii, args.ray))
    V = telescopic_check(T, _budget(args))
    data = {"presentation": str(P), "radii": radii, "ray": args.ray, "ball_complete": ball.complete,
            "tower": T.to_json(), "verdict": V.to_json()}
    lines = [f"stage {i} (r={r}): {G}" for i, (r, G) in enumerate(zip(radii, T.groups))]
    lines.append(f"telescopic evidence: {V.telescopic_evidence}")
    _emit(args, data, "\n".join(lines))
    _check(args, V.telescopic_evidence is not Verdict.UNKNOWN and ball.complete,
           "tower verdict inconclusive")


def cmd_semistable(args, P):
    rep = semistability_report(P, args.radii, _budget(args))
    lines = [f"components per stage: {list(rep.components)}"]
    for c in rep.chains:
        lines.append(f"chain bases {list(c.bases)}: ranks {list(c.ranks)}, "
                     f"bonds {[v.value for v in c.bonds]}")
    _emit(args, rep.to_json(), "\n".join(lines))
    ok = rep.complete and all(c.semistable_evidence is not Verdict.UNKNOWN for c in rep.chains)
    _check(args, ok, "semistability evidence inconclusive")


HANDLERS = {
    "parse": cmd_parse, "normalize": cmd_normalize, "magnus-tree": cmd_magnus,
    "complex": cmd_complex, "ball": cmd_ball, "ends": cmd_ends,
    "freiheitssatz": cmd_freiheitssatz, "pro-pi1": cmd_pro_pi1, "semistable": cmd_semistable,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        P = _read_presentation(args.presentation)
        HANDLERS[args.command](args, P)
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except DepthLimitExceeded:
        return 1
    except (OneRelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
