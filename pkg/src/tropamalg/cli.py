"""Command-line front end.

Every verb reads JSON files and writes one JSON document to stdout.  Exit
status: 0 on success, 1 on a domain error (reported as
{"error": {"kind", "message", "witness"}}), 2 on usage or file errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import io
from .amalgam import AmalgamProblem, decide_amalgam, fibre_product, oracle_proper_amalgam
from .correspondence import compose, graph_correspondence, graph_correspondence_direct
from .errors import OracleDisagreement, TropError
from .fan import (FlagFan, bergman_fan, check_balancing, degree, product, pushforward,
                  weil_divisor, weil_divisor_chains)


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        return io.load_json(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _labels(text: str) -> list[str]:
    """A JSON list of labels, or a comma separated list."""
    text = text.strip()
    if text.startswith("["):
        try:
            val = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"bad label list: {e}") from None
        return [str(x) for x in val]
    return [x for x in (s.strip() for s in text.split(",")) if x]


def _cut_vertices(arg: str, X) -> set[int]:
    """``--cut`` is inline JSON or a file holding a list of subsets."""
    if os.path.exists(arg):
        val = _load(arg)
    else:
        try:
            val = json.loads(arg)
        except json.JSONDecodeError as e:
            raise UsageError(f"--cut is neither a file nor JSON: {e}") from None
    if not isinstance(val, list):
        raise UsageError("--cut must be a list of subsets")
    return {X.groundset.mask(str(x) for x in S) for S in val}


def _matroid(path):
    return io.matroid_from_json(_load(path))


def _fan(path):
    return io.fan_from_json(_load(path))


def _verdict_json(P: AmalgamProblem, v) -> dict:
    if v.exists:
        return {"amalgam": io.matroid_to_json(v.matroid)}
    return {"negative_chains": io.chains_to_json(v.fan.groundset, v.negative_chains)}


def _cross_check(P: AmalgamProblem) -> dict:
    v = decide_amalgam(P)
    o = oracle_proper_amalgam(P)
    if v.exists != (o is not None) or (o is not None and o != v.matroid):
        raise OracleDisagreement(
            "the fibre product and the brute force oracle disagree",
            witness={"M1": io.matroid_to_json(P.M1), "M2": io.matroid_to_json(P.M2),
                     "fibre_product": v.exists, "oracle": o is not None})
    out = _verdict_json(P, v)
    out["oracle"] = "agrees"
    return out


def _sweep_one(P: AmalgamProblem):
    try:
        _cross_check(P)
        return None
    except TropError as e:
        return e.to_json()["error"]


# -- verbs -----------------------------------------------------------------

def cmd_validate(a):
    M = _matroid(a.matroid)
    return {"valid": True, "rank": M.rank, "flats": len(M.flats)}


def cmd_bergman(a):
    return io.fan_to_json(bergman_fan(_matroid(a.matroid)))


def cmd_divisor(a):
    X = _fan(a.fan)
    A = _cut_vertices(a.cut, X)
    Y = weil_divisor(X, A) if isinstance(X, FlagFan) else weil_divisor_chains(X, A)
    return io.fan_to_json(Y)


def cmd_degree(a):
    return {"degree": degree(_fan(a.fan))}


def cmd_product(a):
    X, Y = _fan(a.fan_a), _fan(a.fan_b)
    if not (isinstance(X, FlagFan) and isinstance(Y, FlagFan)):
        raise UsageError("product needs two flag fans")
    tags = tuple(_labels(a.tags)) if a.tags else None
    if tags is not None and len(tags) != 2:
        raise UsageError("--tags needs exactly two tags")
    return io.fan_to_json(product(X, Y, tags))


def cmd_pushforward(a):
    X = _fan(a.fan)
    return io.fan_to_json(pushforward(X, _labels(a.keep)))


def _problem(a) -> AmalgamProblem:
    return AmalgamProblem(_matroid(a.m1), _matroid(a.m2), _labels(a.T) if a.T else None)


def cmd_fibre_product(a):
    return io.fan_to_json(fibre_product(_problem(a)))


def cmd_amalgam(a):
    if a.corpus:
        return _corpus_sweep(a)
    if a.m1 is None or a.m2 is None:
        raise UsageError("amalgam needs two matroid files (or --corpus)")
    P = _problem(a)
    if a.oracle:
        return _cross_check(P)
    return _verdict_json(P, decide_amalgam(P))


def _corpus_sweep(a):
    from .corpus import amalgam_problems, base_pool

    problems = amalgam_problems(base_pool(), max_union=a.max_size)
    if a.jobs > 1:
        with ProcessPoolExecutor(a.jobs) as ex:
            results = list(ex.map(_sweep_one, problems, chunksize=16))
    else:
        results = [_sweep_one(P) for P in problems]
    failures = [r for r in results if r is not None]
    if failures:
        raise OracleDisagreement(f"{len(failures)} of {len(problems)} problems failed",
                                 witness=failures[:5])
    return {"problems": len(problems), "agree": len(problems)}


def _latticemap(path):
    return io.latticemap_from_json(_load(path), os.path.dirname(os.path.abspath(path)))


def cmd_graph_cor(a):
    f = _latticemap(a.latticemap)
    C = graph_correspondence_direct(f) if a.direct else graph_correspondence(f)
    return io.fan_to_json(C.fan)


def cmd_compose(a):
    f = _latticemap(a.latticemap)
    C = compose(f, _fan(a.fan))
    return io.fan_to_json(C.fan)


def cmd_check(a):
    return check_balancing(_fan(a.fan)).to_json()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropamalg",
                                description="Flag fans, tropical fibre products and graph correspondences.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("validate", help="check the flat axioms of a matroid file")
    s.add_argument("matroid")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("bergman", help="Bergman fan of a matroid")
    s.add_argument("matroid")
    s.set_defaults(run=cmd_bergman)

    s = sub.add_parser("divisor", help="Weil divisor of a cut function")
    s.add_argument("fan")
    s.add_argument("--cut", required=True,
                   help="JSON list of vertex subsets where the function is -1 (inline or a file)")
    s.set_defaults(run=cmd_divisor)

    s = sub.add_parser("degree", help="degree of a fan")
    s.add_argument("fan")
    s.set_defaults(run=cmd_degree)

    s = sub.add_parser("product", help="product of two flag fans")
    s.add_argument("fan_a")
    s.add_argument("fan_b")
    s.add_argument("--tags", help="two tags for clashing labels, e.g. L,R")
    s.set_defaults(run=cmd_product)

    s = sub.add_parser("pushforward", help="push forward onto a set of coordinates")
    s.add_argument("fan")
    s.add_argument("--keep", required=True, help="labels to keep (comma list or JSON)")
    s.set_defaults(run=cmd_pushforward)

    for name, fn in (("fibre-product", cmd_fibre_product), ("amalgam", cmd_amalgam)):
        s = sub.add_parser(name, help="tropical fibre product" if name == "fibre-product"
                           else "decide the proper amalgam")
        s.add_argument("m1", nargs=None if name == "fibre-product" else "?")
        s.add_argument("m2", nargs=None if name == "fibre-product" else "?")
        s.add_argument("--T", help="common elements; must equal the intersection")
        if name == "amalgam":
            s.add_argument("--oracle", action="store_true",
                           help="cross-check against the brute force oracle")
            s.add_argument("--corpus", action="store_true",
                           help="run the oracle cross-check over the built-in corpus")
            s.add_argument("--max-size", type=int, default=8,
                           help="largest union size in the corpus sweep")
            s.add_argument("--jobs", type=int, default=1, help="worker processes for --corpus")
        s.set_defaults(run=fn)

    s = sub.add_parser("graph-cor", help="graph correspondence of a lattice map")
    s.add_argument("latticemap")
    s.add_argument("--direct", action="store_true", help="use the Möbius-weight construction")
    s.set_defaults(run=cmd_graph_cor)

    s = sub.add_parser("compose", help="compose a lattice map with a correspondence fan")
    s.add_argument("latticemap")
    s.add_argument("fan")
    s.set_defaults(run=cmd_compose)

    s = sub.add_parser("check", help="balancing report")
    s.add_argument("fan")
    s.set_defaults(run=cmd_check)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if getattr(args, "jobs", 1) < 1:
        print(json.dumps({"error": {"kind": "UsageError", "message": "--jobs must be positive"}}), file=out)
        return 2
    try:
        result = args.run(args)
    except TropError as e:
        print(json.dumps(e.to_json(), indent=1, ensure_ascii=False, default=str), file=out)
        return 1
    except UsageError as e:
        print(json.dumps({"error": {"kind": "UsageError", "message": str(e)}}), file=out)
        return 2
    print(json.dumps(result, indent=1, ensure_ascii=False), file=out)
    return 0


def main() -> None:
    sys.exit(run())
