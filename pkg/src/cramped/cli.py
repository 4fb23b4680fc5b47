"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 inconclusive (certify, or wz-check
with failing samples), 3 hypothesis not applicable (wz-check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .branching import (
    EmbeddingError,
    EmbeddingSpec,
    b_of_lambda,
    branch,
    embedding_from_descriptor,
    invariant_dim,
    load_embedding,
)
from .crampedness import DEFAULT_MMAX, CrampednessCertificate, certify, dimension_obstruction
from .ghcsupport import SupportSpecError, ghc_verdict, load_support, n_gamma_sample, vagrancy
from .liecore import parse_root_system, weyl_dim
from .momentgeo import (
    OptimizerConfig,
    build_compact_model,
    meets_threshold,
    min_orbit_dimension,
    moment_image_distance,
    scan_fundamental_orbits,
    wz_orbit_property,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_NOT_APPLICABLE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--pair", help="catalog pair, e.g. principal-sl2:A2, diagonal:A1, factor:A1,A1")
    src.add_argument("--spec", help="path to an embedding-spec JSON file")
    common.add_argument("--lambda", dest="lam", help="weight as a comma list, e.g. 1,1")
    common.add_argument("--mmax", type=int, default=DEFAULT_MMAX)
    common.add_argument("--gamma", type=float)
    common.add_argument("--box", type=int, help="coordinate bound for an N_gamma sample")
    common.add_argument("--tol", type=float, default=1e-3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=100)
    common.add_argument("--max-iters", type=int, default=500)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    parser = argparse.ArgumentParser(prog="cramped", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cramped {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("roots", parents=[common], help="root data of g and h")
    p.add_argument("--system", help="root-system descriptor instead of a pair, e.g. G2")
    sub.add_parser("branch", parents=[common], help="decompose V_lambda over h")
    sub.add_parser("b", parents=[common], help="b(lambda) and invariant dimension")
    sub.add_parser("certify", parents=[common], help="crampedness certificate")
    sub.add_parser("moment-scan", parents=[common], help="fundamental orbits versus h-perp")
    sub.add_parser("orbit-distance", parents=[common], help="numeric distance to im N")
    p = sub.add_parser("ghc-check", parents=[common], help="GHC verdict for a support file")
    p.add_argument("--support", required=True, help="SupportSpec JSON file")
    p.add_argument("--use-certificate", action="store_true",
                   help="apply the cramped/infinite rule when a certificate exists")
    p = sub.add_parser("wz-check", parents=[common], help="orbit-intersection property")
    p.add_argument("--samples", type=int, default=25)
    return parser


def _spec(args) -> EmbeddingSpec:
    if args.spec:
        return load_embedding(args.spec)
    if not args.pair:
        raise InputError("one of --pair or --spec is required")
    return embedding_from_descriptor(args.pair)


def _weight(args, rank: int, integral: bool = True) -> list:
    if not args.lam:
        raise InputError("--lambda is required")
    try:
        coords = [Fraction(c.strip()) for c in args.lam.split(",")]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse --lambda {args.lam!r}") from None
    if len(coords) != rank:
        raise InputError(f"--lambda needs {rank} coordinates")
    if any(c < 0 for c in coords):
        raise InputError("--lambda must be dominant")
    if integral:
        if any(c.denominator != 1 for c in coords):
            raise InputError("--lambda must be integral")
        return [int(c) for c in coords]
    return coords


def _cfg(args) -> OptimizerConfig:
    try:
        return OptimizerConfig(restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _header(args, pair: str | None) -> dict:
    return {"tool": "cramped", "version": __version__, "command": args.command,
            "pair": pair, "seed": args.seed}


def _frac(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def cmd_roots(args):
    if args.system:
        systems = {"g": parse_root_system(args.system)}
        pair = None
    else:
        spec = _spec(args)
        systems = {"g": spec.g, "h": spec.h}
        pair = spec.name
    doc = _header(args, pair)
    for key, rs in systems.items():
        doc[key] = {
            "system": rs.descriptor,
            "rank": rs.rank,
            "dimension": rs.dimension,
            "cartanMatrix": [list(r) for r in rs.cartan_matrix],
            "positiveRoots": [list(r) for r in rs.positive_roots],
            "rho": list(rs.rho),
            "form": [[_frac(x) for x in row] for row in rs.form],
            "minOrbitDimension": min_orbit_dimension(rs),
        }
    return doc, EXIT_OK, None


def cmd_branch(args):
    spec = _spec(args)
    lam = _weight(args, spec.g.rank)
    parts = branch(spec, lam)
    rows = [{"mu": list(mu.key), "mult": m, "dim": weyl_dim(spec.h, mu)} for mu, m in parts]
    doc = _header(args, spec.name)
    doc.update({"lambda": lam, "dimension": weyl_dim(spec.g, lam), "constituents": rows})
    return doc, EXIT_OK, rows


def cmd_b(args):
    spec = _spec(args)
    lam = _weight(args, spec.g.rank)
    doc = _header(args, spec.name)
    doc.update({"lambda": lam, "b": b_of_lambda(spec, lam),
                "invariantDim": invariant_dim(spec, lam)})
    return doc, EXIT_OK, None


def cmd_certify(args):
    spec = _spec(args)
    if args.mmax < 1:
        raise InputError("--mmax must be positive")
    result = certify(spec, args.mmax, workers=args.workers)
    doc = _header(args, spec.name)
    doc.update(result.to_document())
    doc["dimensionObstruction"] = dimension_obstruction(spec)
    code = EXIT_OK if isinstance(result, CrampednessCertificate) else EXIT_INCONCLUSIVE
    return doc, code, doc["box"]


def cmd_moment_scan(args):
    spec = _spec(args)
    model = build_compact_model(spec)
    scan = scan_fundamental_orbits(model, _cfg(args), args.tol, workers=args.workers)
    doc = _header(args, spec.name)
    doc.update({"grade": "evidence", "tol": args.tol, "restarts": args.restarts,
                "maxIters": args.max_iters, "rows": scan.rows,
                "surjectiveEvidence": "yes" if scan.surjective_evidence else "no"})
    return doc, EXIT_OK, scan.rows


def cmd_orbit_distance(args):
    spec = _spec(args)
    if args.lam is None and args.box is not None:
        return _n_gamma(args, spec)
    lam = _weight(args, spec.g.rank, integral=False)
    model = build_compact_model(spec)
    res = moment_image_distance(model, lam, _cfg(args), workers=args.workers)
    doc = _header(args, spec.name)
    row = {"pair": spec.name, "lambda": [_frac(c) for c in lam], "distance": res.distance,
           "meets": meets_threshold(res, args.tol), "iterations": res.total_iterations,
           "seed": args.seed}
    doc.update(row)
    doc["xiNorm"] = res.xi_norm
    doc["grade"] = "evidence"
    if args.gamma is not None:
        doc["inNGamma"] = res.distance <= args.gamma
    return doc, EXIT_OK, [row]


def _n_gamma(args, spec):
    if args.gamma is None or args.gamma < 0 or args.box < 0:
        raise InputError("an N_gamma sample needs --gamma >= 0 and --box >= 0")
    model = build_compact_model(spec)
    weights = n_gamma_sample(spec, model, args.gamma, args.box, _cfg(args), workers=args.workers)
    doc = _header(args, spec.name)
    doc.update({"grade": "evidence", "gamma": args.gamma, "box": args.box,
                "nGamma": [list(w) for w in weights]})
    return doc, EXIT_OK, [{"lambda": list(w)} for w in weights]


def cmd_ghc_check(args):
    spec = _spec(args)
    support = load_support(args.support)
    model = build_compact_model(spec) if spec.compact_generators is not None else None
    cert = None
    if args.use_certificate:
        result = certify(spec, args.mmax)
        if isinstance(result, CrampednessCertificate):
            cert = result
    verdict = ghc_verdict(spec, model, support, args.mmax, _cfg(args), args.tol, cert,
                          workers=args.workers)
    vag = vagrancy(support)
    doc = _header(args, spec.name)
    doc["support"] = support.to_document()
    doc["vagrancy"] = {"value": vag.value, "supportToAsymptotic": vag.support_to_asymptotic,
                       "asymptoticToSupport": vag.asymptotic_to_support}
    doc.update(verdict.to_document())
    return doc, EXIT_OK, verdict.per_ray_evidence


def cmd_wz_check(args):
    spec = _spec(args)
    model = build_compact_model(spec)
    rep = wz_orbit_property(model, args.samples, _cfg(args), args.tol, workers=args.workers)
    doc = _header(args, spec.name)
    doc.update({"grade": "evidence", "minOrbitDimension": rep.min_orbit_dim,
                "hDimension": rep.h_dim, "hypothesisHolds": rep.hypothesis_holds,
                "samples": rep.samples, "failures": rep.failures})
    if not rep.hypothesis_holds:
        code = EXIT_NOT_APPLICABLE
    else:
        code = EXIT_OK if not rep.failures else EXIT_INCONCLUSIVE
    return doc, code, rep.samples


COMMANDS = {
    "roots": cmd_roots,
    "branch": cmd_branch,
    "b": cmd_b,
    "certify": cmd_certify,
    "moment-scan": cmd_moment_scan,
    "orbit-distance": cmd_orbit_distance,
    "ghc-check": cmd_ghc_check,
    "wz-check": cmd_wz_check,
}


def _flatten(value):
    return json.dumps(value) if isinstance(value, (list, dict)) else value


def render(doc: dict, rows: list[dict] | None, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        rows = rows if rows is not None else [doc]
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: _flatten(v) for k, v in r.items()})
        return buf.getvalue()
    return "".join(f"{k}: {_flatten(v)}\n" for k, v in doc.items())


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        doc, code, rows = COMMANDS[args.command](args)
    except (InputError, EmbeddingError, SupportSpecError, ValueError) as exc:
        print(f"cramped {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(doc, rows, args.format))
    return code
