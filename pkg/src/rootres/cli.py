"""Command-line interface.

Every command writes one JSON document to stdout (or ``--out``). Exit status
is 0 when the computation succeeds with a positive answer, 1 when it
succeeds with a negative answer (the payload then carries the certificate),
and 2 for usage and validation errors, reported as ``{"error": ...}``.

Input files may be ``-`` for stdin. Function, sampled-function and class
documents carry their complex under ``"complex"``; certificates embed the
inputs they certify so that ``rootres verify`` needs nothing else.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .complex import (
    SimplicialComplex, apply_boundary, apply_coboundary, complex_from_json, complex_to_json,
    label_from_json, label_key,
)
from .covers import build_cyclic_cover, cover_from_json, natural_iso_check, pullback_divisibility_certificate
from .errors import MeshTooCoarse, RootResError
from .functions import (
    DEFAULT_SEED, LogFunction, SampledFunction, log_function_from_json, log_function_to_json,
    make_log_function, sampled_from_json, sampled_to_json,
)
from .homology import (
    DivisibilityWitness, NotDivisible, cochain_from_json, cochain_to_json, cohomology,
    divisible_by, homology, pairing,
)
from .roots import (
    ROOT_TOLERANCE, ApproxRoot, ObstructionCertificate, RootCertificate, approx_root,
    closedness_audit, exact_root, sampled_power_error,
)
from .tower import DEFAULT_BUDGET, build_tower, dimension_witness, tower_divisibility_check, tower_from_json
from .transfer import verify_transfer_identity

log = logging.getLogger("rootres")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad command line or unreadable input."""


@dataclass
class CommandResult:
    exit_code: int
    payload: dict
    out: str | None = None


class _Parser(argparse.ArgumentParser):
    # argparse prints prose and exits; we want a JSON error object instead
    def error(self, message):
        raise UsageError(message)


# ---- input --------------------------------------------------------------------

def _read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _complex_doc(doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise UsageError("expected a JSON object")
    inner = doc.get("complex", doc)
    if "simplices" not in inner:
        raise UsageError("complex document needs a 'simplices' list")
    return inner


def load_complex(doc: dict) -> SimplicialComplex:
    return complex_from_json(_complex_doc(doc))


def load_function(doc: dict, K: SimplicialComplex | None = None) -> LogFunction:
    if K is None:
        K = load_complex(doc)
    logs = dict(doc.get("logs", {}))
    for v in K.vertices:
        logs.setdefault(label_key(v), [0.0, 0.0])
    return log_function_from_json(K, {"logs": logs, "winding": doc.get("winding", {})})


def function_doc(f: LogFunction) -> dict:
    return {"complex": complex_to_json(f.complex), **log_function_to_json(f)}


def load_sampled(doc: dict) -> SampledFunction:
    return sampled_from_json(load_complex(doc), doc)


def load_class(doc: dict, K: SimplicialComplex) -> tuple[int, np.ndarray]:
    if isinstance(doc, dict) and "cochain" in doc:
        k = int(doc.get("degree", 1))
        raw = doc["cochain"]
    else:
        k, raw = 1, doc
    if not isinstance(raw, dict):
        raise UsageError("class document needs a 'cochain' object keyed by simplices")
    try:
        x = cochain_from_json(K, k, raw)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cochain does not live on the complex: {exc}") from exc
    return k, x


def _parse_schedule(text: str) -> list:
    out = []
    for part in text.split(","):
        n, _, rule = part.strip().partition(":")
        try:
            out.append((int(n), rule or "basis"))
        except ValueError as exc:
            raise UsageError(f"bad schedule entry {part!r}") from exc
    return out


# ---- commands -----------------------------------------------------------------

def cmd_homology(args) -> CommandResult:
    K = load_complex(_read_json(args.complex))
    coeff = "Q" if args.rational else "Z"
    G = (cohomology if args.cohomology else homology)(K, args.dim, coeff)
    payload = {"kind": "cohomology" if args.cohomology else "homology", "dim": args.dim,
               "coefficients": coeff, **G.to_json()}
    return CommandResult(EXIT_OK, payload)


def _witness_payload(K, k, x, res: DivisibilityWitness) -> dict:
    return {"kind": "divisible", "n": res.n, "degree": k,
            "complex": complex_to_json(K), "class": cochain_to_json(K, k, x),
            "quotient": cochain_to_json(K, k, res.quotient),
            "correction": cochain_to_json(K, k - 1, res.correction)}


def _not_divisible_payload(K, k, x, res: NotDivisible) -> dict:
    return {"kind": "obstruction", "n": res.n, "degree": k,
            "complex": complex_to_json(K), "class": cochain_to_json(K, k, x),
            "cycle": None if res.cycle is None else cochain_to_json(K, k, res.cycle),
            "pairing": res.pairing}


def cmd_check_divisible(args) -> CommandResult:
    K = load_complex(_read_json(args.complex))
    k, x = load_class(_read_json(args.klass), K)
    if k >= 1 and K.n_simplices(k) and any(apply_coboundary(K, k, x)):
        raise UsageError("class representative is not a cocycle")
    res = divisible_by((K, k, x), args.n)
    if isinstance(res, NotDivisible):
        return CommandResult(EXIT_NEGATIVE, _not_divisible_payload(K, k, x, res))
    return CommandResult(EXIT_OK, _witness_payload(K, k, x, res))


def cmd_root(args) -> CommandResult:
    f = load_function(_read_json(args.function))
    cert = exact_root(f, args.n, args.seed)
    payload = {**cert.to_json(), "function": function_doc(f)}
    return CommandResult(EXIT_OK if cert else EXIT_NEGATIVE, payload)


def cmd_approx_root(args) -> CommandResult:
    F = load_sampled(_read_json(args.sampled))
    res = approx_root(F, args.n, args.eps, refine=args.refine, seed=args.seed)
    payload = res.to_json()
    if isinstance(res, ApproxRoot):
        payload["sampled"] = {"complex": complex_to_json(res.F.complex), **sampled_to_json(res.F)}
        payload["root"]["complex"] = complex_to_json(res.root.complex)
        return CommandResult(EXIT_OK, payload)
    payload["function"] = function_doc(res.lifted)
    return CommandResult(EXIT_NEGATIVE, payload)


def cmd_resolve(args) -> CommandResult:
    f = load_function(_read_json(args.function))
    cover = build_cyclic_cover(f, args.n)
    payload = {"kind": "cover", **cover.to_json(), "predicted_components": cover.predicted_components}
    if args.with_root:
        cert = pullback_divisibility_certificate(cover, f)
        payload["lifted_root"] = {
            **log_function_to_json(cert.lifted.root),
            "labels": {label_key(x): int(a) for x, a in cert.lifted.labels.items()},
            "certificate": cert.to_json(),
        }
        payload["function"] = function_doc(f)
    return CommandResult(EXIT_OK, payload)


def cmd_natural_check(args) -> CommandResult:
    K = load_complex(_read_json(args.complex))
    f1 = load_function(_read_json(args.f1), K)
    f2 = load_function(_read_json(args.f2), K)
    report = natural_iso_check(K, f1, f2, args.n)
    payload = {"kind": "natural_iso", **report.to_json()}
    return CommandResult(EXIT_OK if report.ok else EXIT_NEGATIVE, payload)


def cmd_transfer_check(args) -> CommandResult:
    cover = cover_from_json(_read_json(args.cover))
    report = verify_transfer_identity(cover, args.dim)
    payload = {"kind": "transfer", **report.to_json()}
    return CommandResult(EXIT_OK if report.verdict else EXIT_NEGATIVE, payload)


def cmd_audit(args) -> CommandResult:
    K = load_complex(_read_json(args.complex))
    report = closedness_audit(K, args.n, args.max_subset)
    payload = {"kind": "audit", **report.to_json()}
    return CommandResult(EXIT_OK if report.passed else EXIT_NEGATIVE, payload)


def cmd_tower_build(args) -> CommandResult:
    K = load_complex(_read_json(args.complex))
    T = build_tower(K, _parse_schedule(args.schedule), args.length, args.budget)
    return CommandResult(EXIT_OK, {"kind": "tower", **T.to_json()})


def cmd_tower_check(args) -> CommandResult:
    T = tower_from_json(_read_json(args.tower))
    if not 1 <= args.stage <= len(T.stages):
        raise UsageError(f"stage must lie in [1, {len(T.stages)}]")
    X = T.stages[args.stage - 1]
    subset = None if args.subset is None else [label_from_json(v) for v in json.loads(args.subset)]
    if args.klass is not None:
        c = _read_json(args.klass)
        c = c.get("cochain", c) if isinstance(c, dict) else c
    else:
        from .complex import full_subcomplex
        A, _ = full_subcomplex(X, X.vertices if subset is None else subset)
        H = cohomology(A, 1)
        if not H.free_rank:
            raise UsageError("the chosen subcomplex has no free H^1 generator; pass --class")
        c = cochain_to_json(A, 1, H.basis[0])
    trace = tower_divisibility_check(T, args.stage, subset, c, args.n)
    payload = {"kind": "tower_divisibility", **trace.to_json()}
    return CommandResult(EXIT_OK if trace.resolved else EXIT_NEGATIVE, payload)


def cmd_tower_dimension(args) -> CommandResult:
    T = tower_from_json(_read_json(args.tower))
    w = dimension_witness(T, args.dim)
    payload = {"kind": "dimension_witness", **w.to_json()}
    return CommandResult(EXIT_OK if w.injective else EXIT_NEGATIVE, payload)


# ---- verify ---------------------------------------------------------------------

def _verify_root(doc) -> dict:
    f = load_function(doc["function"])
    K = f.complex
    root = load_function(doc["root"], K)
    w = doc["witness"]
    witness = DivisibilityWitness(int(doc["n"]), cochain_from_json(K, 1, w["quotient"]),
                                  cochain_from_json(K, 0, w["correction"]))
    cert = RootCertificate(f, root, int(doc["n"]), witness, float(doc.get("audit_error", 0.0)),
                           int(doc.get("seed", DEFAULT_SEED)))
    return {"valid": cert.verify(ROOT_TOLERANCE)}


def _verify_obstruction(doc) -> dict:
    if "function" in doc:
        f = load_function(doc["function"])
        K, k, x = f.complex, 1, f.winding_vector()
    else:
        K = load_complex(doc)
        k = int(doc.get("degree", 1))
        x = cochain_from_json(K, k, doc["class"])
    n = int(doc["n"])
    if doc.get("cycle") is None:
        # no detecting cycle recorded: re-decide from scratch
        return {"valid": isinstance(divisible_by((K, k, x), n, method="snf"), NotDivisible)}
    z = cochain_from_json(K, k, doc["cycle"])
    closed = k == 0 or not any(apply_boundary(K, k, z))
    value = pairing(x, z)
    return {"valid": bool(closed and value == int(doc["pairing"]) and value % n != 0),
            "pairing": value}


def _verify_divisible(doc) -> dict:
    K = load_complex(doc)
    k = int(doc.get("degree", 1))
    x = cochain_from_json(K, k, doc["class"])
    q = cochain_from_json(K, k, doc["quotient"])
    m = cochain_from_json(K, k - 1, doc["correction"])
    rhs = int(doc["n"]) * q + apply_coboundary(K, k - 1, m)
    return {"valid": all(int(a) == int(b) for a, b in zip(x, rhs))}


def _verify_approx(doc) -> dict:
    F = load_sampled(doc["sampled"])
    g = sampled_from_json(load_complex(doc["root"]), doc["root"])
    err = sampled_power_error(g, F, int(doc["n"]), int(doc.get("seed", DEFAULT_SEED)))
    return {"valid": err < float(doc["bound"]), "measured_error": err}


_VERIFIERS = {
    "root": _verify_root,
    "obstruction": _verify_obstruction,
    "obstruction_on_A": _verify_obstruction,
    "divisible": _verify_divisible,
    "approx_root": _verify_approx,
}


def cmd_verify(args) -> CommandResult:
    doc = _read_json(args.certificate)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind not in _VERIFIERS:
        raise UsageError(f"cannot verify documents of kind {kind!r}")
    try:
        result = _VERIFIERS[kind](doc)
    except KeyError as exc:
        raise UsageError(f"certificate is missing field {exc}") from exc
    payload = {"kind": "verification", "certificate_kind": kind, **result}
    return CommandResult(EXIT_OK if result["valid"] else EXIT_NEGATIVE, payload)


# ---- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for audit samples")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="rootres", description="Certified n-th roots on finite simplicial complexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("homology", parents=[common], help="integer or rational (co)homology")
    s.add_argument("complex")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--rational", action="store_true")
    s.add_argument("--cohomology", action="store_true", help="cohomology instead of homology")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("check-divisible", parents=[common], help="is a cohomology class n-divisible")
    s.add_argument("complex")
    s.add_argument("klass", metavar="class")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_check_divisible)

    s = sub.add_parser("root", parents=[common], help="exact n-th root or obstruction")
    s.add_argument("function")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_root)

    s = sub.add_parser("approx-root", parents=[common], help="approximate root of a sampled function")
    s.add_argument("sampled")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--refine", action="store_true", help="midpoint-subdivide until the mesh is fine enough")
    s.set_defaults(func=cmd_approx_root)

    s = sub.add_parser("resolve", parents=[common], help="cyclic cover resolving the root")
    s.add_argument("function")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--with-root", action="store_true")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("natural-check", parents=[common], help="cover of a cover versus fiber product")
    s.add_argument("complex")
    s.add_argument("f1")
    s.add_argument("f2")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_natural_check)

    s = sub.add_parser("transfer-check", parents=[common], help="transfer identity on rational cohomology")
    s.add_argument("cover")
    s.add_argument("--dim", type=int, required=True)
    s.set_defaults(func=cmd_transfer_check)

    s = sub.add_parser("audit", parents=[common], help="H^1 divisibility over full subcomplexes")
    s.add_argument("complex")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-subset", type=int, default=None)
    s.set_defaults(func=cmd_audit)

    t = sub.add_parser("tower", help="towers of covers").add_subparsers(
        dest="tower_command", required=True, parser_class=_Parser)
    s = t.add_parser("build", parents=[common])
    s.add_argument("complex")
    s.add_argument("--schedule", required=True, help="comma list of n or n:rule, cycled")
    s.add_argument("--length", type=int, required=True)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_tower_build)
    s = t.add_parser("check-divisibility", parents=[common])
    s.add_argument("tower")
    s.add_argument("--stage", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--class", dest="klass", default=None, help="cochain on the chosen subcomplex")
    s.add_argument("--subset", default=None, help="JSON list of stage vertices spanning the subcomplex")
    s.set_defaults(func=cmd_tower_check)
    s = t.add_parser("dimension-witness", parents=[common])
    s.add_argument("tower")
    s.add_argument("--dim", type=int, required=True)
    s.set_defaults(func=cmd_tower_dimension)

    s = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify)
    return p


def _error_payload(exc: Exception) -> dict:
    doc = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, MeshTooCoarse):
        doc.update(oscillation=exc.oscillation, limit=exc.limit, simplex=list(exc.simplex or ()))
    for attr in ("triangle", "stage", "size", "budget"):
        if hasattr(exc, attr):
            doc[attr] = getattr(exc, attr)
    return doc


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, (tuple, set)):
        return list(o)
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def dispatch(argv: Sequence[str] | None = None) -> CommandResult:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "verbose", False):
            logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
        result = args.func(args)
        result.payload.setdefault("seed", args.seed)
        result.out = args.out
        return result
    except (UsageError, RootResError, ValueError) as exc:
        return CommandResult(EXIT_USAGE, _error_payload(exc))


def main(argv: Sequence[str] | None = None) -> int:
    result = dispatch(argv)
    text = json.dumps(result.payload, indent=2, default=_json_default)
    if result.out:
        with open(result.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
