"""Command-line entry point.

Exit status mirrors the verdict: 0 certified/true, 1 refuted/false,
2 inconclusive, 64 usage error, 65 malformed input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bridge import barycentric_subdivision, face_poset, order_complex
from .complex import DEFAULT_BUDGET, ComplexError
from .fiber import (
    SCHEMA_VERSION,
    CertificationRefused,
    Status,
    certify_simple_equivalence,
    check_fiber_hypothesis,
    check_homology_fiber_hypothesis,
    verify_homology_conclusion,
)
from .formats import MalformedInput, parse_complex, parse_cover, parse_map, parse_poset, parse_relation
from .homology import homology_report, nontrivial, reduced_homology
from .nerve_dowker import CoverError, dowker_verify, verify_nerve
from .poset import PosetError, mapping_cylinder
from .verify import CertificateError, verify_certificate

EXIT_OK, EXIT_FALSE, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65
_EXIT = {Status.CERTIFIED: EXIT_OK, Status.REFUTED: EXIT_FALSE, Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Inputs:
    """Reads input files and remembers their digests for the report."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as e:
            raise MalformedInput(f"cannot read: {e.strerror}", None, path) from None
        self.digests[path] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedInput("not valid UTF-8", None, path) from None

    def poset(self, path):
        return parse_poset(self.read(path), path)

    def complex(self, path):
        return parse_complex(self.read(path), path)

    def map(self, src, tgt, path):
        return parse_map(self.read(path), self.poset(src), self.poset(tgt), path)


def _cmd_order_complex(a, io):
    K = order_complex(io.poset(a.poset))
    return EXIT_OK, {"complex": K.to_json(), "f_vector": K.f_vector()}


def _cmd_face_poset(a, io):
    return EXIT_OK, {"poset": face_poset(io.complex(a.complex)).to_json()}


def _cmd_subdivide(a, io):
    K = barycentric_subdivision(io.complex(a.complex))
    return EXIT_OK, {"complex": K.to_json(), "f_vector": K.f_vector()}


def _cmd_homology(a, io):
    K = order_complex(io.poset(a.input)) if a.poset else io.complex(a.input)
    H = reduced_homology(K)
    return EXIT_OK, {"reduced_homology": homology_report(H),
                     "nontrivial": [g.to_json() for g in nontrivial(H)]}


def _cmd_cylinder(a, io):
    f = io.map(a.source, a.target, a.map)
    cyl = mapping_cylinder(f)
    same = nontrivial(reduced_homology(order_complex(cyl.cylinder))) == nontrivial(
        reduced_homology(order_complex(f.target)))
    return (EXIT_OK if same else EXIT_FALSE), {
        "cylinder": cyl.cylinder.to_json(),
        "source_inclusion": cyl.source_inclusion.assignment,
        "target_inclusion": cyl.target_inclusion.assignment,
        "homology_matches_target": same,
    }


def _cmd_check_fibers(a, io):
    rep = check_fiber_hypothesis(io.map(a.source, a.target, a.map), a.budget, a.seed)
    return _EXIT[rep.status], {"fibers": rep.to_json()}


def _cmd_certify(a, io):
    f = io.map(a.source, a.target, a.map)
    rep = check_fiber_hypothesis(f, a.budget, a.seed)
    try:
        cert = certify_simple_equivalence(f, a.budget, a.seed, report=rep)
    except CertificationRefused as e:
        return _EXIT[rep.status], {"refusal": str(e), "offending": e.offending, "fibers": rep.to_json()}
    data = cert.to_json()
    replay = verify_certificate(data)
    return EXIT_OK, {"certificate": data, "replay": replay}


def _cmd_verify_certificate(a, io):
    text = io.read(a.certificate)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e}", e.lineno, a.certificate) from None
    if isinstance(data, dict) and isinstance(data.get("result"), dict) and "certificate" in data["result"]:
        data = data["result"]["certificate"]  # a whole `certify` report
    try:
        summary = verify_certificate(data)
    except CertificateError as e:
        return EXIT_FALSE, {"valid": False, "error": str(e)}
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"certificate is missing or mistypes a field ({e!r})", None, a.certificate) from None
    return EXIT_OK, {"valid": True, "checked": summary}


HOMOLOGY_ONLY_CAVEAT = ("checked on reduced integral homology only; "
                        "homotopy groups such as the fundamental group are not verified")


def _cmd_homology_fibers(a, io):
    f = io.map(a.source, a.target, a.map)
    rep = check_homology_fiber_hypothesis(f, a.n)
    ok, witness = verify_homology_conclusion(f, a.n)
    out = {"fibers": rep.to_json(), "conclusion": {"holds": ok, "n": a.n,
                                                   "witness": None if witness is None else witness.to_json(),
                                                   "caveat": HOMOLOGY_ONLY_CAVEAT}}
    if rep.status is Status.CERTIFIED:
        return (EXIT_OK if ok else EXIT_FALSE), out
    return EXIT_FALSE, out


def _cmd_nerve(a, io):
    ambient = io.complex(a.ambient)
    cover = parse_cover(io.read(a.cover), ambient, a.cover)
    rep = verify_nerve(cover, a.budget, a.seed)
    return _EXIT[rep.status], {"nerve": rep.to_json()}


def _cmd_dowker(a, io):
    rel = parse_relation(io.read(a.relation), a.relation)
    rep = dowker_verify(rel, a.budget, a.seed)
    return _EXIT[rep.status], {"dowker": rep.to_json()}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="randomness seed (default 0)")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help=f"collapse-search restarts (default {DEFAULT_BUDGET})")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--output", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall-clock timing (makes output non-reproducible)")

    p = _Parser(prog="posetfiber", parents=[common], description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help, *args):
        sp = sub.add_parser(name, parents=[common], help=help)
        for arg in args:
            sp.add_argument(arg)
        sp.set_defaults(fn=fn)
        return sp

    add("order-complex", _cmd_order_complex, "order complex of a poset", "poset")
    add("face-poset", _cmd_face_poset, "face poset of a complex", "complex")
    add("subdivide", _cmd_subdivide, "barycentric subdivision", "complex")
    h = add("homology", _cmd_homology, "reduced integral homology", "input")
    h.add_argument("--poset", action="store_true", help="input is a poset; use its order complex")
    map_args = ("source", "target", "map")
    add("cylinder", _cmd_cylinder, "non-Hausdorff mapping cylinder", *map_args)
    add("check-fibers", _cmd_check_fibers, "contractibility of every fiber f^-1(U_y)", *map_args)
    add("certify", _cmd_certify, "certificate that K(f) is a simple homotopy equivalence", *map_args)
    add("verify-certificate", _cmd_verify_certificate, "replay a certificate", "certificate")
    hf = add("homology-fibers", _cmd_homology_fibers, "homological fiber check and conclusion", *map_args)
    hf.add_argument("--n", type=int, required=True)
    add("nerve", _cmd_nerve, "nerve of a subcomplex cover", "ambient", "cover")
    add("dowker", _cmd_dowker, "Dowker complexes of a relation", "relation")
    return p


def _text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(obj[k], f"{prefix}.{k}" if prefix else k)
        elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
            for i, v in enumerate(obj):
                walk(v, f"{prefix}[{i}]")
        else:
            lines.append(f"  {prefix} = {json.dumps(obj, sort_keys=True)}")

    walk(report["result"], "")
    return "\n".join(lines) + "\n"


_COMPUTE_ONLY = {"order-complex", "face-poset", "subdivide", "homology"}


def _status_word(command: str, code: int) -> str:
    if command in _COMPUTE_ONLY:
        return "ok"
    return {EXIT_OK: "certified", EXIT_FALSE: "refuted", EXIT_INCONCLUSIVE: "inconclusive"}[code]


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    a.seed = getattr(a, "seed", 0)
    a.budget = getattr(a, "budget", DEFAULT_BUDGET)
    fmt = getattr(a, "format", "json")
    if a.budget < 1:
        print("posetfiber: error: --budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    if getattr(a, "n", 0) < 0:
        print("posetfiber: error: --n must be non-negative", file=sys.stderr)
        return EXIT_USAGE

    io = _Inputs()
    start = time.perf_counter()
    try:
        code, result = a.fn(a, io)
    except MalformedInput as e:
        print(f"posetfiber: malformed input: {e}", file=sys.stderr)
        return EXIT_DATA
    except (PosetError, ComplexError, CoverError) as e:
        print(f"posetfiber: malformed input: {e}", file=sys.stderr)
        return EXIT_DATA

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": a.command,
        "argv": argv,
        "inputs": io.digests,
        "seed": a.seed,
        "budget": a.budget,
        "status": _status_word(a.command, code),
        "result": result,
    }
    if getattr(a, "timing", False):
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    out = json.dumps(report, sort_keys=True, indent=2) + "\n" if fmt == "json" else _text(report)
    if hasattr(a, "output"):
        Path(a.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
