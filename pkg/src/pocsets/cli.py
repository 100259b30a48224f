"""Command-line front end.

One subcommand per operation family; every run with the same arguments and
seed produces byte-identical output.  Structured output is versioned JSON on
stdout; domain errors become one-line JSON diagnostics on stderr with exit
code 1, usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings

from . import __version__
from .chains import (
    RollerPoset,
    format_signature,
    parse_signature,
)
from .core import FinitePocSet
from .cubing import build_cubing, duality_roundtrip, extract_halfspaces
from .errors import MalformedInput, PocError
from .euclid import (
    Line,
    closure_check,
    line_end_incomparability,
    rho,
    rho_image,
    restrict_to_line,
    safe_components,
)
from .exactnum import parse_exact_pair
from .formats import (
    chain_family_from_document,
    chain_family_to_document,
    document_kind,
    load_document,
    pocset_from_document,
    pocset_to_document,
)
from .render import shadow_svg
from .shadows import (
    ChainUltrafilter,
    escaping_ray,
    shadow_report,
    surjectivity_report,
)

SCHEMA = "pocsets/1"


def _emit(args, payload: dict) -> None:
    payload = {"schema": SCHEMA, "command": args.command, **payload}
    print(json.dumps(payload, sort_keys=True, indent=2))


def _load_pocset(args) -> FinitePocSet:
    doc = load_document(args.input)
    if document_kind(doc) != "pocset":
        raise MalformedInput(f"{args.input} is not a poc-set document", args.input)
    return pocset_from_document(doc)


def _load_chain_doc(args):
    doc = load_document(args.input)
    if document_kind(doc) != "chain-family":
        raise MalformedInput(
            f"{args.input} is not a chain-family document", args.input
        )
    return chain_family_from_document(doc)


def _load_model(args):
    family, model = _load_chain_doc(args)
    if model is None:
        raise MalformedInput(f"{args.input} carries no wall geometry", args.input)
    return model


def _parse_cuts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise MalformedInput(f"bad cut tuple {text!r}", text) from exc


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_validate(args) -> int:
    p = _load_pocset(args)
    if args.format == "text":
        print(f"valid poc-set: {p.n_pairs} proper pairs")
    else:
        _emit(args, {"valid": True, "pairs": p.n_pairs, "document": pocset_to_document(p)})
    return 0


def cmd_ultrafilters(args) -> int:
    p = _load_pocset(args)
    ufs = p.ultrafilters()
    if args.format == "text":
        for u in ufs:
            print(p.format_ultrafilter(u))
    else:
        _emit(
            args,
            {
                "count": len(ufs),
                "ultrafilters": [
                    [p.name(e) for e in u.sorted_members()] for u in ufs
                ],
            },
        )
    return 0


def cmd_cubing(args) -> int:
    p = _load_pocset(args)
    complex_ = build_cubing(p)
    if args.format == "dot":
        sys.stdout.write(complex_.to_dot())
    elif args.format == "text":
        cubes = {d: len(cs) for d, cs in complex_.cubes.items()}
        print(
            f"vertices={len(complex_.vertices)} edges={len(complex_.edges)} "
            f"cubes={cubes}"
        )
    else:
        _emit(args, {"complex": complex_.to_json()})
    return 0


def cmd_dual(args) -> int:
    p = _load_pocset(args)
    report = duality_roundtrip(p)
    extracted = extract_halfspaces(build_cubing(p))
    rng = random.Random(args.seed)
    sampled = 0
    if args.samples:
        from .errors import AxiomViolation

        while sampled < args.samples:
            n = rng.randint(0, 5)
            edges = [
                (rng.randrange(2 * n), rng.randrange(2 * n))
                for _ in range(rng.randint(0, 2 * n))
            ] if n else []
            try:
                q = FinitePocSet.from_order_generators(n, edges)
            except AxiomViolation:
                continue
            duality_roundtrip(q)
            sampled += 1
    if args.format == "text":
        print(f"isomorphic: {report.isomorphic}; sampled {sampled} random poc-sets")
    else:
        _emit(
            args,
            {
                "roundtrip": report.to_json(),
                "extracted": pocset_to_document(extracted),
                "random_samples_passed": sampled,
            },
        )
    return 0


def cmd_boundary(args) -> int:
    family, model = _load_chain_doc(args)
    poset = RollerPoset.build(family.k)
    if args.format == "text":
        for s in poset.signatures:
            print(f"{format_signature(s)} codim={s.codim()}")
    else:
        _emit(
            args,
            {
                "document": chain_family_to_document(family, model),
                "poset": poset.to_json(),
            },
        )
    return 0


def cmd_rho(args) -> int:
    model = _load_model(args)
    xi = parse_exact_pair(args.direction)
    signature = rho(model, xi)
    if args.format == "text":
        print(format_signature(signature))
    else:
        _emit(args, {"direction": args.direction, "class": format_signature(signature)})
    return 0


def cmd_image(args) -> int:
    model = _load_model(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = rho_image(model)
    if args.format == "text":
        for e in report.entries:
            kinds = ",".join(f.kind for f in e.fibers)
            print(f"{format_signature(e.signature)} fibers={kinds}")
    else:
        _emit(args, {"image": report.to_json()})
    return 0


def cmd_safe(args) -> int:
    model = _load_model(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        comps = safe_components(rho_image(model).signatures())
    if args.format == "text":
        for i, comp in enumerate(comps):
            print(f"component {i}: " + " ".join(format_signature(s) for s in comp))
    else:
        _emit(
            args,
            {
                "component_count": len(comps),
                "components": [
                    [format_signature(s) for s in comp] for comp in comps
                ],
            },
        )
    return 0


def cmd_closure(args) -> int:
    model = _load_model(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = closure_check(model)
    if args.format == "text":
        print(f"closure formula: {'ok' if report.ok else 'violated'}")
    else:
        _emit(args, {"closure": report.to_json()})
    return 0


def cmd_restrict(args) -> int:
    model = _load_model(args)
    direction = parse_exact_pair(args.direction)
    base = parse_exact_pair(args.base)
    line = Line(direction, base)
    report = restrict_to_line(model, line)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        incomparable = line_end_incomparability(model, line)
    if args.format == "text":
        print(
            f"merged_chains={len(report.merged_chains)} commutes={report.commutes} "
            f"ends_incomparable={incomparable}"
        )
    else:
        _emit(
            args,
            {
                "restriction": report.to_json(),
                "ends_incomparable": incomparable,
            },
        )
    return 0


def cmd_shadows(args) -> int:
    model = _load_model(args)
    u = ChainUltrafilter(_parse_cuts(args.cuts))
    report = shadow_report(model, u, args.window)
    if args.format == "svg":
        sys.stdout.write(shadow_svg(model, report))
    elif args.format == "text":
        print(
            f"dist={report.dist} shadow={len(report.shadow)} "
            f"min_minus={len(report.min_minus)} min_plus={len(report.min_plus)}"
        )
    else:
        _emit(args, {"report": report.to_json()})
    return 0


def cmd_escape(args) -> int:
    model = _load_model(args)
    target = parse_signature(args.target)
    report = escaping_ray(model, target, args.length, args.window)
    if args.format == "text":
        state = "escapes" if report.success else f"fails at step {report.failure_step}"
        print(f"{format_signature(target)}: {state}")
    else:
        _emit(args, {"ray": report.to_json()})
    return 0


def cmd_report(args) -> int:
    model = _load_model(args)
    if args.window is not None:
        step = max(1, args.window // 3)
        windows = (
            max(1, args.window - 2 * step),
            max(1, args.window - step),
            args.window,
        )
    else:
        windows = tuple(int(w) for w in args.windows.split(","))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = surjectivity_report(model, windows=windows, ray_length=args.length)
    if args.format == "text":
        in_image = sum(1 for r in report.classes if r.codim > 0 and r.in_image)
        total = sum(1 for r in report.classes if r.codim > 0)
        print(f"non-principal classes in image: {in_image} of {total}")
        print(f"max delta over windows {report.windows}: {report.max_delta}")
        print(f"escaping ray: {'yes' if report.escaping_classes else 'no'}")
    else:
        _emit(args, {"report": report.to_json()})
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pocsets",
        description="poc-sets, dual cubings, Roller boundaries and wall models",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_, fmt=("text", "structured")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help="input file or fixture name")
        p.add_argument("--format", choices=fmt, default="text")
        p.add_argument("--seed", type=int, default=0, help="seed for sampling")
        p.set_defaults(handler=handler)
        return p

    add("validate", cmd_validate, "validate a poc-set file")
    add("ultrafilters", cmd_ultrafilters, "enumerate the ultrafilters")
    add(
        "cubing",
        cmd_cubing,
        "build the dual cube complex",
        fmt=("text", "structured", "dot"),
    )
    dual = add("dual", cmd_dual, "verify the duality round-trip")
    dual.add_argument("--samples", type=int, default=0, help="extra random poc-sets")
    add("boundary", cmd_boundary, "the Roller boundary poset of a chain family")
    rho_p = add("rho", cmd_rho, "boundary class of a direction")
    rho_p.add_argument("--direction", required=True, help="exact pair, e.g. 1,0")
    add("image", cmd_image, "the image of rho with its fibers")
    add("safe", cmd_safe, "safe components of the image")
    add("closure", cmd_closure, "check the closure formula on every fiber")
    restrict = add("restrict", cmd_restrict, "restrict the system to a line")
    restrict.add_argument("--direction", required=True)
    restrict.add_argument("--base", default="0,0")
    shadows_p = add(
        "shadows",
        cmd_shadows,
        "shadow report of a cut tuple",
        fmt=("text", "structured", "svg"),
    )
    shadows_p.add_argument("--cuts", required=True, help="e.g. 5,5,5")
    shadows_p.add_argument("--window", type=int, default=12)
    escape = add("escape", cmd_escape, "attempt an escaping geodesic ray")
    escape.add_argument("--target", required=True, help="signature, e.g. (+,+,+)")
    escape.add_argument("--length", type=int, default=20)
    escape.add_argument("--window", type=int, default=13)
    report = add("report", cmd_report, "co-compactness report")
    report.add_argument("--windows", default="5,10,15", help="window sweep")
    report.add_argument(
        "--window", type=int, default=None, help="largest window of a 3-step sweep"
    )
    report.add_argument("--length", type=int, default=12)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except PocError as exc:
        print(json.dumps(exc.diagnostic(), sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
