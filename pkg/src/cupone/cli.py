"""Command-line surface: parse a workspace document, dispatch one
computation, emit a deterministic report.

The input is a JSON object tree with sections `cgas`, `dgas`,
`twistings`, `gauges`, `homs`, `hypotheses`, `cga_maps`, `spaces`.
Elements are lists of [coefficient, word] pairs; a word is a list of
generator names where a cup-one bundle is written {"cup1": ["a","b"]}.
Reports come out as aligned text or as machine-readable JSON; exit codes
are 0 computed/pass, 1 checked-and-failed, 3 inconclusive, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .algebra import TensorElement, format_word
from .cup1 import Cup1Monomial, normalize_cup1
from .dga import BigradedDGA, SimplicialComplex
from .errors import DomainError
from .groups import GroupHom, HypothesisInstance, check_hypotheses, cokernel, is_injective, tor
from .linalg import FGAbelianGroup, IntMatrix
from .permutohedron import Face, complex_description, f_vector, face_boundary
from .resolution import (
    INFINITY,
    CgaPresentation,
    build_resolution,
    build_rh_map,
    certify_resolution,
    validate_presentation,
)
from .twisting import GaugeElement, TwistingElement, build_DX, gauge_act, gauge_equivalent, is_twisting

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3


class InputError(Exception):
    """Bad document or usage; exits with code 2."""


_GROUP_TOKEN = re.compile(r"^(Z(\^(\d+))?|Z/(\d+)|0)$")


def parse_group(text):
    """Parse group literals like "Z", "Z^2 + Z/4", "Z/6", "0"."""
    divisors = []
    for part in str(text).split("+"):
        part = part.strip()
        m = _GROUP_TOKEN.match(part)
        if not m:
            raise InputError(f"cannot parse group literal {part!r}")
        if part == "0":
            continue
        if part.startswith("Z/"):
            d = int(m.group(4))
            if d < 1:
                raise InputError(f"bad cyclic order in {part!r}")
            divisors.append(d)
        else:
            divisors.extend([0] * (int(m.group(3)) if m.group(3) else 1))
    return FGAbelianGroup.from_divisors(divisors)


def format_group(group):
    return str(group)


class Workspace:
    """Validated objects from one input document, keyed by name."""

    def __init__(self):
        self.cgas = {}
        self.dgas = {}
        self.twistings = {}
        self.gauges = {}
        self.homs = {}
        self.hypotheses = {}
        self.cga_maps = {}
        self.spaces = {}


def _element_from_pairs(dga, pairs, where):
    coeffs = {}
    for item in pairs:
        try:
            coeff, label = item
        except (TypeError, ValueError):
            raise InputError(f"{where}: element entries must be [coefficient, label] pairs")
        if not isinstance(label, str):
            raise InputError(f"{where}: dga element words must be basis labels")
        coeffs[label] = coeffs.get(label, 0) + int(coeff)
    try:
        return dga.element(coeffs)
    except DomainError as exc:
        raise InputError(f"{where}: {exc}") from None


def _load_dga(name, spec):
    try:
        bidegrees = {}
        for entry in spec.get("basis", []):
            label, r, t = entry
            if label in bidegrees:
                raise InputError(f"dgas.{name}: duplicate basis label {label!r}")
            bidegrees[str(label)] = (int(r), int(t))
        diff = {}
        for label, pairs in sorted(spec.get("differential", {}).items()):
            table = {}
            for coeff, l2 in pairs:
                table[str(l2)] = table.get(str(l2), 0) + int(coeff)
            diff[str(label)] = table
        products = {}
        for l1, l2, pairs in spec.get("products", []):
            table = {}
            for coeff, l3 in pairs:
                table[str(l3)] = table.get(str(l3), 0) + int(coeff)
            products[(str(l1), str(l2))] = table
        unit = {}
        for coeff, label in spec.get("unit", []):
            unit[str(label)] = unit.get(str(label), 0) + int(coeff)
        return BigradedDGA(name, bidegrees, diff, products, unit)
    except (DomainError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"dgas.{name}: {exc}") from None


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise InputError(f"duplicate object name {key!r}")
        seen[key] = value
    return seen


def parse_input(text, source_name="<input>"):
    """Parse and validate a workspace document; diagnostics carry the
    object path, and JSON syntax errors carry line and column."""
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source_name}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    known = {"cgas", "dgas", "twistings", "gauges", "homs", "hypotheses", "cga_maps", "spaces"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise InputError(f"unknown top-level section {unknown[0]!r}")

    w = Workspace()
    for name, spec in sorted(doc.get("cgas", {}).items()):
        try:
            gens = {str(k): int(v) for k, v in spec["generators"].items()}
            m = spec.get("m", "infinity")
            m = INFINITY if m in ("infinity", "inf", None) else int(m)
            p = CgaPresentation.of(gens, m)
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"cgas.{name}: {exc}") from None
        report = validate_presentation(p)
        if not report.ok:
            raise InputError(f"cgas.{name}: {report}")
        w.cgas[name] = p

    for name, spec in sorted(doc.get("dgas", {}).items()):
        w.dgas[name] = _load_dga(name, spec)

    for section, store, cls in (("twistings", w.twistings, TwistingElement),
                                ("gauges", w.gauges, GaugeElement)):
        for name, spec in sorted(doc.get(section, {}).items()):
            dga = w.dgas.get(spec.get("dga"))
            if dga is None:
                raise InputError(f"{section}.{name}: unknown dga {spec.get('dga')!r}")
            try:
                truncation = int(spec["truncation"])
                components = {
                    int(r): _element_from_pairs(dga, pairs, f"{section}.{name}.components[{r}]")
                    for r, pairs in spec.get("components", {}).items()
                }
                store[name] = cls(dga, truncation, components)
            except (DomainError, KeyError, TypeError, ValueError) as exc:
                raise InputError(f"{section}.{name}: {exc}") from None

    for name, spec in sorted(doc.get("homs", {}).items()):
        try:
            src = parse_group(spec["source"])
            tgt = parse_group(spec["target"])
            h = GroupHom(src, tgt, IntMatrix(spec["matrix"]))
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"homs.{name}: {exc}") from None
        w.homs[name] = h

    for name, spec in sorted(doc.get("hypotheses", {}).items()):
        try:
            m = int(spec["m"])
            cohomology = {int(k): parse_group(v) for k, v in spec.get("cohomology", {}).items()}
            hurewicz = {}
            for k, hom_name in spec.get("hurewicz", {}).items():
                if hom_name not in w.homs:
                    raise InputError(f"hypotheses.{name}: unknown hom {hom_name!r}")
                hurewicz[int(k)] = w.homs[hom_name]
            w.hypotheses[name] = HypothesisInstance(m, cohomology, hurewicz)
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"hypotheses.{name}: {exc}") from None

    for name, spec in sorted(doc.get("cga_maps", {}).items()):
        if spec.get("source") not in w.cgas or spec.get("target") not in w.cgas:
            raise InputError(f"cga_maps.{name}: unknown source or target cga")
        w.cga_maps[name] = dict(spec)

    for name, spec in sorted(doc.get("spaces", {}).items()):
        try:
            w.spaces[name] = SimplicialComplex(spec["simplices"])
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"spaces.{name}: {exc}") from None
    return w


def _cga_element(resolution, pairs, where):
    """Element of a resolution from [[coeff, word], ...] with cup1 letters."""
    out = TensorElement.zero()
    for item in pairs:
        try:
            coeff, word = item
        except (TypeError, ValueError):
            raise InputError(f"{where}: entries must be [coefficient, word] pairs")
        letters = []
        sign = 1
        for token in word:
            if isinstance(token, str):
                letters.append(resolution.letter(token))
            elif isinstance(token, dict) and set(token) == {"cup1"}:
                factors = [resolution.letter(nm) for nm in token["cup1"]]
                normalized = normalize_cup1(factors)
                if normalized is None:
                    sign = 0
                    break
                s, letter = normalized
                sign *= s
                letters.append(letter)
            else:
                raise InputError(f"{where}: bad word letter {token!r}")
        if sign:
            out = out + TensorElement({tuple(letters): int(coeff) * sign})
    return out


def element_to_pairs(element):
    """Machine form of a tensor element: [[coeff, word], ...]."""
    pairs = []
    for word, coeff in element.sorted_terms():
        encoded = []
        for letter in word:
            if isinstance(letter, Cup1Monomial):
                encoded.append({"cup1": [f.name for f in letter.factors]})
            else:
                encoded.append(letter.name)
        pairs.append([coeff, encoded])
    return pairs


def _dga_element_pairs(element):
    return [[c, l] for l, c in sorted(element.coeffs.items())]


# ---------------------------------------------------------------------------
# commands


def _need(w, store, name, kind):
    if name is None:
        raise InputError(f"missing --{kind} argument")
    obj = getattr(w, store).get(name)
    if obj is None:
        raise InputError(f"no {kind} named {name!r} in the workspace")
    return obj


def _resolve_args(w, args):
    p = _need(w, "cgas", args.cga, "cga")
    if args.m is not None:
        p = CgaPresentation(p.generators, args.m)
        report = validate_presentation(p)
        if not report.ok:
            raise InputError(f"cgas.{args.cga} with m={args.m}: {report}")
    return build_resolution(p, truncation=args.truncation)


def cmd_resolve(w, args):
    r = _resolve_args(w, args)
    generators = []
    for letter in sorted(r.letters, key=lambda l: (-l.res_degree, l.sort_key())):
        generators.append({
            "label": letter.label(),
            "bidegree": list(letter.bidegree),
            "total_degree": letter.total_degree,
            "differential": element_to_pairs(r.images[letter]),
            "differential_text": str(r.images[letter]),
        })
    report = {
        "command": "resolve",
        "parameters": {"cga": args.cga, "m": r.m},
        "verdict": "computed",
        "generators": generators,
    }
    return report, EXIT_OK


def cmd_certify(w, args):
    r = _resolve_args(w, args)
    rep = certify_resolution(r)
    report = {
        "command": "certify",
        "parameters": {"cga": args.cga, "m": r.m},
        "verdict": "pass" if rep.ok else "fail",
        "rho_d_zero": rep.rho_d_zero,
        "rho_surjective": rep.rho_surjective,
        "degrees": [
            {
                "total_degree": c.total_degree,
                "negative_positions": c.negative_positions,
                "negative_ok": c.negative_ok,
                "exact_at_zero": c.exact_at_zero,
            }
            for c in rep.degrees
        ],
    }
    if rep.failure:
        report["failure"] = rep.failure
    return report, EXIT_OK if rep.ok else EXIT_FAILED


def cmd_permutohedron(w, args):
    if args.n is None:
        raise InputError("missing --n argument")
    desc = complex_description(args.n)
    report = {
        "command": "permutohedron",
        "parameters": {"n": args.n},
        "verdict": "computed",
        "f_vector": desc["f_vector"],
        "cells": desc["cells"],
    }
    return report, EXIT_OK


def cmd_boundary(w, args):
    if args.face is None:
        raise InputError("missing --face argument")
    face = Face.parse(args.face, n=args.n)
    terms = face_boundary(face)
    report = {
        "command": "boundary",
        "parameters": {"face": str(face), "n": face.n},
        "verdict": "computed",
        "boundary": [{"coefficient": c, "face": str(f)} for c, f in terms],
    }
    return report, EXIT_OK


def cmd_rh_map(w, args):
    spec = _need(w, "cga_maps", args.map, "map")
    source = build_resolution(w.cgas[spec["source"]], truncation=args.truncation)
    target = build_resolution(w.cgas[spec["target"]], truncation=args.truncation)
    images = {
        name: _cga_element(target, pairs, f"cga_maps.{args.map}.images.{name}")
        for name, pairs in spec.get("images", {}).items()
    }
    try:
        rh = build_rh_map(images, source, target)
    except DomainError as exc:
        report = {
            "command": "rh-map",
            "parameters": {"map": args.map},
            "verdict": "fail",
            "failure": str(exc),
        }
        return report, EXIT_FAILED
    table = []
    for letter in sorted(source.letters, key=lambda l: (-l.res_degree, l.sort_key())):
        img = rh.images[letter]
        table.append({
            "generator": letter.label(),
            "image": element_to_pairs(img),
            "image_text": str(img),
        })
    report = {
        "command": "rh-map",
        "parameters": {"map": args.map, "source": spec["source"], "target": spec["target"]},
        "verdict": "pass",
        "chain_map": True,
        "images": table,
    }
    return report, EXIT_OK


def cmd_twisting_check(w, args):
    a = _need(w, "twistings", args.twisting, "twisting")
    rep = is_twisting(a)
    report = {
        "command": "twisting-check",
        "parameters": {"twisting": args.twisting, "truncation": a.truncation},
        "verdict": "pass" if rep.ok else "fail",
    }
    if not rep.ok:
        report["failed_level"] = rep.failed_level
        report["residual"] = _dga_element_pairs(rep.residual)
    return report, EXIT_OK if rep.ok else EXIT_FAILED


def cmd_gauge(w, args):
    a = _need(w, "twistings", args.twisting, "twisting")
    p = _need(w, "gauges", args.gauge, "gauge")
    b = gauge_act(a, p)
    rep = is_twisting(b)
    report = {
        "command": "gauge",
        "parameters": {"twisting": args.twisting, "gauge": args.gauge, "truncation": a.truncation},
        "verdict": "computed",
        "result": {str(r): _dga_element_pairs(c) for r, c in sorted(b.components.items())},
        "result_twisting": rep.ok,
    }
    return report, EXIT_OK


def cmd_orbit(w, args):
    a = _need(w, "twistings", args.a, "a")
    b = _need(w, "twistings", args.b, "b")
    verdict = gauge_equivalent(a, b, budget=args.budget)
    report = {
        "command": "orbit",
        "parameters": {"a": args.a, "b": args.b, "budget": args.budget,
                       "truncation": a.truncation},
        "verdict": verdict.status,
        "nodes_used": verdict.nodes_used,
    }
    if verdict.status == "witness":
        report["witness"] = {str(r): _dga_element_pairs(c) for r, c in sorted(verdict.witness.components.items())}
        return report, EXIT_OK
    if verdict.status == "refuted":
        report["refutation_level"] = verdict.refutation_level
        report["obstruction"] = _dga_element_pairs(verdict.obstruction)
        return report, EXIT_FAILED
    report["depth_reached"] = verdict.depth_reached
    return report, EXIT_INCONCLUSIVE


def cmd_tor(w, args):
    if args.a is None or args.b is None:
        raise InputError("tor needs --a and --b group literals")
    a = parse_group(args.a)
    b = parse_group(args.b)
    report = {
        "command": "tor",
        "parameters": {"a": format_group(a), "b": format_group(b)},
        "verdict": "computed",
        "tor": format_group(tor(a, b)),
    }
    return report, EXIT_OK


def cmd_hypotheses(w, args):
    inst = _need(w, "hypotheses", args.instance, "instance")
    rep = check_hypotheses(inst)
    rows = []
    for v in rep.verdicts:
        row = {"degree": v.degree}
        if v.skipped:
            row["status"] = "skipped"
            row["note"] = v.note
        else:
            row["status"] = "pass" if v.ok else "fail"
            row["injective"] = v.injective
            row["tor"] = format_group(v.tor_group)
            if v.note:
                row["note"] = v.note
        rows.append(row)
    report = {
        "command": "hypotheses",
        "parameters": {"instance": args.instance, "m": inst.m},
        "verdict": "pass" if rep.ok else "fail",
        "condition": rep.condition,
        "degrees": rows,
    }
    return report, EXIT_OK if rep.ok else EXIT_FAILED


def cmd_d_x(w, args):
    space = _need(w, "spaces", args.space, "space")
    if args.homology is None:
        raise InputError("d-x needs --homology, a comma-separated list of group literals")
    groups = [parse_group(tok) for tok in args.homology.split(",")]
    dga = build_DX(space, groups)
    truncation = args.truncation if args.truncation else 3
    zero = TwistingElement.zero(dga, truncation)
    smoke = is_twisting(zero)
    report = {
        "command": "d-x",
        "parameters": {
            "space": args.space,
            "homology": [format_group(g) for g in groups],
            "truncation": truncation,
        },
        "verdict": "computed",
        "components": [
            {"bidegree": [r, t], "rank": len(labels)}
            for (r, t), labels in sorted(dga.components().items())
        ],
        "nabla_squared_zero": True,
        "zero_element_twisting": smoke.ok,
    }
    return report, EXIT_OK


COMMANDS = {
    "resolve": cmd_resolve,
    "certify": cmd_certify,
    "permutohedron": cmd_permutohedron,
    "boundary": cmd_boundary,
    "rh-map": cmd_rh_map,
    "twisting-check": cmd_twisting_check,
    "gauge": cmd_gauge,
    "orbit": cmd_orbit,
    "tor": cmd_tor,
    "hypotheses": cmd_hypotheses,
    "d-x": cmd_d_x,
}


def run_command(w, args):
    """Dispatch one command against a workspace; returns (report, exit code)."""
    handler = COMMANDS.get(args.command)
    if handler is None:
        raise InputError(f"unknown command {args.command!r}")
    return handler(w, args)


# ---------------------------------------------------------------------------
# rendering


def _render_value(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)) and all(isinstance(v, (int, str)) for v in value):
        return "(" + ", ".join(str(v) for v in value) + ")"
    return str(value)


def _render_table(rows, indent="  "):
    keys = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    cells = [[_render_value(row.get(k, "")) if not isinstance(row.get(k), (list, dict)) or k in ("bidegree", "f_vector")
              else json.dumps(row.get(k), ensure_ascii=False, sort_keys=True)
              for k in keys] for row in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) if cells else len(k) for i, k in enumerate(keys)]
    lines = [indent + "  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip()]
    for c in cells:
        lines.append(indent + "  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip())
    return lines


def render_text(report):
    lines = [f"command: {report['command']}"]
    params = report.get("parameters", {})
    if params:
        lines.append("parameters: " + ", ".join(f"{k}={_render_value(v)}" for k, v in sorted(params.items())))
    lines.append(f"verdict: {report['verdict']}")
    for key in sorted(report):
        if key in ("command", "parameters", "verdict"):
            continue
        value = report[key]
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend(_render_table(value))
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            for k, v in sorted(value.items()):
                lines.append(f"  {k}: {json.dumps(v, ensure_ascii=False, sort_keys=True) if isinstance(v, (list, dict)) else _render_value(v)}")
        elif isinstance(value, list):
            lines.append(f"{key}: {json.dumps(value, ensure_ascii=False, sort_keys=True)}")
        else:
            lines.append(f"{key}: {_render_value(value)}")
    return "\n".join(lines) + "\n"


def render_machine(report):
    return json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cupone",
        description="exact cup-one resolution, permutohedron and gauge-calculus engine",
    )
    parser.add_argument("--input", help="workspace document (JSON)")
    parser.add_argument("--command", required=True, choices=sorted(COMMANDS))
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--truncation", type=int, default=None, help="total-degree or perturbation truncation")
    parser.add_argument("--budget", type=int, default=200, help="search budget for the orbit problem")
    parser.add_argument("--cga", help="presentation name (resolve, certify)")
    parser.add_argument("--m", type=int, default=None, help="range override for resolve/certify")
    parser.add_argument("--n", type=int, help="permutohedron size")
    parser.add_argument("--face", help="face in the form ({1,3},{2})")
    parser.add_argument("--map", help="cga map name (rh-map)")
    parser.add_argument("--twisting", help="twisting element name")
    parser.add_argument("--gauge", help="gauge element name")
    parser.add_argument("--a", help="first operand (orbit: twisting name; tor: group literal)")
    parser.add_argument("--b", help="second operand (orbit: twisting name; tor: group literal)")
    parser.add_argument("--instance", help="hypothesis instance name")
    parser.add_argument("--space", help="simplicial complex name (d-x)")
    parser.add_argument("--homology", help="comma-separated graded group literals (d-x)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.input:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read {args.input}: {exc}") from None
            workspace = parse_input(text, source_name=args.input)
        else:
            workspace = Workspace()
        report, code = run_command(workspace, args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    out = render_machine(report) if args.format == "machine" else render_text(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
