"""Verify, certify, retract and synthesize strategies for distributed games.

Exit status: 0 success or positive verdict, 1 negative verdict, 2 input
error, 3 budget exhausted or unknown.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import shlex
import sys
from dataclasses import dataclass, field

from . import __version__
from .annotation import (AnnotatedStrategy, check_annotation, find_witness_annotation,
                         is_witness, relabel)
from .dot import annotated_dot, quotient_dot, strategy_dot
from .dstates import IsomorphismBudget, classify
from .game import ValidationError
from .io import (ParseError, fmt, parse_certificate_text, parse_game, parse_map_text,
                 parse_measure_text, parse_strategy_text, serialize_certificate,
                 serialize_game, serialize_map, serialize_measure, serialize_strategy)
from .progress import check_measure, compute_measure
from .retraction import (InfiniteDState, RetractionError, check_monotone,
                         check_retraction, compact_all, retract)
from .strategy import check_strategy, compute_uniformity

OK, NEGATIVE, INPUT_ERROR, UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


# ------------------------------------------------------------------ reports

class Report:
    """Ordered key/value report rendered as human text or structured text."""

    def __init__(self, command):
        self.command = command
        self.items = []

    def add(self, key, value):
        self.items.append((key, value))
        return self

    def render(self, style: str) -> str:
        if style == "structured":
            out = [f"report {self.command}"]
            out += _structured(self.items, 1)
            out.append("end")
        else:
            out = [_human(k, v) for k, v in self.items]
        return "\n".join(out) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (int, float)):
        return str(v)
    if isinstance(v, str):
        return v if v and " " not in v and "\n" not in v else json.dumps(v)
    return fmt(v)


def _structured(items, depth):
    pad = "  " * depth
    out = []
    for k, v in items:
        if isinstance(v, dict):
            out.append(f"{pad}{k} {{")
            out += _structured(list(v.items()), depth + 1)
            out.append(f"{pad}}}")
        elif isinstance(v, list):
            out.append(f"{pad}{k} [")
            for x in v:
                if isinstance(x, dict):
                    out.append(f"{pad}  {{")
                    out += _structured(list(x.items()), depth + 2)
                    out.append(f"{pad}  }}")
                else:
                    out.append(f"{pad}  {_scalar(x)}")
            out.append(f"{pad}]")
        else:
            out.append(f"{pad}{k}: {_scalar(v)}")
    return out


def _human(k, v) -> str:
    if isinstance(v, dict):
        return f"{k}: " + ", ".join(f"{a}={_scalar(b)}" for a, b in v.items())
    if isinstance(v, list):
        if v and isinstance(v[0], dict):
            return f"{k}:\n" + "\n".join(
                "  " + "  ".join(f"{a}={_scalar(b)}" for a, b in x.items()) for x in v)
        return f"{k}: " + " ".join(_scalar(x) for x in v)
    return f"{k}: {_scalar(v)}"


# ------------------------------------------------------------------ helpers

@dataclass
class Context:
    args: argparse.Namespace
    outputs: dict = field(default_factory=dict)    # path -> bytes written
    inputs: dict = field(default_factory=dict)     # path -> sha256

    def read(self, path) -> str:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return data.decode("utf-8")

    def write(self, path, text: str):
        data = text.encode("utf-8")
        parent = os.path.dirname(path)
        try:
            if parent:
                os.makedirs(parent, exist_ok=True)
            fh = open(path, "wb")
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc.strerror}") from None
        with fh:
            fh.write(data)
        self.outputs[path] = hashlib.sha256(data).hexdigest()


def _game(ctx, path):
    from .io import parse_game_text
    return parse_game_text(ctx.read(path))


def _certificate(ctx, path, game, spec):
    """Certificate file; a bare strategy file gets an annotation searched."""
    text = ctx.read(path)
    try:
        cert = parse_certificate_text(text, game, spec)
        return cert.annotated, cert.measure, True
    except ParseError as exc:
        if not any(d.code == "MissingLabel" for d in exc.diagnostics):
            raise
    S = parse_strategy_text(text, game)
    w = find_witness_annotation(S, game, spec)
    return w, None, False


def _lasso(lasso):
    stem, cycle = lasso
    return {"stem": [fmt(v) for v in stem], "cycle": [fmt(v) for v in cycle]}


# ---------------------------------------------------------------- commands

def cmd_validate(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    rep.add("players", game.players).add("directions", list(game.directions))
    rep.add("spec_states", len(spec.states)).add("priorities", spec.num_priorities)
    rep.add("diagnostics", 0)
    if ctx.args.normalize:
        ctx.write(ctx.args.normalize, serialize_game(game, spec))
    return OK


def cmd_verify(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    text = ctx.read(ctx.args.certificate)
    S = None
    try:
        annotated = parse_certificate_text(text, game, spec).annotated
        S = annotated.strategy
    except ParseError as exc:
        if not any(d.code == "MissingLabel" for d in exc.diagnostics):
            raise
        S = parse_strategy_text(text, game)
        annotated = None
    rel = compute_uniformity(S, game, all_histories=ctx.args.all_histories)
    bad = check_strategy(S, game, rel)
    rep.add("uniform", bad is None)
    if bad is not None:
        rep.add("violation", {"player": bad.player, "left": fmt(bad.left),
                              "right": fmt(bad.right)})
        return NEGATIVE
    if annotated is None:
        annotated = find_witness_annotation(S, game, spec)
        rep.add("annotation", "searched")
        if annotated is None:
            rep.add("witness", False)
            return NEGATIVE
    err = check_annotation(annotated)
    rep.add("annotation_valid", err is None)
    if err is not None:
        rep.add("annotation_error", {"kind": err.kind, "node": fmt(err.node),
                                     "direction": err.direction})
        return NEGATIVE
    ok, lasso = is_witness(annotated)
    rep.add("witness", ok)
    if not ok:
        rep.add("lasso", _lasso(lasso))
        return NEGATIVE
    return OK


def cmd_measure(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    annotated, embedded, _ = _certificate(ctx, ctx.args.certificate, game, spec)
    if annotated is None:
        rep.add("witness", False)
        return NEGATIVE
    if ctx.args.action == "compute":
        mu = compute_measure(annotated)
        rep.add("measure_exists", mu is not None)
        if mu is None:
            rep.add("lasso", _lasso(is_witness(annotated)[1]))
            return NEGATIVE
        rep.add("nodes", len(mu))
        if ctx.args.output:
            ctx.write(ctx.args.output, serialize_measure(mu))
        return OK
    mu = parse_measure_text(ctx.read(ctx.args.measure)) if ctx.args.measure else embedded
    if mu is None:
        raise InputError("no measure given: embed it in the certificate or pass --measure")
    missing = [v for v in annotated.strategy.nodes if v not in mu]
    if missing:
        raise InputError(f"measure misses node {fmt(missing[0])}")
    r = annotated.spec.num_priorities
    if any(len(m) != r for m in mu.values()):
        raise InputError(f"measure tuples must have {r} components")
    bad = check_measure(annotated, mu)
    rep.add("measure_valid", bad is None)
    if bad is not None:
        rep.add("violation", {"source": fmt(bad.source), "direction": bad.direction,
                              "target": fmt(bad.target), "priority": bad.priority})
        return NEGATIVE
    return OK


def _needs_measure(annotated, embedded):
    mu = embedded or compute_measure(annotated)
    if mu is None:
        raise InputError("certificate is not a witness; no measure exists")
    return mu


def cmd_retract(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    annotated, embedded, _ = _certificate(ctx, ctx.args.certificate, game, spec)
    if annotated is None:
        rep.add("witness", False)
        return NEGATIVE
    if ctx.args.action == "compact":
        mu = _needs_measure(annotated, embedded)
        try:
            out, nu, log = compact_all(annotated, mu, ctx.args.budget)
        except (InfiniteDState, IsomorphismBudget) as exc:
            rep.add("error", str(exc))
            return UNKNOWN
        rep.add("rounds", [{"classes": i, "max_class": c, "nodes": n} for i, c, n in log])
        rep.add("witness", is_witness(out)[0])
        if ctx.args.output:
            ctx.write(ctx.args.output, serialize_certificate(out, nu))
        return OK
    if not ctx.args.map:
        raise InputError("--map is required")
    h = parse_map_text(ctx.read(ctx.args.map))
    unknown = [v for v in h if v not in annotated.strategy.nodes]
    if unknown:
        raise InputError(f"map mentions unknown node {fmt(unknown[0])}")
    # unlisted nodes stay put
    h = {v: h.get(v, v) for v in annotated.strategy.nodes}
    bad = check_retraction(annotated, h)
    rep.add("retraction", bad is None)
    if bad is not None:
        rep.add("violation", {"kind": bad.kind, "node": fmt(bad.node),
                              "other": fmt(bad.other)})
        return NEGATIVE
    mu = embedded or compute_measure(annotated)
    if mu is not None:
        mono = check_monotone(annotated, mu, h)
        rep.add("monotone", mono is None)
    if ctx.args.action == "check":
        return OK
    try:
        out, nu = retract(annotated, mu, h) if mu is not None else (None, None)
    except RetractionError as exc:
        rep.add("error", str(exc))
        return NEGATIVE
    if out is None:
        from .retraction import _restrict, image
        out = _restrict(annotated, image(annotated.strategy, h))
    rep.add("nodes", len(out.strategy)).add("witness", is_witness(out)[0])
    if ctx.args.output:
        ctx.write(ctx.args.output, serialize_certificate(out, nu))
    return OK


def cmd_dstates(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    if ctx.args.action == "growth":
        from .solvers.growth import diagnose_growth
        S = None
        if ctx.args.certificate:
            text = ctx.read(ctx.args.certificate)
            S = parse_strategy_text("\n".join(
                ln for ln in text.splitlines()
                if not ln.lstrip().startswith(("label", "measure"))), game)
        try:
            rows = diagnose_growth(game, spec, ctx.args.depth, S, ctx.args.budget)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        rep.add("rows", [{"depth": r.depth, "dstates": r.dstates, "max_size": r.max_size,
                          "classes": r.classes} for r in rows])
        return OK
    if not ctx.args.certificate:
        raise InputError("classify needs a certificate")
    annotated, _, _ = _certificate(ctx, ctx.args.certificate, game, spec)
    if annotated is None:
        rep.add("witness", False)
        return NEGATIVE
    try:
        report = classify(annotated, ctx.args.budget, edges=not ctx.args.ignore_edges)
    except IsomorphismBudget as exc:
        rep.add("error", str(exc))
        return UNKNOWN
    rep.add("dstates", len(report.dstates)).add("classes", report.index)
    rep.add("max_dstate_size", report.max_dstate_size)
    rep.add("class_sizes", report.class_sizes)
    if ctx.args.dot:
        ctx.write(ctx.args.dot, quotient_dot(annotated, report))
    return OK


def _write_solution(ctx, rep, res):
    if ctx.args.strategy_out:
        ctx.write(ctx.args.strategy_out, serialize_strategy(res.witness.strategy))
        rep.add("strategy_file", ctx.args.strategy_out)
    if ctx.args.certificate_out:
        ctx.write(ctx.args.certificate_out, serialize_certificate(res.witness, res.measure))
        rep.add("certificate_file", ctx.args.certificate_out)
    if ctx.args.dot:
        ctx.write(ctx.args.dot, annotated_dot(res.witness, res.measure))


def cmd_solve(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    kind = ctx.args.kind
    if kind == "parity":
        from .solvers.delay import product_arena
        from .solvers.parity import solve_parity
        arena = product_arena(game, spec)
        sol = solve_parity(arena)
        win = arena.initial in sol.winning
        rep.add("verdict", "win" if win else "lose")
        rep.add("arena_positions", len(arena.owner))
        rep.add("note", "perfect information: observers ignored")
        return OK if win else NEGATIVE
    if kind == "one-player":
        from .solvers.one_player import NotObservable, NotOnePlayer, solve_one_player
        try:
            res = solve_one_player(game, spec, ctx.args.mode, ctx.args.memory_bound)
        except (NotOnePlayer, NotObservable) as exc:
            raise InputError(str(exc)) from None
    else:
        from .solvers.delay import DelayOutOfRange, NotDelayForm, solve_delay
        try:
            res = solve_delay(game, spec, ctx.args.k)
        except (DelayOutOfRange, NotDelayForm) as exc:
            raise InputError(str(exc)) from None
    rep.add("verdict", res.status)
    rep.add("stats", dict(sorted(res.stats.items())))
    if res.status == "unknown":
        return UNKNOWN
    if not res.found:
        return NEGATIVE
    _write_solution(ctx, rep, res)
    return OK


def cmd_oracle(ctx, rep):
    from .solvers.oracle import BudgetExceeded, brute_force_oracle, candidate_count
    game, spec = _game(ctx, ctx.args.game)
    rep.add("memory_bound", ctx.args.bound)
    rep.add("candidates", candidate_count(game, ctx.args.bound))
    try:
        S = brute_force_oracle(game, spec, ctx.args.bound, ctx.args.budget)
    except BudgetExceeded as exc:
        rep.add("error", str(exc))
        return UNKNOWN
    rep.add("verdict", "win" if S is not None else "none-within-bound")
    if S is None:
        return NEGATIVE
    rep.add("nodes", len(S))
    if ctx.args.strategy_out:
        ctx.write(ctx.args.strategy_out, serialize_strategy(S))
    return OK


def cmd_generate(ctx, rep):
    from .generate import random_one_player
    rng = random.Random(ctx.args.seed)
    paths = []
    for i in range(ctx.args.count):
        game, spec = random_one_player(rng)
        path = os.path.join(ctx.args.out_dir, f"instance_{ctx.args.seed}_{i:03d}.game")
        ctx.write(path, serialize_game(game, spec))
        paths.append(path)
    rep.add("seed", ctx.args.seed).add("files", paths)
    return OK


def cmd_export(ctx, rep):
    game, spec = _game(ctx, ctx.args.game)
    text = ctx.read(ctx.args.certificate)
    try:
        cert = parse_certificate_text(text, game, spec)
        dot = annotated_dot(cert.annotated, cert.measure)
    except ParseError as exc:
        if not any(d.code == "MissingLabel" for d in exc.diagnostics):
            raise
        dot = strategy_dot(parse_strategy_text(text, game), game)
    ctx.write(ctx.args.output, dot)
    rep.add("dot_file", ctx.args.output)
    return OK


# ---------------------------------------------------------------- manifests

def _manifest(ctx, argv, status, rep_text):
    return {
        "tool": "dsynth",
        "version": __version__,
        "argv": list(argv),
        "command": shlex.join(argv),
        "inputs": dict(sorted(ctx.inputs.items())),
        "outputs": dict(sorted(ctx.outputs.items())),
        "report_sha256": hashlib.sha256(rep_text.encode()).hexdigest(),
        "exit_status": status,
    }


def write_manifest(path, manifest):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_replay(ctx, rep):
    try:
        manifest = json.loads(ctx.read(ctx.args.manifest))
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest is not JSON: {exc}") from None
    for path, digest in manifest["inputs"].items():
        try:
            with open(path, "rb") as fh:
                now = hashlib.sha256(fh.read()).hexdigest()
        except OSError:
            raise InputError(f"input {path} is missing") from None
        if now != digest:
            rep.add("input_changed", path)
            return NEGATIVE
    before = {}
    for path in manifest["outputs"]:
        if os.path.exists(path):
            with open(path, "rb") as fh:
                before[path] = fh.read()
    inner = Context(_parse(manifest["argv"]))
    inner_rep = Report(inner.args.command)
    status = _dispatch(inner, inner_rep)
    inner_rep.add("exit", status)
    text = inner_rep.render(inner.args.format)
    same = (status == manifest["exit_status"]
            and inner.outputs == manifest["outputs"]
            and hashlib.sha256(text.encode()).hexdigest() == manifest["report_sha256"])
    rep.add("reproduced", same)
    rep.add("outputs", len(inner.outputs))
    return OK if same else NEGATIVE


# ------------------------------------------------------------------- parser

def _common(p):
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--manifest", help="write a run manifest to this path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dsynth", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"dsynth {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a game file")
    p.add_argument("game")
    p.add_argument("--normalize", metavar="PATH", help="write the canonical form")
    _common(p)

    p = sub.add_parser("verify", help="check uniformity, annotation and acceptance")
    p.add_argument("game")
    p.add_argument("certificate", help="certificate or bare strategy file")
    p.add_argument("--all-histories", action="store_true",
                   help="uniformity over all histories, not only followed ones")
    _common(p)

    p = sub.add_parser("measure", help="compute or check a progress measure")
    p.add_argument("action", choices=("compute", "check"))
    p.add_argument("game")
    p.add_argument("certificate")
    p.add_argument("--measure", help="measure file (default: embedded in certificate)")
    p.add_argument("-o", "--output")
    _common(p)

    p = sub.add_parser("retract", help="apply, check or compact retractions")
    p.add_argument("action", choices=("apply", "check", "compact"))
    p.add_argument("game")
    p.add_argument("certificate")
    p.add_argument("--map", help="retraction map file")
    p.add_argument("--budget", type=int, default=64)
    p.add_argument("-o", "--output")
    _common(p)

    p = sub.add_parser("dstates", help="classify d-states or diagnose growth")
    p.add_argument("action", choices=("classify", "growth"))
    p.add_argument("game")
    p.add_argument("certificate", nargs="?")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--budget", type=int, default=64)
    p.add_argument("--ignore-edges", action="store_true")
    p.add_argument("--dot", help="write the class quotient as DOT")
    _common(p)

    p = sub.add_parser("solve", help="run a solver")
    p.add_argument("kind", choices=("one-player", "delay", "parity"))
    p.add_argument("game")
    p.add_argument("--mode", choices=("observable", "general"), default="observable")
    p.add_argument("--memory-bound", type=int, default=3)
    p.add_argument("--k", type=int, default=None, help="delay bound")
    p.add_argument("--strategy-out")
    p.add_argument("--certificate-out")
    p.add_argument("--dot")
    _common(p)

    p = sub.add_parser("oracle", help="brute-force search over small strategies")
    p.add_argument("game")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--strategy-out")
    _common(p)

    p = sub.add_parser("generate", help="write random one-player instances")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    _common(p)

    p = sub.add_parser("export", help="DOT export of a strategy or certificate")
    p.add_argument("game")
    p.add_argument("certificate")
    p.add_argument("-o", "--output", required=True)
    _common(p)

    p = sub.add_parser("replay", help="re-run a manifest and compare outputs")
    p.add_argument("manifest")
    _common(p)
    return ap


def _parse(argv):
    return build_parser().parse_args(argv)


COMMANDS = {
    "validate": cmd_validate, "verify": cmd_verify, "measure": cmd_measure,
    "retract": cmd_retract, "dstates": cmd_dstates, "solve": cmd_solve,
    "oracle": cmd_oracle, "generate": cmd_generate, "export": cmd_export,
    "replay": cmd_replay,
}


def _dispatch(ctx, rep) -> int:
    try:
        return COMMANDS[ctx.args.command](ctx, rep)
    except (ParseError, ValidationError) as exc:
        rep.add("error", str(exc))
        rep.add("diagnostics", [str(d) for d in exc.diagnostics])
        return INPUT_ERROR
    except (InputError, ValueError) as exc:
        rep.add("error", str(exc))
        return INPUT_ERROR


def main(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    ctx = Context(args)
    rep = Report(args.command)
    status = _dispatch(ctx, rep)
    rep.add("exit", status)
    text = rep.render(args.format)
    stdout.write(text)
    if args.manifest:
        write_manifest(args.manifest, _manifest(ctx, argv, status, text))
    return status


if __name__ == "__main__":
    sys.exit(main())
