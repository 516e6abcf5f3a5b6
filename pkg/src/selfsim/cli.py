"""``selfsim`` command-line entry point."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import boxoracle, ggdc
from .core import automaton_from_json
from .corpus import builtin_automaton
from .entropy import cube_counts, entropy, verify_theorem, word_counts
from .errors import SelfSimError, SpecError, ToleranceNotReachedError
from .kernel import DEFAULT_ELEMENT_CAP, compute_kernel, kernel_from_json, kernel_to_text
from .render import level_approximation, render_pgm, render_svg
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, as_fraction, dimension
from .specdsl import parse_spec, validate

ORACLE_DEPTH = 6
COMMANDS = ("kernel", "dim", "entropy", "verify", "ggdc", "render", "count")


@dataclass
class RunConfig:
    command: str
    source: str | None
    builtin: str | None
    tol: Fraction
    depth: int | None
    budget: int | None
    json: str | None
    csv: str | None
    dot: str | None
    svg: str | None
    pgm: str | None
    res: int | None
    element: int
    max_iter: int = DEFAULT_MAX_ITER

    def cap(self, default: int) -> int:
        return self.budget if self.budget is not None else default


def _digits_for(tol: Fraction) -> int:
    return max(15, math.ceil(-math.log10(tol)) + 3)


def _load(cfg: RunConfig):
    """Kernel presentation, recorded matrix (kernel files only) and built-in name."""
    cap = cfg.cap(DEFAULT_ELEMENT_CAP)
    if cfg.builtin:
        return compute_kernel(builtin_automaton(cfg.builtin), cap), None, cfg.builtin
    if cfg.source in (None, "-"):
        text, name = sys.stdin.read(), "stdin"
    else:
        path = Path(cfg.source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SpecError(f"cannot read {path}: {exc.strerror}") from exc
        name = path.stem
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        if "transitions" in obj and "elements" in obj:
            kp, recorded = kernel_from_json(obj)
            return kp, recorded, None
        try:
            a = automaton_from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed automaton file: {exc}") from exc
        return compute_kernel(a, cap), None, None
    return compute_kernel(validate(parse_spec(text, name)), cap), None, None


def _emit(target: str | None, data, binary: bool = False) -> None:
    if target in (None, "-"):
        if binary:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if binary else "w"
    kwargs = {} if binary else {"encoding": "utf-8", "newline": ""}
    with open(target, mode, **kwargs) as fh:
        fh.write(data)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_kernel(cfg: RunConfig) -> int:
    kp, _, _ = _load(cfg)
    _emit(cfg.json, kernel_to_text(kp))
    return 0


def cmd_dim(cfg: RunConfig) -> int:
    kp, _, _ = _load(cfg)
    digits = _digits_for(cfg.tol)
    enc = dimension(kp, cfg.tol, cfg.max_iter)
    out = {"n": kp.n, "k": kp.k, "d": kp.d, "dimension": enc.to_json(digits)}
    if cfg.json is not None:
        _emit(cfg.json, _dump(out))
    else:
        j = out["dimension"]
        _emit(None, f"dimension {j['value']}\nenclosure [{j['lower']}, {j['upper']}]\n"
                    f"rho [{j['rho']['lower']}, {j['rho']['upper']}]\nkernel elements {kp.n}\n")
    return 0


def cmd_entropy(cfg: RunConfig) -> int:
    kp, _, _ = _load(cfg)
    depth = 10 if cfg.depth is None else cfg.depth
    res = entropy(kp, cfg.tol, depth, cfg.max_iter)
    out = res.to_json(_digits_for(cfg.tol))
    fields = ["p", "word_count", "cube_count_0", "direct", "ratio"]
    if cfg.csv is not None:
        _emit(cfg.csv, _csv(out["estimates"], fields))
    if cfg.json is not None:
        _emit(cfg.json, _dump(out))
    if cfg.csv is None and cfg.json is None:
        lines = [f"entropy {out['entropy']['value']}",
                 f"enclosure [{out['entropy']['lower']}, {out['entropy']['upper']}]",
                 "\t".join(fields)]
        lines += ["\t".join(str(r[f]) for f in fields) for r in out["estimates"]]
        _emit(None, "\n".join(lines) + "\n")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    kp, recorded, builtin = _load(cfg)
    depth = 30 if cfg.depth is None else cfg.depth
    digits = _digits_for(cfg.tol)
    report = verify_theorem(kp, cfg.tol, depth, matrix=recorded or None, max_iter=cfg.max_iter,
                            raise_on_fail=False)

    g = ggdc.build_ggdc(kp)
    axioms = ggdc.validate_ggdc(g)
    report.add("ggdc-axioms", axioms["passed"],
               "all construction axioms hold" if axioms["passed"] else json.dumps(axioms["violations"][:3]))
    gdim = ggdc.ggdc_dimension(g, cfg.tol, cfg.max_iter)
    ok = report.dimension is not None and gdim.intersects(report.dimension)
    report.add("ggdc-transfer", ok, f"rho(adjacency) in [{float(gdim.spectral.lower):.12f}, "
                                    f"{float(gdim.spectral.upper):.12f}]")

    if builtin:
        counts = boxoracle.count_boxes_upto(boxoracle.builtin_set(builtin), ORACLE_DEPTH,
                                            cfg.cap(boxoracle.DEFAULT_BOX_CAP))
        pipeline = [cube_counts(kp, p)[0] for p in range(ORACLE_DEPTH + 1)]
        report.add("oracle-equality", counts == pipeline,
                   f"N_p = {counts}" if counts == pipeline else f"oracle {counts} vs kernel {pipeline}")

    out = report.to_json(digits)
    _emit(cfg.json if cfg.json is not None else None, _dump(out))
    if not report.passed:
        first = report.failures()[0]
        print(f"verification failed: {first['name']}: {first['detail']}", file=sys.stderr)
        return 5
    return 0


def cmd_ggdc(cfg: RunConfig) -> int:
    kp, _, _ = _load(cfg)
    g = ggdc.build_ggdc(kp)
    wrote = False
    if cfg.dot is not None:
        _emit(cfg.dot, ggdc.to_dot(g))
        wrote = True
    if cfg.json is not None or not wrote:
        obj = ggdc.to_json(g)
        obj["validation"] = ggdc.validate_ggdc(g)
        _emit(cfg.json, _dump(obj))
    return 0


def cmd_render(cfg: RunConfig) -> int:
    kp, _, _ = _load(cfg)
    depth = 3 if cfg.depth is None else cfg.depth
    if cfg.element >= kp.n:
        raise SpecError(f"element {cfg.element} outside 0..{kp.n - 1}")
    cubes = level_approximation(kp, cfg.element, depth, cfg.cap(10**7))
    if cfg.svg is None and cfg.pgm is None:
        raise SpecError("render needs --svg or --pgm")
    if cfg.svg is not None:
        _emit(cfg.svg, render_svg(cubes))
    if cfg.pgm is not None:
        _emit(cfg.pgm, render_pgm(cubes, cfg.res), binary=True)
    return 0


def cmd_count(cfg: RunConfig) -> int:
    kp, _, builtin = _load(cfg)
    depth = ORACLE_DEPTH if cfg.depth is None else cfg.depth
    words = word_counts(kp, depth)
    rows = []
    oracle = None
    if builtin:
        oracle = boxoracle.count_boxes_upto(boxoracle.builtin_set(builtin), depth,
                                            cfg.cap(boxoracle.DEFAULT_BOX_CAP))
    for p in range(depth + 1):
        n_p = oracle[p] if oracle else cube_counts(kp, p)[0]
        rows.append({"p": p, "N_p": str(n_p), "word_count": str(words[p])})
    if cfg.json is not None:
        _emit(cfg.json, _dump({"source": "oracle" if oracle else "kernel", "rows": rows}))
    else:
        _emit(cfg.csv, _csv(rows, ["p", "N_p", "word_count"]))
    return 0


HANDLERS = {
    "kernel": cmd_kernel, "dim": cmd_dim, "entropy": cmd_entropy, "verify": cmd_verify,
    "ggdc": cmd_ggdc, "render": cmd_render, "count": cmd_count,
}


def _positive_fraction(text: str) -> Fraction:
    try:
        x = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def _nonneg(text: str) -> int:
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfsim",
                                     description="Kernels, dimension and entropy of k-self-similar sets.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help=".kss file, kernel/automaton JSON, or - for stdin")
    parser.add_argument("--builtin", metavar="NAME", help="use a built-in corpus set")
    parser.add_argument("--tol", type=_positive_fraction, default=DEFAULT_TOL)
    parser.add_argument("-p", "--depth", type=_nonneg)
    parser.add_argument("--budget", type=_nonneg, help="size cap (overrides SELFSIM_BUDGET)")
    parser.add_argument("--max-iter", type=_nonneg, default=DEFAULT_MAX_ITER,
                        help="iteration cap for the spectral enclosure")
    parser.add_argument("--element", type=_nonneg, default=0, help="kernel element to render")
    out = parser.add_argument_group("output")
    for flag in ("json", "csv", "dot", "svg", "pgm"):
        out.add_argument(f"--{flag}", nargs="?", const="-", metavar="PATH",
                         help=f"write {flag.upper()} to PATH (stdout if omitted)")
    out.add_argument("--res", type=_nonneg, help="PGM resolution in pixels")
    return parser


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    budget = args.budget
    if budget is None and os.environ.get("SELFSIM_BUDGET"):
        try:
            budget = int(os.environ["SELFSIM_BUDGET"])
        except ValueError:
            raise SpecError("SELFSIM_BUDGET must be an integer") from None
    if args.builtin and args.input:
        raise SpecError("give either an input file or --builtin, not both")
    return RunConfig(args.command, args.input, args.builtin, args.tol, args.depth, budget,
                     args.json, args.csv, args.dot, args.svg, args.pgm, args.res, args.element,
                     max(1, args.max_iter))


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return HANDLERS[cfg.command](cfg)
    except ToleranceNotReachedError as exc:
        if exc.result is not None:
            sys.stdout.write(_dump({"certified": False, "rho": exc.result.to_json()}))
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except SelfSimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
