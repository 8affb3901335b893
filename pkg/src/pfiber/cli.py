"""Command-line front end.

Every subcommand parses its inputs, calls one library function and prints
the result.  Exit codes: 0 pass / ok, 1 fibration check failed, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import braidword, fibercheck
from .braidword import BraidWord, BraidWordError
from .curves import LIBRARY_NAMES, CurveError, ParamBraid, library, satellite
from .polyloop import NonConvergenceError, TrackingError, phase_derivative, track
from .wordextract import NonGenericError, extract

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
FORMATS = ("json", "csv", "text")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    grid: int = fibercheck.DEFAULT_GRID
    margin: float = fibercheck.DEFAULT_MARGIN
    fmt: str = "json"
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.grid < 64:
            raise InputError("--grid must be >= 64")
        if not self.margin > 0:
            raise InputError("--margin must be positive")
        if self.fmt not in FORMATS:
            raise InputError(f"--format must be one of {', '.join(FORMATS)}")


def load_braid(source) -> ParamBraid:
    """A library name, a path to braid JSON, or an already parsed dict."""
    if isinstance(source, dict):
        return ParamBraid.from_json(source)
    if source in LIBRARY_NAMES:
        return library(source)
    try:
        data = json.loads(Path(source).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{source} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{source}: expected a JSON object")
    return ParamBraid.from_json(data)


def _as_braid(item) -> ParamBraid:
    if isinstance(item, str):
        if item not in LIBRARY_NAMES:
            raise InputError(f"unknown library braid {item!r}")
        return library(item)
    if isinstance(item, dict):
        return ParamBraid.from_json(item)
    raise InputError(f"expected a library name or braid object, got {type(item).__name__}")


def run_satellite_spec(spec: dict, grid: int, margin: float) -> dict:
    """Build, verify and describe the satellite braid described by ``spec``."""
    try:
        pattern = _as_braid(spec["pattern"])
        companions = [_as_braid(c) for c in spec["companions"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"satellite spec needs 'pattern' and 'companions': {exc}") from exc
    if len(companions) != len(pattern.components):
        raise InputError(f"need one companion per pattern component ({len(pattern.components)})")
    if len({c.n for c in companions}) > 1:
        raise InputError(f"companions must share a strand count, got {[c.n for c in companions]}")

    powers = spec.get("powers", [1] * len(companions))
    if powers == "auto":
        powers = fibercheck.companion_power_bound(pattern, companions, grid)
    if not (isinstance(powers, list) and all(isinstance(r, int) and r != 0 for r in powers)):
        raise InputError("'powers' must be a list of non-zero integers or \"auto\"")

    eps = spec.get("eps", "auto")
    tried = None
    if eps == "auto":
        search = fibercheck.search_eps(pattern, companions, powers, grid, margin)
        tried = [[e, v] for e, v in search.tried]
        if search.eps is None:
            return {"eps": None, "powers": powers, "eps_tried": tried, "report": None,
                    "verdict": "fail"}
        eps, report = search.eps, search.report
        sat = satellite(pattern, companions, eps, powers)
    else:
        if not isinstance(eps, (int, float)) or isinstance(eps, bool):
            raise InputError("'eps' must be a number or \"auto\"")
        sat = satellite(pattern, companions, float(eps), powers)
        report = fibercheck.check(sat, grid, margin)
    ex = extract(sat)
    out = {"eps": eps, "powers": powers, "n": sat.n, "braid": sat.to_json(),
           "word": str(ex.word), "projection_angle": ex.angle,
           "report": report.to_json(), "verdict": report.verdict}
    if tried is not None:
        out["eps_tried"] = tried
    return out


def _report_text(rep: fibercheck.FibrationReport) -> str:
    lines = [f"verdict {rep.verdict}  margin {rep.margin:g}  grid {rep.grid}  samples {rep.samples}"]
    for p, br in enumerate(rep.branches):
        lines.append(f"branch {p}: min {br.min:.9g} at t={br.argmin_t:.6g}  max {br.max:.9g}  "
                     f"winding {br.winding:.6g}  sign changes {len(br.sign_changes)}")
    return "\n".join(lines) + "\n"


def _report_csv(rep: fibercheck.FibrationReport) -> str:
    lines = ["branch,min,argmin_t,max,argmax_t,winding,sign_changes"]
    lines.extend(f"{p},{br.min:.12g},{br.argmin_t:.12g},{br.max:.12g},{br.argmax_t:.12g},"
                 f"{br.winding:.12g},{len(br.sign_changes)}" for p, br in enumerate(rep.branches))
    return "\n".join(lines) + "\n"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_check(cfg: RunConfig) -> int:
    rep = fibercheck.check(load_braid(cfg.inputs[0]), cfg.grid, cfg.margin)
    render = {"json": lambda r: _dump(r.to_json()), "text": _report_text, "csv": _report_csv}
    _emit(cfg, render[cfg.fmt](rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_satellite(cfg: RunConfig) -> int:
    path = cfg.inputs[0]
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise InputError("satellite spec must be a JSON object")
    result = run_satellite_spec(spec, cfg.grid, cfg.margin)
    if cfg.fmt == "text":
        head = f"eps {result['eps']}  powers {result['powers']}\n"
        body = f"word {result.get('word', '')}\n" + (
            _report_text(fibercheck.FibrationReport(**_report_fields(result["report"])))
            if result["report"] else "verdict fail (no eps on the ladder passed)\n")
        _emit(cfg, head + body)
    else:
        _emit(cfg, _dump(result))
    return EXIT_OK if result["verdict"] == "pass" else EXIT_FAIL


def _report_fields(data: dict) -> dict:
    data = dict(data)
    data["branches"] = [fibercheck.BranchReport(**b) for b in data["branches"]]
    data["near_zero"] = [tuple(x) for x in data["near_zero"]]
    return data


def _word_args(cfg: RunConfig) -> BraidWord:
    text, n = cfg.inputs
    try:
        strands = int(n)
    except ValueError as exc:
        raise InputError(f"strand count must be an integer, got {n!r}") from exc
    return BraidWord.parse(text, strands)


def cmd_homogenize(cfg: RunConfig) -> int:
    w = braidword.homogenize(_word_args(cfg))
    if cfg.fmt == "json":
        _emit(cfg, _dump({"n": w.n, "word": str(w)}))
    else:
        _emit(cfg, f"{w}\n")
    return EXIT_OK


def cmd_twistbound(cfg: RunConfig) -> int:
    k1, k2 = braidword.twist_bound(_word_args(cfg))
    if cfg.fmt == "json":
        _emit(cfg, _dump({"k1": k1, "k2": k2}))
    else:
        _emit(cfg, f"{k1} {k2}\n")
    return EXIT_OK


def cmd_library(cfg: RunConfig) -> int:
    name = cfg.inputs[0]
    if name not in LIBRARY_NAMES:
        raise InputError(f"unknown library braid {name!r}; choose from {', '.join(LIBRARY_NAMES)}")
    _emit(cfg, _dump(library(name).to_json()))
    return EXIT_OK


def cmd_tracks(cfg: RunConfig) -> int:
    tracks = track(load_braid(cfg.inputs[0]), cfg.grid)
    _emit(cfg, tracks.to_csv(phase_derivative(tracks, "analytic")))
    return EXIT_OK


def cmd_word(cfg: RunConfig) -> int:
    ex = extract(load_braid(cfg.inputs[0]))
    if cfg.fmt == "json":
        _emit(cfg, _dump({"n": ex.word.n, "word": str(ex.word), "projection_angle": ex.angle}))
    elif cfg.fmt == "csv":
        from .wordextract import events_csv

        _emit(cfg, events_csv(ex))
    else:
        _emit(cfg, f"{ex.word}\n")
    return EXIT_OK


COMMANDS = {
    "check": (cmd_check, ["braid"], "verify the P-fibered condition (exit 1 on failure)", "json"),
    "satellite": (cmd_satellite, ["spec"], "build and verify a satellite from a JSON spec", "json"),
    "homogenize": (cmd_homogenize, ["word", "n"], "alternating word on 2n strands", "text"),
    "twistbound": (cmd_twistbound, ["word", "n"], "full-twist counts k1 k2", "text"),
    "library": (cmd_library, ["name"], "emit a built-in braid as JSON", "json"),
    "tracks": (cmd_tracks, ["braid"], "critical point and value tracks as CSV", "csv"),
    "word": (cmd_word, ["braid"], "braid word read off a parametrized braid", "text"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfiber", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, args, help_text, default_fmt) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        for arg in args:
            p.add_argument(arg)
        p.add_argument("--grid", type=int, default=fibercheck.DEFAULT_GRID)
        p.add_argument("--margin", type=float, default=fibercheck.DEFAULT_MARGIN)
        p.add_argument("--format", dest="fmt", choices=FORMATS, default=default_fmt)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    func, args, _, _ = COMMANDS[ns.command]
    try:
        cfg = RunConfig(ns.command, [getattr(ns, a) for a in args], ns.grid, ns.margin,
                        ns.fmt, ns.out, ns.seed)
        return func(cfg)
    except (InputError, CurveError, BraidWordError, TrackingError, NonConvergenceError,
            NonGenericError, ValueError) as exc:
        print(f"pfiber {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
