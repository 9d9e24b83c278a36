"""Command-line front end: fuzz campaigns, single checks, channel optimizers,
threshold scans and report aggregation.

Every run embeds its seed in the output; identical configurations produce
byte-identical report bodies (the timestamp lives only in the header line).
Exit codes: 0 success, 1 inequality violation found, 2 configuration error,
3 numerical error (near-singular input, unstable estimate, no convergence).
"""

import argparse
import datetime
import json
import math
import os
import secrets
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

from schatten_lab import channel_lab, inequality_lab
from schatten_lab.errors import ConfigError, SchattenLabError
from schatten_lab.inequality_lab import DEFAULT_P_GRID, CheckRecord, FuzzSpec

SEED_ENV_VAR = "SCHATTEN_LAB_SEED"


@dataclass
class RunConfig:
    command: str
    seed: int
    trials: int = 1000
    dims: tuple = (2, 3, 4)
    p_grid: tuple = DEFAULT_P_GRID
    tol_rel: Optional[float] = None
    output_path: Optional[str] = None
    format: str = "jsonl"
    jobs: int = 1
    inequality: Optional[str] = None
    sampler_mode: str = "mixed"
    channel: Optional[dict] = None
    channel2: Optional[dict] = None
    p: Optional[float] = None
    p_from: Optional[float] = None
    p_to: Optional[float] = None
    step: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    mat_a: Optional[tuple] = None
    mat_b: Optional[tuple] = None
    delta: Optional[float] = None
    block: Optional[dict] = None
    restarts: int = 32
    max_iters: int = 200
    opt_tol: float = 1e-6
    inputs: tuple = field(default_factory=tuple)


def parse_p_token(token: str) -> float:
    tok = token.strip().lower()
    if tok in ("inf", "infty", "infinity", "oo"):
        return math.inf
    try:
        return float(tok)
    except ValueError as exc:
        raise ConfigError(f"bad p value {token!r}") from exc


def parse_p_grid(text: str) -> tuple:
    if text.strip().lower() == "default":
        return DEFAULT_P_GRID
    return tuple(parse_p_token(t) for t in text.split(",") if t.strip())


def parse_dims(text: str) -> tuple:
    try:
        dims = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"bad dims list {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise ConfigError(f"dims must be positive integers, got {text!r}")
    return dims


def parse_json_arg(text: str, what: str) -> dict:
    """Inline JSON, or @path to read it from a file."""
    raw = text
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {what} file {text[1:]!r}: {exc}")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad {what} JSON: {exc}") from exc


def parse_triple(text: str, what: str) -> tuple:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad {what} triple {text!r}") from exc
    if len(vals) != 3:
        raise ConfigError(f"{what} needs exactly three values a,b,c")
    return vals


def resolve_seed(value: Optional[int]) -> int:
    """Explicit seed, else the env fallback, else a fresh one (printed)."""
    if value is not None:
        if value < 0:
            raise ConfigError("seed must be nonnegative")
        return value
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            seed = int(env)
        except ValueError as exc:
            raise ConfigError(f"bad {SEED_ENV_VAR}={env!r}") from exc
        if seed < 0:
            raise ConfigError(f"{SEED_ENV_VAR} must be nonnegative")
        return seed
    seed = secrets.randbits(48)
    print(f"note: no seed given, drew seed={seed}", file=sys.stderr)
    return seed


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(config: RunConfig, body: str) -> None:
    if config.output_path:
        _atomic_write(config.output_path, body)
    else:
        sys.stdout.write(body)


def _header_line(config: RunConfig, extra: Optional[dict] = None) -> str:
    head = {
        "type": "header",
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "command": config.command,
        "seed": config.seed,
    }
    if extra:
        head.update(extra)
    return json.dumps(head)


def _p_token(p: float):
    return "inf" if math.isinf(p) else p


def _records_exit_code(records: Sequence[CheckRecord]) -> int:
    violations = [r for r in records if not r.passed and r.error is None]
    errors = [r for r in records if r.error is not None]
    if violations:
        return 1
    if errors:
        return 3
    return 0


def _per_cell_summary(records: Sequence[CheckRecord]) -> list:
    cells = {}
    for rec in records:
        cells.setdefault((rec.inequality_id, rec.p), []).append(rec)
    rows = []
    for (ineq, p) in sorted(cells, key=lambda k: (k[0], k[1])):
        recs = cells[(ineq, p)]
        margins = [r.margin for r in recs if not math.isnan(r.margin)]
        rows.append({
            "inequality_id": ineq,
            "p": _p_token(p),
            "records": len(recs),
            "failures": sum(1 for r in recs if not r.passed),
            "errors": sum(1 for r in recs if r.error is not None),
            "min_margin": min(margins) if margins else None,
        })
    return rows


def _csv_summary(rows: Sequence[dict]) -> str:
    lines = ["inequality_id,p,records,failures,errors,min_margin"]
    for row in rows:
        mm = "" if row["min_margin"] is None else repr(row["min_margin"])
        lines.append(f"{row['inequality_id']},{row['p']},{row['records']},"
                     f"{row['failures']},{row['errors']},{mm}")
    return "\n".join(lines) + "\n"


def _cmd_fuzz(config: RunConfig) -> int:
    spec = FuzzSpec(
        inequality=config.inequality,
        trials=config.trials,
        dims=config.dims,
        p_grid=config.p_grid,
        seed=config.seed,
        sampler_mode=config.sampler_mode,
        tol_rel=config.tol_rel,
    )
    records = inequality_lab.fuzz_suite(spec, jobs=config.jobs)
    summary = inequality_lab.summarize(records, spec)
    if config.format == "csv":
        body = _csv_summary(_per_cell_summary(records))
    else:
        lines = [_header_line(config, {"spec": {
            "inequality": spec.inequality, "trials": spec.trials,
            "dims": list(spec.dims),
            "p_grid": ["inf" if math.isinf(p) else p for p in spec.p_grid],
            "sampler_mode": spec.sampler_mode, "tol_rel": spec.tol_rel}})]
        lines += [json.dumps(r.to_json()) for r in records]
        body = "\n".join(lines) + "\n"
    _emit(config, body)
    print(json.dumps(summary))
    return _records_exit_code(records)


def _cmd_check(config: RunConfig) -> int:
    ineq = (config.inequality or "").lower()
    p = config.p
    if p is None:
        raise ConfigError("check requires --p")
    if ineq in ("thm1", "thm2"):
        if config.block is None:
            raise ConfigError(f"{ineq} check requires --block")
        from schatten_lab import blockmat
        block = blockmat.block_from_json(config.block)
        if ineq == "thm1":
            if not isinstance(block, blockmat.PositiveBlock):
                raise ConfigError("thm1 needs a positive block (no W field)")
            record = inequality_lab.check_theorem1(block, p)
        else:
            if isinstance(block, blockmat.PositiveBlock):
                block = blockmat.GeneralBlock(block.n, block.X, block.Y,
                                              block.Y.conj().T, block.Z)
            record = inequality_lab.check_theorem2(block, p)
    elif ineq == "gross":
        if config.a is None or config.b is None:
            raise ConfigError("gross check requires --a and --b")
        record = inequality_lab.check_gross(config.a, config.b, p)
    elif ineq == "lemma3":
        if config.mat_a is None or config.mat_b is None:
            raise ConfigError("lemma3 check requires --mat-a and --mat-b (a,b,c)")
        import numpy as np
        a_, b_, c_ = config.mat_a
        x_, y_, z_ = config.mat_b
        record = inequality_lab.check_lemma3(
            np.array([[a_, c_], [c_, b_]]), np.array([[x_, z_], [z_, y_]]), p)
    elif ineq == "lemma4":
        if config.mat_a is None or config.delta is None:
            raise ConfigError("lemma4 check requires --mat-a (a,b,c) and --delta")
        a_, b_, c_ = config.mat_a
        record = inequality_lab.check_lemma4(a_, b_, c_, p, config.delta)
    else:
        raise ConfigError(
            f"single-instance check supports thm1, thm2, gross, lemma3, "
            f"lemma4; got {config.inequality!r} (use fuzz for the others)")
    body = json.dumps(record.to_json()) + "\n"
    _emit(config, body)
    if config.output_path:
        print(json.dumps(record.to_json()))
    return _records_exit_code([record])


def _opt_config(config: RunConfig) -> channel_lab.OptConfig:
    return channel_lab.OptConfig(
        restarts=config.restarts,
        max_iters=config.max_iters,
        tol=config.opt_tol,
        seed=config.seed,
    )


def _cmd_nu_p(config: RunConfig) -> int:
    if config.channel is None or config.p is None:
        raise ConfigError("nu-p requires --channel and --p")
    chan = channel_lab.channel_from_json(config.channel)
    result = channel_lab.nu_p(chan, config.p, _opt_config(config))
    out = {
        "command": "nu-p",
        "p": _p_token(config.p),
        "seed": config.seed,
        "value": result.value,
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "history": list(result.history),
    }
    _emit(config, json.dumps(out) + "\n")
    if config.output_path:
        print(json.dumps(out))
    return 0 if result.converged else 3


def _cmd_smin(config: RunConfig) -> int:
    if config.channel is None:
        raise ConfigError("smin requires --channel")
    chan = channel_lab.channel_from_json(config.channel)
    result = channel_lab.s_min(chan, _opt_config(config))
    out = {
        "command": "smin",
        "seed": config.seed,
        "value": result.value,
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "history": list(result.history),
    }
    _emit(config, json.dumps(out) + "\n")
    if config.output_path:
        print(json.dumps(out))
    return 0 if result.converged else 3


def _cmd_gap(config: RunConfig) -> int:
    if config.channel is None or config.p is None:
        raise ConfigError("gap requires --channel and --p")
    chan1 = channel_lab.channel_from_json(config.channel)
    chan2 = (channel_lab.channel_from_json(config.channel2)
             if config.channel2 is not None else chan1)
    rec = channel_lab.multiplicativity_gap(chan1, chan2, config.p,
                                           _opt_config(config))
    out = {
        "command": "gap",
        "p": _p_token(config.p),
        "seed": config.seed,
        "nu_product": rec.nu_product,
        "nu_joint_lower": rec.nu_joint_lower,
        "gap": rec.gap,
        "converged": rec.converged,
    }
    _emit(config, json.dumps(out) + "\n")
    if config.output_path:
        print(json.dumps(out))
    return 0 if rec.converged else 3


def _cmd_scan_threshold(config: RunConfig) -> int:
    if config.channel is None:
        raise ConfigError("scan-threshold requires --channel")
    if config.p_from is None or config.p_to is None or config.step is None:
        raise ConfigError("scan-threshold requires --p-from, --p-to, --step")
    if config.step <= 0 or config.p_to < config.p_from:
        raise ConfigError("need p_from <= p_to and step > 0")
    chan = channel_lab.channel_from_json(config.channel)
    cfg = _opt_config(config)
    rows = []
    all_converged = True
    count = int(round((config.p_to - config.p_from) / config.step)) + 1
    for k in range(count):
        p = config.p_from + k * config.step
        single = channel_lab.nu_p(chan, p, cfg)
        all_converged = all_converged and single.converged
        product = single.value ** 2
        lower = channel_lab.entangled_lower_bound(chan, chan, p)
        rows.append({"p": round(p, 12), "entangled_lower_bound": lower,
                     "nu_product": product, "gap": lower - product})
    tol = 1e-9
    first_positive = next((r["p"] for r in rows if r["gap"] > tol), None)
    signs = [r["gap"] > tol for r in rows]
    sign_changes = sum(1 for i in range(1, len(signs))
                       if signs[i] != signs[i - 1])
    lines = [_header_line(config)]
    lines += [json.dumps(r) for r in rows]
    summary = {"type": "summary", "first_positive_p": first_positive,
               "sign_changes": sign_changes}
    lines.append(json.dumps(summary))
    _emit(config, "\n".join(lines) + "\n")
    print(json.dumps(summary))
    return 0 if all_converged else 3


def _cmd_report(config: RunConfig) -> int:
    if not config.inputs:
        raise ConfigError("report requires at least one input JSONL file")
    records = []
    for path in config.inputs:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    obj = json.loads(line)
                    if obj.get("type") in ("header", "summary"):
                        continue
                    if "inequality_id" in obj:
                        records.append(CheckRecord.from_json(obj))
        except OSError as exc:
            raise ConfigError(f"cannot read {path!r}: {exc}")
    rows = _per_cell_summary(records)
    by_ineq = {}
    for row in rows:
        by_ineq.setdefault(row["inequality_id"], []).append(row)
    lines = ["# Inequality fuzz report", ""]
    lines.append(f"Total records: {len(records)}; "
                 f"failures: {sum(1 for r in records if not r.passed)}; "
                 f"errors: {sum(1 for r in records if r.error is not None)}")
    lines.append("")
    for ineq in sorted(by_ineq):
        lines.append(f"## {ineq}")
        lines.append("")
        lines.append("| p | records | failures | errors | min margin |")
        lines.append("|---|---------|----------|--------|------------|")
        for row in by_ineq[ineq]:
            mm = ("" if row["min_margin"] is None
                  else f"{row['min_margin']:.3e}")
            lines.append(f"| {row['p']} | {row['records']} | "
                         f"{row['failures']} | {row['errors']} | {mm} |")
        lines.append("")
    _emit(config, "\n".join(lines) + "\n")
    return 0


_COMMANDS = {
    "fuzz": _cmd_fuzz,
    "check": _cmd_check,
    "nu-p": _cmd_nu_p,
    "smin": _cmd_smin,
    "gap": _cmd_gap,
    "scan-threshold": _cmd_scan_threshold,
    "report": _cmd_report,
}


def run(config: RunConfig) -> int:
    """Execute a validated configuration; returns the process exit code."""
    try:
        handler = _COMMANDS[config.command]
    except KeyError:
        raise ConfigError(f"unknown command {config.command!r}")
    return handler(config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schatten-lab",
        description="Block-matrix Schatten-norm inequality fuzzing and "
                    "quantum-channel output-norm optimization.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, out=True):
        if seed:
            sp.add_argument("--seed", type=int, default=None,
                            help=f"RNG seed (fallback: ${SEED_ENV_VAR}, "
                                 "else drawn and printed)")
        if out:
            sp.add_argument("--out", dest="output_path", default=None,
                            help="output file (atomic write); default stdout")

    sp = sub.add_parser("fuzz", help="randomized inequality campaign")
    sp.add_argument("--inequality", required=True,
                    choices=sorted(inequality_lab.FAMILIES))
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--dims", type=parse_dims, default=(2, 3, 4))
    sp.add_argument("--p-grid", type=parse_p_grid, default=DEFAULT_P_GRID,
                    help='comma list, "inf" allowed, or "default"')
    sp.add_argument("--sampler-mode", default="mixed")
    sp.add_argument("--tol-rel", type=float, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    common(sp)

    sp = sub.add_parser("check", help="single-instance inequality check")
    sp.add_argument("--inequality", required=True)
    sp.add_argument("--p", type=parse_p_token, required=True)
    sp.add_argument("--block", type=lambda s: parse_json_arg(s, "block"),
                    default=None, help="block JSON or @file")
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--mat-a", type=lambda s: parse_triple(s, "mat-a"),
                    default=None, help="a,b,c for [[a,c],[c,b]]")
    sp.add_argument("--mat-b", type=lambda s: parse_triple(s, "mat-b"),
                    default=None)
    sp.add_argument("--delta", type=float, default=None)
    common(sp)

    for name in ("nu-p", "smin", "gap"):
        sp = sub.add_parser(name)
        sp.add_argument("--channel", type=lambda s: parse_json_arg(s, "channel"),
                        required=True, help="channel spec JSON or @file")
        if name == "gap":
            sp.add_argument("--channel2",
                            type=lambda s: parse_json_arg(s, "channel2"),
                            default=None, help="second factor; default: same")
        if name != "smin":
            sp.add_argument("--p", type=parse_p_token, required=True)
        sp.add_argument("--restarts", type=int, default=32)
        sp.add_argument("--max-iters", type=int, default=200)
        sp.add_argument("--opt-tol", type=float, default=1e-6)
        common(sp)

    sp = sub.add_parser("scan-threshold",
                        help="scan p for the first multiplicativity violation "
                             "of channel (x) channel")
    sp.add_argument("--channel", type=lambda s: parse_json_arg(s, "channel"),
                    required=True)
    sp.add_argument("--p-from", type=float, required=True)
    sp.add_argument("--p-to", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--max-iters", type=int, default=200)
    sp.add_argument("--opt-tol", type=float, default=1e-6)
    common(sp)

    sp = sub.add_parser("report", help="aggregate JSONL reports to markdown")
    sp.add_argument("inputs", nargs="+")
    common(sp, seed=False)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    seed = resolve_seed(getattr(args, "seed", None)) \
        if args.command != "report" else 0
    cfg = RunConfig(command=args.command, seed=seed)
    for name in ("trials", "dims", "p_grid", "tol_rel", "output_path",
                 "format", "jobs", "inequality", "sampler_mode", "channel",
                 "channel2", "p", "p_from", "p_to", "step", "a", "b",
                 "mat_a", "mat_b", "delta", "block", "restarts", "max_iters",
                 "opt_tol"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "inputs"):
        cfg.inputs = tuple(args.inputs)
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SchattenLabError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
