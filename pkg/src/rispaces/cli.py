"""Command-line surface: norms, K-curves, interpolation identities, experiments.

Subcommands
-----------
norm             evaluate a space norm of a function, print {"space", "value"}
kfunc            write a CSV of t, K_oracle, K_explicit, ratio over a log grid
interp           run one identity over a family; CSV of function_id,lhs,rhs,ratio
experiment       run a named ratio experiment; write the JSON report
list-experiments print the catalog of experiment names and their parameters

Functions, spaces and couples are passed as JSON (inline or @file).  The seed
falls back to the RISPACES_SEED environment variable.  Exit codes: 0 success,
1 numerical failure, 2 configuration error, 3 experiment failed its bracket.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import equivharness as harness
from .config import DEFAULT, DEFAULT_CEILING, Resolution
from .errors import BadExponent, HypothesisViolation, RispacesError
from .interpolation import THEOREM_IDS, identify_target, theorem_couple
from .kfunctional import (
    CoupleSpec,
    General,
    GrandGrand,
    GrandLq,
    GrandSmallSameP,
    LpLq,
    SmallSmall,
    k_curve,
)
from .logcalc import LogWeight, UGrid
from .norms import (
    GammaDouble,
    Grand,
    Lebesgue,
    LorentzZygmund,
    Small,
    SpaceSpec,
    space_norm,
)
from .rearrangement import (
    Char,
    ExplicitSteps,
    FunctionModel,
    PowerLog,
    Samples,
    StepFunction,
    discretize_model,
)

EXPERIMENT_CATALOG = {
    "T1.1": "p q alpha",
    "T3.1": "p q alpha",
    "T1.2": "p q theta r alpha",
    "T3.4": "p q theta r alpha",
    "T5.1": "p q theta r",
    "P4.1": "p alpha",
    "P4.2": "p q alpha",
    "T1.3": "p theta r",
    "T6.2": "p theta r",
    "hardy:thm2.1-first": "lam b beta",
    "hardy:thm2.1-second": "lam b beta",
    "hardy:thm2.2-first": "a alpha",
    "hardy:thm2.2-second": "a alpha",
    "discretization": "lambda q",
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fn: Optional[FunctionModel] = None
    space: Optional[SpaceSpec] = None
    couple: Optional[CoupleSpec] = None
    theorem: Optional[str] = None
    params: Optional[dict] = None
    out: Optional[str] = None
    seed: int = harness.DEFAULT_SEED
    res: Resolution = DEFAULT
    ceiling: float = DEFAULT_CEILING


def _load_json(text: str) -> dict:
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:], "r") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object")
    return obj


def parse_fn(text: str) -> FunctionModel:
    obj = _load_json(text)
    kind = obj.get("kind")
    try:
        if kind == "power_log":
            return PowerLog(float(obj["gamma"]), float(obj["delta"]))
        if kind == "char":
            return Char(float(obj["a"]))
        if kind == "steps":
            return ExplicitSteps(tuple(map(float, obj["breaks"])), tuple(map(float, obj["values"])))
        if kind == "samples":
            rows = []
            with open(obj["path"], "r") as fh:
                header = fh.readline().strip().split(",")
                if header[:2] != ["value", "weight"]:
                    raise ConfigError("sample CSV must have header value,weight")
                for line in fh:
                    if line.strip():
                        v, w = line.strip().split(",")
                        rows.append((float(v), float(w)))
            return Samples(tuple(rows))
    except (KeyError, ValueError, OSError) as exc:
        raise ConfigError(f"bad function spec: {exc}") from exc
    raise ConfigError(f"unknown function kind {kind!r}")


def _num(x) -> float:
    if isinstance(x, str) and x.lower() in ("inf", "infinity"):
        return math.inf
    return float(x)


def parse_space(text: str) -> SpaceSpec:
    obj = _load_json(text)
    kind = obj.get("space")
    try:
        if kind == "lebesgue":
            return Lebesgue(_num(obj["p"]))
        if kind == "lorentz_zygmund":
            return LorentzZygmund(_num(obj["p"]), _num(obj["q"]), float(obj["alpha"]))
        if kind == "grand":
            return Grand(_num(obj["p"]), float(obj["alpha"]))
        if kind == "small":
            return Small(_num(obj["p"]), float(obj["alpha"]))
        if kind == "ggamma":
            return GammaDouble(
                _num(obj["p"]),
                _num(obj["m"]),
                LogWeight(float(obj["w1"]["a"]), float(obj["w1"]["b"])),
                LogWeight(float(obj["w2"]["a"]), float(obj["w2"]["b"])),
            )
    except ConfigError:
        raise
    except (KeyError, ValueError, TypeError, BadExponent) as exc:
        raise ConfigError(f"bad space spec: {exc}") from exc
    raise ConfigError(f"unknown space {kind!r}")


def parse_couple(text: str) -> CoupleSpec:
    obj = _load_json(text)
    kind = obj.get("couple")
    try:
        if kind == "lp_lq":
            return LpLq(_num(obj["p"]), _num(obj["q"]))
        if kind == "grand_lq":
            return GrandLq(_num(obj["p"]), _num(obj["q"]), float(obj["alpha"]))
        if kind == "grand_grand":
            return GrandGrand(_num(obj["p"]), _num(obj["q"]), float(obj["alpha"]))
        if kind == "small_small":
            return SmallSmall(_num(obj["p"]), _num(obj["q"]))
        if kind == "grand_small_same_p":
            return GrandSmallSameP(_num(obj["p"]))
        if kind == "general":
            return General(parse_space(json.dumps(obj["x0"])), parse_space(json.dumps(obj["x1"])))
    except ConfigError:
        raise
    except (KeyError, ValueError, TypeError, BadExponent) as exc:
        raise ConfigError(f"bad couple spec: {exc}") from exc
    raise ConfigError(f"unknown couple {kind!r}")


def _parse_kv(tokens) -> dict:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ConfigError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = _num(val)
    return out


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_norm(cfg: RunConfig) -> int:
    f = discretize_model(cfg.fn, cfg.res.u_max, cfg.res.panels)
    value = space_norm(f, cfg.space, cfg.res)
    print(json.dumps({"space": cfg.space.__class__.__name__.lower(), "value": value}))
    return 0


def cmd_kfunc(cfg: RunConfig) -> int:
    f = discretize_model(cfg.fn, cfg.res.u_max, cfg.res.panels)
    grid = UGrid(cfg.res.u_max, cfg.res.k_nodes)
    oracle = k_curve(f, cfg.couple, grid, "oracle", cfg.res)
    try:
        explicit = k_curve(f, cfg.couple, grid, "explicit", cfg.res)
        expl = explicit.k_values
    except RispacesError:
        expl = None
    lines = ["t,K_oracle,K_explicit,ratio"]
    for i, t in enumerate(oracle.t_nodes):
        ko = oracle.k_values[i]
        ke = expl[i] if expl is not None else None
        ratio = "" if ke in (None, 0.0) or ko == 0.0 else _fmt(ko / ke)
        lines.append(
            f"{_fmt(t)},{_fmt(ko)},{'' if ke is None else _fmt(ke)},{ratio}"
        )
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def cmd_interp(cfg: RunConfig) -> int:
    params = dict(cfg.params)
    family = harness.standard_family(
        q=params.get("q", params.get("p", 4.0)), seed=cfg.seed
    )
    members = family.members if cfg.fn is None else (("fn", cfg.fn),)
    lines = ["function_id,lhs,rhs,ratio"]
    for name, model in members:
        f = discretize_model(model, cfg.res.u_max, cfg.res.panels)
        lhs, rhs = identify_target(
            cfg.theorem,
            f,
            p=params.get("p"),
            q=params.get("q"),
            theta=params.get("theta"),
            r=params.get("r"),
            alpha=params.get("alpha"),
            res=cfg.res,
        )
        ratio = _fmt(lhs / rhs) if lhs > 0 and rhs > 0 else ""
        lines.append(f"{name},{_fmt(lhs)},{_fmt(rhs)},{ratio}")
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def cmd_experiment(cfg: RunConfig) -> int:
    name = cfg.theorem
    params = dict(cfg.params)
    if name in THEOREM_IDS:
        report = harness.run_identity_experiment(
            name, params, res=cfg.res, ceiling=cfg.ceiling, seed=cfg.seed
        )
    elif name.startswith("hardy:"):
        fam = harness.standard_family(seed=cfg.seed)
        report = harness.hardy_check(
            name.split(":", 1)[1], params, fam, cfg.res, cfg.ceiling, cfg.seed
        )
    elif name == "discretization":
        lam = params.get("lambda", params.get("lam", 1.0))
        q = params.get("q", 1.0)
        rng = np.random.default_rng(cfg.seed)
        reports = []
        for i in range(20):
            m = harness.random_steps(rng, nonincreasing=False)
            h = StepFunction(np.asarray(m.breaks), np.asarray(m.values))
            reports.append(harness.discretization_check(h, lam, q, cfg.res.rel_tol))
        report = reports[0]
        for other in reports[1:]:
            report.members.extend(other.members)
        report = report.finalize()
    else:
        raise ConfigError(f"unknown experiment {name!r}; see list-experiments")
    _write_text(cfg.out, report.to_json() + "\n")
    return 0 if report.passed else 3


def cmd_list_experiments(_cfg: RunConfig) -> int:
    for name, params in EXPERIMENT_CATALOG.items():
        print(f"{name:24s} {params}")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rispaces", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, fn=False, space=False, couple=False, theorem=False, kv=False):
        if fn:
            sp.add_argument("--fn", help="function spec JSON or @file")
        if space:
            sp.add_argument("--space", required=True, help="space spec JSON")
        if couple:
            sp.add_argument("--couple", required=True, help="couple spec JSON")
        if theorem:
            sp.add_argument("--theorem", help="experiment id (see list-experiments)")
        if kv:
            sp.add_argument("kv", nargs="*", help="key=value experiment parameters")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--u-max", type=float, default=DEFAULT.u_max)
        sp.add_argument("--panels", type=int, default=DEFAULT.panels)
        sp.add_argument("--k-nodes", type=int, default=DEFAULT.k_nodes)
        sp.add_argument("--sup-count", type=int, default=DEFAULT.sup_count)
        sp.add_argument("--ceiling", type=float, default=DEFAULT_CEILING)

    add_common(sub.add_parser("norm", help="evaluate a norm"), fn=True, space=True)
    add_common(sub.add_parser("kfunc", help="sample K curves"), fn=True, couple=True)
    sp = sub.add_parser("interp", help="identity over a family or one function")
    sp.add_argument("theorem", choices=THEOREM_IDS)
    add_common(sp, fn=True, kv=True)
    sp = sub.add_parser("experiment", help="run a ratio experiment")
    sp.add_argument("theorem")
    add_common(sp, kv=True)
    add_common(sub.add_parser("list-experiments", help="print the catalog"))
    return p


def _config_from_args(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("RISPACES_SEED", harness.DEFAULT_SEED))
    res = Resolution(
        u_max=args.u_max,
        panels=args.panels,
        sup_count=args.sup_count,
        k_nodes=args.k_nodes,
    )
    cfg = RunConfig(command=args.command, out=args.out, seed=seed, res=res, ceiling=args.ceiling)
    if getattr(args, "fn", None):
        cfg.fn = parse_fn(args.fn)
    if getattr(args, "space", None):
        cfg.space = parse_space(args.space)
    if getattr(args, "couple", None):
        cfg.couple = parse_couple(args.couple)
    if getattr(args, "theorem", None):
        cfg.theorem = args.theorem
    cfg.params = _parse_kv(getattr(args, "kv", []) or [])
    return cfg


_COMMANDS = {
    "norm": cmd_norm,
    "kfunc": cmd_kfunc,
    "interp": cmd_interp,
    "experiment": cmd_experiment,
    "list-experiments": cmd_list_experiments,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if cfg.command == "norm" and (cfg.fn is None or cfg.space is None):
            raise ConfigError("norm needs --fn and --space")
        if cfg.command == "kfunc" and (cfg.fn is None or cfg.couple is None):
            raise ConfigError("kfunc needs --fn and --couple")
        return _COMMANDS[cfg.command](cfg)
    except (ConfigError, HypothesisViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RispacesError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
