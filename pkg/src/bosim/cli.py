"""``bosim`` command-line interface."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import reproduce as repro
from .config import ExperimentConfig
from .distributions import (
    Distribution,
    distinguishable_distribution,
    lossy_both_distribution,
    similarity,
    tvd,
    uniform_distribution,
)
from .interferometer import haar_random, unitarity_residual
from .permanent import save_matrix
from .rates import RateParams, rate_table, write_rate_table
from .sampler import EventLog, sample
from .validation import lr_test, rne_test


def _ports(text: str) -> list[int]:
    return [int(t) for t in text.replace("{", "").replace("}", "").split(",") if t.strip()]


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_yaml(args.config) if args.config else ExperimentConfig()
    if args.m is not None:
        cfg.m = args.m
    if args.inputs is not None:
        cfg.inputs = _ports(args.inputs)
    if args.detect is not None:
        cfg.detect = args.detect
    if args.k_src is not None:
        cfg.k_src = args.k_src
    if args.k_det is not None:
        cfg.k_det = args.k_det
    if args.mode is not None:
        cfg.mode = args.mode
    if args.model is not None:
        cfg.model = args.model
    if args.unitary is not None:
        cfg.unitary_path = Path(args.unitary)
    if args.seed is not None:
        cfg.haar_seed = args.seed
    if args.loss is not None:
        cfg.loss = {"path": args.loss}
    if args.events is not None:
        cfg.events = args.events
    if args.sample_seed is not None:
        cfg.sample_seed = args.sample_seed
    if args.out is not None:
        cfg.out = Path(args.out)
    cfg.validate()
    return cfg


def _distribution(cfg: ExperimentConfig) -> Distribution:
    U, profile = cfg.unitary(), cfg.profile()
    if cfg.model == "uniform":
        return uniform_distribution(cfg.m, cfg.detect)
    if cfg.model == "distinguishable":
        dist = distinguishable_distribution(U, cfg.inputs, cfg.detect, profile)
    else:
        k_src, k_det = cfg.loss_split
        dist = lossy_both_distribution(U, cfg.inputs, cfg.detect, k_src, k_det, profile, cfg.mode)
    dist.meta["seed"] = None if cfg.unitary_path else cfg.haar_seed
    return dist


def cmd_gen_unitary(args) -> int:
    U = haar_random(args.m, args.seed)
    out = Path(args.out_path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    save_matrix(U, out)
    print(f"wrote {out} ({args.m}x{args.m}), unitarity residual {unitarity_residual(U):.3e}")
    return 0


def cmd_dist(args) -> int:
    cfg = _config(args)
    dist = _distribution(cfg)
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / "distribution.csv"
    dist.to_csv(path)
    print(f"wrote {path}: {len(dist)} patterns, total probability {dist.probs.sum():.15f}")
    return 0


def cmd_sample(args) -> int:
    cfg = _config(args)
    dist = _distribution(cfg)
    log = sample(dist, cfg.events, cfg.sample_seed)
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / "events.jsonl"
    log.to_jsonl(path)
    print(f"wrote {path}: {len(log)} events from a {log.source} sampler")
    return 0


def cmd_validate(args) -> int:
    cfg = _config(args)
    log = EventLog.from_jsonl(args.log)
    U, profile = cfg.unitary(), cfg.profile()
    if args.test == "lr":
        trace = lr_test(log, U, cfg.inputs, cfg.detect, profile, args.a1, args.a2)
    else:
        trace = rne_test(log, U, cfg.inputs, cfg.detect, profile)
    cfg.out.mkdir(parents=True, exist_ok=True)
    trace.to_csv(cfg.out / f"{args.test}_trace.csv")
    trace.write_summary(cfg.out / f"{args.test}_verdict.json")
    print(json.dumps(trace.summary()))
    return 0


def cmd_metrics(args) -> int:
    a, b = Distribution.from_csv(args.dist_a), Distribution.from_csv(args.dist_b)
    result = {"D": tvd(a, b), "F": similarity(a, b)}
    text = json.dumps(result, indent=2)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "metrics.json").write_text(text)
    print(text)
    return 0


def cmd_rates(args) -> int:
    params = RateParams(args.rep_rate, args.eta_source, args.eta_interf, args.eta_det, args.demux_duty)
    rows = rate_table(params, [args.n], range(0, args.k_max + 1))
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_rate_table(rows, out / "rates.csv")
    for n, k, factor, rate in rows:
        print(f"n={n} k={k} factor={factor} rate={rate:.4g} Hz")
    return 0


def cmd_reproduce(args) -> int:
    out = Path(args.out or f"reproduce_{args.figure}")
    summary = repro.reproduce(args.figure, out, args.seed or 0)
    print(json.dumps(summary, indent=2, sort_keys=True, default=str))
    return 0


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML experiment config")
    p.add_argument("--m", type=int)
    p.add_argument("--inputs", help="input ports, e.g. 1,2,3,4")
    p.add_argument("--detect", type=int)
    p.add_argument("--k-src", type=int)
    p.add_argument("--k-det", type=int)
    p.add_argument("--mode", choices=["physical", "paper_literal"])
    p.add_argument("--model", choices=["boson", "distinguishable", "uniform"])
    p.add_argument("--unitary", help="matrix JSON file (overrides the Haar seed)")
    p.add_argument("--seed", type=int, help="Haar seed for the unitary")
    p.add_argument("--loss", help="loss profile JSON file")
    p.add_argument("--events", type=int)
    p.add_argument("--sample-seed", type=int)
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bosim", description="Lossy boson sampling simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-unitary", help="write a Haar-random unitary")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", dest="out_path", required=True, help="output matrix JSON path")
    p.set_defaults(func=cmd_gen_unitary)

    for name, func, text in (
        ("dist", cmd_dist, "write the exact output distribution"),
        ("sample", cmd_sample, "write a sampled event log"),
        ("validate", cmd_validate, "run a validation test on an event log"),
    ):
        p = sub.add_parser(name, help=text)
        _experiment_flags(p)
        p.set_defaults(func=func)
        if name == "validate":
            p.add_argument("--log", required=True, help="event log (JSON Lines)")
            p.add_argument("--test", choices=["lr", "rne"], required=True)
            p.add_argument("--a1", type=float, default=0.9)
            p.add_argument("--a2", type=float, default=1.5)

    p = sub.add_parser("metrics", help="distance and similarity between two distribution CSVs")
    p.add_argument("dist_a")
    p.add_argument("dist_b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("rates", help="rate table under the binomial survival model")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--rep-rate", type=float, default=75.95e6)
    p.add_argument("--eta-source", type=float, default=0.8)
    p.add_argument("--eta-interf", type=float, default=0.9)
    p.add_argument("--eta-det", type=float, default=0.9)
    p.add_argument("--demux-duty", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("reproduce", help="regenerate the data for one figure")
    p.add_argument("figure", choices=repro.FIGURES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except repro.InvariantError as exc:
        print(f"bosim: invariant failed: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, IndexError) as exc:
        print(f"bosim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
