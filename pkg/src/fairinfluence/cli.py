"""Command-line surface: sweep, audit, train, pscf-demo.

All inputs arrive as flat key=value config files plus --out/--seed
flags. Exit codes: 0 success, 2 for config or parse problems, 3 for
numeric failures (non-PSD correlations, flat objectives, linear
algebra breakdowns).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .configio import kv_float, kv_float_list, kv_int, kv_list, kv_str, read_kv
from .data import load_dataset_csv, read_schema
from .errors import BackendError, ConfigError, FlatObjectiveError, NotPositiveSemiDefiniteError
from .influence import InfluenceMeasure
from .mixtures import mim
from .opt import OptConfig, opt_fit
from .scm import LinearSCM, mse_gap_check
from .serialize import save_model
from .sweep import METHODS, SweepSpec, run_audit, run_sweep
from .training import TrainConfig, evaluate, train_logistic

# theta defaults reproduce the delta = 0.442 worked example
_DEMO_THETA_M = "0,0.3,1.0"
_DEMO_THETA_L = "0,0.2,0.5,0.4"
_DEMO_THETA_Y = "0,0.5,0.5,1.0,0.7"
_DEMO_NOISE = "0.3,0.3,0.3"


def _fmt(v: float) -> str:
    return format(float(v), ".12g")


def _load_config(args) -> dict[str, str]:
    if getattr(args, "config", None) is None:
        return {}
    return read_kv(args.config)


def _cmd_sweep(args) -> int:
    kv = _load_config(args)
    seed = args.seed if args.seed is not None else kv_int(kv, "seed", 0)
    spec = SweepSpec(
        scenario=kv_str(kv, "scenario", "A"),
        r_grid=tuple(kv_float_list(kv, "r_grid", "0,0.4,0.8")),
        trials=kv_int(kv, "trials", 30),
        n_per_trial=kv_int(kv, "n_per_trial", 10000),
        methods=tuple(kv_list(kv, "methods", "trad_full,trad_wo_z,mim")),
        seed=seed,
        n_eval=kv_int(kv, "n_eval", 256),
        n_inner=kv_int(kv, "n_inner", 128),
        test_fraction=kv_float(kv, "test_fraction", 0.2),
        learning_rate=kv_float(kv, "learning_rate", 0.05),
        epochs=kv_int(kv, "epochs", 300),
        opt_epochs=kv_int(kv, "opt_epochs", 150),
        opt_mc_samples=kv_int(kv, "opt_mc_samples", 128),
        bootstrap_resamples=kv_int(kv, "bootstrap_resamples", 1000),
    )
    rows = run_sweep(spec, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_audit(args) -> int:
    kv = read_kv(args.config)
    influence_path, fairness_path = run_audit(
        kv_str(kv, "model"),
        kv_str(kv, "data"),
        kv_str(kv, "schema"),
        args.out,
    )
    print(f"wrote {influence_path}")
    print(f"wrote {fairness_path}")
    return 0


def _train_method(method: str, data, cfg: TrainConfig, kv: dict[str, str]):
    if method == "trad_full":
        return train_logistic(data, cfg)
    if method == "trad_wo_z":
        return train_logistic(data, cfg, mask=list(data.x_idx))
    reference = train_logistic(data, cfg)
    if method == "mim":
        return mim(reference, data)
    measure = InfluenceMeasure.MDE if method == "opt_mde" else InfluenceMeasure.SHAP
    opt_cfg = OptConfig(
        measure=measure,
        epochs=kv_int(kv, "opt_epochs", 150),
        mc_samples=kv_int(kv, "opt_mc_samples", 128),
        seed=cfg.seed,
        stage1=cfg,
    )
    return opt_fit(data, reference, opt_cfg).model


def _cmd_train(args) -> int:
    kv = read_kv(args.config)
    method = kv_str(kv, "method", "trad_full")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")
    schema = read_schema(kv_str(kv, "schema"))
    data = load_dataset_csv(kv_str(kv, "data"), schema)
    seed = args.seed if args.seed is not None else kv_int(kv, "seed", 0)
    cfg = TrainConfig(
        learning_rate=kv_float(kv, "learning_rate", 0.01),
        epochs=kv_int(kv, "epochs", 100),
        seed=seed,
    )
    model = _train_method(method, data, cfg, kv)
    save_model(model, args.out)
    result = evaluate(model, data)
    print(f"method={method}")
    print(f"n_rows={data.n_rows}")
    print(f"accuracy={_fmt(result.accuracy)}")
    print(f"cross_entropy={_fmt(result.cross_entropy)}")
    print(f"model={args.out}")
    return 0


def _cmd_pscf_demo(args) -> int:
    kv = _load_config(args)
    scm = LinearSCM(
        theta_m=tuple(kv_float_list(kv, "theta_m", _DEMO_THETA_M)),
        theta_l=tuple(kv_float_list(kv, "theta_l", _DEMO_THETA_L)),
        theta_y=tuple(kv_float_list(kv, "theta_y", _DEMO_THETA_Y)),
        noise_std=tuple(kv_float_list(kv, "noise_std", _DEMO_NOISE)),
        z_prob=kv_float(kv, "z_prob", 0.5),
    )
    seed = args.seed if args.seed is not None else kv_int(kv, "seed", 0)
    result = mse_gap_check(scm, n=kv_int(kv, "n", 100000), seed=seed)
    lines = [
        f"mse_pscf={_fmt(result.mse_pscf)}",
        f"mse_mim={_fmt(result.mse_mim)}",
        f"delta_sq={_fmt(result.delta_sq)}",
        f"residual={_fmt(result.residual)}",
    ]
    for line in lines:
        print(line)
    if args.out is not None:
        Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairinfluence",
        description="Influence-preserving fair models: sweeps, audits, training, PSCF demo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="scenario sweep over r with trial aggregation")
    p.add_argument("--config", help="key=value sweep spec")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("audit", help="influence + fairness reports for a saved model")
    p.add_argument("--config", required=True, help="key=value file with model=, data=, schema=")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_audit)

    p = sub.add_parser("train", help="train a model from a labeled CSV and save it")
    p.add_argument("--config", required=True, help="key=value file with method=, data=, schema=")
    p.add_argument("--out", required=True, help="model output path")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("pscf-demo", help="verify the MSE-gap identity on a simulated SCM")
    p.add_argument("--config", help="key=value SCM parameters")
    p.add_argument("--out", help="also write the key=value lines here")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=_cmd_pscf_demo)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (NotPositiveSemiDefiniteError, FlatObjectiveError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, BackendError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
