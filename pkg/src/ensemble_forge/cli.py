"""Command-line entry point for ensemble fusion runs.

Subcommands
-----------
optimize   fit fusion weights on a manifest; write weights.json,
           ga_history.csv, report_fit.json (+ report_holdout.json when an
           evaluation manifest is supplied)
evaluate   score a manifest under weights loaded from a weights.json
compare    per-member vs uniform-average vs optimized-fusion table
synth      generate a synthetic ensemble in the interchange formats

The seed is resolved as: ``--seed`` flag, else the ``ENSEMBLE_FORGE_SEED``
environment variable, else 42. Identical inputs and seed produce
byte-identical artifacts; no timestamps go into any payload.

Exit codes: 0 success, 2 I/O, 3 validation, 4 configuration.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import EnsembleInput
from .errors import ConfigError, EnsembleForgeError, InputError, ValidationError
from .fusion import EvaluationReport, WeightVector, evaluate_weights, validate_weights
from .ga import GAConfig, GAResult, ga_optimize, write_history_csv
from .io import load_ensemble, write_ensemble
from .synth import SynthSpec, generate, specialists_skill

DEFAULT_SEED = 42
SEED_ENV_VAR = "ENSEMBLE_FORGE_SEED"


@dataclass(frozen=True)
class RunConfig:
    manifest_path: Path
    output_dir: Path
    ga: GAConfig = field(default_factory=GAConfig)
    eval_manifest_path: Optional[Path] = None
    report_formats: frozenset[str] = frozenset({"json", "csv"})

    def __post_init__(self):
        if not self.report_formats <= {"json", "csv"}:
            raise ConfigError(
                f"report formats must be a subset of {{json, csv}}, got "
                f"{sorted(self.report_formats)}"
            )
        if self.eval_manifest_path is not None and (
            Path(self.eval_manifest_path).resolve() == Path(self.manifest_path).resolve()
        ):
            raise ConfigError("--manifest and --eval-manifest must be distinct files")


def resolve_seed(flag_value: Optional[int]) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _json_dump(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _write_confusion_csv(path: Path, report: EvaluationReport, ensemble: EnsembleInput) -> None:
    names = ensemble.labels.class_names
    if names is None:
        names = tuple(f"class_{c}" for c in range(ensemble.n_classes))
    lines = ["true_class," + ",".join(names)]
    for c, row in enumerate(report.confusion):
        lines.append(names[c] + "," + ",".join(str(int(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_report(
    out_dir: Path,
    stem: str,
    report: EvaluationReport,
    weights: WeightVector,
    ensemble: EnsembleInput,
    formats: frozenset[str],
) -> None:
    # Only the normalized weights are echoed: raw genes are non-canonical
    # (fusion is scale-invariant), and the report must not depend on which
    # representative the caller happened to pass.
    if "json" in formats:
        payload = report.to_dict()
        payload["normalized_weights"] = [float(w) for w in weights.normalized]
        payload["classifier_ids"] = list(ensemble.classifier_ids)
        _json_dump(out_dir / f"{stem}.json", payload)
    if "csv" in formats:
        _write_confusion_csv(out_dir / f"{stem}_confusion.csv", report, ensemble)


def _write_weights_json(path: Path, result: GAResult, ensemble: EnsembleInput) -> None:
    payload = {
        "classifier_ids": list(ensemble.classifier_ids),
        "genes": [float(g) for g in result.best_weights.genes],
        "normalized": [float(w) for w in result.best_weights.normalized],
        "best_mse": result.best_mse,
    }
    _json_dump(path, payload)


def _load_weights_file(path: Path) -> WeightVector:
    if not path.is_file():
        raise InputError(f"weights file not found: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(payload, dict):
        genes = payload.get("genes")
    else:
        genes = payload  # bare list is accepted too
    if not isinstance(genes, list):
        raise ValidationError(f"{path}: expected a 'genes' array")
    return validate_weights(genes)


def _ensure_out_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory is not writable: {path}")
    return path


def _ga_config_from_args(args) -> GAConfig:
    kwargs = {"rng_seed": resolve_seed(args.seed)}
    if args.generations is not None:
        kwargs["generations"] = args.generations
    if args.population is not None:
        kwargs["population_size"] = args.population
    return GAConfig(**kwargs)


def cmd_optimize(run: RunConfig) -> int:
    ensemble = load_ensemble(run.manifest_path)
    result = ga_optimize(ensemble, run.ga)
    out = _ensure_out_dir(run.output_dir)

    _write_weights_json(out / "weights.json", result, ensemble)
    write_history_csv(out / "ga_history.csv", result.history)
    report = evaluate_weights(ensemble, result.best_weights)
    _write_report(out, "report_fit", report, result.best_weights, ensemble, run.report_formats)

    if run.eval_manifest_path is not None:
        holdout = load_ensemble(run.eval_manifest_path)
        if holdout.n_members != ensemble.n_members:
            raise ValidationError(
                f"holdout manifest has {holdout.n_members} members, fit manifest "
                f"has {ensemble.n_members}"
            )
        holdout_report = evaluate_weights(holdout, result.best_weights)
        _write_report(
            out, "report_holdout", holdout_report, result.best_weights, holdout,
            run.report_formats,
        )
    return 0


def cmd_compare(run: RunConfig) -> int:
    ensemble = load_ensemble(run.manifest_path)
    n = ensemble.n_members

    rows = []
    for i, member in enumerate(ensemble.members):
        unit = validate_weights(np.eye(n)[i])
        rep = evaluate_weights(ensemble, unit)
        rows.append((member.classifier_id, rep.accuracy, rep.mse))

    uniform = validate_weights(np.ones(n))
    rep = evaluate_weights(ensemble, uniform)
    rows.append(("uniform_average", rep.accuracy, rep.mse))

    result = ga_optimize(ensemble, run.ga)
    rep = evaluate_weights(ensemble, result.best_weights)
    rows.append(("ga_ensemble", rep.accuracy, rep.mse))

    out = _ensure_out_dir(run.output_dir)
    lines = ["id,accuracy,mse"]
    lines.extend(f"{rid},{repr(acc)},{repr(err)}" for rid, acc, err in rows)
    (out / "comparison.csv").write_text("\n".join(lines) + "\n")
    return 0


def cmd_evaluate(
    weights_path: Path, manifest_path: Path, output_dir: Path, formats: frozenset[str]
) -> int:
    ensemble = load_ensemble(manifest_path)
    weights = _load_weights_file(weights_path)
    report = evaluate_weights(ensemble, weights)
    out = _ensure_out_dir(output_dir)
    _write_report(out, "report", report, weights, ensemble, formats)
    return 0


def cmd_synth(args) -> int:
    seed = resolve_seed(args.seed)
    if args.skill == "specialists":
        skill = specialists_skill(args.members, args.classes)
    else:
        try:
            skill = [[float(v) for v in row.split(",")] for row in args.skill.split(";")]
        except ValueError:
            raise ValidationError(
                f"--skill must be 'specialists' or rows like '0.9,0.1;0.1,0.9', "
                f"got {args.skill!r}"
            ) from None
    spec = SynthSpec(
        n_members=args.members,
        n_samples=args.samples,
        n_classes=args.classes,
        skill=np.asarray(skill, dtype=np.float64),
        concentration=args.concentration,
        rng_seed=seed,
    )
    ensemble = generate(spec)
    manifest = write_ensemble(ensemble, _ensure_out_dir(Path(args.out)))
    print(manifest)
    return 0


def _parse_formats(raw: str) -> frozenset[str]:
    parts = frozenset(p.strip() for p in raw.split(",") if p.strip())
    if not parts:
        raise ConfigError("--format needs at least one of: json, csv")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemble-forge",
        description="Fuse probabilistic classifiers with optimized soft-voting weights.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_eval=False):
        p.add_argument("--manifest", required=True, type=Path, help="ensemble manifest JSON")
        if with_eval:
            p.add_argument(
                "--eval-manifest", type=Path, default=None,
                help="held-out manifest scored with the fitted weights",
            )
        p.add_argument("--out", required=True, type=Path, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help=f"RNG seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})")
        p.add_argument("--generations", type=int, default=None)
        p.add_argument("--population", type=int, default=None)
        p.add_argument("--format", default="json,csv",
                       help="report formats, comma-separated subset of {json,csv}")

    p_opt = sub.add_parser("optimize", help="fit fusion weights")
    add_common(p_opt, with_eval=True)

    p_cmp = sub.add_parser("compare", help="members vs uniform vs optimized fusion")
    add_common(p_cmp)

    p_eval = sub.add_parser("evaluate", help="score a manifest under given weights")
    p_eval.add_argument("--weights", required=True, type=Path, help="weights.json path")
    p_eval.add_argument("--manifest", required=True, type=Path)
    p_eval.add_argument("--out", required=True, type=Path)
    p_eval.add_argument("--format", default="json,csv")

    p_syn = sub.add_parser("synth", help="generate a synthetic ensemble")
    p_syn.add_argument("--members", type=int, default=3)
    p_syn.add_argument("--samples", type=int, default=600)
    p_syn.add_argument("--classes", type=int, default=6)
    p_syn.add_argument("--skill", default="specialists",
                       help="'specialists' or rows like '0.9,0.1;0.1,0.9'")
    p_syn.add_argument("--concentration", type=float, default=8.0)
    p_syn.add_argument("--seed", type=int, default=None)
    p_syn.add_argument("--out", required=True, type=Path)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "evaluate":
            return cmd_evaluate(
                args.weights, args.manifest, args.out, _parse_formats(args.format)
            )
        run = RunConfig(
            manifest_path=args.manifest,
            output_dir=args.out,
            ga=_ga_config_from_args(args),
            eval_manifest_path=getattr(args, "eval_manifest", None),
            report_formats=_parse_formats(args.format),
        )
        if args.command == "optimize":
            return cmd_optimize(run)
        return cmd_compare(run)
    except EnsembleForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
