"""Command-line pipeline: generate, perturb, sweep, report, ingest.

Commands communicate through files so every intermediate artifact can be
inspected and reused.  Each command also writes ``<out>.manifest.json``
recording the tool version, the exact argv, and the fully resolved parameter
set; rerunning the same command (or the manifest's argv) reproduces every
output byte for byte.  Errors print one ``netscale: error: ...`` line on
stderr and exit nonzero.  The ``NETSCALE_WORKERS`` environment variable sets
the default process count for ``sweep --workers``.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .evaluate import sweep
from .generate import BarabasiAlbert, ErdosRenyi, GenParams, generate_sequence
from .graphs import GraphSequence
from .noise import NoiseParams, apply_noise
from .predictors import PredictorConfig, ScoreKind
from . import seqio

_SCORE_CHOICES = [k.value for k in ScoreKind]


@dataclasses.dataclass
class RunManifest:
    """Reproducibility record written alongside every command output."""

    command: str
    argv: list[str]
    parameters: dict
    inputs: dict
    outputs: dict
    tool: str = "netscale"
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_manifest(out_path: Path, manifest: RunManifest) -> None:
    _write_atomic(Path(str(out_path) + ".manifest.json"), manifest.to_json())


def _read_sequence(path: str) -> GraphSequence:
    with open(path, encoding="utf-8") as handle:
        return seqio.read_sequence(handle)


def _sequence_text(seq: GraphSequence) -> str:
    buf = io.StringIO()
    seqio.write_sequence(seq, buf)
    return buf.getvalue()


def _predictor_config(args: argparse.Namespace) -> PredictorConfig:
    return PredictorConfig(ScoreKind(args.score), beta=args.beta, alpha=args.alpha)


def _predictor_parameters(cfg: PredictorConfig) -> dict:
    return {
        "score": cfg.kind.value,
        "beta": cfg.beta,
        "alpha": cfg.alpha,
        "katz_tolerance": cfg.katz_tolerance,
        "pagerank_tolerance": cfg.pagerank_tolerance,
        "max_iterations": cfg.max_iterations,
    }


def _add_score_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--score", choices=_SCORE_CHOICES, default=ScoreKind.ADAMIC_ADAR.value,
                        help="similarity score (default: adamic-adar)")
    parser.add_argument("--beta", type=float, default=0.005,
                        help="walk decay for the katz score (default: 0.005)")
    parser.add_argument("--alpha", type=float, default=0.15,
                        help="restart probability for rooted-pagerank (default: 0.15)")


def cmd_generate(args: argparse.Namespace, argv: list[str]) -> None:
    if args.model == "er":
        if args.p is None:
            raise ValueError("--model er requires --p")
        model = ErdosRenyi(args.n, args.p)
    else:
        if args.m is None:
            raise ValueError("--model ba requires --m")
        model = BarabasiAlbert(args.n, args.m)
    cfg = _predictor_config(args)
    params = GenParams(model, cfg, delta=args.delta, steps=args.steps,
                       delete_low=args.delete_low, rng_seed=args.seed)
    seq = generate_sequence(params)
    out = Path(args.out)
    _write_atomic(out, _sequence_text(seq))
    model_params = {"model": args.model, "n": args.n}
    model_params |= {"p": args.p} if args.model == "er" else {"m": args.m}
    _write_manifest(out, RunManifest(
        command="generate",
        argv=argv,
        parameters=model_params | _predictor_parameters(cfg) | {
            "delta": args.delta,
            "steps": args.steps,
            "delete_low": args.delete_low,
            "seed": args.seed,
        },
        inputs={},
        outputs={"sequence": str(out)},
    ))


def cmd_perturb(args: argparse.Namespace, argv: list[str]) -> None:
    seq = _read_sequence(args.in_path)
    params = NoiseParams(mu=args.mu, sigma=args.sigma, rng_seed=args.seed,
                         output_length=args.length)
    noisy = apply_noise(seq, params)
    out = Path(args.out)
    _write_atomic(out, _sequence_text(noisy))
    _write_manifest(out, RunManifest(
        command="perturb",
        argv=argv,
        parameters={"mu": args.mu, "sigma": args.sigma, "seed": args.seed,
                    "output_length": params.resolved_output_length(len(seq))},
        inputs={"sequence": args.in_path},
        outputs={"sequence": str(out)},
    ))


def cmd_sweep(args: argparse.Namespace, argv: list[str]) -> None:
    seq = _read_sequence(args.in_path)
    cfg = _predictor_config(args)
    result = sweep(seq, cfg,
                   subsample_fraction=args.subsample_fraction,
                   subsample_threshold=args.subsample_threshold,
                   rng_seed=args.seed, workers=args.workers)
    buf = io.StringIO()
    seqio.write_sweep_csv(result, buf)
    out = Path(args.out)
    _write_atomic(out, buf.getvalue())
    _write_manifest(out, RunManifest(
        command="sweep",
        argv=argv,
        parameters=_predictor_parameters(cfg) | {
            "subsample_fraction": args.subsample_fraction,
            "subsample_threshold": args.subsample_threshold,
            "seed": args.seed,
        },
        inputs={"sequence": args.in_path},
        outputs={"csv": str(out)},
    ))


_SVG_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _render_svg(series: list[dict]) -> str:
    width, height, margin = 720, 440, 56
    xs = [p[0] for s in series for p in s["points"]]
    ys = [p[1] for s in series for p in s["points"]]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys + [0.0]), max(ys + [1.0])
    x_span = (x_hi - x_lo) or 1
    y_span = (y_hi - y_lo) or 1

    def sx(x: float) -> float:
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="14">window size</text>',
        f'<text x="16" y="{height / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 16 {height / 2:.1f})">mean MCC</text>',
        f'<text x="{margin}" y="{height - margin + 18}" text-anchor="middle" '
        f'font-size="12">{x_lo:g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 18}" text-anchor="middle" '
        f'font-size="12">{x_hi:g}</text>',
        f'<text x="{margin - 6}" y="{sy(y_lo):.1f}" text-anchor="end" '
        f'font-size="12">{y_lo:.2f}</text>',
        f'<text x="{margin - 6}" y="{sy(y_hi):.1f}" text-anchor="end" '
        f'font-size="12">{y_hi:.2f}</text>',
    ]
    for i, s in enumerate(series):
        color = _SVG_PALETTE[i % len(_SVG_PALETTE)]
        points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in s["points"])
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        parts.append(f'<text x="{width - margin - 4}" y="{margin + 16 * (i + 1)}" '
                     f'text-anchor="end" font-size="12" fill="{color}">{s["label"]}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_report(args: argparse.Namespace, argv: list[str]) -> None:
    series = []
    for csv_path in args.csvs:
        with open(csv_path, encoding="utf-8") as handle:
            result = seqio.read_sweep_csv(handle)
        series.append({
            "label": Path(csv_path).stem,
            "points": [[e.w, e.mean_mcc] for e in sorted(result.entries, key=lambda e: e.w)],
        })
    out = Path(args.out)
    _write_atomic(out, json.dumps({"series": series}, sort_keys=True, indent=2) + "\n")
    outputs = {"plot_data": str(out)}
    if args.svg:
        _write_atomic(Path(args.svg), _render_svg(series))
        outputs["svg"] = args.svg
    _write_manifest(out, RunManifest(
        command="report",
        argv=argv,
        parameters={},
        inputs={"csvs": list(args.csvs)},
        outputs=outputs,
    ))


def cmd_ingest(args: argparse.Namespace, argv: list[str]) -> None:
    with open(args.events, encoding="utf-8") as handle:
        events = seqio.parse_events(handle)
    seq, labels = seqio.bin_events(events, seqio.BinSpec(args.bin_width, args.origin))
    out = Path(args.out)
    _write_atomic(out, _sequence_text(seq))
    buf = io.StringIO()
    seqio.write_label_map(labels, buf)
    _write_atomic(Path(args.labels), buf.getvalue())
    _write_manifest(out, RunManifest(
        command="ingest",
        argv=argv,
        parameters={"bin_width": args.bin_width, "origin": args.origin},
        inputs={"events": args.events},
        outputs={"sequence": str(out), "labels": args.labels},
    ))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netscale",
        description="Recover the natural temporal scale of an oversampled "
                    "dynamic network via link-prediction window sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"netscale {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a ground-truth sequence")
    p.add_argument("--model", choices=["er", "ba"], required=True)
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--p", type=float, help="edge probability (er model)")
    p.add_argument("--m", type=int, help="attachments per node (ba model)")
    _add_score_flags(p)
    p.add_argument("--delta", type=int, default=50, help="edges added per step")
    p.add_argument("--steps", type=int, default=20, help="number of snapshots")
    p.add_argument("--delete-low", action="store_true",
                   help="also delete the delta lowest-scored edges each step")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output sequence file")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("perturb", help="apply oversampling noise to a sequence")
    p.add_argument("--in", dest="in_path", required=True, help="input sequence file")
    p.add_argument("--mu", type=int, required=True, help="oversampling rate")
    p.add_argument("--sigma", type=float, required=True, help="temporal spread")
    p.add_argument("--length", type=int, default=None,
                   help="output length (default: mu * input length)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output sequence file")
    p.set_defaults(handler=cmd_perturb)

    p = sub.add_parser("sweep", help="score every window size by link prediction")
    p.add_argument("--in", dest="in_path", required=True, help="input sequence file")
    _add_score_flags(p)
    p.add_argument("--subsample-fraction", type=float, default=0.10)
    p.add_argument("--subsample-threshold", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get("NETSCALE_WORKERS", "1")),
                   help="processes for window evaluation "
                        "(default: $NETSCALE_WORKERS or 1)")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("report", help="bundle sweep CSVs into plot data")
    p.add_argument("csvs", nargs="+", help="sweep CSV files")
    p.add_argument("--out", required=True, help="output plot-data JSON")
    p.add_argument("--svg", default=None, help="also render a static SVG chart")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("ingest", help="bin timestamped contact events into a sequence")
    p.add_argument("--events", required=True, help="contact-event file")
    p.add_argument("--bin-width", type=int, required=True, help="bin width in raw time units")
    p.add_argument("--origin", type=int, default=0, help="timestamp of bin 0")
    p.add_argument("--out", required=True, help="output sequence file")
    p.add_argument("--labels", required=True, help="output label-map file")
    p.set_defaults(handler=cmd_ingest)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args, argv)
    except (ValueError, OSError) as exc:
        print(f"netscale: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
