"""Command-line entry point: ``sjmd decompose | synth | eval | plot``.

Exit codes: 0 success, 2 malformed input, 3 invalid flags, 4 unconverged
stage under ``--strict``. The default output directory is read from the
``SJMD_OUT_DIR`` environment variable (fallback ``sjmd_out``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .decompose import MaxItersExceeded, decompose_channelwise, decompose_multivariate
from .io import (
    Components,
    InputError,
    RunReport,
    channel_columns,
    mode_columns,
    read_components,
    read_csv,
    write_csv,
    write_decomposition,
)
from .metrics import ZeroVarianceError, correlation_coefficient, match_components, mse
from .signal import ConfigError, LengthMismatchError, MultichannelSignal, SolverConfig, \
    ValidationError, validate
from .synthetic import JumpSpec, three_channel_benchmark

EXIT_OK, EXIT_INPUT, EXIT_FLAGS, EXIT_UNCONVERGED = 0, 2, 3, 4
OUT_DIR_ENV = "SJMD_OUT_DIR"


class FlagError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for bad input here
    def error(self, message):
        raise FlagError(message)


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV) or "sjmd_out")


def _load_signal(path, sample_rate) -> MultichannelSignal:
    _, data = read_csv(path)
    try:
        return validate(MultichannelSignal(data, sample_rate))
    except ValidationError as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_decompose(args) -> int:
    try:
        config = SolverConfig(
            alpha_max=args.alpha_max, alpha_init=args.alpha_init, beta=args.beta,
            b_bar=args.bbar, tau=args.tau, eps=args.eps, eps_mode=args.eps_mode,
            max_inner_iters=args.max_iters, max_modes=args.max_modes,
            jump_enabled=not args.no_jump, stop_rule=args.stop_rule)
    except ConfigError as exc:
        raise FlagError(str(exc)) from exc
    if not args.sample_rate > 0:
        raise FlagError("--sample-rate must be positive")
    sig = _load_signal(args.input, args.sample_rate)

    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", MaxItersExceeded)
        if args.multivariate or sig.n_channels == 1:
            results = [decompose_multivariate(sig, config)]
        else:
            results = decompose_channelwise(sig, config)
    duration = time.perf_counter() - start

    out_dir = Path(args.out_dir) if args.out_dir else default_out_dir()
    write_decomposition(out_dir, results)
    report = RunReport.from_results(results, config, bool(args.multivariate), duration,
                                    __version__, seed=args.seed)
    report.save(out_dir / "report.json")

    for run in report.runs:
        freqs = ", ".join(f"{f:.4g}" for f in run["center_frequencies_hz"]) or "none"
        print(f"channels {run['channels']}: {len(run['energies'])} modes at [{freqs}] Hz")
    print(f"wrote {out_dir} in {duration:.2f} s")
    unconverged = any(not r.converged for r in results)
    if caught and unconverged:
        print("warning: some ADMM stages reached --max-iters before converging", file=sys.stderr)
    if args.strict and unconverged:
        return EXIT_UNCONVERGED
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.samples < 100:
        raise FlagError("--samples must be at least 100")
    if args.sigma < 0:
        raise FlagError("--sigma must be non-negative")
    try:
        spec = JumpSpec.parse(args.jump_spec) if args.jump_spec else None
    except ValueError as exc:
        raise FlagError(f"--jump-spec: {exc}") from exc
    sig, truth = three_channel_benchmark(args.samples, args.sigma, spec, args.seed)
    out = Path(args.out) if args.out else default_out_dir() / "synth.csv"
    t = np.arange(args.samples) / sig.sample_rate
    write_csv(out, {"time": t, **channel_columns(sig.data)})
    truth_path = out.with_name(out.stem + "_truth" + out.suffix)
    write_csv(truth_path, {**mode_columns(truth.oscillations),
                           **channel_columns(truth.jump, prefix="v_")})
    print(f"wrote {out} and {truth_path}")
    return EXIT_OK


def _check_lengths(a: Components, b: Components, name_a, name_b):
    if a.n_samples and b.n_samples and a.n_samples != b.n_samples:
        raise InputError(f"{name_a} has {a.n_samples} samples but {name_b} has {b.n_samples}")


def evaluate_components(extracted: Components, reference: Components) -> list[dict]:
    """Score extracted against reference components channel by channel.

    Returns one record per non-constant reference component with its name,
    CC and MSE (``None`` when no extracted component is available).
    """
    rows = []
    for c in reference.channels:
        refs = [(k, r) for k, r in enumerate(reference.modes.get(c, []), start=1) if np.ptp(r) > 0]
        cand = extracted.modes.get(c, [])
        if refs and cand and any(np.ptp(e) > 0 for e in cand):
            rep = match_components(cand, [r for _, r in refs])
            for (k, _), cc, err in zip(refs, rep.cc, rep.mse):
                rows.append({"component": f"u{k}_c{c}", "cc": cc, "mse": err})
        else:
            rows += [{"component": f"u{k}_c{c}", "cc": None, "mse": None} for k, _ in refs]
        ref_jump = reference.jump.get(c)
        if ref_jump is not None and np.ptp(ref_jump) > 0:
            got = extracted.jump.get(c)
            if got is None:
                rows.append({"component": f"v_c{c}", "cc": None, "mse": None})
                continue
            try:
                cc = correlation_coefficient(got, ref_jump)
            except ZeroVarianceError:
                cc = 0.0
            rows.append({"component": f"v_c{c}", "cc": cc, "mse": mse(got, ref_jump)})
    return rows


def _mean_std(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    return float(np.mean(vals)), float(np.std(vals))


def cmd_eval(args) -> int:
    refs = args.reference
    if len(refs) not in (1, len(args.extracted)):
        raise FlagError("give one --reference or one per extracted run")
    runs = []
    for i, path in enumerate(args.extracted):
        ref_path = refs[i] if len(refs) > 1 else refs[0]
        extracted, reference = read_components(path), read_components(ref_path)
        _check_lengths(extracted, reference, path, ref_path)
        rows = evaluate_components(extracted, reference)
        mode_cc = [r["cc"] or 0.0 for r in rows if r["component"].startswith("u")]
        all_cc = [r["cc"] or 0.0 for r in rows]
        runs.append({"extracted": str(path), "reference": str(ref_path), "components": rows,
                     "mean_cc_modes": _mean_std(mode_cc)[0], "mean_cc_all": _mean_std(all_cc)[0]})

    names = list(dict.fromkeys(r["component"] for run in runs for r in run["components"]))
    summary = {}
    for name in names:
        hits = [r for run in runs for r in run["components"] if r["component"] == name]
        cc_m, cc_s = _mean_std([r["cc"] for r in hits])
        mse_m, mse_s = _mean_std([r["mse"] for r in hits])
        summary[name] = {"cc_mean": cc_m, "cc_std": cc_s, "mse_mean": mse_m, "mse_std": mse_s}
    for key in ("mean_cc_modes", "mean_cc_all"):
        m, s = _mean_std([run[key] for run in runs])
        summary[key] = {"mean": m, "std": s}
    doc = {"runs": runs, "summary": summary}

    fmt = lambda x: "n/a" if x is None else f"{x:.4f}"
    for name in names:
        s = summary[name]
        print(f"{name:>8}  CC {fmt(s['cc_mean'])} ± {fmt(s['cc_std'])}   "
              f"MSE {fmt(s['mse_mean'])} ± {fmt(s['mse_std'])}")
    for key in ("mean_cc_modes", "mean_cc_all"):
        print(f"{key}: {fmt(summary[key]['mean'])} ± {fmt(summary[key]['std'])} "
              f"over {len(runs)} run(s)")

    out = Path(args.out) if args.out else default_out_dir() / "eval.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")
    return EXIT_OK


def build_figure(components: Components, input_data=None, reference: Components | None = None):
    """Grid of panels: rows are input (optional), modes, jump; columns are channels.

    Extracted traces are solid; matched reference traces are dashed.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    channels = components.channels
    if input_data is not None:
        channels = sorted(set(channels) | set(range(1, input_data.shape[0] + 1)))
    n_modes = max((len(components.modes.get(c, [])) for c in channels), default=0)
    has_jump = bool(components.jump)
    rows = (["input"] if input_data is not None else []) + \
        [f"u{k}" for k in range(1, n_modes + 1)] + (["jump"] if has_jump else [])
    fig, axes = plt.subplots(len(rows), len(channels), squeeze=False, sharex=True,
                             figsize=(4 * len(channels), 1.8 * len(rows)))
    for j, c in enumerate(channels):
        mine = components.modes.get(c, [])
        ref_for_mode = {}
        if reference is not None:
            refs = [r for r in reference.modes.get(c, []) if np.ptp(r) > 0]
            usable = [m for m in mine if np.ptp(m) > 0]
            if refs and usable:
                rep = match_components(mine, refs)
                ref_for_mode = {idx: refs[i] for i, idx in enumerate(rep.matching) if idx is not None}
        for i, row in enumerate(rows):
            ax = axes[i, j]
            if row == "input":
                ax.plot(input_data[c - 1], color="0.3", lw=0.8)
            elif row == "jump":
                if c in components.jump:
                    ax.plot(components.jump[c], color="C3", lw=1.0)
                if reference is not None and c in reference.jump:
                    ax.plot(reference.jump[c], color="k", ls="--", lw=0.8)
            else:
                k = int(row[1:]) - 1
                if k < len(mine):
                    ax.plot(mine[k], color=f"C{k % 10}", lw=1.0)
                    if k in ref_for_mode:
                        ax.plot(ref_for_mode[k], color="k", ls="--", lw=0.8)
            if j == 0:
                ax.set_ylabel(row)
            if i == 0:
                ax.set_title(f"channel {c}")
    axes[-1, 0].set_xlabel("sample")
    fig.tight_layout()
    return fig


def cmd_plot(args) -> int:
    components = read_components(args.components_dir)
    if not components.modes and not components.jump:
        raise InputError(f"{args.components_dir}: no components to plot")
    input_data = None
    if args.input:
        _, input_data = read_csv(args.input)
        if input_data.shape[1] != components.n_samples:
            raise InputError("input length differs from the components")
    reference = read_components(args.reference) if args.reference else None
    if reference is not None:
        _check_lengths(components, reference, args.components_dir, args.reference)
    fig = build_figure(components, input_data, reference)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    import matplotlib
    with matplotlib.rc_context({"svg.hashsalt": "sjmd"}):
        fig.savefig(out, format=out.suffix.lstrip(".") or "svg", metadata={"Date": None})
    import matplotlib.pyplot as plt
    plt.close(fig)
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    defaults = SolverConfig()
    p = _Parser(prog="sjmd", description="Successive jump and mode decomposition.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="decompose a CSV signal into modes, jump and residual")
    d.add_argument("input")
    d.add_argument("--alpha-max", type=float, default=defaults.alpha_max)
    d.add_argument("--alpha-init", type=float, default=defaults.alpha_init)
    d.add_argument("--beta", type=float, default=defaults.beta)
    d.add_argument("--bbar", type=float, default=defaults.b_bar, help="smallest jump height")
    d.add_argument("--tau", type=float, default=defaults.tau)
    d.add_argument("--eps", type=float, default=defaults.eps)
    d.add_argument("--eps-mode", type=float, default=defaults.eps_mode)
    d.add_argument("--max-modes", type=int, default=defaults.max_modes)
    d.add_argument("--max-iters", type=int, default=defaults.max_inner_iters)
    d.add_argument("--stop-rule", choices=("signed", "abs"), default=defaults.stop_rule)
    d.add_argument("--multivariate", action="store_true",
                   help="share centre frequencies across channels (default: per channel)")
    d.add_argument("--no-jump", action="store_true")
    d.add_argument("--seed", type=int, default=None,
                   help="recorded in the report; the solver itself is deterministic")
    d.add_argument("--sample-rate", type=float, default=1000.0)
    d.add_argument("--out-dir", default=None)
    d.add_argument("--strict", action="store_true", help="exit 4 if any stage did not converge")
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("synth", help="write the three-channel synthetic benchmark")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--sigma", type=float, default=0.1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jump-spec", default=None,
                   help='breakpoints "t:level,..." on [0, 1), optional "start=<level>;" prefix')
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("eval", help="score decompositions against ground truth")
    e.add_argument("extracted", nargs="+", help="decompose output directories")
    e.add_argument("--reference", nargs="+", required=True, help="ground-truth CSV(s)")
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    pl = sub.add_parser("plot", help="render components to a vector graphics file")
    pl.add_argument("components_dir")
    pl.add_argument("--out", required=True)
    pl.add_argument("--input", default=None)
    pl.add_argument("--reference", default=None)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except FlagError as exc:
        print(f"sjmd: invalid flags: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (InputError, LengthMismatchError, ZeroVarianceError) as exc:
        print(f"sjmd: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
