"""Command-line surface.

Subcommands: eval (one sample row), sample (a grid of rows over two
periods), verify (the full invariant suite), period (oscillator period),
spectrum (Fourier coefficients of Ics or of the integrated oscillator),
extract (phase coefficients recovered from the integrated oscillator), and
fig1/fig2 (phase and waveform figures as CSV or standalone SVG).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from .fourier import analyze, odd_harmonic_defect
from .functions import imani_derivatives, imani_eval, residual
from .leah import (
    IntegrationError,
    NotASolutionError,
    OscState,
    UndersampledError,
    extract_phase,
    generalized_flow,
    integrate_leah,
    leah_period,
    leah_period_result,
    trajectory_from_samples,
)
from .phase import ImaniParams, check_phase_laws, phase_eval
from .quadrature import QuadratureError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

CSV_HEADER = "t,psi,ics,isn,dics,disn,residual"

_TWO_PI = float(2.0 * np.pi)


@dataclass
class RunConfig:
    """Resolved options for one command invocation."""

    command: str
    period: float = _TWO_PI
    coeffs: tuple = ()
    grid: int = 1000
    t: float = 0.0
    out_path: str | None = None
    fmt: str = "csv"
    harmonics: int = 16
    tol: float = 1e-10
    use_leah: bool = False

    def validate(self):
        if not self.period > 0:
            raise ValueError("--T must be positive")
        if self.grid < 2:
            raise ValueError("--grid must be at least 2")
        if self.fmt not in ("csv", "svg"):
            raise ValueError("--format must be csv or svg")
        if self.harmonics < 1:
            raise ValueError("--K must be at least 1")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _sample_rows(params: ImaniParams, ts: np.ndarray) -> str:
    pv = phase_eval(params, ts)
    pair = imani_eval(params, ts)
    dics, disn = imani_derivatives(params, ts)
    res = residual(params, ts)
    lines = [CSV_HEADER]
    for i in range(ts.size):
        lines.append(",".join(_fmt(v) for v in (
            ts[i], pv.psi[i], pair.ics[i], pair.isn[i], dics[i], disn[i], res[i],
        )))
    return "\n".join(lines) + "\n"


def _svg_line_plot(xs: np.ndarray, ys: np.ndarray, xlabel: str, ylabel: str) -> str:
    """Minimal standalone SVG: one polyline, two axes, five ticks per axis."""
    W, H = 720, 460
    ml, mr, mt, mb = 72, 24, 24, 52
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    if xmax == xmin:
        xmax = xmin + 1.0
    if ymax == ymin:
        ymax = ymin + 1.0

    def px(x):
        return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr)

    def py(y):
        return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{ml}" y1="{H - mb}" x2="{W - mr}" y2="{H - mb}" '
        f'stroke="black" stroke-width="1"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{H - mb}" '
        f'stroke="black" stroke-width="1"/>',
    ]
    for v in np.linspace(xmin, xmax, 5):
        x = px(v)
        parts.append(f'<line x1="{x:.2f}" y1="{H - mb}" x2="{x:.2f}" '
                     f'y2="{H - mb + 6}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{x:.2f}" y="{H - mb + 22}" font-size="13" '
                     f'text-anchor="middle">{v:.4g}</text>')
    for v in np.linspace(ymin, ymax, 5):
        y = py(v)
        parts.append(f'<line x1="{ml - 6}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" '
                     f'stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{ml - 10}" y="{y + 4:.2f}" font-size="13" '
                     f'text-anchor="end">{v:.4g}</text>')
    parts.append(f'<text x="{(ml + W - mr) / 2:.2f}" y="{H - 10}" font-size="14" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="18" y="{(mt + H - mb) / 2:.2f}" font-size="14" '
                 f'text-anchor="middle" transform="rotate(-90 18 {(mt + H - mb) / 2:.2f})">'
                 f'{ylabel}</text>')
    points = " ".join(f"{px(a):.3f},{py(b):.3f}" for a, b in zip(xs, ys))
    parts.append(f'<polyline points="{points}" fill="none" stroke="#1f77b4" '
                 f'stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cmd_eval(cfg: RunConfig) -> int:
    params = ImaniParams(cfg.period, cfg.coeffs)
    text = _sample_rows(params, np.array([float(cfg.t)]))
    _emit(text, cfg.out_path)
    return EXIT_OK


def _cmd_sample(cfg: RunConfig) -> int:
    params = ImaniParams(cfg.period, cfg.coeffs)
    ts = np.linspace(0.0, 2.0 * params.period, cfg.grid + 1)
    _emit(_sample_rows(params, ts), cfg.out_path)
    return EXIT_OK


def _cmd_period(cfg: RunConfig) -> int:
    q = leah_period_result()
    sys.stdout.write(f"{_fmt(q.value)} error_estimate={q.error_estimate:.3g}\n")
    return EXIT_OK


def _cmd_spectrum(cfg: RunConfig) -> int:
    K = cfg.harmonics
    if cfg.use_leah:
        T = leah_period()
        traj = integrate_leah(OscState(1.0, 0.0), T, cfg.tol)
        dense = traj.dense

        def f(u: float) -> float:
            return float(dense(u)[0])
    else:
        params = ImaniParams(cfg.period, cfg.coeffs)
        T = params.period

        def f(u: float) -> float:
            return imani_eval(params, u).ics

    spec = analyze(f, T, K)
    lines = ["k,cos,sin"]
    for k in range(K + 1):
        lines.append(f"{k},{_fmt(spec.cos_coeffs[k])},{_fmt(spec.sin_coeffs[k])}")
    lines.append(f"# tail_energy = {_fmt(spec.tail_energy)}")
    _emit("\n".join(lines) + "\n", cfg.out_path)
    return EXIT_OK


def _cmd_extract(cfg: RunConfig) -> int:
    T = leah_period()
    traj = integrate_leah(OscState(1.0, 0.0), T, cfg.tol, samples=cfg.grid)
    params, fit = extract_phase(traj, T, cfg.harmonics)
    lines = ["k,a_k"]
    for k, a in enumerate(params.coeffs, start=1):
        lines.append(f"{k},{_fmt(a)}")
    lines.append(f"# fit_residual = {_fmt(fit)}")
    _emit("\n".join(lines) + "\n", cfg.out_path)
    return EXIT_OK


def _fig_table(cfg: RunConfig, column: str) -> tuple[np.ndarray, np.ndarray]:
    params = ImaniParams(cfg.period, cfg.coeffs)
    ts = np.linspace(0.0, 2.0 * params.period, cfg.grid + 1)
    if column == "psi":
        return ts, phase_eval(params, ts).psi
    return ts, imani_eval(params, ts).ics


def _cmd_fig(cfg: RunConfig, column: str, ylabel: str) -> int:
    ts, vals = _fig_table(cfg, column)
    if cfg.fmt == "svg":
        _emit(_svg_line_plot(ts, vals, "t", ylabel), cfg.out_path)
    else:
        lines = [f"t,{column}"]
        lines.extend(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(ts, vals))
        _emit("\n".join(lines) + "\n", cfg.out_path)
    return EXIT_OK


_FLOW_GAUGES = (
    ("1", lambda x, y: 1.0),
    ("2", lambda x, y: 2.0),
    ("1+x^2", lambda x, y: 1.0 + x * x),
    ("1/(1+y^2)", lambda x, y: 1.0 / (1.0 + y * y)),
)


def _cmd_verify(cfg: RunConfig) -> int:
    params = ImaniParams(cfg.period, cfg.coeffs)
    T = params.period
    rng = np.random.default_rng(20260809)
    results = []

    def record(name: str, value: float, threshold: float):
        results.append((name, float(value), float(threshold)))

    tg = np.linspace(0.0, T, 10001)
    record("functional-equation residual", np.abs(residual(params, tg)).max(), 1e-12)

    tr = rng.uniform(0.0, 3.0 * T, 1000)
    plus = imani_eval(params, tr)
    minus = imani_eval(params, -tr)
    parity = max(np.abs(plus.ics - minus.ics).max(), np.abs(plus.isn + minus.isn).max())
    record("parity (Ics even, Isn odd)", parity, 1e-12)

    shifted = imani_eval(params, tr + T)
    wind = phase_eval(params, tr + T).psi - phase_eval(params, tr).psi - _TWO_PI
    periodicity = max(np.abs(shifted.ics - plus.ics).max(),
                      np.abs(shifted.isn - plus.isn).max(),
                      np.abs(wind).max())
    record("periodicity and phase winding", periodicity, 1e-10)

    record("phase laws (oddness, winding)", check_phase_laws(params, 1001), 1e-12)

    td = rng.uniform(0.0, T, 1000)
    dics, disn = imani_derivatives(params, td)
    h = 1e-6
    hi = imani_eval(params, td + h)
    lo = imani_eval(params, td - h)
    dev = np.maximum(np.abs(dics - (hi.ics - lo.ics) / (2 * h)),
                     np.abs(disn - (hi.isn - lo.isn) / (2 * h)))
    near_branch = np.abs(np.cos(phase_eval(params, td).psi)) <= 1e-3
    main_dev = dev[~near_branch].max() if (~near_branch).any() else 0.0
    band_dev = dev[near_branch].max() if near_branch.any() else 0.0
    record("derivative consistency (away from branch)", main_dev, 1e-5)
    record("derivative consistency (near branch)", band_dev, 1e-3)

    T_leah = leah_period()
    traj = integrate_leah(OscState(1.0, 0.0), 10.0 * T_leah, 1e-10)
    record("energy conservation over 10 periods", traj.energy_drift(), 1e-8)
    flow_drift = max(
        generalized_flow(phi, OscState(1.0, 0.0), T_leah, 1e-10).energy_drift()
        for _, phi in _FLOW_GAUGES
    )
    record("energy conservation of scaled flows", flow_drift, 1e-7)

    one = integrate_leah(OscState(1.0, 0.0), T_leah, 1e-10)
    spec = analyze(lambda u: float(one.dense(u)[0]), T_leah, 12, 4096)
    rel_defect = odd_harmonic_defect(spec) / np.abs(spec.cos_coeffs).max()
    record("odd-harmonic structure of the oscillator", rel_defect, 1e-6)

    K = max(len(params.coeffs), 1)
    ts = np.linspace(0.0, T, 2049)
    pair = imani_eval(params, ts)
    synthetic = trajectory_from_samples(ts, pair.ics, pair.isn)
    try:
        fitted, _ = extract_phase(synthetic, T, K)
        target = np.zeros(K)
        target[: len(params.coeffs)] = params.coeffs
        rt = np.abs(np.asarray(fitted.coeffs) - target).max()
    except (UndersampledError, NotASolutionError):
        rt = float("inf")
    record("phase round trip", rt, 1e-8)

    ok_all = True
    for name, value, threshold in results:
        ok = value <= threshold
        ok_all = ok_all and ok
        sys.stdout.write(
            f"{'PASS' if ok else 'FAIL'}  {name}: max violation {value:.3e} "
            f"(tolerance {threshold:g})\n"
        )
    sys.stdout.write("verify: all checks passed\n" if ok_all
                     else "verify: some checks FAILED\n")
    return EXIT_OK if ok_all else EXIT_CHECK_FAILED


def run(config: RunConfig) -> int:
    """Execute one command. Raises on numerical failure; see main()."""
    config.validate()
    if config.command == "eval":
        return _cmd_eval(config)
    if config.command == "sample":
        return _cmd_sample(config)
    if config.command == "verify":
        return _cmd_verify(config)
    if config.command == "period":
        return _cmd_period(config)
    if config.command == "spectrum":
        return _cmd_spectrum(config)
    if config.command == "extract":
        return _cmd_extract(config)
    if config.command == "fig1":
        return _cmd_fig(config, "psi", "psi(t)")
    if config.command == "fig2":
        return _cmd_fig(config, "x", "x(t)")
    raise ValueError(f"unknown command {config.command!r}")


def _parse_coeffs(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated list of numbers, got {text!r}"
        )


def _add_phase_flags(sub, default_coeffs=()):
    sub.add_argument("--T", dest="period", type=float, default=_TWO_PI,
                     help="period of the phase (default 2*pi)")
    sub.add_argument("--coeffs", dest="coeffs", type=_parse_coeffs,
                     default=tuple(default_coeffs),
                     help="comma-separated sine coefficients a_1,a_2,... "
                          "(default %(default)s)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imani",
        description="Evaluate the Imani periodic functions, verify their "
                    "invariants, and analyze the Leah oscillator.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("eval", help="print one CSV row at a given time")
    _add_phase_flags(p)
    p.add_argument("--t", dest="t", type=float, default=0.0, help="time point")
    p.add_argument("--out", dest="out_path", default=None, help="output file")

    p = subs.add_parser("sample", help="write CSV rows over [0, 2T]")
    _add_phase_flags(p)
    p.add_argument("--grid", dest="grid", type=int, default=1000,
                   help="number of grid intervals (grid+1 rows)")
    p.add_argument("--out", dest="out_path", default=None, help="output file")

    p = subs.add_parser("verify", help="run the invariant suite")
    _add_phase_flags(p)

    subs.add_parser("period", help="print the oscillator period and its error estimate")

    p = subs.add_parser("spectrum", help="write the cosine/sine spectrum as CSV")
    _add_phase_flags(p)
    p.add_argument("--K", dest="harmonics", type=int, default=16,
                   help="highest harmonic (default 16)")
    p.add_argument("--leah", dest="use_leah", action="store_true",
                   help="analyze the integrated oscillator instead of Ics "
                        "(ignores --T/--coeffs)")
    p.add_argument("--tol", dest="tol", type=float, default=1e-10,
                   help="integration tolerance for --leah")
    p.add_argument("--out", dest="out_path", default=None, help="output file")

    p = subs.add_parser("extract",
                        help="integrate the oscillator and extract phase coefficients")
    p.add_argument("--K", dest="harmonics", type=int, default=16,
                   help="series truncation (default 16)")
    p.add_argument("--grid", dest="grid", type=int, default=4096,
                   help="number of sample intervals over one period")
    p.add_argument("--tol", dest="tol", type=float, default=1e-10,
                   help="integration tolerance")
    p.add_argument("--out", dest="out_path", default=None, help="output file")

    for name, help_text in (("fig1", "phase figure: psi(t) over two periods"),
                            ("fig2", "waveform figure: x(t) over two periods")):
        p = subs.add_parser(name, help=help_text)
        _add_phase_flags(p, default_coeffs=(0.5,))
        p.add_argument("--grid", dest="grid", type=int, default=1000,
                       help="number of grid intervals (grid+1 rows)")
        p.add_argument("--format", dest="fmt", choices=("csv", "svg"),
                       default="csv", help="output format")
        p.add_argument("--out", dest="out_path", default=None, help="output file")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        period=getattr(args, "period", _TWO_PI),
        coeffs=tuple(getattr(args, "coeffs", ())),
        grid=getattr(args, "grid", 1000),
        t=getattr(args, "t", 0.0),
        out_path=getattr(args, "out_path", None),
        fmt=getattr(args, "fmt", "csv"),
        harmonics=getattr(args, "harmonics", 16),
        tol=getattr(args, "tol", 1e-10),
        use_leah=getattr(args, "use_leah", False),
    )
    try:
        return run(cfg)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (QuadratureError, IntegrationError, UndersampledError,
            NotASolutionError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
