"""Command-line front end: synth, add-noise, denoise, metrics.

Exit codes: 0 success, 2 usage or validation error, 3 I/O error, 4 numerical
abort inside the solver. Field formats are chosen by file extension (see
fieldio). The grid spacing is fixed at 1 on the command line; library users
can set any spacing through SplitParams.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .fieldio import read_field, write_field
from .fields import ScalarField, Scheme
from .metrics import NoiseSpec, add_gaussian_noise, lp_errors, psnr, ssim
from .pixelwise import InnerSolverParams
from .splitting import NonFiniteError, SplitParams, Status, run
from .synth import SYNTH_KINDS, synth

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

PRESETS = {
    "surface": {"alpha": 1.0, "beta": 0.1, "tau": 0.01},
    "image": {"alpha": 0.2, "beta": 0.6, "tau": 0.05},
    "developable": {"alpha": 5e-5, "beta": 1e3, "tau": 0.01},
}

# denoise settings that may come from defaults, preset, config file, or flags
_FLOAT_KEYS = ("alpha", "beta", "gamma", "tau", "tol", "epsilon", "rho1", "rho2", "xi1", "xi2")
_INT_KEYS = ("max_iter", "threads")
_STR_KEYS = ("p_solver", "init", "rhs_div")
_BOOL_KEYS = ("tv_baseline",)

_DEFAULTS = {
    "alpha": 0.2,
    "beta": 0.6,
    "gamma": 1.0,
    "tau": 0.05,
    "tol": 1e-5,
    "epsilon": 1.0,
    "rho1": 0.8,
    "rho2": 0.8,
    "xi1": 1e-5,
    "xi2": 1e-5,
    "max_iter": 5000,
    "threads": 1,
    "p_solver": "fixed",
    "init": "grad",
    "rhs_div": "backward",
    "tv_baseline": False,
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path, h: float = 1.0) -> ScalarField:
    try:
        return read_field(path, h)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise CliError(EXIT_IO, f"cannot parse {path}: {e}") from e


def _write(path, field: ScalarField, maxval: int = 255) -> None:
    try:
        write_field(path, field, maxval=maxval)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e}") from e
    except ValueError as e:
        raise CliError(EXIT_USAGE, str(e)) from e


def _parse_config_file(path) -> dict:
    """key=value lines; blank lines and '#' comments are skipped."""
    entries = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read config {path}: {e}") from e
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise CliError(EXIT_USAGE, f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _coerce_config(entries: dict) -> dict:
    out = {}
    for key, value in entries.items():
        try:
            if key in _FLOAT_KEYS:
                out[key] = float(value)
            elif key in _INT_KEYS:
                out[key] = int(value)
            elif key in _STR_KEYS or key == "preset":
                out[key] = value
            elif key in _BOOL_KEYS:
                if value.lower() in ("1", "true", "yes", "on"):
                    out[key] = True
                elif value.lower() in ("0", "false", "no", "off"):
                    out[key] = False
                else:
                    raise ValueError(f"not a boolean: {value!r}")
            else:
                raise ValueError("unknown key")
        except ValueError as e:
            raise CliError(EXIT_USAGE, f"config entry {key}={value!r}: {e}") from e
    return out


def _resolve_settings(args) -> dict:
    """defaults < preset < config file < explicit flags."""
    config = _coerce_config(_parse_config_file(args.config)) if args.config else {}
    preset = args.preset if args.preset is not None else config.get("preset")
    settings = dict(_DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise CliError(EXIT_USAGE, f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        settings.update(PRESETS[preset])
    settings.update({k: v for k, v in config.items() if k != "preset"})
    for key in (*_FLOAT_KEYS, *_INT_KEYS, *_STR_KEYS, *_BOOL_KEYS):
        flag = getattr(args, key)
        if flag is not None:
            settings[key] = flag
    if settings["threads"] < 1:
        raise CliError(EXIT_USAGE, f"--threads must be >= 1, got {settings['threads']}")
    return settings


def _split_params(settings: dict) -> SplitParams:
    try:
        inner = InnerSolverParams(
            rho1=settings["rho1"],
            rho2=settings["rho2"],
            xi1=settings["xi1"],
            xi2=settings["xi2"],
        )
        return SplitParams(
            alpha=settings["alpha"],
            beta=settings["beta"],
            gamma=settings["gamma"],
            tau=settings["tau"],
            eps=settings["epsilon"],
            tol=settings["tol"],
            max_outer=settings["max_iter"],
            inner=inner,
            p_solver={"fixed": "fixed", "newton": "newton"}[settings["p_solver"]],
            init_mode={"grad": "grad", "smooth": "smooth"}[settings["init"]],
            rhs_scheme={"backward": Scheme.BACKWARD, "forward": Scheme.FORWARD}[
                settings["rhs_div"]
            ],
            skip_gc=settings["tv_baseline"],
        )
    except (KeyError, ValueError) as e:
        raise CliError(EXIT_USAGE, f"invalid parameters: {e}") from e


def cmd_synth(args) -> int:
    geometry = {}
    for key in ("radius", "slope", "height", "edge"):
        if getattr(args, key) is not None:
            geometry[key] = getattr(args, key)
    for key in ("width", "gap", "levels"):
        if getattr(args, key) is not None:
            geometry[key] = getattr(args, key)
    m, n = args.size
    try:
        field = synth(args.kind, m, n, **geometry)
    except (ValueError, TypeError) as e:
        raise CliError(EXIT_USAGE, f"synth: {e}") from e
    _write(args.out, field, maxval=args.maxval)
    print(f"wrote {args.kind} field {m}x{n} to {args.out}")
    return EXIT_OK


def cmd_add_noise(args) -> int:
    field = _read(args.input)
    try:
        spec = NoiseSpec(sigma=args.sigma, seed=args.seed)
    except ValueError as e:
        raise CliError(EXIT_USAGE, str(e)) from e
    noisy = add_gaussian_noise(field, spec)
    _write(args.out, noisy, maxval=args.maxval)
    sample_std = float((noisy.data - field.data).std())
    print(f"wrote noisy field to {args.out} (variance {args.sigma}, seed {args.seed}, "
          f"sample std {sample_std:.6g})")
    return EXIT_OK


def _write_history(path, state) -> None:
    lines = ["n,energy,relative_error,p_inner_iters,H_inner_iters"]
    for k in range(state.n):
        p_it, h_it = state.inner_iters_history[k]
        lines.append(
            f"{k + 1},{state.energy_history[k]:.17g},{state.relerr_history[k]:.17g},{p_it},{h_it}"
        )
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write history {path}: {e}") from e


def _print_metrics(label: str, a: ScalarField, b: ScalarField, peak: float) -> None:
    err = lp_errors(a, b)
    print(f"{label}: PSNR {psnr(a, b, peak):.4g} dB, SSIM {ssim(a, b):.6g}, "
          f"L1 {err.l1:.6g}, L2 {err.l2:.6g}, Linf {err.linf:.6g}")


def cmd_denoise(args) -> int:
    settings = _resolve_settings(args)
    prm = _split_params(settings)
    noisy = _read(args.input)
    started = time.perf_counter()
    try:
        result = run(noisy, prm)
    except NonFiniteError as e:
        raise CliError(EXIT_NUMERIC, f"numerical abort: {e}") from e
    elapsed = time.perf_counter() - started
    _write(args.out, result.u_star, maxval=args.maxval)
    if args.history:
        _write_history(args.history, result.state)
    state = result.state
    print(f"status: {result.status.value}")
    print(f"iterations: {state.n}")
    print(f"wall time: {elapsed:.3f} s")
    print(f"final relative error: {state.relerr_history[-1]:.6g}")
    print(f"final energy: {state.energy_history[-1]:.10g}")
    if args.reference:
        ref = _read(args.reference)
        if ref.shape != noisy.shape:
            raise CliError(EXIT_USAGE,
                           f"reference shape {ref.shape} does not match input {noisy.shape}")
        _print_metrics("input vs reference", noisy, ref, args.peak)
        _print_metrics("output vs reference", result.u_star, ref, args.peak)
    return EXIT_OK


def cmd_metrics(args) -> int:
    a = _read(args.a)
    b = _read(args.b)
    if a.shape != b.shape:
        raise CliError(EXIT_USAGE, f"shape mismatch: {a.shape} vs {b.shape}")
    _print_metrics("a vs b", a, b, args.peak)
    return EXIT_OK


def _add_output_flags(sub, with_maxval: bool = True):
    sub.add_argument("--out", required=True, help="output field path (.csv/.f64raw/.pgm)")
    if with_maxval:
        sub.add_argument("--maxval", type=int, default=255, choices=(255, 65535),
                         help="quantization level for .pgm outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gctv",
        description="Curvature + total-variation smoothing of images and surface height maps.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("synth", help="generate an analytic test field")
    s.add_argument("kind", choices=sorted(SYNTH_KINDS))
    s.add_argument("--size", type=int, nargs=2, metavar=("M", "N"), required=True)
    s.add_argument("--radius", type=float)
    s.add_argument("--slope", type=float)
    s.add_argument("--height", type=float)
    s.add_argument("--edge", type=float)
    s.add_argument("--width", type=int)
    s.add_argument("--gap", type=int)
    s.add_argument("--levels", type=int)
    _add_output_flags(s)
    s.set_defaults(func=cmd_synth)

    s = subs.add_parser("add-noise", help="add seeded Gaussian noise to a field")
    s.add_argument("input", help="input field path")
    s.add_argument("--sigma", type=float, required=True, help="noise variance")
    s.add_argument("--seed", type=int, default=0)
    _add_output_flags(s)
    s.set_defaults(func=cmd_add_noise)

    s = subs.add_parser("denoise", help="run the splitting solver on a field")
    s.add_argument("input", help="input field path")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--config", help="key=value settings file (flags override it)")
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--tau", type=float)
    s.add_argument("--tol", type=float)
    s.add_argument("--max-iter", type=int, dest="max_iter")
    s.add_argument("--rho1", type=float)
    s.add_argument("--rho2", type=float)
    s.add_argument("--xi1", type=float)
    s.add_argument("--xi2", type=float)
    s.add_argument("--epsilon", type=float, help="init smoothing weight (with --init smooth)")
    s.add_argument("--p-solver", choices=("fixed", "newton"), dest="p_solver")
    s.add_argument("--init", choices=("grad", "smooth"))
    s.add_argument("--rhs-div", choices=("backward", "forward"), dest="rhs_div")
    s.add_argument("--tv-baseline", action=argparse.BooleanOptionalAction, dest="tv_baseline",
                   help="drop the curvature step (TV-L2 baseline)")
    s.add_argument("--threads", type=int,
                   help="reserved; computation is vectorized and deterministic")
    s.add_argument("--history", help="write per-iteration CSV here")
    s.add_argument("--reference", help="clean field for quality metrics")
    s.add_argument("--peak", type=float, default=1.0, help="PSNR/SSIM dynamic range")
    _add_output_flags(s)
    s.set_defaults(func=cmd_denoise)

    s = subs.add_parser("metrics", help="compare two fields")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--peak", type=float, default=1.0)
    s.set_defaults(func=cmd_metrics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as e:
        print(f"gctv: {e}", file=sys.stderr)
        return e.code


def main_entry() -> None:
    sys.exit(main())
