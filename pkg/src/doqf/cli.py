"""Command-line surface binding the library: gains, optimization, sweeps, DMT tables.

Subcommands
-----------
gain        print the closed-form outage gains (cut-set / decode-or-quantize / DF)
optimize    minimize the outage gain over the slot split and power budget
simulate    Monte Carlo outage sweep over SNR, written as CSV
dmt         analytic diversity-multiplexing curves (doqf / df / miso), CSV
dmt-verify  analytic DMT vs the exhaustive order-region grid search, CSV

Every parameter resolves as: command-line flag > config-file entry > default.
Config files are flat ``key = value`` lines with ``#`` comments; keys are the
flag names with underscores (``rate_bits``, ``snr_db``, ...).

Units at the boundary: rate in bits (converted once to nats), SNR in dB
(rho = 10^(dB/10)).  Geometry is ``d01,d12,d02``.  CSV floats carry 17
significant digits and files are written to a temp name then renamed, so a
crashed run never leaves a partial file behind.

Exit codes: 0 success, 2 invalid arguments or config, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from .allocator import ConvergenceError, minimize_outage_gain
from .channel import (
    RAYLEIGH,
    RICE,
    NetworkGeometry,
    density_at_zero,
    geometry_to_models,
    rice,
)
from .dmt import dmt_df_star, dmt_doqf_star, miso_bound
from .dmt_oracle import verification_rows
from .gain import ProtocolParams, _xi_df_terms, xi_cs_hd, xi_df
from .montecarlo import PROTOCOLS, SimConfig, snr_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

FLOAT_FORMAT = ".17g"


class UsageError(Exception):
    """Invalid command-line or config-file input; reported on one line, exit 2."""


# --------------------------------------------------------------------------
# value parsing (shared by flags and config entries, so both behave the same)

def _as_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"expected a finite number, got {text!r}")
    return value


def _as_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None


def _as_geometry(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"geometry must be d01,d12,d02 — got {text!r}")
    d01, d12, d02 = (_as_float(p) for p in parts)
    if min(d01, d12, d02) <= 0:
        raise UsageError("geometry distances must be positive")
    return d01, d12, d02


def _as_range(text: str) -> tuple[float, ...]:
    """Parse ``A:B:STEP`` into an inclusive grid, or a single value ``A``."""
    parts = text.split(":")
    if len(parts) == 1:
        return (_as_float(parts[0]),)
    if len(parts) != 3:
        raise UsageError(f"range must be A:B:STEP or a single value, got {text!r}")
    lo, hi, step = (_as_float(p) for p in parts)
    if step <= 0:
        raise UsageError("range step must be positive")
    if hi < lo:
        raise UsageError("range end must not precede its start")
    n = int(math.floor((hi - lo) / step + 1e-9))
    # Round to kill accumulated binary dust (0.1 + 0.2 style), keeping grid
    # values like 0.25 exact so downstream "exactly at the breakpoint" maths
    # sees the intended number.
    return tuple(round(lo + i * step, 12) for i in range(n + 1))


def _as_channel(text: str) -> str:
    kind = text.strip().lower()
    if kind not in (RAYLEIGH, RICE):
        raise UsageError(f"channel must be '{RAYLEIGH}' or '{RICE}', got {text!r}")
    return kind


def _as_protocol(text: str) -> str:
    name = text.strip().lower()
    if name != "all" and name not in PROTOCOLS:
        choices = ", ".join(PROTOCOLS + ("all",))
        raise UsageError(f"protocol must be one of {choices}; got {text!r}")
    return name


# keys accepted in a config file (flag names with underscores); unknown keys
# are rejected so a typo cannot silently fall back to a default
_CONFIG_KEYS = frozenset({
    "rate_bits", "t0", "beta0", "beta1", "alpha0", "alpha1",
    "geometry", "exponent", "channel", "rice_mean",
    "snr_db", "samples", "seed", "delta_exp", "protocol",
    "r_grid", "grid_step", "out",
})


def _load_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file with ``#`` comments; values stay raw strings."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    data: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        data[key] = value
    return data


class _Settings:
    """Resolved view over argparse values and config entries.

    All flags are declared with ``type=str`` and default ``None``, so a flag
    that was actually given is a string here; it then goes through the same
    converter as a config value, which keeps the two sources byte-for-byte
    equivalent in behavior.
    """

    def __init__(self, args: argparse.Namespace, config: dict[str, str]):
        self.command: str = args.command
        self._args = args
        self._config = config

    def get(self, key, convert, default=None):
        raw = getattr(self._args, key, None)
        if raw is None:
            raw = self._config.get(key)
        if raw is None:
            return default
        return convert(raw)


# --------------------------------------------------------------------------
# shared parameter assembly

def _resolve_amplitudes(s: _Settings, t0: float) -> tuple[float, float]:
    """Power parameters: raw amplitudes (alpha) or budget fractions (beta).

    The two parameterizations are mutually exclusive.  Betas are
    budget-normalized (beta0 = alpha0, beta1 = alpha1 * t1) and must satisfy
    beta0 + beta1 <= 1; raw alphas are taken as-is, which permits the
    classical all-amplitudes-one normalization that ignores the budget.
    """
    a0 = s.get("alpha0", _as_float)
    a1 = s.get("alpha1", _as_float)
    b0 = s.get("beta0", _as_float)
    b1 = s.get("beta1", _as_float)
    if (a0 is not None or a1 is not None) and (b0 is not None or b1 is not None):
        raise UsageError("give either alpha0/alpha1 or beta0/beta1, not a mix")
    if a0 is not None or a1 is not None:
        if a0 is None or a1 is None:
            raise UsageError("alpha0 and alpha1 must be given together")
        return a0, a1
    beta0 = 0.5 if b0 is None else b0
    beta1 = (1.0 - beta0) if b1 is None else b1
    if not 0.0 < beta0 < 1.0:
        raise UsageError(f"beta0 must lie in (0, 1), got {beta0!r}")
    if beta1 <= 0.0:
        raise UsageError(f"beta1 must be positive, got {beta1!r}")
    if beta0 + beta1 > 1.0 + 1e-12:
        raise UsageError(
            f"power budget violated: beta0 + beta1 = {beta0 + beta1!r} > 1")
    t1 = 1.0 - t0
    return beta0, beta1 / t1


def _resolve_params(s: _Settings) -> ProtocolParams:
    rate_bits = s.get("rate_bits", _as_float, 2.0)
    if rate_bits < 0:
        raise UsageError(f"rate_bits must be nonnegative, got {rate_bits!r}")
    t0 = s.get("t0", _as_float, 0.5)
    if not 0.0 < t0 < 1.0:
        raise UsageError(f"t0 must lie strictly inside (0, 1), got {t0!r}")
    alpha0, alpha1 = _resolve_amplitudes(s, t0)
    return ProtocolParams(t0=t0, alpha0=alpha0, alpha1=alpha1,
                          R=rate_bits * math.log(2.0))


def _resolve_models(s: _Settings):
    """(model01, model12, model02) from geometry + channel kind."""
    d01, d12, d02 = s.get("geometry", _as_geometry, (2.0 / 3.0, 1.0 / 3.0, 1.0))
    exponent = s.get("exponent", _as_float, 3.0)
    geom = NetworkGeometry(d01=d01, d12=d12, d02=d02, exponent=exponent)
    kind = s.get("channel", _as_channel, RAYLEIGH)
    if kind == RAYLEIGH:
        return geometry_to_models(geom)
    mean_mag = s.get("rice_mean", _as_float, 1.0)
    return (
        rice(mean_mag, geom.sigma2(geom.d01)),
        rice(mean_mag, geom.sigma2(geom.d12)),
        rice(mean_mag, geom.sigma2(geom.d02)),
    )


def _resolve_densities(s: _Settings) -> tuple[float, float, float]:
    m01, m12, m02 = _resolve_models(s)
    return density_at_zero(m01), density_at_zero(m02), density_at_zero(m12)


def _output_path(s: _Settings) -> str:
    default = s.command.replace("-", "_") + ".csv"
    return s.get("out", str, default)


# --------------------------------------------------------------------------
# CSV plumbing

def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean cells are not part of any table here")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def write_csv(path: str, header: tuple[str, ...], rows) -> None:
    """Write the table atomically: temp file in the same directory, then rename.

    A failure mid-write removes the temp file, so neither a partial table nor
    a stray temp ever survives the call.
    """
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format_cell(cell) for cell in row])
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    os.replace(tmp, path)


def read_csv(path: str) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    """Re-parse a CSV this tool emitted: (header, rows of string cells).

    Shape is validated (every row as wide as the header); cell conversion is
    left to the caller, which knows each column's type.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise UsageError(f"{path}: empty CSV") from None
        rows = [tuple(row) for row in reader]
    for i, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise UsageError(f"{path}:{i}: {len(row)} cells, header has {len(header)}")
    return header, rows


def _print_kv(name: str, value) -> None:
    print(f"{name} = {_format_cell(value)}")


# --------------------------------------------------------------------------
# subcommand handlers

def _cmd_gain(s: _Settings) -> int:
    params = _resolve_params(s)
    c01, c02, c12 = _resolve_densities(s)
    cs = xi_cs_hd(params, c01, c02, c12)
    df_miso, df_fallback = _xi_df_terms(params, c01, c02, c12)
    _print_kv("xi_cs_hd", cs.xi)
    _print_kv("  term_simo", cs.term_simo)
    _print_kv("  term_miso", cs.term_miso)
    # the decode-or-quantize protocol attains the cut-set gain, term by term
    _print_kv("xi_doqf", cs.xi)
    _print_kv("  term_simo", cs.term_simo)
    _print_kv("  term_miso", cs.term_miso)
    _print_kv("xi_df", xi_df(params, c01, c02, c12))
    _print_kv("  term_miso", df_miso)
    _print_kv("  term_fallback", df_fallback)
    return EXIT_OK


def _cmd_optimize(s: _Settings) -> int:
    rate_bits = s.get("rate_bits", _as_float, 2.0)
    if rate_bits < 0:
        raise UsageError(f"rate_bits must be nonnegative, got {rate_bits!r}")
    R = rate_bits * math.log(2.0)
    c01, c02, c12 = _resolve_densities(s)
    result = minimize_outage_gain(c01, c02, c12, R)
    _print_kv("t1_star", result.t1_star)
    _print_kv("t0_star", 1.0 - result.t1_star)
    _print_kv("beta0_star", result.beta0_star)
    _print_kv("beta1_star", result.beta1_star)
    _print_kv("xi_star", result.xi_star)
    _print_kv("grad_norm", result.grad_norm)
    _print_kv("iterations", result.iterations)
    return EXIT_OK


SIMULATE_HEADER = (
    "snr_db", "protocol", "n_samples", "p_hat", "ci_low", "ci_high",
    "rho2_p_hat", "xi_ref",
    "n_decode", "n_quantize_forward", "n_quantize_lost", "n_silent",
)


def _cmd_simulate(s: _Settings) -> int:
    params = _resolve_params(s)
    m01, m12, m02 = _resolve_models(s)
    snr_list = list(s.get("snr_db", _as_range, _as_range("10:40:5")))
    samples = s.get("samples", _as_int, 1_000_000)
    seed = s.get("seed", _as_int, 0)
    delta_exp = s.get("delta_exp", _as_float)  # None -> midpoint default
    protocol = s.get("protocol", _as_protocol, "all")
    cfg = SimConfig(params=params, model01=m01, model12=m12, model02=m02,
                    snr_rho=1.0, delta_exponent=delta_exp,
                    n_samples=samples, seed=seed)
    rows = []
    for name in (PROTOCOLS if protocol == "all" else (protocol,)):
        for point in snr_sweep(cfg, name, snr_list):
            est = point.estimate
            rows.append((point.snr_db, point.protocol, est.n_samples,
                         est.p_hat, est.ci_low, est.ci_high,
                         point.rho2_p_hat, point.xi_ref,
                         *est.branch_counts.as_tuple()))
    write_csv(_output_path(s), SIMULATE_HEADER, rows)
    return EXIT_OK


DMT_HEADER = ("r", "d_doqf", "d_df", "d_miso", "t0_star", "delta_star")


def _cmd_dmt(s: _Settings) -> int:
    r_grid = s.get("r_grid", _as_range, _as_range("0:1:0.01"))
    rows = []
    for r in r_grid:
        doqf = dmt_doqf_star(r)
        rows.append((r, doqf.d, dmt_df_star(r).d, miso_bound(r),
                     doqf.t0_star, doqf.delta_star))
    write_csv(_output_path(s), DMT_HEADER, rows)
    return EXIT_OK


DMT_VERIFY_HEADER = ("r", "d_analytic", "d_oracle", "abs_error",
                     "t0_star_analytic", "t0_best_oracle")


def _cmd_dmt_verify(s: _Settings) -> int:
    r_grid = s.get("r_grid", _as_range, _as_range("0.05:0.95:0.05"))
    grid_step = s.get("grid_step", _as_float, 0.005)
    if not 0.0 < grid_step <= 0.5:
        raise UsageError(f"grid_step must lie in (0, 0.5], got {grid_step!r}")
    n = int(round(1.0 / grid_step))
    t0_grid = np.arange(1, n) * grid_step        # (0, 1) exclusive
    delta_grid = np.arange(0, n + 1) * grid_step  # [0, 1] inclusive
    rows = verification_rows(r_grid, t0_grid, delta_grid)
    write_csv(_output_path(s), DMT_VERIFY_HEADER, rows)
    return EXIT_OK


_HANDLERS = {
    "gain": _cmd_gain,
    "optimize": _cmd_optimize,
    "simulate": _cmd_simulate,
    "dmt": _cmd_dmt,
    "dmt-verify": _cmd_dmt_verify,
}


# --------------------------------------------------------------------------
# parser

def _add_flags(sub: argparse.ArgumentParser, *names: str) -> None:
    """Declare string-typed flags; conversion happens at resolution time."""
    spec = {
        "rate-bits": "target rate in bits per channel use (default 2)",
        "t0": "listening-slot fraction t0 in (0,1) (default 0.5)",
        "beta0": "source power budget fraction (default 0.5)",
        "beta1": "relay power budget fraction (default 1 - beta0)",
        "alpha0": "raw source amplitude factor (needs alpha1; excludes betas)",
        "alpha1": "raw relay amplitude factor (needs alpha0; excludes betas)",
        "geometry": "link distances d01,d12,d02 (default 0.667,0.333,1.0)",
        "exponent": "path-loss exponent (default 3)",
        "channel": "fading kind: rayleigh | rice (default rayleigh)",
        "rice-mean": "LOS mean magnitude for rice links (default 1)",
        "snr-db": "SNR sweep in dB, A:B:STEP or one value (default 10:40:5)",
        "samples": "Monte Carlo draws per point (default 1000000)",
        "seed": "RNG seed (default 0)",
        "delta-exp": "distortion exponent in (0, t1/t0) (default midpoint)",
        "protocol": "doqf | df | cutset | all (default all)",
        "r-grid": "multiplexing-rate grid, A:B:STEP (defaults per command)",
        "grid-step": "order-region grid step for dmt-verify (default 0.005)",
        "out": "output CSV path (default <command>.csv)",
    }
    for name in names:
        sub.add_argument(f"--{name}", type=str, default=None, help=spec[name])
    sub.add_argument("--config", type=str, default=None,
                     help="flat key=value config file (# comments allowed)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doqf",
        description="Half-duplex decode-or-quantize relaying: outage gains, "
                    "power/slot optimization, Monte Carlo sweeps, and "
                    "diversity-multiplexing curves.")
    subs = parser.add_subparsers(dest="command", required=True)

    gain = subs.add_parser("gain", help="print closed-form outage gains")
    _add_flags(gain, "rate-bits", "t0", "beta0", "beta1", "alpha0", "alpha1",
               "geometry", "exponent", "channel", "rice-mean")

    opt = subs.add_parser("optimize", help="minimize the outage gain")
    _add_flags(opt, "rate-bits", "geometry", "exponent", "channel", "rice-mean")

    sim = subs.add_parser("simulate", help="Monte Carlo outage sweep to CSV")
    _add_flags(sim, "rate-bits", "t0", "beta0", "beta1", "alpha0", "alpha1",
               "geometry", "exponent", "channel", "rice-mean",
               "snr-db", "samples", "seed", "delta-exp", "protocol", "out")

    dmt = subs.add_parser("dmt", help="analytic DMT curves to CSV")
    _add_flags(dmt, "r-grid", "out")

    verify = subs.add_parser("dmt-verify", help="DMT analytic-vs-grid report")
    _add_flags(verify, "r-grid", "grid-step", "out")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its diagnostic
        return int(exc.code or 0)
    try:
        config = _load_config(args.config) if args.config else {}
        return _HANDLERS[args.command](_Settings(args, config))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # domain violations raised by the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
