"""Command-line front end: verification suites with CSV/report output.

Subcommands
-----------
special : radial weight integrals, their scalings and identities
lemmas  : every inequality suite, one PASS/FAIL line per property
decay   : L2 decay exponents of the damped wave against theory
profile : distance to the mass profile, scaled by the predicted rate

Common flags: --dim, --t-min, --t-max, --t-points, --log-grid, --tol,
--out, --seed, --config.  A config file is a flat "key = value" text
document; precedence is CLI flag > config file > built-in default.
Every command is deterministic given (config, seed); CSV output starts
with comment lines carrying the resolved-config hash.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage/domain error.
LOGDAMP_THREADS caps worker threads for grid sweeps (default 1).
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import modes, norms, special, symbols
from .modes import InitialDataSpec

E_CHECK_FAILED = 1
E_USAGE = 2


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


# -- configuration -----------------------------------------------------------

_DEFAULTS = {
    "dim": "1,2,3",
    "t_min": None,       # command-specific
    "t_max": None,
    "t_points": None,
    "log_grid": True,
    "tol": None,
    "seed": 12345,
    "out": None,
    "samples": 1000,
    "i0_multiple": 1.0,
    "u0_family": "zero",
    "u0_amplitude": 1.0,
    "u0_width": 1.0,
    "u1_family": "gaussian",
    "u1_amplitude": 1.0,
    "u1_width": 1.0,
}

_COMMAND_DEFAULTS = {
    "special": {"t_min": 1.0, "t_max": 1000.0, "t_points": 4, "tol": 1e-10},
    "lemmas": {"t_min": 10.0, "t_max": 1e4, "t_points": 7, "tol": 1e-10},
    "decay": {"t_min": 1e2, "t_max": 1e5, "t_points": 20, "tol": 0.05},
    "profile": {"t_min": 1e2, "t_max": 1e4, "t_points": 9, "tol": 3.0},
}


@dataclass
class RunConfig:
    command: str
    dims: tuple[int, ...]
    t_min: float
    t_max: float
    t_points: int
    log_grid: bool
    tol: float
    seed: int
    out: str | None
    samples: int
    i0_multiple: float
    raw: dict = field(default_factory=dict)

    def t_grid(self) -> np.ndarray:
        if self.log_grid:
            return np.logspace(math.log10(self.t_min),
                               math.log10(self.t_max), self.t_points)
        return np.linspace(self.t_min, self.t_max, self.t_points)

    def data_pair(self, n: int) -> tuple[InitialDataSpec, InitialDataSpec]:
        r = self.raw
        try:
            u0 = InitialDataSpec(r["u0_family"], float(r["u0_amplitude"]),
                                 float(r["u0_width"]), n)
            u1 = InitialDataSpec(r["u1_family"], float(r["u1_amplitude"]),
                                 float(r["u1_width"]), n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return u0, u1

    def config_hash(self) -> str:
        # The output path does not affect any computed value.
        text = "\n".join(f"{k}={self.raw[k]}" for k in sorted(self.raw)
                         if k != "out")
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def _parse_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(
                        f"{path}:{lineno}: expected 'key = value'")
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in _DEFAULTS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return values


def _coerce(name: str, value, kind):
    try:
        if kind is bool and isinstance(value, str):
            if value.lower() in ("1", "true", "yes", "on"):
                return True
            if value.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError("expected a boolean")
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def resolve_config(command: str, args: argparse.Namespace) -> RunConfig:
    file_cfg = _parse_config_file(args.config) if args.config else {}
    merged = dict(_DEFAULTS)
    merged.update(_COMMAND_DEFAULTS[command])
    merged.update(file_cfg)
    for key in merged:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            merged[key] = cli_val

    dims_raw = str(merged["dim"])
    try:
        dims = tuple(int(d) for d in dims_raw.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"dim: {exc}") from exc
    if not dims or any(d < 1 for d in dims):
        raise ConfigError("dim: need one or more integers >= 1")

    t_min = _coerce("t_min", merged["t_min"], float)
    t_max = _coerce("t_max", merged["t_max"], float)
    t_points = _coerce("t_points", merged["t_points"], int)
    if not (0.0 < t_min < t_max):
        raise ConfigError("t_min/t_max: need 0 < t_min < t_max")
    if t_points < 2:
        raise ConfigError("t_points: need at least 2 grid points")
    tol = _coerce("tol", merged["tol"], float)
    if tol < 0.0:
        raise ConfigError("tol: must be >= 0")
    seed = _coerce("seed", merged["seed"], int)
    if seed < 0:
        raise ConfigError("seed: must be >= 0")
    samples = _coerce("samples", merged["samples"], int)
    if samples < 1:
        raise ConfigError("samples: must be >= 1")
    i0_multiple = _coerce("i0_multiple", merged["i0_multiple"], float)
    if i0_multiple <= 0.0:
        raise ConfigError("i0_multiple: must be > 0")

    cfg = RunConfig(command=command, dims=dims, t_min=t_min, t_max=t_max,
                    t_points=t_points,
                    log_grid=_coerce("log_grid", merged["log_grid"], bool),
                    tol=tol, seed=seed, out=merged["out"], samples=samples,
                    i0_multiple=i0_multiple,
                    raw={k: merged[k] for k in sorted(merged)})
    # Fail fast on bad data fields even before a command needs them.
    cfg.data_pair(dims[0])
    return cfg


def _threads() -> int:
    raw = os.environ.get("LOGDAMP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _sweep(fn, items):
    """Map preserving order; thread count capped by LOGDAMP_THREADS."""
    workers = _threads()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- output ------------------------------------------------------------------

class Report:
    def __init__(self, cfg: RunConfig):
        self.lines: list[str] = [f"# command={cfg.command}",
                                 f"# config={cfg.config_hash()}"]
        self.out = cfg.out

    def comment(self, text: str):
        self.lines.append(f"# {text}")

    def row(self, *cells):
        self.lines.append(",".join(str(c) for c in cells))

    def emit(self):
        text = "\n".join(self.lines) + "\n"
        sys.stdout.write(text)
        if self.out:
            with open(self.out, "w", encoding="utf-8") as fh:
                fh.write(text)


def _fmt(x: float) -> str:
    if x != x:
        return "nan"
    return format(x, ".12e")


# -- special -----------------------------------------------------------------

def cmd_special(cfg: RunConfig) -> int:
    ps = (0.0, 0.5, 1.0, 2.0, 3.0)
    ts = cfg.t_grid()
    rep = Report(cfg)
    rep.row("p", "t", "I_p", "I_p_scaled", "J_p", "J_p_scaled",
            "hyp2f1", "gamma_ratio", "h0_identity_relerr")

    def j_value(t: float, p: float) -> float:
        if t > (p + 3.0) / 2.0:
            return special.J_p(t, p)
        if 2.0 * t > p + 1.0:
            return special.J_p_direct(t, p, rel_tol=1e-11)
        return math.nan

    h0_relerr: dict[float, float] = {}
    for t in ts:
        j0 = j_value(t, 0.0)
        h0 = special.I_p(t, 0.0) + j0
        ref = 0.5 * math.sqrt(math.pi) * special.gamma_ratio(t)
        h0_relerr[t] = abs(h0 - ref) / ref

    failures = []
    scaled_by_p: dict[float, list[float]] = {p: [] for p in ps}
    for p in ps:
        for t in ts:
            ival = special.I_p(t, p)
            iscaled = ival * t ** ((p + 1.0) / 2.0)
            jval = j_value(t, p)
            if jval == jval and jval > 0.0:
                jscaled = math.exp(math.log(jval) + math.log(t - 1.0)
                                   + t * math.log(2.0)) if t > 1.0 else math.nan
            else:
                jscaled = math.nan
            rep.row(p, t, _fmt(ival), _fmt(iscaled), _fmt(jval),
                    _fmt(jscaled), _fmt(special.hyp2f1_special(t, p)),
                    _fmt(special.gamma_ratio(t)), _fmt(h0_relerr[t]))
            if h0_relerr[t] >= cfg.tol:
                failures.append(f"h0 identity at t={t:g}: {h0_relerr[t]:.3e}")
            if t >= 100.0:
                scaled_by_p[p].append(iscaled)
            # Sandwich check only where 2^-t is far enough from the
            # subnormal floor that J carries full relative precision.
            if jscaled == jscaled and t >= 5.0 and jval > 1e-280:
                lo, hi = special.j_sandwich_bounds(t, p)
                if not (lo * (1 - 1e-9) <= jscaled <= hi * (1 + 1e-9)):
                    failures.append(
                        f"tail sandwich p={p} t={t:g}: {jscaled:.6f} "
                        f"outside [{lo:.6f}, {hi:.6f}]")

    for p, vals in scaled_by_p.items():
        if len(vals) >= 2:
            ratio = max(vals) / min(vals)
            if ratio > 1.2 or min(vals) < 0.05 or max(vals) > 5.0:
                failures.append(f"peak-integral band p={p}: ratio {ratio:.3f},"
                                f" range [{min(vals):.3f}, {max(vals):.3f}]")

    for msg in failures:
        rep.comment(f"FAIL {msg}")
    rep.comment(f"checks={'FAIL' if failures else 'PASS'}")
    rep.emit()
    return E_CHECK_FAILED if failures else 0


# -- lemmas ------------------------------------------------------------------

def _suite_lines(cfg: RunConfig):
    """Run every inequality suite; yield (name, samples, margin, ok).

    ``margin`` is slack on the natural scale of each check (positive
    means the property holds with room to spare).
    """
    rng = np.random.default_rng(cfg.seed)

    r = np.exp(rng.uniform(math.log(1e-8), math.log(1e8), 10_000))
    a, b = symbols.damping_a(r), symbols.oscillation_b(r)
    worst = float(np.max((a / b) ** 2))
    yield ("damping_ratio_bound", r.size, 1.0 / 3.0 - worst,
           worst <= 1.0 / 3.0 + 1e-12)
    worst = float(np.max(((b - r) / b) ** 2))
    yield ("dispersion_shift_bound", r.size, 28.0 / 3.0 - worst,
           worst <= 28.0 / 3.0 + 1e-9)
    worst = float(np.max(np.log1p(r * r) ** 2 / (2.0 * r * r)))
    yield ("log_symbol_bound", r.size, 1.0 - worst, worst <= 1.0 + 1e-12)

    ps = rng.uniform(2.0, 8.0, 50)
    ts = np.array([rng.uniform(p + 2.0, 200.0) for p in ps])
    worst = 0.0
    for p, t in zip(ps, ts):
        direct = special.I_p(t, p)
        stepped = special.I_p_recurrence(t, p, special.I_p(t, p - 2.0))
        worst = max(worst, abs(direct - stepped) / direct)
    yield ("recurrence_consistency", 50, 1e-10 - worst, worst <= 1e-10)

    worst = -math.inf
    count = 0
    for p in (-1.0, 0.0, 1.0, 3.0):
        for t in (10.0, 20.0, 50.0):
            scaled = special.J_p(t, p) * (t - 1.0) * 2.0 ** t
            lo, hi = special.j_sandwich_bounds(t, p)
            viol = max(lo - scaled, scaled - hi) / hi
            worst = max(worst, viol)
            count += 1
    yield ("tail_sandwich", count, 1e-9 - worst, worst <= 1e-9)

    worst = -math.inf
    count = 0
    for eta in (0.1, 0.3, 0.5, 0.9):
        for p in (0.0, 1.0, 3.0):
            for t in (0.0, 5.0, 20.0):
                bound = math.exp(-t * math.log1p(eta * eta))
                ratio = special.middle_band(eta, p, t) / bound
                worst = max(worst, ratio - 1.0)
                count += 1
    yield ("mid_band_bound", count, -worst, worst <= 1e-12)

    u1 = cfg.data_pair(cfg.dims[0])[1]
    dec = modes.decompose_data(u1)
    w11 = u1.weighted_l1_norm()
    if w11 > 0.0:
        xi = np.exp(rng.uniform(math.log(1e-6), math.log(1e3), 2000))
        ratio = np.abs(dec.A1(xi)) / (xi * w11)
        worst = float(np.max(ratio))
    else:
        worst = 0.0
    yield ("velocity_moment_bound", 2000, 1.0 - worst, worst <= 1.0)

    for kind, dims, expo in (("sin", (3, 4), lambda n: (n - 2) / 2.0),
                             ("cos", (1, 2), lambda n: n / 2.0)):
        worst = 1.0
        count = 0
        for n in dims:
            vals = [norms.M_integral(t, n, kind) * t ** expo(n)
                    for t in (1e2, 1e3, 1e4)]
            worst = max(worst, max(vals) / min(vals))
            count += 3
        yield (f"oscillating_band_{kind}", count, 1.5 - worst, worst <= 1.5)

    worst = -math.inf
    for n in cfg.dims:
        u0, u1 = cfg.data_pair(n)
        hb20 = norms.residual_norm(20.0, u0, u1, n, band="high")
        hb40 = norms.residual_norm(40.0, u0, u1, n, band="high")
        env = hb20 ** 2 / (20.0 ** 2 * 2.0 ** -20) * 40.0 ** 2 * 2.0 ** -40
        worst = max(worst, hb40 ** 2 / env - 1.0)
    yield ("high_band_envelope", len(cfg.dims), -worst, worst <= 0.0)

    worst = -math.inf
    nprof = cfg.samples
    for _ in range(nprof):
        n = int(rng.integers(1, 4))
        k = int(rng.integers(1, 4))
        cs = rng.uniform(-1.0, 1.0, k)
        mus = rng.uniform(0.0, 5.0, k)
        sigmas = rng.uniform(0.1, 2.0, k)

        def vhat(rr, cs=cs, mus=mus, sigmas=sigmas):
            acc = np.zeros_like(rr)
            for c, m, s in zip(cs, mus, sigmas):
                acc = acc + c * np.exp(-0.5 * ((rr - m) / s) ** 2)
            return acc

        radius = float(np.max(mus + 14.0 * sigmas))
        nv, nav, nlv = norms.log_operator_norms(
            vhat, n, radius, breakpoints=tuple(np.sort(mus)), rel_tol=1e-9)
        rhs = 2.0 / math.e * (nv + nav)
        if rhs > 0.0:
            worst = max(worst, nlv / rhs - 1.0)
    yield ("log_operator_relative_bound", nprof, -worst, worst <= 0.0)

    left, right = symbols.locate_phi_max(0.0, 10.0, width=1e-8)
    xstar = 0.5 * (left + right)
    loc_err = abs(xstar - (math.e - 1.0))
    val_err = abs(symbols.phi(xstar) - 1.0 / math.e)
    ok = loc_err <= 1e-6 and val_err <= 1e-12
    yield ("phi_maximum", 1, 1e-6 - loc_err, ok)

    worst = -math.inf
    for n in cfg.dims:
        u0, u1 = cfg.data_pair(n)
        if u0.family == "zero" and u1.family == "zero":
            continue
        es = [norms.energy(t, u0, u1, n) for t in np.linspace(0.0, 40.0, 20)]
        worst = max(worst, max((b - a) / es[0]
                               for a, b in zip(es, es[1:])))
    yield ("energy_monotone", 20 * len(cfg.dims), -worst, worst <= 1e-12)

    u0, u1 = cfg.data_pair(cfg.dims[0])
    worst = 0.0
    for _ in range(100):
        t = rng.uniform(0.0, 1e3)
        rr = np.exp(rng.uniform(math.log(1e-6), math.log(1e3), 100))
        md = modes.remainder_terms(t, rr, u0, u1)
        scale = (np.abs(md.u_hat) + np.abs(md.profile)
                 + sum(np.abs(k) for k in md.K))
        resid = md.closure_residual
        ok_pts = resid <= 1e-10 * scale + 1e-300
        if not np.all(ok_pts):
            worst = max(worst, float(np.max(resid - 1e-10 * scale)))
    yield ("mode_closure_identity", 10_000, 1e-300 - worst, worst <= 1e-300)


def cmd_lemmas(cfg: RunConfig) -> int:
    rep = Report(cfg)
    rep.row("name", "samples", "margin", "status")
    all_ok = True
    for name, count, margin, ok in _suite_lines(cfg):
        rep.row(name, count, format(margin, ".6e"), "PASS" if ok else "FAIL")
        all_ok = all_ok and ok
    rep.comment(f"checks={'PASS' if all_ok else 'FAIL'}")
    rep.emit()
    return 0 if all_ok else E_CHECK_FAILED


# -- decay -------------------------------------------------------------------

def _expected_slope(n: int) -> float | None:
    if n == 1:
        return 0.5
    if n == 2:
        return None
    return -(n - 2) / 4.0


def cmd_decay(cfg: RunConfig) -> int:
    ts = cfg.t_grid()
    if cfg.t_points < 5:
        raise ConfigError("t_points: decay fits need at least 5 grid points")
    rep = Report(cfg)
    rep.row("n", "t", "norm", "scaled")
    failures = []
    for n in cfg.dims:
        u0, u1 = cfg.data_pair(n)
        vals = _sweep(lambda t: norms.l2_norm(t, u0, u1, n, rel_tol=1e-9), ts)
        expected = _expected_slope(n)
        if expected is None:
            scaled = [v * v / math.log(t) for v, t in zip(vals, ts)]
        else:
            scaled = [v * t ** (-expected) for v, t in zip(vals, ts)]
        for t, v, s in zip(ts, vals, scaled):
            rep.row(n, t, _fmt(v), _fmt(s))
        if expected is None:
            ratio = max(scaled) / min(scaled)
            rep.comment(f"n={n} squared-norm/log(t) ratio={ratio:.4f} "
                        f"limit=1.25")
            if ratio > 1.25:
                failures.append(f"n={n} log-band ratio {ratio:.4f}")
        else:
            fit = norms.fit_decay(norms.DecaySeries(tuple(ts), tuple(vals)))
            rep.comment(f"n={n} slope={fit.slope:+.4f} "
                        f"expected={expected:+.4f} tol={cfg.tol:g}")
            if abs(fit.slope - expected) > cfg.tol:
                failures.append(f"n={n} slope {fit.slope:+.4f}")
    for msg in failures:
        rep.comment(f"FAIL {msg}")
    rep.comment(f"checks={'FAIL' if failures else 'PASS'}")
    rep.emit()
    return E_CHECK_FAILED if failures else 0


# -- profile -----------------------------------------------------------------

def cmd_profile(cfg: RunConfig) -> int:
    ts = cfg.t_grid()
    rep = Report(cfg)
    rep.row("n", "t", "residual", "scaled", "I0")
    failures = []
    for n in cfg.dims:
        u0, u1 = cfg.data_pair(n)
        i0 = norms.data_constant(u0, u1)
        vals = _sweep(lambda t: norms.residual_norm(t, u0, u1, n), ts)
        scaled = [v * t ** (n / 4.0) for v, t in zip(vals, ts)]
        for t, v, s in zip(ts, vals, scaled):
            rep.row(n, t, _fmt(v), _fmt(s), _fmt(i0))
        positive = [s for s in scaled if s > 0.0]
        if positive:
            ratio = max(positive) / min(positive)
            rep.comment(f"n={n} scaled-residual ratio={ratio:.4f} limit={cfg.tol:g}")
            if ratio > cfg.tol:
                failures.append(f"n={n} scaled residual ratio {ratio:.4f}")
            if i0 > 0.0 and max(positive) > cfg.i0_multiple * i0:
                failures.append(
                    f"n={n} scaled residual {max(positive):.4f} exceeds "
                    f"{cfg.i0_multiple:g} * I0 = {cfg.i0_multiple * i0:.4f}")
    for msg in failures:
        rep.comment(f"FAIL {msg}")
    rep.comment(f"checks={'FAIL' if failures else 'PASS'}")
    rep.emit()
    return E_CHECK_FAILED if failures else 0


# -- entry point --------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logdamp",
        description="verification runs for the log-damped wave equation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("special", "weight integrals, scalings, identities"),
            ("lemmas", "inequality suites with PASS/FAIL lines"),
            ("decay", "L2 decay exponents vs theory"),
            ("profile", "scaled distance to the mass profile")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dim", dest="dim", default=None,
                       help="dimension(s), e.g. 3 or 1,2,3")
        p.add_argument("--t-min", dest="t_min", type=float, default=None)
        p.add_argument("--t-max", dest="t_max", type=float, default=None)
        p.add_argument("--t-points", dest="t_points", type=int, default=None)
        p.add_argument("--log-grid", dest="log_grid", default=None,
                       action="store_const", const=True)
        p.add_argument("--linear-grid", dest="log_grid",
                       action="store_const", const=False)
        p.add_argument("--tol", dest="tol", type=float, default=None,
                       help="check tolerance (relative)")
        p.add_argument("--out", dest="out", default=None,
                       help="also write the CSV/report to this path")
        p.add_argument("--seed", dest="seed", type=int, default=None)
        p.add_argument("--samples", dest="samples", type=int, default=None)
        p.add_argument("--i0-multiple", dest="i0_multiple", type=float,
                       default=None)
        p.add_argument("--config", dest="config", default=None,
                       help="flat key = value config file")
    return parser


_COMMANDS = {
    "special": cmd_special,
    "lemmas": cmd_lemmas,
    "decay": cmd_decay,
    "profile": cmd_profile,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args.command, args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return E_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return E_USAGE


if __name__ == "__main__":
    sys.exit(main())
