"""Command-line front end: ``ionbell {bell,evolve,sweep,validate-rwa} --config FILE``.

Config files hold one ``key = value`` per line; ``#`` starts a comment.
Angles are in radians and accept ``pi`` expressions (``pi/2``, ``-pi/4``,
``3*pi/4``); times accept ``t0`` expressions (``t0/2``, ``2*t0``) where t0 is
the protocol's Bell time.

Exit codes: 0 success, 1 physics failure (post-selection or leakage),
2 usage/config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .analysis import bits, entanglement_entropy, negativity
from .hilbert import FockCutoffs, PureState
from .operators import SystemParams, full_hamiltonian
from .propagation import LeakageError, leakage, numeric_propagate, to_interaction_picture
from .protocol import (
    PostSelectionError,
    ProtocolConfig,
    bell_report,
    evolve_protocol,
    measure_qubit,
    prepare_initial,
    protocol_time,
)
from .rwa import OMEGA0_OVER_ETAG, validate_rwa

log = logging.getLogger("ionbell")

EXIT_OK, EXIT_PHYSICS, EXIT_USAGE = 0, 1, 2
SWEEP_PARAMS = ("theta", "phi", "t", "eta", "nu_over_etag")
METHODS = ("analytic", "numeric", "full")

DEFAULTS = {
    "sideband": "red",
    "n": "0",
    "m": "0",
    "theta": "pi/4",
    "phi": "-pi/2",
    "k": "0",
    "eta": "0.1",
    "g": "10",
    "nu_over_etag": "500",
    "omega0_over_etag": str(OMEGA0_OVER_ETAG),
    "field_dim": "8",
    "vib_dim": "8",
    "method": "analytic",
    "format": "json",
    "ratios": "50, 200, 500",
    "samples": "41",
}
KNOWN_KEYS = set(DEFAULTS) | {
    "t", "nu", "omega", "omega0", "output",
    "sweep.param", "sweep.start", "sweep.stop", "sweep.steps",
}


class ConfigError(ValueError):
    pass


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_SYMBOLIC = re.compile(
    rf"^(?P<sign>[+-]?)\s*(?:(?P<mul>{_NUM})\s*\*\s*)?(?P<sym>pi|t0)\s*(?:/\s*(?P<div>{_NUM}))?$"
)


def parse_quantity(text: str, t0: float | None = None) -> float:
    """Parse a float, or ``[sign][c*]sym[/d]`` with ``sym`` in {pi, t0}."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    match = _SYMBOLIC.match(text)
    if not match:
        raise ConfigError(f"cannot parse number {text!r}")
    if match["sym"] == "pi":
        base = math.pi
    elif t0 is None:
        raise ConfigError(f"{text!r}: t0 is not available here")
    else:
        base = t0
    value = base * float(match["mul"] or 1.0) / float(match["div"] or 1.0)
    return -value if match["sign"] == "-" else value


def read_config(text: str) -> dict[str, str]:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value
    return raw


@dataclass
class RunConfig:
    protocol: ProtocolConfig
    method: str
    t: float | None
    output: str | None
    format: str
    ratios: list[float]
    samples: int
    omega0_over_etag: float
    sweep: dict | None = None
    raw: dict = field(default_factory=dict, repr=False)


def _int(raw, key) -> int:
    try:
        return int(raw[key])
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw[key]!r}") from None


def build_run(raw: dict[str, str]) -> RunConfig:
    """Turn the key/value mapping (defaults filled in) into a validated run."""
    raw = {**DEFAULTS, **raw}
    num = lambda key: parse_quantity(raw[key])  # noqa: E731
    try:
        eta, g = num("eta"), num("g")
        scale = eta * g if eta * g > 0 else 1.0
        omega0 = num("omega0") if "omega0" in raw else num("omega0_over_etag") * scale
        nu = num("nu") if "nu" in raw else num("nu_over_etag") * scale
        sideband = raw["sideband"]
        if "omega" in raw:
            params = SystemParams(nu=nu, omega=num("omega"), omega0=omega0, g=g, eta=eta)
        else:
            params = SystemParams.for_sideband(sideband, eta=eta, g=g, nu=nu, omega0=omega0)
        protocol = ProtocolConfig(
            sideband=sideband,
            n=_int(raw, "n"),
            m=_int(raw, "m"),
            theta=num("theta"),
            phi=num("phi"),
            k=_int(raw, "k"),
            cutoffs=FockCutoffs(_int(raw, "field_dim"), _int(raw, "vib_dim")),
            params=params,
        )
        t0 = protocol_time(protocol) if params.eta_g > 0 else None
        t = parse_quantity(raw["t"], t0) if "t" in raw else None
        if t is not None and t < 0:
            raise ConfigError(f"t must be non-negative, got {t!r}")
        ratios = [parse_quantity(r) for r in raw["ratios"].split(",") if r.strip()]
        samples = _int(raw, "samples")
        o0 = num("omega0_over_etag")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if raw["method"] not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {raw['method']!r}")
    if raw["format"] not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {raw['format']!r}")
    if samples < 2:
        raise ConfigError("samples must be >= 2")
    sweep = None
    if any(k.startswith("sweep.") for k in raw):
        missing = [k for k in ("sweep.param", "sweep.start", "sweep.stop", "sweep.steps") if k not in raw]
        if missing:
            raise ConfigError(f"incomplete sweep stanza, missing {missing}")
        param = raw["sweep.param"]
        if param not in SWEEP_PARAMS:
            raise ConfigError(f"sweep.param must be one of {SWEEP_PARAMS}, got {param!r}")
        start = parse_quantity(raw["sweep.start"], t0)
        stop = parse_quantity(raw["sweep.stop"], t0)
        steps = _int(raw, "sweep.steps")
        if steps < 1:
            raise ConfigError("sweep.steps must be >= 1")
        if start > stop:
            raise ConfigError(f"sweep.start ({start}) must not exceed sweep.stop ({stop})")
        sweep = {"param": param, "start": start, "stop": stop, "steps": steps}
    return RunConfig(
        protocol=protocol,
        method=raw["method"],
        t=t,
        output=raw.get("output"),
        format=raw["format"],
        ratios=ratios,
        samples=samples,
        omega0_over_etag=o0,
        sweep=sweep,
        raw=raw,
    )


def load_run(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from exc
    return build_run(read_config(text))


def evolve_state(run: RunConfig, t: float | None = None) -> PureState:
    """Interaction-picture state at time ``t`` using the configured method."""
    cfg = run.protocol
    if t is None:
        t = run.t if run.t is not None else protocol_time(cfg)
    if run.method == "full":
        psi = numeric_propagate(full_hamiltonian(cfg.params, cfg.cutoffs), prepare_initial(cfg), t)
        return to_interaction_picture(cfg.params, psi, t)
    return evolve_protocol(cfg, t, run.method)


def bell_row(run: RunConfig, t: float | None = None) -> dict:
    """Protocol figures of merit; raises PostSelectionError / LeakageError."""
    cfg = run.protocol
    if t is None:
        t = run.t if run.t is not None else protocol_time(cfg)
    psi = evolve_state(run, t)
    lk = leakage(psi)
    # sideband evolution is exact on its closed blocks; only the full
    # Hamiltonian can populate the truncation edge
    if run.method == "full" and not lk.trusted:
        raise LeakageError(f"top-level occupation {lk.worst:.3e} exceeds threshold")
    record = measure_qubit(psi, "g")
    rep = bell_report(cfg, record.post_state, t)
    s = entanglement_entropy(record.post_state)
    return {
        "sideband": cfg.sideband,
        "method": run.method,
        "t": t,
        "k": cfg.k,
        "p_g": record.probability,
        "best": rep.best,
        "fidelity": rep.fidelity,
        "fidelities": rep.fidelities,
        "predicted_fidelity": rep.predicted_fidelity,
        "entropy_nats": s,
        "entropy_bits": bits(s),
        "negativity": negativity(record.post_state),
        "leakage": lk.worst,
    }


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(run: RunConfig, text: str, output: str | None):
    path = output or run.output
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_bell(run: RunConfig, output=None) -> int:
    try:
        row = bell_row(run)
    except (PostSelectionError, LeakageError) as exc:
        print(f"ionbell: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    if run.format == "csv":
        keys = [k for k in row if k != "fidelities"]
        text = _csv_text(keys, [[row[k] for k in keys]])
    else:
        text = json.dumps(row, indent=2) + "\n"
    _emit(run, text, output)
    print(
        f"{row['sideband']} sideband, t = {row['t']:.9g}: P(g) = {row['p_g']:.6f}, "
        f"best match {row['best']} with fidelity {row['fidelity']:.6f}, "
        f"entropy {row['entropy_nats']:.6f} nats ({row['entropy_bits']:.6f} bits), "
        f"negativity {row['negativity']:.6f}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_evolve(run: RunConfig, output=None) -> int:
    if run.t is None:
        print("ionbell: evolve needs an explicit 't' in the config", file=sys.stderr)
        return EXIT_USAGE
    try:
        psi = evolve_state(run, run.t)
    except LeakageError as exc:
        print(f"ionbell: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    if run.format == "csv":
        c = psi.cutoffs
        rows = [(*c.labels(i), a.real, a.imag) for i, a in enumerate(psi.amplitudes)]
        text = _csv_text(["n_f", "m_v", "q", "re", "im"], rows)
    else:
        text = psi.to_json() + "\n"
    _emit(run, text, output)
    return EXIT_OK


def sweep_values(start: float, stop: float, steps: int) -> list[float]:
    if steps == 1:
        return [start]
    return [float(v) for v in np.linspace(start, stop, steps)]


def _sweep_point(run: RunConfig, param: str, value: float):
    if param == "t":
        sub = run
        t = value
    else:
        raw = dict(run.raw)
        raw[param] = repr(value)
        sub = build_run({k: v for k, v in raw.items() if not k.startswith("sweep.")})
        t = None
    try:
        row = bell_row(sub, t)
    except (PostSelectionError, LeakageError) as exc:
        log.warning("%s = %r: %s", param, value, exc)
        return [value, 0.0 if isinstance(exc, PostSelectionError) else math.nan,
                math.nan, math.nan, math.nan], False
    return [value, row["p_g"], row["fidelity"], row["entropy_nats"], row["negativity"]], True


def cmd_sweep(run: RunConfig, output=None, workers: int | None = None) -> int:
    if run.sweep is None:
        print("ionbell: sweep needs sweep.param/start/stop/steps in the config", file=sys.stderr)
        return EXIT_USAGE
    sw = run.sweep
    values = sweep_values(sw["start"], sw["stop"], sw["steps"])
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map() yields in submission order, so the table is deterministic
            results = list(pool.map(lambda v: _sweep_point(run, sw["param"], v), values))
    except ConfigError as exc:
        print(f"ionbell: config error in sweep: {exc}", file=sys.stderr)
        return EXIT_USAGE
    header = [sw["param"], "p_g", "fidelity", "entropy_nats", "negativity"]
    rows = [r for r, _ in results]
    if run.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    else:
        text = _csv_text(header, rows)
    _emit(run, text, output)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_PHYSICS


def cmd_validate_rwa(run: RunConfig, output=None) -> int:
    rows, monotone = validate_rwa(
        run.protocol, run.ratios, samples=run.samples, omega0_over_etag=run.omega0_over_etag
    )
    header = ["nu_over_etag", "final_fidelity", "min_fidelity", "leakage", "trusted"]
    table = [[r.ratio, r.final_fidelity, r.min_fidelity, r.leakage, r.trusted] for r in rows]
    if run.format == "csv":
        text = _csv_text(header, table)
    else:
        text = json.dumps(
            {"rows": [dict(zip(header, r)) for r in table], "monotone": monotone}, indent=2
        ) + "\n"
    _emit(run, text, output)
    if not monotone:
        print("ionbell: fidelity is not non-decreasing across the given ratios", file=sys.stderr)
    if not all(r.trusted for r in rows):
        print("ionbell: leakage above threshold; rows marked untrusted", file=sys.stderr)
        return EXIT_PHYSICS
    return EXIT_OK


COMMANDS = {
    "bell": cmd_bell,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "validate-rwa": cmd_validate_rwa,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ionbell", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        run = load_run(args.config)
        if args.format:
            run.format = args.format
    except ConfigError as exc:
        print(f"ionbell: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return COMMANDS[args.command](run, args.output)


if __name__ == "__main__":
    sys.exit(main())
