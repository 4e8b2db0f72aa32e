"""Command-line front end.

Four commands over a shared option set:

* ``plan``     - report simulability thresholds and the chosen regime
* ``sample``   - draw photon-count samples from a circuit
* ``validate`` - desk-scale self-checks and circuit-file checks
* ``stats``    - summarize a sample file, optionally against a reference law

Settings resolve in order: built-in defaults, then the ``--config`` JSON
file, then ``LOSSYBOSON_*`` environment variables, then command-line flags.
Exit codes: 0 success, 1 usage/input error, 2 model violation (or failed
validation), 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np
from scipy import stats as scipy_stats

from . import circuit as circ
from . import mps, oracle, thermal
from .errors import CapacityError, DegenerateCircuitError, ModelViolationError, ResampleSignal
from .numerics import Distribution, total_variation
from .rng import make_stream, split_stream

__all__ = ["main", "run_plan", "run_sample", "run_validate", "run_stats"]

COMMANDS = ("plan", "sample", "validate", "stats")
ENV_PREFIX = "LOSSYBOSON_"

DEFAULTS = {
    "eps": 0.05,
    "samples": 100,
    "mode": "auto",
    "format": "jsonl",
    "workers": 1,
    "max_bond": mps.DEFAULT_MAX_BOND,
    "herald_lambda": 0.1,
    "density_k": 1.0,
    "density_gamma": 1.0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(
        prog="lossyboson",
        description="Classical simulation of lossy multiphoton interference.",
    )
    p.add_argument("command", nargs="?", choices=COMMANDS, help="what to run")
    p.add_argument("--command", dest="command_flag", choices=COMMANDS,
                   help="alternative to the positional command")
    p.add_argument("--config", help="JSON config file; flags override its entries")
    p.add_argument("--circuit", help="circuit JSON file")
    p.add_argument("--seed", type=int, help="root RNG seed (fixed seed => fixed bytes)")
    p.add_argument("--samples", type=int, help="number of samples to draw")
    p.add_argument("--mode", choices=("auto", "thermal", "mps", "oracle", "scattershot"),
                   help="sampling backend (auto follows the plan)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), help="sample output format")
    p.add_argument("--in", dest="input", help="sample file to read (stats)")
    p.add_argument("--reference", help="reference distribution JSON (stats)")
    p.add_argument("--eps", type=float, help="total-variation budget")
    p.add_argument("--photons", type=int, help="input photon number")
    p.add_argument("--workers", type=int, help="independent sample streams")
    p.add_argument("--max-bond", type=int, dest="max_bond",
                   help="tensor-network bond-dimension cap")
    p.add_argument("--herald-lambda", type=float, dest="herald_lambda",
                   help="scattershot squeezing parameter")
    return p


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    return doc


def _env_overrides() -> dict:
    out = {}
    for key, cast in (
        ("seed", int), ("samples", int), ("mode", str), ("out", str),
        ("format", str), ("eps", float), ("workers", int),
    ):
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is None:
            continue
        try:
            out[key] = cast(raw)
        except ValueError as exc:
            raise UsageError(f"bad {ENV_PREFIX}{key.upper()}={raw!r}: {exc}") from exc
    return out


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < environment < flags into one dict.

    Keys the user actually set (config file, environment, or flag — not a
    built-in default) are recorded in cfg["_explicit"] so commands can tell
    a deliberate choice apart from a fallback value.
    """
    cfg = dict(DEFAULTS)
    explicit = set()
    file_cfg = _load_config(args.config)
    file_over = {k: v for k, v in file_cfg.items() if v is not None}
    cfg.update(file_over)
    explicit.update(file_over)
    env_over = _env_overrides()
    cfg.update(env_over)
    explicit.update(env_over)
    for key in ("circuit", "seed", "samples", "mode", "out", "format", "eps",
                "photons", "workers", "max_bond", "herald_lambda", "input",
                "reference"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
            explicit.add(key)
    command = args.command_flag or args.command or cfg.get("command")
    if command not in COMMANDS:
        raise UsageError(
            f"no command given; choose one of {', '.join(COMMANDS)}"
        )
    cfg["command"] = command
    cfg["_explicit"] = sorted(explicit)
    return cfg


def _resolve_circuit(cfg: dict) -> circ.LayeredCircuit | None:
    spec = cfg.get("circuit")
    if spec is None:
        return None
    if isinstance(spec, str):
        try:
            return circ.load_circuit(spec)
        except OSError as exc:
            raise UsageError(f"cannot read circuit {spec}: {exc}") from exc
    if isinstance(spec, dict) and "brickwork" in spec:
        b = spec["brickwork"]
        try:
            return circ.random_brickwork(
                modes=int(b["modes"]),
                depth=int(b["depth"]),
                tau=float(b.get("tau", 1.0)),
                rng=make_stream(int(b.get("seed", 0))),
            )
        except KeyError as exc:
            raise UsageError(f"brickwork spec missing key {exc}") from exc
    raise UsageError("circuit must be a file path or {'brickwork': {...}}")


def _input_pattern(cfg: dict, modes: int) -> tuple:
    if "pattern" in cfg:
        pattern = tuple(int(x) for x in cfg["pattern"])
        if len(pattern) != modes:
            raise UsageError(
                f"pattern covers {len(pattern)} modes, circuit has {modes}"
            )
        if any(x < 0 for x in pattern):
            raise UsageError("pattern entries must be >= 0")
        return pattern
    n = int(cfg.get("photons") or 0)
    if n <= 0:
        raise UsageError('give "photons" or an explicit "pattern"')
    if n > modes:
        raise UsageError(f"{n} photons do not fit in {modes} modes one per mode")
    return (1,) * n + (0,) * (modes - n)


def _plan_inputs(cfg: dict, circuit: circ.LayeredCircuit | None):
    if circuit is not None:
        modes = circuit.modes
        depth = circuit.depth
        try:
            tau = circuit.uniform_tau()
        except ValueError:
            tau = None
    else:
        for key in ("modes", "depth", "tau"):
            if key not in cfg:
                raise UsageError(f'plan needs "{key}" (or a circuit file)')
        modes, depth, tau = int(cfg["modes"]), int(cfg["depth"]), float(cfg["tau"])
    photons = cfg.get("photons")
    if photons is None and "pattern" in cfg:
        photons = sum(int(x) for x in cfg["pattern"])
    return modes, depth, tau, (int(photons) if photons else None)


def _json_out(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# plan
# ---------------------------------------------------------------------------


def run_plan(cfg: dict) -> int:
    circuit = _resolve_circuit(cfg)
    modes, depth, tau, photons = _plan_inputs(cfg, circuit)
    eps = float(cfg["eps"])
    if tau is None:
        raise UsageError(
            "plan needs a uniform per-layer transmission; this circuit mixes "
            "transmissions (use the thermal sampler directly)"
        )
    params = circ.PlanParameters(
        modes=modes, depth=depth, tau=tau, eps=eps,
        density_k=float(cfg["density_k"]), density_gamma=float(cfg["density_gamma"]),
        photons=photons,
    )
    decision = circ.plan(params)
    report = {
        "regime": decision.regime,
        "photons": params.photons,
        "modes": modes,
        "depth": depth,
        "tau": tau,
        "eps": eps,
        "mu_effective": decision.mu_effective,
        "depth_threshold_exponential": decision.depth_threshold,
        "thermalization_depth": circ.thermalization_depth(
            params.photons, eps, 1.0 - tau
        ),
        "thermal_valid": decision.thermal_valid,
        "rationale": decision.rationale,
    }
    if "algebraic" in cfg:
        alg = cfg["algebraic"]
        try:
            result = circ.depth_threshold_algebraic(
                d_len=float(alg["d_len"]), beta=float(alg["beta"]),
                k=float(cfg["density_k"]), eps=eps,
                gamma=float(cfg["density_gamma"]), modes=modes,
            )
        except KeyError as exc:
            raise UsageError(f"algebraic spec missing key {exc}") from exc
        report["algebraic"] = {
            "depth_threshold": result.depth,
            "gamma_beta_ratio": result.gamma_beta_ratio,
            "efficient": result.efficient,
        }
    print(_json_out(report))
    return 0


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------


def _choose_regime(cfg: dict, circuit: circ.LayeredCircuit, photons: int) -> str:
    mode = cfg["mode"]
    if mode != "auto":
        return mode
    try:
        tau = circuit.uniform_tau()
    except ValueError:
        return "thermal"  # non-uniform loss: only the thermal path applies
    params = circ.PlanParameters(
        modes=circuit.modes, depth=circuit.depth, tau=tau, eps=float(cfg["eps"]),
        photons=photons,
    )
    return circ.plan(params).regime


def _thermal_sampler(cfg: dict, circuit: circ.LayeredCircuit, pattern: tuple):
    if any(x > 1 for x in pattern):
        raise UsageError("thermal sampling expects at most one photon per input mode")
    a = circ.transfer_matrix(circuit)
    decomposition = circ.decompose_losses(a)
    if decomposition.transmissions.max() == 0.0:
        # fully blocking circuit: every input is absorbed, outputs are vacuum
        zeros = np.zeros(circuit.modes, dtype=int)

        def draw_vacuum(rng):
            return zeros

        return draw_vacuum
    factored = circ.factor_nonuniform(decomposition)
    params = thermal.ThermalParams(min(factored.mu_max, 1.0 - 1e-9))
    residual = factored.residual.reconstruct()
    input_modes = np.flatnonzero(np.asarray(pattern))
    n = len(input_modes)
    eps = float(cfg["eps"])

    def draw(rng):
        return thermal.sample_output(residual, params, n, eps, rng, input_modes)

    return draw


def _mps_sampler(cfg: dict, circuit: circ.LayeredCircuit, pattern: tuple):
    try:
        tau = circuit.uniform_tau()
    except ValueError as exc:
        raise UsageError(
            "tensor-network sampling requires a uniform per-layer transmission"
        ) from exc
    if any(x > 1 for x in pattern):
        raise UsageError("lossy tensor-network sampling expects 0/1 input patterns")
    mu_eff = tau ** circuit.depth
    lossless = circuit.lossless_copy()
    occupied = np.flatnonzero(np.asarray(pattern))
    max_bond = int(cfg["max_bond"])
    cache: dict = {}

    def state_for(thinned: tuple) -> mps.MPSState:
        if thinned not in cache:
            if len(cache) >= 4096:
                cache.clear()  # unbounded pattern variety: keep memory flat
            state = mps.simulate_circuit(lossless, thinned, max_bond=max_bond)
            cache[thinned] = mps.canonicalize(state)
        return cache[thinned]

    def draw(rng):
        keep = mps.lossy_input_sample(len(occupied), mu_eff, rng)
        thinned = np.zeros(circuit.modes, dtype=int)
        thinned[occupied[keep.astype(bool)]] = 1
        state = state_for(tuple(int(x) for x in thinned))
        while True:
            try:
                return np.array(mps.sample(state, rng), dtype=int)
            except ResampleSignal:
                continue

    return draw


def _oracle_distribution(circuit: circ.LayeredCircuit, pattern: tuple) -> Distribution:
    if circuit.is_lossless():
        return oracle.fock_output_distribution(circ.transfer_matrix(circuit), pattern)
    tau = circuit.uniform_tau()  # raises if mixed
    if any(x > 1 for x in pattern):
        raise UsageError("lossy oracle sampling expects 0/1 input patterns")
    u = circ.transfer_matrix(circuit.lossless_copy())
    mu_eff = tau ** circuit.depth
    occupied = list(np.flatnonzero(np.asarray(pattern)))
    if occupied == list(range(len(occupied))):
        return oracle.lossy_exact_distribution(u, mu_eff, len(occupied))
    # photons sit away from the leading modes: mix survival subsets directly
    acc: dict = {}
    n = len(occupied)
    for bits in range(1 << n):
        kept = [occupied[i] for i in range(n) if (bits >> i) & 1]
        weight = mu_eff ** len(kept) * (1.0 - mu_eff) ** (n - len(kept))
        sub_pattern = tuple(1 if i in kept else 0 for i in range(circuit.modes))
        sub = oracle.fock_output_distribution(u, sub_pattern)
        for outcome, w in zip(sub.outcomes, sub.weights):
            acc[outcome] = acc.get(outcome, 0.0) + weight * w
    outcomes = sorted(acc)
    return Distribution(tuple(outcomes), np.array([acc[o] for o in outcomes]))


def _oracle_sampler(cfg: dict, circuit: circ.LayeredCircuit, pattern: tuple):
    dist = _oracle_distribution(circuit, pattern)
    outcomes = [np.array(o, dtype=int) for o in dist.outcomes]
    weights = dist.weights / dist.weights.sum()

    def draw(rng):
        return outcomes[int(rng.choice(len(outcomes), p=weights))]

    return draw


def _scattershot_sampler(cfg: dict, circuit: circ.LayeredCircuit, photons_hint: int):
    lam = float(cfg["herald_lambda"])
    inner_mode = "thermal" if _choose_regime(
        {**cfg, "mode": "auto"}, circuit, max(photons_hint, 1)
    ) == "thermal" else "mps"
    builders = {"thermal": _thermal_sampler, "mps": _mps_sampler}
    build = builders[inner_mode]
    sampler_cache: dict = {}

    def draw(rng):
        for _ in range(100_000):
            herald = thermal.scattershot_herald(circuit.modes, lam, rng)
            if herald.max() <= 1:
                pattern = tuple(int(x) for x in herald)
                break
        else:
            raise CapacityError(
                "scattershot rejection did not find a collision-free herald"
            )
        if pattern not in sampler_cache:
            if len(sampler_cache) >= 1024:
                sampler_cache.clear()
            sampler_cache[pattern] = build(cfg, circuit, pattern)
        return sampler_cache[pattern](rng)

    return draw, inner_mode


def _format_line(counts, regime: str, fmt: str) -> str:
    if fmt == "csv":
        return ",".join(str(int(c)) for c in counts)
    return json.dumps(
        {"n": [int(c) for c in counts], "regime": regime},
        sort_keys=True, separators=(",", ":"),
    )


def _config_hash(cfg: dict, circuit_text: str) -> str:
    skip = ("out", "input", "reference")
    payload = json.dumps(
        {k: cfg[k] for k in sorted(cfg)
         if k not in skip and not k.startswith("_")},
        sort_keys=True, default=str,
    ) + circuit_text
    return hashlib.sha256(payload.encode()).hexdigest()


def run_sample(cfg: dict) -> int:
    circuit = _resolve_circuit(cfg)
    if circuit is None:
        raise UsageError("sample needs a circuit (file path or brickwork spec)")
    pattern = _input_pattern(cfg, circuit.modes)
    photons = int(sum(x for x in pattern if x > 0))
    n_samples = int(cfg["samples"])
    if n_samples < 1:
        raise UsageError("samples must be >= 1")
    workers = int(cfg["workers"])
    if workers < 1:
        raise UsageError("workers must be >= 1")

    regime = _choose_regime(cfg, circuit, photons)
    if regime == "scattershot":
        draw, inner = _scattershot_sampler(cfg, circuit, photons)
        line_regime = inner
    else:
        builders = {
            "thermal": _thermal_sampler,
            "mps": _mps_sampler,
            "oracle": _oracle_sampler,
        }
        draw = builders[regime](cfg, circuit, pattern)
        line_regime = regime

    fmt = cfg["format"]
    if fmt not in ("jsonl", "csv"):
        raise UsageError(f"unknown format {fmt!r}")
    root = make_stream(cfg.get("seed"))
    streams = split_stream(root, workers)
    base, extra = divmod(n_samples, workers)
    lines = []
    for w, stream in enumerate(streams):
        block = base + (1 if w < extra else 0)
        for _ in range(block):
            lines.append(_format_line(draw(stream), line_regime, fmt))
    text = "\n".join(lines) + "\n"

    out_path = cfg.get("out")
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        meta = {
            "command": "sample",
            "config_hash": _config_hash(
                cfg, circ.circuit_to_json(circuit)
            ),
            "seed": cfg.get("seed"),
            "samples": n_samples,
            "workers": workers,
            "regime": line_regime,
            "format": fmt,
            "modes": circuit.modes,
            "photons": photons,
            "eps": float(cfg["eps"]),
        }
        try:
            tau = circuit.uniform_tau()
            meta["thresholds"] = {
                "mu_effective": tau ** circuit.depth,
                "depth_threshold_exponential": circ.depth_threshold_exponential(
                    circuit.modes, float(cfg["density_gamma"]),
                    float(cfg["density_k"]), float(cfg["eps"]), tau,
                ),
            }
        except ValueError:
            meta["thresholds"] = None
        with open(out_path + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_json_out(meta) + "\n")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _check(name: str, measured: float, bound: float) -> dict:
    return {
        "name": name,
        "measured": float(measured),
        "bound": float(bound),
        "pass": bool(measured <= bound),
    }


def _poisson_binomial_tvd(x: float, t: int) -> float:
    ks = np.arange(t + 1)
    b = scipy_stats.binom.pmf(ks, t, x / t)
    p = scipy_stats.poisson.pmf(ks, x)
    return 0.5 * float(np.abs(b - p).sum()) + 0.5 * float(
        scipy_stats.poisson.sf(t, x)
    )


def run_validate(cfg: dict) -> int:
    rng = make_stream(cfg.get("seed") if cfg.get("seed") is not None else 7)
    checks = []

    c2 = thermal.gauss_hermite_constellation(2)
    c3 = thermal.gauss_hermite_constellation(3)
    dev = max(
        float(np.abs(c2.points - np.array([-1.0, 1.0])).max()),
        float(np.abs(c2.weights - 0.5).max()),
        float(np.abs(c3.points - np.array([-math.sqrt(3), 0.0, math.sqrt(3)])).max()),
        float(np.abs(c3.weights - np.array([1 / 6, 2 / 3, 1 / 6])).max()),
    )
    checks.append(_check("quadrature_closed_forms", dev, 1e-12))

    grid = np.linspace(0.01, 0.3, 30)
    dev = max(
        abs(thermal.thermal_vs_erasure_distance(mu, mu) - mu * mu) for mu in grid
    )
    checks.append(_check("thermal_erasure_distance_identity", dev, 1e-14))

    bw = circ.random_brickwork(6, 3, 0.9, rng)
    mu = circ.decompose_losses(circ.transfer_matrix(bw)).transmissions
    checks.append(_check("brickwork_uniform_loss", float(np.abs(mu - 0.9**3).max()), 1e-10))

    lossless = circ.random_brickwork(5, 3, 1.0, rng)
    a = circ.transfer_matrix(lossless)
    dev = float(np.abs(a @ a.conj().T - np.eye(5)).max())
    checks.append(_check("lossless_transfer_unitary", dev, 1e-12))

    moments = oracle.constellation_hermite_moments(
        thermal.gauss_hermite_constellation(4), 7
    )
    checks.append(_check("hermite_moment_vanishing", float(np.abs(moments[1:]).max()), 1e-10))

    excess = max(
        oracle.chi2_constellation(m, lam) - 2.36 * lam**m / (1.0 - lam)
        for m in (2, 3, 4)
        for lam in (0.1, 0.3)
    )
    checks.append(_check("chi2_within_budget", excess, 0.0))

    worst = max(
        _poisson_binomial_tvd(x, t) - (1.0 - math.exp(-x)) * x / t
        for x in (0.5, 1.0, 2.0)
        for t in (10, 100)
    )
    checks.append(_check("poisson_bernoulli_tvd_bound", worst, 0.0))

    photons = int(cfg.get("photons") or 2)
    if photons > oracle.ORACLE_MAX_PHOTONS:
        checks.append({
            "name": "mps_matches_oracle",
            "skipped": f"requested {photons} photons exceeds oracle cap "
                       f"{oracle.ORACLE_MAX_PHOTONS}",
        })
    else:
        test_c = circ.random_brickwork(4, 2, 1.0, rng)
        u = circ.transfer_matrix(test_c)
        pattern = (1,) * photons + (0,) * (4 - photons)
        exact = oracle.fock_output_distribution(u, pattern)
        state = mps.simulate_circuit(test_c, pattern)
        probs = np.array([mps.outcome_probability(state, o) for o in exact.outcomes])
        tvd = 0.5 * float(np.abs(probs - exact.weights).sum())
        checks.append(_check("mps_matches_oracle", tvd, 1e-10))

    circuit = _resolve_circuit(cfg)
    if circuit is not None:
        a = circ.transfer_matrix(circuit)
        dec = circ.decompose_losses(a)  # raises ModelViolationError -> exit 2
        checks.append(_check(
            "circuit_passive", float(np.sqrt(dec.transmissions.max())), 1.0 + 1e-9
        ))
        text = circ.circuit_to_json(circuit)
        again = circ.circuit_to_json(circ.circuit_from_json(text))
        checks.append(_check("circuit_roundtrip_bit_exact", 0.0 if text == again else 1.0, 0.0))

    all_pass = all(c.get("pass", True) for c in checks)
    print(_json_out({"checks": checks, "all_pass": all_pass}))
    return 0 if all_pass else 2


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------


def _read_samples(path: str, fmt_hint: str | None) -> tuple[list, list]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read samples {path}: {exc}") from exc
    if not lines:
        raise UsageError(f"sample file {path} is empty")
    fmt = fmt_hint or ("jsonl" if lines[0].lstrip().startswith("{") else "csv")
    counts, regimes = [], []
    for lineno, ln in enumerate(lines, start=1):
        try:
            if fmt == "jsonl":
                doc = json.loads(ln)
                counts.append([int(x) for x in doc["n"]])
                regimes.append(doc.get("regime", "?"))
            else:
                counts.append([int(x) for x in ln.split(",")])
                regimes.append("?")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(
                f"{path} line {lineno}: cannot parse as {fmt}: {exc}"
            ) from exc
    width = {len(c) for c in counts}
    if len(width) != 1:
        raise UsageError("sample rows have inconsistent mode counts")
    return counts, regimes


def run_stats(cfg: dict) -> int:
    path = cfg.get("input") or cfg.get("out")
    if not path:
        raise UsageError("stats needs --in (or an out path in the config)")
    # only honor the format as a parse hint when the user actually set it;
    # otherwise sniff jsonl-vs-csv from the first line
    explicit = cfg.get("_explicit", ())
    fmt_hint = cfg["format"] if "format" in explicit else None
    counts, regimes = _read_samples(path, fmt_hint)
    arr = np.array(counts, dtype=int)
    totals = arr.sum(axis=1)
    hist: dict = {}
    for t in totals:
        hist[int(t)] = hist.get(int(t), 0) + 1
    report = {
        "samples": int(arr.shape[0]),
        "modes": int(arr.shape[1]),
        "mean_counts": [float(x) for x in arr.mean(axis=0)],
        "total_photon_histogram": {str(k): hist[k] for k in sorted(hist)},
        "regimes": sorted(set(regimes)),
    }
    ref_path = cfg.get("reference")
    if ref_path:
        try:
            with open(ref_path, "r", encoding="utf-8") as fh:
                ref = json.load(fh)
            ref_dist = Distribution(
                outcomes=tuple(tuple(int(x) for x in o) for o in ref["outcomes"]),
                weights=np.array(ref["weights"], dtype=float),
                truncation_error=float(ref.get("truncation_error", 0.0)),
                subnormal=bool(ref.get("truncation_error", 0.0) > 0.0),
            )
        except (OSError, KeyError, json.JSONDecodeError, ValueError) as exc:
            raise UsageError(f"bad reference distribution {ref_path}: {exc}") from exc
        emp: dict = {}
        for row in counts:
            key = tuple(row)
            emp[key] = emp.get(key, 0.0) + 1.0 / len(counts)
        emp_dist = Distribution(
            outcomes=tuple(emp), weights=np.array(list(emp.values()))
        )
        report["tvd_to_reference"] = total_variation(emp_dist, ref_dist)
    print(_json_out(report))
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve(args)
        runner = {
            "plan": run_plan,
            "sample": run_sample,
            "validate": run_validate,
            "stats": run_stats,
        }[cfg["command"]]
        return runner(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ModelViolationError, DegenerateCircuitError) as exc:
        print(f"model violation: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
