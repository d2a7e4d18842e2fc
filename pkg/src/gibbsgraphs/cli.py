"""Command-line experiment driver.

Every subcommand writes its outputs plus a ``manifest.json`` into ``--out``.
Parameters come from flags or from a JSON file given with ``--config``
(flags win). All randomness derives from ``--seed``: replica ``i`` uses
``chain_rng(seed, i)``. Replicas may run on ``--threads`` worker threads;
results are merged in replica order, so outputs do not depend on it.

Exit status is 0 on success and 2 on invalid configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import platform
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .exact import ENUMERATION_CAP, enumerate_measure, exact_event_probability, total_variation
from .graph import SegmentGraph, h_p
from .local import (
    NeighborhoodQuery,
    RootedPattern,
    census_csv,
    has_all_short_edges,
    long_edge_count,
    mu_truncated,
    pattern_census,
    window_pairs,
    MU_ENUMERATION_CAP,
)
from .measures import (
    ModelParams,
    chain_rng,
    default_schedule,
    init_chain,
    mcmc_step,
    run_chain,
    sample_reference,
)
from .theory import alpha_star, local_limit_assumption_holds, theory_table


class ConfigError(ValueError):
    pass


def _parse_p(v) -> float:
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"p must be a number >= 1 or 'inf', got {v!r}")
    if not p >= 1:
        raise ConfigError(f"p must be >= 1 or 'inf', got {v!r}")
    return p


def _parse_list(v, cast) -> list:
    if isinstance(v, (list, tuple)):
        items = list(v)
    else:
        items = [s for s in str(v).split(",") if s.strip()]
    try:
        return [cast(x) for x in items]
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse list {v!r}")


def _int(name: str, v, lo: int | None = None) -> int:
    if isinstance(v, bool):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    try:
        out = int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    if out != v and not isinstance(v, str):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    if lo is not None and out < lo:
        raise ConfigError(f"{name} must be >= {lo}, got {out}")
    return out


def _params(cfg: dict, n=None) -> ModelParams:
    try:
        return ModelParams(
            _int("n", cfg["n"] if n is None else n, 2),
            float(cfg["gamma"]),
            float(cfg.get("b", 0.0)),
            _parse_p(cfg.get("p", "inf")),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc))


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt(x) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    return str(x)


def _write_csv(path: Path, header: list, rows: list) -> None:
    lines = [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _manifest(out: Path, command: str, cfg: dict, outputs: list, results: dict) -> None:
    hashed = {k: v for k, v in cfg.items() if k not in ("threads", "out", "config")}
    blob = json.dumps(hashed, sort_keys=True, default=str)
    import numba

    manifest = {
        "command": command,
        "config": hashed,
        "config_hash": hashlib.sha256(blob.encode()).hexdigest(),
        "seed": cfg.get("seed"),
        "threads": cfg.get("threads"),
        "versions": {
            "gibbsgraphs": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "numba": numba.__version__,
        },
        "outputs": outputs,
        "results": results,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")


# -- subcommands ---------------------------------------------------------------


def cmd_sample(cfg: dict, out: Path) -> dict:
    params = _params(cfg)
    mode = cfg["mode"]
    seed = _int("seed", cfg["seed"])
    n_samples = _int("samples", cfg["samples"], 1)
    results = {}
    if mode == "reference":
        graphs = _pmap(lambda i: sample_reference(params, chain_rng(seed, i)), range(n_samples), cfg["threads"])
    elif mode == "gibbs":
        d_burn, d_thin = default_schedule(params)
        burn = d_burn if cfg["burn_in"] is None else _int("burn_in", cfg["burn_in"], 0)
        thin = d_thin if cfg["thinning"] is None else _int("thinning", cfg["thinning"], 0)
        state = init_chain(params, chain_rng(seed, 0), cfg["start"])
        for _ in range(burn):
            mcmc_step(state, params)
        graphs = []
        for _ in range(n_samples):
            for _ in range(thin):
                mcmc_step(state, params)
            graphs.append(state.graph)
        results.update(burn_in=burn, thinning=thin, acceptance_rate=state.acceptance_rate)
    else:
        raise ConfigError(f"mode must be 'reference' or 'gibbs', got {mode!r}")
    (out / "samples.jsonl").write_text("".join(g.to_json() + "\n" for g in graphs))
    if cfg["check_exact"]:
        if params.n_pairs > ENUMERATION_CAP:
            raise ConfigError(f"--check-exact needs n <= 8, got n={params.n}")
        report = enumerate_measure(params if mode == "gibbs" else ModelParams(params.n, params.gamma, -1e9, params.p))
        counts = Counter(g.edges for g in graphs)
        results["tv_distance"] = total_variation(report, counts)
        results["exact_log_z"] = report.log_z
    results["mean_long_edges"] = float(np.mean([len(g.edges) for g in graphs]))
    return {"outputs": ["samples.jsonl"], "results": results}


def _gibbs_or_reference(cfg, params, seed, index, n_samples):
    if cfg["mode"] == "reference":
        return [sample_reference(params, chain_rng(seed, index, j)) for j in range(n_samples)]
    burn = None if cfg["burn_in"] is None else _int("burn_in", cfg["burn_in"], 0)
    thin = None if cfg["thinning"] is None else _int("thinning", cfg["thinning"], 0)
    return run_chain(params, seed, burn, n_samples, thin, start=cfg["start"], chain_index=index)


def cmd_scaling(cfg: dict, out: Path) -> dict:
    grid = _parse_list(cfg["grid"], int)
    if len(grid) < 2:
        raise ConfigError("scaling needs a grid of at least two values of n")
    params0 = _params(cfg, n=max(grid))
    mode = cfg["mode"]
    if mode not in ("gibbs", "reference"):
        raise ConfigError(f"mode must be 'reference' or 'gibbs', got {mode!r}")
    if mode == "gibbs" and not cfg["force"]:
        if not (params0.b < 0 or local_limit_assumption_holds(params0.gamma, params0.b, params0.p)):
            raise ConfigError(
                "MCMC mixing is not trusted at these parameters (need b < 0 or the local-limit "
                "assumption); pass --force to run anyway"
            )
    seed = _int("seed", cfg["seed"])
    n_samples = _int("samples", cfg["samples"], 2)
    a_star = alpha_star(params0.gamma, params0.b).value if mode == "gibbs" else 1.0

    def one(item):
        i, n = item
        params = _params(cfg, n=n)
        graphs = _gibbs_or_reference(cfg, params, seed, i, n_samples)
        hs = np.array([h_p(g, params.p) for g in graphs])
        ratios = np.log(hs) / math.log(n)
        return [
            n,
            float(ratios.mean()),
            float(ratios.std(ddof=1) / math.sqrt(len(ratios))),
            a_star,
            float((hs / n).mean()),
            float((hs / n).min()),
        ]

    rows = _pmap(one, list(enumerate(grid)), cfg["threads"])
    header = ["n", "mean_log_h_over_log_n", "stderr", "alpha_star", "mean_h_over_n", "min_h_over_n"]
    _write_csv(out / "scaling.csv", header, rows)
    return {"outputs": ["scaling.csv"], "results": {"rows": len(rows)}}


def _load_patterns(path: str) -> list[RootedPattern]:
    try:
        data = json.loads(Path(path).read_text())
        if isinstance(data, dict):
            data = [data]
        return [RootedPattern.from_dict(d) for d in data]
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise ConfigError(f"malformed pattern file {path}: {exc}")


def cmd_localfreq(cfg: dict, out: Path) -> dict:
    params = _params(cfg)
    try:
        query = NeighborhoodQuery(_int("k", cfg["k"], 0), _int("l", cfg["l"], 1))
    except ValueError as exc:
        raise ConfigError(str(exc))
    seed = _int("seed", cfg["seed"])
    n_samples = _int("samples", cfg["samples"], 1)
    eps = float(cfg["eps"])
    patterns = _load_patterns(cfg["patterns"]) if cfg["patterns"] else [RootedPattern.path_ball(query.k)]
    if cfg["mode"] not in ("gibbs", "reference"):
        raise ConfigError(f"mode must be 'reference' or 'gibbs', got {cfg['mode']!r}")

    if cfg["mode"] == "reference":
        graphs = _pmap(lambda i: sample_reference(params, chain_rng(seed, i)), range(n_samples), cfg["threads"])
    else:
        graphs = _gibbs_or_reference(cfg, params, seed, 0, n_samples)

    census = pattern_census(graphs, query)
    (out / "census.csv").write_text(census_csv(census))

    exact = len(window_pairs(query.k, query.l)) <= MU_ENUMERATION_CAP
    rows = []
    for pat in patterns:
        c = census.get(pat.canonical())
        mean = c.mean if c else 0.0
        se = c.stderr if c else 0.0
        if exact:
            mu = mu_truncated(params.gamma, query, pat)
        else:
            mu = mu_truncated(params.gamma, query, pat, "monte_carlo", int(cfg["mc_samples"]), seed)
        rows.append([pat.key(), "exact" if exact else "monte_carlo", mean, se, mu, abs(mean - mu)])
    _write_csv(out / "mu.csv", ["pattern_hash", "mu_mode", "census_mean", "census_stderr", "mu", "abs_diff"], rows)

    counts = np.array([long_edge_count(g, query.l) for g in graphs])
    exceed = float(np.mean(counts > eps * params.n))
    _write_csv(
        out / "longedges.csv",
        ["l", "eps", "samples", "exceed_fraction", "mean_long_edges", "max_long_edges"],
        [[query.l, eps, n_samples, exceed, float(counts.mean()), int(counts.max())]],
    )
    return {
        "outputs": ["census.csv", "mu.csv", "longedges.csv"],
        "results": {"patterns_in_census": len(census), "exceed_fraction": exceed},
    }


def cmd_nolimit(cfg: dict, out: Path) -> dict:
    n_grid = _parse_list(cfg["n_grid"], int)
    b_grid = _parse_list(cfg["b_grid"], float)
    if not n_grid or not b_grid:
        raise ConfigError("nolimit needs non-empty n and b grids")
    L = _int("L", cfg["L"], 1)
    seed = _int("seed", cfg["seed"])
    notes = []
    gamma = float(cfg["gamma"])
    p = _parse_p(cfg["p"])
    for b in b_grid:
        if not (gamma > 1 and math.isfinite(p) and b > p + 1):
            msg = f"gamma={gamma}, p={p}, b={b} is outside gamma > 1, p < inf, b > p + 1"
            print(f"gibbsgraphs nolimit: warning: {msg}", file=sys.stderr)
            notes.append(msg)

    items = [(i, n, b) for i, (n, b) in enumerate((n, b) for n in n_grid for b in b_grid)]

    def one(item):
        i, n, b = item
        params = _params({**cfg, "b": b}, n=n)
        short = sum(max(n - d, 0) for d in range(2, L + 1))
        if params.n_pairs <= min(ENUMERATION_CAP, int(cfg["exact_max_pairs"])):
            rep = enumerate_measure(params)
            prob = exact_event_probability(rep, lambda g: has_all_short_edges(g, L))
            frac = (
                sum(pr * sum(1 for x, y in g.edges if y - x <= L) / short for g, _, pr in rep.entries())
                if short
                else 1.0
            )
            return [n, b, "exact", prob, 0.0, frac]
        graphs = _gibbs_or_reference({**cfg, "mode": "gibbs"}, params, seed, i, _int("samples", cfg["samples"], 2))
        hits = np.array([has_all_short_edges(g, L) for g in graphs], dtype=float)
        fr = np.array([sum(1 for x, y in g.edges if y - x <= L) / short if short else 1.0 for g in graphs])
        return [n, b, "mcmc", float(hits.mean()), float(hits.std(ddof=1) / math.sqrt(len(hits))), float(fr.mean())]

    rows = _pmap(one, items, cfg["threads"])
    _write_csv(out / "nolimit.csv", ["n", "b", "method", "prob_L", "stderr", "mean_short_edge_fraction"], rows)
    return {"outputs": ["nolimit.csv"], "results": {"warnings": notes}}


def cmd_theory(cfg: dict, out: Path) -> dict:
    gammas = _parse_list(cfg["gammas"], float)
    bs = _parse_list(cfg["bs"], float)
    if not gammas or not bs or any(not g > 0 for g in gammas):
        raise ConfigError("theory needs non-empty grids with gamma > 0")
    (out / "theory.csv").write_text(theory_table(gammas, bs, _parse_p(cfg["p"])))
    return {"outputs": ["theory.csv"], "results": {}}


COMMANDS = {
    "sample": (
        cmd_sample,
        dict(mode="reference", b=0.0, p="inf", samples=10, burn_in=None, thinning=None,
             start="path", check_exact=False),
        "draw reference or Gibbs samples",
        "Draw graphs; writes samples.jsonl (one graph JSON object per line).",
    ),
    "scaling": (
        cmd_scaling,
        dict(mode="gibbs", b=0.0, p="inf", grid="128,256,512", samples=50, burn_in=None,
             thinning=None, start="reference", force=False),
        "estimate log h_p / log n over an n-grid",
        "scaling.csv columns: n, mean_log_h_over_log_n, stderr, alpha_star, mean_h_over_n, min_h_over_n.",
    ),
    "localfreq": (
        cmd_localfreq,
        dict(mode="reference", b=0.0, p="inf", k=1, l=3, samples=50, eps=0.05, patterns=None,
             mc_samples=100_000, burn_in=None, thinning=None, start="reference"),
        "ball-pattern census against truncated-ball probabilities",
        "census.csv: pattern_hash, pattern_json, mean, stderr. mu.csv: pattern_hash, mu_mode, "
        "census_mean, census_stderr, mu, abs_diff. longedges.csv: l, eps, samples, "
        "exceed_fraction, mean_long_edges, max_long_edges.",
    ),
    "nolimit": (
        cmd_nolimit,
        dict(gamma=2.0, p=1.0, L=2, n_grid="5", b_grid="2,3,4,5,8", samples=50, burn_in=None,
             thinning=None, start="path", exact_max_pairs=ENUMERATION_CAP),
        "probability that all short edges are present",
        "nolimit.csv columns: n, b, method, prob_L, stderr, mean_short_edge_fraction.",
    ),
    "theory": (
        cmd_theory,
        dict(gammas="0.5,1,2", bs="-0.5,0,0.25,0.5,0.75,1", p="inf"),
        "closed-form exponent and parameter-region table",
        "theory.csv columns: gamma, b, p, alpha_star, critical_k, covered, in_E_p, local_limit_assumption.",
    ),
}

FLAG_TYPES = {
    "n": int, "gamma": float, "b": float, "samples": int, "burn_in": int, "thinning": int,
    "k": int, "l": int, "eps": float, "mc_samples": int, "exact_max_pairs": int,
}

REQUIRED = {"sample": ("n", "gamma"), "scaling": ("gamma",), "localfreq": ("n", "gamma")}


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="gibbsgraphs", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, defaults, short, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=short, description=help_text)
        sp.add_argument("--config", default=S, help="JSON file of parameters; flags take precedence")
        sp.add_argument("--out", default=S, help="output directory (default: current directory)")
        sp.add_argument("--seed", type=int, default=S, help="master seed (default 0)")
        sp.add_argument("--threads", type=int, default=S, help="worker threads (default 1)")
        for key in sorted(set(defaults) | set(REQUIRED.get(name, ()))):
            if key in ("check_exact", "force"):
                sp.add_argument("--" + key.replace("_", "-"), action="store_true", default=S)
            elif key == "L":
                sp.add_argument("--L", default=S, type=int)
            else:
                sp.add_argument("--" + key.replace("_", "-"), default=S, dest=key, type=FLAG_TYPES.get(key, str))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    name = args.pop("command")
    fn, defaults, _, _ = COMMANDS[name]
    cfg = {"seed": 0, "threads": 1, "out": ".", **dict.fromkeys(REQUIRED.get(name, ())), **defaults}
    try:
        if "config" in args:
            try:
                file_cfg = json.loads(Path(args["config"]).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {args['config']}: {exc}")
            if not isinstance(file_cfg, dict):
                raise ConfigError("config file must hold a JSON object")
            unknown = set(file_cfg) - set(cfg)
            if unknown:
                raise ConfigError(f"unknown config keys: {sorted(unknown)}")
            cfg.update(file_cfg)
        cfg.update(args)
        for key in REQUIRED.get(name, ()):
            if cfg.get(key) is None:
                raise ConfigError(f"--{key} is required")
        cfg["threads"] = _int("threads", cfg["threads"], 1)
        out = Path(cfg["out"])
        out.mkdir(parents=True, exist_ok=True)
        info = fn(cfg, out)
    except ValueError as exc:
        print(f"gibbsgraphs {name}: error: {exc}", file=sys.stderr)
        return 2
    _manifest(out, name, cfg, info["outputs"], info["results"])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
