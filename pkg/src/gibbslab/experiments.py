"""Reproducible experiment drivers behind the CLI.

Three report pipelines write delimited CSV (one '#' metadata line, then a
header row, floats at 17 significant digits) plus rendered figures:

- fig1: the stability constant against its growth lower bound on three
  m = alpha n^beta scaling grids;
- fig2: the largest degree keeping the condition number below kappa0,
  for polynomial least squares and Fourier extensions;
- fig3: L2 reconstruction errors of both methods on eight test functions.

Everything is a pure function of (config, seed): reruns are byte-identical.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .conditioning import _fe_pinv, _pls_pinv, kappa_fe_randomized, kappa_pls, select_max_n
from .fourier_core import (
    FIG3_FUNCTIONS,
    CoeffVec,
    coeffs_exact,
    norm_l2,
    parse_test_function,
    read_coeffs_csv,
)
from .framebound import LOG10_CAP_DD, LOG10_CAP_DOUBLE, bnm, growth_log10
from .polyspace import LegendrePoly
from .reconstruct import ExtensionFn, fourier_extension, iprm, l2_error, poly_ls
from . import plotting

DEFAULT_ALPHA_BETA = ((0.5, 1.0), (0.25, 1.25), (0.125, 1.5))
DEFAULT_T = (1.5, 2.0, 4.0)


@dataclass(frozen=True)
class ExperimentConfig:
    figure: str = "fig1"
    out_dir: str = "out"
    seed: int = 1234
    kappa0: float = 10.0
    trials: int = 100
    stride: int = 1
    precision_mode: str = "double"
    alpha_beta: tuple = DEFAULT_ALPHA_BETA
    T_list: tuple = DEFAULT_T
    fig2_m_max: int = 200
    fig3_m_grid: tuple = tuple(range(10, 201, 10))
    make_plots: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        raw = json.loads(text)
        known = {f_.name for f_ in cls.__dataclass_fields__.values()}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "alpha_beta" in raw:
            raw["alpha_beta"] = tuple(tuple(p) for p in raw["alpha_beta"])
        for key in ("T_list", "fig3_m_grid"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    if x is None:
        return ""
    return str(x)


def _write_csv(path, header, rows, meta: dict) -> str:
    meta = {"artifact": "gibbslab", "version": __version__, **meta}
    with open(path, "w", newline="") as fh:
        fh.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")
    return str(path)


# ----------------------------------------------------------------------
# fig1: growth of the stability constant on scaling grids
# ----------------------------------------------------------------------

def fig1_grid(alpha: float, beta: float, precision_mode: str):
    """Admissible (n, m) pairs: m >= 1, enough coefficients, growth in regime."""
    cap = LOG10_CAP_DOUBLE if precision_mode == "double" else LOG10_CAP_DD
    out = []
    for n in range(1, 2000):
        m = _round_half_up(alpha * n ** beta)
        if m < 1 or 2 * m < n:
            continue
        if growth_log10(n, m) > cap:
            break
        out.append((n, m))
    return out


def run_fig1(config: ExperimentConfig) -> list[str]:
    os.makedirs(config.out_dir, exist_ok=True)
    written = []
    per_pair = {}
    for alpha, beta in config.alpha_beta:
        rows = []
        for n, m in fig1_grid(alpha, beta, config.precision_mode):
            rep = bnm(n, m, precision_mode=config.precision_mode)
            if not rep.b_value >= rep.b_star:
                raise RuntimeError(
                    f"stability constant below its lower bound at (n={n}, m={m}): "
                    f"{rep.b_value} < {rep.b_star}")
            scale = n ** (beta - 2.0)
            rows.append((n, m, rep.b_value, rep.b_star,
                         scale * math.log(rep.b_value), scale * math.log(rep.b_star)))
        per_pair[(alpha, beta)] = rows
        path = os.path.join(config.out_dir, f"fig1_alpha{alpha:g}_beta{beta:g}.csv")
        written.append(_write_csv(
            path,
            ["n", "m", "b_value", "b_star", "scaled_log_b", "scaled_log_b_star"],
            rows,
            {"figure": "fig1", "seed": config.seed, "precision_mode": config.precision_mode,
             "alpha": f"{alpha:g}", "beta": f"{beta:g}"},
        ))
    if config.make_plots:
        written.append(plotting.plot_growth_grids(
            per_pair, os.path.join(config.out_dir, "fig1.png")))
    return written


# ----------------------------------------------------------------------
# fig2: parameter selection under the condition-number budget
# ----------------------------------------------------------------------

def run_fig2(config: ExperimentConfig) -> list[str]:
    os.makedirs(config.out_dir, exist_ok=True)
    ms = list(range(1, config.fig2_m_max + 1, config.stride))
    rows = []
    audit_pairs = 0
    audit_inversions = 0

    prev = 0
    for m in ms:
        trace: list = []
        prev = select_max_n("PLS", m, kappa0=config.kappa0, prev_n=prev,
                            precision_mode=config.precision_mode, trace=trace)
        audit_p, audit_i = _count_inversions(trace)
        audit_pairs += audit_p
        audit_inversions += audit_i
        kappa = kappa_pls(prev, m, precision_mode=config.precision_mode).kappa
        rows.append(("PLS", None, m, prev, prev / math.sqrt(m), prev / m, kappa))

    for T in config.T_list:
        prev = 0
        for m in ms:
            trace = []
            prev = select_max_n("FE", m, T=T, kappa0=config.kappa0,
                                trials=config.trials, seed=config.seed,
                                prev_n=prev, trace=trace)
            audit_p, audit_i = _count_inversions(trace)
            audit_pairs += audit_p
            audit_inversions += audit_i
            kappa = kappa_fe_randomized(prev, m, T, t=config.trials, seed=config.seed).kappa
            rows.append(("FE", T, m, prev, prev / math.sqrt(m), prev / m, kappa))

    path = os.path.join(config.out_dir, "fig2.csv")
    written = [_write_csv(
        path,
        ["method", "T", "m", "n", "n_over_sqrt_m", "n_over_m", "kappa"],
        rows,
        {"figure": "fig2", "seed": config.seed, "precision_mode": config.precision_mode,
         "kappa0": f"{config.kappa0:g}", "trials": config.trials, "stride": config.stride,
         "monotonicity_audit": f"{audit_inversions}/{audit_pairs}"},
    )]
    if config.make_plots:
        written.append(plotting.plot_selection(rows, os.path.join(config.out_dir, "fig2.png")))
    return written


def _count_inversions(trace):
    """(pairs, inversions) among consecutively evaluated degrees."""
    by_n = dict(trace)
    ns = sorted(by_n)
    pairs = 0
    inv = 0
    for a, b in zip(ns, ns[1:]):
        if b == a + 1:
            pairs += 1
            if by_n[b] < by_n[a]:
                inv += 1
    return pairs, inv


# ----------------------------------------------------------------------
# fig3: reconstruction errors on the eight test functions
# ----------------------------------------------------------------------

def _fe_reconstruct(values: np.ndarray, n: int, m: int, T: float) -> ExtensionFn:
    return ExtensionFn(T=T, n=n, a=_fe_pinv(n, m, T) @ values)


def _pls_reconstruct(values: np.ndarray, n: int, m: int) -> LegendrePoly:
    x = _pls_pinv(n, m) @ values
    return LegendrePoly(x.real if np.max(np.abs(x.imag)) <= 1e-10 * max(np.max(np.abs(x)), 1e-300) else x)


def run_fig3(config: ExperimentConfig) -> list[str]:
    os.makedirs(config.out_dir, exist_ok=True)
    ms = list(config.fig3_m_grid)
    m_max = max(ms)

    # selections are shared across the eight functions
    pls_n = {}
    prev = 0
    for m in ms:
        prev = select_max_n("PLS", m, kappa0=config.kappa0, prev_n=prev,
                            precision_mode=config.precision_mode)
        pls_n[m] = prev
    fe_n = {}
    for T in config.T_list:
        prev = 0
        for m in ms:
            prev = select_max_n("FE", m, T=T, kappa0=config.kappa0,
                                trials=config.trials, seed=config.seed, prev_n=prev)
            fe_n[(T, m)] = prev

    written = []
    for f in FIG3_FUNCTIONS:
        full = coeffs_exact(f, m_max)
        rows = []
        for m in ms:
            c = full.truncate(m)
            n = pls_n[m]
            rows.append((m, "PLS", None, n,
                         l2_error(f, _pls_reconstruct(c.values, n, m))))
            for T in config.T_list:
                n = fe_n[(T, m)]
                rows.append((m, "FE", T, n,
                             l2_error(f, _fe_reconstruct(c.values, n, m, T))))
        slug = f.label.replace("(", "_").replace(")", "").replace(".", "p")
        path = os.path.join(config.out_dir, f"fig3_{slug}.csv")
        written.append(_write_csv(
            path,
            ["m", "method", "T", "n", "l2_error"],
            rows,
            {"figure": "fig3", "seed": config.seed, "precision_mode": config.precision_mode,
             "kappa0": f"{config.kappa0:g}", "trials": config.trials,
             "function": f.label},
        ))
        if config.make_plots:
            written.append(plotting.plot_error_curves(
                f.label, rows, os.path.join(config.out_dir, f"fig3_{slug}.png")))
    return written


# ----------------------------------------------------------------------
# one-shot recovery
# ----------------------------------------------------------------------

def recover(method: str, out_dir: str, n: int | None = None, m: int | None = None,
            T: float | None = None, coeff_file: str | None = None,
            function_spec: str | None = None, samples: int = 1001) -> dict:
    """Reconstruct from a coefficient file or a named test function.

    Writes reconstruction JSON plus equispaced sample values; reports the
    L2 error when the true function is known.
    """
    method = method.upper()
    if method not in ("IPRM", "PLS", "FE"):
        raise ValueError(f"unknown method {method!r}")
    f = None
    if coeff_file is not None:
        c = read_coeffs_csv(coeff_file)
        if function_spec is not None:
            f = parse_test_function(function_spec)
    elif function_spec is not None:
        if m is None:
            raise ValueError("recovering from a function spec needs m")
        f = parse_test_function(function_spec)
        c = coeffs_exact(f, m)
    else:
        raise ValueError("need a coefficient file or a function spec")

    if method == "IPRM":
        rec = iprm(c)
        payload = {"basis": "legendre_orthonormal", "parameters": {"m": c.m, "degree": rec.degree}}
    elif method == "PLS":
        if n is None:
            raise ValueError("PLS needs n")
        rec = poly_ls(c, n)
        payload = {"basis": "legendre_orthonormal", "parameters": {"m": c.m, "n": n, "degree": rec.degree}}
    else:
        if n is None or T is None:
            raise ValueError("FE needs n and T")
        rec, info = fourier_extension(c, n, T)
        payload = {"basis": "fourier_extension",
                   "parameters": {"m": c.m, "n": n, "T": T, "rank_used": info.rank_used}}

    coeff_array = rec.coeffs if method != "FE" else rec.a
    coeff_array = np.asarray(coeff_array, dtype=complex)
    payload["method"] = method
    payload["coefficients"] = [[float(v.real), float(v.imag)] for v in coeff_array]
    if f is not None:
        payload["l2_error"] = l2_error(f, rec)

    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "reconstruction.json")
    with open(json_path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")

    x = np.linspace(-1.0, 1.0, samples)
    vals = np.asarray(rec(x), dtype=complex)
    samples_path = os.path.join(out_dir, "samples.csv")
    _write_csv(samples_path, ["x", "re", "im"],
               [(float(xi), float(v.real), float(v.imag)) for xi, v in zip(x, vals)],
               {"kind": "samples", "method": method})
    return {"json": json_path, "samples": samples_path,
            "l2_error": payload.get("l2_error")}


def run_figure(config: ExperimentConfig) -> list[str]:
    if config.figure == "fig1":
        return run_fig1(config)
    if config.figure == "fig2":
        return run_fig2(config)
    if config.figure == "fig3":
        return run_fig3(config)
    raise ValueError(f"unknown figure {config.figure!r}")
