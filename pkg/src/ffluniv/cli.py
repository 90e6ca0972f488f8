"""Batch experiment runner with deterministic output files.

Each subcommand reads one flat key=value config with [section] headers,
writes its primary results as CSV (schema header line, LF endings,
complex numbers as re+imj with 15 significant digits) and JSON (sorted
keys), and isolates timing in a separate metadata file so the primary
outputs are byte identical across repeated runs.  Exit codes: 0 on
success, 1 when a computed invariant is violated (an RH VIOLATION root
or a failed certification), 2 for config problems.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .algebra import Poly, euler_phi, factorize, field, primes_of_degree
from .approximation import (
    PhaseAssignment,
    counting_checks,
    fit_phases,
    kappa,
    mv_g_experiment,
    mv_h_experiment,
    mv_tail_experiment,
    peak_poly,
)
from .characters import UnitGroup, character_from_text
from .lfunctions import (
    classify_roots,
    default_annulus_grid,
    hybrid_check,
    l_coeffs,
    rectangle_grid,
    rh_family_sweep,
    roots,
)
from .universality import (
    TargetFunction,
    character_sieve,
    good_bad_split,
    guided_search,
    universality_search,
)

COMMANDS = (
    "primes", "phi", "lpoly", "rhsweep", "hybrid", "peak", "mvg", "mvh",
    "mvtail", "counting", "fit", "sieve", "search", "guided", "splitgb",
)

_U_GRID_KEYS = {"n_radii", "n_angles", "r_lo", "r_hi", "angle_span"}
_S_GRID_KEYS = {"n_sigma", "n_t", "sigma_lo", "sigma_hi", "t_lo", "t_hi"}
_GRID_KEYS = {"plane"} | _U_GRID_KEYS | _S_GRID_KEYS

_FIELD = {"field": {"p", "k"}}
_RUN = {"run": {"out", "workers"}}
_MODULUS = {"modulus": {"Q"}}
_TARGET = {"target": {"kind", "params"}}
_GRID = {"grid": _GRID_KEYS}

ALLOWED = {
    "primes": {**_FIELD, **_RUN, "params": {"degree"}},
    "phi": {**_FIELD, **_RUN, **_MODULUS},
    "lpoly": {**_FIELD, **_RUN, **_MODULUS, "character": {"exponents"}},
    "rhsweep": {**_FIELD, **_RUN, **_MODULUS, **_GRID, "params": {"K"}},
    "hybrid": {**_FIELD, **_RUN, **_MODULUS, **_GRID, "params": {"K"}},
    "peak": {**_RUN, "params": {"K", "delta"}},
    "mvg": {**_FIELD, **_RUN, **_MODULUS, "params": {"K", "delta"}, "phases": None},
    "mvh": {**_FIELD, **_RUN, **_MODULUS,
            "params": {"K", "delta", "epsilon"}, "phases": None},
    "mvtail": {**_FIELD, **_RUN, **_MODULUS,
               "params": {"K", "delta", "b_scale", "sigma", "z"}, "phases": None},
    "counting": {**_FIELD, **_RUN, **_MODULUS, "params": {"x_max"}},
    "fit": {**_FIELD, **_RUN, **_MODULUS, **_GRID, **_TARGET,
            "params": {"mu", "rho"}},
    "sieve": {**_FIELD, **_RUN, **_MODULUS,
              "params": {"delta", "mu", "zero_targets"}, "phases": None},
    "search": {**_FIELD, **_RUN, **_MODULUS, **_GRID, **_TARGET,
               "params": {"epsilon"}},
    "guided": {**_FIELD, **_RUN, **_MODULUS, **_GRID, **_TARGET,
               "params": {"mu", "rho", "epsilon"}},
    "splitgb": {**_FIELD, **_RUN, **_MODULUS, **_GRID, "phases": None,
                "params": {"peak_K", "peak_delta", "K", "rho", "epsilon"}},
}


class ConfigError(Exception):
    """Any problem with the config file: parsing, keys, or values."""


@dataclass
class ExperimentConfig:
    """Parsed config: the command plus section -> key -> raw string."""

    command: str
    sections: dict = dc_field(default_factory=dict)

    def get(self, section, key, default=None, required=False):
        got = self.sections.get(section, {}).get(key)
        if got is None:
            if required:
                raise ConfigError(f"missing required key '{key}' in [{section}]")
            return default
        return got

    def _typed(self, section, key, default, required, conv, what):
        raw = self.get(section, key, required=required)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError:
            raise ConfigError(
                f"[{section}] {key}: expected {what}, got {raw!r}"
            ) from None

    def get_int(self, section, key, default=None, required=False):
        return self._typed(section, key, default, required, int, "an integer")

    def get_float(self, section, key, default=None, required=False):
        return self._typed(section, key, default, required, float, "a number")

    def get_bool(self, section, key, default=None, required=False):
        def conv(raw):
            low = raw.strip().lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)

        return self._typed(section, key, default, required, conv, "a boolean")


def parse_config(text, command, strict=True):
    """Parse key=value text with [section] headers into an ExperimentConfig.

    Unknown sections or keys are rejected in strict mode and ignored with
    a warning otherwise; [phases] keys are polynomial texts and pass as
    is.  Parse errors keep configparser's line-number diagnostics.
    """
    if command not in ALLOWED:
        raise ConfigError(f"unknown command: {command}")
    cp = configparser.ConfigParser(
        delimiters=("=",), interpolation=None, strict=True
    )
    cp.optionxform = str
    try:
        cp.read_string(text, source="config")
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if cp.defaults():
        raise ConfigError("[DEFAULT] section is not supported")
    allowed = ALLOWED[command]
    sections = {}
    for name in cp.sections():
        if name not in allowed:
            if strict:
                raise ConfigError(
                    f"unknown section [{name}] for command '{command}'"
                )
            print(f"warning: ignoring section [{name}]", file=sys.stderr)
            continue
        keys = allowed[name]
        body = {}
        for key, value in cp[name].items():
            if keys is not None and key not in keys:
                if strict:
                    raise ConfigError(
                        f"unknown key '{key}' in [{name}] for command '{command}'"
                    )
                print(f"warning: ignoring key [{name}] {key}", file=sys.stderr)
                continue
            body[key] = value.strip()
        sections[name] = body
    return ExperimentConfig(command, sections)


def serialize_config(cfg):
    """Render a config back to key=value text; parse of it is identity."""
    lines = []
    for name, body in cfg.sections.items():
        lines.append(f"[{name}]")
        for key, value in body.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def ffmt(x):
    """Floats with 15 significant digits; nan prints as nan."""
    return format(float(x), ".15g")


def cfmt(z):
    """Complex as re+imj with 15 significant digits."""
    z = complex(z)
    return f"{z.real:.15g}{z.imag:+.15g}j"


def _jf(x):
    x = float(x)
    return None if math.isnan(x) else x


def write_csv(path, schema, header, rows):
    lines = [f"# schema={schema}/v1", ",".join(header)]
    lines.extend(",".join(cell for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path, schema, payload):
    body = {"schema": f"{schema}/v1", **payload}
    path.write_text(
        json.dumps(body, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _exps(exponents):
    return ":".join(str(int(m)) for m in exponents)


def _field_of(cfg):
    p = cfg.get_int("field", "p", required=True)
    k = cfg.get_int("field", "k", 1)
    try:
        return field(p, k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _modulus_of(cfg):
    spec = _field_of(cfg)
    text = cfg.get("modulus", "Q", required=True)
    try:
        Q = Poly.parse(spec, text)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"[modulus] Q: {exc}") from None
    return Q


def _grid_of(cfg, q, default_plane="u"):
    body = cfg.sections.get("grid", {})
    plane = body.get("plane", default_plane)
    if plane not in ("u", "s"):
        raise ConfigError("[grid] plane must be 'u' or 's'")
    wrong = set(body) - {"plane"} - (_U_GRID_KEYS if plane == "u" else _S_GRID_KEYS)
    if wrong:
        raise ConfigError(
            f"[grid] keys {sorted(wrong)} do not apply to plane '{plane}'"
        )
    try:
        if plane == "u":
            return default_annulus_grid(
                q,
                n_radii=cfg.get_int("grid", "n_radii", 10),
                n_angles=cfg.get_int("grid", "n_angles", 20),
                r_lo=cfg.get_float("grid", "r_lo"),
                r_hi=cfg.get_float("grid", "r_hi"),
                angle_span=cfg.get_float("grid", "angle_span", 0.8 * math.pi),
            )
        return rectangle_grid(
            q,
            n_sigma=cfg.get_int("grid", "n_sigma", 8),
            n_t=cfg.get_int("grid", "n_t", 8),
            sigma_lo=cfg.get_float("grid", "sigma_lo", 0.55),
            sigma_hi=cfg.get_float("grid", "sigma_hi", 0.95),
            t_lo=cfg.get_float("grid", "t_lo"),
            t_hi=cfg.get_float("grid", "t_hi"),
        )
    except ValueError as exc:
        raise ConfigError(f"[grid]: {exc}") from None


def _target_of(cfg):
    kind = cfg.get("target", "kind", required=True)
    raw = cfg.get("target", "params", required=True)
    try:
        params = [complex(tok) for tok in raw.split()]
    except ValueError:
        raise ConfigError(f"[target] params: not complex numbers: {raw!r}") from None
    try:
        if kind == "constant":
            (c,) = params
            return TargetFunction.constant(c)
        if kind == "reciprocal_linear":
            (a,) = params
            return TargetFunction.reciprocal_linear(a)
        if kind == "polynomial":
            return TargetFunction.polynomial(params)
        if kind == "exp_polynomial":
            return TargetFunction.exp_polynomial(params)
    except ValueError as exc:
        raise ConfigError(f"[target]: {exc}") from None
    raise ConfigError(f"[target] kind: unknown target kind {kind!r}")


def _phases_of(cfg, spec, required=True):
    body = cfg.sections.get("phases", {})
    if not body and required:
        raise ConfigError("missing [phases] section")
    items = []
    for ptext, value in body.items():
        try:
            P = Poly.parse(spec, ptext)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"[phases] {ptext!r}: {exc}") from None
        try:
            theta = float(value)
        except ValueError:
            raise ConfigError(
                f"[phases] {ptext}: expected a number, got {value!r}"
            ) from None
        items.append((P, theta))
    try:
        return PhaseAssignment(items)
    except ValueError as exc:
        raise ConfigError(f"[phases]: {exc}") from None


def _peak_of(cfg, k_key="K", d_key="delta"):
    K = cfg.get_int("params", k_key, required=True)
    delta = cfg.get_float("params", d_key, required=True)
    return peak_poly(K, delta)


def _workers_of(cfg):
    w = cfg.get_int("run", "workers", 1)
    if w < 1:
        raise ConfigError("[run] workers must be at least 1")
    return w


def cmd_primes(cfg, out):
    spec = _field_of(cfg)
    degree = cfg.get_int("params", "degree", required=True)
    primes = primes_of_degree(spec, degree)
    write_csv(
        out / "primes.csv", "primes", ("code", "text"),
        ((str(P.code), P.text) for P in primes),
    )
    write_json(out / "primes.json", "primes-report", {
        "field": spec.text, "degree": degree, "count": len(primes),
    })
    return 0


def cmd_phi(cfg, out):
    Q = _modulus_of(cfg)
    fac = factorize(Q)
    write_json(out / "phi.json", "phi-report", {
        "field": Q.spec.text,
        "modulus": Q.text,
        "phi": int(euler_phi(Q)),
        "unit": int(fac.unit),
        "factors": [[P.text, int(e)] for P, e in fac],
    })
    return 0


def cmd_lpoly(cfg, out):
    Q = _modulus_of(cfg)
    group = UnitGroup(Q)
    raw = cfg.get("character", "exponents", required=True)
    try:
        chi = character_from_text(group, f"{Q.text} : {raw}")
    except ValueError as exc:
        raise ConfigError(f"[character] exponents: {exc}") from None
    L = l_coeffs(chi)
    alphas = roots(L)
    write_json(out / "lpoly.json", "lpoly-report", {
        "field": Q.spec.text,
        "modulus": Q.text,
        "character": chi.text,
        "is_even": bool(chi.is_even),
        "order": int(chi.order),
        "observed_degree": int(L.observed_degree),
        "coefficients": [cfmt(c) for c in L.coeffs],
        "inverse_roots": [cfmt(a) for a in alphas],
        "root_moduli": [float(abs(a)) for a in alphas],
        "classifications": list(classify_roots(alphas, Q.spec.q)),
    })
    return 0


def cmd_rhsweep(cfg, out):
    Q = _modulus_of(cfg)
    group = UnitGroup(Q)
    grid = _grid_of(cfg, Q.spec.q) if "grid" in cfg.sections else None
    K = cfg.get_int("params", "K", 4)
    records = rh_family_sweep(group, hybrid_grid=grid, K=K, workers=_workers_of(cfg))
    rows = []
    violations = 0
    worst = float("nan")
    for rec in records:
        bad = "VIOLATION" in rec.classifications
        violations += bad
        if not math.isnan(rec.max_hybrid_residual):
            worst = (rec.max_hybrid_residual if math.isnan(worst)
                     else max(worst, rec.max_hybrid_residual))
        rows.append((
            _exps(rec.exponents),
            str(rec.observed_degree),
            ";".join(ffmt(m) for m in rec.root_moduli),
            "VIOLATION" if bad else "ok",
            ffmt(rec.max_hybrid_residual),
        ))
    write_csv(
        out / "rhsweep.csv", "rhsweep",
        ("exponents", "observed_degree", "root_moduli", "classification",
         "max_hybrid_residual"),
        rows,
    )
    write_json(out / "rhsweep.json", "rhsweep-report", {
        "field": Q.spec.text,
        "modulus": Q.text,
        "phi": int(group.phi),
        "characters": len(records),
        "violations": int(violations),
        "K": K,
        "max_hybrid_residual": _jf(worst),
    })
    return 1 if violations else 0


def cmd_hybrid(cfg, out):
    Q = _modulus_of(cfg)
    group = UnitGroup(Q)
    grid = _grid_of(cfg, Q.spec.q)
    K = cfg.get_int("params", "K", required=True)
    rows = []
    worst = 0.0
    for chi in group.characters():
        if chi.is_principal:
            continue
        res = hybrid_check(chi, grid, K)
        worst = max(worst, res)
        rows.append((_exps(chi.exponents), ffmt(res)))
    write_csv(out / "hybrid.csv", "hybrid", ("exponents", "max_residual"), rows)
    write_json(out / "hybrid.json", "hybrid-report", {
        "field": Q.spec.text, "modulus": Q.text, "K": K,
        "grid_points": len(grid), "max_residual": float(worst),
    })
    return 0


def cmd_peak(cfg, out):
    f = _peak_of(cfg)
    write_csv(
        out / "peak.csv", "peak-coeffs", ("k", "c_k"),
        ((str(k), cfmt(c)) for k, c in enumerate(f.coeffs)),
    )
    write_json(out / "peak.json", "peak-report", {
        "K": int(f.K),
        "delta": float(f.delta),
        "kappa": kappa(f),
        "sup_off_peak": float(f.sup_off_peak),
        "grid_off_peak_max": float(f.grid_off_peak_max),
        "off_peak_bound": 2 * math.exp(-math.pi * f.K * f.delta),
    })
    return 0


def cmd_mvg(cfg, out):
    Q = _modulus_of(cfg)
    f = _peak_of(cfg)
    phases = _phases_of(cfg, Q.spec)
    rep = mv_g_experiment(Q, phases, f)
    write_json(out / "mvg.json", "mvg-report", {
        "q": rep.q, "deg_q": rep.deg_q, "phi": rep.phi,
        "n_primes": rep.n_primes, "K": rep.K,
        "kappa": float(rep.kappa_value), "lhs": float(rep.lhs),
        "main": float(rep.main), "discrepancy": float(rep.discrepancy),
    })
    return 0


def cmd_mvh(cfg, out):
    Q = _modulus_of(cfg)
    f = _peak_of(cfg)
    phases = _phases_of(cfg, Q.spec)
    rep = mv_h_experiment(Q, phases, f, epsilon=cfg.get_float("params", "epsilon"))
    write_json(out / "mvh.json", "mvh-report", {
        "q": rep.q, "deg_q": rep.deg_q, "phi": rep.phi,
        "n_primes": rep.n_primes, "epsilon": float(rep.epsilon),
        "kappa": float(rep.kappa_value), "lhs": float(rep.lhs),
        "lhs_plus": float(rep.lhs_plus), "main": float(rep.main),
        "rel_error": float(rep.rel_error),
        "rel_error_times_deg": float(rep.rel_error_times_deg),
    })
    return 0


def cmd_mvtail(cfg, out):
    Q = _modulus_of(cfg)
    f = _peak_of(cfg)
    phases = _phases_of(cfg, Q.spec)
    sigma = cfg.get_float("params", "sigma", 0.75)
    scale = cfg.get_float("params", "b_scale", 1.0)
    if not 0 <= scale <= 1:
        raise ConfigError("[params] b_scale must lie in [0, 1]")
    # tail coefficients are a callable; the config exposes a scale on
    # the default b_P = |P|^-sigma
    b = None if scale == 1.0 else (
        lambda P: scale * Q.spec.q ** (-sigma * P.degree)
    )
    rep = mv_tail_experiment(
        Q, phases, f, b=b, sigma=sigma, z=cfg.get_int("params", "z"),
    )
    write_json(out / "mvtail.json", "mvtail-report", {
        "q": rep.q, "deg_q": rep.deg_q, "phi": rep.phi,
        "n_primes": rep.n_primes, "rho": rep.rho, "z": rep.z,
        "sigma": float(rep.sigma), "lhs": float(rep.lhs),
        "bound": float(rep.bound), "ratio": float(rep.ratio),
    })
    return 0


def cmd_counting(cfg, out):
    Q = _modulus_of(cfg)
    x_max = cfg.get_float("params", "x_max", required=True)
    rep = counting_checks(Q, x_max)
    write_csv(
        out / "counting.csv", "counting",
        ("x", "n_value", "growth_ratio", "window", "short_diff", "short_ratio"),
        ((ffmt(r.x), ffmt(r.n_value), ffmt(r.growth_ratio), ffmt(r.window),
          ffmt(r.short_diff), ffmt(r.short_ratio)) for r in rep.rows),
    )
    write_json(out / "counting.json", "counting-report", {
        "q": rep.q, "modulus": rep.modulus, "x_max": float(rep.x_max),
        "c": float(rep.c), "rows": len(rep.rows),
    })
    return 0


def cmd_fit(cfg, out):
    Q = _modulus_of(cfg)
    grid = _grid_of(cfg, Q.spec.q)
    target = _target_of(cfg)
    mu = cfg.get_int("params", "mu", required=True)
    rho = cfg.get_int("params", "rho", required=True)
    values = target.log_branch(grid)
    phases, achieved = fit_phases(values, (mu, rho), Q, grid)
    lines = ["# schema=phases/v1"]
    lines.extend(f"{P.text} {theta:.15f}" for P, theta in phases)
    (out / "phases.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_json(out / "fit.json", "fit-report", {
        "field": Q.spec.text, "modulus": Q.text,
        "target": target.label, "mu": mu, "rho": rho,
        "n_primes": len(phases), "achieved": float(achieved),
    })
    return 0


def cmd_sieve(cfg, out):
    Q = _modulus_of(cfg)
    phases = _phases_of(cfg, Q.spec)
    delta = cfg.get_float("params", "delta", required=True)
    mu = cfg.get_int("params", "mu")
    zero_targets = cfg.get_bool("params", "zero_targets", True)
    selected = character_sieve(Q, phases, delta, zero_targets, mu=mu)
    write_csv(
        out / "sieve.csv", "sieve", ("exponents", "parity"),
        ((_exps(chi.exponents), "even" if chi.is_even else "odd")
         for chi in selected),
    )
    write_json(out / "sieve.json", "sieve-report", {
        "field": Q.spec.text, "modulus": Q.text, "delta": float(delta),
        "mu": mu, "zero_targets": zero_targets,
        "phi": int(euler_phi(Q)), "size": len(selected),
    })
    return 0


def _write_search_outputs(out, stem, rep, group):
    by_exp = {}
    for chi in group.characters():
        by_exp[chi.exponents] = chi
    rows = []
    for exps, dist in zip(rep.exponents, rep.distances):
        chi = by_exp[tuple(exps)]
        rows.append((
            _exps(exps), ffmt(dist), "1",
            "even" if chi.is_even else "odd",
        ))
    write_csv(
        out / f"{stem}.csv", stem,
        ("exponents", "distance", "sieve_pass", "parity"), rows,
    )
    dists = np.asarray(rep.distances, dtype=float)
    if dists.size:
        counts, edges = np.histogram(dists, bins=20)
    else:
        counts, edges = np.zeros(0, dtype=int), np.zeros(1)
    write_csv(
        out / f"{stem}_hist.csv", f"{stem}-hist",
        ("bin_lo", "bin_hi", "count"),
        ((ffmt(edges[i]), ffmt(edges[i + 1]), str(int(c)))
         for i, c in enumerate(counts)),
    )
    write_csv(
        out / f"{stem}_proportion.csv", f"{stem}-proportion",
        ("deg_q", "epsilon", "proportion"),
        [(str(group.Q.degree), ffmt(rep.epsilon), ffmt(rep.proportion))],
    )
    write_json(out / f"{stem}.json", f"{stem}-report", {
        "modulus": rep.modulus,
        "target": rep.target_id,
        "grid": rep.grid_id,
        "epsilon": float(rep.epsilon),
        "searched": int(rep.searched),
        "sieve_size": rep.sieve_size,
        "best_exponents": None if rep.best_exponents is None
        else [int(m) for m in rep.best_exponents],
        "best_distance": None if rep.best_distance is None
        else float(rep.best_distance),
        "family_best_distance": None if rep.family_best_distance is None
        else float(rep.family_best_distance),
        "proportion": float(rep.proportion),
    })


def cmd_search(cfg, out):
    Q = _modulus_of(cfg)
    group = UnitGroup(Q)
    grid = _grid_of(cfg, Q.spec.q)
    target = _target_of(cfg)
    epsilon = cfg.get_float("params", "epsilon", required=True)
    rep = universality_search(group, target, grid, epsilon,
                              workers=_workers_of(cfg))
    _write_search_outputs(out, "search", rep, group)
    return 0


def cmd_guided(cfg, out):
    Q = _modulus_of(cfg)
    group = UnitGroup(Q)
    grid = _grid_of(cfg, Q.spec.q)
    target = _target_of(cfg)
    mu = cfg.get_int("params", "mu", required=True)
    rep = guided_search(
        group, target, grid, mu,
        rho_override=cfg.get_int("params", "rho"),
        epsilon=cfg.get_float("params", "epsilon", 0.5),
        workers=_workers_of(cfg),
    )
    _write_search_outputs(out, "guided", rep, group)
    return 0


def cmd_splitgb(cfg, out):
    Q = _modulus_of(cfg)
    f = _peak_of(cfg, "peak_K", "peak_delta")
    phases = _phases_of(cfg, Q.spec)
    K = cfg.get_int("params", "K", required=True)
    grid = _grid_of(cfg, Q.spec.q, default_plane="s")
    rep = good_bad_split(
        Q, phases, f, K, grid,
        rho=cfg.get_int("params", "rho"),
        epsilon=cfg.get_float("params", "epsilon"),
    )
    write_json(out / "splitgb.json", "splitgb-report", {
        "modulus": rep.modulus, "phi": rep.phi, "rho": rep.rho, "K": rep.K,
        "d": float(rep.d), "threshold": float(rep.threshold),
        "good_size": rep.good_size, "bad_size": rep.bad_size,
        "good_h_mass": float(rep.good_h_mass),
        "bad_h_mass": float(rep.bad_h_mass),
        "m2_mass": float(rep.m2_mass), "main": float(rep.main),
        "good_ratio": float(rep.good_ratio),
    })
    return 0


_DISPATCH = {
    "primes": cmd_primes,
    "phi": cmd_phi,
    "lpoly": cmd_lpoly,
    "rhsweep": cmd_rhsweep,
    "hybrid": cmd_hybrid,
    "peak": cmd_peak,
    "mvg": cmd_mvg,
    "mvh": cmd_mvh,
    "mvtail": cmd_mvtail,
    "counting": cmd_counting,
    "fit": cmd_fit,
    "sieve": cmd_sieve,
    "search": cmd_search,
    "guided": cmd_guided,
    "splitgb": cmd_splitgb,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ffluniv",
        description="Function-field L-function experiments with "
                    "deterministic output files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", required=True, help="key=value config file")
        sp.add_argument("--out", default=None,
                        help="output directory (default: [run] out, else cwd)")
        sp.add_argument("--strict", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="reject unknown config keys (default on)")
    args = parser.parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, args.command, strict=args.strict)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out or cfg.get("run", "out", "."))
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    try:
        code = _DISPATCH[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    write_json(out / "run_meta.json", "run-meta", {
        "command": args.command,
        "elapsed_seconds": time.perf_counter() - t0,
    })
    return code


if __name__ == "__main__":
    sys.exit(main())
