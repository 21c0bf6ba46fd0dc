"""Command-line surface: spectra, time series, figures, reports.

Subcommands
-----------
spectrum     eigenfrequency table (exact roots vs small-cavity values)
evolve       time series of f_00, impurity and entropy for one mode
figure1      impurity overlay, small cavity vs free space
figure2      entanglement entropy as a function of the weight xi
convergence  truncation-defect report across a sweep of mode counts
selftest     run the invariant suite at baseline parameters

Configuration is a flat key=value file plus per-key command-line
overrides; flag names mirror the keys.  Exit codes: 0 success,
1 invariant failure, 2 I/O failure, 3 violated precondition.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, fields, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import bipartite, evolution, freespace, modes, spectrum as spectrum_mod
from .errors import CavityModelError, ConfigurationError, ValidationError
from .output import svg_line_plot, write_csv
from .params import SystemParams, make_params

MODES = (
    "small_cavity_exact",
    "small_cavity_series",
    "free_space_numeric",
    "free_space_closed",
    "free_space_asymptotic",
)

DEFAULT_N_SWEEP = (100, 300, 1000, 3000)


@dataclass
class RunConfig:
    """Merged configuration for every subcommand."""

    omega_bar: float = 1.0
    g: float = 0.5
    c: float = 1.0
    delta: Optional[float] = 0.1
    radius: Optional[float] = None
    n_modes: int = 1000
    xi: float = 0.5
    phi: float = 0.0
    mode: str = "small_cavity_exact"
    t_min: float = 0.0
    t_max: float = 100.0
    t_steps: int = 1001
    xi_steps: int = 199
    tol: float = 1e-8
    n_sweep: tuple = DEFAULT_N_SWEEP
    out: str = "."
    series_terms: int = 1000
    dump_matrix: bool = False

    def validate(self) -> None:
        if self.t_max <= self.t_min:
            raise ValidationError("t_max must exceed t_min")
        if self.t_max <= 0:
            raise ValidationError("t_max must be positive")
        if self.t_steps < 2:
            raise ValidationError("t_steps must be at least 2")
        if not 0.0 < self.xi < 1.0:
            raise ValidationError("xi must lie strictly inside (0, 1)")
        if self.mode not in MODES:
            raise ConfigurationError(
                f"mode must be one of {', '.join(MODES)}; got {self.mode!r}"
            )
        if self.xi_steps < 1:
            raise ValidationError("xi_steps must be at least 1")

    def make_params(self, n_modes: Optional[int] = None) -> SystemParams:
        kwargs = dict(n_modes=n_modes if n_modes is not None else self.n_modes)
        if self.radius is not None and self.delta is not None:
            raise ConfigurationError("supply only one of radius and delta")
        if self.radius is not None:
            kwargs["radius"] = self.radius
        else:
            kwargs["delta"] = self.delta
        return make_params(self.omega_bar, self.g, self.c, **kwargs)

    def time_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)


_INT_KEYS = {"n_modes", "t_steps", "xi_steps", "series_terms"}
_STR_KEYS = {"mode", "out"}
_TUPLE_KEYS = {"n_sweep"}
_BOOL_KEYS = {"dump_matrix"}
_OPTIONAL_FLOAT_KEYS = {"delta", "radius"}


def _parse_value(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    if key in _INT_KEYS:
        return int(raw)
    if key in _TUPLE_KEYS:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    if key in _BOOL_KEYS:
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ConfigurationError(f"{key} must be a boolean, got {raw!r}")
    if key in _OPTIONAL_FLOAT_KEYS and raw.lower() in ("none", ""):
        return None
    return float(raw)


def load_config_file(path: str) -> dict:
    """Parse a flat key=value file; '#' starts a comment."""
    known = {f.name for f in fields(RunConfig)}
    values: dict = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"{path}:{line_no}: expected key=value, got {line!r}"
                )
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigurationError(f"{path}:{line_no}: unknown key {key!r}")
            values[key] = _parse_value(key, raw)
    return values


def merge_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        config = replace(config, **load_config_file(args.config))
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    # an explicit radius (file or flag) displaces the default delta
    if overrides.get("radius") is not None and "delta" not in overrides:
        overrides["delta"] = None
    if config.radius is not None and config.delta == RunConfig.delta:
        config = replace(config, delta=None)
    config = replace(config, **overrides)
    config.validate()
    return config


def _out_path(config: RunConfig, name: str) -> str:
    os.makedirs(config.out, exist_ok=True)
    return os.path.join(config.out, name)


# ----------------------------------------------------------------- commands


def cmd_spectrum(config: RunConfig) -> int:
    params = config.make_params()
    exact = spectrum_mod.solve_spectrum(params)
    try:
        approx = spectrum_mod.approx_spectrum_small_cavity(params).omegas
    except CavityModelError:
        approx = np.full(params.n_modes + 1, np.nan)
    dw = params.delta_omega
    rows = [
        (
            r,
            exact.omegas[r],
            approx[r],
            exact.residuals[r],
            r * dw,
            (r + 1) * dw,
        )
        for r in range(params.n_modes + 1)
    ]
    write_csv(
        _out_path(config, "spectrum.csv"),
        ("r", "omega_exact", "omega_approx", "residual", "branch_lo", "branch_hi"),
        rows,
    )
    if config.dump_matrix:
        matrix = modes.build_matrix(params, exact)
        header = ["mu"] + [f"r{r}" for r in range(params.n_modes + 1)]
        write_csv(
            _out_path(config, "matrix.csv"),
            header,

            ((mu, *matrix.entries[mu]) for mu in range(params.n_modes + 1)),
        )
    return 0


def _row_survival_sums(matrix, spec, times, chunk=256):
    """sum_nu |f_0_nu(t)|^2 for every t, evaluated without rank shortcuts."""
    t_mat = matrix.entries
    weights = t_mat[0]
    sums = np.empty(times.size)
    for start in range(0, times.size, chunk):
        ts = times[start : start + chunk]
        x = weights[:, None] * np.exp(-1j * np.outer(spec.omegas, ts))
        yr = t_mat @ x.real
        yi = t_mat @ x.imag
        sums[start : start + chunk] = (yr**2 + yi**2).sum(axis=0)
    return sums


def cmd_evolve(config: RunConfig) -> int:
    params = config.make_params()
    times = config.time_grid()
    xi = config.xi
    entropy_flat = bipartite.analytic_entropy(xi)

    if config.mode == "small_cavity_exact":
        spec = spectrum_mod.solve_spectrum(params)
        matrix = modes.build_matrix(params, spec)
        weights = matrix.entries[0] ** 2
        f00 = np.exp(-1j * np.outer(times, spec.omegas)) @ weights
        abs2 = np.abs(f00) ** 2
        sums = _row_survival_sums(matrix, spec, times)
        entropies = np.array(
            [bipartite.von_neumann_entropy([1.0 - xi, xi * s]) for s in sums]
        )
        re, im = f00.real, f00.imag
    elif config.mode == "small_cavity_series":
        f00 = evolution.small_cavity_amplitude_first_order(
            params, times, config.series_terms
        )
        abs2 = np.abs(f00) ** 2
        re, im = f00.real, f00.imag
        entropies = np.full(times.size, entropy_flat)
    elif config.mode in ("free_space_numeric", "free_space_closed"):
        fn = (
            freespace.freespace_f00_numeric
            if config.mode == "free_space_numeric"
            else freespace.freespace_f00_closed
        )
        f00 = np.array([fn(params, float(t), tol=config.tol) for t in times])
        abs2 = np.abs(f00) ** 2
        re, im = f00.real, f00.imag
        entropies = np.full(times.size, entropy_flat)
    else:  # free_space_asymptotic
        if config.t_min <= 0.0:
            raise ValidationError(
                "free_space_asymptotic needs t_min > 0 (diverges at t = 0)"
            )
        abs2 = np.array(
            [freespace.freespace_survival_asymptotic(params, float(t)) for t in times]
        )
        re = np.full(times.size, np.nan)
        im = np.full(times.size, np.nan)
        entropies = np.full(times.size, entropy_flat)

    # identical atoms; clamp the few-ulp roundoff excess above 1 so the
    # emitted impurity respects its [0, 1/2] range
    clipped = np.minimum(abs2, 1.0)
    impurities = 2.0 * clipped * (1.0 - clipped)
    write_csv(
        _out_path(config, "evolve.csv"),
        ("t", "f00_re", "f00_im", "f00_abs2", "impurity", "entropy"),
        zip(times, re, im, abs2, impurities, entropies),
    )
    return 0


def cmd_figure1(config: RunConfig) -> int:
    params = config.make_params()
    times = config.time_grid()

    spec = spectrum_mod.solve_spectrum(params)
    matrix = modes.build_matrix(params, spec)
    small = np.minimum(evolution.survival_probability(matrix, spec, times), 1.0)
    d_small = 2.0 * small * (1.0 - small)

    free = np.array(
        [
            abs(freespace.freespace_f00_closed(params, float(t), tol=config.tol)) ** 2
            for t in times
        ]
    )
    free = np.minimum(free, 1.0)
    d_free = 2.0 * free * (1.0 - free)

    write_csv(
        _out_path(config, "figure1.csv"),
        ("t", "impurity_small_cavity", "impurity_free_space"),
        zip(times, d_small, d_free),
    )
    svg_line_plot(
        _out_path(config, "figure1.svg"),
        [("small cavity", times, d_small), ("free space", times, d_free)],
        title="Impurity of the two-atom state",
        xlabel="t",
        ylabel="D(t)",
    )
    return 0


def figure2_grid(xi_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """(xi, entropy) with both weights built from integers.

    Constructing xi and 1 - xi as i/(n+1) and (n+1-i)/(n+1) makes the
    mirror symmetry E(xi) = E(1-xi) exact in floating point.
    """
    denom = xi_steps + 1
    xis = np.empty(xi_steps)
    entropies = np.empty(xi_steps)
    for i in range(1, denom):
        w_lo = i / denom
        w_hi = (denom - i) / denom
        xis[i - 1] = w_lo
        entropies[i - 1] = bipartite.von_neumann_entropy([w_hi, w_lo])
    return xis, entropies


def cmd_figure2(config: RunConfig) -> int:
    xis, entropies = figure2_grid(config.xi_steps)
    write_csv(
        _out_path(config, "figure2.csv"), ("xi", "entropy"), zip(xis, entropies)
    )
    svg_line_plot(
        _out_path(config, "figure2.svg"),
        [("entanglement entropy", xis, entropies)],
        title="Entanglement entropy of the two-atom state",
        xlabel="xi",
        ylabel="E(xi)",
    )
    return 0


def cmd_convergence(config: RunConfig) -> int:
    check_times = (0.0, 1.0, 10.0)
    lines = [
        "truncation convergence report",
        f"omega_bar={config.omega_bar} g={config.g} c={config.c} "
        f"delta={config.delta} radius={config.radius} xi={config.xi}",
        "",
        "N, raw_col0_norm_defect, raw_orthogonality_defect, raw_unitarity_defect,"
        " unitarity_defect, entropy_std",
    ]
    raw_cols, raw_orth, raw_unit, post_unit = [], [], [], []
    for n in config.n_sweep:
        params = config.make_params(n_modes=n)
        spec = spectrum_mod.solve_spectrum(params)
        raw = modes.assemble_raw_matrix(params, spec)
        norms = np.linalg.norm(raw, axis=0)
        col_defect = float(np.abs(1.0 - norms**2).max())
        rescaled = raw / norms
        gram = rescaled.T @ rescaled
        orth_defect = float(np.abs(gram - np.diag(np.diag(gram))).max())
        raw_defect = 0.0
        for t in check_times:
            row = rescaled @ (rescaled[0] * np.exp(-1j * spec.omegas * t))
            raw_defect = max(raw_defect, abs(1.0 - float(np.sum(np.abs(row) ** 2))))
        matrix = modes.build_matrix(params, spec)
        post_defect = evolution.unitarity_defect(matrix, spec, 0, check_times)
        xi = 0.3
        entropies = []
        for t in check_times:
            row = evolution.amplitude_row(matrix, spec, 0, t)
            s = float(np.sum(np.abs(row) ** 2))
            entropies.append(bipartite.von_neumann_entropy([1.0 - xi, xi * s]))
        ent_std = float(np.std(entropies))
        raw_cols.append(col_defect)
        raw_orth.append(orth_defect)
        raw_unit.append(raw_defect)
        post_unit.append(post_defect)
        lines.append(
            f"{n}, {col_defect:.6e}, {orth_defect:.6e}, {raw_defect:.6e}, "
            f"{post_defect:.6e}, {ent_std:.6e}"
        )
    lines.append("")
    for label, seq in (
        ("raw_col0_norm_defect", raw_cols),
        ("raw_orthogonality_defect", raw_orth),
        ("raw_unitarity_defect", raw_unit),
    ):
        monotone = all(b <= a for a, b in zip(seq, seq[1:]))
        lines.append(
            f"{label}: {'non-increasing' if monotone else 'WARNING non-monotone'}"
        )
    lines.append(
        "unitarity_defect (after orthogonalization): "
        + ("all at machine precision" if max(post_unit) < 1e-10 else "see table")
    )
    path = _out_path(config, "convergence.txt")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0


# ----------------------------------------------------------------- selftest


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def selftest_checks(
    config: Optional[RunConfig] = None,
    spectrum_override=None,
    matrix_override=None,
) -> list[CheckResult]:
    """Run the invariant suite; overrides allow fault injection in tests."""
    config = config or RunConfig()
    params = config.make_params()
    results: list[CheckResult] = []

    def check(name: str, fn: Callable[[], tuple[bool, str]]) -> None:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))

    def params_round_trip():
        again = make_params(
            params.omega_bar, params.g, params.c,
            radius=params.radius, n_modes=params.n_modes,
        )
        err = abs(again.delta - params.delta) / params.delta
        return err < 1e-12, f"relative delta drift {err:.2e}"

    def derived_scalars():
        e1 = abs(params.delta * params.delta_omega - params.g) / params.g
        e2 = abs(params.eta**2 - 4 * params.g * params.delta_omega / np.pi) / (
            params.eta**2
        )
        return max(e1, e2) < 1e-12, f"identity drift {max(e1, e2):.2e}"

    check("params_round_trip", params_round_trip)
    check("params_derived_scalars", derived_scalars)

    spec = spectrum_override or spectrum_mod.solve_spectrum(params)

    check(
        "spectrum_residuals",
        lambda: (
            float(spec.residuals.max()) < 1e-10,
            f"max residual {float(spec.residuals.max()):.2e}",
        ),
    )
    check(
        "spectrum_interlacing",
        lambda: (
            spectrum_mod.check_interlacing(params, spec),
            "each root inside its branch"
            if spectrum_mod.check_interlacing(params, spec)
            else "root escaped its branch",
        ),
    )

    def low_root_mismatch():
        raw = np.abs(
            spectrum_mod.eigenfrequency_mismatch(params, spec.omegas[:11])
        )
        return float(np.max(raw)) < 1e-10, f"max raw mismatch {float(np.max(raw)):.2e}"

    check("spectrum_low_root_mismatch", low_root_mismatch)

    try:
        matrix = matrix_override or modes.build_matrix(params, spec)
    except CavityModelError as exc:
        # keep the named spectrum failures above visible instead of crashing
        results.append(
            CheckResult("matrix_build", False, f"{type(exc).__name__}: {exc}")
        )
        return results

    def column_norms():
        norms = np.linalg.norm(matrix.entries, axis=0)
        worst = float(np.abs(1.0 - norms).max())
        return worst < 1e-12, f"max |1 - norm| {worst:.2e}"

    def raw_orthogonality():
        return (
            matrix.raw_orthogonality_defect < 1e-3,
            f"raw defect {matrix.raw_orthogonality_defect:.2e}",
        )

    check("matrix_column_norms", column_norms)
    check("matrix_raw_orthogonality", raw_orthogonality)

    def identity_at_zero():
        row = evolution.amplitude_row(matrix, spec, 0, 0.0)
        diag = abs(row[0] - 1.0)
        off = float(np.abs(row[1:]).max())
        worst = max(diag, off)
        return worst < 1e-12, f"max |f(0) - identity| {worst:.2e}"

    check("amplitude_identity_t0", identity_at_zero)

    def unitarity():
        worst = max(
            evolution.unitarity_defect(matrix, spec, mu, (0.0, 1.0, 10.0, 100.0))
            for mu in (0, 1, 5)
        )
        return worst < 1e-6, f"max row defect {worst:.2e}"

    check("unitarity_rows", unitarity)

    def survival_range_and_bound():
        times = np.linspace(0.0, 100.0, 4001)
        surv = evolution.survival_probability(matrix, spec, times)
        in_range = float(surv.min()) >= 0.0 and float(surv.max()) <= 1.0 + 1e-9
        bound = evolution.small_cavity_lower_bound(params)
        ok = in_range and float(surv.min()) >= bound - 0.01
        return ok, f"min {float(surv.min()):.5f}, bound {bound:.5f}"

    check("survival_range_and_bound", survival_range_and_bound)

    def freespace_consistency():
        worst = 0.0
        for t in (0.5, 5.0, 12.0):
            numeric = freespace.freespace_f00_numeric(params, t, tol=1e-9)
            closed = freespace.freespace_f00_closed(params, t, tol=1e-9)
            worst = max(worst, abs(numeric - closed))
        return worst < 1e-6, f"max |numeric - closed| {worst:.2e}"

    check("freespace_consistency", freespace_consistency)

    def impurity_vs_trace():
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(200):
            f_aa = rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            f_bb = rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            cfg = bipartite.EntangledStateConfig(
                xi=rng.uniform(1e-3, 1 - 1e-3), phi=rng.uniform(0, 2 * np.pi)
            )
            rho = bipartite.two_atom_reduced_density(f_aa, f_bb, cfg)
            d = bipartite.impurity(f_aa, f_bb, cfg)
            worst = max(
                worst,
                abs(rho.purity_defect() - d),
                abs(float(np.real(np.trace(rho.elements))) - 1.0),
                max(0.0, -float(rho.eigenvalues().min())),
            )
        return worst < 1e-12, f"worst defect {worst:.2e}"

    check("impurity_vs_trace", impurity_vs_trace)

    def entropy_flatness():
        report = bipartite.entropy_time_independence_check(
            params,
            bipartite.EntangledStateConfig(xi=0.3),
            (0.0, 2.5, 5.0, 50.0, 100.0),
            matrix=matrix,
            spectrum=spec,
        )
        ok = report.std_dev < 1e-6 and report.eigenvalue_defect < 1e-6
        return ok, (
            f"std {report.std_dev:.2e}, eigenvalue defect "
            f"{report.eigenvalue_defect:.2e}"
        )

    check("entropy_flatness", entropy_flatness)

    def entropy_symmetry():
        _, entropies = figure2_grid(199)
        mirrored = entropies[::-1]
        exact = bool(np.all(entropies == mirrored))
        return exact, "mirror-exact" if exact else "asymmetry detected"

    check("entropy_symmetry", entropy_symmetry)

    return results


def cmd_selftest(config: RunConfig) -> int:
    start = time.perf_counter()
    print(
        f"selftest baseline: omega_bar={config.omega_bar} g={config.g} "
        f"delta={config.delta} n_modes={config.n_modes}"
    )
    results = selftest_checks(config)
    failures = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        failures += not result.passed
        print(f"{status} {result.name} ({result.detail})")
    elapsed = time.perf_counter() - start
    print(
        f"selftest: {len(results) - failures}/{len(results)} checks passed "
        f"in {elapsed:.1f} s"
    )
    return 1 if failures else 0


# ----------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dressedcavity",
        description="Dressed-atom cavity dynamics and entanglement toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "emit the normal-mode frequency table as CSV"),
        ("evolve", "emit a time series for the selected mode as CSV"),
        ("figure1", "impurity overlay: small cavity vs free space (CSV + SVG)"),
        ("figure2", "entanglement entropy vs superposition weight (CSV + SVG)"),
        ("convergence", "truncation-defect report over a mode-count sweep"),
        ("selftest", "run the invariant suite; exit 0 only if all pass"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--omega-bar", dest="omega_bar", type=float)
        p.add_argument("--g", type=float)
        p.add_argument("--c", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--radius", type=float)
        p.add_argument("--n-modes", dest="n_modes", type=int)
        p.add_argument("--xi", type=float)
        p.add_argument("--phi", type=float)
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--t-min", dest="t_min", type=float)
        p.add_argument("--t-max", dest="t_max", type=float)
        p.add_argument("--t-steps", dest="t_steps", type=int)
        p.add_argument("--xi-steps", dest="xi_steps", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--series-terms", dest="series_terms", type=int)
        p.add_argument(
            "--n-sweep",
            dest="n_sweep",
            type=lambda s: tuple(int(x) for x in s.split(",")),
        )
        p.add_argument("--out", help="output directory (default: current)")
        p.add_argument(
            "--dump-matrix",
            dest="dump_matrix",
            action="store_const",
            const=True,
            help="with 'spectrum': also write the mode matrix as matrix.csv",
        )
    return parser


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "figure1": cmd_figure1,
    "figure2": cmd_figure2,
    "convergence": cmd_convergence,
    "selftest": cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = merge_config(args)
        return _COMMANDS[args.command](config)
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 2
    except CavityModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
