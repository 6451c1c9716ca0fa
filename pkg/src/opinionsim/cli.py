"""Command-line entry point.

Subcommands::

    opinionsim run            --config PATH --out DIR [--override K=V ...]
    opinionsim compare-oracle --config PATH --out DIR [--override K=V ...]
    opinionsim steady         --config PATH --out DIR [--override K=V ...]

``run`` writes moments.csv and one hist_<t>.csv per checkpoint.
``compare-oracle`` additionally integrates the closed mean-moment system
and reports the worst deviation against the configured tolerance.
``steady`` runs a long horizon and compares final histograms against the
closed-form stationary densities.

Exit codes: 0 success, 1 validation/certificate failure, 2 runtime or
I/O failure (including a failed oracle tolerance), 3 oracle-domain
refusal.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import engine, moments, steady
from .config import ConfigError, ScenarioConfig, load_config_with_overrides
from .moments import PreLimitParams, analytic_means

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_REFUSED = 3


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _moment_header(n_families: int) -> list[str]:
    header = ["t", "m_F", "E_F"]
    for p in range(1, n_families + 1):
        header += [f"m_L_{p}", f"E_L_{p}", f"psi_{p}"]
    header.append("rejection_frac")
    return header


def _write_moments(path: Path, result: engine.RunResult) -> None:
    n_families = len(result.moments[0].mean_l)
    rows = []
    for row, rej in zip(result.moments, result.rejection_series):
        values = [row.t, row.mean_f, row.energy_f]
        for p in range(n_families):
            values += [row.mean_l[p], row.energy_l[p], row.psi[p]]
        values.append(rej)
        rows.append(values)
    _write_csv(path, _moment_header(n_families), rows)


def _write_histogram(path: Path, snap: engine.HistogramSnapshot) -> None:
    header = ["bin_center", "density_F"]
    header += [f"density_L_{p}" for p in range(1, len(snap.leader_densities) + 1)]
    rows = []
    for i, center in enumerate(snap.centers):
        row = [center, snap.follower_density[i]]
        row += [d[i] for d in snap.leader_densities]
        rows.append(row)
    _write_csv(path, header, rows)


def _simulate(cfg: ScenarioConfig):
    rng = np.random.default_rng(cfg.seed)
    ens = cfg.build_ensemble(rng)
    result = engine.run(
        ens, cfg.build_model(), cfg.t_final, cfg.checkpoints, rng=rng,
        bins=cfg.output.bins, moment_stride=cfg.output.moment_stride,
    )
    return ens, result


def _cmd_run(cfg: ScenarioConfig, out_dir: Path) -> int:
    _, result = _simulate(cfg)
    _write_moments(out_dir / "moments.csv", result)
    for t, snap in sorted(result.histograms.items()):
        _write_histogram(out_dir / f"hist_{_fmt(float(t))}.csv", snap)
    print(f"run complete: t_final={cfg.t_final}, "
          f"rejection_fraction={result.rejection_fraction:.3e}")
    return EXIT_OK


def _oracle_domain_errors(cfg: ScenarioConfig) -> list[str]:
    problems = []
    for k, leader in enumerate(cfg.leaders):
        if not leader.kernel_s.is_unit:
            problems.append(
                f"leaders[{k}].kernel_s is not the unit kernel; the closed mean "
                "system assumes S = 1"
            )
        if leader.adaptive is not None:
            problems.append(
                f"leaders[{k}] is adaptive; the closed mean system assumes a "
                "constant strategy"
            )
    return problems


def _oracle_means(cfg: ScenarioConfig, result: engine.RunResult):
    """Closed mean trajectories on the recorded time grid, from the
    empirical initial moments."""
    params = cfg.scaled_params()
    times = np.array([m.t for m in result.moments])
    first = result.moments[0]
    if len(cfg.leaders) == 1:
        p = PreLimitParams.from_scaled(params, cfg.leaders[0].strategy())
        m_f, m_l = analytic_means(times, first.mean_f, first.mean_l[0], p)
        return m_f, [np.asarray(m_l)]

    # multi-family pre-limit mean system, integrated on the step grid
    pre = [PreLimitParams.from_scaled(params, l.strategy(), family=k)
           for k, l in enumerate(cfg.leaders)]

    def rhs(_t, y):
        m_f = y[0]
        d = np.empty_like(y)
        d[0] = sum(p.alpha * p.eta_fl_tilde * (y[1 + k] - m_f)
                   for k, p in enumerate(pre))
        for k, p in enumerate(pre):
            m_l = y[1 + k]
            d[1 + k] = p.beta * p.eta_l_tilde * (
                p.psi * (p.target - m_l) + p.mu * (m_f - m_l)
            )
        return d

    y0 = np.array([first.mean_f, *first.mean_l])
    dt = engine.plan_step(params).dt
    ts, ys = moments.integrate(rhs, y0, (0.0, float(times[-1])), dt)
    idx = np.searchsorted(ts, times)
    idx = np.clip(idx, 0, len(ts) - 1)
    m_f = ys[idx, 0]
    m_ls = [ys[idx, 1 + k] for k in range(len(cfg.leaders))]
    return m_f, m_ls


def _cmd_compare_oracle(cfg: ScenarioConfig, out_dir: Path) -> int:
    problems = _oracle_domain_errors(cfg)
    if problems:
        print("refusing: configuration is outside the mean-oracle validity domain",
              file=sys.stderr)
        for p in problems:
            print(f"  {p}", file=sys.stderr)
        return EXIT_REFUSED

    _, result = _simulate(cfg)
    m_f_oracle, m_ls_oracle = _oracle_means(cfg, result)
    times = np.array([m.t for m in result.moments])
    m_f_mc = np.array([m.mean_f for m in result.moments])
    m_ls_mc = [np.array([m.mean_l[k] for m in result.moments])
               for k in range(len(cfg.leaders))]

    header = ["t", "m_F_mc", "m_F_oracle", "err_m_F"]
    for p in range(1, len(cfg.leaders) + 1):
        header += [f"m_L_{p}_mc", f"m_L_{p}_oracle", f"err_m_L_{p}"]
    rows = []
    for i, t in enumerate(times):
        row = [t, m_f_mc[i], m_f_oracle[i], abs(m_f_mc[i] - m_f_oracle[i])]
        for k in range(len(cfg.leaders)):
            row += [m_ls_mc[k][i], m_ls_oracle[k][i],
                    abs(m_ls_mc[k][i] - m_ls_oracle[k][i])]
        rows.append(row)
    _write_csv(out_dir / "oracle_comparison.csv", header, rows)

    # verdict is taken at the configured checkpoints (all times if none)
    if cfg.checkpoints:
        sel = np.array([np.argmin(np.abs(times - c)) for c in cfg.checkpoints])
    else:
        sel = np.arange(len(times))
    worst = max(
        float(np.max(np.abs(m_f_mc[sel] - m_f_oracle[sel]))),
        max(float(np.max(np.abs(m_ls_mc[k][sel] - m_ls_oracle[k][sel])))
            for k in range(len(cfg.leaders))),
    )
    tol = cfg.output.oracle_tolerance
    verdict = "PASS" if worst <= tol else "FAIL"
    print(f"oracle comparison: max |mc - oracle| at checkpoints = {worst:.6f} "
          f"(tolerance {tol}) -> {verdict}")
    return EXIT_OK if verdict == "PASS" else EXIT_RUNTIME


def _steady_domain_errors(cfg: ScenarioConfig) -> list[str]:
    problems = []
    if len(cfg.leaders) != 1:
        problems.append("closed stationary profiles cover a single leader family")
    if not cfg.followers.kernel.is_unit:
        problems.append("followers.kernel must be the unit kernel")
    if cfg.followers.diffusion.kind != "quadratic_cap":
        problems.append("followers.diffusion must be quadratic_cap")
    for k, leader in enumerate(cfg.leaders):
        if not leader.kernel_s.is_unit or not leader.kernel_r.is_unit:
            problems.append(f"leaders[{k}] kernels must be unit kernels")
        if (leader.diffusion_hat.kind != "quadratic_cap"
                or leader.diffusion_tilde.kind != "quadratic_cap"):
            problems.append(f"leaders[{k}] diffusion shapes must be quadratic_cap")
        if leader.adaptive is not None:
            problems.append(f"leaders[{k}] must not be adaptive")
    return problems


def _cmd_steady(cfg: ScenarioConfig, out_dir: Path) -> int:
    problems = _steady_domain_errors(cfg)
    if problems:
        print("refusing: configuration is outside the stationary closed-form "
              "validity domain", file=sys.stderr)
        for p in problems:
            print(f"  {p}", file=sys.stderr)
        return EXIT_REFUSED

    leader = cfg.leaders[0]
    params = cfg.scaled_params()
    fam = params.families[0]
    b_f = steady.b_follower(cfg.variance_ff, cfg.variance_fl, cfg.c_f,
                            fam.c_fl, fam.rho)
    b_l = steady.b_leader(cfg.variance_ll, fam.rho, cfg.kappa, fam.c_l)
    density_f = steady.normalize(leader.target, b_f, mass=1.0, population="follower")
    density_l = steady.normalize(leader.target, b_l, mass=fam.rho, population="leader")

    rng = np.random.default_rng(cfg.seed)
    ens = cfg.build_ensemble(rng)
    result = engine.run(
        ens, cfg.build_model(), cfg.t_final,
        checkpoints=(cfg.t_final,), rng=rng, bins=cfg.output.bins,
        moment_stride=cfg.output.moment_stride,
    )
    _write_moments(out_dir / "moments.csv", result)
    snap = result.histograms[cfg.t_final]
    _write_histogram(out_dir / "final_histogram.csv", snap)

    grid = np.linspace(-1.0 + 1e-4, 1.0 - 1e-4, 1000)
    _write_csv(
        out_dir / "steady_density.csv",
        ["w", "f_follower", "f_leader"],
        [[w, density_f(w), density_l(w)] for w in grid],
    )

    l1_f = steady.l1_distance((snap.centers, snap.follower_density), density_f)
    l1_l = steady.l1_distance((snap.centers, snap.leader_densities[0]), density_l)
    res_f = steady.stationarity_residual(density_f, grid)
    res_l = steady.stationarity_residual(density_l, grid)
    _write_csv(
        out_dir / "steady_report.csv",
        ["metric", "value"],
        [
            ["b_follower", b_f],
            ["b_leader", b_l],
            ["l1_follower", l1_f],
            ["l1_leader", l1_l],
            ["residual_follower", res_f],
            ["residual_leader", res_l],
            ["rejection_fraction", result.rejection_fraction],
        ],
    )
    print(f"steady comparison: L1(followers)={l1_f:.4f}  L1(leaders)={l1_l:.4f}  "
          f"residuals=({res_f:.2e}, {res_l:.2e})")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="opinionsim",
        description="Kinetic Monte Carlo simulation of leader-controlled "
                    "opinion dynamics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "simulate a scenario and write moment/histogram CSVs"),
        ("compare-oracle", "simulate and compare against the closed mean system"),
        ("steady", "simulate long horizon and compare against stationary densities"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="scenario TOML file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="dotted-path config override, e.g. simulation.seed=7")
    args = parser.parse_args(argv)

    try:
        cfg = load_config_with_overrides(args.config, args.override)
    except ConfigError as exc:
        print(f"configuration invalid ({args.config}):", file=sys.stderr)
        for err in exc.errors:
            print(f"  {err}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "run":
            return _cmd_run(cfg, out_dir)
        if args.command == "compare-oracle":
            return _cmd_compare_oracle(cfg, out_dir)
        return _cmd_steady(cfg, out_dir)
    except engine.CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
