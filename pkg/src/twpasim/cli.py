"""Command-line entry point: ``twpa-sim <subcommand> --config <path> [--out <dir>]``."""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import output
from .circuit import ModeRecord, ModeSet, validity_check
from .cme import ModeAmplitudes, classical_couplings, gain_sweep, integrate_cme
from .circuit import current_to_amplitude
from .config import RunConfig, default_config_path, load_config
from .correspondence import compare_gain
from .errors import ConfigError, DivergenceError, DomainError, TruncationError, TWPAError
from .quantum import distribution_heatmap

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_DIVERGENCE = 0, 2, 3, 4

SUBCOMMANDS = ("dispersion", "gain", "cme", "photon-stats", "compare", "validity")


def _dispersion_rows(cfg: RunConfig, res):
    rows = []
    for w in cfg.sweep_omegas():
        try:
            m = ModeRecord.compute(w, cfg.line, res)
            rows.append((w / (2 * math.pi), m.lam, m.k.real, m.k.imag, m.z_c.real, m.z_c.imag, m.v_ph))
        except DomainError:
            rows.append((w / (2 * math.pi),) + (math.nan,) * 6)
    return rows


def run_dispersion(cfg: RunConfig, out: Path) -> dict:
    header = ["f_hz", "lambda", "k_re_rad_m", "k_im_rad_m", "z_c_re_ohm", "z_c_im_ohm", "v_ph_m_s"]
    written = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        settings = [("dispersion", None)] + ([("dispersion_pm", cfg.resonator)] if cfg.resonator else [])
        for name, res in settings:
            rows = _dispersion_rows(cfg, res)
            output.write_csv(out / f"{name}.csv", header, rows)
            if "svg" in cfg.formats:
                arr = np.array(rows)
                output.write_svg_lines(out / f"{name}.svg", arr[:, 0] / 1e9, {"Re k [rad/m]": arr[:, 2]},
                                       xlabel="f [GHz]", ylabel="k")
            written[name] = len(rows)
    return {"rows": written}


def run_gain(cfg: RunConfig, out: Path) -> dict:
    table = gain_sweep(cfg.sweep_omegas(), cfg.line, cfg.omega_p, cfg.I_p, cfg.resonator)
    table.to_csv(out / "gain.csv")
    if "svg" in cfg.formats:
        output.write_svg_lines(out / "gain.svg", table.omega_s / (2e9 * math.pi),
                               {"no PM [dB]": output.to_db(table.gain_nopm), "PM [dB]": output.to_db(table.gain_pm)},
                               xlabel="f_s [GHz]", ylabel="gain [dB]")
    return {
        "rows": len(table),
        "failed_nopm": table.n_failed_nopm,
        "failed_pm": table.n_failed_pm,
        "max_gain_nopm_db": float(np.nanmax(output.to_db(table.gain_nopm))),
        "max_gain_pm_db": float(np.nanmax(output.to_db(table.gain_pm))) if cfg.resonator else None,
    }


def run_cme(cfg: RunConfig, out: Path) -> dict:
    modes = ModeSet.build(cfg.omega_p, cfg.omega_s, cfg.line, cfg.resonator)
    cc = classical_couplings(cfg.line, modes)
    A_p0 = current_to_amplitude(cfg.I_p, cfg.omega_p, modes.p.z_c)
    A_s0 = current_to_amplitude(cfg.I_s, cfg.omega_s, modes.s.z_c)
    traj = integrate_cme(ModeAmplitudes(A_p0, A_s0, 0.0), cc, cfg.line.length, cfg.n_steps)
    every = max(1, cfg.n_steps // 1000)
    traj.to_csv(out / "cme_trajectory.csv", every=every)
    if "svg" in cfg.formats:
        z = traj.z[::every] * 1e3
        output.write_svg_lines(out / "cme_trajectory.svg", z,
                               {n: np.abs(getattr(traj, n)[::every]) for n in ("A_p", "A_s", "A_i")},
                               xlabel="z [mm]", ylabel="|A| [Wb]")
    return {"samples": len(traj.z[::every]), "signal_gain": traj.signal_gain(),
            "pump_power_ratio": float(abs(traj.A_p[-1]) ** 2 / abs(traj.A_p[0]) ** 2)}


def run_photon_stats(cfg: RunConfig, out: Path) -> dict:
    if cfg.kappa_max == 0:
        grid = np.array([0.0])
    else:
        grid = np.linspace(0.0, cfg.kappa_max, max(cfg.n_kappa, 2))
    summary = {}
    for kind in ("fock", "coherent"):
        hm = distribution_heatmap(kind, grid, cfg.N_max, alpha=cfg.alpha)
        hm.to_csv(out / f"photon_{kind}.csv")
        if "svg" in cfg.formats:
            output.write_svg_heatmap(out / f"photon_{kind}.svg", hm.probabilities.T,
                                     xlabel="kappa", ylabel="N")
        summary[kind] = {"kappa": grid.tolist(), "mean": hm.mean.tolist()}
    return summary


def run_compare(cfg: RunConfig, out: Path) -> dict:
    summary = {}
    settings = [("nopm", None)] + ([("pm", cfg.resonator)] if cfg.resonator else [])
    for name, res in settings:
        table = compare_gain(cfg.sweep_omegas(), cfg.line, cfg.omega_p, cfg.I_p, res)
        table.to_csv(out / f"compare_{name}.csv")
        if "svg" in cfg.formats:
            output.write_svg_lines(out / f"compare_{name}.svg", table.omega_s / (2e9 * math.pi),
                                   {"classical [dB]": output.to_db(table.gain_classical),
                                    "classicalised [dB]": output.to_db(table.gain_classicalised)},
                                   xlabel="f_s [GHz]", ylabel="gain [dB]")
        summary[name] = {"max_abs_delta_db": table.max_abs_delta_db, "failed": table.n_failed}
    return summary


def run_validity(cfg: RunConfig, out: Path) -> dict:
    modes = ModeSet.build(cfg.omega_p, cfg.omega_s, cfg.line, cfg.resonator)
    rep = validity_check(cfg.I_p, cfg.I_s, cfg.line, modes)
    output.write_csv(out / "validity.csv", ["flux_ratio", "current_ratio", "taylor_ok", "undepleted_ok"],
                     [(rep.flux_ratio, rep.current_ratio, int(rep.taylor_ok), int(rep.undepleted_ok))])
    for msg in rep.messages:
        print(f"warning: {msg}", file=sys.stderr)
    return {"flux_ratio": rep.flux_ratio, "current_ratio": rep.current_ratio, "taylor_ok": rep.taylor_ok,
            "undepleted_ok": rep.undepleted_ok, "messages": rep.messages}


_RUNNERS = {
    "dispersion": run_dispersion,
    "gain": run_gain,
    "cme": run_cme,
    "photon-stats": run_photon_stats,
    "compare": run_compare,
    "validity": run_validity,
}


def run(subcommand: str, config_path, out_dir=None) -> int:
    """Execute one subcommand; returns the process exit code."""
    try:
        cfg = load_config(config_path)
        out = Path(out_dir) if out_dir is not None else Path(cfg.directory)
        out.mkdir(parents=True, exist_ok=True)
        output.write_json(out / "config_si.json", cfg.to_si_dict())
        summary = _RUNNERS[subcommand](cfg, out)
        if "json" in cfg.formats:
            output.write_json(out / f"{subcommand}_summary.json", summary)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (DomainError, TruncationError) as exc:
        print(f"numerical domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except TWPAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twpa-sim",
        description="Dispersion, gain and photon statistics of a Josephson travelling-wave parametric amplifier.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", default=None,
                        help="JSON run configuration (default: the shipped reference configuration)")
    parser.add_argument("--out", default=None, help="output directory (overrides output.directory)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = args.config if args.config is not None else default_config_path()
    return run(args.subcommand, config, args.out)


if __name__ == "__main__":
    sys.exit(main())
