"""Command-line interface: `lied <subcommand> [--preset NAME] [--config PATH]`.

Subcommands wire the pipeline module into reproducible runs: every invocation
writes the resolved configuration, a manifest.json listing each output file
together with the configuration hash, and the command's data files (binary
arrays in the LIED format, 1D traces as CSV with the hash in a comment line).

Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import arrayio
from . import pipeline
from . import spectrum as spc
from .config import ConfigError, PRESETS, RunConfig, preset
from .selftest import run_selftest
from .tdse import NumericalFailure


def _resolve_config(args):
    if args.preset:
        cfg = preset(args.preset)
    else:
        cfg = RunConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_text(fh.read(), base=cfg)
    if args.out:
        cfg.run.out_dir = args.out
    if args.threads:
        cfg.run.threads = args.threads
    cfg.validate()
    return cfg


class _Manifest:
    def __init__(self, cfg, command):
        self.cfg = cfg
        self.command = command
        self.entries = []
        self.info = {}
        self.out_dir = cfg.run.out_dir
        os.makedirs(self.out_dir, exist_ok=True)

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def add(self, name, **meta):
        self.entries.append({"file": name, **meta})
        return self.path(name)

    def write(self):
        cfg_path = self.path("config.txt")
        self.cfg.save(cfg_path)
        payload = {"command": self.command, "config_hash": self.cfg.hash(),
                   "config_file": "config.txt", "info": self.info,
                   "files": self.entries}
        with open(self.path("manifest.json"), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @property
    def comments(self):
        return [f"config_hash={self.cfg.hash()}"]


def _write_field(man, name, values, dy, dz, **meta):
    arrayio.write_array(man.add(name, **meta), values, dy, dz)


def cmd_relax(cfg):
    man = _Manifest(cfg, "relax")
    psi, report = pipeline.run_relax(cfg)
    _write_field(man, "eigenstate.lied", psi.values, psi.grid.dy, psi.grid.dz,
                 kind="wavefunction")
    man.info.update(report)
    man.write()
    print(f"relaxed state: E = {report['energy_hartree']:.8f} hartree, "
          f"residual {report['residual']:.2e}")
    return 0


def cmd_propagate(cfg):
    man = _Manifest(cfg, "propagate")
    ws = pipeline.Workspace(cfg)
    res, ws = pipeline.run_propagate(cfg, ws)
    _write_field(man, "final_state.lied", res.psi.values,
                 res.psi.grid.dy, res.psi.grid.dz, kind="wavefunction",
                 t=res.t_final)
    cols = {"t": res.record_times, "norm": res.norms}
    cols.update({f"w_{ir}": res.weights[ir] for ir in ("a1", "a2", "b1", "b2")})
    arrayio.write_csv(man.add("records.csv", kind="symmetry-trace"), cols,
                      comments=man.comments)
    if cfg.propagation.store_channels:
        out = pipeline.run_channels(cfg, ws)
        for name, ch in out["channels"].items():
            safe = name.replace("-", "m").replace("+", "p")
            _write_field(man, f"channel_{safe}.lied", ch.psi.values,
                         res.psi.grid.dy, res.psi.grid.dz, kind="channel",
                         channel=name)
    man.info["final_norm"] = float(res.norms[-1])
    man.info["w_a1_final"] = float(res.weights["a1"][-1])
    man.write()
    print(f"propagated to t = {res.t_final:.2f} au; norm {res.norms[-1]:.6f}, "
          f"w_a1 {res.weights['a1'][-1]:.10f}")
    return 0


def cmd_spectrum(cfg):
    man = _Manifest(cfg, "spectrum")
    spec, res, _ = pipeline.run_spectrum(cfg)
    _write_field(man, "spectrum.lied", spec.values, spec.dk_y, spec.dk_z,
                 kind="momentum-spectrum", t=spec.time, r0=spec.r0)
    man.info.update({"total_probability": spec.total(), "t_extract": spec.time})
    man.write()
    print(f"spectrum at t = {spec.time:.2f} au, integrated {spec.total():.3e}")
    return 0


def cmd_lied(cfg):
    man = _Manifest(cfg, "lied")
    trace, spec, _ = pipeline.run_lied(cfg)
    arrayio.write_csv(man.add("trace.csv", kind="lied-trace",
                              k_min=trace.k_min),
                      {"k_y": trace.k_y, "S": trace.S}, comments=man.comments)
    _write_field(man, "spectrum.lied", spec.values, spec.dk_y, spec.dk_z,
                 kind="momentum-spectrum")
    man.info["k_min"] = trace.k_min
    man.write()
    print(f"LIED trace with k_min = {trace.k_min:.3f} au")
    return 0


def cmd_invert(cfg):
    man = _Manifest(cfg, "invert")
    report, trace, _ = pipeline.run_invert(cfg)
    arrayio.write_csv(man.add("trace.csv", kind="lied-trace"),
                      {"k_y": trace.k_y, "S": trace.S}, comments=man.comments)
    is_cross = [report.r_from_cross is not None
                and abs(x - report.r_from_cross) < 1e-12
                for x, _ in report.peaks]
    peaks = {"period": [2 * np.pi / x for x, _ in report.peaks],
             "amplitude": [a for _, a in report.peaks],
             "R_est": [x if c else 0.5 * x
                       for (x, _), c in zip(report.peaks, is_cross)]}
    arrayio.write_csv(man.add("fringe_peaks.csv", kind="fringe-report"),
                      peaks, comments=man.comments)
    man.info.update({"r_from_cross": report.r_from_cross,
                     "r_from_squared": report.r_from_squared,
                     "r_best": report.r_best})
    man.write()
    print(f"R estimates (bohr): cross={report.r_from_cross}, "
          f"squared={report.r_from_squared}, best={report.r_best}")
    return 0


def cmd_scan_theta(cfg):
    man = _Manifest(cfg, "scan-theta")
    entries, _ = pipeline.run_scan_theta(cfg)
    rows = {"theta_bar_deg": [], "norm": [], "ok": []}
    for e in entries:
        tag = f"tb{e.theta_bar_deg:g}".replace(".", "p")
        if e.spectrum is not None:
            _write_field(man, f"spectrum_{tag}.lied", e.spectrum.values,
                         e.spectrum.dk_y, e.spectrum.dk_z,
                         kind="momentum-spectrum", theta_bar_deg=e.theta_bar_deg)
        else:
            man.entries.append({"file": None, "theta_bar_deg": e.theta_bar_deg,
                                "error": e.error})
        rows["theta_bar_deg"].append(e.theta_bar_deg)
        rows["norm"].append(e.norm if e.norm is not None else np.nan)
        rows["ok"].append(1.0 if e.error is None else 0.0)
    arrayio.write_csv(man.add("scan_manifest.csv", kind="scan-manifest"),
                      rows, comments=man.comments)
    man.write()
    n_ok = sum(1 for e in entries if e.error is None)
    print(f"theta-bar scan: {n_ok}/{len(entries)} members succeeded")
    return 0 if n_ok else 3


def cmd_average(cfg):
    man = _Manifest(cfg, "average")
    avg, runs, dist, _ = pipeline.run_average(cfg)
    _write_field(man, "averaged_spectrum.lied", avg.values, avg.dk_y, avg.dk_z,
                 kind="momentum-spectrum", fwhm_deg=cfg.alignment.fwhm_deg)
    trace = spc.lied_trace(avg, cfg.k_min())
    arrayio.write_csv(man.add("averaged_trace.csv", kind="lied-trace"),
                      {"k_y": trace.k_y, "S": trace.S}, comments=man.comments)
    arrayio.write_csv(man.add("weights.csv", kind="alignment-weights"),
                      {"theta_rad": dist.thetas, "weight": dist.weights},
                      comments=man.comments)
    man.info["N_exponent"] = float(dist.N)
    man.write()
    print(f"averaged {len(runs)} spectra, cos^N exponent N = {dist.N:.1f}")
    return 0


def cmd_sfa_predict(cfg):
    man = _Manifest(cfg, "sfa-predict")
    pred, pulse = pipeline.run_sfa_predict(cfg)
    arrayio.write_csv(man.add("sfa_prediction.csv", kind="sfa-prediction"),
                      {"t": pred.times, "beta": np.full_like(pred.times, pred.beta),
                       "F": pred.F, "G": pred.G, "eta": pred.eta,
                       "fringe_shift": pred.fringe_shift,
                       "displacement": pred.displacement},
                      comments=man.comments)
    man.info["beta"] = pred.beta
    man.write()
    print(f"misalignment prediction at beta = {pred.beta:.4f}; "
          f"end-of-pulse fringe shift {pred.fringe_shift[-1]:.3e} 1/bohr")
    return 0


def cmd_selftest(cfg, scale="desk"):
    man = _Manifest(cfg, "selftest")
    passed, reports = run_selftest(scale=scale)
    with open(man.add("selftest_report.json", kind="selftest"), "w") as fh:
        json.dump({"passed": passed, "checks": reports}, fh, indent=2,
                  sort_keys=True, default=float)
        fh.write("\n")
    man.info["passed"] = passed
    man.write()
    for r in reports:
        print(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['name']}")
    print("selftest:", "PASS" if passed else "FAIL")
    return 0 if passed else 3


_COMMANDS = {
    "relax": cmd_relax, "propagate": cmd_propagate, "spectrum": cmd_spectrum,
    "lied": cmd_lied, "invert": cmd_invert, "scan-theta": cmd_scan_theta,
    "average": cmd_average, "sfa-predict": cmd_sfa_predict,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lied",
        description="strong-field electron diffraction laboratory")
    parser.add_argument("command", choices=list(_COMMANDS) + ["selftest"])
    parser.add_argument("--config", help="configuration file (key = value blocks)")
    parser.add_argument("--preset", choices=PRESETS,
                        help="named base configuration")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--threads", type=int, default=0,
                        help="scan worker threads")
    parser.add_argument("--selftest-scale", choices=("desk", "mini"),
                        default="desk", help="grid scale for selftest")
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.command == "selftest":
            return cmd_selftest(cfg, scale=args.selftest_scale)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
