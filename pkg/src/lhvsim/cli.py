"""Command-line front end.

Every command builds a :class:`RunConfig`, runs it through :func:`run` and
serializes the resulting report with :func:`emit`. Reports echo their
canonical inputs, so ``run(RunConfig(report["command"], report["inputs"]))``
reproduces a report exactly.

Angles are degrees on the command line and radians everywhere else.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import downconversion as dc
from . import interferometer as itf
from . import models
from . import reanalysis as rea
from .inequalities import ChshSettings, chsh_scan, chsh_value
from .montecarlo import estimate_correlator, estimate_probability, quadrature, ratio_with_error

log = logging.getLogger(__name__)

COMMANDS = ("singlet", "cascade", "chsh", "downconv", "interf", "reanalyze")
FORMATS = ("table", "json", "csv")
DEFAULT_MC = 10**6
DEFAULT_SEED = 0
SIG_DIGITS = 9


class UsageError(ValueError):
    """Invalid parameter; the message names the parameter."""


@dataclass
class RunConfig:
    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_format: str = "table"
    workers: int | None = None


Report = dict


# -- parameter helpers --------------------------------------------------------

def _param(params: dict, name: str, default=None):
    return params.get(name, default) if params.get(name) is not None else default


def _num(params: dict, name: str, default: float) -> float:
    value = _param(params, name, default)
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise UsageError(f"--{name.replace('_', '-')}: expected a number, got {value!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"--{name.replace('_', '-')}: must be finite")
    return value


def _count(params: dict, name: str, default: int, minimum: int = 0) -> int:
    value = _param(params, name, default)
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"--{name.replace('_', '-')}: expected an integer, got {value!r}") from None
    if value < minimum:
        raise UsageError(f"--{name.replace('_', '-')}: must be >= {minimum}")
    return value


def _seed(params: dict) -> int:
    seed = _count(params, "seed", DEFAULT_SEED)
    if seed >= 2**64:
        raise UsageError("--seed: must fit in 64 bits")
    return seed


def _mc(params: dict) -> int:
    n = _count(params, "mc", DEFAULT_MC)
    if 0 < n < 100:
        raise UsageError("--mc: need at least 100 samples (or 0 to skip sampling)")
    return n


def parse_sweep(text: str) -> list[float]:
    """'START:STOP:STEP' in degrees, inclusive of STOP."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"--sweep: expected START:STOP:STEP, got {text!r}") from None
    if step <= 0 or stop < start or not all(map(math.isfinite, (start, stop, step))):
        raise UsageError("--sweep: need STEP > 0 and STOP >= START")
    count = int(round((stop - start) / step)) + 1
    return [start + k * step for k in range(count)]


def _complex(params: dict, name: str, default: complex) -> complex:
    value = _param(params, name, default)
    try:
        return complex(str(value).replace(" ", "")) if isinstance(value, str) else complex(value)
    except ValueError:
        raise UsageError(f"--{name}: expected a complex number such as 0.5+0.5j, got {value!r}") from None


def _mc_check(results: dict, name: str, stats, expected: float) -> None:
    results[f"{name}_mc_mean"] = stats.mean
    results[f"{name}_mc_stderr"] = stats.stderr
    ok = stats.within(expected)
    results[f"{name}_mc_consistent"] = ok
    if not ok:
        results.setdefault("failures", []).append(name)


# -- commands -----------------------------------------------------------------

def _run_singlet(p: dict, workers):
    angle = _num(p, "angle_deg", 0.0)
    n, seed = _mc(p), _seed(p)
    est = _param(p, "estimator", "product")
    if est not in ("product", "bernoulli"):
        raise UsageError("--estimator: must be product or bernoulli")
    inputs = {"angle_deg": angle, "mc": n, "seed": seed, "estimator": est,
              "ratio": bool(p.get("ratio")), "sweep": p.get("sweep")}
    res: dict[str, Any] = {}
    rows = None
    if inputs["sweep"]:
        rows = []
        for deg in parse_sweep(inputs["sweep"]):
            pair = models.AnalyzerPair.at_angle(math.radians(deg))
            rows.append({"angle_deg": deg, "closed_form": models.singlet_coincidence_closed(pair),
                         "qm_correlation": models.qm_singlet_correlation(pair),
                         "lhv_correlation": models.lhv_singlet_correlation(pair)})
    elif inputs["ratio"]:
        res["ratio_closed_form"] = models.singlet_ratio_test()
        if n:
            a = models.Z_AXIS
            par = estimate_probability(models.singlet_model(models.AnalyzerPair(a, a)), n, seed,
                                       estimator=est, stream=0, workers=workers)
            anti = estimate_probability(models.singlet_model(models.AnalyzerPair(a, -a)), n, seed,
                                        estimator=est, stream=1, workers=workers)
            r, sig = ratio_with_error(par, anti)
            res["ratio_mc"] = r
            res["ratio_mc_sigma"] = sig
            ok = abs(r - res["ratio_closed_form"]) <= 4 * sig
            res["ratio_mc_consistent"] = ok
            if not ok:
                res.setdefault("failures", []).append("ratio")
    else:
        pair = models.AnalyzerPair.at_angle(math.radians(angle))
        closed = models.singlet_coincidence_closed(pair)
        res["closed_form"] = closed
        res["quadrature"] = quadrature(lambda om: models.singlet_coincidence_integrand(om, pair), "sphere")
        res["qm_correlation"] = models.qm_singlet_correlation(pair)
        res["lhv_correlation"] = models.lhv_singlet_correlation(pair)
        if n:
            stats = estimate_probability(models.singlet_model(pair), n, seed, estimator=est, workers=workers)
            _mc_check(res, "coincidence", stats, closed)
    return inputs, res, rows


def _run_cascade(p: dict, workers):
    angle = _num(p, "angle_deg", 0.0)
    n, seed = _mc(p), _seed(p)
    est = _param(p, "estimator", "product")
    if est not in ("product", "bernoulli"):
        raise UsageError("--estimator: must be product or bernoulli")
    inputs = {"angle_deg": angle, "mc": n, "seed": seed, "estimator": est,
              "ratio": bool(p.get("ratio")), "sweep": p.get("sweep")}
    res: dict[str, Any] = {}
    rows = None
    if inputs["sweep"]:
        rows = []
        for deg in parse_sweep(inputs["sweep"]):
            pair = models.PhotonAnalyzerPair(math.radians(deg))
            rows.append({"phi_deg": deg, "probability": models.cascade_coincidence_closed(pair),
                         "predecay_probability": models.cascade_predecay_probability(pair)})
    elif inputs["ratio"]:
        res["ratio"] = models.cascade_ratio_test()
        if n:
            orth = estimate_probability(models.cascade_model(models.PhotonAnalyzerPair(math.pi / 2)), n, seed,
                                        estimator=est, stream=0, workers=workers)
            par = estimate_probability(models.cascade_model(models.PhotonAnalyzerPair(0.0)), n, seed,
                                       estimator=est, stream=1, workers=workers)
            r, sig = ratio_with_error(orth, par)
            res["ratio_mc"] = r
            res["ratio_mc_sigma"] = sig
            ok = abs(r - res["ratio"]) <= 4 * sig
            res["ratio_mc_consistent"] = ok
            if not ok:
                res.setdefault("failures", []).append("ratio")
    else:
        pair = models.PhotonAnalyzerPair(math.radians(angle))
        closed = models.cascade_coincidence_closed(pair)
        res["closed_form"] = closed
        res["quadrature"] = quadrature(lambda h: models.cascade_coincidence_integrand(h, pair), "circle")
        res["predecay_amplitude"] = models.cascade_predecay_amplitude(pair)
        res["predecay_probability"] = models.cascade_predecay_probability(pair)
        if n:
            stats = estimate_probability(models.cascade_model(pair), n, seed, estimator=est, workers=workers)
            _mc_check(res, "coincidence", stats, closed)
    return inputs, res, rows


CHSH_MODELS = ("qm", "lhv", "sign")


def _chsh_correlator(model: str, n: int, seed: int, workers):
    if model == "qm":
        return lambda x, y: models.qm_singlet_correlation(models.AnalyzerPair(x, y))
    if model == "lhv":
        return lambda x, y: models.lhv_singlet_correlation(models.AnalyzerPair(x, y))
    if n == 0:
        return lambda x, y: models.sign_model_correlation(models.AnalyzerPair(x, y))
    return lambda x, y: estimate_correlator(
        models.sign_outcome(x), models.sign_outcome(y, flip=True), n, seed, workers=workers
    )


def _run_chsh(p: dict, workers):
    raw = _param(p, "angles_deg", "0,90,45,135")
    try:
        angles = [float(t) for t in str(raw).split(",")]
    except ValueError:
        raise UsageError(f"--angles-deg: expected four comma-separated numbers, got {raw!r}") from None
    if len(angles) != 4 or not all(map(math.isfinite, angles)):
        raise UsageError("--angles-deg: expected exactly four finite angles a,a',b,b'")
    model = _param(p, "model", "qm")
    if model not in CHSH_MODELS:
        raise UsageError(f"--model: must be one of {', '.join(CHSH_MODELS)}")
    n, seed = _mc(p), _seed(p)
    scan = _param(p, "scan")
    if scan is not None:
        scan = _count(p, "scan", 0, minimum=8)
    inputs = {"angles_deg": ",".join(f"{a:g}" for a in angles), "model": model, "mc": n, "seed": seed,
              "scan": scan}
    if scan and model == "sign" and n:
        raise UsageError("--scan: sampled sign model is too slow to scan; pass --mc 0 for its closed form")
    corr = _chsh_correlator(model, n, seed, workers)
    if scan:
        result = chsh_scan(corr, scan)
    else:
        result = chsh_value(corr, ChshSettings.planar(*(math.radians(a) for a in angles)))
    res = {
        "s_value": result.s_value,
        "abs_s": abs(result.s_value),
        "e_ab": result.term_values[0],
        "e_ab_prime": result.term_values[1],
        "e_a_prime_b": result.term_values[2],
        "e_a_prime_b_prime": result.term_values[3],
        "uncertainty": result.uncertainty,
        "classification": result.classification,
    }
    if result.angles is not None:
        res["best_angles_deg"] = ",".join(f"{math.degrees(t):.9g}" for t in result.angles)
    return inputs, res, None


def _run_downconv(p: dict, workers):
    h = 1 / math.sqrt(2)
    vals = {k: _complex(p, k, d) for k, d in (("alpha", h), ("beta", h), ("gamma", h), ("delta", -h))}
    try:
        amps = dc.SplitterAmplitudes.normalized(**vals)
    except ValueError as exc:
        raise UsageError(f"--alpha/--beta/--gamma/--delta: {exc}") from None
    inputs = {k: _fmt_complex(v) for k, v in vals.items()}
    a = dc.audit(amps)
    res = {
        "w1": a.w1,
        "w2": a.w2,
        "same_detector": a.same_detector,
        "unitary_sum": a.unitary_sum,
        "interference_defect": a.interference_defect,
        "interfering_total": a.interfering_total,
        "unitary_splitter": amps.unitary_splitter,
    }
    return inputs, res, None


def _fmt_complex(z: complex) -> str:
    return repr(z.real) if z.imag == 0 else repr(z)


def _run_interf(p: dict, workers):
    r = _num(p, "r", 1.0)
    if r < 0:
        raise UsageError("--r: must be >= 0")
    amp = _num(p, "amplitude_sq", 1.0)
    if amp < 0:
        raise UsageError("--amplitude-sq: must be >= 0")
    vt = _num(p, "vartheta_deg", 0.0)
    phi = _num(p, "phi_deg", 0.0)
    inputs = {"r": r, "vartheta_deg": vt, "phi_deg": phi, "amplitude_sq": amp, "sweep": p.get("sweep")}
    cfg = itf.InterferometerConfig(amp, r, math.radians(vt), math.radians(phi))
    bloch = itf.recombined_bloch(cfg)
    res = {
        "b_x": bloch.b.x,
        "b_y": bloch.b.y,
        "b_z": bloch.b.z,
        "norm_sq": bloch.norm_sq,
        "visibility": itf.visibility(r, cfg.vartheta),
        "visibility_scan": itf.visibility_from_scan(cfg),
        "fringe_phase_deg": math.degrees(itf.fringe_phase(r, cfg.vartheta)),
    }
    rows = None
    if inputs["sweep"]:
        degs = parse_sweep(inputs["sweep"])
        intens = itf.intensity_sweep(cfg, np.radians(degs))
        rows = [{"phi_deg": d, "intensity": float(i)} for d, i in zip(degs, intens)]
    else:
        res["intensity"] = itf.detector_intensity(cfg)
    return inputs, res, rows


def _run_reanalyze(p: dict, workers):
    bg = _num(p, "background", 0.0)
    if bg < 0:
        raise UsageError("--background: must be >= 0")
    n_sigma = _num(p, "n_sigma", rea.DEFAULT_N_SIGMA)
    res: dict[str, Any] = {}
    if p.get("input"):
        inputs = {"input": str(p["input"]), "background": bg, "n_sigma": n_sigma}
        records = rea.read_histogram_csv(p["input"])
        try:
            report = rea.histogram_report(records, bg, n_sigma)
        except rea.DataError as exc:
            raise UsageError(f"--input: {exc}") from None
        nets = rea.subtract_background(records, bg)
        res["raw_ratio"] = (nets[rea.ORTHOGONAL].raw_peak / nets[rea.PARALLEL].raw_peak
                            if nets[rea.PARALLEL].raw_peak else None)
    elif p.get("total") is not None:
        t, c, a = _num(p, "total", 0), _num(p, "claimed", 0), _num(p, "alt", 0)
        inputs = {"total": t, "claimed": c, "alt": a, "n_sigma": n_sigma}
        try:
            split = rea.aspect_split(t, c, a)
        except ValueError as exc:
            raise UsageError(f"--total/--claimed/--alt: {exc}") from None
        report = rea.aspect_resplit(t, c, a, n_sigma)
        res["true_no_polarizer"] = split.true_no_polarizer
        res["residual_floor"] = split.residual_floor
    elif p.get("parallel") is not None:
        par, orth = _num(p, "parallel", 0), _num(p, "orthogonal", 0)
        entered = _param(p, "entered", "net")
        if entered not in ("net", "raw"):
            raise UsageError("--entered: must be net or raw")
        inputs = {"parallel": par, "orthogonal": orth, "background": bg, "entered": entered,
                  "n_sigma": n_sigma}
        as_net = (par, orth)
        as_raw = (max(par - bg, 0.0), max(orth - bg, 0.0))
        chosen = as_net if entered == "net" else as_raw
        if chosen[0] <= 0:
            raise UsageError("--parallel: net parallel coincidences must be positive")
        report = rea.ratio_report(*chosen, n_sigma=n_sigma)
        res["ratio_if_net"] = as_net[1] / as_net[0] if as_net[0] > 0 else None
        res["ratio_if_raw"] = as_raw[1] / as_raw[0] if as_raw[0] > 0 else None
    else:
        raise UsageError("reanalyze needs --input, --parallel/--orthogonal, or --total/--claimed/--alt")
    fit = rea.fit_ratio_model(report.net_parallel, report.net_orthogonal, n_sigma=n_sigma)
    res["reanalysis"] = report.as_dict()
    res["deviation_sigma"] = report.deviation_sigma
    res["flags"] = list(report.flags)
    res["fit_true_peak_rate"] = fit.model.true_peak_rate
    res["fit_predicted_orthogonal"] = fit.predicted_orthogonal
    res["fit_goodness"] = fit.goodness
    return inputs, res, None


_DISPATCH = {
    "singlet": _run_singlet,
    "cascade": _run_cascade,
    "chsh": _run_chsh,
    "downconv": _run_downconv,
    "interf": _run_interf,
    "reanalyze": _run_reanalyze,
}


def run(config: RunConfig) -> Report:
    if config.command not in _DISPATCH:
        raise UsageError(f"unknown command {config.command!r}")
    inputs, results, rows = _DISPATCH[config.command](dict(config.parameters), config.workers)
    report: Report = {"command": config.command, "inputs": inputs, "results": results}
    if rows is not None:
        report["rows"] = rows
    report["provenance"] = {
        "seed": inputs.get("seed"),
        "samples": inputs.get("mc"),
        "version": __version__,
    }
    return report


# -- serialization ------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    return str(value)


def _flatten(prefix: str, obj) -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(f"{prefix}.{k}" if prefix else k, v))
        return out
    if isinstance(obj, list):
        return [(prefix, ";".join(_fmt(v) for v in obj))]
    return [(prefix, obj)]


def emit(report: Report, fmt: str = "table") -> str:
    """Serialize a report.

    json keeps full float precision so parsing it back recovers every value;
    table and csv print numbers with 9 significant digits. Reports with sweep
    rows render the rows (one per sweep point, with a header) in table/csv.
    """
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt not in ("table", "csv"):
        raise UsageError(f"--format: must be one of {', '.join(FORMATS)}")
    rows = report.get("rows")
    if rows:
        header = list(rows[0])
        body = [[_fmt(r[h]) for h in header] for r in rows]
    else:
        header = ["field", "value"]
        body = [[k, _fmt(v)] for k, v in _flatten("", {"command": report["command"], **{
            "inputs": report["inputs"], "results": report["results"], "provenance": report["provenance"]}})]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in body]
    return "\n".join(lines) + "\n"


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lhvsim",
        description="Hidden-direction and quantum predictions for Bell-type coincidence experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--config", metavar="PATH", help="flat 'key = value' file mirroring the flags")
    common.add_argument("--workers", type=int, default=None, help="threads for sampling (results do not depend on it)")
    common.add_argument("-v", "--verbose", action="store_true")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--mc", type=int, default=DEFAULT_MC, metavar="N", help="Monte Carlo samples (0 skips)")
    sampling.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="S")

    for name, what in (("singlet", "spin-1/2 pair after decay"), ("cascade", "cascade photon pair")):
        p = sub.add_parser(name, parents=[common, sampling], help=what)
        p.add_argument("--angle-deg", type=float, default=0.0, help="angle between the analyzers")
        p.add_argument("--ratio", action="store_true", help="parallel/antiparallel (or crossed/parallel) ratio test")
        p.add_argument("--estimator", choices=("product", "bernoulli"), default="product")
        p.add_argument("--sweep", metavar="START:STOP:STEP", help="closed-form table over angles in degrees")

    p = sub.add_parser("chsh", parents=[common, sampling], help="CHSH combination for a correlator")
    p.add_argument("--angles-deg", default="0,90,45,135", metavar="A,A',B,B'")
    p.add_argument("--model", choices=CHSH_MODELS, default="qm")
    p.add_argument("--scan", type=int, metavar="N", help="maximize |S| over a planar grid of N angles")

    p = sub.add_parser("downconv", parents=[common], help="two-photon beam-splitter counting audit")
    for k in ("alpha", "beta", "gamma", "delta"):
        p.add_argument(f"--{k}", default=None, help="complex amplitude, e.g. 0.7071 or 0.5+0.5j")

    p = sub.add_parser("interf", parents=[common], help="neutron interferometer beam O")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--vartheta-deg", type=float, default=0.0)
    p.add_argument("--phi-deg", type=float, default=0.0)
    p.add_argument("--amplitude-sq", type=float, default=1.0)
    p.add_argument("--sweep", metavar="START:STOP:STEP", help="intensity table over spin-rotator angles")

    p = sub.add_parser("reanalyze", parents=[common], help="ratio test on coincidence counts")
    p.add_argument("--input", metavar="PATH", help="CSV with delay_ns,counts,filter_config")
    p.add_argument("--background", type=float, default=0.0, metavar="B")
    p.add_argument("--parallel", type=float, help="parallel-polarizer peak counts")
    p.add_argument("--orthogonal", type=float, help="crossed-polarizer peak counts")
    p.add_argument("--entered", choices=("net", "raw"), default="net",
                   help="whether --parallel/--orthogonal are already background-subtracted")
    p.add_argument("--total", type=float, metavar="T")
    p.add_argument("--claimed", type=float, metavar="C")
    p.add_argument("--alt", type=float, metavar="A")
    p.add_argument("--n-sigma", type=float, default=rea.DEFAULT_N_SIGMA)
    return parser


_NOT_PARAMETERS = {"command", "format", "out", "config", "workers", "verbose"}


def read_config_file(path: str | Path) -> list[str]:
    """Translate 'key = value' lines into flag tokens; 'true'/'false' toggle switches."""
    tokens: list[str] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config: line {lineno} is not 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() == "true":
            tokens.append(flag)
        elif value.lower() != "false":
            tokens += [flag, value]
    return tokens


def _inject_config(argv: list[str]) -> list[str]:
    for i, tok in enumerate(argv):
        path = None
        if tok == "--config" and i + 1 < len(argv):
            path, rest = argv[i + 1], argv[:i] + argv[i + 2:]
        elif tok.startswith("--config="):
            path, rest = tok.split("=", 1)[1], argv[:i] + argv[i + 1:]
        if path is not None:
            cmd_pos = next((j for j, t in enumerate(rest) if t in COMMANDS), None)
            if cmd_pos is None:
                return argv
            # file values go first so explicit flags override them
            return rest[: cmd_pos + 1] + read_config_file(path) + rest[cmd_pos + 1:]
    return argv


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in _NOT_PARAMETERS}
    return RunConfig(command=ns.command, parameters=params, output_format=ns.format, workers=ns.workers)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _inject_config(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lhvsim: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lhvsim: error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    config = config_from_args(ns)
    try:
        report = run(config)
        text = emit(report, config.output_format)
    except OSError as exc:
        print(f"lhvsim: error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"lhvsim: error: {exc}", file=sys.stderr)
        return 2
    if report["results"].get("failures"):
        log.warning("sampled results outside 4 sigma of closed form: %s", report["results"]["failures"])
    try:
        if ns.out:
            Path(ns.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"lhvsim: error: cannot write {ns.out}: {exc}", file=sys.stderr)
        return 1
    return 0
