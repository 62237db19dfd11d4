"""Command-line front end: config parsing, seeded execution, CSV/JSON emission.

Every experiment is described by an :class:`ExperimentConfig` (a flat JSON
document with a schema version); command-line flags override config-file
fields.  Reports are canonical JSON, deterministic given the seed apart from
a timestamp field.  Exit status: 0 when every check passes, 2 on a test
failure, 1 on usage or I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import math
import struct
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from . import atoms, ensembles, haar, resolvent, spectral, stats
from .errors import SingularityError, WignerLabError
from .seeding import THREADS_ENV_VAR, default_threads, derive_seed, trial_map

SCHEMA_VERSION = 1

EXPERIMENTS = (
    "eigvec-dist",
    "clt",
    "four-moment",
    "resolvent",
    "inverse",
    "gap-stats",
    "haar-compare",
    "local-law",
)

ENSEMBLES = ("goe", "gue", "matched-goe", "rademacher", "custom")

_DEFAULT_FUNCTIONAL = {"kind": "gaussian_bump", "center": [0.0, 1.0, 0.0], "width": 2.0}


class UsageError(WignerLabError):
    """Bad flags, malformed config, or missing files; exits with status 1."""


@dataclass
class ExperimentConfig:
    experiment: str
    ensemble: str = "goe"
    ensemble_b: str = "matched-goe"
    group: str = haar.ORTHOGONAL
    n: int = 100
    trials: int = 100
    seed: int = 0
    threads: int = 1
    normalization: str = spectral.RANDOM
    i: int | None = None
    p: int = 0
    q: int = 0
    vector: str = "uniform"
    energy: float = 0.0
    eta: float = 0.1
    functional: dict = field(default_factory=lambda: dict(_DEFAULT_FUNCTIONAL))
    ks_threshold: float = 0.05
    deviation_threshold: float = 0.15
    atom_file: str | None = None
    diag_atom_file: str | None = None
    allow_mismatch: bool = False
    out: str | None = None
    format: str = "json"
    dump_samples: bool = False
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise UsageError(f"unknown experiment {self.experiment!r}")
        if self.n < 2:
            raise UsageError(f"n must be >= 2, got {self.n}")
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if self.schema_version != SCHEMA_VERSION:
            raise UsageError(f"unsupported schema_version {self.schema_version}")
        for path in (self.atom_file, self.diag_atom_file):
            if path is not None and not Path(path).exists():
                raise UsageError(f"referenced file does not exist: {path}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config fields: {sorted(unknown)}")
        if "experiment" not in data:
            raise UsageError("config needs an 'experiment' field")
        return cls(**data)


def config_hash(config: ExperimentConfig) -> str:
    payload = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


# ---------------------------------------------------------------------------
# File emission
# ---------------------------------------------------------------------------

def write_json(obj: dict, path) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    Path(path).write_text(text)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def ecdf_rows(values: np.ndarray, reference_cdf=None):
    """(value, ecdf[, reference_cdf]) triples for plotting distribution fits."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    m = len(x)
    if reference_cdf is None:
        return [(float(v), (k + 1) / m) for k, v in enumerate(x)]
    ref = np.asarray(reference_cdf(x), dtype=np.float64)
    return [(float(v), (k + 1) / m, float(ref[k])) for k, v in enumerate(x)]


def emit_plotdata(data, format: str, path, reference_cdf=None) -> None:
    """Write a report (json) or a sample array (csv ECDF table) to disk."""
    if format == "json":
        if not isinstance(data, dict):
            raise UsageError("json emission expects a report dictionary")
        write_json(data, path)
        return
    if format == "csv":
        values = np.asarray(data)
        if values.size == 0:
            raise UsageError("refusing to emit an empty table")
        if reference_cdf is None:
            write_csv(path, ["value", "ecdf"], ecdf_rows(values))
        else:
            write_csv(
                path,
                ["value", "ecdf", "reference_cdf"],
                ecdf_rows(values, reference_cdf),
            )
        return
    raise UsageError(f"unknown plot data format {format!r}")


_SYMMETRY_TAGS = {ensembles.REAL_SYMMETRIC: 0, ensembles.HERMITIAN: 1}


def write_matrix_csv(matrix: np.ndarray, symmetry: str, path) -> None:
    """Dense CSV: n columns for real matrices, interleaved re/im pairs otherwise."""
    if symmetry == ensembles.REAL_SYMMETRIC:
        rows = [[repr(float(v)) for v in row] for row in matrix.real]
    else:
        rows = [
            [repr(part) for v in row for part in (float(v.real), float(v.imag))]
            for row in matrix
        ]
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def write_matrix_binary(matrix: np.ndarray, symmetry: str, path) -> None:
    """Compact binary: uint64-LE n, one symmetry tag byte, float64-LE entries.

    Real matrices store n^2 values row-major; Hermitian ones store 2 n^2
    values as re, im pairs row-major.
    """
    n = matrix.shape[0]
    with open(path, "wb") as fh:
        fh.write(struct.pack("<QB", n, _SYMMETRY_TAGS[symmetry]))
        if symmetry == ensembles.REAL_SYMMETRIC:
            fh.write(matrix.real.astype("<f8").tobytes())
        else:
            inter = np.empty((n, 2 * n))
            inter[:, 0::2] = matrix.real
            inter[:, 1::2] = matrix.imag
            fh.write(inter.astype("<f8").tobytes())


def read_matrix_binary(path) -> tuple[np.ndarray, str]:
    raw = Path(path).read_bytes()
    n, tag = struct.unpack_from("<QB", raw)
    body = np.frombuffer(raw, dtype="<f8", offset=9)
    if tag == 0:
        return body.reshape(n, n).copy(), ensembles.REAL_SYMMETRIC
    inter = body.reshape(n, 2 * n)
    return (inter[:, 0::2] + 1j * inter[:, 1::2]).copy(), ensembles.HERMITIAN


# ---------------------------------------------------------------------------
# Ensemble resolution
# ---------------------------------------------------------------------------

def _load_atom_file(path) -> atoms.AtomDistribution:
    try:
        obj = json.loads(Path(path).read_text())
        return atoms.from_json_dict(obj)
    except (OSError, ValueError) as exc:
        raise UsageError(f"malformed atom file {path}: {exc}") from exc


def resolve_ensemble(name: str, n: int, atom_file=None, diag_atom_file=None) -> ensembles.WignerSpec:
    name = name.replace("_", "-")
    if name == "goe":
        return ensembles.goe_spec(n)
    if name == "gue":
        return ensembles.gue_spec(n)
    if name == "matched-goe":
        return ensembles.matched_goe_spec(n)
    if name == "rademacher":
        return ensembles.rademacher_spec(n)
    if name == "custom":
        if atom_file is None:
            raise UsageError("custom ensembles need --atom-file for the off-diagonal law")
        off = _load_atom_file(atom_file)
        diag = _load_atom_file(diag_atom_file) if diag_atom_file else atoms.gaussian_real(0.0, 2.0)
        symmetry = ensembles.REAL_SYMMETRIC if off.is_real else ensembles.HERMITIAN
        try:
            return ensembles.WignerSpec(n=n, symmetry=symmetry, off_diag=off, diag=diag, name="custom")
        except ValueError as exc:
            raise UsageError(f"invalid custom ensemble: {exc}") from exc
    raise UsageError(f"unknown ensemble {name!r}")


def _resolve_vector(vector, n: int) -> np.ndarray:
    if isinstance(vector, (list, tuple)):
        return np.asarray(vector, dtype=np.float64)
    if vector == "uniform":
        return np.ones(n) / math.sqrt(n)
    if vector == "alternating":
        v = np.ones(n)
        v[1::2] = -1.0
        return v / math.sqrt(n)
    if isinstance(vector, str) and vector.startswith("e:"):
        k = int(vector[2:])
        if not 0 <= k < n:
            raise UsageError(f"basis index {k} out of range for n={n}")
        v = np.zeros(n)
        v[k] = 1.0
        return v
    raise UsageError(f"unknown direction rule {vector!r}")


def _default_i(cfg: ExperimentConfig) -> int:
    return spectral.middle_index(cfg.n) if cfg.i is None else cfg.i


def _result(name, statistic, threshold, cfg, se=None, excluded=0, metadata=None) -> dict:
    return {
        "name": name,
        "statistic": float(statistic),
        "threshold": float(threshold),
        "se": None if se is None else float(se),
        "pass": bool(statistic <= threshold),
        "trials": cfg.trials,
        "excluded": int(excluded),
        "seed": cfg.seed,
        "metadata": metadata or {},
    }


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def _coefficient_test_values(values: np.ndarray, reference: haar.ReferenceLaw):
    """Map coefficient draws onto a real scalar with a known reference CDF."""
    if reference.kind == haar.COMPLEX_NORMAL:
        # Real part of the standard complex Gaussian is N(0, 1/2).
        return np.sqrt(2.0) * values.real, haar.ReferenceLaw(haar.NORMAL)
    if reference.kind == haar.COMPLEX_MODULUS:
        return np.abs(values), reference
    return values.real, reference


def _exp_eigvec_dist(cfg: ExperimentConfig):
    spec = resolve_ensemble(cfg.ensemble, cfg.n, cfg.atom_file, cfg.diag_atom_file)
    i = _default_i(cfg)
    draws = stats.coefficient_samples(
        spec, i, [cfg.p], cfg.normalization, cfg.trials, cfg.seed, cfg.threads
    )
    kind = "goe" if spec.symmetry == ensembles.REAL_SYMMETRIC else "gue"
    reference = haar.goe_gue_reference(kind, cfg.p, cfg.normalization)
    scalars, law = _coefficient_test_values(draws.values[:, 0], reference)
    ks = stats.ks_statistic(scalars, law.cdf)
    results = [
        _result(
            f"coefficient_ks(i={i},p={cfg.p})",
            ks,
            cfg.ks_threshold,
            cfg,
            excluded=draws.excluded,
            metadata={"reference": law.kind, "normalization": cfg.normalization},
        )
    ]
    return results, {"samples": scalars, "reference_cdf": law.cdf}


def _exp_clt(cfg: ExperimentConfig):
    spec = resolve_ensemble(cfg.ensemble, cfg.n, cfg.atom_file, cfg.diag_atom_file)
    report = stats.clt_projection_experiment(
        spec,
        _default_i(cfg),
        _resolve_vector(cfg.vector, cfg.n),
        cfg.normalization,
        cfg.trials,
        cfg.seed,
        cfg.threads,
    )
    results = []
    for check in report.checks:
        results.append(
            _result(
                check.name,
                check.statistic,
                check.threshold,
                cfg,
                se=check.standard_error,
                excluded=report.excluded,
                metadata={"mean": report.mean, "variance": report.variance},
            )
        )
    return results, {"samples": report.values, "reference_cdf": ndtr}


def _exp_four_moment(cfg: ExperimentConfig):
    spec_a = resolve_ensemble(cfg.ensemble, cfg.n, cfg.atom_file, cfg.diag_atom_file)
    spec_b = resolve_ensemble(cfg.ensemble_b, cfg.n)
    observable = stats.ObservableConfig((_default_i(cfg),), (cfg.p,), (cfg.q,))
    functional = stats.functional_from_config(cfg.functional)
    report = stats.four_moment_compare(
        spec_a,
        spec_b,
        observable,
        functional,
        cfg.trials,
        cfg.seed,
        cfg.threads,
        allow_mismatch=cfg.allow_mismatch,
    )
    excluded = report.metadata["excluded_a"] + report.metadata["excluded_b"]
    results = [
        _result(
            report.name,
            report.statistic,
            report.threshold,
            cfg,
            se=report.standard_error,
            excluded=excluded,
            metadata=report.metadata,
        )
    ]
    return results, None


def _exp_resolvent(cfg: ExperimentConfig, force_zero: bool = False):
    spec = resolve_ensemble(cfg.ensemble, cfg.n, cfg.atom_file, cfg.diag_atom_file)
    z = 0.0 + 0.0j if force_zero else complex(cfg.energy, cfg.eta)
    n = cfg.n
    margin_floor = 1e-6 * n

    def one_trial(t: int):
        seed_t = derive_seed(cfg.seed, t)
        ms = ensembles.sample(spec, seed_t)
        dec = spectral.decompose(ensembles.rescale(ms), spectral.RAW)
        margin = resolvent.level_repulsion_margin(dec, z, n)
        try:
            if z == 0:
                direct = resolvent.inverse_coeff(ms, cfg.p, cfg.q)
            else:
                direct = resolvent.resolvent_coeff_direct(ms, z, cfg.p, cfg.q)
            spectral_value = resolvent.resolvent_coeff_spectral(dec, z, cfg.p, cfg.q, n)
        except SingularityError:
            return seed_t, margin, None, None
        return seed_t, margin, direct, spectral_value

    rows = []
    disagreements = []
    skipped = 0
    for seed_t, margin, direct, spectral_value in trial_map(one_trial, cfg.trials, cfg.threads):
        if direct is None:
            skipped += 1
            continue
        rows.append((seed_t, direct.real, direct.imag, margin))
        if margin >= margin_floor:
            disagreements.append(abs(direct - spectral_value) / (1.0 + abs(direct)))
    worst = max(disagreements) if disagreements else 0.0
    results = [
        _result(
            "route_equivalence",
            worst,
            1e-8,
            cfg,
            excluded=skipped,
            metadata={
                "z": [z.real, z.imag],
                "qualifying_trials": len(disagreements),
                "margin_floor": margin_floor,
            },
        )
    ]
    return results, {"csv_rows": rows, "csv_header": ["seed", "re", "im", "margin"]}


def _exp_gap_stats(cfg: ExperimentConfig):
    spec = resolve_ensemble(cfg.ensemble, cfg.n, cfg.atom_file, cfg.diag_atom_file)
    n = cfg.n

    def one_trial(t: int):
        seed_t = derive_seed(cfg.seed, t)
        ms = ensembles.sample(spec, seed_t)
        dec = spectral.decompose(ensembles.rescale(ms), spectral.RAW)
        return seed_t, spectral.min_gap(dec)

    rows = list(trial_map(one_trial, cfg.trials, cfg.threads))
    gaps = np.array([g for _, g in rows])
    fraction = float((gaps <= n**-2).mean())
    results = [
        _result(
            "small_gap_fraction",
            fraction,
            0.02,
            cfg,
            metadata={"gap_cutoff": n**-2, "min_gap_seen": float(gaps.min())},
        )
    ]
    return results, {"csv_rows": rows, "csv_header": ["seed", "min_gap"]}


def _exp_haar_compare(cfg: ExperimentConfig):
    i = 0 if cfg.i is None else cfg.i

    def one_trial(t: int):
        h = haar.haar_sample(cfg.group, cfg.n, derive_seed(cfg.seed, t))
        return complex(haar.minor(h, [cfg.p], [i])[0, 0])

    values = np.array(trial_map(one_trial, cfg.trials, cfg.threads))
    if cfg.group == haar.ORTHOGONAL:
        reference = haar.ReferenceLaw(haar.NORMAL)
    else:
        reference = haar.ReferenceLaw(haar.COMPLEX_NORMAL)
    scalars, law = _coefficient_test_values(values, reference)
    ks = stats.ks_statistic(scalars, law.cdf)
    squares = np.abs(values) ** 2
    se = float(squares.std(ddof=1) / math.sqrt(len(squares)))
    results = [
        _result("minor_ks", ks, cfg.ks_threshold, cfg, metadata={"reference": law.kind}),
        _result(
            "scaled_square_mean",
            abs(float(squares.mean()) - 1.0),
            3.0 * se,
            cfg,
            se=se,
            metadata={"expected": 1.0},
        ),
    ]
    return results, {"samples": scalars, "reference_cdf": law.cdf}


def _exp_local_law(cfg: ExperimentConfig):
    spec = resolve_ensemble(cfg.ensemble, cfg.n, cfg.atom_file, cfg.diag_atom_file)
    z = complex(cfg.energy, cfg.eta)
    if z.imag <= 0:
        raise UsageError("local-law needs eta > 0")

    def one_trial(t: int):
        seed_t = derive_seed(cfg.seed, t)
        ms = ensembles.sample(spec, seed_t)
        return seed_t, resolvent.local_law_deviation(ms, z)

    rows = list(trial_map(one_trial, cfg.trials, cfg.threads))
    deviations = np.array([d for _, d in rows])
    exceed_fraction = float((deviations > cfg.deviation_threshold).mean())
    results = [
        _result(
            "local_law_exceedance",
            exceed_fraction,
            0.05,
            cfg,
            metadata={
                "deviation_threshold": cfg.deviation_threshold,
                "z": [z.real, z.imag],
                "median_deviation": float(np.median(deviations)),
            },
        )
    ]
    return results, {"csv_rows": rows, "csv_header": ["seed", "deviation"]}


_EXPERIMENT_RUNNERS = {
    "eigvec-dist": _exp_eigvec_dist,
    "clt": _exp_clt,
    "four-moment": _exp_four_moment,
    "resolvent": _exp_resolvent,
    "inverse": lambda cfg: _exp_resolvent(cfg, force_zero=True),
    "gap-stats": _exp_gap_stats,
    "haar-compare": _exp_haar_compare,
    "local-law": _exp_local_law,
}


def run(config: ExperimentConfig) -> int:
    """Execute one experiment config: write artifacts, print verdicts.

    Returns the process exit status (0 all pass, 2 any test failure).
    """
    try:
        results, dumps = _EXPERIMENT_RUNNERS[config.experiment](config)
    except WignerLabError as exc:
        raise UsageError(str(exc)) from exc
    all_pass = all(r["pass"] for r in results)
    report = {
        "schema_version": SCHEMA_VERSION,
        "experiment": config.experiment,
        "config": config.to_dict(),
        "config_hash": config_hash(config),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "results": results,
        "pass": all_pass,
    }
    out = Path(config.out or f"{config.experiment}-report.json")
    try:
        write_json(report, out)
        if dumps:
            if "csv_rows" in dumps and config.dump_samples:
                write_csv(out.with_suffix(".samples.csv"), dumps["csv_header"], dumps["csv_rows"])
            elif "samples" in dumps:
                if config.dump_samples or config.format == "csv":
                    emit_plotdata(
                        dumps["samples"],
                        "csv",
                        out.with_suffix(".samples.csv"),
                        reference_cdf=dumps.get("reference_cdf"),
                    )
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from exc
    for r in results:
        tag = "PASS" if r["pass"] else "FAIL"
        print(
            f"[{tag}] {config.experiment}/{r['name']}: "
            f"statistic={r['statistic']:.6g} threshold={r['threshold']:.6g}"
        )
    print(f"report written to {out}")
    return 0 if all_pass else 2


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse usage errors to exit status 1
        raise UsageError(message)


def _common_flags(parser):
    parser.add_argument("--config", help="JSON config file; flags override its fields")
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker threads (default ${THREADS_ENV_VAR} or 1)",
    )
    parser.add_argument("--out", default=None, help="output path")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--dump-samples", action="store_true", default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="wigner-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        _common_flags(p)
        p.add_argument("--ensemble", choices=ENSEMBLES, default=None)
        p.add_argument("--ensemble-b", choices=ENSEMBLES, default=None, dest="ensemble_b")
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--i", type=int, default=None, help="eigenvalue index (0-based; default: bulk middle)")
        p.add_argument("--p", type=int, default=None, help="coefficient row index (0-based)")
        p.add_argument("--q", type=int, default=None, help="coefficient column index (0-based)")
        p.add_argument("--normalization", choices=spectral.NORMALIZATIONS, default=None)
        p.add_argument("--vector", default=None, help="direction rule: uniform | alternating | e:K")
        p.add_argument("--E", type=float, default=None, dest="energy")
        p.add_argument("--eta", type=float, default=None, help="imaginary part (0 allowed -> inverse mode)")
        p.add_argument("--group", choices=(haar.ORTHOGONAL, haar.UNITARY), default=None)
        p.add_argument("--functional", default=None, help="functional config as JSON")
        p.add_argument("--ks-threshold", type=float, default=None, dest="ks_threshold")
        p.add_argument(
            "--deviation-threshold", type=float, default=None, dest="deviation_threshold"
        )
        p.add_argument("--atom-file", default=None, dest="atom_file")
        p.add_argument("--diag-atom-file", default=None, dest="diag_atom_file")
        p.add_argument(
            "--allow-mismatch",
            action="store_true",
            default=None,
            dest="allow_mismatch",
            help="run moment-mismatched ensembles as a negative control",
        )

    p = sub.add_parser("sample", help="sample one matrix and write it to disk")
    _common_flags(p)
    p.add_argument("--ensemble", choices=ENSEMBLES, default="goe")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--atom-file", default=None, dest="atom_file")
    p.add_argument("--diag-atom-file", default=None, dest="diag_atom_file")
    p.add_argument("--matrix-format", choices=("csv", "binary"), default="csv")

    p = sub.add_parser("spectrum", help="decompose one sampled matrix and emit statistics")
    _common_flags(p)
    p.add_argument("--ensemble", choices=ENSEMBLES, default="goe")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--normalization", choices=spectral.NORMALIZATIONS, default=spectral.ADHOC)
    p.add_argument("--emit", choices=("eigenvalues", "gaps", "q", "coeffs"), default="eigenvalues")
    p.add_argument("--i", type=int, default=None, help="restrict coeffs to one eigenvector")
    p.add_argument("--atom-file", default=None, dest="atom_file")
    p.add_argument("--diag-atom-file", default=None, dest="diag_atom_file")

    return parser


def _merged_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {"experiment": args.command}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        data.update(loaded)
    field_names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    for key, value in vars(args).items():
        if key in field_names and value is not None:
            data[key] = value
    if "functional" in data and isinstance(data["functional"], str):
        try:
            data["functional"] = json.loads(data["functional"])
        except json.JSONDecodeError as exc:
            raise UsageError(f"--functional is not valid JSON: {exc}") from exc
    if data.get("threads") is None:
        data["threads"] = default_threads()
    data.pop("config", None)
    return ExperimentConfig.from_dict(data)


def _cmd_sample(args) -> int:
    seed = args.seed if args.seed is not None else 0
    spec = resolve_ensemble(args.ensemble, args.n, args.atom_file, args.diag_atom_file)
    ms = ensembles.sample(spec, seed)
    out = Path(args.out or f"matrix-{spec.name or args.ensemble}-n{args.n}-seed{seed}")
    if args.matrix_format == "binary":
        path = out.with_suffix(".bin")
        write_matrix_binary(ms.matrix, spec.symmetry, path)
    else:
        path = out.with_suffix(".csv")
        write_matrix_csv(ms.matrix, spec.symmetry, path)
    print(f"matrix written to {path}")
    return 0


def _cmd_spectrum(args) -> int:
    seed = args.seed if args.seed is not None else 0
    spec = resolve_ensemble(args.ensemble, args.n, args.atom_file, args.diag_atom_file)
    ms = ensembles.sample(spec, seed)
    dec = spectral.decompose(
        ensembles.rescale(ms), args.normalization, phase_seed=derive_seed(seed, 1)
    )
    out = Path(args.out or f"spectrum-{args.emit}.csv")
    if args.emit == "eigenvalues":
        rows = [(k, float(v)) for k, v in enumerate(dec.eigenvalues)]
        write_csv(out, ["index", "eigenvalue"], rows)
    elif args.emit == "gaps":
        rows = [(k, spectral.gap(dec, k)) for k in range(args.n - 1)]
        write_csv(out, ["index", "gap"], rows)
    elif args.emit == "q":
        rows = [(k, spectral.q_statistic(dec, k)) for k in range(args.n)]
        write_csv(out, ["index", "q"], rows)
    else:
        columns = [args.i] if args.i is not None else range(args.n)
        rows = [
            (i, p, float(dec.eigenvectors[p, i].real), float(np.imag(dec.eigenvectors[p, i])))
            for i in columns
            for p in range(args.n)
        ]
        write_csv(out, ["i", "p", "re", "im"], rows)
    print(f"spectrum data written to {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        return run(_merged_config(args))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
