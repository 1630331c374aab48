"""Monte Carlo experiment harness: batches of zero counts vs theory.

An experiment fixes a coefficient model and runs ``trials`` independent
samples at each requested degree, counting real zeros per sample.  Each
trial's seed is derived as mix64(master_seed, n, trial_index), so any row or
single trial can be reproduced in isolation and adding degrees never shifts
the seeds of existing ones.

Trials whose zero count fails the grid-stability protocol are excluded from
the aggregates and reported per row; a row with more than 1% unstable trials
is marked failed (the count ceases to be trustworthy at that point, and more
grid doublings -- not statistics -- are the fix).

Reports carry no timestamps or hostnames: two runs with the same config are
byte-identical, which makes regression diffs meaningful.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import math
from dataclasses import dataclass

from .constants import theoretical_mean
from .models import CoefficientModel, mix64, sample_coefficients, validate_model
from .zeros import count_zeros

CSV_COLUMNS = (
    "n",
    "m",
    "r",
    "trials",
    "unstable",
    "empirical_mean",
    "stddev",
    "stderr",
    "theory",
    "order",
    "z",
)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "trig"
    dep: str = "iid"
    ell: int | None = None
    sigma: float = 1.0
    degrees: tuple = (100,)
    trials: int = 200
    master_seed: int = 0
    grid_per_degree: int = 32
    max_doublings: int = 4
    workers: int = 1

    def model(self) -> CoefficientModel:
        model = CoefficientModel(
            kind=self.kind, dep=self.dep, ell=self.ell, sigma=self.sigma
        )
        validate_model(model)
        return model

    def validate(self) -> None:
        self.model()
        if not self.degrees:
            raise ValueError("at least one degree is required")
        if any(n < 1 for n in self.degrees):
            raise ValueError("degrees must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class DegreeRow:
    n: int
    m: int | None
    r: int | None
    trials: int
    unstable: int
    empirical_mean: float | None
    stddev: float | None
    stderr: float | None
    theory: float | None
    order: str | None
    z: float | None
    failed: bool


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    rows: tuple

    def any_failed(self) -> bool:
        return any(row.failed for row in self.rows)


def _single_trial(args):
    """One seeded sample counted; module-level so worker pools can pickle it."""
    model, n, seed, grid_per_degree, max_doublings = args
    sample = sample_coefficients(model, n, seed=seed)
    report = count_zeros(
        sample, grid_per_degree=grid_per_degree, max_doublings=max_doublings
    )
    return report.count, report.stable


def _aggregate_row(config: ExperimentConfig, n: int, outcomes) -> DegreeRow:
    model = config.model()
    counts = [c for c, stable in outcomes if stable]
    unstable = sum(1 for _, stable in outcomes if not stable)

    if model.dep == "periodic":
        from .models import decompose_degree

        dec = decompose_degree(n, model.ell)
        m_val, r_val = dec.m, dec.r
    else:
        m_val = r_val = None

    try:
        theory, order = theoretical_mean(model, n)
    except ValueError:
        theory, order = None, None

    if not counts:
        return DegreeRow(
            n=n,
            m=m_val,
            r=r_val,
            trials=len(outcomes),
            unstable=unstable,
            empirical_mean=None,
            stddev=None,
            stderr=None,
            theory=theory,
            order=order,
            z=None,
            failed=True,
        )

    k = len(counts)
    mean = sum(counts) / k
    if k > 1:
        var = sum((c - mean) ** 2 for c in counts) / (k - 1)
        stddev = math.sqrt(var)
    else:
        stddev = None
    stderr = stddev / math.sqrt(k) if stddev is not None else None
    z = None
    if theory is not None and stderr is not None and stderr > 0.0:
        z = (mean - theory) / stderr
    failed = unstable > 0.01 * len(outcomes)
    return DegreeRow(
        n=n,
        m=m_val,
        r=r_val,
        trials=len(outcomes),
        unstable=unstable,
        empirical_mean=mean,
        stddev=stddev,
        stderr=stderr,
        theory=theory,
        order=order,
        z=z,
        failed=failed,
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every (degree, trial) cell and aggregate per degree.

    With workers > 1 the trials are evaluated by a process pool; results are
    consumed in submission order, so the aggregates (and hence the report
    bytes) do not depend on scheduling.
    """
    config.validate()
    model = config.model()
    jobs = [
        (model, n, mix64(config.master_seed, n, t), config.grid_per_degree,
         config.max_doublings)
        for n in config.degrees
        for t in range(config.trials)
    ]
    if config.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(config.workers) as pool:
            outcomes = list(pool.map(_single_trial, jobs, chunksize=8))
    else:
        outcomes = [_single_trial(job) for job in jobs]

    rows = []
    for i, n in enumerate(config.degrees):
        chunk = outcomes[i * config.trials : (i + 1) * config.trials]
        rows.append(_aggregate_row(config, n, chunk))
    return ExperimentReport(config=config, rows=tuple(rows))


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------


def _cell(value):
    """CSV cell: blank for missing, repr-roundtrippable floats otherwise."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def report_to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(
            [
                _cell(row.n),
                _cell(row.m),
                _cell(row.r),
                _cell(row.trials),
                _cell(row.unstable),
                _cell(row.empirical_mean),
                _cell(row.stddev),
                _cell(row.stderr),
                _cell(row.theory),
                _cell(row.order),
                _cell(row.z),
            ]
        )
    return buf.getvalue()


def report_to_json(report: ExperimentReport) -> str:
    cfg = report.config
    payload = {
        "config": {
            "kind": cfg.kind,
            "dep": cfg.dep,
            "ell": cfg.ell,
            "sigma": cfg.sigma,
            "degrees": list(cfg.degrees),
            "trials": cfg.trials,
            "master_seed": cfg.master_seed,
            "grid_per_degree": cfg.grid_per_degree,
            "max_doublings": cfg.max_doublings,
        },
        "rows": [
            {
                "n": row.n,
                "m": row.m,
                "r": row.r,
                "trials": row.trials,
                "unstable": row.unstable,
                "empirical_mean": row.empirical_mean,
                "stddev": row.stddev,
                "stderr": row.stderr,
                "theory": row.theory,
                "order": row.order,
                "z": row.z,
                "failed": row.failed,
            }
            for row in report.rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "kind": str,
    "dep": str,
    "ell": int,
    "sigma": float,
    "degrees": "int_list",
    "trials": int,
    "master_seed": int,
    "grid_per_degree": int,
    "max_doublings": int,
    "workers": int,
}


def parse_config_text(text: str) -> dict:
    """key=value lines into an ExperimentConfig kwargs dict.

    Blank lines and #-comments are skipped; 'degrees' takes a comma list.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        kind = _CONFIG_KEYS[key]
        if kind == "int_list":
            out[key] = tuple(int(tok) for tok in value.split(",") if tok.strip())
        else:
            out[key] = kind(value)
    return out


def load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())
