"""Machine-readable twist reports: JSON schema 1 and its CSV flattening.

Output is byte-stable for a fixed configuration: results are sorted by d,
keys are sorted, and no timing data is serialized.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .curves import IsogenyCurve, isogenous_curve, new_curve, quadratic_twist, sign_case
from .selmer import compute_selmer, exact_structure
from .suites import DEFAULT_D_BOUND, DEFAULT_Q_BOUND, DEFAULT_R_MAX, instance_twists
from .twists import delta_formulae, enumerate_Q

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    a: int
    b: int
    q_bound: int = DEFAULT_Q_BOUND
    r_max: int = DEFAULT_R_MAX
    d_bound: int = DEFAULT_D_BOUND
    jobs: int = 1


def _selmer_summary(curve: IsogenyCurve) -> dict:
    space = compute_selmer(exact_structure(curve))
    return {"dim": space.dim, "basis": [c.value for c in space.basis]}


def _twist_row(args: tuple[int, int, int]) -> dict:
    a, b, d = args
    curve = new_curve(a, b)
    eprime = isogenous_curve(curve)
    report = delta_formulae(curve, d)
    sel_e = compute_selmer(exact_structure(curve))
    sel_t = compute_selmer(exact_structure(quadratic_twist(curve, -d)))
    sel_ep = compute_selmer(exact_structure(eprime))
    sel_ept = compute_selmer(exact_structure(quadratic_twist(eprime, -d)))
    if report.partition is None:
        partition = matrices = ranks = None
    else:
        partition = {
            "plus": list(report.partition.plus),
            "minus": list(report.partition.minus),
        }
        m = report.matrices
        matrices = {
            "A": m.A.row_bits(),
            "A_tilde": m.A_tilde.row_bits(),
            "A_hat": m.A_hat.row_bits(),
            "A_bar": m.A_bar.row_bits(),
        }
        ranks = {
            "A": m.A.rank(),
            "A_tilde": m.A_tilde.rank(),
            "A_hat": m.A_hat.rank(),
            "A_bar": m.A_bar.rank(),
        }
    return {
        "d": d,
        "omega": report.omega,
        "partition": partition,
        "eta": report.eta,
        "matrices": matrices,
        "ranks": ranks,
        "theta_q": report.theta_q,
        "theta_inf": report.theta_inf,
        "delta_phi": report.delta_phi,
        "delta_phi_hat": report.delta_phi_hat,
        "observed_delta_phi": sel_t.dim - sel_e.dim,
        "observed_delta_phi_hat": sel_ept.dim - sel_ep.dim,
        "selmer": {
            "dim_E": sel_e.dim,
            "dim_twist": sel_t.dim,
            "dim_Eprime": sel_ep.dim,
            "dim_Eprime_twist": sel_ept.dim,
            "basis": [c.value for c in sel_t.basis],
        },
    }


def analyze(config: RunConfig) -> dict:
    """Run the full pipeline for one curve and return the report object."""
    curve = new_curve(config.a, config.b)
    eprime = isogenous_curve(curve)
    q_list = enumerate_Q(curve, config.q_bound)
    d_list = instance_twists(curve, config.q_bound, config.r_max, config.d_bound)
    tasks = [(config.a, config.b, d) for d in d_list]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_twist_row, tasks))
    else:
        rows = [_twist_row(t) for t in tasks]
    rows.sort(key=lambda r: r["d"])
    return {
        "schema": SCHEMA_VERSION,
        "curve": {"a": config.a, "b": config.b, "case": sign_case(curve).value},
        "q_list": q_list,
        "base_selmer": {
            "phi": _selmer_summary(curve),
            "phi_hat": _selmer_summary(eprime),
        },
        "results": rows,
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


_CSV_FIELDS = [
    "a",
    "b",
    "case",
    "d",
    "omega",
    "plus",
    "minus",
    "eta",
    "rank_A",
    "rank_A_tilde",
    "rank_A_hat",
    "rank_A_bar",
    "theta_q",
    "theta_inf",
    "delta_phi",
    "delta_phi_hat",
    "observed_delta_phi",
    "observed_delta_phi_hat",
    "dim_E",
    "dim_twist",
    "dim_Eprime",
    "dim_Eprime_twist",
    "basis",
]


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    curve = report["curve"]
    for row in report["results"]:
        ranks = row["ranks"] or {}
        partition = row["partition"] or {}
        writer.writerow(
            {
                "a": curve["a"],
                "b": curve["b"],
                "case": curve["case"],
                "d": row["d"],
                "omega": row["omega"],
                "plus": ";".join(map(str, partition.get("plus", []))),
                "minus": ";".join(map(str, partition.get("minus", []))),
                "eta": "" if row["eta"] is None else row["eta"],
                "rank_A": ranks.get("A", ""),
                "rank_A_tilde": ranks.get("A_tilde", ""),
                "rank_A_hat": ranks.get("A_hat", ""),
                "rank_A_bar": ranks.get("A_bar", ""),
                "theta_q": row["theta_q"],
                "theta_inf": row["theta_inf"],
                "delta_phi": row["delta_phi"],
                "delta_phi_hat": row["delta_phi_hat"],
                "observed_delta_phi": row["observed_delta_phi"],
                "observed_delta_phi_hat": row["observed_delta_phi_hat"],
                "dim_E": row["selmer"]["dim_E"],
                "dim_twist": row["selmer"]["dim_twist"],
                "dim_Eprime": row["selmer"]["dim_Eprime"],
                "dim_Eprime_twist": row["selmer"]["dim_Eprime_twist"],
                "basis": ";".join(str(v) for v in row["selmer"]["basis"]),
            }
        )
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_csv(report)
    raise ValueError(f"unknown format {fmt!r}")


def write_text(path: str, text: str) -> None:
    """Write atomically: a partial file never appears at the target path."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".isoselmer-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def records_report(records) -> dict:
    """Serializable view of verification records (timing deliberately omitted)."""
    return {
        "schema": SCHEMA_VERSION,
        "records": [
            {
                "suite": r.suite,
                "key": r.key,
                "expected": r.expected,
                "observed": r.observed,
                "passed": r.passed,
            }
            for r in records
        ],
    }
