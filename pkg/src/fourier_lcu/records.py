"""JSON and CSV serialization with exact float round-trips.

Coefficients are written as 17-significant-digit strings (``.16e``), which
reproduce every double exactly on parsing. Output is byte-deterministic:
fixed key order, LF line endings, trailing newline.
"""

import csv
import io
import json

import numpy as np

from .errors import MalformedInput
from .fourier_extension import CoefficientSet

FLOAT_FORMAT = ".16e"


def format_float(x):
    return format(float(x), FLOAT_FORMAT)


def coefficient_record(coeffs, alpha=None, epsilon=None):
    record = {
        "m": coeffs.m,
        "eta": coeffs.eta,
        "provenance": coeffs.provenance,
        "lambda": coeffs.lam,
        "coefficients": [format_float(a) for a in coeffs.coefficients],
    }
    if alpha is not None:
        record["alpha"] = float(alpha)
    if epsilon is not None:
        record["epsilon"] = float(epsilon)
    return record


def parse_coefficient_record(record):
    try:
        return CoefficientSet(
            m=int(record["m"]),
            eta=float(record["eta"]),
            coefficients=[float(a) for a in record["coefficients"]],
            provenance=record["provenance"],
            lam=None if record.get("lambda") is None else float(record["lambda"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad coefficient record: {exc}") from exc


def dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def matrix_record(m):
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def parse_matrix(record):
    """Square complex matrix from ``{dim, entries: [[re, im], ...]}`` (row-major)."""
    try:
        dim = int(record["dim"])
        entries = np.asarray(record["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad matrix record: {exc}") from exc
    if dim < 1 or entries.shape != (dim * dim, 2):
        raise MalformedInput(f"expected {dim * dim} [re, im] pairs for dim {dim}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(dim, dim)


def parse_vector(record):
    """Complex vector from ``[[re, im], ...]``."""
    try:
        entries = np.asarray(record, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad state record: {exc}") from exc
    if entries.ndim != 2 or entries.shape[1] != 2:
        raise MalformedInput("state must be a list of [re, im] pairs")
    return entries[:, 0] + 1j * entries[:, 1]


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def pareto_csv(front):
    """One row per point, descending lambda."""
    rows = [(p.lam, p.epsilon, p.alpha) for p in front.points]
    return csv_text(("lambda", "epsilon", "alpha"), rows)


def demo_csv(reports):
    rows = [
        (r.m, r.strategy, r.statevector_error, r.alpha, r.cost, r.unitarity_defect)
        for r in reports
    ]
    return csv_text(("m", "strategy", "error", "alpha", "cost", "delta_u"), rows)
