"""Readers for the solver's emitted file formats, with schema validation.

Only the documented formats are accepted:

* density CSV with header ``q,p,rho_spectral,rho_oracle``
* ``expansion.json`` with model/epsilon0/N/profile/coefficients/completeness
* ``report.json`` carrying an ``l2_error_vs_oracle`` series (and optionally N)
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

DENSITY_HEADER = ["q", "p", "rho_spectral", "rho_oracle"]


class SchemaError(ValueError):
    """Input file does not match a documented solver format."""


def load_density_csv(path) -> dict:
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if header != DENSITY_HEADER:
            raise SchemaError(
                f"{path}: expected header {','.join(DENSITY_HEADER)}, got {','.join(header)}"
            )
        try:
            rows = np.array([[float(x) for x in row] for row in reader])
        except ValueError as err:
            raise SchemaError(f"{path}: non-numeric density row ({err})") from None
    if rows.size == 0 or rows.shape[1] != 4:
        raise SchemaError(f"{path}: no density rows")
    return {
        "path": path,
        "q": rows[:, 0],
        "p": rows[:, 1],
        "rho_spectral": rows[:, 2],
        "rho_oracle": rows[:, 3],
    }


def load_expansion_json(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err})") from None
    for key in ("N", "coefficients", "completeness"):
        if key not in data:
            raise SchemaError(f"{path}: expansion JSON missing {key!r}")
    n = int(data["N"])
    coeffs = data["coefficients"]
    if len(coeffs) != 2 * n + 1:
        raise SchemaError(f"{path}: expected {2 * n + 1} coefficients, got {len(coeffs)}")
    for entry in coeffs:
        if not {"n", "re", "im"} <= set(entry):
            raise SchemaError(f"{path}: coefficient entries need n/re/im")
    data["path"] = path
    return data


def load_report_json(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err})") from None
    if "l2_error_vs_oracle" not in data:
        raise SchemaError(f"{path}: report JSON missing 'l2_error_vs_oracle'")
    series = data["l2_error_vs_oracle"]
    if not series or not all({"t", "err"} <= set(e) for e in series):
        raise SchemaError(f"{path}: error series entries need t/err")
    data["path"] = path
    return data


def density_grid_shape(density: dict):
    """Recover the (n_q, n_p) tensor layout of a density file."""
    n_q = np.unique(density["q"]).size
    n_p = np.unique(density["p"]).size
    if n_q * n_p != density["q"].size:
        raise SchemaError(f"{density['path']}: rows do not form a tensor grid")
    return n_q, n_p
