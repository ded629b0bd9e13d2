"""Parameter sweeps producing the tabular data behind each figure."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .atomic import DIM, DriveField, Geometry
from .config import RunConfig, parse_variant
from .coupling import GroupMask, build_coupling_table
from .liouvillian import build_liouvillian, eigenvalues, partial_trace, steady_state
from .spectrum import TERMS, incoherent_pi_spectrum


class ScanError(RuntimeError):
    """Numerical failure at a particular sweep point."""


@dataclass(frozen=True, eq=False)
class ScanResult:
    columns: tuple
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float).reshape(-1, len(self.columns))
        if not np.all(np.isfinite(rows)):
            raise ScanError("scan produced non-finite values")
        object.__setattr__(self, "rows", rows)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def _geometry(cfg: RunConfig, r12=None) -> Geometry:
    return Geometry(cfg.r12 if r12 is None else r12, cfg.theta, cfg.phi)


def _drive(cfg: RunConfig, rabi=None, detuning=None) -> DriveField:
    return DriveField(
        cfg.rabi if rabi is None else rabi,
        cfg.detuning if detuning is None else detuning,
    )


def _eigen_row(drive, geometry, mask):
    m = build_liouvillian(drive, geometry, build_coupling_table(geometry, mask))
    vals = eigenvalues(m).values
    return np.concatenate([vals.imag, vals.real])


def _steady_row(drive, geometry, mask):
    row = []
    reduced = {}
    for spvc in (True, False):
        table = build_coupling_table(geometry, mask.replace(spvc_eom=spvc))
        rho = steady_state(build_liouvillian(drive, geometry, table))
        reduced[spvc] = partial_trace(rho, 1)
    for k in range(4):
        row += [reduced[True][k, k].real, reduced[False][k, k].real]
    for part in (np.real, np.imag):
        row += [part(reduced[True][0, 2]), part(reduced[False][0, 2])]
    return np.array(row)


def _spectrum_columns(cfg, variant):
    mask, flags = cfg.mask, cfg.flags
    if variant is not None:
        mask, flags = parse_variant(variant, mask, flags)
    trace = incoherent_pi_spectrum(cfg.omega_grid.values(), _drive(cfg), _geometry(cfg), mask, flags)
    return trace


def _point(task):
    cfg, value = task
    mode = cfg.mode
    try:
        if mode == "eigenvalues-vs-rabi":
            return _eigen_row(_drive(cfg, rabi=value), _geometry(cfg), cfg.mask)
        if mode == "eigenvalues-vs-distance":
            return _eigen_row(_drive(cfg), _geometry(cfg, r12=value), cfg.mask)
        if mode == "steady-vs-detuning":
            return _steady_row(_drive(cfg, detuning=value), _geometry(cfg), cfg.mask)
        if mode == "group-study":
            return _spectrum_columns(cfg, value).total
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ScanError(f"{mode} failed at {value!r}: {exc}") from exc
    raise ValueError(f"unknown mode {mode!r}")


def _map(tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_point, tasks))


def _eigen_columns(swept):
    n = DIM * DIM
    return (swept, *(f"upsilon_{k:03d}" for k in range(1, n + 1)), *(f"chi_{k:03d}" for k in range(1, n + 1)))


STEADY_COLUMNS = (
    "detuning_gpi",
    *(f"pop{k}_spvc_{s}" for k in range(1, 5) for s in ("on", "off")),
    "re_rho13_spvc_on",
    "re_rho13_spvc_off",
    "im_rho13_spvc_on",
    "im_rho13_spvc_off",
)

SPECTRUM_COLUMNS = ("omega_tilde_gpi", "S_total", *TERMS)


def variant_column(variant: str) -> str:
    return "S_" + "+".join(variant.split())


def run_scan(cfg: RunConfig, workers: int | None = None) -> ScanResult:
    """Run the sweep described by ``cfg``.

    Each sweep point is independent and writes its own row, so the result
    does not depend on the number of workers.
    """
    workers = cfg.workers if workers is None else workers
    meta = {"config": cfg}
    if cfg.mode == "spectrum":
        try:
            trace = _spectrum_columns(cfg, None)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise ScanError(f"spectrum failed: {exc}") from exc
        rows = np.column_stack([trace.omega, trace.total, *(trace.terms[t] for t in TERMS)])
        return ScanResult(SPECTRUM_COLUMNS, rows, meta)

    if cfg.mode == "group-study":
        totals = _map([(cfg, v) for v in cfg.variants], workers)
        omega = cfg.omega_grid.values()
        columns = ("omega_tilde_gpi", *(variant_column(v) for v in cfg.variants))
        return ScanResult(columns, np.column_stack([omega, *totals]), meta)

    if cfg.mode == "eigenvalues-vs-rabi":
        swept, columns = cfg.rabi_grid.values(), _eigen_columns("rabi_gpi")
    elif cfg.mode == "eigenvalues-vs-distance":
        swept, columns = cfg.r12_grid.values(), _eigen_columns("r12_lpi")
    elif cfg.mode == "steady-vs-detuning":
        swept, columns = cfg.detuning_grid.values(), STEADY_COLUMNS
    else:
        raise ValueError(f"unknown mode {cfg.mode!r}")
    out = _map([(cfg, float(v)) for v in swept], workers)
    rows = np.column_stack([swept, np.vstack(out)])
    return ScanResult(columns, rows, meta)


def format_value(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(result: ScanResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(result.columns)
        for row in result.rows:
            writer.writerow([format_value(x) for x in row])


def read_csv(path) -> ScanResult:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        columns = tuple(next(reader))
        rows = [[float(x) for x in line] for line in reader]
    return ScanResult(columns, np.array(rows, dtype=float).reshape(-1, len(columns)))
