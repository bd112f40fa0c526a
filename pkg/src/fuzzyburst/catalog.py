"""Catalog ingestion and derivation of the six clustering variables.

The input CSV carries one burst per row with the header
``trigger_id,t50,t90,f1,f2,f3,f4,p64,p256,p1024``: durations in seconds,
channel fluences in ergs/cm^2, peak fluxes in counts/cm^2/s. Empty or
zero-coded fields are missing. From the fluences we form the total
F_T = F1+F2+F3+F4 and the hardness ratios H32 = F3/F2 and
H321 = F3/(F1+F2), then take log10 of T50, T90, P256, F_T, H32, H321.
Records that cannot produce all six finite logs are excluded, each with a
recorded reason.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .core import FeatureTable
from .validity import HardPartition

logger = logging.getLogger(__name__)

CATALOG_COLUMNS = ("trigger_id", "t50", "t90", "f1", "f2", "f3", "f4", "p64", "p256", "p1024")

FEATURE_NAMES = ("log10_t50", "log10_t90", "log10_p256", "log10_ft", "log10_h32", "log10_h321")

# variables summarized per cluster, in report order
SUMMARY_VARIABLES = ("t50", "t90", "p256", "ft_x1e6", "h32", "h321")

BATSE_CATALOG_URL = "https://gammaray.nsstc.nasa.gov/batse/grb/catalog/current/"


@dataclass
class RawBurstRecord:
    """One catalog row; any measurement may be missing (None)."""

    trigger_id: int
    t50: float | None = None
    t90: float | None = None
    f1: float | None = None
    f2: float | None = None
    f3: float | None = None
    f4: float | None = None
    p64: float | None = None
    p256: float | None = None
    p1024: float | None = None


@dataclass
class DerivedBurst:
    """The six log variables of one retained burst plus its raw-scale values."""

    trigger_id: int
    log10_t50: float
    log10_t90: float
    log10_p256: float
    log10_ft: float
    log10_h32: float
    log10_h321: float
    t50: float
    t90: float
    p256: float
    ft: float
    h32: float
    h321: float


@dataclass
class DeriveResult:
    """Retained bursts, their feature table, and the exclusion log.

    ``table`` is None when no record survives. ``exclusions`` holds
    (trigger_id, reason) pairs, one per dropped record.
    """

    bursts: list = field(default_factory=list)
    table: FeatureTable | None = None
    exclusions: list = field(default_factory=list)


@dataclass
class ClusterSummary:
    """Raw-scale property summary of one cluster.

    ``stats`` maps each of SUMMARY_VARIABLES to (mean, standard error) where
    the standard error is sd/sqrt(n) with the N-1 denominator (0 for a
    single-member cluster); None for an empty cluster.
    """

    cluster: int
    size: int
    pct: float
    stats: dict | None


def _parse_value(text: str, column: str, lineno: int) -> float | None:
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"line {lineno}: cannot parse {column}={text!r} as a number") from None
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"line {lineno}: non-finite {column}={text!r}")
    if value == 0.0:
        return None  # zero-coded missing value
    return value


def load_catalog(path) -> list:
    """Read catalog records from a CSV file.

    Blank and zero-coded fields become missing. Negative values are kept
    (channel fluences can go negative after background subtraction) and
    handled by the exclusion rules of :func:`derive_features`. Malformed rows
    and duplicate trigger ids are errors; a record with t50 > t90 is logged
    and retained.
    """
    records = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != list(CATALOG_COLUMNS):
            raise ValueError(
                f"{path}: expected header {','.join(CATALOG_COLUMNS)}, got "
                f"{','.join(header) if header else '<empty file>'}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and row[0].strip() == ""):
                continue
            if len(row) != len(CATALOG_COLUMNS):
                raise ValueError(
                    f"line {lineno}: expected {len(CATALOG_COLUMNS)} fields, got {len(row)}"
                )
            try:
                trigger_id = int(row[0].strip())
            except ValueError:
                raise ValueError(
                    f"line {lineno}: cannot parse trigger_id={row[0]!r} as an integer"
                ) from None
            if trigger_id in seen:
                raise ValueError(f"line {lineno}: duplicate trigger_id {trigger_id}")
            seen.add(trigger_id)
            values = {
                col: _parse_value(row[j], col, lineno)
                for j, col in enumerate(CATALOG_COLUMNS)
                if col != "trigger_id"
            }
            record = RawBurstRecord(trigger_id=trigger_id, **values)
            if record.t50 is not None and record.t90 is not None and record.t50 > record.t90:
                logger.warning("trigger %d: t50=%g exceeds t90=%g (record retained)",
                               trigger_id, record.t50, record.t90)
            records.append(record)
    logger.info("loaded %d catalog records from %s", len(records), path)
    return records


def derive_features(records) -> DeriveResult:
    """Derive the six log variables, excluding records that cannot supply them.

    Checks run in a fixed order per record and the first failure is the
    recorded reason: missing inputs (t50, t90, p256, f1..f4), then
    non-positive values that would break a log (t50, t90, p256, F_T, the
    hardness ratios H32 and H321). Exclusions are data, not errors.
    """
    bursts = []
    exclusions = []
    for rec in records:
        reason = _exclusion_reason(rec)
        if reason is not None:
            exclusions.append((rec.trigger_id, reason))
            continue
        ft = rec.f1 + rec.f2 + rec.f3 + rec.f4
        h32 = rec.f3 / rec.f2
        h321 = rec.f3 / (rec.f1 + rec.f2)
        bursts.append(
            DerivedBurst(
                trigger_id=rec.trigger_id,
                log10_t50=math.log10(rec.t50),
                log10_t90=math.log10(rec.t90),
                log10_p256=math.log10(rec.p256),
                log10_ft=math.log10(ft),
                log10_h32=math.log10(h32),
                log10_h321=math.log10(h321),
                t50=rec.t50,
                t90=rec.t90,
                p256=rec.p256,
                ft=ft,
                h32=h32,
                h321=h321,
            )
        )
    table = None
    if bursts:
        values = np.array(
            [
                [b.log10_t50, b.log10_t90, b.log10_p256, b.log10_ft, b.log10_h32, b.log10_h321]
                for b in bursts
            ]
        )
        table = FeatureTable(values, FEATURE_NAMES, tuple(b.trigger_id for b in bursts))
    if exclusions:
        logger.info("excluded %d of %d records", len(exclusions), len(records))
    return DeriveResult(bursts=bursts, table=table, exclusions=exclusions)


def _exclusion_reason(rec: RawBurstRecord) -> str | None:
    for name in ("t50", "t90", "p256", "f1", "f2", "f3", "f4"):
        if getattr(rec, name) is None:
            return f"missing {name}"
    if rec.t50 <= 0.0:
        return "non-finite log T50"
    if rec.t90 <= 0.0:
        return "non-finite log T90"
    if rec.p256 <= 0.0:
        return "non-finite log P256"
    if rec.f1 + rec.f2 + rec.f3 + rec.f4 <= 0.0:
        return "non-finite log FT"
    if rec.f2 <= 0.0 or rec.f3 <= 0.0:
        return "non-finite log H32"
    if rec.f1 + rec.f2 <= 0.0:
        return "non-finite log H321"
    return None


def write_exclusion_log(exclusions, path) -> None:
    """One line per dropped record: trigger_id<TAB>reason."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for trigger_id, reason in exclusions:
            fh.write(f"{trigger_id}\t{reason}\n")


def summarize_clusters(bursts, labels: HardPartition) -> list:
    """Mean and standard error of the raw-scale variables per cluster.

    Reports T50 (s), T90 (s), P256 (counts/cm^2/s), F_T x 1e6 (ergs/cm^2),
    H32 and H321 for each cluster, with sizes and size percentages. An empty
    cluster gets size 0 and no statistics.
    """
    if labels.n != len(bursts):
        raise ValueError("partition and burst list disagree on N")
    arrays = {
        "t50": np.array([b.t50 for b in bursts]),
        "t90": np.array([b.t90 for b in bursts]),
        "p256": np.array([b.p256 for b in bursts]),
        "ft_x1e6": np.array([b.ft * 1e6 for b in bursts]),
        "h32": np.array([b.h32 for b in bursts]),
        "h321": np.array([b.h321 for b in bursts]),
    }
    n = len(bursts)
    summaries = []
    for c in range(1, labels.k + 1):
        mask = labels.labels == c
        size = int(mask.sum())
        if size == 0:
            summaries.append(ClusterSummary(cluster=c, size=0, pct=0.0, stats=None))
            continue
        stats = {}
        for name in SUMMARY_VARIABLES:
            vals = arrays[name][mask]
            mean = float(vals.mean())
            se = float(vals.std(ddof=1) / math.sqrt(size)) if size > 1 else 0.0
            stats[name] = (mean, se)
        summaries.append(ClusterSummary(cluster=c, size=size, pct=100.0 * size / n, stats=stats))
    return summaries


def convert_batse_tables(duration_path, flux_path, out_path):
    """Converter stub for the public BATSE current-catalog tables.

    The catalog (%s) distributes the measurements as fixed-width ASCII
    tables rather than one CSV:

    * the duration table carries, per trigger: trigger number, T50, T50
      error, T50 start time, T90, T90 error, T90 start time;
    * the flux/fluence table carries, per trigger: trigger number, the four
      channel fluences F1..F4 (20-50, 50-100, 100-300, >300 keV; ergs/cm^2)
      each followed by its error, then the peak fluxes P64, P256, P1024
      (counts/cm^2/s) each followed by its error.

    A converter must join the two tables on the trigger number and emit one
    CSV row per trigger with the header ``%s``, leaving a field empty when
    the trigger is absent from a table or the value is zero-coded. The
    catalog itself is not redistributed here; download it from the URL above
    and implement or script the join for the file revision you fetched.
    """ % (BATSE_CATALOG_URL, ",".join(CATALOG_COLUMNS))
    raise NotImplementedError(
        "fetch the catalog tables from %s and join them into the CSV contract "
        "documented in this function's docstring" % BATSE_CATALOG_URL
    )
