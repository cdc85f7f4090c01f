"""Patient cohort model and ingestion.

A cohort is an immutable list of PatientRecord values plus the FeatureSpec
that fixes the canonical column order for every matrix built downstream.
Ingestion reads one CSV of tabular features plus a directory of UTF-8 note
files; synthetic cohorts are written in the same format so there is a single
ingestion path.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError
from .registry import FeatureDef, REGISTRY_BY_NAME

REQUIRED_COLUMNS = (
    "patient_id",
    "gender",
    "age_at_discharge",
    "note_file",
    "mortality_90d",
    "mortality_1y",
    "readmit_90d",
)

OUTCOMES = ("mortality_90d", "mortality_1y", "readmit_90d")

# Always present on a record, derived from required CSV columns rather than
# feature cells; they open every FeatureSpec.
DEMOGRAPHIC_FEATURES = (
    FeatureDef("gender_male", "demographics", "binary"),
    FeatureDef("age_at_discharge", "demographics", "continuous"),
)


class Gender(enum.Enum):
    FEMALE = "F"
    MALE = "M"


@dataclass(frozen=True)
class OutcomeSet:
    mortality_90d: bool
    mortality_1y: bool
    readmit_90d: bool

    def __post_init__(self):
        if self.mortality_90d and not self.mortality_1y:
            raise ValueError("mortality_90d implies mortality_1y")

    def get(self, outcome: str) -> bool:
        if outcome not in OUTCOMES:
            raise KeyError(outcome)
        return getattr(self, outcome)


@dataclass(frozen=True)
class StayAggregate:
    min: float
    max: float
    mean: float


@dataclass(frozen=True)
class PatientRecord:
    """One admission. `emr_features` maps feature name -> value or None (missing)."""

    patient_id: str
    gender: Gender
    age_at_discharge: int
    emr_features: Mapping[str, float | None]
    note_text: str
    outcomes: OutcomeSet


@dataclass(frozen=True)
class FeatureSpec:
    entries: tuple[FeatureDef, ...]

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            dupe = next(n for n in names if names.count(n) > 1)
            raise DataError(f"duplicate feature name {dupe!r} in feature spec")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def kind_of(self, name: str) -> str:
        for e in self.entries:
            if e.name == name:
                return e.kind
        raise KeyError(name)


@dataclass(frozen=True)
class Cohort:
    spec: FeatureSpec
    records: tuple[PatientRecord, ...]

    def __post_init__(self):
        seen: set[str] = set()
        names = set(self.spec.names)
        for rec in self.records:
            if rec.patient_id in seen:
                raise DataError(f"duplicate patient_id {rec.patient_id!r}")
            seen.add(rec.patient_id)
            unknown = set(rec.emr_features) - names
            if unknown:
                raise DataError(
                    f"patient {rec.patient_id!r} carries features not in the spec: {sorted(unknown)}"
                )

    def __len__(self) -> int:
        return len(self.records)

    def patient_ids(self) -> tuple[str, ...]:
        return tuple(r.patient_id for r in self.records)


def aggregate_stay(observations: Sequence[float]) -> StayAggregate:
    """Collapse repeated per-stay observations into min, max and arithmetic mean."""
    if len(observations) == 0:
        raise DataError("no observations")
    vals = [float(v) for v in observations]
    if not all(math.isfinite(v) for v in vals):
        raise DataError("non-finite observation value")
    return StayAggregate(min=min(vals), max=max(vals), mean=sum(vals) / len(vals))


def _parse_outcome(cell: str, column: str, row_no: int) -> bool:
    if cell not in ("0", "1"):
        raise DataError(f"row {row_no}: column {column!r} must be 0 or 1, got {cell!r}")
    return cell == "1"


def _parse_feature_cell(cell: str, column: str, row_no: int) -> float | None:
    if cell is None or cell.strip() == "":
        return None
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"row {row_no}: column {column!r} is not numeric: {cell!r}") from None
    if not math.isfinite(value):
        raise DataError(f"row {row_no}: column {column!r} is not finite: {cell!r}")
    return value


def load_cohort(features_csv: str | Path, notes_dir: str | Path, schema: str = "registry") -> Cohort:
    """Load a cohort from the features CSV plus one note file per patient.

    schema="registry" validates every feature column against the built-in
    70-feature registry; schema="open" accepts arbitrary numeric columns and
    infers binary vs continuous from the observed values.
    """
    if schema not in ("registry", "open"):
        raise DataError(f"unknown schema mode {schema!r}")
    features_csv = Path(features_csv)
    notes_dir = Path(notes_dir)

    with open(features_csv, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, restkey="__extra__")
        header = reader.fieldnames
        if header is None:
            raise DataError(f"{features_csv}: empty CSV")
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise DataError(f"{features_csv}: missing required columns {missing}")
        feature_columns = [c for c in header if c not in REQUIRED_COLUMNS]
        for col in feature_columns:
            if col in ("gender_male",):
                raise DataError(f"feature column {col!r} collides with a derived demographic")
            if schema == "registry" and col not in REGISTRY_BY_NAME:
                raise DataError(f"unknown feature column {col!r} (not in the EMR registry)")

        rows = []
        for row_no, row in enumerate(reader, start=2):
            if "__extra__" in row or any(v is None for v in row.values()):
                raise DataError(f"row {row_no}: wrong number of fields")
            rows.append((row_no, row))

    records: list[PatientRecord] = []
    seen_ids: set[str] = set()
    observed: dict[str, list[float]] = {c: [] for c in feature_columns}
    for row_no, row in rows:
        pid = row["patient_id"].strip()
        if not pid:
            raise DataError(f"row {row_no}: empty patient_id")
        if pid in seen_ids:
            raise DataError(f"row {row_no}: duplicate patient_id {pid!r}")
        seen_ids.add(pid)

        try:
            gender = Gender(row["gender"].strip())
        except ValueError:
            raise DataError(
                f"row {row_no}: gender must be F or M, got {row['gender']!r}"
            ) from None
        try:
            age = int(row["age_at_discharge"])
        except ValueError:
            raise DataError(f"row {row_no}: age_at_discharge is not an integer") from None
        if age < 0:
            raise DataError(f"row {row_no}: negative age_at_discharge")

        m90 = _parse_outcome(row["mortality_90d"], "mortality_90d", row_no)
        m1y = _parse_outcome(row["mortality_1y"], "mortality_1y", row_no)
        readmit = _parse_outcome(row["readmit_90d"], "readmit_90d", row_no)
        try:
            outcomes = OutcomeSet(m90, m1y, readmit)
        except ValueError as exc:
            raise DataError(f"row {row_no}: {exc}") from None

        note_path = notes_dir / row["note_file"]
        if not note_path.is_file():
            raise DataError(f"row {row_no}: note file not found: {note_path}")
        try:
            note_text = note_path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            raise DataError(f"row {row_no}: note file is not valid UTF-8: {note_path}") from None

        feats: dict[str, float | None] = {}
        for col in feature_columns:
            value = _parse_feature_cell(row[col], col, row_no)
            feats[col] = value
            if value is not None:
                observed[col].append(value)
        records.append(
            PatientRecord(
                patient_id=pid,
                gender=gender,
                age_at_discharge=age,
                emr_features=feats,
                note_text=note_text,
                outcomes=outcomes,
            )
        )

    entries = list(DEMOGRAPHIC_FEATURES)
    for col in feature_columns:
        if schema == "registry":
            entries.append(REGISTRY_BY_NAME[col])
        else:
            vals = observed[col]
            kind = "binary" if vals and all(v in (0.0, 1.0) for v in vals) else "continuous"
            group = "comorbidities" if kind == "binary" else "lab_tests"
            entries.append(FeatureDef(col, group, kind))

    if schema == "registry":
        for row_no, row in rows:
            for col in feature_columns:
                if REGISTRY_BY_NAME[col].kind == "binary":
                    cell = row[col]
                    if cell.strip() != "" and float(cell) not in (0.0, 1.0):
                        raise DataError(
                            f"row {row_no}: binary column {col!r} must be 0/1, got {cell!r}"
                        )

    return Cohort(spec=FeatureSpec(tuple(entries)), records=tuple(records))


def write_cohort(cohort: Cohort, out_dir: str | Path) -> tuple[Path, Path]:
    """Write `features.csv` + `notes/` under out_dir; inverse of load_cohort."""
    out_dir = Path(out_dir)
    notes_dir = out_dir / "notes"
    notes_dir.mkdir(parents=True, exist_ok=True)
    feature_columns = [n for n in cohort.spec.names if n not in ("gender_male", "age_at_discharge")]
    csv_path = out_dir / "features.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(REQUIRED_COLUMNS) + feature_columns)
        for rec in cohort.records:
            note_name = f"{rec.patient_id}.txt"
            (notes_dir / note_name).write_text(rec.note_text, encoding="utf-8")
            row = [
                rec.patient_id,
                rec.gender.value,
                str(rec.age_at_discharge),
                note_name,
                str(int(rec.outcomes.mortality_90d)),
                str(int(rec.outcomes.mortality_1y)),
                str(int(rec.outcomes.readmit_90d)),
            ]
            for col in feature_columns:
                value = rec.emr_features.get(col)
                row.append("" if value is None else repr(value))
            writer.writerow(row)
    return csv_path, notes_dir


def impute_missing(train: Cohort, apply_to: Cohort) -> Cohort:
    """Fill missing feature values using training-cohort statistics only.

    Continuous features get the training median, binary features 0. Errors if
    a feature was never observed in the training cohort.
    """
    if train.spec != apply_to.spec:
        raise DataError("train and apply cohorts must share one feature spec")

    fill: dict[str, float] = {}
    for entry in train.spec.entries:
        if entry.name in ("gender_male", "age_at_discharge"):
            continue
        vals = [
            rec.emr_features[entry.name]
            for rec in train.records
            if rec.emr_features.get(entry.name) is not None
        ]
        if not vals:
            raise DataError(f"no observed values for {entry.name!r}")
        fill[entry.name] = 0.0 if entry.kind == "binary" else float(np.median(vals))

    new_records = []
    for rec in apply_to.records:
        feats = dict(rec.emr_features)
        changed = False
        for name, value in feats.items():
            if value is None:
                feats[name] = fill[name]
                changed = True
        if changed:
            rec = PatientRecord(
                patient_id=rec.patient_id,
                gender=rec.gender,
                age_at_discharge=rec.age_at_discharge,
                emr_features=feats,
                note_text=rec.note_text,
                outcomes=rec.outcomes,
            )
        new_records.append(rec)
    return Cohort(spec=apply_to.spec, records=tuple(new_records))


def split_train_test(cohort: Cohort, train_fraction: float, seed: int) -> tuple[Cohort, Cohort]:
    """Deterministic shuffled split; first floor(n * train_fraction) records train."""
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(cohort)
    if n == 0:
        raise DataError("cannot split an empty cohort")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    # guard against float fuzz when the product is an exact integer
    exact = train_fraction * n
    n_train = int(round(exact)) if abs(exact - round(exact)) < 1e-9 else int(math.floor(exact))
    train = tuple(cohort.records[i] for i in order[:n_train])
    test = tuple(cohort.records[i] for i in order[n_train:])
    return Cohort(cohort.spec, train), Cohort(cohort.spec, test)


def feature_row(record: PatientRecord, names: Iterable[str]) -> list[float]:
    """Materialize one dense feature row in the given column order."""
    row = []
    for name in names:
        if name == "gender_male":
            row.append(1.0 if record.gender is Gender.MALE else 0.0)
        elif name == "age_at_discharge":
            row.append(float(record.age_at_discharge))
        else:
            value = record.emr_features.get(name)
            if value is None:
                raise DataError(
                    f"patient {record.patient_id!r}: feature {name!r} is missing (impute first)"
                )
            row.append(float(value))
    return row
