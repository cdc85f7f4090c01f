"""Built-in registry of the 70 tabular EMR features the strict loader validates against.

The enumeration is an assumption that has to be pinned somewhere: labs from
routinely repeated panels (chemistry, CBC) carry min/max/mean aggregates over
the stay, sparsely sampled labs carry a single stay mean, and severity-score
components enter as single values. That yields

    2 demographics + 19 comorbidity variables + 34 lab aggregates
    + 6 SAPS-II components + 9 SOFA components = 70 columns.

Loading in "open" schema mode bypasses this registry and accepts any declared
numeric columns, which is what synthetic cohorts use.
"""

from __future__ import annotations

from dataclasses import dataclass

GROUPS = ("demographics", "comorbidities", "lab_tests", "sapsii", "sofa")
KINDS = ("binary", "continuous")


@dataclass(frozen=True)
class FeatureDef:
    name: str
    group: str
    kind: str

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"unknown feature group {self.group!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")


def _defs(group: str, kind: str, *names: str) -> list[FeatureDef]:
    return [FeatureDef(name, group, kind) for name in names]


# Labs with many observations per stay: min/max/mean aggregates.
_PANEL_LABS = (
    "anion_gap",
    "urea_nitrogen",
    "white_blood_cell_count",
    "bicarbonate",
    "chloride",
    "sodium",
    "potassium",
    "glucose",
    "hematocrit",
)

# Labs typically measured once or twice per stay: stay mean only.
_SPARSE_LABS = (
    "lactate",
    "blood_ph",
    "free_calcium",
    "pt",
    "ptt",
    "alkaline_phosphatase",
    "albumin",
)


def _lab_defs() -> list[FeatureDef]:
    out: list[FeatureDef] = []
    for lab in _PANEL_LABS:
        out.extend(_defs("lab_tests", "continuous", f"{lab}_min", f"{lab}_max", f"{lab}_mean"))
    for lab in _SPARSE_LABS:
        out.extend(_defs("lab_tests", "continuous", f"{lab}_mean"))
    return out


EMR_FEATURE_REGISTRY: tuple[FeatureDef, ...] = tuple(
    _defs("demographics", "binary", "gender_male")
    + _defs("demographics", "continuous", "age_at_discharge")
    + _defs(
        "comorbidities",
        "continuous",
        "charlson_comorbidity_index",
        "charlson_age_score",
    )
    + _defs(
        "comorbidities",
        "binary",
        "aids",
        "cerebrovascular_disease",
        "chronic_pulmonary_disease",
        "congestive_heart_failure",
        "dementia",
        "diabetes_without_cc",
        "diabetes_with_cc",
        "malignant_cancer",
        "metastatic_solid_tumor",
        "mild_liver_disease",
        "myocardial_infarct",
        "paraplegia",
        "peptic_ulcer_disease",
        "peripheral_vascular_disease",
        "renal_disease",
        "rheumatic_disease",
        "severe_liver_disease",
    )
    + _lab_defs()
    + _defs(
        "sapsii",
        "continuous",
        "sapsii_score",
        "sapsii_pao2fio2_score",
        "sapsii_age_score",
        "sapsii_heart_rate_score",
        "sapsii_probability",
        "sapsii_systolic_bp_score",
    )
    + _defs(
        "sofa",
        "continuous",
        "sofa_temperature_score",
        "sofa_glasgow_coma_score",
        "sofa_pao2fio2_ratio_novent",
        "sofa_pao2fio2_ratio_vent",
        "sofa_dobutamine_rate",
        "sofa_dopamine_rate",
        "sofa_epinephrine_rate",
        "sofa_norepinephrine_rate",
        "sofa_urine_output_24h",
    )
)

REGISTRY_BY_NAME: dict[str, FeatureDef] = {d.name: d for d in EMR_FEATURE_REGISTRY}

assert len(EMR_FEATURE_REGISTRY) == 70
assert len(REGISTRY_BY_NAME) == 70
