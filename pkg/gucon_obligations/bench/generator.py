"""Генератор синтетической базы знаний в форме электронных медкарт."""

import logging
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from decimal import Decimal

import pytz

from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Iri, Literal, Term, Triple
from gucon_obligations.core.timeline import TimeInstant
from gucon_obligations.exceptions import ConfigError
from gucon_obligations.vocab import DEFAULT_PREFIXES, EX, HC, RDF_TYPE

logger = logging.getLogger(__name__)

MIN_TRIPLE_TARGET = 1000

# Полный масштаб: около 2.4 млн утверждений на 100 пациентов
FULL_SCALE_TRIPLES = 2_400_000
FULL_SCALE_PATIENTS = 100

TYPE = Iri(RDF_TYPE)

PATIENT = Iri(str(HC.Patient))
ADMISSION = Iri(str(HC.Admission))
DIAGNOSIS_REPORT = Iri(str(HC.DiagnosisReport))
LAB_RESULT = Iri(str(HC.LabResult))

HAS_ADMISSION_RECORD = Iri(str(HC.hasAdmissionRecord))
HAS_PATIENT = Iri(str(HC.hasPatient))
HAS_ADMISSION = Iri(str(HC.hasAdmission))
ADMISSION_START = Iri(str(HC.hasActualAdmissionStartDate))
ADMISSION_END = Iri(str(HC.hasActualAdmissionEndDate))
IS_LAB_RESULT_OF = Iri(str(HC.isLabResultOf))

# Предикаты, из пар которых строятся правила: 5 + 3 + 6 дают 56 упорядоченных пар
RULE_PREDICATES: dict[Iri, tuple[Iri, ...]] = {
    PATIENT: (
        Iri(str(HC.hasGender)),
        Iri(str(HC.hasDateOfBirth)),
        Iri(str(HC.hasMaritalStatus)),
        Iri(str(HC.hasLanguage)),
        HAS_ADMISSION_RECORD,
    ),
    ADMISSION: (
        HAS_PATIENT,
        ADMISSION_START,
        Iri(str(HC.hasDiagnosisCode)),
    ),
    LAB_RESULT: (
        IS_LAB_RESULT_OF,
        Iri(str(HC.hasLabName)),
        Iri(str(HC.hasLabValue)),
        Iri(str(HC.hasLabUnits)),
        Iri(str(HC.hasLabDateTime)),
        Iri(str(HC.hasLabFlag)),
    ),
}

_GENDERS = ("Male", "Female")
_MARITAL = ("Married", "Single", "Divorced", "Separated", "Unknown")
_LANGUAGES = ("English", "Spanish", "Icelandic", "Unknown")
_LABS = (
    ("CBC: WHITE BLOOD CELL COUNT", "k/cumm"),
    ("CBC: HEMOGLOBIN", "gm/dl"),
    ("METABOLIC: GLUCOSE", "mg/dl"),
    ("METABOLIC: SODIUM", "mmol/L"),
    ("METABOLIC: POTASSIUM", "mmol/L"),
    ("URINALYSIS: PH", "no unit"),
)
_FLAGS = ("normal", "low", "high")
_DIAGNOSIS_CODES = tuple(f"{letter}{number:02d}" for letter in "CEIJKM" for number in range(10, 40, 3))

# Утверждений на результат анализа: тип и шесть свойств
_LAB_TRIPLES = 7

# Результатов анализов на госпитализацию при полном масштабе (110 107 на 372)
LABS_PER_ADMISSION = 296

# Дополнительные свойства результата анализа; ими добирается число утверждений до цели
_LAB_CHOICES: dict[Iri, tuple[str, ...]] = {
    Iri(str(HC.hasSpecimenType)): ("blood", "serum", "plasma", "urine"),
    Iri(str(HC.hasLabCategory)): ("hematology", "chemistry", "urinalysis"),
    Iri(str(HC.hasLabMethod)): ("automated", "manual", "point-of-care"),
    Iri(str(HC.hasLabStatus)): ("final", "preliminary", "corrected"),
    Iri(str(HC.hasLabPriority)): ("routine", "urgent", "stat"),
    Iri(str(HC.hasFastingStatus)): ("fasting", "non-fasting", "unknown"),
    Iri(str(HC.hasLabInstrument)): ("analyzer-a", "analyzer-b", "analyzer-c"),
    Iri(str(HC.hasLabSite)): ("central", "satellite", "bedside"),
    Iri(str(HC.hasCollectionMethod)): ("venipuncture", "capillary", "catheter", "clean-catch"),
    Iri(str(HC.hasContainerType)): ("lavender-top", "gold-top", "green-top", "cup"),
    Iri(str(HC.hasResultInterpretation)): ("within range", "below range", "above range"),
    Iri(str(HC.hasDeltaCheck)): ("passed", "flagged"),
    Iri(str(HC.hasHemolysisIndex)): ("none", "slight", "moderate"),
    Iri(str(HC.hasLipemiaIndex)): ("none", "slight", "moderate"),
    Iri(str(HC.hasIctericIndex)): ("none", "slight", "moderate"),
    Iri(str(HC.hasLabComment)): ("repeat requested", "sample diluted", "verified by second run"),
}
_LAB_RANGES = (Iri(str(HC.hasReferenceRangeLow)), Iri(str(HC.hasReferenceRangeHigh)))
_LAB_MOMENTS = (
    Iri(str(HC.hasCollectionDateTime)),
    Iri(str(HC.hasReceivedDateTime)),
    Iri(str(HC.hasVerifiedDateTime)),
    Iri(str(HC.hasReportedDateTime)),
)
_LAB_DETAILS: tuple[Iri, ...] = (*_LAB_CHOICES, *_LAB_RANGES, *_LAB_MOMENTS)
_MAX_LAB_TRIPLES = _LAB_TRIPLES + len(_LAB_DETAILS)


@dataclass(frozen=True, slots=True)
class GenerationConfig:
    """Параметры генерации.

    Args:
        seed: Зерно генератора
        triple_target: Целевое число утверждений базы
        patient_count: Число пациентов; по умолчанию пропорционально полному масштабу
        admissions_per_patient: Диапазон числа госпитализаций на пациента
        admission_weights: Веса значений диапазона (в среднем около 3.72)
        codes_per_admission: Диапазон числа диагнозов на госпитализацию
        labs_per_admission: Результатов анализов на госпитализацию
        time_origin: Начало временного горизонта
        horizon: Длина горизонта
        event_fraction: Доля конкретизаций правил, для которых создаются события
    """

    seed: int = 42
    triple_target: int = 100_000
    patient_count: int | None = None
    admissions_per_patient: tuple[int, int] = (3, 4)
    admission_weights: tuple[int, int] = (28, 72)
    codes_per_admission: tuple[int, int] = (2, 3)
    labs_per_admission: int = LABS_PER_ADMISSION
    time_origin: TimeInstant = field(
        default_factory=lambda: TimeInstant.finite(datetime(2025, 1, 1, tzinfo=pytz.utc))
    )
    horizon: timedelta = timedelta(days=30)
    event_fraction: float = 0.1

    def __post_init__(self):
        """Проверка согласованности параметров."""
        if self.triple_target < MIN_TRIPLE_TARGET:
            raise ConfigError(f"triple_target должен быть не меньше {MIN_TRIPLE_TARGET}: {self.triple_target}")
        if not self.time_origin.is_finite:
            raise ConfigError("time_origin должен быть конечным моментом")
        if self.horizon < timedelta(minutes=1):
            raise ConfigError("horizon должен быть не короче минуты")
        if not 0.0 <= self.event_fraction <= 1.0:
            raise ConfigError(f"event_fraction вне [0, 1]: {self.event_fraction}")
        low, high = self.admissions_per_patient
        if low < 1 or high < low:
            raise ConfigError(f"некорректный диапазон admissions_per_patient: {self.admissions_per_patient}")
        low, high = self.codes_per_admission
        if low < 1 or high < low:
            raise ConfigError(f"некорректный диапазон codes_per_admission: {self.codes_per_admission}")
        if self.labs_per_admission < 1:
            raise ConfigError(f"labs_per_admission должен быть положительным: {self.labs_per_admission}")

    @property
    def patients(self) -> int:
        """Число пациентов."""
        if self.patient_count is not None:
            return self.patient_count
        return max(1, self.triple_target * FULL_SCALE_PATIENTS // FULL_SCALE_TRIPLES)

    @property
    def horizon_end(self) -> TimeInstant:
        """Конец горизонта."""
        return TimeInstant.finite(self.time_origin.value + self.horizon)

    @property
    def evaluation_time(self) -> TimeInstant:
        """Момент оценки: середина горизонта."""
        return TimeInstant.finite(self.time_origin.value + self.horizon / 2)

    @property
    def scale(self) -> float:
        """Доля от полного масштаба."""
        return self.triple_target / FULL_SCALE_TRIPLES


def _instant_literal(value: datetime) -> Literal:
    return Literal.of_instant(TimeInstant.finite(value.replace(microsecond=0)))


def _random_moment(rng: random.Random, config: GenerationConfig) -> datetime:
    seconds = rng.randrange(int(config.horizon.total_seconds()))
    return config.time_origin.value + timedelta(seconds=seconds)


def _weighted_count(rng: random.Random, bounds: tuple[int, int], weights: tuple[int, ...] | None = None) -> int:
    values = list(range(bounds[0], bounds[1] + 1))
    if weights is not None and len(weights) == len(values):
        return rng.choices(values, weights=weights)[0]
    return rng.choice(values)


def _lab_detail(rng: random.Random, config: GenerationConfig, predicate: Iri) -> Literal:
    if predicate in _LAB_MOMENTS:
        return _instant_literal(_random_moment(rng, config))
    if predicate in _LAB_RANGES:
        return Literal.of_decimal(Decimal(rng.randrange(0, 50000)) / Decimal(100))
    return Literal.of_string(rng.choice(_LAB_CHOICES[predicate]))


def generate_dataset(config: GenerationConfig) -> Graph:
    """Синтетическая база: пациенты, госпитализации, выписные эпикризы и результаты анализов.

    На госпитализацию приходится labs_per_admission результатов анализов; их дополнительные
    свойства добирают число утверждений до triple_target. Если цель мала, число
    анализов ограничивается ею.

    Raises:
        ConfigError: Цель недостижима при заданном числе пациентов
    """
    rng = random.Random(config.seed)
    graph = Graph(prefixes=dict(DEFAULT_PREFIXES))
    admissions: list[Iri] = []

    for p in range(config.patients):
        patient = Iri(str(EX[f"patient-{p:05d}"]))
        graph.add(Triple(patient, TYPE, PATIENT))
        graph.add(Triple(patient, Iri(str(HC.hasGender)), Literal.of_string(rng.choice(_GENDERS))))
        birth = datetime(1930, 1, 1, tzinfo=pytz.utc) + timedelta(days=rng.randrange(365 * 70))
        graph.add(Triple(patient, Iri(str(HC.hasDateOfBirth)), _instant_literal(birth)))
        graph.add(Triple(patient, Iri(str(HC.hasMaritalStatus)), Literal.of_string(rng.choice(_MARITAL))))
        graph.add(Triple(patient, Iri(str(HC.hasLanguage)), Literal.of_string(rng.choice(_LANGUAGES))))
        poverty = Decimal(rng.randrange(0, 10000)) / Decimal(100)
        graph.add(Triple(patient, Iri(str(HC.hasPercentageBelowPoverty)), Literal.of_decimal(poverty)))

        for a in range(_weighted_count(rng, config.admissions_per_patient, config.admission_weights)):
            admission = Iri(str(EX[f"admission-{p:05d}-{a:02d}"]))
            admissions.append(admission)
            start = _random_moment(rng, config)
            end = start + timedelta(hours=rng.randrange(12, 24 * 14))
            graph.add(Triple(patient, HAS_ADMISSION_RECORD, admission))
            graph.add(Triple(admission, TYPE, ADMISSION))
            graph.add(Triple(admission, HAS_PATIENT, patient))
            graph.add(Triple(admission, ADMISSION_START, _instant_literal(start)))
            graph.add(Triple(admission, ADMISSION_END, _instant_literal(end)))
            codes = rng.sample(_DIAGNOSIS_CODES, _weighted_count(rng, config.codes_per_admission))
            for code in codes:
                graph.add(Triple(admission, Iri(str(HC.hasDiagnosisCode)), Literal.of_string(code)))

            report = Iri(str(EX[f"diagnosis-report-{p:05d}-{a:02d}"]))
            graph.add(Triple(report, TYPE, DIAGNOSIS_REPORT))
            graph.add(Triple(report, HAS_ADMISSION, admission))

    remaining = config.triple_target - len(graph)
    if remaining < _LAB_TRIPLES:
        raise ConfigError(
            f"цель {config.triple_target} недостижима: {config.patients} пациентов уже дают {len(graph)} утверждений"
        )

    lab_count = len(admissions) * config.labs_per_admission
    lab_count = max(lab_count, -(-remaining // _MAX_LAB_TRIPLES))
    lab_count = min(lab_count, remaining // _LAB_TRIPLES)
    details, extra = divmod(remaining - lab_count * _LAB_TRIPLES, lab_count)
    for n in range(lab_count):
        lab = Iri(str(EX[f"lab-{n:07d}"]))
        name, units = rng.choice(_LABS)
        value = Decimal(rng.randrange(10, 50000)) / Decimal(100)
        graph.add(Triple(lab, TYPE, LAB_RESULT))
        graph.add(Triple(lab, IS_LAB_RESULT_OF, admissions[n % len(admissions)]))
        graph.add(Triple(lab, Iri(str(HC.hasLabName)), Literal.of_string(name)))
        graph.add(Triple(lab, Iri(str(HC.hasLabValue)), Literal.of_decimal(value)))
        graph.add(Triple(lab, Iri(str(HC.hasLabUnits)), Literal.of_string(units)))
        graph.add(Triple(lab, Iri(str(HC.hasLabDateTime)), _instant_literal(_random_moment(rng, config))))
        graph.add(Triple(lab, Iri(str(HC.hasLabFlag)), Literal.of_string(rng.choice(_FLAGS))))
        for predicate in rng.sample(_LAB_DETAILS, details + (n < extra)):
            graph.add(Triple(lab, predicate, _lab_detail(rng, config, predicate)))

    logger.info(
        f"[Генератор] seed={config.seed}: {config.patients} пациентов, {len(admissions)} госпитализаций, "
        f"{lab_count} анализов, {len(graph)} утверждений"
    )
    return graph


def rule_predicate_pairs() -> list[tuple[Iri, Iri, Iri]]:
    """Упорядоченные пары различных предикатов одного класса: (класс, p1, p2)."""
    pairs = []
    for cls, predicates in RULE_PREDICATES.items():
        for first in predicates:
            for second in predicates:
                if first != second:
                    pairs.append((cls, first, second))
    return pairs


def pair_match_count(graph: Graph, first: Term, second: Term) -> int:
    """Число отображений шаблона '?e p1 ?r . ?e p2 ?v' по индексам графа."""
    firsts: dict[Term, int] = {}
    for triple in graph.match(None, first, None):
        firsts[triple.subject] = firsts.get(triple.subject, 0) + 1
    total = 0
    for subject, count in firsts.items():
        total += count * sum(1 for _ in graph.match(subject, second, None))
    return total
