"""Data models for significant interval and frequent episode mining."""

import math
from datetime import date, datetime
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator


class _LenientEnum(str, Enum):
    """String enum that accepts values case-insensitively."""

    @classmethod
    def _missing_(cls, value: object) -> "_LenientEnum | None":
        if isinstance(value, str):
            lowered = value.strip().lower()
            for member in cls:
                if member.value.lower() == lowered:
                    return member
        return None


class AccessStatus(_LenientEnum):
    """Status column of a raw log line."""

    ACCESS = "Access"
    NOT_ACCESS = "NotAccess"


class Periodicity(_LenientEnum):
    """Repeating unit the time series is folded over."""

    DAILY = "daily"
    WEEKLY = "weekly"

    def length(self, granularity: "Granularity") -> int:
        """Number of time points in one period at the given granularity."""
        minutes = 1440 if self is Periodicity.DAILY else 7 * 1440
        return minutes * granularity.per_minute


class Granularity(_LenientEnum):
    """Resolution of time points inside a period."""

    MINUTE = "minute"
    SECOND = "second"

    @property
    def per_minute(self) -> int:
        return 1 if self is Granularity.MINUTE else 60


class Semantics(_LenientEnum):
    """Admission rule for intervals joining an episode."""

    S = "s"  # joiner starts within the window of the base start
    E = "e"  # joiner starts and ends within the window of the base start


class TimestampFormat(_LenientEnum):
    """Timestamp layouts accepted by the log parser."""

    AUTO = "auto"
    MDY = "mdy"  # 4/15/2009 2:05 pm
    ISO = "iso"  # 2009-04-15 14:05


class PairRelation(_LenientEnum):
    """Relationship between two intervals of the same entity."""

    DISJOINT = "disjoint"
    OVERLAPPING = "overlapping"
    CONTAINED = "contained"
    EQUAL = "equal"


def round_half_up(value: Fraction) -> Decimal:
    """Round a non-negative exact value half-up to two decimals."""
    return Decimal(math.floor(value * 100 + Fraction(1, 2))).scaleb(-2)


class LogRecord(BaseModel):
    """One raw log line: an entity, its access status and when it happened."""

    model_config = ConfigDict(frozen=True)

    entity: str
    status: AccessStatus
    timestamp: datetime

    @field_validator("entity")
    @classmethod
    def _entity_not_blank(cls, value: str) -> str:
        value = value.strip()
        if not value:
            raise ValueError("entity must be non-empty")
        return value

    def is_access(self) -> bool:
        """Check if the record is an access event."""
        return self.status is AccessStatus.ACCESS


class FoldedPoint(BaseModel):
    """A time point within the period and how often it was accessed."""

    model_config = ConfigDict(frozen=True)

    time_point: int = Field(ge=0)
    access_count: int = Field(ge=1)


class FoldedSeries(BaseModel):
    """Per-entity access counts folded over a periodicity."""

    model_config = ConfigDict(frozen=True)

    entity: str = Field(min_length=1)
    periodicity: Periodicity = Periodicity.DAILY
    granularity: Granularity = Granularity.MINUTE
    points: tuple[FoldedPoint, ...] = ()
    period_count: PositiveInt

    @model_validator(mode="after")
    def _check_points(self) -> "FoldedSeries":
        limit = self.periodicity.length(self.granularity)
        previous = -1
        for point in self.points:
            if point.time_point <= previous:
                raise ValueError("time points must be strictly increasing")
            if point.time_point >= limit:
                raise ValueError(f"time point {point.time_point} outside period of {limit} units")
            previous = point.time_point
        return self

    @property
    def total_access_count(self) -> int:
        return sum(p.access_count for p in self.points)


class SignificantInterval(BaseModel):
    """An interval [start, end] of high activity for one entity.

    ``confidence`` is an exact percentage. Intervals produced by discovery also carry
    the access count, point count and N they were computed from; intervals loaded from
    a summary table may only know their confidence.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entity: str = Field(min_length=1)
    start: int = Field(ge=0)
    end: int = Field(ge=0)
    confidence: Fraction
    access_count: int | None = Field(default=None, ge=1)
    point_count: int | None = Field(default=None, ge=1)
    period_count: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_consistency(self) -> "SignificantInterval":
        if self.start > self.end:
            raise ValueError(f"start {self.start} is after end {self.end}")
        if self.confidence < 0:
            raise ValueError("confidence must be non-negative")
        if self.access_count is not None and self.period_count is not None:
            expected = Fraction(100 * self.access_count, self.period_count)
            if expected != self.confidence:
                raise ValueError(f"confidence {self.confidence} does not match 100*{self.access_count}/N")
        return self

    @classmethod
    def from_counts(
        cls,
        entity: str,
        start: int,
        end: int,
        access_count: int,
        point_count: int,
        period_count: int,
    ) -> "SignificantInterval":
        """Build an interval whose confidence is computed from its counts."""
        return cls(
            entity=entity,
            start=start,
            end=end,
            confidence=Fraction(100 * access_count, period_count),
            access_count=access_count,
            point_count=point_count,
            period_count=period_count,
        )

    @property
    def span(self) -> int:
        """Clock distance between start and end in granularity units."""
        return self.end - self.start

    @property
    def length(self) -> int:
        """Inclusive length, used as the density denominator."""
        return self.end - self.start + 1

    @property
    def density(self) -> Fraction | None:
        if self.access_count is None:
            return None
        return Fraction(self.access_count, self.length)

    @property
    def bounds(self) -> tuple[int, int]:
        return (self.start, self.end)


class MiningConfig(BaseModel):
    """User parameters for one mining run.

    Thresholds have no defaults; commands that need them check presence explicitly.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    periodicity: Periodicity = Periodicity.DAILY
    granularity: Granularity = Granularity.MINUTE
    min_conf: Decimal | None = Field(default=None, gt=0, le=100, decimal_places=2)
    max_len: int | None = Field(default=None, ge=0)
    n_override: int | None = Field(default=None, ge=1)
    window: int | None = Field(default=None, ge=0)
    semantics: Semantics = Semantics.S
    seed: int | None = None

    @property
    def min_conf_fraction(self) -> Fraction | None:
        return None if self.min_conf is None else Fraction(self.min_conf)


class Episode(BaseModel):
    """A frequent episode: distinct entities whose intervals co-occur within a window."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entities: tuple[str, ...]
    start: int = Field(ge=0)
    end: int = Field(ge=0)
    pattern_confidence: Fraction
    members: tuple[SignificantInterval, ...] = Field(default=(), exclude=True, repr=False)

    @model_validator(mode="after")
    def _check_shape(self) -> "Episode":
        if len(self.entities) < 2:
            raise ValueError("an episode needs at least two entities")
        if self.start > self.end:
            raise ValueError(f"start {self.start} is after end {self.end}")
        return self

    @property
    def level(self) -> int:
        return len(self.entities)


class FedInput(BaseModel):
    """Significant intervals of all entities, ordered by start point."""

    model_config = ConfigDict(frozen=True)

    intervals: tuple[SignificantInterval, ...] = ()

    @field_validator("intervals")
    @classmethod
    def _sorted_by_start(cls, value: tuple[SignificantInterval, ...]) -> tuple[SignificantInterval, ...]:
        for previous, current in zip(value, value[1:], strict=False):
            if current.start < previous.start:
                raise ValueError(
                    f"intervals are not sorted by start point ({previous.entity}@{previous.start} "
                    f"precedes {current.entity}@{current.start})"
                )
        return value

    @property
    def entity_count(self) -> int:
        """Number of distinct entities (n), the cap on episode level."""
        return len({interval.entity for interval in self.intervals})


class EntityProfile(BaseModel):
    """Daily access habits of one synthetic entity."""

    name: str = Field(min_length=1)
    peaks: list[int] = Field(default_factory=list)  # minutes after midnight
    spread: int = Field(default=0, ge=0)
    daily_rate: float = Field(default=1.0, ge=0.0, le=1.0)

    @field_validator("peaks")
    @classmethod
    def _peaks_within_day(cls, value: list[int]) -> list[int]:
        for peak in value:
            if not 0 <= peak < 1440:
                raise ValueError(f"peak {peak} outside the day")
        return value


class GeneratorSpec(BaseModel):
    """Parameters of the seeded synthetic log generator."""

    seed: int
    days: PositiveInt
    start_date: date = date(2009, 4, 1)
    entities: list[EntityProfile] = Field(default_factory=list)
    not_access_rate: float = Field(default=0.0, ge=0.0, le=1.0)

    def expected_access_rows(self) -> float:
        """Expected number of Access rows the generator emits."""
        return self.days * sum(len(e.peaks) * e.daily_rate for e in self.entities)

    @classmethod
    def from_yaml(cls, path: Path, **overrides: object) -> "GeneratorSpec":
        """Load a generator spec from a YAML file; non-None overrides replace file values."""
        import yaml

        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        # Profiles may be given as a name -> settings mapping
        if isinstance(data, dict) and isinstance(data.get("entities"), dict):
            data["entities"] = [{"name": name, **(settings or {})} for name, settings in data["entities"].items()]

        if isinstance(data, dict):
            data.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(data)


class RunManifest(BaseModel):
    """Record of one CLI run, written next to its outputs."""

    command: str
    inputs: list[str] = Field(default_factory=list)
    output_dir: str
    config: MiningConfig
    tool_version: str
    started_at: datetime
    finished_at: datetime | None = None
    notes: list[str] = Field(default_factory=list)
