"""Seeded synthetic access-log generator.

Stands in for field data: each entity has a few daily peaks, and on every day each
peak produces one access with the entity's daily rate, jittered uniformly by up to
``spread`` minutes.
"""

import logging
from datetime import datetime, time, timedelta

import numpy as np

from weblog_episodes.models import AccessStatus, EntityProfile, GeneratorSpec, LogRecord

logger = logging.getLogger(__name__)

# Default synthetic websites
FIVE_SITES = ["Citeseer.com", "Newsworld.com", "Sports.com", "Rgtu.net", "Election.com"]

MINUTES_PER_DAY = 1440


def generate(spec: GeneratorSpec) -> list[LogRecord]:
    """
    Generate access records for a spec.

    Output is fully determined by the spec (including its seed). Records are
    ordered by day, then entity, then peak.
    """
    rng = np.random.default_rng(spec.seed)
    records: list[LogRecord] = []
    first_day = datetime.combine(spec.start_date, time())

    for day in range(spec.days):
        midnight = first_day + timedelta(days=day)
        for entity in spec.entities:
            for peak in entity.peaks:
                if rng.random() >= entity.daily_rate:
                    continue
                jitter = int(rng.integers(-entity.spread, entity.spread + 1)) if entity.spread else 0
                offset = min(max(peak + jitter, 0), MINUTES_PER_DAY - 1)
                status = AccessStatus.ACCESS
                if spec.not_access_rate and rng.random() < spec.not_access_rate:
                    status = AccessStatus.NOT_ACCESS
                records.append(
                    LogRecord(entity=entity.name, status=status, timestamp=midnight + timedelta(minutes=offset))
                )

    logger.info("Generated %d records over %d days for %d entities", len(records), spec.days, len(spec.entities))
    return records


def five_site_spec(seed: int = 7, spread: int = 0, days: int = 90) -> GeneratorSpec:
    """
    Ninety days of five websites, about 1700 rows at the default length.

    Each site has four daily peaks at rate 0.95 (expected 1710 rows). Peaks of one
    site are at least an hour apart; sites are staggered five minutes apart so
    their intervals fall inside common sequential windows.
    """
    base_peaks = [9 * 60, 13 * 60, 17 * 60, 21 * 60]
    entities = [
        EntityProfile(
            name=name,
            peaks=[peak + 5 * index for peak in base_peaks],
            spread=spread,
            daily_rate=0.95,
        )
        for index, name in enumerate(FIVE_SITES)
    ]
    return GeneratorSpec(seed=seed, days=days, entities=entities)
