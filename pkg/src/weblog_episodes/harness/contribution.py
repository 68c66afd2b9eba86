"""Monthly contribution of each entity to the discovered episodes."""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from weblog_episodes.config import required
from weblog_episodes.fed.episodes import build_fed_input, one_pass_fed
from weblog_episodes.folding.folder import fold_all
from weblog_episodes.ingest.log_parser import clean
from weblog_episodes.models import Episode, LogRecord, MiningConfig
from weblog_episodes.sid.discovery import discover_all

logger = logging.getLogger(__name__)


@dataclass
class ContributionRow:
    """How many of a month's episodes an entity takes part in."""

    month: str
    entity: str
    episodes: int
    percent: Fraction  # share of the month's episode memberships


def month_key(record: LogRecord) -> str:
    return record.timestamp.strftime("%Y-%m")


def mine_monthly(records: Iterable[LogRecord], config: MiningConfig) -> dict[str, list[Episode]]:
    """
    Run clean, fold, interval discovery and episode discovery separately per month.

    One-Pass-SI is used when the config has max_len, One-Pass-AllSI otherwise.

    Returns:
        Episodes keyed by "YYYY-MM", months in calendar order
    """
    min_conf = required(config.min_conf, "min_conf")
    window = required(config.window, "window")

    months: dict[str, list[LogRecord]] = {}
    for record in records:
        months.setdefault(month_key(record), []).append(record)

    mined: dict[str, list[Episode]] = {}
    for month in sorted(months):
        partitions = clean(months[month])
        dataset = fold_all(partitions, config.periodicity, config.granularity, config.n_override)
        intervals = discover_all(dataset, min_conf, config.max_len)
        mined[month] = one_pass_fed(build_fed_input(intervals), window, config.semantics)
        logger.info("Month %s: %d intervals, %d episodes", month, len(intervals), len(mined[month]))
    return mined


def contribution_report(episodes_by_month: Mapping[str, Sequence[Episode]]) -> list[ContributionRow]:
    """
    Per month, the number of episodes each entity belongs to and its share.

    The share is the entity's memberships over all memberships of that month, so
    the shares of one month add up to 100. Months without episodes contribute no
    rows.
    """
    rows: list[ContributionRow] = []
    for month in sorted(episodes_by_month):
        memberships = Counter(entity for episode in episodes_by_month[month] for entity in episode.entities)
        total = sum(memberships.values())
        for entity in sorted(memberships):
            rows.append(
                ContributionRow(
                    month=month,
                    entity=entity,
                    episodes=memberships[entity],
                    percent=Fraction(100 * memberships[entity], total),
                )
            )
    return rows
