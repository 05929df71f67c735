from typing import Dict, Iterable, Sequence

import numpy as np

from ..models.domain import RecordTally, Statistic
from .records import COUNTERS, BaseCounter, as_matrix, maxima_mask


class TallyManager:
    """Runs one counter per requested statistic over a sequence in a single pass"""

    def __init__(self, keep_indices: bool = True):
        self.keep_indices = keep_indices
        self.counters: Dict[Statistic, BaseCounter] = {
            stat: cls(stat.value, keep_indices) for stat, cls in COUNTERS.items()
        }

    def execute(self, seq: Iterable, statistics: Sequence["Statistic | str"] = tuple(Statistic)) -> RecordTally:
        stats = [Statistic(s) for s in statistics]
        if not stats:
            raise ValueError("No statistics requested")
        arr = as_matrix(seq)
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("Point coordinates must be finite")

        active = [self.counters[s] for s in stats if s in self.counters]
        for counter in active:
            counter.keep_indices = self.keep_indices
            counter.reset()
        for x in arr:
            for counter in active:
                counter.push(x)

        fields = {"n": len(arr)}
        for stat in stats:
            if stat == Statistic.MAXIMA:
                mask = maxima_mask(arr)
                fields["maxima_count"] = int(mask.sum())
                if self.keep_indices:
                    fields["maxima_indices"] = [int(i) + 1 for i in np.flatnonzero(mask)]
                continue
            counter = self.counters[stat]
            counter.logger.debug(f"{counter.count} records in {counter.n} points")
            fields[f"{stat.value}_count"] = counter.count
            if self.keep_indices:
                fields[f"{stat.value}_indices"] = list(counter.indices)
        return RecordTally(**fields)

    def get_available_statistics(self) -> list:
        return [s.value for s in Statistic]
