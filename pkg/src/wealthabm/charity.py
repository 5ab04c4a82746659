"""Critical-stage detection and charity redistribution strategies.

The economy is *critical* when the money gap (total held by the poorest
half minus total held by the richest tenth) falls to the threshold or below.
A charity organization then collects single units from richer deciles and
hands them to poorer ones:

``A``
    the single richest agent gives one unit to the single poorest agent.
``B``
    ``c_pct`` percent of decile 10 give one unit each; the pool is shared
    among ``d_pct`` percent of each of deciles 1-5.
``C``
    three independent channels 10 -> 1, 9 -> 2 and 8 -> 3 with donor shares
    ``k_pct``, ``p_pct``, ``v_pct`` and recipient shares ``x_pct``, ``y_pct``,
    ``z_pct``.

The charity holds nothing between ticks: every unit collected is paid out in
the same call. Ties in money are always broken by ascending agent id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .economy import CHARITY, TransferLedger
from .errors import ConfigError

RICHEST_FIRST = "richest-first"
POOREST_FIRST = "poorest-first"

_PARAMS = {
    "A": (),
    "B": ("c_pct", "d_pct"),
    "C": ("k_pct", "p_pct", "v_pct", "x_pct", "y_pct", "z_pct"),
}


@dataclass(frozen=True)
class CharityStrategy:
    variant: str
    c_pct: Optional[float] = None
    d_pct: Optional[float] = None
    k_pct: Optional[float] = None
    p_pct: Optional[float] = None
    v_pct: Optional[float] = None
    x_pct: Optional[float] = None
    y_pct: Optional[float] = None
    z_pct: Optional[float] = None

    def __post_init__(self):
        if self.variant not in _PARAMS:
            raise ConfigError(f"unknown charity strategy {self.variant!r}; expected A, B or C")
        for name in _PARAMS[self.variant]:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"strategy {self.variant} requires parameter '{name}'")
            if not 0 < value <= 100:
                raise ConfigError(f"'{name}' must lie in (0, 100], got {value}")
        for name in _PARAMS["C"] + _PARAMS["B"]:
            if name not in _PARAMS[self.variant] and getattr(self, name) is not None:
                raise ConfigError(f"parameter '{name}' does not apply to strategy {self.variant}")

    @classmethod
    def a(cls) -> "CharityStrategy":
        return cls("A")

    @classmethod
    def b(cls, c_pct: float, d_pct: float) -> "CharityStrategy":
        return cls("B", c_pct=c_pct, d_pct=d_pct)

    @classmethod
    def c(cls, k_pct, p_pct, v_pct, x_pct, y_pct, z_pct) -> "CharityStrategy":
        return cls("C", k_pct=k_pct, p_pct=p_pct, v_pct=v_pct,
                   x_pct=x_pct, y_pct=y_pct, z_pct=z_pct)

    def params(self) -> dict:
        return {name: getattr(self, name) for name in _PARAMS[self.variant]}

    def channels(self):
        """``(donor decile, donor pct, recipient deciles, recipient pct)`` tuples."""
        if self.variant == "B":
            return [(10, self.c_pct, (1, 2, 3, 4, 5), self.d_pct)]
        if self.variant == "C":
            return [
                (10, self.k_pct, (1,), self.x_pct),
                (9, self.p_pct, (2,), self.y_pct),
                (8, self.v_pct, (3,), self.z_pct),
            ]
        return []


@dataclass(frozen=True)
class DecilePartition:
    """Agents split into ten equal groups by money, poorest group first.

    ``groups[i]`` lists decile ``i + 1`` in ascending ``(money, id)`` order;
    ``money`` is the snapshot the partition was taken from.
    """

    groups: tuple
    money: np.ndarray

    @classmethod
    def from_balances(cls, money) -> "DecilePartition":
        money = np.array(money, dtype=np.int64)
        n = money.size
        if n == 0 or n % 10:
            raise ConfigError(f"decile partition needs a population divisible by 10, got {n}")
        order = np.argsort(money, kind="stable")
        return cls(tuple(order.reshape(10, n // 10)), money)

    @property
    def decile_size(self) -> int:
        return self.groups[0].size


def selection_count(pct: float, size: int) -> int:
    """``pct`` percent of ``size``, rounded half up, at least 1."""
    return max(1, min(size, math.floor(pct * size / 100 + 0.5)))


def decile_select(partition: DecilePartition, decile_index: int, pct: float,
                  mode: str = POOREST_FIRST) -> np.ndarray:
    if not 1 <= decile_index <= 10:
        raise ConfigError(f"decile index must lie in 1..10, got {decile_index}")
    if not 0 < pct <= 100:
        raise ConfigError(f"percentage must lie in (0, 100], got {pct}")
    ids = partition.groups[decile_index - 1]
    if mode == RICHEST_FIRST:
        ids = ids[np.lexsort((ids, -partition.money[ids]))]
    elif mode != POOREST_FIRST:
        raise ConfigError(f"unknown selection mode {mode!r}")
    return ids[:selection_count(pct, ids.size)]


def detect_critical(money, threshold: int = 0):
    """Return ``(gap, critical)`` where gap is bottom-50% minus top-10% money."""
    money = np.asarray(money)
    n = money.size
    if n == 0 or n % 10:
        raise ConfigError(f"decile partition needs a population divisible by 10, got {n}")
    ordered = np.sort(money)
    gap = int(ordered[: n // 2].sum()) - int(ordered[n - n // 10:].sum())
    return gap, gap <= threshold


def _pay_out(pool: int, recipients: np.ndarray):
    """Split ``pool`` equally; the remainder goes one unit each, poorest first."""
    share, rem = divmod(pool, recipients.size)
    amounts = np.full(recipients.size, share, dtype=np.int64)
    amounts[:rem] += 1
    keep = amounts > 0
    return recipients[keep], amounts[keep]


def apply_strategy(money: np.ndarray, strategy: CharityStrategy,
                   partition: Optional[DecilePartition] = None) -> TransferLedger:
    """Apply one charity intervention in place on ``money``.

    Donors holding no money are skipped and simply shrink the pool. Returns
    a ledger of ``donor -> CHARITY`` and ``CHARITY -> recipient`` entries.
    """
    donors, recipients, amounts = [], [], []

    if strategy.variant == "A":
        rich = int(np.argmax(money))
        poor = int(np.argmin(money))
        if money[rich] >= 1 and rich != poor:
            money[rich] -= 1
            money[poor] += 1
            donors += [rich, CHARITY]
            recipients += [CHARITY, poor]
            amounts += [1, 1]
    else:
        if partition is None:
            partition = DecilePartition.from_balances(money)
        for donor_decile, donor_pct, recipient_deciles, recipient_pct in strategy.channels():
            givers = decile_select(partition, donor_decile, donor_pct, RICHEST_FIRST)
            givers = givers[money[givers] >= 1]
            if givers.size == 0:
                continue
            takers = np.concatenate([
                decile_select(partition, d, recipient_pct, POOREST_FIRST)
                for d in recipient_deciles
            ])
            money[givers] -= 1
            paid_to, paid = _pay_out(int(givers.size), takers)
            money[paid_to] += paid
            donors += givers.tolist() + [CHARITY] * paid_to.size
            recipients += [CHARITY] * givers.size + paid_to.tolist()
            amounts += [1] * givers.size + paid.tolist()

    if not donors:
        return TransferLedger.empty()
    return TransferLedger(
        np.array(donors, dtype=np.int64),
        np.array(recipients, dtype=np.int64),
        np.array(amounts, dtype=np.int64),
    )


def count_return_periods(run) -> int:
    """Number of ticks at which the critical stage was detected in ``run``."""
    return len(run.critical_ticks)
