"""Random unit-money exchange between agents.

Each tick every agent holding at least one unit gives exactly one unit to
another agent picked uniformly at random (from everyone else, or from its
graph neighbours). All gifts are drawn first and applied together, so the
outcome never depends on the order agents are visited in and nobody can go
negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

#: Ledger id used for the charity organization's side of a transfer.
CHARITY = -1


@dataclass(frozen=True)
class TransferLedger:
    """Parallel arrays of ``(donor, recipient, amount)`` for one phase of a tick."""

    donors: np.ndarray
    recipients: np.ndarray
    amounts: np.ndarray

    @classmethod
    def empty(cls) -> "TransferLedger":
        z = np.zeros(0, dtype=np.int64)
        return cls(z, z.copy(), z.copy())

    def __len__(self) -> int:
        return int(self.donors.size)

    def entries(self):
        return list(zip(self.donors.tolist(), self.recipients.tolist(), self.amounts.tolist()))

    def units_moved(self) -> int:
        """Units leaving agents (transfers out of the charity pool are not counted twice)."""
        return int(self.amounts[self.donors != CHARITY].sum())

    def net_flow(self, n_agents: int) -> np.ndarray:
        """Per-agent balance change implied by the ledger."""
        flow = np.zeros(n_agents, dtype=np.int64)
        out = self.donors != CHARITY
        np.subtract.at(flow, self.donors[out], self.amounts[out])
        into = self.recipients != CHARITY
        np.add.at(flow, self.recipients[into], self.amounts[into])
        return flow


def exchange_tick(money: np.ndarray, rng: np.random.Generator, graph=None) -> TransferLedger:
    """Run one exchange round in place on ``money`` and return its ledger.

    ``graph`` may be a :class:`~wealthabm.environment.NetworkGraph` or a
    precomputed ``(indptr, indices)`` CSR pair; agents without neighbours
    give nothing.
    """
    n = money.size
    if n == 0:
        raise ConfigError("exchange needs at least one agent")
    if graph is None:
        donors = np.flatnonzero(money > 0)
        if n < 2 or donors.size == 0:
            return TransferLedger.empty()
        # Uniform over the n-1 other agents: draw from 0..n-2 and skip self.
        recipients = rng.integers(0, n - 1, size=donors.size)
        recipients += recipients >= donors
    else:
        indptr, indices = graph.csr() if hasattr(graph, "csr") else graph
        if indptr.size - 1 != n:
            raise ConfigError(
                f"graph has {indptr.size - 1} nodes but the population has {n} agents"
            )
        degree = np.diff(indptr)
        donors = np.flatnonzero((money > 0) & (degree > 0))
        if donors.size == 0:
            return TransferLedger.empty()
        offsets = rng.integers(0, degree[donors])
        recipients = indices[indptr[donors] + offsets]

    money[donors] -= 1
    money += np.bincount(recipients, minlength=n)
    return TransferLedger(donors, recipients, np.ones(donors.size, dtype=np.int64))
