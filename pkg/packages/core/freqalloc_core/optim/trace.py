from pydantic import BaseModel, ConfigDict


class TraceRecord(BaseModel):
    """One solver iteration (AO generation or RL step)"""

    model_config = ConfigDict(frozen=True)

    iteration: int
    best_objective: float
    objective: float
    total_se: float | None = None
    gini: float | None = None
    lambda_min: float | None = None
    c_violations: int | None = None
    actor_loss: float | None = None
    critic_loss: float | None = None
    epsilon: float | None = None
    explored: bool = False
    deviated: bool = False
    updated: bool = False
    wall_ms: float = 0.0


class TrainTrace(BaseModel):
    """Per-iteration history of a solver run; ``best_objective`` never decreases"""

    solver: str
    records: list[TraceRecord] = []

    def append(self, record: TraceRecord) -> None:
        if self.records and record.best_objective < self.records[-1].best_objective:
            raise ValueError(
                f"best objective fell from {self.records[-1].best_objective} to {record.best_objective} "
                f"at iteration {record.iteration}"
            )
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final(self) -> TraceRecord | None:
        return self.records[-1] if self.records else None

    def best_values(self) -> list[float]:
        return [r.best_objective for r in self.records]

    def losses(self) -> list[tuple[int, float | None, float | None]]:
        return [(r.iteration, r.actor_loss, r.critic_loss) for r in self.records]

    def comparable(self) -> list[dict]:
        """Records without timing, for bitwise comparisons between runs"""
        return [r.model_dump(exclude={"wall_ms"}) for r in self.records]
