"""Monte Carlo play of the game for checking analytic equilibrium payoffs.

Each trial: nature picks a spy with probability ``p``; a spy draws ``H`` from
``alpha``, a spammer draws ``Z`` from the spammer pmf; the defender draws a
threshold ``T`` from ``beta``. Every draw type has its own random stream,
spawned from one ``SeedSequence`` in the fixed order (type, spy, spammer,
defender), and trials are consumed in fixed-size chunks, so a report depends
only on the seed and the trial count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .game import GameParams, SpammerModel, check_distribution, spy_cost_matrix

CHUNK = 1 << 20


@dataclass(frozen=True)
class SimConfig:
    """Inputs of one simulation run. ``p`` may be 0 or 1 here."""

    trials: int
    seed: int
    p: float
    c_d: float
    c_a: float
    c_fa: float
    model: SpammerModel
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p must lie in [0, 1], got {self.p!r}")
        N = self.model.N
        object.__setattr__(self, "alpha", check_distribution(self.alpha, N + 1, name="alpha"))
        object.__setattr__(self, "beta", check_distribution(self.beta, N + 2, name="beta"))

    @classmethod
    def from_params(cls, params: GameParams, model: SpammerModel, alpha, beta,
                    trials: int, seed: int, p: Optional[float] = None) -> "SimConfig":
        return cls(trials=trials, seed=seed, p=params.p if p is None else p,
                   c_d=params.c_d, c_a=params.c_a, c_fa=params.c_fa,
                   model=model, alpha=alpha, beta=beta)

    @property
    def N(self) -> int:
        return self.model.N


@dataclass(frozen=True)
class SimReport:
    """Empirical aggregates. Spy statistics are conditional on spy trials.

    Means of empty groups are NaN.
    """

    trials: int
    spy_trials: int
    spammer_trials: int
    defender_payoff_raw_mean: float
    defender_payoff_raw_stderr: float
    spy_cost_mean: float
    spy_cost_stderr: float
    spy_detection_rate: float
    spammer_false_alarm_rate: float
    spammer_false_alarm_stderr: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


class _Moments:
    """Count, mean and sum of squared deviations, merged chunk by chunk."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, x: np.ndarray) -> None:
        k = x.size
        if k == 0:
            return
        mean_x = float(np.mean(x))
        m2_x = float(np.sum((x - mean_x) ** 2))
        delta = mean_x - self.mean
        total = self.n + k
        self.mean += delta * k / total
        self.m2 += m2_x + delta * delta * self.n * k / total
        self.n = total

    @property
    def stderr(self) -> float:
        if self.n < 2:
            return 0.0 if self.n == 1 else math.nan
        return math.sqrt(self.m2 / (self.n - 1) / self.n)

    @property
    def value(self) -> float:
        return self.mean if self.n else math.nan


def simulate(config: SimConfig) -> SimReport:
    streams = [np.random.Generator(np.random.PCG64(seq))
               for seq in np.random.SeedSequence(int(config.seed)).spawn(4)]
    type_rng, spy_rng, spam_rng, def_rng = streams
    N = config.N
    lt = spy_cost_matrix(N, config.c_d, config.c_a)
    spam_pmf = config.model.pmf
    payoff = _Moments()
    spy_cost = _Moments()
    false_alarm = _Moments()
    detections = 0
    remaining = int(config.trials)
    while remaining:
        k = min(CHUNK, remaining)
        remaining -= k
        is_spy = type_rng.random(k) < config.p
        n_spy = int(is_spy.sum())
        H = spy_rng.choice(N + 1, size=n_spy, p=config.alpha)
        Z = spam_rng.choice(N + 1, size=k - n_spy, p=spam_pmf)
        T = def_rng.choice(N + 2, size=k, p=config.beta)
        T_spy, T_spam = T[is_spy], T[~is_spy]
        costs = lt[H, T_spy]
        alarms = (Z >= T_spam).astype(float)
        raw = np.empty(k)
        raw[is_spy] = costs
        raw[~is_spy] = -config.c_fa * alarms
        payoff.add(raw)
        spy_cost.add(costs)
        false_alarm.add(alarms)
        detections += int(np.count_nonzero(T_spy <= H))
    return SimReport(
        trials=int(config.trials),
        spy_trials=spy_cost.n,
        spammer_trials=false_alarm.n,
        defender_payoff_raw_mean=payoff.value,
        defender_payoff_raw_stderr=payoff.stderr,
        spy_cost_mean=spy_cost.value,
        spy_cost_stderr=spy_cost.stderr,
        spy_detection_rate=detections / spy_cost.n if spy_cost.n else math.nan,
        spammer_false_alarm_rate=false_alarm.value,
        spammer_false_alarm_stderr=false_alarm.stderr,
    )


def analytic_values(config: SimConfig) -> dict:
    """Exact expectations of the simulated quantities."""
    lt = spy_cost_matrix(config.N, config.c_d, config.c_a)
    phi = np.append(np.cumsum(config.model.pmf[::-1])[::-1], 0.0)
    spy_cost = float(config.alpha @ lt @ config.beta)
    false_alarm = float(config.beta @ phi)
    caught = np.tril(np.ones((config.N + 1, config.N + 2)))  # 1{T <= H}
    return {
        "spy_cost": spy_cost,
        "defender_payoff_raw": config.p * spy_cost - (1.0 - config.p) * config.c_fa * false_alarm,
        "spy_detection_rate": float(config.alpha @ caught @ config.beta),
        "spammer_false_alarm_rate": false_alarm,
    }


def compare(report: SimReport, analytic: dict) -> dict:
    """Distance of each empirical mean from its analytic value, in standard errors.

    Quantities with no trials (or zero standard error and an exact match)
    score 0.
    """
    pairs = {
        "spy_cost": (report.spy_cost_mean, report.spy_cost_stderr),
        "defender_payoff_raw": (report.defender_payoff_raw_mean,
                                report.defender_payoff_raw_stderr),
        "spammer_false_alarm_rate": (report.spammer_false_alarm_rate,
                                     report.spammer_false_alarm_stderr),
    }
    scores = {}
    for key, (mean, se) in pairs.items():
        if math.isnan(mean):
            scores[key] = 0.0
            continue
        gap = abs(mean - analytic[key])
        if se > 0:
            scores[key] = gap / se
        else:
            scores[key] = 0.0 if gap <= 1e-12 * max(1.0, abs(analytic[key])) else math.inf
    return scores
