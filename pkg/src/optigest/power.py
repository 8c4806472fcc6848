"""Duty-cycle current and power budget of the optical front end.

The photodiodes are powered only for the settling time of each 25 ms
sampling cycle; the duty factor scales the measured single-diode currents
into the total front-end budget. Microcontroller current is excluded: the
mode totals are configured anchors, not a reconstruction.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateTiming, InvalidOrdering

# (condition label, lux, single-PD current in mA at 100% duty)
DEFAULT_PD_CURRENT_TABLE: tuple[tuple[str, float, float], ...] = (
    ("dark", 0.0, 0.959),
    ("strong", 872.0, 1.125),
    ("stronger", 2000.0, 1.235),
    ("dir. sun.", 33500.0, 1.041),
)


@dataclass(frozen=True)
class PowerParams:
    n_pd: int = 8
    settling_time_s: float = 375e-6
    cycle_period_s: float = 25e-3  # 40 Hz sampling
    supply_voltage: float = 5.0
    pd_current_table: tuple[tuple[str, float, float], ...] = DEFAULT_PD_CURRENT_TABLE
    # Mode totals in mA. The passive total uses the rounded 1.1 mA average
    # single-PD current (1.1 * 8 * 0.015 = 0.132), not the table mean 1.090.
    active_total_ma: float = 1.982
    passive_total_ma: float = 0.132
    avg_single_pd_ma: float = 1.1

    def __post_init__(self):
        if self.settling_time_s >= self.cycle_period_s:
            raise DegenerateTiming("settling time must be shorter than the cycle period")
        if any(current <= 0 for _, _, current in self.pd_current_table):
            raise ValueError("PD currents must be positive")

    @property
    def duty(self) -> float:
        return duty_factor(self.settling_time_s, self.cycle_period_s)


def duty_factor(settling_time_s: float, cycle_period_s: float) -> float:
    """Fraction of each sampling cycle the optical elements are powered."""
    if not 0.0 < settling_time_s < cycle_period_s:
        raise DegenerateTiming(
            f"need 0 < settling ({settling_time_s}) < period ({cycle_period_s})"
        )
    return settling_time_s / cycle_period_s


def pd_budget(
    single_pd_ma: float,
    n_pd: int,
    duty: float,
    supply_voltage: float,
) -> tuple[float, float]:
    """(total current in uA, total power in uW) of the duty-cycled photodiode bank."""
    if single_pd_ma <= 0 or n_pd <= 0 or duty <= 0 or supply_voltage <= 0:
        raise ValueError("all power-budget inputs must be positive")
    current_ua = single_pd_ma * n_pd * duty * 1000.0
    return current_ua, current_ua * supply_voltage


def mode_savings(active_ma: float, passive_ma: float) -> float:
    """Percent current reduction from switching the active mode off."""
    if not active_ma > passive_ma > 0:
        raise InvalidOrdering(
            f"need active > passive > 0, got {active_ma} and {passive_ma}"
        )
    return 100.0 * (active_ma - passive_ma) / active_ma


@dataclass(frozen=True)
class PowerReportRow:
    condition: str
    lux: float
    single_pd_ma: float
    total_current_ua: float
    total_power_uw: float


def power_report(params: PowerParams = PowerParams()) -> tuple[list[PowerReportRow], float]:
    """Per-condition budget rows plus an average row, and the mode savings percent."""
    duty = params.duty
    rows = []
    for label, lux, single_ma in params.pd_current_table:
        current, pwr = pd_budget(single_ma, params.n_pd, duty, params.supply_voltage)
        rows.append(PowerReportRow(label, lux, single_ma, current, pwr))
    avg_ma = sum(r.single_pd_ma for r in rows) / len(rows)
    avg_current, avg_power = pd_budget(avg_ma, params.n_pd, duty, params.supply_voltage)
    rows.append(PowerReportRow("average", float("nan"), avg_ma, avg_current, avg_power))
    return rows, mode_savings(params.active_total_ma, params.passive_total_ma)


def passive_total_from_average(
    params: PowerParams = PowerParams(),
) -> float:
    """Passive-mode total current (mA) rebuilt from the rounded average PD current."""
    current_ua, _ = pd_budget(
        params.avg_single_pd_ma, params.n_pd, params.duty, params.supply_voltage
    )
    return current_ua / 1000.0
