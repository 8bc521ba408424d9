"""Synthetic meteorological-like hourly series.

気象データに似た毎時の合成時系列を生成するモジュール.
"""

from __future__ import annotations

from utils.compat import StrEnum

import numpy as np
from scipy.signal import lfilter

from series.dataset import FloatArray, Series
from utils.errors import InvalidSeriesError

HOURS_PER_DAY = 24
HOURS_PER_YEAR = 8760
AR_COEFFICIENT = 0.8


class SynthKind(StrEnum):
    """Variables the generator can imitate.

    生成可能な変数の種類.
    """

    TEMPERATURE = "temperature"
    HUMIDITY = "humidity"
    WIND_SPEED = "wind_speed"
    WIND_DIRECTION = "wind_direction"
    GLOBAL_RADIATION = "global_radiation"


# Noise level used when a configuration leaves noise_sd unset, in the unit of each variable.
DEFAULT_NOISE_SD: dict[SynthKind, float] = {
    SynthKind.TEMPERATURE: 1.0,
    SynthKind.HUMIDITY: 0.04,
    SynthKind.WIND_SPEED: 1.2,
    SynthKind.WIND_DIRECTION: 40.0,
    SynthKind.GLOBAL_RADIATION: 60.0,
}


def _ar1(rng: np.random.Generator, length: int, noise_sd: float) -> FloatArray:
    """AR(1) noise whose stationary standard deviation is ``noise_sd``."""
    if noise_sd == 0:
        return np.zeros(length)
    innovations = rng.standard_normal(length) * noise_sd * np.sqrt(1.0 - AR_COEFFICIENT**2)
    innovations[0] = rng.standard_normal() * noise_sd
    return np.asarray(lfilter([1.0], [1.0, -AR_COEFFICIENT], innovations), dtype=np.float64)


def synth_series(
    kind: SynthKind | str,
    length: int,
    noise_sd: float,
    rng_seed: int,
    *,
    name: str | None = None,
) -> Series:
    """Generate a seeded synthetic hourly series.

    シード付きで毎時の合成時系列を生成する.

    The signal is a 24-hour sinusoid plus a slow yearly drift plus AR(1) noise, shaped per
    kind: radiation is zero at night and clipped at 0, direction is wrapped to [0, 360),
    humidity is clipped to [0, 1] and wind speed is clipped at 0.

    Args:
        kind (SynthKind | str): Variable to imitate / 模倣する変数
        length (int): Number of hourly values / 値の個数
        noise_sd (float): Standard deviation of the AR(1) component / AR(1)成分の標準偏差
        rng_seed (int): Seed / 乱数シード
        name (str | None): Series label, defaults to the kind / 時系列名 (既定は種類名)

    Returns:
        Series: Generated series / 生成された時系列

    Raises:
        InvalidSeriesError: If ``length < 1`` or ``noise_sd < 0`` / 引数が不正な場合
    """
    kind = SynthKind(kind)
    if length < 1:
        raise InvalidSeriesError(f"length must be >= 1, got {length}")
    if noise_sd < 0:
        raise InvalidSeriesError(f"noise_sd must be >= 0, got {noise_sd}")
    rng = np.random.default_rng(rng_seed)
    t = np.arange(length, dtype=np.float64)
    hour = np.mod(t, HOURS_PER_DAY)
    # Peaks mid-afternoon.
    daily = np.sin(2.0 * np.pi * (hour - 9.0) / HOURS_PER_DAY)
    seasonal = np.sin(2.0 * np.pi * t / HOURS_PER_YEAR)
    noise = _ar1(rng, length, noise_sd)

    match kind:
        case SynthKind.TEMPERATURE:
            values = 15.0 + 5.0 * daily + 6.0 * seasonal + noise
        case SynthKind.HUMIDITY:
            values = np.clip(0.7 - 0.15 * daily - 0.05 * seasonal + noise, 0.0, 1.0)
        case SynthKind.WIND_SPEED:
            values = np.clip(5.0 + 1.5 * daily + 1.0 * seasonal + noise, 0.0, None)
        case SynthKind.WIND_DIRECTION:
            values = np.mod(200.0 + 60.0 * daily + 20.0 * seasonal + noise, 360.0)
        case SynthKind.GLOBAL_RADIATION:
            sun = np.sin(np.pi * (hour - 6.0) / 12.0)
            day = (hour > 6.0) & (hour < 18.0)  # noqa: PLR2004
            clear_sky = 800.0 * (1.0 + 0.25 * seasonal) * np.where(day, sun, 0.0)
            values = np.where(day, np.clip(clear_sky + noise, 0.0, None), 0.0)
    return Series(values, name=name or kind.value)
