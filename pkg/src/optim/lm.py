"""Levenberg-Marquardt solver over a network's active parameters.

ネットワークの有効パラメータに対するLevenberg-Marquardt法のソルバ.

Each iteration solves ``(J^T J + lambda I) d = -J^T r`` with ``r = prediction - target``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from utils.compat import StrEnum
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from net.network import Network, full_jacobian, residuals
from net.topology import FloatArray, ParameterVector, Topology
from utils.errors import ConfigError, DampingSingularError, InputShapeError

if TYPE_CHECKING:
    from series.dataset import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LmConfig:
    """Damping schedule and stopping tolerances.

    減衰スケジュールと停止条件.
    """

    lambda0: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 10.0
    lambda_max: float = 1e10
    lambda_min: float = 1e-20
    max_iters: int = 500
    grad_tol: float = 1e-8
    step_tol: float = 1e-10
    cost_tol: float = 1e-12

    def __post_init__(self) -> None:
        """Validate the schedule."""
        if not self.lambda0 > 0:
            raise ConfigError(f"lambda0 must be > 0, got {self.lambda0}")
        if not (self.lambda_up > 1 and self.lambda_down > 1):
            raise ConfigError("lambda_up and lambda_down must be > 1")
        if not self.lambda_max > self.lambda0:
            raise ConfigError(f"lambda_max ({self.lambda_max}) must exceed lambda0 ({self.lambda0})")
        if not 0 < self.lambda_min <= self.lambda0:
            raise ConfigError(f"lambda_min must lie in (0, lambda0], got {self.lambda_min}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if not (self.grad_tol > 0 and self.step_tol > 0 and self.cost_tol >= 0):
            raise ConfigError("grad_tol and step_tol must be > 0 and cost_tol >= 0")


class Termination(StrEnum):
    """Reason a training run stopped.

    学習の終了理由.
    """

    GRAD_SMALL = "GradSmall"
    STEP_SMALL = "StepSmall"
    COST_STALL = "CostStall"
    MAX_ITERS = "MaxIters"
    DIVERGED = "Diverged"


@dataclass(frozen=True)
class TrainOutcome:
    """Result of one training run.

    1回の学習結果.
    """

    params: ParameterVector
    final_mse: float
    iterations: int
    termination: Termination
    cost_trace: tuple[float, ...]
    seed: int = 0


def initialize(topology: Topology, rng_seed: int) -> ParameterVector:
    """Draw every parameter uniformly from [-0.5, 0.5].

    全パラメータを [-0.5, 0.5] の一様分布から生成する.

    Args:
        topology (Topology): Network shape / ネットワーク構造
        rng_seed (int): Seed / 乱数シード

    Returns:
        ParameterVector: Initial values / 初期値
    """
    return np.random.default_rng(rng_seed).uniform(-0.5, 0.5, topology.n_params)


def damped_step(jac: npt.ArrayLike, res: npt.ArrayLike, lam: float) -> FloatArray:
    """Solve the damped normal equations for one step.

    減衰付き正規方程式を解いてステップを求める.

    Args:
        jac (npt.ArrayLike): Jacobian ``J`` of the residuals / 残差のヤコビ行列
        res (npt.ArrayLike): Residual vector ``r`` / 残差ベクトル
        lam (float): Damping ``lambda >= 0`` / 減衰係数

    Returns:
        FloatArray: Step ``d`` with ``(J^T J + lambda I) d = -J^T r`` / ステップ

    Raises:
        DampingSingularError: If the damped matrix is not numerically positive definite /
            行列が数値的に正定値でない場合
    """
    j = np.asarray(jac, dtype=np.float64)
    r = np.asarray(res, dtype=np.float64)
    if j.ndim != 2 or r.shape != (j.shape[0],):  # noqa: PLR2004
        raise InputShapeError(f"jacobian shape {j.shape} does not match residual shape {r.shape}")
    return _solve(j.T @ j, j.T @ r, lam)


def _solve(jtj: FloatArray, gradient: FloatArray, lam: float) -> FloatArray:
    if lam < 0:
        raise ConfigError(f"damping must be >= 0, got {lam}")
    if gradient.size == 0:
        return np.zeros(0)
    matrix = jtj + lam * np.eye(gradient.size)
    try:
        factor = cho_factor(matrix, check_finite=True)
    except (LinAlgError, ValueError) as e:
        raise DampingSingularError(f"damped normal matrix is singular at lambda={lam:g}") from e
    step = np.asarray(cho_solve(factor, -gradient), dtype=np.float64)
    if not np.all(np.isfinite(step)):
        raise DampingSingularError(f"non-finite step at lambda={lam:g}")
    return step


def lm_step(net: Network, dataset: Dataset, lam: float) -> FloatArray:
    """Compute one Levenberg-Marquardt step over the active parameters.

    有効パラメータに対するLevenberg-Marquardt法の1ステップを計算する.

    Args:
        net (Network): Current network / 現在のネットワーク
        dataset (Dataset): Training samples / 学習サンプル
        lam (float): Damping / 減衰係数

    Returns:
        FloatArray: Step over active parameters, canonical order / 有効パラメータのステップ

    Raises:
        DampingSingularError: If the normal matrix is singular (raise lambda and retry) /
            行列が特異な場合 (減衰係数を上げて再試行すること)
    """
    jac = full_jacobian(net, dataset)[:, net.mask]
    return damped_step(jac, residuals(net, dataset), lam)


def _inf_norm(values: FloatArray) -> float:
    return float(np.max(np.abs(values))) if values.size else 0.0


def _search_step(  # noqa: PLR0913
    current: Network,
    dataset: Dataset,
    free: npt.NDArray[np.bool_],
    jtj: FloatArray,
    gradient: FloatArray,
    cost: float,
    lam: float,
    config: LmConfig,
) -> tuple[Network, FloatArray, float, FloatArray, float] | None:
    """Raise lambda until a step strictly lowers the MSE; None once lambda passes lambda_max."""
    while lam <= config.lambda_max:
        try:
            step = _solve(jtj, gradient, lam)
        except DampingSingularError:
            lam *= config.lambda_up
            continue
        values = np.array(current.params)
        values[free] += step
        if np.all(np.isfinite(values)):
            candidate = current.with_params(values)
            r_new = residuals(candidate, dataset)
            cost_new = float(np.mean(r_new * r_new))
            if cost_new < cost:
                return candidate, r_new, cost_new, step, lam
        lam *= config.lambda_up
    return None


def train(  # noqa: C901
    net: Network,
    dataset: Dataset,
    config: LmConfig,
    rng_seed: int = 0,
    *,
    trainable: npt.ArrayLike | None = None,
) -> TrainOutcome:
    """Train a network with batch Levenberg-Marquardt.

    バッチLevenberg-Marquardt法でネットワークを学習する.

    A step is accepted iff it strictly lowers the MSE; lambda is divided by ``lambda_down`` on
    accept and multiplied by ``lambda_up`` on reject. Masked parameters never change.

    Args:
        net (Network): Initial network / 初期ネットワーク
        dataset (Dataset): Training samples / 学習サンプル
        config (LmConfig): Schedule and tolerances / スケジュールと停止条件
        rng_seed (int): Seed recorded in the outcome; the solver itself is deterministic /
            結果に記録するシード (ソルバ自体は決定的)
        trainable (npt.ArrayLike | None): Extra freeze flags; parameters outside it keep their
            current value / 追加の固定フラグ (偽のパラメータは現在値のまま)

    Returns:
        TrainOutcome: Final parameters and diagnostics / 最終パラメータと診断情報
    """
    if dataset.p != net.topology.n_inputs:
        raise InputShapeError(f"network {net.topology} cannot train on {dataset.p}-lag samples")
    free = net.mask.copy()
    if trainable is not None:
        extra = np.asarray(trainable, dtype=np.bool_)
        if extra.shape != free.shape:
            raise InputShapeError(f"trainable flags have shape {extra.shape}, expected {free.shape}")
        free &= extra

    current = net
    r = residuals(current, dataset)
    cost = float(np.mean(r * r))
    trace = [cost]
    lam = config.lambda0
    termination = Termination.MAX_ITERS
    iterations = 0
    accepted_any = False

    for iteration in range(1, config.max_iters + 1):
        jac = full_jacobian(current, dataset)[:, free]
        jtj = jac.T @ jac
        gradient = jac.T @ r
        if _inf_norm(gradient) <= config.grad_tol:
            termination = Termination.GRAD_SMALL
            break

        attempt = _search_step(current, dataset, free, jtj, gradient, cost, lam, config)
        if attempt is None:
            # With earlier progress the run sits at a numerical floor rather than diverging.
            termination = Termination.COST_STALL if accepted_any else Termination.DIVERGED
            logger.debug("lambda exceeded %g at iteration %d", config.lambda_max, iteration)
            break

        candidate, r_new, cost_new, step, lam = attempt
        accepted_any = True
        iterations = iteration
        relative = (cost - cost_new) / cost if cost > 0 else 0.0
        current, r, cost = candidate, r_new, cost_new
        trace.append(cost)
        lam = max(lam / config.lambda_down, config.lambda_min)
        logger.debug("iteration %d: mse=%.6e lambda=%.3e", iteration, cost, lam)
        if _inf_norm(step) <= config.step_tol:
            termination = Termination.STEP_SMALL
            break
        if relative <= config.cost_tol:
            termination = Termination.COST_STALL
            break
        if cost == 0.0:
            termination = Termination.GRAD_SMALL
            break

    logger.debug("training finished: %s after %d iterations, mse=%.6e", termination, iterations, cost)
    return TrainOutcome(
        params=current.params,
        final_mse=cost,
        iterations=iterations,
        termination=termination,
        cost_trace=tuple(trace),
        seed=rng_seed,
    )
