"""
Armijo-Wolfe 부정확 선탐색.

항상 λ = 1을 먼저 시도하고, 그 단계가 두 조건을 만족하면 그대로 돌려줍니다.
그렇지 않으면 구간을 확장하거나 좁히면서 (f, f') 쌍의 3차 보간으로 다음
후보를 고르고, 보간점이 구간의 [0.1, 0.9] 안전 구역을 벗어나면 이분법을 씁니다.
함수값이 유한하지 않은 점(장벽 함수의 정의역 밖)은 Armijo 실패로 취급합니다.

해 근처에서 f의 변화가 반올림 수준 (roundoff·|f0| 이하)으로 떨어지면 함수값 비교 대신
방향 미분으로 충분 감소를 판정합니다: f'(λ) ≤ (2α − 1) f'(0). 이차 함수에서는 두 판정이 같습니다.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..schemas import LineSearchParams
from .errors import NotDescent

logger = logging.getLogger(__name__)

SAFEGUARD = 0.1


class SearchStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_EVALS = "MaxEvals"
    FAILED = "Failed"


@dataclass
class LineSearchResult:
    lam: float
    f_new: float
    g_new: np.ndarray
    n_evals: int
    status: SearchStatus

    @property
    def converged(self):
        return self.status == SearchStatus.CONVERGED


def armijo_holds(f0, dg0, lam, f_new, alpha):
    return bool(np.isfinite(f_new) and f_new <= f0 + alpha * lam * dg0)


def approx_armijo_holds(f0, dg0, f_new, dg_new, alpha, roundoff):
    if not (np.isfinite(f_new) and np.isfinite(dg_new)) or roundoff <= 0:
        return False
    if abs(f_new - f0) > roundoff * abs(f0):
        return False
    return bool(dg_new <= (2.0 * alpha - 1.0) * dg0)


def sufficient_decrease(f0, dg0, lam, f_new, dg_new, params):
    return (armijo_holds(f0, dg0, lam, f_new, params.alpha)
            or approx_armijo_holds(f0, dg0, f_new, dg_new, params.alpha, params.roundoff))


def wolfe_holds(dg0, dg_new, beta):
    return bool(np.isfinite(dg_new) and dg_new >= beta * dg0)


def _cubic_minimizer(a, fa, da, b, fb, db):
    """(a, fa, da), (b, fb, db)를 지나는 3차식의 최소점. 없으면 None."""
    if a == b:
        return None
    d1 = da + db - 3.0 * (fa - fb) / (a - b)
    radical = d1 * d1 - da * db
    if not np.isfinite(radical) or radical < 0:
        return None
    d2 = math.copysign(math.sqrt(radical), b - a)
    denom = db - da + 2.0 * d2
    if denom == 0 or not np.isfinite(denom):
        return None
    t = b - (b - a) * (db + d2 - d1) / denom
    return t if np.isfinite(t) else None


def _next_trial(lo, f_lo, d_lo, hi, f_hi, d_hi):
    width = hi - lo
    left = lo + SAFEGUARD * width
    right = lo + (1.0 - SAFEGUARD) * width
    if np.isfinite(f_hi) and np.isfinite(d_hi):
        t = _cubic_minimizer(lo, f_lo, d_lo, hi, f_hi, d_hi)
        if t is not None and left <= t <= right:
            return t
    return lo + 0.5 * width


def wolfe_search(oracle, x, d, f0, g0, params=None):
    """
    x + λd 에서 Armijo 조건 (충분 감소)과 Wolfe 조건 (곡률)을 만족하는 λ를 찾습니다.

    status가 Converged가 아니면 호출자가 대응을 결정합니다.
    """
    params = params or LineSearchParams()
    dg0 = float(np.dot(g0, d))
    if not dg0 < 0:
        raise NotDescent(f"directional derivative {dg0:.3e} is not negative")

    lo, f_lo, d_lo = 0.0, f0, dg0
    hi, f_hi, d_hi = math.inf, math.inf, math.nan
    lam = 1.0
    f_new, g_new = math.inf, None
    for n_evals in range(1, params.max_evals + 1):
        f_new, g_new = oracle.value_and_gradient(x + lam * d)
        dg_new = float(np.dot(g_new, d)) if np.all(np.isfinite(g_new)) else math.nan

        if not sufficient_decrease(f0, dg0, lam, f_new, dg_new, params):
            hi, f_hi, d_hi = lam, f_new, dg_new
        elif not wolfe_holds(dg0, dg_new, params.beta):
            lo, f_lo, d_lo = lam, f_new, dg_new
        else:
            return LineSearchResult(lam, float(f_new), g_new, n_evals, SearchStatus.CONVERGED)

        if math.isinf(hi):
            lam = lam * params.expansion
            if lam > params.lambda_max:
                logger.warning("line search: step exceeded lambda_max=%.1e, objective may be unbounded", params.lambda_max)
                return LineSearchResult(lo, float(f_lo), g_new, n_evals, SearchStatus.FAILED)
        else:
            if hi - lo < params.lambda_min:
                logger.warning("line search: bracket [%.3e, %.3e] collapsed", lo, hi)
                return LineSearchResult(lo, float(f_lo), g_new, n_evals, SearchStatus.FAILED)
            lam = _next_trial(lo, f_lo, d_lo, hi, f_hi, d_hi)

    logger.warning("line search: no admissible step after %d evaluations", params.max_evals)
    return LineSearchResult(lam, float(f_new), g_new, params.max_evals, SearchStatus.MAX_EVALS)
