"""
헤시안 근사 갱신 규칙.

- filter_steps: 블록 스텝 중 LΣLᵀ 피벗이 σ_i² ≥ τ‖s_i‖² 인 열만 남깁니다.
- block_update_inverse / block_update_direct: 스케칭 방정식 B⁺D = GD 를 만족하는 블록 갱신.
- secant_update: 고전 BFGS 역행렬 갱신.
- cautious_gate, li_fukushima_modify, powell_damp: 비볼록 문제용 수정.

솔버는 역행렬 H만 저장합니다. 직접형 B 갱신은 검증용입니다.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import CurvatureViolation, DegenerateFactor, DimensionMismatch, SingularBlock
from .linalg import LdltFactor, ldlt, symmetrize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InverseApprox:
    """역헤시안 근사 H_k = B_k⁻¹ (대칭 양의 정부호)."""

    h: np.ndarray

    @classmethod
    def identity(cls, n, scale=1.0):
        return cls(scale * np.eye(n))

    @property
    def dim(self):
        return self.h.shape[0]

    def direction(self, g):
        return -(self.h @ g)

    def is_positive_definite(self):
        try:
            ldlt(self.h, strict=True)
        except DegenerateFactor:
            return False
        return True


@dataclass
class StepBlock:
    s_cols: np.ndarray
    gs_cols: np.ndarray
    g_cols: np.ndarray = None
    block_index: int = 0
    step_sizes: np.ndarray = None

    def __post_init__(self):
        s_cols = np.asarray(self.s_cols, dtype=float)
        self.s_cols = s_cols.reshape(s_cols.shape[0], -1)
        self.gs_cols = np.asarray(self.gs_cols, dtype=float).reshape(self.s_cols.shape)
        if self.s_cols.shape[1] < 1:
            raise DimensionMismatch("step block is empty")

    @property
    def size(self):
        return self.s_cols.shape[1]

    def reordered(self, order):
        order = list(order)
        return StepBlock(
            s_cols=self.s_cols[:, order],
            gs_cols=self.gs_cols[:, order],
            g_cols=None if self.g_cols is None else self.g_cols[:, order],
            block_index=self.block_index,
            step_sizes=None if self.step_sizes is None else np.asarray(self.step_sizes)[order],
        )

    def lead_with_shortened_step(self):
        """λ ≠ 1 로 받아들여진 첫 스텝을 첫 열로 옮긴 블록 (나머지는 순서 유지)."""
        if self.step_sizes is None:
            return self
        shortened = [i for i, lam in enumerate(self.step_sizes) if lam != 1.0]
        if not shortened or shortened[0] == 0:
            return self
        lead = shortened[0]
        return self.reordered([lead] + [i for i in range(self.size) if i != lead])


@dataclass
class FilterResult:
    kept_indices: list
    d_cols: np.ndarray
    gd_cols: np.ndarray
    ldlt_of_dgd: LdltFactor = None
    dropped_indices: list = field(default_factory=list)

    @property
    def is_empty(self):
        return len(self.kept_indices) == 0

    @property
    def size(self):
        return len(self.kept_indices)

    @classmethod
    def from_columns(cls, d_cols, gd_cols):
        """필터링 없이 모든 열을 쓰는 결과. DᵀGD 가 양의 정부호가 아니면 SingularBlock."""
        d_cols = np.asarray(d_cols, dtype=float)
        d_cols = d_cols.reshape(d_cols.shape[0], -1)
        gd_cols = np.asarray(gd_cols, dtype=float).reshape(d_cols.shape)
        try:
            factor = ldlt(symmetrize(d_cols.T @ gd_cols), strict=True)
        except DegenerateFactor as exc:
            raise SingularBlock(f"DᵀGD is not positive definite: {exc}") from exc
        return cls(list(range(d_cols.shape[1])), d_cols, gd_cols, factor)


def filter_steps(block, tau, always_keep_first=False):
    """
    FILTERSTEPS: SᵀGS 의 LΣLᵀ 분해를 열 순서대로 만들면서 σ_i² < τ‖s_i‖² 인 열을 지웁니다.

    열을 지우면 L의 해당 행도 지우고 같은 위치의 다음 열을 검사하므로, 남은 열의
    분해는 남은 열만으로 다시 분해한 것과 같습니다. 새 헤시안 작용은 계산하지 않습니다.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    s, gs = block.s_cols, block.gs_cols
    gram = symmetrize(s.T @ gs)
    q = gram.shape[0]

    kept, dropped = [], []
    rows = np.zeros((q, q))  # rows[a, :a] = 남은 열 a의 L 행
    pivots = []
    for i in range(q):
        r = len(kept)
        row = np.zeros(r)
        for a in range(r):
            row[a] = (gram[i, kept[a]] - np.dot(row[:a] * rows[a, :a], pivots[:a])) / pivots[a]
        sigma2 = gram[i, i] - np.dot(row * row, pivots[:r])
        # 강볼록성을 가정할 때 첫 스텝은 무조건 포함 (σ₁² > 0 이어야 분해가 이어짐)
        first = i == 0 and always_keep_first and sigma2 > 0
        if first or sigma2 >= tau * float(np.dot(s[:, i], s[:, i])):
            rows[r, :r] = row
            pivots.append(sigma2)
            kept.append(i)
        else:
            dropped.append(i)
            logger.debug("filter: dropped column %d of block %d (sigma^2=%.3e)", i, block.block_index, sigma2)

    r = len(kept)
    lower = np.eye(r) + np.tril(rows[:r, :r], -1)
    factor = LdltFactor(lower=lower, pivots=np.array(pivots)) if r else None
    return FilterResult(kept, s[:, kept], gs[:, kept], factor, dropped)


def _block_factor(filt):
    if filt.is_empty:
        raise SingularBlock("cannot update with an empty block")
    factor = filt.ldlt_of_dgd
    if factor is None or not factor.is_positive_definite:
        raise SingularBlock("DᵀGD is not positive definite")
    return factor


def block_update_inverse(h, filt):
    """
    H⁺ = D(DᵀGD)⁻¹Dᵀ + (I - D(DᵀGD)⁻¹DᵀG) H (I - GD(DᵀGD)⁻¹Dᵀ).

    O(n²q) 형태로 전개해서 계산하고 저장 전에 대칭화합니다.
    """
    factor = _block_factor(filt)
    d, y = filt.d_cols, filt.gd_cols
    hm = h.h
    hy = hm @ y
    t = factor.solve(hy.T)                      # M⁻¹ YᵀH
    inner = factor.solve(factor.solve(y.T @ hy).T) + factor.solve(np.eye(factor.dim))
    h_new = hm - d @ t - t.T @ d.T + d @ inner @ d.T
    return InverseApprox(symmetrize(h_new))


def block_update_direct(b, filt):
    """B⁺ = B - BD(DᵀBD)⁻¹DᵀB + GD(DᵀGD)⁻¹DᵀG (검증용)."""
    factor = _block_factor(filt)
    d, y = filt.d_cols, filt.gd_cols
    b = np.asarray(b, dtype=float)
    bd = b @ d
    try:
        dbd = ldlt(symmetrize(d.T @ bd), strict=True)
    except DegenerateFactor as exc:
        raise SingularBlock(f"DᵀBD is not positive definite: {exc}") from exc
    return symmetrize(b - bd @ dbd.solve(bd.T) + y @ factor.solve(y.T))


def secant_update(h, s, y):
    """BFGS 역행렬 갱신: H⁺ = (I - ρsyᵀ) H (I - ρysᵀ) + ρssᵀ, ρ = 1/⟨y,s⟩."""
    ys = float(np.dot(y, s))
    if not ys > 0:
        raise CurvatureViolation(f"<y, s> = {ys:.3e} is not positive")
    rho = 1.0 / ys
    hm = h.h
    hy = hm @ y
    yhy = float(np.dot(y, hy))
    h_new = hm - rho * (np.outer(s, hy) + np.outer(hy, s)) + (rho * rho * yhy + rho) * np.outer(s, s)
    return InverseApprox(symmetrize(h_new))


def cautious_gate(s, y, g, eps=1e-6, exponent=1.0):
    ss = float(np.dot(s, s))
    if ss == 0:
        raise ValueError("step must be non-zero")
    return bool(np.dot(y, s) / ss >= eps * float(np.linalg.norm(g)) ** exponent)


def li_fukushima_modify(s, y, eps):
    """z = y + r s, r = max(0, ε - ⟨y,s⟩/‖s‖²) 이므로 ⟨z,s⟩ ≥ ε‖s‖²."""
    ss = float(np.dot(s, s))
    if ss == 0 or eps <= 0:
        raise ValueError("need s != 0 and eps > 0")
    r = max(0.0, eps - float(np.dot(y, s)) / ss)
    return y + r * s


def powell_damp(s, y, b_action_s, phi=0.2):
    """z = θy + (1-θ)Bs, ⟨z,s⟩ ≥ φ sᵀBs."""
    if not 0.0 < phi < 1.0:
        raise ValueError("phi must lie in (0, 1)")
    sbs = float(np.dot(s, b_action_s))
    if not sbs > 0:
        raise CurvatureViolation(f"sᵀBs = {sbs:.3e} is not positive")
    ys = float(np.dot(y, s))
    theta = 1.0 if ys >= phi * sbs else (1.0 - phi) * sbs / (sbs - ys)
    return theta * y + (1.0 - theta) * b_action_s
