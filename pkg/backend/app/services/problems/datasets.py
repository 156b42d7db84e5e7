"""희소 분류 데이터셋: LIBSVM 텍스트 파싱과 합성 데이터 생성."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..errors import DimensionMismatch, EmptyDataset, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SparseDataset:
    """레이블은 {0, 1}, 특성은 0-based CSR 행렬 (m × n)."""

    labels: np.ndarray
    features: sparse.csr_matrix

    def __post_init__(self):
        if self.features.shape[0] != self.labels.shape[0]:
            raise DimensionMismatch(
                f"{self.labels.shape[0]} labels for {self.features.shape[0]} feature rows")

    @property
    def m(self):
        return self.features.shape[0]

    @property
    def n(self):
        return self.features.shape[1]


def _remap_labels(raw, path):
    alphabet = sorted(set(raw))
    if len(alphabet) > 2:
        raise ParseError(f"{path}: expected a binary label alphabet, found {alphabet}")
    if len(alphabet) == 1:
        # 레이블이 하나뿐이면 양수 → 1, 나머지 → 0
        return np.full(len(raw), 1 if alphabet[0] > 0 else 0, dtype=int)
    # 작은 레이블 → 0 ({-1,+1}, {0,1}, {1,2} 모두 같은 규칙)
    return np.array([0 if v == alphabet[0] else 1 for v in raw], dtype=int)


def parse_libsvm(path, n_features=None):
    """
    "label idx:val idx:val ..." 형식의 파일을 읽습니다 (디스크 인덱스는 1부터).

    행 안의 인덱스는 엄격히 증가해야 하며, 위반 시 줄 번호와 함께 ParseError.
    n_features를 주지 않으면 가장 큰 인덱스를 특성 수로 씁니다.
    """
    raw_labels, indptr, indices, values = [], [0], [], []
    with open(path, "r") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            try:
                raw_labels.append(float(tokens[0]))
            except ValueError:
                raise ParseError(f"bad label {tokens[0]!r}", line_number)
            last = 0
            for token in tokens[1:]:
                parts = token.split(":")
                if len(parts) != 2:
                    raise ParseError(f"bad feature token {token!r}", line_number)
                try:
                    idx, val = int(parts[0]), float(parts[1])
                except ValueError:
                    raise ParseError(f"bad feature token {token!r}", line_number)
                if idx < 1:
                    raise ParseError(f"feature index {idx} is below 1", line_number)
                if idx <= last:
                    raise ParseError(f"feature index {idx} does not increase", line_number)
                if not np.isfinite(val):
                    raise ParseError(f"feature value {parts[1]!r} is not finite", line_number)
                if n_features is not None and idx > n_features:
                    raise ParseError(f"feature index {idx} exceeds n={n_features}", line_number)
                last = idx
                indices.append(idx - 1)
                values.append(val)
            indptr.append(len(indices))

    if not raw_labels:
        raise EmptyDataset(f"{path}: no data points")
    n = n_features if n_features is not None else (max(indices) + 1 if indices else 1)
    features = sparse.csr_matrix(
        (np.array(values, dtype=float), np.array(indices, dtype=int), np.array(indptr, dtype=int)),
        shape=(len(raw_labels), n),
    )
    labels = _remap_labels(raw_labels, path)
    logger.info("parsed %d points, %d features from %s (%d positive)", len(labels), n, path, int(labels.sum()))
    return SparseDataset(labels=labels, features=features)


def synthetic_classification(rng, m, n, density=0.3, separable=False, noise=1.0):
    """
    랜덤 희소 특성과 숨은 가중치로 레이블을 만듭니다.

    separable=True이면 레이블이 부호 그대로라 데이터가 선형 분리 가능하고,
    아니면 로지스틱 잡음으로 레이블을 뒤집습니다.
    """
    features = sparse.random(m, n, density=density, format="csr", random_state=rng,
                             data_rvs=rng.standard_normal)
    w_true = rng.standard_normal(n)
    margins = features @ w_true
    if separable:
        labels = (margins > 0).astype(int)
    else:
        p = 1.0 / (1.0 + np.exp(-np.clip(margins / noise, -700, 700)))
        labels = (rng.uniform(size=m) < p).astype(int)
    return SparseDataset(labels=labels, features=features)


def regularizer(rng, n, random_part=False):
    """Q = I, 또는 Q = I + Q' (Q' = RᵀR/n, R은 가우시안)."""
    q = np.eye(n)
    if random_part:
        r = rng.standard_normal((n, n))
        q = q + r.T @ r / n
    return q
