import os

# 테스트는 항상 메모리 DB를 사용
os.environ["DATABASE_URL"] = "sqlite://"

import numpy as np  # noqa: E402
import pytest  # noqa: E402
from fastapi.testclient import TestClient  # noqa: E402
from sqlalchemy import create_engine  # noqa: E402
from sqlalchemy.orm import sessionmaker  # noqa: E402
from sqlalchemy.pool import StaticPool  # noqa: E402

from app import models  # noqa: E402,F401
from app.database import Base, get_db  # noqa: E402
from app.services.oracle import FunctionOracle  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def db_session():
    engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
    Base.metadata.create_all(bind=engine)
    session = sessionmaker(autocommit=False, autoflush=False, bind=engine)()
    try:
        yield session
    finally:
        session.close()
        engine.dispose()


@pytest.fixture
def client(db_session):
    from main import app

    def override_get_db():
        yield db_session

    app.dependency_overrides[get_db] = override_get_db
    try:
        yield TestClient(app)
    finally:
        app.dependency_overrides.clear()


def make_quadratic_oracle(a, b=None, name="quadratic"):
    a = np.asarray(a, dtype=float)
    b = np.zeros(a.shape[0]) if b is None else np.asarray(b, dtype=float)
    return FunctionOracle(
        a.shape[0],
        lambda x: 0.5 * x @ a @ x - b @ x,
        lambda x: a @ x - b,
        hessian=lambda x: a,
        name=name,
    )


def random_spd(rng, n, low=1.0, high=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (q * rng.uniform(low, high, n)) @ q.T


@pytest.fixture
def half_norm():
    """f(x) = ½‖x‖²."""
    def build(n):
        return make_quadratic_oracle(np.eye(n), name="half_norm")
    return build
