from sqlalchemy import Column, Integer, String, Text, Float, DateTime, ForeignKey
from sqlalchemy.sql import func
from .database import Base

class BenchRun(Base):
    __tablename__ = "bench_run"

    id = Column(Integer, primary_key=True, index=True)
    seed = Column(Integer, index=True)
    metric = Column(String)
    eps_list = Column(Text)        # JSON 직렬화된 epsilon 리스트
    solver_configs = Column(Text)  # JSON 직렬화된 {이름: SolverConfig}
    suite_manifest = Column(Text)  # JSON 직렬화된 SuiteManifest
    dropped = Column(Text)         # JSON 직렬화된 {eps: [문제 이름]}
    created_at = Column(DateTime(timezone=True), server_default=func.now())

class RunRecord(Base):
    __tablename__ = "run_record"

    id = Column(Integer, primary_key=True, index=True)
    bench_id = Column(Integer, ForeignKey("bench_run.id"), index=True)
    problem = Column(String, index=True)
    solver = Column(String, index=True)
    termination = Column(String)
    steps = Column(Integer)
    f_final = Column(Float)
    gnorm_final = Column(Float)
    wall_time = Column(Float)
    counters = Column(Text)        # JSON 직렬화된 EvalCounters

class CostEntry(Base):
    __tablename__ = "cost_entry"

    id = Column(Integer, primary_key=True, index=True)
    bench_id = Column(Integer, ForeignKey("bench_run.id"), index=True)
    eps = Column(Float, index=True)
    problem = Column(String)
    solver = Column(String)
    cost = Column(Float, nullable=True)  # NULL = 미해결
