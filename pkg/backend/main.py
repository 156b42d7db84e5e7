from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.api import runs, profiles, problems
from app.database import engine
from app.models import Base

# 데이터베이스 테이블 생성
Base.metadata.create_all(bind=engine)

app = FastAPI(
    title="Block BFGS Bench API",
    description="준뉴턴 솔버 벤치마크 결과 조회 API",
    version="1.0.0"
)

# CORS 설정 (운영 도메인으로 수정)
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# API 라우터 등록
app.include_router(runs.router, prefix="/api/runs", tags=["Runs"])
app.include_router(profiles.router, prefix="/api/runs", tags=["Profiles"])
app.include_router(problems.router, prefix="/api/problems", tags=["Problems"])

@app.get("/")
async def root():
    return {"message": "Block BFGS Bench API", "version": "1.0.0"}

@app.get("/health")
async def health_check():
    return {"status": "healthy"}
