import logging
import os

from dotenv import load_dotenv

load_dotenv()

DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///./blockbfgs.db")
RESULTS_DIR = os.getenv("RESULTS_DIR", "./results")
BENCH_PARALLEL = int(os.getenv("BENCH_PARALLEL", "1"))
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

_configured = False


def setup_logging(level=None):
    """루트 로거를 한 번만 설정합니다."""
    global _configured
    if _configured:
        return
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    _configured = True
