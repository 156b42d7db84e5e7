from sqlalchemy import inspect

from app.database import engine
from app.models import Base

def init_database():
    """벤치마크 결과 테이블을 만듭니다. 이미 있는 테이블은 그대로 둡니다."""
    try:
        Base.metadata.create_all(bind=engine)
        tables = inspect(engine).get_table_names()
        print(f"✅ 데이터베이스 준비 완료: {', '.join(sorted(tables))}")
        return True
    except Exception as e:
        print(f"❌ 데이터베이스 초기화 중 오류 발생: {e}")
        return False

if __name__ == "__main__":
    init_database()
