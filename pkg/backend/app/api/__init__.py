# 벤치마크 결과 조회 라우터
