# 수치 최적화 서비스 패키지
