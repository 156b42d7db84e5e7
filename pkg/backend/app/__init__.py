# Block BFGS Bench 백엔드 패키지
