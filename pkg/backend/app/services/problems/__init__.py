from .barrier import (BarrierOracle, BarrierProblem, QpStandardForm, barrier_oracle, random_standard_qp,
                      reduce_qp_to_barrier, strictly_feasible_point)
from .benchmarks import BENCHMARKS, BenchmarkFunction, benchmark_oracle, benchmark_start
from .datasets import SparseDataset, parse_libsvm, regularizer, synthetic_classification
from .losses import LogisticOracle, TanhOracle, logistic_oracle, tanh_oracle
from .quadratic import QuadraticOracle, random_quadratic, random_spd
from .suite import (SuiteProblem, build_problem, load_manifest, suite_from_manifest, synth_manifest, synth_suite,
                    write_manifest)
