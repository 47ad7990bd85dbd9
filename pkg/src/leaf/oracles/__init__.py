from leaf.oracles.f1 import f1_bruteforce
from leaf.oracles.projection import projection_oracle
from leaf.oracles.shapley import shapley_bruteforce
from leaf.oracles.verify import CHECKS, VerificationResult, run_verification

__all__ = [
    "f1_bruteforce",
    "projection_oracle",
    "shapley_bruteforce",
    "CHECKS",
    "VerificationResult",
    "run_verification",
]
