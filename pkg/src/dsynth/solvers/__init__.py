"""Decision procedures and the brute-force oracle."""
from .delay import solve_delay
from .growth import diagnose_growth
from .one_player import SolveResult, solve_one_player
from .oracle import BudgetExceeded, brute_force_oracle
from .parity import ParityArena, solve_parity

__all__ = ["BudgetExceeded", "ParityArena", "SolveResult", "brute_force_oracle",
           "diagnose_growth", "solve_delay", "solve_one_player", "solve_parity"]
