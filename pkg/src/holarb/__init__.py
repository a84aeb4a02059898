"""Exact holonomy and loop arbitrage for filtrations of finite probability spaces."""

from .category import Loop, Path, TimeCategory, build_category, compose_path, enumerate_based_loops, reverse_path
from .filtration import Filtration, check_cocycle, distortion, distortion_of_path, is_F_martingale, validate_filtration
from .holonomy import Classification, classify_loop, holonomy, reverse_gain, scan
from .marketspec import MarketSpec, fixture, generate_random_system, parse_market_spec
from .measure import (
    BackwardMap,
    FinProbSpace,
    RandomVariable,
    cond_exp,
    cond_exp_operator,
    integrate,
    make_space,
    pushforward,
    radon_nikodym,
)
from .strategy import (
    ab_position,
    ab_wealth,
    check_admissibility,
    self_financing_wealth_trace,
    wab_position,
    wab_wealth,
)

__version__ = "0.1.0"
