"""galcheck: executable abstract interpretation over finite carriers.

A law-checkable Galois-connection core, a sign-domain analyzer for a small
imperative language, and a gradual type system derived by abstraction, with
every quantified claim checked exhaustively at desk scale.
"""

from .order import (DomainError, DownSet, FiniteDomain, IntWindow, KleisliFn,
                    LatticeError, MonotoneFn, bind, identity_fn, kcompose,
                    pure, ret)
from .galois import (ClassicalGC, ConstructiveGC, KleisliGC, LawReport,
                     NotLiftedFormError, best_abstraction, check_correspondence,
                     check_expansive, check_optimality, check_reductive,
                     check_soundness, induce, lift_to_classical,
                     lift_to_kleisli, product_gc)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "DownSet", "FiniteDomain", "IntWindow", "KleisliFn",
    "LatticeError", "MonotoneFn", "bind", "identity_fn", "kcompose", "pure",
    "ret", "ClassicalGC", "ConstructiveGC", "KleisliGC", "LawReport",
    "NotLiftedFormError", "best_abstraction", "check_correspondence",
    "check_expansive", "check_optimality", "check_reductive",
    "check_soundness", "induce", "lift_to_classical", "lift_to_kleisli",
    "product_gc", "__version__",
]
