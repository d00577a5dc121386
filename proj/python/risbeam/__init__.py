"""RIS channel modelling and reflective beam design."""

from ._risbeam import (
    __version__,
    classify_regime,
    focusing_profile,
    normalized_grcs,
    regime_distances,
    run,
    subcommands,
)

__all__ = [
    "__version__",
    "classify_regime",
    "focusing_profile",
    "normalized_grcs",
    "regime_distances",
    "run",
    "subcommands",
]
