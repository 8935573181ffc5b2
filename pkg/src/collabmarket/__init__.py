"""Regional supply/demand analytics for university-industry research collaborations.

The package turns a corpus of co-authored publications plus organization and
researcher registries into collaboration events, and from those events computes
regional and sectorial indicators: supply/demand balances, market shares,
quadrant diagnostics, per-region statistics and weighted cross-sector rankings.
"""

__version__ = "0.1.0"
