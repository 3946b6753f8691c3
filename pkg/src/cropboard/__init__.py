"""Collaborative crop planning toolkit.

Generates a set of non-dominated planting/harvest/distribution plans for a
group of farms by sweeping an epsilon-constraint grid over three objectives
(profit, food waste, unmet demand), then aggregates the participants'
preference rankings with a weighted Borda count so the group can settle on
one plan.
"""

from __future__ import annotations

__version__ = "0.1.0"
