"""skyhaul: link-level performance analysis for a dual-hop backhaul.

First hop: hybrid FSO/THz with hard or soft (hysteresis) switching.
Second hop: RF reflected by an aerial RIS mounted on a UAV.

Closed-form outage probability and average bit error rate, an independent
Monte Carlo channel simulator, and a batch CLI for sweeps and figure data.
"""

__version__ = "0.1.0"

from . import channels, metrics, montecarlo, specfun, switching  # noqa: F401
