"""Outage analysis toolkit for a decode-or-quantize-and-forward half-duplex relay.

Subpackage map:
    channel     -- fading gain models, densities at zero, path-loss geometry
    gain        -- closed-form outage gains and the region-integral oracle
    allocator   -- convex minimization of the outage gain over slot/power split
    montecarlo  -- exact per-draw outage decision trees and seeded estimation
    dmt         -- analytic diversity-multiplexing tradeoff curves and optima
    dmt_oracle  -- exponential-order region grid oracle verifying the DMT
    cli         -- command-line front end (gain / optimize / simulate / dmt / dmt-verify)
"""

__version__ = "0.1.0"
