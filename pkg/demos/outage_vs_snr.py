"""Outage probability vs SNR for the three protocols, with closed-form overlay.

Runs a Monte Carlo sweep on the reference geometry (relay two thirds of the
way to the destination, path-loss exponent 3, rate 2 bits/channel use) and
prints p_out next to the high-SNR prediction xi / rho^2 for each protocol.

Usage: python3 demos/outage_vs_snr.py [n_samples]
"""

import math
import sys

from doqf.channel import NetworkGeometry, geometry_to_models
from doqf.gain import ProtocolParams
from doqf.montecarlo import SimConfig, snr_sweep

N = int(sys.argv[1]) if len(sys.argv) > 1 else 400_000

geom = NetworkGeometry(d01=2.0 / 3.0, d12=1.0 / 3.0, d02=1.0)
m01, m12, m02 = geometry_to_models(geom)
params = ProtocolParams(t0=0.5, alpha0=0.5, alpha1=1.0, R=2.0 * math.log(2.0))
cfg = SimConfig(params=params, model01=m01, model12=m12, model02=m02,
                snr_rho=1.0, delta_exponent=0.5, n_samples=N, seed=42)

snrs = [10.0, 15.0, 20.0, 25.0, 30.0]
print(f"rate 2 bits, t0 = 0.5, even power split, {N:,} samples per point\n")
print(f"{'SNR':>5}  {'protocol':>8}  {'p_out':>10}  {'95% CI':>24}  "
      f"{'rho^2 p':>9}  {'xi':>7}")
for protocol in ("cutset", "doqf", "df"):
    for pt in snr_sweep(cfg, protocol, snrs):
        e = pt.estimate
        ci = f"[{e.ci_low:.3e}, {e.ci_high:.3e}]"
        print(f"{pt.snr_db:4.0f}   {protocol:>8}  {e.p_hat:.4e}  {ci:>24}  "
              f"{pt.rho2_p_hat:9.2f}  {pt.xi_ref:7.2f}")
    print()

print("The cut-set estimate settles on xi within a few dB.  The quantizing")
print("protocol is still well above its asymptote at 30 dB: the")
print("lost-description event decays as rho^-2.5 at this distortion")
print("exponent, not rho^-2, so its excess drains off very slowly.")
