"""Diversity-multiplexing tradeoff of the relay protocols, as text.

Prints d*(r) for the quantizing protocol, the decode-and-forward baseline,
and the 1x2 MISO upper bound, then sketches the three curves.  The
quantizing protocol follows the MISO bound up to r = 1/4, peels off along a
curved segment controlled by a cubic root, and merges with the
decode-and-forward line just below r = 0.366.

Usage: python3 demos/tradeoff_curves.py
"""

from doqf.dmt import (R_DF_KINK, R_DF_MERGE, R_MISO_DEPART,
                      dmt_df_star, dmt_doqf_star, miso_bound)

print(f"breakpoints: MISO departure r = {R_MISO_DEPART}, "
      f"DF merge r = {R_DF_MERGE:.6f}, DF kink r = {R_DF_KINK:.6f}\n")

print(f"{'r':>5}  {'d_doqf':>7}  {'d_df':>7}  {'d_miso':>7}  "
      f"{'t0*':>7}  {'delta*':>7}")
rows = []
for i in range(0, 21):
    r = i / 20.0
    doqf = dmt_doqf_star(r)
    df = dmt_df_star(r)
    rows.append((r, doqf.d, df.d, miso_bound(r)))
    print(f"{r:5.2f}  {doqf.d:7.4f}  {df.d:7.4f}  {miso_bound(r):7.4f}  "
          f"{doqf.t0_star:7.4f}  {doqf.delta_star:7.4f}")

# crude character plot: 'm' MISO bound, 'q' quantizing protocol, 'd' DF line,
# '*' where curves coincide
print("\nd")
for level in range(20, -1, -2):
    d_level = level / 10.0
    line = []
    for r, dq, dd, dm in rows:
        chars = [c for c, d in (("m", dm), ("q", dq), ("d", dd))
                 if abs(d - d_level) < 0.1]
        line.append("*" if len(chars) > 1 else (chars[0] if chars else " "))
    print(f"{d_level:3.1f} |" + " ".join(line))
print("    +" + "-" * 41 + " r")
print("     0.0" + " " * 33 + "1.0")
