"""Why the L1 norm, and where it stops being enough: four 1D experiments.

1. A plane wave whose amplitude ramps from A_< to A_> over a length n has an
   L2 violation that vanishes as n grows, yet the current jump stays fixed.
   The L1 norm does not vanish, so it cannot be fooled this way.
2. The same ramp on a standing wave can be tuned so that its energy
   expectation is exactly E, so that test alone certifies nothing either.
3. A ramped cosine added to a standing wave creates current from nowhere,
   in proportion to its (small) L1 violation: the L1 constant must grow
   with the size of the state.
4. A slowly varying plateau hosts a near-eigenstate whose forward amplitude
   is large while its violation is small, so no universal L1 constant exists.
"""

import math

from scatterbound.pathology import (expectation_tuning, inverse_square_exponents,
                                    l2_instability_scan, nonconservation_demo, vslow_demo)

print("1. ramped plane wave, A_< = 0, A_> = 1, k = 1")
print(f"   {'n':>6} {'L2^2':>12} {'L1':>10} {'current jump':>13}")
for row in l2_instability_scan(0.0, 1.0, 1.0, 1.0, [100, 200, 400, 800, 1600]):
    print(f"   {row.n:6.0f} {row.l2sq:12.4e} {row.l1:10.6f} {row.flux_jump:13.10f}")

print("\n2. energy expectation tuned to E for a ramped standing wave (A_< = 1, A_> = 2)")
t = expectation_tuning(1.0, 2.0, 1.0, 100.0)
print(f"   ramp stretch alpha = {t.alpha:.6f}, <E - H> = {t.residual:.1e}, "
      f"current jump = {t.flux_jump:.3f}")

print("\n3. current created by a ramped cosine of size eps on i A sin(x)")
for eps in (1e-1, 1e-2, 1e-3):
    l1, current = nonconservation_demo(eps, 1.0 / eps, 1.0)
    print(f"   eps = {eps:.0e}: L1 = {l1:.3e}, current = {current:.6f}")

print("\n4. slowly varying plateau of height E - eps over a length a = 1e4")
for eps in (1e-4, 1e-3):
    v = vslow_demo(1e4, eps)
    print(f"   eps = {eps:.0e}: L1 = {v.l1_measured:.4f} (model {v.l1_predicted:.4f}), "
          f"forward amplitude = {v.amplitude_measured:.3f} (model {v.amplitude_predicted:.3f})")
print("   the (E/eps)^(1/4) amplitude model is tuned to eps = 1e-4 and drifts away from it")

print("\n5. inverse-square tails V = alpha2 / r^2: exponents of u ~ r^beta")
for alpha2 in (0.5, 0.0, -0.125, -0.5):
    r = inverse_square_exponents(alpha2, 1.0)
    tag = "  <- fall to the centre" if r.pathological else ""
    print(f"   alpha2 = {alpha2:+.3f}: beta = {r.beta_minus}, {r.beta_plus}{tag}")
