"""Certify the s-wave amplitude of a square well from a zero starting guess.

Minimising the L1 violation drives the ansatz towards the scattering state,
and the violation that remains turns into an error bar on f_0 that can be
checked against an independent Numerov solution.
"""

import math

from scatterbound import (OptimizerConfig, ScatteringAnsatz, optimize, oracle_partial_waves,
                          phase_shift_error_bound, square_well, violation_report,
                          xi_linf_numerical)

K, MASS = 1.0, 1.0
well = square_well(-1.0, 1.0)

start = ScatteringAnsatz.zero(K, MASS, lmax=4, n_nodes=33, r_outer=11.0, breakpoints=[1.0])
print(f"zero ansatz: L1 violation = {violation_report(well, start).l1:.4f}")

trace = optimize(well, start, OptimizerConfig(max_iterations=100))
report = trace.report
print(f"after {len(trace.accepted_losses) - 1} steps ({trace.reason}): "
      f"L1 = {report.l1:.3e} +- {report.l1_error:.1e}")

oracle = oracle_partial_waves(well, K, MASS, lmax=4)
xi = xi_linf_numerical(well, 0, K, MASS, result=oracle[0])
bound = phase_shift_error_bound(MASS, 0, xi.value, report.l1_upper)
f_tilde = trace.ansatz.amplitudes[0]
f_exact = oracle[0].f

print(f"\nsup-norm constant for l = 0: {xi.value:.4f}  (raw max {xi.details['radial_max']:.4f})")
print(f"f~_0           = {f_tilde.real:+.6f} {f_tilde.imag:+.6f}i")
print(f"certified to  +- {bound:.2e}")
print(f"Numerov f_0    = {f_exact.real:+.6f} {f_exact.imag:+.6f}i")
print(f"actual error   = {abs(f_tilde - f_exact):.2e}  "
      f"(inside the certificate: {abs(f_tilde - f_exact) <= bound})")
print(f"phase shift    = {math.atan2(f_exact.imag, f_exact.real):.6f} rad")
