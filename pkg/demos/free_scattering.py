"""With no potential the scattering amplitude must vanish, and the free bound
|f~| <= (M / pi) L1 says how far an ansatz with spurious outgoing waves can be
from that answer.  Optimising removes the spurious waves."""

import numpy as np

from scatterbound import (OptimizerConfig, RadialPotential, ScatteringAnsatz, optimize,
                          violation_report)
from scatterbound.bounds import free_scattering_bound

free = RadialPotential("zero")
a = ScatteringAnsatz.zero(1.0, 1.0, lmax=2, n_nodes=17, r_outer=8.0)
a = a.replace(amplitudes=np.array([0.3 + 0.1j, -0.05, 0.02j]))

for label, state in (("initial", a),
                     ("optimised", optimize(free, a, OptimizerConfig(max_iterations=40)).ansatz)):
    rep = violation_report(free, state)
    back = complex(np.sum((2 * np.arange(3) + 1) * state.amplitudes * (-1.0) ** np.arange(3)))
    print(f"{label:>9}: L1 = {rep.l1:.3e}, |f~(backward)| = {abs(back):.3e}, "
          f"bound = {free_scattering_bound(1.0, rep.l1_upper):.3e}")
