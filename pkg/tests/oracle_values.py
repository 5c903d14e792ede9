"""Reference values frozen from ``oracle_derivation.py``.

Regenerate with ``python3 tests/oracle_derivation.py``.
"""

import math

# attractive square well: depth -1, radius 1, k = 1, M = 1; l = 0..8
SQUARE_WELL_DELTAS = (
    0.8454245551484233,
    0.050653945529535456,
    0.0012620369311596921,
    1.947413720048185e-05,
    1.9543228713370066e-07,
    1.3657957503350268e-09,
    7.013189999294502e-12,
    2.7555941720240072e-14,
    8.54900891827324e-17,
)
SQUARE_WELL_F = tuple(complex(math.cos(d), math.sin(d)) * math.sin(d) for d in SQUARE_WELL_DELTAS)
SQUARE_WELL_SIGMA = 4 * math.pi * sum((2 * l + 1) * math.sin(d) ** 2
                                      for l, d in enumerate(SQUARE_WELL_DELTAS))

ARG_GAMMA_1_PLUS_I = -0.3016403204675332
ARG_GAMMA_2_PLUS_I = 0.48375784292991514

# exp(-r^2 / 2) = 1e-12
GAUSSIAN_TAIL_RADIUS = 7.4338443776996765

# 2 pi int |1 + 3u|^2 du
SIGMA_F0_F1 = 50.26548245743669

# slow plateau a = 1e4, eps = 1e-4, E = M = 1: |forward|, |backward| on (0, a)
PLATEAU_FORWARD = 10.340562956754486
PLATEAU_BACKWARD = 5.8214777233450565
