"""
Fractional revival from odd sites
=================================

An excitation started on an odd site stays on odd sites. From site 1 it
splits between N - 2 and N with probabilities u_{N-1}/u_1 and the
remainder.
"""

import math

from hahnchain import ChainSpec, build, spectral_data
from hahnchain.dynamics import amplitude_matrix, detect_fr

N, eta = 7, 1
op = build(ChainSpec.asymmetric(N, eta))
am = amplitude_matrix(spectral_data(op), math.pi / 4)

u = op.u
print(f"predicted P(1 -> {N - 2}) = u_{N - 1}/u_1 = {u[N - 2] / u[0]:.12f}")
for src in range(1, N + 1, 2):
    ev = detect_fr(am, src)
    spread = ", ".join(f"{m}: {p:.12f}" for m, p in zip(ev.support, ev.probabilities))
    print(f"source {src} -> {{{spread}}}  total {sum(ev.probabilities):.12f}")
