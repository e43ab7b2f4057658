"""
When transfer breaks
====================

Two small departures from the design: a non-integer eta and a single
coupling scaled by 5%. Both lose perfect transfer; the first keeps the
perfect return because its spectrum still consists of odd multiples of 2.
"""

import math

from hahnchain import ChainSpec, build, spectral_data
from hahnchain.chain import perturb_coupling
from hahnchain.dynamics import transport_report

chains = {
    "design (eta=1)": build(ChainSpec.asymmetric(5, 1)),
    "eta=0.5": build(ChainSpec.asymmetric(5, 0.5)),
    "J_2 x 1.05": perturb_coupling(build(ChainSpec.asymmetric(5, 0)), 2, 1.05),
}

for name, op in chains.items():
    rep = transport_report(op, math.pi / 4)
    fids = ", ".join(f"({p.source},{p.target}) {p.fidelity:.5f}" for p in rep.pst)
    print(f"{name:15s} PST {fids}")
    print(f"{'':15s} return residual {rep.return_residual:.1e}, verdict {rep.verdict}")

# the eta=0.5 spectrum: still odd multiples of 2
print(spectral_data(chains["eta=0.5"]).eigenvalues)
