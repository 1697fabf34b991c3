"""Compare the lab-frame model with the secular polaron model.

The lab-frame master equation keeps the full radiation-pressure coupling.
Its steady state is moved into the displaced frame and its diagonal is
compared with the order-N secular model.  The remaining distance comes
mostly from processes the secular approximation drops (terms rotating at
the mechanical frequency), so it barely changes with N once N >= 1.
"""
from multiphonon import FIG1, FockCutoffs
from multiphonon.verify import frame_distances

params = FIG1.replace(delta=0.03, g=0.05)
for cut in (FockCutoffs(4, 10), FockCutoffs(5, 12)):
    d = frame_distances(params, cut)
    print(f"cutoffs ({cut.n_max},{cut.m_max}): L1 distance " + ", ".join(
        f"N={N}: {x:.8f}" for N, x in zip((1, 2, 3), d)))
