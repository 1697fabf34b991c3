"""Photon and phonon numbers versus detuning: the Kerr peak comb.

Each k-photon resonance sits at delta = k * chi^2 (in units of the
mechanical frequency), so the peak spacing measures the coupling:
g = sqrt(spacing).  Two curves are computed, a cold mirror (nbar = 0)
and a thermal one (nbar = 1).  The results go to kerr_comb.csv together
with plot_kerr_comb.py, which renders them with matplotlib.

Run from the repository root:  python3 demos/01_kerr_comb.py
"""
import os
from pathlib import Path

from multiphonon import FIG1, SweepSpec, emit_plot_script, peaks_from_rows, run_sweep

STEPS = 120  # 240 reproduces the full-resolution figure
OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

rows = []
for nbar in (0.0, 1.0):
    spec = SweepSpec("delta", 0.005, 0.12, STEPS, FIG1.replace(nbar=nbar), N=1)
    curve = run_sweep(spec, workers=os.cpu_count() or 1)
    rows.extend(curve)
    report = peaks_from_rows(curve, "mean_photon")
    print(f"nbar={nbar:g}: peaks at " + ", ".join(f"{x:.4f}" for x in report.positions))
    if report.inferred_g is not None:
        print(f"  mean spacing {report.inferred_kerr:.4f} -> g = {report.inferred_g:.4f} (true {FIG1.g})")

csv_path, script = emit_plot_script(rows, OUT / "kerr_comb.csv")
print(f"wrote {csv_path}; render with: python3 {script}")
