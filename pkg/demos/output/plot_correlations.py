"""Plot correlations.csv: mean quanta numbers and correlations versus delta."""
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
rows = list(csv.DictReader((HERE / "correlations.csv").open()))

curves = defaultdict(list)
for row in rows:
    curves[(row["nbar"], row["order_N"])].append(row)


def column(group, name):
    pts = [(float(r["axis_value"]), float(r[name])) for r in group if r[name] != ""]
    return [p[0] for p in pts], [p[1] for p in pts]


panels = [("mean_photon", "<n>"), ("mean_phonon", "<m>"), ("g2_a", "g2_a(0)"), ("g2_b", "g2_b(0)")]
fig, axes = plt.subplots(2, 2, figsize=(9, 6.5), sharex=True)
for ax, (name, label) in zip(axes.flat, panels):
    for (nbar, order), group in sorted(curves.items()):
        x, y = column(group, name)
        ax.plot(x, y, label=f"nbar={nbar}, N={order}")
    ax.set_ylabel(label)
for ax in axes[-1]:
    ax.set_xlabel("Delta/omega")
axes[0, 0].legend(fontsize="small")
fig.tight_layout()
fig.savefig(HERE / "correlations.png", dpi=150)
