#!/usr/bin/env python3
"""Gallery of the closed-form densities.

Evaluates every family with an elementary formula, verifies unit mass
and unit mean by quadrature, and (when matplotlib is importable) saves
a panel plot.
"""
import numpy as np

from freeconv import closedform

families = closedform.all_families()

print(f"{'family':>10s} {'support':>28s} {'mass':>12s} {'mean':>12s}")
for fam in families:
    m0, m1 = closedform.mass_and_mean(fam)
    lo, hi = fam.support
    print(f"{fam.name:>10s} [{lo:10.6f}, {hi:10.6f}] {m0:12.9f} {m1:12.9f}")

# a few signpost values
print("\nsignposts:")
print("  mp(1) at 1   :", closedform.family("mp(1)").density(1.0),
      " = sqrt(3)/(2 pi)")
print("  arcsine at 1 :", closedform.family("as").density(1.0), " = 1/pi")
print("  bures2 at 2  :", closedform.family("bures2").density(2.0), " = 1/(4 pi)")
print("  arcsine median:", closedform.cdf(closedform.family("as"), 1.0), " = 1/2")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
else:
    fig, axes = plt.subplots(3, 3, figsize=(11, 9))
    for ax, fam in zip(axes.flat, families):
        lo, hi = fam.support
        xs = np.linspace(lo + 1e-3 * (hi - lo), hi - 1e-6, 400)
        ax.plot(xs, [fam.density(float(x)) for x in xs], lw=1.2)
        ax.set_title(fam.name, fontsize=9)
        ax.set_ylim(0, 1.8)
    fig.tight_layout()
    fig.savefig("closed_form_gallery.png", dpi=120)
    print("\nwrote closed_form_gallery.png")
