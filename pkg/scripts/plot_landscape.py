"""Heat map of a p=1 landscape CSV written by ``kcut-qaoa landscape``.

    kcut-qaoa landscape --graph barbell --k 3 --out out/
    python scripts/plot_landscape.py out/landscape.csv out/landscape.png
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def main(src: str, dst: str) -> None:
    data = np.loadtxt(src, delimiter=",", comments="#", skiprows=2)
    gammas, betas = np.unique(data[:, 0]), np.unique(data[:, 1])
    energy = data[:, 2].reshape(len(gammas), len(betas))
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(energy.T, origin="lower", aspect="auto", cmap="viridis",
                   extent=(gammas[0], gammas[-1], betas[0], betas[-1]))
    i, j = np.unravel_index(np.argmin(energy), energy.shape)
    ax.plot(gammas[i], betas[j], "r*", ms=12)
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel(r"$\beta$")
    fig.colorbar(im, label="energy")
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "landscape.png")
