"""Plot CSV output of the CLI (needs the optional matplotlib extra).

    python -m floquet_baxter.figures sweep.csv [out.png]

The file kind is read from the schema comment on the first line.
"""
from __future__ import annotations

import sys

import numpy as np


def _load(path):
    with open(path) as fh:
        head = fh.readline()
    data = np.genfromtxt(path, delimiter=",", names=True, skip_header=1, dtype=None, encoding="utf-8")
    return head, data


def plot_sweep(data, ax_mu, ax_e):
    ax_mu.plot(data["T"], data["abs_mu"], ".", ms=2)
    ax_mu.set_ylabel(r"$|\mu|$")
    ax_e.plot(data["T"], data["re_E"], ".", ms=2, label="Re E")
    ax_e.plot(data["T"], data["im_E"], ".", ms=2, label="Im E")
    ax_e.set_xlabel("T")
    ax_e.legend(frameon=False)


def plot_alpha(data, ax):
    ax.plot(data["beta_T"], data["re_alpha"], label=r"Re $\alpha$")
    ax.plot(data["beta_T"], data["im_alpha"], label=r"Im $\alpha$")
    ax.set_xlabel(r"$\beta T$")
    ax.legend(frameon=False)


def main(argv=None) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        print(__doc__)
        return 2
    src = argv[0]
    out = argv[1] if len(argv) > 1 else src.rsplit(".", 1)[0] + ".png"
    head, data = _load(src)
    if "alpha-curve" in head:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        plot_alpha(data, ax)
    else:
        fig, (a, b) = plt.subplots(2, 1, sharex=True, figsize=(5, 6))
        plot_sweep(data, a, b)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
