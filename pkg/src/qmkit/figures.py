"""Figure rendering for L-factor reports.

Presentation layer only: the JSON reports stay exact, a figure is a visual
digest of the same data.  The plot shows, per prime, the linear and quadratic
coefficients of the expanded degree-16 factor, with comparison verdicts
marked when a fixture was supplied.
"""

from __future__ import annotations

from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def render_lfactor_figure(path: str, computed: dict, diff: Optional[object] = None) -> None:
    primes = sorted(computed)
    if not primes:
        raise ValueError("nothing to plot")
    c1 = [computed[p].expanded()[1] for p in primes]
    c2 = [computed[p].expanded()[2] for p in primes]
    match_by_p = {}
    if diff is not None:
        match_by_p = {row["p"]: row.get("match") for row in diff.rows}

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.stem(primes, c1)
    ax1.set_ylabel("coefficient of T")
    ax2.stem(primes, c2)
    ax2.set_ylabel("coefficient of T^2")
    ax2.set_xlabel("p")
    for ax, vals in ((ax1, c1), (ax2, c2)):
        for p, v in zip(primes, vals):
            ok = match_by_p.get(p)
            if ok is True:
                ax.plot([p], [v], marker="o", color="tab:green")
            elif ok is False:
                ax.plot([p], [v], marker="x", color="tab:red", markersize=10)
    title = "local L-factors"
    if match_by_p:
        good = sum(1 for v in match_by_p.values() if v)
        title += f" (fixture match: {good}/{len(match_by_p)})"
    ax1.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
