"""One temperature, four observer choices.

Alice always keeps her mode.  Bob and Charlie may each be replaced by their
inaccessible anti-particle partner, which gives four three-qubit states cut
from the same five-qubit pure state.

    python demos/scenarios.py [T_H]
"""

import math
import sys

import numpy as np

from horizon_qi import RoofConfig, derive_coefficients, evaluate_point

th = float(sys.argv[1]) if len(sys.argv) > 1 else 10.0
p = derive_coefficients(1 / math.sqrt(2), 1.0, th)
print(f"T_H = {th:g}, omega = 1, alpha = 1/sqrt2")
print(f"S+ = {p.s_plus:.6f}  S- = {p.s_minus:.6f}")

cfg = RoofConfig.fast()
for name in ("ABC", "Abc", "AbB", "ABc"):
    rep = evaluate_point(p, name, cfg, measures=("qc", "tradeoff", "gc", "mi"))
    mi = "  ".join(f"I_{k} {v:.4f}" for k, v in rep.mutual_info.items())
    conc = np.round(rep.concurrences, 4)
    print(
        f"{name}: QC {rep.qc_l1:.4f}  FOC {rep.foc:.4f}  GC {rep.gc:.4f}  CF {rep.cf:.4f}"
        f"  one-vs-rest {conc}  {mi}"
    )

# AbB is the odd one out: Alice's one-vs-rest concurrence vanishes, so the
# concurrence triangle collapses to a line and CF is zero while GC and QC
# stay finite.
