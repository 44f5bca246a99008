"""
Where common two-qubit gates live in the Weyl chamber
======================================================

Computes canonical coordinates and entangling power for a handful of named
gates, checks which of them are perfect entanglers, and asks how many layers
each one needs to build SWAP and CNOT.

Run with ``python3 demos/weyl_tour.py``.
"""

import numpy as np

from cartanbasis import weyl
from cartanbasis.feasibility import cnot_two_layer, mirror_point, swap_min_layers

gates = {
    "CNOT": weyl.CNOT,
    "iSWAP": weyl.ISWAP,
    "sqrt(iSWAP)": weyl.SQRT_ISWAP,
    "SWAP": weyl.SWAP,
    "sqrt(SWAP)": weyl.SQRT_SWAP,
    "B": weyl.B_GATE,
}

print(f"{'gate':12s} {'(tx, ty, tz)':>24s} {'e_p':>7s}  PE   SWAP layers  CNOT<=2")
for name, u in gates.items():
    c = weyl.cartan_coordinates(u)
    print(f"{name:12s} ({c.tx:6.3f}, {c.ty:6.3f}, {c.tz:6.3f})   {weyl.entangling_power(c):.4f}"
          f"  {'yes' if weyl.is_perfect_entangler(c) else 'no ':3s}  "
          f"{int(swap_min_layers(c)):>6d}       {cnot_two_layer(c)}")

# Local gates do not move a class: dress CNOT with random single-qubit gates.
rng = np.random.default_rng(0)
k = [np.kron(*(np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
               for _ in range(2))) for _ in range(2)]
print("\ndressed CNOT ->", tuple(round(x, 6) for x in weyl.cartan_coordinates(k[0] @ weyl.CNOT @ k[1])))

# Every class has a partner completing SWAP in two layers.
print("mirror of CNOT ->", tuple(mirror_point((0.5, 0, 0))))
