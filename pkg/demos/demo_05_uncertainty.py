"""
Heisenberg products of resonance states
=======================================

``Delta r Delta p = sqrt((<<r^2>> - <<r>>^2) <<p^2>>)`` for the first
delta-shell resonance, compared with the infinite-well value and with the
bound 1/2.
"""

# %%
import numpy as np

from resonance_uncertainty import (
    DeltaShellPotential,
    build_state,
    classify_validity,
    find_poles,
    infinite_wall_reference,
    uncertainty_product,
)

print("infinite well, n = 1, 2, 3:", [round(infinite_wall_reference(n), 6) for n in (1, 2, 3)])


def reports(lam, n=1):
    m = DeltaShellPotential(lam)
    s = build_state(find_poles(m, n)[n - 1], m)
    return uncertainty_product(s, "surface_term"), uncertainty_product(s, "berggren")


for lam in (1e6, 1e3, 100, 20, 10, 7, 5, 3, 0.1):
    a, b = reports(lam)
    print(f"lam={lam:>9g}  surface={a.product:.6f} ({classify_validity(a)})  "
          f"berggren={b.product:.6f} ({classify_validity(b)})")

# %%
# Locate where each product drops below 1/2 on a fine grid.
grid = np.arange(2.0, 10.0 + 1e-9, 0.05)
values = np.array([[r.product for r in reports(lam)] for lam in grid])
for j, name in enumerate(("surface_term", "berggren")):
    i = np.argmax(values[:, j] >= 0.5)
    print(f"{name}: bound first satisfied at lam ~ {grid[i]:.2f}")

# %%
# Higher states satisfy the bound over the whole range.
print("n=2 at lam=2:", reports(2.0, 2)[0].product, " n=3 at lam=2:", reports(2.0, 3)[0].product)
