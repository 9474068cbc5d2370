"""
Resonance poles of the delta shell and the rectangular barrier
==============================================================

Poles are zeros of an entire characteristic function in the fourth
quadrant of the complex wavenumber plane, ``k_n = alpha_n - i beta_n``.
"""

# %%
# Delta shell ``V = lam delta(r - a)``: for a strong shell the poles sit just
# below the infinite-well values ``n pi / a``, and the asymptotic seed is
# already very close.
import numpy as np

from resonance_uncertainty import (
    DeltaShellPotential,
    RectangularBarrier,
    asymptotic_seed_delta,
    characteristic_residual,
    find_poles,
)

shell = DeltaShellPotential(lam=100.0, a=1.0)
for p in find_poles(shell, 4):
    seed = asymptotic_seed_delta(p.index, shell)
    print(f"n={p.index}  k={p.k:.10f}  |k - seed|={abs(p.k - seed):.1e}  "
          f"E={p.resonance_energy:.6f}  Gamma={p.width:.3e}  {p.classification}")

# %%
# A weak shell gives broad resonances.  Below lam ~ 0.107 the first pole
# has beta > alpha, so its resonance energy ``alpha^2 - beta^2`` is negative.
for lam in (6.0, 0.5, 0.1):
    p = find_poles(DeltaShellPotential(lam), 1)[0]
    print(f"lam={lam:5}  k1={p.k:.6f}  Re E={p.resonance_energy:+.4f}  {p.classification}")

# %%
# Rectangular barrier of height 10 and width 100: poles crowd together just
# above the barrier top, ``k ~ sqrt(10) = 3.1623``, alternating in parity.
barrier = RectangularBarrier(v0=10.0, length=100.0)
for p in find_poles(barrier, 6):
    print(f"n={p.index}  k={p.k:.8f}  parity={p.parity}  residual={characteristic_residual(barrier, p):.1e}")
print("sqrt(v0) =", np.sqrt(10.0))
