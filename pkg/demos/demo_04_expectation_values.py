"""
Expectation values under two prescriptions
==========================================

``surface_term`` adds ``(i/2k) [u O u]`` at the edge; ``berggren`` adds the
closed-form Gaussian-regularized exterior integral.  They agree exactly
for ``H``, ``p`` and ``p^2`` and differ slightly for ``r`` and ``r^2``.
"""

# %%
from resonance_uncertainty import (
    DeltaShellPotential,
    RectangularBarrier,
    build_state,
    correction_factors,
    expectation,
    find_poles,
    regularization_tail,
)

shell = DeltaShellPotential(20)
s = build_state(find_poles(shell, 1)[0], shell)
for op in ("position", "position_squared", "momentum", "momentum_squared", "hamiltonian"):
    a = expectation(s, op, "surface_term").raw
    b = expectation(s, op, "berggren").raw
    print(f"{op:17s} surface={a:.10f}  berggren={b:.10f}")
print("E_1 =", s.energy)

# %%
# The exterior pieces are derivatives of exp(z a)/z at z = 2ik; relative to
# the surface term they carry the factors 1 + i/(2ka) and
# 1 + i/(ka) - 1/(2 (ka)^2).
print("tails:", [regularization_tail(s.k, 1.0, m) for m in (0, 1, 2)])
print("corrections:", correction_factors(s.k, 1.0))

# %%
# A symmetric barrier state is centred on the barrier under both rules.
barrier = RectangularBarrier(10, 3)
b = build_state(find_poles(barrier, 1)[0], barrier)
print("<<x>> =", expectation(b, "position", "surface_term").physical, expectation(b, "position", "berggren").physical)
