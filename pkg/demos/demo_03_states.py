"""
Normalized resonance states
===========================

The states grow exponentially outside the potential, so ordinary
normalization fails.  Instead ``int_inside u^2 + (i/2k) u(edge)^2 = 1``,
and distinct states are orthogonal in the analogous sense.
"""

# %%
import numpy as np

from resonance_uncertainty import (
    DeltaShellPotential,
    RectangularBarrier,
    build_states,
    decay_width_residual,
    eval_state,
    expand,
    find_poles,
    overlap_matrix,
    quadrature_grid,
    reconstruct,
)

for model in (DeltaShellPotential(6), RectangularBarrier(10, 1)):
    states = build_states(find_poles(model, 5), model)
    g = overlap_matrix(states)
    print(model, "max |G - I| =", f"{np.max(np.abs(g - np.eye(5))):.1e}")

# %%
# The flux through the edge accounts for the decay width.
shell = DeltaShellPotential(100)
states = build_states(find_poles(shell, 40), shell)
print("decay-width residuals:", [f"{decay_width_residual(s):.1e}" for s in states[:3]])

# %%
# Inside the shell the states form a basis: a smooth function vanishing at
# both ends is reproduced by the truncated sum over +-n.
grid = quadrature_grid(shell, 160, 16)
psi = lambda r: r**2 * (1 - r) ** 2  # noqa: E731
x = np.linspace(0.1, 0.9, 81)
for n in (10, 20, 40):
    c = expand(psi(grid.nodes), states[:n], grid)
    print(f"N={n:2d}: max error on [0.1, 0.9] = {np.max(np.abs(reconstruct(c, states[:n], x) - psi(x))):.2e}")

# %%
# Outside the shell the state grows like exp(beta r).
s = states[0]
print("|u(r)| for r = 1, 10, 100:", np.abs(eval_state(s, np.array([1.0, 10.0, 100.0]))))
