"""
Following poles as a parameter changes
======================================

:func:`track_poles` continues each pole along a grid, halving the step
whenever a pole would jump by more than half the distance to its nearest
neighbour.
"""

# %%
import io

import numpy as np

from resonance_uncertainty import DeltaShellPotential, RectangularBarrier, track_poles, write_trajectory_csv

traj = track_poles(DeltaShellPotential(0.5), "lambda", np.geomspace(0.5, 50, 50), [1, 2, 3])
for n in (1, 2, 3):
    k = traj.k(n)
    print(f"n={n}: lam=0.5 -> {k[0]:.4f}   lam=50 -> {k[-1]:.4f}   status={traj.status[n]}")

# %%
# Shrinking the barrier width pushes the poles down into the complex plane;
# at L = 0.42 the first one lies close to the negative imaginary axis.
traj = track_poles(RectangularBarrier(10, 100), "length", np.geomspace(100, 0.42, 150), [1, 2, 3, 4])
print({n: f"{traj.k(n)[-1]:.4f}" for n in (1, 2, 3, 4)})

# %%
# The same data as the CLI's ``trajectory`` command writes.
buf = io.StringIO()
write_trajectory_csv(traj, buf)
print("\n".join(buf.getvalue().splitlines()[:4]))
