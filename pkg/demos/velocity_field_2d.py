"""Evaluate the 2D half-plane velocity of a localized scalar and check the
boundary behavior.

The scalar is extended to the lower half plane by odd reflection
(Dirichlet boundary), the Biot-Savart kernels are convolved by FFT on the
doubled grid, and u2 vanishes identically on the boundary row.
"""

import numpy as np

from gsqg1d.field2d import cross_sections, make_field, velocity_from_theta
from gsqg1d.params import make_alpha_params

params = make_alpha_params(0.15, half_plane=True)
field = make_field(16.0, 256,
                   lambda x, y: x * np.exp(-0.25 * x**2) * y * np.exp(-(y - 1.5) ** 2))
field = velocity_from_theta(field, params)

iy0 = field.n // 2
print(f"grid: {field.n} x {field.n} on [-16, 16]^2, h = {field.h:.4f}")
print(f"max |u1| = {np.max(np.abs(field.u1)):.4e}")
print(f"max |u2| = {np.max(np.abs(field.u2)):.4e}")
print(f"max |u2| on y = 0:    {np.max(np.abs(field.u2[iy0, :])):.2e}  (exact zero)")

sections = cross_sections(field, xs=[0, 1, 4], ys=[0, 1, 4])
for key, sec in sections.items():
    print(f"  section {key:6}: max|theta| = {np.max(np.abs(sec['theta'])):.3e}, "
          f"max|u1| = {np.max(np.abs(sec['u1'])):.3e}")
