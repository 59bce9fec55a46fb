"""Compare computed profiles with the two analytic limiting shapes.

As alpha -> 0 the full-plane profile approaches sin(sqrt(6) x)/(sqrt(6) x);
as alpha -> 1/2 the rescaled half-plane profile approaches the implicit
Burgers shape F + x^2 F^3 = 1.
"""

from gsqg1d.fixedpoint import (
    burgers_limit_gap,
    sinc_limit_gap,
    solve_hp,
    solve_r2,
)
from gsqg1d.mesh import power_mesh
from gsqg1d.params import make_alpha_params

mesh = power_mesh(5.0, 2000, 2.0)
print("sinc limit (full plane, alpha -> 0):")
for alpha in [0.05, 0.02, 0.01]:
    rep = solve_r2(make_alpha_params(alpha), mesh, tol=1e-7,
                   compute_ode_residual=False)
    print(f"  alpha = {alpha:5.2f}: sup|f* - sinc| = {sinc_limit_gap(rep):.4f}")

print("Burgers limit (half plane, alpha -> 1/2):")
# the c_theta = 1 gauge concentrates the profile near the origin as alpha
# grows, so the mesh must resolve scale 2/sqrt(c) ~ 1e-4
mesh_hp = power_mesh(200.0, 3000, 2.0)
rep = solve_hp(make_alpha_params(0.45, half_plane=True), mesh_hp, tol=1e-7,
               compute_ode_residual=False)
print(f"  alpha = 0.45: sup gap to Burgers on [0,10] = {burgers_limit_gap(rep):.4f}")
