"""Sweep alpha for both reductions and tabulate the scaling parameters."""

from gsqg1d.fixedpoint import sweep_alpha
from gsqg1d.mesh import power_mesh, sinh_mesh

print("full plane, alpha in {0.1, 0.3, 0.5, 0.7, 0.9}:")
rows = sweep_alpha([0.1, 0.3, 0.5, 0.7, 0.9], "r2", power_mesh(5.0, 1000, 2.0))
print(f"  {'alpha':>6} {'c_ell~':>10} {'support':>9} {'iters':>6}")
for r in rows:
    print(f"  {r['alpha']:6.2f} {r['c_norm']:10.6f} {r['support_radius']:9.4f} "
          f"{r['iterations']:6d}")

print("half plane, alpha in {0.05, 0.15, 0.25, 0.35, 0.45}:")
rows = sweep_alpha([0.05, 0.15, 0.25, 0.35, 0.45], "hp", sinh_mesh(15.0, 1500))
print(f"  {'alpha':>6} {'c_ell/c_th':>11} {'1/(2a)':>8} {'iters':>6}")
for r in rows:
    if "error" in r:
        print(f"  {r['alpha']:6.2f}  failed: {r['error']}")
    else:
        print(f"  {r['alpha']:6.2f} {r['ratio']:11.4f} {r['lower_bound']:8.3f} "
              f"{r['iterations']:6d}")
