# Penalized smoothing of noisy data, with and without the zero-integral constraint.
import numpy as np

from clrspline import (SmoothingProblem, build_space, fit_unconstrained, fit_zero_integral,
                       integrate)

rng = np.random.default_rng(0)
space = build_space(a=0.0, b=10.0, interior=(2.5, 5.0, 7.5), degree=3)
xs = np.sort(rng.uniform(0, 10, 40))
ys = np.sin(xs) + 0.2 * rng.normal(size=xs.size)

# alpha weights the data term: small alpha -> smoother, large alpha -> closer to the data
for alpha in (0.01, 1.0, 100.0):
    sol = fit_unconstrained(SmoothingProblem(space, xs, ys, alpha=alpha, order=2))
    print(f"alpha={alpha:>6}: penalty={sol.penalty:.4f} residual={sol.residual:.4f} "
          f"rank={sol.report.rank} ({sol.report.inverse_kind.value})")

# zero-integral fit: coefficients are b = D K cbar, the cbar system is always rank deficient
# (K kills constants), the minimum-norm cbar still gives a unique b
problem = SmoothingProblem(space, xs, ys, alpha=1.0, order=2)
free = fit_unconstrained(problem)
zero = fit_zero_integral(problem)
print("unconstrained integral:", integrate(free.spline))
print("constrained integral:  ", integrate(zero.spline))
print("cbar system rank:", zero.report.rank, "of", space.dim, "consistent:", zero.report.consistent)
print("objective cost of the constraint:", zero.objective - free.objective)

# a singular normal system: one weighted point cannot fix a line, minimum-norm picks one
w = np.zeros(xs.size)
w[10] = 1.0
sol = fit_unconstrained(SmoothingProblem(space, xs, ys, weights=w, order=2))
print("single point:", sol.report.rank, sol.report.inverse_kind.value,
      "s(x_10) =", sol.spline(xs[10]), "y_10 =", ys[10])
