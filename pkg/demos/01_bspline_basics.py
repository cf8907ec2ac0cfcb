# B-spline basics: build a clamped space, look at the basis, differentiate and integrate.
import numpy as np

from clrspline import (Spline, build_space, collocation_matrix, derivative_operator, differentiate,
                       evaluate, gram_matrix, integrate, penalty_matrix)

# cubic splines on [0, 10] with three interior knots
space = build_space(a=0.0, b=10.0, interior=(2.0, 5.0, 7.5), degree=3)
print("dimension:", space.dim)              # g + k + 1 = 3 + 3 + 1
print("extended knots:", space.knots)

# every row of the collocation matrix sums to one (partition of unity)
xs = np.linspace(0, 10, 7)
C = collocation_matrix(space, 3, xs)
print(np.round(C, 3))
print("row sums:", C.sum(axis=1))

# a spline is a coefficient vector on the space
s = Spline(space, np.array([0.0, 1.0, 3.0, -1.0, 2.0, 0.5, 0.0]))
print("s(0), s(10):", evaluate(s, [0.0, 10.0]))   # clamped ends hit the first and last coefficient

# derivatives act on coefficients: S_l maps degree k coefficients to degree k - l
S2 = derivative_operator(space, 2)
print("S_2 shape:", S2.shape)
d2 = differentiate(s, 2)
print("s'' at the knots:", evaluate(d2, space.breakpoints))

# closed-form integral versus a brute-force Riemann sum
grid = np.linspace(0, 10, 200001)
print("integral:", integrate(s), "riemann:", np.trapezoid(evaluate(s, grid), grid))

# Gram matrix of the degree k - l basis and the roughness penalty N = S' M S
M = gram_matrix(space, 2)
N = penalty_matrix(space, 2)
print("M positive definite:", np.all(np.linalg.eigvalsh(M) > 0))
# N vanishes on lines: constants and linear functions carry no curvature
line = np.array([space.knots[j + 1:j + 4].mean() for j in range(space.dim)])  # Greville abscissae
print("N @ 1 ~ 0:", np.abs(N @ np.ones(space.dim)).max(), " N @ x ~ 0:", np.abs(N @ line).max())
