"""Tour of the two line-search oracles.

The adaptive oracle takes one probe step per call and rescales sigma by
a fixed factor pair chosen so that, at the tuned success probability,
the expected log change of sigma is zero. The exact oracle minimizes the
objective along the ray, in closed form for the diagonal quadratics and
by bracketing plus golden-section for anything else.
"""

import math

import numpy as np

from randpursuit import Objective, RngStream, ass_factors, ass_step, exact_ls, line_search, LineSearchMode


def main() -> None:
    p = 0.27
    up, down = ass_factors(p)
    print(f"success factor   exp(1/3)        = {up:.12f}")
    print(f"failure factor   exp(-p/3(1-p))  = {down:.12f}")
    drift = p * math.log(up) + (1.0 - p) * math.log(down)
    print(f"expected log-sigma drift at p={p}: {drift:.3e}  (zero by construction)")
    print()

    f = Objective("fexp", 4, 100.0)
    x = np.ones(4)
    rng = RngStream.from_seed(42)

    print("adaptive oracle, three calls from x = ones(4), sigma = 1:")
    sigma, fx = 1.0, f.value(x)
    for k in range(3):
        u = rng.generator.standard_normal(4)
        st = ass_step(f, x, u, sigma, p, fx=fx)
        tag = "accept" if st.accepted else "reject"
        print(f"  call {k}: {tag}  f {fx:10.4f} -> {st.fval:10.4f}  "
              f"sigma {sigma:.4f} -> {st.sigma_next:.4f}  evals +{st.evals}")
        x, fx, sigma = st.x_next, st.fval, st.sigma_next
    print()

    f2 = Objective("fexp", 2, 4.0)
    x2 = np.array([1.0, 1.0])
    u2 = np.array([1.0, 0.0])
    st = exact_ls(f2, x2, u2)
    resid = float(f2.gradient(st.x_next) @ u2)
    print("exact oracle on the 2-D quadratic with coefficients (1, 4):")
    print(f"  from x = {x2}, direction {u2}: step {st.sigma_taken:+.6f}, "
          f"new point {st.x_next}, f = {st.fval}")
    print(f"  first-order residual grad(x+) . u = {resid:.3e}")
    print()

    # non-quadratic callable: bracketing + golden section on a quartic ray
    g = lambda z: float((z[0] - 2.0) ** 4 + z[1] ** 2)
    st = line_search(LineSearchMode("exact"), g, np.zeros(2),
                     np.array([1.0, 0.0]), 1.0)
    print("generic callable (z0 - 2)^4 + z1^2 along e0 from the origin:")
    print(f"  step {st.sigma_taken:.8f} (exact minimizer at 2), f = {st.fval:.3e}, "
          f"evals {st.evals}")


if __name__ == "__main__":
    main()
