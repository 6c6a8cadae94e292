#!/usr/bin/env python3
"""Regenerates the extended-precision reference values frozen into the
Rust test suites (mpmath, 60 significant digits).

Two pitfalls this script avoids:

* mpmath's tanh-sinh quadrature targets *absolute* error around 10^-dps,
  so integrating a raw density whose values sit at 1e-140 returns junk at
  ~1e-8 relative; every integrand here is normalized to O(1) by factoring
  out its value at the left endpoint.
* For lambda = +-1 the survival has closed forms, S(x, 1) =
  Phibar(x)(1 + Phi(x)) and S(x, -1) = Phibar(x)^2, used both as exact
  fixtures and as cross-checks of the generic path.

Run: python3 tools/fixtures.py
"""
from mpmath import mp, mpf, quad, exp, log, sqrt, pi, erfc, findroot

mp.dps = 60
SQRT2 = sqrt(2)
LN10 = log(10)


def phi(x):
    return exp(-x * x / 2) / sqrt(2 * pi)


def norm_cdf(x):
    return erfc(-x / SQRT2) / 2


def norm_sf(x):
    return erfc(x / SQRT2) / 2


def log_density(t, lam):
    return log(2) + (-t * t / 2 - log(2 * pi) / 2) + log(norm_cdf(lam * t))


def log_sf(x, lam):
    """log(1 - F_lambda(x)) for x >= 0."""
    x, lam = mpf(x), mpf(lam)
    if lam == 1:
        return log(norm_sf(x)) + log(1 + norm_cdf(x))
    if lam == -1:
        return 2 * log(norm_sf(x))
    c = (1 + lam * lam) if lam < 0 else mpf(1)
    scale = max(c * x, mpf(1))
    anchor = log_density(x, lam)
    if x < 2:
        anchor = max(anchor, log_density(x + mpf('0.5'), lam), log_density(x + 1, lam))
    pts = [mpf(4 * k) for k in range(31)] + [130, 150, 175, 205, 245, 300, 380, 500, 660]
    value = quad(lambda u: exp(log_density(x + u / scale, lam) - anchor), pts) / scale
    return anchor + log(value)


def solve_quantile(log_n, lam):
    guess = sqrt(2 * log_n / (2 if lam < 0 else 1))
    return findroot(lambda b: log_sf(b, lam) + log_n, guess)


def main():
    print("# log-survival fixtures (lambda, x, log S)")
    for lam, x in (('0.25', 10), ('0.25', 40), ('0.5', 30), ('1', 10), ('1', 25), ('1', 40),
                   ('2', 25), ('5', 15), ('8', 40),
                   ('-0.25', 20), ('-0.25', 40), ('-0.5', 30),
                   ('-1', 6), ('-1', 12), ('-1', 24), ('-1', 30), ('-1', 40),
                   ('-2', 12), ('-2', 25), ('-5', 10), ('-8', 8), ('-8', 40)):
        print(f"({lam}, {x}, {mp.nstr(log_sf(x, mpf(lam)), 21)})")

    print()
    print("# point values")
    print("pdf(1,1)            =", mp.nstr(2 * phi(1) * norm_cdf(1), 21))
    print("normal ratio at 1   =", mp.nstr(norm_sf(1) / phi(1), 21))
    print("sn upper (1,2)      =", mp.nstr(mpf('0.5') / (1 - phi(2) / 2), 21))
    print("sn ratio  (1,2)     =", mp.nstr(exp(log_sf(2, 1)) / (2 * phi(2) * norm_cdf(2)), 21))
    print("sn ratio  (-1,3)    =", mp.nstr(exp(log_sf(3, -1)) / (2 * phi(3) * norm_cdf(-3)), 21))
    print("c_limit (lam>0)     =", mp.nstr(sqrt(2 / (pi * exp(1))), 21))
    print("c_limit (lam=-1)    =", mp.nstr(exp(-mpf(1)) / (2 * pi), 21))
    print("(1-1e-6)^1e6        =", mp.nstr((1 - mpf(10) ** -6) ** (10 ** 6), 21))
    print("Lambda(1)           =", mp.nstr(exp(-exp(-mpf(1))), 21))
    print("kappa(1, +)         =", mp.nstr(mpf(3) / 2 * exp(-1), 21))
    print("kappa(1, -1)        =", mp.nstr(mpf(5) / 4 * exp(-1), 21))
    print("omega(1, +)         =", mp.nstr(-mpf(29) / 8 * exp(-1), 21))
    print("omega(1, -1)        =", mp.nstr(-mpf(97) / 32 * exp(-1), 21))
    sol = lambda k, w: (w + k * k / 2) * exp(-exp(-mpf(1)))
    print("second order (1,1)  =", mp.nstr(sol(mpf(3) / 2 * exp(-1), -mpf(29) / 8 * exp(-1)), 21))
    print("second order (1,-1) =", mp.nstr(sol(mpf(5) / 4 * exp(-1), -mpf(97) / 32 * exp(-1)), 21))
    ln6 = 6 * LN10
    print("leading(1e6,0,+)    =", mp.nstr(exp(-1) * log(ln6) ** 2 / (16 * ln6), 21))

    print()
    print("# norming constants at n = 1e6")
    print("alpha(+1) =", mp.nstr((2 * ln6) ** mpf('-0.5'), 21))
    print("beta(+1)  =", mp.nstr(sqrt(2 * ln6) - (log(ln6) + log(pi)) / (2 * sqrt(2 * ln6)), 21))
    print("alpha(-1) =", mp.nstr((2 * (2 * ln6)) ** mpf('-0.5'), 21))
    print("beta(-1)  =", mp.nstr(sqrt(ln6) - (log(ln6) + log(2 * pi)) / (SQRT2 * sqrt(2 * ln6)), 21))
    print("leadbetter beta =", mp.nstr(sqrt(2 * ln6) - (log(ln6) + log(4 * pi)) / (2 * sqrt(2 * ln6)), 21))
    print("hall b    =", mp.nstr(findroot(lambda b: log(2 * pi) + 2 * log(b) + b * b - 2 * ln6, 5), 21))
    print("nair b    =", mp.nstr(findroot(lambda b: log(norm_sf(b)) + ln6, 4.7), 21))

    print()
    print("# quantile locations")
    for lam in (1, -1):
        for k in (2, 100):
            print(f"b(lam={lam}, n=1e{k}) =", mp.nstr(solve_quantile(k * LN10, lam), 21))


if __name__ == "__main__":
    main()
