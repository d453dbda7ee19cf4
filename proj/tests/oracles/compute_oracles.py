"""Independent reference values for the unit and acceptance tests.

Uses mpmath (50 digits) and scipy dense-grid quadrature; shares no code with
the C++ implementation. Run: python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp
import numpy as np
from scipy import integrate, optimize, special

mp.mp.dps = 50

def show(name, v):
    print(f"{name:48s} {mp.nstr(mp.mpf(v), 20)}")

# Closed forms.
show("p(0), delta=1", 1 / mp.sqrt(2 * mp.pi))
show("q(0) bernoulli", mp.exp(-0.5) / mp.sqrt(2 * mp.pi))
show("thm1 general R=1 d=1", mp.mpf(6905) / 5 * mp.e**2 + 4989 * 9)
show("thm1 small R=1 d=1", 7803 * mp.e**2)
show("log thm2 R=1 d=1 n=1", mp.log(289) + 25)
show("log thm4 R=1 d=1", mp.log(2) + 24)
show("thm4 R=1 d=1", 2 * mp.e**24)
show("crossover r (20r^2-4r-1/4=0)", mp.findroot(lambda r: 2*r**2+2*r+mp.mpf(1)/8-12*r**2, 0.3))

# Two-atom measures at +-1 with weights (w_minus, w_plus), unit variance.
Phi = lambda x: mp.ncdf(x)
def G(y, wm=0.5, wp=0.5, d=1):
    s = mp.sqrt(d)
    return wm * Phi((y + 1) / s) + wp * Phi((y - 1) / s)
def Ginv(u, **kw):
    return mp.findroot(lambda y: G(y, **kw) - u, (-20, 20), solver="bisect", tol=1e-40)

show("bernoulli G^-1(0.9)", Ginv(mp.mpf("0.9")))
show("bernoulli T(3)", Ginv(Phi(3)))
show("bernoulli K(3)", (mp.log(mp.cosh(3)) + 1) / 3)
K = lambda x: (mp.log(mp.cosh(x)) + 1) / x
show("bernoulli K'(2) (mp.diff)", mp.diff(K, 2))
show("median 0.25/0.75, d=1", Ginv(mp.mpf("0.5"), wm=0.25, wp=0.75))

# Bobkov-Goetze functionals by scipy quadrature on a dense grid.
def bg(wm, wp, atoms=(-1.0, 1.0), d=1.0):
    s = np.sqrt(d)
    def q(t):
        return sum(w * np.exp(-(t - a) ** 2 / (2 * d)) / np.sqrt(2 * np.pi * d)
                   for w, a in zip((wm, wp), atoms))
    def Gf(y):
        return sum(w * special.ndtr((y - a) / s) for w, a in zip((wm, wp), atoms))
    def Gc(y):
        return sum(w * special.ndtr((a - y) / s) for w, a in zip((wm, wp), atoms))
    m = optimize.brentq(lambda y: Gf(y) - 0.5, -30, 30, xtol=1e-15)
    def side(x, left):
        tail = Gf(x) if left else Gc(x)
        lo, hi = (x, m) if left else (m, x)
        I = integrate.quad(lambda t: 1 / q(t), lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
        return tail * np.log(1 / tail) * I
    reach = 1 + 10 * s
    out = []
    for left in (True, False):
        xs = np.linspace(m - reach, m, 4001) if left else np.linspace(m, m + reach, 4001)
        xs = xs[:-1] if left else xs[1:]
        vals = np.array([side(x, left) for x in xs])
        k = int(np.argmax(vals))
        a, b = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
        r = optimize.minimize_scalar(lambda x: -side(x, left), bounds=(a, b),
                                     method="bounded", options={"xatol": 1e-12})
        out.append(max(vals[k], -r.fun))
    return m, out[0], out[1]

for name, wm, wp, atoms in [("point mass", 0.5, 0.5, (0.0, 0.0)),
                            ("bernoulli", 0.5, 0.5, (-1.0, 1.0)),
                            ("asym 0.25/0.75", 0.25, 0.75, (-1.0, 1.0))]:
    m, d0, d1 = bg(wm, wp, atoms)
    show(f"BG {name} median", m)
    show(f"BG {name} D0", d0)
    show(f"BG {name} D1", d1)

# Exponential-family ratio for the Bernoulli measure, closed form:
# Ent/Energy = 2 delta + 4 (lam tanh lam - log cosh lam)/lam^2.
def ratio(lam, d):
    lam = mp.mpf(lam)
    return 2 * d + 4 * (lam * mp.tanh(lam) - mp.log(mp.cosh(lam))) / lam**2
for d in (mp.mpf("0.25"), mp.mpf(1)):
    grid = [mp.mpf(0.05) * (4 / mp.sqrt(d) / mp.mpf(0.05)) ** (mp.mpf(i) / 63) for i in range(64)]
    best = max(grid, key=lambda l: ratio(l, d))
    show(f"bernoulli exp-family grid max ratio d={d}", ratio(best, d))
    show(f"  at lambda", best)

# log Phi deep in the lower tail
for z in (-40, -30, 10):
    show(f"log Phi({z})", mp.log(mp.ncdf(z)))
