"""Arbitrary-precision reference values for the sgwigner test suite.

Writes CSV fixtures into crates/core/tests/data/. Two independent sources:

* precision_oracle.csv: the auxiliary functions F, G and C1..C6 evaluated
  literally (as printed, in tau variables) at 200 significant digits.
* coherence_oracle.csv / delta_oracle.csv: the off-diagonal coherence norm
  obtained from a separate derivation (characteristics of the Fourier
  transformed evolution equation), at 60 digits, and the 1/e decoherence
  times found by bisection on it.

Inputs that Rust will feed back (tau, z', p', t) are rounded to binary64
before evaluation so both sides see identical arguments.

Usage: python3 tools/oracle/generate_oracles.py
"""
import os
import sympy as sp
import mpmath as mp

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "..", "crates", "core", "tests", "data")

HBAR = "1.054571817e-34"
KB = "1.380649e-23"
MUB = "9.2740100783e-24"


def silver(gamma):
    return dict(m=mp.mpf("1.8e-25"), sigma=mp.mpf("1e-5"), eta=mp.mpf(1000),
                lam=mp.mpf(MUB), T=mp.mpf(300), gamma=mp.mpf(gamma),
                hbar=mp.mpf(HBAR), kB=mp.mpf(KB))


def D_of(p):
    return 2 * p["m"] * p["gamma"] * p["kB"] * p["T"]


def f64(x):
    return mp.mpf(float(x))


# ---------------------------------------------------------------- literal F, G, C
def literal(tau, zp, pp, p):
    e = mp.exp
    g, m, s, h = p["gamma"], p["m"], p["sigma"], p["hbar"]
    el = p["eta"] * p["lam"]
    D = D_of(p)
    T = tau
    F = (2 * g * D * s**2 * (g**2 * m**2 * (1 - e(-2 * T)) * zp**2
                             - 2 * g * m * pp * (1 - e(-T))**2 * zp
                             + pp**2 * (-(2 - e(-T))**2 + 2 * T + 1))
         + g**4 * m**2 * pp**2 * s**4
         + g**2 * h**2 * (pp * (1 - e(-T)) - g * m * e(-T) * zp)**2)
    G = (8 * D**2 * s**2 * (1 - e(-T)) * ((e(-T) + 1) * T - 2 * (1 - e(-T)))
         + 2 * g * D * (g**2 * m**2 * s**4 * (1 - e(-2 * T))
                        + (e(-2 * T) * (2 * T + 3) - 4 * e(-T) + 1) * h**2)
         + g**4 * m**2 * s**2 * e(-2 * T) * h**2)
    C1 = el**2 * (s**2 * (-2 * D * (2 * T**3 - 6 * T**2 + 6 * T + 3) + 6 * D * e(-2 * T)
                          + 24 * D * e(-T) * T - 3 * g**3 * m**2 * s**2 * T**2)
                  - 3 * g * (1 - T - e(-T))**2 * h**2) / (3 * g**5 * m**2 * s**2 * h**2)
    C2 = el * (g * h**2 * (e(-T) - e(-T) * T - e(-2 * T))
               - 2 * D * s**2 * (1 - 2 * e(-T) * T - e(-2 * T))) / (g**3 * h**2 * m * s**2)
    C3 = (s**2 * (2 * D * e(-2 * T) - 8 * D * e(-T) - D * (4 * T - 6) - g**3 * m**2 * s**2)
          - g * h**2 * (1 - e(-T))**2) / (4 * g**3 * m**2 * s**2)
    C4 = el * (g * (1 - e(-T)) * (1 - T - e(-T)) * h**2
               - s**2 * (2 * D * (T + e(-T) - 1)**2 + g**3 * m**2 * s**2 * T)) / (g**4 * m**2 * s**2 * h)
    C5 = (e(-T) - 1) * (g * e(-T) * h**2 + 2 * D * s**2 * (1 - e(-T))) / (2 * g**2 * m * s**2 * h)
    C6 = (g * e(-2 * T) * h**2 + 2 * D * s**2 * (1 - e(-2 * T))) / (4 * g * s**2 * h**2)
    return F, G, [C1, C2, C3, C4, C5, C6]


def widths(tau, p):
    e = mp.exp
    g, m, s, h = p["gamma"], p["m"], p["sigma"], p["hbar"]
    D = D_of(p)
    sz2 = 2 * D * (2 * tau + 4 * e(-tau) - e(-2 * tau) - 3) / (g**3 * m**2) \
        + h**2 * (1 - e(-tau))**2 / (g**2 * m**2 * s**2) + s**2
    sp2 = 2 * D * (1 - e(-2 * tau)) / g + h**2 * e(-2 * tau) / s**2
    return mp.sqrt(sz2), mp.sqrt(sp2)


def precision_oracle():
    mp.mp.dps = 200
    rows = []
    for gamma in ["1", "1e8"]:
        p = silver(gamma)
        for i in range(100):
            tau = f64(mp.mpf(10) ** (-8 + 9 * mp.mpf(i) / 99))
            sz, spw = widths(tau, p)
            points = [(f64(p["sigma"]), f64(p["hbar"] / p["sigma"])),
                      (f64(sz), f64(-spw)),
                      (f64(-sz / 2), f64(3 * spw / 10))]
            vals = []
            Fs = []
            for (zp, pp) in points:
                F, G, C = literal(tau, zp, pp, p)
                Fs.append((zp, pp, F))
            rows.append((gamma, tau, Fs, G, C))
    path = os.path.join(OUT, "precision_oracle.csv")
    with open(path, "w") as fh:
        fh.write("gamma,tau,z1,p1,F1,z2,p2,F2,z3,p3,F3,G,C1,C2,C3,C4,C5,C6\n")
        for gamma, tau, Fs, G, C in rows:
            cells = [gamma, mp.nstr(tau, 17)]
            for zp, pp, F in Fs:
                cells += [mp.nstr(zp, 17), mp.nstr(pp, 17), mp.nstr(F, 25)]
            cells.append(mp.nstr(G, 25))
            cells += [mp.nstr(c, 25) for c in C]
            fh.write(",".join(cells) + "\n")
    print("wrote", path, len(rows), "rows")


# ---------------------------------------------------------------- Fourier route
def fourier_forms():
    xi, ka, t, s, k = sp.symbols("xi kappa t s k", real=True)
    g, m, D, sig, hb = sp.symbols("gamma m D sigma hbar", positive=True)
    xis = xi + k * (t - s)
    kf = sp.Function("kf")
    sol = sp.dsolve(sp.Eq(kf(s).diff(s) - g * kf(s), -xis / m), kf(s), ics={kf(t): ka})
    kap = sol.rhs
    xi0 = xis.subs(s, 0)
    ka0 = kap.subs(s, 0)
    E = sp.expand(-sig**2 * xi0**2 / 4 - hb**2 * ka0**2 / (4 * sig**2)
                  - D * sp.integrate(sp.expand(kap**2), (s, 0, t)))
    u = [xi, ka]
    A = sp.Matrix(2, 2, lambda i, j: -sp.diff(E, u[i], u[j]))
    B = sp.Matrix([sp.diff(E, v).subs({xi: 0, ka: 0}) for v in u])
    C = E.subs({xi: 0, ka: 0})
    args = (t, k, g, m, D, sig, hb)
    return (sp.lambdify(args, A, "mpmath"), sp.lambdify(args, B, "mpmath"),
            sp.lambdify(args, C, "mpmath"))


def coherence_oracles():
    mp.mp.dps = 60
    fA, fB, fC = fourier_forms()

    def log_delta(t, p):
        k = 2 * p["lam"] * p["eta"] / p["hbar"]
        args = (t, k, p["gamma"], p["m"], D_of(p), p["sigma"], p["hbar"])
        A = mp.matrix(fA(*args))
        B = mp.matrix(fB(*args))
        return fC(*args) + (B.T * A**-1 * B)[0] / 2

    td_rows = []
    for gamma in ["1", "1e2", "1e3", "1e4", "1e6", "1e8", "1e10"]:
        p = silver(gamma)
        lo, hi = mp.log(mp.mpf("1e-12")), mp.log(mp.mpf("1e-3"))
        for _ in range(200):
            mid = (lo + hi) / 2
            if log_delta(mp.e**mid, p) > -1:
                lo = mid
            else:
                hi = mid
        td = mp.e**((lo + hi) / 2)
        td_rows.append((gamma, td))
        print("gamma", gamma, "t_d", mp.nstr(td, 15))
    path = os.path.join(OUT, "coherence_oracle.csv")
    with open(path, "w") as fh:
        fh.write("gamma,t_d\n")
        for gamma, td in td_rows:
            fh.write("%s,%s\n" % (gamma, mp.nstr(td, 20)))

    d_rows = []
    for gamma in ["1", "1e3", "1e6", "1e8", "1e10"]:
        p = silver(gamma)
        td = dict(td_rows)[gamma]
        for frac in ["0.05", "0.3", "0.7", "1", "1.4", "2"]:
            t = f64(td * mp.mpf(frac))
            d_rows.append((gamma, t, log_delta(t, p)))
    path = os.path.join(OUT, "delta_oracle.csv")
    with open(path, "w") as fh:
        fh.write("gamma,t,log_delta\n")
        for gamma, t, ld in d_rows:
            fh.write("%s,%s,%s\n" % (gamma, mp.nstr(t, 17), mp.nstr(ld, 20)))
    print("wrote", path, len(d_rows), "rows")


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    precision_oracle()
    coherence_oracles()
