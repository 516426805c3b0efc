"""Regenerate tests/data/reference_constants.json at 40-digit precision.

Independent of the package: E1/E2 come from the solved boundary conditions of
the second-order centre-manifold equations, and g21 is read off by expanding
the nonlinearity as a polynomial in (z, zbar) instead of using the expanded
closed form.

    python scripts/reference_constants.py
"""

import json
from collections import defaultdict
from pathlib import Path

from mpmath import acos, conj, exp, mp, mpc, mpf, pi, sqrt

mp.dps = 40
I = mpc(0, 1)
OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "reference_constants.json"


class Poly:
    """Polynomial in z, zbar truncated at total degree 3."""

    def __init__(self, terms=None):
        self.t = defaultdict(lambda: mpc(0), terms or {})

    def __add__(self, other):
        out = Poly(dict(self.t))
        for k, v in other.t.items():
            out.t[k] += v
        return out

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly({k: v * other for k, v in self.t.items()})
        out = Poly()
        for (a, b), v in self.t.items():
            for (c, d), w in other.t.items():
                if a + b + c + d <= 3:
                    out.t[(a + c, b + d)] += v * w
        return out

    __rmul__ = __mul__


def reference(k, c, w, h):
    k, c, w, h = mpf(k), mpf(c), mpf(w), mpf(h)
    p = w / c
    x1, x2, x3 = -w / p**2, 2 * w / p**3, -6 * w / p**4
    b = k * p * x1
    b2 = b - h
    b4, b5, b8, b9 = k * x1 / 2, k * p * x2 / 2, k * x2 / 6, k * p * x3 / 6
    om = sqrt(b2**2 - h**2)
    tau = acos(-h / b2) / om
    ep, em = exp(I * om * tau), exp(-I * om * tau)

    B = 1 / (1 + b2 * tau * ep)
    Bc = conj(B)
    g20 = 2 * Bc * (b4 * em + b5 * em**2)
    g11 = Bc * (b4 * (ep + em) + 2 * b5)
    g02 = 2 * Bc * (b4 * ep + b5 * ep**2)

    # W20' = 2iw W20 + g20 q + conj(g02) qbar on [-tau, 0) with the boundary
    # condition at 0; the homogeneous part's coefficients solve directly.
    E1 = 2 * (b4 * em + b5 * em**2) / (2 * I * om - h - b2 * em**2)
    E2 = -(b4 * (ep + em) + 2 * b5) / (h + b2)

    def W20(th):
        return (
            I * g20 / om * exp(I * om * th)
            + I * conj(g02) / (3 * om) * exp(-I * om * th)
            + E1 * exp(2 * I * om * th)
        )

    def W11(th):
        return -I * g11 / om * exp(I * om * th) + I * conj(g11) / om * exp(-I * om * th) + E2

    def u(th, q):
        W02 = conj(W20(th))
        return Poly({(1, 0): q, (0, 1): conj(q), (2, 0): W20(th) / 2, (1, 1): W11(th), (0, 2): W02 / 2})

    u0, ut = u(0, mpc(1)), u(-tau, em)
    F = b4 * (u0 * ut) + b5 * (ut * ut) + b8 * (u0 * ut * ut) + b9 * (ut * ut * ut)
    g21 = 2 * Bc * F.t[(2, 1)]

    C1 = I / (2 * om) * (g20 * g11 - 2 * abs(g11) ** 2 - abs(g02) ** 2 / 3) + g21 / 2
    # implicit differentiation of the characteristic equation at lambda = i w
    lam = I * om
    slope = -b2 * lam * exp(-lam * tau) / (1 + b2 * tau * exp(-lam * tau))
    mu2 = -C1.real / slope.real
    T2 = -(C1.imag + mu2 * slope.imag) / om
    beta2 = 2 * C1.real
    return {
        "p_star": p, "b": b, "b2": b2, "b4": b4, "b5": b5, "b8": b8, "b9": b9,
        "omega0": om, "tau0": tau, "slope": slope, "B": B,
        "g20": g20, "g11": g11, "g02": g02, "E1": E1, "E2": E2, "g21": g21, "C1": C1,
        "mu2": mu2, "T2": T2, "beta2": beta2,
    }


def encode(v):
    v = mpc(v)
    return [float(v.real), float(v.imag)] if v.imag != 0 else float(v.real)


def main():
    cases = {}
    for h in ("0", "-0.1", "-0.15"):
        cases[h] = {k: encode(v) for k, v in reference("0.01", "50", "1", h).items()}
    extra = {
        "tau0_h_-0.2": float(acos(mpf(-2) / 3) / sqrt(mpf("0.05"))),
        "tau0_literal_k": float(pi / 10),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"reference": cases, "extra": extra}, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")
    for h, d in cases.items():
        print(f"h={h}: mu2={d['mu2']:.6g} T2={d['T2']:.6g} beta2={d['beta2']:.6g}")


if __name__ == "__main__":
    main()
