"""Arbitrary-precision oracles for values frozen into the C++ tests.

Independent of the C++ code: mpmath matrix exponentials and quadrature of the
channel drift matrices. Run with `python3 frozen_values.py`.
"""
import mpmath as mp

mp.mp.dps = 40
hbar = mp.mpf("1.054571817e-34")
kB = mp.mpf("1.380649e-23")


def thermal(Omega, T):
    return 1 / mp.expm1(hbar * Omega / (kB * T))


def drift(g, Gamma, gamma, cd, stokes):
    i = mp.mpc(0, 1)
    return mp.matrix([[-(gamma + 2 * i * cd) / 4, -i * g / 2],
                      [(i if stokes else -i) * g, -(2 * i * cd + Gamma) / 2]])


def G(eta, *args):
    return mp.expm(drift(*args) * eta)


def kappa(g, Gamma, cd, eta):
    args = (g, Gamma, 0, cd, False)
    coherent = abs(G(eta, *args)[1, 1]) ** 2
    noise = Gamma * mp.quad(lambda u: abs(G(u, *args)[1, 1]) ** 2, [0, eta])
    return coherent + noise


def kappa_closed_form(g, Gamma, cd, eta):
    Ge = mp.mpc(Gamma, cd)
    ge = mp.sqrt(g * g - Ge * Ge / 8)
    return 1 - abs(mp.exp(-Ge * eta / 2) * (8 * ge ** 2 + Ge ** 2) / (8 * ge ** 2)
                   * mp.sin(ge * eta / mp.sqrt(2)) ** 2)


if __name__ == "__main__":
    print("n_th(2pi 7.7 GHz, 300 K) =", mp.nstr(thermal(2 * mp.pi * mp.mpf("7.7e9"), 300), 20))
    g = mp.mpf("8.3")
    eta = mp.pi / (mp.sqrt(2) * g)
    print("kappa quadrature (g=8.3, Gamma=1, Delta=0, eta=pi/(sqrt2 g)) =", mp.nstr(kappa(g, 1, 0, eta), 20))
    print("kappa closed form =", mp.nstr(kappa_closed_form(g, 1, 0, eta), 20))
    print("kappa quadrature cd=3 =", mp.nstr(kappa(g, 1, 3, eta), 20))
    print("kappa closed form cd=3 =", mp.nstr(kappa_closed_form(g, 1, 3, eta), 20))
    print("exp(-pi) =", mp.nstr(mp.exp(-mp.pi), 20))
