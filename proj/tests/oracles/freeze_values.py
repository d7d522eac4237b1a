"""Reference values frozen into the C++ tests.

Independent of the library: closed forms are evaluated with mpmath, and the
dynamics use a state-vector (Schroedinger) RK4 integrator written with numpy,
vectorized over whole grids. Run from the repository root:

    python3 tests/oracles/freeze_values.py
"""
import math

import mpmath as mp
import numpy as np

HBAR = 0.6582119569  # meV ps
mp.mp.dps = 40


def sigma(fwhm):
    return mp.mpf(fwhm) / mp.sqrt(4 * mp.log(2))


def closed_forms():
    s10 = sigma(10)
    print("sigma(10)          =", mp.nstr(s10, 20))
    print("sigma(5)           =", mp.nstr(sigma(5), 20))
    print("peak(area pi, 10)  =", mp.nstr(mp.pi / mp.sqrt(2 * mp.pi * s10**2), 20))
    # |Omega(0)| at hbar*D1=-0.7, a1=8pi, hbar*D2=-2.05, ratio 1.1, zero delay and phase.
    peak = (8 + 8 * mp.mpf("1.1")) * mp.pi / mp.sqrt(2 * mp.pi * s10**2)
    print("|Omega(0)| swing-up   =", mp.nstr(peak, 20))
    # Field at t = 1.3 ps for the same pulses, both components.
    t = mp.mpf("1.3")
    env = lambda a: a * mp.pi / mp.sqrt(2 * mp.pi * s10**2) * mp.exp(-t**2 / (2 * s10**2))
    w = (mp.mpf("-2.05") - mp.mpf("-0.7")) / mp.mpf(HBAR)
    val = env(8) + env(mp.mpf("8.8")) * mp.expjpi(-w * t / mp.pi)
    print("Omega(1.3) swing-up   =", mp.nstr(val.real, 20), mp.nstr(val.imag, 20))


def grid_fidelity(d1, a1, d2, ratio, fwhm=10.0, tau=0.0, phi=0.0, dt=0.001, t0=-40.0, t1=40.0):
    """Final excited population, vectorized over broadcastable d2/ratio arrays."""
    d2 = np.asarray(d2, dtype=float)
    ratio = np.asarray(ratio, dtype=float)
    d2, ratio = np.broadcast_arrays(d2, ratio)
    s = fwhm / math.sqrt(4 * math.log(2))
    norm = 1.0 / math.sqrt(2 * math.pi * s * s)
    a1r = a1 * math.pi
    a2r = ratio * a1r
    w = (d2 - d1) / HBAR
    e_diag = -d1 / HBAR

    def omega(t):
        e1 = a1r * norm * math.exp(-t * t / (2 * s * s))
        e2 = a2r * norm * math.exp(-(t - tau) ** 2 / (2 * s * s))
        return e1 + e2 * np.exp(-1j * w * t + 1j * phi)

    def rhs(t, c0, c1):
        om = omega(t)
        return -0.5j * np.conj(om) * c1, -1j * (0.5 * om * c0 + e_diag * c1)

    n = int(round((t1 - t0) / dt))
    h = (t1 - t0) / n
    c0 = np.ones(d2.shape, complex)
    c1 = np.zeros(d2.shape, complex)
    for k in range(n):
        t = t0 + k * h
        k1 = rhs(t, c0, c1)
        k2 = rhs(t + h / 2, c0 + h / 2 * k1[0], c1 + h / 2 * k1[1])
        k3 = rhs(t + h / 2, c0 + h / 2 * k2[0], c1 + h / 2 * k2[1])
        k4 = rhs(t + h, c0 + h * k3[0], c1 + h * k3[1])
        c0 = c0 + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        c1 = c1 + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return np.abs(c1) ** 2


def points():
    for dt in (0.001, 0.0005):
        single = grid_fidelity(-0.7, 8, -0.7, 0.0, dt=dt)
        delayed = grid_fidelity(-0.7, 8, -2.05, 1.1, tau=10.0, dt=dt)
        opt = grid_fidelity(-0.7, 8, -2.05, 1.1, dt=dt)
        print(f"dt={dt}: single red 8pi = {float(single):.15e}  tau10 = {float(delayed):.15f}  "
              f"swing-up = {float(opt):.15f}")


def maps():
    d2 = np.linspace(-3.0, -0.92, 64)
    r = np.linspace(0.44, 1.81, 64)
    D2, R = np.meshgrid(d2, r)
    for label, a1, tau in (("a1=8pi tau=0", 8, 0.0), ("a1=2pi tau=0", 2, 0.0),
                           ("a1=5pi tau=0", 5, 0.0), ("a1=8pi tau=2", 8, 2.0),
                           ("a1=8pi tau=4", 8, 4.0), ("a1=8pi tau=10", 8, 10.0)):
        f = grid_fidelity(-0.7, a1, D2, R, tau=tau, dt=0.002)
        i, j = np.unravel_index(np.argmax(f), f.shape)
        print(f"map {label}: max {f[i, j]:.12f} at detuning {d2[j]:.6f} ratio {r[i]:.6f}", flush=True)


if __name__ == "__main__":
    closed_forms()
    points()
    maps()
