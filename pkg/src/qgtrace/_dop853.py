"""Compiled adaptive integrator for the edge fundamental system.

Integrates y'' = (q(x) - lam) y on [0, l] for the pair of fundamental
solutions (c with c(0)=1, c'(0)=0 and s with s(0)=0, s'(0)=1) as one
4-component complex first-order system, using the explicit Dormand-Prince
8(5,3) Runge-Kutta pair with the stabilized 5th/3rd order error estimate.
Coefficients below are the standard DOP853 tableau (Hairer, Norsett,
Wanner, "Solving Ordinary Differential Equations I").

Potentials arrive packed as (code, data, xs, qs); see graphs.P_ZERO etc.
"""

import numpy as np
from numba import njit

_C = np.array([
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0,
])

_A = np.array([
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
     0.0, 0.0, 0.0],
    [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
     0.0, 0.0, 0.0],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0,
     0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242,
     0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596,
     -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328,
     -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726,
     27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0,
     0.0],
    [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843,
     21.230051448181193, 15.279233632882423, -33.28821096898486,
     -0.020331201708508627, 0.0, 0.0, 0.0],
    [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295,
     -8.149787010746927, -18.52006565999696, 22.739487099350505,
     2.4936055526796523, -3.0467644718982196, 0.0, 0.0],
    [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625,
     -17.9589318631188, 27.94888452941996, -2.8589982771350235,
     -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0],
])

_B = np.array([
    0.054293734116568765,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450312892752409,
    1.8915178993145003,
    -5.801203960010585,
    0.3111643669578199,
    -0.1521609496625161,
    0.20136540080403034,
    0.04471061572777259,
])

_E3 = np.array([
    -0.18980075407240762,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450312892752409,
    1.8915178993145003,
    -5.801203960010585,
    -0.4226823213237919,
    -0.1521609496625161,
    0.20136540080403034,
    0.02265179219836082,
])

_E5 = np.array([
    0.01312004499419488,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.2251564463762044,
    -0.4957589496572502,
    1.6643771824549864,
    -0.35032884874997366,
    0.3341791187130175,
    0.08192320648511571,
    -0.022355307863886294,
])

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_TOO_MANY_STEPS = 2

_MAX_STEPS = 20_000_000


@njit(cache=True)
def _q_at(code, data, xs, qs, x):
    if code == 0:
        return 0.0
    if code == 1:
        return data[0]
    if code == 2:
        acc = 0.0
        for i in range(len(data) - 1, -1, -1):
            acc = acc * x + data[i]
        return acc
    return np.interp(x, xs, qs)


@njit(cache=True)
def integrate_fundamental(code, data, xs, qs, ell, lam, rtol, atol):
    """March the four fundamental values across one edge.

    Returns (c, cprime, s, sprime, status, nsteps) evaluated at x = ell.
    """
    y = np.zeros(4, np.complex128)
    y[0] = 1.0 + 0.0j
    y[3] = 1.0 + 0.0j
    x = 0.0
    h = min(ell, 0.1 / (1.0 + np.sqrt(abs(lam))))
    K = np.zeros((12, 4), np.complex128)
    qv = _q_at(code, data, xs, qs, x)
    K[0, 0] = y[1]
    K[0, 1] = (qv - lam) * y[0]
    K[0, 2] = y[3]
    K[0, 3] = (qv - lam) * y[2]
    nsteps = 0
    while x < ell:
        if nsteps > _MAX_STEPS:
            return y[0], y[1], y[2], y[3], STATUS_TOO_MANY_STEPS, nsteps
        last = False
        if x + h >= ell:
            h = ell - x
            last = True
        for s in range(1, 12):
            y0 = y[0]
            y1 = y[1]
            y2 = y[2]
            y3 = y[3]
            for j in range(s):
                aj = _A[s, j]
                if aj != 0.0:
                    hj = h * aj
                    y0 += hj * K[j, 0]
                    y1 += hj * K[j, 1]
                    y2 += hj * K[j, 2]
                    y3 += hj * K[j, 3]
            qv = _q_at(code, data, xs, qs, x + _C[s] * h)
            K[s, 0] = y1
            K[s, 1] = (qv - lam) * y0
            K[s, 2] = y3
            K[s, 3] = (qv - lam) * y2
        new0 = y[0]
        new1 = y[1]
        new2 = y[2]
        new3 = y[3]
        for j in range(12):
            bj = _B[j]
            if bj != 0.0:
                hb = h * bj
                new0 += hb * K[j, 0]
                new1 += hb * K[j, 1]
                new2 += hb * K[j, 2]
                new3 += hb * K[j, 3]
        e50 = 0.0j
        e51 = 0.0j
        e52 = 0.0j
        e53 = 0.0j
        e30 = 0.0j
        e31 = 0.0j
        e32 = 0.0j
        e33 = 0.0j
        for j in range(12):
            w5 = _E5[j]
            if w5 != 0.0:
                e50 += w5 * K[j, 0]
                e51 += w5 * K[j, 1]
                e52 += w5 * K[j, 2]
                e53 += w5 * K[j, 3]
            w3 = _E3[j]
            if w3 != 0.0:
                e30 += w3 * K[j, 0]
                e31 += w3 * K[j, 1]
                e32 += w3 * K[j, 2]
                e33 += w3 * K[j, 3]
        sk0 = atol + rtol * max(abs(y[0]), abs(new0))
        sk1 = atol + rtol * max(abs(y[1]), abs(new1))
        sk2 = atol + rtol * max(abs(y[2]), abs(new2))
        sk3 = atol + rtol * max(abs(y[3]), abs(new3))
        n5 = (abs(e50) / sk0) ** 2 + (abs(e51) / sk1) ** 2 \
            + (abs(e52) / sk2) ** 2 + (abs(e53) / sk3) ** 2
        n3 = (abs(e30) / sk0) ** 2 + (abs(e31) / sk1) ** 2 \
            + (abs(e32) / sk2) ** 2 + (abs(e33) / sk3) ** 2
        if n5 == 0.0 and n3 == 0.0:
            err = 0.0
        else:
            err = abs(h) * n5 / np.sqrt((n5 + 0.01 * n3) * 4.0)
        if err <= 1.0:
            x += h
            y[0] = new0
            y[1] = new1
            y[2] = new2
            y[3] = new3
            qv = _q_at(code, data, xs, qs, x)
            K[0, 0] = y[1]
            K[0, 1] = (qv - lam) * y[0]
            K[0, 2] = y[3]
            K[0, 3] = (qv - lam) * y[2]
            nsteps += 1
            if last:
                break
            fac = 10.0 if err == 0.0 else 0.9 * err ** -0.125
        else:
            fac = max(0.2, 0.9 * err ** -0.125)
        h = h * min(10.0, max(0.2, fac))
        if h < 1e-15 * ell:
            return y[0], y[1], y[2], y[3], STATUS_UNDERFLOW, nsteps
    return y[0], y[1], y[2], y[3], STATUS_OK, nsteps
