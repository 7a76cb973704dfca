"""Freeze reference values for the unit tests.

Everything here is brute force at 40 digits: matrix exponentials of the
coupled-quadrature generators, the two-point boundary rearrangement, Wick
expansion of photon-number moments, and numerical derivatives. None of the
library's closed forms are used.

    python3 tools/golden/generate_golden.py > tests/golden_values.hpp
"""

import mpmath as mp

mp.mp.dps = 40

KAPPA = mp.mpf("0.5")
ALPHA = mp.mpf(10)
ANGLE_SUM = mp.mpf(1)

# (b, 2*kappa*l)
POINTS = [
    ("0", "1"),
    ("0.2", "3"),
    ("0.5", "2"),
    ("0.5", "3"),
    ("0.8", "6"),
    ("1.5", "7"),
    ("2", "5"),
    ("2", "10"),
]


def generators(g, k):
    return {
        "qips": mp.matrix([[g, k], [-k, 0]]),
        "piqs": mp.matrix([[-g, k], [-k, 0]]),
        "pips90": mp.matrix([[-g, -k], [k, 0]]),
    }


def boundary_map(G, l):
    F = mp.expm(G * l)
    m11 = 1 / F[0, 0]
    m12 = -F[0, 1] / F[0, 0]
    m21 = F[1, 0] / F[0, 0]
    m22 = F[1, 1] - F[1, 0] * F[0, 1] / F[0, 0]
    return mp.matrix([[m11, m12], [m21, m22]])


def output_state(g, k, l, alpha):
    """Mean and covariance over (q_i(0), p_i(0), q_s(l), p_s(l))."""
    gens = generators(g, k)
    a = boundary_map(gens["qips"], l)  # (q_i(0), p_s(l)) <- (q_i(l), p_s(0))
    p = boundary_map(gens["piqs"], l)  # (p_i(0), q_s(l)) <- (p_i(l), q_s(0))
    V = mp.zeros(4, 4)
    ca = a * a.T / 4
    cp = p * p.T / 4
    V[0, 0], V[3, 3], V[0, 3], V[3, 0] = ca[0, 0], ca[1, 1], ca[0, 1], ca[1, 0]
    V[1, 1], V[2, 2], V[1, 2], V[2, 1] = cp[0, 0], cp[1, 1], cp[0, 1], cp[1, 0]
    mu = mp.matrix(4, 1)
    mu[0] = (a[0, 0] + a[0, 1]) * alpha
    mu[3] = (a[1, 0] + a[1, 1]) * alpha
    mu[1] = (p[0, 0] + p[0, 1]) * alpha
    mu[2] = (p[1, 0] + p[1, 1]) * alpha
    return mu, V, a, p


def photon_moments(V, mu):
    G = mp.matrix(4, 4)
    for r in range(4):
        for c in range(4):
            G[r, c] = mp.mpc(V[r, c])
    for q, pp in ((0, 1), (2, 3)):
        G[q, pp] += mp.mpc(0, 0.25)
        G[pp, q] -= mp.mpc(0, 0.25)

    def m2(x, y):
        return mu[x] * mu[y] + G[x, y]

    def m4(x, y, z, w):
        m = [mu[x], mu[y], mu[z], mu[w]]
        idx = [x, y, z, w]
        s = m[0] * m[1] * m[2] * m[3]
        for i in range(4):
            for j in range(i + 1, 4):
                rest = [t for t in range(4) if t not in (i, j)]
                s += G[idx[i], idx[j]] * m[rest[0]] * m[rest[1]]
        s += G[x, y] * G[z, w] + G[x, z] * G[y, w] + G[x, w] * G[y, z]
        return s

    def n1(q, pp):
        return m2(q, q) + m2(pp, pp) - mp.mpf(1) / 2

    def n2(q1, p1, q2, p2):
        s = 0
        for a in (q1, p1):
            for b in (q2, p2):
                s += m4(a, a, b, b)
        s -= (n1(q1, p1) + n1(q2, p2)) / 2 + mp.mpf(1) / 4
        return s

    ni, ns = n1(0, 1), n1(2, 3)
    vi = n2(0, 1, 0, 1) - ni * ni
    vs = n2(2, 3, 2, 3) - ns * ns
    cv = n2(0, 1, 2, 3) - ni * ns
    return mp.re(vi), mp.re(vs), mp.re(cv), mp.re(ni), mp.re(ns)


def eta_of(V):
    qi, pi, qs, ps = V[0, 0], V[1, 1], V[2, 2], V[3, 3]
    c1, c2 = V[0, 3], V[1, 2]
    S = qi * pi + qs * ps + 2 * c1 * c2
    D = mp.det(V)
    return mp.sqrt((S - mp.sqrt(S * S - 4 * D)) / 2)


def quad_var(V, w):
    return sum(w[i] * V[i, j] * w[j] for i in range(4) for j in range(4))


def epr_values(V, s):
    th, ph = s, mp.mpf(0)
    c, sn, cp, sp = mp.cos(th), mp.sin(th), mp.cos(ph), mp.sin(ph)
    x1 = [c, sn, 0, 0]
    x2 = [-sn, c, 0, 0]
    y1 = [0, 0, cp, sp]
    y2 = [0, 0, -sp, cp]
    d = lambda u, v, sg: [u[i] + sg * v[i] for i in range(4)]
    v1m = quad_var(V, d(x1, y1, -1))
    v2p = quad_var(V, d(x2, y2, 1))
    v1p = quad_var(V, d(x1, y1, 1))
    v2m = quad_var(V, d(x2, y2, -1))
    return v1m, v2p, v1p, v2m, v1m + v2p, v1p + v2m


def sensing_basis(mu, V):
    perm = [0, 2, 1, 3]  # (q_i(0), q_s(l), p_i(0), p_s(l))
    m = mp.matrix(4, 1)
    W = mp.zeros(4, 4)
    for i in range(4):
        m[i] = mu[perm[i]]
        for j in range(4):
            W[i, j] = V[perm[i], perm[j]]
    return m, W


def qfi(g, l, alpha):
    def state(k):
        mu, V, _, _ = output_state(g, k, l, alpha)
        return sensing_basis(mu, V)

    mu, V = state(KAPPA)
    dmu = mp.matrix(4, 1)
    dV = mp.zeros(4, 4)
    for i in range(4):
        dmu[i] = mp.diff(lambda k: state(k)[0][i], KAPPA)
        for j in range(4):
            dV[i, j] = mp.diff(lambda k: state(k)[1][i, j], KAPPA)
    Vi = V ** -1
    T = Vi * dV * Vi * dV
    trace = sum(T[i, i] for i in range(4)) / 2
    mean = (dmu.T * Vi * dmu)[0, 0]
    return trace + mean, trace, mean


def fmt(x):
    return mp.nstr(mp.re(x), 20, min_fixed=-3, max_fixed=3)


def main():
    rows = []
    for bs, xs in POINTS:
        b = mp.mpf(bs)
        g = 2 * KAPPA * b
        l = mp.mpf(xs) / (2 * KAPPA)
        mu, V, a, p = output_state(g, KAPPA, l, ALPHA)
        p90 = boundary_map(generators(g, KAPPA)["pips90"], l)
        vi, vs, cv, ni, ns = photon_moments(V, mp.matrix(4, 1))
        nf = (vi + vs - 2 * cv) / (ni + ns)
        eta = eta_of(V)
        en = max(mp.mpf(0), -mp.log(4 * eta))
        v1m, v2p, v1p, v2m, et1, et2 = epr_values(V, ANGLE_SUM)
        c12 = abs(V[0, 3]) / mp.sqrt(V[0, 0] * V[3, 3])

        def mean_k(i):
            return lambda k: output_state(g, k, l, ALPHA)[0][i]

        chi = [mp.diff(mean_k(i), KAPPA) for i in range(4)]
        f_total, f_trace, f_mean = qfi(g, l, ALPHA)
        row = {
            "b": b, "two_kappa_l": mp.mpf(xs),
            "qips": [a[0, 0], a[0, 1], a[1, 0], a[1, 1]],
            "piqs": [p[0, 0], p[0, 1], p[1, 0], p[1, 1]],
            "pips90": [p90[0, 0], p90[0, 1], p90[1, 0], p90[1, 1]],
            "var": [V[0, 0], V[3, 3], V[2, 2], V[1, 1]],  # qi0, psl, qsl, pi0
            "cross": [V[0, 3], V[1, 2]],
            "photon": [vi, vs, cv],
            "nf": nf, "eta": eta, "log_neg": en,
            "epr": [v1m, v2p, v1p, v2m, et1, et2],
            "c12": c12,
            "mean": [mu[0], mu[1], mu[2], mu[3]],  # qi0, pi0, qsl, psl
            "chi": chi,
            "qfi": [f_total, f_trace, f_mean],
        }
        rows.append(row)

    out = []
    out.append("// Generated by tools/golden/generate_golden.py; do not edit.")
    out.append("#pragma once")
    out.append("#include <array>")
    out.append("")
    out.append("namespace golden {")
    out.append("")
    out.append("inline constexpr double kappa = 0.5;")
    out.append("inline constexpr double alpha = 10.0;")
    out.append("inline constexpr double angle_sum = 1.0;")
    out.append("")
    out.append("struct Point {")
    out.append("    double b, two_kappa_l;")
    out.append("    std::array<double, 4> qips, piqs, pips90;")
    out.append("    std::array<double, 4> var;  // qi0, psl, qsl, pi0")
    out.append("    std::array<double, 2> cross;  // <q_i(0) p_s(l)>, <p_i(0) q_s(l)>")
    out.append("    std::array<double, 3> photon;  // var_ni, var_ns, covar")
    out.append("    double nf, eta, log_neg;")
    out.append("    std::array<double, 6> epr;  // v(X1-Y1), v(X2+Y2), v(X1+Y1), v(X2-Y2), et1, et2")
    out.append("    double c12;")
    out.append("    std::array<double, 4> mean;  // qi0, pi0, qsl, psl")
    out.append("    std::array<double, 4> chi;")
    out.append("    std::array<double, 3> qfi;  // total, trace term, mean term")
    out.append("};")
    out.append("")
    out.append(f"inline constexpr std::array<Point, {len(rows)}> points{{{{")

    def arr(v):
        return "{" + ", ".join(fmt(x) for x in v) + "}"

    for r in rows:
        out.append("    Point{")
        out.append(f"        {fmt(r['b'])}, {fmt(r['two_kappa_l'])},")
        out.append(f"        {arr(r['qips'])},")
        out.append(f"        {arr(r['piqs'])},")
        out.append(f"        {arr(r['pips90'])},")
        out.append(f"        {arr(r['var'])},")
        out.append(f"        {arr(r['cross'])},")
        out.append(f"        {arr(r['photon'])},")
        out.append(f"        {fmt(r['nf'])}, {fmt(r['eta'])}, {fmt(r['log_neg'])},")
        out.append(f"        {arr(r['epr'])},")
        out.append(f"        {fmt(r['c12'])},")
        out.append(f"        {arr(r['mean'])},")
        out.append(f"        {arr(r['chi'])},")
        out.append(f"        {arr(r['qfi'])},")
        out.append("    },")
    out.append("}};")
    out.append("")
    out.append("}  // namespace golden")
    print("\n".join(out))


if __name__ == "__main__":
    main()
