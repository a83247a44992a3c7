"""Independent high-precision reference values for the C++ test suite.

Run: python3 tests/oracles/reference_values.py
Needs mpmath. The silicon table is read from include/spdc/material_data.hpp
so both sides use the same tabulated data; everything else is recomputed
here from scratch (50 digits, explicit matrix inverse, Wick contraction for
the pair moments).
"""

import pathlib
import re

import mpmath as mp

mp.mp.dps = 50
ROOT = pathlib.Path(__file__).resolve().parents[2]

LN_E = [(mp.mpf("2.9804"), mp.mpf("0.02047")), (mp.mpf("0.5981"), mp.mpf("0.0666")),
        (mp.mpf("8.9543"), mp.mpf("416.08"))]


def n_ln(lam_nm):
    l2 = (mp.mpf(lam_nm) / 1000) ** 2
    return mp.sqrt(1 + sum(b * l2 / (l2 - c) for b, c in LN_E))


def silicon_table():
    text = (ROOT / "include/spdc/material_data.hpp").read_text()
    block = text.split("silicon_index")[1].split("}};")[0]
    return [(mp.mpf(a), mp.mpf(b)) for a, b in re.findall(r"\{([\d.]+),\s*([\d.]+)\}", block)]


SI = silicon_table()


def n_si(lam_nm):
    lam = mp.mpf(lam_nm)
    for (x0, y0), (x1, y1) in zip(SI, SI[1:]):
        if x0 <= lam <= x1:
            return y0 + (lam - x0) / (x1 - x0) * (y1 - y0)
    raise ValueError(lam_nm)


def k_components(lam, n, theta):
    k = 2 * mp.pi * n / lam
    return k * mp.cos(theta), k * mp.sin(theta)


def interface_s(n_in, n_out, cos_in):
    """Internal reflection and flux-normalised transmission, s polarisation."""
    sin2 = (n_in / n_out) ** 2 * (1 - cos_in ** 2)
    cos_out = mp.sqrt(1 - sin2)
    if mp.im(cos_out) < 0:
        cos_out = -cos_out
    a, b = n_in * cos_in, n_out * cos_out
    r = (a - b) / (a + b)
    t = 2 * a / (a + b)
    flux = mp.re(b) / mp.re(a)
    return r, (t * mp.sqrt(flux) if flux > 0 else mp.mpc(0))


def coeffs(lam, theta, n_sub=None):
    nf = n_ln(lam)
    n3 = n_si(lam) if n_sub is None else n_sub
    c = mp.cos(theta)
    r1, t1 = interface_s(nf, mp.mpf(1), c)
    r2, t2 = interface_s(nf, n3, c)
    return dict(t1=t1, r1=r1, t2=t2, r2=r2)


def block(beta, delta):
    i = mp.mpc(0, 1)
    g = mp.sqrt(mp.mpc(abs(beta) ** 2 - delta ** 2 / 4))
    sc = mp.sinh(g) / g
    ch = mp.cosh(g)
    return mp.matrix([[mp.exp(-i * delta / 2) * (ch + i * delta / 2 * sc), -i * beta * sc],
                      [i * mp.conj(beta) * sc, mp.exp(i * delta / 2) * (ch - i * delta / 2 * sc)]])


def wick_pair(U, s, q):
    """<b_s^dag b_q^dag b_q b_s> in the input vacuum.

    Input vector A = (a1, a2^dag, a3, a4^dag); b_s = row s of U A (signal
    annihilator), row q of U A is the idler creator b_q^dag.
    Operators are dicts {(mode, dagger): coefficient}.
    """
    dag_in = {0: False, 1: True, 2: False, 3: True}

    def row(r):
        return {(k, dag_in[k]): U[r, k] for k in range(4)}

    def adjoint(op):
        return {(m, not d): mp.conj(c) for (m, d), c in op.items()}

    def two(x, y):
        return sum(cx * cy for (mx, dx), cx in x.items() for (my, dy), cy in y.items()
                   if mx == my and not dx and dy)

    bs = row(s - 1)
    bq_dag = row(q - 1)
    A, B, C, D = adjoint(bs), bq_dag, adjoint(bq_dag), bs
    return mp.re(two(A, B) * two(C, D) + two(A, C) * two(B, D) + two(A, D) * two(B, C))


def pixel(lam_s, theta_s, beta_plus, L=mp.mpf(10150), lam_p=mp.mpf(788), n_sub=None):
    lam_s = mp.mpf(lam_s)
    theta_s = mp.mpf(theta_s)
    lam_i = lam_p * lam_s / (lam_s - lam_p)
    ks_par, ks_perp = k_components(lam_s, n_ln(lam_s), theta_s)
    ki = 2 * mp.pi * n_ln(lam_i) / lam_i
    theta_i = mp.asin(-ks_perp / ki)
    ki_par, _ = k_components(lam_i, n_ln(lam_i), theta_i)
    kp_par, _ = k_components(lam_p, n_ln(lam_p), 0)
    delta = L * (kp_par - ks_par - ki_par)

    cp = coeffs(lam_p, 0, n_sub)
    phi_p = L * kp_par
    beta_minus = beta_plus * cp["r2"] * mp.expj(phi_p)

    cs, ci = coeffs(lam_s, theta_s, n_sub), coeffs(lam_i, theta_i, n_sub)
    phs, phi = L * ks_par, L * ki_par

    w = mp.zeros(4, 4)
    bp, bm = block(beta_plus, delta), block(beta_minus, delta)
    for a in range(2):
        for b in range(2):
            w[a, b] = bp[a, b]
            w[a + 2, b + 2] = bm[a, b]
    cj = mp.conj
    tau1 = mp.diag([cs["t1"], cj(ci["t1"]), cs["t2"], cj(ci["t2"])])
    tau2 = mp.diag([cs["t2"], cj(ci["t2"]), cs["t1"], cj(ci["t1"])])
    rho = mp.zeros(4, 4)
    rho[0, 2] = cs["r1"] * mp.expj(phs)
    rho[1, 3] = cj(ci["r1"]) * mp.expj(-phi)
    rho[2, 0] = cs["r2"] * mp.expj(phs)
    rho[3, 1] = cj(ci["r2"]) * mp.expj(-phi)
    U = tau2 * w * (mp.eye(4) - rho * w) ** -1 * tau1 - rho.transpose_conj()
    rig = {k: wick_pair(U, s, q) for k, (s, q) in
           dict(ff=(1, 2), bb=(3, 4), fb=(1, 4), bf=(3, 2)).items()}

    def enh(c, ph):
        d = 1 - c["r1"] * c["r2"] * mp.expj(2 * ph)
        e = mp.expj(ph)
        return dict(fp=c["t2"] / d, fm=c["r1"] * c["t2"] * e / d, bp=c["r2"] * c["t1"] * e / d, bm=c["t1"] / d)

    es, ei = enh(cs, phs), enh(ci, phi)
    sinc = mp.sin(delta / 2) / (delta / 2) if delta != 0 else mp.mpf(1)
    simp = {}
    for name, (sf, if_) in dict(ff=(True, True), bb=(False, False), fb=(True, False), bf=(False, True)).items():
        sp, sm = (es["fp"], es["fm"]) if sf else (es["bp"], es["bm"])
        ip, im = (ei["fp"], ei["fm"]) if if_ else (ei["bp"], ei["bm"])
        simp[name] = sinc ** 2 * abs(beta_plus * sp * ip + beta_minus * sm * im) ** 2
    return dict(lam_i=lam_i, theta_i=theta_i, delta=delta, rigorous=rig, simplified=simp)


def show(label, value):
    print(f"{label} = {mp.nstr(value, 20)}")


if __name__ == "__main__":
    show("n_e(1576)", n_ln(1576))
    show("n_e(788)", n_ln(788))
    show("n_si(1576)", n_si(1576))
    show("phase(1576, 0)", 10150 * 2 * mp.pi * n_ln(1576) / 1576)
    show("delta degenerate", 10150 * 2 * mp.pi * (n_ln(788) / 788 - 2 * n_ln(1576) / 1576))
    c = coeffs(1576, 0)
    for k in ("r1", "r2", "t1", "t2"):
        show(k + "(1576)", mp.re(c[k]))
    b = block(mp.mpf("0.1"), mp.mpf(1))
    for (r, cidx) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        print(f"w{r + 1}{cidx + 1} = {mp.nstr(mp.re(b[r, cidx]), 20)} {mp.nstr(mp.im(b[r, cidx]), 20)}")
    kp, kq = k_components(mp.mpf(788), mp.mpf("2.25"), mp.mpf("0.3"))
    show("k_par(788, 2.25, 0.3)", kp)
    show("k_perp(788, 2.25, 0.3)", kq)
    for args in ((1500, "0.1", mp.mpf("0.3")), (1576, 0, mp.mpf("1e-3")), (1900, "-0.2", mp.mpc("0.5", "0.2"))):
        px = pixel(*args)
        print(f"pixel {args}: lam_i = {mp.nstr(px['lam_i'], 20)} theta_i = {mp.nstr(px['theta_i'], 20)} "
              f"delta = {mp.nstr(px['delta'], 20)}")
        for model in ("rigorous", "simplified"):
            print("  " + model + " " + " ".join(f"{k}={mp.nstr(v, 17)}" for k, v in px[model].items()))
