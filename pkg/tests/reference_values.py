"""Frozen reference constants for the numeric tests.

Every value was computed with mpmath at 50 significant digits before the
package code existed, using only integral definitions and elementary
arithmetic (no scipy, no package imports), then rounded to float64.  The
closed-form outage values deliberately take a different route than the
package (a radial integral of the Rayleigh-averaged Laplace transform
instead of incomplete-Gamma identities), so agreement checks both the
algebra and the quadrature.

Run this module as a script to regenerate everything it freezes:

    python tests/reference_values.py
"""

REF = {
    # dB conversions
    "lin(-61.4 dB)": 7.2443596007499006e-07,
    "lin(22.7 dB magnitude)": 0.0053703179637025273,
    "lin(5 dB)": 3.1622776601683795,
    "lin(-111 dBm)": 7.943282347242815e-12,
    "lin(-81 dBm)": 7.9432823472428151e-09,
    # channel gain: attenuation 22.7 dB, unit fading, r=20 m, alpha=3.6
    "gain a=22.7dB r=20 alpha=3.6": 1.1124794968241837e-07,
    # gamma-family spot values
    "Gamma(4/9)": 1.9928935227569227,
    "Gamma(14/9)": 0.88928673245221294,
    "Gamma(0.5,1.0)": 0.27880558528066198,
    "Gamma(1.5)": 0.88622692545275801,
    "Gamma(0.25,3.0)": 0.018167554000705861,
    # blockage helpers
    "ln2/0.008": 86.643397569993164,
    "exp(-0.008*100)": 0.4493289641172216,
    # disk void probability, r=30, density 1/6400
    "1-exp(-pi*900/6400)": 0.35711310157482653,
    # directional scenario: zero-false-alarm threshold and radius
    "zeta theta=pi/6": 0.00017601525210487078,
    "zeta_radius theta=pi/6": 31.752642899313786,
    "zeta_radius theta=pi/12": 31.71152760271863,
    # mean potential-interferer counts (whole plane, then a finite window)
    "limit theta=pi/6 dt=30": 0.75752137673364999,
    "limit theta=pi/6 dt=80": 0.10652644360316953,
    "limit theta=pi/12 dt=30": 0.18938034418341249,
    "limit theta=pi/12 dt=80": 0.026631610900792382,
    "measure R=10/b theta=pi/6 dt=80": 0.10647324437953779,
    # Rayleigh/omni closed forms
    "scenario1 T0": 2.2579170570606559e-06,
    "s1 phym dt=30": 0.99082307257082316,
    "s1 phym dt=80": 0.48298461737995963,
    "s1 ibm r=30 dt=30": 0.89668373296971673,
    "s1 ibm r=50 dt=30": 0.96856756836134392,
    "s1 ibm r=30 dt=80": 0.27328080479113783,
    "s1 ibm r=50 dt=80": 0.38525792926326484,
    "s1 cond r=10 dt=30": 0.9870310534152354,
    "s1 cond r=30 dt=30": 0.91117655551986409,
    "s1 cond r=40 dt=30": 0.81614553133617184,
    "s1 cond r=10 dt=80": 0.45721682017820869,
    "s1 cond r=30 dt=80": 0.28856397539504232,
    "s1 cond r=40 dt=80": 0.21192810367548477,
    "s1 prm r=30 dt=30": 0.95678608173622775,
    # error rates and the accuracy index at dt=80
    "s1 acc prm30 dt=80 p_fa": 0.11535920465572601,
    "s1 acc prm30 dt=80 p_md": 0.38409918755862703,
    "s1 acc prm30 dt=80 ima": 0.75484351752721945,
    "s1 acc ibm50 dt=80 p_md": 0.20233913172396977,
    "s1 acc ibm50 dt=80 ima": 0.90227331188330521,
}


def _regenerate():
    import mpmath as mp

    mp.mp.dps = 50
    out = {}

    out["lin(-61.4 dB)"] = mp.mpf(10) ** (mp.mpf("-61.4") / 10)
    out["lin(22.7 dB magnitude)"] = mp.mpf(10) ** (-mp.mpf("22.7") / 10)
    out["lin(5 dB)"] = mp.mpf(10) ** (mp.mpf(5) / 10)
    out["lin(-111 dBm)"] = mp.mpf(10) ** (mp.mpf(-111) / 10)
    out["lin(-81 dBm)"] = mp.mpf(10) ** (mp.mpf(-81) / 10)

    a1 = mp.mpf(10) ** (-mp.mpf("22.7") / 10)
    out["gain a=22.7dB r=20 alpha=3.6"] = a1 * mp.mpf(20) ** (-mp.mpf("3.6"))

    out["Gamma(4/9)"] = mp.gamma(mp.mpf(4) / 9)
    out["Gamma(14/9)"] = mp.gamma(mp.mpf(14) / 9)
    out["Gamma(0.5,1.0)"] = mp.gammainc(mp.mpf("0.5"), mp.mpf(1), mp.inf)
    out["Gamma(1.5)"] = mp.gamma(mp.mpf("1.5"))
    out["Gamma(0.25,3.0)"] = mp.gammainc(mp.mpf("0.25"), mp.mpf(3), mp.inf)

    out["ln2/0.008"] = mp.log(2) / mp.mpf("0.008")
    out["exp(-0.008*100)"] = mp.e ** (-mp.mpf("0.008") * 100)
    out["1-exp(-pi*900/6400)"] = 1 - mp.e ** (-mp.pi * 900 / 6400)

    p = mp.mpf(10) ** (mp.mpf(20) / 10)
    a2 = mp.mpf(10) ** (-mp.mpf("61.4") / 10)
    sig2 = mp.mpf(10) ** (-mp.mpf(81) / 10)
    beta = mp.mpf(10) ** (mp.mpf(5) / 10)
    d0 = mp.mpf(20)
    alpha2 = mp.mpf("2.5")
    for th_name, th in (("pi/6", mp.pi / 6), ("pi/12", mp.pi / 12)):
        zeta = d0 ** (-alpha2) / beta - (sig2 / (p * a2)) * (th / (2 * mp.pi)) ** 2
        if th_name == "pi/6":
            out["zeta theta=pi/6"] = zeta
        out[f"zeta_radius theta={th_name}"] = zeta ** (-1 / alpha2)

    b = mp.mpf("0.008")
    for th_name, th in (("pi/6", mp.pi / 6), ("pi/12", mp.pi / 12)):
        for dt in (30, 80):
            lam_t = mp.mpf(1) / dt ** 2
            out[f"limit theta={th_name} dt={dt}"] = (
                th ** 2 * lam_t / (2 * mp.pi * b ** 2))
    R = 10 / b
    th = mp.pi / 6
    out["measure R=10/b theta=pi/6 dt=80"] = (
        th ** 2 / mp.mpf(6400) / (2 * mp.pi * b ** 2)
        * (1 - (1 + b * R) * mp.e ** (-b * R)))

    # Rayleigh average of exp(-s h) is 1/(1+s), so the outage exponent is a
    # plain radial integral of c t / (t^alpha + c); no special functions.
    alpha1 = mp.mpf("3.6")
    sig1 = mp.mpf(10) ** (mp.mpf(-111) / 10)
    c = beta * d0 ** alpha1
    T0 = sig1 * c / (p * a1)
    out["scenario1 T0"] = T0

    def t_int(lam, r1, r2):
        return 2 * mp.pi * lam * mp.quad(
            lambda t: c * t / (t ** alpha1 + c), [r1, r2])

    def t_int_tail(lam, r1):
        return 2 * mp.pi * lam * mp.quad(
            lambda t: c * t / (t ** alpha1 + c),
            [r1, 10 * (r1 + 1), 1000 * (r1 + 1), mp.inf])

    for dt in (30, 80):
        lam = mp.mpf(1) / dt ** 2
        out[f"s1 phym dt={dt}"] = 1 - mp.e ** (-T0 - t_int_tail(lam, 0))
        for r in (30, 50):
            out[f"s1 ibm r={r} dt={dt}"] = 1 - mp.e ** (-T0 - t_int(lam, 0, r))
        for r in (10, 30, 40):
            out[f"s1 cond r={r} dt={dt}"] = 1 - mp.e ** (-T0 - t_int_tail(lam, r))
    out["s1 prm r=30 dt=30"] = 1 - mp.e ** (-mp.pi * 900 / 900)

    lam = mp.mpf(1) / 6400
    P_phym = 1 - mp.e ** (-T0 - t_int_tail(lam, 0))
    P_prm = 1 - mp.e ** (-lam * mp.pi * 900)
    P_cond = 1 - mp.e ** (-T0 - t_int_tail(lam, 30))
    p_fa = 1 - (1 - P_prm) * (1 - P_cond) / (1 - P_phym)
    p_md = (1 - P_prm) * P_cond / P_phym
    xi = 1 - P_phym
    out["s1 acc prm30 dt=80 p_fa"] = p_fa
    out["s1 acc prm30 dt=80 p_md"] = p_md
    out["s1 acc prm30 dt=80 ima"] = 1 - xi * p_fa - (1 - xi) * p_md
    P_ibm = 1 - mp.e ** (-T0 - t_int(lam, 0, 50))
    out["s1 acc ibm50 dt=80 p_md"] = 1 - P_ibm / P_phym
    out["s1 acc ibm50 dt=80 ima"] = 1 - P_phym * (1 - P_ibm / P_phym)
    return out


if __name__ == "__main__":
    fresh = _regenerate()
    width = max(len(k) for k in fresh)
    drift = 0
    for key, value in fresh.items():
        rounded = float(value)
        marker = ""
        if key in REF and REF[key] != rounded:
            marker = f"  <- frozen {REF[key]!r}"
            drift += 1
        print(f"{key:<{width}} {rounded!r}{marker}")
    missing = [k for k in REF if k not in fresh]
    print(f"\n{len(fresh)} values, {drift} drifted, {len(missing)} frozen "
          f"but not regenerated {missing if missing else ''}")
