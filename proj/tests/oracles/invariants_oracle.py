"""Independent sympy computation of the relative invariants.

Used once to produce the frozen expected values asserted in the C++ tests.
Nothing here is imported or executed by the build.
"""
import sympy as sp

x, u, p, q = sp.symbols("x u p q")


def Dx(e, f):
    return sp.diff(e, x) + p * sp.diff(e, u) + q * sp.diff(e, p) + f * sp.diff(e, q)


def invariants(f, scale=sp.Rational(1, 54)):
    fq, fp, fu = sp.diff(f, q), sp.diff(f, p), sp.diff(f, u)
    W = sp.simplify(4 * fq**3 + 18 * fq * (fp - Dx(fq, f)) + 9 * Dx(Dx(fq, f), f)
                    - 27 * Dx(fp, f) + 54 * fu)
    out = {"W": sp.factor(W)}
    out["I1"] = sp.simplify(sp.diff(f, q, 3))
    out["I2"] = sp.simplify(sp.diff(f, q, 2) ** 2 + 6 * sp.diff(f, p, q, q))
    fqq = sp.diff(f, q, 2)
    out["I7"] = sp.simplify(fqq * (fq**2 + 9 * fp - 3 * Dx(fq, f)) - 9 * sp.diff(f, p, 2)
                            + 18 * sp.diff(f, u, q) - 6 * fq * sp.diff(f, p, q))
    if W == 0:
        return out
    J = sp.simplify(sp.real_root(sp.factor(W * scale), 3)) if scale > 0 else None
    return out, J


def report(f, J):
    fq, fp = sp.diff(f, q), sp.diff(f, p)
    I8 = sp.simplify(sp.Rational(1, 3) * ((fq**2 + 3 * fp - 3 * Dx(fq, f)) * J**2
                                          + 6 * J * Dx(Dx(J, f), f) - 9 * Dx(J, f) ** 2))
    K = sp.simplify(I8 / J**4)
    DxK = sp.simplify(Dx(K, f))
    fqq = sp.diff(f, q, 2)
    return {
        "I4": sp.simplify(sp.diff(J, q)),
        "I5": sp.simplify(fqq * J - 6 * sp.diff(J, p)),
        "I6": sp.simplify(sp.diff(J, u) - Dx(sp.diff(J, p), f)),
        "I8": I8, "K": K, "DxK": DxK,
        "I9": sp.simplify(sp.diff(K, q)), "I10": sp.simplify(sp.diff(K, p)),
        "I11": sp.simplify(fqq * DxK - 6 * sp.diff(K, u)),
    }


if __name__ == "__main__":
    quartic = 3 * q**2 / p - x * u**3 * p**4
    print("quartic W", invariants(quartic)[0]["W"], invariants(quartic)[0])
    print("quartic D_x f_q", sp.expand(Dx(sp.diff(quartic, q), quartic)))
    print("quartic LF", report(quartic, u * p))
    Jy = -sp.cbrt(2) * u * p
    print("quartic Yum J^3 check", sp.simplify(Jy**3 + invariants(quartic)[0]["W"] / 27))
    ry = report(quartic, Jy)
    print("quartic Yum", {k: sp.nsimplify(v) for k, v in ry.items()})
    print("quartic Yum J/DxK", sp.simplify(Jy / ry["DxK"]))
    print("x^3u", invariants(x**3 * u)[0], report(x**3 * u, x))
    print("u", invariants(u)[0], report(u, sp.Integer(1)))
    # W of the pushforward of u'''=0 under (x,u)->(u,x)
    print("3q^2/p", invariants(3 * q**2 / p))
