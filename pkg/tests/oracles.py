"""Independent oracles shared by the test modules: a standalone theta
product, arm/leg data recomputed from scratch, and explicit-log monomial
evaluation.  These deliberately avoid the package's evaluation paths."""

import cmath


def plain_theta_log(logx, q, tol=1e-18):
    x = cmath.exp(logx)
    val = cmath.exp(0.5 * logx) - cmath.exp(-0.5 * logx)
    i = 1
    while abs(q) ** i * max(abs(x), 1 / abs(x)) >= tol and i < 2000:
        val *= (1 - x * q ** i) * (1 - q ** i / x)
        i += 1
    return val


def arm_leg_from_scratch(parts):
    """(arm, leg) per box (i, j), recomputed with a local transpose."""
    conj = []
    for j in range(1, parts[0] + 1):
        conj.append(sum(1 for p in parts if p >= j))
    out = {}
    for i, p in enumerate(parts, start=1):
        for j in range(1, p + 1):
            out[(i, j)] = (conj[j - 1] - i, p - j)
    return out


def mono_log(ctx, m, x_logs=None):
    """Consistent log of a monomial, with optional explicit Chern-root logs."""
    ls = 0j
    for g, e2 in m.doubled().items():
        if g.startswith("x") and not g.startswith("xz"):
            ls += 0.5 * e2 * x_logs[int(g[1:]) - 1]
        else:
            ls += 0.5 * e2 * ctx.logs[g]
    return ls


def theta_mono(ctx, m, x_logs=None):
    return plain_theta_log(mono_log(ctx, m, x_logs), ctx.values["q"])
