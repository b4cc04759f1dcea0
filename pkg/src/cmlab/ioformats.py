"""Deterministic rendering: canonical JSON, CSV, DOT, exact rationals.

Rationals are rendered as "num/den" plus a 12-significant-digit decimal
column clearly derived from the exact value.  JSON key order is fixed by
construction (insertion order), so identical invocations are byte-identical.
"""

import json
from fractions import Fraction


def rat_str(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def dec12(x) -> str:
    """12 significant digits of an exact rational (round half up)."""
    x = Fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = 0
    while x >= 10:
        x /= 10
        e += 1
    while x < 1:
        x *= 10
        e -= 1
    digits = int(x * 10**11 + Fraction(1, 2))
    if digits >= 10**12:
        digits //= 10
        e += 1
    s = str(digits)
    if 0 <= e < 12:
        frac = s[e + 1:].rstrip("0")
        return sign + s[:e + 1] + ("." + frac if frac else "")
    if -9 <= e < 0:
        frac = ("0" * (-e - 1) + s).rstrip("0")
        return sign + "0." + frac
    return f"{sign}{s[0]}.{s[1:].rstrip('0') or '0'}e{e}"


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def csv_line(fields) -> str:
    return ",".join(str(f) for f in fields) + "\n"


def report_csv(report) -> str:
    """One row per level: n, c, h, m_1.., tv columns as exact and decimal."""
    k = len(report.support_labels)
    header = ["n", "conductor", "class_number"]
    header += [f"m_{i + 1}" for i in range(k)]
    header += ["tv_weight", "tv_weight_dec", "tv_inverse", "tv_inverse_dec", "empty_fiber"]
    out = [csv_line(header)]
    for row in report.rows:
        fields = [row.n, row.conductor, row.class_number]
        fields += [rat_str(c) for c in row.counts]
        if row.empty:
            fields += ["", "", "", "", "yes"]
        else:
            fields += [rat_str(row.tv_weight), dec12(row.tv_weight),
                       rat_str(row.tv_inverse), dec12(row.tv_inverse), "no"]
        out.append(csv_line(fields))
    return "".join(out)


def report_json_dict(report) -> dict:
    k = len(report.support_labels)
    return {
        "config": {
            "p": report.p, "q": report.q, "d_K": report.d_K,
            "c0": report.c0, "n_max": report.n_max, "target": report.target,
        },
        "support": [list(l) if isinstance(l, tuple) else l for l in report.support_labels],
        "weights": report.weights,
        "mu_weight": [rat_str(m) for m in report.mu_weight.masses],
        "mu_inverse": [rat_str(m) for m in report.mu_inverse.masses],
        "rows": [
            {
                "n": row.n,
                "conductor": row.conductor,
                "class_number": row.class_number,
                "counts": [rat_str(c) for c in row.counts],
                "empty_fiber": row.empty,
                "nu": None if row.empty else [rat_str(m) for m in row.nu.masses],
                "tv_weight": None if row.empty else rat_str(row.tv_weight),
                "tv_weight_dec": None if row.empty else dec12(row.tv_weight),
                "tv_inverse": None if row.empty else rat_str(row.tv_inverse),
                "tv_inverse_dec": None if row.empty else dec12(row.tv_inverse),
            }
            for row in report.rows
        ],
        "verdict": report.verdict,
    }


def plot_data(report) -> str:
    """(n, tv_weight, tv_inverse) triples for external plotting."""
    lines = ["# n tv_weight tv_inverse"]
    for row in report.rows:
        if row.empty:
            continue
        lines.append(f"{row.n} {dec12(row.tv_weight)} {dec12(row.tv_inverse)}")
    return "\n".join(lines) + "\n"


def render_figure(report, path: str):
    """Render the TV trajectory to an image file (png/pdf/svg by extension)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [row.n for row in report.rows if not row.empty]
    tw = [float(row.tv_weight) for row in report.rows if not row.empty]
    ti = [float(row.tv_inverse) for row in report.rows if not row.empty]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, tw, "o-", label="TV to weight-proportional")
    ax.plot(ns, ti, "s-", label="TV to inverse-weight")
    ax.set_xlabel("tower level n  (conductor $c_0 p^n$)")
    ax.set_ylabel("total variation distance")
    ax.set_title(f"p={report.p}, q={report.q}, d_K={report.d_K}, target={report.target}")
    ax.set_ylim(bottom=0)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def classset_json_dict(classes, brandt=None) -> dict:
    order = classes.order
    out = {
        "disc": order.reduced_discriminant(),
        "level": order.level,
        "classes": [
            {
                "basis": [[rat_str(c) for c in e.coords] for e in ideal.basis],
                "weight": w,
            }
            for ideal, w in zip(classes.ideals, classes.weights)
        ],
        "mass": rat_str(classes.mass()),
    }
    if brandt is not None:
        out["brandt"] = {str(n): mat for n, mat in brandt.items()}
    return out


def embeddings_json_dict(cm, gp) -> dict:
    counts_int = all(c.denominator == 1 for c in gp.counts)
    return {
        "D": cm.discriminant,
        "d_K": cm.d_K,
        "c": cm.conductor,
        "counts": [int(c) if counts_int else rat_str(c) for c in gp.counts],
        "total": int(gp.total) if gp.total.denominator == 1 else rat_str(gp.total),
        "plain_counts": list(gp.plain_counts),
    }


def bimodule_json_dict(p, admissible, rs) -> dict:
    return {"p": p, "admissible": admissible, "type": list(rs)}
