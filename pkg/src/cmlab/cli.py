"""Command line interface.

Subcommands: algebra, classset, brandt, embeddings, model, bimodule, tree,
equidist, simul.  Validation failures exit with status 2 and a one-line
reason; I/O failures exit 1.  Flags take precedence over an optional flat
key=value config file, which takes precedence over defaults.  The env var
CMLAB_PRECISION overrides the default local precision.
"""

import argparse
import os
import sys

from .arith import fundamental_discriminant, is_prime
from .ioformats import (bimodule_json_dict, classset_json_dict, dump_json,
                        embeddings_json_dict, plot_data, rat_str, render_figure,
                        report_csv, report_json_dict)

DEFAULT_PRECISION = 4


class ValidationFailure(Exception):
    pass


def _load_config_file(path):
    values = {}
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValidationFailure(f"config line without '=': {line!r}")
                key, val = line.split("=", 1)
                values[key.strip()] = val.strip()
    except OSError as exc:
        raise ValidationFailure(f"cannot read config file: {exc}")
    return values


def _merged(args, key, cast, default=None):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if getattr(args, "config", None):
        filevals = _load_config_file(args.config)
        if key in filevals:
            try:
                return cast(filevals[key])
            except ValueError:
                raise ValidationFailure(f"bad config value for {key}: {filevals[key]!r}")
    return default


def _precision(args):
    k = _merged(args, "precision", int)
    if k is None:
        env = os.environ.get("CMLAB_PRECISION")
        if env is not None:
            try:
                k = int(env)
            except ValueError:
                raise ValidationFailure(f"CMLAB_PRECISION is not an integer: {env!r}")
    if k is None:
        k = DEFAULT_PRECISION
    if k < 2:
        raise ValidationFailure("precision must be at least 2")
    return k


def _emit(args, text):
    out = getattr(args, "out", None)
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"I/O failure: {exc}", file=sys.stderr)
            sys.exit(1)
    else:
        sys.stdout.write(text)


def _parser():
    top = argparse.ArgumentParser(prog="cmlab", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "dot"), default=None)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--dry-run", action="store_true",
                       help="validate parameters without computing")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--precision", type=int, default=None)

    p = sub.add_parser("algebra", help="ramification data of (a, b | Q)")
    p.add_argument("--a", type=str, required=True)
    p.add_argument("--b", type=str, required=True)
    common(p)

    p = sub.add_parser("classset", help="right ideal classes of a (level-p) order")
    p.add_argument("--disc", type=int, required=True, help="prime discriminant q")
    p.add_argument("--level", type=int, default=1, help="Eichler level p (prime or 1)")
    common(p)

    p = sub.add_parser("brandt", help="Brandt matrices B(n)")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--n", type=int, nargs="+", required=True)
    common(p)

    p = sub.add_parser("embeddings", help="Gross point counts for O_c")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--dK", type=int, required=True)
    p.add_argument("--conductor", type=int, default=1)
    p.add_argument("--plain", action="store_true", help="skip the orientation normalization")
    common(p)

    p = sub.add_parser("model", help="special fiber model and dual graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dK", type=int, required=True)
    common(p)

    p = sub.add_parser("bimodule", help="CM reduction bimodule classification")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--twist", action="store_true",
                   help="use the second ramified quadratic class")
    common(p)

    p = sub.add_parser("tree", help="ball of the Bruhat-Tits tree")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--radius", type=int, default=2)
    common(p)

    p = sub.add_parser("equidist", help="conductor tower equidistribution report")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dK", type=int, required=True)
    p.add_argument("--c0", type=int, default=1)
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--target", choices=("singular", "components"), default="singular")
    p.add_argument("--figure", help="also render the TV trajectory to this image file")
    p.add_argument("--plot-data", dest="plot_data", help="write (n, tv) pairs to this path")
    common(p)

    p = sub.add_parser("simul", help="simultaneous reduction report at several primes")
    p.add_argument("--p", type=int, nargs="+", required=True)
    p.add_argument("--q", type=int, nargs="+", required=True)
    p.add_argument("--dK", type=int, nargs="+", required=True)
    p.add_argument("--target", nargs="+", default=None)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--figure", help="render TV trajectories of the marginals")
    common(p)

    return top


def _cmd_algebra(args):
    from fractions import Fraction

    from .qalg import QuaternionAlgebra

    try:
        a, b = Fraction(args.a), Fraction(args.b)
    except ValueError:
        raise ValidationFailure("a and b must be rationals like -1 or 3/5")
    if a == 0 or b == 0:
        raise ValidationFailure("a and b must be nonzero")
    if args.dry_run:
        return None
    alg = QuaternionAlgebra(a, b)
    ram = sorted((str(x) for x in alg.ramified_places), key=lambda s: (s == "oo", int(s) if s != "oo" else 0))
    return dump_json({
        "a": rat_str(a), "b": rat_str(b),
        "ramified_places": ram,
        "discriminant": alg.discriminant(),
        "definite": alg.is_definite(),
    })


def _class_set(disc, level):
    from .lattices import (algebra_for_prime_discriminant, eichler_order,
                           maximal_order, right_ideal_classes)

    if not is_prime(disc):
        raise ValidationFailure(f"unsupported discriminant {disc}: must be prime")
    if level != 1 and not is_prime(level):
        raise ValidationFailure("level must be 1 or a prime")
    if level != 1 and level == disc:
        raise ValidationFailure("level must be coprime to the discriminant")
    alg = algebra_for_prime_discriminant(disc)
    om = maximal_order(alg)
    order = om if level == 1 else eichler_order(om, level)
    return right_ideal_classes(order)


def _cmd_classset(args):
    if args.dry_run:
        _validate_classset(args)
        return None
    _validate_classset(args)
    classes = _class_set(args.disc, args.level)
    return dump_json(classset_json_dict(classes))


def _validate_classset(args):
    if not is_prime(args.disc):
        raise ValidationFailure(f"unsupported discriminant {args.disc}: must be prime")
    if args.level != 1 and (not is_prime(args.level) or args.level == args.disc):
        raise ValidationFailure("level must be 1 or a prime coprime to the discriminant")


def _cmd_brandt(args):
    from math import gcd

    from .lattices import brandt_matrix

    _validate_classset(args)
    for n in args.n:
        if n < 1 or gcd(n, args.disc * args.level) != 1:
            raise ValidationFailure(f"bad level: n={n} must be positive and coprime to "
                                    f"{args.disc * args.level}")
    if args.dry_run:
        return None
    classes = _class_set(args.disc, args.level)
    mats = {n: brandt_matrix(classes, n) for n in args.n}
    return dump_json(classset_json_dict(classes, brandt=mats))


def _cmd_embeddings(args):
    from .cmfields import imag_quad_order
    from .embeddings import gross_points

    _validate_classset(args)
    try:
        d_K = fundamental_discriminant(args.dK)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    if args.conductor < 1:
        raise ValidationFailure("conductor must be positive")
    if args.dry_run:
        return None
    classes = _class_set(args.disc, args.level)
    cm = imag_quad_order(d_K, args.conductor)
    gp = gross_points(classes, cm, oriented=not args.plain)
    return dump_json(embeddings_json_dict(cm, gp))


def _cmd_model(args):
    from .specialfiber import SplitPlaceError, build_model, dual_graph_dot, dual_graph_json

    try:
        d_K = fundamental_discriminant(args.dK)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    if not is_prime(args.p) or not is_prime(args.q) or args.p == args.q:
        raise ValidationFailure("p and q must be distinct primes")
    if args.dry_run:
        from .arith import kronecker
        if kronecker(d_K, args.p) == 1 or kronecker(d_K, args.q) == 1:
            raise ValidationFailure("p and q must be non-split in the field")
        return None
    try:
        model = build_model(args.p, args.q, d_K)
    except (SplitPlaceError, ValueError) as exc:
        raise ValidationFailure(str(exc))
    if args.format == "dot":
        return dual_graph_dot(model) + "\n"
    return dump_json(dual_graph_json(model))


def _cmd_bimodule(args):
    from .localmod import bimodule_type, cm_reduction_bimodule, is_admissible

    if not is_prime(args.p):
        raise ValidationFailure("p must be prime")
    if args.p == 2:
        raise ValidationFailure("wild ramification unsupported: p must be odd")
    k = _precision(args)
    if args.dry_run:
        return None
    mod = cm_reduction_bimodule(args.p, twist=args.twist, k=k)
    adm = is_admissible(mod)
    rs = bimodule_type(mod) if adm else None
    guard = cm_reduction_bimodule(args.p, twist=args.twist, k=k + 2)
    if is_admissible(guard) != adm or (adm and bimodule_type(guard) != rs):
        raise ArithmeticError("classification unstable under precision increase")
    return dump_json(bimodule_json_dict(args.p, adm, rs))


def _cmd_tree(args):
    from .localmod import dual_graph_patch, tree_patch_dot, tree_patch_json

    if not is_prime(args.p):
        raise ValidationFailure("p must be prime")
    if args.radius < 0 or args.radius > 6:
        raise ValidationFailure("radius must be between 0 and 6")
    if args.dry_run:
        return None
    patch = dual_graph_patch(args.p, args.radius)
    if args.format == "dot":
        return tree_patch_dot(patch) + "\n"
    return dump_json(tree_patch_json(patch))


def _cmd_equidist(args):
    from .equidist import ConfigError, run_experiment

    try:
        d_K = fundamental_discriminant(args.dK)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    from .equidist import _validate_config

    try:
        _validate_config(args.p, args.q, d_K, args.c0, args.nmax, args.target)
    except ConfigError as exc:
        raise ValidationFailure(str(exc))
    if args.dry_run:
        return None
    report = run_experiment(args.p, args.q, d_K, c0=args.c0, n_max=args.nmax,
                            target=args.target, jobs=max(1, args.jobs))
    if args.figure:
        try:
            render_figure(report, args.figure)
        except OSError as exc:
            print(f"I/O failure: {exc}", file=sys.stderr)
            sys.exit(1)
    if args.plot_data:
        try:
            with open(args.plot_data, "w") as fh:
                fh.write(plot_data(report))
        except OSError as exc:
            print(f"I/O failure: {exc}", file=sys.stderr)
            sys.exit(1)
    if args.format == "csv":
        return report_csv(report)
    return dump_json(report_json_dict(report))


def _cmd_simul(args):
    from .equidist import ConfigError, simultaneous_report
    from .ioformats import dec12

    ps, qs, dks = args.p, args.q, args.dK
    if not (len(ps) == len(qs) == len(dks)):
        raise ValidationFailure("--p, --q, --dK need the same number of values")
    targets = args.target or ["singular"] * len(ps)
    if len(targets) != len(ps):
        raise ValidationFailure("--target needs one value per prime")
    configs = []
    for p, q, dk, tgt in zip(ps, qs, dks, targets):
        try:
            dkf = fundamental_discriminant(dk)
        except ValueError as exc:
            raise ValidationFailure(str(exc))
        configs.append(dict(p=p, q=q, d_K=dkf, n_max=args.nmax, target=tgt))
    if args.dry_run:
        from .equidist import _validate_config
        try:
            for c in configs:
                _validate_config(c["p"], c["q"], c["d_K"], 1, c["n_max"], c["target"])
            if len({c["p"] for c in configs}) != len(configs):
                raise ConfigError("reduction primes must be pairwise distinct")
        except ConfigError as exc:
            raise ValidationFailure(str(exc))
        return None
    try:
        prod = simultaneous_report(configs)
    except ConfigError as exc:
        raise ValidationFailure(str(exc))
    if args.figure:
        for i, rep in enumerate(prod.reports):
            stem, dot, ext = args.figure.rpartition(".")
            path = f"{stem}_p{rep.p}.{ext}" if dot else f"{args.figure}_p{rep.p}.png"
            render_figure(rep, path)
    body = {
        "marginals": [report_json_dict(r) for r in prod.reports],
        "product_rows": [
            {
                "n": n,
                "empty_fiber": nu is None,
                "tv_weight": None if nu is None else rat_str(tw),
                "tv_weight_dec": None if nu is None else dec12(tw),
                "tv_inverse": None if nu is None else rat_str(ti),
                "tv_inverse_dec": None if nu is None else dec12(ti),
            }
            for (n, nu, tw, ti) in prod.product_rows
        ],
        "verdict": prod.verdict,
    }
    return dump_json(body)


_COMMANDS = {
    "algebra": _cmd_algebra,
    "classset": _cmd_classset,
    "brandt": _cmd_brandt,
    "embeddings": _cmd_embeddings,
    "model": _cmd_model,
    "bimodule": _cmd_bimodule,
    "tree": _cmd_tree,
    "equidist": _cmd_equidist,
    "simul": _cmd_simul,
}


def dispatch(argv) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        text = _COMMANDS[args.command](args)
    except ValidationFailure as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    if text is not None:
        _emit(args, text)
    elif getattr(args, "dry_run", False):
        print("parameters valid (dry run)", file=sys.stderr)
    return 0


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
