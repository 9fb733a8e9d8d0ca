"""Command-line front end with stable JSON/CSV output.

Exit codes: 0 on success, 2 on domain errors (machine-readable JSON on
stderr), 1 on I/O or parse problems.  Every verb is a pure pipeline —
identical inputs and seed give byte-identical stdout.  The --threads /
--single-thread flags are accepted everywhere for interface stability;
all current implementations are serial, so both are no-ops.
"""

import argparse
import json
import sys

import numpy as np

from . import irrationality, jsonio, orbit_explorer, torus_forms
from .errors import DomainError
from .isometries import (
    adapted_basis,
    eichler_transvection,
    gu_lattice_generators,
    is_in_gu,
    is_in_hy,
    is_in_ky,
    is_in_so_plus,
    map_isotropic,
)
from .lattice_core import (
    e8_minus,
    extend_to_unimodular_basis,
    hyperbolic,
    inner,
    is_even,
    is_unimodular,
    k3_model,
    orthogonal_sublattice,
    saturation,
    signature,
    span4,
    split_hyperbolic,
    t4_model,
)

MODELS = {
    "t4": t4_model,
    "k3": k3_model,
    "u": hyperbolic,
    "e8": e8_minus,
    "span4": span4,
}


class CliParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliParseError(message)


def _load_json(text):
    """Inline JSON if the argument looks like JSON, else a file path."""
    s = text.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    with open(text, encoding="utf-8") as fh:
        return json.load(fh)


def _lattice_of(args):
    if getattr(args, "lattice", None):
        return jsonio.lattice_from_json(_load_json(args.lattice))
    if getattr(args, "model", None):
        return MODELS[args.model]()
    raise CliParseError("need --model or --lattice")


def _vector(text):
    return jsonio.decode_vector(_load_json(text))


def _symbolic(text):
    data = _load_json(text)
    if isinstance(data, list):
        return irrationality.rational_vector(jsonio.decode_vector(data))
    return jsonio.symbolic_from_json(data)


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


# --- verb handlers -----------------------------------------------------------


def _cmd_lattice_info(args):
    L = _lattice_of(args)
    sig = signature(L)
    _emit(
        {
            "rank": L.rank,
            "signature": [sig.p, sig.q],
            "even": is_even(L),
            "unimodular": is_unimodular(L),
        }
    )


def _cmd_lattice_inner(args):
    L = _lattice_of(args)
    _emit({"value": jsonio.encode_int(inner(L, _vector(args.v), _vector(args.w)))})


def _cmd_lattice_split(args):
    L = _lattice_of(args)
    z, lprime = split_hyperbolic(L, _vector(args.u))
    _emit({"z": jsonio.encode_vector(z), "lprime": jsonio.sublattice_to_json(lprime)})


def _cmd_lattice_ortho(args):
    L = _lattice_of(args)
    vectors = [jsonio.decode_vector(v) for v in _load_json(args.vectors)]
    _emit(jsonio.sublattice_to_json(orthogonal_sublattice(L, vectors)))


def _cmd_lattice_saturate(args):
    L = _lattice_of(args)
    s = jsonio.sublattice_from_json(_load_json(args.basis))
    _emit(jsonio.sublattice_to_json(saturation(L, s)))


def _cmd_lattice_extend(args):
    s = jsonio.sublattice_from_json(_load_json(args.basis))
    _emit({"matrix": jsonio.encode_matrix(extend_to_unimodular_basis(s))})


def _cmd_isom_transvect(args):
    L = _lattice_of(args)
    g = eichler_transvection(L, _vector(args.e), _vector(args.a))
    _emit(jsonio.isometry_to_json(g))


def _cmd_isom_map_isotropic(args):
    L = _lattice_of(args)
    g = map_isotropic(L, _vector(args.u), _vector(args.v))
    _emit(jsonio.isometry_to_json(g))


def _cmd_isom_check(args):
    L = _lattice_of(args)
    g = jsonio.isometry_from_json(_load_json(args.g), L)
    out = {"det": g.det, "so_plus": is_in_so_plus(g)}
    if args.u:
        u = _vector(args.u)
        out["in_gu"] = is_in_gu(g, u)
        if args.y:
            y = _symbolic(args.y)
            out["in_hy"] = is_in_hy(g, u, y)
            out["in_ky"] = is_in_ky(g, u, y)
    _emit(out)


def _cmd_isom_generators(args):
    L = _lattice_of(args)
    gens = gu_lattice_generators(L, _vector(args.u))
    _emit({"generators": [jsonio.isometry_to_json(g) for g in gens]})


def _cmd_irr_check_u(args):
    L = _lattice_of(args)
    flag = irrationality.is_u_orthoirrational(L, _vector(args.u), _symbolic(args.y))
    _emit(
        {
            "u_orthoirrational": flag,
            "assumption": irrationality.INDEPENDENCE_ASSUMPTION,
        }
    )


def _cmd_irr_certify(args):
    L = _lattice_of(args)
    cert = irrationality.certify_orthoisotropic_irrational(
        L, _symbolic(args.y), args.height
    )
    _emit(jsonio.certificate_to_json(cert))


def _cmd_irr_find_isotropic(args):
    L = _lattice_of(args)
    found = irrationality.find_isotropic_orthogonal(L, _symbolic(args.y), args.height)
    _emit({"vectors": [jsonio.encode_vector(v) for v in found]})


def _split_form_from_json(data):
    return torus_forms.SplitBlockForm(
        np.array(jsonio.float_matrix_from_json(data["C"])),
        np.array(jsonio.float_matrix_from_json(data["D"])),
    )


def _split_form_to_json(f):
    return {
        "C": jsonio.float_matrix_to_json(f.c),
        "D": jsonio.float_matrix_to_json(f.d),
    }


def _cmd_torus_blocks(args):
    omega = torus_forms.LinearSymplecticForm(
        np.array(jsonio.float_matrix_from_json(_load_json(args.omega)))
    )
    l = jsonio.sublattice_from_json(_load_json(args.l))
    lprime = jsonio.sublattice_from_json(_load_json(args.lprime))
    _emit(_split_form_to_json(torus_forms.to_blocks(omega, l, lprime)))


def _cmd_torus_act(args):
    f = _split_form_from_json(_load_json(args.form))
    data = _load_json(args.shear)
    shear = torus_forms.IntegralShear(
        jsonio.decode_matrix(data["B"]),
        jsonio.decode_matrix(data["A"]) if "A" in data else None,
    )
    _emit(_split_form_to_json(torus_forms.act(shear, f)))


def _cmd_torus_approx(args):
    f = _split_form_from_json(_load_json(args.target))
    res = torus_forms.approx_by_split_orbit(
        f, args.eps, args.delta, budget=args.budget, seed=args.seed
    )
    _emit(
        {
            "Cprime": jsonio.float_matrix_to_json(res.cprime),
            "B": jsonio.encode_matrix(res.b),
            "err": res.err,
            "rounds": res.rounds,
        }
    )


def _cmd_torus_wedge(args):
    g = jsonio.decode_matrix(_load_json(args.g))
    _emit(jsonio.isometry_to_json(torus_forms.wedge_square_action(g)))


def _cmd_explore(args):
    L = _lattice_of(args)
    u = _vector(args.u)
    y0 = orbit_explorer.HyperboloidPoint(
        tuple(float(x) for x in _load_json(args.y0))
    )
    targets = [
        orbit_explorer.HyperboloidPoint(tuple(float(x) for x in t))
        for t in _load_json(args.targets)
    ]
    records = orbit_explorer.explore(
        L, u, y0, targets, args.depth, seed=args.seed, dedup_tol=args.dedup_tol
    )
    if args.format == "csv":
        sys.stdout.write(orbit_explorer.records_to_csv(records))
        return
    _emit(
        {
            "caveat": orbit_explorer.CSV_CAVEAT.lstrip("# "),
            "records": [
                {
                    "depth": r.depth,
                    "target_id": r.target_id,
                    "min_dist": r.min_dist,
                    "orbit_size": r.orbit_size,
                }
                for r in records
            ],
        }
    )


# --- wiring ------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--threads", type=int, default=1, help="accepted for interface stability; execution is serial")
    p.add_argument("--single-thread", action="store_true", help="accepted for interface stability; execution is serial")


def _add_lattice_source(p):
    p.add_argument("--model", choices=sorted(MODELS))
    p.add_argument("--lattice", help="lattice JSON (inline or file path)")


def build_parser():
    root = _Parser(prog="latorb", description=__doc__)
    sub = root.add_subparsers(dest="verb", required=True)

    lat = sub.add_parser("lattice", help="quadratic-lattice queries")
    lat_sub = lat.add_subparsers(dest="sub", required=True)
    p = lat_sub.add_parser("info")
    _add_lattice_source(p), _add_common(p)
    p.set_defaults(func=_cmd_lattice_info)
    p = lat_sub.add_parser("inner")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.set_defaults(func=_cmd_lattice_inner)
    p = lat_sub.add_parser("split")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--u", required=True)
    p.set_defaults(func=_cmd_lattice_split)
    p = lat_sub.add_parser("ortho")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--vectors", required=True, help="JSON list of vectors")
    p.set_defaults(func=_cmd_lattice_ortho)
    p = lat_sub.add_parser("saturate")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--basis", required=True)
    p.set_defaults(func=_cmd_lattice_saturate)
    p = lat_sub.add_parser("extend")
    _add_common(p)
    p.add_argument("--basis", required=True)
    p.set_defaults(func=_cmd_lattice_extend)

    iso = sub.add_parser("isom", help="integral isometries")
    iso_sub = iso.add_subparsers(dest="sub", required=True)
    p = iso_sub.add_parser("transvect")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--e", required=True)
    p.add_argument("--a", required=True)
    p.set_defaults(func=_cmd_isom_transvect)
    p = iso_sub.add_parser("map-isotropic")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=_cmd_isom_map_isotropic)
    p = iso_sub.add_parser("check")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--g", required=True)
    p.add_argument("--u")
    p.add_argument("--y")
    p.set_defaults(func=_cmd_isom_check)
    p = iso_sub.add_parser("generators")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--u", required=True)
    p.set_defaults(func=_cmd_isom_generators)

    irr = sub.add_parser("irr", help="irrationality certificates")
    irr_sub = irr.add_subparsers(dest="sub", required=True)
    p = irr_sub.add_parser("check-u")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--u", required=True)
    p.add_argument("--y", required=True, help="symbolic-vector JSON or plain vector")
    p.set_defaults(func=_cmd_irr_check_u)
    p = irr_sub.add_parser("certify")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--y", required=True)
    p.add_argument("--height", type=int, default=3)
    p.set_defaults(func=_cmd_irr_certify)
    p = irr_sub.add_parser("find-isotropic")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--y", required=True)
    p.add_argument("--height", type=int, default=3)
    p.set_defaults(func=_cmd_irr_find_isotropic)

    tor = sub.add_parser("torus", help="symplectic block forms")
    tor_sub = tor.add_subparsers(dest="sub", required=True)
    p = tor_sub.add_parser("blocks")
    _add_common(p)
    p.add_argument("--omega", required=True, help="dense 2n×2n matrix JSON")
    p.add_argument("--l", required=True)
    p.add_argument("--lprime", required=True)
    p.set_defaults(func=_cmd_torus_blocks)
    p = tor_sub.add_parser("act")
    _add_common(p)
    p.add_argument("--form", required=True, help='{"C": ..., "D": ...}')
    p.add_argument("--shear", required=True, help='{"B": ..., "A": ...}')
    p.set_defaults(func=_cmd_torus_act)
    p = tor_sub.add_parser("approx")
    _add_common(p)
    p.add_argument("--target", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_torus_approx)
    p = tor_sub.add_parser("wedge")
    _add_common(p)
    p.add_argument("--g", required=True, help="4×4 integer matrix JSON")
    p.set_defaults(func=_cmd_torus_wedge)

    p = sub.add_parser("explore", help="orbit walk statistics")
    _add_lattice_source(p), _add_common(p)
    p.add_argument("--u", required=True)
    p.add_argument("--y0", required=True, help="float vector JSON")
    p.add_argument("--targets", required=True, help="JSON list of float vectors")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dedup-tol", type=float, default=orbit_explorer.DEDUP_TOL)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_explore)

    return root


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except CliParseError as exc:
        sys.stderr.write("argument error: %s\n" % exc)
        return 1
    try:
        inputs_ready = args.func
    except AttributeError:
        sys.stderr.write("argument error: missing sub-command\n")
        return 1
    try:
        inputs_ready(args)
    except DomainError as exc:
        sys.stderr.write(json.dumps(exc.payload()) + "\n")
        return 2
    except CliParseError as exc:
        sys.stderr.write("argument error: %s\n" % exc)
        return 1
    except (OSError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
