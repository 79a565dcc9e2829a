"""Command-line front end: JSON tensor documents in, JSON results out.

Documents carry a 6x6 (elasticity / harmonic4) or 3x3 (symmetric2) matrix in
Kelvin or Voigt convention.  All results are serialized with 17 significant
digits so identical inputs give byte-identical outputs.

Exit codes: 0 success, 1 input error, 2 degenerate-class error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .classify import classify
from .covariants import covariants, deviator, invariants
from .errors import DegenerateClassError, RootPairingError
from .factorization import maxwell_multipoles, rebuild_from_multipoles, square_difference
from .harmonic import (
    ElasticityQuintuple,
    check_elasticity_kelvin,
    decompose_elasticity,
    harmonic_product,
    recompose_elasticity,
)
from .reconstruction import (
    normal_form,
    random_in_class,
    reconstruct_orthotropic,
    reconstruct_transverse,
    tetragonal_split,
    trigonal_split,
)
from .tensor_core import (
    HarmTensor,
    harm4_from_kelvin,
    inner_norm,
    kelvin_from_harm4,
    random_rotation,
)

SCHEMA = "htk/1"


class InputError(ValueError):
    pass


# -- JSON with fixed float formatting ---------------------------------------


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return "true" if x is True else ("false" if x is False else "null")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, np.ndarray):
        return _fmt(x.tolist())
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    raise TypeError(f"cannot serialize {type(x)!r}")


def dumps(obj) -> str:
    return _fmt(obj)


# -- document handling -------------------------------------------------------

_VOIGT_TO_KELVIN = np.diag([1.0, 1.0, 1.0, np.sqrt(2.0), np.sqrt(2.0), np.sqrt(2.0)])


def voigt_to_kelvin(m: np.ndarray) -> np.ndarray:
    return _VOIGT_TO_KELVIN @ np.asarray(m, dtype=float) @ _VOIGT_TO_KELVIN


def kelvin_to_voigt(m: np.ndarray) -> np.ndarray:
    inv = np.diag(1.0 / np.diag(_VOIGT_TO_KELVIN))
    return inv @ np.asarray(m, dtype=float) @ inv


def read_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"malformed JSON: {err}") from None
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("elasticity", "harmonic4", "symmetric2"):
        raise InputError(f"unknown document kind {kind!r}")
    convention = doc.get("convention", "kelvin")
    if convention not in ("kelvin", "voigt"):
        raise InputError(f"unknown convention {convention!r}")
    try:
        matrix = np.array(doc["matrix"], dtype=float)
    except (KeyError, ValueError) as err:
        raise InputError(f"bad matrix field: {err}") from None
    want = (3, 3) if kind == "symmetric2" else (6, 6)
    if matrix.shape != want:
        raise InputError(f"{kind} document needs a {want[0]}x{want[1]} matrix")
    if kind != "symmetric2" and convention == "voigt":
        matrix = voigt_to_kelvin(matrix)
    doc = dict(doc)
    doc["matrix"] = matrix
    return doc


def document(kind: str, matrix: np.ndarray, metadata: dict | None = None) -> dict:
    out = {"schema": SCHEMA, "kind": kind, "convention": "kelvin", "matrix": matrix}
    if metadata:
        out["metadata"] = metadata
    return out


def _harm4_of(doc: dict) -> HarmTensor:
    if doc["kind"] == "harmonic4":
        try:
            return harm4_from_kelvin(doc["matrix"])
        except ValueError as err:
            raise InputError(str(err)) from None
    if doc["kind"] == "elasticity":
        return decompose_elasticity(doc["matrix"]).h
    raise InputError("expected a harmonic4 or elasticity document")


def _harm2_of(doc: dict) -> HarmTensor:
    m = doc["matrix"]
    if abs(np.trace(m)) > 1e-10 * max(np.linalg.norm(m), 1e-300):
        raise InputError("symmetric2 matrix must be traceless")
    return HarmTensor.from_traceless_matrix(deviator(m))


# -- subcommands -------------------------------------------------------------


def _cmd_generate(args) -> dict:
    rng = np.random.default_rng(args.seed)
    g = random_rotation(rng)
    if args.klass == "isotropic":
        h = HarmTensor.zero(4)
        params: tuple = ()
    else:
        params = {
            "transverse": lambda: (args.delta,),
            "orthotropic": lambda: tuple(args.lambdas),
            "tetragonal": lambda: (args.sigma, args.delta),
            "trigonal": lambda: (args.sigma, args.delta),
            "cubic": lambda: (args.scale,),
        }[args.klass]()
        if any(p is None for p in params):
            raise InputError(f"class {args.klass} needs explicit parameters")
        h = random_in_class(args.klass, params, rotation=g)
    meta = {"class": args.klass, "seed": args.seed, "params": list(params)}
    return document("harmonic4", kelvin_from_harm4(h), meta)


def _cmd_decompose(doc: dict, args) -> dict:
    if doc["kind"] != "elasticity":
        raise InputError("decompose expects an elasticity document")
    qt = decompose_elasticity(doc["matrix"])
    return {
        "schema": SCHEMA,
        "alpha": qt.alpha,
        "beta": qt.beta,
        "a_prime": qt.a_prime,
        "b_prime": qt.b_prime,
        "h": kelvin_from_harm4(qt.h),
        "dilatation": qt.dilatation,
        "voigt": qt.voigt,
    }


def _cmd_invariants(doc: dict, args) -> dict:
    inv = invariants(_harm4_of(doc))
    return {"schema": SCHEMA, **inv.as_dict()}


def _cmd_covariants(doc: dict, args) -> dict:
    cov = covariants(_harm4_of(doc))
    return {"schema": SCHEMA, **cov.as_dict()}


def _cmd_multipoles(doc: dict, args) -> dict:
    h = _harm2_of(doc) if doc["kind"] == "symmetric2" else _harm4_of(doc)
    ms = maxwell_multipoles(h, seed=args.seed)
    residual = inner_norm(rebuild_from_multipoles(ms) - h) / inner_norm(h)
    return {
        "schema": SCHEMA,
        "vectors": [v for v in ms.vectors],
        "rebuild_residual": residual,
        "ill_conditioned": ms.ill_conditioned,
    }


def _cmd_factorize(doc: dict, args) -> dict:
    from .factorization import factor_equal_orders

    h = _harm4_of(doc)
    k = args.factors
    if 4 % k != 0:
        raise InputError("--factors must divide 4")
    n = 4 // k
    parts = factor_equal_orders(h, k, n)
    rebuilt = parts[0]
    for p in parts[1:]:
        rebuilt = harmonic_product(rebuilt, p)
    residual = inner_norm(rebuilt - h) / inner_norm(h)
    out_parts = []
    for p in parts:
        if p.order == 4:
            out_parts.append({"order": 4, "kelvin": kelvin_from_harm4(p)})
        elif p.order == 2:
            out_parts.append({"order": 2, "matrix": p.matrix()})
        else:
            out_parts.append({"order": 1, "vector": p.vector()})
    return {"schema": SCHEMA, "factors": out_parts, "residual": residual}


def _cmd_square_diff(doc: dict, args) -> dict:
    h = _harm4_of(doc)
    h1, h2 = square_difference(h)
    rebuilt = harmonic_product(h1, h1) - harmonic_product(h2, h2)
    residual = inner_norm(rebuilt - h) / max(inner_norm(h), 1e-300)
    return {
        "schema": SCHEMA,
        "h1": h1.matrix(),
        "h2": h2.matrix(),
        "residual": residual,
    }


_RECONSTRUCTORS = {
    "transverse": reconstruct_transverse,
    "orthotropic": reconstruct_orthotropic,
}


def _cmd_reconstruct(doc: dict, args) -> dict:
    h = _harm4_of(doc)
    tag = args.klass or classify(h, tol=args.tol).tag
    if tag in _RECONSTRUCTORS:
        rebuilt = _RECONSTRUCTORS[tag](h)
    elif tag == "tetragonal":
        s = tetragonal_split(h, 1)
        rebuilt = s.transverse_part + s.cubic_part
    elif tag == "trigonal":
        s = trigonal_split(h, 1)
        rebuilt = s.transverse_part + s.cubic_part
    else:
        raise DegenerateClassError(f"no reconstruction for class {tag!r}", tag)
    residual = inner_norm(rebuilt - h) / max(inner_norm(h), 1e-300)
    return {
        "schema": SCHEMA,
        "class": tag,
        "residual": residual,
        "reconstructed": kelvin_from_harm4(rebuilt),
    }


def _cmd_split(doc: dict, args) -> dict:
    h = _harm4_of(doc)
    tag = args.klass or classify(h, tol=args.tol).tag
    if tag == "tetragonal":
        s = tetragonal_split(h, args.branch)
    elif tag == "trigonal":
        s = trigonal_split(h, args.branch)
    else:
        raise DegenerateClassError(f"split applies to tetragonal/trigonal, not {tag!r}", tag)
    residual = inner_norm(s.transverse_part + s.cubic_part - h) / inner_norm(h)
    return {
        "schema": SCHEMA,
        "class": tag,
        "branch": s.branch,
        "transverse_part": kelvin_from_harm4(s.transverse_part),
        "cubic_part": kelvin_from_harm4(s.cubic_part),
        "residual": residual,
    }


def _cmd_classify(doc: dict, args) -> dict:
    label = classify(_harm4_of(doc), tol=args.tol)
    return {"schema": SCHEMA, "tag": label.tag, "residual": label.residual}


def _cmd_verify(doc: dict, args) -> dict:
    if doc["kind"] == "elasticity":
        m = check_elasticity_kelvin(doc["matrix"])
        back = recompose_elasticity(decompose_elasticity(m))
        residual = float(np.linalg.norm(back - m) / max(np.linalg.norm(m), 1e-300))
        return {
            "schema": SCHEMA,
            "identity": "decompose-recompose round trip",
            "residual": residual,
        }
    h = _harm4_of(doc)
    label = classify(h, tol=args.tol)
    out = {"schema": SCHEMA, "class": label.tag, "residual": label.residual}
    out["identity"] = {
        "isotropic": "zero tensor",
        "transverse": "quadratic-covariant reconstruction",
        "orthotropic": "axis-covariant reconstruction",
        "tetragonal": "transverse + cubic split",
        "trigonal": "transverse + cubic split",
        "cubic": "octahedral invariance",
        "lower": "none (no reconstruction applies)",
    }[label.tag]
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="htk",
        description="harmonic decomposition, factorization and reconstruction "
        "of 3D harmonic and elasticity tensors",
    )
    parser.add_argument("--input", help="read the input document from a file")
    parser.add_argument("--output", help="write the result to a file")
    parser.add_argument("--tol", type=float, default=1e-7, help="classification tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="emit a randomly rotated class member")
    gen.add_argument("--class", dest="klass", required=True,
                     choices=["isotropic", "transverse", "orthotropic",
                              "tetragonal", "trigonal", "cubic"])
    gen.add_argument("--delta", type=float)
    gen.add_argument("--sigma", type=float)
    gen.add_argument("--scale", type=float, default=1.0)
    gen.add_argument("--lambdas", type=lambda s: [float(x) for x in s.split(",")])
    gen.add_argument("--seed", type=int, default=0)

    for name in ("decompose", "invariants", "covariants", "square-diff", "classify", "verify"):
        sub.add_parser(name)
    mp = sub.add_parser("multipoles")
    mp.add_argument("--seed", type=int, default=1234)
    fz = sub.add_parser("factorize")
    fz.add_argument("--factors", type=int, default=2, choices=[1, 2, 4])
    rc = sub.add_parser("reconstruct")
    rc.add_argument("--class", dest="klass",
                    choices=["transverse", "orthotropic", "tetragonal", "trigonal"])
    sp = sub.add_parser("split")
    sp.add_argument("--class", dest="klass", choices=["tetragonal", "trigonal"])
    sp.add_argument("--branch", type=int, default=1, choices=[1, 2])
    return parser


_HANDLERS = {
    "decompose": _cmd_decompose,
    "invariants": _cmd_invariants,
    "covariants": _cmd_covariants,
    "multipoles": _cmd_multipoles,
    "factorize": _cmd_factorize,
    "square-diff": _cmd_square_diff,
    "reconstruct": _cmd_reconstruct,
    "split": _cmd_split,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            result = _cmd_generate(args)
        else:
            if args.input:
                with open(args.input) as fh:
                    text = fh.read()
            else:
                text = sys.stdin.read()
            doc = read_document(text)
            result = _HANDLERS[args.command](doc, args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except DegenerateClassError as err:
        print(f"degenerate class: {err}", file=sys.stderr)
        return 2
    except (ValueError, RootPairingError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    text = dumps(result) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
