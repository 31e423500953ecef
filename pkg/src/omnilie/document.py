"""JSON structure documents: loading, validation and serialization.

A document has a ``patch`` descriptor and exactly one payload::

    {"patch": {"dim": 3, "rank": 3, "vars": ["x1", "x2", "x3"]},
     "algebroid": {"anchor": [["0", "-x3", "x2"], ...],
                   "structure": {"1,2": ["0", "0", "1"], ...}}}

Matrices are row-major arrays of expression strings.  Structure tensors are
keyed by 1-based index pairs ``"a,b"`` with ``a < b``; missing pairs are zero.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any

from .algebroid import AlgebroidData, NijenhuisOp
from .bundle import VectorField
from .dirac import FrameForm, LineForm, PiMap, TrivialForm
from .errors import InputError
from .jacobi import JacobiData
from .parser import parse_poly
from .poly import Patch, Poly, PolyMatrix
from .tensor import StructureTensor

PAYLOADS = ("algebroid", "jacobi", "pi", "nijenhuis", "omni", "poisson")


@dataclass
class Document:
    patch: Patch
    kind: str
    payload: Any
    digest: str


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def _poly(src, patch: Patch, where: str) -> Poly:
    if isinstance(src, int) and not isinstance(src, bool):
        src = str(src)
    if not isinstance(src, str):
        raise InputError(f"{where}: expected an expression string")
    try:
        return parse_poly(src, patch)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_matrix(rows, patch: Patch, shape: tuple[int, int], where: str) -> PolyMatrix:
    r, c = shape
    if r == 0:
        if rows not in (None, []):
            raise InputError(f"{where}: expected an empty matrix")
        return PolyMatrix.zeros(0, c, patch.dim_m)
    if not isinstance(rows, list) or len(rows) != r or \
            any(not isinstance(row, list) or len(row) != c for row in rows):
        raise InputError(f"{where}: expected a {r}x{c} matrix")
    return PolyMatrix([[_poly(rows[i][j], patch, f"{where}[{i + 1}][{j + 1}]")
                        for j in range(c)] for i in range(r)], r, c, patch.dim_m)


def parse_vector(items, patch: Patch, where: str) -> VectorField:
    n = patch.dim_m
    if not isinstance(items, list) or len(items) != n:
        raise InputError(f"{where}: expected {n} components")
    return VectorField(tuple(_poly(s, patch, f"{where}[{i + 1}]") for i, s in enumerate(items)), n)


def parse_structure(obj, patch: Patch, where: str) -> StructureTensor:
    k = patch.rank_e
    if obj is None:
        return StructureTensor.zero(k, patch.dim_m)
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object keyed by \"a,b\"")
    pairs = {}
    for key, comps in obj.items():
        try:
            a, b = (int(t) for t in key.split(","))
        except ValueError:
            raise InputError(f"{where}: bad index pair {key!r}") from None
        if not 1 <= a < b <= k:
            raise InputError(f"{where}: index pair {key!r} must satisfy 1 <= a < b <= {k}")
        if not isinstance(comps, list) or len(comps) != k:
            raise InputError(f"{where}[{key}]: expected {k} components")
        pairs[a - 1, b - 1] = tuple(_poly(s, patch, f"{where}[{key}][{c + 1}]")
                                    for c, s in enumerate(comps))
    return StructureTensor.from_pairs(k, patch.dim_m, pairs)


def parse_patch(obj) -> Patch:
    if not isinstance(obj, dict):
        raise InputError("patch: expected an object")
    dim, rank = _require(obj, "dim", "patch"), _require(obj, "rank", "patch")
    if not isinstance(dim, int) or not isinstance(rank, int):
        raise InputError("patch: dim and rank must be integers")
    names = obj.get("vars", [])
    if not isinstance(names, list) or any(not isinstance(v, str) or not v.isidentifier()
                                          for v in names):
        raise InputError("patch: vars must be a list of identifiers")
    return Patch(dim, rank, tuple(names))


def parse_algebroid(obj, patch: Patch, where: str = "algebroid") -> AlgebroidData:
    n, k = patch.dim_m, patch.rank_e
    anchor = obj.get("anchor") if isinstance(obj, dict) else None
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if anchor is None and n > 0:
        raise InputError(f"{where}: missing field 'anchor'")
    rho = parse_matrix(anchor, patch, (n, k), f"{where}.anchor")
    return AlgebroidData(patch, rho, parse_structure(obj.get("structure"), patch,
                                                     f"{where}.structure"))


def parse_jacobi(obj, patch: Patch) -> JacobiData:
    n = patch.dim_m
    if patch.rank_e != 1:
        raise InputError("jacobi: the patch must have rank 1")
    lam = parse_matrix(_require(obj, "lambda", "jacobi"), patch, (n, n), "jacobi.lambda")
    if not lam.is_antisymmetric():
        raise InputError("jacobi.lambda: matrix is not antisymmetric")
    x = parse_vector(obj.get("x", ["0"] * n), patch, "jacobi.x")
    return JacobiData(patch, lam, x)


def parse_pi(obj, patch: Patch) -> PiMap:
    n, k = patch.dim_m, patch.rank_e
    enc = _require(obj, "encoding", "pi")
    data = _require(obj, "data", "pi")
    if enc == "trivial":
        theta = parse_matrix(_require(data, "theta", "pi.data"), patch, (n, k), "pi.data.theta")
        return TrivialForm(patch, theta, parse_structure(data.get("omega"), patch,
                                                         "pi.data.omega"))
    if enc == "line":
        if k != 1:
            raise InputError("pi: line encoding needs rank 1")
        lam = parse_matrix(_require(data, "lambda", "pi.data"), patch, (n, n), "pi.data.lambda")
        if not lam.is_antisymmetric():
            raise InputError("pi.data.lambda: matrix is not antisymmetric")
        return LineForm(patch, lam, parse_vector(data.get("y", ["0"] * n), patch, "pi.data.y"))
    if enc == "frame":
        return FrameForm(patch, parse_matrix(_require(data, "matrix", "pi.data"), patch,
                                             (k * k + n, k * n + k), "pi.data.matrix"))
    raise InputError(f"pi: unknown encoding {enc!r} (expected trivial, line or frame)")


def parse_nijenhuis(obj, patch: Patch):
    a = parse_algebroid(_require(obj, "algebroid", "nijenhuis"), patch, "nijenhuis.algebroid")
    k = patch.rank_e
    nm = parse_matrix(_require(obj, "n_matrix", "nijenhuis"), patch, (k, k),
                      "nijenhuis.n_matrix")
    return a, NijenhuisOp(nm)


def parse_omni(obj, patch: Patch) -> dict:
    out = {"seed": obj.get("seed", 0), "count": obj.get("count", 25),
           "degree": obj.get("degree", 2)}
    for key, val in out.items():
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise InputError(f"omni.{key}: expected a non-negative integer")
    if out["count"] == 0:
        raise InputError("omni.count: need at least one sample")
    return out


def parse_poisson(obj, patch: Patch) -> PolyMatrix:
    n = patch.dim_m
    m = parse_matrix(_require(obj, "bivector", "poisson"), patch, (n, n), "poisson.bivector")
    if not m.is_antisymmetric():
        raise InputError("poisson.bivector: matrix is not antisymmetric")
    return m


_PARSERS = {"algebroid": parse_algebroid, "jacobi": parse_jacobi, "pi": parse_pi,
            "nijenhuis": parse_nijenhuis, "omni": parse_omni, "poisson": parse_poisson}


def load_document(text: str | bytes) -> Document:
    raw = text.encode("utf-8") if isinstance(text, str) else text
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"document is not valid UTF-8 JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise InputError("document must be a JSON object")
    patch = parse_patch(_require(obj, "patch", "document"))
    kinds = [key for key in PAYLOADS if key in obj]
    if len(kinds) != 1:
        raise InputError(f"document needs exactly one payload of {', '.join(PAYLOADS)}; "
                         f"found {kinds or 'none'}")
    kind = kinds[0]
    return Document(patch, kind, _PARSERS[kind](obj[kind], patch), digest)


# -- serialization -------------------------------------------------------

def matrix_json(m: PolyMatrix, names) -> list[list[str]]:
    return [[m[i, j].to_str(names) for j in range(m.cols)] for i in range(m.rows)]


def structure_json(t: StructureTensor, names) -> dict:
    return {f"{a + 1},{b + 1}": [p.to_str(names) for p in comps]
            for (a, b), comps in t.pairs().items()
            if any(not p.is_zero() for p in comps)}


def patch_json(patch: Patch) -> dict:
    return {"dim": patch.dim_m, "rank": patch.rank_e, "vars": list(patch.var_names)}


def algebroid_json(a: AlgebroidData) -> dict:
    names = a.patch.var_names
    return {"anchor": matrix_json(a.rho, names), "structure": structure_json(a.c, names)}


def jacobi_json(j: JacobiData) -> dict:
    names = j.patch.var_names
    return {"lambda": matrix_json(j.lam, names), "x": [p.to_str(names) for p in j.x_field]}


def pi_json(pi: PiMap) -> dict:
    names = pi.patch.var_names
    if isinstance(pi, TrivialForm):
        return {"encoding": "trivial", "data": {"theta": matrix_json(pi.theta, names),
                                                "omega": structure_json(pi.omega, names)}}
    if isinstance(pi, LineForm):
        return {"encoding": "line", "data": {"lambda": matrix_json(pi.lam, names),
                                             "y": [p.to_str(names) for p in pi.y]}}
    return {"encoding": "frame", "data": {"matrix": matrix_json(pi.to_frame().matrix, names)}}
