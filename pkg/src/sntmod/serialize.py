"""JSON serialization for exact scalars, matrices, modules and elements.

Exact scalars travel as strings so that rationals survive JSON unharmed:
"3/4" or "5" for rationals, "r mod p" for prime-field residues.  Truncated
polynomials are coefficient arrays in ascending degree.
"""
from __future__ import annotations

from fractions import Fraction

from .fields import QQ, GF, FpElement, PrimeField, RationalField
from .sntmodule import SntModule
from .tpoly import TruncPoly


def field_to_json(field):
    if isinstance(field, RationalField):
        return {"type": "Q"}
    if isinstance(field, PrimeField):
        return {"type": "GF", "p": field.p}
    raise TypeError("unknown field %r" % (field,))


def field_from_json(obj):
    if obj.get("type") == "Q":
        return QQ
    if obj.get("type") == "GF":
        return GF(int(obj["p"]))
    raise ValueError("unknown field descriptor %r" % (obj,))


def scalar_to_str(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else \
            "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, FpElement):
        return "%d mod %d" % (x.v, x.p)
    if isinstance(x, int):
        return str(x)
    raise TypeError("not an exact scalar: %r" % (x,))


def scalar_from_str(field, s):
    s = str(s).strip()
    if " mod " in s:
        r, p = s.split(" mod ")
        if not isinstance(field, PrimeField) or field.p != int(p):
            raise ValueError("residue %r does not live in %r" % (s, field))
        return field(int(r))
    if "/" in s:
        num, den = s.split("/")
        if isinstance(field, PrimeField):
            return field(int(num)) / field(int(den))
        return Fraction(int(num), int(den))
    return field(int(s))


def matrix_to_json(A):
    return [[scalar_to_str(x) for x in row] for row in A]


def matrix_from_json(field, rows):
    return [[scalar_from_str(field, x) for x in row] for row in rows]


def vector_from_json(field, row):
    return [scalar_from_str(field, x) for x in row]


def tpoly_to_json(p):
    return [scalar_to_str(c) for c in p.coeffs]


def tpoly_from_json(field, coeffs, K):
    return TruncPoly(field, [scalar_from_str(field, c) for c in coeffs], K)


def module_to_json(M, meta=None):
    out = {
        "field": field_to_json(M.field),
        "dim": M.dim,
        "t_action": matrix_to_json(M.t),
        "gram": matrix_to_json(M.gram),
    }
    if M.partition is not None:
        out["partition"] = list(M.partition)
    if meta:
        out["meta"] = meta
    return out


def module_from_json(obj):
    field = field_from_json(obj["field"])
    T = matrix_from_json(field, obj["t_action"])
    G = matrix_from_json(field, obj["gram"])
    part = tuple(obj["partition"]) if "partition" in obj else None
    return SntModule(field, T, G, partition=part)


def tensor_element_to_json(x):
    sp = x.space
    return {
        "field": field_to_json(sp.field),
        "partition": list(sp.ks),
        "v_gram": matrix_to_json(sp.V.gram),
        "coords": matrix_to_json(x.coords),
    }


def tensor_element_from_json(obj):
    from .orbits import OrthSpace, TensorSpace
    field = field_from_json(obj["field"])
    V = OrthSpace(field, matrix_from_json(field, obj["v_gram"]))
    sp = TensorSpace(field, tuple(obj["partition"]), V)
    return sp.element(matrix_from_json(field, obj["coords"]))
