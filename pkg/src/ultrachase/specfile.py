"""JSON operator spec files.

Layout::

    {
      "base": 2,
      "domain":   {"index": "omega", "weights": [{"exp": "0/1"}], "tail": {"exp": "0/1"}},
      "codomain": {"index": {"finite": 3}, "weights": [...]},
      "operator": {
        "sparse":    [{"j": 0, "i": 0, "a": [["-3/1", "1/1"]]}],
        "row_tails": [{"j": 1, "i_start": 2, "lead": [["0/1", "1/1"]], "ratio": "1/1"}],
        "diag_tail": {"j_start": 4, "lead": [["0/1", "1/1"]], "ratio": "1/2"}
      },
      "params": {"r": {"exp": "0/1"}, "max_steps": 64}
    }

Rationals are ``"num/den"`` strings. Norms are exponents of the base.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .operators import DiagTail, OperatorDesc, RowTail
from .spaces import OMEGA, IndexSet, WeightFamily
from .valuation import NormValue, Scalar, is_prime, parse_rational


class SpecError(ValueError):
    """Malformed spec file; ``where`` names the line or JSON field."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


@dataclass
class Spec:
    base: int
    operator: OperatorDesc
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def _get(obj, key, where, kind=None, required=True):
    if not isinstance(obj, dict):
        raise SpecError(where, "expected an object")
    if key not in obj:
        if required:
            raise SpecError(f"{where}.{key}" if where else key, "missing field")
        return None
    val = obj[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise SpecError(f"{where}.{key}" if where else key, f"expected {getattr(kind, '__name__', kind)}")
    return val


def _wrap(where, fn, *args):
    try:
        return fn(*args)
    except SpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise SpecError(where, str(exc)) from None


def parse_norm(obj, where) -> NormValue:
    return _wrap(where, NormValue.from_json, obj)


def parse_scalar(obj, where) -> Scalar:
    return _wrap(where, Scalar.from_json, obj)


def parse_family(obj, where) -> WeightFamily:
    idx = _get(obj, "index", where)
    if idx == "omega":
        index = OMEGA
    elif isinstance(idx, dict) and isinstance(idx.get("finite"), int) and not isinstance(idx.get("finite"), bool):
        index = IndexSet(idx["finite"])
    else:
        raise SpecError(f"{where}.index", 'expected "omega" or {"finite": n}')
    weights = _get(obj, "weights", where, list, required=False) or []
    explicit = tuple(parse_norm(w, f"{where}.weights[{k}]") for k, w in enumerate(weights))
    tail = obj.get("tail")
    tail = None if tail is None else parse_norm(tail, f"{where}.tail")
    if index.is_omega and tail is None:
        raise SpecError(f"{where}.tail", "omega family needs a tail weight")
    return _wrap(where, WeightFamily, index, explicit, tail)


def parse_operator(obj, domain, codomain, where="operator") -> OperatorDesc:
    sparse = {}
    for k, e in enumerate(_get(obj, "sparse", where, list, required=False) or []):
        w = f"{where}.sparse[{k}]"
        j = _get(e, "j", w, int)
        i = _get(e, "i", w, int)
        if (j, i) in sparse:
            raise SpecError(w, f"duplicate entry ({j},{i})")
        sparse[(j, i)] = parse_scalar(_get(e, "a", w), f"{w}.a")
    row_tails = {}
    for k, e in enumerate(_get(obj, "row_tails", where, list, required=False) or []):
        w = f"{where}.row_tails[{k}]"
        j = _get(e, "j", w, int)
        if j in row_tails:
            raise SpecError(w, f"second tail in row {j}")
        row_tails[j] = RowTail(
            _get(e, "i_start", w, int),
            parse_scalar(_get(e, "lead", w), f"{w}.lead"),
            _wrap(f"{w}.ratio", parse_rational, _get(e, "ratio", w)),
        )
    diag = None
    d = obj.get("diag_tail") if isinstance(obj, dict) else None
    if d is not None:
        w = f"{where}.diag_tail"
        diag = DiagTail(
            _get(d, "j_start", w, int),
            parse_scalar(_get(d, "lead", w), f"{w}.lead"),
            _wrap(f"{w}.ratio", parse_rational, _get(d, "ratio", w)),
        )
    return OperatorDesc(domain, codomain, sparse, row_tails, diag)


def parse_spec(text: str) -> Spec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    if not isinstance(doc, dict):
        raise SpecError("line 1", "spec must be a JSON object")
    base = doc.get("base", 2)
    if not isinstance(base, int) or isinstance(base, bool) or not is_prime(base):
        raise SpecError("base", "must be a prime integer")
    domain = parse_family(_get(doc, "domain", ""), "domain")
    codomain = parse_family(_get(doc, "codomain", ""), "codomain")
    op = parse_operator(_get(doc, "operator", "", dict), domain, codomain)
    params = {}
    raw = doc.get("params") or {}
    if "r" in raw:
        params["r"] = parse_norm(raw["r"], "params.r")
    if "max_steps" in raw:
        params["max_steps"] = _get(raw, "max_steps", "params", int)
    extra = {k: v for k, v in doc.items() if k not in ("base", "domain", "codomain", "operator", "params")}
    return Spec(base, op, params, extra)


def dump_spec(spec: Spec) -> dict:
    f = spec.operator
    op = {
        "sparse": [{"j": j, "i": i, "a": a.to_json()} for (j, i), a in f.sparse.items()],
        "row_tails": [
            {"j": j, "i_start": rt.i_start, "lead": rt.lead.to_json(), "ratio": _rat(rt.ratio)}
            for j, rt in f.row_tails.items()
        ],
        "diag_tail": None
        if f.diag_tail is None
        else {
            "j_start": f.diag_tail.j_start,
            "lead": f.diag_tail.lead.to_json(),
            "ratio": _rat(f.diag_tail.ratio),
        },
    }
    doc = {
        "base": spec.base,
        "domain": f.domain.to_json(),
        "codomain": f.codomain.to_json(),
        "operator": op,
    }
    params = {}
    if "r" in spec.params:
        params["r"] = spec.params["r"].to_json()
    if "max_steps" in spec.params:
        params["max_steps"] = spec.params["max_steps"]
    if params:
        doc["params"] = params
    doc.update(spec.extra)
    return doc


def _rat(q) -> str:
    return f"{q.numerator}/{q.denominator}"


def canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc: dict) -> str:
    return hashlib.sha256(canonical(doc).encode()).hexdigest()
