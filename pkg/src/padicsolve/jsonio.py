"""JSON encodings for numbers, problem specs, and solver certificates.

All run input comes through here: the CLI parses a problem file into
solver objects and serializes results back with stable key order, so a
fixed spec and seed give byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
import random
from typing import Any, Mapping

from .algebra import (SCALAR, SEQ, VECTOR, AlgebraElement, DomainSpec)
from .contraction import ContractiveMap, constant_map, identity_map
from .maps import (LinearFractionalParams, MobiusPairParams,
                   RationalPolyParams, SeqMapParams, km2009_params,
                   km_inner_family, make_linear_fractional, make_mobius,
                   make_rational_poly, make_seq_map, shifted_product_map)
from .number import INF, PadicNumber
from .recurrence import ConvergenceCertificate, CoupledSpec, RecurrenceSpec
from .sampling import sample_element
from .tree import (MODE_EDGE_TUPLE, MODE_EDGE_VALUE, MODE_VERTEX, TreeProblem,
                   TreeShape, constant_boundary, random_boundary)


class SpecError(ValueError):
    """Malformed problem spec; carries the offending field path."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"field '{field}': {message}")
        self.field = field


def _get(obj: Mapping, field: str, path: str, kind=None, default=...):
    if field not in obj:
        if default is not ...:
            return default
        raise SpecError(f"{path}{field}", "missing")
    value = obj[field]
    if kind is not None and not isinstance(value, kind):
        raise SpecError(f"{path}{field}",
                        f"expected {getattr(kind, '__name__', kind)}")
    return value


# -- numbers and elements ----------------------------------------------

def encode_valuation(v: int | float) -> int | str:
    return "inf" if v == INF else int(v)


def number_to_json(x: PadicNumber) -> dict:
    out: dict[str, Any] = {"prime": x.prime,
                           "valuation": "inf" if x.is_zero else x.valuation,
                           "unit_digits": x.unit_digits() if not x.is_zero else []}
    if x.is_zero and x.zero_floor is not None:
        out["floor"] = x.zero_floor
    return out


def number_from_json(obj: Any, prime: int, digits: int,
                     path: str = "value") -> PadicNumber:
    """Accepts an int, a [numerator, denominator] pair, or the full form."""
    if isinstance(obj, bool):
        raise SpecError(path, "expected a number literal")
    if isinstance(obj, int):
        return PadicNumber.from_int(obj, prime, digits)
    if isinstance(obj, list):
        if len(obj) != 2 or not all(isinstance(v, int) for v in obj):
            raise SpecError(path, "rational literal must be [num, den]")
        if obj[1] == 0:
            raise SpecError(path, "denominator must be nonzero")
        return PadicNumber.from_rational(obj[0], obj[1], prime, digits)
    if isinstance(obj, dict):
        p = _get(obj, "prime", f"{path}.", int, default=prime)
        if p != prime:
            raise SpecError(f"{path}.prime", f"expected prime {prime}")
        val = _get(obj, "valuation", f"{path}.")
        digs = _get(obj, "unit_digits", f"{path}.", list)
        if val == "inf":
            floor = _get(obj, "floor", f"{path}.", int, default=None)
            return PadicNumber.zero(p, digits, floor=floor)
        if not isinstance(val, int):
            raise SpecError(f"{path}.valuation", "expected int or \"inf\"")
        unit = 0
        for e, d in enumerate(digs):
            if not isinstance(d, int) or not 0 <= d < p:
                raise SpecError(f"{path}.unit_digits", f"digit {d!r} out of range")
            unit += d * p**e
        if unit == 0:
            raise SpecError(f"{path}.unit_digits", "unit part must be nonzero")
        return PadicNumber(p, val, unit, max(len(digs), 1))
    raise SpecError(path, "expected a number literal")


def element_to_json(x: AlgebraElement) -> dict:
    return {"kind": x.kind,
            "components": [number_to_json(c) for c in x.components]}


def element_from_json(obj: Any, prime: int, digits: int,
                      path: str = "value") -> AlgebraElement:
    if isinstance(obj, dict) and "kind" in obj:
        kind = _get(obj, "kind", f"{path}.", str)
        if kind not in (SCALAR, VECTOR, SEQ):
            raise SpecError(f"{path}.kind", f"unknown kind {kind!r}")
        comps = _get(obj, "components", f"{path}.", list)
        values = [number_from_json(c, prime, digits, f"{path}.components[{i}]")
                  for i, c in enumerate(comps)]
        return AlgebraElement(kind, tuple(values))
    return AlgebraElement.scalar(number_from_json(obj, prime, digits, path))


# -- domains -----------------------------------------------------------

_DOMAIN_KINDS = {"ep": DomainSpec.ep, "unit_ball": DomainSpec.unit_ball,
                 "unit_sphere": DomainSpec.unit_sphere}


def domain_from_json(obj: Any, path: str = "domain") -> DomainSpec:
    if isinstance(obj, str):
        if obj not in _DOMAIN_KINDS:
            raise SpecError(path, f"unknown domain {obj!r}")
        return _DOMAIN_KINDS[obj]()
    if isinstance(obj, dict):
        kind = _get(obj, "kind", f"{path}.", str)
        if kind not in _DOMAIN_KINDS:
            raise SpecError(f"{path}.kind", f"unknown domain {kind!r}")
        shape = _get(obj, "shape", f"{path}.", list, default=[SCALAR])
        if shape[0] == SCALAR:
            return _DOMAIN_KINDS[kind]()
        if shape[0] not in (VECTOR, SEQ) or len(shape) != 2:
            raise SpecError(f"{path}.shape", "expected [kind, length]")
        return _DOMAIN_KINDS[kind]((shape[0], int(shape[1])))
    raise SpecError(path, "expected a domain name or object")


# -- builtin maps -------------------------------------------------------

BUILTIN_MAP_IDS = ("mobius", "ratpoly", "linfrac", "seqmap", "seqmap-km2009",
                   "shiftprod", "constant", "identity")


def _mobius_from_json(params: Mapping, prime: int, digits: int,
                      path: str) -> ContractiveMap:
    values = {}
    for name in ("a", "b", "c", "a1", "b1", "c1"):
        values[name] = number_from_json(_get(params, name, f"{path}."),
                                        prime, digits, f"{path}.{name}")
    return make_mobius(MobiusPairParams(**values))


def _coeffs_from_json(items: Any, arity: int, prime: int, digits: int,
                      path: str) -> dict:
    if not isinstance(items, list):
        raise SpecError(path, "expected a list of {index, value} entries")
    out = {}
    for i, entry in enumerate(items):
        idx = _get(entry, "index", f"{path}[{i}].", list)
        if len(idx) != arity or not all(isinstance(e, int) for e in idx):
            raise SpecError(f"{path}[{i}].index", f"expected {arity} exponents")
        out[tuple(idx)] = number_from_json(_get(entry, "value", f"{path}[{i}]."),
                                           prime, digits, f"{path}[{i}].value")
    return out


def _ratpoly_from_json(params: Mapping, prime: int, digits: int,
                       path: str) -> ContractiveMap:
    arity = _get(params, "arity", f"{path}.", int)
    degree = _get(params, "max_degree", f"{path}.", int)
    num = _coeffs_from_json(_get(params, "numerator", f"{path}.", default=[]),
                            arity, prime, digits, f"{path}.numerator")
    den = _coeffs_from_json(_get(params, "denominator", f"{path}.", default=[]),
                            arity, prime, digits, f"{path}.denominator")
    c = number_from_json(_get(params, "constant", f"{path}."), prime, digits,
                         f"{path}.constant")
    c1 = number_from_json(_get(params, "constant1", f"{path}."), prime, digits,
                          f"{path}.constant1")
    return make_rational_poly(RationalPolyParams(arity, degree, num, den, c, c1))


def _linfrac_from_json(params: Mapping, prime: int, digits: int,
                       path: str) -> ContractiveMap:
    size = _get(params, "size", f"{path}.", int)

    def matrix(name):
        rows = _get(params, name, f"{path}.", list)
        return tuple(tuple(number_from_json(v, prime, digits,
                                            f"{path}.{name}[{i}][{j}]")
                           for j, v in enumerate(row))
                     for i, row in enumerate(rows))

    def vector(name):
        row = _get(params, name, f"{path}.", list)
        return tuple(number_from_json(v, prime, digits, f"{path}.{name}[{i}]")
                     for i, v in enumerate(row))

    return make_linear_fractional(LinearFractionalParams(
        size, matrix("numer_matrix"), vector("numer_const"),
        matrix("denom_matrix"), vector("denom_const")))


def _weights_from_json(obj: Any, truncation: int, prime: int, digits: int,
                       path: str) -> AlgebraElement:
    if obj == "ones" or obj is None:
        one = PadicNumber.one(prime, digits)
        return AlgebraElement.seq((one,) * truncation)
    if isinstance(obj, list):
        if len(obj) != truncation:
            raise SpecError(path, f"expected {truncation} weights")
        return AlgebraElement.seq(tuple(
            number_from_json(v, prime, digits, f"{path}[{i}]")
            for i, v in enumerate(obj)))
    raise SpecError(path, "expected \"ones\" or a list of numbers")


def _seq_params_from_json(params: Mapping, prime: int, digits: int,
                          path: str, preset: bool) -> SeqMapParams:
    truncation = _get(params, "truncation", f"{path}.", int)
    shift_count = _get(params, "shift_count", f"{path}.", int, default=1)
    weights = _weights_from_json(params.get("weights"), truncation, prime,
                                 digits, f"{path}.weights")
    if preset:
        theta = number_from_json(_get(params, "theta", f"{path}."), prime,
                                 digits, f"{path}.theta")
        return km2009_params(theta, truncation, weights=weights,
                             shift_count=shift_count)
    a = number_from_json(_get(params, "a", f"{path}."), prime, digits,
                         f"{path}.a")
    b = number_from_json(_get(params, "b", f"{path}."), prime, digits,
                         f"{path}.b")
    return SeqMapParams(truncation, weights, a, b,
                        km_inner_family(prime, digits),
                        inner_trusted=True, shift_count=shift_count)


def map_from_json(obj: Any, prime: int, digits: int, path: str = "map",
                  domain: DomainSpec | None = None) -> ContractiveMap:
    """Build a builtin map from its JSON literal.

    A plain string selects a parameter-free builtin; an object carries
    ``id`` and ``params``.  ``domain`` supplies the ambient set for
    constant and identity maps.
    """
    if isinstance(obj, str):
        obj = {"id": obj, "params": {}}
    if not isinstance(obj, dict):
        raise SpecError(path, "expected a map id or object")
    if obj.get("diagonal"):
        inner = {k: v for k, v in obj.items() if k != "diagonal"}
        return map_from_json(inner, prime, digits, path, domain).diagonal()
    map_id = _get(obj, "id", f"{path}.", str)
    params = _get(obj, "params", f"{path}.", dict, default={})
    if map_id == "mobius":
        return _mobius_from_json(params, prime, digits, f"{path}.params")
    if map_id == "ratpoly":
        return _ratpoly_from_json(params, prime, digits, f"{path}.params")
    if map_id == "linfrac":
        return _linfrac_from_json(params, prime, digits, f"{path}.params")
    if map_id in ("seqmap", "seqmap-km2009"):
        sp = _seq_params_from_json(params, prime, digits, f"{path}.params",
                                   preset=map_id == "seqmap-km2009")
        return make_seq_map(sp)
    if map_id == "shiftprod":
        sp = _seq_params_from_json(params, prime, digits, f"{path}.params",
                                   preset="theta" in params)
        return shifted_product_map(sp)
    if map_id == "constant":
        if domain is None:
            raise SpecError(f"{path}.id", "constant map needs a domain field")
        value = element_from_json(_get(params, "value", f"{path}.params."),
                                  prime, digits, f"{path}.params.value")
        arity = _get(params, "arity", f"{path}.params.", int, default=1)
        return constant_map(value, domain, arity=arity)
    if map_id == "identity":
        if domain is None:
            raise SpecError(f"{path}.id", "identity map needs a domain field")
        k = _get(params, "declared_exponent", f"{path}.params.", int, default=1)
        return identity_map(domain, prime, digits, declared_exponent=k)
    raise SpecError(f"{path}.id", f"unknown map id {map_id!r}; "
                    f"known: {', '.join(BUILTIN_MAP_IDS)}")


# -- problem specs ------------------------------------------------------

def _context(spec: Mapping, default_precision: int) -> tuple[int, int]:
    prime = _get(spec, "prime", "", int)
    if prime < 2:
        raise SpecError("prime", "must be >= 2")
    digits = _get(spec, "precision", "", int, default=default_precision)
    if digits < 1:
        raise SpecError("precision", "must be >= 1")
    return prime, digits


def load_solve_spec(spec: Mapping, default_precision: int = 60,
                    rng: random.Random | None = None):
    """Parse a recurrence problem: returns (RecurrenceSpec, initial, meta)."""
    prime, digits = _context(spec, default_precision)
    domain = None
    if "domain" in spec:
        domain = domain_from_json(spec["domain"])
    terms = _get(spec, "terms", "", list)
    if not terms:
        raise SpecError("terms", "need at least one summand")
    rows, offset_rows = [], []
    for i, term in enumerate(terms):
        factors = _get(term, "factors", f"terms[{i}].", list)
        if not factors:
            raise SpecError(f"terms[{i}].factors", "need at least one factor")
        row, offs = [], []
        for j, factor in enumerate(factors):
            fpath = f"terms[{i}].factors[{j}]"
            row.append(map_from_json(_get(factor, "map", f"{fpath}."),
                                     prime, digits, f"{fpath}.map", domain))
            offs.append(_get(factor, "offset", f"{fpath}.", int, default=0))
        rows.append(tuple(row))
        offset_rows.append(tuple(offs))
    rule = _get(spec, "offset_rule", "", str, default="printed")
    try:
        rec = RecurrenceSpec(tuple(rows), tuple(offset_rows), offset_rule=rule)
    except ValueError as exc:
        raise SpecError("terms", str(exc)) from exc
    initial_spec = _get(spec, "initial", "")
    if initial_spec == "random":
        rng = rng or random.Random(0)
        initial = [sample_element(rec.domain, prime, digits, rng)
                   for _ in range(rec.window_length)]
    elif isinstance(initial_spec, list):
        initial = [element_from_json(v, prime, digits, f"initial[{i}]")
                   for i, v in enumerate(initial_spec)]
    else:
        raise SpecError("initial", "expected \"random\" or a list")
    meta = {"prime": prime, "precision": digits,
            "target": spec.get("target")}
    return rec, initial, meta


def load_coupled_spec(spec: Mapping, default_precision: int = 60,
                      rng: random.Random | None = None):
    """Parse a coupled-system problem: returns (CoupledSpec, initial, meta)."""
    prime, digits = _context(spec, default_precision)
    domain = domain_from_json(spec["domain"]) if "domain" in spec else None
    families = _get(spec, "families", "", dict)
    parsed = {}
    for key in ("f", "g", "h"):
        fam = _get(families, key, "families.", list)
        pairs = []
        for i, pair in enumerate(fam):
            ppath = f"families.{key}[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SpecError(ppath, "expected a [first, second] map pair")
            pairs.append(tuple(
                map_from_json(m, prime, digits, f"{ppath}[{j}]", domain)
                for j, m in enumerate(pair)))
        if not pairs:
            raise SpecError(f"families.{key}", "need at least one pair")
        parsed[key] = tuple(pairs)
    try:
        coupled = CoupledSpec(parsed["f"], parsed["g"], parsed["h"])
    except ValueError as exc:
        raise SpecError("families", str(exc)) from exc
    initial_spec = _get(spec, "initial", "")
    if initial_spec == "random":
        rng = rng or random.Random(0)
        initial = tuple(sample_element(coupled.domain, prime, digits, rng)
                        for _ in range(3))
    elif isinstance(initial_spec, list) and len(initial_spec) == 3:
        initial = tuple(element_from_json(v, prime, digits, f"initial[{i}]")
                        for i, v in enumerate(initial_spec))
    else:
        raise SpecError("initial", "expected \"random\" or a list of 3 values")
    meta = {"prime": prime, "precision": digits, "target": spec.get("target")}
    return coupled, initial, meta


_TREE_MODES = {MODE_EDGE_TUPLE, MODE_EDGE_VALUE, MODE_VERTEX}


def load_tree_spec(spec: Mapping, default_precision: int = 60,
                   rng: random.Random | None = None):
    """Parse a tree problem: returns (TreeProblem, meta)."""
    prime, digits = _context(spec, default_precision)
    domain = domain_from_json(spec["domain"]) if "domain" in spec else None
    branching = _get(spec, "branching", "", int)
    depth = _get(spec, "depth", "", int)
    cap = _get(spec, "max_vertices", "", int, default=None)
    mode = _get(spec, "mode", "", str, default=MODE_EDGE_TUPLE)
    if mode not in _TREE_MODES:
        raise SpecError("mode", f"unknown mode {mode!r}")
    try:
        shape = (TreeShape(branching, depth) if cap is None
                 else TreeShape(branching, depth, max_vertices=cap))
    except ValueError as exc:
        raise SpecError("depth", str(exc)) from exc
    if "maps" in spec:
        raw = _get(spec, "maps", "", list)
        maps = tuple(map_from_json(m, prime, digits, f"maps[{i}]", domain)
                     for i, m in enumerate(raw))
    else:
        maps = (map_from_json(_get(spec, "map", ""), prime, digits, "map",
                              domain),)
    boundary_spec = _get(spec, "boundary", "", default="constant")
    boundary = _boundary_from_json(boundary_spec, shape, maps[0], prime,
                                   digits, rng)
    try:
        problem = TreeProblem(shape, maps, boundary, mode=mode)
    except ValueError as exc:
        raise SpecError("map", str(exc)) from exc
    meta = {"prime": prime, "precision": digits, "target": spec.get("target")}
    return problem, meta


def _boundary_from_json(obj: Any, shape: TreeShape, ref_map: ContractiveMap,
                        prime: int, digits: int,
                        rng: random.Random | None):
    if obj == "random":
        rng = rng or random.Random(0)
        return random_boundary(shape, ref_map.domain, prime, digits, rng)
    if obj == "constant":
        return constant_boundary(shape, _ones_element(ref_map.domain, prime, digits))
    if isinstance(obj, dict) and "constant" in obj:
        value = element_from_json(obj["constant"], prime, digits,
                                  "boundary.constant")
        return constant_boundary(shape, value)
    if isinstance(obj, list):
        leaves = shape.levels()[-1]
        if len(obj) != len(leaves):
            raise SpecError("boundary", f"expected {len(leaves)} leaf values")
        return {leaf: element_from_json(v, prime, digits, f"boundary[{i}]")
                for i, (leaf, v) in enumerate(zip(leaves, obj))}
    raise SpecError("boundary", "expected \"constant\", \"random\", "
                    "{\"constant\": value} or a list")


def _ones_element(domain: DomainSpec, prime: int, digits: int) -> AlgebraElement:
    one = PadicNumber.one(prime, digits)
    if domain.shape[0] == SCALAR:
        return AlgebraElement.scalar(one)
    count = domain.shape[1]
    values = (one,) * count
    return (AlgebraElement.seq(values) if domain.shape[0] == SEQ
            else AlgebraElement.vector(values))


def load_eval_spec(spec: Mapping, default_precision: int = 60):
    """Parse a single-evaluation request: returns (map, args, meta)."""
    prime, digits = _context(spec, default_precision)
    domain = domain_from_json(spec["domain"]) if "domain" in spec else None
    f = map_from_json(_get(spec, "map", ""), prime, digits, "map", domain)
    raw = _get(spec, "args", "", list)
    if len(raw) != f.arity:
        raise SpecError("args", f"map expects {f.arity} arguments")
    args = tuple(element_from_json(v, prime, digits, f"args[{i}]")
                 for i, v in enumerate(raw))
    return f, args, {"prime": prime, "precision": digits}


# -- output -------------------------------------------------------------

def certificate_to_json(cert: ConvergenceCertificate) -> dict:
    return {
        "iterations": cert.iterations,
        "limit": element_to_json(cert.limit),
        "limit_text": [c.text() for c in cert.limit.components],
        "residual_valuation": encode_valuation(cert.residual_valuation),
        "guaranteed_valuation": encode_valuation(cert.guaranteed_valuation),
        "trace": [[n + 1, encode_valuation(g)] for n, g in enumerate(cert.trace)],
    }


def trace_to_csv(cert: ConvergenceCertificate) -> str:
    lines = ["n,gap_valuation"]
    for n, g in enumerate(cert.trace):
        lines.append(f"{n + 1},{encode_valuation(g)}")
    return "\n".join(lines) + "\n"


def level_digest(values) -> str:
    text = "|".join(",".join(c.text() for c in v.components) for v in values)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
