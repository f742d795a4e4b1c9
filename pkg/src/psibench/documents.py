"""Load and save workbench documents: UTF-8 JSON, schema-validated.

Polynomial payloads are arrays of {coefficient, monomial} with monomials as
[[generator-id, exponent], ...]; generator ids are plain strings or
{"theta": ..., "indices": [...]} for iterated-operation variables.  A small
expression grammar (name[indices]^exp products joined by + and -) covers
command-line element input.
"""

from __future__ import annotations

import hashlib
import json
import re
from importlib import resources

try:
    import jsonschema
except ImportError:  # fall back to the structural validator below
    jsonschema = None

from .atiyah import PrePsiAlgebra
from .groebner import groebner_build
from .lift import Lift, UnstablePresentation
from .modules import ModuleSymbol, PsiModule
from .rings import Element, GeneratorSymbol, WeightedRing


def _schema() -> dict:
    text = resources.files("psibench").joinpath("schema/workbench.schema.json").read_text()
    return json.loads(text)


_SCHEMA = None


class DocumentError(ValueError):
    """A workbench document does not match the shipped schema."""


def validate_document(doc: dict) -> dict:
    """Validate against the shipped schema: through jsonschema when it is
    installed, otherwise through the equivalent structural checks below."""
    global _SCHEMA
    if jsonschema is not None:
        if _SCHEMA is None:
            _SCHEMA = _schema()
        try:
            jsonschema.validate(doc, _SCHEMA)
        except jsonschema.ValidationError as exc:
            raise DocumentError(f"invalid document: {exc.message}") from exc
        return doc
    _structural_validate(doc)
    return doc


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise DocumentError(f"invalid document: {message}")


def _check_generator_id(gid) -> None:
    if isinstance(gid, str):
        _expect(bool(gid), "generator ids must be non-empty")
        return
    _expect(isinstance(gid, dict) and set(gid) == {"theta", "indices"},
            "multi-index ids need exactly the keys theta and indices")
    _expect(isinstance(gid["theta"], str) and gid["theta"], "theta must be a string")
    _expect(isinstance(gid["indices"], list)
            and all(isinstance(i, int) and i >= 0 for i in gid["indices"]),
            "indices must be non-negative integers")


def _check_monomial(mono) -> None:
    _expect(isinstance(mono, list), "monomials are arrays of [id, exponent] pairs")
    for pair in mono:
        _expect(isinstance(pair, list) and len(pair) == 2, "bad monomial entry")
        _check_generator_id(pair[0])
        _expect(isinstance(pair[1], int) and pair[1] >= 1, "exponents are positive integers")


def _check_polynomial(poly) -> None:
    _expect(isinstance(poly, list), "polynomials are arrays of terms")
    for term in poly:
        _expect(isinstance(term, dict) and set(term) == {"coefficient", "monomial"},
                "terms need exactly coefficient and monomial")
        _expect(isinstance(term["coefficient"], int), "coefficients are integers")
        _check_monomial(term["monomial"])


def _structural_validate(doc) -> None:
    _expect(isinstance(doc, dict), "document must be a JSON object")
    kind = doc.get("kind")
    _expect(kind in ("pre-psi-algebra", "presentation", "psi-module"),
            f"unknown kind {kind!r}")
    _expect(isinstance(doc.get("prime"), int) and doc["prime"] >= 2,
            "prime must be an integer >= 2")
    _expect(isinstance(doc.get("truncation"), int) and doc["truncation"] >= 1,
            "truncation must be a positive integer")
    if kind == "pre-psi-algebra":
        gens = doc.get("generators")
        _expect(isinstance(gens, list), "generators must be a list")
        for g in gens:
            _expect(isinstance(g, dict) and {"id", "weight", "layers"} <= set(g)
                    and set(g) <= {"id", "weight", "layers"},
                    "generators need exactly id, weight and layers")
            _check_generator_id(g["id"])
            _expect(isinstance(g["weight"], int) and g["weight"] >= 2,
                    "generator weights are integers >= 2")
            for layer in g["layers"]:
                _check_polynomial(layer)
        for m in doc.get("monomial_relations", []):
            _check_monomial(m)
        for r in doc.get("graded_relations", []):
            _check_polynomial(r)
    elif kind == "presentation":
        gens = doc.get("generators")
        _expect(isinstance(gens, list), "generators must be a list")
        for g in gens:
            _expect(isinstance(g, dict) and set(g) == {"theta", "degree"},
                    "presentation generators need exactly theta and degree")
            _expect(isinstance(g["theta"], str) and g["theta"], "theta must be a string")
            _expect(isinstance(g["degree"], int) and g["degree"] >= 2,
                    "degrees are integers >= 2")
        for r in doc.get("relations", []):
            _check_polynomial(r)
        mz = doc.get("max_zero_indices", 1)
        _expect(isinstance(mz, int) and mz >= 0, "max_zero_indices must be >= 0")
    else:
        syms = doc.get("symbols")
        _expect(isinstance(syms, list), "symbols must be a list")
        for s in syms:
            _expect(isinstance(s, dict) and set(s) == {"id", "weight", "layers"},
                    "symbols need exactly id, weight and layers")
            _expect(isinstance(s["id"], str) and s["id"], "symbol ids are strings")
            _expect(isinstance(s["weight"], int) and s["weight"] >= 0,
                    "symbol weights are integers >= 0")
            _expect(isinstance(s["layers"], dict), "layers are an index-keyed object")
            for key, modelem in s["layers"].items():
                _expect(key.isdigit(), "layer keys are stringified indices")
                _expect(isinstance(modelem, list), "module elements are term arrays")
                for entry in modelem:
                    _expect(isinstance(entry, dict)
                            and set(entry) == {"coefficient", "symbol"},
                            "module terms need exactly coefficient and symbol")
                    _expect(isinstance(entry["coefficient"], int),
                            "coefficients are integers")
                    _expect(isinstance(entry["symbol"], str) and entry["symbol"],
                            "symbols are strings")


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return validate_document(doc)


def dump_document(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
        fh.write("\n")


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def document_digest(doc: dict) -> str:
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return "sha256:" + hashlib.sha256(payload).hexdigest()


# -- generator ids and polynomials ----------------------------------------------------


def id_to_json(sym: GeneratorSymbol):
    if not sym.indices:
        return sym.name
    return {"theta": sym.name, "indices": list(sym.indices)}


def id_from_json(obj):
    if isinstance(obj, str):
        return obj, ()
    return obj["theta"], tuple(obj["indices"])


def poly_to_json(e: Element) -> list:
    out = []
    for mono, coeff in e.sorted_terms():
        out.append({"coefficient": coeff,
                    "monomial": [[id_to_json(g), exp] for g, exp in mono]})
    return out


def poly_from_json(ring: WeightedRing, data, mod: int | None = None) -> Element:
    terms: dict = {}
    for entry in data:
        mono = []
        for gid, exp in entry["monomial"]:
            name, indices = id_from_json(gid)
            mono.append((ring.symbol(name, indices), exp))
        mono.sort(key=lambda ge: ge[0].sort_key)
        mono = tuple(mono)
        terms[mono] = terms.get(mono, 0) + entry["coefficient"]
    return ring.element(terms, mod=mod)


def mono_from_json(ring: WeightedRing, data) -> tuple:
    mono = []
    for gid, exp in data:
        name, indices = id_from_json(gid)
        mono.append((ring.symbol(name, indices), exp))
    return tuple(sorted(mono, key=lambda ge: ge[0].sort_key))


# -- element expressions ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)(?:\[(?P<idx>[0-9,\s]*)\])?"
    r"|(?P<op>[-+*^]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"cannot parse element expression at: {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            idx = m.group("idx")
            indices = tuple(int(s) for s in idx.split(",") if s.strip()) if idx is not None else ()
            tokens.append(("var", (m.group("name"), indices)))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


def parse_element(ring: WeightedRing, text: str, mod: int | None = None) -> Element:
    """Parse expressions like ``2*x^3 + x[1,2] - 7``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty element expression")
    total = ring.zero(mod)
    i = 0

    def parse_factor(i: int):
        kind, val = tokens[i]
        if kind == "int":
            return ring.scalar(val, mod), i + 1
        if kind == "var":
            name, indices = val
            factor = ring.gen(name, indices, mod=mod)
            i += 1
            if i + 1 < len(tokens) and tokens[i] == ("op", "^"):
                kind2, exp = tokens[i + 1]
                if kind2 != "int":
                    raise ValueError("exponent must be an integer literal")
                factor = factor**exp
                i += 2
            return factor, i
        raise ValueError(f"unexpected token {val!r} in element expression")

    sign = 1
    if tokens[0] == ("op", "-"):
        sign = -1
        i = 1
    elif tokens[0] == ("op", "+"):
        i = 1
    while i < len(tokens):
        term, i = parse_factor(i)
        while i < len(tokens) and tokens[i] == ("op", "*"):
            factor, i = parse_factor(i + 1)
            term = term * factor
        total = total + term * sign
        if i == len(tokens):
            break
        kind, op = tokens[i]
        if (kind, op) == ("op", "+"):
            sign = 1
        elif (kind, op) == ("op", "-"):
            sign = -1
        else:
            raise ValueError(f"expected + or - between terms, got {op!r}")
        i += 1
        if i == len(tokens):
            raise ValueError("element expression ends with an operator")
    return total


# -- pre-psi-algebra documents ---------------------------------------------------------


def algebra_from_document(doc: dict) -> PrePsiAlgebra:
    if doc["kind"] != "pre-psi-algebra":
        raise ValueError(f"expected a pre-psi-algebra document, got kind={doc['kind']!r}")
    p = doc["prime"]
    D = doc["truncation"]
    symbols = []
    for g in doc["generators"]:
        name, indices = id_from_json(g["id"])
        symbols.append(GeneratorSymbol(name, indices, g["weight"]))
    probe = WeightedRing(symbols, D)
    relations = [mono_from_json(probe, m) for m in doc.get("monomial_relations", [])]
    ring = WeightedRing(symbols, D, relations)
    psi_data = {}
    for g in doc["generators"]:
        name, indices = id_from_json(g["id"])
        psi_data[(name, indices)] = tuple(
            poly_from_json(ring, layer) for layer in g["layers"])
    gb = None
    graded = [poly_from_json(ring, r, mod=p) for r in doc.get("graded_relations", [])]
    graded = [r for r in graded if r]
    if graded:
        gb = groebner_build(graded, p)
    return PrePsiAlgebra(ring, p, psi_data, graded_gb=gb, name=doc.get("name", ""))


def algebra_to_document(algebra: PrePsiAlgebra) -> dict:
    ring = algebra.ring
    doc = {
        "kind": "pre-psi-algebra",
        "prime": algebra.p,
        "truncation": ring.truncation,
        "generators": [
            {"id": id_to_json(g), "weight": g.weight,
             "layers": [poly_to_json(layer) for layer in algebra.psi_data[g.key]]}
            for g in ring.generators
        ],
    }
    if ring.monomial_relations:
        doc["monomial_relations"] = [
            [[id_to_json(g), e] for g, e in m] for m in ring.monomial_relations]
    if algebra.graded_gb is not None:
        doc["graded_relations"] = [poly_to_json(b) for b in algebra.graded_gb]
    if algebra.name:
        doc["name"] = algebra.name
    return validate_document(doc)


# -- presentation documents --------------------------------------------------------------


def presentation_from_document(doc: dict, truncation: int | None = None,
                               validate: bool = True) -> UnstablePresentation:
    if doc["kind"] != "presentation":
        raise ValueError(f"expected a presentation document, got kind={doc['kind']!r}")
    D = truncation if truncation is not None else doc["truncation"]
    generators = [(g["theta"], g["degree"]) for g in doc["generators"]]
    relations = []
    for poly in doc.get("relations", []):
        spec: dict = {}
        for entry in poly:
            mono = []
            for gid, exp in entry["monomial"]:
                name, indices = id_from_json(gid)
                mono.append(((name, indices), exp))
            mono = tuple(sorted(mono))
            spec[mono] = spec.get(mono, 0) + entry["coefficient"]
        relations.append(spec)
    return UnstablePresentation(
        doc["prime"], generators, relations, D,
        max_zeros=doc.get("max_zero_indices", 1),
        name=doc.get("name", ""), validate=validate)


def presentation_to_document(pres: UnstablePresentation) -> dict:
    doc = {
        "kind": "presentation",
        "prime": pres.p,
        "truncation": pres.truncation,
        "generators": [{"theta": t, "degree": d} for t, d in pres.generators],
        "relations": [poly_to_json(r) for r in pres.relations],
        "max_zero_indices": pres.max_zeros,
    }
    if pres.name:
        doc["name"] = pres.name
    return validate_document(doc)


def lift_to_document(lift: Lift) -> dict:
    """A lift serializes as a pre-psi-algebra document (reloadable by the
    verify command) with the presentation and census attached."""
    doc = algebra_to_document(lift.pi)
    doc["presentation"] = presentation_to_document(lift.presentation)
    doc["census"] = {str(k): v for k, v in sorted(lift.census.items())}
    doc["k_max"] = lift.k_max
    doc["name"] = lift.presentation.name or "lift"
    return validate_document(doc)


# -- psi-module documents ------------------------------------------------------------------


def module_from_document(doc: dict) -> PsiModule:
    if doc["kind"] != "psi-module":
        raise ValueError(f"expected a psi-module document, got kind={doc['kind']!r}")
    symbols = [ModuleSymbol(s["id"], s["weight"]) for s in doc["symbols"]]
    layer_coords = {}
    for s in doc["symbols"]:
        q = s["weight"] // 2
        layers = [{} for _ in range(q + 1)]
        for key, modelem in s["layers"].items():
            i = int(key)
            if i > q:
                raise ValueError(
                    f"symbol {s['id']!r} at level {q} has a layer index {i}")
            coords: dict = {}
            for entry in modelem:
                coords[entry["symbol"]] = coords.get(entry["symbol"], 0) + entry["coefficient"]
            layers[i] = coords
        layer_coords[s["id"]] = layers
    return PsiModule(doc["prime"], doc["truncation"], symbols, layer_coords,
                     name=doc.get("name", ""))


def module_to_document(module: PsiModule) -> dict:
    doc = {
        "kind": "psi-module",
        "prime": module.p,
        "truncation": module.truncation,
        "symbols": [],
    }
    for s in module.symbols:
        layers = {}
        for i, layer in enumerate(module.layers[s.name]):
            if layer:
                layers[str(i)] = [
                    {"coefficient": c, "symbol": n}
                    for n, c in sorted(layer.coords.items())]
        doc["symbols"].append({"id": s.name, "weight": s.weight, "layers": layers})
    if module.name:
        doc["name"] = module.name
    return validate_document(doc)
