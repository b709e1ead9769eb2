"""JSON Schemas for everything the command line prints with ``--json``."""

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_FACETS = {"type": "array", "items": _INT_LIST}
_LABEL_MAP = {"type": "object", "additionalProperties": {"type": "integer"}}

COMPLEX = {
    "type": "object",
    "required": ["n", "facets"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "facets": _FACETS,
        "d": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
}

_FORBIDDEN = {
    "type": "object",
    "required": ["type", "R", "S", "kind", "map"],
    "properties": {
        "type": {"const": "ForbiddenMinor"},
        "R": _INT_LIST,
        "S": _INT_LIST,
        "kind": {"type": "string"},
        "map": _LABEL_MAP,
    },
}

_DECOMPOSITION = {
    "type": "object",
    "required": ["type", "steps", "nucleus"],
    "properties": {
        "type": {"const": "NuclearDecomposition"},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["op", "vertex"],
                "properties": {
                    "op": {"enum": ["StripGhost", "StripCone", "PeelLawrence"]},
                    "vertex": {"type": "integer"},
                },
            },
        },
        "nucleus": {
            "type": "object",
            "required": ["kind", "params"],
            "properties": {"kind": {"type": "string"}, "params": _INT_LIST, "M": _INT_LIST, "N": _INT_LIST},
        },
    },
}

_CIRCUIT = {
    "type": "object",
    "required": ["type", "support", "vector", "entry"],
    "properties": {
        "type": {"const": "Circuit"},
        "support": _INT_LIST,
        "vector": _INT_LIST,
        "entry": {"type": "integer"},
    },
}

_BAD_PAIR = {
    "type": "object",
    "required": ["type", "item", "R", "S", "map", "levels"],
    "properties": {
        "type": {"const": "BadPair"},
        "item": {"type": "integer", "minimum": 1, "maximum": 4},
        "R": _INT_LIST,
        "S": _INT_LIST,
        "map": _LABEL_MAP,
        "levels": _LABEL_MAP,
    },
}

_THEOREM = {"type": "object", "required": ["type", "rule"], "properties": {"type": {"const": "Theorem"}}}

_ON_MINOR = {
    "type": "object",
    "required": ["type", "R", "S", "certificate"],
    "properties": {
        "type": {"const": "OnMinor"},
        "R": _INT_LIST,
        "S": _INT_LIST,
        "certificate": {"anyOf": [_FORBIDDEN, _CIRCUIT, _BAD_PAIR, _THEOREM, _DECOMPOSITION]},
    },
}

BINARY_VERDICT = {
    "type": "object",
    "required": ["complex", "unimodular", "method"],
    "properties": {
        "complex": COMPLEX,
        "unimodular": {"type": "boolean"},
        "method": {"enum": ["Structural", "Minors", "Matrix", "All"]},
        "certificate": {"anyOf": [_FORBIDDEN, _DECOMPOSITION, _CIRCUIT]},
    },
}

D_VERDICT = {
    "type": "object",
    "required": ["complex", "verdict", "justification"],
    "properties": {
        "complex": COMPLEX,
        "verdict": {"enum": ["Unimodular", "NonUnimodular", "Unknown"]},
        "justification": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule", "anchor", "detail"],
                "properties": {"rule": {"type": "string"}, "anchor": {"type": "string"}, "detail": {"type": "string"}},
            },
        },
        "certificate": {"anyOf": [_FORBIDDEN, _DECOMPOSITION, _CIRCUIT, _BAD_PAIR, _THEOREM, _ON_MINOR]},
        "reason": {"type": "string"},
    },
    "if": {"properties": {"verdict": {"const": "Unknown"}}},
    "then": {"required": ["reason"], "not": {"required": ["certificate"]}},
}

CENSUS_REPORT = {
    "type": "object",
    "required": ["n", "methods", "seed", "labeled", "up_to_iso", "unimodular", "disagreements"],
    "properties": {
        "n": {"type": "integer"},
        "methods": {"type": "array", "items": {"type": "string"}},
        "seed": {"type": "integer"},
        "labeled": {"type": "integer"},
        "up_to_iso": {"type": "integer"},
        "unimodular": {"type": "integer"},
        "matrix_checked": {"type": "integer"},
        "checks": {"type": "object", "additionalProperties": {"type": "integer"}},
        "disagreements": {
            "type": "array",
            "items": {"type": "object", "required": ["n", "facets", "check", "detail"]},
        },
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}

CENSUS_COUNT = {
    "type": "object",
    "required": ["n", "up_to_iso", "count"],
    "properties": {"n": {"type": "integer"}, "up_to_iso": {"type": "boolean"}, "count": {"type": "integer"}},
}

CATALOG = {
    "type": "object",
    "required": ["complexes", "bad_pairs"],
    "properties": {
        "complexes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "n", "facets"],
                "properties": {"name": {"type": "string"}, "n": {"type": "integer"}, "facets": _FACETS},
            },
        },
        "bad_pairs": {
            "type": "array",
            "minItems": 4,
            "maxItems": 4,
            "items": {
                "type": "object",
                "required": ["item", "name", "n", "facets", "d"],
                "properties": {"facets": _FACETS, "d": _INT_LIST},
            },
        },
    },
}
