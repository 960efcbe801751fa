//! JSON schema of the emitted lines.

use serde_json::{json, Value};

fn report() -> Value {
    json!({
        "type": "object",
        "required": ["relation", "status", "failures"],
        "properties": {
            "relation": {"type": "string", "description": "name of the check"},
            "sector": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "degree": {"type": "integer", "minimum": 0},
            "window": {"type": "integer", "minimum": 0},
            "order": {"type": "integer", "minimum": 0},
            "status": {"enum": ["pass", "fail"]},
            "failures": {"type": "array", "items": {"$ref": "#/$defs/failure"}},
            "notes": {"type": "array", "items": {"type": "string"}}
        },
        "additionalProperties": false
    })
}

fn failure() -> Value {
    json!({
        "type": "object",
        "required": ["at"],
        "properties": {
            "at": {"type": "string", "description": "basis monomial or coefficient label"},
            "modes": {"type": "array", "items": {"type": "string"}},
            "residual": {
                "type": "array",
                "description": "nonzero residual vector as (monomial, coefficient) pairs",
                "items": {"type": "array", "prefixItems": [{"type": "string"}, {"type": "string"}], "minItems": 2, "maxItems": 2}
            },
            "message": {"type": "string"}
        },
        "additionalProperties": false
    })
}

fn series() -> Value {
    json!({
        "type": "object",
        "required": ["series", "data"],
        "properties": {
            "series": {"type": "string"},
            "prefactor": {"type": "string"},
            "z2_power": {"type": "string"},
            "dims": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {"sector": {"type": "string"}, "degree": {"type": "integer"}, "dim": {"type": "integer"}}
                }
            },
            "data": {"type": "object", "description": "truncated series: variables, order and nonzero terms"}
        }
    })
}

pub fn report_schema() -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "qboson output line",
        "oneOf": [{"$ref": "#/$defs/report"}, {"$ref": "#/$defs/series"}],
        "$defs": {"report": report(), "failure": failure(), "series": series()}
    })
}
