"""Versioned JSON certificate records."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ._version import __version__

__all__ = ["Certificate", "SCHEMA_VERSION", "to_jsonable"]

SCHEMA_VERSION = 1
VERDICTS = ("pass", "fail", "unknown")


def to_jsonable(x: Any) -> Any:
    """Complex numbers become [re, im]; non-finite floats become strings."""
    if isinstance(x, complex):
        return [to_jsonable(x.real), to_jsonable(x.imag)]
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if hasattr(x, "item") and callable(x.item) and getattr(x, "shape", None) == ():
        return to_jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


@dataclass
class Certificate:
    type: str
    map: str
    params: Dict[str, Any]
    samples: int
    values: Dict[str, Any]
    verdict: str
    seed: Optional[int] = None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION
    counterexamples: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> Dict[str, Any]:
        return to_jsonable({
            "schema_version": self.schema_version,
            "type": self.type,
            "map": self.map,
            "params": self.params,
            "samples": self.samples,
            "values": self.values,
            "counterexamples": self.counterexamples,
            "verdict": self.verdict,
            "seed": self.seed,
            "tool_version": self.tool_version,
        })

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Certificate":
        return cls(
            type=d["type"],
            map=d["map"],
            params=d["params"],
            samples=d["samples"],
            values=d["values"],
            verdict=d["verdict"],
            seed=d.get("seed"),
            tool_version=d.get("tool_version", __version__),
            schema_version=d.get("schema_version", SCHEMA_VERSION),
            counterexamples=d.get("counterexamples", []),
        )
