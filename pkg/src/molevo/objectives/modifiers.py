"""Score modifiers mapping raw descriptor or similarity values into [0, 1]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


class ModifierError(ValueError):
    pass


def _gauss(x: float, mu: float, sigma: float) -> float:
    return math.exp(-0.5 * ((x - mu) / sigma) ** 2)


def _ramp(x: float, one: float, zero: float) -> float:
    """Linear from 1 at ``one`` to 0 at ``zero`` (either direction), clamped."""
    t = (x - one) / (zero - one)
    return min(1.0, max(0.0, 1.0 - t))


def _trapezoid(x: float, a: float, b: float, c: float, d: float) -> float:
    if x <= a or x >= d:
        return 0.0
    if x < b:
        return (x - a) / (b - a)
    if x <= c:
        return 1.0
    return (d - x) / (d - c)


_KINDS = {
    "identity": ((), lambda x: x),
    "gaussian": (("mu", "sigma"), _gauss),
    "min_gaussian": (("mu", "sigma"), lambda x, mu, sigma: 1.0 if x <= mu else _gauss(x, mu, sigma)),
    "max_gaussian": (("mu", "sigma"), lambda x, mu, sigma: 1.0 if x >= mu else _gauss(x, mu, sigma)),
    "thresholded_linear": (("threshold",), lambda x, threshold: min(x, threshold) / threshold),
    "ramp": (("one", "zero"), _ramp),
    "trapezoid": (("a", "b", "c", "d"), _trapezoid),
}


@dataclass(frozen=True)
class ScoreModifier:
    kind: str = "identity"
    params: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ModifierError(f"unknown modifier kind {self.kind!r}")
        names, _ = _KINDS[self.kind]
        if len(self.params) != len(names):
            raise ModifierError(f"{self.kind} expects parameters {names}")
        if self.kind in ("gaussian", "min_gaussian", "max_gaussian") and self.params[1] <= 0:
            raise ModifierError("sigma must be positive")
        if self.kind == "thresholded_linear" and self.params[0] <= 0:
            raise ModifierError("threshold must be positive")

    def __call__(self, x: float) -> float:
        _, fn = _KINDS[self.kind]
        y = fn(float(x), *self.params)
        if not math.isfinite(y):
            return 0.0
        return min(1.0, max(0.0, y))

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreModifier":
        kind = d.get("kind", "identity")
        if kind not in _KINDS:
            raise ModifierError(f"unknown modifier kind {kind!r}")
        names, _ = _KINDS[kind]
        try:
            params = tuple(float(d[n]) for n in names)
        except KeyError as e:
            raise ModifierError(f"{kind} is missing parameter {e.args[0]!r}") from None
        return cls(kind, params)

    def to_dict(self) -> dict:
        names, _ = _KINDS[self.kind]
        return {"kind": self.kind, **dict(zip(names, self.params))}
