"""Element data: valences, bonding capacities, masses."""
from __future__ import annotations

from functools import lru_cache

from .._data import load_json

SUPPORTED_ELEMENTS = ("H", "B", "C", "N", "O", "F", "P", "S", "Cl", "Br", "I")
HALOGENS = frozenset({"F", "Cl", "Br", "I"})


class UnsupportedFeatureError(ValueError):
    """Raised for atoms, charges or syntax outside the supported subset."""


def charge_key(element: str, charge: int) -> str:
    if charge == 0:
        return element
    return f"{element}{charge:+d}"


@lru_cache(maxsize=None)
def _tables() -> dict:
    return load_json("valence.json")


def allowed_valences(element: str, charge: int = 0) -> tuple[int, ...]:
    try:
        return tuple(_tables()["valences"][charge_key(element, charge)])
    except KeyError:
        raise UnsupportedFeatureError(
            f"unsupported atom {charge_key(element, charge)}") from None


def max_valence(element: str, charge: int = 0) -> int:
    return max(allowed_valences(element, charge))


def capacity(element: str, charge: int = 0) -> int:
    """Bonding capacity used by the SELFIES derivation (H excluded)."""
    try:
        return _tables()["capacity"][charge_key(element, charge)]
    except KeyError:
        raise UnsupportedFeatureError(
            f"no bonding capacity for {charge_key(element, charge)}") from None


def implicit_hydrogens(element: str, charge: int, bond_sum: int) -> int:
    """Hydrogens needed to reach the smallest allowed valence >= bond_sum."""
    for v in allowed_valences(element, charge):
        if v >= bond_sum:
            return v - bond_sum
    return 0


def atomic_mass(element: str) -> float:
    return _tables()["masses"][element]


def atomic_number(element: str) -> int:
    return _tables()["atomic_numbers"][element]
