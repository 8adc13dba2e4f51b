"""Resource guards and tool-level error types.

Every enumeration (lattices, endomorphism scans, hom-space scans,
isomorphism searches) is bounded; exceeding a bound raises
GuardExceeded naming the offending count and the bound, never a silent
truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


class GuardExceeded(RuntimeError):
    """An enumeration would exceed its configured resource bound."""

    def __init__(self, what: str, needed: int, bound: int):
        self.what = what
        self.needed = needed
        self.bound = bound
        super().__init__(f"{what}: needs {needed} > bound {bound}")


class IsoInconclusive(RuntimeError):
    """Isomorphism search ran out of budget without a definitive answer.

    Callers performing theorem checks must treat this as an abort of the
    check, never as a negative answer.
    """


class TheoremViolation(RuntimeError):
    """A computation contradicts a transport guarantee.

    Raised when both sides of an equivalence were computed within guards
    and disagree where agreement is guaranteed.
    """


@dataclass(frozen=True)
class Guards:
    """Enumeration bounds plus the seed for randomized fallbacks.

    Serialized into every report so runs are reproducible.
    """

    max_lattice_vectors: int = 2 ** 16
    max_end_enumeration: int = 2 ** 20
    max_hom_scan: int = 2 ** 20
    max_iso_search: int = 2 ** 16
    rng_seed: int = 1

    def __post_init__(self):
        for field_name, value in asdict(self).items():
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"guard {field_name} must be a positive integer")

    def to_dict(self) -> dict:
        return {
            "max_lattice_vectors": self.max_lattice_vectors,
            "max_end_enumeration": self.max_end_enumeration,
            "max_hom_scan": self.max_hom_scan,
            "max_iso_search": self.max_iso_search,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Guards":
        known = {f: data[f] for f in cls.__dataclass_fields__ if f in data}
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown guard fields: {sorted(unknown)}")
        return cls(**known)


DEFAULT_GUARDS = Guards()


def check_guard(what: str, needed: int, bound: int) -> None:
    if needed > bound:
        raise GuardExceeded(what, needed, bound)
