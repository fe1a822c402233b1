"""Solution certificates and residual reports shared by all three families."""

from __future__ import annotations

from dataclasses import dataclass, field

from .mpoly import MultiPoly
from .padic import RingParams

FAMILIES = ("hyper", "sl2", "qkz")


@dataclass(frozen=True)
class SolutionCertificate:
    """A constructed solution: family tag, parameters, and the component
    polynomials in (z, lambda), keyed by component index.

    Component keys are 1-based integers for the hyper family, basis-index
    tuples for sl2 and 0 for the single qkz component.
    """

    family: str
    ring: RingParams
    params: object
    components: tuple  # of (index, MultiPoly)

    def component(self, index) -> MultiPoly:
        for i, poly in self.components:
            if i == index:
                return poly
        raise KeyError(index)

    @property
    def indices(self):
        return [i for i, _ in self.components]

    def is_zero(self) -> bool:
        return all(poly.is_zero() for _, poly in self.components)

    def replace_component(self, index, poly: MultiPoly) -> "SolutionCertificate":
        comps = tuple((i, poly if i == index else q) for i, q in self.components)
        return SolutionCertificate(self.family, self.ring, self.params, comps)


@dataclass
class ResidualEntry:
    label: str
    residual: MultiPoly | None
    ok: bool
    witness: tuple | None = None  # (vars, exponents, coeff) of lowest offending monomial

    @classmethod
    def from_poly(cls, label: str, poly: MultiPoly) -> "ResidualEntry":
        if poly.is_zero():
            return cls(label, poly, True)
        return cls(label, poly, False, poly.lowest_monomial())


@dataclass
class ResidualReport:
    family: str
    entries: list[ResidualEntry] = field(default_factory=list)
    symmetry_reduced: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, label: str, poly: MultiPoly):
        self.entries.append(ResidualEntry.from_poly(label, poly))

    def failures(self):
        return [e for e in self.entries if not e.ok]

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{self.family}: {status} ({len(self.entries)} residuals)"]
        for e in self.failures():
            if e.witness is None:
                lines.append(f"  {e.label}: failed")
                continue
            vars_, exp, coeff = e.witness
            mono = "*".join(f"{v}^{d}" for v, d in zip(vars_, exp) if d) or "1"
            lines.append(f"  {e.label}: nonzero at {mono} (coeff {coeff})")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "ok": self.ok,
            "symmetry_reduced": self.symmetry_reduced,
            "notes": self.notes,
            "residuals": [
                {
                    "label": e.label,
                    "ok": e.ok,
                    "witness": None
                    if e.witness is None
                    else {
                        "vars": list(e.witness[0]),
                        "exps": list(e.witness[1]),
                        "coeff": str(e.witness[2]),
                    },
                }
                for e in self.entries
            ],
        }
