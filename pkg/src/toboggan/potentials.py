"""Spiked power-law potentials with PT-symmetric structure.

The potential class is

    V(x) = l(l+1)/x**2  +  h*x**2  +  sum_j g_j*(i*x)**beta_j  +  sum_m G_m/(x - c_m)**2

with real l (spike strength written as angular momentum), real harmonic
coefficient h, rational exponents beta_j and complex off-origin second-order
poles.  Writing the anharmonic couplings against powers of (i*x) keeps PT
symmetry (V(-conj(x)) = conj(V(x))) equivalent to plain reality of the g_j;
pole terms are PT-closed when the set {(c, G)} is invariant under
(c, G) -> (-conj(c), conj(G)).

The non-integer powers are multivalued: evaluation takes a SheetPoint whose
unwound argument selects the sheet, (i*x)**beta = rho**beta *
exp(i*beta*(phi + pi/2)).  Integer-power pieces (harmonic, centrifugal,
poles) use the embedded complex value.

A small text grammar describes potentials on disk::

    ell = 0.5
    harmonic = 1
    term { beta = "1/2", g = 0.1 }
    pole { re = 1, im = 0, G_re = 0.1, G_im = 0.2 }

`parse_potential` / `format_potential` round-trip this format.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .contours import HALF_PI, SheetPoint

__all__ = [
    "RationalExponent",
    "PowerTerm",
    "PoleTerm",
    "PowerLawPotential",
    "Wedge",
    "SingularityError",
    "is_pt_symmetric",
    "asymptotic_wedges",
    "parse_potential",
    "format_potential",
]

# Exponents are exact rationals; Fraction already stores numerator/denominator
# in lowest terms, which is precisely what sheet bookkeeping needs.
RationalExponent = Fraction


class SingularityError(ValueError):
    """Raised when a potential is evaluated on top of one of its singularities."""


@dataclass(frozen=True)
class PowerTerm:
    """Anharmonic term g*(i*x)**beta with exact rational beta."""

    beta: Fraction
    coupling: complex

    def __post_init__(self):
        if not isinstance(self.beta, Fraction):
            object.__setattr__(self, "beta", Fraction(self.beta))


@dataclass(frozen=True)
class PoleTerm:
    """Second-order pole G/(x - c)**2 away from the origin."""

    location: complex
    strength: complex


@dataclass(frozen=True)
class PowerLawPotential:
    """Spiked power-law potential; see the module docstring for the form.

    Attributes
    ----------
    ell : float
        Spike strength as angular momentum: centrifugal coefficient
        g_(-2) = ell*(ell+1); the quasi-parity scale is alpha = ell + 1/2.
    harmonic : float
        Coefficient of x**2.  When nonzero the potential is asymptotically
        harmonic and every anharmonic exponent must satisfy -2 < beta < 2;
        with harmonic = 0 the dominant power is carried by the terms
        themselves (canonical images of changes of variable).
    terms : tuple[PowerTerm, ...]
        Anharmonic terms, kept sorted by exponent with duplicates merged.
    poles : tuple[PoleTerm, ...]
        Off-origin second-order poles.
    """

    ell: float = 0.0
    harmonic: float = 1.0
    terms: tuple[PowerTerm, ...] = ()
    poles: tuple[PoleTerm, ...] = ()

    def __post_init__(self):
        merged: dict[Fraction, complex] = {}
        for term in self.terms:
            term = term if isinstance(term, PowerTerm) else PowerTerm(*term)
            merged[term.beta] = merged.get(term.beta, 0.0) + complex(term.coupling)
        terms = tuple(PowerTerm(b, merged[b]) for b in sorted(merged) if merged[b] != 0)
        object.__setattr__(self, "terms", terms)
        poles = tuple(p if isinstance(p, PoleTerm) else PoleTerm(*p) for p in self.poles)
        object.__setattr__(self, "poles", poles)
        if self.harmonic != 0.0:
            for term in terms:
                if not (-2 < term.beta < 2):
                    raise ValueError(
                        f"asymptotically harmonic potential requires -2 < beta < 2, "
                        f"got beta = {term.beta}")
        for pole in poles:
            if abs(pole.location) < 1e-12:
                raise ValueError("pole terms must sit away from the origin "
                                 "(use ell for the origin spike)")

    # -- derived quantities -------------------------------------------------

    @property
    def centrifugal(self) -> float:
        """Coefficient of 1/x**2."""
        return self.ell * (self.ell + 1.0)

    @property
    def alpha(self) -> float:
        """Quasi-parity scale alpha = ell + 1/2."""
        return self.ell + 0.5

    def dominant(self) -> tuple[Fraction, complex]:
        """(beta, coupling) of the asymptotically dominant power, in the
        (i*x)**beta convention (the harmonic term reads -h*(i*x)**2)."""
        if self.harmonic != 0.0:
            return Fraction(2), complex(-self.harmonic)
        if not self.terms:
            raise ValueError("potential has no growing term")
        top = self.terms[-1]
        if top.beta <= 0:
            raise ValueError("potential has no growing term")
        return top.beta, top.coupling

    def with_term(self, beta: Fraction, coupling: complex) -> "PowerLawPotential":
        """Copy with the coupling of the beta term replaced."""
        beta = Fraction(beta)
        rest = tuple(t for t in self.terms if t.beta != beta)
        return PowerLawPotential(self.ell, self.harmonic,
                                 rest + (PowerTerm(beta, coupling),), self.poles)

    # -- evaluation ---------------------------------------------------------

    def eval(self, p: SheetPoint) -> complex:
        """Evaluate V at a sheet point (branch selected by the unwound argument)."""
        if p.modulus <= 0.0:
            raise SingularityError("potential evaluated at the branch point x = 0")
        x = p.embedded
        v = complex(self.harmonic) * x * x
        cent = self.centrifugal
        if cent != 0.0:
            v += cent / (x * x)
        for term in self.terms:
            v += term.coupling * p.rotated(HALF_PI).power(float(term.beta))
        for pole in self.poles:
            d = x - pole.location
            if abs(d) < 1e-12 * max(1.0, abs(pole.location)):
                raise SingularityError(
                    f"potential evaluated on the pole at x = {pole.location}")
            v += pole.strength / (d * d)
        return v

    __call__ = eval


def is_pt_symmetric(v: PowerLawPotential, tolerance: float = 1e-12) -> bool:
    """True iff V(-conj(x)) = conj(V(x)) on every sheet.

    Requires real anharmonic couplings (in the (i*x)**beta convention) and a
    pole set closed under (c, G) -> (-conj(c), conj(G)); a pole may pair with
    itself when c is purely imaginary and G real.
    """
    scale = max([1.0] + [abs(t.coupling) for t in v.terms])
    if any(abs(t.coupling.imag) > tolerance * scale for t in v.terms):
        return False
    unpaired = list(v.poles)
    while unpaired:
        pole = unpaired.pop()
        image_loc = -pole.location.conjugate()
        image_str = pole.strength.conjugate()

        def _matches(q: PoleTerm) -> bool:
            ref = max(1.0, abs(pole.location), abs(pole.strength))
            return (abs(q.location - image_loc) <= tolerance * ref
                    and abs(q.strength - image_str) <= tolerance * ref)

        if _matches(pole):
            continue  # self-paired (purely imaginary location, real strength)
        for j, q in enumerate(unpaired):
            if _matches(q):
                del unpaired[j]
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Wedge:
    """Stokes wedge k: exp(-x**2/2) decays for k*pi + arg x in (lower-k*pi, ...)."""

    index: int
    lower: float
    upper: float


def asymptotic_wedges(v: PowerLawPotential, indices=range(-3, 4)) -> list[Wedge]:
    """Admissible decay wedges k*pi + arg x in (-pi/4, pi/4) of exp(-x**2/2).

    Only meaningful for asymptotically harmonic potentials (harmonic > 0).
    """
    if v.harmonic == 0.0:
        raise ValueError("wedge layout is defined for asymptotically harmonic "
                         "potentials (harmonic coefficient nonzero)")
    return [Wedge(k, -k * math.pi - 0.25 * math.pi, -k * math.pi + 0.25 * math.pi)
            for k in indices]


# ---------------------------------------------------------------------------
# config grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r'"[^"]*"|\{|\}|=|,|[A-Za-z_][A-Za-z_0-9]*|[-+0-9.eE]+')


def _tokenize(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        out.extend(_TOKEN.findall(line))
    return out


def _to_number(tok: str) -> float:
    try:
        return float(tok)
    except ValueError as exc:
        raise ValueError(f"expected a number, got {tok!r}") from exc


def _to_fraction(tok: str) -> Fraction:
    tok = tok.strip('"')
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad exponent {tok!r} (want an integer or \"p/q\")") from exc


def parse_potential(text: str) -> PowerLawPotential:
    """Parse the potential config grammar (see module docstring)."""
    toks = _tokenize(text)
    pos = 0
    ell = 0.0
    harmonic = 1.0
    terms: list[PowerTerm] = []
    poles: list[PoleTerm] = []

    def read_block() -> dict[str, str]:
        nonlocal pos
        if pos >= len(toks) or toks[pos] != "{":
            raise ValueError("expected '{' opening a block")
        pos += 1
        fields: dict[str, str] = {}
        while pos < len(toks) and toks[pos] != "}":
            if toks[pos] == ",":
                pos += 1
                continue
            key = toks[pos]
            if pos + 2 >= len(toks) or toks[pos + 1] != "=":
                raise ValueError(f"expected '{key} = value' inside block")
            fields[key] = toks[pos + 2]
            pos += 3
        if pos >= len(toks):
            raise ValueError("unterminated block (missing '}')")
        pos += 1
        return fields

    while pos < len(toks):
        key = toks[pos]
        if key == "term":
            pos += 1
            fields = read_block()
            unknown = set(fields) - {"beta", "g"}
            if unknown or "beta" not in fields or "g" not in fields:
                raise ValueError(f"term block needs beta and g, got {sorted(fields)}")
            terms.append(PowerTerm(_to_fraction(fields["beta"]), _to_number(fields["g"])))
        elif key == "pole":
            pos += 1
            fields = read_block()
            needed = {"re", "im", "G_re", "G_im"}
            if set(fields) != needed:
                raise ValueError(f"pole block needs {sorted(needed)}, got {sorted(fields)}")
            poles.append(PoleTerm(complex(_to_number(fields["re"]), _to_number(fields["im"])),
                                  complex(_to_number(fields["G_re"]), _to_number(fields["G_im"]))))
        elif key in ("ell", "harmonic"):
            if pos + 2 >= len(toks) or toks[pos + 1] != "=":
                raise ValueError(f"expected '{key} = value'")
            value = _to_number(toks[pos + 2])
            if key == "ell":
                ell = value
            else:
                harmonic = value
            pos += 3
        else:
            raise ValueError(f"unknown config key {key!r}")
    return PowerLawPotential(ell=ell, harmonic=harmonic, terms=tuple(terms), poles=tuple(poles))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_potential(v: PowerLawPotential) -> str:
    """Write a potential in the config grammar (17 significant digits)."""
    lines = [f"ell = {_fmt(v.ell)}", f"harmonic = {_fmt(v.harmonic)}"]
    for term in v.terms:
        if abs(term.coupling.imag) > 1e-13 * max(1.0, abs(term.coupling)):
            raise ValueError(f"cannot format non-PT term with complex coupling "
                             f"{term.coupling} (beta = {term.beta})")
        beta = str(term.beta)
        lines.append(f'term {{ beta = "{beta}", g = {_fmt(term.coupling.real)} }}')
    for pole in v.poles:
        lines.append(
            "pole { re = %s, im = %s, G_re = %s, G_im = %s }" % (
                _fmt(pole.location.real), _fmt(pole.location.imag),
                _fmt(pole.strength.real), _fmt(pole.strength.imag)))
    return "\n".join(lines) + "\n"
