"""Integration contours on the universal cover of the punctured complex plane.

Radial Schroedinger operators with a centrifugal spike g/x**2 (or any
non-integer power of x) live on the logarithmic cover of C \\ {0}: a point is
a pair (modulus, argument) whose argument is *not* reduced modulo 2*pi.  The
bound-state contours used here are spirals

    x(phi) = eps * rho(phi, N) * exp(i*phi),
    rho(phi, N) = sqrt(1 + tan((phi + pi/2)/(2N+1))**2),
    phi in (-(N+1)*pi, N*pi),

which wind N times around the branch point before escaping to |x| -> oo.  The
N = 0 member is exactly the straight line x = t - i*eps traversed below the
singularity; higher N reach Stokes wedges on remote sheets (wedge k means
k*pi + arg x in (-pi/4, pi/4), where exp(-x**2/2) decays).  The out/in ends of
the N-th spiral sit in wedges k_out = -N and k_in = N + 1.

Scattering uses a different family: two exact anti-Stokes rays (arg x an odd
multiple of pi/4, where exp(+-i x**2/2) purely oscillates) joined by a
circular arc around the branch point.

Contours are represented piecewise by analytic segments, so propagation
kernels can evaluate position, unwound argument and velocity in closed form
at any parameter value; the stored samples are a plain discretization used
for inspection and serialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

__all__ = [
    "SheetPoint",
    "Segment",
    "Contour",
    "AntiStokesContour",
    "make_toboggan",
    "make_straight",
    "make_half_line",
    "make_wedge_arc",
    "make_anti_stokes",
    "pt_reflect",
    "conjugate_toboggan",
    "anti_stokes_angles",
    "contour_to_csv",
    "contour_to_json",
]

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi

# Segment kind codes; shared with the compiled kernels in _kernels.py.
SEG_SPIRAL = 0  # x = scale * sec(pitch*t)**power * exp(i*(theta_vertex + t))
SEG_LINE = 1    # x = (t - i*eps) * exp(i*theta_rot)
SEG_RAY = 2     # x = (m0 + slope*(t - t_ref)) * exp(i*theta)
SEG_ARC = 3    # x = rho0 * exp(i*(theta_vertex + t/rho0))

# Default truncation radius: exp(-R**2/2) ~ 1.3e-14 at R = 8, i.e. below the
# double-precision noise floor of the boundary-value initialization.
DEFAULT_RADIUS = 8.0

# Quarter-width of a Stokes wedge; exp(-x**2/2) decays iff the end angle sits
# within WEDGE_HALF_WIDTH of a wedge center k*pi.
WEDGE_HALF_WIDTH = 0.25 * math.pi


@dataclass(frozen=True)
class SheetPoint:
    """Point on the logarithmic cover: modulus > 0 and *unwound* argument.

    Attributes
    ----------
    modulus : float
        |x| > 0.
    argument : float
        arg x in radians, accumulated continuously along a path (no mod 2*pi
        reduction); the sheet number is floor information carried by the
        argument itself.
    """

    modulus: float
    argument: float

    @property
    def embedded(self) -> complex:
        """Projection onto the ordinary complex plane."""
        return self.modulus * complex(math.cos(self.argument), math.sin(self.argument))

    def power(self, exponent: float) -> complex:
        """Sheet-aware power x**exponent = modulus**exponent * exp(i*exponent*argument)."""
        mag = self.modulus ** exponent
        ang = exponent * self.argument
        return mag * complex(math.cos(ang), math.sin(ang))

    def rotated(self, delta: float) -> "SheetPoint":
        """Same modulus, argument shifted by delta (moves across sheets)."""
        return SheetPoint(self.modulus, self.argument + delta)

    def pt_image(self) -> "SheetPoint":
        """PT reflection (rho, phi) -> (rho, -pi - phi); embeds to -conj(x)."""
        return SheetPoint(self.modulus, -math.pi - self.argument)


@dataclass(frozen=True)
class Segment:
    """One analytic piece of a contour, parametrized by a real coordinate t."""

    kind: int
    params: tuple[float, ...]
    t_start: float
    t_end: float

    def point(self, t: float) -> SheetPoint:
        kind, p = self.kind, self.params
        if kind == SEG_SPIRAL:
            scale, pitch, power, theta_v = p[0], p[1], p[2], p[3]
            rho = scale * (1.0 / math.cos(pitch * t)) ** power
            return SheetPoint(rho, theta_v + t)
        if kind == SEG_LINE:
            eps, theta_r = p[0], p[1]
            return SheetPoint(math.hypot(t, eps), -HALF_PI + math.atan(t / eps) + theta_r)
        if kind == SEG_RAY:
            theta, m0, t_ref, slope = p[0], p[1], p[2], p[3]
            return SheetPoint(m0 + slope * (t - t_ref), theta)
        if kind == SEG_ARC:
            rho0, theta_v = p[0], p[1]
            return SheetPoint(rho0, theta_v + t / rho0)
        raise ValueError(f"unknown segment kind {kind}")

    def velocity(self, t: float) -> complex:
        """dx/dt at parameter t (embedded complex value)."""
        kind, p = self.kind, self.params
        if kind == SEG_SPIRAL:
            pitch, power = p[1], p[2]
            pt = self.point(t)
            return pt.modulus * complex(power * pitch * math.tan(pitch * t), 1.0) * _cis(pt.argument)
        if kind == SEG_LINE:
            return _cis(p[1])
        if kind == SEG_RAY:
            return p[3] * _cis(p[0])
        if kind == SEG_ARC:
            return 1j * _cis(self.point(t).argument)
        raise ValueError(f"unknown segment kind {kind}")


def _cis(a: float) -> complex:
    return complex(math.cos(a), math.sin(a))


@dataclass(frozen=True)
class Contour:
    """Directed bound-state contour with sheet-aware samples.

    Attributes
    ----------
    winding : int
        Number of apparent self-crossings N (0 for the straight line).
    offset : float
        Distance of closest approach eps to the branch point.
    offset_argument : float
        Argument of the complex offset; 0 normally, +-pi after a conjugation
        x -> x*exp(+-i*pi) of the whole contour.
    truncation_radius : float
        |x| at both truncated ends.
    wedge_in, wedge_out : int
        Stokes wedge indices of the starting (t minimal) and final ends.
    segments : tuple[Segment, ...]
        Analytic pieces in traversal order; parameters increase monotonically.
    samples : tuple[(float, SheetPoint), ...]
        Discretization (t_j, x_j) used for inspection/serialization.
    vertex_t : float
        Parameter of the matching point for two-sided shooting (the point of
        closest approach, arg x = -pi/2, except for half-line contours).
    left_boundary : str
        "wedge" when the in end lies in a Stokes wedge, "origin" for the
        half-line contour whose left end carries the regular-solution
        condition at x -> 0+.
    """

    winding: int
    offset: float
    truncation_radius: float
    wedge_in: int
    wedge_out: int
    segments: tuple[Segment, ...]
    samples: tuple[tuple[float, SheetPoint], ...]
    vertex_t: float = 0.0
    offset_argument: float = 0.0
    left_boundary: str = "wedge"

    @property
    def t_start(self) -> float:
        return self.segments[0].t_start

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end

    def point(self, t: float) -> SheetPoint:
        return self._segment_at(t).point(t)

    def velocity(self, t: float) -> complex:
        return self._segment_at(t).velocity(t)

    def _segment_at(self, t: float) -> Segment:
        for seg in self.segments:
            if seg.t_start - 1e-12 <= t <= seg.t_end + 1e-12:
                return seg
        raise ValueError(f"parameter {t} outside contour range "
                         f"[{self.t_start}, {self.t_end}]")

    @property
    def vertex(self) -> SheetPoint:
        return self.point(self.vertex_t)


@dataclass(frozen=True)
class AntiStokesContour:
    """Scattering contour: two anti-Stokes rays joined by a circular arc.

    The in/out ray angles follow the winding pattern

        lower edge:  theta_in = -(N + 3/4)*pi,  theta_out = (N - 1/4)*pi
        upper edge:  theta_in = -(N + 5/4)*pi,  theta_out = (N + 1/4)*pi

    On the rays the radial variable r = i*x**2 (continued along the contour)
    is exactly real: negative on the in ray, positive on the out ray for the
    lower edge at N = 0.
    """

    winding: int
    branch: str
    theta_in: float
    theta_out: float
    joint_radius: float
    truncation_radius: float
    segments: tuple[Segment, ...]
    samples: tuple[tuple[float, SheetPoint], ...]
    vertex_t: float = 0.0

    @property
    def t_start(self) -> float:
        return self.segments[0].t_start

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end

    def point(self, t: float) -> SheetPoint:
        for seg in self.segments:
            if seg.t_start - 1e-12 <= t <= seg.t_end + 1e-12:
                return seg.point(t)
        raise ValueError(f"parameter {t} outside contour range")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def make_toboggan(winding: int, offset: float, truncation_radius: float = DEFAULT_RADIUS,
                  samples_per_turn: int = 512) -> Contour:
    """Build the N-times winding tobogganic spiral.

    Parameters
    ----------
    winding : int
        N >= 0; N = 0 reproduces the straight-line geometry (different
        parametrization).
    offset : float
        eps > 0, distance of closest approach (the spiral's vertex is at
        x = -i*eps).
    truncation_radius : float
        |x| at which both tails are cut; must leave the end angles inside
        their Stokes wedges.
    samples_per_turn : int
        Sampling density per full turn of argument.
    """
    if winding < 0 or winding != int(winding):
        raise ValueError("winding must be a non-negative integer")
    n = int(winding)
    if offset <= 0.0:
        raise ValueError("offset must be positive")
    if truncation_radius <= offset:
        raise ValueError("truncation_radius must exceed the offset")

    pitch = 1.0 / (2 * n + 1)
    half_span = (2 * n + 1) * math.acos(offset / truncation_radius)
    seg = Segment(SEG_SPIRAL, (offset, pitch, 1.0, -HALF_PI), -half_span, half_span)
    samples = _sample_segments((seg,), samples_per_turn)

    k_in, k_out = n + 1, -n
    contour = Contour(
        winding=n, offset=offset, truncation_radius=truncation_radius,
        wedge_in=k_in, wedge_out=k_out, segments=(seg,), samples=samples,
    )
    _check_wedge_ends(contour)
    return contour


def make_straight(offset: float, truncation_radius: float = DEFAULT_RADIUS,
                  n_samples: int = 1025) -> Contour:
    """Straight contour x = t - i*offset below the branch point (N = 0)."""
    if offset <= 0.0:
        raise ValueError("offset must be positive")
    if truncation_radius <= offset:
        raise ValueError("truncation_radius must exceed the offset")
    half_t = math.sqrt(truncation_radius ** 2 - offset ** 2)
    seg = Segment(SEG_LINE, (offset, 0.0), -half_t, half_t)
    if n_samples % 2 == 0:
        n_samples += 1  # keep the vertex t = 0 on the grid
    ts = [(-half_t + 2.0 * half_t * j / (n_samples - 1)) for j in range(n_samples)]
    ts[n_samples // 2] = 0.0
    samples = tuple((t, seg.point(t)) for t in ts)
    contour = Contour(
        winding=0, offset=offset, truncation_radius=truncation_radius,
        wedge_in=1, wedge_out=0, segments=(seg,), samples=samples,
    )
    _check_wedge_ends(contour)
    return contour


def make_half_line(truncation_radius: float = DEFAULT_RADIUS, n_samples: int = 513,
                   inner_radius: float = 1e-3, match_radius: float = 2.5) -> Contour:
    """Positive half-line contour for Hermitian radial problems.

    The left end carries the origin-regular boundary condition (psi ~ x**(l+1))
    instead of a wedge condition; the matching point for two-sided shooting is
    placed at ``match_radius`` inside the classically allowed region.
    """
    if not (0.0 < inner_radius < match_radius < truncation_radius):
        raise ValueError("need 0 < inner_radius < match_radius < truncation_radius")
    seg = Segment(SEG_RAY, (0.0, inner_radius, inner_radius, 1.0),
                  inner_radius, truncation_radius)
    ts = [inner_radius + (truncation_radius - inner_radius) * j / (n_samples - 1)
          for j in range(n_samples)]
    samples = tuple((t, seg.point(t)) for t in ts)
    return Contour(
        winding=0, offset=inner_radius, truncation_radius=truncation_radius,
        wedge_in=0, wedge_out=0, segments=(seg,), samples=samples,
        vertex_t=match_radius, left_boundary="origin",
    )


def make_wedge_arc(half_span: float, offset: float, truncation_radius: float = DEFAULT_RADIUS,
                   samples_per_turn: int = 512, scale_power: float = 1.0,
                   theta_vertex: float = -HALF_PI, winding: int | None = None) -> Contour:
    """Generalized spiral arc with asymptote angles theta_vertex +- half_span.

    This is the family the tobogganic spirals belong to (half_span =
    (N + 1/2)*pi); non-standard spans arise as images of contours under
    power-law changes of variable, where the dominant potential power - and
    hence the wedge layout - differs from the harmonic one.
    """
    if half_span <= 0.0:
        raise ValueError("half_span must be positive")
    if not 0.0 < offset < truncation_radius:
        raise ValueError("need 0 < offset < truncation_radius")
    pitch = HALF_PI / half_span
    # offset * sec(pitch*t)**scale_power = truncation_radius at the ends
    cos_end = (offset / truncation_radius) ** (1.0 / scale_power)
    t_max = math.acos(cos_end) / pitch
    seg = Segment(SEG_SPIRAL, (offset, pitch, scale_power, theta_vertex), -t_max, t_max)
    samples = _sample_segments((seg,), samples_per_turn)
    if winding is None:
        winding = int(half_span / math.pi)  # floor(span / (2*pi))
    return Contour(
        winding=winding, offset=offset, truncation_radius=truncation_radius,
        wedge_in=_wedge_of(theta_vertex - t_max), wedge_out=_wedge_of(theta_vertex + t_max),
        segments=(seg,), samples=samples, vertex_t=0.0,
    )


def anti_stokes_angles(winding: int, branch: str) -> tuple[float, float]:
    """(theta_in, theta_out) of the anti-Stokes ray pair for the given edge."""
    n = int(winding)
    if branch == "lower":
        return -(n + 0.75) * math.pi, (n - 0.25) * math.pi
    if branch == "upper":
        return -(n + 1.25) * math.pi, (n + 0.25) * math.pi
    raise ValueError("branch must be 'lower' or 'upper'")


def make_anti_stokes(winding: int, branch: str, truncation_radius: float = 30.0,
                     joint_radius: float = 3.0, samples_per_turn: int = 256) -> AntiStokesContour:
    """Anti-Stokes scattering contour for the given winding and edge.

    Straight rays at the tabulated angles run from ``truncation_radius`` down
    to ``joint_radius`` and are joined by a circular arc below the branch
    point (vertex at arg x = -pi/2, the PT-symmetric midpoint).
    """
    if winding < 0 or winding != int(winding):
        raise ValueError("winding must be a non-negative integer")
    if not 0.0 < joint_radius < truncation_radius:
        raise ValueError("need 0 < joint_radius < truncation_radius")
    theta_in, theta_out = anti_stokes_angles(winding, branch)

    arc_half = joint_radius * (theta_out - theta_in) / 2.0
    ray_len = truncation_radius - joint_radius
    seg_in = Segment(SEG_RAY, (theta_in, joint_radius, -arc_half, -1.0),
                     -arc_half - ray_len, -arc_half)
    seg_arc = Segment(SEG_ARC, (joint_radius, -HALF_PI), -arc_half, arc_half)
    seg_out = Segment(SEG_RAY, (theta_out, joint_radius, arc_half, 1.0),
                      arc_half, arc_half + ray_len)
    segments = (seg_in, seg_arc, seg_out)
    samples = _sample_segments(segments, samples_per_turn)
    return AntiStokesContour(
        winding=int(winding), branch=branch, theta_in=theta_in, theta_out=theta_out,
        joint_radius=joint_radius, truncation_radius=truncation_radius,
        segments=segments, samples=samples,
    )


# ---------------------------------------------------------------------------
# symmetry operations
# ---------------------------------------------------------------------------

_PT_SEGMENT_RULES = {
    SEG_SPIRAL: lambda p: (p[0], p[1], p[2], -math.pi - p[3]),
    SEG_LINE: lambda p: (p[0], -p[1]),
    SEG_RAY: lambda p: (-math.pi - p[0], p[1], -p[2], -p[3]),
    SEG_ARC: lambda p: (p[0], -math.pi - p[1]),
}


def pt_reflect(contour: Contour) -> Contour:
    """PT image of a contour: every point (rho, phi) -> (rho, -pi - phi).

    The embedded image of each point is -conj(x); the traversal direction is
    re-oriented so the result again runs with increasing argument (the PT map
    exchanges the in and out ends).
    """
    new_segments = tuple(
        Segment(s.kind, _PT_SEGMENT_RULES[s.kind](tuple(s.params)), -s.t_end, -s.t_start)
        for s in reversed(contour.segments)
    )
    new_samples = tuple((-t, p.pt_image()) for (t, p) in reversed(contour.samples))
    return replace(
        contour,
        segments=new_segments,
        samples=new_samples,
        vertex_t=-contour.vertex_t,
        wedge_in=_wedge_of(new_samples[0][1].argument),
        wedge_out=_wedge_of(new_samples[-1][1].argument),
    )


def conjugate_toboggan(contour: Contour, direction: int = 1) -> Contour:
    """Rigid rotation of the whole contour by direction*pi (direction = +-1).

    Realizes the conjugate spiral with complex offset eps' = eps*exp(+-i*pi):
    every sample argument shifts by +-pi and each wedge index k drops/rises
    by one (k*pi + phi is invariant).
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    delta = direction * math.pi
    rot = {
        SEG_SPIRAL: lambda p: (p[0], p[1], p[2], p[3] + delta),
        SEG_LINE: lambda p: (p[0], p[1] + delta),
        SEG_RAY: lambda p: (p[0] + delta, p[1], p[2], p[3]),
        SEG_ARC: lambda p: (p[0], p[1] + delta),
    }
    new_segments = tuple(
        Segment(s.kind, rot[s.kind](tuple(s.params)), s.t_start, s.t_end)
        for s in contour.segments
    )
    new_samples = tuple((t, p.rotated(delta)) for (t, p) in contour.samples)
    return replace(
        contour,
        segments=new_segments,
        samples=new_samples,
        wedge_in=contour.wedge_in - direction,
        wedge_out=contour.wedge_out - direction,
        offset_argument=contour.offset_argument + delta,
    )


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _sample_segments(segments: tuple[Segment, ...], samples_per_turn: int):
    """Sample each segment uniformly in its parameter, vertex kept on-grid."""
    out: list[tuple[float, SheetPoint]] = []
    for seg in segments:
        phi0 = seg.point(seg.t_start).argument
        phi1 = seg.point(seg.t_end).argument
        span = abs(phi1 - phi0)
        m = max(8, int(math.ceil(span * samples_per_turn / TWO_PI)))
        if seg.t_start < 0.0 < seg.t_end:
            # symmetric grid with the vertex t = 0 as an exact sample
            half = max(4, (m + 1) // 2)
            ts = [seg.t_start * (1.0 - j / half) for j in range(half)] + \
                 [seg.t_end * j / half for j in range(half + 1)]
        else:
            ts = [seg.t_start + (seg.t_end - seg.t_start) * j / m for j in range(m + 1)]
        for t in ts:
            if out and abs(t - out[-1][0]) < 1e-15:
                continue
            out.append((t, seg.point(t)))
    return tuple(out)


def _wedge_of(phi: float) -> int:
    """Stokes wedge index k with k*pi + phi nearest to 0."""
    return int(round(-phi / math.pi))


def _check_wedge_ends(contour: Contour) -> None:
    """Assert both truncated ends sit strictly inside their Stokes wedges."""
    for label, (t, point), k in (
        ("in", contour.samples[0], contour.wedge_in),
        ("out", contour.samples[-1], contour.wedge_out),
    ):
        miss = k * math.pi + point.argument
        if abs(miss) >= WEDGE_HALF_WIDTH:
            raise ValueError(
                f"{label} end of the contour (argument {point.argument:.6f}) misses "
                f"Stokes wedge {k}: k*pi + arg = {miss:.6f} not within +-pi/4; "
                f"increase truncation_radius or reduce the offset")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def contour_to_csv(contour) -> str:
    """CSV dump of the samples: columns t, modulus, argument, re, im."""
    lines = ["t,modulus,argument,re,im"]
    for t, p in contour.samples:
        x = p.embedded
        lines.append(",".join(format(v, ".17g")
                              for v in (t, p.modulus, p.argument, x.real, x.imag)))
    return "\n".join(lines) + "\n"


def contour_to_json(contour) -> dict:
    """JSON-ready dict of the contour (schema 1)."""
    doc = {
        "schema": 1,
        "kind": "anti_stokes" if isinstance(contour, AntiStokesContour) else "contour",
        "winding": contour.winding,
        "truncation_radius": contour.truncation_radius,
        "samples": [
            {"t": t, "modulus": p.modulus, "argument": p.argument,
             "re": p.embedded.real, "im": p.embedded.imag}
            for t, p in contour.samples
        ],
    }
    if isinstance(contour, AntiStokesContour):
        doc["branch"] = contour.branch
        doc["theta_in"] = contour.theta_in
        doc["theta_out"] = contour.theta_out
        doc["joint_radius"] = contour.joint_radius
    else:
        doc["offset"] = contour.offset
        doc["offset_argument"] = contour.offset_argument
        doc["wedge_in"] = contour.wedge_in
        doc["wedge_out"] = contour.wedge_out
    return doc
