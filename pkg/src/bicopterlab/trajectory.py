"""Reference trajectories: a tilted ellipse and an order-2 Hilbert path.

Both generators return the full desired chain state (position through
jerk per axis) plus the 4th-derivative feedforward. The ellipse is smooth
and carries an exact analytic feedforward; the Hilbert path is piecewise
linear, so acceleration, jerk, and feedforward are zero and corners are
genuinely nonsmooth.
"""

from dataclasses import dataclass
from math import cos, radians, sin

from .errors import ValidationError
from .tracker import DesiredState

__all__ = [
    "EllipseSpec",
    "HilbertSpec",
    "ellipse_ref",
    "hilbert_waypoints",
    "hilbert_ref",
]


@dataclass(frozen=True)
class EllipseSpec:
    """Ellipse with semi-axes (a, b), tilted by phi, traversed at rate omega.

    The path starts at the origin: its center sits at a*(cos phi, sin phi)
    and the position at t = 0 is (0, 0).
    """

    a: float = 5.0
    b: float = 3.0
    phi: float = radians(45.0)
    omega: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "omega"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"EllipseSpec.{name} must be > 0")

    @property
    def center(self) -> tuple:
        return (self.a * cos(self.phi), self.a * sin(self.phi))

    def start(self) -> tuple:
        return (0.0, 0.0)


def ellipse_ref(t: float, spec: EllipseSpec) -> DesiredState:
    """Desired chain state of the ellipse at time t.

    Per axis the position is c + A cos(wt) + B sin(wt), so every
    derivative is analytic and the 4th derivative is w^4 (pos - c).
    """
    w = spec.omega
    cphi, sphi = cos(spec.phi), sin(spec.phi)
    cw, sw = cos(w * t), sin(w * t)
    # position = center + (A, B) acting on (cos, sin) per axis
    A1, B1 = -spec.a * cphi, -spec.b * sphi
    A2, B2 = -spec.a * sphi, spec.b * cphi
    c1, c2 = spec.center
    p1 = c1 + A1 * cw + B1 * sw
    p2 = c2 + A2 * cw + B2 * sw
    v1 = w * (-A1 * sw + B1 * cw)
    v2 = w * (-A2 * sw + B2 * cw)
    a1 = -w * w * (A1 * cw + B1 * sw)
    a2 = -w * w * (A2 * cw + B2 * sw)
    j1 = w ** 3 * (A1 * sw - B1 * cw)
    j2 = w ** 3 * (A2 * sw - B2 * cw)
    f1 = w ** 4 * (A1 * cw + B1 * sw)
    f2 = w ** 4 * (A2 * cw + B2 * sw)
    return DesiredState(xi_d=(p1, v1, a1, j1, p2, v2, a2, j2), ff=(f1, f2))


@dataclass(frozen=True)
class HilbertSpec:
    """Order-2 Hilbert curve over a square of side `size`.

    The 16 grid cells of the 4x4 stage are visited by 15 axis-aligned
    segments of length size/3, each traversed in seg_time seconds at
    constant speed. Only order 2 is supported.
    """

    order: int = 2
    size: float = 3.0
    seg_time: float = 2.0
    origin: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.order != 2:
            raise ValidationError("HilbertSpec.order must be 2")
        for name in ("size", "seg_time"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"HilbertSpec.{name} must be > 0")

    def start(self) -> tuple:
        return hilbert_waypoints(self)[0]

    @property
    def duration(self) -> float:
        return 15.0 * self.seg_time


def _hilbert_cell(d: int) -> tuple:
    """Grid cell (col, row) of curve index d on the 4x4 stage.

    Classic bit-twiddling construction; axes are chosen so the traversal
    starts (0,0) -> (1,0) -> (1,1) -> (0,1) and ends at (3,0).
    """
    x = y = 0
    t = d
    s = 1
    while s < 4:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        if ry == 0:
            if rx == 1:
                x, y = s - 1 - x, s - 1 - y
            x, y = y, x
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return (x, y)


def hilbert_waypoints(spec: HilbertSpec) -> list:
    """The 16 vertices of the scaled curve, in traversal order."""
    step = spec.size / 3.0
    ox, oy = spec.origin
    return [
        (ox + step * cx, oy + step * cy) for cx, cy in (_hilbert_cell(d) for d in range(16))
    ]


def hilbert_ref(t: float, spec: HilbertSpec) -> DesiredState:
    """Piecewise-linear interpolation along the waypoint path.

    Constant speed (size/3)/seg_time on each segment; past the last
    waypoint the reference clamps there with zero velocity. Feedforward is
    always zero: the path is nonsmooth and carries no 4th derivative.
    """
    pts = hilbert_waypoints(spec)
    seg = int(t // spec.seg_time) if t >= 0.0 else 0
    if seg >= 15:
        px, py = pts[15]
        return DesiredState(
            xi_d=(px, 0.0, 0.0, 0.0, py, 0.0, 0.0, 0.0), ff=(0.0, 0.0)
        )
    frac = (t - seg * spec.seg_time) / spec.seg_time
    (x0, y0), (x1, y1) = pts[seg], pts[seg + 1]
    px = x0 + frac * (x1 - x0)
    py = y0 + frac * (y1 - y0)
    vx = (x1 - x0) / spec.seg_time
    vy = (y1 - y0) / spec.seg_time
    return DesiredState(xi_d=(px, vx, 0.0, 0.0, py, vy, 0.0, 0.0), ff=(0.0, 0.0))
