"""Balls and hyperplane neighborhoods, plus the exact closed-set predicates
the referees use.  Boundary contact counts as legal: a ball tangent to a slab
is disjoint from it, a ball touching the boundary of another from inside is
contained.  The 1e-12 tolerance only forgives violations below float noise."""

from dataclasses import dataclass

import numpy as np

GEOM_TOL = 1e-12


def _vec(x):
    v = np.array(x, dtype=float).reshape(-1)
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self):
        return self.center.shape[0]

    def to_json(self):
        return {"center": [float(c) for c in self.center], "radius": self.radius}

    @staticmethod
    def from_json(obj):
        return Ball(obj["center"], obj["radius"])


@dataclass(frozen=True)
class HyperplaneNbhd:
    """{x : |<normal, x> - offset| <= halfwidth} with a unit normal."""

    normal: np.ndarray
    offset: float
    halfwidth: float

    def __post_init__(self):
        nv = np.array(self.normal, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(nv))
        if norm == 0.0:
            raise ValueError("hyperplane normal must be nonzero")
        if abs(norm - 1.0) > GEOM_TOL:
            nv = nv / norm
        nv.setflags(write=False)
        object.__setattr__(self, "normal", nv)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "halfwidth", float(self.halfwidth))
        if self.halfwidth <= 0:
            raise ValueError("slab halfwidth must be positive")

    @property
    def dim(self):
        return self.normal.shape[0]

    def signed_distance(self, x):
        return float(np.dot(self.normal, np.asarray(x, dtype=float))) - self.offset

    def with_halfwidth(self, eps):
        return HyperplaneNbhd(self.normal, self.offset, eps)

    @staticmethod
    def through(point, normal, halfwidth):
        point = np.asarray(point, dtype=float).reshape(-1)
        nv = np.asarray(normal, dtype=float).reshape(-1)
        nv = nv / np.linalg.norm(nv)
        return HyperplaneNbhd(nv, float(np.dot(nv, point)), halfwidth)

    def to_json(self):
        return {"normal": [float(c) for c in self.normal],
                "offset": self.offset, "halfwidth": self.halfwidth}

    @staticmethod
    def from_json(obj):
        return HyperplaneNbhd(obj["normal"], obj["offset"], obj["halfwidth"])


def _slack(scale):
    # relative: the games drive radii to 0 and the rules must keep binding
    return GEOM_TOL * abs(scale)


def ball_in_ball(inner, outer):
    d = float(np.linalg.norm(inner.center - outer.center))
    return d + inner.radius <= outer.radius + _slack(outer.radius)


def ball_slab_disjoint(ball, slab):
    d = abs(slab.signed_distance(ball.center))
    return d >= slab.halfwidth + ball.radius - _slack(slab.halfwidth + ball.radius)


def ball_meets_slab(ball, slab):
    return not ball_slab_disjoint(ball, slab)


def point_in_ball(point, ball):
    d = float(np.linalg.norm(np.asarray(point, dtype=float) - ball.center))
    return d <= ball.radius + _slack(ball.radius)
