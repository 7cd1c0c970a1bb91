"""Quaternionic line structures: the forms beta, gamma, Omega and valuations Z_u.

Coordinates on R^4 follow the basis (1, i, j, k).  An imaginary direction u
defines right multiplication I_u; the associated invariant forms combine into
a degree-2 valuation Z_u whose pairings generate the unitarily invariant
integral geometry of the quaternionic line.

Directions are stored unscaled: an exact direction keeps a primitive integer
triple (p, q, r) standing for (p, q, r)/sqrt(p^2+q^2+r^2), which keeps every
derived quantity rational even when the normalization is irrational.
"""

import math
from dataclasses import dataclass, field

from .exterior import (
    BaseForm,
    InvariantForm,
    SpherePoly,
    alpha_form,
    d,
)
from .scalars import PI, Rat, Scalar
from .valuation import ValuationRep, intrinsic_volume_rep, pairing

I_MATRICES = {
    "i": ((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0)),
    "j": ((0, 0, -1, 0), (0, 0, 0, -1), (1, 0, 0, 0), (0, 1, 0, 0)),
    "k": ((0, 0, 0, -1), (0, 0, 1, 0), (0, -1, 0, 0), (1, 0, 0, 0)),
}

# Orientation fix: with normal cycles oriented so that chi(ball) = +1, the
# combination (1/8pi) beta^d(beta) + (1/4pi) gamma^Omega integrates to -pi
# over the unit sphere graph.  Z_u flips it so that Z_u(ball) = +pi.
Z_ORIENTATION = -1


def right_mult_matrix(a, b, c):
    """Matrix of right quaternion multiplication by a*i + b*j + c*k."""
    mats = (I_MATRICES["i"], I_MATRICES["j"], I_MATRICES["k"])
    coef = (a, b, c)
    return tuple(
        tuple(sum(coef[m] * mats[m][r][s] for m in range(3)) for s in range(4))
        for r in range(4)
    )


def right_translation_matrix(q):
    """Matrix of x -> x q for a full quaternion q = (q0, q1, q2, q3)."""
    m = right_mult_matrix(q[1], q[2], q[3])
    return [[m[r][s] + (q[0] if r == s else 0) for s in range(4)] for r in range(4)]


def left_mult_matrix(q):
    """Matrix of left multiplication by the quaternion q = (q0, q1, q2, q3)."""
    q0, q1, q2, q3 = q
    return [
        [q0, -q1, -q2, -q3],
        [q1, q0, -q3, q2],
        [q2, q3, q0, -q1],
        [q3, -q2, q1, q0],
    ]


def rational_unit_quaternion(rng):
    """Random unit quaternion with rational entries (Cayley parametrization)."""
    while True:
        t, s, r = (Rat(rng.randrange(-6, 7), rng.randrange(1, 7)) for _ in range(3))
        if t or s or r:
            break
    m = 1 + t * t + s * s + r * r
    return ((1 - t * t - s * s - r * r) / m, 2 * t / m, 2 * s / m, 2 * r / m)


def imaginary_rotation(q):
    """3x3 matrix of u -> q u conj(q) on the imaginary part, rational in q."""
    q0, q1, q2, q3 = q
    return [
        [q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2)],
        [2 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2 * (q2 * q3 - q0 * q1)],
        [2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3],
    ]


@dataclass(frozen=True)
class ImDirection:
    """A point of the projective sphere of imaginary quaternions.

    coords is either a primitive integer triple (exact mode, standing for its
    normalization) or a float unit triple; the sign is canonical with the
    first nonzero coordinate positive, identifying u with -u.
    """

    coords: tuple
    exact: bool
    family: str = field(default="", compare=False)

    @classmethod
    def of(cls, a, b, c, family=""):
        vals = (a, b, c)
        if not any(isinstance(x, float) for x in vals):
            vals = tuple(Rat(x) for x in vals)
            if not any(vals):
                raise ValueError("direction must be nonzero")
            den = math.lcm(*(int(x.denominator) for x in vals))
            ints = [int(x * den) for x in vals]
            g = math.gcd(*ints)
            ints = [x // g for x in ints]
            for x in ints:
                if x:
                    if x < 0:
                        ints = [-y for y in ints]
                    break
            return cls(tuple(ints), True, family)
        vals = tuple(float(x) for x in vals)
        norm = math.sqrt(sum(x * x for x in vals))
        if norm < 1e-12:
            raise ValueError("direction must be nonzero")
        vals = tuple(x / norm for x in vals)
        for x in vals:
            if abs(x) > 1e-12:
                if x < 0:
                    vals = tuple(-y for y in vals)
                break
        return cls(vals, False, family)

    @property
    def norm_sq(self):
        return sum(x * x for x in self.coords)

    def unit(self):
        """Float unit coordinates."""
        if not self.exact:
            return tuple(float(x) for x in self.coords)
        s = math.sqrt(float(self.norm_sq))
        return tuple(float(x) / s for x in self.coords)

    def dot_sq(self, other):
        """(u . v)^2, exact when the pair allows it."""
        if self.exact and other.exact:
            dot = sum(x * y for x, y in zip(self.coords, other.coords))
            return Rat(dot * dot, self.norm_sq * other.norm_sq)
        if self.family == "icosahedron" and other.family == "icosahedron":
            if all(abs(x - y) < 1e-9 for x, y in zip(self.unit(), other.unit())):
                return Rat(1)
            return Rat(1, 5)
        dot = sum(x * y for x, y in zip(self.unit(), other.unit()))
        return dot * dot

    def __str__(self):
        if self.exact:
            return "({}, {}, {})".format(*self.coords)
        return "({:.6f}, {:.6f}, {:.6f})".format(*self.coords)


def _linear_poly(n, coeffs):
    return SpherePoly(n, {tuple(1 if t == s else 0 for t in range(n)): c
                          for s, c in enumerate(coeffs) if c})


def _scaled_forms(coords):
    """beta, gamma, Omega built from an unscaled imaginary triple."""
    n = 4
    mat = right_mult_matrix(*coords)
    beta = {}
    gamma = {}
    for s in range(4):
        col = [mat[t][s] for t in range(4)]
        p = _linear_poly(n, col)
        if p:
            beta[((s,), ())] = p
            gamma[((), (s,))] = p
    omega = {}
    for s in range(4):
        for t in range(s + 1, 4):
            if mat[s][t]:
                omega[((s, t), ())] = SpherePoly.constant(n, mat[s][t])
    return (InvariantForm(n, beta, projected=True),
            InvariantForm(n, gamma),
            InvariantForm(n, omega, projected=True))


def quaternionic_forms(u: ImDirection):
    """The contact form with the unit-normalized beta_u, gamma_u, Omega_u."""
    alpha = alpha_form(4)
    if u.exact:
        s = u.norm_sq
        num, den = int(s.numerator), int(s.denominator)
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            beta, gamma, omega = _scaled_forms(tuple(Rat(x) for x in u.coords))
            inv = Rat(rd, rn)
            return alpha, beta * inv, gamma * inv, omega * inv
    coords = u.unit()
    beta, gamma, omega = _scaled_forms(coords)
    return alpha, beta, gamma, omega


def stated_z_form(u: ImDirection) -> InvariantForm:
    """The combination (1/8pi) beta^d(beta) + (1/4pi) gamma^Omega, unit-normalized."""
    if u.exact:
        beta, gamma, omega = _scaled_forms(u.coords)
        c8 = Rat(1, 8) * PI ** -1 / u.norm_sq
        c4 = Rat(1, 4) * PI ** -1 / u.norm_sq
        return beta.wedge(d(beta)) * c8 + gamma.wedge(omega) * c4
    beta, gamma, omega = _scaled_forms(u.unit())
    c8 = 1.0 / (8.0 * math.pi)
    c4 = 1.0 / (4.0 * math.pi)
    return beta.wedge(d(beta)) * c8 + gamma.wedge(omega) * c4


def z_rep(u: ImDirection) -> ValuationRep:
    """The valuation Z_u, oriented so that the unit ball evaluates to +pi."""
    omega = stated_z_form(u)
    if Z_ORIENTATION < 0:
        omega = -omega
    return ValuationRep(4, omega, BaseForm(4))


def gram_zz(u: ImDirection, v: ImDirection) -> Scalar:
    """Pairing <Z_u, Z_v> through the full symbolic pipeline."""
    if not (u.exact and v.exact):
        raise ValueError("gram_zz requires exact directions")
    return pairing(z_rep(u), z_rep(v))


def tasaki_density(u: ImDirection, v: ImDirection):
    """Closed form 1/4 (1 + (u.v)^2) for the average intersection density."""
    ds = u.dot_sq(v)
    if isinstance(ds, float):
        return 0.25 * (1.0 + ds)
    return (1 + Scalar({0: ds})) * Rat(1, 4)


def icosahedron_directions(rotation=None):
    """Six projective vertex classes of the regular icosahedron.

    rotation: optional 3x3 orthogonal matrix applied to the standard
    golden-ratio vertices; pairwise angles are unaffected.
    """
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    seeds = [
        (0.0, 1.0, phi), (0.0, 1.0, -phi),
        (1.0, phi, 0.0), (1.0, -phi, 0.0),
        (phi, 0.0, 1.0), (phi, 0.0, -1.0),
    ]
    if rotation is not None:
        rot = [[float(rotation[r][s]) for s in range(3)] for r in range(3)]
        for r in range(3):
            for s in range(3):
                dot = sum(rot[t][r] * rot[t][s] for t in range(3))
                if abs(dot - (1.0 if r == s else 0.0)) > 1e-9:
                    raise ValueError("rotation matrix is not orthogonal")
        seeds = [tuple(sum(rot[r][s] * x[s] for s in range(3)) for r in range(3))
                 for x in seeds]
    return [ImDirection.of(*s, family="icosahedron") for s in seeds]


def alesker_directions():
    """The six exact directions i, j, k, (i+j), (i+k), (j+k) up to scale."""
    seeds = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    return [ImDirection.of(*s) for s in seeds]


def su2_basis(kind: str = "icosahedron"):
    """Ten labeled valuations spanning the unitarily invariant space."""
    if kind == "icosahedron":
        dirs = icosahedron_directions()
        labels = [f"Z_u{i + 1}" for i in range(6)]
    elif kind == "alesker":
        dirs = alesker_directions()
        labels = ["Z_i", "Z_j", "Z_k", "Z_i+j", "Z_i+k", "Z_j+k"]
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    out = [("chi", intrinsic_volume_rep(4, 0)), ("vol1", intrinsic_volume_rep(4, 1))]
    out += list(zip(labels, (z_rep(u) for u in dirs)))
    out += [("vol3", intrinsic_volume_rep(4, 3)), ("vol", intrinsic_volume_rep(4, 4))]
    return out
