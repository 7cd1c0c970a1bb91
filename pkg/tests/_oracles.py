"""Shared numeric oracles and random generators for the test suite."""

import itertools
import math
import random

import numpy as np

from valcalc.exterior import InvariantForm, SpherePoly
from valcalc.scalars import Rat, Scalar


def random_rational(rng, lo=-3, hi=4, den=4):
    return Rat(rng.randrange(lo, hi), rng.randrange(1, den))


def random_sphere_poly(rng, n, max_deg=2, nterms=2):
    t = {}
    for _ in range(nterms):
        e = [0] * n
        for _ in range(rng.randrange(0, max_deg + 1)):
            e[rng.randrange(n)] += 1
        t[tuple(e)] = Scalar({0: random_rational(rng)})
    return SpherePoly(n, t)


def random_form(rng, n, deg, max_vdeg=2, nterms=3):
    """Random tangentially projected form of the given total degree."""
    terms = {}
    for _ in range(nterms):
        k = rng.randrange(max(0, deg - n), min(deg, n) + 1)
        I = tuple(sorted(rng.sample(range(n), k)))
        J = tuple(sorted(rng.sample(range(n), deg - k)))
        terms[(I, J)] = random_sphere_poly(rng, n, max_vdeg)
    return InvariantForm(n, terms)


def random_unit(rng, n):
    while True:
        v = np.array([rng.gauss(0, 1) for _ in range(n)])
        r = np.linalg.norm(v)
        if r > 1e-6:
            return v / r


def random_tangent_vector(rng, n, v):
    """Random vector tangent to the sphere bundle at fiber point v."""
    w = np.array([rng.gauss(0, 1) for _ in range(2 * n)])
    wv = w[n:] - np.dot(w[n:], v) * v
    return np.concatenate([w[:n], wv])


def shuffle_wedge_value(a, b, v, vectors):
    """Numeric wedge via the shuffle formula, as an oracle for the symbolic wedge."""
    p = a.degree() if not a.is_zero() else 0
    total = 0.0
    idx = range(len(vectors))
    for S in itertools.combinations(idx, p):
        Sc = tuple(i for i in idx if i not in S)
        sign = 1
        for x in S:
            for y in Sc:
                if x > y:
                    sign = -sign
        total += sign * a.evaluate_at(v, [vectors[i] for i in S]) \
            * b.evaluate_at(v, [vectors[i] for i in Sc])
    return total


def orthographic_chart(n, axis, signs):
    """Chart of the sphere bundle: (x, u) -> (x, v(u)) with v solved on one axis."""
    others = [i for i in range(n) if i != axis]

    def point(x, u):
        v = np.zeros(n)
        for a, i in enumerate(others):
            v[i] = u[a]
        v[axis] = signs * math.sqrt(1.0 - float(np.dot(u, u)))
        return v

    def frame(x, u):
        v = point(x, u)
        vecs = []
        for i in range(n):
            e = np.zeros(2 * n)
            e[i] = 1.0
            vecs.append(e)
        for a, i in enumerate(others):
            e = np.zeros(2 * n)
            e[n + i] = 1.0
            e[n + axis] = -u[a] / v[axis]
            vecs.append(e)
        return v, vecs

    return point, frame


def chart_component(form, frame_fn, x, u, subset):
    v, vecs = frame_fn(x, u)
    return form.evaluate_at(v, [vecs[i] for i in subset])


def fd_exterior_derivative(form, frame_fn, x, u, subset, h=1e-5):
    """Finite-difference d in chart coordinates on coordinate vector fields."""
    n = len(x)
    total = 0.0
    for pos, s in enumerate(subset):
        rest = subset[:pos] + subset[pos + 1:]

        def g(t):
            if s < n:
                x2 = np.array(x, dtype=float)
                x2[s] += t
                return chart_component(form, frame_fn, x2, u, rest)
            u2 = np.array(u, dtype=float)
            u2[s - n] += t
            return chart_component(form, frame_fn, x, u2, rest)

        deriv = (g(h) - g(-h)) / (2 * h)
        total += deriv if pos % 2 == 0 else -deriv
    return total


def orthonormal_fiber_frame(v):
    """Tangent frame t_1..t_(n-1) of the sphere at v with det[v, t...] = +1."""
    n = len(v)
    basis = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        w = e - np.dot(e, v) * v
        for b in basis:
            w = w - np.dot(w, b) * b
        r = np.linalg.norm(w)
        if r > 1e-8:
            basis.append(w / r)
        if len(basis) == n - 1:
            break
    if np.linalg.det(np.column_stack([v] + basis)) < 0:
        basis[0] = -basis[0]
    return basis


def bundle_frame(v):
    """Positively oriented orthonormal frame of the bundle tangent space at v."""
    n = len(v)
    vecs = []
    for i in range(n):
        e = np.zeros(2 * n)
        e[i] = 1.0
        vecs.append(e)
    for t in orthonormal_fiber_frame(v):
        e = np.zeros(2 * n)
        e[n:] = t
        vecs.append(e)
    return vecs


def frame_components(form, v, frame, deg):
    comps = {}
    for S in itertools.combinations(range(len(frame)), deg):
        comps[S] = form.evaluate_at(v, [frame[i] for i in S])
    return comps


def numeric_hodge_components(comps, dim, deg):
    """Hodge star of a component dict over an oriented orthonormal frame."""
    out = {}
    idx = range(dim)
    for S, val in comps.items():
        Sc = tuple(i for i in idx if i not in S)
        sign = 1
        for x in S:
            for y in Sc:
                if x > y:
                    sign = -sign
        out[Sc] = sign * val
    return out


def numeric_contraction(form, v, X_at, vectors):
    """Oracle for interior product: plug the field value into the first slot."""
    return form.evaluate_at(v, [X_at] + list(vectors))


def random_tangent_field(rng, n):
    """Random polynomial vector field tangent to the bundle."""
    from valcalc.exterior import VectorField

    x_comps = [random_sphere_poly(rng, n, 1) for _ in range(n)]
    v_comps = [SpherePoly(n) for _ in range(n)]
    # rotational fields v_i d/dv_j - v_j d/dv_i stay tangent to the sphere
    for _ in range(2):
        i, j = rng.sample(range(n), 2)
        c = SpherePoly.constant(n, random_rational(rng))
        v_comps[j] = v_comps[j] + SpherePoly.variable(n, i) * c
        v_comps[i] = v_comps[i] - SpherePoly.variable(n, j) * c
    return VectorField(n, x_comps, v_comps)


def field_value(X, v):
    return np.array([c.evaluate(v) for c in X.x_comps] + [c.evaluate(v) for c in X.v_comps])
