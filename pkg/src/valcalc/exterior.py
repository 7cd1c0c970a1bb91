"""Exterior calculus of translation-invariant forms on the sphere bundle R^n x S^(n-1).

Forms live in ambient coordinates (x, v) on R^n x R^n.  Polynomial
coefficients are kept canonical modulo the sphere relation sum(v_i^2) = 1
(the last exponent is reduced below 2) and the one-form content is projected
tangentially to the sphere fiber, so two forms are equal on the bundle
exactly when their stored representations coincide.

Coefficients are Scalars (or ints/rationals) for exact work; plain floats
are accepted by the purely algebraic operations for numeric pipelines.
"""

from __future__ import annotations

import math
from itertools import combinations

from .scalars import Rat, Scalar, ZERO, gamma_half

Fraction = type(Rat(1))


def _merge_sign(a, b) -> int:
    """Sign of sorting the concatenation of two disjoint ascending tuples."""
    s = 1
    for x in a:
        for y in b:
            if x > y:
                s = -s
    return s


def _insert_sign(t, i) -> int:
    """Sign of appending index i to ascending tuple t and re-sorting."""
    s = 1
    for x in t:
        if x > i:
            s = -s
    return s


def _prepend_sign(t, i) -> int:
    """Sign of prepending index i to ascending tuple t and re-sorting."""
    s = 1
    for x in t:
        if x < i:
            s = -s
    return s


def _insert(t, i):
    out = tuple(sorted(t + (i,)))
    return out


def _complement(t, n):
    return tuple(i for i in range(n) if i not in t)


class SpherePoly:
    """Polynomial in the fiber variables v_1..v_n, canonical modulo sum(v_i^2) = 1.

    Stored as {exponent tuple: coefficient} with the last exponent at most 1;
    v_n^2 is rewritten as 1 - sum of the other squares on construction.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n, terms=None):
        self.n = n
        t = {}
        if terms:
            stack = list(terms.items())
            while stack:
                e, c = stack.pop()
                if not c:
                    continue
                if e[n - 1] >= 2:
                    base = e[:n - 1] + (e[n - 1] - 2,)
                    stack.append((base, c))
                    for i in range(n - 1):
                        stack.append((base[:i] + (base[i] + 2,) + base[i + 1:], -c))
                else:
                    s = t.get(e, 0) + c
                    if s:
                        t[e] = s
                    else:
                        t.pop(e, None)
        self.terms = t
        self._hash = None

    @classmethod
    def constant(cls, n, c) -> "SpherePoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n, i) -> "SpherePoly":
        e = tuple(1 if k == i else 0 for k in range(n))
        return cls(n, {e: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, SpherePoly):
            other = SpherePoly.constant(self.n, other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        out = SpherePoly.__new__(SpherePoly)
        out.n = self.n
        out.terms = t
        out._hash = None
        return out

    __radd__ = __add__

    def __neg__(self):
        out = SpherePoly.__new__(SpherePoly)
        out.n = self.n
        out.terms = {e: -c for e, c in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        if not isinstance(other, SpherePoly):
            other = SpherePoly.constant(self.n, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int) and other == 1:
            return self
        if not isinstance(other, SpherePoly):
            out = SpherePoly.__new__(SpherePoly)
            out.n = self.n
            out.terms = {}
            out._hash = None
            for e, c in self.terms.items():
                s = c * other
                if s:
                    out.terms[e] = s
            return out
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if not c:
                    continue
                s = t.get(e, 0) + c
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return SpherePoly(self.n, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SpherePoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Scalar, Fraction)):
            zero = not other
            if zero:
                return not self.terms
            return self.terms == {(0,) * self.n: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, i) -> "SpherePoly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                t[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return SpherePoly(self.n, t)

    def substitute_linear(self, A) -> "SpherePoly":
        """Substitute v_i -> sum_j A[i][j] v_j."""
        lin = [SpherePoly(self.n, {tuple(1 if k == j else 0 for k in range(self.n)): A[i][j]
                                   for j in range(self.n) if A[i][j]})
               for i in range(self.n)]
        out = SpherePoly(self.n)
        for e, c in self.terms.items():
            term = SpherePoly.constant(self.n, c)
            for i, ei in enumerate(e):
                for _ in range(ei):
                    term = term * lin[i]
            out = out + term
        return out

    def negate_variables(self) -> "SpherePoly":
        t = {e: (c if sum(e) % 2 == 0 else -c) for e, c in self.terms.items()}
        out = SpherePoly.__new__(SpherePoly)
        out.n = self.n
        out.terms = {e: c for e, c in t.items() if c}
        out._hash = None
        return out

    def evaluate(self, v) -> float:
        total = 0.0
        for e, c in self.terms.items():
            m = float(c)
            for vi, ei in zip(v, e):
                if ei:
                    m *= vi ** ei
            total += m
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(f"v{i + 1}" + (f"^{k}" if k > 1 else "")
                            for i, k in enumerate(e) if k)
            cs = str(c)
            parts.append(f"({cs})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


def reduce_poly(n, raw_terms) -> SpherePoly:
    """Canonical representative of a raw exponent-to-coefficient map."""
    return SpherePoly(n, dict(raw_terms))


def _accumulate(d, key, val):
    if not val:
        return
    cur = d.get(key)
    s = val if cur is None else cur + val
    if s:
        d[key] = s
    else:
        del d[key]


def _wedge_step(acc, combo):
    """Wedge every monomial in acc with a sum of coefficient-weighted 1-forms.

    combo: list of (coefficient, kind, index) with kind 0 for dx, 1 for dv.
    """
    nxt = {}
    for (I, J), p in acc.items():
        for coeff, kind, idx in combo:
            if kind == 0:
                if idx in I:
                    continue
                sgn = _insert_sign(I, idx) * (-1 if len(J) % 2 else 1)
                key = (_insert(I, idx), J)
            else:
                if idx in J:
                    continue
                sgn = _insert_sign(J, idx)
                key = (I, _insert(J, idx))
            q = p * coeff
            if sgn < 0:
                q = -q
            _accumulate(nxt, key, q)
    return nxt


def _project_terms(n, terms):
    """Replace each dv_j by dv_j - v_j * sum_t v_t dv_t and expand."""
    out = {}
    for (I, J), p in terms.items():
        if not p:
            continue
        if not J:
            _accumulate(out, (I, J), p)
            continue
        acc = {(I, ()): p}
        for j in J:
            combo = [(1, 1, j)]
            for t in range(n):
                ejt = [0] * n
                ejt[j] += 1
                ejt[t] += 1
                combo.append((SpherePoly(n, {tuple(ejt): -1}), 1, t))
            acc = _wedge_step(acc, combo)
        for key, q in acc.items():
            _accumulate(out, key, q)
    return out


class InvariantForm:
    """Translation-invariant differential form, stored tangentially projected.

    terms maps (I, J) to a SpherePoly coefficient, where I and J are strictly
    ascending 0-based index tuples naming the dx and dv factors; dx factors
    come first in the monomial orientation.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n, terms=None, projected=False):
        self.n = n
        src = terms or {}
        for (I, J) in src:
            if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
                raise ValueError(f"index tuples must be strictly ascending: {(I, J)}")
            if any(not 0 <= i < n for i in I + J):
                raise ValueError(f"index out of range for dimension {n}: {(I, J)}")
        clean = {}
        for key, p in src.items():
            if not isinstance(p, SpherePoly):
                p = SpherePoly.constant(n, p)
            _accumulate(clean, (tuple(key[0]), tuple(key[1])), p)
        if not projected:
            clean = _project_terms(n, clean)
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls, n) -> "InvariantForm":
        return cls(n, {}, projected=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return {len(I) + len(J) for (I, J) in self.terms}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("form is zero or not homogeneous")
        return degs.pop()

    def __add__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        t = dict(self.terms)
        for key, p in other.terms.items():
            _accumulate(t, key, p)
        return InvariantForm(self.n, t, projected=True)

    def __neg__(self):
        return InvariantForm(self.n, {k: -p for k, p in self.terms.items()}, projected=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, InvariantForm):
            return NotImplemented
        t = {}
        for key, p in self.terms.items():
            _accumulate(t, key, p * c)
        return InvariantForm(self.n, t, projected=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def wedge(self, other) -> "InvariantForm":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out = {}
        for (I1, J1), p1 in self.terms.items():
            for (I2, J2), p2 in other.terms.items():
                if set(I1) & set(I2) or set(J1) & set(J2):
                    continue
                sgn = _merge_sign(I1, I2) * _merge_sign(J1, J2)
                if (len(I2) * len(J1)) % 2:
                    sgn = -sgn
                q = p1 * p2
                if sgn < 0:
                    q = -q
                key = (tuple(sorted(I1 + I2)), tuple(sorted(J1 + J2)))
                _accumulate(out, key, q)
        return InvariantForm(self.n, out, projected=True)

    def evaluate_at(self, v, vectors) -> float:
        """Numeric value on tangent vectors at fiber point v.

        Each vector is a length-2n sequence (x-components then v-components).
        """
        import numpy as np

        k = len(vectors)
        total = 0.0
        for (I, J), p in self.terms.items():
            if len(I) + len(J) != k:
                continue
            c = p.evaluate(v)
            if c == 0.0:
                continue
            if k == 0:
                total += c
                continue
            rows = [[vec[i] for vec in vectors] for i in I]
            rows += [[vec[self.n + j] for vec in vectors] for j in J]
            total += c * float(np.linalg.det(np.array(rows, dtype=float)))
        return total

    def map_coefficients(self, fn) -> "InvariantForm":
        t = {}
        for key, p in self.terms.items():
            _accumulate(t, key, fn(p))
        return InvariantForm(self.n, t, projected=True)

    def to_float(self) -> "InvariantForm":
        """Copy with float coefficients, for numeric evaluation paths."""
        def conv(p):
            return SpherePoly(p.n, {e: float(c) for e, c in p.terms.items()})
        return self.map_coefficients(conv)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (I, J) in sorted(self.terms, key=lambda k: (len(k[0]) + len(k[1]), k)):
            p = self.terms[(I, J)]
            mono = "^".join([f"dx{i + 1}" for i in I] + [f"dv{j + 1}" for j in J])
            parts.append(f"({p})" + (f" {mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


class VectorField:
    """Vector field on the bundle with polynomial components.

    x_comps and v_comps hold the coefficients of d/dx_i and d/dv_i.
    """

    __slots__ = ("n", "x_comps", "v_comps")

    def __init__(self, n, x_comps, v_comps):
        def conv(c):
            return c if isinstance(c, SpherePoly) else SpherePoly.constant(n, c)
        self.n = n
        self.x_comps = [conv(c) for c in x_comps]
        self.v_comps = [conv(c) for c in v_comps]
        if len(self.x_comps) != n or len(self.v_comps) != n:
            raise ValueError("component count mismatch")

    def is_tangent(self) -> bool:
        s = SpherePoly(self.n)
        for i in range(self.n):
            s = s + SpherePoly.variable(self.n, i) * self.v_comps[i]
        return s.is_zero()


def reeb_field(n) -> VectorField:
    return VectorField(n, [SpherePoly.variable(n, i) for i in range(n)],
                       [SpherePoly(n) for _ in range(n)])


def dx_form(n, i) -> InvariantForm:
    return InvariantForm(n, {((i,), ()): SpherePoly.constant(n, 1)}, projected=True)


def dv_form(n, i) -> InvariantForm:
    return InvariantForm(n, {((), (i,)): SpherePoly.constant(n, 1)})


def alpha_form(n) -> InvariantForm:
    t = {((i,), ()): SpherePoly.variable(n, i) for i in range(n)}
    return InvariantForm(n, t, projected=True)


def dx_top_form(n) -> InvariantForm:
    return InvariantForm(n, {(tuple(range(n)), ()): SpherePoly.constant(n, 1)}, projected=True)


def sphere_volume_form(n) -> InvariantForm:
    """Volume form of the fiber sphere: contraction of dv_1^...^dv_n with v."""
    t = {}
    for t_idx in range(n):
        J = tuple(i for i in range(n) if i != t_idx)
        c = SpherePoly.variable(n, t_idx)
        t[((), J)] = c if t_idx % 2 == 0 else -c
    return InvariantForm(n, t, projected=True)


def d(a: InvariantForm) -> InvariantForm:
    """Exterior derivative, computed on the ambient representative then projected."""
    out = {}
    for (I, J), p in a.terms.items():
        for i in range(a.n):
            dp = p.derivative(i)
            if not dp:
                continue
            if i in J:
                continue
            sgn = _prepend_sign(J, i) * (-1 if len(I) % 2 else 1)
            if sgn < 0:
                dp = -dp
            _accumulate(out, (I, _insert(J, i)), dp)
    return InvariantForm(a.n, out)


def contract(X: VectorField, a: InvariantForm) -> InvariantForm:
    """Interior product with a vector field tangent to the bundle."""
    if not X.is_tangent():
        raise ValueError("vector field is not tangent to the sphere bundle")
    out = {}
    for (I, J), p in a.terms.items():
        for pos, i in enumerate(I):
            comp = X.x_comps[i]
            if not comp:
                continue
            q = p * comp
            if pos % 2:
                q = -q
            _accumulate(out, (I[:pos] + I[pos + 1:], J), q)
        off = len(I)
        for pos, j in enumerate(J):
            comp = X.v_comps[j]
            if not comp:
                continue
            q = p * comp
            if (off + pos) % 2:
                q = -q
            _accumulate(out, (I, J[:pos] + J[pos + 1:]), q)
    return InvariantForm(a.n, out, projected=True)


def contract_slot(a: InvariantForm, kind, idx) -> InvariantForm:
    """Interior product with a single coordinate direction (kind 0: x, 1: v)."""
    out = {}
    for (I, J), p in a.terms.items():
        if kind == 0:
            if idx not in I:
                continue
            pos = I.index(idx)
            q = -p if pos % 2 else p
            _accumulate(out, (I[:pos] + I[pos + 1:], J), q)
        else:
            if idx not in J:
                continue
            pos = J.index(idx)
            q = -p if (len(I) + pos) % 2 else p
            _accumulate(out, (I, J[:pos] + J[pos + 1:]), q)
    return InvariantForm(a.n, out, projected=True)


def lie_reeb(a: InvariantForm) -> InvariantForm:
    """Lie derivative along the Reeb field, via the Cartan formula."""
    T = reeb_field(a.n)
    return contract(T, d(a)) + d(contract(T, a))


def _substitute(a, dx_images, dv_images, coeff_fn) -> InvariantForm:
    out = {}
    for (I, J), p in a.terms.items():
        acc = {((), ()): coeff_fn(p)}
        for i in I:
            acc = _wedge_step(acc, dx_images[i])
        for j in J:
            acc = _wedge_step(acc, dv_images[j])
        for key, q in acc.items():
            _accumulate(out, key, q)
    return InvariantForm(a.n, out)


def pullback_antipode(a: InvariantForm) -> InvariantForm:
    out = {}
    for (I, J), p in a.terms.items():
        q = p.negate_variables()
        if len(J) % 2:
            q = -q
        out[(I, J)] = q
    return InvariantForm(a.n, out, projected=True)


def pullback_ball_shift(a: InvariantForm, t) -> InvariantForm:
    """Pullback along (x, v) -> (x + t v, v)."""
    n = a.n
    dx_images = [[(1, 0, i), (t, 1, i)] for i in range(n)]
    dv_images = [[(1, 1, j)] for j in range(n)]
    return _substitute(a, dx_images, dv_images, lambda p: p)


def pullback_linear(a: InvariantForm, A) -> InvariantForm:
    """Pullback along (x, v) -> (Ax, Av) for an exactly orthogonal matrix A."""
    n = a.n
    A = [[Rat(x) if not isinstance(x, (Scalar, float)) else x for x in row] for row in A]
    for row in A:
        for x in row:
            if isinstance(x, (Scalar, float)):
                raise ValueError("orthogonal matrix entries must be exact rationals")
    for i in range(n):
        for j in range(n):
            s = sum(A[k][i] * A[k][j] for k in range(n))
            if s != (1 if i == j else 0):
                raise ValueError("matrix is not orthogonal")
    dx_images = [[(A[i][k], 0, k) for k in range(n) if A[i][k]] for i in range(n)]
    dv_images = [[(A[j][k], 1, k) for k in range(n) if A[j][k]] for j in range(n)]
    return _substitute(a, dx_images, dv_images, lambda p: p.substitute_linear(A))


def pullback(a: InvariantForm, kind, t=None, matrix=None) -> InvariantForm:
    if kind == "antipode":
        return pullback_antipode(a)
    if kind == "ball_shift":
        if t is None:
            raise ValueError("ball_shift needs a radius")
        return pullback_ball_shift(a, t)
    if kind == "linear":
        if matrix is None:
            raise ValueError("linear needs a matrix")
        return pullback_linear(a, matrix)
    raise ValueError(f"unknown bundle map {kind!r}")


def sphere_monomial_integral(e) -> Scalar:
    """Exact integral of v^e over the unit sphere S^(n-1), n = len(e)."""
    if any(ei < 0 for ei in e):
        raise ValueError("negative exponent")
    if any(ei % 2 for ei in e):
        return ZERO
    num = Rat(2)
    half = 0
    for ei in e:
        c, h = gamma_half(ei + 1)
        num *= c
        half += h
    cden, hden = gamma_half(sum(e) + len(e))
    half -= hden
    if half % 2:
        raise ArithmeticError("unreachable: fractional pi power")
    return Scalar({half // 2: num / cden})


def _coeff_to_scalar(c) -> Scalar:
    if isinstance(c, Scalar):
        return c
    if isinstance(c, (int, Fraction)) or type(c).__name__ == "Fraction":
        return Scalar({0: c})
    raise TypeError(f"exact operation on non-exact coefficient {c!r}")


def spherical_density(n, J, p) -> SpherePoly:
    """Density h with (dv-part) = h * sphere volume form, for |J| = n-1.

    h is the coefficient of dv_1^...^dv_n in (sum v_t dv_t) ^ dv_J.
    """
    (t,) = set(range(n)) - set(J)
    sgn = _prepend_sign(J, t)
    q = p * SpherePoly.variable(n, t)
    return -q if sgn < 0 else q


def integrate_spherical(n, J, p) -> Scalar:
    h = spherical_density(n, J, p)
    total = ZERO
    for e, c in h.terms.items():
        total = total + _coeff_to_scalar(c) * sphere_monomial_integral(e)
    return total


class BaseForm:
    """Constant-coefficient form on the x factor: {index tuple: Scalar}."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        t = {}
        for I, c in (terms or {}).items():
            c = c if isinstance(c, Scalar) else Scalar({0: c})
            if c:
                t[tuple(I)] = t.get(tuple(I), ZERO) + c
        self.terms = {I: c for I, c in t.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, BaseForm):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other):
        t = dict(self.terms)
        for I, c in other.terms.items():
            s = t.get(I, ZERO) + c
            if s:
                t[I] = s
            else:
                t.pop(I, None)
        out = BaseForm(self.n)
        out.terms = t
        return out

    def __neg__(self):
        out = BaseForm(self.n)
        out.terms = {I: -c for I, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        out = BaseForm(self.n)
        out.terms = {}
        for I, v in self.terms.items():
            s = v * c
            if s:
                out.terms[I] = s
        return out

    __rmul__ = __mul__

    def top_coefficient(self) -> Scalar:
        """Coefficient of dx_1^...^dx_n."""
        return self.terms.get(tuple(range(self.n)), ZERO)

    def to_invariant(self) -> InvariantForm:
        t = {(I, ()): SpherePoly.constant(self.n, c) for I, c in self.terms.items()}
        return InvariantForm(self.n, t, projected=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for I in sorted(self.terms, key=lambda k: (len(k), k)):
            mono = "^".join(f"dx{i + 1}" for i in I)
            parts.append(f"({self.terms[I]})" + (f" {mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


def fiber_integrate(a: InvariantForm) -> BaseForm:
    """Integrate over the sphere fiber; only dv-degree n-1 terms contribute."""
    n = a.n
    out = {}
    for (I, J), p in a.terms.items():
        if len(J) != n - 1:
            continue
        val = integrate_spherical(n, J, p)
        if val:
            out[I] = out.get(I, ZERO) + val
    return BaseForm(n, out)


def hodge_star(a: InvariantForm) -> InvariantForm:
    """Hodge star for the product metric, oriented by dx_1..n ^ fiber volume."""
    n = a.n
    out = {}
    for (I, J), p in a.terms.items():
        Ic = _complement(I, n)
        Jc = _complement(J, n)
        m = len(J)
        sgn = _merge_sign(I, Ic) * _merge_sign(J, Jc)
        if ((n - len(I)) * m + m) % 2:
            sgn = -sgn
        for pos, t in enumerate(Jc):
            q = p * SpherePoly.variable(n, t)
            s2 = sgn * (-1 if pos % 2 else 1)
            if s2 < 0:
                q = -q
            _accumulate(out, (Ic, Jc[:pos] + Jc[pos + 1:]), q)
    return InvariantForm(n, out)


def monomial_forms(n, degree, max_vdeg):
    """All projected monomial forms v^e dx_I ^ dv_J of the given total form degree."""
    out = []
    exps = _exponents_up_to(n, max_vdeg)
    for k in range(degree + 1):
        for I in combinations(range(n), k):
            for J in combinations(range(n), degree - k):
                if degree - k > n:
                    continue
                for e in exps:
                    f = InvariantForm(n, {(I, J): SpherePoly(n, {e: 1})})
                    if not f.is_zero():
                        out.append(f)
    return out


def _exponents_up_to(n, max_deg):
    out = []

    def rec(prefix, remaining):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        # canonical exponents keep the last slot below 2
        cap = remaining if len(prefix) < n - 1 else min(remaining, 1)
        for k in range(cap + 1):
            rec(prefix + [k], remaining - k)

    rec([], max_deg)
    return out
