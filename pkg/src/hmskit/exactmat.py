"""Exact integer and rational linear algebra plus sparse multivariate polynomials.

Scalars are python ints and fractions.Fraction; nothing in this module (or in
anything built on top of it) touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Rat = Fraction


# ------------------------------------------------------------------ matrices
# Matrices are plain lists of lists, row major.  Empty matrices are allowed
# and show up naturally (rank-0 free modules), so the helpers take explicit
# dimensions where the shape cannot be inferred.


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(rows, cols):
    return [[0] * cols for _ in range(rows)]


def mat_shape(m):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return rows, cols


def mat_mul(a, b):
    ra, ca = mat_shape(a)
    rb, cb = mat_shape(b)
    if ca != rb:
        raise ValueError("matrix shape mismatch in product")
    out = [[0] * cb for _ in range(ra)]
    for i in range(ra):
        arow = a[i]
        orow = out[i]
        for k in range(ca):
            v = arow[k]
            if v:
                brow = b[k]
                for j in range(cb):
                    if brow[j]:
                        orow[j] += v * brow[j]
    return out


def mat_transpose(m):
    rows, cols = mat_shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def det_int(a):
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_inverse_rat(a):
    """Exact inverse of a square matrix with int/Fraction entries."""
    n = len(a)
    aug = [[Rat(x) for x in row] + [Rat(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# --------------------------------------------------------- Smith normal form


def _snf_swap_rows(m, u, i, j):
    m[i], m[j] = m[j], m[i]
    u[i], u[j] = u[j], u[i]


def _snf_swap_cols(m, v, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _snf_add_row(m, u, dst, src, q):
    # row dst += q * row src
    m[dst] = [a + q * b for a, b in zip(m[dst], m[src])]
    u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]


def _snf_add_col(m, v, dst, src, q):
    for row in m:
        row[dst] += q * row[src]
    for row in v:
        row[dst] += q * row[src]


def smith_normal_form(a):
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U*a*V = D, U and V unimodular, D diagonal with
    non-negative entries satisfying d1 | d2 | ... .
    """
    rows, cols = mat_shape(a)
    m = [list(r) for r in a]
    u = identity_matrix(rows)
    v = identity_matrix(cols)
    k = 0
    limit = min(rows, cols)
    while k < limit:
        # locate smallest nonzero entry in the trailing block (growth control)
        piv = None
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                e = m[i][j]
                if e != 0 and (best is None or abs(e) < best):
                    best = abs(e)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        _snf_swap_rows(m, u, k, piv[0])
        _snf_swap_cols(m, v, k, piv[1])
        dirty = False
        for i in range(k + 1, rows):
            if m[i][k] != 0:
                q = -(m[i][k] // m[k][k])
                _snf_add_row(m, u, i, k, q)
                if m[i][k] != 0:
                    dirty = True
        for j in range(k + 1, cols):
            if m[k][j] != 0:
                q = -(m[k][j] // m[k][k])
                _snf_add_col(m, v, j, k, q)
                if m[k][j] != 0:
                    dirty = True
        if dirty:
            continue  # remainders left, pick a new pivot in the same slot
        # pivot must divide every entry of the trailing block
        stained = False
        pk = m[k][k]
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if m[i][j] % pk != 0:
                    _snf_add_row(m, u, k, i, 1)
                    stained = True
                    break
            if stained:
                break
        if stained:
            continue
        k += 1
    for i in range(limit):
        if m[i][i] < 0:
            for j in range(cols):
                m[i][j] = -m[i][j]
            for j in range(rows):
                u[i][j] = -u[i][j]
    return u, m, v


def snf_diagonal(d):
    rows, cols = mat_shape(d)
    return [d[i][i] for i in range(min(rows, cols))]


# ------------------------------------------------------------ rational kernel


def rat_kernel(m):
    """Basis of the right kernel of a matrix with int/Fraction entries.

    Returns a list of vectors (lists of Fraction) spanning {v : m v = 0}.
    """
    rows, cols = mat_shape(m)
    red = [[Rat(x) for x in row] for row in m]
    pivots = []  # (row, col)
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if red[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        red[r], red[piv] = red[piv], red[r]
        pv = red[r][c]
        red[r] = [x / pv for x in red[r]]
        for i in range(rows):
            if i != r and red[i][c] != 0:
                f = red[i][c]
                red[i] = [x - f * y for x, y in zip(red[i], red[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(cols):
        if free in pivot_cols:
            continue
        vec = [Rat(0)] * cols
        vec[free] = Rat(1)
        for prow, pcol in pivots:
            vec[pcol] = -red[prow][free]
        basis.append(vec)
    return basis


def rat_rank(m):
    rows, cols = mat_shape(m)
    return cols - len(rat_kernel(m))


def int_kernel(m):
    """Basis of the integer lattice {v in Z^cols : m v = 0}."""
    rows, cols = mat_shape(m)
    u, d, v = smith_normal_form(m)
    diag = snf_diagonal(d)
    rank = sum(1 for x in diag if x != 0)
    # kernel is spanned by the columns of V past the rank
    return [[v[i][j] for i in range(cols)] for j in range(rank, cols)]


# ------------------------------------------------- characteristic polynomial


def charpoly(m):
    """Characteristic polynomial det(t*I - m) by Faddeev-LeVerrier.

    Entries may be int or Fraction; returns the coefficient list
    [1, c1, ..., cn] for t^n + c1 t^(n-1) + ... + cn.
    """
    n = len(m)
    coeffs = [Rat(1)]
    mk = [[Rat(x) for x in row] for row in m]
    work = [row[:] for row in mk]
    for k in range(1, n + 1):
        trace = sum(work[i][i] for i in range(n))
        ck = -trace / k
        coeffs.append(ck)
        if k == n:
            break
        for i in range(n):
            work[i][i] += ck
        work = mat_mul(mk, work)
    return coeffs


# ------------------------------------------------------ sparse polynomials


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Terms are stored in a dict keyed by exponent tuples; zero coefficients
    are never kept.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                c = Rat(coeff)
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise ValueError("exponent vector has wrong length")
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent")
                clean[exps] = clean.get(exps, Rat(0)) + c
            clean = {e: c for e, c in clean.items() if c != 0}
        self.terms = clean

    # ---- constructors

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars):
        return cls(nvars, {(0,) * nvars: Rat(1)})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: Rat(c)})

    @classmethod
    def variable(cls, nvars, i, power=1):
        exps = [0] * nvars
        exps[i] = power
        return cls(nvars, {tuple(exps): Rat(1)})

    @classmethod
    def monomial(cls, nvars, exps, coeff=1):
        return cls(nvars, {tuple(exps): Rat(coeff)})

    # ---- queries

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # ---- arithmetic

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Rat(0)) + c
        return Poly(self.nvars, terms)

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Rat)):
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Rat(0)) + c1 * c2
        return Poly(self.nvars, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Rat)):
            return self * other
        return NotImplemented

    def partial(self, i):
        """Partial derivative with respect to variable i."""
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return Poly(self.nvars, terms)

    # ---- display

    def format(self, names=None):
        if not self.terms:
            return "0"
        if names is None:
            names = default_var_names(self.nvars)
        pieces = []
        for exps, coeff in sorted(self.terms.items(), reverse=True):
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                pieces.append((coeff, str(abs(coeff))))
                continue
            ac = abs(coeff)
            if ac == 1:
                pieces.append((coeff, body))
            else:
                pieces.append((coeff, f"{ac}*{body}"))
        out = []
        for i, (coeff, text) in enumerate(pieces):
            if i == 0:
                out.append(("-" if coeff < 0 else "") + text)
            else:
                out.append(("- " if coeff < 0 else "+ ") + text)
        return " ".join(out)

    def __repr__(self):
        return f"Poly({self.format()})"


def default_var_names(n):
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def poly_add(p, q):
    return p + q


def poly_mul(p, q):
    return p * q


def poly_partial(p, i):
    return p.partial(i)


def parse_poly_string(text, nvars, names=None):
    """Inverse of Poly.format for the restricted shapes this package emits."""
    if names is None:
        names = default_var_names(nvars)
    index = {name: i for i, name in enumerate(names)}
    text = text.strip()
    if text == "0":
        return Poly.zero(nvars)
    text = text.replace("- ", "+ -").replace("+ ", "+")
    parts = [p.strip() for p in text.split("+") if p.strip()]
    terms = {}
    for part in parts:
        sign = 1
        if part.startswith("-"):
            sign = -1
            part = part[1:].strip()
        coeff = Rat(1)
        exps = [0] * nvars
        for factor in part.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor[0].isdigit():
                coeff *= Rat(factor)
                continue
            if "^" in factor:
                name, power = factor.split("^")
                exps[index[name]] += int(power)
            else:
                exps[index[factor]] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, Rat(0)) + sign * coeff
    return Poly(nvars, terms)


def vec_gcd(values):
    g = 0
    for v in values:
        g = gcd(g, abs(v))
        if g == 1:
            return 1
    return g
