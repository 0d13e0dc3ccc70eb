"""Exact integer and rational linear algebra on tuples.

Vectors are tuples of ints (or Fractions for rational data), matrices are
tuples of row tuples.  Everything here is arbitrary precision; no floats.
"""

from fractions import Fraction
from math import gcd


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def vgcd(v):
    g = 0
    for a in v:
        g = gcd(g, abs(a))
    return g


def is_zero(v):
    return all(a == 0 for a in v)


def primitive(v):
    """Divide an integer vector by the gcd of its coordinates."""
    g = vgcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(a // g for a in v)


def scale_to_int(v):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    lcm = 1
    for a in v:
        f = Fraction(a)
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    w = tuple(int(Fraction(a) * lcm) for a in v)
    return primitive(w)


def sign_normalized(v):
    """Flip the sign so the first nonzero coordinate is positive."""
    for a in v:
        if a != 0:
            return v if a > 0 else vscale(-1, v)
    return v


def mat_mul_vec(m, v):
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m):
    return tuple(zip(*m))


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# rational Gaussian elimination


def row_echelon(rows):
    """Return (echelon rows as Fractions, pivot column list)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    return len(row_echelon(rows)[0])


def solve(a_rows, b):
    """Solve A x = b over the rationals; return one solution or None."""
    if not a_rows:
        return None if any(Fraction(x) != 0 for x in b) else ()
    aug = [tuple(row) + (bi,) for row, bi in zip(a_rows, b)]
    ech, pivots = row_echelon(aug)
    ncols = len(a_rows[0])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(ech, pivots):
        x[p] = row[-1]
    return tuple(x)


def nullspace(rows):
    """Rational basis of the kernel of the matrix (rows act as forms)."""
    if not rows:
        return ()
    ncols = len(rows[0])
    ech, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(ech, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return tuple(basis)


def inverse(rows):
    """Exact inverse of a square rational matrix."""
    n = len(rows)
    aug = [tuple(row) + tuple(identity(n)[i]) for i, row in enumerate(rows)]
    ech, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return tuple(tuple(row[n:]) for row in ech)


# ---------------------------------------------------------------------------
# integer lattice algorithms


def smith_normal_form(a):
    """Smith normal form with transforms: U*A*V = D.

    D is diagonal with non-negative entries d1 | d2 | ..., and U, V are
    unimodular.  Classical row/column reduction, pivoting on the entry of
    minimal absolute value.
    """
    a = [list(r) for r in a]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [list(r) for r in identity(m)]
    v = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):  # row_i += c*row_j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, c):  # col_i += c*col_j
        for row in a:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    t = 0
    while t < min(m, n):
        # locate pivot of minimal absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, m):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                add_row(i, t, -q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                add_col(j, t, -q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the remaining block
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in v),
    )


def hermite_normal_form(rows):
    """Row-style Hermite normal form of the lattice spanned by the rows.

    Returns a canonical basis (no zero rows): row echelon over Z with
    positive pivots and reduced entries above them.
    """
    m = [list(r) for r in rows if not is_zero(r)]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # gcd elimination in column c below row r
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(m[i][c]))
            i0 = nz[0]
            for i in nz[1:]:
                q = m[i][c] // m[i0][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[i0])]
        nz = [i for i in range(r, len(m)) if m[i][c] != 0]
        if not nz:
            continue
        m[r], m[nz[0]] = m[nz[0]], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r] if not is_zero(row))


def kernel_basis_int(rows):
    """Basis of the saturated integer kernel {x in Z^n : A x = 0}."""
    if not rows:
        return ()
    n = len(rows[0])
    d, _u, v = smith_normal_form(rows)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i] != 0)
    cols = transpose(v)
    return hermite_normal_form(cols[r:])


def saturation_basis(gens):
    """Canonical basis of the saturation (span(gens) intersect Z^n)."""
    gens = [g for g in gens if not is_zero(g)]
    if not gens:
        return ()
    n = len(gens[0])
    eqs = kernel_basis_int(gens)
    if not eqs:
        return hermite_normal_form(identity(n))
    return kernel_basis_int(eqs)


def lattice_index(gens, sub_gens):
    """Index of the lattice spanned by sub_gens inside the saturation of gens.

    Raises ValueError when the sublattice does not have finite index.
    """
    sat = saturation_basis(gens)
    d = len(sat)
    coords = []
    for s in sub_gens:
        c = solve(transpose(sat), s)
        if c is None:
            raise ValueError("sublattice not finite index")
        assert all(x.denominator == 1 for x in c)
        coords.append(tuple(int(x) for x in c))
    if rank(coords) != d:
        raise ValueError("sublattice not finite index")
    dm, _, _ = smith_normal_form(coords)
    idx = 1
    for i in range(d):
        idx *= dm[i][i]
    return abs(idx)


def complete_to_unimodular(rows):
    """Complete rows (a basis of a saturated sublattice) to a Z-basis.

    Returns the full unimodular matrix whose first len(rows) rows are the
    input rows.
    """
    d = len(rows)
    if d == 0:
        raise ValueError("empty basis")
    n = len(rows[0])
    dm, _u, v = smith_normal_form(rows)
    for i in range(d):
        if abs(dm[i][i]) != 1:
            raise ValueError("rows do not span a saturated sublattice")
    vinv = inverse(v)
    extra = [tuple(int(x) for x in vinv[i]) for i in range(d, n)]
    return tuple(rows) + tuple(extra)


def solve_int(a_rows, b):
    """One integer solution of A x = b, or None (via Smith normal form)."""
    if not a_rows:
        return None
    d, u, v = smith_normal_form(a_rows)
    ub = mat_mul_vec(u, b)
    n = len(a_rows[0])
    y = [0] * n
    for i in range(len(a_rows)):
        di = d[i][i] if i < n else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
    for i in range(n, len(a_rows)):
        if ub[i] != 0:
            return None
    return mat_mul_vec(v, y)
