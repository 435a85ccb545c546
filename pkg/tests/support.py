"""Shared builders and independent oracles for the test suite.

Oracles here are deliberately written from scratch (brute-force or
first-principles) so they do not share code paths with the library.
"""

import math
import random
from fractions import Fraction

from quadpencil.exact import Poly, QuotientField, mat_mul, mat_transpose
from quadpencil.forms import LinearSubspace, QuadraticForm
from quadpencil.descent import mat_inverse_field


def random_symmetric(rng, dim, height):
    g = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            c = Fraction(rng.randint(-height, height))
            g[i][j] = c
            g[j][i] = c
    return QuadraticForm(g)


def random_pencil_forms(rng, dim, height):
    """Two random non-proportional symmetric forms."""
    while True:
        F = random_symmetric(rng, dim, height)
        G = random_symmetric(rng, dim, height)
        if F.is_zero() or G.is_zero():
            continue
        flat_f = [x for r in F.gram for x in r]
        flat_g = [x for r in G.gram for x in r]
        cross = None
        prop = True
        for a, b in zip(flat_f, flat_g):
            if b == 0:
                if a != 0:
                    prop = False
                    break
            else:
                t = a / b
                if cross is None:
                    cross = t
                elif t != cross:
                    prop = False
                    break
        if not prop:
            return F, G


# ---------------------------------------------------------------------------
# conjugate-pair P^6 instances built FROM a chosen quadric T over K


def build_conjugate_weil_instance(seed=0):
    """(F0, G0, plane, planted K-point data) with a conjugate rank-4 pair
    over K = Q[t]/(t^2+1): three hyperbolic coordinate pairs plus one
    rational coordinate, built from a chosen T with rational upper 3x3
    block diag(4,4,-12) (so the conic is x0^2+x1^2-3x2^2, no rational
    points) and a planted K-point on T = 0."""
    rng = random.Random(seed)
    K = QuotientField(Poly([1, 0, 1]))
    zero, one = K.zero, K.one

    def kk(a, b=0):
        return K.reduce(Poly([a, b]))

    while True:
        T = [[zero] * 4 for _ in range(4)]
        T[0][0], T[1][1], T[2][2] = kk(4), kk(4), kk(-12)
        for i in range(3):
            e = kk(rng.randint(-3, 3), rng.randint(-3, 3))
            T[i][3] = T[3][i] = e
        w = [kk(1), kk(0, 1), kk(rng.randint(-1, 1)), one]
        quad = zero
        for i in range(3):
            for j in range(3):
                quad = K.add(quad, K.mul(K.mul(T[i][j], w[i]), w[j]))
        lin = zero
        for i in range(3):
            lin = K.add(lin, K.mul(T[i][3], w[i]))
        T[3][3] = K.neg(K.add(quad, K.mul(kk(2), lin)))

        def col(k, sgn):
            c = [zero] * 7
            c[k] = one
            c[3 + k] = kk(0, sgn)
            return c

        cols = ([col(k, 1) for k in range(3)]
                + [col(k, -1) for k in range(3)]
                + [[one if i == 6 else zero for i in range(7)]])
        B = [[cols[j][i] for j in range(7)] for i in range(7)]
        Binv = mat_inverse_field(B, K)
        big = [[zero] * 7 for _ in range(7)]
        for i in range(4):
            for j in range(4):
                big[3 + i][3 + j] = T[i][j]
        N1 = mat_mul(mat_mul(mat_transpose(Binv), big, K), Binv, K)
        N2 = [[K.conjugate(x) for x in row] for row in N1]
        t = Poly([0, 1])
        dli = K.inv(K.sub(K.conjugate(t), t))
        Fg, Gg = [], []
        for i in range(7):
            fr, gr = [], []
            for j in range(7):
                fe = K.mul(dli, K.sub(K.mul(K.conjugate(t), N1[i][j]),
                                      K.mul(t, N2[i][j])))
                ge = K.mul(dli, K.sub(N2[i][j], N1[i][j]))
                assert fe.degree <= 0 and ge.degree <= 0
                fr.append(fe[0] if fe.coeffs else Fraction(0))
                gr.append(ge[0] if ge.coeffs else Fraction(0))
            Fg.append(fr)
            Gg.append(gr)
        F0 = QuadraticForm(Fg)
        G0 = QuadraticForm(Gg)
        from quadpencil.forms import form_rank
        if form_rank(G0) < 6:
            continue
        plane = LinearSubspace.standard(7, (0, 1, 2))
        return F0, G0, plane, {"K": K, "T": T, "point": w}


# ---------------------------------------------------------------------------
# independent local/global oracles


def brute_conic_search(a, b, c):
    """Exhaustive primitive-point search for ax^2+by^2+cz^2 = 0 within the
    Holzer bounds, written independently of the library."""
    bx = math.isqrt(abs(b * c))
    by = math.isqrt(abs(a * c))
    bz = math.isqrt(abs(a * b))
    for x in range(bx + 1):
        for y in range(by + 1):
            for z in range(bz + 1):
                if x == y == z == 0:
                    continue
                if a * x * x + b * y * y + c * z * z == 0:
                    return (x, y, z)
    return None


def hilbert_oracle(a, b, p, depth=6):
    """Independent verdict for solvability of z^2 = a x^2 + b y^2 over Q_p
    by bounded lifting: returns True/False, or None if inconclusive.

    - definitely solvable: a primitive solution mod p^depth with a unit
      partial derivative (Hensel lifts it);
    - definitely insolvable: no primitive solution mod p^k for some k.
    """
    pk = p
    survivors = set()
    for x in range(p):
        for y in range(p):
            for z in range(p):
                if x == y == z == 0:
                    continue
                if (a * x * x + b * y * y - z * z) % p == 0:
                    survivors.add((x, y, z))
    for k in range(1, depth + 1):
        if not survivors:
            return False
        for (x, y, z) in survivors:
            grads = (2 * a * x, 2 * b * y, -2 * z)
            if any(g % p for g in grads):
                return True
        nxt = set()
        step = pk
        for (x, y, z) in survivors:
            for dx in range(p):
                for dy in range(p):
                    for dz in range(p):
                        nx, ny, nz = x + dx * step, y + dy * step, z + dz * step
                        if nx % p == 0 and ny % p == 0 and nz % p == 0:
                            continue
                        if (a * nx * nx + b * ny * ny - nz * nz) % (pk * p) == 0:
                            nxt.add((nx, ny, nz))
            if len(nxt) > 50000:
                return None
        survivors = nxt
        pk *= p
    return None


def hilbert_oracle_real(a, b):
    return not (a < 0 and b < 0)
