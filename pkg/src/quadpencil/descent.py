"""Hyperplane descent and rational point search.

Enumerates hyperplanes through the distinguished plane, certifies the
open-condition membership the induction needs, recurses down to P^4,
solves there through conic-bundle fibers, and handles the conjugate
rank-4 pair in P^6 by splitting the Weil restriction.  Also provides the
seeded planted-instance generator used by the test and acceptance suites.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction

from .exact import (
    Poly,
    QuotientField,
    _frac,
    echelon,
    kernel_basis,
    mat_mul,
    mat_transpose,
    matrix_rank,
    rational_sqrt,
)
from .forms import (
    LinearSubspace,
    ProjectivePoint,
    QuadraticForm,
    form_rank,
    radical_subspace,
    restrict_form,
    signature,
)
from .localsolve import (
    BudgetExceeded,
    SearchVolumeExceeded,
    conic_local_report,
    conic_rational_point,
    modp_counts,
    padic_lift_obstruction,
    reduce_ternary,
)
from .normalize import (
    DiscriminantZero,
    HypothesisReport,
    NormalizedSystem,
    hypothesis_report,
    normalize_pencil,
    verify_conic_plane,
)
from .pencil import (
    DiscriminantData,
    IdenticallyZeroDiscriminant,
    Pencil,
    discriminant,
    smoothness_test,
)


class PointNotOnX(ValueError):
    pass


class DegenerateFiber(ValueError):
    pass


class NotConjugateCase(ValueError):
    pass


class PlanesNotDisjoint(ValueError):
    pass


class PointAtInfinity(ValueError):
    pass


class RetriesExhausted(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# height-ordered enumeration of primitive sign-canonical integer vectors


def _value_key(v: int):
    return (abs(v), 0 if v > 0 else 1)


def _vector_key(vec):
    support = tuple(i for i, v in enumerate(vec) if v)
    return (len(support), support, tuple(_value_key(vec[i]) for i in support))


def primitive_vectors(length: int, height_bound: int):
    """All primitive sign-canonical integer vectors with max|v_i| <= bound,
    in increasing height, deterministic order within each height."""
    for h in range(1, height_bound + 1):
        batch = []
        for vec in itertools.product(range(-h, h + 1), repeat=length):
            if max(abs(v) for v in vec) != h:
                continue
            g = math.gcd(*(abs(v) for v in vec))
            if g != 1:
                continue
            first = next(v for v in vec if v)
            if first < 0:
                continue
            batch.append(vec)
        batch.sort(key=_vector_key)
        yield from batch


@dataclass(frozen=True)
class HyperplaneCandidate:
    alphas: tuple   # (alpha_3, ..., alpha_n), primitive, sign-canonical

    @property
    def height(self) -> int:
        return max(abs(a) for a in self.alphas)

    def linear_form(self, dim: int):
        """Coefficient vector of the hyperplane in ambient coordinates."""
        if dim != 3 + len(self.alphas):
            _bad_dim(dim, self.alphas)
        return [Fraction(0)] * 3 + [Fraction(a) for a in self.alphas]

    def cone_basis(self, dim: int) -> LinearSubspace:
        """Basis of the affine cone {sum alpha_i x_i = 0}, containing the
        standard plane e0, e1, e2."""
        if dim != 3 + len(self.alphas):
            _bad_dim(dim, self.alphas)
        cols = [[Fraction(int(i == k)) for i in range(dim)] for k in range(3)]
        for ker in kernel_basis([[Fraction(a) for a in self.alphas]]):
            cols.append([Fraction(0)] * 3 + list(ker))
        return LinearSubspace.span(dim, cols)


def _bad_dim(dim, alphas):
    raise ValueError(f"hyperplane over {len(alphas)} tail coords does not "
                     f"match ambient dimension {dim}")


def enumerate_hyperplanes(n: int, height_bound: int):
    """Hyperplanes containing the standard plane in P^n, height-ordered."""
    for vec in primitive_vectors(n - 2, height_bound):
        yield HyperplaneCandidate(alphas=vec)


def enumerate_p1(height_bound: int):
    for vec in primitive_vectors(2, height_bound):
        yield vec


# ---------------------------------------------------------------------------
# V0 membership and transversality


@dataclass(frozen=True)
class V0Certificate:
    accepted: bool
    rank_f_restricted: int
    rank_g_restricted: int
    radical_hits: tuple   # labels of radical vectors lying on H (must be ())
    rejected_clause: str | None


def _eval_linear_on_vector(alphas, vec, fld):
    """Evaluate sum alpha_i x_i (i >= 3) at a radical vector over Q or a
    quotient field; returns True iff nonzero."""
    if fld is None:
        val = sum(Fraction(a) * vec[3 + k] for k, a in enumerate(alphas))
        return val != 0
    acc = Poly([])
    for k, a in enumerate(alphas):
        acc = acc + vec[3 + k] * Fraction(a)
    return not fld.reduce(acc).is_zero()


def v0_membership(sys: NormalizedSystem, d: DiscriminantData,
                  H: HyperplaneCandidate) -> V0Certificate:
    n = sys.n
    S = H.cone_basis(sys.dim)
    rank_f = form_rank(restrict_form(sys.F, S))
    rank_g = form_rank(restrict_form(sys.G, S))
    hits = []
    for idx, rec in enumerate(d.records):
        if rec.rank >= sys.dim and rec.kind == "factor":
            continue
        if rec.kind == "mu" and rec.multiplicity < 1:
            continue
        for j, vec in enumerate(rec.radical):
            if not _eval_linear_on_vector(H.alphas, vec, rec.fld):
                hits.append(f"record{idx}/vec{j}")
    if rank_f != n:
        return V0Certificate(False, rank_f, rank_g, tuple(hits), "non-tangency")
    if hits:
        return V0Certificate(False, rank_f, rank_g, tuple(hits),
                             "singular-point-avoidance")
    if rank_g < 3:
        return V0Certificate(False, rank_f, rank_g, (), "restricted-G-rank")
    return V0Certificate(True, rank_f, rank_g, (), None)


def transversality_check(F: QuadraticForm, G: QuadraticForm,
                         H: HyperplaneCandidate, P: ProjectivePoint) -> bool:
    if F.evaluate(P.coords) != 0 or G.evaluate(P.coords) != 0:
        raise PointNotOnX("the point does not lie on X")
    dim = F.dim
    rows = [F.gradient(P.coords), G.gradient(P.coords),
            [Fraction(0)] * 3 + [Fraction(a) for a in H.alphas]]
    return matrix_rank(rows) == 3


def restricted_discriminant(sys: NormalizedSystem, H: HyperplaneCandidate):
    """Discriminant data of the restricted pencil, plus the irreducible
    quintic flag when descending from P^5."""
    S = H.cone_basis(sys.dim)
    rf = restrict_form(sys.F, S)
    rg = restrict_form(sys.G, S)
    d = discriminant(Pencil(rf, rg))
    irreducible_quintic = None
    if sys.n == 5:
        fac = d.factorization
        irreducible_quintic = (d.P.degree == 5 and len(fac.factors) == 1
                               and fac.factors[0][1] == 1)
        # with G' vanishing on the plane, rank(G') <= 4 forces deg P' <= 4,
        # so the literal condition is unattainable for conic instances; the
        # achievable analogue is an irreducible quartic lambda-part
        if not irreducible_quintic:
            irreducible_quintic = (d.P.degree == 4 and len(fac.factors) == 1
                                   and fac.factors[0][1] == 1)
    return d, irreducible_quintic


# ---------------------------------------------------------------------------
# conic bundle fibers in P^4


@dataclass(frozen=True)
class FiberConic:
    t: tuple                      # point of P^1
    residual_form: QuadraticForm  # 3 variables
    embedding: LinearSubspace     # 3-dim subspace of the P^4 cone
    mg_coeffs: tuple              # the linear form whose zero set is the fiber


def residual_conic_fiber(sys_or_forms, t) -> FiberConic:
    """Fiber of the conic bundle over t = (t0 : t1) for a normalized P^4
    system: on H_t = {t0 x3 + t1 x4 = 0} the form G factors as w * M_G and
    the fiber is F restricted to the plane {M_G = 0}."""
    if isinstance(sys_or_forms, NormalizedSystem):
        F, G = sys_or_forms.F, sys_or_forms.G
    else:
        F, G = sys_or_forms
    if F.dim != 5:
        raise ValueError("conic bundle fibers live over a P^4 system")
    t0, t1 = (int(t[0]), int(t[1]))
    if t0 == 0 and t1 == 0:
        raise ValueError("fiber parameter cannot be (0, 0)")
    w = [Fraction(0), Fraction(0), Fraction(0), Fraction(t1), Fraction(-t0)]
    cols = [[Fraction(int(i == k)) for i in range(5)] for k in range(3)] + [w]
    Ht = LinearSubspace.span(5, cols)
    G4 = restrict_form(G, Ht)
    mg = (2 * G4.gram[0][3], 2 * G4.gram[1][3], 2 * G4.gram[2][3],
          G4.gram[3][3])
    if all(c == 0 for c in mg):
        raise DegenerateFiber(f"G vanishes identically on H_{(t0, t1)}")
    plane_in_ht = kernel_basis([list(mg)])
    cols_p4 = [[sum(Ht.matrix()[i][j] * v[j] for j in range(4))
                for i in range(5)] for v in plane_in_ht]
    emb = LinearSubspace.span(5, cols_p4)
    return FiberConic(t=(t0, t1), residual_form=restrict_form(F, emb),
                      embedding=emb, mg_coeffs=mg)


# ---------------------------------------------------------------------------
# Weil restriction split in P^6


def _field_matrix(F, G, fld, gen):
    return [[fld.reduce(Poly([F.gram[i][j]]) + gen * Fraction(G.gram[i][j]))
             for j in range(F.dim)] for i in range(F.dim)]


def mat_inverse_field(A, fld):
    n = len(A)
    aug = [[A[i][j] for j in range(n)]
           + [fld.one if i == j else fld.zero for j in range(n)]
           for i in range(n)]
    red, pivots = echelon(aug, fld)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular over the quotient field")
    return [row[n:] for row in red[:n]]


@dataclass(frozen=True)
class WeilSplitData:
    fld: QuotientField         # K = Q[t]/(m), m quadratic
    factor: Poly               # the primitive integer quadratic factor
    lambda1: Poly              # generator image: the first rank-4 parameter
    plane1: tuple              # radical basis of F + lambda1 G (3 vectors / K)
    plane2: tuple              # conjugate radical basis
    basis: tuple               # 7x7 matrix over K, columns [plane1|plane2|v]
    rational_column: int       # index of the rational completion vector
    T: tuple                   # 4x4 Gram of the first quadric over K

    def conj_mat(self, rows):
        return [[self.fld.conjugate(x) for x in r] for r in rows]


def weil_restriction_split(sys: NormalizedSystem, census) -> WeilSplitData:
    if sys.n != 6:
        raise NotConjugateCase("Weil split applies to P^6 instances")
    pair = [m for m in census.members if m.kind == "conjugate-pair"]
    if not pair:
        raise NotConjugateCase("census shows no conjugate rank-4 pair")
    m = pair[0].factor
    fld = QuotientField(m.monic(), check_irreducible=False)
    gen = fld.reduce(Poly([0, 1]))
    N1 = _field_matrix(sys.F, sys.G, fld, gen)
    R1 = kernel_basis([row[:] for row in N1], fld)
    if len(R1) != 3:
        raise NotConjugateCase(f"rank-4 member has radical of dim {len(R1)}")
    R2 = [[fld.conjugate(x) for x in v] for v in R1]
    gen2 = fld.conjugate(gen)
    N2 = _field_matrix(sys.F, sys.G, fld, gen2)
    for v in R2:
        for row in N2:
            acc = fld.zero
            for x, y in zip(row, v):
                acc = fld.add(acc, fld.mul(x, y))
            assert fld.is_zero(acc), "conjugate plane is not the radical"
    stacked = [[R[i] for R in R1 + R2] for i in range(7)]
    if matrix_rank([r[:] for r in stacked], fld) != 6:
        raise PlanesNotDisjoint("singular planes intersect")
    rat_col = None
    for k in range(7):
        e = [fld.one if i == k else fld.zero for i in range(7)]
        trial = [[R[i] for R in R1 + R2 + [e]] for i in range(7)]
        if matrix_rank(trial, fld) == 7:
            rat_col = k
            break
    assert rat_col is not None
    e = [fld.one if i == rat_col else fld.zero for i in range(7)]
    B = [[col[i] for col in R1 + R2 + [e]] for i in range(7)]
    Bt = mat_transpose(B)
    gram1 = mat_mul(mat_mul(Bt, N1, fld), B, fld)
    for i in range(3):
        for j in range(7):
            assert fld.is_zero(gram1[i][j]) and fld.is_zero(gram1[j][i])
    T = [[gram1[i][j] for j in range(3, 7)] for i in range(3, 7)]
    return WeilSplitData(fld=fld, factor=m, lambda1=gen,
                         plane1=tuple(tuple(v) for v in R1),
                         plane2=tuple(tuple(v) for v in R2),
                         basis=tuple(tuple(r) for r in B),
                         rational_column=rat_col,
                         T=tuple(tuple(r) for r in T))


def weil_reconstruct(w: WeilSplitData):
    """Rebuild (F, G) from the split data; exact inverse of the split."""
    fld = w.fld
    n1_new = [[fld.zero] * 7 for _ in range(7)]
    for i in range(4):
        for j in range(4):
            n1_new[3 + i][3 + j] = w.T[i][j]
    B = [list(r) for r in w.basis]
    Binv = mat_inverse_field(B, fld)
    Bit = mat_transpose(Binv)
    N1 = mat_mul(mat_mul(Bit, n1_new, fld), Binv, fld)
    N2 = [[fld.conjugate(x) for x in row] for row in N1]
    lam1 = w.lambda1
    lam2 = fld.conjugate(lam1)
    dl = fld.sub(lam2, lam1)
    dli = fld.inv(dl)
    Fg, Gg = [], []
    for i in range(7):
        frow, grow = [], []
        for j in range(7):
            fe = fld.mul(dli, fld.sub(fld.mul(lam2, N1[i][j]),
                                      fld.mul(lam1, N2[i][j])))
            ge = fld.mul(dli, fld.sub(N2[i][j], N1[i][j]))
            assert fe.degree <= 0 and ge.degree <= 0
            frow.append(fe[0] if fe.coeffs else Fraction(0))
            grow.append(ge[0] if ge.coeffs else Fraction(0))
        Fg.append(frow)
        Gg.append(grow)
    return QuadraticForm(Fg), QuadraticForm(Gg)


def field_sqrt(alpha: Poly, fld: QuotientField):
    """Square root in a quadratic field Q[t]/(t^2 + B t + C), or None."""
    assert fld.degree == 2
    alpha = fld.reduce(alpha)
    if alpha.is_zero():
        return Poly([])
    B, C = fld.modulus[1], fld.modulus[0]
    a0, a1 = alpha[0], alpha[1]
    candidates = []
    if a1 == 0:
        r = rational_sqrt(a0)
        if r is not None:
            candidates.append(Poly([r]))
    # z = u + v t, v != 0: s = v^2 satisfies the resolvent quadratic
    qa = B * B - 4 * C
    qb = 2 * B * a1 - 4 * a0
    qc = a1 * a1
    disc = qb * qb - 4 * qa * qc
    rd = rational_sqrt(disc)
    if rd is not None:
        for s in ((-qb + rd) / (2 * qa), (-qb - rd) / (2 * qa)):
            if s <= 0:
                continue
            v = rational_sqrt(s)
            if v is None:
                continue
            u = (a1 / v + B * v) / 2
            candidates.append(Poly([u, v]))
    for z in candidates:
        if fld.reduce(z * z) == alpha:
            return z
    return None


def weil_quadric_point(w: WeilSplitData, bound: int):
    """K-point (x3, x4, x5, 1) on T = 0, by enumerating two coordinates
    over small K-integers and solving the residual quadratic exactly."""
    fld = w.fld
    T = [list(r) for r in w.T]

    def telt(a, b):
        return fld.reduce(Poly([a, b]))

    two = fld.from_rational(2)
    coords = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            coords.append((abs(a) + abs(b), a, b))
    coords.sort()
    for _, ua, ub in coords:
        u = telt(ua, ub)
        for _, va, vb in coords:
            v = telt(va, vb)
            # quadratic in the third coordinate z:  A z^2 + Bl z + Cc = 0
            A = T[2][2]
            Bl = fld.mul(two, fld.add(fld.add(fld.mul(T[0][2], u),
                                              fld.mul(T[1][2], v)), T[2][3]))
            Cc = fld.add(
                fld.add(fld.mul(fld.mul(T[0][0], u), u),
                        fld.mul(fld.mul(T[1][1], v), v)),
                fld.add(fld.mul(fld.mul(two, fld.mul(T[0][1], u)), v),
                        fld.add(fld.mul(two, fld.add(fld.mul(T[0][3], u),
                                                     fld.mul(T[1][3], v))),
                                T[3][3])))
            if fld.is_zero(A):
                if fld.is_zero(Bl):
                    if fld.is_zero(Cc):
                        return (u, v, fld.zero, fld.one)
                    continue
                z = fld.neg(fld.div(Cc, Bl))
                return (u, v, z, fld.one)
            disc = fld.sub(fld.mul(Bl, Bl),
                           fld.mul(fld.from_rational(4), fld.mul(A, Cc)))
            root = field_sqrt(disc, fld)
            if root is None:
                continue
            z = fld.div(fld.sub(root, Bl), fld.mul(two, A))
            return (u, v, z, fld.one)
    return None


def weil_point_transfer(w: WeilSplitData, qpoint) -> ProjectivePoint:
    fld = w.fld
    q = [fld.reduce(x) for x in qpoint]
    val = fld.zero
    for i in range(4):
        for j in range(4):
            val = fld.add(val, fld.mul(fld.mul(w.T[i][j], q[i]), q[j]))
    if not fld.is_zero(val):
        raise ValueError("qpoint does not lie on the quadric T = 0")
    if fld.is_zero(q[3]):
        raise PointAtInfinity("quadric point lies on the hyperplane at "
                              "infinity; try another point")
    inv = fld.inv(q[3])
    q = [fld.mul(inv, x) for x in q]
    y = [fld.conjugate(q[0]), fld.conjugate(q[1]), fld.conjugate(q[2]),
         q[0], q[1], q[2], fld.one]
    B = [list(r) for r in w.basis]
    coords = []
    for i in range(7):
        acc = fld.zero
        for j in range(7):
            acc = fld.add(acc, fld.mul(B[i][j], y[j]))
        assert acc.degree <= 0, "transferred point is not rational"
        coords.append(acc[0] if acc.coeffs else Fraction(0))
    return ProjectivePoint(tuple(coords))


# ---------------------------------------------------------------------------
# direct enumeration fallback


def direct_point_search(F: QuadraticForm, G: QuadraticForm, height: int):
    """First primitive projective point with F = G = 0, by height."""
    sf, df, cf = F.integer_rep()
    sg, dg, cg = G.integer_rep()
    dim = F.dim

    def ev(diag, cross, x):
        acc = sum(diag[i] * x[i] * x[i] for i in range(dim) if x[i])
        for (i, j), c in cross.items():
            if c and x[i] and x[j]:
                acc += c * x[i] * x[j]
        return acc

    for vec in primitive_vectors(dim, height):
        if ev(df, cf, vec) == 0 and ev(dg, cg, vec) == 0:
            return ProjectivePoint(vec)
    return None


# ---------------------------------------------------------------------------
# search configuration, outcome, and the driver


@dataclass(frozen=True)
class SearchConfig:
    height_bound: int = 50
    hyperplanes_per_level: int = 24
    fibers_max: int = 96
    conic_volume_cap: int = 4_000_000
    weil_bound: int = 6
    direct_height: int = 3
    quick_height: int = 3
    prime_budget: int = 200_000
    obstruction_primes: tuple = (3,)
    definite_scan: int = 5


@dataclass
class SearchOutcome:
    status: str                      # 'point' | 'obstruction' | 'exhausted'
    point: ProjectivePoint | None = None
    trace: dict | None = None
    obstruction: dict | None = None
    route: str | None = None
    report: HypothesisReport | None = None
    notes: tuple = ()


def _verify_on_original(F0, G0, coords):
    vf = F0.evaluate(coords)
    vg = G0.evaluate(coords)
    if vf != 0 or vg != 0:
        raise AssertionError(f"candidate point fails verification: {vf}, {vg}")


def _is_smooth_point(F0, G0, coords):
    rows = [F0.gradient(coords), G0.gradient(coords)]
    return matrix_rank(rows) == 2


def _finish(F0, G0, embed, local_coords, trace, route, report, method):
    coords = [sum(embed[i][j] * _frac(local_coords[j])
                  for j in range(len(local_coords)))
              for i in range(len(embed))]
    pt = ProjectivePoint(tuple(coords))
    _verify_on_original(F0, G0, pt.coords)
    trace["point"] = list(pt.coords)
    trace["evaluations"] = [str(F0.evaluate(pt.coords)),
                            str(G0.evaluate(pt.coords))]
    trace["smooth"] = _is_smooth_point(F0, G0, pt.coords)
    trace["method"] = method
    return SearchOutcome(status="point", point=pt, trace=trace, route=route,
                         report=report)


def _definite_member(sys: NormalizedSystem, scan: int):
    """A pencil member definite over R forces X(R) to be empty."""
    lams = [Fraction(0)]
    for k in range(1, scan + 1):
        lams += [Fraction(k), Fraction(-k)]
    for lam in lams:
        member = sys.F.add(sys.G.scale(lam))
        pos, neg, zero = signature(member)
        if zero == 0 and (pos == sys.dim or neg == sys.dim):
            return lam, (pos, neg)
    pos, neg, zero = signature(sys.G)
    if zero == 0 and (pos == sys.dim or neg == sys.dim):
        return "mu", (pos, neg)
    return None


def find_rational_point(F0: QuadraticForm, G0: QuadraticForm,
                        plane: LinearSubspace,
                        config: SearchConfig = SearchConfig()):
    cfg = verify_conic_plane(F0, G0, plane)
    trace = {"levels": []}
    try:
        sys = normalize_pencil(F0, G0, cfg)
    except DiscriminantZero:
        # every member singular: a rational singular point is expected;
        # fall back to direct enumeration
        trace["route"] = "discriminant-zero"
        pt = direct_point_search(F0, G0, max(config.direct_height, 4))
        if pt is not None:
            _verify_on_original(F0, G0, pt.coords)
            trace["point"] = list(pt.coords)
            trace["method"] = "direct"
            trace["smooth"] = _is_smooth_point(F0, G0, pt.coords)
            return SearchOutcome(status="point", point=pt, trace=trace,
                                 route="discriminant-zero")
        return SearchOutcome(status="exhausted", trace=trace,
                             route="discriminant-zero",
                             notes=("direct search exhausted",))
    report = hypothesis_report(sys)
    trace["route"] = report.route
    embed = [list(r) for r in sys.coordinate_change]

    # step 1: cheap win -- a rational point on the conic C itself
    conic = reduce_ternary(sys.conic_form)
    conic_report = conic_local_report(conic)
    trace["conic_local"] = {"verdicts": list(conic_report.verdicts),
                            "solvable": conic_report.globally_solvable}
    if conic_report.globally_solvable:
        pt3, _ = conic_rational_point(conic)
        local = list(pt3.coords) + [0] * (sys.dim - 3)
        return _finish(F0, G0, embed, local, trace, report.route, report,
                       method="conic")

    # step 2: local obstruction screen
    definite = _definite_member(sys, config.definite_scan)
    if definite is not None:
        lam, sig = definite
        obstruction = {"kind": "definite-real-member",
                       "lambda": str(lam), "signature": list(sig)}
        return SearchOutcome(status="obstruction", obstruction=obstruction,
                             route=report.route, report=report, trace=trace)
    for p in config.obstruction_primes:
        if p ** sys.dim > config.prime_budget:
            continue
        try:
            total, smooth, _ = modp_counts(sys.F, sys.G, p,
                                           config.prime_budget)
        except (ValueError, BudgetExceeded):
            continue
        if smooth == 0:
            # the empty smooth locus alone is evidence, not proof; only
            # claim the obstruction once bounded lifting certifies that no
            # primitive solution exists mod p^k
            depth = padic_lift_obstruction(sys.F, sys.G, p)
            if depth is not None:
                obstruction = {"kind": "empty-smooth-mod-p", "p": p,
                               "total_points": total, "smooth_points": 0,
                               "insolvable_mod_power": depth}
                return SearchOutcome(status="obstruction",
                                     obstruction=obstruction,
                                     route=report.route, report=report,
                                     trace=trace)

    outcome = _solve_normalized(F0, G0, sys, embed, report, trace, config)
    outcome.report = report
    outcome.route = report.route
    return outcome


def _solve_normalized(F0, G0, sys, embed, report, trace, config):
    route = report.route
    n = sys.n
    if n == 4:
        return _solve_p4(F0, G0, sys, embed, report, trace, config)
    if route == "s2-conjugate-weil" and n == 6:
        out = _solve_weil(F0, G0, sys, embed, report, trace, config)
        if out is not None:
            return out
        return SearchOutcome(status="exhausted", trace=trace, route=route,
                             report=report,
                             notes=("weil quadric search exhausted",))
    if route in ("Pn-Theorem-3.1", "P5-Theorem-2.1") or \
            (route == "s2-conjugate-weil" and n == 7):
        return _descend(F0, G0, sys, embed, report, trace, config)
    if route == "rank4-G-singular-line":
        local = _singular_line_point(sys)
        if local is not None:
            trace["levels"].append({"n": n, "method": "singular-line"})
            return _finish(F0, G0, embed, local, trace, route, report,
                           method="singular-line")
    # elementary cited cases and everything else: direct enumeration
    pt = direct_point_search(sys.F, sys.G, config.direct_height)
    if pt is not None:
        trace["levels"].append({"n": n, "method": "direct"})
        return _finish(F0, G0, embed, list(pt.coords), trace, route, report,
                       method="direct")
    return SearchOutcome(status="exhausted", trace=trace, route=route,
                         report=report, notes=("direct search exhausted",))


def _singular_line_point(sys: NormalizedSystem):
    """Rational point of {F = 0} on the singular line of a rank-4 G, when
    the restricted binary quadratic has a rational root."""
    rad = radical_subspace(sys.G)
    if rad.dim != 2:
        return None
    r = restrict_form(sys.F, rad)
    a, b, c = r.gram[0][0], r.gram[0][1], r.gram[1][1]
    v0, v1 = rad.basis
    if a == 0 and b == 0 and c == 0:
        return list(v0)
    if a == 0:
        return list(v0)  # root (s, t) = (1, 0)
    root = rational_sqrt(b * b - a * c)
    if root is None:
        return None
    s = (-b + root) / a
    return [s * x + y for x, y in zip(v0, v1)]


def _descend(F0, G0, sys, embed, report, trace, config):
    n = sys.n
    d = report.disc
    tried = 0
    for H in enumerate_hyperplanes(n, config.height_bound):
        if tried >= config.hyperplanes_per_level:
            break
        cert = v0_membership(sys, d, H)
        if not cert.accepted:
            continue
        rd, irq = restricted_discriminant(sys, H)
        if n == 5 and not irq:
            continue
        tried += 1
        S = H.cone_basis(sys.dim)
        rf = restrict_form(sys.F, S)
        rg = restrict_form(sys.G, S)
        child = NormalizedSystem(
            F=rf, G=rg,
            coordinate_change=tuple(
                tuple(Fraction(int(i == j)) for j in range(sys.dim - 1))
                for i in range(sys.dim - 1)),
            pencil_change=((Fraction(1), Fraction(0)),
                           (Fraction(0), Fraction(1))),
            n=n - 1,
            conic_form=sys.conic_form)
        try:
            child_report = hypothesis_report(child)
        except (ValueError, IdenticallyZeroDiscriminant):
            tried -= 1
            continue
        level = {"n": n, "hyperplane": list(H.alphas),
                 "rank_f_restricted": cert.rank_f_restricted,
                 "rank_g_restricted": cert.rank_g_restricted,
                 "irreducible_quintic": irq,
                 "child_route": child_report.route}
        child_embed = mat_mul(embed, S.matrix())
        child_trace = dict(trace)
        child_trace["levels"] = trace["levels"] + [level]
        out = _solve_normalized(F0, G0, child, child_embed, child_report,
                                child_trace, config)
        if out.status == "point":
            return out
    return SearchOutcome(status="exhausted", trace=trace, route=report.route,
                         report=report,
                         notes=(f"no hyperplane led to a point at n={n}",))


def _solve_p4(F0, G0, sys, embed, report, trace, config):
    quick = direct_point_search(sys.F, sys.G, config.quick_height)
    if quick is not None:
        trace["levels"].append({"n": 4, "method": "direct"})
        return _finish(F0, G0, embed, list(quick.coords), trace,
                       report.route, report, method="direct")
    fibers_tried = 0
    fiber_log = []
    for t in enumerate_p1(config.height_bound):
        if fibers_tried >= config.fibers_max:
            break
        try:
            fiber = residual_conic_fiber(sys, t)
        except DegenerateFiber:
            fiber_log.append({"t": list(t), "skip": "degenerate"})
            continue
        fibers_tried += 1
        rank = form_rank(fiber.residual_form)
        if rank < 3:
            rad = radical_subspace(fiber.residual_form)
            y = list(rad.basis[0])
            local = [sum(fiber.embedding.matrix()[i][j] * y[j]
                         for j in range(3)) for i in range(5)]
            trace["levels"].append({"n": 4, "fiber_t": list(t),
                                    "fiber_rank": rank,
                                    "method": "radical-fiber"})
            return _finish(F0, G0, embed, local, trace, report.route, report,
                           method="fiber")
        ternary = reduce_ternary(fiber.residual_form)
        lrep = conic_local_report(ternary)
        entry = {"t": list(t),
                 "conic": [ternary.a, ternary.b, ternary.c],
                 "verdicts": list(lrep.verdicts),
                 "solvable": lrep.globally_solvable}
        fiber_log.append(entry)
        if not lrep.globally_solvable:
            continue
        try:
            pt3, diag_sol = conic_rational_point(
                ternary, volume_cap=config.conic_volume_cap)
        except SearchVolumeExceeded:
            entry["skip"] = "search-volume"
            continue
        y = list(pt3.coords)
        local = [sum(fiber.embedding.matrix()[i][j] * y[j] for j in range(3))
                 for i in range(5)]
        trace["levels"].append({"n": 4, "fiber_t": list(t),
                                "conic": [ternary.a, ternary.b, ternary.c],
                                "diag_solution": list(diag_sol),
                                "method": "fiber"})
        trace["fibers"] = fiber_log
        return _finish(F0, G0, embed, local, trace, report.route, report,
                       method="fiber")
    trace["fibers"] = fiber_log
    return SearchOutcome(status="exhausted", trace=trace, route=report.route,
                         report=report, notes=("fiber search exhausted",))


def _solve_weil(F0, G0, sys, embed, report, trace, config):
    try:
        w = weil_restriction_split(sys, report.census)
    except (NotConjugateCase, PlanesNotDisjoint) as exc:
        trace.setdefault("notes", []).append(f"weil split failed: {exc}")
        return None
    q = weil_quadric_point(w, config.weil_bound)
    if q is None:
        return None
    try:
        pt = weil_point_transfer(w, q)
    except PointAtInfinity:
        return None
    trace["levels"].append({"n": 6, "method": "weil",
                            "factor": [str(c) for c in w.factor.coeffs]})
    return _finish(F0, G0, embed, list(pt.coords), trace, report.route,
                   report, method="weil")


# ---------------------------------------------------------------------------
# trace replay


def replay_trace(F0, G0, plane, trace) -> bool:
    """Re-run every certificate recorded in a successful trace and check
    the recorded verdicts are reproduced."""
    cfg = verify_conic_plane(F0, G0, plane)
    if trace.get("route") == "discriminant-zero":
        pt = trace["point"]
        return F0.evaluate(pt) == 0 and G0.evaluate(pt) == 0
    sys = normalize_pencil(F0, G0, cfg)
    report = hypothesis_report(sys)
    if report.route != trace.get("route"):
        return False
    cur = sys
    d = report.disc
    for level in trace.get("levels", []):
        if "hyperplane" not in level:
            continue
        H = HyperplaneCandidate(alphas=tuple(level["hyperplane"]))
        cert = v0_membership(cur, d, H)
        if not cert.accepted:
            return False
        if cert.rank_f_restricted != level["rank_f_restricted"]:
            return False
        if cert.rank_g_restricted != level["rank_g_restricted"]:
            return False
        _, irq = restricted_discriminant(cur, H)
        if irq != level.get("irreducible_quintic"):
            return False
        S = H.cone_basis(cur.dim)
        cur = replace(cur, F=restrict_form(cur.F, S),
                      G=restrict_form(cur.G, S), n=cur.n - 1,
                      coordinate_change=tuple(
                          tuple(Fraction(int(i == j))
                                for j in range(cur.dim - 1))
                          for i in range(cur.dim - 1)))
        d = discriminant(cur.pencil())
    for level in trace.get("levels", []):
        if level.get("method") == "fiber" and "conic" in level:
            fiber = residual_conic_fiber(cur, tuple(level["fiber_t"]))
            ternary = reduce_ternary(fiber.residual_form)
            if [ternary.a, ternary.b, ternary.c] != level["conic"]:
                return False
            sol = level["diag_solution"]
            val = (ternary.a * sol[0] ** 2 + ternary.b * sol[1] ** 2
                   + ternary.c * sol[2] ** 2)
            if val != 0:
                return False
    pt = trace.get("point")
    if pt is None:
        return False
    return F0.evaluate(pt) == 0 and G0.evaluate(pt) == 0


def replay_obstruction(F0, G0, plane, obstruction,
                       config: SearchConfig = SearchConfig()) -> bool:
    cfg = verify_conic_plane(F0, G0, plane)
    sys = normalize_pencil(F0, G0, cfg)
    kind = obstruction["kind"]
    if kind == "definite-real-member":
        lam = obstruction["lambda"]
        member = sys.G if lam == "mu" else sys.F.add(sys.G.scale(_frac(lam)))
        pos, neg, zero = signature(member)
        return zero == 0 and [pos, neg] == list(obstruction["signature"])
    if kind == "empty-smooth-mod-p":
        p = obstruction["p"]
        total, smooth, _ = modp_counts(sys.F, sys.G, p, config.prime_budget)
        depth = padic_lift_obstruction(sys.F, sys.G, p)
        return (smooth == 0 and total == obstruction["total_points"]
                and depth == obstruction["insolvable_mod_power"])
    return False


# ---------------------------------------------------------------------------
# planted instance generator


def generate_planted_instance(n, conic_form: QuadraticForm, planted_point,
                              coefficient_height: int = 9, seed: int = 0,
                              route: str | None = None,
                              require_smooth: bool = False,
                              max_retries: int = 400):
    """Instance (F0, G0, plane) with X containing the conic and the planted
    point.  F0 = q + sum_i>=3 x_i L_i, G0 = sum_i>=3 x_i M_i with seeded
    bounded linear forms, adjusted so both forms vanish at the point.
    Deterministic given the seed."""
    if form_rank(conic_form) != 3 or conic_form.dim != 3:
        raise ValueError("conic form must have rank 3 in 3 variables")
    dim = n + 1
    P0 = ProjectivePoint(tuple(planted_point))
    if len(P0.coords) != dim:
        raise ValueError("planted point dimension mismatch")
    istar = next((i for i in range(3, dim) if P0.coords[i] != 0), None)
    if istar is None:
        raise ValueError("planted point must not lie on the plane")
    plane = LinearSubspace.standard(dim, (0, 1, 2))
    rng = random.Random(seed)
    h = coefficient_height
    for _ in range(max_retries):
        fg = [[Fraction(0)] * dim for _ in range(dim)]
        gg = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(3):
            for j in range(3):
                fg[i][j] = conic_form.gram[i][j]
        for i in range(3, dim):
            L = [rng.randint(-h, h) for _ in range(dim)]
            M = [rng.randint(-h, h) for _ in range(dim)]
            for j in range(dim):
                fg[i][j] += Fraction(L[j], 2)
                fg[j][i] += Fraction(L[j], 2)
                gg[i][j] += Fraction(M[j], 2)
                gg[j][i] += Fraction(M[j], 2)
        F0 = QuadraticForm(fg)
        G0 = QuadraticForm(gg)
        slope = Fraction(P0.coords[istar]) ** 2
        fg[istar][istar] -= F0.evaluate(P0.coords) / slope
        gg[istar][istar] -= G0.evaluate(P0.coords) / slope
        F0 = QuadraticForm(fg)
        G0 = QuadraticForm(gg)
        assert F0.evaluate(P0.coords) == 0 and G0.evaluate(P0.coords) == 0
        try:
            cfg = verify_conic_plane(F0, G0, plane)
            sys = normalize_pencil(F0, G0, cfg)
            rep = hypothesis_report(sys)
        except (ValueError, ArithmeticError):
            continue
        if route is not None and rep.route != route:
            continue
        if require_smooth and not smoothness_test(Pencil(F0, G0),
                                                  sample_prime=0):
            continue
        return F0, G0, plane
    raise RetriesExhausted(
        f"no instance with route {route} in {max_retries} attempts")
