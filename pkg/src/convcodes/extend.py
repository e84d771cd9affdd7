"""Length extension of a degree-2, dimension-1 code by one evaluation
point, with the certificate that keeps it MDS.

Evaluating the defining polynomial s at the new point a z + b yields a
quadratic F(z) = F_0 + F_1 z + F_2 z^2 that is juxtaposed to the generator
as column n+1.  The certificate hinges on the banded (k+1) x (k+3)
sliding matrices of (F_0, F_1, F_2): every maximal minor factors through
the central banded determinants d_k, and d_k = (-F_2)^(k+1) h_(k+1) where
h_j is the j-th complete homogeneous symmetric function of the roots of
F.  The h_j obey the two-term recursion

    h_(j+1) = -h_j F_1/F_2 - h_(j-1) F_0/F_2,   h_(-1) = 0, h_0 = 1,

so h_1 = -F_1/F_2 (the sign disappears in characteristic 2).  Nonvanishing
h_j certifies that the relevant sliding matrices are MDS, which combined
with the lower bound

    dfree(extended) >= dfree(base) + d(F_k0),  k0 = max(l(ext), l(base)),

pushes the extended code to its Singleton bound.

The certificate checks h_j for 1 <= j <= l(base)+2, equivalently the
banded determinants d_k for k <= l(base)+1, the range the minor
factorisation actually consumes.

This machinery is specific to degree 2: the triple (F_0, F_1, F_2), the
two-term recursion, and the minor factorisation all rely on it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .code import ConvCode, FqPoly, PolyMatrix, new_code, singleton_bound
from .distance import (
    DEFAULT_CAP,
    DistanceProfile,
    block_distance,
    c0_code,
    free_distance,
    l_of_c,
)
from .errors import (
    BaseNotMds,
    DegeneratePoint,
    F2Zero,
    HypothesisFailed,
    PreconditionViolated,
)
from .gf import FieldElement
from .polymat import ScalarMatrix, scalar_rank
from .cgc import CgcSpec, build, hasse_eval


def _require_degree_two(spec: CgcSpec):
    if spec.delta != 2:
        raise PreconditionViolated("extension machinery requires delta = 2")


def eval_new_point(
    spec: CgcSpec, point: tuple[FieldElement, FieldElement]
) -> tuple[FieldElement, FieldElement, FieldElement]:
    """(F_0, F_1, F_2) with F_j = s^(j)(b) a^j, i.e. s evaluated at az+b."""
    _require_degree_two(spec)
    a, b = point
    if not a:
        raise DegeneratePoint("leading coordinate a must be nonzero")
    if point in spec.points:
        raise DegeneratePoint("new point collides with an existing one")
    return tuple(hasse_eval(spec.lam, j, b) * a**j for j in range(3))


def f_sliding(field, F, k: int) -> ScalarMatrix:
    """(k+1) x (k+3) banded matrix with (F_0, F_1, F_2) on the diagonals."""
    rows = []
    for r in range(k + 1):
        row = [field.zero] * (k + 3)
        row[r : r + 3] = F
        rows.append(row)
    return ScalarMatrix(field, rows)


def h_sequence(field, F, upto: int) -> list[FieldElement]:
    """h_0 .. h_upto from the two-term recursion; needs F_2 != 0."""
    F0, F1, F2 = F
    if not F2:
        raise F2Zero("h recursion needs F_2 != 0")
    c1 = F1 / F2
    c0 = F0 / F2
    hs = [field.one]
    prev = field.zero
    for _ in range(upto):
        hs.append(-hs[-1] * c1 - prev * c0)
        prev = hs[-2]
    return hs


def banded_determinant(field, F, k: int) -> FieldElement:
    """d_k: determinant of the (k+1) x (k+1) band obtained by removing the
    first and last column of the stage-k sliding matrix of F."""
    F0, F1, F2 = F
    dm1, d = field.one, F1  # d_{-1} = 1, d_0 = F_1
    for _ in range(k):
        dm1, d = d, F1 * d - F0 * F2 * dm1
    return d if k >= 0 else dm1


@dataclass(frozen=True)
class ExtensionReport:
    """Certificate data for one candidate extension point.

    `certified_mds` holds when either route goes through: all five named
    hypotheses (route 'hypotheses'), or the lower bound
    dfree(base) + d(F_k0) already reaching the extended Singleton bound
    (route 'bound').
    """

    new_point: tuple[FieldElement, FieldElement]
    F: tuple[FieldElement, FieldElement, FieldElement]
    h: tuple[FieldElement, ...]
    h_indices_checked: tuple[int, ...]
    conditions: dict
    certified_mds: bool
    route: str | None
    base_profile: DistanceProfile
    l_base: int
    l_ext: int
    k0: int
    f_rank_ok: bool
    f_distance: int | None
    dfree_lower_bound: int | None
    extended: ConvCode | None
    extended_profile: DistanceProfile | None
    ext_stacked_distance_ge_3: bool | None
    l_growth_ok: bool | None

    @property
    def all_conditions(self) -> bool:
        return all(self.conditions.values())


def _extended_code(spec: CgcSpec, F) -> ConvCode:
    base = build(spec)
    f = spec.field
    new_col = FqPoly(f, F)
    row = list(base.gen.rows[0]) + [new_col]
    return new_code(PolyMatrix(f, [row]))


def check_extension(
    spec: CgcSpec,
    point: tuple[FieldElement, FieldElement],
    *,
    cap: int = DEFAULT_CAP,
) -> ExtensionReport:
    """Evaluate the certificate hypotheses and build the extension.

    Raises BaseNotMds when the starting code is not MDS, and
    HypothesisFailed('lambda2_nonzero') when the top coefficient vanishes
    (the banded machinery has nothing to work with then).  Other failing
    hypotheses are recorded in the report; certification may still succeed
    through the lower-bound route.
    """
    _require_degree_two(spec)
    base = build(spec)
    base_profile = free_distance(base, cap=cap)
    if not base_profile.is_mds:
        raise BaseNotMds(
            f"base free distance {base_profile.dfree} "
            f"< bound {base_profile.singleton}"
        )
    if not spec.lam[2]:
        raise HypothesisFailed("lambda2_nonzero")

    a, b = point
    F = eval_new_point(spec, point)
    f = spec.field

    stacked = ScalarMatrix.vstack(list(reversed(base.decompose())))
    stacked_distance = block_distance(stacked, cap=cap)
    l_base = base_profile.l_of_c

    conditions = {
        "stacked_distance_ge_3": stacked_distance >= 3,
        "a_nonzero": bool(a),
        "s0_at_b_nonzero": bool(hasse_eval(spec.lam, 0, b)),
        "lambda2_nonzero": True,
    }

    h_hi = l_base + 2
    hs = tuple(h_sequence(f, F, h_hi))
    h_checked = tuple(range(1, h_hi + 1))
    conditions["all_h_nonzero"] = all(hs[j] for j in h_checked)

    extended = _extended_code(spec, F)
    ext_profile = free_distance(extended, cap=cap)
    nu_ext, mu_ext = c0_code(extended, cap=cap)
    l_ext = l_of_c(extended, mu_ext)
    k0 = max(l_ext, l_base)

    Fk0 = f_sliding(f, F, k0)
    f_rank_ok = scalar_rank(Fk0) == k0 + 1
    f_distance = block_distance(Fk0, cap=cap) if f_rank_ok else None
    dfree_lower_bound = (
        base_profile.dfree + f_distance if f_distance is not None else None
    )

    route = None
    if all(conditions.values()):
        route = "hypotheses"
    elif (
        extended.delta == spec.delta
        and dfree_lower_bound is not None
        and dfree_lower_bound >= singleton_bound(extended)
    ):
        route = "bound"
    certified = route is not None

    ext_stacked = ScalarMatrix.vstack(
        list(
            reversed(
                extended.decompose()
                + [ScalarMatrix.zeros(f, 1, extended.n)]
                * (extended.delta + 1 - len(extended.decompose()))
            )
        )
    )
    ext_stacked_ge_3 = block_distance(ext_stacked, cap=cap) >= 3
    l_growth_ok = l_ext <= l_base + 1
    if route == "hypotheses":
        # Conclusions that must accompany the hypotheses.
        if not ext_stacked_ge_3:
            raise HypothesisFailed(
                "ext_stacked_distance", "certified extension violates conclusion ii"
            )
        if not l_growth_ok:
            raise HypothesisFailed(
                "l_growth", "certified extension violates conclusion iii"
            )

    return ExtensionReport(
        new_point=point,
        F=F,
        h=hs,
        h_indices_checked=h_checked,
        conditions=conditions,
        certified_mds=certified,
        route=route,
        base_profile=base_profile,
        l_base=l_base,
        l_ext=l_ext,
        k0=k0,
        f_rank_ok=f_rank_ok,
        f_distance=f_distance,
        dfree_lower_bound=dfree_lower_bound,
        extended=extended,
        extended_profile=ext_profile,
        ext_stacked_distance_ge_3=ext_stacked_ge_3,
        l_growth_ok=l_growth_ok,
    )


def eligible_points(
    spec: CgcSpec, *, cap: int = DEFAULT_CAP, workers: int = 1
) -> dict:
    """Certified extension points, exhaustively over the field.

    Returns {'eligible': set of (a, b), 'diagnostic': str | None}; the
    diagnostic short-circuits the scan when the base itself disqualifies
    every point (non-MDS base, or stacked distance below 3).
    """
    _require_degree_two(spec)
    base = build(spec)
    base_profile = free_distance(base, cap=cap)
    if not base_profile.is_mds:
        return {"eligible": set(), "diagnostic": "base code is not MDS"}
    stacked = ScalarMatrix.vstack(list(reversed(base.decompose())))
    if block_distance(stacked, cap=cap) < 3:
        return {
            "eligible": set(),
            "diagnostic": "stacked coefficient matrix has distance < 3",
        }

    f = spec.field
    candidates = [
        (a, b)
        for a in f.nonzero_elements()
        for b in f.elements()
        if (a, b) not in spec.points
    ]

    def check(pt):
        try:
            rep = check_extension(spec, pt, cap=cap)
        except (DegeneratePoint, F2Zero, HypothesisFailed):
            return pt, False
        return pt, rep.certified_mds

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(check, candidates))
    else:
        results = [check(pt) for pt in candidates]
    return {
        "eligible": {pt for pt, ok in results if ok},
        "diagnostic": None,
    }
