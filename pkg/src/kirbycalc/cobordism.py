"""Homology-level models of quasi-invertible cobordism attachment.

A cobordism P from M to N sits inside a composite M -> P -> R, where R
is the quasi-product that P and its quasi-inverse glue up to.  The model
keeps only what the algebra consumes: the three second homology groups,
the two induced maps, and flags recording properties (invertibility,
strong quasi-invertibility, H2-surjectivity) that are not decidable
from the module data alone and so are established by constructors or
explicit assertion.

From the maps the model derives the image submodule I (of H2(M) in
H2(P)) and the kernel submodule K (of H2(P) -> H2(R)).  For strongly
quasi-invertible P the decomposition H2(P) = I (+) K is verified, and
attaching P to a 4-manifold model X produces H2(X') = H2(X) (+) K with
the form extended by zero on K and genus values carried across exactly
where the interval estimate collapses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError
from .forms import (
    DecoratedModule,
    EquivalenceResult,
    ModuleHom,
    algebraically_equivalent,
    compose,
    decorated_module,
    module_hom,
)
from .intmat import IntMatrix, block_diag, cokernel, kernel_basis, smith_normal_form
from .values import OrderedValue


# ---------------------------------------------------------------------------
# submodules of a decorated module


def _relation_columns(d: DecoratedModule) -> IntMatrix:
    """Columns t_i * e_i over the torsion generators of d."""
    tor = d.torsion_indices
    rows = []
    for coord in range(d.ngens):
        rows.append([d.orders[i] if i == coord else 0 for i in tor])
    return IntMatrix.from_rows(rows, cols=len(tor))


def _gens_matrix(ambient: DecoratedModule, gens) -> IntMatrix:
    rows = [[g[coord] for g in gens] for coord in range(ambient.ngens)]
    return IntMatrix.from_rows(rows, cols=len(gens))


@dataclass(frozen=True)
class SubmodulePresentation:
    """A submodule of a decorated module, with an abstract presentation.

    gens are coefficient vectors in the ambient module.  orders are the
    generator orders of the canonical abstract presentation; coords()
    and vector_of() translate between ambient vectors and abstract
    coordinate keys.
    """

    ambient: DecoratedModule
    gens: tuple
    orders: tuple
    _u: IntMatrix = field(compare=False)
    _u_inv: IntMatrix = field(compare=False)
    _divisors: tuple = field(compare=False)
    _kept: tuple = field(compare=False)

    @property
    def abstract_orders(self):
        return self.orders

    def abstract_group(self):
        from .intmat import FgAbelianGroup

        return FgAbelianGroup.from_orders(self.orders)

    def coords(self, coefficients):
        """Abstract key of sum(coefficients[i] * gens[i])."""
        y = self._u.apply(tuple(coefficients))
        out = []
        for pos, i in enumerate(self._kept):
            d = self._divisors[i]
            out.append(y[i] % d if d >= 2 else y[i])
        return tuple(out)

    def vector_of(self, key):
        """An ambient coefficient vector representing the abstract key."""
        if len(key) != len(self.orders):
            raise PreconditionError("abstract key has wrong length")
        y = [0] * len(self.gens)
        for pos, i in enumerate(self._kept):
            y[i] = key[pos]
        v = self._u_inv.apply(tuple(y))
        amb = [0] * self.ambient.ngens
        for coeff, g in zip(v, self.gens):
            for c in range(self.ambient.ngens):
                amb[c] += coeff * g[c]
        return self.ambient.key(amb)

    def membership(self, vec):
        """Abstract key of an ambient vector, or None when outside."""
        from .intmat import solve_integer

        gmat = _gens_matrix(self.ambient, self.gens)
        rel = _relation_columns(self.ambient)
        rows = []
        for i in range(self.ambient.ngens):
            rows.append(list(gmat.entries[i]) + list(rel.entries[i]))
        stacked = IntMatrix.from_rows(rows, cols=len(self.gens) + rel.shape()[1])
        sol = solve_integer(stacked, tuple(vec))
        if sol is None:
            return None
        return self.coords(sol[: len(self.gens)])


def submodule(ambient: DecoratedModule, gens) -> SubmodulePresentation:
    """Present the submodule generated by the given ambient vectors."""
    gens = tuple(ambient.key(g) for g in gens)
    m = len(gens)
    if m == 0:
        ident = IntMatrix.identity(0)
        return SubmodulePresentation(ambient=ambient, gens=(), orders=(),
                                     _u=ident, _u_inv=ident, _divisors=(),
                                     _kept=())
    gmat = _gens_matrix(ambient, gens)
    rel = _relation_columns(ambient)
    rows = []
    for i in range(ambient.ngens):
        rows.append(list(gmat.entries[i]) + list(rel.entries[i]))
    stacked = IntMatrix.from_rows(rows, cols=m + rel.shape()[1])
    ker = kernel_basis(stacked)
    relmat = ker.submatrix(range(m), range(ker.shape()[1]))
    snf = smith_normal_form(relmat)
    diag = snf.diagonal()
    divisors = tuple(diag[i] if i < len(diag) else 0 for i in range(m))
    kept = tuple(i for i in range(m) if divisors[i] != 1)
    orders = tuple(divisors[i] for i in kept)
    # U relmat V = D, so the abstract coordinates of a coefficient vector
    # v are U v, reduced modulo the diagonal; for unimodular U the SNF
    # gives the inverse as V * U of the identity decomposition
    u = snf.u
    u_snf = smith_normal_form(u)
    u_inv = u_snf.v.mul(u_snf.u)  # U^-1 = V U when U D V' = I with D = I
    if not u.mul(u_inv).equals(IntMatrix.identity(m)):
        # fall back: solve column by column (still exact)
        from .intmat import solve_integer

        cols = []
        for i in range(m):
            e = tuple(1 if j == i else 0 for j in range(m))
            cols.append(solve_integer(u, e))
        u_inv = IntMatrix.from_rows(
            [[cols[j][i] for j in range(m)] for i in range(m)], cols=m
        )
    return SubmodulePresentation(ambient=ambient, gens=gens, orders=orders,
                                 _u=u, _u_inv=u_inv, _divisors=divisors,
                                 _kept=kept)


def hom_image(phi: ModuleHom) -> SubmodulePresentation:
    gens = [phi.matrix.column(j) for j in range(phi.domain.ngens)]
    return submodule(phi.codomain, gens)


def hom_kernel_gens(phi: ModuleHom):
    """Generators (in the domain) of the kernel of phi."""
    rel = _relation_columns(phi.codomain)
    rows = []
    for i in range(phi.codomain.ngens):
        rows.append(list(phi.matrix.entries[i]) + list(rel.entries[i]))
    stacked = IntMatrix.from_rows(rows,
                                  cols=phi.domain.ngens + rel.shape()[1])
    ker = kernel_basis(stacked)
    n = phi.domain.ngens
    gens = []
    for j in range(ker.shape()[1]):
        vec = tuple(ker[i, j] for i in range(n))
        gens.append(phi.domain.key(vec))
    # the domain's own torsion relations are kernel elements of the
    # presentation lattice but zero in the module; drop zero vectors
    return tuple(g for g in gens if any(g))


def hom_kernel(phi: ModuleHom) -> SubmodulePresentation:
    return submodule(phi.domain, hom_kernel_gens(phi))


def hom_is_injective(phi: ModuleHom) -> bool:
    return not hom_kernel_gens(phi)


def spans_ambient(ambient: DecoratedModule, gen_sets) -> bool:
    """Do the given vectors together generate the whole module?"""
    gens = [g for gs in gen_sets for g in gs]
    gmat = _gens_matrix(ambient, gens)
    rel = _relation_columns(ambient)
    rows = []
    for i in range(ambient.ngens):
        rows.append(list(gmat.entries[i]) + list(rel.entries[i]))
    stacked = IntMatrix.from_rows(rows, cols=len(gens) + rel.shape()[1])
    return cokernel(stacked).is_trivial


def decomposes_as_direct_sum(ambient: DecoratedModule,
                             s1: SubmodulePresentation,
                             s2: SubmodulePresentation) -> bool:
    """ambient = s1 (+) s2, by spanning plus the Hopfian count.

    A surjection s1 (+) s2 -> ambient between isomorphic finitely
    generated abelian groups is an isomorphism, so spanning together
    with equality of canonical forms settles directness.
    """
    if not spans_ambient(ambient, [s1.gens, s2.gens]):
        return False
    return s1.abstract_group().direct_sum(s2.abstract_group()) == ambient.group


# ---------------------------------------------------------------------------
# the cobordism model


@dataclass(frozen=True)
class CobordismModel:
    h2_m: DecoratedModule
    h2_p: DecoratedModule
    h2_r: DecoratedModule
    map_mp: ModuleHom
    map_pr: ModuleHom
    invertible: bool
    strongly_quasi_invertible: bool
    h2_surjective: bool
    i_part: SubmodulePresentation = field(compare=False)
    k_part: SubmodulePresentation = field(compare=False)


def cobordism_model(h2_m, h2_p, h2_r, map_mp, map_pr, *, invertible=False,
                    strongly_quasi_invertible=False,
                    h2_surjective=False) -> CobordismModel:
    """Validating constructor; asserted flags are checked against the data.

    invertible implies strongly quasi-invertible and forces H2(P) and
    the K summand to be torsion-free.  strongly quasi-invertible forces
    the M -> P map to be injective, H2(P) = I (+) K, and the composite
    M -> R to be an isomorphism.  H2-surjectivity means I is all of
    H2(P).
    """
    if map_mp.domain != h2_m or map_mp.codomain != h2_p:
        raise PreconditionError("map_mp must go from H2(M) to H2(P)")
    if map_pr.domain != h2_p or map_pr.codomain != h2_r:
        raise PreconditionError("map_pr must go from H2(P) to H2(R)")
    if invertible:
        strongly_quasi_invertible = True
    i_part = hom_image(map_mp)
    k_part = hom_kernel(map_pr)
    if invertible:
        if h2_p.group.torsion_divisors:
            raise PreconditionError(
                "an invertible model needs torsion-free H2(P)"
            )
        if k_part.abstract_group().torsion_divisors:
            raise PreconditionError(
                "an invertible model needs a torsion-free K summand"
            )
    if strongly_quasi_invertible:
        if not hom_is_injective(map_mp):
            raise PreconditionError(
                "strong quasi-invertibility needs an injective H2(M) -> H2(P)"
            )
        if not decomposes_as_direct_sum(h2_p, i_part, k_part):
            raise PreconditionError(
                "strong quasi-invertibility needs H2(P) = I (+) K"
            )
        if not compose(map_pr, map_mp).is_isomorphism():
            raise PreconditionError(
                "strong quasi-invertibility needs H2(M) -> H2(R) to be an "
                "isomorphism"
            )
    if h2_surjective:
        if not spans_ambient(h2_p, [i_part.gens]):
            raise PreconditionError(
                "H2-surjectivity asserted but the image of H2(M) is proper"
            )
    return CobordismModel(h2_m=h2_m, h2_p=h2_p, h2_r=h2_r, map_mp=map_mp,
                          map_pr=map_pr, invertible=invertible,
                          strongly_quasi_invertible=strongly_quasi_invertible,
                          h2_surjective=h2_surjective, i_part=i_part,
                          k_part=k_part)


def trivial_ends_model(k_module: DecoratedModule) -> CobordismModel:
    """A strongly quasi-invertible model with H2(M) = H2(R) = 0.

    H2(P) is the given module (zero form required), the maps are zero,
    and K is everything.  This is the homology picture of a product
    cobordism summed with pieces of surgered sphere-links.
    """
    if not k_module.form.is_zero():
        raise PreconditionError("H2(P) of the trivial-ends model carries the zero form")
    zero = decorated_module(())
    mp = module_hom(zero, k_module, IntMatrix.zeros(k_module.ngens, 0))
    pr = module_hom(k_module, zero, IntMatrix.zeros(0, k_module.ngens))
    return cobordism_model(zero, k_module, zero, mp, pr,
                           strongly_quasi_invertible=True,
                           h2_surjective=(k_module.ngens == 0))


@dataclass(frozen=True)
class AttachmentModel:
    x: DecoratedModule
    cob: CobordismModel
    glue: ModuleHom  # H2(M) -> H2(X)

    def __post_init__(self):
        if self.glue.domain != self.cob.h2_m or self.glue.codomain != self.x:
            raise PreconditionError("glue must go from H2(M) to H2(X)")


def _attach_condition(a: AttachmentModel):
    """Which sufficient condition validates the direct-sum model, if any."""
    if a.cob.strongly_quasi_invertible:
        return "strongly-quasi-invertible"
    if a.glue.matrix.is_zero():
        return "zero-glue-map"
    if a.x.free_form_nondegenerate() and a.x.is_torsion_free:
        return "non-degenerate-torsion-free"
    return None


@dataclass(frozen=True)
class AttachResult:
    """H2 of the glued manifold, modeled as H2(X) (+) K."""

    module: DecoratedModule
    x_gens: int
    k_orders: tuple
    condition: str


def attach(a: AttachmentModel) -> AttachResult:
    """Direct-sum model of attaching the cobordism to X.

    Valid under one of the sufficient conditions (strongly
    quasi-invertible cobordism, zero glue map on H2, or non-degenerate
    torsion-free X); refuses otherwise, since the decomposition may
    fail.  The intersection form extends by zero on the K summand.
    Genus values are copied onto classes alpha (+) 0, and onto
    alpha (+) beta whenever the cobordism's table pins the value on
    beta to 0 (the interval estimate collapses there).
    """
    condition = _attach_condition(a)
    if condition is None:
        raise PreconditionError(
            "no sufficient condition holds (need a strongly quasi-invertible "
            "cobordism, a zero glue map, or a non-degenerate torsion-free X); "
            "the direct-sum decomposition may fail"
        )
    k = a.cob.k_part
    k_orders = k.abstract_orders
    orders = a.x.orders + k_orders
    form = block_diag(a.x.form, IntMatrix.zeros(len(k_orders), len(k_orders)))
    zero_k = (0,) * len(k_orders)
    table = {}
    for key, val in a.x.gvalues.items():
        table[key + zero_k] = val
    forced_betas = []
    for pkey, pval in a.cob.h2_p.gvalues.items():
        if pval != OrderedValue.of(0):
            continue
        beta = k.membership(pkey)
        if beta is None or beta == zero_k:
            continue
        forced_betas.append(beta)
    for beta in forced_betas:
        for key, val in a.x.gvalues.items():
            table[key + beta] = val
    module = decorated_module(orders, form, table)
    return AttachResult(module=module, x_gens=a.x.ngens, k_orders=k_orders,
                        condition=condition)


def genus_interval(gx_alpha, gp_beta):
    """The two-sided estimate for the glued genus value.

    Returns (lo, hi) = (g_X(alpha), g_X(alpha) + g_P(beta)).  Infinite
    inputs give an interval with an infinite endpoint.
    """
    lo = OrderedValue.of(gx_alpha)
    hi = lo + OrderedValue.of(gp_beta)
    return (lo, hi)


def interval_check(gx_alpha, gp_beta, claimed) -> bool:
    """Validate a claimed glued genus value against the interval."""
    lo, hi = genus_interval(gx_alpha, gp_beta)
    claimed = OrderedValue.of(claimed)
    return lo <= claimed <= hi


@dataclass(frozen=True)
class QuasiStabilityReport:
    mode: str
    before: EquivalenceResult
    after: EquivalenceResult
    implication_ok: bool

    @property
    def verdict(self) -> str:
        return "CONSISTENT" if self.implication_ok else "VIOLATION"


def stability_check_quasi(a1: AttachmentModel, a2: AttachmentModel,
                          bound: int) -> QuasiStabilityReport:
    """Check a stability statement on a pair of attachment models.

    Two hypothesis regimes are recognized from the flags. "h2-iso": both
    cobordisms are H2-surjective and a sufficient injectivity condition
    holds, so H2(X) -> H2(X') is an isomorphism and equivalence before
    and after must agree exactly.  "non-degenerate": both X-forms are
    non-degenerate and the X-groups or the K summands are torsion-free;
    then equivalence after the attachments must imply equivalence
    before.  A violated implication is a bug, not a property of the
    input: the underlying statements guarantee it.
    """
    cond1, cond2 = _attach_condition(a1), _attach_condition(a2)
    if cond1 is None or cond2 is None:
        raise PreconditionError("attachment hypotheses not established")
    if a1.cob.h2_surjective and a2.cob.h2_surjective:
        mode = "h2-iso"
    else:
        nondeg = (a1.x.free_form_nondegenerate()
                  and a2.x.free_form_nondegenerate())
        x_free = a1.x.is_torsion_free and a2.x.is_torsion_free
        k_free = (not a1.cob.k_part.abstract_group().torsion_divisors
                  and not a2.cob.k_part.abstract_group().torsion_divisors)
        if not (nondeg and (x_free or k_free)):
            raise PreconditionError(
                "neither the H2-isomorphism nor the non-degenerate "
                "hypotheses are established by the flags"
            )
        mode = "non-degenerate"
    before = algebraically_equivalent(a1.x, a2.x, bound)
    after = algebraically_equivalent(attach(a1).module, attach(a2).module,
                                     bound)
    if mode == "h2-iso":
        ok = before.equivalent == after.equivalent
    else:
        ok = before.equivalent or not after.equivalent
    return QuasiStabilityReport(mode=mode, before=before, after=after,
                                implication_ok=ok)


# ---------------------------------------------------------------------------
# generation moves and their certificates


@dataclass(frozen=True)
class Move:
    """One step of a quasi-invertible cobordism construction."""

    kind: str
    sphere_link_nonempty: bool = False
    note: str = ""


#: kind -> (one-line justification, True when the move always retains
#: invertibility; sum moves retain it only for an empty sphere link)
MOVE_RULES = {
    "restrict-to-submanifold": (
        "a codimension-0 submanifold containing the negative boundary", True),
    "connected-sum-piece": (
        "connected sum with a piece of a surgered sphere-link", False),
    "boundary-sum-piece": (
        "boundary sum with a piece of a surgered sphere-link", False),
    "one-handles": (
        "1-handles attached along a connected boundary component", True),
    "canceling-pairs": (
        "homotopically canceling 1-/2-handle pairs; upside-down gives the "
        "inverse", True),
    "slice-zero-framed-two-handles": (
        "0-framed 2-handles along a strongly slice link", True),
}


@dataclass(frozen=True)
class CertStep:
    move: Move
    rule: str
    invertible_after: bool


@dataclass(frozen=True)
class Certificate:
    steps: tuple
    quasi_invertible: bool
    invertible: bool


def quasi_invertibility_certificate(trace) -> Certificate:
    """Certify a construction trace move by move.

    The empty trace is the product cobordism, hence invertible.  Every
    recognized move keeps quasi-invertibility; invertibility survives
    unless a sum move brings in a piece of a surgered nonempty
    sphere-link.
    """
    invertible = True
    steps = []
    for move in trace:
        if move.kind not in MOVE_RULES:
            raise PreconditionError(f"unrecognized construction move {move.kind!r}")
        rule, always_invertible = MOVE_RULES[move.kind]
        if not always_invertible and move.sphere_link_nonempty:
            invertible = False
        steps.append(CertStep(move=move, rule=rule,
                              invertible_after=invertible))
    return Certificate(steps=tuple(steps), quasi_invertible=True,
                       invertible=invertible)
