"""Assembly of universal-branch integrals from per-vertex local data, and
their derivatives with respect to the branch parameter.

The input per oriented edge is either a raw difference value (head-side
primitive minus tail-side primitive on the annulus) or an annulus expansion
together with the two constants of integration. In the second case the raw
value is

    c(e) = C_head - C_tail - a_0(e) * L,

the cross-annulus jump computed in the head-side coordinate (the flip of the
stored one). Splitting c into a harmonic part plus d(gamma) produces the
per-vertex corrections gamma; the harmonic part is the cochain attached to
the integral, and the L-derivative of gamma solves the Poisson problem
laplacian(gamma') = -d_star(residue cochain).

All solves are anchored: the additive constant that a primitive is only
defined up to is fixed by making the correction vanish at the anchor vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .graphs import Cochain, DualGraph, VertexFn, d, d_star, harmonic_project, solve_poisson
from .loglaurent import AnnulusForm, cross_annulus_jump, flip_coordinate
from .padic import PadicContext, UniversalScalar


@dataclass(frozen=True)
class EdgeLocalData:
    """Per-edge input: exactly one of a raw difference value or an annulus
    expansion with its two one-sided constants of integration."""

    edge_id: str
    raw_c: UniversalScalar | None = None
    form: AnnulusForm | None = None
    c_tail: UniversalScalar | None = None
    c_head: UniversalScalar | None = None

    def __post_init__(self):
        has_raw = self.raw_c is not None
        has_form = self.form is not None
        if has_raw == has_form:
            raise PreconditionError(
                f"edge {self.edge_id!r}: supply either raw_c or an annulus form, not both"
            )
        if has_form and (self.c_tail is None or self.c_head is None):
            raise PreconditionError(
                f"edge {self.edge_id!r}: annulus data needs both constants of integration"
            )

    def raw_value(self) -> UniversalScalar:
        if self.raw_c is not None:
            return self.raw_c
        return cross_annulus_jump(flip_coordinate(self.form), self.c_head, self.c_tail)

    def residue_value(self, ctx: PadicContext) -> UniversalScalar:
        """a_0 on the stored orientation; for raw data this is minus the
        branch coefficient of the raw difference."""
        if self.form is not None:
            return self.form.residue
        lead = self.raw_c.derive_at_zero()
        return UniversalScalar.of([-lead], ctx.lambda_cap)


@dataclass(frozen=True)
class LocalColemanData:
    graph: DualGraph
    ctx: PadicContext
    edges: tuple
    anchor: object = None

    def __post_init__(self):
        ids = {e.edge_id for e in self.edges}
        expected = {e.id for e in self.graph.edges}
        if ids != expected:
            raise PreconditionError(
                f"edge data covers {sorted(map(str, ids))}, graph has {sorted(map(str, expected))}"
            )
        for e in self.edges:
            for s in (e.raw_c, e.c_tail, e.c_head):
                if s is not None and s.p != self.ctx.p:
                    raise PreconditionError(
                        f"edge {e.edge_id!r} carries prime {s.p}, context expects {self.ctx.p}"
                    )

    def _by_id(self):
        return {e.edge_id: e for e in self.edges}

    def raw_cochain(self) -> Cochain:
        by_id = self._by_id()
        return Cochain(
            self.graph, {eid: by_id[eid].raw_value() for eid in by_id}
        )

    def residue_cochain(self) -> Cochain:
        by_id = self._by_id()
        return Cochain(
            self.graph, {eid: by_id[eid].residue_value(self.ctx) for eid in by_id}
        )


@dataclass(frozen=True)
class AssembledIntegral:
    """Per-vertex corrections gamma and the harmonic difference cochain;
    the corrected vertex primitives are the chosen ones plus gamma."""

    gamma: VertexFn
    harmonic_cochain: Cochain
    anchor: object
    ctx: PadicContext


def assemble(data: LocalColemanData) -> AssembledIntegral:
    """Split the raw difference cochain as harmonic + d(gamma), anchored.

    The harmonic part is the branch-polynomial cochain attached to the
    integral; gamma corrects the arbitrary per-vertex constants of
    integration.
    """
    data.graph.require_connected()
    anchor = data.anchor if data.anchor is not None else data.graph.vertices[0]
    c = data.raw_cochain()
    harmonic, gamma = harmonic_project(c, anchor)
    return AssembledIntegral(gamma, harmonic, anchor, data.ctx)


def branch_shift(c_at_branch: Cochain, delta, n_omega: Cochain) -> Cochain:
    """Difference cochain after moving the branch by delta: c + delta * N.

    If the residue cochain is harmonic the shift stays inside the harmonic
    subspace, so the per-vertex constants do not move.
    """
    return c_at_branch + n_omega * delta


def derivative_vertex_function(residues: VertexFn, anchor=None) -> VertexFn:
    """Per-vertex branch derivative of an assembled primitive, given the
    vertex residue profile: the anchored solution of laplacian(u) = residues.

    The profile must sum to zero (residue theorem); the anchor pins down the
    additive constant the derivative is otherwise only defined up to.
    """
    total = 0
    for v in residues.graph.vertices:
        total = total + residues.values[v]
    if not _zero(total):
        raise PreconditionError("vertex residues must sum to zero")
    return solve_poisson(residues, anchor)


def _zero(x) -> bool:
    z = getattr(x, "is_zero", None)
    return z if z is not None else x == 0


def deriter_rhs(
    c_omega: Cochain,
    c_eta: Cochain,
    res_omega: Cochain,
    res_eta: Cochain,
    indices: Cochain,
    half=Fraction(1, 2),
) -> VertexFn:
    """Vertex data of the iterated-integral derivative:

        RHS(v) = (1/2) sum_{e+ = v} [c_eta(e) res_omega(e) - c_omega(e) res_eta(e)]
                 - sum_{e+ = v} indices(e)

    with all cochains evaluated antisymmetrically on the oriented edges out
    of v.
    """
    g = c_omega.graph
    out = {}
    for v in g.vertices:
        acc = 0
        for e, sign in g.incident(v):
            pair = (
                c_eta.value(e.id, sign) * res_omega.value(e.id, sign)
                - c_omega.value(e.id, sign) * res_eta.value(e.id, sign)
            )
            acc = acc + pair * half - indices.value(e.id, sign)
        out[v] = acc
    return VertexFn(g, out)


def iterated_derivative(
    c_omega: Cochain,
    c_eta: Cochain,
    res_omega: Cochain,
    res_eta: Cochain,
    indices: Cochain,
    anchor=None,
) -> VertexFn:
    """Anchored per-vertex branch derivative of a double integral.

    Callers supply the two harmonic difference cochains, the two antisymmetric
    annulus-residue cochains, and the per-edge index values. The vertex data
    must sum to zero over V; that solvability is the theorem's internal
    consistency and is enforced, everything else is the caller's contract.
    """
    rhs = deriter_rhs(c_omega, c_eta, res_omega, res_eta, indices)
    total = 0
    for v in rhs.graph.vertices:
        total = total + rhs.values[v]
    if not _zero(total):
        raise PreconditionError(
            "iterated-derivative data is inconsistent: vertex sums do not cancel"
        )
    return solve_poisson(rhs, anchor)


@dataclass(frozen=True)
class CurvatureTerm:
    """One omega (x) eta summand of a curvature form, in graph-level data."""

    c_omega: Cochain
    c_eta: Cochain
    res_omega: Cochain
    res_eta: Cochain
    indices: Cochain


def bundle_valuation(
    curvature_terms, gamma_form_residues: VertexFn, anchor=None
) -> VertexFn:
    """Per-component valuation of a section: the sum of the iterated-integral
    derivatives over the curvature terms plus the derivative coming from the
    residue-bearing form, all anchored at the same vertex.

    Holomorphic ambiguity in the choice of the underlying log function has
    zero branch derivative, so the result depends only on the supplied data.
    """
    out = derivative_vertex_function(gamma_form_residues, anchor)
    for term in curvature_terms:
        out = out + iterated_derivative(
            term.c_omega,
            term.c_eta,
            term.res_omega,
            term.res_eta,
            term.indices,
            anchor,
        )
    return out
