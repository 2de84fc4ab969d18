"""Superconvergent postprocessing, L2 errors and convergence tables."""

from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import scipy.linalg

from .approximation import ElementBasis
from .discretization import Discretization
from .errors import SingularPostprocess
from .global_system import SolutionField
from .problem import ExactSolution

CSV_COLUMNS = ["p", "n", "err_u", "order_u", "err_ustar", "order_ustar"]


@dataclass(eq=False)
class PostprocessedField:
    """Element-wise u* of degree p+1; NaN rows on void elements."""
    degree: int
    u: np.ndarray
    time: float = 0.0


def superconverge(disc: Discretization, field: SolutionField, viscosity: float) -> PostprocessedField:
    """Local P_{p+1} reconstruction u* with ν∇u* ≈ −q and ∫u* = ∫u.

    Each element solves the bordered system [[S, m], [mᵀ, 0]] [u*; λ] =
    [b; ∫u] with S_ij = ∫ν∇N*_i·∇N*_j, b_i = −∫q·∇N*_i, m_i = ∫N*_i.
    """
    basis = disc.basis(disc.p + 1)
    dim = basis.dim
    u_star = np.full((disc.mesh.n_elements, dim), np.nan)
    for element in disc.active_elements:
        element = int(element)
        rule = disc.rules(element).volume
        w = rule.weights
        N, G = disc.basis_at(element, rule.points, basis)
        u_h = disc.evaluate(element, field.u[element], rule.points)
        q_h = disc.values_at(element, rule.points) @ field.q[element].T

        bordered = np.zeros((dim + 1, dim + 1))
        bordered[:dim, :dim] = viscosity * np.einsum("q,qik,qjk->ij", w, G, G)
        mean = N.T @ w
        bordered[:dim, dim] = mean
        bordered[dim, :dim] = mean
        rhs = np.zeros(dim + 1)
        rhs[:dim] = -np.einsum("q,qk,qik->i", w, q_h, G)
        rhs[dim] = w @ u_h
        try:
            solution = scipy.linalg.solve(bordered, rhs, check_finite=True)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SingularPostprocess(f"element {element}: {e}") from e
        u_star[element] = solution[:dim]
    return PostprocessedField(degree=disc.p + 1, u=u_star, time=field.time)


# ============================================================================
# Errors
# ============================================================================

def l2_error(
    disc: Discretization,
    coefficients: np.ndarray,
    exact: ExactSolution,
    t: float = 0.0,
    basis: ElementBasis | None = None,
) -> float:
    """‖u_h − u‖ over Ω with rules of degree 2(p+1)+2 on full and cut elements."""
    total = 0.0
    for element in disc.active_elements:
        element = int(element)
        rule = disc.rules(element, disc.error_degree).volume
        diff = disc.evaluate(element, coefficients[element], rule.points, basis) - exact.value(rule.points, t)
        total += rule.integrate(diff**2)
    return float(np.sqrt(total))


def solution_errors(
    disc: Discretization,
    field: SolutionField,
    post: PostprocessedField | None,
    exact: ExactSolution,
) -> tuple[float, float | None]:
    err_u = l2_error(disc, field.u, exact, field.time)
    if post is None:
        return err_u, None
    return err_u, l2_error(disc, post.u, exact, post.time, disc.basis(post.degree))


# ============================================================================
# Convergence tables
# ============================================================================

@dataclass
class ConvergenceRow:
    """One (p, n) entry of a sweep; failed rows keep errors as None."""
    p: int
    n: int
    err_u: float | None = None
    err_ustar: float | None = None
    order_u: float | None = None
    order_ustar: float | None = None
    status: str = "ok"
    message: str = ""
    elapsed: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ConvergenceRow":
        return cls(**data)


def _valid(value: float | None) -> bool:
    return value is not None and np.isfinite(value) and value > 0.0


def _order(e1: float, e2: float, n1: int, n2: int) -> float:
    return float(np.log(e1 / e2) / np.log(n2 / n1))


def convergence_orders(rows: list[ConvergenceRow]) -> list[ConvergenceRow]:
    """Fill observed orders between consecutive valid rows of the same p.

    order = log(e₁/e₂) / log(n₂/n₁). A row whose predecessor (same p, smaller
    n) is missing or failed gets no order.
    """
    for attr, order_attr in (("err_u", "order_u"), ("err_ustar", "order_ustar")):
        previous: dict[int, ConvergenceRow] = {}
        for row in sorted(rows, key=lambda r: (r.p, r.n)):
            setattr(row, order_attr, None)
            value = getattr(row, attr)
            prior = previous.get(row.p)
            if row.ok and _valid(value) and prior is not None and _valid(getattr(prior, attr)):
                setattr(row, order_attr, _order(getattr(prior, attr), value, prior.n, row.n))
            previous[row.p] = row if row.ok and _valid(value) else None
    return rows


@dataclass
class ConvergenceReport:
    """A finished sweep for one case and flux."""
    case: str
    flux: str
    interface_bc: str
    rows: list[ConvergenceRow] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(not row.ok for row in self.rows)

    def to_frame(self) -> pd.DataFrame:
        records = [{column: getattr(row, column) for column in CSV_COLUMNS} for row in self.rows]
        return pd.DataFrame.from_records(records, columns=CSV_COLUMNS)

    def to_csv(self, path: Path | None = None) -> str:
        """Write p,n,err_u,order_u,err_ustar,order_ustar; missing values as '-'."""
        text = self.to_frame().to_csv(index=False, float_format="%.6e", na_rep="-")
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "flux": self.flux,
            "interface_bc": self.interface_bc,
            "rows": [row.to_dict() for row in self.rows],
        }
