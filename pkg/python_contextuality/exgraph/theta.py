from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import linalg

from .errors import ConvergenceError, InvalidArgumentError, SizeLimitError
from .graph import ExclusivityGraph
from .independence import DEFAULT_INDEPENDENCE_CAP, independence_number

logger = logging.getLogger(__name__)

DEFAULT_SDP_CAP = 100
DEFAULT_SDP_FEASIBILITY_TOL = 1e-8
DEFAULT_SDP_GAP_TOL = 1e-7
DEFAULT_SDP_MAX_ITERATIONS = 100

# Fraction of the distance to the PSD boundary taken by each step.
_STEP_FRACTION = 0.95


@dataclass(frozen=True)
class GraphBounds:
    """Classical (alpha) and quantum (theta) bounds of an exclusivity graph.

    ``alpha`` is None only when the graph is above the exact independence cap.
    ``primal`` and ``dual`` bracket theta; ``theta_certificate`` is the optimal
    primal matrix X (PSD, unit trace, zero on every edge).
    """

    alpha: Optional[int]
    theta: float
    theta_certificate: np.ndarray = dataclass_field(compare=False, repr=False)
    primal: float = 0.0
    dual: float = 0.0
    iterations: int = 0


def odd_cycle_theta_closed_form(n: int, complemented: bool = False) -> float:
    """Lovasz number of the odd cycle C_n, or of its complement."""
    if n < 5 or n % 2 == 0:
        raise InvalidArgumentError(f"Closed form needs an odd n >= 5, got {n}")
    c = math.cos(math.pi / n)
    if complemented:
        return (1.0 + c) / c
    return n * c / (1.0 + c)


def theta_product_identity(n: int) -> float:
    """theta(C_n) * theta(complement of C_n); equals n for vertex-transitive C_n."""
    return odd_cycle_theta_closed_form(n) * odd_cycle_theta_closed_form(
        n, complemented=True
    )


def _schur_solver(m: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    try:
        factor = linalg.cho_factor(m)
    except linalg.LinAlgError:
        # Near the optimum M can lose definiteness to rounding; fall back to LU.
        lu = linalg.lu_factor(m)
        return lambda rhs: linalg.lu_solve(lu, rhs)
    return lambda rhs: linalg.cho_solve(factor, rhs)


class _LovaszSDP:
    """max <J, X>  s.t.  tr X = 1,  X_ij = 0 on edges,  X PSD.

    Solved in the standard minimization form with C = -J. Constraint 0 is the
    trace; constraint k > 0 is <E_pq + E_qp, X> = 0 for the k-th edge (p, q).
    """

    def __init__(
        self,
        g: ExclusivityGraph,
        feasibility_tol: float,
        gap_tol: float,
        max_iterations: int,
    ) -> None:
        self.n = g.n
        edges = np.array(g.sorted_edges(), dtype=int).reshape(-1, 2)
        self._p = edges[:, 0]
        self._q = edges[:, 1]
        self.m = 1 + len(edges)
        self._b = np.zeros(self.m)
        self._b[0] = 1.0
        self._c = -np.ones((self.n, self.n))
        self.feasibility_tol = feasibility_tol
        self.gap_tol = gap_tol
        self.max_iterations = max_iterations

    # linear operators ------------------------------------------------------
    def _apply(self, v: np.ndarray) -> np.ndarray:
        out = np.empty(self.m)
        out[0] = np.trace(v)
        out[1:] = v[self._p, self._q] + v[self._q, self._p]
        return out

    def _adjoint(self, y: np.ndarray) -> np.ndarray:
        s = y[0] * np.eye(self.n)
        s[self._p, self._q] += y[1:]
        s[self._q, self._p] += y[1:]
        return s

    def _schur(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        """M_kl = tr(A_k X A_l W) with W = Z^-1 (HKM Schur complement)."""
        p, q = self._p, self._q
        m = np.empty((self.m, self.m))
        xw = x @ w
        m[0, 0] = np.trace(xw)
        if self.m > 1:
            wx = xw.T
            border = wx[q, p] + wx[p, q]
            m[0, 1:] = border
            m[1:, 0] = border
            m[1:, 1:] = (
                x[np.ix_(q, p)] * w[np.ix_(p, q)]
                + x[np.ix_(q, q)] * w[np.ix_(p, p)]
                + x[np.ix_(p, p)] * w[np.ix_(q, q)]
                + x[np.ix_(p, q)] * w[np.ix_(q, p)]
            )
        return 0.5 * (m + m.T)

    # step helpers ----------------------------------------------------------
    def _inverse_factor(self, s: np.ndarray) -> np.ndarray:
        lower = linalg.cholesky(s, lower=True)
        return linalg.solve_triangular(lower, np.eye(self.n), lower=True)

    def _max_step(self, s: np.ndarray, ds: np.ndarray) -> float:
        """Largest a with S + a dS still PSD (inf when dS keeps S PSD)."""
        inv = self._inverse_factor(s)
        t = inv @ ds @ inv.T
        smallest = float(linalg.eigvalsh(0.5 * (t + t.T))[0])
        return math.inf if smallest >= 0.0 else -1.0 / smallest

    def _direction(
        self,
        x: np.ndarray,
        z_inv: np.ndarray,
        rp: np.ndarray,
        rd: np.ndarray,
        solve_schur: Callable[[np.ndarray], np.ndarray],
        target_mu: float,
        corrector: Optional[np.ndarray],
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        r = target_mu * z_inv - x
        if corrector is not None:
            r = r - corrector
        rhs = rp - self._apply(r) + self._apply(x @ rd @ z_inv)
        dy = solve_schur(rhs)
        dz = rd - self._adjoint(dy)
        dx = r - x @ dz @ z_inv
        return 0.5 * (dx + dx.T), dy, dz

    # main loop -------------------------------------------------------------
    def solve(self) -> Tuple[float, np.ndarray, float, float, int]:
        n = self.n
        # Strictly feasible start: X = I/n meets every constraint and
        # Z = (n + 1) I - J is positive definite.
        x = np.eye(n) / n
        y = np.zeros(self.m)
        y[0] = -(n + 1.0)
        z = self._c - self._adjoint(y)
        primal = dual = float("nan")

        for iteration in range(1, self.max_iterations + 1):
            rp = self._b - self._apply(x)
            rd = self._c - self._adjoint(y) - z
            primal = float(np.sum(x))
            dual = float(-y[0])
            gap = float(np.sum(x * z))
            p_inf = float(np.linalg.norm(rp))
            d_inf = float(np.linalg.norm(rd)) / (1.0 + n)
            logger.debug(
                "iter %d: primal %.12g dual %.12g gap %.3e pinf %.1e dinf %.1e",
                iteration,
                primal,
                dual,
                gap,
                p_inf,
                d_inf,
            )
            if (
                abs(dual - primal) <= self.gap_tol
                and gap <= self.gap_tol
                and p_inf <= self.feasibility_tol
                and d_inf <= self.feasibility_tol
            ):
                return 0.5 * (primal + dual), x, primal, dual, iteration

            mu = gap / n
            try:
                inv = self._inverse_factor(z)
                z_inv = inv.T @ inv
                solve_schur = _schur_solver(self._schur(x, z_inv))
                dxa, _dya, dza = self._direction(
                    x, z_inv, rp, rd, solve_schur, 0.0, None
                )
                alpha_p = min(1.0, self._max_step(x, dxa))
                alpha_d = min(1.0, self._max_step(z, dza))
                mu_aff = float(np.sum((x + alpha_p * dxa) * (z + alpha_d * dza))) / n
                sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0.0 else 0.0
                dx, dy, dz = self._direction(
                    x, z_inv, rp, rd, solve_schur, sigma * mu, dxa @ dza @ z_inv
                )
                alpha_p = min(1.0, _STEP_FRACTION * self._max_step(x, dx))
                alpha_d = min(1.0, _STEP_FRACTION * self._max_step(z, dz))
            except linalg.LinAlgError:
                logger.warning(
                    "Lovasz SDP lost positive definiteness at iteration %d", iteration
                )
                raise ConvergenceError(primal, dual, iteration)

            x = x + alpha_p * dx
            x = 0.5 * (x + x.T)
            y = y + alpha_d * dy
            z = z + alpha_d * dz
            z = 0.5 * (z + z.T)

        raise ConvergenceError(primal, dual, self.max_iterations)


def lovasz_theta(
    g: ExclusivityGraph,
    tol: float = DEFAULT_SDP_GAP_TOL,
    feasibility_tol: float = DEFAULT_SDP_FEASIBILITY_TOL,
    max_iterations: int = DEFAULT_SDP_MAX_ITERATIONS,
    cap: int = DEFAULT_SDP_CAP,
    independence_cap: int = DEFAULT_INDEPENDENCE_CAP,
) -> GraphBounds:
    """Lovasz number of ``g`` (its quantum bound) together with alpha."""
    if tol <= 0.0 or feasibility_tol <= 0.0:
        raise InvalidArgumentError("SDP tolerances must be positive")
    if g.n > cap:
        raise SizeLimitError("lovasz_theta", g.n, cap)
    sdp = _LovaszSDP(g, feasibility_tol, tol, max_iterations)
    theta, certificate, primal, dual, iterations = sdp.solve()
    logger.info(
        "theta=%.10f on %d vertices / %d edges in %d iterations",
        theta,
        g.n,
        g.edge_count,
        iterations,
    )
    alpha = None
    if g.n <= independence_cap:
        alpha = independence_number(g, independence_cap)
    return GraphBounds(
        alpha=alpha,
        theta=theta,
        theta_certificate=certificate,
        primal=primal,
        dual=dual,
        iterations=iterations,
    )


__all__ = [
    "DEFAULT_SDP_CAP",
    "DEFAULT_SDP_FEASIBILITY_TOL",
    "DEFAULT_SDP_GAP_TOL",
    "DEFAULT_SDP_MAX_ITERATIONS",
    "GraphBounds",
    "lovasz_theta",
    "odd_cycle_theta_closed_form",
    "theta_product_identity",
]
