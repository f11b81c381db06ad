"""Constructive approximation machinery and network-size calculators.

Two halves:

* Discretization tools used by the approximation argument behind the
  branch/trunk architectures: eta-nets (uniform lattices whose cells are
  fine enough that every point of a box lies within eta of a center),
  hat-function partitions of unity over those nets, piecewise projection
  of a continuous function onto the net, and lifting of discrete vectors
  back to functions.  The projection error of an L-Lipschitz function is
  at most L*eta, and lifting is a sup-norm contraction; tests exercise
  both bounds directly.

* Calculators that evaluate the closed-form network-size scalings for
  approximating a Lipschitz operator (or a parametric family of them) to
  accuracy eps with branch/trunk products.  Three regimes are covered:
  approximating in space first and functionals second, the reverse
  order, and the multi-operator construction with a third
  parameter-approximation stage.  All O(.)-hidden factors are set to 1;
  the named constants are user-overridable.  Counts can overflow float
  range quickly, so every reported quantity carries a log10 companion
  that is always finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

LN10 = math.log(10.0)

# ---------------------------------------------------------------------------
# eta-nets and partitions of unity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaNet:
    """Uniform lattice covering a box so every point is within eta of a center.

    The lattice uses per-dimension cell width at most eta/sqrt(d), which
    places every point within eta/2 of a center.  The strict margin
    matters: hat weights vanish at distance exactly eta, and a net with
    cells of width 2*eta/sqrt(d) would leave its cell corners weightless.
    """

    bounds: tuple[tuple[float, float], ...]
    eta: float
    centers: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def n_centers(self) -> int:
        return self.centers.shape[0]


def _ceil_safe(x: float) -> int:
    # ceil with a relative guard so values a few ulps above an integer
    # (e.g. 20.000000000000004 from 2/0.1) do not jump to the next one
    return max(1, math.ceil(x - 1e-9 * max(1.0, abs(x))))


def build_eta_net(bounds: Sequence[tuple[float, float]], eta: float) -> EtaNet:
    """Lattice of cell centers covering the box within distance eta.

    For a box of widths w_i the lattice uses ceil(w_i * sqrt(d) / eta)
    cells per dimension, so a 1-d box of width 2 with eta=1 gets the two
    centers {0.5, 1.5} and collapses to a single midpoint center once
    eta reaches the box width times sqrt(d).
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    bounds_t = tuple((float(lo), float(hi)) for lo, hi in bounds)
    if not bounds_t:
        raise ValueError("bounds must have at least one dimension")
    for lo, hi in bounds_t:
        if not hi > lo:
            raise ValueError(f"empty interval ({lo}, {hi})")
    d = len(bounds_t)
    axes = []
    for lo, hi in bounds_t:
        m = _ceil_safe((hi - lo) * math.sqrt(d) / eta)
        step = (hi - lo) / m
        axes.append(lo + (np.arange(m) + 0.5) * step)
    grids = np.meshgrid(*axes, indexing="ij")
    centers = np.stack([g.ravel() for g in grids], axis=-1)
    centers.flags.writeable = False
    return EtaNet(bounds=bounds_t, eta=float(eta), centers=centers)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Normalized hat functions centered on an eta-net.

    Raw weights are max(0, 1 - |x - x_j| / eta); normalization divides by
    their sum, which is positive everywhere on the covered box.
    """

    net: EtaNet


def _raw_hats(pou: PartitionOfUnity, points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[1] != pou.net.dim:
        raise ValueError(f"points have dim {pts.shape[1]}, net has dim {pou.net.dim}")
    dist = np.linalg.norm(pts[:, None, :] - pou.net.centers[None, :, :], axis=2)
    return np.maximum(0.0, 1.0 - dist / pou.net.eta)


def pou_weights(pou: PartitionOfUnity, points: np.ndarray) -> np.ndarray:
    """Normalized weights for a batch of points, one row per point."""
    raw = _raw_hats(pou, points)
    sums = raw.sum(axis=1)
    bad = np.nonzero(sums <= 0.0)[0]
    if bad.size:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        raise ValueError(f"cover violated at x={pts[bad[0]].tolist()}")
    return raw / sums[:, None]


def pou_eval(pou: PartitionOfUnity, x: np.ndarray) -> np.ndarray:
    """Weights of one point; errors with the offending x if uncovered."""
    x_arr = np.asarray(x, dtype=np.float64)
    if x_arr.ndim != 1:
        raise ValueError("pou_eval takes a single point; use pou_weights for batches")
    return pou_weights(pou, x_arr[None, :])[0]


def project_function(
    values_at_centers: np.ndarray, pou: PartitionOfUnity, points: np.ndarray
) -> np.ndarray:
    """Evaluate sum_j v(x_j) T_j(x): the net projection of v at the points.

    The weights at any covered x are a convex combination over centers
    within eta of x, so the error for an L-Lipschitz v is at most L*eta.
    """
    vals = np.asarray(values_at_centers, dtype=np.float64)
    if vals.shape != (pou.net.n_centers,):
        raise ValueError(
            f"expected {pou.net.n_centers} center values, got shape {vals.shape}"
        )
    pts = np.asarray(points, dtype=np.float64)
    squeeze = pts.ndim == 1
    out = pou_weights(pou, pts) @ vals
    return out[0] if squeeze else out


def lift_discrete(
    z: np.ndarray,
    pou: PartitionOfUnity,
    points: np.ndarray,
    bound: Optional[float] = None,
) -> np.ndarray:
    """Lift a discrete vector to a function through the partition weights.

    Identical arithmetic to project_function; the separate name marks the
    direction (vector to function).  Because the weights are convex, the
    lift contracts the sup norm: |I[z1] - I[z2]|_inf <= max_m |z1 - z2|_m.
    An optional magnitude bound on z is enforced when given.
    """
    z_arr = np.asarray(z, dtype=np.float64)
    if bound is not None and z_arr.size and float(np.max(np.abs(z_arr))) > bound:
        raise ValueError(f"discrete values exceed declared bound {bound}")
    return project_function(z_arr, pou, points)


# ---------------------------------------------------------------------------
# size calculators
# ---------------------------------------------------------------------------


def _pow_lin(base: float, expo: float) -> float:
    # float power that saturates instead of raising on overflow
    if base == math.inf:
        return math.inf if expo > 0 else 0.0
    try:
        return base**expo
    except OverflowError:
        return math.inf


class _Q:
    """Positive scalar tracked in both linear and log10 form.

    The linear value saturates to inf on overflow; the log10 companion is
    exact arithmetic on exponents and stays finite, so astronomically
    large outputs remain reportable.
    """

    __slots__ = ("lin", "lg")

    def __init__(self, lin: float, lg: Optional[float] = None):
        lin = float(lin)
        if lg is None:
            if not (lin > 0.0 and math.isfinite(lin)):
                raise ValueError(f"cannot take log10 of {lin}")
            lg = math.log10(lin)
        if math.isnan(lin):
            lin = math.inf
        self.lin = lin
        self.lg = lg

    def __mul__(self, other: "_Q") -> "_Q":
        return _Q(self.lin * other.lin, self.lg + other.lg)

    def __truediv__(self, other: "_Q") -> "_Q":
        lin = math.inf if (self.lin == math.inf and other.lin == math.inf) else self.lin / other.lin
        return _Q(lin, self.lg - other.lg)

    def pw(self, expo: float) -> "_Q":
        return _Q(_pow_lin(self.lin, expo), self.lg * expo)


def _to_float(value) -> float:
    try:
        return float(value)
    except OverflowError:
        return math.inf


def _count(q: _Q) -> tuple:
    """Ceil a formula value to an integer count; (inf, log10) when too big."""
    if math.isfinite(q.lin) and q.lin < 1e15:
        c = _ceil_safe(q.lin)
        return c, math.log10(c)
    return math.inf, q.lg


def _as_q(count, lg: float) -> _Q:
    return _Q(_to_float(count), lg)


@dataclass(frozen=True)
class ScalingConstants:
    """Named constants of the size formulas; every O-hidden factor is 1.

    c_space multiplies the output-domain grid count, c_function the
    function-cover count, c_operator the parameter-cover count; c_delta
    and c_zeta set the sensor resolutions; gamma_u and gamma_w are the
    half-widths of the coefficient boxes the covers are counted on.
    """

    c_space: float = 1.0
    c_function: float = 1.0
    c_operator: float = 1.0
    c_delta: float = 1.0
    c_zeta: float = 1.0
    gamma_u: float = 1.0
    gamma_w: float = 1.0

    def __post_init__(self) -> None:
        for name in ("c_space", "c_function", "c_operator", "c_delta", "c_zeta", "gamma_u", "gamma_w"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


FUNCTION_FIRST = "function-first"
FUNCTIONAL_FIRST = "functional-first"


@dataclass(frozen=True)
class ScalingQuery:
    """Inputs of a size calculation: dimensions, accuracy, constants.

    d_u and d_v are the input/output function domain dimensions, d_w (for
    the multi-operator regime only) the PDE-parameter domain dimension.
    ``order`` picks which approximation stage is resolved first in the
    single-operator regime.
    """

    d_u: int
    d_v: int
    eps: float
    d_w: Optional[int] = None
    order: str = FUNCTION_FIRST
    constants: ScalingConstants = field(default_factory=ScalingConstants)

    def __post_init__(self) -> None:
        for name in ("d_u", "d_v"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.d_w is not None and self.d_w < 1:
            raise ValueError("d_w must be a positive integer")
        if not 0.0 < self.eps <= 1.0:
            raise ValueError("eps must be positive and at most 1")
        if self.order not in (FUNCTION_FIRST, FUNCTIONAL_FIRST):
            raise ValueError(f"unknown order {self.order!r}")


@dataclass(frozen=True)
class NetworkScaling:
    """Size class of one subnetwork: depth, width cap, budgets, bounds.

    Depth and the nonzero budget coincide in every construction here
    (one active unit per layer), so depth == max_nonzero throughout.
    """

    role: str
    in_dim: float
    depth: float
    width: int
    max_nonzero: float
    log10_max_nonzero: float
    weight_bound: float
    log10_weight_bound: float
    output_bound: float = 1.0


@dataclass(frozen=True)
class SizeReport:
    """Everything a size calculation produced, with log10 companions.

    Counts are exact integers while they fit comfortably in a float and
    inf beyond that; the log10 fields stay finite either way.  The three
    n_params terms satisfy n_params_total == sum of terms exactly as
    stored.
    """

    regime: str
    eps: float
    d_u: int
    d_v: int
    d_w: Optional[int]
    constants: ScalingConstants
    delta: float
    log10_delta: float
    zeta: Optional[float]
    n_cu: float
    log10_n_cu: float
    n_cw: Optional[float]
    space_count: float
    log10_space_count: float
    function_count: float
    log10_function_count: float
    operator_count: Optional[float]
    log10_operator_count: Optional[float]
    space_net: NetworkScaling
    function_net: NetworkScaling
    operator_net: Optional[NetworkScaling]
    blowup_side: str
    n_params_space: float
    n_params_function: float
    n_params_operator: Optional[float]
    n_params_total: float
    log10_n_params: float


def covering_count(gamma: float, d: int, radius_value: float) -> int:
    """Lattice count of a radius-cover of the box [-gamma, gamma]^d."""
    n, _ = _cover(gamma, d, _Q(radius_value))
    if n == math.inf:
        raise OverflowError("cover count exceeds integer range")
    return n


def _cover(gamma: float, d: int, radius: _Q) -> tuple:
    per_dim_q = _Q(gamma * math.sqrt(d)) / radius
    per_dim, per_dim_lg = _count(per_dim_q)
    lg = per_dim_lg * d
    if per_dim == math.inf or lg >= 16:
        return math.inf, lg
    n = per_dim**d
    return (n, lg) if n < 1e15 else (math.inf, lg)


def _ln_of(count, lg: float) -> float:
    # natural log of a possibly-huge count, recovered from its log10
    if count != math.inf and count < 1e15:
        return math.log(count)
    return lg * LN10


def _k_budget(lead: float, lg_lead: float, lnsum: float) -> tuple:
    """Depth/nonzero budget lead^2 * lnsum, ceiled, with log10 companion."""
    lin = _pow_lin(lead, 2) * lnsum
    if math.isfinite(lin):
        v = float(_ceil_safe(lin))
        return v, math.log10(v)
    return math.inf, 2 * lg_lead + math.log10(lnsum)


def _net(role: str, in_dim: float, k: tuple, kappa: _Q) -> NetworkScaling:
    return NetworkScaling(
        role=role,
        in_dim=in_dim,
        depth=k[0],
        width=1,
        max_nonzero=k[0],
        log10_max_nonzero=k[1],
        weight_bound=kappa.lin,
        log10_weight_bound=kappa.lg,
    )


def _check_eps(eps: float) -> None:
    if eps >= 1.0:
        raise ValueError("formulas need eps < 1 (log(1/eps) must be positive)")


def _space_net_plain(d_v: int, eps: float) -> NetworkScaling:
    k1 = _k_budget(float(d_v), math.log10(d_v), math.log(d_v) + math.log(1.0 / eps))
    kappa = _Q(float(d_v)).pw(d_v / 2 + 1) * _Q(eps).pw(-(d_v + 1))
    return _net("space", d_v, k1, kappa)


def scaling_single(q: ScalingQuery) -> SizeReport:
    """Network sizes for one Lipschitz operator at accuracy eps.

    ``function-first`` resolves the output-space grid first and pushes
    the heavy growth into the function-approximation class; swapping the
    order (``functional-first``) moves the blow-up to the space side and
    shrinks the function cover to one independent of d_v.
    """
    if q.d_w is not None:
        raise ValueError("scaling_single takes a query without d_w")
    _check_eps(q.eps)
    cs = q.constants
    eps_q = _Q(q.eps)
    root_dv = _Q(cs.c_space * math.sqrt(q.d_v))

    if q.order == FUNCTION_FIRST:
        # space grid: N = 2 C sqrt(d_v) / eps
        n_q = _Q(2.0) * root_dv / eps_q
        space_count, lg_space = _count(n_q)
        space_net = _space_net_plain(q.d_v, q.eps)
        # sensor resolution and function cover
        bracket = _Q(2.0).pw(q.d_v + 1) * root_dv.pw(q.d_v)
        delta_q = _Q(cs.c_delta) * eps_q.pw(1 + q.d_v) / bracket
        n_cu, lg_ncu = _cover(cs.gamma_u, q.d_u, delta_q)
        ncu_q = _as_q(n_cu, lg_ncu)
        h_q = bracket * _Q(cs.c_function) * ncu_q.pw(0.5) * eps_q.pw(-(q.d_v + 1))
        function_count, lg_function = _count(h_q)
        ncu_f = _to_float(n_cu)
        k2 = _k_budget(
            ncu_f,
            lg_ncu,
            _ln_of(n_cu, lg_ncu) + (q.d_v + 1) * math.log(1.0 / q.eps) + bracket.lg * LN10,
        )
        kappa2 = (
            ncu_q.pw(ncu_f / 2 + 1)
            * eps_q.pw(-(q.d_v + 1) * (ncu_f + 1))
            * bracket.pw(ncu_f + 1)
        )
        function_net = _net("function", ncu_f, k2, kappa2)
        blowup_side = "function"
        delta, lg_delta = delta_q.lin, delta_q.lg
    else:
        # functional-first: cover the function inputs with delta = c_delta eps / 2
        delta_q = _Q(cs.c_delta * q.eps / 2.0)
        n_cu, lg_ncu = _cover(cs.gamma_u, q.d_u, delta_q)
        ncu_q = _as_q(n_cu, lg_ncu)
        h_q = _Q(2.0 * cs.c_function) * ncu_q.pw(0.5) / eps_q
        function_count, lg_function = _count(h_q)
        ncu_f = _to_float(n_cu)
        k2 = _k_budget(ncu_f, lg_ncu, _ln_of(n_cu, lg_ncu) + math.log(1.0 / q.eps))
        kappa2 = ncu_q.pw(ncu_f / 2 + 1) * eps_q.pw(-(ncu_f + 1))
        function_net = _net("function", ncu_f, k2, kappa2)
        # the space side now absorbs the eps^-(n_cu+1) growth
        fn_bracket = _Q(2.0).pw(ncu_f + 1) * (_Q(cs.c_function) * ncu_q.pw(0.5)).pw(ncu_f)
        n_q = fn_bracket * root_dv * eps_q.pw(-(1 + ncu_f))
        space_count, lg_space = _count(n_q)
        k1 = _k_budget(
            float(q.d_v),
            math.log10(q.d_v),
            math.log(q.d_v)
            + (ncu_f + 1) * math.log(1.0 / q.eps)
            + fn_bracket.lg * LN10,
        )
        kappa1 = (
            _Q(float(q.d_v)).pw(q.d_v / 2 + 1)
            * eps_q.pw(-(q.d_v + 1) * (ncu_f + 1))
            * fn_bracket.pw(-1.0)
        )
        space_net = _net("space", q.d_v, k1, kappa1)
        blowup_side = "space"
        delta, lg_delta = delta_q.lin, delta_q.lg

    term_space, lg_term_space = _param_term(
        space_count, lg_space, q.d_v, math.log10(q.d_v), space_net
    )
    term_function, lg_term_function = _param_term(
        function_count, lg_function, n_cu, lg_ncu, function_net
    )
    total = term_space + term_function
    lg_total = _log10_sum([lg_term_space, lg_term_function])
    return SizeReport(
        regime=f"single-{q.order}",
        eps=q.eps,
        d_u=q.d_u,
        d_v=q.d_v,
        d_w=None,
        constants=cs,
        delta=delta,
        log10_delta=lg_delta,
        zeta=None,
        n_cu=n_cu,
        log10_n_cu=lg_ncu,
        n_cw=None,
        space_count=space_count,
        log10_space_count=lg_space,
        function_count=function_count,
        log10_function_count=lg_function,
        operator_count=None,
        log10_operator_count=None,
        space_net=space_net,
        function_net=function_net,
        operator_net=None,
        blowup_side=blowup_side,
        n_params_space=term_space,
        n_params_function=term_function,
        n_params_operator=None,
        n_params_total=total,
        log10_n_params=lg_total,
    )


def scaling_multi(q: ScalingQuery) -> SizeReport:
    """Network sizes for a parametric family of operators at accuracy eps.

    Adds a third approximation stage over the PDE-parameter inputs; the
    parameter cover size n_cw then compounds into every later stage,
    which is why each count picks up powers indexed by n_cw.
    """
    if q.d_w is None:
        raise ValueError("scaling_multi needs d_w")
    _check_eps(q.eps)
    cs = q.constants
    eps_q = _Q(q.eps)
    root_dv = _Q(cs.c_space * math.sqrt(q.d_v))

    zeta = cs.c_zeta * q.eps
    n_cw, lg_ncw = _cover(cs.gamma_w, q.d_w, _Q(zeta))
    ncw_q = _as_q(n_cw, lg_ncw)
    ncw_f = _to_float(n_cw)

    # operator stage
    p_q = _Q(2.0 * cs.c_operator) * ncw_q.pw(0.5) / eps_q
    operator_count, lg_operator = _count(p_q)
    k3 = _k_budget(ncw_f, lg_ncw, _ln_of(n_cw, lg_ncw) + math.log(1.0 / q.eps))
    kappa3 = ncw_q.pw(ncw_f / 2 + 1) * eps_q.pw(-(ncw_f + 1))
    operator_net = _net("operator", ncw_f, k3, kappa3)

    # space stage
    op_bracket = _Q(2.0).pw(ncw_f + 1) * (_Q(cs.c_operator) * ncw_q.pw(0.5)).pw(ncw_f)
    n_q = _Q(2.0).pw(ncw_f + 2) * root_dv * (_Q(cs.c_operator) * ncw_q.pw(0.5)).pw(ncw_f) * eps_q.pw(
        -(ncw_f + 1)
    )
    space_count, lg_space = _count(n_q)
    k1 = _k_budget(
        float(q.d_v),
        math.log10(q.d_v),
        math.log(q.d_v)
        + (ncw_f + 1) * math.log(1.0 / q.eps)
        + op_bracket.lg * LN10,
    )
    kappa1 = (
        _Q(float(q.d_v)).pw(q.d_v / 2 + 1)
        * eps_q.pw(-(q.d_v + 1) * (ncw_f + 1))
        * op_bracket.pw(q.d_v + 1)
    )
    space_net = _net("space", q.d_v, k1, kappa1)

    # function stage
    sp_bracket = _Q(2.0).pw(q.d_v + 1) * root_dv.pw(q.d_v)
    delta_q = (
        _Q(cs.c_delta)
        * eps_q.pw((1 + q.d_v) * (1 + ncw_f))
        / (_Q(2.0).pw(q.d_v + ncw_f + 2) * root_dv.pw(q.d_v) * (_Q(cs.c_operator) * ncw_q.pw(0.5)).pw(ncw_f))
    )
    n_cu, lg_ncu = _cover(cs.gamma_u, q.d_u, delta_q)
    ncu_q = _as_q(n_cu, lg_ncu)
    h_q = (
        _Q(2.0).pw((q.d_v + 1) * (ncw_f + 2))
        * _Q(cs.c_function)
        * ncu_q.pw(0.5)
        * root_dv.pw(q.d_v)
        * (_Q(cs.c_operator) * ncw_q.pw(0.5)).pw(ncw_f * (q.d_v + 1))
        * eps_q.pw(-(q.d_v + 1) * (1 + ncw_f))
    )
    function_count, lg_function = _count(h_q)
    ncu_f = _to_float(n_cu)
    k2 = _k_budget(
        ncu_f,
        lg_ncu,
        _ln_of(n_cu, lg_ncu)
        + (q.d_v + 1) * (ncw_f + 1) * math.log(1.0 / q.eps)
        + sp_bracket.lg * LN10
        + (q.d_v + 1) * op_bracket.lg * LN10,
    )
    kappa2 = (
        ncu_q.pw(ncu_f / 2 + 1)
        * eps_q.pw(-(q.d_v + 1) * (ncu_f + 1) * (ncw_f + 1))
        * sp_bracket.pw(ncu_f + 1)
        * sp_bracket.pw((q.d_v + 1) * (ncu_f + 1))
    )
    function_net = _net("function", ncu_f, k2, kappa2)

    term_operator, lg_term_operator = _param_term(
        operator_count, lg_operator, n_cw, lg_ncw, operator_net
    )
    term_space, lg_term_space = _param_term(
        space_count, lg_space, q.d_v, math.log10(q.d_v), space_net
    )
    term_function, lg_term_function = _param_term(
        function_count, lg_function, n_cu, lg_ncu, function_net
    )
    total = term_operator + term_space + term_function
    lg_total = _log10_sum([lg_term_operator, lg_term_space, lg_term_function])
    return SizeReport(
        regime="multi",
        eps=q.eps,
        d_u=q.d_u,
        d_v=q.d_v,
        d_w=q.d_w,
        constants=cs,
        delta=delta_q.lin,
        log10_delta=delta_q.lg,
        zeta=zeta,
        n_cu=n_cu,
        log10_n_cu=lg_ncu,
        n_cw=n_cw,
        space_count=space_count,
        log10_space_count=lg_space,
        function_count=function_count,
        log10_function_count=lg_function,
        operator_count=operator_count,
        log10_operator_count=lg_operator,
        space_net=space_net,
        function_net=function_net,
        operator_net=operator_net,
        blowup_side="function",
        n_params_space=term_space,
        n_params_function=term_function,
        n_params_operator=term_operator,
        n_params_total=total,
        log10_n_params=lg_total,
    )


def _param_term(
    count, lg_count: float, exponent, lg_exponent: float, netsc: NetworkScaling
) -> tuple:
    """One n_params term: count^exponent times the nonzero budget K.

    The exponent is itself a cover count and may have overflowed; its
    magnitude is then recovered from the log10 companion so the term's
    log10 stays meaningful.
    """
    exp_f = _to_float(exponent)
    lin = _pow_lin(_to_float(count), exp_f) * netsc.max_nonzero
    if math.isnan(lin):
        lin = math.inf
    if not math.isfinite(exp_f):
        exp_f = _pow_lin(10.0, lg_exponent)
    return lin, exp_f * lg_count + netsc.log10_max_nonzero


def _log10_sum(lgs: Sequence[float]) -> float:
    top = max(lgs)
    return top + math.log10(sum(10.0 ** (lg - top) for lg in lgs))


SINGLE_FUNCTION_FIRST = "single-function-first"
SINGLE_FUNCTIONAL_FIRST = "single-functional-first"
MULTI = "multi"


def epsilon_of_nparams(
    n_params: float,
    regime: str,
    d_u: Optional[int] = None,
    d_v: Optional[int] = None,
    d_w: Optional[int] = None,
) -> float:
    """Invert the size laws: accuracy as a function of total parameters.

    single-function-first:    eps ~ (log N / log log N)^(-1/((1+d_v) d_u))
    single-functional-first:  eps ~ (log N / log log N)^(-1/d_u)
    multi:                    eps ~ (log log N / log log log N)^(-1/d_w)

    Raises when any iterated log needed by the chosen regime fails to be
    positive ("asymptotic regime not reached").
    """
    if n_params <= 0:
        raise ValueError("n_params must be positive")
    l1 = math.log(n_params)
    if l1 <= 0:
        raise ValueError("asymptotic regime not reached: log(n_params) <= 0")
    l2 = math.log(l1)
    if regime == SINGLE_FUNCTION_FIRST:
        if d_u is None or d_v is None:
            raise ValueError("single-function-first needs d_u and d_v")
        if l2 <= 0:
            raise ValueError("asymptotic regime not reached: log log(n_params) <= 0")
        return (l1 / l2) ** (-1.0 / ((1 + d_v) * d_u))
    if regime == SINGLE_FUNCTIONAL_FIRST:
        if d_u is None:
            raise ValueError("single-functional-first needs d_u")
        if l2 <= 0:
            raise ValueError("asymptotic regime not reached: log log(n_params) <= 0")
        return (l1 / l2) ** (-1.0 / d_u)
    if regime == MULTI:
        if d_w is None:
            raise ValueError("multi needs d_w")
        if l2 <= 0:
            raise ValueError("asymptotic regime not reached: log log(n_params) <= 0")
        l3 = math.log(l2)
        if l3 <= 0:
            raise ValueError("asymptotic regime not reached: log log log(n_params) <= 0")
        return (l2 / l3) ** (-1.0 / d_w)
    raise ValueError(f"unknown regime {regime!r}")
